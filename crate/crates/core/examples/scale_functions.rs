//! Scale functions W_q, Z_q and Z_q(x, θ) for both models, with the
//! quadrature routes alongside the closed forms.

use parisian_hybrid::scale_functions::ScaleEvaluator;
use parisian_hybrid::{LevyModel, QuadratureSpec};

fn main() -> parisian_hybrid::Result<()> {
    let quad = QuadratureSpec::default();
    for model in [LevyModel::brownian(1.0, 1.0)?, LevyModel::cramer_lundberg(2.0, 1.0, 1.0)?] {
        let e = ScaleEvaluator::new(model, 0.5)?;
        let theta = e.phi() + 1.0;
        println!("{model:?}: Phi_0.5 = {:.10}", e.phi());
        println!("     x          W          Z     Z(x,θ)  Z(x,θ) by quadrature");
        for x in [0.0, 0.5, 1.0, 2.0, 4.0] {
            println!(
                "{x:6.2} {:10.6} {:10.6} {:10.6} {:10.6}",
                e.w(x),
                e.z(x),
                e.z_theta(x, theta)?,
                e.z_theta_by_quadrature(x, theta, &quad)?
            );
        }
        println!();
    }
    Ok(())
}
