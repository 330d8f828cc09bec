//! Closed forms for functionals of the surplus at the first negative
//! inspection T, checked against simulation.

use parisian_hybrid::simulator::{self, SimConfig, T0Request};
use parisian_hybrid::{HybridScheme, LevyModel};

fn main() -> parisian_hybrid::Result<()> {
    let (p, q, x, b, z) = (1.0, 0.5, 1.0, 2.0, 1.0);
    for model in [LevyModel::brownian(1.0, 1.0)?, LevyModel::cramer_lundberg(2.0, 1.0, 1.0)?] {
        let h = HybridScheme::new(model, 1.0, 1.0)?;
        let (lambda0, lambda_q) = h.lemma_lambda_at_t0(q, x, b)?;
        let cfg = SimConfig::new(model, x).upper(b).paths(200_000);
        let mc = simulator::simulate_t0_functionals(&cfg, &T0Request { p, z, ..T0Request::new(q) })?;
        println!("{model:?}");
        for (name, formula, est) in [
            ("E[e^(-qT) W_p(X_T + z)]", h.lemma_w_at_t0(p, q, x, Some(b), z)?, mc.w_functional),
            ("E[e^(-qT) Λ(X_T, r)]", lambda0, mc.lambda_functional),
            ("E[e^(-qT) Λ^(q)(X_T, r)]", lambda_q, mc.lambda_q_functional),
        ] {
            println!("  {name:26} {formula:.6}  mc {:.6} ± {:.6}", est.mean, est.std_error);
        }
    }
    Ok(())
}
