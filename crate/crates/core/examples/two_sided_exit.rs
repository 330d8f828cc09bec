//! Two-sided exit below an upper barrier b: hybrid ruin-before-exit and
//! exit-before-ruin transforms, the mixed (Parisian plus inspection) exit
//! and the Poisson-inspection exit.

use parisian_hybrid::{HybridScheme, LevyModel};

fn main() -> parisian_hybrid::Result<()> {
    let h = HybridScheme::new(LevyModel::brownian(1.0, 1.0)?, 1.0, 1.0)?;
    let b = 2.0;
    for q in [0.0, 0.5] {
        println!("q = {q}");
        println!("    x   ruin first   exit first   mixed exit  Poisson exit");
        for x in [0.0, 0.5, 1.0, 1.5, 2.0] {
            println!(
                "{x:5} {:12.8} {:12.8} {:12.8} {:12.8}",
                h.ruin_before_exit_laplace(q, x, b)?,
                h.exit_before_ruin_laplace(q, x, b)?,
                h.mixed_exit_laplace(q, x, b)?,
                h.poisson_exit_laplace(q, x, b)?
            );
        }
    }
    Ok(())
}
