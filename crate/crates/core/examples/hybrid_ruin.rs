//! Ruin probability and ruin Laplace transform under hybrid observation,
//! next to the classical Parisian ruin probability with the same grace period.

use parisian_hybrid::{HybridScheme, LevyModel};

fn main() -> parisian_hybrid::Result<()> {
    let model = LevyModel::cramer_lundberg(2.0, 1.0, 1.0)?;
    println!("  r   λ      x   P(ruin)    E[e^(-q(κ-r))], q=0.5   classical Parisian");
    for r in [0.5, 1.0, 2.0] {
        for lambda in [0.5, 1.0, 4.0] {
            let h = HybridScheme::new(model, r, lambda)?;
            for x in [0.0, 2.0] {
                println!(
                    "{r:3} {lambda:3} {x:6} {:9.6} {:12.6} {:22.6}",
                    h.ruin_probability(x)?,
                    h.ruin_laplace(0.5, x)?,
                    h.classical_parisian_prob(x)?
                );
            }
        }
    }
    Ok(())
}
