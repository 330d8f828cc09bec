//! Discounted density of the deficit at the first inspection that finds
//! the surplus negative, with and without an upper barrier.

use parisian_hybrid::{HybridScheme, LevyModel};

fn main() -> parisian_hybrid::Result<()> {
    let (q, x) = (0.1, 1.0);
    for model in [LevyModel::brownian(1.0, 1.0)?, LevyModel::cramer_lundberg(2.0, 1.0, 1.0)?] {
        let h = HybridScheme::new(model, 1.0, 1.0)?;
        println!("{model:?}");
        println!("     y     b = 2      no barrier");
        for y in [-4.0, -2.0, -1.0, -0.5, -0.1] {
            println!(
                "{y:6} {:12.8} {:12.8}",
                h.gerber_shiu_density(q, x, Some(2.0), y)?,
                h.gerber_shiu_density(q, x, None, y)?
            );
        }
        println!(
            "mass {:.8} (b = 2), {:.8} (no barrier)\n",
            h.gerber_shiu_mass(q, x, Some(2.0))?,
            h.gerber_shiu_mass(q, x, None)?
        );
    }
    Ok(())
}
