//! The delayed scale function Λ^{(p)}(x; r, s) by the spectral route and by
//! both integral forms.

use parisian_hybrid::{DelayedScale, LevyModel};

fn main() -> parisian_hybrid::Result<()> {
    let (p, s, r) = (0.5, 1.0, 1.0);
    for model in [LevyModel::brownian(1.0, 1.0)?, LevyModel::cramer_lundberg(2.0, 1.0, 1.0)?] {
        let d = DelayedScale::new(model, r)?;
        println!("{model:?}, p = {p}, s = {s}, r = {r}");
        println!("     x     spectral       form 1       form 2");
        for x in [-1.0, -0.25, 0.0, 0.5, 1.0, 2.0] {
            println!(
                "{x:6.2} {:12.8} {:12.8} {:12.8}",
                d.lambda_rs(p, x, s)?,
                d.lambda_rs_first_form(p, x, s)?,
                d.lambda_rs_second_form(p, x, s)?
            );
        }
        // Λ^{(p)}(0, r) = e^{pr}.
        println!("Λ(0, r) = {:.12}, e^(pr) = {:.12}\n", d.lambda_r(p, 0.0)?, (p * r).exp());
    }
    Ok(())
}
