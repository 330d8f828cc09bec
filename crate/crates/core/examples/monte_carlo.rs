//! The exact simulator on its own: hybrid ruin, two-sided exit, classical
//! Parisian ruin and the recovery-barrier shift. Set PARISIAN_SEED to change
//! the seed.

use parisian_hybrid::simulator::{self, SimConfig, DEFAULT_SEED};
use parisian_hybrid::LevyModel;

fn main() -> parisian_hybrid::Result<()> {
    let seed = std::env::var("PARISIAN_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let model = LevyModel::brownian(1.0, 1.0)?;
    let cfg = SimConfig::new(model, 0.0).paths(400_000).seed(seed);

    let hybrid = simulator::simulate_hybrid(&cfg, 0.5)?;
    println!("P(ruin) from 0            {:.6} ± {:.6}", hybrid.ruin.mean, hybrid.ruin.std_error);
    println!("E[e^(-q(κ-r))], q = 0.5   {:.6} ± {:.6}", hybrid.ruin_laplace.mean, hybrid.ruin_laplace.std_error);

    let shifted = simulator::simulate_hybrid(&SimConfig { x0: 1.0, a: 1.0, ..cfg }, 0.0)?;
    println!("same, barrier a = 1       {:.6} ± {:.6}", shifted.ruin.mean, shifted.ruin.std_error);

    let two = simulator::simulate_two_sided(&SimConfig { x0: 1.0, ..cfg }.upper(2.0), 0.0)?;
    println!("P(exit at 2 before ruin)  {:.6} ± {:.6}", two.exit.mean, two.exit.std_error);

    let parisian = simulator::simulate_classical_parisian(&SimConfig { x0: 1.0, ..cfg })?;
    println!("classical Parisian ruin   {:.6} ± {:.6}", parisian.mean, parisian.std_error);
    println!("truncated fraction        {}", hybrid.ruin.truncated_fraction);
    Ok(())
}
