//! Parisian ruin under a hybrid observation scheme for spectrally negative
//! Lévy risk models.
//!
//! The surplus is inspected at Poisson times while solvent. Once an
//! inspection finds it negative, it is monitored continuously and ruin is
//! declared if it fails to recover within a grace period `r`. The crate
//! evaluates the resulting fluctuation identities (scale functions, delayed
//! scale functions, Laplace transforms of ruin and exit times, Gerber–Shiu
//! densities) for Brownian motion with drift and the Cramér–Lundberg model
//! with exponential claims, and checks them against an exact Monte Carlo
//! simulator.

pub mod cli;
pub mod delayed_scale;
pub mod error;
pub mod gauss;
pub mod hybrid_identities;
pub mod levy_models;
pub mod quadrature;
pub mod roots;
pub mod scale_functions;
pub mod simulator;

pub use delayed_scale::{DelayedScale, DelayedScaleParams};
pub use error::{Error, Result};
pub use hybrid_identities::{HybridParams, HybridScheme};
pub use levy_models::{Atom, LevyModel, PositiveLawRepr, XrLaw};
pub use quadrature::QuadratureSpec;
pub use scale_functions::{ScaleEvaluator, ScriptW};
