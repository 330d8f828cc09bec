//! Path engine for `X_t = x + c t + sigma B_t`.

use rand::Rng;

use super::sampling::{bridge_passage, bridge_touches, exponential, first_passage, normal};
use super::{Bounds, Inspected, Stopped};

#[derive(Debug, Clone, Copy)]
pub(super) struct Brownian {
    pub c: f64,
    pub sigma: f64,
}

impl Brownian {
    fn step<R: Rng + ?Sized>(&self, rng: &mut R, x: f64, dt: f64) -> f64 {
        x + self.c * dt + self.sigma * dt.sqrt() * normal(rng)
    }

    /// Time within `(0, dt)` at which the path from `x1` to `x2` first reaches `b`, if it does.
    fn upper_crossing<R: Rng + ?Sized>(&self, rng: &mut R, x1: f64, x2: f64, dt: f64, b: f64) -> Option<f64> {
        if x2 >= b {
            return Some(bridge_passage(rng, b - x1, x2 - b, dt, self.sigma));
        }
        if bridge_touches(rng, x1, x2, b, dt, self.sigma) {
            // Reflection in b maps these bridges to bridges ending at 2b - x2
            // with the same first hitting time.
            return Some(bridge_passage(rng, b - x1, b - x2, dt, self.sigma));
        }
        None
    }

    pub fn inspect<R: Rng + ?Sized>(&self, rng: &mut R, mut t: f64, mut x: f64, lambda: f64, bounds: &Bounds) -> Inspected {
        if bounds.b.is_some_and(|b| x >= b) {
            return Inspected::Exit { t };
        }
        loop {
            let dt = exponential(rng, lambda);
            let next = self.step(rng, x, dt);
            if let Some(b) = bounds.b {
                if let Some(s) = self.upper_crossing(rng, x, next, dt, b) {
                    return bounds.before_horizon(Inspected::Exit { t: t + s }, t + s);
                }
            }
            t += dt;
            x = next;
            if t > bounds.horizon {
                return Inspected::Truncated;
            }
            if x < 0.0 {
                return Inspected::Negative { t, x };
            }
            if bounds.escaped(x) {
                return Inspected::Escape;
            }
        }
    }

    pub fn recover<R: Rng + ?Sized>(&self, rng: &mut R, x: f64, r: f64) -> Option<f64> {
        first_passage(rng, -x, self.c, self.sigma).filter(|&s| s < r)
    }

    /// Excursion-clock ruin `κ_r`, or `T_0^- ∧ κ_r` when `lambda` is given.
    ///
    /// The path is sampled on a grid of mesh `r/2` merged with the inspection
    /// times. An excursion longer than `r` must straddle a grid point, and at
    /// each grid point found below 0 the straddling excursion is resolved
    /// exactly: its start from the bridge last-zero law, its end from the
    /// first-passage law.
    pub fn parisian<R: Rng + ?Sized>(&self, rng: &mut R, x0: f64, r: f64, lambda: Option<f64>, bounds: &Bounds) -> Stopped {
        let mesh = 0.5 * r;
        let mut t = 0.0;
        let mut x = x0;
        if bounds.b.is_some_and(|b| x >= b) {
            return Stopped::Exit { t };
        }
        let mut excursion_start = (x < 0.0).then_some(0.0);
        let mut next_grid = mesh;
        let mut next_inspection = lambda.map_or(f64::INFINITY, |l| exponential(rng, l));
        loop {
            if let Some(g) = excursion_start.take() {
                let end = first_passage(rng, -x, self.c, self.sigma).map_or(f64::INFINITY, |s| t + s);
                let inspection = lambda.map_or(f64::INFINITY, |l| t + exponential(rng, l));
                if end > g + r || inspection < end {
                    return Stopped::Ruin;
                }
                t = end;
                x = 0.0;
                next_grid = t + mesh;
                next_inspection = lambda.map_or(f64::INFINITY, |l| t + exponential(rng, l));
            }
            if t > bounds.horizon {
                return Stopped::Truncated;
            }
            let is_inspection = next_inspection < next_grid;
            let te = if is_inspection { next_inspection } else { next_grid };
            let dt = te - t;
            let next = self.step(rng, x, dt);
            if let Some(b) = bounds.b {
                if let Some(s) = self.upper_crossing(rng, x, next, dt, b) {
                    return Stopped::Exit { t: t + s };
                }
            }
            if next < 0.0 {
                if is_inspection {
                    return Stopped::Ruin;
                }
                // Last zero before te: first hitting time of the reversed bridge.
                let s = bridge_passage(rng, -next, x, dt, self.sigma);
                excursion_start = Some(te - s);
                t = te;
                x = next;
                continue;
            }
            t = te;
            x = next;
            if bounds.escaped(x) {
                return Stopped::Escape;
            }
            if is_inspection {
                next_inspection = t + exponential(rng, lambda.expect("inspection events need a rate"));
            } else {
                next_grid += mesh;
            }
        }
    }
}
