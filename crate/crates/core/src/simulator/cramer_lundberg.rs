//! Path engine for `X_t = x + c t - (sum of Exp(mu) claims at rate eta)`.

use rand::Rng;

use super::sampling::exponential;
use super::{Bounds, Classical, Inspected, Stopped};

#[derive(Debug, Clone, Copy)]
pub(super) struct CramerLundberg {
    pub c: f64,
    pub eta: f64,
    pub mu: f64,
}

impl CramerLundberg {
    fn claim<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        exponential(rng, self.mu)
    }

    pub fn inspect<R: Rng + ?Sized>(&self, rng: &mut R, mut t: f64, mut x: f64, lambda: f64, bounds: &Bounds) -> Inspected {
        if bounds.b.is_some_and(|b| x >= b) {
            return Inspected::Exit { t };
        }
        loop {
            let e = exponential(rng, self.eta);
            let i = exponential(rng, lambda);
            let dt = e.min(i);
            if let Some(b) = bounds.b {
                if x + self.c * dt >= b {
                    let te = t + (b - x) / self.c;
                    return bounds.before_horizon(Inspected::Exit { t: te }, te);
                }
            }
            t += dt;
            if t > bounds.horizon {
                return Inspected::Truncated;
            }
            x += self.c * dt;
            if i < e {
                if x < 0.0 {
                    return Inspected::Negative { t, x };
                }
            } else {
                x -= self.claim(rng);
            }
            if bounds.escaped(x) {
                return Inspected::Escape;
            }
        }
    }

    pub fn recover<R: Rng + ?Sized>(&self, rng: &mut R, mut x: f64, r: f64) -> Option<f64> {
        let mut s = 0.0;
        loop {
            let need = -x / self.c;
            let e = exponential(rng, self.eta);
            if need <= e {
                return (s + need < r).then_some(s + need);
            }
            s += e;
            if s >= r {
                return None;
            }
            x += self.c * e - self.claim(rng);
        }
    }

    /// Excursion-clock ruin `κ_r`, or `T_0^- ∧ κ_r` when `lambda` is given.
    pub fn parisian<R: Rng + ?Sized>(&self, rng: &mut R, x0: f64, r: f64, lambda: Option<f64>, bounds: &Bounds) -> Stopped {
        let mut t = 0.0;
        let mut x = x0;
        if bounds.b.is_some_and(|b| x >= b) {
            return Stopped::Exit { t };
        }
        loop {
            if x < 0.0 {
                let inspection = lambda.map_or(f64::INFINITY, |l| t + exponential(rng, l));
                let limit = (t + r).min(inspection);
                loop {
                    let need = -x / self.c;
                    let e = exponential(rng, self.eta);
                    let dt = need.min(e);
                    if t + dt >= limit {
                        return Stopped::Ruin;
                    }
                    t += dt;
                    if need <= e {
                        x = 0.0;
                        break;
                    }
                    x += self.c * e - self.claim(rng);
                }
            }
            if t > bounds.horizon {
                return Stopped::Truncated;
            }
            if bounds.escaped(x) {
                return Stopped::Escape;
            }
            let e = exponential(rng, self.eta);
            if let Some(b) = bounds.b {
                if x + self.c * e >= b {
                    return Stopped::Exit { t: t + (b - x) / self.c };
                }
            }
            t += e;
            x += self.c * e - self.claim(rng);
        }
    }

    /// First exit from `[a_low, b]` under continuous monitoring.
    pub fn two_sided<R: Rng + ?Sized>(&self, rng: &mut R, mut x: f64, a_low: f64, b: f64, horizon: f64) -> Classical {
        let mut t = 0.0;
        if x >= b {
            return Classical::Above;
        }
        loop {
            if t > horizon {
                return Classical::Truncated;
            }
            let e = exponential(rng, self.eta);
            if x + self.c * e >= b {
                return Classical::Above;
            }
            t += e;
            x += self.c * e - self.claim(rng);
            if x < a_low {
                return Classical::Below { t, x };
            }
        }
    }
}
