//! Exact samplers for Brownian first-passage and bridge quantities.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

pub(crate) fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let e: f64 = rng.sample(Exp1);
    e / rate
}

pub(crate) fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Inverse Gaussian with the given mean and shape (Michael–Schucany–Haas).
///
/// The smaller root is formed as `4 mu l y / (s + y)^2` rather than by
/// subtraction, so it keeps full relative accuracy when `mu y / l` is large.
pub(crate) fn inverse_gaussian<R: Rng + ?Sized>(rng: &mut R, mean: f64, shape: f64) -> f64 {
    let v = normal(rng);
    let y = mean * v * v;
    let s = (4.0 * shape * y + y * y).sqrt();
    let denom = (s + y) * (s + y);
    let x = if denom == 0.0 { mean } else { mean * 4.0 * shape * y / denom };
    let u: f64 = rng.random();
    if u * (mean + x) <= mean {
        x
    } else {
        mean * mean / x
    }
}

/// Lévy law `shape / Z^2`: first passage of driftless Brownian motion.
pub(crate) fn levy<R: Rng + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    let v = normal(rng);
    shape / (v * v)
}

/// First passage over a level at `distance > 0`, with drift `c` towards it.
/// `None` when the level is never reached (possible only for `c < 0`).
pub(crate) fn first_passage<R: Rng + ?Sized>(rng: &mut R, distance: f64, c: f64, sigma: f64) -> Option<f64> {
    let shape = distance * distance / (sigma * sigma);
    if c == 0.0 {
        return Some(levy(rng, shape));
    }
    if c < 0.0 {
        let hit = (2.0 * c * distance / (sigma * sigma)).exp();
        let u: f64 = rng.random();
        if u >= hit {
            return None;
        }
    }
    Some(inverse_gaussian(rng, distance / c.abs(), shape))
}

/// Hitting time of a level by a Brownian bridge of duration `dt` that starts
/// `distance > 0` before the level and ends `beyond >= 0` past it.
///
/// With `w = s / (dt - s)` the hitting time density becomes inverse Gaussian
/// with mean `distance / beyond` and shape `distance^2 / (sigma^2 dt)`.
pub(crate) fn bridge_passage<R: Rng + ?Sized>(rng: &mut R, distance: f64, beyond: f64, dt: f64, sigma: f64) -> f64 {
    let shape = distance * distance / (sigma * sigma * dt);
    let w = if beyond > 0.0 {
        inverse_gaussian(rng, distance / beyond, shape)
    } else {
        levy(rng, shape)
    };
    dt / (1.0 + 1.0 / w)
}

/// Whether a Brownian bridge from `x1` to `x2`, both below `level`, touches it.
pub(crate) fn bridge_touches<R: Rng + ?Sized>(rng: &mut R, x1: f64, x2: f64, level: f64, dt: f64, sigma: f64) -> bool {
    let p = (-2.0 * (level - x1) * (level - x2) / (sigma * sigma * dt)).exp();
    let u: f64 = rng.random();
    u < p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_gaussian_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(m, l) in &[(1.0, 1.0), (0.01, 1e-4), (2.0, 50.0)] {
            let n = 200_000;
            let xs: Vec<f64> = (0..n).map(|_| inverse_gaussian(&mut rng, m, l)).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
            let sd = (m * m * m / l).sqrt();
            assert!(xs.iter().all(|&x| x > 0.0));
            assert!((mean - m).abs() < 5.0 * sd / (n as f64).sqrt(), "{m} {l}: {mean}");
            assert!((var / (sd * sd) - 1.0).abs() < 0.1, "{m} {l}: {var}");
        }
    }

    #[test]
    fn bridge_passage_matches_conditioned_paths() {
        // Bridge from 0 to 1.5 over unit time, level 1: compare the mean hitting
        // time with a fine random-walk bridge reconstruction.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let exact: f64 = (0..n).map(|_| bridge_passage(&mut rng, 1.0, 0.5, 1.0, 1.0)).sum::<f64>() / n as f64;
        let steps = 400;
        let mut acc = 0.0;
        for _ in 0..20_000 {
            let mut w = vec![0.0; steps + 1];
            for k in 1..=steps {
                w[k] = w[k - 1] + normal(&mut rng) / (steps as f64).sqrt();
            }
            let end = w[steps];
            let t = (0..=steps)
                .find(|&k| {
                    let s = k as f64 / steps as f64;
                    w[k] - s * end + s * 1.5 >= 1.0
                })
                .unwrap();
            acc += t as f64 / steps as f64;
        }
        let walk = acc / 20_000.0;
        // The discrete walk detects the crossing late, by O(sqrt(1/steps)).
        assert!(walk > exact && walk - exact < 0.05, "{exact} {walk}");
    }
}
