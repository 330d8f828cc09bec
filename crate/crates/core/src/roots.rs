//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{Error, Result};

/// Finds a root of `f` in `[lo, hi]` where `f(lo) <= 0 <= f(hi)` or the reverse.
///
/// `fdf` returns the value and derivative. Newton steps leaving the current
/// bracket fall back to bisection, so convergence is guaranteed for
/// continuous `f`.
pub fn newton_bisect<F>(mut fdf: F, mut lo: f64, mut hi: f64, x_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (flo, _) = fdf(lo);
    let (fhi, _) = fdf(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{lo}, {hi}]: f = ({flo:e}, {fhi:e})"
        )));
    }
    if flo > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    // Now f(lo) < 0 < f(hi), lo and hi in either order.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        let (fx, dfx) = fdf(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let inside = (newton - lo) * (newton - hi) < 0.0;
        let next = if dfx != 0.0 && newton.is_finite() && inside {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= x_tol * (1.0 + x.abs()) || (hi - lo).abs() <= x_tol * (1.0 + x.abs()) {
            return Ok(x);
        }
    }
    Err(Error::RootFinding(format!("no convergence after {max_iter} iterations near {x}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_of_two() {
        let r = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 3.0, 1e-15, 100).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn reversed_sign_bracket() {
        let r = newton_bisect(|x| (1.0 - x.exp(), -x.exp()), -2.0, 5.0, 1e-15, 100).unwrap();
        assert!(r.abs() < 1e-14);
    }

    #[test]
    fn missing_sign_change() {
        assert!(newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-12, 50).is_err());
    }
}
