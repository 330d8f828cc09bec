//! Scale functions `W_q`, `Z_q`, `Z_q(., theta)` and the two-parameter
//! family `𝒲_a^{(p,q)}`.
//!
//! For both models `1/psi_q` is a proper rational function with two real
//! poles, so `W_q` is a sum of two exponentials and everything built from it
//! by convolution has a closed form. The defining integrals are also
//! available through quadrature, which the tests use as an independent check.

use crate::error::{invalid, require_non_negative, Error, Result};
use crate::levy_models::LevyModel;
use crate::quadrature::QuadratureSpec;

/// Roots closer than this are treated as a double root.
const DOUBLE_ROOT_GAP: f64 = 1e-7;
/// Exponent above which `W` and `Z` switch to log-scaled evaluation.
const LOG_SCALE_SWITCH: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Spectrum {
    /// `W(x) = sum_k b_k e^{rho_k x}` with `b_k = 1 / psi'(rho_k)`.
    Simple { rho: [f64; 2], b: [f64; 2] },
    /// `1/psi_q(theta) = c2 / (theta - rho)^2 + c1 / (theta - rho)`.
    Double { rho: f64, c2: f64, c1: f64 },
}

/// Closed-form `W_q`, `Z_q` and `Z_q(., theta)` for one model and one `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleEvaluator {
    model: LevyModel,
    q: f64,
    phi: f64,
    lower_root: f64,
    spectrum: Spectrum,
}

impl ScaleEvaluator {
    pub fn new(model: LevyModel, q: f64) -> Result<Self> {
        model.validate()?;
        require_non_negative("q", q)?;
        let (phi, lower_root) = model.roots(q)?;
        let spectrum = if phi - lower_root < DOUBLE_ROOT_GAP {
            let rho = 0.5 * (phi + lower_root);
            match model {
                LevyModel::Brownian { sigma, .. } => Spectrum::Double {
                    rho,
                    c2: 2.0 / (sigma * sigma),
                    c1: 0.0,
                },
                LevyModel::CramerLundberg { c, mu, .. } => Spectrum::Double {
                    rho,
                    c2: (mu + rho) / c,
                    c1: 1.0 / c,
                },
            }
        } else {
            let rho = [phi, lower_root];
            let b = [1.0 / model.psi_prime(phi), 1.0 / model.psi_prime(lower_root)];
            Spectrum::Simple { rho, b }
        };
        Ok(Self {
            model,
            q,
            phi,
            lower_root,
            spectrum,
        })
    }

    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `Phi_q`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The other real root of `psi(theta) = q`, which is `<= 0`.
    pub fn lower_root(&self) -> f64 {
        self.lower_root
    }

    /// `psi_q(theta) = psi(theta) - q`, continued analytically to negative `theta`.
    pub fn psi_q(&self, theta: f64) -> f64 {
        self.model.psi(theta) - self.q
    }

    /// Exponents and coefficients of `W_q` when its roots are distinct.
    pub(crate) fn terms(&self) -> Option<[(f64, f64); 2]> {
        match self.spectrum {
            Spectrum::Simple { rho, b } => Some([(rho[0], b[0]), (rho[1], b[1])]),
            Spectrum::Double { .. } => None,
        }
    }

    pub fn w(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match self.spectrum {
            Spectrum::Simple { rho, b } => {
                if rho[0] * x > LOG_SCALE_SWITCH {
                    return self.ln_w(x).exp();
                }
                (b[0] * (rho[0] * x).exp() + b[1] * (rho[1] * x).exp()).max(0.0)
            }
            Spectrum::Double { rho, c2, c1 } => (c2 * x + c1) * (rho * x).exp(),
        }
    }

    /// `ln W_q(x)` for `x > 0`, stable for large `x`.
    pub fn ln_w(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        match self.spectrum {
            Spectrum::Simple { rho, b } => rho[0] * x + (b[0] + b[1] * ((rho[1] - rho[0]) * x).exp()).ln(),
            Spectrum::Double { rho, c2, c1 } => rho * x + (c2 * x + c1).ln(),
        }
    }

    pub fn z(&self, x: f64) -> f64 {
        self.z_theta_ext(x, 0.0)
    }

    /// `Z_q(x, theta)` for `theta >= 0`.
    pub fn z_theta(&self, x: f64, theta: f64) -> Result<f64> {
        if !(theta >= 0.0) {
            return Err(Error::NegativeArgument(theta));
        }
        Ok(self.z_theta_ext(x, theta))
    }

    /// Coefficients `w_k` with `Z_q(x, theta) = sum_k w_k e^{rho_k x}` on `x >= 0`.
    fn z_weights(&self, rho: [f64; 2], theta: f64) -> [f64; 2] {
        let d = rho[0] - rho[1];
        match self.model {
            LevyModel::Brownian { .. } => [(theta - rho[1]) / d, (rho[0] - theta) / d],
            LevyModel::CramerLundberg { mu, .. } => [
                (mu + rho[0]) * (theta - rho[1]) / (d * (mu + theta)),
                (mu + rho[1]) * (rho[0] - theta) / (d * (mu + theta)),
            ],
        }
    }

    /// `Z_q(x, theta)` for any `theta` in the domain of the continued exponent.
    pub(crate) fn z_theta_ext(&self, x: f64, theta: f64) -> f64 {
        if x < 0.0 {
            return (theta * x).exp();
        }
        match self.spectrum {
            Spectrum::Simple { rho, .. } => {
                let w = self.z_weights(rho, theta);
                if rho[0] * x > LOG_SCALE_SWITCH && w[0] > 0.0 {
                    return self.ln_z_theta(x, theta).exp();
                }
                w[0] * (rho[0] * x).exp() + w[1] * (rho[1] * x).exp()
            }
            Spectrum::Double { rho, c2, c1 } => {
                let d = theta - rho;
                let slope = if d == 0.0 { 0.0 } else { c2 * d / (c2 + c1 * d) };
                (rho * x).exp() * (1.0 + slope * x)
            }
        }
    }

    /// `ln Z_q(x, theta)`, stable for large `x` when `theta > lower_root`.
    pub fn ln_z_theta(&self, x: f64, theta: f64) -> f64 {
        if x < 0.0 {
            return theta * x;
        }
        match self.spectrum {
            Spectrum::Simple { rho, .. } => {
                let w = self.z_weights(rho, theta);
                if w[0] > 0.0 {
                    rho[0] * x + (w[0] + w[1] * ((rho[1] - rho[0]) * x).exp()).ln()
                } else {
                    self.z_theta_ext(x, theta).ln()
                }
            }
            Spectrum::Double { .. } => self.z_theta_ext(x, theta).ln(),
        }
    }

    /// `Z_q(x)` from its defining integral `1 + q ∫_0^x W_q`.
    pub fn z_by_quadrature(&self, x: f64, quad: &QuadratureSpec) -> Result<f64> {
        if x <= 0.0 {
            return Ok(1.0);
        }
        Ok(1.0 + self.q * quad.integrate(|y| self.w(y), 0.0, x)?)
    }

    /// `Z_q(x, theta)` from its defining integral.
    pub fn z_theta_by_quadrature(&self, x: f64, theta: f64, quad: &QuadratureSpec) -> Result<f64> {
        if !(theta >= 0.0) {
            return Err(Error::NegativeArgument(theta));
        }
        if x < 0.0 {
            return Ok((theta * x).exp());
        }
        let i = quad.integrate(|y| (-theta * y).exp() * self.w(y), 0.0, x)?;
        Ok((theta * x).exp() * (1.0 - self.psi_q(theta) * i))
    }

    /// `Z_q(x, theta) = psi_q(theta) ∫_0^∞ e^{-theta y} W_q(x + y) dy`, valid for `theta > Phi_q`.
    pub fn z_theta_by_laplace(&self, x: f64, theta: f64, quad: &QuadratureSpec) -> Result<f64> {
        if !(theta > self.phi) {
            return Err(invalid("theta", format!("must exceed Phi_q = {}", self.phi)));
        }
        if x < 0.0 {
            return Ok((theta * x).exp());
        }
        let i = quad.integrate_to_infinity(|y| (self.ln_w(x + y) - theta * y).exp(), 0.0)?;
        Ok(self.psi_q(theta) * i)
    }
}

/// `∫_0^x W_f(x - y) W_g(y) dy`.
pub fn convolve(f: &ScaleEvaluator, g: &ScaleEvaluator, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    quad.integrate(|y| f.w(x - y) * g.w(y), 0.0, x)
}

/// The family `𝒲_a^{(p,q)}(x)` for fixed `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScriptW {
    p: ScaleEvaluator,
    pq: ScaleEvaluator,
    q: f64,
}

impl ScriptW {
    /// Requires `p >= 0` and `p + q >= 0`.
    pub fn new(model: LevyModel, p: f64, q: f64) -> Result<Self> {
        require_non_negative("p", p)?;
        crate::error::require_finite("q", q)?;
        if p + q < 0.0 {
            return Err(invalid("q", format!("p + q must be non-negative, got {}", p + q)));
        }
        let pe = ScaleEvaluator::new(model, p)?;
        let pq = if q == 0.0 { pe } else { ScaleEvaluator::new(model, p + q)? };
        Ok(Self { p: pe, pq, q })
    }

    pub fn p_evaluator(&self) -> &ScaleEvaluator {
        &self.p
    }

    pub fn pq_evaluator(&self) -> &ScaleEvaluator {
        &self.pq
    }

    /// Closed-form value; falls back to quadrature only when `psi_{p+q}` has a double root.
    pub fn value(&self, a: f64, x: f64) -> Result<f64> {
        match self.spectral(a, x) {
            Some(v) => Ok(v),
            None => self.first_form(a, x, &QuadratureSpec::default()),
        }
    }

    /// `𝒲_a(a + u) = sum_k b_k Z_p(a, rho_k) e^{rho_k u}` over the roots of `psi_{p+q}`.
    pub fn spectral(&self, a: f64, x: f64) -> Option<f64> {
        if self.q == 0.0 || x < a.max(0.0) {
            return Some(self.p.w(x));
        }
        if a <= 0.0 {
            return Some(self.pq.w(x));
        }
        let terms = self.pq.terms()?;
        let u = x - a;
        Some(
            terms
                .iter()
                .map(|&(rho, b)| b * self.p.z_theta_ext(a, rho) * (rho * u).exp())
                .sum(),
        )
    }

    /// `W_p(x) + q ∫_a^x W_{p+q}(x - y) W_p(y) dy`.
    pub fn first_form(&self, a: f64, x: f64, quad: &QuadratureSpec) -> Result<f64> {
        let base = self.p.w(x);
        let lo = a.max(0.0);
        if self.q == 0.0 || x <= lo {
            return Ok(base);
        }
        let i = quad.integrate(|y| self.pq.w(x - y) * self.p.w(y), lo, x)?;
        Ok(base + self.q * i)
    }

    /// `W_{p+q}(x) - q ∫_0^a W_{p+q}(x - y) W_p(y) dy`.
    pub fn second_form(&self, a: f64, x: f64, quad: &QuadratureSpec) -> Result<f64> {
        let base = self.pq.w(x);
        let hi = a.min(x);
        if self.q == 0.0 || hi <= 0.0 {
            return Ok(base);
        }
        let i = quad.integrate(|y| self.pq.w(x - y) * self.p.w(y), 0.0, hi)?;
        Ok(base - self.q * i)
    }
}

/// `𝒲_a^{(p,q)}(x)` by quadrature of its first form.
pub fn script_w(model: LevyModel, p: f64, q: f64, a: f64, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    ScriptW::new(model, p, q)?.first_form(a, x, quad)
}
