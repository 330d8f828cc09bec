//! Delayed scale functions `Λ^{(p)}(x; r, s)` and `Λ^{(p)}(x, r)`.
//!
//! The default evaluation is spectral: with `W_{p+s} = sum_k b_k e^{rho_k .}`
//! one has
//!
//! `Λ^{(p)}(x; r, s) = sum_k b_k Z_p(x, rho_k) ∫_{[L, inf)} e^{rho_k z} (z/r) P(X_r ∈ dz)`,
//! `L = max(0, -x)`,
//!
//! which leaves only one-dimensional exponential moments of `X_r`. The two
//! integral representations over `z P(X_r ∈ dz) / r` are kept as
//! independent quadrature routes.

use crate::error::{invalid, require_finite, require_non_negative, Result};
use crate::levy_models::{LevyModel, XrLaw, GAUSSIAN_TAIL_SDS};
use crate::quadrature::QuadratureSpec;
use crate::scale_functions::{ScaleEvaluator, ScriptW};

/// Arguments of `Λ^{(p)}(x; r, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayedScaleParams {
    pub p: f64,
    pub r: f64,
    pub s: f64,
    pub x: f64,
}

/// Delayed scale functions for one model and one delay `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayedScale {
    model: LevyModel,
    law: XrLaw,
    quad: QuadratureSpec,
}

impl DelayedScale {
    pub fn new(model: LevyModel, r: f64) -> Result<Self> {
        Self::with_quadrature(model, r, QuadratureSpec::default())
    }

    pub fn with_quadrature(model: LevyModel, r: f64, quad: QuadratureSpec) -> Result<Self> {
        model.validate()?;
        quad.validate()?;
        Ok(Self {
            model,
            law: model.law_at(r)?,
            quad,
        })
    }

    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn r(&self) -> f64 {
        self.law.r()
    }

    pub fn law(&self) -> &XrLaw {
        &self.law
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    fn check(&self, p: f64, x: f64, s: f64) -> Result<()> {
        require_non_negative("p", p)?;
        require_finite("x", x)?;
        require_finite("s", s)?;
        if p + s < 0.0 {
            return Err(invalid("s", format!("p + s must be non-negative, got {}", p + s)));
        }
        Ok(())
    }

    /// True when `W(x + z)` vanishes on the whole numerical support of `X_r`.
    fn beyond_support(&self, x: f64, growth: f64) -> bool {
        let r = self.r();
        match self.model {
            LevyModel::Brownian { c, sigma } => {
                -x >= c * r + growth * sigma * sigma * r + GAUSSIAN_TAIL_SDS * sigma * r.sqrt()
            }
            LevyModel::CramerLundberg { c, .. } => -x > c * r,
        }
    }

    /// `∫_{[l, inf)} e^{rho z} (z/r) P(X_r ∈ dz)`.
    pub fn moment_above(&self, rho: f64, l: f64) -> Result<f64> {
        self.law.exp_moment_above(rho, l, &self.quad)
    }

    /// `∫_{(-inf, l)} e^{rho z} (z/r) P(X_r ∈ dz)`.
    pub fn moment_below(&self, rho: f64, l: f64) -> Result<f64> {
        self.law.exp_moment_below(rho, l, &self.quad)
    }

    /// `Λ^{(p)}(x; r, s)`.
    pub fn lambda_rs(&self, p: f64, x: f64, s: f64) -> Result<f64> {
        self.check(p, x, s)?;
        let zp = ScaleEvaluator::new(self.model, p)?;
        let zps = if s == 0.0 { zp } else { ScaleEvaluator::new(self.model, p + s)? };
        if self.beyond_support(x, zps.phi()) {
            return Ok(0.0);
        }
        let Some(terms) = zps.terms() else {
            return self.lambda_rs_second_form(p, x, s);
        };
        let l = (-x).max(0.0);
        let mut total = 0.0;
        for (rho, b) in terms {
            total += b * zp.z_theta_ext(x, rho) * self.moment_above(rho, l)?;
        }
        Ok(total)
    }

    /// `Λ^{(p)}(x, r) = Λ^{(p)}(x; r, 0)`.
    pub fn lambda_r(&self, p: f64, x: f64) -> Result<f64> {
        self.lambda_rs(p, x, 0.0)
    }

    /// `Λ^{(p)}(x; r, s) - e^{(p+s) r} Z_p(x, Phi_{p+s})`, without forming
    /// either large term.
    ///
    /// Uses `∫_R e^{rho z} (z/r) P(X_r ∈ dz) = psi'(rho) e^{r psi(rho)}` to
    /// trade the dominant upper integral for its complement.
    pub fn remainder(&self, p: f64, x: f64, s: f64) -> Result<f64> {
        self.check(p, x, s)?;
        let zp = ScaleEvaluator::new(self.model, p)?;
        let zps = ScaleEvaluator::new(self.model, p + s)?;
        let Some([(rho1, b1), (rho2, b2)]) = zps.terms() else {
            let lead = ((p + s) * self.r()).exp() * zp.z_theta_ext(x, zps.phi());
            return Ok(self.lambda_rs_second_form(p, x, s)? - lead);
        };
        let l = (-x).max(0.0);
        let upper = b2 * zp.z_theta_ext(x, rho2) * self.moment_above(rho2, l)?;
        let lower = b1 * zp.z_theta_ext(x, rho1) * self.moment_below(rho1, l)?;
        Ok(upper - lower)
    }

    /// `Λ^{(p)}(x; r, s) = ∫ 𝒲_x^{(p,s)}(x+z) (z/r) P(X_r ∈ dz)`, nested quadrature.
    pub fn lambda_rs_second_form(&self, p: f64, x: f64, s: f64) -> Result<f64> {
        self.check(p, x, s)?;
        let family = ScriptW::new(self.model, p, s)?;
        let growth = family.pq_evaluator().phi().max(family.p_evaluator().phi());
        if self.beyond_support(x, growth) {
            return Ok(0.0);
        }
        let inner = self.quad;
        let mut failure = None;
        let v = self.law.integrate_above(
            |z| match family.first_form(x, x + z, &inner) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            (-x).max(0.0),
            growth,
            &self.quad,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// `Λ^{(p)}(x; r, s) = ∫ 𝒲_z^{(p+s,-s)}(x+z) (z/r) P(X_r ∈ dz)`, nested quadrature.
    pub fn lambda_rs_first_form(&self, p: f64, x: f64, s: f64) -> Result<f64> {
        self.check(p, x, s)?;
        let family = ScriptW::new(self.model, p + s, -s)?;
        let growth = family.pq_evaluator().phi().max(family.p_evaluator().phi());
        if self.beyond_support(x, growth) {
            return Ok(0.0);
        }
        let inner = self.quad;
        let mut failure = None;
        let v = self.law.integrate_above(
            |z| match family.first_form(z, x + z, &inner) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            (-x).max(0.0),
            growth,
            &self.quad,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// `Λ^{(p)}(x, r) = ∫ W_p(x+z) (z/r) P(X_r ∈ dz)` by direct quadrature.
    pub fn lambda_r_by_quadrature(&self, p: f64, x: f64) -> Result<f64> {
        self.check(p, x, 0.0)?;
        let e = ScaleEvaluator::new(self.model, p)?;
        if self.beyond_support(x, e.phi()) {
            return Ok(0.0);
        }
        self.law.integrate_above(|z| e.w(x + z), (-x).max(0.0), e.phi(), &self.quad)
    }

    /// `E_x[e^{-q tau_0^+}; tau_0^+ < r] = e^{-q r} Λ^{(q)}(x, r)` for `x <= 0`.
    pub fn creeping_laplace(&self, q: f64, x: f64) -> Result<f64> {
        if x > 0.0 {
            return Err(invalid("x", format!("must be <= 0, got {x}")));
        }
        Ok((-q * self.r()).exp() * self.lambda_r(q, x)?)
    }
}

/// `Λ^{(p)}(x; r, s)`.
pub fn lambda_rs(model: LevyModel, params: DelayedScaleParams) -> Result<f64> {
    DelayedScale::new(model, params.r)?.lambda_rs(params.p, params.x, params.s)
}

/// `Λ^{(p)}(x, r)`.
pub fn lambda_r(model: LevyModel, p: f64, x: f64, r: f64) -> Result<f64> {
    DelayedScale::new(model, r)?.lambda_r(p, x)
}

/// `E_x[e^{-q tau_0^+}; tau_0^+ < r]` for `x <= 0`.
pub fn creeping_laplace(model: LevyModel, q: f64, x: f64, r: f64) -> Result<f64> {
    DelayedScale::new(model, r)?.creeping_laplace(q, x)
}

/// `(Ψ_1, Ψ_2)` for `X_t = c t + B_t`: the integrals
/// `∫_0^∞ e^{Phi_λ z} (z/r) P(X_r ∈ dz)` and `∫_0^∞ e^{-(Phi_λ + 2c) z} (z/r) P(X_r ∈ dz)`.
pub fn brownian_psi_helpers(c: f64, r: f64, lambda: f64) -> Result<(f64, f64)> {
    brownian::psi_helpers(c, r, lambda)
}

/// Closed forms for the unit-variance Brownian model.
pub mod brownian {
    use crate::error::{require_finite, require_positive, Result};
    use crate::gauss;

    fn phi_lambda(c: f64, lambda: f64) -> f64 {
        (c * c + 2.0 * lambda).sqrt() - c
    }

    fn front(c: f64, r: f64) -> f64 {
        (-r * c * c / 2.0).exp() / (2.0 * r * std::f64::consts::PI).sqrt()
    }

    /// `(Ψ_1, Ψ_2)`.
    pub fn psi_helpers(c: f64, r: f64, lambda: f64) -> Result<(f64, f64)> {
        require_finite("c", c)?;
        require_positive("r", r)?;
        require_positive("lambda", lambda)?;
        let phi = phi_lambda(c, lambda);
        let k = (r * lambda).exp();
        let psi1 = front(c, r) + k * (phi + c) * gauss::cdf(r.sqrt() * (phi + c));
        let psi2 = front(c, r) - k * (phi + c) * gauss::cdf(-r.sqrt() * (phi + c));
        Ok((psi1, psi2))
    }

    /// `(A_1(x), A_2(x))` with `𝒲_z^{(λ,-λ)}(x+z) = e^{Phi_λ z} A_1(x) + e^{-(Phi_λ+2c) z} A_2(x)`, `x >= 0`.
    pub fn a_coefficients(c: f64, lambda: f64, x: f64) -> (f64, f64) {
        let phi = phi_lambda(c, lambda);
        let e = (-2.0 * c * x).exp();
        let a1 = lambda / (c * phi * (phi + c)) - lambda * e / (c * (phi + 2.0 * c) * (phi + c));
        let a2 = lambda / (c * (phi + c) * (phi + 2.0 * c)) - lambda * e / (c * phi * (phi + c));
        (a1, a2)
    }

    /// `Λ(x; r, λ) = A_1(x) Ψ_1 + A_2(x) Ψ_2` for `x >= 0`.
    pub fn lambda_mixed(c: f64, r: f64, lambda: f64, x: f64) -> Result<f64> {
        let (psi1, psi2) = psi_helpers(c, r, lambda)?;
        let (a1, a2) = a_coefficients(c, lambda, x);
        Ok(a1 * psi1 + a2 * psi2)
    }

    /// `E[X_1] Λ(x, r)` for `x >= 0`.
    pub fn mean_times_lambda(c: f64, r: f64, x: f64) -> f64 {
        let e = (-2.0 * c * x).exp();
        (1.0 - e) * front(c, r) + c * gauss::cdf(r.sqrt() * c) + c * e * gauss::cdf(-r.sqrt() * c)
    }

    /// `∫_0^∞ (Z_λ(z) - 1) (z/r) P(X_r ∈ dz)`.
    pub fn z_lambda_moment(c: f64, r: f64, lambda: f64) -> Result<f64> {
        let phi = phi_lambda(c, lambda);
        let (psi1, psi2) = psi_helpers(c, r, lambda)?;
        Ok(lambda / (phi * (phi + c)) * psi1 + lambda / ((phi + c) * (phi + 2.0 * c)) * psi2
            - (front(c, r) + c * gauss::cdf(c * r.sqrt())))
    }
}
