//! Fluctuation identities for Parisian ruin under the hybrid observation
//! scheme: Poisson inspections at rate `λ` while the surplus is
//! non-negative, continuous monitoring with grace period `r` after an
//! inspection finds it negative.
//!
//! Terms of size `e^{(λ+q) r}` appear in `Θ^{(q)}` and `𝒮̃^{(q,λ)}` and in
//! the lemma displays. They cancel analytically, and every routine here
//! cancels them before evaluation so that large `λ r` stays accurate.

use crate::delayed_scale::DelayedScale;
use crate::error::{invalid, require_finite, require_non_negative, require_positive, Error, Result};
use crate::levy_models::LevyModel;
use crate::quadrature::QuadratureSpec;
use crate::scale_functions::{ScaleEvaluator, ScriptW};

/// Half-width of the symmetric average used at the removable singularity `p = q + λ`.
pub const SINGULARITY_STEP: f64 = 1e-5;

/// Arguments shared by the hybrid identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridParams {
    /// Initial surplus.
    pub x: f64,
    /// Upper barrier.
    pub b: f64,
    /// Grace period.
    pub r: f64,
    /// Poisson inspection rate.
    pub lambda: f64,
    /// Laplace argument of the ruin or exit time.
    pub q: f64,
    /// Auxiliary discount used by the lemmas.
    pub p: f64,
    /// Recovery barrier. The closed forms need `a = 0`.
    pub a: f64,
}

impl Default for HybridParams {
    fn default() -> Self {
        Self {
            x: 0.0,
            b: 1.0,
            r: 1.0,
            lambda: 1.0,
            q: 0.0,
            p: 0.0,
            a: 0.0,
        }
    }
}

impl HybridParams {
    fn scheme(&self, model: LevyModel) -> Result<HybridScheme> {
        if self.a != 0.0 {
            return Err(invalid(
                "a",
                "closed forms are stated for recovery barrier 0; shift x and b by -a instead",
            ));
        }
        HybridScheme::new(model, self.r, self.lambda)
    }
}

/// The hybrid identities for one model, grace period `r` and inspection rate `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridScheme {
    model: LevyModel,
    delayed: DelayedScale,
    lambda: f64,
}

impl HybridScheme {
    pub fn new(model: LevyModel, r: f64, lambda: f64) -> Result<Self> {
        Self::with_quadrature(model, r, lambda, QuadratureSpec::default())
    }

    pub fn with_quadrature(model: LevyModel, r: f64, lambda: f64, quad: QuadratureSpec) -> Result<Self> {
        require_positive("lambda", lambda)?;
        Ok(Self {
            model,
            delayed: DelayedScale::with_quadrature(model, r, quad)?,
            lambda,
        })
    }

    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn delayed(&self) -> &DelayedScale {
        &self.delayed
    }

    pub fn r(&self) -> f64 {
        self.delayed.r()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn scale(&self, q: f64) -> Result<ScaleEvaluator> {
        ScaleEvaluator::new(self.model, q)
    }

    /// `𝒮^{(q)}(x, r) = Z_q(x) + Λ^{(q)}(x, r) - Λ^{(q)}(x; r, -q)`.
    pub fn s_func(&self, q: f64, x: f64) -> Result<f64> {
        require_non_negative("q", q)?;
        let z = self.scale(q)?.z(x);
        if q == 0.0 {
            return Ok(z);
        }
        Ok(z + self.delayed.lambda_r(q, x)? - self.delayed.lambda_rs(q, x, -q)?)
    }

    /// `Θ^{(q)}(x; r, λ) = e^{(λ+q) r} Z_q(x, Phi_{λ+q}) + Λ^{(q)}(x, r) - Λ^{(q)}(x; r, λ)`.
    pub fn theta_func(&self, q: f64, x: f64) -> Result<f64> {
        require_non_negative("q", q)?;
        Ok(self.delayed.lambda_r(q, x)? - self.delayed.remainder(q, x, self.lambda)?)
    }

    /// `Θ^{(q)}` assembled term by term from its definition, without cancellation.
    pub fn theta_func_direct(&self, q: f64, x: f64) -> Result<f64> {
        let lam = self.lambda;
        let lead = ((lam + q) * self.r()).exp() * self.scale(q)?.z_theta_ext(x, self.model.phi(lam + q)?);
        Ok(lead + self.delayed.lambda_r(q, x)? - self.delayed.lambda_rs(q, x, lam)?)
    }

    /// `𝒮̃^{(q,λ)}(r) = lim_{b→∞} 𝒮^{(q)}(b, r) / Θ^{(q)}(b; r, λ)`.
    pub fn s_tilde(&self, q: f64) -> Result<f64> {
        let num = self.s_tilde_numerator(q)?;
        if num == 0.0 {
            return Ok(0.0);
        }
        let den = self.s_tilde_denominator(q)?;
        if !(den > 0.0) {
            return Err(Error::RootFinding(format!("non-positive denominator {den:e} in s_tilde")));
        }
        Ok(num / den)
    }

    /// `q/Phi_q - ∫_0^∞ (Z(z, Phi_q) - e^{Phi_q z}) (z/r) P(X_r ∈ dz)`.
    pub fn s_tilde_numerator(&self, q: f64) -> Result<f64> {
        require_non_negative("q", q)?;
        let phi_q = self.model.phi(q)?;
        if q == 0.0 {
            return Ok(if phi_q == 0.0 { self.model.mean().max(0.0) } else { 0.0 });
        }
        let w0 = self.scale(0.0)?;
        let integral = match w0.terms() {
            Some(terms) => {
                // Z(z, theta) - e^{theta z} = q sum_k b_k (e^{rho_k z} - e^{theta z}) / (theta - rho_k).
                let base = self.delayed.moment_above(phi_q, 0.0)?;
                let mut acc = 0.0;
                for (rho, b) in terms {
                    acc += b * (self.delayed.moment_above(rho, 0.0)? - base) / (phi_q - rho);
                }
                q * acc
            }
            None => self.delayed.law().integrate_above(
                |z| w0.z_theta_ext(z, phi_q) - (phi_q * z).exp(),
                0.0,
                phi_q,
                self.delayed.quadrature(),
            )?,
        };
        Ok(q / phi_q - integral)
    }

    /// `e^{(λ+q) r} λ / (Phi_{λ+q} - Phi_q) - ∫_0^∞ (Z_{q+λ}(z, Phi_q) - e^{Phi_q z}) (z/r) P(X_r ∈ dz)`.
    pub fn s_tilde_denominator(&self, q: f64) -> Result<f64> {
        require_non_negative("q", q)?;
        let lam = self.lambda;
        let phi_q = self.model.phi(q)?;
        let e = self.scale(q + lam)?;
        let [(rho1, b1), (rho2, b2)] = e.terms().expect("q + lambda > 0 has distinct roots");
        let w1 = lam * b1 / (rho1 - phi_q);
        let w2 = lam * b2 / (rho2 - phi_q);
        Ok(w1 * self.delayed.moment_below(rho1, 0.0)? - w2 * self.delayed.moment_above(rho2, 0.0)?
            + self.delayed.moment_above(phi_q, 0.0)?)
    }

    fn check_two_sided(x: f64, b: f64) -> Result<()> {
        require_finite("x", x)?;
        require_finite("b", b)?;
        if x > b {
            return Err(invalid("x", format!("must not exceed b = {b}, got {x}")));
        }
        Ok(())
    }

    /// `E_x[e^{-q(κ̃ - r)}; κ̃ < τ_b^+]`.
    pub fn ruin_before_exit_laplace(&self, q: f64, x: f64, b: f64) -> Result<f64> {
        Self::check_two_sided(x, b)?;
        if x == b {
            return Ok(0.0);
        }
        let lam = self.lambda;
        let ratio = self.theta_func(q, x)? / self.theta_func(q, b)?;
        Ok(lam / (lam + q) * (self.s_func(q, x)? - ratio * self.s_func(q, b)?))
    }

    /// `E_x[e^{-q τ_b^+}; τ_b^+ < κ̃]`.
    pub fn exit_before_ruin_laplace(&self, q: f64, x: f64, b: f64) -> Result<f64> {
        Self::check_two_sided(x, b)?;
        if x == b {
            return Ok(1.0);
        }
        Ok(self.theta_func(q, x)? / self.theta_func(q, b)?)
    }

    /// `E[e^{-q κ̃}; κ̃ < τ_b^+]` started from 0, in the closed form obtained
    /// by solving the renewal equation at the origin.
    ///
    /// This discounts `κ̃` itself, so it equals `e^{-q r}` times
    /// [`Self::ruin_before_exit_laplace`] at `x = 0`.
    pub fn ruin_before_exit_from_origin(&self, q: f64, b: f64) -> Result<f64> {
        Self::check_two_sided(0.0, b)?;
        let lam = self.lambda;
        let z = self.scale(q)?.z(b);
        let num = z + self.delayed.lambda_r(q, b)? - self.delayed.lambda_rs(q, b, -q)?;
        let den = self.theta_func(q, b)?;
        Ok(lam / (lam + q) * (1.0 - num / den))
    }

    /// `E_x[e^{-q(κ̃ - r)}; κ̃ < ∞]`.
    pub fn ruin_laplace(&self, q: f64, x: f64) -> Result<f64> {
        require_finite("x", x)?;
        let lam = self.lambda;
        Ok(lam / (lam + q) * (self.s_func(q, x)? - self.theta_func(q, x)? * self.s_tilde(q)?))
    }

    /// `P_x(κ̃ < ∞)`.
    pub fn ruin_probability(&self, x: f64) -> Result<f64> {
        require_finite("x", x)?;
        if self.model.mean() <= 0.0 {
            return Ok(1.0);
        }
        Ok(1.0 - self.theta_func(0.0, x)? * self.s_tilde(0.0)?)
    }

    /// Probability of classical Parisian ruin with the same delay; see [`classical_parisian_prob`].
    pub fn classical_parisian_prob(&self, x: f64) -> Result<f64> {
        require_finite("x", x)?;
        let mean = self.model.mean();
        if mean <= 0.0 {
            return Ok(1.0);
        }
        Ok(1.0 - mean * self.delayed.lambda_r(0.0, x)? / self.delayed.moment_above(0.0, 0.0)?)
    }

    /// `E_x[e^{-p τ_b^+}; τ_b^+ < κ_r^λ]` for the mixed-delay Parisian time
    /// `κ_r^λ = T_0^- ∧ κ_r`.
    pub fn mixed_exit_laplace(&self, p: f64, x: f64, b: f64) -> Result<f64> {
        Self::check_two_sided(x, b)?;
        if x == b {
            return Ok(1.0);
        }
        Ok(self.delayed.lambda_rs(p, x, self.lambda)? / self.delayed.lambda_rs(p, b, self.lambda)?)
    }

    /// `Z_q(x, Phi_{λ+q}) / Z_q(a, Phi_{λ+q})`.
    fn killed_ratio(&self, q: f64, x: f64, a: f64) -> Result<f64> {
        let e = self.scale(q)?;
        let phi = self.model.phi(q + self.lambda)?;
        Ok(e.z_theta_ext(x, phi) / e.z_theta_ext(a, phi))
    }

    /// `ratio 𝒲_a^{(q,λ)}(a + u) - 𝒲_x^{(q,λ)}(x + u)` with the dominant
    /// `e^{Phi_{λ+q} u}` terms cancelled; `a = None` is the limit `a → ∞`.
    fn killed_kernel(&self, q: f64, x: f64, a: Option<f64>, u: f64) -> Result<f64> {
        let lam = self.lambda;
        let zq = self.scale(q)?;
        let e = self.scale(q + lam)?;
        let [(rho1, b1), (rho2, b2)] = e.terms().expect("q + lambda > 0 has distinct roots");
        let zx_phi = zq.z_theta_ext(x, rho1);
        let x_active = x >= 0.0 || x + u >= 0.0;
        let lead = if x_active { 0.0 } else { b1 * zx_phi * (rho1 * u).exp() };
        let x_part = if x_active { b2 * zq.z_theta_ext(x, rho2) } else { 0.0 };
        let a_part = match a {
            Some(a) => {
                let za_phi = zq.z_theta_ext(a, rho1);
                b2 * zq.z_theta_ext(a, rho2) * zx_phi / za_phi
            }
            None => {
                let phi_q = self.model.phi(q)?;
                (rho1 - phi_q) / (rho2 - phi_q) * b2 * zx_phi
            }
        };
        Ok(lead + (a_part - x_part) * (rho2 * u).exp())
    }

    /// Density in `y <= 0` of `E_x[e^{-q T_0^-}; X_{T_0^-} ∈ dy, T_0^- < τ_a^+]`.
    ///
    /// `a_bar = None` gives the version without upper barrier.
    pub fn gerber_shiu_density(&self, q: f64, x: f64, a_bar: Option<f64>, y: f64) -> Result<f64> {
        require_non_negative("q", q)?;
        if y > 0.0 {
            return Err(invalid("y", format!("must be <= 0, got {y}")));
        }
        if let Some(a) = a_bar {
            Self::check_two_sided(x, a)?;
            if x == a {
                return Ok(0.0);
            }
        }
        Ok(self.lambda * self.killed_kernel(q, x, a_bar, -y)?)
    }

    /// The displayed Gerber–Shiu density with `𝒲` by quadrature and no cancellation.
    pub fn gerber_shiu_density_direct(&self, q: f64, x: f64, a_bar: Option<f64>, y: f64) -> Result<f64> {
        let lam = self.lambda;
        let quad = self.delayed.quadrature();
        let family = ScriptW::new(self.model, q, lam)?;
        let zq = self.scale(q)?;
        let phi = self.model.phi(q + lam)?;
        let wx = family.first_form(x, x - y, quad)?;
        match a_bar {
            Some(a) => {
                let ratio = zq.z_theta_ext(x, phi) / zq.z_theta_ext(a, phi);
                Ok(lam * (ratio * family.first_form(a, a - y, quad)? - wx))
            }
            None => {
                let phi_q = self.model.phi(q)?;
                let z = self.scale(q + lam)?.z_theta_ext(-y, phi_q);
                Ok((phi - phi_q) * zq.z_theta_ext(x, phi) * z - lam * wx)
            }
        }
    }

    /// `E_x[e^{-q T_0^-}; T_0^- < τ_a^+]` as the integral of the Gerber–Shiu density.
    pub fn gerber_shiu_mass(&self, q: f64, x: f64, a_bar: Option<f64>) -> Result<f64> {
        let quad = self.delayed.quadrature();
        let mut failure = None;
        let mut density = |y: f64| match self.gerber_shiu_density(q, x, a_bar, y) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        };
        let total = if x < 0.0 {
            quad.integrate(&mut density, x, 0.0)? + quad.integrate_from_neg_infinity(&mut density, x)?
        } else {
            quad.integrate_from_neg_infinity(&mut density, 0.0)?
        };
        match failure {
            Some(e) => Err(e),
            None => Ok(total),
        }
    }

    /// `E_x[e^{-q T_0^-}; T_0^- < τ_b^+] = λ/(λ+q) (Z_q(x) - Z_q(b) Z_q(x, Phi_{λ+q}) / Z_q(b, Phi_{λ+q}))`.
    pub fn poisson_ruin_laplace(&self, q: f64, x: f64, b: f64) -> Result<f64> {
        Self::check_two_sided(x, b)?;
        let lam = self.lambda;
        let zq = self.scale(q)?;
        Ok(lam / (lam + q) * (zq.z(x) - self.killed_ratio(q, x, b)? * zq.z(b)))
    }

    /// `E_x[e^{-q τ_a^+}; τ_a^+ < T_0^-]`.
    pub fn poisson_exit_laplace(&self, q: f64, x: f64, a_bar: f64) -> Result<f64> {
        Self::check_two_sided(x, a_bar)?;
        require_non_negative("q", q)?;
        self.killed_ratio(q, x, a_bar)
    }

    /// `E_x[e^{-q T_0^-} W_p(X_{T_0^-} + z); T_0^- < τ_b^+]`, `b = None` for no upper barrier.
    pub fn lemma_w_at_t0(&self, p: f64, q: f64, x: f64, b: Option<f64>, z: f64) -> Result<f64> {
        require_non_negative("p", p)?;
        require_non_negative("q", q)?;
        require_positive("z", z)?;
        if let Some(b) = b {
            Self::check_two_sided(x, b)?;
            if x == b {
                return Ok(0.0);
            }
        }
        let pole = q + self.lambda;
        if (p - pole).abs() < 0.1 * SINGULARITY_STEP {
            let lo = self.lemma_w_regular(pole - SINGULARITY_STEP, q, x, b, z)?;
            let hi = self.lemma_w_regular(pole + SINGULARITY_STEP, q, x, b, z)?;
            return Ok(0.5 * (lo + hi));
        }
        self.lemma_w_regular(p, q, x, b, z)
    }

    fn lemma_w_regular(&self, p: f64, q: f64, x: f64, b: Option<f64>, z: f64) -> Result<f64> {
        let lam = self.lambda;
        let k = lam / (p - q - lam);
        let family = ScriptW::new(self.model, q, p - q)?;
        let wx = family.value(x, x + z)?;
        let head = match b {
            Some(b) => self.killed_ratio(q, x, b)? * family.value(b, b + z)?,
            None => {
                let phi_q = self.model.phi(q)?;
                let phi = self.model.phi(q + lam)?;
                (phi - phi_q) / lam * self.scale(q)?.z_theta_ext(x, phi) * self.scale(p)?.z_theta_ext(z, phi_q)
            }
        };
        Ok(k * (head - wx) - k * self.killed_kernel(q, x, b, z)?)
    }

    /// The two lemma functionals
    /// `E_x[e^{-q T_0^-} Λ(X_{T_0^-}, r); T_0^- < τ_b^+]` and
    /// `E_x[e^{-q T_0^-} Λ^{(q)}(X_{T_0^-}, r); T_0^- < τ_b^+]`.
    pub fn lemma_lambda_at_t0(&self, q: f64, x: f64, b: f64) -> Result<(f64, f64)> {
        require_non_negative("q", q)?;
        Self::check_two_sided(x, b)?;
        if x == b {
            return Ok((0.0, 0.0));
        }
        let lam = self.lambda;
        let ratio = self.killed_ratio(q, x, b)?;
        let d = &self.delayed;
        let first = lam / (lam + q)
            * (d.lambda_rs(q, x, -q)? - d.remainder(q, x, lam)?
                - ratio * (d.lambda_rs(q, b, -q)? - d.remainder(q, b, lam)?));
        let second = self.theta_func(q, x)? - ratio * self.theta_func(q, b)?;
        Ok((first, second))
    }

    /// The first lemma functional at `x = 0`, in the form that uses `Λ^{(q)}(0, r) = e^{q r}`.
    pub fn lemma_lambda_at_origin(&self, q: f64, b: f64) -> Result<f64> {
        let lam = self.lambda;
        let d = &self.delayed;
        let zb = self.scale(q)?.z_theta_ext(b, self.model.phi(q + lam)?);
        // 1 - e^{(λ+q) r} - (Λ(b;-q) - Λ(b;λ)) / Z_q(b, Phi) with the e^{(λ+q) r} terms cancelled.
        Ok(lam / (lam + q) * (1.0 - (d.lambda_rs(q, b, -q)? - d.remainder(q, b, lam)?) / zb))
    }
}

/// `1 - (E X_1)_+ ∫ W(x+z) z P(X_r ∈ dz) / ∫ z P(X_r ∈ dz)`, the probability
/// of classical Parisian ruin with delay `r`.
pub fn classical_parisian_prob(model: LevyModel, x: f64, r: f64) -> Result<f64> {
    // λ does not enter; any positive value builds the scheme.
    HybridScheme::new(model, r, 1.0)?.classical_parisian_prob(x)
}

/// `E_x[e^{-q τ_a^+}; τ_a^+ < T_0^-] = Z_q(x, Phi_{λ+q}) / Z_q(a, Phi_{λ+q})`.
pub fn poisson_exit_laplace(model: LevyModel, q: f64, x: f64, a_bar: f64, lambda: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    require_non_negative("q", q)?;
    if x > a_bar {
        return Err(invalid("x", format!("must not exceed a_bar = {a_bar}, got {x}")));
    }
    let e = ScaleEvaluator::new(model, q)?;
    let phi = model.phi(q + lambda)?;
    Ok(e.z_theta_ext(x, phi) / e.z_theta_ext(a_bar, phi))
}

/// `E_x[e^{-q τ_a^-} W_p(X_{τ_a^-} + z); τ_a^- < τ_b^+]` for continuous monitoring.
pub fn classical_exit_identity(model: LevyModel, p: f64, q: f64, a_low: f64, x: f64, b: f64, z: f64) -> Result<f64> {
    require_non_negative("p", p)?;
    require_non_negative("q", q)?;
    if !(a_low <= x && x <= b && a_low < b) {
        return Err(invalid("x", format!("need a_low <= x <= b with a_low < b, got {a_low}, {x}, {b}")));
    }
    let family = ScriptW::new(model, p, q - p)?;
    let wq = ScaleEvaluator::new(model, q)?;
    let a = a_low + z;
    let ratio = wq.w(x - a_low) / wq.w(b - a_low);
    Ok(family.value(a, x + z)? - ratio * family.value(a, b + z)?)
}

/// `𝒮^{(q)}(x, r)`.
pub fn s_func(model: LevyModel, q: f64, x: f64, r: f64) -> Result<f64> {
    // λ does not enter 𝒮; any positive value builds the scheme.
    HybridScheme::new(model, r, 1.0)?.s_func(q, x)
}

/// `Θ^{(q)}(x; r, λ)`.
pub fn theta_func(model: LevyModel, q: f64, x: f64, r: f64, lambda: f64) -> Result<f64> {
    HybridScheme::new(model, r, lambda)?.theta_func(q, x)
}

/// `𝒮̃^{(q,λ)}(r)`.
pub fn s_tilde(model: LevyModel, q: f64, lambda: f64, r: f64) -> Result<f64> {
    HybridScheme::new(model, r, lambda)?.s_tilde(q)
}

/// `E_x[e^{-q(κ̃ - r)}; κ̃ < τ_b^+]`.
pub fn ruin_before_exit_laplace(model: LevyModel, params: &HybridParams) -> Result<f64> {
    params.scheme(model)?.ruin_before_exit_laplace(params.q, params.x, params.b)
}

/// `E_x[e^{-q τ_b^+}; τ_b^+ < κ̃]`.
pub fn exit_before_ruin_laplace(model: LevyModel, params: &HybridParams) -> Result<f64> {
    params.scheme(model)?.exit_before_ruin_laplace(params.q, params.x, params.b)
}

/// `E_x[e^{-q(κ̃ - r)}; κ̃ < ∞]`.
pub fn ruin_laplace(model: LevyModel, params: &HybridParams) -> Result<f64> {
    params.scheme(model)?.ruin_laplace(params.q, params.x)
}

/// `P_x(κ̃ < ∞)`.
pub fn ruin_probability(model: LevyModel, x: f64, r: f64, lambda: f64) -> Result<f64> {
    HybridScheme::new(model, r, lambda)?.ruin_probability(x)
}

/// `E_x[e^{-p τ_b^+}; τ_b^+ < κ_r^λ]`.
pub fn mixed_exit_laplace(model: LevyModel, p: f64, x: f64, b: f64, r: f64, lambda: f64) -> Result<f64> {
    HybridScheme::new(model, r, lambda)?.mixed_exit_laplace(p, x, b)
}

/// Gerber–Shiu density at `T_0^-`; `a_bar = None` for no upper barrier.
pub fn gerber_shiu_density(model: LevyModel, q: f64, lambda: f64, x: f64, a_bar: Option<f64>, y: f64) -> Result<f64> {
    // The density does not involve r; 1 is a placeholder for the scheme.
    HybridScheme::new(model, 1.0, lambda)?.gerber_shiu_density(q, x, a_bar, y)
}

/// `E_x[e^{-q T_0^-} W_p(X_{T_0^-} + z); T_0^- < τ_b^+]`.
pub fn lemma_w_at_t0(model: LevyModel, p: f64, q: f64, lambda: f64, x: f64, b: Option<f64>, z: f64) -> Result<f64> {
    HybridScheme::new(model, 1.0, lambda)?.lemma_w_at_t0(p, q, x, b, z)
}

/// Both `Λ` functionals at `T_0^-`.
pub fn lemma_lambda_at_t0(model: LevyModel, q: f64, lambda: f64, x: f64, b: f64, r: f64) -> Result<(f64, f64)> {
    HybridScheme::new(model, r, lambda)?.lemma_lambda_at_t0(q, x, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn models() -> [LevyModel; 2] {
        [
            LevyModel::brownian(1.0, 1.0).unwrap(),
            LevyModel::cramer_lundberg(2.0, 1.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn cancelled_theta_matches_definition() {
        for m in models() {
            let h = HybridScheme::new(m, 1.0, 1.0).unwrap();
            for &(q, x) in &[(0.0, 1.0), (0.5, -0.4), (1.0, 2.0)] {
                let a = h.theta_func(q, x).unwrap();
                let b = h.theta_func_direct(q, x).unwrap();
                assert!((a - b).abs() < 1e-9 * b.abs(), "{m:?} {q} {x}: {a} {b}");
            }
        }
    }

    #[test]
    fn gerber_shiu_kernel_matches_direct() {
        for m in models() {
            let h = HybridScheme::new(m, 1.0, 1.0).unwrap();
            for &(q, x, a) in &[(0.0, 1.0, Some(2.0)), (0.5, -0.3, Some(1.0)), (0.5, 0.5, None), (0.0, -0.5, None)] {
                for &y in &[-0.1, -0.7, -2.0] {
                    let s = h.gerber_shiu_density(q, x, a, y).unwrap();
                    let d = h.gerber_shiu_density_direct(q, x, a, y).unwrap();
                    assert!((s - d).abs() < 1e-8, "{m:?} {q} {x} {a:?} {y}: {s} {d}");
                }
            }
        }
    }

    #[test]
    fn lemma_lambda_origin_form() {
        for m in models() {
            let h = HybridScheme::new(m, 1.0, 1.0).unwrap();
            let (first, _) = h.lemma_lambda_at_t0(0.5, 0.0, 2.0).unwrap();
            assert!((first - h.lemma_lambda_at_origin(0.5, 2.0).unwrap()).abs() < 1e-10);
        }
    }
}
