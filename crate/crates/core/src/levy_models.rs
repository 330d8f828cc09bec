//! The two supported spectrally negative Lévy risk models and their
//! analytic primitives: Laplace exponent, right-inverse, mean and the law
//! of `X_r`.

use crate::error::{require_finite, require_positive, Error, Result};
use crate::gauss;
use crate::quadrature::QuadratureSpec;
use crate::roots::newton_bisect;

/// Gaussian standard deviations kept beyond the tilted mean when truncating
/// Brownian integrals. The neglected relative mass is below `1e-20`.
pub const GAUSSIAN_TAIL_SDS: f64 = 10.0;

const PHI_X_TOL: f64 = 1e-15;

/// A spectrally negative Lévy risk process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevyModel {
    /// `X_t = c t + sigma B_t`.
    Brownian { c: f64, sigma: f64 },
    /// Premium rate `c`, Poisson claim rate `eta`, claims exponential with mean `1/mu`.
    CramerLundberg { c: f64, eta: f64, mu: f64 },
}

impl LevyModel {
    pub fn brownian(c: f64, sigma: f64) -> Result<Self> {
        require_finite("c", c)?;
        require_positive("sigma", sigma)?;
        Ok(Self::Brownian { c, sigma })
    }

    pub fn cramer_lundberg(c: f64, eta: f64, mu: f64) -> Result<Self> {
        require_positive("c", c)?;
        require_positive("eta", eta)?;
        require_positive("mu", mu)?;
        Ok(Self::CramerLundberg { c, eta, mu })
    }

    /// Re-checks the invariants, for values built with struct literals.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Brownian { c, sigma } => Self::brownian(c, sigma).map(|_| ()),
            Self::CramerLundberg { c, eta, mu } => Self::cramer_lundberg(c, eta, mu).map(|_| ()),
        }
    }

    /// `psi(theta)`, defined for `theta >= 0`.
    pub fn laplace_exponent(&self, theta: f64) -> Result<f64> {
        if !(theta >= 0.0) {
            return Err(Error::NegativeArgument(theta));
        }
        Ok(self.psi(theta))
    }

    /// Analytic continuation of the Laplace exponent (CL: valid for `theta > -mu`).
    pub(crate) fn psi(&self, theta: f64) -> f64 {
        match *self {
            Self::Brownian { c, sigma } => c * theta + 0.5 * sigma * sigma * theta * theta,
            Self::CramerLundberg { c, eta, mu } => c * theta - eta * theta / (mu + theta),
        }
    }

    pub(crate) fn psi_prime(&self, theta: f64) -> f64 {
        match *self {
            Self::Brownian { c, sigma } => c + sigma * sigma * theta,
            Self::CramerLundberg { c, eta, mu } => c - eta * mu / ((mu + theta) * (mu + theta)),
        }
    }

    /// `E[X_1] = psi'(0+)`.
    pub fn mean(&self) -> f64 {
        self.psi_prime(0.0)
    }

    /// `Phi_q`, the largest root of `psi(theta) = q`.
    pub fn phi(&self, q: f64) -> Result<f64> {
        crate::error::require_non_negative("q", q)?;
        self.roots(q).map(|(phi, _)| phi)
    }

    /// Both real roots of `psi(theta) = q`, largest first.
    ///
    /// The smaller one is `<= 0`, and lies in `(-mu, 0]` for CL.
    pub(crate) fn roots(&self, q: f64) -> Result<(f64, f64)> {
        let (lo, hi) = match *self {
            Self::Brownian { c, sigma } => {
                let s2 = sigma * sigma;
                let hi = ((c * c + 2.0 * s2 * q).sqrt() - c) / s2 + 1.0;
                (if c < 0.0 { -c / s2 } else { 0.0 }, hi)
            }
            Self::CramerLundberg { c, eta, mu } => {
                let hi = (q + eta) / c + mu;
                let lo = if c * mu < eta { (eta * mu / c).sqrt() - mu } else { 0.0 };
                (lo, hi)
            }
        };
        let phi = if q == 0.0 && lo == 0.0 {
            0.0
        } else {
            newton_bisect(|t| (self.psi(t) - q, self.psi_prime(t)), lo, hi, PHI_X_TOL, 200)?
        };
        let other = match *self {
            Self::Brownian { c, sigma } => -2.0 * c / (sigma * sigma) - phi,
            Self::CramerLundberg { c, eta, mu } => {
                // c t^2 + (c mu - eta - q) t - q mu = 0; the product of the roots
                // is stabler than the sum when one root is tiny.
                if phi > 0.0 {
                    -q * mu / (c * phi)
                } else {
                    -(c * mu - eta - q) / c
                }
            }
        };
        Ok((phi, other.min(phi)))
    }

    /// The law of `X_r`.
    pub fn law_at(&self, r: f64) -> Result<XrLaw> {
        require_positive("r", r)?;
        Ok(XrLaw { model: *self, r })
    }

    /// `P(X_r in dz)` restricted to `(0, inf)`.
    pub fn xr_measure(&self, r: f64) -> Result<PositiveLawRepr> {
        let law = self.law_at(r)?;
        let (atom, tail_cutoff) = match *self {
            Self::Brownian { c, sigma } => (None, c * r + GAUSSIAN_TAIL_SDS * sigma * r.sqrt()),
            Self::CramerLundberg { c, eta, .. } => {
                let atom = Some(Atom {
                    location: c * r,
                    mass: (-eta * r).exp(),
                });
                (atom, c * r)
            }
        };
        let tail_bound = law.positive_tail_first_moment(tail_cutoff);
        Ok(PositiveLawRepr {
            law,
            atom,
            tail_cutoff,
            tail_bound,
        })
    }
}

/// A point mass in the law of `X_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// The law of `X_r` on `(0, inf)`.
///
/// `tail_bound` is the exact value of `∫_{tail_cutoff}^∞ z P(X_r ∈ dz)`
/// (zero for CL, whose support ends at the atom `c r`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveLawRepr {
    law: XrLaw,
    pub atom: Option<Atom>,
    pub tail_cutoff: f64,
    pub tail_bound: f64,
}

impl PositiveLawRepr {
    /// Absolutely continuous part, zero on `(-inf, 0]`.
    pub fn density(&self, z: f64) -> f64 {
        if z > 0.0 {
            self.law.density(z)
        } else {
            0.0
        }
    }

    pub fn law(&self) -> &XrLaw {
        &self.law
    }
}

/// Full law of `X_r` on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XrLaw {
    model: LevyModel,
    r: f64,
}

impl XrLaw {
    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn atom(&self) -> Option<Atom> {
        match self.model {
            LevyModel::Brownian { .. } => None,
            LevyModel::CramerLundberg { c, eta, .. } => Some(Atom {
                location: c * self.r,
                mass: (-eta * self.r).exp(),
            }),
        }
    }

    /// Density of the absolutely continuous part.
    pub fn density(&self, z: f64) -> f64 {
        let r = self.r;
        match self.model {
            LevyModel::Brownian { c, sigma } => {
                let s = sigma * r.sqrt();
                gauss::pdf((z - c * r) / s) / s
            }
            LevyModel::CramerLundberg { c, eta, mu } => {
                let u = c * r - z;
                if u <= 0.0 {
                    return 0.0;
                }
                // sum_{n>=1} Poisson(n; eta r) Gamma(n, mu)(u), as
                // e^{-eta r - mu u} sum_n a^n u^{n-1} / (n! (n-1)!) with a = eta r mu.
                // The series is bounded by a e^{2 sqrt(a u)}.
                let a = eta * r * mu;
                let ln_front = -eta * r - mu * u;
                if ln_front + a.ln() + 2.0 * (a * u).sqrt() < -745.0 {
                    return 0.0;
                }
                let mut ln_scale = 0.0;
                let mut term = a;
                let mut sum = term;
                let mut peak = term;
                let mut n = 1.0;
                loop {
                    term *= a * u / ((n + 1.0) * n);
                    sum += term;
                    peak = peak.max(term);
                    n += 1.0;
                    if sum > 1e280 {
                        ln_scale += sum.ln();
                        term /= sum;
                        peak /= sum;
                        sum = 1.0;
                    }
                    let shrinking = a * u < (n + 1.0) * n;
                    if shrinking && term < 1e-16 * peak {
                        break;
                    }
                }
                (sum.ln() + ln_scale + ln_front).exp()
            }
        }
    }

    /// Upper end of the support of the absolutely continuous part.
    pub(crate) fn support_end(&self) -> f64 {
        match self.model {
            LevyModel::Brownian { .. } => f64::INFINITY,
            LevyModel::CramerLundberg { c, .. } => c * self.r,
        }
    }

    /// `∫_{[l, inf)} e^{rho z} (z / r) P(X_r in dz)`.
    pub fn exp_moment_above(&self, rho: f64, l: f64, quad: &QuadratureSpec) -> Result<f64> {
        let r = self.r;
        match self.model {
            LevyModel::Brownian { c, sigma } => {
                let s = sigma * r.sqrt();
                Ok(gauss::scaled_upper_mean(r * self.model.psi(rho), c * r + rho * s * s, s, l) / r)
            }
            LevyModel::CramerLundberg { .. } => {
                self.integrate_above(|z| (rho * z).exp(), l, rho, quad)
            }
        }
    }

    /// `∫_{(-inf, l)} e^{rho z} (z / r) P(X_r in dz)`.
    pub fn exp_moment_below(&self, rho: f64, l: f64, quad: &QuadratureSpec) -> Result<f64> {
        let r = self.r;
        match self.model {
            LevyModel::Brownian { c, sigma } => {
                let s = sigma * r.sqrt();
                Ok(gauss::scaled_lower_mean(r * self.model.psi(rho), c * r + rho * s * s, s, l) / r)
            }
            LevyModel::CramerLundberg { .. } => self.integrate_below(|z| (rho * z).exp(), l, quad),
        }
    }

    /// `∫_{[l, inf)} f(z) (z / r) P(X_r in dz)` by quadrature.
    ///
    /// `growth` bounds the exponential growth rate of `f`, used to place the
    /// Brownian truncation point past the tilted mean.
    pub fn integrate_above<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        l: f64,
        growth: f64,
        quad: &QuadratureSpec,
    ) -> Result<f64> {
        let r = self.r;
        let mut total = 0.0;
        let upper = match self.model {
            LevyModel::Brownian { c, sigma } => {
                c * r + growth.max(0.0) * sigma * sigma * r + GAUSSIAN_TAIL_SDS * sigma * r.sqrt()
            }
            LevyModel::CramerLundberg { .. } => {
                let atom = self.atom().expect("CL has an atom");
                if atom.location >= l {
                    total += atom.mass * f(atom.location) * atom.location / r;
                }
                atom.location
            }
        };
        if upper > l {
            let lower = match self.model {
                LevyModel::Brownian { c, sigma } => {
                    l.max(c * r - (growth.abs() * sigma * sigma * r + GAUSSIAN_TAIL_SDS * sigma * r.sqrt()))
                }
                LevyModel::CramerLundberg { .. } => l,
            };
            if upper > lower {
                total += quad.integrate_with_breaks(|z| self.weighted(&mut f, z), lower, upper, &[0.0])?;
            }
        }
        Ok(total)
    }

    /// `∫_{(-inf, l)} f(z) (z / r) P(X_r in dz)` by quadrature.
    pub fn integrate_below<F: FnMut(f64) -> f64>(&self, mut f: F, l: f64, quad: &QuadratureSpec) -> Result<f64> {
        let r = self.r;
        let end = self.support_end();
        let mut total = 0.0;
        if let Some(atom) = self.atom() {
            if atom.location < l {
                total += atom.mass * f(atom.location) * atom.location / r;
            }
        }
        let top = l.min(end);
        total += quad.integrate_from_neg_infinity(|z| self.weighted(&mut f, z), top)?;
        Ok(total)
    }

    fn weighted<F: FnMut(f64) -> f64>(&self, f: &mut F, z: f64) -> f64 {
        let d = self.density(z);
        if d == 0.0 {
            0.0
        } else {
            f(z) * z / self.r * d
        }
    }

    /// `∫_{cutoff}^∞ z P(X_r ∈ dz)`.
    fn positive_tail_first_moment(&self, cutoff: f64) -> f64 {
        match self.model {
            LevyModel::Brownian { c, sigma } => {
                gauss::scaled_upper_mean(0.0, c * self.r, sigma * self.r.sqrt(), cutoff)
            }
            LevyModel::CramerLundberg { .. } => 0.0,
        }
    }
}
