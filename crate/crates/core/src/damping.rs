//! The time-dependent friction `μ (1+t)^(-λ)` and its integrating factor.
//!
//! `β` solves `β' = μ (1+t)^(-λ) β`, `β(0) = 1`. The reciprocal integral
//! `I(t) = ∫₀ᵗ dτ/β(τ)` measures how far characteristics of the damped
//! Burgers equation can travel, and whether `I(∞)` is finite decides between
//! global existence and blowup for small data.

use crate::error::{Error, Result};
use crate::numerics::{brent_root, integrate, QuadOptions};

const QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-12,
    rel_tol: 2e-15,
    max_panels: 50_000,
};

/// Far-field panels of `I(∞)`; the relative target is relaxed because the
/// body can be astronomically large.
const LIMIT_QUAD: QuadOptions = QuadOptions {
    abs_tol: 0.0,
    rel_tol: 1e-13,
    max_panels: 50_000,
};

/// Analytic tails below this fraction of the body are dropped from `I(∞)`.
const TAIL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingLaw {
    mu: f64,
    lambda: f64,
}

/// Value of `∫₀^∞ dτ/β(τ)`. A finite limit beyond the `f64` range is
/// reported as `Finite(f64::INFINITY)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegralLimit {
    Finite(f64),
    Divergent,
}

impl IntegralLimit {
    pub fn is_finite(&self) -> bool {
        matches!(self, IntegralLimit::Finite(_))
    }
}

impl DampingLaw {
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::config("damping.mu", format!("must be >= 0, got {mu}")));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::config(
                "damping.lambda",
                format!("must be >= 0, got {lambda}"),
            ));
        }
        Ok(DampingLaw { mu, lambda })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Friction coefficient `μ (1+t)^(-λ)`.
    pub fn coefficient(&self, t: f64) -> f64 {
        if self.lambda == 0.0 {
            self.mu
        } else {
            self.mu * (-self.lambda * t.ln_1p()).exp()
        }
    }

    pub fn beta(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.log_beta(t).exp())
    }

    /// `ln β(t)`, exact in closed form for every `λ`.
    pub fn log_beta(&self, t: f64) -> f64 {
        if self.mu == 0.0 {
            return 0.0;
        }
        let s = t.ln_1p();
        if self.lambda == 1.0 {
            self.mu * s
        } else {
            let k = 1.0 - self.lambda;
            (self.mu / k) * (k * s).exp_m1()
        }
    }

    /// `β(t0) / β(t1)`, the factor that advances a purely damped quantity
    /// from `t0` to `t1`.
    pub fn decay_factor(&self, t0: f64, t1: f64) -> f64 {
        (self.log_beta(t0) - self.log_beta(t1)).exp()
    }

    /// Supremum of `β` when `λ > 1`: `exp(μ/(λ-1))`.
    pub fn beta_sup(&self) -> Option<f64> {
        (self.lambda > 1.0).then(|| (self.mu / (self.lambda - 1.0)).exp())
    }

    /// `I(t) = ∫₀ᵗ dτ/β(τ)`. Closed form for `λ ∈ {0, 1}` and `μ = 0`,
    /// adaptive quadrature otherwise.
    pub fn beta_integral(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if let Some(v) = self.beta_integral_closed(t) {
            return Ok(v);
        }
        self.beta_integral_quadrature(0.0, t)
    }

    /// `∫_{t0}^{t1} dτ/β(τ)` by adaptive quadrature, regardless of `λ`.
    pub fn beta_integral_quadrature(&self, t0: f64, t1: f64) -> Result<f64> {
        check_time(t0)?;
        check_time(t1)?;
        Ok(integrate(|tau| (-self.log_beta(tau)).exp(), t0, t1, QUAD)?.value)
    }

    fn beta_integral_closed(&self, t: f64) -> Option<f64> {
        let (mu, lambda) = (self.mu, self.lambda);
        if mu == 0.0 {
            Some(t)
        } else if lambda == 1.0 {
            if mu == 1.0 {
                Some(t.ln_1p())
            } else {
                let k = 1.0 - mu;
                Some((k * t.ln_1p()).exp_m1() / k)
            }
        } else if lambda == 0.0 {
            Some(-(-mu * t).exp_m1() / mu)
        } else {
            None
        }
    }

    /// Classifies `I(∞)`: finite iff `(λ < 1, μ > 0)` or `(λ = 1, μ > 1)`.
    pub fn beta_integral_limit(&self) -> IntegralLimit {
        let (mu, lambda) = (self.mu, self.lambda);
        if mu == 0.0 || lambda > 1.0 || (lambda == 1.0 && mu <= 1.0) {
            return IntegralLimit::Divergent;
        }
        if lambda == 1.0 {
            return IntegralLimit::Finite(1.0 / (mu - 1.0));
        }
        if lambda == 0.0 {
            return IntegralLimit::Finite(1.0 / mu);
        }
        // 0 < λ < 1: integrate until the analytic tail is negligible. For λ
        // close to 1 and small μ the limit can exceed the f64 range.
        let quad = |a: f64, b: f64| {
            integrate(|tau| (-self.log_beta(tau)).exp(), a, b, LIMIT_QUAD)
                .expect("integrand is smooth, bounded and monotone")
                .value
        };
        let mut horizon = 1.0;
        let mut body = quad(0.0, horizon);
        loop {
            if let Some(b) = self.tail_bound(horizon) {
                if b < TAIL_TOL * body.max(1.0) {
                    return IntegralLimit::Finite(body + b);
                }
            }
            if horizon > 1e300 || !body.is_finite() {
                return IntegralLimit::Finite(f64::INFINITY);
            }
            body += quad(horizon, 2.0 * horizon);
            horizon *= 2.0;
        }
    }

    /// Upper bound for `∫_T^∞ dτ/β` when `0 < λ < 1`.
    ///
    /// Integrating `1/β = -(1+τ)^λ/μ · (1/β)'` by parts gives
    /// `tail = (1+T)^λ/(μ β(T)) + (λ/μ) ∫_T^∞ (1+τ)^(λ-1)/β dτ`, and the last
    /// integral is at most `(1+T)^(λ-1) · tail`.
    fn tail_bound(&self, horizon: f64) -> Option<f64> {
        let lambda = self.lambda;
        let shrink = lambda / self.mu * (1.0 + horizon).powf(lambda - 1.0);
        if shrink >= 0.5 {
            return None;
        }
        let lead = (1.0 + horizon).powf(lambda) / self.mu * (-self.log_beta(horizon)).exp();
        Some(lead / (1.0 - shrink))
    }

    /// Smallest `T >= 0` with `I(T) = y`, or `None` when `y` is at or above
    /// a finite `I(∞)`.
    pub fn beta_integral_inverse(&self, y: f64) -> Result<Option<f64>> {
        if !y.is_finite() {
            return Err(Error::Domain {
                what: "target integral value must be finite",
                value: y,
            });
        }
        if y <= 0.0 {
            return Ok(Some(0.0));
        }
        if let IntegralLimit::Finite(limit) = self.beta_integral_limit() {
            if y >= limit {
                return Ok(None);
            }
        }
        let (mu, lambda) = (self.mu, self.lambda);
        if mu == 0.0 {
            return Ok(Some(y));
        }
        if lambda == 1.0 {
            let t = if mu == 1.0 {
                y.exp_m1()
            } else {
                let k = 1.0 - mu;
                ((k * y).ln_1p() / k).exp_m1()
            };
            return Ok(Some(t));
        }
        if lambda == 0.0 {
            return Ok(Some(-(-mu * y).ln_1p() / mu));
        }
        let mut hi = 1.0;
        loop {
            let v = self.beta_integral(hi)?;
            if v >= y {
                break;
            }
            // Past this point I(T) can gain at most the tail bound; if that
            // cannot reach y, or is below rounding, y is effectively I(∞).
            if let Some(b) = self.tail_bound(hi).filter(|_| lambda > 0.0 && lambda < 1.0) {
                if v + b < y || b <= 4.0 * f64::EPSILON * y {
                    return Ok(None);
                }
            }
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::Internal("failed to bracket I(T) = y".into()));
            }
        }
        let lo = if hi > 1.0 { 0.5 * hi } else { 0.0 };
        let root = brent_root(
            |t| self.beta_integral(t).expect("t is in range") - y,
            lo,
            hi,
            1e-13 * hi,
        )?;
        Ok(Some(root))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "time must be nonnegative and finite",
            value: t,
        })
    }
}
