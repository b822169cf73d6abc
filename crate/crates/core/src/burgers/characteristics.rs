use crate::error::{Error, Result};
use crate::numerics::bracketed_secant;
use crate::verdict::Verdict;

use super::BurgersProblem;

/// Foot-point tolerance for the characteristic inversion.
const FOOT_TOL: f64 = 1e-12;

/// Exact solution by characteristics, valid strictly before the lifespan.
#[derive(Debug, Clone)]
pub struct CharacteristicSolution {
    problem: BurgersProblem,
    lifespan: Option<f64>,
}

impl CharacteristicSolution {
    pub fn new(problem: BurgersProblem) -> Result<Self> {
        let lifespan = match problem.classify_lifespan()? {
            Verdict::FiniteLifespan(t) => Some(t),
            _ => None,
        };
        Ok(CharacteristicSolution { problem, lifespan })
    }

    pub fn lifespan(&self) -> Option<f64> {
        self.lifespan
    }

    /// Precomputes `I(t)` and `β(t)` for repeated evaluation at one time.
    pub fn at_time(&self, t: f64) -> Result<CharacteristicSlice<'_>> {
        if let Some(life) = self.lifespan {
            if t >= life {
                return Err(Error::State(format!(
                    "t = {t} is at or after the lifespan {life}"
                )));
            }
        }
        let damping = self.problem.damping();
        Ok(CharacteristicSlice {
            problem: &self.problem,
            travel: damping.beta_integral(t)?,
            beta: damping.beta(t)?,
        })
    }
}

/// The solution frozen at one time.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicSlice<'a> {
    problem: &'a BurgersProblem,
    travel: f64,
    beta: f64,
}

impl CharacteristicSlice<'_> {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `I(t)` at this time.
    pub fn travel(&self) -> f64 {
        self.travel
    }

    /// Foot point `x₀` of the characteristic through `x`, or `None` outside
    /// the image of the support.
    pub fn foot(&self, x: f64) -> Result<Option<f64>> {
        let (lo, hi) = self.problem.profile().support();
        // Both ends of the support are fixed by the map, so the image is the
        // support itself.
        if !(x > lo && x < hi) {
            return Ok(None);
        }
        let eps = self.problem.epsilon();
        let w0 = self.problem.profile();
        let map = |x0: f64| x0 + eps * w0.value(x0) * self.travel - x;
        let x0 = bracketed_secant(map, lo, hi, FOOT_TOL)
            .map_err(|e| Error::Internal(format!("characteristic inversion at x = {x}: {e}")))?;
        Ok(Some(x0))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(match self.foot(x)? {
            None => 0.0,
            Some(x0) => self.problem.epsilon() * self.problem.profile().value(x0) / self.beta,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::burgers::{Bump1d, CutoffRamp, Profile1d};
    use crate::damping::DampingLaw;
    use crate::numerics::{integrate, QuadOptions};

    fn problem(profile: Arc<dyn Profile1d>, eps: f64, mu: f64, lambda: f64) -> BurgersProblem {
        BurgersProblem::new(profile, eps, DampingLaw::new(mu, lambda).unwrap()).unwrap()
    }

    #[test]
    fn initial_time_reproduces_data() {
        let p = problem(Arc::new(Bump1d::unit()), 0.3, 1.0, 2.0);
        let sol = p.characteristics().unwrap();
        let s = sol.at_time(0.0).unwrap();
        for k in 0..=100 {
            let x = -1.2 + 2.4 * k as f64 / 100.0;
            let want = 0.3 * Bump1d::unit().value(x);
            assert!((s.value(x).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn decay_along_characteristics_and_monotone_foot() {
        let ramp = CutoffRamp::new(0.5, 1.5).unwrap();
        let p = problem(Arc::new(ramp), 0.1, 0.5, 1.0);
        let sol = p.characteristics().unwrap();
        let s = sol.at_time(30.0).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 1..400 {
            let x = -1.5 + 3.0 * k as f64 / 400.0;
            let x0 = s.foot(x).unwrap().unwrap();
            assert!(x0 > prev);
            prev = x0;
            // The recovered foot actually maps to x.
            assert!((x0 + 0.1 * ramp.value(x0) * s.travel() - x).abs() < 1e-11);
            assert!((s.value(x).unwrap() * s.beta() - 0.1 * ramp.value(x0)).abs() < 1e-15);
        }
    }

    #[test]
    fn integral_decays_like_one_over_beta() {
        let bump = Bump1d {
            center: 0.0,
            half_width: 1.0,
            amplitude: 1.0,
        };
        let p = problem(Arc::new(bump), 0.5, 1.0, 1.5);
        let sol = p.characteristics().unwrap();
        let opts = QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_panels: 20_000,
        };
        let q0 = integrate(|x| bump.value(x), -1.0, 1.0, opts).unwrap().value;
        for t in [0.5, 1.0, 2.0] {
            let s = sol.at_time(t).unwrap();
            let q = integrate(|x| s.value(x).unwrap(), -1.0, 1.0, opts).unwrap().value;
            let want = 0.5 * q0 / s.beta();
            assert!((q - want).abs() < 1e-8, "t={t}: {q} vs {want}");
        }
    }

    #[test]
    fn refuses_times_past_lifespan() {
        let p = problem(Arc::new(CutoffRamp::new(0.5, 1.5).unwrap()), 0.1, 0.5, 1.0);
        let sol = p.characteristics().unwrap();
        let err = sol.at_time(35.0).unwrap_err();
        assert_eq!(err.category(), "state");
        assert!(sol.at_time(34.9).is_ok());
    }
}
