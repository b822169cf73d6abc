//! Polytropic gas law `p = A ρ^γ` normalized so that the sound speed at the
//! background density is one.

use crate::error::{Error, Result};

/// Polytropic equation of state with background density `rho_bar`.
///
/// The pressure constant is derived, `A = 1 / (γ ρ̄^(γ-1))`, so that
/// `c(ρ̄) = 1` holds exactly. It cannot be set independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    gamma: f64,
    rho_bar: f64,
    a: f64,
}

impl GasModel {
    pub fn new(gamma: f64, rho_bar: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::config("gas.gamma", format!("must be > 1, got {gamma}")));
        }
        if !(rho_bar > 0.0 && rho_bar.is_finite()) {
            return Err(Error::config("gas.rho_bar", format!("must be > 0, got {rho_bar}")));
        }
        let a = 1.0 / (gamma * rho_bar.powf(gamma - 1.0));
        Ok(GasModel { gamma, rho_bar, a })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rho_bar(&self) -> f64 {
        self.rho_bar
    }

    /// The derived constant `A`.
    pub fn pressure_constant(&self) -> f64 {
        self.a
    }

    /// `p(ρ̄) = ρ̄ / γ`.
    pub fn background_pressure(&self) -> f64 {
        self.rho_bar / self.gamma
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.pressure_unchecked(rho))
    }

    pub fn sound_speed_sq(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.sound_speed_sq_unchecked(rho))
    }

    /// Specific enthalpy with `h(ρ̄) = 0`; a primitive of `c²(ρ)/ρ`.
    pub fn enthalpy(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.enthalpy_unchecked(rho))
    }

    /// Density with the given enthalpy. Fails at or below the vacuum bound
    /// `y <= -1/(γ-1)`.
    pub fn enthalpy_inv(&self, y: f64) -> Result<f64> {
        let g1 = self.gamma - 1.0;
        let base = g1 * y;
        if !(base > -1.0) || !y.is_finite() {
            return Err(Error::Domain {
                what: "enthalpy at or below the vacuum bound -1/(gamma-1)",
                value: y,
            });
        }
        Ok(self.rho_bar * (base.ln_1p() / g1).exp())
    }

    /// `p(ρ) - p(ρ̄) - (ρ - ρ̄)`, the deviation of the pressure from its
    /// tangent at the background state. Nonnegative by convexity.
    pub fn pressure_excess(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.pressure_excess_unchecked(rho))
    }

    #[inline]
    pub(crate) fn pressure_unchecked(&self, rho: f64) -> f64 {
        self.a * rho.powf(self.gamma)
    }

    #[inline]
    pub(crate) fn sound_speed_sq_unchecked(&self, rho: f64) -> f64 {
        (rho / self.rho_bar).powf(self.gamma - 1.0)
    }

    #[inline]
    pub(crate) fn enthalpy_unchecked(&self, rho: f64) -> f64 {
        let g1 = self.gamma - 1.0;
        (g1 * (rho / self.rho_bar).ln()).exp_m1() / g1
    }

    pub(crate) fn pressure_excess_unchecked(&self, rho: f64) -> f64 {
        let x = (rho - self.rho_bar) / self.rho_bar;
        self.background_pressure() * tangent_defect(self.gamma, x)
    }
}

fn check_density(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "density must be positive and finite",
            value: rho,
        })
    }
}

/// `(1+x)^γ - 1 - γx` without cancellation for small `|x|`.
fn tangent_defect(gamma: f64, x: f64) -> f64 {
    if x.abs() > 0.25 {
        return (1.0 + x).powf(gamma) - 1.0 - gamma * x;
    }
    // Binomial series from the quadratic term on; terminates for integer γ.
    let mut coeff = gamma * (gamma - 1.0) / 2.0;
    let mut power = x * x;
    let mut sum = 0.0;
    for k in 2..400 {
        let term = coeff * power;
        sum += term;
        if term == 0.0 || term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        let kf = k as f64;
        coeff *= (gamma - kf) / (kf + 1.0);
        power *= x;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn closed_form_values() {
        let g = GasModel::new(2.0, 2.0).unwrap();
        assert_eq!(g.pressure_constant(), 0.25);
        assert_relative_eq!(g.pressure(2.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(g.pressure(4.0).unwrap(), 4.0, max_relative = 1e-15);
        assert_relative_eq!(g.sound_speed_sq(4.0).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(g.enthalpy(3.0).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(g.enthalpy_inv(0.5).unwrap(), 3.0, max_relative = 1e-14);
        assert_relative_eq!(g.pressure_excess(4.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(g.pressure_excess(2.0).unwrap(), 0.0);
    }

    #[test]
    fn normalization_at_background() {
        for gamma in [1.1, 1.4, 5.0 / 3.0, 2.0, 3.0] {
            for rho_bar in [0.3, 1.0, 7.5] {
                let g = GasModel::new(gamma, rho_bar).unwrap();
                assert_relative_eq!(g.sound_speed_sq(rho_bar).unwrap(), 1.0, max_relative = 1e-15);
                assert_eq!(g.enthalpy(rho_bar).unwrap(), 0.0);
                assert_eq!(g.enthalpy_inv(0.0).unwrap(), rho_bar);
                assert_relative_eq!(
                    g.pressure(rho_bar).unwrap(),
                    rho_bar / gamma,
                    max_relative = 1e-15
                );
            }
        }
    }

    #[test]
    fn sound_speed_matches_pressure_derivative() {
        let g = GasModel::new(1.4, 1.0).unwrap();
        let h = 1e-6;
        let fd = (g.pressure(0.5 + h).unwrap() - g.pressure(0.5 - h).unwrap()) / (2.0 * h);
        let c2 = g.sound_speed_sq(0.5).unwrap();
        assert!((fd - c2).abs() < 1e-9);
        assert_relative_eq!(c2, 0.757_858_283_255_199, max_relative = 1e-12);
    }

    #[test]
    fn domain_errors() {
        let g = GasModel::new(1.4, 1.0).unwrap();
        assert!(g.pressure(0.0).is_err());
        assert!(g.sound_speed_sq(-1.0).is_err());
        assert!(g.enthalpy(f64::NAN).is_err());
        assert!(g.pressure_excess(-0.1).is_err());
        assert!(g.enthalpy_inv(-1.0 / (1.4 - 1.0)).is_err());
        assert!(g.enthalpy_inv(-3.0).is_err());
        assert!(g.enthalpy_inv(-2.49).is_ok());
        assert!(GasModel::new(1.0, 1.0).is_err());
        assert!(GasModel::new(1.4, 0.0).is_err());
    }

    #[test]
    fn gamma_two_excess_is_exact_square() {
        let g = GasModel::new(2.0, 1.3).unwrap();
        for rho in [1.3 + 1e-7, 1.29, 0.01, 5.0, 1.3 * (1.0 + 0.2)] {
            let d = rho - 1.3;
            assert_relative_eq!(
                g.pressure_excess(rho).unwrap(),
                g.pressure_constant() * d * d,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn excess_nonnegative_on_dense_grid() {
        for gamma in [1.1, 1.4, 2.0, 3.0] {
            let g = GasModel::new(gamma, 1.7).unwrap();
            let n = 20_000;
            for k in 0..=n {
                // log-uniform over [1e-6, 1e3] * rho_bar
                let s = -6.0 + 9.0 * k as f64 / n as f64;
                let rho = 1.7 * 10f64.powf(s);
                assert!(g.pressure_excess(rho).unwrap() >= 0.0, "gamma={gamma} rho={rho}");
            }
        }
        let g = GasModel::new(1.4, 1.0).unwrap();
        assert!(g.pressure_excess(0.3).unwrap() > 0.0);
    }

    #[test]
    fn enthalpy_round_trip_fixed_points() {
        for gamma in [1.4, 2.0, 3.0] {
            let g = GasModel::new(gamma, 1.5).unwrap();
            for rho in [0.15, 1.5, 15.0] {
                let back = g.enthalpy_inv(g.enthalpy(rho).unwrap()).unwrap();
                assert_relative_eq!(back, rho, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn enthalpy_matches_quadrature_of_its_derivative() {
        use crate::numerics::{integrate, QuadOptions};
        for gamma in [1.4, 2.0, 3.0] {
            let g = GasModel::new(gamma, 2.0).unwrap();
            for rho in [0.05, 1.0, 2.5, 20.0] {
                let q = integrate(
                    |s| g.sound_speed_sq(s).unwrap() / s,
                    2.0,
                    rho,
                    QuadOptions::default(),
                )
                .unwrap();
                assert!((q.value - g.enthalpy(rho).unwrap()).abs() < 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn enthalpy_round_trip(gamma in 1.05f64..2.0, rho_bar in 0.1f64..10.0, s in -2.0f64..2.0) {
            let g = GasModel::new(gamma, rho_bar).unwrap();
            let rho = rho_bar * 10f64.powf(s);
            let back = g.enthalpy_inv(g.enthalpy(rho).unwrap()).unwrap();
            prop_assert!(((back - rho) / rho).abs() < 1e-12);
        }

        #[test]
        fn enthalpy_increasing(gamma in 1.05f64..4.0, r1 in 0.01f64..50.0, dr in 1e-6f64..10.0) {
            let g = GasModel::new(gamma, 1.0).unwrap();
            prop_assert!(g.enthalpy(r1 + dr).unwrap() > g.enthalpy(r1).unwrap());
        }
    }
}
