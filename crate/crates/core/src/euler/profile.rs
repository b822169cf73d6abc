use crate::error::{Error, Result};

/// Radial shape function used for initial perturbations.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Zero,
    /// `exp(-1/(1-(r/radius)²))` on `r < radius`.
    Bump { radius: f64 },
    /// Bump of the given half width centred at `center`.
    Shell { center: f64, half_width: f64 },
    /// Piecewise linear through `(r, v)` samples, zero past the last sample.
    Table { r: Vec<f64>, v: Vec<f64> },
    Scaled(f64, Box<Shape>),
}

fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

impl Shape {
    pub fn value(&self, r: f64) -> f64 {
        match self {
            Shape::Zero => 0.0,
            Shape::Bump { radius } => bump(r / radius),
            Shape::Shell { center, half_width } => bump((r - center) / half_width),
            Shape::Table { r: rs, v } => {
                let last = rs.len() - 1;
                if r >= rs[last] {
                    return 0.0;
                }
                if r <= rs[0] {
                    return v[0];
                }
                let k = rs.partition_point(|&x| x <= r) - 1;
                let s = (r - rs[k]) / (rs[k + 1] - rs[k]);
                v[k] + s * (v[k + 1] - v[k])
            }
            Shape::Scaled(c, inner) => c * inner.value(r),
        }
    }

    /// Outer edge of the support.
    pub fn extent(&self) -> f64 {
        match self {
            Shape::Zero => 0.0,
            Shape::Bump { radius } => *radius,
            Shape::Shell { center, half_width } => center + half_width,
            Shape::Table { r, .. } => r[r.len() - 1],
            Shape::Scaled(c, inner) => {
                if *c == 0.0 {
                    0.0
                } else {
                    inner.extent()
                }
            }
        }
    }

    /// Interior points where the shape is not smooth; quadrature splits there.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            Shape::Zero => vec![],
            Shape::Bump { radius } => vec![*radius],
            Shape::Shell { center, half_width } => vec![center - half_width, center + half_width],
            Shape::Table { r, .. } => r.clone(),
            Shape::Scaled(_, inner) => inner.breakpoints(),
        }
    }
}

/// Initial data `ρ = ρ̄ + ε ρ₀(r)`, `u = ε u₀(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    pub rho0: Shape,
    pub u0: Shape,
    pub epsilon: f64,
    /// Support radius: both shapes vanish for `r >= m`.
    pub m: f64,
    /// Inner radius of the band used by the `P`-based functionals.
    pub m0: f64,
}

impl InitialProfile {
    pub fn new(rho0: Shape, u0: Shape, epsilon: f64, m: f64, m0: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::config("profile.epsilon", format!("must be >= 0, got {epsilon}")));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::config("profile.M", format!("must be > 0, got {m}")));
        }
        if !(m0 >= 0.0 && m0 < m) {
            return Err(Error::config("profile.M0", format!("must satisfy 0 <= M0 < M, got {m0}")));
        }
        for (name, s) in [("rho0", &rho0), ("u0", &u0)] {
            if s.extent() > m {
                return Err(Error::config(
                    "profile.M",
                    format!("{name} extends to {} beyond M = {m}", s.extent()),
                ));
            }
            if let Shape::Table { r, v } = s {
                if r.len() < 2 || r.len() != v.len() || r.windows(2).any(|w| !(w[1] > w[0])) || r[0] < 0.0 {
                    return Err(Error::config("profile.path", "table radii must be increasing from r >= 0"));
                }
            }
        }
        Ok(InitialProfile {
            rho0,
            u0,
            epsilon,
            m,
            m0,
        })
    }

    /// Density bump of radius `M`, fluid at rest.
    pub fn bump(epsilon: f64, m: f64, m0: f64) -> Result<Self> {
        Self::new(Shape::Bump { radius: m }, Shape::Zero, epsilon, m, m0)
    }

    /// Density shell on `[M/2, M]`, fluid at rest.
    pub fn shell(epsilon: f64, m: f64, m0: f64) -> Result<Self> {
        Self::new(shell_shape(m), Shape::Zero, epsilon, m, m0)
    }

    /// Density shell moving outward with `u₀ = ρ₀/ρ̄`, the linear outgoing
    /// acoustic relation at unit sound speed.
    pub fn outgoing_shell(epsilon: f64, m: f64, m0: f64, rho_bar: f64) -> Result<Self> {
        let s = shell_shape(m);
        let u = Shape::Scaled(1.0 / rho_bar, Box::new(s.clone()));
        Self::new(s, u, epsilon, m, m0)
    }

    /// Tabulated `(r, ρ₀, u₀)` rows; `M` is the last radius.
    pub fn tabulated(r: Vec<f64>, rho0: Vec<f64>, u0: Vec<f64>, epsilon: f64, m0: f64) -> Result<Self> {
        let m = r.last().copied().unwrap_or(0.0);
        if r.len() != rho0.len() || r.len() != u0.len() {
            return Err(Error::config("profile.path", "columns r, rho0, u0 differ in length"));
        }
        Self::new(
            Shape::Table { r: r.clone(), v: rho0 },
            Shape::Table { r, v: u0 },
            epsilon,
            m,
            m0,
        )
    }

    pub fn density(&self, rho_bar: f64, r: f64) -> f64 {
        rho_bar + self.epsilon * self.rho0.value(r)
    }

    pub fn velocity(&self, r: f64) -> f64 {
        self.epsilon * self.u0.value(r)
    }

    /// Sorted points in `[0, M]` where either shape may lose smoothness.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .rho0
            .breakpoints()
            .into_iter()
            .chain(self.u0.breakpoints())
            .chain([0.0, self.m])
            .filter(|x| (0.0..=self.m).contains(x))
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

fn shell_shape(m: f64) -> Shape {
    Shape::Shell {
        center: 0.75 * m,
        half_width: 0.25 * m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes() {
        let p = InitialProfile::bump(0.5, 2.0, 0.5).unwrap();
        assert_eq!(p.rho0.value(0.0), (-1.0f64).exp());
        assert_eq!(p.rho0.value(2.0), 0.0);
        assert_eq!(p.density(1.0, 3.0), 1.0);
        let o = InitialProfile::outgoing_shell(0.1, 1.0, 0.25, 2.0).unwrap();
        assert_eq!(o.rho0.value(0.4), 0.0);
        assert_eq!(o.u0.value(0.75), 0.5 * (-1.0f64).exp());
        assert_eq!(o.breakpoints(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn table_interpolates() {
        let t = InitialProfile::tabulated(vec![0.0, 1.0, 2.0], vec![1.0, 3.0, 0.0], vec![0.0; 3], 1.0, 0.0).unwrap();
        assert_eq!(t.rho0.value(0.5), 2.0);
        assert_eq!(t.rho0.value(1.5), 1.5);
        assert_eq!(t.rho0.value(2.5), 0.0);
        assert_eq!(t.m, 2.0);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(InitialProfile::bump(0.1, 1.0, 1.0).is_err());
        assert!(InitialProfile::bump(-0.1, 1.0, 0.0).is_err());
        assert!(InitialProfile::new(Shape::Bump { radius: 2.0 }, Shape::Zero, 1.0, 1.0, 0.0).is_err());
    }
}
