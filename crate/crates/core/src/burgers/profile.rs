use std::fmt::Debug;

use crate::error::{Error, Result};

/// Compactly supported initial profile `w₀` with an exact derivative.
pub trait Profile1d: Debug + Send + Sync {
    /// Interval outside of which the profile vanishes identically.
    fn support(&self) -> (f64, f64);
    fn value(&self, x: f64) -> f64;
    fn slope(&self, x: f64) -> f64;
}

/// `amplitude · exp(-1/(1-s²))` with `s = (x - center)/half_width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump1d {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

impl Bump1d {
    /// The standard bump on `(-1, 1)`.
    pub fn unit() -> Self {
        Bump1d {
            center: 0.0,
            half_width: 1.0,
            amplitude: 1.0,
        }
    }
}

impl Profile1d for Bump1d {
    fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    fn value(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.half_width;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        self.amplitude * (-1.0 / (1.0 - s * s)).exp()
    }

    fn slope(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.half_width;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - s * s;
        self.amplitude * (-1.0 / q).exp() * (-2.0 * s / (q * q)) / self.half_width
    }
}

/// Smooth step: 0 for `u <= 0`, 1 for `u >= 1`, `C^∞` in between.
fn smooth_step(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0);
    }
    let f = |v: f64| (-1.0 / v).exp();
    let df = |v: f64| (-1.0 / v).exp() / (v * v);
    let (a, b) = (f(u), f(1.0 - u));
    let (da, db) = (df(u), -df(1.0 - u));
    let sum = a + b;
    (a / sum, (da * sum - a * (da + db)) / (sum * sum))
}

/// `w₀(x) = -x · χ(x)` where the cutoff `χ` equals one on `|x| <= plateau`
/// and vanishes for `|x| >= outer`.
///
/// On the plateau the slope is exactly `-1`, and `-w₀'` never exceeds one
/// elsewhere, so the maximal negative slope is `m = 1`. All characteristics
/// of the plateau meet at the same instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffRamp {
    pub plateau: f64,
    pub outer: f64,
}

impl CutoffRamp {
    pub fn new(plateau: f64, outer: f64) -> Result<Self> {
        if !(plateau > 0.0 && outer > plateau && outer.is_finite()) {
            return Err(Error::config(
                "profile.M",
                format!("ramp needs 0 < plateau < outer, got {plateau}, {outer}"),
            ));
        }
        Ok(CutoffRamp { plateau, outer })
    }

    fn cutoff(&self, x: f64) -> (f64, f64) {
        let width = self.outer - self.plateau;
        let (chi, dchi_du) = smooth_step((self.outer - x.abs()) / width);
        (chi, -x.signum() * dchi_du / width)
    }
}

impl Profile1d for CutoffRamp {
    fn support(&self) -> (f64, f64) {
        (-self.outer, self.outer)
    }

    fn value(&self, x: f64) -> f64 {
        -x * self.cutoff(x).0
    }

    fn slope(&self, x: f64) -> f64 {
        let (chi, dchi) = self.cutoff(x);
        -(chi + x * dchi)
    }
}

/// Piecewise cubic Hermite profile through tabulated `(x, w₀, w₀')`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    xs: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl TabulatedProfile {
    pub fn new(xs: Vec<f64>, values: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        let key = "profile.path";
        if xs.len() < 2 || xs.len() != values.len() || xs.len() != slopes.len() {
            return Err(Error::config(key, "need at least two rows of x, w0, dw0"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config(key, "x column must be strictly increasing"));
        }
        let last = xs.len() - 1;
        if values[0] != 0.0 || values[last] != 0.0 || slopes[0] != 0.0 || slopes[last] != 0.0 {
            return Err(Error::config(
                key,
                "profile and slope must vanish at both ends of the table",
            ));
        }
        Ok(TabulatedProfile { xs, values, slopes })
    }

    fn locate(&self, x: f64) -> Option<(usize, f64, f64)> {
        let (lo, hi) = self.support();
        if x <= lo || x >= hi {
            return None;
        }
        let k = self.xs.partition_point(|&v| v <= x).saturating_sub(1);
        let h = self.xs[k + 1] - self.xs[k];
        Some((k, (x - self.xs[k]) / h, h))
    }
}

impl Profile1d for TabulatedProfile {
    fn support(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn value(&self, x: f64) -> f64 {
        let Some((k, s, h)) = self.locate(x) else {
            return 0.0;
        };
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.values[k] + h10 * h * self.slopes[k] + h01 * self.values[k + 1] + h11 * h * self.slopes[k + 1]
    }

    fn slope(&self, x: f64) -> f64 {
        let Some((k, s, h)) = self.locate(x) else {
            return 0.0;
        };
        let s2 = s * s;
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        (d00 * self.values[k] + d01 * self.values[k + 1]) / h + d10 * self.slopes[k] + d11 * self.slopes[k + 1]
    }
}
