//! Scalar functionals of radial states and initial data.
//!
//! All integrals are over `R³` in radial form, so each carries a `4π`.
//! Discrete states are piecewise constant per cell and every cell integral
//! is evaluated exactly for that reconstruction, including the partial cell
//! at `r = l`.

use std::f64::consts::PI;
use std::fmt;

use crate::damping::DampingLaw;
use crate::error::{Error, Result};
use crate::euler::{InitialProfile, RadialState};
use crate::gas::GasModel;
use crate::numerics::{brent_root, integrate, QuadOptions};

const FOUR_PI: f64 = 4.0 * PI;

const PROFILE_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-15,
    rel_tol: 1e-13,
    max_panels: 20_000,
};

/// Default number of `l` samples per time slice for `F`.
pub const DEFAULT_BAND_SAMPLES: usize = 64;
/// Default number of `l` samples for the initial sign hypothesis.
pub const DEFAULT_HYPOTHESIS_SAMPLES: usize = 256;

fn check_radius(l: f64) -> Result<()> {
    if l >= 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "radius must be nonnegative and finite",
            value: l,
        })
    }
}

fn profile_integral<F: Fn(f64) -> f64>(prof: &InitialProfile, f: F, l: f64) -> Result<f64> {
    if l >= prof.m {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut lo = l;
    for &b in prof.breakpoints().iter().filter(|&&b| b > l && b < prof.m) {
        total += integrate(&f, lo, b, PROFILE_QUAD)?.value;
        lo = b;
    }
    Ok(total + integrate(&f, lo, prof.m, PROFILE_QUAD)?.value)
}

/// `q₀(l) = 4π ∫_l^M r (r-l)² (ρ(0,r) - ρ̄) dr`.
pub fn q0(prof: &InitialProfile, _gas: &GasModel, l: f64) -> Result<f64> {
    check_radius(l)?;
    let eps = prof.epsilon;
    Ok(FOUR_PI * profile_integral(prof, |r| r * (r - l) * (r - l) * eps * prof.rho0.value(r), l)?)
}

/// `q₁(l) = 4π ∫_l^M (r² - l²) (ρu)(0,r) dr`.
pub fn q1(prof: &InitialProfile, gas: &GasModel, l: f64) -> Result<f64> {
    check_radius(l)?;
    let rho_bar = gas.rho_bar();
    let f = |r: f64| (r * r - l * l) * prof.density(rho_bar, r) * prof.velocity(r);
    Ok(FOUR_PI * profile_integral(prof, f, l)?)
}

/// `∫_{max(a,l)}^{b} r (r-l)² dr`, written in `s = r - l` to avoid
/// cancellation.
fn p_weight(a: f64, b: f64, l: f64) -> f64 {
    let lo = (a.max(l) - l).max(0.0);
    let hi = b - l;
    if hi <= lo {
        return 0.0;
    }
    let prim = |s: f64| s * s * s * (0.25 * s + l / 3.0);
    prim(hi) - prim(lo)
}

/// `P(t,l) = 4π ∫_l^∞ r (r-l)² (ρ - ρ̄) dr` on the discrete state.
pub fn p_functional(state: &RadialState, _gas: &GasModel, l: f64) -> Result<f64> {
    check_radius(l)?;
    let grid = state.grid;
    let start = if l >= grid.r_max() { return Ok(0.0) } else { grid.cell_of(l) };
    let sum: f64 = (start..grid.n_cells())
        .map(|i| p_weight(grid.face(i), grid.face(i + 1), l) * state.drho[i])
        .sum();
    Ok(FOUR_PI * sum)
}

/// `G(t,l) = 8π ∫_l^∞ r (p - p̄ - (ρ - ρ̄)) dr`.
pub fn g_functional(state: &RadialState, gas: &GasModel, l: f64) -> Result<f64> {
    check_radius(l)?;
    let grid = state.grid;
    if l >= grid.r_max() {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for i in grid.cell_of(l)..grid.n_cells() {
        let a = grid.face(i).max(l);
        let b = grid.face(i + 1);
        if b > a {
            sum += 0.5 * (b - a) * (b + a) * gas.pressure_excess(state.density(i))?;
        }
    }
    Ok(2.0 * FOUR_PI * sum)
}

/// `H(t) = 4π ∫ r³ ρu dr`.
pub fn h_functional(state: &RadialState) -> f64 {
    let grid = state.grid;
    let sum: f64 = (0..grid.n_cells())
        .map(|i| {
            let (a, b) = (grid.face(i), grid.face(i + 1));
            0.25 * (b * b - a * a) * (b * b + a * a) * state.mom[i]
        })
        .sum();
    FOUR_PI * sum
}

/// `4π ∫ r² (ρu² + 3(p - p̄)) dr`, the right side of the `H` equation.
pub fn h_forcing(state: &RadialState, gas: &GasModel) -> Result<f64> {
    let grid = state.grid;
    let p_bar = gas.background_pressure();
    let mut sum = 0.0;
    for i in 0..grid.n_cells() {
        let rho = state.density(i);
        let p = gas.pressure(rho)?;
        sum += grid.volume(i) * (state.mom[i] * state.mom[i] / rho + 3.0 * (p - p_bar));
    }
    Ok(FOUR_PI * sum)
}

/// `L(t) = 4π ∫ r² (ρ - ρ̄) dr` with exact cell volumes.
pub fn l_functional(state: &RadialState, _gas: &GasModel) -> f64 {
    let grid = state.grid;
    let sum: f64 = (0..grid.n_cells())
        .map(|i| grid.volume(i) * state.drho[i])
        .sum();
    FOUR_PI * sum
}

/// `α(t) = (t+M)² (L₀ + (4π²ρ̄/3)(t+M)³)`.
pub fn alpha(t: f64, m: f64, l0: f64, gas: &GasModel) -> f64 {
    let s = t + m;
    s * s * (l0 + 4.0 * PI * PI * gas.rho_bar() / 3.0 * s * s * s)
}

/// Velocity potential `φ(r) = -∫_r^∞ u ds` at cell centres.
pub fn potential(state: &RadialState) -> Vec<f64> {
    let dr = state.grid.dr();
    let u = state.velocity();
    let mut phi = vec![0.0; u.len()];
    let mut outer = 0.0;
    for i in (0..u.len()).rev() {
        phi[i] = -(outer + 0.5 * u[i] * dr);
        outer += u[i] * dr;
    }
    phi
}

/// The lowest-order time-weighted energy
/// `4π ∫ r² ((1+t)^{2λ}((∂ₜψ)² + (∂ᵣψ)²) + ψ²) dr` with `ψ = φ/(1+t)^λ`.
///
/// `∂ₜφ` comes from the Bernoulli relation
/// `∂ₜφ + ½u² + h(ρ) + μ(1+t)^{-λ} φ = 0`.
pub fn energy_e0(state: &RadialState, gas: &GasModel, damping: &DampingLaw) -> Result<f64> {
    let t = state.t;
    let lambda = damping.lambda();
    let coef = damping.coefficient(t);
    let weight = (-2.0 * lambda * t.ln_1p()).exp();
    let phi = potential(state);
    let grid = state.grid;
    let mut sum = 0.0;
    for i in 0..grid.n_cells() {
        let rho = state.density(i);
        let u = state.mom[i] / rho;
        let dt_phi = -(0.5 * u * u + gas.enthalpy(rho)? + coef * phi[i]);
        let a = dt_phi - lambda * phi[i] / (1.0 + t);
        sum += grid.volume(i) * (a * a + u * u + phi[i] * phi[i] * weight);
    }
    Ok(FOUR_PI * sum)
}

/// Named time series with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSeries {
    pub name: String,
    pub samples: Vec<(f64, f64)>,
}

impl FunctionalSeries {
    pub fn new(name: impl Into<String>, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::State("series times must be strictly increasing".into()));
        }
        Ok(FunctionalSeries {
            name: name.into(),
            samples,
        })
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }
}

/// `P(t, ·)` sampled uniformly on the band `[t+M₀, t+M]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PSlice {
    pub t: f64,
    pub l: Vec<f64>,
    pub p: Vec<f64>,
}

impl PSlice {
    /// `∫ P(t,l) dl/l` over the band by the trapezoid rule.
    pub fn band_integral(&self) -> f64 {
        let f: Vec<f64> = self.p.iter().zip(&self.l).map(|(p, l)| p / l).collect();
        self.l
            .windows(2)
            .zip(f.windows(2))
            .map(|(l, f)| 0.5 * (l[1] - l[0]) * (f[0] + f[1]))
            .sum()
    }
}

pub fn p_slice(state: &RadialState, gas: &GasModel, m0: f64, m: f64, samples: usize) -> Result<PSlice> {
    if !(m0 > 0.0) {
        return Err(Error::config("profile.M0", format!("the band needs M0 > 0, got {m0}")));
    }
    if !(m > m0) {
        return Err(Error::config("profile.M", format!("the band needs M > M0, got {m}")));
    }
    if samples < 2 {
        return Err(Error::config("functionals.band_samples", "need at least 2 samples"));
    }
    let (lo, hi) = (state.t + m0, state.t + m);
    let l: Vec<f64> = (0..samples)
        .map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64)
        .collect();
    let p = l.iter().map(|&x| p_functional(state, gas, x)).collect::<Result<_>>()?;
    Ok(PSlice { t: state.t, l, p })
}

/// `F` together with the inner band integral `g(t) = ∫ P dl/l`.
#[derive(Debug, Clone, PartialEq)]
pub struct FResult {
    pub f: FunctionalSeries,
    pub inner: FunctionalSeries,
}

/// `F(t) = ∫₀ᵗ (t-τ) g(τ) dτ`, measured from the first slice.
///
/// `g` is taken piecewise linear between slices and integrated exactly, so
/// on a uniform grid the second difference of `F` is
/// `(g₋ + 4g + g₊)/6`.
pub fn f_functional(slices: &[PSlice]) -> Result<FResult> {
    if slices.len() < 3 {
        return Err(Error::config(
            "run.monitor_cadence",
            format!("F needs at least 3 time slices, got {}", slices.len()),
        ));
    }
    let t0 = slices[0].t;
    let g: Vec<(f64, f64)> = slices.iter().map(|s| (s.t - t0, s.band_integral())).collect();
    let inner = FunctionalSeries::new(
        "inner",
        slices.iter().zip(&g).map(|(s, &(_, v))| (s.t, v)).collect(),
    )?;
    // F(t) = t A(t) - B(t), with A = ∫ g and B = ∫ τ g.
    let (mut a, mut b) = (0.0, 0.0);
    let mut f = vec![(slices[0].t, 0.0)];
    for w in g.windows(2) {
        let ((ta, ga), (tb, gb)) = (w[0], w[1]);
        let h = tb - ta;
        a += 0.5 * h * (ga + gb);
        b += h / 6.0 * (2.0 * ta * ga + ta * gb + tb * ga + 2.0 * tb * gb);
        f.push((tb + t0, tb * a - b));
    }
    Ok(FResult {
        f: FunctionalSeries::new("F", f)?,
        inner,
    })
}

/// Minimum of sampled `P` on a band of radii, with the tolerance below
/// which a negative value is attributed to discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignCheck {
    pub min_p: f64,
    pub at_l: f64,
    pub tol_p: f64,
    pub ok: bool,
}

/// Checks `P(t,l) >= -tol_P` on `samples` radii in `[l_min, l_max]`.
///
/// `tol_P` is ten times the change in `P` produced by shifting the density
/// profile by half a cell.
pub fn p_sign_check(state: &RadialState, gas: &GasModel, l_min: f64, l_max: f64, samples: usize) -> Result<SignCheck> {
    if !(l_max >= l_min && l_min >= 0.0) || samples < 2 {
        return Err(Error::config("functionals.sign_band", "need 0 <= l_min <= l_max and 2+ samples"));
    }
    let grid = state.grid;
    let n = grid.n_cells();
    let mut out = SignCheck {
        min_p: f64::INFINITY,
        at_l: l_min,
        tol_p: 0.0,
        ok: true,
    };
    let mut estimate = 0.0f64;
    for k in 0..samples {
        let l = l_min + (l_max - l_min) * k as f64 / (samples - 1) as f64;
        let p = p_functional(state, gas, l)?;
        if p < out.min_p {
            out.min_p = p;
            out.at_l = l;
        }
        if l < grid.r_max() {
            let mut e = 0.0;
            for i in grid.cell_of(l)..n {
                let left = state.drho[i.saturating_sub(1)];
                let right = if i + 1 < n { state.drho[i + 1] } else { 0.0 };
                e += p_weight(grid.face(i), grid.face(i + 1), l) * 0.5 * (right - left).abs();
            }
            estimate = estimate.max(FOUR_PI * e);
        }
    }
    out.tol_p = 10.0 * estimate;
    out.ok = out.min_p >= -out.tol_p;
    Ok(out)
}

/// Sampled margins of `q₀ > 0` and `q₁ >= 0` on `(M₀, M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisMargin {
    pub min_q0: f64,
    pub min_q1: f64,
    pub samples: usize,
    pub holds: bool,
}

/// Evaluates `q₀`, `q₁` at `samples` interior points of `(M₀, M)`.
pub fn hypothesis_margin(prof: &InitialProfile, gas: &GasModel, samples: usize) -> Result<HypothesisMargin> {
    let (lo, hi) = (prof.m0, prof.m);
    let (mut min_q0, mut min_q1) = (f64::INFINITY, f64::INFINITY);
    for k in 1..=samples {
        let l = lo + (hi - lo) * k as f64 / (samples + 1) as f64;
        min_q0 = min_q0.min(q0(prof, gas, l)?);
        min_q1 = min_q1.min(q1(prof, gas, l)?);
    }
    Ok(HypothesisMargin {
        min_q0,
        min_q1,
        samples,
        holds: samples > 0 && min_q0 > 0.0 && min_q1 >= 0.0,
    })
}

/// Evaluation of `H(0) ∫₀^{T*} dτ/(α(τ)β(τ)) > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionReport {
    pub h0: f64,
    pub l0: f64,
    pub t_star: f64,
    pub integral_value: f64,
    pub satisfied: bool,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "H0 = {:?}", self.h0)?;
        writeln!(f, "L0 = {:?}", self.l0)?;
        writeln!(f, "T_star = {:?}", self.t_star)?;
        writeln!(f, "integral_value = {:?}", self.integral_value)?;
        writeln!(f, "product = {:?}", self.h0 * self.integral_value)?;
        writeln!(f, "satisfied = {}", self.satisfied)
    }
}

const CRITERION_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-300,
    rel_tol: 1e-13,
    max_panels: 20_000,
};

fn criterion_integrand<'a>(m: f64, l0: f64, damping: &'a DampingLaw, gas: &'a GasModel) -> impl Fn(f64) -> f64 + 'a {
    move |tau| (-damping.log_beta(tau)).exp() / alpha(tau, m, l0, gas)
}

fn check_criterion_inputs(l0: f64, m: f64) -> Result<()> {
    if !(l0 >= 0.0) {
        return Err(Error::Hypothesis(format!("the criterion requires L(0) >= 0, got {l0}")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::config("profile.M", format!("must be > 0, got {m}")));
    }
    Ok(())
}

pub fn blowup_criterion(
    h0: f64,
    l0: f64,
    m: f64,
    damping: &DampingLaw,
    gas: &GasModel,
    t_star: f64,
) -> Result<CriterionReport> {
    check_criterion_inputs(l0, m)?;
    if !(t_star > 0.0 && t_star.is_finite()) {
        return Err(Error::config("criterion.T_star", format!("must be > 0, got {t_star}")));
    }
    let integral_value = integrate(criterion_integrand(m, l0, damping, gas), 0.0, t_star, CRITERION_QUAD)?.value;
    Ok(CriterionReport {
        h0,
        l0,
        t_star,
        integral_value,
        satisfied: h0 * integral_value > 1.0,
    })
}

/// Smallest `T*` at which the criterion holds, or `None` if it never does.
///
/// Uses `β >= 1` and `L₀ >= 0` to bound the tail:
/// `∫_T^∞ dτ/(αβ) <= 3/(16π²ρ̄(T+M)⁴)`.
pub fn critical_horizon(h0: f64, l0: f64, m: f64, damping: &DampingLaw, gas: &GasModel) -> Result<Option<f64>> {
    check_criterion_inputs(l0, m)?;
    if !(h0 > 0.0) {
        return Ok(None);
    }
    let f = criterion_integrand(m, l0, damping, gas);
    let tail = |t: f64| 3.0 / (16.0 * PI * PI * gas.rho_bar() * (t + m).powi(4));
    let mut t = m.max(1.0);
    let mut acc = integrate(&f, 0.0, t, CRITERION_QUAD)?.value;
    loop {
        if h0 * acc > 1.0 {
            break;
        }
        if h0 * (acc + tail(t)) <= 1.0 {
            return Ok(None);
        }
        acc += integrate(&f, t, 2.0 * t, CRITERION_QUAD)?.value;
        t *= 2.0;
        if t > 1e300 {
            return Err(Error::Internal("criterion horizon search did not terminate".into()));
        }
    }
    let excess = |s: f64| {
        h0 * integrate(&f, 0.0, s, CRITERION_QUAD).map_or(f64::NAN, |q| q.value) - 1.0
    };
    Ok(Some(brent_root(excess, 0.0, t, 1e-12 * t)?))
}
