use crate::error::{Error, Result};
use crate::numerics::gauss_kronrod_15;
use crate::verdict::{BreakdownCause, Verdict};

use super::BurgersProblem;

/// When the finite-volume run declares a gradient breakdown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BreakdownRule {
    /// `max|∂ₓw|` reaches the given multiple of its initial value.
    InitialGradientMultiple(f64),
    /// A single cell-to-cell jump spans at least the given fraction of the
    /// current range `max w - min w`, meaning the profile is no longer
    /// resolved by the grid.
    UnresolvedJump(f64),
}

impl Default for BreakdownRule {
    fn default() -> Self {
        BreakdownRule::InitialGradientMultiple(1e3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FvConfig {
    pub n_cells: usize,
    pub t_end: f64,
    pub cfl: f64,
    /// Computational interval; must contain the support of `w₀`.
    pub x_range: (f64, f64),
    pub rule: BreakdownRule,
    /// Times at which the cell averages are stored. Steps are clipped to
    /// land on them exactly.
    pub snapshot_times: Vec<f64>,
}

impl FvConfig {
    /// Interval padded by half the support width on each side.
    pub fn new(problem: &BurgersProblem, n_cells: usize, t_end: f64, cfl: f64) -> Self {
        let (lo, hi) = problem.profile().support();
        let pad = 0.5 * (hi - lo);
        FvConfig {
            n_cells,
            t_end,
            cfl,
            x_range: (lo - pad, hi + pad),
            rule: BreakdownRule::default(),
            snapshot_times: Vec::new(),
        }
    }

    fn validate(&self, problem: &BurgersProblem) -> Result<()> {
        if self.n_cells < 16 {
            return Err(Error::config("grid.n_cells", format!("must be >= 16, got {}", self.n_cells)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return Err(Error::config("run.cfl", format!("must lie in (0, 0.9], got {}", self.cfl)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::config("run.t_end", format!("must be > 0, got {}", self.t_end)));
        }
        let (a, b) = self.x_range;
        let (lo, hi) = problem.profile().support();
        if !(a <= lo && b >= hi && a < b) {
            return Err(Error::config(
                "grid.x_range",
                format!("[{a}, {b}] must contain the support [{lo}, {hi}]"),
            ));
        }
        match self.rule {
            BreakdownRule::InitialGradientMultiple(k) if !(k > 1.0) => {
                Err(Error::config("run.breakdown", format!("gradient multiple must be > 1, got {k}")))
            }
            BreakdownRule::UnresolvedJump(f) if !(f > 0.0 && f <= 1.0) => {
                Err(Error::config("run.breakdown", format!("jump fraction must lie in (0, 1], got {f}")))
            }
            _ => Ok(()),
        }
    }
}

/// Diagnostics after one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersSample {
    pub t: f64,
    /// `Q = Σ wᵢ Δx`.
    pub total: f64,
    pub max_abs: f64,
    /// Largest one-sided difference quotient.
    pub max_slope: f64,
    /// Step just taken (zero for the initial sample).
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BurgersSnapshot {
    pub t: f64,
    pub w: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FvOutcome {
    pub centers: Vec<f64>,
    pub dx: f64,
    pub series: Vec<BurgersSample>,
    pub snapshots: Vec<BurgersSnapshot>,
    /// `Global` when `t_end` was reached without breakdown.
    pub verdict: Verdict,
    pub steps: usize,
}

impl FvOutcome {
    pub fn final_time(&self) -> f64 {
        self.series.last().map_or(0.0, |s| s.t)
    }
}

/// Local Lax-Friedrichs flux for `w²/2`.
#[inline]
fn llf(l: f64, r: f64) -> f64 {
    0.25 * (l * l + r * r) - 0.5 * l.abs().max(r.abs()) * (r - l)
}

fn max_jump(w: &[f64]) -> f64 {
    // Neighbours past both ends are zero.
    let mut m = w[0].abs().max(w[w.len() - 1].abs());
    for p in w.windows(2) {
        m = m.max((p[1] - p[0]).abs());
    }
    m
}

fn sample(t: f64, w: &[f64], dx: f64, dt: f64) -> BurgersSample {
    BurgersSample {
        t,
        total: w.iter().sum::<f64>() * dx,
        max_abs: w.iter().fold(0.0, |m, v| m.max(v.abs())),
        max_slope: max_jump(w) / dx,
        dt,
    }
}

/// First-order finite-volume cross-check.
///
/// Boundary fluxes are `f(0) = 0`: the interval contains the support, where
/// the exact solution vanishes for all time. The damping term is applied as
/// the exact factor `β(tₙ)/β(tₙ₊₁)` after each flux update.
pub fn simulate_fv(problem: &BurgersProblem, cfg: &FvConfig) -> Result<FvOutcome> {
    cfg.validate(problem)?;
    let n = cfg.n_cells;
    let (a, b) = cfg.x_range;
    let dx = (b - a) / n as f64;
    let eps = problem.epsilon();
    let damping = problem.damping();
    let w0 = problem.profile();

    let centers: Vec<f64> = (0..n).map(|i| a + (i as f64 + 0.5) * dx).collect();
    let mut w: Vec<f64> = centers
        .iter()
        .map(|&c| eps * gauss_kronrod_15(&|x| w0.value(x), c - 0.5 * dx, c + 0.5 * dx).0 / dx)
        .collect();

    let mut snap_times: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|&s| (0.0..=cfg.t_end).contains(&s))
        .collect();
    snap_times.sort_by(f64::total_cmp);
    snap_times.dedup();
    let mut next_snap = 0;

    let mut snapshots = Vec::new();
    let mut t = 0.0;
    let first = sample(t, &w, dx, 0.0);
    let initial_slope = first.max_slope;
    let mut series = vec![first];
    while next_snap < snap_times.len() && snap_times[next_snap] <= t {
        snapshots.push(BurgersSnapshot { t, w: w.clone() });
        next_snap += 1;
    }

    let mut flux = vec![0.0; n + 1];
    let mut steps = 0;
    let mut verdict = Verdict::Global;
    while t < cfg.t_end {
        let speed = series.last().map_or(0.0, |s| s.max_abs);
        let mut dt = if speed > 0.0 { cfg.cfl * dx / speed } else { cfg.t_end - t };
        let mut target = cfg.t_end;
        if let Some(&s) = snap_times.get(next_snap) {
            target = target.min(s);
        }
        let t_new = if t + dt >= target {
            dt = target - t;
            target
        } else {
            t + dt
        };

        for i in 1..n {
            flux[i] = llf(w[i - 1], w[i]);
        }
        let ratio = dt / dx;
        let decay = damping.decay_factor(t, t_new);
        for i in 0..n {
            w[i] = (w[i] - ratio * (flux[i + 1] - flux[i])) * decay;
        }
        t = t_new;
        steps += 1;

        if w.iter().any(|v| !v.is_finite()) {
            verdict = Verdict::NumericalBreakdown {
                t,
                cause: BreakdownCause::NonFinite,
            };
            break;
        }
        let s = sample(t, &w, dx, dt);
        series.push(s);
        while next_snap < snap_times.len() && snap_times[next_snap] <= t {
            snapshots.push(BurgersSnapshot { t, w: w.clone() });
            next_snap += 1;
        }
        let broken = match cfg.rule {
            BreakdownRule::InitialGradientMultiple(k) => {
                initial_slope > 0.0 && s.max_slope >= k * initial_slope
            }
            BreakdownRule::UnresolvedJump(frac) => {
                let (lo, hi) = w
                    .iter()
                    .fold((0.0f64, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
                hi > lo && s.max_slope * dx >= frac * (hi - lo)
            }
        };
        if broken {
            verdict = Verdict::NumericalBreakdown {
                t,
                cause: BreakdownCause::GradientThreshold,
            };
            break;
        }
    }

    Ok(FvOutcome {
        centers,
        dx,
        series,
        snapshots,
        verdict,
        steps,
    })
}
