use crate::damping::DampingLaw;
use crate::error::{Error, Result};
use crate::functionals::{energy_e0, h_functional, l_functional};
use crate::gas::GasModel;
use crate::verdict::{BreakdownCause, Verdict};

use super::{RadialGrid, RadialState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Piecewise constant states, forward Euler in time.
    #[default]
    FirstOrder,
    /// Minmod-limited linear reconstruction with two-stage SSP Runge-Kutta.
    Muscl,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownLimits {
    /// Density floor as a fraction of `ρ̄`.
    pub min_density_fraction: f64,
    /// `max|∂ᵣu|` limit as a multiple of its initial value.
    pub gradient_factor: f64,
    pub min_dt: f64,
}

impl Default for BreakdownLimits {
    fn default() -> Self {
        BreakdownLimits {
            min_density_fraction: 1e-6,
            gradient_factor: 1e3,
            min_dt: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakdown {
    pub t: f64,
    pub cause: BreakdownCause,
}

impl From<Breakdown> for Verdict {
    fn from(b: Breakdown) -> Self {
        Verdict::NumericalBreakdown { t: b.t, cause: b.cause }
    }
}

/// One row of the standard monitor series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorRow {
    pub t: f64,
    pub l: f64,
    pub h: f64,
    pub e0: f64,
    pub min_rho: f64,
    pub max_u: f64,
    pub max_du_dr: f64,
    /// CFL step of this state, before any clipping to sample times.
    pub dt: f64,
}

/// Extra observer called at every monitor sample.
pub trait Monitor {
    fn observe(&mut self, state: &RadialState) -> Result<()>;
}

impl<F: FnMut(&RadialState) -> Result<()>> Monitor for F {
    fn observe(&mut self, state: &RadialState) -> Result<()> {
        self(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub t_end: f64,
    /// Sample spacing in time; `0` samples after every step.
    pub monitor_every: f64,
    pub keep_snapshots: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<MonitorRow>,
    pub snapshots: Vec<RadialState>,
    /// `Global` when `t_end` was reached.
    pub verdict: Verdict,
    /// Last time reached without breakdown.
    pub horizon: f64,
    pub steps: usize,
}

/// Finite-volume solver in the conservative radial form
///
/// `∂ₜ(r²ρ) + ∂ᵣ(r²ρu) = 0`,
/// `∂ₜ(r²ρu) + ∂ᵣ(r²(ρu² + p)) = 2rp - μ(1+t)^{-λ} r²ρu`.
///
/// The pressure source is integrated over each cell against the cell's own
/// pressure, `pᵢ (A₊ - A₋)`, which makes the constant state an exact fixed
/// point. Rusanov fluxes; damping by the exact factor `β(tₙ)/β(tₙ₊₁)`.
#[derive(Debug, Clone)]
pub struct EulerSolver {
    gas: GasModel,
    damping: DampingLaw,
    grid: RadialGrid,
    cfl: f64,
    scheme: Scheme,
    limits: BreakdownLimits,
    area: Vec<f64>,
    inv_volume: Vec<f64>,
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

impl EulerSolver {
    pub fn new(gas: GasModel, damping: DampingLaw, grid: RadialGrid, cfl: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 0.6) {
            return Err(Error::config("run.cfl", format!("must lie in (0, 0.6] for the radial solver, got {cfl}")));
        }
        let n = grid.n_cells();
        Ok(EulerSolver {
            gas,
            damping,
            grid,
            cfl,
            scheme: Scheme::default(),
            limits: BreakdownLimits::default(),
            area: (0..=n).map(|j| grid.face(j) * grid.face(j)).collect(),
            inv_volume: (0..n).map(|i| 1.0 / grid.volume(i)).collect(),
        })
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_limits(mut self, limits: BreakdownLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    pub fn damping(&self) -> &DampingLaw {
        &self.damping
    }

    pub fn grid(&self) -> RadialGrid {
        self.grid
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Rejects grids too small to contain the signal: `r_max` must exceed
    /// `M + 1.1 t_end max(|u|+c)` of the initial state.
    pub fn check_domain(&self, state: &RadialState, m: f64, t_end: f64) -> Result<()> {
        let speed = self.max_wave_speed(state);
        let need = m + 1.1 * t_end * speed;
        if self.grid.r_max() < need {
            return Err(Error::config(
                "grid.r_max",
                format!("{} is too small; waves reach {need:.6} by t_end = {t_end}", self.grid.r_max()),
            ));
        }
        Ok(())
    }

    pub fn max_wave_speed(&self, state: &RadialState) -> f64 {
        let n = state.drho.len();
        let active = (self.grid.cell_of(state.support_radius) + 2).min(n);
        // Background cells move at the unit sound speed.
        let base = if active < n { 1.0 } else { 0.0 };
        state.drho[..active]
            .iter()
            .zip(&state.mom[..active])
            .fold(base, |a, (&d, &m)| {
                let rho = state.rho_bar + d;
                a.max((m / rho).abs() + self.gas.sound_speed_sq_unchecked(rho).sqrt())
            })
    }

    /// `cfl Δr / max(|u| + c)`.
    pub fn stable_dt(&self, state: &RadialState) -> f64 {
        self.cfl * self.grid.dr() / self.max_wave_speed(state)
    }

    /// Rusanov flux between states given as density excess and momentum.
    fn flux(&self, dl: f64, ml: f64, dr: f64, mr: f64) -> (f64, f64) {
        let p_bar = self.gas.background_pressure();
        let (rl, rr) = (self.gas.rho_bar() + dl, self.gas.rho_bar() + dr);
        let (ul, ur) = (ml / rl, mr / rr);
        let cl = self.gas.sound_speed_sq_unchecked(rl).sqrt();
        let cr = self.gas.sound_speed_sq_unchecked(rr).sqrt();
        let a = (ul.abs() + cl).max(ur.abs() + cr);
        let fl = ml * ul + (self.gas.pressure_unchecked(rl) - p_bar);
        let fr = mr * ur + (self.gas.pressure_unchecked(rr) - p_bar);
        (0.5 * (ml + mr) - 0.5 * a * (dr - dl), 0.5 * (fl + fr) - 0.5 * a * (mr - ml))
    }

    /// Time derivative of the cell averages, without damping, on the first
    /// `active` cells. The rest are the background state with zero rate.
    fn rates(&self, rho: &[f64], mom: &[f64], active: usize, drho: &mut [f64], dmom: &mut [f64]) {
        // `rho` holds the density excess here, so the background is zero.
        let total = rho.len();
        let n = active;
        let rho_bar = self.gas.rho_bar();
        let p_bar = self.gas.background_pressure();
        let (mut srho, mut smom) = (vec![0.0; n], vec![0.0; n]);
        if self.scheme == Scheme::Muscl {
            for i in 0..n {
                let (rl, ml) = if i == 0 { (rho[0], -mom[0]) } else { (rho[i - 1], mom[i - 1]) };
                let (rr, mr) = if i + 1 < total { (rho[i + 1], mom[i + 1]) } else { (0.0, 0.0) };
                srho[i] = minmod(rho[i] - rl, rr - rho[i]);
                smom[i] = minmod(mom[i] - ml, mr - mom[i]);
            }
        }
        // Face 0 has zero area and contributes nothing.
        let mut prev = (0.0, 0.0);
        for i in 0..n {
            let (rl, ml) = (rho[i] + 0.5 * srho[i], mom[i] + 0.5 * smom[i]);
            let (rr, mr) = if i + 1 < n {
                (rho[i + 1] - 0.5 * srho[i + 1], mom[i + 1] - 0.5 * smom[i + 1])
            } else if i + 1 < total {
                (rho[i + 1], mom[i + 1])
            } else {
                (0.0, 0.0)
            };
            let next = self.flux(rl, ml, rr, mr);
            let (a0, a1) = (self.area[i], self.area[i + 1]);
            let pi = self.gas.pressure_unchecked(rho_bar + rho[i]) - p_bar;
            drho[i] = -(a1 * next.0 - a0 * prev.0) * self.inv_volume[i];
            dmom[i] = -(a1 * (next.1 - pi) - a0 * (prev.1 - pi)) * self.inv_volume[i];
            prev = next;
        }
    }

    fn check(&self, state: &RadialState, t: f64) -> std::result::Result<(), Breakdown> {
        let floor = self.limits.min_density_fraction * self.gas.rho_bar();
        let mut low = false;
        for (d, m) in state.drho.iter().zip(&state.mom) {
            if !d.is_finite() || !m.is_finite() {
                return Err(Breakdown {
                    t,
                    cause: BreakdownCause::NonFinite,
                });
            }
            low |= state.rho_bar + d <= floor;
        }
        if low {
            return Err(Breakdown {
                t,
                cause: BreakdownCause::NegativeDensity,
            });
        }
        Ok(())
    }

    /// Advances by exactly `dt`.
    pub fn step_dt(&self, state: &mut RadialState, dt: f64) -> std::result::Result<(), Breakdown> {
        let n = state.drho.len();
        let t_new = state.t + dt;
        // Each stage moves information by at most one cell, two with MUSCL.
        let reach = if self.scheme == Scheme::Muscl { 4.0 } else { 1.0 };
        let growth = reach * self.grid.dr();
        let active = (self.grid.cell_of(state.support_radius + growth) + 4).min(n);
        let (mut drho, mut dmom) = (vec![0.0; n], vec![0.0; n]);
        self.rates(&state.drho, &state.mom, active, &mut drho, &mut dmom);
        match self.scheme {
            Scheme::FirstOrder => {
                for i in 0..n {
                    state.drho[i] += dt * drho[i];
                    state.mom[i] += dt * dmom[i];
                }
            }
            Scheme::Muscl => {
                let d1: Vec<f64> = (0..n).map(|i| state.drho[i] + dt * drho[i]).collect();
                let mom1: Vec<f64> = (0..n).map(|i| state.mom[i] + dt * dmom[i]).collect();
                let stage = RadialState {
                    t: t_new,
                    grid: state.grid,
                    rho_bar: state.rho_bar,
                    drho: d1,
                    mom: mom1,
                    support_radius: state.support_radius,
                };
                self.check(&stage, t_new)?;
                let (mut drho2, mut dmom2) = (vec![0.0; n], vec![0.0; n]);
                self.rates(&stage.drho, &stage.mom, active, &mut drho2, &mut dmom2);
                for i in 0..n {
                    state.drho[i] += 0.5 * dt * (drho[i] + drho2[i]);
                    state.mom[i] += 0.5 * dt * (dmom[i] + dmom2[i]);
                }
            }
        }
        let decay = self.damping.decay_factor(state.t, t_new);
        for m in &mut state.mom {
            *m *= decay;
        }
        state.t = t_new;
        state.support_radius = (state.support_radius + growth).min(self.grid.r_max());
        self.check(state, t_new)
    }

    /// Advances by the CFL step and returns it.
    pub fn step(&self, state: &mut RadialState) -> std::result::Result<f64, Breakdown> {
        let dt = self.stable_dt(state);
        if !(dt > self.limits.min_dt) {
            return Err(Breakdown {
                t: state.t,
                cause: BreakdownCause::CflCollapse,
            });
        }
        self.step_dt(state, dt).map(|_| dt)
    }

    pub fn monitor_row(&self, state: &RadialState) -> Result<MonitorRow> {
        Ok(MonitorRow {
            t: state.t,
            l: l_functional(state, &self.gas),
            h: h_functional(state),
            e0: energy_e0(state, &self.gas, &self.damping)?,
            min_rho: state.min_density(),
            max_u: state.max_speed(),
            max_du_dr: state.max_velocity_gradient(),
            dt: self.stable_dt(state),
        })
    }

    /// Advances to `t_end` or the first breakdown, sampling on the cadence.
    pub fn run(&self, initial: RadialState, cfg: &RunConfig, monitors: &mut [&mut dyn Monitor]) -> Result<RunOutput> {
        if !(cfg.t_end > initial.t && cfg.t_end.is_finite()) {
            return Err(Error::config("run.t_end", format!("must exceed the start time, got {}", cfg.t_end)));
        }
        if !(cfg.monitor_every >= 0.0 && cfg.monitor_every.is_finite()) {
            return Err(Error::config(
                "run.monitor_cadence",
                format!("must be >= 0, got {}", cfg.monitor_every),
            ));
        }
        let mut out = RunOutput {
            rows: Vec::new(),
            snapshots: Vec::new(),
            verdict: Verdict::Global,
            horizon: initial.t,
            steps: 0,
        };
        let mut state = initial;
        let t0 = state.t;
        let g0 = state.max_velocity_gradient();
        let sample = |s: &RadialState, out: &mut RunOutput, monitors: &mut [&mut dyn Monitor]| -> Result<()> {
            out.rows.push(self.monitor_row(s)?);
            if cfg.keep_snapshots {
                out.snapshots.push(s.clone());
            }
            for m in monitors.iter_mut() {
                m.observe(s)?;
            }
            Ok(())
        };
        sample(&state, &mut out, monitors)?;
        let mut k = 1u64;
        while state.t < cfg.t_end {
            let dt = self.stable_dt(&state);
            if !(dt > self.limits.min_dt) {
                out.verdict = Breakdown {
                    t: state.t,
                    cause: BreakdownCause::CflCollapse,
                }
                .into();
                return Ok(out);
            }
            let target = if cfg.monitor_every > 0.0 {
                (t0 + k as f64 * cfg.monitor_every).min(cfg.t_end)
            } else {
                cfg.t_end
            };
            let (dt, hit) = if state.t + dt >= target {
                (target - state.t, true)
            } else {
                (dt, false)
            };
            if let Err(b) = self.step_dt(&mut state, dt) {
                out.verdict = b.into();
                return Ok(out);
            }
            if hit {
                state.t = target;
            }
            out.steps += 1;
            if g0 > 0.0 && state.max_velocity_gradient() >= self.limits.gradient_factor * g0 {
                out.verdict = Breakdown {
                    t: state.t,
                    cause: BreakdownCause::GradientThreshold,
                }
                .into();
                return Ok(out);
            }
            out.horizon = state.t;
            if cfg.monitor_every == 0.0 || hit {
                if hit && cfg.monitor_every > 0.0 {
                    k += 1;
                }
                sample(&state, &mut out, monitors)?;
            }
        }
        Ok(out)
    }
}
