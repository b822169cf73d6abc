//! Configuration and orchestration of runs; the only place that touches
//! the filesystem.
//!
//! Every mode writes into `output.dir`. Numbers are printed in shortest
//! round-trip form, so identical configurations give identical bytes.

mod config;
mod io;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

pub use config::{
    known_keys, parse_config, BreakdownName, ConfigMap, ExperimentConfig, Mode, ProfileKind, SchemeName,
};
pub use io::{csv_row, num, read_snapshots, write_snapshots, SnapshotBlock};

use crate::burgers::{
    simulate_fv, BreakdownRule, Bump1d, BurgersProblem, CutoffRamp, FvConfig, Profile1d, TabulatedProfile,
};
use crate::damping::DampingLaw;
use crate::error::{Error, Result};
use crate::euler::{
    init_state, BreakdownLimits, EulerSolver, InitialProfile, MonitorRow, RadialGrid, RadialState, RunConfig,
    Scheme,
};
use crate::functionals::{blowup_criterion, critical_horizon, h_functional, l_functional};
use crate::gas::GasModel;
use crate::verdict::Verdict;

pub const SERIES_HEADER: [&str; 8] = ["t", "L", "H", "E0", "min_rho", "max_u", "max_du_dr", "dt"];
pub const SNAPSHOT_HEADER: [&str; 4] = ["t", "r", "rho", "mom"];
pub const BURGERS_SERIES_HEADER: [&str; 5] = ["t", "Q", "max_abs_w", "max_dw_dx", "dt"];
pub const BURGERS_SNAPSHOT_HEADER: [&str; 3] = ["t", "x", "w"];
pub const SWEEP_HEADER: [&str; 5] = ["lambda", "mu", "epsilon", "verdict", "T_or_horizon"];

/// Environment variable holding the sweep worker count.
pub const THREADS_ENV: &str = "CRITDAMP_THREADS";

/// What a finished run reports besides its files.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mode: Mode,
    /// `None` for modes without a single verdict (sweeps, `functionals`).
    pub verdict: Option<Verdict>,
    pub files: Vec<PathBuf>,
}

/// One row of `sweep.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub mu: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    /// Lifespan or breakdown time; the horizon for a global simulation and
    /// `inf` for a global lifespan.
    pub t_or_horizon: f64,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Summary> {
    fs::create_dir_all(&cfg.output_dir)?;
    match cfg.mode {
        Mode::BurgersLifespan if cfg.has_sweep() => run_sweep(cfg, Mode::BurgersLifespan),
        Mode::BurgersLifespan => burgers_lifespan(cfg),
        Mode::BurgersSim => burgers_sim(cfg, &cfg.output_dir).map(|(s, _)| s),
        Mode::EulerSim => euler_sim(cfg, &cfg.output_dir).map(|(s, _)| s),
        Mode::Functionals => functionals(cfg),
        Mode::Criterion => criterion(cfg),
        Mode::Sweep => run_sweep(cfg, cfg.sweep_target),
    }
}

pub fn gas_of(cfg: &ExperimentConfig) -> Result<GasModel> {
    GasModel::new(cfg.gamma, cfg.rho_bar)
}

pub fn damping_of(cfg: &ExperimentConfig) -> Result<DampingLaw> {
    DampingLaw::new(cfg.mu, cfg.lambda)
}

pub fn burgers_profile(cfg: &ExperimentConfig) -> Result<Arc<dyn Profile1d>> {
    Ok(match cfg.profile {
        ProfileKind::Bump => Arc::new(Bump1d {
            center: 0.0,
            half_width: cfg.m,
            amplitude: 1.0,
        }),
        ProfileKind::Ramp => Arc::new(CutoffRamp::new(cfg.m / 3.0, cfg.m)?),
        ProfileKind::File => {
            let cols = io::read_table(profile_path(cfg)?, 3)?;
            let [x, w, dw]: [Vec<f64>; 3] = cols.try_into().expect("three columns");
            Arc::new(TabulatedProfile::new(x, w, dw)?)
        }
        ProfileKind::Shell | ProfileKind::OutgoingShell => {
            return Err(Error::config(
                "profile.kind",
                format!("'{}' is a radial profile; use bump, ramp or file", cfg.profile.as_str()),
            ))
        }
    })
}

pub fn burgers_problem(cfg: &ExperimentConfig) -> Result<BurgersProblem> {
    Ok(BurgersProblem::new(burgers_profile(cfg)?, cfg.epsilon, damping_of(cfg)?)?.with_scan_points(cfg.scan_points))
}

pub fn radial_profile(cfg: &ExperimentConfig) -> Result<InitialProfile> {
    match cfg.profile {
        ProfileKind::Bump => InitialProfile::bump(cfg.epsilon, cfg.m, cfg.m0),
        ProfileKind::Shell => InitialProfile::shell(cfg.epsilon, cfg.m, cfg.m0),
        ProfileKind::OutgoingShell => InitialProfile::outgoing_shell(cfg.epsilon, cfg.m, cfg.m0, cfg.rho_bar),
        ProfileKind::File => {
            let cols = io::read_table(profile_path(cfg)?, 3)?;
            let [r, rho0, u0]: [Vec<f64>; 3] = cols.try_into().expect("three columns");
            InitialProfile::tabulated(r, rho0, u0, cfg.epsilon, cfg.m0)
        }
        ProfileKind::Ramp => Err(Error::config(
            "profile.kind",
            "'ramp' is a one-dimensional profile; use bump, shell, outgoing-shell or file",
        )),
    }
}

fn profile_path(cfg: &ExperimentConfig) -> Result<&Path> {
    cfg.profile_path
        .as_deref()
        .ok_or_else(|| Error::config("profile.path", "required when profile.kind = file"))
}

pub fn euler_solver(cfg: &ExperimentConfig) -> Result<EulerSolver> {
    if cfg.breakdown == BreakdownName::UnresolvedJump {
        return Err(Error::config(
            "run.breakdown",
            "unresolved-jump applies to burgers-sim only",
        ));
    }
    let grid = RadialGrid::new(cfg.r_max, cfg.n_cells)?;
    let limits = BreakdownLimits {
        gradient_factor: cfg.breakdown_value.unwrap_or(BreakdownLimits::default().gradient_factor),
        ..BreakdownLimits::default()
    };
    if !(limits.gradient_factor > 1.0) {
        return Err(Error::config("run.breakdown_value", "gradient multiple must be > 1"));
    }
    let scheme = match cfg.scheme {
        SchemeName::FirstOrder => Scheme::FirstOrder,
        SchemeName::Muscl => Scheme::Muscl,
    };
    Ok(EulerSolver::new(gas_of(cfg)?, damping_of(cfg)?, grid, cfg.cfl)?
        .with_scheme(scheme)
        .with_limits(limits))
}

fn burgers_rule(cfg: &ExperimentConfig) -> BreakdownRule {
    match (cfg.breakdown, cfg.breakdown_value) {
        (BreakdownName::GradientMultiple, Some(k)) => BreakdownRule::InitialGradientMultiple(k),
        (BreakdownName::GradientMultiple, None) => BreakdownRule::default(),
        (BreakdownName::UnresolvedJump, v) => BreakdownRule::UnresolvedJump(v.unwrap_or(0.25)),
    }
}

/// `k·cadence` for `k = 0, 1, ...` up to and including `t_end`.
fn cadence_times(cadence: f64, t_end: f64) -> Vec<f64> {
    if cadence <= 0.0 {
        return vec![0.0, t_end];
    }
    let mut v: Vec<f64> = (0..)
        .map(|k| k as f64 * cadence)
        .take_while(|&t| t < t_end)
        .collect();
    v.push(t_end);
    v
}

fn verdict_text(cfg: &ExperimentConfig, verdict: &Verdict, extra: &[(&str, String)]) -> String {
    let mut s = format!("verdict = {verdict}\nmode = {}\n", cfg.mode);
    for (k, v) in extra {
        let _ = writeln!(s, "{k} = {v}");
    }
    for (k, v) in &cfg.echo {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

fn write_file(dir: &Path, name: &str, body: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body)?;
    files.push(path);
    Ok(())
}

fn burgers_lifespan(cfg: &ExperimentConfig) -> Result<Summary> {
    let problem = burgers_problem(cfg)?;
    let m = problem.max_negative_slope();
    let verdict = problem.lifespan_for_slope(m)?;
    let mut files = Vec::new();
    let body = verdict_text(cfg, &verdict, &[("max_negative_slope", num(m))]);
    write_file(&cfg.output_dir, "verdict.txt", &body, &mut files)?;
    Ok(Summary {
        mode: cfg.mode,
        verdict: Some(verdict),
        files,
    })
}

fn burgers_sim(cfg: &ExperimentConfig, dir: &Path) -> Result<(Summary, f64)> {
    let problem = burgers_problem(cfg)?;
    let mut fv = FvConfig::new(&problem, cfg.n_cells, cfg.t_end, cfg.cfl);
    if let Some(r) = cfg.x_range {
        fv.x_range = r;
    }
    fv.rule = burgers_rule(cfg);
    fv.snapshot_times = cadence_times(cfg.monitor_cadence, cfg.t_end);
    let out = simulate_fv(&problem, &fv)?;

    let mut series = BURGERS_SERIES_HEADER.join(",");
    series.push('\n');
    for s in &out.series {
        series.push_str(&csv_row(&[s.t, s.total, s.max_abs, s.max_slope, s.dt]));
        series.push('\n');
    }
    let blocks: Vec<SnapshotBlock> = out
        .snapshots
        .iter()
        .map(|s| SnapshotBlock {
            t: s.t,
            columns: vec![out.centers.clone(), s.w.clone()],
        })
        .collect();
    let horizon = out.final_time();
    let mut files = Vec::new();
    write_file(dir, "series.csv", &series, &mut files)?;
    write_file(dir, "snapshots.csv", &write_snapshots(&BURGERS_SNAPSHOT_HEADER, &blocks), &mut files)?;
    let extra = [("horizon", num(horizon)), ("steps", out.steps.to_string())];
    write_file(dir, "verdict.txt", &verdict_text(cfg, &out.verdict, &extra), &mut files)?;
    Ok((
        Summary {
            mode: Mode::BurgersSim,
            verdict: Some(out.verdict),
            files,
        },
        horizon,
    ))
}

fn series_csv(rows: &[MonitorRow]) -> String {
    let mut s = SERIES_HEADER.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&csv_row(&[r.t, r.l, r.h, r.e0, r.min_rho, r.max_u, r.max_du_dr, r.dt]));
        s.push('\n');
    }
    s
}

fn state_block(s: &RadialState) -> SnapshotBlock {
    SnapshotBlock {
        t: s.t,
        columns: vec![s.grid.centers(), s.densities(), s.mom.clone()],
    }
}

fn euler_sim(cfg: &ExperimentConfig, dir: &Path) -> Result<(Summary, f64)> {
    let solver = euler_solver(cfg)?;
    let gas = *solver.gas();
    let prof = radial_profile(cfg)?;
    let state = init_state(&gas, &prof, solver.grid())?;
    solver.check_domain(&state, prof.m, cfg.t_end)?;
    let run = RunConfig {
        t_end: cfg.t_end,
        monitor_every: cfg.monitor_cadence,
        keep_snapshots: false,
    };
    let mut blocks = Vec::new();
    let mut keep = |s: &RadialState| -> Result<()> {
        blocks.push(state_block(s));
        Ok(())
    };
    let out = solver.run(state, &run, &mut [&mut keep])?;

    let mut files = Vec::new();
    write_file(dir, "series.csv", &series_csv(&out.rows), &mut files)?;
    write_file(dir, "snapshots.csv", &write_snapshots(&SNAPSHOT_HEADER, &blocks), &mut files)?;
    let extra = [("horizon", num(out.horizon)), ("steps", out.steps.to_string())];
    write_file(dir, "verdict.txt", &verdict_text(cfg, &out.verdict, &extra), &mut files)?;
    Ok((
        Summary {
            mode: Mode::EulerSim,
            verdict: Some(out.verdict),
            files,
        },
        out.horizon,
    ))
}

/// Rebuilds the monitor series from a snapshot file written by `euler-sim`.
fn functionals(cfg: &ExperimentConfig) -> Result<Summary> {
    let solver = euler_solver(cfg)?;
    let grid = solver.grid();
    let path = cfg
        .input_snapshots
        .clone()
        .unwrap_or_else(|| cfg.output_dir.join("snapshots.csv"));
    let text = fs::read_to_string(&path)?;
    let blocks = read_snapshots(&text, &SNAPSHOT_HEADER)?;
    let centers = grid.centers();
    let mut rows = Vec::with_capacity(blocks.len());
    for b in blocks {
        let [r, rho, mom]: [Vec<f64>; 3] = b.columns.try_into().expect("three columns");
        if r.len() != centers.len() || r.iter().zip(&centers).any(|(a, c)| (a - c).abs() > 1e-9 * grid.dr()) {
            return Err(Error::config(
                "grid.n_cells",
                format!("snapshot at t = {:?} does not match the configured grid", b.t),
            ));
        }
        let state = RadialState::from_columns(b.t, grid, cfg.rho_bar, rho, mom)?;
        rows.push(solver.monitor_row(&state)?);
    }
    let mut files = Vec::new();
    write_file(&cfg.output_dir, "series.csv", &series_csv(&rows), &mut files)?;
    Ok(Summary {
        mode: Mode::Functionals,
        verdict: None,
        files,
    })
}

fn criterion(cfg: &ExperimentConfig) -> Result<Summary> {
    let gas = gas_of(cfg)?;
    let damping = damping_of(cfg)?;
    let (h0, l0) = match (cfg.criterion_h0, cfg.criterion_l0) {
        (Some(h), Some(l)) => (h, l),
        (h, l) => {
            let prof = radial_profile(cfg)?;
            let state = init_state(&gas, &prof, RadialGrid::new(cfg.r_max, cfg.n_cells)?)?;
            (
                h.unwrap_or_else(|| h_functional(&state)),
                l.unwrap_or_else(|| l_functional(&state, &gas)),
            )
        }
    };
    let t_star = cfg.criterion_t_star.unwrap_or(cfg.t_end);
    let report = blowup_criterion(h0, l0, cfg.m, &damping, &gas, t_star)?;
    let critical = critical_horizon(h0, l0, cfg.m, &damping, &gas)?;
    let mut body = report.to_string();
    let _ = writeln!(body, "critical_T_star = {}", critical.map_or("none".to_string(), num));
    body.push_str("mode = criterion\n");
    for (k, v) in &cfg.echo {
        let _ = writeln!(body, "{k} = {v}");
    }
    let mut files = Vec::new();
    write_file(&cfg.output_dir, "verdict.txt", &body, &mut files)?;
    Ok(Summary {
        mode: Mode::Criterion,
        verdict: None,
        files,
    })
}

/// Worker count from [`THREADS_ENV`], else the number of logical CPUs.
pub fn sweep_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::config(THREADS_ENV, format!("expected a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Runs every `(λ, μ, ε)` point of the sweep lists; rows come back in list
/// order whatever the thread count.
pub fn sweep(cfg: &ExperimentConfig, target: Mode, threads: usize) -> Result<Vec<SweepRow>> {
    let points = cfg.sweep_points();
    for &(l, m, e) in &points {
        DampingLaw::new(m, l)?;
        if !(e >= 0.0) {
            return Err(Error::config("sweep.epsilon", format!("must be >= 0, got {e}")));
        }
    }
    // The slope scan depends only on the profile.
    let base = match target {
        Mode::BurgersLifespan => {
            let p = burgers_problem(cfg)?;
            let m = p.max_negative_slope();
            Some((p, m))
        }
        _ => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let run_point = |(i, &(lambda, mu, epsilon)): (usize, &(f64, f64, f64))| -> Result<SweepRow> {
        let damping = DampingLaw::new(mu, lambda)?;
        let (verdict, horizon) = match (&base, target) {
            (Some((p, m)), _) => {
                let v = p.with_parameters(epsilon, damping)?.lifespan_for_slope(*m)?;
                (v, f64::INFINITY)
            }
            (None, Mode::BurgersSim | Mode::EulerSim) => {
                let mut sub = cfg.clone();
                sub.mode = target;
                sub.lambda = lambda;
                sub.mu = mu;
                sub.epsilon = epsilon;
                for (k, v) in sub.echo.iter_mut() {
                    match k.as_str() {
                        "damping.lambda" => *v = num(lambda),
                        "damping.mu" => *v = num(mu),
                        "profile.epsilon" => *v = num(epsilon),
                        _ => {}
                    }
                }
                let dir = cfg.output_dir.join(format!("run-{i:04}"));
                fs::create_dir_all(&dir)?;
                let (s, h) = if target == Mode::BurgersSim {
                    burgers_sim(&sub, &dir)?
                } else {
                    euler_sim(&sub, &dir)?
                };
                (s.verdict.expect("simulation verdict"), h)
            }
            _ => return Err(Error::config("sweep.target", format!("cannot sweep mode {target}"))),
        };
        Ok(SweepRow {
            lambda,
            mu,
            epsilon,
            t_or_horizon: verdict.time().unwrap_or(horizon),
            verdict,
        })
    };
    pool.install(|| points.par_iter().enumerate().map(run_point).collect())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = SWEEP_HEADER.join(",");
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{:?},{:?},{:?},{},{:?}",
            r.lambda, r.mu, r.epsilon, r.verdict, r.t_or_horizon
        );
    }
    s
}

fn run_sweep(cfg: &ExperimentConfig, target: Mode) -> Result<Summary> {
    let rows = sweep(cfg, target, sweep_threads()?)?;
    let mut files = Vec::new();
    write_file(&cfg.output_dir, "sweep.csv", &sweep_csv(&rows), &mut files)?;
    Ok(Summary {
        mode: cfg.mode,
        verdict: None,
        files,
    })
}
