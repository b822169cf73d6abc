use critdamp::damping::DampingLaw;
use critdamp::euler::{
    init_state, BreakdownLimits, EulerSolver, InitialProfile, RadialGrid, RadialState, RunConfig, Scheme, Shape,
};
use critdamp::gas::GasModel;
use critdamp::verdict::{BreakdownCause, Verdict};

fn solver(gas: GasModel, damping: DampingLaw, r_max: f64, n: usize, scheme: Scheme) -> EulerSolver {
    EulerSolver::new(gas, damping, RadialGrid::new(r_max, n).unwrap(), 0.4)
        .unwrap()
        .with_scheme(scheme)
}

fn mass(s: &RadialState) -> f64 {
    (0..s.grid.n_cells()).map(|i| s.grid.volume(i) * s.drho[i]).sum()
}

#[test]
fn background_state_is_a_fixed_point() {
    let gas = GasModel::new(1.4, 0.7).unwrap();
    for scheme in [Scheme::FirstOrder, Scheme::Muscl] {
        let sv = solver(gas, DampingLaw::new(1.0, 0.5).unwrap(), 5.0, 100, scheme);
        let mut s = RadialState::constant(sv.grid(), 0.7);
        s.support_radius = 5.0;
        for _ in 0..200 {
            sv.step(&mut s).unwrap();
        }
        assert!(s.densities().iter().all(|&r| r == 0.7), "{scheme:?}");
        assert!(s.mom.iter().all(|&m| m == 0.0), "{scheme:?}");
    }
}

#[test]
fn mass_is_conserved_to_rounding() {
    let gas = GasModel::new(1.4, 1.0).unwrap();
    let prof = InitialProfile::outgoing_shell(0.5, 1.0, 0.25, 1.0).unwrap();
    for scheme in [Scheme::FirstOrder, Scheme::Muscl] {
        let sv = solver(gas, DampingLaw::new(2.0, 0.0).unwrap(), 6.0, 300, scheme);
        let mut s = init_state(&gas, &prof, sv.grid()).unwrap();
        let m0 = mass(&s);
        for _ in 0..400 {
            sv.step(&mut s).unwrap();
        }
        assert!(((mass(&s) - m0) / m0).abs() < 1e-12, "{scheme:?}");
    }
}

/// Linear acoustics: for `u₀ = 0` and unit sound speed, `r δρ` solves the 1D
/// wave equation, so `δρ = (g(r-t) + g(r+t))/(2r)` with `g(s) = s f(|s|)`.
fn linear_density(f: &Shape, t: f64, r: f64) -> f64 {
    let g = |s: f64| s * f.value(s.abs());
    (g(r - t) + g(r + t)) / (2.0 * r)
}

#[test]
fn small_data_follow_linear_acoustics() {
    let gas = GasModel::new(1.4, 1.0).unwrap();
    let eps = 1e-6;
    let prof = InitialProfile::bump(eps, 1.0, 0.0).unwrap();
    let t_end = 1.5;
    let mut errors = Vec::new();
    for n in [200, 400, 800] {
        let sv = solver(gas, DampingLaw::new(0.0, 0.0).unwrap(), 4.0, n, Scheme::Muscl);
        let s0 = init_state(&gas, &prof, sv.grid()).unwrap();
        let cfg = RunConfig {
            t_end,
            monitor_every: t_end,
            keep_snapshots: true,
        };
        let out = sv.run(s0, &cfg, &mut []).unwrap();
        assert_eq!(out.verdict, Verdict::Global);
        let s = out.snapshots.last().unwrap();
        assert_eq!(s.t, t_end);
        let err = (0..n)
            .map(|i| {
                let r = s.grid.center(i);
                (s.drho[i] / eps - linear_density(&prof.rho0, t_end, r)).abs()
            })
            .fold(0.0, f64::max);
        errors.push(err);
    }
    assert!(errors[2] < 0.02, "{errors:?}");
    assert!(errors[0] / errors[1] > 1.5 && errors[1] / errors[2] > 1.5, "{errors:?}");
}

#[test]
fn domain_and_cfl_are_checked() {
    let gas = GasModel::new(1.4, 1.0).unwrap();
    let grid = RadialGrid::new(5.0, 100).unwrap();
    assert!(EulerSolver::new(gas, DampingLaw::new(1.0, 1.0).unwrap(), grid, 0.7).is_err());
    let sv = EulerSolver::new(gas, DampingLaw::new(1.0, 1.0).unwrap(), grid, 0.5).unwrap();
    let prof = InitialProfile::bump(0.1, 1.0, 0.0).unwrap();
    let s = init_state(&gas, &prof, grid).unwrap();
    assert!(sv.check_domain(&s, 1.0, 3.0).is_ok());
    assert_eq!(sv.check_domain(&s, 1.0, 10.0).unwrap_err().category(), "config");
}

#[test]
fn steepening_trips_the_gradient_limit() {
    let gas = GasModel::new(1.4, 1.0).unwrap();
    let prof = InitialProfile::outgoing_shell(30.0, 1.0, 0.25, 1.0).unwrap();
    let limits = BreakdownLimits {
        gradient_factor: 3.0,
        ..BreakdownLimits::default()
    };
    let sv = solver(gas, DampingLaw::new(0.1, 1.0).unwrap(), 8.0, 1000, Scheme::Muscl).with_limits(limits);
    let s = init_state(&gas, &prof, sv.grid()).unwrap();
    let cfg = RunConfig {
        t_end: 0.5,
        monitor_every: 0.1,
        keep_snapshots: false,
    };
    let out = sv.run(s, &cfg, &mut []).unwrap();
    match out.verdict {
        Verdict::NumericalBreakdown { t, cause } => {
            assert_eq!(cause, BreakdownCause::GradientThreshold);
            assert!(t < 0.5 && out.horizon <= t);
        }
        v => panic!("expected a breakdown, got {v}"),
    }
}
