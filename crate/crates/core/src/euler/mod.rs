//! Spherically symmetric damped Euler flow on a uniform radial grid.
//!
//! Cells are `[iΔr, (i+1)Δr]`. Cell averages are volume averages, so the
//! discrete mass `Σ Vᵢ (ρᵢ - ρ̄)` with `Vᵢ = ∫ r² dr` over the cell is what
//! the scheme conserves exactly. Every `4π` factor is applied by the
//! functionals, not here.

mod profile;
mod solver;

pub use profile::{InitialProfile, Shape};
pub use solver::{
    Breakdown, BreakdownLimits, EulerSolver, Monitor, MonitorRow, RunConfig, RunOutput, Scheme,
};

use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::numerics::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    n_cells: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, n_cells: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::config("grid.r_max", format!("must be > 0, got {r_max}")));
        }
        if n_cells < 32 {
            return Err(Error::config("grid.n_cells", format!("must be >= 32, got {n_cells}")));
        }
        Ok(RadialGrid { r_max, n_cells })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dr(&self) -> f64 {
        self.r_max / self.n_cells as f64
    }

    pub fn face(&self, i: usize) -> f64 {
        i as f64 * self.dr()
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr()
    }

    /// `∫ r² dr` over cell `i`.
    pub fn volume(&self, i: usize) -> f64 {
        let (a, b) = (self.face(i), self.face(i + 1));
        // (b³ - a³)/3 without cancellation.
        (b - a) * (a * a + a * b + b * b) / 3.0
    }

    /// Index of the cell containing `r`, clamped to the grid.
    pub fn cell_of(&self, r: f64) -> usize {
        ((r / self.dr()).floor().max(0.0) as usize).min(self.n_cells - 1)
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }
}

/// Cell-averaged density and momentum at one instant.
///
/// Density is stored as the excess `ρ - ρ̄`, so cells near the background
/// keep their low-order bits and the discrete mass sums without cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub t: f64,
    pub grid: RadialGrid,
    pub rho_bar: f64,
    /// `ρ - ρ̄` per cell.
    pub drho: Vec<f64>,
    pub mom: Vec<f64>,
    /// Every cell whose centre lies beyond this radius holds the background
    /// state `(ρ̄, 0)`.
    pub support_radius: f64,
}

impl RadialState {
    pub fn constant(grid: RadialGrid, rho_bar: f64) -> Self {
        RadialState {
            t: 0.0,
            grid,
            rho_bar,
            drho: vec![0.0; grid.n_cells()],
            mom: vec![0.0; grid.n_cells()],
            support_radius: 0.0,
        }
    }

    /// Rebuilds a state from stored density and momentum columns, e.g. a
    /// snapshot file.
    pub fn from_columns(t: f64, grid: RadialGrid, rho_bar: f64, rho: Vec<f64>, mom: Vec<f64>) -> Result<Self> {
        if rho.len() != grid.n_cells() || mom.len() != grid.n_cells() {
            return Err(Error::State(format!(
                "expected {} cells, got {} densities and {} momenta",
                grid.n_cells(),
                rho.len(),
                mom.len()
            )));
        }
        Ok(RadialState {
            t,
            grid,
            rho_bar,
            drho: rho.iter().map(|r| r - rho_bar).collect(),
            mom,
            support_radius: grid.r_max(),
        })
    }

    pub fn density(&self, i: usize) -> f64 {
        self.rho_bar + self.drho[i]
    }

    pub fn densities(&self) -> Vec<f64> {
        self.drho.iter().map(|d| self.rho_bar + d).collect()
    }

    pub fn velocity(&self) -> Vec<f64> {
        (0..self.mom.len()).map(|i| self.mom[i] / self.density(i)).collect()
    }

    pub fn min_density(&self) -> f64 {
        self.rho_bar + self.drho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_speed(&self) -> f64 {
        (0..self.mom.len()).fold(0.0, |a, i| a.max((self.mom[i] / self.density(i)).abs()))
    }

    /// Largest `|u_{i+1} - u_i| / Δr` over neighbouring cells.
    pub fn max_velocity_gradient(&self) -> f64 {
        let u = self.velocity();
        let jump = u.windows(2).fold(0.0f64, |a, w| a.max((w[1] - w[0]).abs()));
        jump / self.grid.dr()
    }
}

const CELL_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-15,
    rel_tol: 1e-13,
    max_panels: 2000,
};

/// Volume averages of `ε ρ₀` and `ρ ε u₀` over each cell.
///
/// Cells lying entirely beyond `M` are exactly `(ρ̄, 0)`.
pub fn init_state(gas: &GasModel, prof: &InitialProfile, grid: RadialGrid) -> Result<RadialState> {
    let rho_bar = gas.rho_bar();
    let mut state = RadialState::constant(grid, rho_bar);
    state.support_radius = grid.face(grid.cell_of(prof.m) + 1).min(grid.r_max());
    if prof.epsilon == 0.0 {
        return Ok(state);
    }
    let breaks = prof.breakpoints();
    for i in 0..grid.n_cells() {
        let (a, b) = (grid.face(i), grid.face(i + 1));
        if a >= prof.m {
            break;
        }
        let v = grid.volume(i);
        let drho = cell_integral(|r| r * r * prof.epsilon * prof.rho0.value(r), a, b, &breaks)? / v;
        let mom = cell_integral(|r| r * r * prof.density(rho_bar, r) * prof.velocity(r), a, b, &breaks)? / v;
        let rho = rho_bar + drho;
        if !(rho > 0.0) {
            return Err(Error::config(
                "profile.epsilon",
                format!("initial density {rho} <= 0 in cell {i}"),
            ));
        }
        state.drho[i] = drho;
        state.mom[i] = mom;
    }
    for r in breaks.iter().flat_map(|&x| [x, 0.5 * x]) {
        if prof.density(rho_bar, r) <= 0.0 {
            return Err(Error::config(
                "profile.epsilon",
                format!("initial density nonpositive at r = {r}"),
            ));
        }
    }
    Ok(state)
}

fn cell_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    let mut lo = a;
    for &x in breaks.iter().filter(|&&x| x > a && x < b) {
        total += integrate(&f, lo, x, CELL_QUAD)?.value;
        lo = x;
    }
    Ok(total + integrate(&f, lo, b, CELL_QUAD)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = RadialGrid::new(2.0, 40).unwrap();
        assert_eq!(g.dr(), 0.05);
        let total: f64 = (0..40).map(|i| g.volume(i)).sum();
        assert!((total - 8.0 / 3.0).abs() < 1e-14);
        assert_eq!(g.cell_of(0.051), 1);
        assert_eq!(g.cell_of(5.0), 39);
        assert!(RadialGrid::new(1.0, 31).is_err());
    }

    #[test]
    fn zero_amplitude_is_constant_state() {
        let gas = GasModel::new(1.4, 1.3).unwrap();
        let grid = RadialGrid::new(10.0, 64).unwrap();
        let s = init_state(&gas, &InitialProfile::bump(0.0, 1.0, 0.0).unwrap(), grid).unwrap();
        assert!(s.drho.iter().all(|&d| d == 0.0) && s.rho_bar == 1.3);
        assert!(s.mom.iter().all(|&m| m == 0.0));
        let z = InitialProfile::new(Shape::Zero, Shape::Zero, 1.0, 1.0, 0.0).unwrap();
        let s2 = init_state(&gas, &z, grid).unwrap();
        assert_eq!(s.drho, s2.drho);
    }

    #[test]
    fn cell_mass_matches_profile_integral() {
        let gas = GasModel::new(2.0, 1.0).unwrap();
        let grid = RadialGrid::new(4.0, 100).unwrap();
        let prof = InitialProfile::bump(0.3, 1.3, 0.2).unwrap();
        let s = init_state(&gas, &prof, grid).unwrap();
        let mass: f64 = (0..100).map(|i| grid.volume(i) * s.drho[i]).sum();
        let q = integrate(|r| r * r * 0.3 * prof.rho0.value(r), 0.0, 1.3, QuadOptions::default())
            .unwrap()
            .value;
        assert!((mass - q).abs() < 1e-12);
        assert!(s.drho[grid.cell_of(1.3) + 1..].iter().all(|&d| d == 0.0));
    }

    #[test]
    fn rejects_vacuum_data() {
        let gas = GasModel::new(2.0, 0.1).unwrap();
        let grid = RadialGrid::new(4.0, 100).unwrap();
        let prof = InitialProfile::bump(-0.0, 1.0, 0.0).unwrap();
        assert!(init_state(&gas, &prof, grid).is_ok());
        let deep = InitialProfile::new(
            Shape::Scaled(-1.0, Box::new(Shape::Bump { radius: 1.0 })),
            Shape::Zero,
            1.0,
            1.0,
            0.0,
        )
        .unwrap();
        assert_eq!(init_state(&gas, &deep, grid).unwrap_err().category(), "config");
    }
}
