//! Full approximation scheme multigrid.
//!
//! One cycle on level `h` with current iterate `x` and right-hand side `f`:
//!
//! 1. `nu1` smoothing steps;
//! 2. `r_H = R (f - A_h x)`, `u_H = R x`;
//! 3. solve `A_H(v) = A_H(u_H) + r_H` approximately by `gamma` recursive
//!    cycles started from `u_H` (exactly on the coarsest level);
//! 4. `x += P (v - u_H)`;
//! 5. `nu2` smoothing steps.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::StaggeredGrid;
use crate::operator::{Discretization, MixedDimVector};
use crate::problem::ProblemSpec;
use crate::transfer::{InterfaceTransfer, TransferPair};
use crate::vanka::{smoothing_step, SmootherConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum CycleType {
    V,
    #[default]
    W,
}

impl CycleType {
    /// Number of coarse-grid visits per cycle.
    pub fn gamma(self) -> usize {
        match self {
            CycleType::V => 1,
            CycleType::W => 2,
        }
    }
}

impl std::str::FromStr for CycleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V" | "v" => Ok(CycleType::V),
            "W" | "w" => Ok(CycleType::W),
            _ => Err(Error::Config {
                key: "cycle.cycle_type".into(),
                message: format!("expected V or W, got {s:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CoarseSolver {
    /// Newton with the exact Jacobian.
    #[default]
    Newton,
    /// Fixed point with the Forchheimer factor frozen at the last iterate.
    Picard,
}

/// How residuals are restricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResidualWeighting {
    /// Same operator as for approximations.
    Plain,
    /// Rows are first brought to pointwise form with the discretization's
    /// row weights, restricted, and scaled back on the coarse grid.
    #[default]
    Consistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CycleConfig {
    pub cycle_type: CycleType,
    pub pre_smoothing: usize,
    pub post_smoothing: usize,
    /// Stop once the residual norm has dropped by this factor.
    pub tol: f64,
    pub max_cycles: usize,
    /// Cells per subdomain and direction on the coarsest level.
    pub coarsest: usize,
    pub coarse_solver: CoarseSolver,
    pub coarse_tol: f64,
    pub coarse_max_iter: usize,
    pub interface_transfer: InterfaceTransfer,
    pub residual_weighting: ResidualWeighting,
    /// Stored in its own section of a run configuration.
    #[serde(skip)]
    pub smoother: SmootherConfig,
}

impl Default for CycleConfig {
    fn default() -> Self {
        Self {
            cycle_type: CycleType::W,
            pre_smoothing: 2,
            post_smoothing: 2,
            tol: 1e-10,
            max_cycles: 50,
            coarsest: 4,
            coarse_solver: CoarseSolver::Newton,
            coarse_tol: 1e-12,
            coarse_max_iter: 50,
            interface_transfer: InterfaceTransfer::Line,
            residual_weighting: ResidualWeighting::Consistent,
            smoother: SmootherConfig::default(),
        }
    }
}

impl CycleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: String| Error::Config {
            key: key.into(),
            message,
        };
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(bad(
                "cycle.tol",
                format!("must lie in (0, 1), got {}", self.tol),
            ));
        }
        if self.max_cycles == 0 {
            return Err(bad("cycle.max_cycles", "must be positive".into()));
        }
        if self.coarsest < 1 {
            return Err(bad("cycle.coarsest", "must be positive".into()));
        }
        self.smoother.validate()
    }
}

/// Outcome of a multigrid solve.
#[derive(Debug, Clone)]
pub struct SolverReport {
    /// Residual norm before each cycle and after the last one.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: Duration,
    pub solution: MixedDimVector,
    /// Cycles after which the residual norm grew.
    pub non_monotone_steps: usize,
}

impl SolverReport {
    pub fn final_relative_residual(&self) -> f64 {
        let r0 = self.history[0];
        let last = *self.history.last().unwrap();
        if r0 == 0.0 {
            0.0
        } else {
            last / r0
        }
    }

    /// Geometric mean of the per-cycle reduction factors.
    pub fn mean_reduction(&self) -> f64 {
        if self.iterations == 0 {
            return 0.0;
        }
        self.final_relative_residual()
            .powf(1.0 / self.iterations as f64)
    }
}

struct Level {
    disc: Discretization,
    /// Transfers to the next coarser level.
    transfer: Option<TransferPair>,
}

/// Discretizations and transfers of all levels, finest first.
pub struct Hierarchy {
    levels: Vec<Level>,
    cfg: CycleConfig,
}

impl Hierarchy {
    pub fn new(spec: &ProblemSpec, grid: &StaggeredGrid, cfg: &CycleConfig) -> Result<Self> {
        cfg.validate()?;
        let n = grid.cells_per_subdomain();
        if n < cfg.coarsest
            || !n.is_multiple_of(cfg.coarsest)
            || !(n / cfg.coarsest).is_power_of_two()
        {
            return Err(Error::NotCoarsenable(n));
        }
        let mut levels = Vec::new();
        let mut g = grid.clone();
        loop {
            let disc = Discretization::new(spec, &g)?;
            if g.cells_per_subdomain() == cfg.coarsest {
                levels.push(Level {
                    disc,
                    transfer: None,
                });
                break;
            }
            let t = TransferPair::new(&g, cfg.interface_transfer)?;
            g = t.coarse().clone();
            levels.push(Level {
                disc,
                transfer: Some(t),
            });
        }
        Ok(Self {
            levels,
            cfg: cfg.clone(),
        })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> &Discretization {
        &self.levels[0].disc
    }

    pub fn level(&self, l: usize) -> &Discretization {
        &self.levels[l].disc
    }

    pub fn config(&self) -> &CycleConfig {
        &self.cfg
    }

    fn zero_fixed(disc: &Discretization, v: &mut MixedDimVector) {
        for &f in disc.fixed_dofs() {
            v[f] = 0.0;
        }
    }

    fn restrict_residual(&self, l: usize, r: &MixedDimVector) -> Result<MixedDimVector> {
        let t = self.levels[l].transfer.as_ref().unwrap();
        let mut out = match self.cfg.residual_weighting {
            ResidualWeighting::Plain => t.restrict(r)?,
            ResidualWeighting::Consistent => t.restrict_weighted(
                r,
                self.levels[l].disc.row_weights(),
                self.levels[l + 1].disc.row_weights(),
            )?,
        };
        Self::zero_fixed(&self.levels[l + 1].disc, &mut out);
        Ok(out)
    }

    fn smooth(&self, l: usize, x: &mut MixedDimVector, rhs: &MixedDimVector, steps: usize) {
        let disc = &self.levels[l].disc;
        for _ in 0..steps {
            smoothing_step(disc, x, rhs, &self.cfg.smoother);
        }
    }

    /// One FAS cycle on level `l`.
    pub fn fas_cycle(&self, l: usize, x: &mut MixedDimVector, rhs: &MixedDimVector) -> Result<()> {
        let level = &self.levels[l];
        let Some(t) = &level.transfer else {
            coarse_solve(&level.disc, x, rhs, &self.cfg)?;
            return Ok(());
        };
        self.smooth(l, x, rhs, self.cfg.pre_smoothing);
        let r = level.disc.residual_with(x, rhs)?;
        let r_coarse = self.restrict_residual(l, &r)?;
        let u_coarse = t.restrict(x)?;
        let coarse = &self.levels[l + 1].disc;
        let mut rhs_coarse = coarse.apply(&u_coarse)?;
        rhs_coarse.axpy(1.0, &r_coarse);
        let mut v = u_coarse.clone();
        for _ in 0..self.cfg.cycle_type.gamma() {
            self.fas_cycle(l + 1, &mut v, &rhs_coarse)?;
        }
        let mut e = t.prolong(&v.sub(&u_coarse))?;
        Self::zero_fixed(&level.disc, &mut e);
        x.axpy(1.0, &e);
        self.smooth(l, x, rhs, self.cfg.post_smoothing);
        Ok(())
    }

    /// One correction-scheme cycle for the linear part of the operator.
    /// Coincides with `fas_cycle` when the problem is linear.
    pub fn linear_cycle(
        &self,
        l: usize,
        x: &mut MixedDimVector,
        rhs: &MixedDimVector,
    ) -> Result<()> {
        let level = &self.levels[l];
        let Some(t) = &level.transfer else {
            let lu = level.disc.factor(level.disc.linear_part())?;
            let r = level.disc.residual_with(x, rhs)?;
            let e = lu.solve(&r);
            for (xi, ei) in x.iter_mut().zip(e) {
                *xi += ei;
            }
            return Ok(());
        };
        self.smooth(l, x, rhs, self.cfg.pre_smoothing);
        let r = level.disc.residual_with(x, rhs)?;
        let r_coarse = self.restrict_residual(l, &r)?;
        let coarse_grid = self.levels[l + 1].disc.grid();
        let mut e_coarse = MixedDimVector::zeros(coarse_grid);
        for _ in 0..self.cfg.cycle_type.gamma() {
            self.linear_cycle(l + 1, &mut e_coarse, &r_coarse)?;
        }
        let mut e = t.prolong(&e_coarse)?;
        Self::zero_fixed(&level.disc, &mut e);
        x.axpy(1.0, &e);
        self.smooth(l, x, rhs, self.cfg.post_smoothing);
        Ok(())
    }

    /// Iterates cycles from `x` until the residual has dropped by `tol`.
    pub fn solve_from(&self, mut x: MixedDimVector, linear: bool) -> Result<SolverReport> {
        let start = Instant::now();
        let disc = self.finest();
        let rhs = disc.rhs().clone();
        let r0 = disc.residual(&x)?.norm();
        let mut history = vec![r0];
        let mut converged = r0 == 0.0;
        let mut non_monotone = 0;
        let mut iterations = 0;
        while !converged && iterations < self.cfg.max_cycles {
            if linear {
                self.linear_cycle(0, &mut x, &rhs)?;
            } else {
                self.fas_cycle(0, &mut x, &rhs)?;
            }
            iterations += 1;
            let r = disc.residual(&x)?.norm();
            if r > *history.last().unwrap() {
                non_monotone += 1;
            }
            history.push(r);
            if !r.is_finite() {
                break;
            }
            converged = r <= self.cfg.tol * r0;
        }
        Ok(SolverReport {
            history,
            iterations,
            converged,
            wall_time: start.elapsed(),
            solution: x,
            non_monotone_steps: non_monotone,
        })
    }
}

/// Solves `A(x) = rhs` on a single grid, starting from `x`.
pub fn coarse_solve(
    disc: &Discretization,
    x: &mut MixedDimVector,
    rhs: &MixedDimVector,
    cfg: &CycleConfig,
) -> Result<()> {
    let mut r = disc.residual_with(x, rhs)?;
    let r0 = r.norm();
    // roundoff floor of the residual evaluation
    let floor = 1e-14 * (rhs.norm() + disc.apply(x)?.norm());
    let mut rn = r0;
    for it in 0..cfg.coarse_max_iter {
        if rn <= cfg.coarse_tol * r0 || rn <= floor {
            return Ok(());
        }
        let m = match cfg.coarse_solver {
            CoarseSolver::Newton => disc.jacobian(x)?.into_matrix(),
            CoarseSolver::Picard => disc.picard_matrix(x)?,
        };
        let lu = disc.factor(&m)?;
        let dx = lu.solve(&r);
        let step = dx.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        r = disc.residual_with(x, rhs)?;
        rn = r.norm();
        if !rn.is_finite() {
            return Err(Error::CoarseSolve {
                residual: rn,
                iterations: it + 1,
            });
        }
        if step <= 1e-15 * x.norm() {
            return Ok(());
        }
    }
    if rn <= cfg.coarse_tol * r0 || rn <= floor {
        return Ok(());
    }
    Err(Error::CoarseSolve {
        residual: rn,
        iterations: cfg.coarse_max_iter,
    })
}

/// FAS solve from the zero initial guess.
pub fn solve(spec: &ProblemSpec, grid: &StaggeredGrid, cfg: &CycleConfig) -> Result<SolverReport> {
    let h = Hierarchy::new(spec, grid, cfg)?;
    h.solve_from(MixedDimVector::zeros(grid), false)
}

/// Linear correction-scheme multigrid on the linear part of the operator.
pub fn solve_linear(
    spec: &ProblemSpec,
    grid: &StaggeredGrid,
    cfg: &CycleConfig,
) -> Result<SolverReport> {
    let h = Hierarchy::new(spec, grid, cfg)?;
    h.solve_from(MixedDimVector::zeros(grid), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, Extents};
    use crate::problem::slab_test_problem;

    #[test]
    fn single_level_is_direct_solve() {
        let (spec, grid) = slab_test_problem(4, 1e-2, 100.0).unwrap();
        let r = solve(&spec, &grid, &CycleConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn non_coarsenable_rejected() {
        let (spec, _) = slab_test_problem(8, 1e-2, 10.0).unwrap();
        let grid = build_grid(Extents::unit_slab(), 5).unwrap();
        assert!(matches!(
            solve(&spec, &grid, &CycleConfig::default()),
            Err(Error::NotCoarsenable(5))
        ));
        let grid = build_grid(Extents::unit_slab(), 12).unwrap();
        assert!(matches!(
            solve(&spec, &grid, &CycleConfig::default()),
            Err(Error::NotCoarsenable(12))
        ));
    }

    #[test]
    fn converges_on_small_problem() {
        let (spec, grid) = slab_test_problem(16, 1e-4, 10.0).unwrap();
        let r = solve(&spec, &grid, &CycleConfig::default()).unwrap();
        assert!(r.converged, "{:?}", r.history);
        assert!(r.iterations <= 15, "{:?}", r.history);
    }

    #[test]
    fn cycle_type_parses() {
        assert_eq!("V".parse::<CycleType>().unwrap(), CycleType::V);
        assert_eq!("w".parse::<CycleType>().unwrap(), CycleType::W);
        assert!("F".parse::<CycleType>().is_err());
    }

    #[test]
    fn bad_tolerance_rejected() {
        let cfg = CycleConfig {
            tol: 0.0,
            ..CycleConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
