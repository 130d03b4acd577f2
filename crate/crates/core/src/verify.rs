//! Numerical self-checks of the discretization, the transfers and the solver.

use std::fmt;

use crate::error::{Error, Result};
use crate::fas::{CycleConfig, Hierarchy};
use crate::grid::{StaggeredGrid, UnknownClass};
use crate::operator::{Discretization, MixedDimVector};
use crate::oracle::{compare, newton_solve, NewtonConfig};
use crate::problem::ProblemSpec;
use crate::sparse::CsrMatrix;
use crate::transfer::{InterfaceTransfer, TransferPair};
use crate::vanka::{smoothing_step, SmootherConfig};

/// A measured quantity and the bound it must respect.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tol,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:.3e} (tol {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tol
        )
    }
}

/// Column-wise relative difference between the analytic Jacobian at `x`
/// and central differences of the operator. Meaningful for states whose
/// rows are not dominated by cancellation, e.g. near a solution.
pub fn jacobian_fd_error(disc: &Discretization, x: &MixedDimVector) -> Result<f64> {
    let jac = disc.jacobian(x)?;
    let n = x.len();
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (r, c, v) in jac.matrix().triplets() {
        columns[c].push((r, v));
    }
    let layout = x.layout();
    let block_scale = |j: usize| {
        let b = x.block(layout.block_of(j));
        b.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-12)
    };
    let mut worst: f64 = 0.0;
    let mut xp = x.clone();
    for (j, col) in columns.iter().enumerate() {
        let h = 1e-5 * x[j].abs().max(1e-6 * block_scale(j));
        xp[j] = x[j] + h;
        let ap = disc.apply(&xp)?;
        xp[j] = x[j] - h;
        let am = disc.apply(&xp)?;
        xp[j] = x[j];
        let mut fd: Vec<f64> = ap
            .iter()
            .zip(am.iter())
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        let norm = col.iter().map(|e| e.1.abs()).fold(0.0, f64::max);
        for &(r, v) in col {
            fd[r] -= v;
        }
        let diff = fd.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if norm > 0.0 {
            worst = worst.max(diff / norm);
        } else {
            worst = worst.max(diff);
        }
    }
    Ok(worst)
}

/// `max |m_ij - m_ji|`.
pub fn asymmetry(m: &CsrMatrix) -> f64 {
    m.triplets()
        .map(|(r, c, v)| (v - m.get(c, r)).abs())
        .fold(0.0, f64::max)
}

fn probe(len: usize, seed: f64) -> Vec<f64> {
    (0..len).map(|i| (seed * (i as f64 + 1.0)).sin()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest relative defect of `y^T W R x = (1/s) (P y)^T x` over all
/// classes; `W` is the identity when `weighted` is false.
pub fn adjointness_defect(pair: &TransferPair, weighted: bool) -> f64 {
    let mut worst: f64 = 0.0;
    for class in UnknownClass::ALL {
        let r = pair.restriction_matrix(class);
        let p = pair.prolongation_matrix(class);
        let s = TransferPair::adjoint_scale(class);
        let x = probe(r.ncols(), 0.7);
        let y = probe(r.nrows(), 1.3);
        let mut rx = r.matvec(&x);
        if weighted {
            for (v, m) in rx.iter_mut().zip(pair.row_mass(class)) {
                *v *= m;
            }
        }
        let lhs = dot(&y, &rx);
        let rhs = dot(&p.matvec(&y), &x) / s;
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    worst
}

/// Largest deviation from 1 after restricting and prolonging the constant 1.
pub fn constant_defect(pair: &TransferPair) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for class in UnknownClass::ALL {
        let r = pair.restriction_matrix(class);
        let rc = pair.restrict_class(class, &vec![1.0; r.ncols()])?;
        let pc = pair.prolong_class(class, &vec![1.0; r.nrows()])?;
        for v in rc.iter().chain(&pc) {
            worst = worst.max((v - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Largest `|p(x, y) + p(x', y') - sum| / sum` over cells mirrored through
/// the centre of the domain, fracture included.
pub fn point_symmetry_defect(grid: &StaggeredGrid, x: &MixedDimVector, sum: f64) -> f64 {
    let n = grid.cells_per_subdomain();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            let a = x[grid.p(0, i, j)];
            let b = x[grid.p(1, n - 1 - i, n - 1 - j)];
            worst = worst.max((a + b - sum).abs());
        }
        worst = worst.max((x[grid.pg(j)] + x[grid.pg(n - 1 - j)] - sum).abs());
    }
    worst / sum.abs().max(f64::MIN_POSITIVE)
}

/// Runs `cycles` FAS and correction-scheme cycles side by side from zero
/// and returns the largest relative sup-norm gap between the iterates.
pub fn trajectory_gap(
    spec: &ProblemSpec,
    grid: &StaggeredGrid,
    cfg: &CycleConfig,
    cycles: usize,
) -> Result<f64> {
    let h = Hierarchy::new(spec, grid, cfg)?;
    let rhs = h.finest().rhs().clone();
    let mut a = MixedDimVector::zeros(grid);
    let mut b = MixedDimVector::zeros(grid);
    let mut worst: f64 = 0.0;
    for _ in 0..cycles {
        h.fas_cycle(0, &mut a, &rhs)?;
        h.linear_cycle(0, &mut b, &rhs)?;
        let gap = a.sub(&b).max_abs() / b.max_abs().max(f64::MIN_POSITIVE);
        worst = worst.max(gap);
    }
    Ok(worst)
}

/// Relative change made by one smoothing step applied to `x`.
pub fn smoother_drift(disc: &Discretization, x: &MixedDimVector, cfg: &SmootherConfig) -> f64 {
    let mut y = x.clone();
    smoothing_step(disc, &mut y, disc.rhs(), cfg);
    y.sub(x).max_abs() / x.max_abs().max(f64::MIN_POSITIVE)
}

/// Bounds used by [`standard_checks`].
pub mod tol {
    pub const ORACLE: f64 = 1e-6;
    pub const MASS_BALANCE: f64 = 1e-10;
    pub const SYMMETRY: f64 = 0.0;
    pub const JACOBIAN_FD: f64 = 1e-6;
    pub const TRANSFER: f64 = 1e-12;
    pub const TRAJECTORY: f64 = 1e-12;
    pub const SMOOTHER_FIXED_POINT: f64 = 1e-8;
}

/// The verification suite on one grid. The β = 0 trajectory comparison is
/// added only for linear problems.
pub fn standard_checks(
    spec: &ProblemSpec,
    grid: &StaggeredGrid,
    cfg: &CycleConfig,
) -> Result<Vec<Check>> {
    let n = grid.cells_per_subdomain();
    if n > 16 {
        return Err(Error::Config {
            key: "experiment.verify_cells".into(),
            message: format!("verification runs on grids with at most 16 cells, got {n}"),
        });
    }
    let disc = Discretization::new(spec, grid)?;
    let mut checks = Vec::new();

    let fas = crate::fas::solve(spec, grid, cfg)?;
    let newton = newton_solve(spec, grid, &NewtonConfig::default())?;
    let cmp = compare(&fas.solution, &newton.solution)?;
    checks.push(Check::new(
        "FAS vs Newton, relative sup norm",
        cmp.global,
        tol::ORACLE,
    ));

    let mb = disc.mass_balance(spec, &newton.solution);
    checks.push(Check::new(
        "global mass balance at the Newton solution",
        mb.relative_defect(),
        tol::MASS_BALANCE,
    ));

    let jac = disc.jacobian(&newton.solution)?;
    checks.push(Check::new(
        "Jacobian symmetry",
        asymmetry(jac.matrix()),
        tol::SYMMETRY,
    ));

    let fd = jacobian_fd_error(&disc, &newton.solution)?;
    checks.push(Check::new(
        "Jacobian vs central differences",
        fd,
        tol::JACOBIAN_FD,
    ));

    if n >= 2 * cfg.coarsest.max(1) {
        let pair = TransferPair::new(grid, cfg.interface_transfer)?;
        checks.push(Check::new(
            "transfer constants",
            constant_defect(&pair)?,
            tol::TRANSFER,
        ));
        let planar = TransferPair::new(grid, InterfaceTransfer::Planar)?;
        checks.push(Check::new(
            "transfer adjointness, row-mass weighted",
            adjointness_defect(&planar, true),
            tol::TRANSFER,
        ));
        if spec.beta == 0.0 {
            let gap = trajectory_gap(spec, grid, cfg, fas.iterations.max(1))?;
            checks.push(Check::new(
                "FAS equals linear multigrid",
                gap,
                tol::TRAJECTORY,
            ));
        }
    }

    let drift = smoother_drift(&disc, &newton.solution, &cfg.smoother);
    checks.push(Check::new(
        "smoother fixed point",
        drift,
        tol::SMOOTHER_FIXED_POINT,
    ));
    Ok(checks)
}
