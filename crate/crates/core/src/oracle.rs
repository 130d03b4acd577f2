//! Reference solutions by Newton's method with a direct linear solver.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::grid::{Block, StaggeredGrid};
use crate::operator::{Discretization, MixedDimVector};
use crate::problem::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Absolute residual tolerance.
    pub abs_tol: f64,
    /// Tolerance relative to the initial residual; the effective target is
    /// the larger of the two.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-13,
            max_iter: 100,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonReport {
    pub solution: MixedDimVector,
    /// Residual norm before each step and after the last one.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub wall_time: Duration,
}

/// Newton from the zero vector. Full steps are taken throughout: the
/// Forchheimer term is monotone and convex along each flux, so the first
/// step overshoots to the Darcy velocity and the following ones descend
/// onto the solution from there.
pub fn newton_solve(
    spec: &ProblemSpec,
    grid: &StaggeredGrid,
    cfg: &NewtonConfig,
) -> Result<NewtonReport> {
    let start = Instant::now();
    let disc = Discretization::new(spec, grid)?;
    let positions = disc.positions();
    let mut x = MixedDimVector::zeros(grid);
    let mut r = disc.residual(&x)?;
    let r0 = r.norm();
    let target = cfg.abs_tol.max(cfg.rel_tol * r0);
    let mut history = vec![r0];
    let mut rn = r0;
    let mut iterations = 0;
    let mut best = r0;
    let mut stalled = 0;
    while rn > target {
        if iterations == cfg.max_iter {
            return Err(Error::Newton {
                residual: rn,
                iterations,
            });
        }
        let jac = disc.jacobian(&x)?;
        let lu = crate::sparse::BandedLu::factor_geometric(jac.matrix(), &positions)?;
        let dx = lu.solve(&r);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        r = disc.residual(&x)?;
        rn = r.norm();
        iterations += 1;
        history.push(rn);
        if !rn.is_finite() {
            return Err(Error::Newton {
                residual: rn,
                iterations,
            });
        }
        if rn < 0.5 * best {
            best = rn;
            stalled = 0;
        } else {
            stalled += 1;
        }
        // roundoff floor: far below the start and no longer improving
        if stalled >= 3 && best <= 1e-8 * r0 {
            break;
        }
    }
    Ok(NewtonReport {
        solution: x,
        history,
        iterations,
        wall_time: start.elapsed(),
    })
}

/// Relative sup-norm differences between two solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// `max |a - b| / max |b|` on each block.
    pub blocks: Vec<(Block, f64)>,
    /// The same over the whole vector.
    pub global: f64,
}

impl Comparison {
    pub fn worst_block(&self) -> f64 {
        self.blocks.iter().map(|b| b.1).fold(0.0, f64::max)
    }
}

fn rel_sup(a: &[f64], b: &[f64]) -> f64 {
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let scale = b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Compares `a` against the reference `b`.
pub fn compare(a: &MixedDimVector, b: &MixedDimVector) -> Result<Comparison> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            expected: b.len(),
            found: a.len(),
        });
    }
    let blocks = Block::ALL
        .iter()
        .map(|&blk| (blk, rel_sup(a.block(blk), b.block(blk))))
        .collect();
    Ok(Comparison {
        blocks,
        global: rel_sup(a, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::slab_test_problem;

    #[test]
    fn newton_converges_quadratically() {
        let (spec, grid) = slab_test_problem(8, 1.0, 200.0).unwrap();
        let rep = newton_solve(&spec, &grid, &NewtonConfig::default()).unwrap();
        let last = *rep.history.last().unwrap();
        assert!(last <= 1e-12 * rep.history[0], "{:?}", rep.history);
        assert!(rep.iterations < 60);
    }

    #[test]
    fn linear_problem_needs_one_step() {
        let (spec, grid) = slab_test_problem(8, 1e-4, 0.0).unwrap();
        let rep = newton_solve(&spec, &grid, &NewtonConfig::default()).unwrap();
        assert!(rep.iterations <= 2, "{:?}", rep.history);
    }

    #[test]
    fn compare_blocks() {
        let (_, grid) = slab_test_problem(4, 1.0, 0.0).unwrap();
        let mut a = MixedDimVector::zeros(&grid);
        let mut b = MixedDimVector::zeros(&grid);
        b.block_mut(Block::P1).fill(2.0);
        a.block_mut(Block::P1).fill(2.0);
        a.block_mut(Block::P1)[0] = 2.2;
        b.block_mut(Block::UGamma).fill(1.0);
        a.block_mut(Block::UGamma).fill(1.0);
        let c = compare(&a, &b).unwrap();
        let p1 = c.blocks.iter().find(|x| x.0 == Block::P1).unwrap().1;
        assert!((p1 - 0.1).abs() < 1e-12);
        assert!((c.global - 0.1).abs() < 1e-12);
        assert_eq!(
            c.blocks.iter().find(|x| x.0 == Block::UGamma).unwrap().1,
            0.0
        );
        let other = MixedDimVector::zeros(
            &crate::grid::build_grid(crate::grid::Extents::unit_slab(), 2).unwrap(),
        );
        assert!(compare(&other, &b).is_err());
    }
}
