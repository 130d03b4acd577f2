//! Box (Vanka) smoothers.
//!
//! A matrix cell relaxes its pressure together with the fluxes on its
//! non-pinned edges; a fracture segment relaxes its pressure with its two
//! endpoint fluxes. Both local systems have arrow structure
//!
//! ```text
//! | a_1          g_1 | |du_1|   |r_1|
//! |      ...     ... | | ...| = |...|
//! |          a_m g_m | |du_m|   |r_m|
//! | b_1 ...  b_m  0  | | dp |   |r_p|
//! ```
//!
//! and are solved through the Schur complement of the diagonal. Fluxes from
//! the other subdomain and the fracture pressure stay at their current
//! values while a matrix cell is relaxed, and vice versa. In the fracture
//! the Forchheimer factor is frozen at the current flux.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{CellBlock, Discretization, SegmentBlock};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CellOrdering {
    /// Left subdomain then right, rows bottom to top, cells left to right.
    #[default]
    Lexicographic,
    /// The reverse of `Lexicographic`.
    Backward,
    /// Forward then backward.
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FractureOrdering {
    /// Every sweep bottom to top.
    Upward,
    /// Odd sweeps bottom to top, even sweeps top to bottom.
    #[default]
    Alternating,
}

/// Diagonal of the local fracture system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Linearization {
    /// `1 + beta/d |u|`, the Forchheimer factor frozen at the current flux.
    #[default]
    Picard,
    /// `1 + 2 beta/d |u|`, the exact derivative of the local row.
    Newton,
    /// Local Newton iterated until the segment's own rows are satisfied;
    /// the damping then applies to the converged local change.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmootherConfig {
    /// Damping of the fracture update.
    pub omega_fracture: f64,
    /// Damping of the matrix update.
    pub omega_matrix: f64,
    pub matrix_sweeps: usize,
    pub fracture_sweeps: usize,
    pub ordering: CellOrdering,
    pub fracture_ordering: FractureOrdering,
    pub fracture_linearization: Linearization,
}

impl Default for SmootherConfig {
    fn default() -> Self {
        Self {
            omega_fracture: 0.7,
            omega_matrix: 1.0,
            matrix_sweeps: 1,
            fracture_sweeps: 2,
            ordering: CellOrdering::Lexicographic,
            fracture_ordering: FractureOrdering::Alternating,
            fracture_linearization: Linearization::Picard,
        }
    }
}

impl SmootherConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("omega_fracture", self.omega_fracture),
            ("omega_matrix", self.omega_matrix),
        ] {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::Config {
                    key: format!("smoother.{name}"),
                    message: format!("must lie in (0, 1], got {w}"),
                });
            }
        }
        Ok(())
    }
}

/// Solves the arrow system above. Returns the flux increments and the
/// pressure increment.
pub fn solve_arrow(
    a: &[f64],
    g: &[f64],
    b: &[f64],
    r: &[f64],
    r_p: f64,
) -> Result<(Vec<f64>, f64)> {
    let mut num = -r_p;
    let mut den = 0.0;
    for i in 0..a.len() {
        if a[i] == 0.0 {
            return Err(Error::SingularMatrix(i));
        }
        num += b[i] * r[i] / a[i];
        den += b[i] * g[i] / a[i];
    }
    if den == 0.0 || !den.is_finite() {
        return Err(Error::SingularMatrix(a.len()));
    }
    let dp = num / den;
    let du = (0..a.len()).map(|i| (r[i] - g[i] * dp) / a[i]).collect();
    Ok((du, dp))
}

/// Relaxes one matrix cell in place.
pub(crate) fn smooth_matrix_cell(
    disc: &Discretization,
    cell: &CellBlock,
    x: &mut [f64],
    rhs: &[f64],
    omega: f64,
) {
    let m = cell.len;
    let mut a = [0.0; 4];
    let mut g = [0.0; 4];
    let mut b = [0.0; 4];
    let mut r = [0.0; 4];
    for (k, &(f, af, gf, bf)) in cell.fluxes[..m].iter().enumerate() {
        a[k] = af;
        g[k] = gf;
        b[k] = bf;
        r[k] = disc.row_residual(f, x, rhs);
    }
    let r_p = disc.row_residual(cell.pressure, x, rhs);
    let mut num = -r_p;
    let mut den = 0.0;
    for k in 0..m {
        num += b[k] * r[k] / a[k];
        den += b[k] * g[k] / a[k];
    }
    let dp = num / den;
    for k in 0..m {
        x[cell.fluxes[k].0] += omega * (r[k] - g[k] * dp) / a[k];
    }
    x[cell.pressure] += omega * dp;
}

fn segment_increment(
    disc: &Discretization,
    seg: &SegmentBlock,
    x: &[f64],
    rhs: &[f64],
    slope: f64,
) -> [f64; 3] {
    let beta_d = disc.beta_over_width();
    let mut num = -disc.row_residual(seg.pressure, x, rhs);
    let mut den = 0.0;
    let mut local = [(0.0, 0.0, 0.0); 2];
    for (k, &(f, lin, g, b)) in seg.fluxes.iter().enumerate() {
        let a = lin + slope * disc.forchheimer_scale(f) * beta_d * x[f].abs();
        let r = disc.row_residual(f, x, rhs);
        num += b * r / a;
        den += b * g / a;
        local[k] = (a, g, r);
    }
    let dp = num / den;
    let du = local.map(|(a, g, r)| (r - g * dp) / a);
    [du[0], du[1], dp]
}

/// Relaxes one fracture segment in place.
pub(crate) fn smooth_fracture_cell(
    disc: &Discretization,
    seg: &SegmentBlock,
    x: &mut [f64],
    rhs: &[f64],
    omega: f64,
    linearization: Linearization,
) {
    let idx = [seg.fluxes[0].0, seg.fluxes[1].0, seg.pressure];
    let delta = match linearization {
        Linearization::Picard => segment_increment(disc, seg, x, rhs, 1.0),
        Linearization::Newton => segment_increment(disc, seg, x, rhs, 2.0),
        Linearization::Exact => {
            let start = idx.map(|i| x[i]);
            for _ in 0..LOCAL_MAX_ITER {
                let d = segment_increment(disc, seg, x, rhs, 2.0);
                let mut small = true;
                for k in 0..3 {
                    x[idx[k]] += d[k];
                    small &= d[k].abs() <= LOCAL_TOL * x[idx[k]].abs();
                }
                if small {
                    break;
                }
            }
            let mut d = [0.0; 3];
            for k in 0..3 {
                d[k] = x[idx[k]] - start[k];
                x[idx[k]] = start[k];
            }
            d
        }
    };
    for k in 0..3 {
        x[idx[k]] += omega * delta[k];
    }
}

const LOCAL_MAX_ITER: usize = 30;
const LOCAL_TOL: f64 = 1e-13;

fn matrix_sweep(disc: &Discretization, x: &mut [f64], rhs: &[f64], omega: f64, forward: bool) {
    let cells = disc.cells();
    if forward {
        for c in cells {
            smooth_matrix_cell(disc, c, x, rhs, omega);
        }
    } else {
        for c in cells.iter().rev() {
            smooth_matrix_cell(disc, c, x, rhs, omega);
        }
    }
}

/// One smoothing step: matrix sweeps followed by fracture sweeps. Pinned
/// fluxes are reset to their prescribed values first.
pub fn smoothing_step(disc: &Discretization, x: &mut [f64], rhs: &[f64], cfg: &SmootherConfig) {
    for &f in disc.fixed_dofs() {
        x[f] = rhs[f];
    }
    for _ in 0..cfg.matrix_sweeps {
        match cfg.ordering {
            CellOrdering::Lexicographic => matrix_sweep(disc, x, rhs, cfg.omega_matrix, true),
            CellOrdering::Backward => matrix_sweep(disc, x, rhs, cfg.omega_matrix, false),
            CellOrdering::Symmetric => {
                matrix_sweep(disc, x, rhs, cfg.omega_matrix, true);
                matrix_sweep(disc, x, rhs, cfg.omega_matrix, false);
            }
        }
    }
    for sweep in 0..cfg.fracture_sweeps {
        let downward = cfg.fracture_ordering == FractureOrdering::Alternating && sweep % 2 == 1;
        let mut relax = |seg| {
            smooth_fracture_cell(
                disc,
                seg,
                x,
                rhs,
                cfg.omega_fracture,
                cfg.fracture_linearization,
            )
        };
        if downward {
            disc.segments().iter().rev().for_each(&mut relax);
        } else {
            disc.segments().iter().for_each(&mut relax);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::MixedDimVector;
    use crate::problem::slab_test_problem;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_solve(m: DMatrix<f64>, r: DVector<f64>) -> DVector<f64> {
        m.lu().solve(&r).unwrap()
    }

    #[test]
    fn arrow_three_by_three() {
        // [[2,0,-1],[0,2,1],[1,-1,0]]
        let (du, dp) =
            solve_arrow(&[2.0, 2.0], &[-1.0, 1.0], &[1.0, -1.0], &[1.0, 3.0], 2.0).unwrap();
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, -1.0, 0.0, 2.0, 1.0, 1.0, -1.0, 0.0]);
        let x = dense_solve(m, DVector::from_vec(vec![1.0, 3.0, 2.0]));
        assert_relative_eq!(du[0], x[0], max_relative = 1e-14);
        assert_relative_eq!(du[1], x[1], max_relative = 1e-14);
        assert_relative_eq!(dp, x[2], max_relative = 1e-14);
    }

    #[test]
    fn arrow_degenerate() {
        assert!(solve_arrow(&[1.0], &[0.0], &[1.0], &[1.0], 0.0).is_err());
        assert!(solve_arrow(&[0.0], &[1.0], &[1.0], &[1.0], 0.0).is_err());
    }

    #[test]
    fn matrix_cell_matches_dense_local_solve() {
        let (spec, grid) = slab_test_problem(8, 1e-4, 10.0).unwrap();
        let disc = Discretization::new(&spec, &grid).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut x = MixedDimVector::zeros(&grid);
        for v in x.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        let rhs = disc.rhs().clone();
        let jac = disc.jacobian(&x).unwrap();
        // interior cell of the right subdomain: full 5x5 block
        let cell = disc.cells()[64 + 3 * 8 + 4];
        assert_eq!(cell.len, 4);
        let idx: Vec<usize> = cell
            .fluxes
            .iter()
            .map(|f| f.0)
            .chain([cell.pressure])
            .collect();
        let m = DMatrix::from_fn(5, 5, |r, c| jac.entry(idx[r], idx[c]));
        let res = disc.residual(&x).unwrap();
        let delta = dense_solve(m, DVector::from_iterator(5, idx.iter().map(|&i| res[i])));
        let mut y = x.clone();
        smooth_matrix_cell(&disc, &cell, &mut y, &rhs, 1.0);
        for (k, &i) in idx.iter().enumerate() {
            assert_relative_eq!(
                y[i] - x[i],
                delta[k],
                max_relative = 1e-9,
                epsilon = 1e-9 * delta.amax()
            );
        }
        // the block's own rows are now satisfied
        let res = disc.residual(&y).unwrap();
        for &i in &idx {
            let scale = disc
                .linear_part()
                .row(i)
                .1
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(res[i].abs() < 1e-10 * scale, "row {i}: {}", res[i]);
        }
    }

    #[test]
    fn fracture_cell_matches_frozen_dense_solve() {
        let (spec, grid) = slab_test_problem(8, 1e-2, 50.0).unwrap();
        let disc = Discretization::new(&spec, &grid).unwrap();
        let mut x = MixedDimVector::zeros(&grid);
        for (i, v) in x.iter_mut().enumerate() {
            *v = ((i * 7919) % 13) as f64 - 6.0;
        }
        let seg = disc.segments()[3];
        let picard = disc.picard_matrix(&x).unwrap();
        let idx = [seg.fluxes[0].0, seg.fluxes[1].0, seg.pressure];
        let m = DMatrix::from_fn(3, 3, |r, c| picard.get(idx[r], idx[c]));
        let res = disc.residual(&x).unwrap();
        let delta = dense_solve(m, DVector::from_iterator(3, idx.iter().map(|&i| res[i])));
        let mut y = x.clone();
        smooth_fracture_cell(&disc, &seg, &mut y, disc.rhs(), 0.7, Linearization::Picard);
        for (k, &i) in idx.iter().enumerate() {
            assert_relative_eq!(
                y[i] - x[i],
                0.7 * delta[k],
                max_relative = 1e-10,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn exact_solution_is_fixed_point() {
        let (spec, grid) = slab_test_problem(8, 1e-4, 0.0).unwrap();
        let disc = Discretization::new(&spec, &grid).unwrap();
        let lu = disc.factor(disc.linear_part()).unwrap();
        let x = lu.solve(disc.rhs());
        let mut y = x.clone();
        smoothing_step(&disc, &mut y, disc.rhs(), &SmootherConfig::default());
        let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() <= 1e-10 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn invalid_damping_rejected() {
        let cfg = SmootherConfig {
            omega_fracture: 1.5,
            ..SmootherConfig::default()
        };
        assert!(cfg.validate().is_err());
        SmootherConfig::default().validate().unwrap();
    }
}
