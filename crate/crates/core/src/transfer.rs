//! Restriction and prolongation between two consecutive grid levels.
//!
//! Every unknown class is transferred on its own. In each direction an
//! unknown is either vertex-like (fluxes along their normal direction) or
//! cell-like, with 1-D restriction weights `(1 2 1)/4` and `(1 1)/2`. The
//! 2-D stencils are tensor products of these:
//!
//! ```text
//! u: 1/8 [1 2 1; * ; 1 2 1]   v: 1/8 [1 1; 2 * 2; 1 1]   p: 1/4 [1 1; * ; 1 1]
//! ug: 1/4 (1 2 1)             pg: 1/2 (1 * 1)
//! ```
//!
//! Rows that fall off the grid are truncated and rescaled to unit row sum.
//! Prolongation is `s T^T` with `T` the truncated but unscaled restriction
//! and `s = 2^dim`, i.e. bilinear interpolation along vertex directions and
//! injection along cell directions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{StaggeredGrid, UnknownClass};
use crate::operator::MixedDimVector;
use crate::sparse::CsrMatrix;

/// Restriction of the matrix fluxes that live on the fracture line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InterfaceTransfer {
    /// 1-D stencil along the fracture using only interface fluxes.
    #[default]
    Line,
    /// Same truncated 2-D stencil as every other boundary flux.
    Planar,
}

/// Transfer operators between `fine` and its coarsening.
#[derive(Debug, Clone)]
pub struct TransferPair {
    fine: StaggeredGrid,
    coarse: StaggeredGrid,
    interface: InterfaceTransfer,
    restriction: Vec<CsrMatrix>,
    prolongation: Vec<CsrMatrix>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Vertex,
    Cell,
}

fn weights(kind: Kind, nc: usize, i: usize) -> Vec<(usize, f64)> {
    match kind {
        Kind::Vertex => [
            (2 * i as isize - 1, 0.25),
            (2 * i as isize, 0.5),
            (2 * i as isize + 1, 0.25),
        ]
        .into_iter()
        .filter(|&(f, _)| f >= 0 && f as usize <= 2 * nc)
        .map(|(f, w)| (f as usize, w))
        .collect(),
        Kind::Cell => vec![(2 * i, 0.5), (2 * i + 1, 0.5)],
    }
}

fn count(kind: Kind, n: usize) -> usize {
    match kind {
        Kind::Vertex => n + 1,
        Kind::Cell => n,
    }
}

/// `(x kind, y kind)`; one-dimensional classes have no x direction.
fn kinds(class: UnknownClass) -> (Option<Kind>, Kind) {
    match class {
        UnknownClass::U(_) => (Some(Kind::Vertex), Kind::Cell),
        UnknownClass::V(_) => (Some(Kind::Cell), Kind::Vertex),
        UnknownClass::P(_) => (Some(Kind::Cell), Kind::Cell),
        UnknownClass::FractureU => (None, Kind::Vertex),
        UnknownClass::FractureP => (None, Kind::Cell),
    }
}

impl TransferPair {
    pub fn new(fine: &StaggeredGrid, interface: InterfaceTransfer) -> Result<Self> {
        let coarse = fine.coarsen()?;
        let mut restriction = Vec::new();
        let mut prolongation = Vec::new();
        for class in UnknownClass::ALL {
            let (r, p) = Self::class_operators(fine, class, interface);
            restriction.push(r);
            prolongation.push(p);
        }
        Ok(Self {
            fine: fine.clone(),
            coarse,
            interface,
            restriction,
            prolongation,
        })
    }

    fn class_operators(
        fine: &StaggeredGrid,
        class: UnknownClass,
        interface: InterfaceTransfer,
    ) -> (CsrMatrix, CsrMatrix) {
        let nc = fine.cells_per_subdomain() / 2;
        let nf = 2 * nc;
        let (kx, ky) = kinds(class);
        let (ncx, nfx) = match kx {
            Some(k) => (count(k, nc), count(k, nf)),
            None => (1, 1),
        };
        let (ncy, nfy) = (count(ky, nc), count(ky, nf));
        let on_interface = |i: usize| match class {
            UnknownClass::U(0) => i == nc,
            UnknownClass::U(_) => i == 0,
            _ => false,
        };
        let scale = if kx.is_some() { 4.0 } else { 2.0 };

        let mut r_trip = Vec::new();
        let mut p_trip = Vec::new();
        for jc in 0..ncy {
            for ic in 0..ncx {
                let row = jc * ncx + ic;
                let wx = match kx {
                    Some(k) => weights(k, nc, ic),
                    None => vec![(0, 1.0)],
                };
                let wy = weights(ky, nc, jc);
                let stencil: Vec<(usize, f64)> = wy
                    .iter()
                    .flat_map(|&(jf, a)| wx.iter().map(move |&(if_, b)| (jf * nfx + if_, a * b)))
                    .collect();
                for &(col, w) in &stencil {
                    p_trip.push((col, row, scale * w));
                }
                let stencil = if interface == InterfaceTransfer::Line && on_interface(ic) {
                    wy.iter().map(|&(jf, a)| (jf * nfx + 2 * ic, a)).collect()
                } else {
                    stencil
                };
                let total: f64 = stencil.iter().map(|&(_, w)| w).sum();
                r_trip.extend(stencil.into_iter().map(|(col, w)| (row, col, w / total)));
            }
        }
        (
            CsrMatrix::from_triplets(ncx * ncy, nfx * nfy, r_trip),
            CsrMatrix::from_triplets(nfx * nfy, ncx * ncy, p_trip),
        )
    }

    pub fn fine(&self) -> &StaggeredGrid {
        &self.fine
    }

    pub fn coarse(&self) -> &StaggeredGrid {
        &self.coarse
    }

    pub fn interface(&self) -> InterfaceTransfer {
        self.interface
    }

    fn slot(class: UnknownClass) -> usize {
        UnknownClass::ALL.iter().position(|&c| c == class).unwrap()
    }

    /// Restriction matrix of one class, in class-local numbering.
    pub fn restriction_matrix(&self, class: UnknownClass) -> &CsrMatrix {
        &self.restriction[Self::slot(class)]
    }

    /// Prolongation matrix of one class, in class-local numbering.
    pub fn prolongation_matrix(&self, class: UnknownClass) -> &CsrMatrix {
        &self.prolongation[Self::slot(class)]
    }

    /// Restricts a single class.
    pub fn restrict_class(&self, class: UnknownClass, fine: &[f64]) -> Result<Vec<f64>> {
        let r = self.restriction_matrix(class);
        if fine.len() != r.ncols() {
            return Err(Error::TransferMismatch(format!(
                "{class:?}: fine field has {} values, expected {}",
                fine.len(),
                r.ncols()
            )));
        }
        Ok(r.matvec(fine))
    }

    /// Prolongs a single class.
    pub fn prolong_class(&self, class: UnknownClass, coarse: &[f64]) -> Result<Vec<f64>> {
        let p = self.prolongation_matrix(class);
        if coarse.len() != p.ncols() {
            return Err(Error::TransferMismatch(format!(
                "{class:?}: coarse field has {} values, expected {}",
                coarse.len(),
                p.ncols()
            )));
        }
        Ok(p.matvec(coarse))
    }

    fn check(&self, grid: &StaggeredGrid, v: &MixedDimVector) -> Result<()> {
        if v.len() != grid.len() {
            return Err(Error::TransferMismatch(format!(
                "vector has {} entries, grid with n = {} needs {}",
                v.len(),
                grid.cells_per_subdomain(),
                grid.len()
            )));
        }
        Ok(())
    }

    /// Restriction of a full vector; also used for approximations.
    pub fn restrict(&self, fine: &MixedDimVector) -> Result<MixedDimVector> {
        self.check(&self.fine, fine)?;
        let mut out = MixedDimVector::zeros(&self.coarse);
        for class in UnknownClass::ALL {
            let c = self.restriction_matrix(class).matvec(fine.class(class));
            out.class_mut(class).copy_from_slice(&c);
        }
        Ok(out)
    }

    /// Restriction of `w_f * r`, divided by `w_c` on the coarse grid.
    pub fn restrict_weighted(
        &self,
        fine: &MixedDimVector,
        fine_weights: &[f64],
        coarse_weights: &[f64],
    ) -> Result<MixedDimVector> {
        let mut scaled = fine.clone();
        for (s, w) in scaled.iter_mut().zip(fine_weights) {
            *s *= w;
        }
        let mut out = self.restrict(&scaled)?;
        for (o, w) in out.iter_mut().zip(coarse_weights) {
            *o /= w;
        }
        Ok(out)
    }

    pub fn prolong(&self, coarse: &MixedDimVector) -> Result<MixedDimVector> {
        self.check(&self.coarse, coarse)?;
        let mut out = MixedDimVector::zeros(&self.fine);
        for class in UnknownClass::ALL {
            let f = self.prolongation_matrix(class).matvec(coarse.class(class));
            out.class_mut(class).copy_from_slice(&f);
        }
        Ok(out)
    }

    /// Dimension factor `s` in `P = s T^T`.
    pub fn adjoint_scale(class: UnknownClass) -> f64 {
        if class.is_fracture() {
            2.0
        } else {
            4.0
        }
    }

    /// Sum of the unscaled stencil weights of each coarse row: 1 in the
    /// interior, less where the stencil was truncated. With these as
    /// weights, `y^T W R x = (1/s) (P y)^T x` holds for every row whose
    /// restriction uses the full planar stencil.
    pub fn row_mass(&self, class: UnknownClass) -> Vec<f64> {
        let p = self.prolongation_matrix(class);
        let s = Self::adjoint_scale(class);
        let mut mass = vec![0.0; p.ncols()];
        for (_, c, v) in p.triplets() {
            mass[c] += v / s;
        }
        mass
    }
}

/// Restriction with the default interface treatment.
pub fn restrict(fine_grid: &StaggeredGrid, fine: &MixedDimVector) -> Result<MixedDimVector> {
    TransferPair::new(fine_grid, InterfaceTransfer::default())?.restrict(fine)
}

pub fn prolong(fine_grid: &StaggeredGrid, coarse: &MixedDimVector) -> Result<MixedDimVector> {
    TransferPair::new(fine_grid, InterfaceTransfer::default())?.prolong(coarse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, Extents};
    use approx::assert_relative_eq;

    fn pair(n: usize, mode: InterfaceTransfer) -> TransferPair {
        TransferPair::new(&build_grid(Extents::unit_slab(), n).unwrap(), mode).unwrap()
    }

    #[test]
    fn fracture_stencils() {
        let t = pair(4, InterfaceTransfer::Line);
        let c = t
            .restrict_class(UnknownClass::FractureU, &[0.0, 1.0, 2.0, 3.0, 0.0])
            .unwrap();
        assert_eq!(c[1], 2.0);
        // truncated end rows (2 1)/3
        assert_relative_eq!(c[0], 1.0 / 3.0);
        let c = t
            .restrict_class(UnknownClass::FractureP, &[1.0, 5.0, -2.0, 4.0])
            .unwrap();
        assert_eq!(c, vec![3.0, 1.0]);
    }

    #[test]
    fn fracture_pressure_impulse_prolongs_to_transposed_stencil() {
        let t = pair(4, InterfaceTransfer::Line);
        let f = t
            .prolong_class(UnknownClass::FractureP, &[0.0, 1.0])
            .unwrap();
        assert_eq!(f, vec![0.0, 0.0, 1.0, 1.0]);
        let f = t
            .prolong_class(UnknownClass::FractureU, &[0.0, 1.0, 0.0])
            .unwrap();
        assert_eq!(f, vec![0.0, 0.5, 1.0, 0.5, 0.0]);
    }

    #[test]
    fn constants_preserved() {
        for mode in [InterfaceTransfer::Line, InterfaceTransfer::Planar] {
            let t = pair(8, mode);
            for class in UnknownClass::ALL {
                let nf = t.restriction_matrix(class).ncols();
                let nc = t.restriction_matrix(class).nrows();
                let r = t.restrict_class(class, &vec![2.5; nf]).unwrap();
                assert!(r.iter().all(|&v| (v - 2.5).abs() < 1e-14), "{class:?}");
                let p = t.prolong_class(class, &vec![2.5; nc]).unwrap();
                assert!(p.iter().all(|&v| (v - 2.5).abs() < 1e-14), "{class:?}");
            }
        }
    }

    #[test]
    fn interior_six_point_stencil() {
        let t = pair(8, InterfaceTransfer::Line);
        let fine = t.fine().clone();
        let mut x = MixedDimVector::zeros(&fine);
        for (i, v) in x.iter_mut().enumerate() {
            *v = ((i * 37) % 11) as f64;
        }
        let c = t.restrict(&x).unwrap();
        let coarse = t.coarse();
        for k in 0..2 {
            let (i, j) = (2, 1);
            let u = |a: usize, b: usize| x[fine.u(k, a, b)];
            let direct =
                (u(3, 2) + 2.0 * u(4, 2) + u(5, 2) + u(3, 3) + 2.0 * u(4, 3) + u(5, 3)) / 8.0;
            assert_relative_eq!(c[coarse.u(k, i, j)], direct, max_relative = 1e-14);
            let v = |a: usize, b: usize| x[fine.v(k, a, b)];
            let direct =
                (v(4, 1) + v(5, 1) + 2.0 * v(4, 2) + 2.0 * v(5, 2) + v(4, 3) + v(5, 3)) / 8.0;
            assert_relative_eq!(c[coarse.v(k, i, j)], direct, max_relative = 1e-14);
            let p = |a: usize, b: usize| x[fine.p(k, a, b)];
            let direct = (p(4, 2) + p(5, 2) + p(4, 3) + p(5, 3)) / 4.0;
            assert_relative_eq!(c[coarse.p(k, i, j)], direct, max_relative = 1e-14);
        }
    }

    #[test]
    fn line_mode_uses_interface_fluxes_only() {
        let t = pair(4, InterfaceTransfer::Line);
        let fine = t.fine().clone();
        let mut x = MixedDimVector::zeros(&fine);
        for j in 0..4 {
            x[fine.u(0, 3, j)] = 100.0;
            x[fine.u(0, 4, j)] = j as f64;
        }
        let c = t.restrict(&x).unwrap();
        assert_eq!(c[t.coarse().u(0, 2, 0)], 0.5);
        assert_eq!(c[t.coarse().u(0, 2, 1)], 2.5);
    }

    #[test]
    fn weighted_adjointness_planar() {
        let t = pair(8, InterfaceTransfer::Planar);
        for class in UnknownClass::ALL {
            let r = t.restriction_matrix(class);
            let p = t.prolongation_matrix(class);
            let mass = t.row_mass(class);
            let s = TransferPair::adjoint_scale(class);
            let x: Vec<f64> = (0..r.ncols()).map(|i| (i as f64 * 0.7).sin()).collect();
            let y: Vec<f64> = (0..r.nrows()).map(|i| (i as f64 * 1.3).cos()).collect();
            let rx = r.matvec(&x);
            let py = p.matvec(&y);
            let lhs: f64 = y
                .iter()
                .zip(&rx)
                .zip(&mass)
                .map(|((a, b), m)| a * b * m)
                .sum();
            let rhs: f64 = py.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / s;
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let t = pair(4, InterfaceTransfer::Line);
        assert!(matches!(
            t.restrict_class(UnknownClass::FractureP, &[1.0; 3]),
            Err(Error::TransferMismatch(_))
        ));
        let other = build_grid(Extents::unit_slab(), 8).unwrap();
        assert!(t.restrict(&MixedDimVector::zeros(&other)).is_err());
        assert!(t.prolong(&MixedDimVector::zeros(t.fine())).is_err());
    }

    #[test]
    fn odd_grid_not_coarsenable() {
        let g = build_grid(Extents::unit_slab(), 5).unwrap();
        assert!(TransferPair::new(&g, InterfaceTransfer::Line).is_err());
    }
}
