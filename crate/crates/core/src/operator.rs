//! Finite-volume discretization of the coupled matrix/fracture problem.
//!
//! Every row is assembled in scaled form so that the Jacobian is the
//! symmetric saddle-point matrix
//!
//! ```text
//! | A1   C^T  0        B1^T  0     F1^T |
//! | C    A2   0        0     B2^T  F2^T |
//! | 0    0    Ag(Ug)   0     0     Bg^T |
//! | B1   0    0        0     0     0    |
//! | 0    B2   0        0     0     0    |
//! | F1   F2   Bg       0     0     0    |
//! ```
//!
//! Scaling, for uniform spacing `h`:
//! * matrix momentum rows divided by `T h` (TPFA transmissibility `T`), so
//!   the gradient entries are `+-1/h`;
//! * outer-boundary and interface flux rows divided by `2K` (their one-sided
//!   transmissibility times `h`);
//! * matrix mass rows multiplied by `-1`, giving divergence entries `-+1/h`;
//! * fracture rows carry an extra `1/h` so that the fracture pressure
//!   couples to the interface fluxes with the same `+-1/h` as the matrix.
//!
//! The operator is homogeneous, `A(0) = 0`; all boundary data and sources
//! live in the right-hand side. Top/bottom edges that are impermeable keep
//! their flux unknowns, pinned by the trivial row `v = 0` and decoupled from
//! everything else.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::grid::{Block, BlockLayout, StaggeredGrid, UnknownClass};
use crate::problem::{HorizontalBoundary, ProblemSpec};
use crate::sparse::{BandedLu, CsrMatrix};

/// Block vector `(U1, U2, Ugamma, P1, P2, Pgamma)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDimVector {
    layout: BlockLayout,
    data: Vec<f64>,
}

impl MixedDimVector {
    pub fn zeros(grid: &StaggeredGrid) -> Self {
        Self {
            layout: grid.layout(),
            data: vec![0.0; grid.len()],
        }
    }

    pub fn from_vec(grid: &StaggeredGrid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                found: data.len(),
            });
        }
        Ok(Self {
            layout: grid.layout(),
            data,
        })
    }

    pub fn layout(&self) -> BlockLayout {
        self.layout
    }

    pub fn block(&self, b: Block) -> &[f64] {
        &self.data[self.layout.block_range(b)]
    }

    pub fn block_mut(&mut self, b: Block) -> &mut [f64] {
        let r = self.layout.block_range(b);
        &mut self.data[r]
    }

    pub fn class(&self, c: UnknownClass) -> &[f64] {
        &self.data[self.layout.class_range(c)]
    }

    pub fn class_mut(&mut self, c: UnknownClass) -> &mut [f64] {
        let r = self.layout.class_range(c);
        &mut self.data[r]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &MixedDimVector) {
        debug_assert_eq!(self.layout, other.layout);
        for (s, o) in self.data.iter_mut().zip(&other.data) {
            *s += a * o;
        }
    }

    pub fn sub(&self, other: &MixedDimVector) -> MixedDimVector {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }
}

impl Deref for MixedDimVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.data
    }
}

impl DerefMut for MixedDimVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// Equation attached to each row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Two-point flux law between two matrix cells.
    InteriorMomentum,
    /// One-sided flux law on a Dirichlet edge of the matrix.
    BoundaryMomentum,
    /// Coupling condition for a matrix flux on the fracture.
    InterfaceMomentum,
    /// Pinned flux on an impermeable edge.
    FixedFlux,
    MatrixMass,
    /// Forchheimer law between two fracture segments.
    FractureMomentum,
    /// Forchheimer law at a fracture endpoint.
    FractureEndpoint,
    FractureMass,
}

/// One cell of the matrix Vanka smoother: the cell pressure and the fluxes
/// on its (non-pinned) edges.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CellBlock {
    pub pressure: usize,
    pub len: usize,
    /// `(flux index, diagonal, coefficient of this cell's pressure in the
    /// flux row, coefficient of the flux in this cell's mass row)`
    pub fluxes: [(usize, f64, f64, f64); 4],
}

/// One fracture segment: its pressure and its two endpoint fluxes.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SegmentBlock {
    pub pressure: usize,
    /// `(flux index, linear diagonal, coefficient of the segment pressure
    /// in the flux row, coefficient of the flux in the segment mass row)`
    pub fluxes: [(usize, f64, f64, f64); 2],
}

/// Discrete operator `A_h` and right-hand side `f_h` on one grid.
#[derive(Debug, Clone)]
pub struct Discretization {
    grid: StaggeredGrid,
    linear: CsrMatrix,
    rhs: MixedDimVector,
    /// `beta / d`
    beta_d: f64,
    /// Row scale of each fracture flux row; the nonlinear term of row
    /// `ug(j)` is `scale[j] * beta_d * |u| u`.
    forch_scale: Vec<f64>,
    fixed: Vec<usize>,
    row_kind: Vec<RowKind>,
    row_weight: Vec<f64>,
    cells: Vec<CellBlock>,
    segments: Vec<SegmentBlock>,
}

struct Assembly {
    trip: Vec<(usize, usize, f64)>,
    rhs: Vec<f64>,
    kind: Vec<RowKind>,
    weight: Vec<f64>,
}

impl Assembly {
    fn row(&mut self, r: usize, kind: RowKind, weight: f64, rhs: f64, entries: &[(usize, f64)]) {
        self.kind[r] = kind;
        self.weight[r] = weight;
        self.rhs[r] = rhs;
        self.trip.extend(entries.iter().map(|&(c, v)| (r, c, v)));
    }
}

fn sample_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidProblem(format!(
            "{name} must be positive, sampled {value}"
        )))
    }
}

impl Discretization {
    pub fn new(spec: &ProblemSpec, grid: &StaggeredGrid) -> Result<Self> {
        spec.validate()?;
        let n = grid.cells_per_subdomain();
        let len = grid.len();
        let xi = spec.xi;
        let alpha = spec.alpha_gamma();
        let width = spec.width;
        let mut asm = Assembly {
            trip: Vec::with_capacity(6 * len),
            rhs: vec![0.0; len],
            kind: vec![RowKind::MatrixMass; len],
            weight: vec![1.0; len],
        };

        let mut kxx = [vec![0.0; n * n], vec![0.0; n * n]];
        let mut kyy = [vec![0.0; n * n], vec![0.0; n * n]];
        for k in 0..2 {
            for j in 0..n {
                for i in 0..n {
                    let (x, y) = (grid.x_center(k, i), grid.y_center(j));
                    kxx[k][j * n + i] = sample_positive("k_xx", spec.k_xx[k].eval(x, y))?;
                    kyy[k][j * n + i] = sample_positive("k_yy", spec.k_yy[k].eval(x, y))?;
                }
            }
        }
        let impermeable = spec.boundary.horizontal == HorizontalBoundary::Impermeable;

        // interface spacing on each side
        let dx_if = [grid.dx(0, n - 1), grid.dx(1, 0)];
        let h_gamma = 0.5 * (dx_if[0] + dx_if[1]);

        for k in 0..2 {
            let dx = grid.dx_all(k);
            let kx = |i: usize, j: usize| kxx[k][j * n + i];
            let ky = |i: usize, j: usize| kyy[k][j * n + i];

            // x-fluxes
            for j in 0..n {
                for i in 0..=n {
                    let r = grid.u(k, i, j);
                    if i > 0 && i < n {
                        let t = 2.0 / (dx[i - 1] / kx(i - 1, j) + dx[i] / kx(i, j));
                        let delta = 0.5 * (dx[i - 1] + dx[i]);
                        asm.row(
                            r,
                            RowKind::InteriorMomentum,
                            1.0,
                            0.0,
                            &[
                                (r, 1.0 / (t * delta)),
                                (grid.p(k, i - 1, j), -1.0 / delta),
                                (grid.p(k, i, j), 1.0 / delta),
                            ],
                        );
                    } else if k == 0 && i == 0 {
                        let h = dx[0];
                        let g = spec.boundary.p_left;
                        asm.row(
                            r,
                            RowKind::BoundaryMomentum,
                            2.0,
                            g / h,
                            &[(r, 0.5 / kx(0, j)), (grid.p(0, 0, j), 1.0 / h)],
                        );
                    } else if k == 1 && i == n {
                        let h = dx[n - 1];
                        let g = spec.boundary.p_right;
                        asm.row(
                            r,
                            RowKind::BoundaryMomentum,
                            2.0,
                            -g / h,
                            &[(r, 0.5 / kx(n - 1, j)), (grid.p(1, n - 1, j), -1.0 / h)],
                        );
                    } else if k == 0 {
                        // left matrix flux into the fracture
                        let h = dx_if[0];
                        let kk = kx(n - 1, j);
                        asm.row(
                            r,
                            RowKind::InterfaceMomentum,
                            h,
                            0.0,
                            &[
                                (r, 0.5 / kk + xi / (alpha * h)),
                                (grid.p(0, n - 1, j), -1.0 / h),
                                (grid.pg(j), 1.0 / h),
                                (grid.u(1, 0, j), (1.0 - xi) / (alpha * h)),
                            ],
                        );
                    } else {
                        // right matrix flux out of the fracture
                        let h = dx_if[1];
                        let kk = kx(0, j);
                        asm.row(
                            r,
                            RowKind::InterfaceMomentum,
                            h,
                            0.0,
                            &[
                                (r, 0.5 / kk + xi / (alpha * h)),
                                (grid.p(1, 0, j), 1.0 / h),
                                (grid.pg(j), -1.0 / h),
                                (grid.u(0, n, j), (1.0 - xi) / (alpha * h)),
                            ],
                        );
                    }
                }
            }

            // y-fluxes
            for j in 0..=n {
                for i in 0..n {
                    let r = grid.v(k, i, j);
                    if j > 0 && j < n {
                        let (dyb, dyt) = (grid.dy(j - 1), grid.dy(j));
                        let t = 2.0 / (dyb / ky(i, j - 1) + dyt / ky(i, j));
                        let delta = 0.5 * (dyb + dyt);
                        asm.row(
                            r,
                            RowKind::InteriorMomentum,
                            1.0,
                            0.0,
                            &[
                                (r, 1.0 / (t * delta)),
                                (grid.p(k, i, j - 1), -1.0 / delta),
                                (grid.p(k, i, j), 1.0 / delta),
                            ],
                        );
                        continue;
                    }
                    match spec.boundary.horizontal {
                        HorizontalBoundary::Impermeable => {
                            asm.row(r, RowKind::FixedFlux, 1.0, 0.0, &[(r, 1.0)]);
                        }
                        HorizontalBoundary::Dirichlet { bottom, top } => {
                            if j == 0 {
                                let h = grid.dy(0);
                                asm.row(
                                    r,
                                    RowKind::BoundaryMomentum,
                                    2.0,
                                    bottom / h,
                                    &[(r, 0.5 / ky(i, 0)), (grid.p(k, i, 0), 1.0 / h)],
                                );
                            } else {
                                let h = grid.dy(n - 1);
                                asm.row(
                                    r,
                                    RowKind::BoundaryMomentum,
                                    2.0,
                                    -top / h,
                                    &[(r, 0.5 / ky(i, n - 1)), (grid.p(k, i, n - 1), -1.0 / h)],
                                );
                            }
                        }
                    }
                }
            }

            // mass conservation
            for j in 0..n {
                let dy = grid.dy(j);
                for i in 0..n {
                    let r = grid.p(k, i, j);
                    let mut entries = vec![
                        (grid.u(k, i + 1, j), -1.0 / dx[i]),
                        (grid.u(k, i, j), 1.0 / dx[i]),
                    ];
                    if !(impermeable && j + 1 == n) {
                        entries.push((grid.v(k, i, j + 1), -1.0 / dy));
                    }
                    if !(impermeable && j == 0) {
                        entries.push((grid.v(k, i, j), 1.0 / dy));
                    }
                    let q = spec.source[k].eval(grid.x_center(k, i), grid.y_center(j));
                    asm.row(r, RowKind::MatrixMass, 1.0, -q, &entries);
                }
            }
        }

        // fracture
        let xg = grid.x_gamma();
        let ktau = (0..n)
            .map(|j| sample_positive("kf_tau", spec.kf_tau.eval(xg, grid.y_center(j))))
            .collect::<Result<Vec<_>>>()?;
        let mut forch_scale = vec![0.0; n + 1];
        for j in 0..=n {
            let r = grid.ug(j);
            if j > 0 && j < n {
                let (dyb, dyt) = (grid.dy(j - 1), grid.dy(j));
                let t = 2.0 * width / (dyb / ktau[j - 1] + dyt / ktau[j]);
                let delta = 0.5 * (dyb + dyt);
                let s = 1.0 / (t * h_gamma * delta);
                forch_scale[j] = s;
                asm.row(
                    r,
                    RowKind::FractureMomentum,
                    h_gamma,
                    0.0,
                    &[
                        (r, s),
                        (grid.pg(j - 1), -1.0 / (h_gamma * delta)),
                        (grid.pg(j), 1.0 / (h_gamma * delta)),
                    ],
                );
            } else if j == 0 {
                let dy = grid.dy(0);
                let s = 1.0 / (2.0 * width * ktau[0] * h_gamma);
                forch_scale[j] = s;
                let g = spec.boundary.fracture_bottom;
                asm.row(
                    r,
                    RowKind::FractureEndpoint,
                    2.0 * h_gamma,
                    g / (h_gamma * dy),
                    &[(r, s), (grid.pg(0), 1.0 / (h_gamma * dy))],
                );
            } else {
                let dy = grid.dy(n - 1);
                let s = 1.0 / (2.0 * width * ktau[n - 1] * h_gamma);
                forch_scale[j] = s;
                let g = spec.boundary.fracture_top;
                asm.row(
                    r,
                    RowKind::FractureEndpoint,
                    2.0 * h_gamma,
                    -g / (h_gamma * dy),
                    &[(r, s), (grid.pg(n - 1), -1.0 / (h_gamma * dy))],
                );
            }
        }
        for j in 0..n {
            let r = grid.pg(j);
            let dy = grid.dy(j);
            let q = spec.source_fracture.eval(xg, grid.y_center(j));
            asm.row(
                r,
                RowKind::FractureMass,
                h_gamma,
                -q / h_gamma,
                &[
                    (grid.ug(j + 1), -1.0 / (h_gamma * dy)),
                    (grid.ug(j), 1.0 / (h_gamma * dy)),
                    (grid.u(0, n, j), 1.0 / dx_if[0]),
                    (grid.u(1, 0, j), -1.0 / dx_if[1]),
                ],
            );
        }

        let linear = CsrMatrix::from_triplets(len, len, asm.trip);
        let fixed: Vec<usize> = (0..len)
            .filter(|&r| asm.kind[r] == RowKind::FixedFlux)
            .collect();
        let rhs = MixedDimVector::from_vec(grid, asm.rhs)?;

        let mut disc = Self {
            grid: grid.clone(),
            linear,
            rhs,
            beta_d: spec.beta / spec.width,
            forch_scale,
            fixed,
            row_kind: asm.kind,
            row_weight: asm.weight,
            cells: Vec::new(),
            segments: Vec::new(),
        };
        disc.build_smoother_blocks();
        Ok(disc)
    }

    fn build_smoother_blocks(&mut self) {
        let g = &self.grid;
        let n = g.cells_per_subdomain();
        let l = &self.linear;
        let mut cells = Vec::with_capacity(2 * n * n);
        for k in 0..2 {
            for j in 0..n {
                for i in 0..n {
                    let p = g.p(k, i, j);
                    let mut block = CellBlock {
                        pressure: p,
                        len: 0,
                        fluxes: [(0, 0.0, 0.0, 0.0); 4],
                    };
                    for f in [
                        g.u(k, i, j),
                        g.u(k, i + 1, j),
                        g.v(k, i, j),
                        g.v(k, i, j + 1),
                    ] {
                        if self.row_kind[f] == RowKind::FixedFlux {
                            continue;
                        }
                        block.fluxes[block.len] = (f, l.get(f, f), l.get(f, p), l.get(p, f));
                        block.len += 1;
                    }
                    cells.push(block);
                }
            }
        }
        let segments = (0..n)
            .map(|j| {
                let p = g.pg(j);
                let entry = |f: usize| (f, l.get(f, f), l.get(f, p), l.get(p, f));
                SegmentBlock {
                    pressure: p,
                    fluxes: [entry(g.ug(j)), entry(g.ug(j + 1))],
                }
            })
            .collect();
        self.cells = cells;
        self.segments = segments;
    }

    pub fn grid(&self) -> &StaggeredGrid {
        &self.grid
    }

    /// The right-hand side `f_h`.
    pub fn rhs(&self) -> &MixedDimVector {
        &self.rhs
    }

    /// Constant part of the operator; equals the Jacobian when `beta = 0`.
    pub fn linear_part(&self) -> &CsrMatrix {
        &self.linear
    }

    pub fn beta_over_width(&self) -> f64 {
        self.beta_d
    }

    pub fn row_kind(&self, r: usize) -> RowKind {
        self.row_kind[r]
    }

    /// Per-row factor turning the scaled residual into a mesh-independent
    /// pointwise quantity: rows living on the fracture line carry an extra
    /// `1/h`, one-sided boundary rows only half of the flux law.
    pub fn row_weights(&self) -> &[f64] {
        &self.row_weight
    }

    /// Indices pinned to zero flux.
    pub fn fixed_dofs(&self) -> &[usize] {
        &self.fixed
    }

    pub(crate) fn cells(&self) -> &[CellBlock] {
        &self.cells
    }

    pub(crate) fn segments(&self) -> &[SegmentBlock] {
        &self.segments
    }

    /// Nonlinear scale `s` of fracture flux row `r`, such that the row
    /// contains `s (1 + beta/d |u|) u`; zero for every other row.
    #[inline]
    pub(crate) fn forchheimer_scale(&self, r: usize) -> f64 {
        let range = self.grid.layout().class_range(UnknownClass::FractureU);
        if range.contains(&r) {
            self.forch_scale[r - range.start]
        } else {
            0.0
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.grid.len() {
            return Err(Error::ShapeMismatch {
                expected: self.grid.len(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `A_h(x)`.
    pub fn apply(&self, x: &MixedDimVector) -> Result<MixedDimVector> {
        self.check(x)?;
        let mut out = MixedDimVector {
            layout: self.grid.layout(),
            data: self.linear.matvec(x),
        };
        let range = self.grid.layout().class_range(UnknownClass::FractureU);
        for (j, r) in range.enumerate() {
            out[r] += self.forch_scale[j] * self.beta_d * x[r].abs() * x[r];
        }
        Ok(out)
    }

    /// `rhs - A_h(x)`.
    pub fn residual_with(
        &self,
        x: &MixedDimVector,
        rhs: &MixedDimVector,
    ) -> Result<MixedDimVector> {
        self.check(rhs)?;
        let ax = self.apply(x)?;
        Ok(rhs.sub(&ax))
    }

    /// `f_h - A_h(x)`.
    pub fn residual(&self, x: &MixedDimVector) -> Result<MixedDimVector> {
        self.residual_with(x, &self.rhs)
    }

    /// Residual of a single row.
    #[inline]
    pub(crate) fn row_residual(&self, r: usize, x: &[f64], rhs: &[f64]) -> f64 {
        let mut ax = self.linear.row_dot(r, x);
        let s = self.forchheimer_scale(r);
        if s != 0.0 {
            ax += s * self.beta_d * x[r].abs() * x[r];
        }
        rhs[r] - ax
    }

    /// Exact Jacobian of `A_h` at `x`.
    pub fn jacobian(&self, x: &MixedDimVector) -> Result<BlockOperator> {
        self.check(x)?;
        let mut m = self.linear.clone();
        if self.beta_d != 0.0 {
            let range = self.grid.layout().class_range(UnknownClass::FractureU);
            m.add_to_diagonal(
                range
                    .enumerate()
                    .map(|(j, r)| (r, 2.0 * self.forch_scale[j] * self.beta_d * x[r].abs())),
            );
        }
        Ok(BlockOperator {
            layout: self.grid.layout(),
            matrix: m,
        })
    }

    /// Jacobian with the Forchheimer factor frozen at `x`, i.e. the matrix
    /// of `y -> L y + s beta/d |x| y`.
    pub fn picard_matrix(&self, x: &MixedDimVector) -> Result<CsrMatrix> {
        self.check(x)?;
        let mut m = self.linear.clone();
        if self.beta_d != 0.0 {
            let range = self.grid.layout().class_range(UnknownClass::FractureU);
            m.add_to_diagonal(
                range
                    .enumerate()
                    .map(|(j, r)| (r, self.forch_scale[j] * self.beta_d * x[r].abs())),
            );
        }
        Ok(m)
    }

    /// Physical positions of all unknowns, for geometric orderings.
    pub fn positions(&self) -> Vec<(f64, f64)> {
        (0..self.grid.len())
            .map(|i| self.grid.position(i))
            .collect()
    }

    /// Factors `m`, which must share this grid's unknown numbering.
    pub fn factor(&self, m: &CsrMatrix) -> Result<BandedLu> {
        BandedLu::factor_geometric(m, &self.positions())
    }

    /// Net outward flux through the outer boundary, each edge flux
    /// weighted by its edge measure (fracture endpoint fluxes are already
    /// integrated over the aperture), and the total integrated source.
    pub fn mass_balance(&self, spec: &ProblemSpec, x: &MixedDimVector) -> MassBalance {
        let g = &self.grid;
        let n = g.cells_per_subdomain();
        let mut outflow = 0.0;
        let mut scale = 0.0;
        let mut add = |flux: f64, measure: f64| {
            outflow += flux * measure;
            scale += (flux * measure).abs();
        };
        for j in 0..n {
            add(-x[g.u(0, 0, j)], g.dy(j));
            add(x[g.u(1, n, j)], g.dy(j));
        }
        for k in 0..2 {
            for i in 0..n {
                add(-x[g.v(k, i, 0)], g.dx(k, i));
                add(x[g.v(k, i, n)], g.dx(k, i));
            }
        }
        add(-x[g.ug(0)], 1.0);
        add(x[g.ug(n)], 1.0);

        let mut source = 0.0;
        for k in 0..2 {
            for j in 0..n {
                for i in 0..n {
                    let q = spec.source[k].eval(g.x_center(k, i), g.y_center(j));
                    source += q * g.dx(k, i) * g.dy(j);
                }
            }
        }
        for j in 0..n {
            source += spec.source_fracture.eval(g.x_gamma(), g.y_center(j)) * g.dy(j);
        }
        MassBalance {
            outflow,
            source,
            flux_scale: scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassBalance {
    pub outflow: f64,
    pub source: f64,
    /// Sum of absolute boundary fluxes, the natural scale of the balance.
    pub flux_scale: f64,
}

impl MassBalance {
    pub fn relative_defect(&self) -> f64 {
        let scale = self.flux_scale.max(self.source.abs());
        if scale == 0.0 {
            return (self.outflow - self.source).abs();
        }
        (self.outflow - self.source).abs() / scale
    }
}

/// Jacobian in block form.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    layout: BlockLayout,
    matrix: CsrMatrix,
}

impl BlockOperator {
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CsrMatrix {
        self.matrix
    }

    pub fn layout(&self) -> BlockLayout {
        self.layout
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.matrix.get(r, c)
    }

    /// Sub-block `(rows, cols)` with local indices.
    pub fn block(&self, rows: Block, cols: Block) -> CsrMatrix {
        let rr = self.layout.block_range(rows);
        let cr = self.layout.block_range(cols);
        let trip = rr
            .clone()
            .flat_map(|r| {
                let (c, v) = self.matrix.row(r);
                c.iter()
                    .zip(v)
                    .filter(|(c, _)| cr.contains(c))
                    .map(|(&c, &v)| (r - rr.start, c - cr.start, v))
                    .collect::<Vec<_>>()
            })
            .collect();
        CsrMatrix::from_triplets(rr.len(), cr.len(), trip)
    }

    /// Largest `|J[r][c] - J[c][r]|` over all stored entries.
    pub fn asymmetry(&self) -> f64 {
        self.matrix
            .triplets()
            .map(|(r, c, v)| (v - self.matrix.get(c, r)).abs())
            .fold(0.0, f64::max)
    }
}

/// Right-hand side `f_h` of the discrete problem.
pub fn assemble_rhs(spec: &ProblemSpec, grid: &StaggeredGrid) -> Result<MixedDimVector> {
    Ok(Discretization::new(spec, grid)?.rhs)
}

/// Residual `f_h - A_h(x)`.
pub fn apply(
    spec: &ProblemSpec,
    grid: &StaggeredGrid,
    x: &MixedDimVector,
) -> Result<MixedDimVector> {
    Discretization::new(spec, grid)?.residual(x)
}

pub fn jacobian(
    spec: &ProblemSpec,
    grid: &StaggeredGrid,
    x: &MixedDimVector,
) -> Result<BlockOperator> {
    Discretization::new(spec, grid)?.jacobian(x)
}
