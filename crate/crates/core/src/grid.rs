//! Mixed-dimensional staggered grid.
//!
//! The domain is a rectangle split at `x_gamma` (its horizontal midpoint) into
//! two subdomains carrying a MAC layout each: pressures at cell centres,
//! `u` on vertical edges, `v` on horizontal edges. The fracture is the line
//! `x = x_gamma`; its 1-D mesh is the partition induced by the two matching
//! subdomain meshes, with pressures at segment midpoints and tangential fluxes
//! at segment endpoints.
//!
//! Unknowns are stored in one flat vector ordered by blocks
//! `(U1, U2, Ugamma, P1, P2, Pgamma)`, where `Uk = (u^k, v^k)`.
//!
//! Index conventions (0-based, `n` cells per direction and subdomain):
//!
//! ```text
//! u(k, i, j): i = 0..=n (vertical edge), j = 0..n (cell row)
//! v(k, i, j): i = 0..n (cell column),    j = 0..=n (horizontal edge)
//! p(k, i, j): i = 0..n,                  j = 0..n
//! ug(j):      j = 0..=n (fracture segment endpoint)
//! pg(j):      j = 0..n  (fracture segment)
//! ```
//!
//! Edge `u(0, n, j)` and `u(1, 0, j)` both lie on the fracture; they are the
//! normal fluxes of the left and right matrix into the interface.

use crate::error::{Error, Result};

/// Index of a matrix subdomain: `0` is left of the fracture, `1` right of it.
pub type Subdomain = usize;

/// Bounding box of the full domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extents {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Extents {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// The reference slab `(0,2) x (0,1)` with the fracture at `x = 1`.
    pub fn unit_slab() -> Self {
        Self::new(0.0, 2.0, 0.0, 1.0)
    }

    pub fn x_gamma(&self) -> f64 {
        0.5 * (self.x_min + self.x_max)
    }
}

/// Kind of unknown, i.e. its staggered location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnknownClass {
    U(Subdomain),
    V(Subdomain),
    P(Subdomain),
    FractureU,
    FractureP,
}

impl UnknownClass {
    pub const ALL: [UnknownClass; 8] = [
        UnknownClass::U(0),
        UnknownClass::V(0),
        UnknownClass::U(1),
        UnknownClass::V(1),
        UnknownClass::FractureU,
        UnknownClass::P(0),
        UnknownClass::P(1),
        UnknownClass::FractureP,
    ];

    pub fn is_fracture(self) -> bool {
        matches!(self, UnknownClass::FractureU | UnknownClass::FractureP)
    }

    pub fn is_velocity(self) -> bool {
        matches!(
            self,
            UnknownClass::U(_) | UnknownClass::V(_) | UnknownClass::FractureU
        )
    }

    /// Topological dimension of the mesh the class lives on.
    pub fn dimension(self) -> usize {
        if self.is_fracture() {
            1
        } else {
            2
        }
    }
}

/// The six saddle-point blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    U1,
    U2,
    UGamma,
    P1,
    P2,
    PGamma,
}

impl Block {
    pub const ALL: [Block; 6] = [
        Block::U1,
        Block::U2,
        Block::UGamma,
        Block::P1,
        Block::P2,
        Block::PGamma,
    ];

    pub fn is_velocity(self) -> bool {
        matches!(self, Block::U1 | Block::U2 | Block::UGamma)
    }

    fn ordinal(self) -> usize {
        match self {
            Block::U1 => 0,
            Block::U2 => 1,
            Block::UGamma => 2,
            Block::P1 => 3,
            Block::P2 => 4,
            Block::PGamma => 5,
        }
    }
}

/// Offsets of every unknown class inside the flat vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    n: usize,
    // u1, v1, u2, v2, ug, p1, p2, pg, end
    starts: [usize; 9],
}

impl BlockLayout {
    fn new(n: usize) -> Self {
        let sizes = [
            (n + 1) * n,
            n * (n + 1),
            (n + 1) * n,
            n * (n + 1),
            n + 1,
            n * n,
            n * n,
            n,
        ];
        let mut starts = [0; 9];
        for (c, size) in sizes.iter().enumerate() {
            starts[c + 1] = starts[c] + size;
        }
        Self { n, starts }
    }

    fn class_slot(class: UnknownClass) -> usize {
        match class {
            UnknownClass::U(0) => 0,
            UnknownClass::V(0) => 1,
            UnknownClass::U(_) => 2,
            UnknownClass::V(_) => 3,
            UnknownClass::FractureU => 4,
            UnknownClass::P(0) => 5,
            UnknownClass::P(_) => 6,
            UnknownClass::FractureP => 7,
        }
    }

    pub fn len(&self) -> usize {
        self.starts[8]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cells_per_subdomain(&self) -> usize {
        self.n
    }

    pub fn class_range(&self, class: UnknownClass) -> std::ops::Range<usize> {
        let s = Self::class_slot(class);
        self.starts[s]..self.starts[s + 1]
    }

    pub fn block_range(&self, block: Block) -> std::ops::Range<usize> {
        // block b spans class slots [first, last)
        const SLOTS: [(usize, usize); 6] = [(0, 2), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8)];
        let (a, b) = SLOTS[block.ordinal()];
        self.starts[a]..self.starts[b]
    }

    pub fn block_of(&self, index: usize) -> Block {
        Block::ALL
            .into_iter()
            .find(|&b| self.block_range(b).contains(&index))
            .expect("index within layout")
    }
}

/// Location of one unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dof {
    pub class: UnknownClass,
    pub i: usize,
    pub j: usize,
}

/// Mixed-dimensional staggered grid; immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredGrid {
    n: usize,
    extents: Extents,
    /// Cell widths per subdomain.
    dx: [Vec<f64>; 2],
    /// Cell heights, shared by both subdomains and the fracture.
    dy: Vec<f64>,
    layout: BlockLayout,
}

/// Builds a uniform grid with `cells_per_subdomain` cells per direction in
/// each subdomain.
pub fn build_grid(extents: Extents, cells_per_subdomain: usize) -> Result<StaggeredGrid> {
    StaggeredGrid::uniform(extents, cells_per_subdomain)
}

/// Halves the number of cells per direction.
pub fn coarsen(grid: &StaggeredGrid) -> Result<StaggeredGrid> {
    grid.coarsen()
}

impl StaggeredGrid {
    pub fn uniform(extents: Extents, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid(
                "cells_per_subdomain must be positive".into(),
            ));
        }
        let Extents {
            x_min,
            x_max,
            y_min,
            y_max,
        } = extents;
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidGrid(format!(
                "extents must be finite with positive width and height, got {extents:?}"
            )));
        }
        let hx = 0.5 * (x_max - x_min) / n as f64;
        let hy = (y_max - y_min) / n as f64;
        Ok(Self {
            n,
            extents,
            dx: [vec![hx; n], vec![hx; n]],
            dy: vec![hy; n],
            layout: BlockLayout::new(n),
        })
    }

    pub fn coarsen(&self) -> Result<Self> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::NotCoarsenable(self.n));
        }
        let pair_sum = |h: &[f64]| h.chunks(2).map(|c| c[0] + c[1]).collect::<Vec<_>>();
        let nc = self.n / 2;
        Ok(Self {
            n: nc,
            extents: self.extents,
            dx: [pair_sum(&self.dx[0]), pair_sum(&self.dx[1])],
            dy: pair_sum(&self.dy),
            layout: BlockLayout::new(nc),
        })
    }

    pub fn is_coarsenable(&self) -> bool {
        self.n >= 2 && self.n.is_multiple_of(2)
    }

    pub fn cells_per_subdomain(&self) -> usize {
        self.n
    }

    pub fn extents(&self) -> Extents {
        self.extents
    }

    pub fn x_gamma(&self) -> f64 {
        self.extents.x_gamma()
    }

    pub fn layout(&self) -> BlockLayout {
        self.layout
    }

    /// Total number of unknowns.
    pub fn len(&self) -> usize {
        self.layout.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layout.is_empty()
    }

    pub fn class_len(&self, class: UnknownClass) -> usize {
        self.layout.class_range(class).len()
    }

    pub fn dx(&self, k: Subdomain, i: usize) -> f64 {
        self.dx[k][i]
    }

    pub fn dy(&self, j: usize) -> f64 {
        self.dy[j]
    }

    pub fn dx_all(&self, k: Subdomain) -> &[f64] {
        &self.dx[k]
    }

    pub fn dy_all(&self) -> &[f64] {
        &self.dy
    }

    /// Left edge of subdomain `k`.
    pub fn x_origin(&self, k: Subdomain) -> f64 {
        if k == 0 {
            self.extents.x_min
        } else {
            self.x_gamma()
        }
    }

    /// x-coordinate of vertical edge `i` in subdomain `k`.
    pub fn x_edge(&self, k: Subdomain, i: usize) -> f64 {
        self.x_origin(k) + self.dx[k][..i].iter().sum::<f64>()
    }

    pub fn x_center(&self, k: Subdomain, i: usize) -> f64 {
        self.x_edge(k, i) + 0.5 * self.dx[k][i]
    }

    pub fn y_edge(&self, j: usize) -> f64 {
        self.extents.y_min + self.dy[..j].iter().sum::<f64>()
    }

    pub fn y_center(&self, j: usize) -> f64 {
        self.y_edge(j) + 0.5 * self.dy[j]
    }

    // Flat indices.

    #[inline]
    pub fn u(&self, k: Subdomain, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.n && j < self.n);
        self.layout.class_range(UnknownClass::U(k)).start + j * (self.n + 1) + i
    }

    #[inline]
    pub fn v(&self, k: Subdomain, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j <= self.n);
        self.layout.class_range(UnknownClass::V(k)).start + j * self.n + i
    }

    #[inline]
    pub fn p(&self, k: Subdomain, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        self.layout.class_range(UnknownClass::P(k)).start + j * self.n + i
    }

    #[inline]
    pub fn ug(&self, j: usize) -> usize {
        debug_assert!(j <= self.n);
        self.layout.class_range(UnknownClass::FractureU).start + j
    }

    #[inline]
    pub fn pg(&self, j: usize) -> usize {
        debug_assert!(j < self.n);
        self.layout.class_range(UnknownClass::FractureP).start + j
    }

    /// Index of local position `(i, j)` inside `class`.
    pub fn index(&self, class: UnknownClass, i: usize, j: usize) -> usize {
        match class {
            UnknownClass::U(k) => self.u(k, i, j),
            UnknownClass::V(k) => self.v(k, i, j),
            UnknownClass::P(k) => self.p(k, i, j),
            UnknownClass::FractureU => self.ug(j),
            UnknownClass::FractureP => self.pg(j),
        }
    }

    /// Local extents `(ni, nj)` of a class.
    pub fn class_shape(&self, class: UnknownClass) -> (usize, usize) {
        let n = self.n;
        match class {
            UnknownClass::U(_) => (n + 1, n),
            UnknownClass::V(_) => (n, n + 1),
            UnknownClass::P(_) => (n, n),
            UnknownClass::FractureU => (1, n + 1),
            UnknownClass::FractureP => (1, n),
        }
    }

    /// Inverse of the flat index maps.
    pub fn locate(&self, index: usize) -> Dof {
        for class in UnknownClass::ALL {
            let range = self.layout.class_range(class);
            if range.contains(&index) {
                let local = index - range.start;
                let (ni, _) = self.class_shape(class);
                return Dof {
                    class,
                    i: local % ni,
                    j: local / ni,
                };
            }
        }
        panic!("index {index} outside grid with {} unknowns", self.len());
    }

    /// Physical position of an unknown.
    pub fn position(&self, index: usize) -> (f64, f64) {
        let Dof { class, i, j } = self.locate(index);
        match class {
            UnknownClass::U(k) => (self.x_edge(k, i), self.y_center(j)),
            UnknownClass::V(k) => (self.x_center(k, i), self.y_edge(j)),
            UnknownClass::P(k) => (self.x_center(k, i), self.y_center(j)),
            UnknownClass::FractureU => (self.x_gamma(), self.y_edge(j)),
            UnknownClass::FractureP => (self.x_gamma(), self.y_center(j)),
        }
    }

    /// y-breakpoints of the fracture mesh.
    pub fn fracture_breakpoints(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.y_edge(j)).collect()
    }

    /// y-breakpoints that subdomain `k` induces on the fracture line.
    pub fn interface_breakpoints(&self, _k: Subdomain) -> Vec<f64> {
        // both subdomains share the row partition `dy`
        (0..=self.n).map(|j| self.y_edge(j)).collect()
    }
}
