//! Coefficients and boundary data of the reduced fracture model.
//!
//! Matrix (k = 0, 1):   `u = -K grad p`,  `div u = q`.
//! Fracture line:       `(1 + beta/d |u_g|) u_g = -d K_tau dp_g/ds`,
//!                      `du_g/ds = q_g + (u_0 . n_0 + u_1 . n_1)`.
//! Coupling on `gamma`: `alpha (p_k - p_g) = xi u_k . n_k - (1 - xi) u_{k+1} . n_{k+1}`
//! with `alpha = 2 K_n / d`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{build_grid, Extents, StaggeredGrid};

/// A scalar coefficient, either constant or a function of position.
#[derive(Clone)]
pub enum ScalarField {
    Constant(f64),
    Function(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl ScalarField {
    pub fn function(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField::Function(Arc::new(f))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            ScalarField::Constant(c) => *c,
            ScalarField::Function(f) => f(x, y),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            ScalarField::Constant(c) => Some(*c),
            ScalarField::Function(_) => None,
        }
    }
}

impl From<f64> for ScalarField {
    fn from(c: f64) -> Self {
        ScalarField::Constant(c)
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Constant(c) => write!(f, "Constant({c:e})"),
            ScalarField::Function(_) => write!(f, "Function(..)"),
        }
    }
}

/// Condition on the top and bottom edges of the matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HorizontalBoundary {
    /// Zero normal flux.
    Impermeable,
    /// Prescribed pressure on the bottom and top edges.
    Dirichlet { bottom: f64, top: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    /// Pressure on the left edge of the left subdomain.
    pub p_left: f64,
    /// Pressure on the right edge of the right subdomain.
    pub p_right: f64,
    pub horizontal: HorizontalBoundary,
    /// Fracture pressure at its lower endpoint.
    pub fracture_bottom: f64,
    /// Fracture pressure at its upper endpoint.
    pub fracture_top: f64,
}

impl BoundaryData {
    pub fn homogeneous() -> Self {
        Self {
            p_left: 0.0,
            p_right: 0.0,
            horizontal: HorizontalBoundary::Dirichlet {
                bottom: 0.0,
                top: 0.0,
            },
            fracture_bottom: 0.0,
            fracture_top: 0.0,
        }
    }
}

/// All data of one fractured-medium flow problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    /// Matrix permeabilities `K_xx`, `K_yy` per subdomain.
    pub k_xx: [ScalarField; 2],
    pub k_yy: [ScalarField; 2],
    /// Tangential fracture permeability, sampled along the fracture.
    pub kf_tau: ScalarField,
    /// Normal fracture permeability.
    pub kf_n: f64,
    /// Forchheimer coefficient.
    pub beta: f64,
    /// Fracture aperture.
    pub width: f64,
    /// Closure parameter of the coupling condition, in `(1/2, 1]`.
    pub xi: f64,
    pub source: [ScalarField; 2],
    pub source_fracture: ScalarField,
    pub boundary: BoundaryData,
}

pub const DEFAULT_XI: f64 = 0.75;

impl ProblemSpec {
    /// Homogeneous isotropic matrix permeability `k`, fracture permeability
    /// `kf` in both directions, no sources and homogeneous Dirichlet data.
    pub fn homogeneous(k: f64, kf: f64, beta: f64, width: f64) -> Self {
        Self {
            k_xx: [k.into(), k.into()],
            k_yy: [k.into(), k.into()],
            kf_tau: kf.into(),
            kf_n: kf,
            beta,
            width,
            xi: DEFAULT_XI,
            source: [0.0.into(), 0.0.into()],
            source_fracture: 0.0.into(),
            boundary: BoundaryData::homogeneous(),
        }
    }

    /// Checks every invariant that can be checked without a mesh.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidProblem(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        for k in 0..2 {
            if let Some(v) = self.k_xx[k].as_constant() {
                positive("k_xx", v)?;
            }
            if let Some(v) = self.k_yy[k].as_constant() {
                positive("k_yy", v)?;
            }
        }
        if let Some(v) = self.kf_tau.as_constant() {
            positive("kf_tau", v)?;
        }
        positive("kf_n", self.kf_n)?;
        positive("width", self.width)?;
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidProblem(format!(
                "beta must be non-negative, got {}",
                self.beta
            )));
        }
        if !(self.xi > 0.5 && self.xi <= 1.0) {
            return Err(Error::InvalidProblem(format!(
                "xi must lie in (1/2, 1], got {}",
                self.xi
            )));
        }
        Ok(())
    }

    /// Normal transfer coefficient `2 K_n / d` of the coupling condition.
    pub fn alpha_gamma(&self) -> f64 {
        alpha_gamma(self)
    }

    /// Effective normal permeability `K_n / d`.
    pub fn effective_normal_permeability(&self) -> f64 {
        self.kf_n / self.width
    }

    /// Effective tangential permeability `K_tau d` at height `y`.
    pub fn effective_tangential_permeability(&self, x_gamma: f64, y: f64) -> f64 {
        self.kf_tau.eval(x_gamma, y) * self.width
    }
}

pub fn alpha_gamma(spec: &ProblemSpec) -> f64 {
    2.0 * spec.kf_n / spec.width
}

/// Matrix permeability of the reference slab problem.
pub const SLAB_PERMEABILITY: f64 = 1e-9;
/// Fracture aperture of the reference slab problem.
pub const SLAB_WIDTH: f64 = 0.01;
/// Pressure drop driving the reference slab problem.
pub const SLAB_PRESSURE: f64 = 1e6;

/// The horizontal slab `(0,2) x (0,1)` cut by a vertical fracture at `x = 1`.
///
/// `K = 1e-9 I`, `d = 0.01`, `p = 0` on the left, `p = 1e6` on the right,
/// impermeable top and bottom, fracture pressure `1e6` at the top endpoint
/// and `0` at the bottom one, no sources. `h_inv` is the number of cells per
/// unit length, so each subdomain gets `h_inv x h_inv` cells.
pub fn slab_test_problem(h_inv: usize, kf: f64, beta: f64) -> Result<(ProblemSpec, StaggeredGrid)> {
    if h_inv < 4 || !h_inv.is_multiple_of(4) || !(h_inv / 4).is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "h_inv must be 4 times a power of two, got {h_inv}"
        )));
    }
    let mut spec = ProblemSpec::homogeneous(SLAB_PERMEABILITY, kf, beta, SLAB_WIDTH);
    spec.boundary = BoundaryData {
        p_left: 0.0,
        p_right: SLAB_PRESSURE,
        horizontal: HorizontalBoundary::Impermeable,
        fracture_bottom: 0.0,
        fracture_top: SLAB_PRESSURE,
    };
    spec.validate()?;
    let grid = build_grid(Extents::unit_slab(), h_inv)?;
    Ok((spec, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn alpha() {
        let s = ProblemSpec::homogeneous(1e-9, 1e-6, 10.0, 0.01);
        assert_relative_eq!(s.alpha_gamma(), 2e-4, max_relative = 1e-15);
        let s = ProblemSpec::homogeneous(1.0, 0.25, 0.0, 0.5);
        assert_eq!(alpha_gamma(&s), 1.0);
        let s = ProblemSpec::homogeneous(1.0, 1.0, 0.0, 1.0);
        assert_eq!(alpha_gamma(&s), 2.0);
    }

    #[test]
    fn slab_problem() {
        let (s, g) = slab_test_problem(32, 1e-6, 10.0).unwrap();
        assert_eq!(g.cells_per_subdomain(), 32);
        assert_eq!(s.boundary.p_right, 1e6);
        assert_eq!(s.boundary.horizontal, HorizontalBoundary::Impermeable);
        assert_eq!(s.kf_n, 1e-6);
        assert_eq!(s.kf_tau.as_constant(), Some(1e-6));
        assert_eq!(s.xi, DEFAULT_XI);
        assert!(slab_test_problem(12, 1.0, 0.0).is_err());
        assert!(slab_test_problem(2, 1.0, 0.0).is_err());
    }

    #[test]
    fn tabulated_pairs_are_valid() {
        for kf in [1e-6, 1e-4, 1e-2, 1.0] {
            for beta in [0.0, 10.0, 50.0, 100.0, 200.0] {
                let (s, _) = slab_test_problem(8, kf, beta).unwrap();
                s.validate().unwrap();
            }
        }
    }

    #[test]
    fn invariants_rejected() {
        let mut s = ProblemSpec::homogeneous(1.0, 1.0, 1.0, 1.0);
        s.xi = 0.5;
        assert!(s.validate().is_err());
        s.xi = 1.0;
        s.validate().unwrap();
        s.beta = -1.0;
        assert!(s.validate().is_err());
        let s = ProblemSpec::homogeneous(0.0, 1.0, 1.0, 1.0);
        assert!(s.validate().is_err());
        let s = ProblemSpec::homogeneous(1.0, 1.0, 1.0, 0.0);
        assert!(s.validate().is_err());
    }
}
