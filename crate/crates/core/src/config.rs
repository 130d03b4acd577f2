//! Run configuration, stored as a TOML file with one section per concern.
//!
//! ```toml
//! [problem]
//! kf = 1e-6
//! beta = 10.0
//!
//! [grid]
//! cells_per_subdomain = 32
//!
//! [cycle]
//! cycle_type = "W"
//! tol = 1e-10
//! ```
//!
//! Every key is optional; the defaults describe the fractured slab with
//! `K = 1e-9`, `d = 0.01`, `K_f = 1e-6`, `beta = 10` and a W(2,2) cycle.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fas::CycleConfig;
use crate::grid::{build_grid, Extents, StaggeredGrid};
use crate::problem::{
    BoundaryData, HorizontalBoundary, ProblemSpec, DEFAULT_XI, SLAB_PERMEABILITY, SLAB_PRESSURE,
    SLAB_WIDTH,
};
use crate::vanka::SmootherConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HorizontalKind {
    #[default]
    Impermeable,
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemConfig {
    /// Isotropic matrix permeability.
    pub k: f64,
    /// Fracture permeability, tangential and normal.
    pub kf: f64,
    /// Separate normal fracture permeability, if different from `kf`.
    pub kf_normal: Option<f64>,
    pub beta: f64,
    pub width: f64,
    pub xi: f64,
    pub p_left: f64,
    pub p_right: f64,
    pub horizontal: HorizontalKind,
    /// Used only with Dirichlet horizontal edges.
    pub p_bottom: f64,
    pub p_top: f64,
    pub fracture_bottom: f64,
    pub fracture_top: f64,
    /// Constant matrix source.
    pub source: f64,
    /// Constant fracture source.
    pub source_fracture: f64,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            k: SLAB_PERMEABILITY,
            kf: 1e-6,
            kf_normal: None,
            beta: 10.0,
            width: SLAB_WIDTH,
            xi: DEFAULT_XI,
            p_left: 0.0,
            p_right: SLAB_PRESSURE,
            horizontal: HorizontalKind::Impermeable,
            p_bottom: 0.0,
            p_top: 0.0,
            fracture_bottom: 0.0,
            fracture_top: SLAB_PRESSURE,
            source: 0.0,
            source_fracture: 0.0,
        }
    }
}

impl ProblemConfig {
    pub fn to_spec(&self) -> Result<ProblemSpec> {
        let mut spec = ProblemSpec::homogeneous(self.k, self.kf, self.beta, self.width);
        spec.kf_n = self.kf_normal.unwrap_or(self.kf);
        spec.xi = self.xi;
        spec.source = [self.source.into(), self.source.into()];
        spec.source_fracture = self.source_fracture.into();
        spec.boundary = BoundaryData {
            p_left: self.p_left,
            p_right: self.p_right,
            horizontal: match self.horizontal {
                HorizontalKind::Impermeable => HorizontalBoundary::Impermeable,
                HorizontalKind::Dirichlet => HorizontalBoundary::Dirichlet {
                    bottom: self.p_bottom,
                    top: self.p_top,
                },
            },
            fracture_bottom: self.fracture_bottom,
            fracture_top: self.fracture_top,
        };
        spec.validate().map_err(|e| match e {
            Error::InvalidProblem(m) => {
                let key = match m.split_whitespace().next().unwrap_or("") {
                    "k_xx" | "k_yy" => "k",
                    "kf_tau" => "kf",
                    "kf_n" if self.kf_normal.is_some() => "kf_normal",
                    "kf_n" => "kf",
                    other => other,
                };
                Error::Config {
                    key: format!("problem.{key}"),
                    message: m,
                }
            }
            e => e,
        })?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Cells per subdomain in each direction, i.e. `1/h`.
    pub cells_per_subdomain: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            cells_per_subdomain: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    #[default]
    Kf,
    Beta,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kf" => Ok(SweepAxis::Kf),
            "beta" => Ok(SweepAxis::Beta),
            _ => Err(Error::Config {
                key: "experiment.sweep_axis".into(),
                message: format!("expected kf or beta, got {s:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub h_list: Vec<usize>,
    pub kf_list: Vec<f64>,
    pub beta_list: Vec<f64>,
    pub sweep_axis: SweepAxis,
    /// Stopping factor of the convergence-history runs.
    pub convergence_tol: f64,
    /// Grid used by `verify`.
    pub verify_cells: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            h_list: vec![32, 64, 128, 256],
            kf_list: vec![1e-6, 1e-4, 1e-2, 1.0],
            beta_list: vec![0.0, 10.0, 50.0, 100.0, 200.0],
            sweep_axis: SweepAxis::Kf,
            convergence_tol: 1e-8,
            verify_cells: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: "out".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub grid: GridConfig,
    pub smoother: SmootherConfig,
    pub cycle: CycleConfig,
    pub experiment: ExperimentConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config {
            key: "config".into(),
            message: e.message().to_string(),
        })?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml())?;
        Ok(())
    }

    /// Cycle settings with the smoother section folded in.
    pub fn cycle_config(&self) -> CycleConfig {
        CycleConfig {
            smoother: self.smoother,
            ..self.cycle.clone()
        }
    }

    pub fn spec(&self) -> Result<ProblemSpec> {
        self.problem.to_spec()
    }

    pub fn build_grid(&self, cells: usize) -> Result<StaggeredGrid> {
        let cycle = self.cycle_config();
        if cells < cycle.coarsest
            || !cells.is_multiple_of(cycle.coarsest)
            || !(cells / cycle.coarsest).is_power_of_two()
        {
            return Err(Error::Config {
                key: "grid.cells_per_subdomain".into(),
                message: format!(
                    "cells_per_subdomain must be even-coarsenable down to {} cells, got {cells}",
                    cycle.coarsest
                ),
            });
        }
        build_grid(Extents::unit_slab(), cells)
    }

    /// Checks everything that does not need a solve.
    pub fn validate(&self) -> Result<()> {
        self.spec()?;
        self.cycle_config().validate()?;
        self.build_grid(self.grid.cells_per_subdomain)?;
        let e = &self.experiment;
        for &h in &e.h_list {
            self.build_grid(h).map_err(|_| Error::Config {
                key: "experiment.h_list".into(),
                message: format!("cells_per_subdomain must be even-coarsenable, got {h}"),
            })?;
        }
        if e.h_list.is_empty() {
            return Err(Error::Config {
                key: "experiment.h_list".into(),
                message: "must not be empty".into(),
            });
        }
        if !(e.convergence_tol > 0.0 && e.convergence_tol < 1.0) {
            return Err(Error::Config {
                key: "experiment.convergence_tol".into(),
                message: format!("must lie in (0, 1), got {}", e.convergence_tol),
            });
        }
        Ok(())
    }
}
