//! Writes a small sweep table as CSV and renders it, together with a
//! residual history, as SVG charts.

use std::path::Path;

use fracmg::config::{RunConfig, SweepAxis};
use fracmg::runner::{run_plot, run_solve, run_sweep};

pub fn run_example(out: &Path, h_list: Vec<usize>) -> fracmg::Result<()> {
    let mut cfg = RunConfig::default();
    cfg.experiment.h_list = h_list.clone();
    cfg.experiment.kf_list = vec![1e-6, 1e-2, 1.0];
    run_sweep(&cfg, SweepAxis::Kf, out)?;
    run_plot(&[out.join("table.csv")], &out.join("table.svg"))?;

    cfg.grid.cells_per_subdomain = h_list[0];
    run_solve(&cfg, &out.join("solve"))?;
    run_plot(&[out.join("solve/history.csv")], &out.join("history.svg"))?;
    println!(
        "wrote {} and {}",
        out.join("table.svg").display(),
        out.join("history.svg").display()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    run_example(Path::new("out/plots"), vec![16, 32, 64])
}
