//! Residual histories on a sequence of grids down to a reduction of 1e-8,
//! written as CSV files and one overlaid semilog SVG chart.
//!
//! ```bash
//! cargo run --release --example convergence_history -- out/convergence
//! ```

use std::path::Path;

use fracmg::config::RunConfig;
use fracmg::runner::run_convergence;

pub fn run_example(out: &Path, h_list: Vec<usize>) -> fracmg::Result<Vec<usize>> {
    let mut cfg = RunConfig::default();
    cfg.experiment.h_list = h_list;
    cfg.experiment.convergence_tol = 1e-8;
    let reports = run_convergence(&cfg, out)?;
    for (h, r) in &reports {
        let rel: Vec<String> = r
            .history
            .iter()
            .map(|v| format!("{:.1e}", v / r.history[0]))
            .collect();
        println!("1/{h:<4} {:2} cycles: {}", r.iterations, rel.join(" "));
    }
    println!("chart: {}", out.join("convergence.svg").display());
    Ok(reports.iter().map(|r| r.1.iterations).collect())
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/convergence".into());
    run_example(Path::new(&out), vec![32, 64, 128, 256])?;
    Ok(())
}
