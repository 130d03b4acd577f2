//! Cycle counts for increasing Forchheimer coefficients at `K_f = 1e-6`.
//!
//! ```bash
//! cargo run --release --example forchheimer_sweep -- 32 64 128 256
//! ```

use fracmg::config::{RunConfig, SweepAxis};
use fracmg::runner::sweep;

pub fn run_example(h_list: Vec<usize>, betas: Vec<f64>) -> fracmg::Result<Vec<Vec<Option<usize>>>> {
    let mut cfg = RunConfig::default();
    cfg.problem.kf = 1e-6;
    cfg.experiment.h_list = h_list;
    cfg.experiment.beta_list = betas;
    let table = sweep(&cfg, SweepAxis::Beta)?;
    print!("{:>6}", "beta");
    for h in &table.h_list {
        print!("{:>8}", format!("1/{h}"));
    }
    println!();
    for (beta, row) in table.values.iter().zip(&table.counts) {
        print!("{beta:>6}");
        for c in row {
            print!("{:>8}", c.map_or("FAIL".to_string(), |c| c.to_string()));
        }
        println!();
    }
    Ok(table.counts)
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    let mut h: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    if h.is_empty() {
        h = vec![32, 64, 128];
    }
    run_example(h, vec![0.0, 10.0, 50.0, 100.0, 200.0])?;
    Ok(())
}
