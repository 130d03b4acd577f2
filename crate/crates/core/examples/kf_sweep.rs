//! Cycle counts for a range of fracture permeabilities at `beta = 10`,
//! one column per grid.
//!
//! ```bash
//! cargo run --release --example kf_sweep -- 32 64 128 256
//! ```

use fracmg::config::{RunConfig, SweepAxis};
use fracmg::runner::sweep;

pub fn run_example(h_list: Vec<usize>) -> fracmg::Result<Vec<Vec<Option<usize>>>> {
    let mut cfg = RunConfig::default();
    cfg.problem.beta = 10.0;
    cfg.experiment.h_list = h_list;
    let table = sweep(&cfg, SweepAxis::Kf)?;
    print!("{:>8}", "K_f");
    for h in &table.h_list {
        print!("{:>8}", format!("1/{h}"));
    }
    println!();
    for (kf, row) in table.values.iter().zip(&table.counts) {
        print!("{kf:>8.0e}");
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
    run_example(h)?;
    Ok(())
}
