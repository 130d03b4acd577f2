//! Runs a solve from a TOML configuration and writes the field files.
//!
//! ```bash
//! cargo run --release --example config_driven_run -- out/solve
//! ```

use std::path::Path;

use fracmg::config::RunConfig;
use fracmg::runner::run_solve;

const CONFIG: &str = r#"
[problem]
kf = 1e-2
beta = 50.0
xi = 0.75

[grid]
cells_per_subdomain = 32

[cycle]
cycle_type = "W"
tol = 1e-10
"#;

pub fn run_example(out: &Path, cells: usize) -> fracmg::Result<bool> {
    let mut cfg = RunConfig::from_toml(CONFIG)?;
    cfg.grid.cells_per_subdomain = cells;
    let report = run_solve(&cfg, out)?;
    cfg.save(&out.join("config.toml"))?;
    print!("{}", std::fs::read_to_string(out.join("report.txt"))?);
    for f in [
        "fields_matrix.csv",
        "fields_fracture.csv",
        "history.csv",
        "config.toml",
    ] {
        println!("wrote {}", out.join(f).display());
    }
    Ok(report.converged)
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/solve".into());
    run_example(Path::new(&out), 32)?;
    Ok(())
}
