//! Compares the multigrid solution with Newton's method on a direct
//! solver, block by block.
//!
//! ```bash
//! cargo run --release --example newton_reference -- 16
//! ```

use fracmg::oracle::{compare, newton_solve, NewtonConfig};
use fracmg::{slab_test_problem, solve, CycleConfig};

pub fn run_example(h_inv: usize) -> fracmg::Result<f64> {
    let mut worst: f64 = 0.0;
    for (kf, beta) in [(1e-6, 10.0), (1.0, 10.0), (1e-6, 200.0)] {
        let (spec, grid) = slab_test_problem(h_inv, kf, beta)?;
        let mg = solve(&spec, &grid, &CycleConfig::default())?;
        let newton = newton_solve(&spec, &grid, &NewtonConfig::default())?;
        let cmp = compare(&mg.solution, &newton.solution)?;
        println!(
            "K_f = {kf:e}, beta = {beta}: {} cycles, {} Newton steps, difference {:.2e}",
            mg.iterations, newton.iterations, cmp.global
        );
        for (block, d) in &cmp.blocks {
            println!("    {block:?}: {d:.2e}");
        }
        worst = worst.max(cmp.global);
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    let h_inv = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(16);
    run_example(h_inv)?;
    Ok(())
}
