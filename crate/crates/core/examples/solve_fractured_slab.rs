//! Solves the fractured slab with the default W(2,2) FAS cycle and prints
//! the residual history and a pressure profile across the fracture.
//!
//! ```bash
//! cargo run --release --example solve_fractured_slab -- 64
//! ```

use fracmg::{slab_test_problem, solve, CycleConfig};

pub fn run_example(h_inv: usize, kf: f64, beta: f64) -> fracmg::Result<usize> {
    let (spec, grid) = slab_test_problem(h_inv, kf, beta)?;
    let report = solve(&spec, &grid, &CycleConfig::default())?;
    println!(
        "h = 1/{h_inv}, {} unknowns, K_f = {kf:e}, beta = {beta}",
        grid.len()
    );
    for (cycle, r) in report.history.iter().enumerate() {
        println!("  cycle {cycle:2}  |r| = {r:.3e}");
    }
    println!(
        "converged = {} after {} cycles, mean reduction {:.3}",
        report.converged,
        report.iterations,
        report.mean_reduction()
    );

    let x = &report.solution;
    let j = h_inv / 2;
    println!("pressure along y = {:.4}:", grid.y_center(j));
    for k in 0..2 {
        for i in (0..h_inv).step_by((h_inv / 4).max(1)) {
            println!(
                "  x = {:.4}  p = {:.1}",
                grid.x_center(k, i),
                x[grid.p(k, i, j)]
            );
        }
    }
    println!(
        "fracture pressure at y = {:.4}: {:.1}",
        grid.y_center(j),
        x[grid.pg(j)]
    );
    Ok(report.iterations)
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    let h_inv = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(32);
    run_example(h_inv, 1e-6, 10.0)?;
    Ok(())
}
