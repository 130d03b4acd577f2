//! Runs the numerical self-checks on a small grid for a linear and a
//! strongly nonlinear fracture.

use fracmg::verify::standard_checks;
use fracmg::{slab_test_problem, CycleConfig};

pub fn run_example(h_inv: usize) -> fracmg::Result<bool> {
    let mut all = true;
    for (kf, beta) in [(1e-2, 0.0), (1.0, 200.0)] {
        let (spec, grid) = slab_test_problem(h_inv, kf, beta)?;
        println!("K_f = {kf:e}, beta = {beta}, h = 1/{h_inv}");
        for check in standard_checks(&spec, &grid, &CycleConfig::default())? {
            println!("  {check}");
            all &= check.passed();
        }
    }
    Ok(all)
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    if !run_example(8)? {
        std::process::exit(4);
    }
    Ok(())
}
