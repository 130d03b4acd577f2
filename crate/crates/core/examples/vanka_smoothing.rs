//! Residual reduction of Vanka relaxation on its own and inside the W-cycle.

use fracmg::operator::{Discretization, MixedDimVector};
use fracmg::vanka::{smoothing_step, SmootherConfig};
use fracmg::{slab_test_problem, solve, CycleConfig};

pub fn run_example(h_inv: usize) -> fracmg::Result<(f64, f64)> {
    let (spec, grid) = slab_test_problem(h_inv, 1e-2, 10.0)?;
    let disc = Discretization::new(&spec, &grid)?;
    let cfg = SmootherConfig::default();
    let mut x = MixedDimVector::zeros(&grid);
    let r0 = disc.residual(&x)?.norm();
    let rhs = disc.rhs().clone();
    for sweep in 1..=20 {
        smoothing_step(&disc, &mut x, &rhs, &cfg);
        if sweep % 5 == 0 {
            println!(
                "{sweep:3} smoothing steps: |r|/|r0| = {:.3e}",
                disc.residual(&x)?.norm() / r0
            );
        }
    }
    let smoothed = disc.residual(&x)?.norm() / r0;
    let cycle = CycleConfig {
        max_cycles: 5,
        ..CycleConfig::default()
    };
    let mg = solve(&spec, &grid, &cycle)?;
    for (c, r) in mg.history.iter().enumerate().skip(1) {
        println!(
            "{c:3} W(2,2) cycles:   |r|/|r0| = {:.3e}",
            r / mg.history[0]
        );
    }
    Ok((smoothed, mg.final_relative_residual()))
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    run_example(32)?;
    Ok(())
}
