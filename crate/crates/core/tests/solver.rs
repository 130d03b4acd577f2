mod common;

use common::TABLE_PAIRS;
use fracmg::fas::{solve_linear, CycleType};
use fracmg::oracle::{compare, newton_solve, NewtonConfig};
use fracmg::verify::trajectory_gap;
use fracmg::{slab_test_problem, solve, CycleConfig, Error};

#[test]
fn multigrid_agrees_with_newton() {
    for (kf, beta) in TABLE_PAIRS {
        let (spec, grid) = slab_test_problem(8, kf, beta).unwrap();
        let mg = solve(&spec, &grid, &CycleConfig::default()).unwrap();
        assert!(mg.converged);
        let newton = newton_solve(&spec, &grid, &NewtonConfig::default()).unwrap();
        let cmp = compare(&mg.solution, &newton.solution).unwrap();
        assert!(
            cmp.worst_block() <= 1e-6,
            "kf = {kf}, beta = {beta}: {cmp:?}"
        );
    }
}

#[test]
fn comparison_detects_a_different_closure() {
    let (spec, grid) = slab_test_problem(8, 1e-6, 10.0).unwrap();
    let mg = solve(&spec, &grid, &CycleConfig::default()).unwrap();
    let newton = newton_solve(&spec, &grid, &NewtonConfig::default()).unwrap();
    let same = compare(&mg.solution, &newton.solution).unwrap().global;
    let mut other = spec.clone();
    other.xi = 1.0;
    let newton = newton_solve(&other, &grid, &NewtonConfig::default()).unwrap();
    let changed = compare(&mg.solution, &newton.solution).unwrap().global;
    assert!(changed > 1e-6, "{changed:e}");
    assert!(changed > 1e3 * same, "{changed:e} vs {same:e}");
}

#[test]
fn history_layout() {
    let (spec, grid) = slab_test_problem(16, 1e-4, 10.0).unwrap();
    let rep = solve(&spec, &grid, &CycleConfig::default()).unwrap();
    assert_eq!(rep.history.len(), rep.iterations + 1);
    assert!(rep.converged);
    assert!(rep.final_relative_residual() <= 1e-10);
    assert!(rep.history[rep.history.len() - 2] > 1e-10 * rep.history[0]);
    // only the first cycle may increase the residual
    for w in rep.history[1..].windows(2) {
        assert!(w[1] < w[0], "{:?}", rep.history);
    }
}

#[test]
fn cycle_budget_exhaustion_is_reported() {
    let (spec, grid) = slab_test_problem(16, 1e-6, 10.0).unwrap();
    let cfg = CycleConfig {
        max_cycles: 2,
        ..CycleConfig::default()
    };
    let rep = solve(&spec, &grid, &cfg).unwrap();
    assert!(!rep.converged);
    assert_eq!(rep.iterations, 2);
}

#[test]
fn grids_must_reach_the_coarsest_level() {
    for n in [6, 12, 20] {
        let grid = fracmg::build_grid(fracmg::Extents::unit_slab(), n).unwrap();
        let (spec, _) = slab_test_problem(8, 1e-6, 10.0).unwrap();
        let err = solve(&spec, &grid, &CycleConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NotCoarsenable(m) if m == n));
    }
}

#[test]
fn darcy_fas_is_linear_multigrid() {
    for kf in [1e-6, 1e-2, 1.0] {
        for n in [8, 16] {
            let (spec, grid) = slab_test_problem(n, kf, 0.0).unwrap();
            let gap = trajectory_gap(&spec, &grid, &CycleConfig::default(), 6).unwrap();
            assert!(gap <= 1e-12, "kf = {kf}, n = {n}: {gap:e}");
            let fas = solve(&spec, &grid, &CycleConfig::default()).unwrap();
            let lin = solve_linear(&spec, &grid, &CycleConfig::default()).unwrap();
            assert_eq!(fas.iterations, lin.iterations);
        }
    }
}

#[test]
fn v_cycle_converges_too() {
    let (spec, grid) = slab_test_problem(32, 1e-6, 10.0).unwrap();
    let cfg = CycleConfig {
        cycle_type: CycleType::V,
        ..CycleConfig::default()
    };
    let rep = solve(&spec, &grid, &cfg).unwrap();
    assert!(rep.converged, "{:?}", rep.history);
    assert!(rep.iterations <= 20);
}
