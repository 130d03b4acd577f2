mod common;

use common::{perturb, TABLE_PAIRS};
use fracmg::operator::RowKind;
use fracmg::oracle::{newton_solve, NewtonConfig};
use fracmg::vanka::{smoothing_step, SmootherConfig};
use fracmg::verify::smoother_drift;
use fracmg::{slab_test_problem, Discretization, MixedDimVector};

fn rows_norm(disc: &Discretization, r: &MixedDimVector, kind: RowKind) -> f64 {
    (0..r.len())
        .filter(|&i| disc.row_kind(i) == kind)
        .map(|i| r[i] * r[i])
        .sum::<f64>()
        .sqrt()
}

#[test]
fn exact_solution_is_a_fixed_point() {
    for (kf, beta) in TABLE_PAIRS {
        for n in [4, 8] {
            let (spec, grid) = slab_test_problem(n, kf, beta).unwrap();
            let disc = Discretization::new(&spec, &grid).unwrap();
            let x = newton_solve(&spec, &grid, &NewtonConfig::default())
                .unwrap()
                .solution;
            let drift = smoother_drift(&disc, &x, &SmootherConfig::default());
            assert!(
                drift < 1e-10,
                "kf = {kf}, beta = {beta}, n = {n}: {drift:e}"
            );
        }
    }
}

#[test]
fn interface_rows_improve_under_one_sweep() {
    let (spec, grid) = slab_test_problem(8, 1e-6, 10.0).unwrap();
    let disc = Discretization::new(&spec, &grid).unwrap();
    let solution = newton_solve(&spec, &grid, &NewtonConfig::default())
        .unwrap()
        .solution;
    let cfg = SmootherConfig::default();
    for seed in 0..10 {
        let mut x = perturb(&solution, seed, 0.3);
        let before = rows_norm(
            &disc,
            &disc.residual(&x).unwrap(),
            RowKind::InterfaceMomentum,
        );
        smoothing_step(&disc, &mut x, disc.rhs(), &cfg);
        let after = rows_norm(
            &disc,
            &disc.residual(&x).unwrap(),
            RowKind::InterfaceMomentum,
        );
        assert!(after < before, "seed {seed}: {before:e} -> {after:e}");
    }
}

#[test]
fn one_step_reduces_the_residual() {
    for (kf, beta) in TABLE_PAIRS {
        let (spec, grid) = slab_test_problem(8, kf, beta).unwrap();
        let disc = Discretization::new(&spec, &grid).unwrap();
        let solution = newton_solve(&spec, &grid, &NewtonConfig::default())
            .unwrap()
            .solution;
        let mut x = perturb(&solution, 7, 0.2);
        let before = disc.residual(&x).unwrap().norm();
        smoothing_step(&disc, &mut x, disc.rhs(), &SmootherConfig::default());
        let after = disc.residual(&x).unwrap().norm();
        assert!(
            after < before,
            "kf = {kf}, beta = {beta}: {before:e} -> {after:e}"
        );
    }
}

#[test]
fn local_mass_rows_are_satisfied_after_undamped_sweep() {
    // with unit damping every matrix cell ends its update mass-conservative,
    // so only later neighbours can disturb it
    let (spec, grid) = slab_test_problem(8, 1e-2, 10.0).unwrap();
    let disc = Discretization::new(&spec, &grid).unwrap();
    let mut x = MixedDimVector::zeros(&grid);
    let cfg = SmootherConfig {
        fracture_sweeps: 0,
        ..SmootherConfig::default()
    };
    smoothing_step(&disc, &mut x, disc.rhs(), &cfg);
    let r = disc.residual(&x).unwrap();
    let last = grid.p(1, 7, 7);
    assert!(r[last].abs() < 1e-9 * disc.rhs().max_abs(), "{:e}", r[last]);
}
