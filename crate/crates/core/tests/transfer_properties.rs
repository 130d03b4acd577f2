mod common;

use common::random_vec;
use fracmg::grid::{build_grid, Extents, UnknownClass};
use fracmg::transfer::{InterfaceTransfer, TransferPair};
use proptest::prelude::*;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn pair(n: usize, mode: InterfaceTransfer) -> TransferPair {
    TransferPair::new(&build_grid(Extents::unit_slab(), n).unwrap(), mode).unwrap()
}

fn class_strategy() -> impl Strategy<Value = UnknownClass> {
    prop::sample::select(UnknownClass::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn weighted_adjointness(
        n in prop::sample::select(vec![4usize, 8]),
        class in class_strategy(),
        sx in any::<u64>(),
        sy in any::<u64>(),
    ) {
        let t = pair(n, InterfaceTransfer::Planar);
        let r = t.restriction_matrix(class);
        let p = t.prolongation_matrix(class);
        let s = TransferPair::adjoint_scale(class);
        let x = random_vec(r.ncols(), sx);
        let y = random_vec(r.nrows(), sy);
        let mut rx = r.matvec(&x);
        for (v, m) in rx.iter_mut().zip(t.row_mass(class)) {
            *v *= m;
        }
        let lhs = dot(&y, &rx);
        let rhs = dot(&p.matvec(&y), &x) / s;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn literal_adjointness_on_untruncated_rows(
        n in prop::sample::select(vec![4usize, 8]),
        class in class_strategy(),
        sx in any::<u64>(),
        sy in any::<u64>(),
    ) {
        let t = pair(n, InterfaceTransfer::Planar);
        let r = t.restriction_matrix(class);
        let p = t.prolongation_matrix(class);
        let s = TransferPair::adjoint_scale(class);
        let x = random_vec(r.ncols(), sx);
        let mut y = random_vec(r.nrows(), sy);
        for (v, m) in y.iter_mut().zip(t.row_mass(class)) {
            if (m - 1.0).abs() > 1e-15 {
                *v = 0.0;
            }
        }
        let lhs = dot(&y, &r.matvec(&x));
        let rhs = dot(&p.matvec(&y), &x) / s;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn constants_survive_both_directions(
        n in prop::sample::select(vec![4usize, 8, 16]),
        mode in prop::sample::select(vec![InterfaceTransfer::Line, InterfaceTransfer::Planar]),
        c in -1e6f64..1e6,
    ) {
        let t = pair(n, mode);
        for class in UnknownClass::ALL {
            let r = t.restriction_matrix(class);
            for v in t.restrict_class(class, &vec![c; r.ncols()]).unwrap() {
                prop_assert!((v - c).abs() <= 1e-15 * c.abs().max(1.0));
            }
            for v in t.prolong_class(class, &vec![c; r.nrows()]).unwrap() {
                prop_assert!((v - c).abs() <= 1e-15 * c.abs().max(1.0));
            }
        }
    }

    #[test]
    fn transfers_are_linear(
        class in class_strategy(),
        a in -10.0f64..10.0,
        sx in any::<u64>(),
        sy in any::<u64>(),
    ) {
        let t = pair(8, InterfaceTransfer::Line);
        let r = t.restriction_matrix(class);
        let x = random_vec(r.ncols(), sx);
        let y = random_vec(r.ncols(), sy);
        let z: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + v).collect();
        let (rx, ry, rz) = (
            t.restrict_class(class, &x).unwrap(),
            t.restrict_class(class, &y).unwrap(),
            t.restrict_class(class, &z).unwrap(),
        );
        for i in 0..rz.len() {
            prop_assert!((rz[i] - a * rx[i] - ry[i]).abs() <= 1e-12);
        }
    }
}

#[test]
fn prolongation_is_scaled_transpose_of_unnormalized_restriction() {
    let t = pair(8, InterfaceTransfer::Planar);
    for class in UnknownClass::ALL {
        let r = t.restriction_matrix(class);
        let p = t.prolongation_matrix(class);
        let s = TransferPair::adjoint_scale(class);
        let mass = t.row_mass(class);
        for (i, j, v) in r.triplets() {
            assert!(
                (s * v * mass[i] - p.get(j, i)).abs() < 1e-14,
                "{class:?} ({i},{j})"
            );
        }
    }
}
