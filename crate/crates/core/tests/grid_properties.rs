use fracmg::grid::{build_grid, coarsen, Extents, UnknownClass};
use proptest::prelude::*;

proptest! {
    #[test]
    fn coarsening_matches_direct_construction(m in 2usize..40) {
        let fine = build_grid(Extents::unit_slab(), 2 * m).unwrap();
        let coarse = coarsen(&fine).unwrap();
        let direct = build_grid(Extents::unit_slab(), m).unwrap();
        prop_assert_eq!(coarse.len(), direct.len());
        for class in UnknownClass::ALL {
            prop_assert_eq!(coarse.class_len(class), direct.class_len(class));
        }
        prop_assert_eq!(coarse.fracture_breakpoints(), direct.fracture_breakpoints());
    }

    #[test]
    fn unknown_count_closed_form(n in 1usize..64) {
        let g = build_grid(Extents::unit_slab(), n).unwrap();
        prop_assert_eq!(g.len(), 2 * (2 * (n + 1) * n + n * n) + 2 * n + 1);
    }

    #[test]
    fn subdomains_match_on_the_fracture(n in 1usize..64) {
        let g = build_grid(Extents::unit_slab(), n).unwrap();
        let f = g.fracture_breakpoints();
        prop_assert_eq!(&g.interface_breakpoints(0), &f);
        prop_assert_eq!(&g.interface_breakpoints(1), &f);
        for j in 0..n {
            prop_assert!((f[j + 1] - f[j] - g.dy(j)).abs() < 1e-15);
        }
    }

    #[test]
    fn index_maps_are_bijections(n in 1usize..24) {
        let g = build_grid(Extents::unit_slab(), n).unwrap();
        let mut seen = vec![false; g.len()];
        for class in UnknownClass::ALL {
            let (nx, ny) = g.class_shape(class);
            let range = g.layout().class_range(class);
            prop_assert_eq!(range.len(), nx * ny);
            for j in 0..ny {
                for i in 0..nx {
                    let idx = g.index(class, i, j);
                    prop_assert!(range.contains(&idx));
                    prop_assert!(!seen[idx]);
                    seen[idx] = true;
                    let dof = g.locate(idx);
                    prop_assert_eq!((dof.class, dof.i, dof.j), (class, i, j));
                }
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn odd_grids_do_not_coarsen(m in 1usize..40) {
        let g = build_grid(Extents::unit_slab(), 2 * m + 1).unwrap();
        prop_assert!(coarsen(&g).is_err());
    }
}
