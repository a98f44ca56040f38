//! Randomized invariants: lumped-norm homogeneity and the nodal inequality
//! behind square-path convexity, searched over generated inputs.

use fraclap::*;
use proptest::prelude::*;

fn profile(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(lo..hi, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // |c u|_p = |c| |u|_p for every lumped norm, including the sup norm
    #[test]
    fn lumped_norms_are_absolutely_homogeneous(
        vals in profile(12, -10.0, 10.0),
        c in -4.0f64..4.0,
        p in prop_oneof![Just(1.0f64), Just(1.5), Just(2.0), Just(f64::INFINITY)],
    ) {
        let grid = make_grid(-1.0, 1.0, 12).unwrap();
        let scaled: Vec<f64> = vals.iter().map(|x| c * x).collect();
        let u = GridFunction::new(grid, vals).unwrap();
        let cu = GridFunction::new(grid, scaled).unwrap();
        let lhs = norm_lp(&cu, p).unwrap();
        let rhs = c.abs() * norm_lp(&u, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), "{} vs {}", lhs, rhs);
    }

    // increments of the square-interpolated profile are dominated by the
    // interpolated increments, the pointwise fact that makes the seminorm
    // part of the energy convex along the path
    #[test]
    fn path_increments_are_dominated(
        a in profile(12, 0.0, 5.0),
        b in profile(12, 0.0, 5.0),
        theta in 0.0f64..1.0,
    ) {
        let grid = make_grid(-1.0, 1.0, 12).unwrap();
        let u = GridFunction::new(grid, a).unwrap();
        let v = GridFunction::new(grid, b).unwrap();
        let w = path_interpolant(theta, &u, &v).unwrap();
        for i in 0..grid.n {
            for j in 0..i {
                let lhs = (w.values[i] - w.values[j]).powi(2);
                let rhs = (1.0 - theta) * (u.values[i] - u.values[j]).powi(2)
                    + theta * (v.values[i] - v.values[j]).powi(2);
                prop_assert!(lhs <= rhs + 1e-12, "pair ({}, {}): {} > {}", i, j, lhs, rhs);
            }
        }
    }
}
