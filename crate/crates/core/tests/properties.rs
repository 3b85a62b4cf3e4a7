//! Property tests for the structural invariants.

use ballspec::ballfun::{inner_l2, BallPoly};
use ballspec::chebseries::RadialPoly;
use ballspec::harmonics::HarmonicIndex;
use ballspec::jacobi::{gauss_jacobi_rule, pochhammer, JacobiParams};
use ballspec::transforms::cutoff_eval;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pochhammer_shift(a in -6.0f64..6.0, k in 0u32..12) {
        let lhs = pochhammer(a, k + 1);
        let rhs = pochhammer(a, k) * (a + k as f64);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0));
    }

    #[test]
    fn gauss_rule_weights_positive_and_total(
        n in 1usize..24,
        a in -0.9f64..3.0,
        b in -0.9f64..3.0,
    ) {
        let rule = gauss_jacobi_rule(n, JacobiParams::new(a, b)).unwrap();
        prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
        prop_assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(rule.nodes.iter().all(|t| t.abs() < 1.0));
        // total mass is size-independent
        let big = gauss_jacobi_rule(n + 8, JacobiParams::new(a, b)).unwrap();
        prop_assert!((rule.total() - big.total()).abs() <= 1e-10 * big.total());
    }

    #[test]
    fn cutoff_range_and_monotonicity(t in 0.0f64..3.0, dt in 0.0f64..0.5) {
        let v = cutoff_eval(t);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(cutoff_eval(t + dt) <= v + 1e-12);
    }

    #[test]
    fn ballpoly_json_round_trip(
        m in 0u32..5,
        c0 in -2.0f64..2.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
    ) {
        let idx = HarmonicIndex::new(2, m, 1).unwrap();
        let f = BallPoly::from_term(idx, RadialPoly::from_monomial(&[c0, c1, c2]));
        let s = serde_json::to_string(&f).unwrap();
        let back: BallPoly = serde_json::from_str(&s).unwrap();
        for x in ballspec::util::points_in_ball(2, 8, (m as u64) << 8 | 5) {
            prop_assert!((f.eval(&x) - back.eval(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_linear_and_degree_dropping(
        m in 0u32..4,
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        s in -3.0f64..3.0,
    ) {
        let idx = HarmonicIndex::new(2, m, 1).unwrap();
        let f = BallPoly::from_term(idx, RadialPoly::from_monomial(&[a, b, 1.0]));
        let g = BallPoly::from_term(idx, RadialPoly::from_monomial(&[b, 0.5, -a]));
        let lhs = f.add_scaled(&g, s).laplacian();
        let rhs = f.laplacian().add_scaled(&g.laplacian(), s);
        for x in ballspec::util::points_in_ball(2, 6, 77) {
            prop_assert!((lhs.eval(&x) - rhs.eval(&x)).abs() < 1e-11);
        }
        // degree drops by at least 2 in the total-degree grading
        let df = f.total_degree().unwrap();
        prop_assert!(f.laplacian().total_degree().unwrap_or(0) + 2 <= df);
    }

    #[test]
    fn inner_l2_positive_definite(
        m in 0u32..4,
        a in -2.0f64..2.0,
        b in 0.25f64..2.0,
        mu in 0.0f64..2.0,
    ) {
        let idx = HarmonicIndex::new(2, m, 1).unwrap();
        let f = BallPoly::from_term(idx, RadialPoly::from_monomial(&[a, b]));
        prop_assert!(inner_l2(&f, &f, mu) > 0.0);
    }
}
