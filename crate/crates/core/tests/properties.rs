use proptest::prelude::*;
use sharpgrad::constants::{
    bracket_expanded, bracket_square, constant_series, fgh, second_derivative_series,
    ConstantQuery, LKernel, RadialPoint,
};
use sharpgrad::gegenbauer::{eval_explicit, eval_recurrence};
use sharpgrad::quadrature::gauss_legendre;
use sharpgrad::series::SeriesControl;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gegenbauer_parity(lambda in 0.05f64..4.0, k in 0usize..30, x in -1.0f64..1.0) {
        let a = eval_recurrence(lambda, k, -x);
        let b = eval_recurrence(lambda, k, x);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn recurrence_matches_explicit_sum(lambda in 0.1f64..3.0, k in 0usize..20, x in -0.99f64..0.99) {
        let r = eval_recurrence(lambda, k, x);
        let e = eval_explicit(lambda, k, x);
        prop_assert!((r - e).abs() <= 1e-10 * r.abs().max(1.0));
    }

    #[test]
    fn bracket_is_a_perfect_square(a in -1e3f64..1e3, b in -1e3f64..1e3, n in 3u32..20) {
        let nf = n as f64;
        let r = nf / (nf - 2.0);
        let scale = a * a + 2.0 * r * (a * b).abs() + r * r * b * b;
        prop_assume!(scale > 0.0);
        prop_assert!((bracket_expanded(a, b, nf) - bracket_square(a, b, nf)).abs() <= 1e-13 * scale);
    }

    #[test]
    fn l_kernel_nonnegative(n in 3u32..10, rho in 0.0f64..0.98, t in -0.999f64..0.999, u in -1.0f64..1.0) {
        let p = RadialPoint::new(n, rho).unwrap();
        let k = LKernel::new(&p);
        let d = p.delta();
        let r = ((1.0 - d * d * t * t) * (1.0 - t * t)).sqrt();
        let v = k.eval(&k.point(t, d * t * t + r * u));
        prop_assert!(v >= 0.0);
    }

    #[test]
    fn fgh_even_in_t(n in 3u32..9, rho in 0.0f64..0.95, t in 0.0f64..1.0) {
        let p = RadialPoint::new(n, rho).unwrap();
        let (ctl, rule) = (SeriesControl::default(), gauss_legendre(64).unwrap());
        let a = fgh(t, &p, &ctl, &rule).unwrap();
        let b = fgh(-t, &p, &ctl, &rule).unwrap();
        for (x, y) in [(a.f, b.f), (a.g, b.g), (a.h, b.h)] {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn second_derivative_nonnegative(n in 3u32..12, rho in 0.0f64..0.97, t in -0.999f64..0.999) {
        let p = RadialPoint::new(n, rho).unwrap();
        let s = second_derivative_series(t, &p, &SeriesControl::default()).unwrap();
        prop_assert!(s.value >= -1e-12);
    }

    #[test]
    fn radial_direction_dominates(n in 3u32..9, rho in 0.01f64..0.95, alpha in 0.0f64..std::f64::consts::PI) {
        let (ctl, rule) = (SeriesControl::default(), gauss_legendre(128).unwrap());
        let zero = constant_series(&ConstantQuery::new(n, rho, 0.0).unwrap(), &ctl, &rule).unwrap().value;
        let other = constant_series(&ConstantQuery::new(n, rho, alpha).unwrap(), &ctl, &rule).unwrap().value;
        prop_assert!(zero >= other - 1e-12 * zero.abs().max(1.0));
    }
}
