use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use quadid_core::identities::{
    evaluate_identity, verify_suite, EvalContext, GridOverrides, ParamPoint, TestFunction, Verdict,
};
use quadid_core::moments::{kn_oracle, kn_recursive, MOMENT_TOL};
use quadid_core::quadrature::QuadPolicy;
use quadid_core::reduction::{reduce, SinProductIntegral};

fn suite(id: &str, overrides: GridOverrides, ctx: &EvalContext) -> Vec<quadid_core::identities::VerificationRecord> {
    verify_suite(&[id.to_string()], &overrides, ctx).unwrap().records
}

fn catalog_member() -> impl Strategy<Value = TestFunction> {
    prop::sample::select(TestFunction::catalog())
}

#[test]
fn eq9_holds_for_the_whole_catalog() {
    let recs = suite("EQ9", GridOverrides::default(), &EvalContext::default());
    for f in TestFunction::catalog() {
        assert!(recs.iter().any(|r| r.point.function == Some(f)), "{f} missing");
    }
    for r in &recs {
        assert_eq!(r.verdict, Verdict::Pass, "{} {}", r.point, r.abs_diff);
        if let Some(TestFunction::HeavisideStep(c)) = r.point.function {
            let x = r.point.get("x").unwrap();
            let want = FRAC_PI_2 / x * (x - c).max(0.0);
            assert!((r.rhs - want).abs() < 1e-15);
        }
    }
}

#[test]
fn moments_recursion_agrees_on_two_to_twelve() {
    let mut prev = kn_oracle(1).unwrap();
    for n in 2..=12 {
        let o = kn_oracle(n).unwrap();
        assert!(o > 0.0 && o < prev, "n = {n}");
        assert!((kn_recursive(n).unwrap() - o).abs() <= MOMENT_TOL, "n = {n}");
        prev = o;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn s_transform_holds_for_random_pairs(seed in any::<u64>()) {
        let ctx = EvalContext { seed, ..EvalContext::default() };
        let recs = suite("EQ12_14", GridOverrides::default(), &ctx);
        prop_assert_eq!(recs.len(), 10);
        for r in recs {
            prop_assert!(r.abs_diff <= 1e-6, "seed {} pair {}: {:e}", seed, r.point, r.abs_diff);
        }
    }

    #[test]
    fn eq9_scaling(p in 0.0f64..4.0, x in 0.05f64..8.0) {
        // F = t^p: I(x; F) = x^p I(1; F).
        let f = TestFunction::power(p).unwrap();
        let pol = QuadPolicy::with_tol(1e-11);
        let at_x = SinProductIntegral::new(2, x, f).unwrap().naive(&pol).unwrap().value;
        let at_1 = SinProductIntegral::new(2, 1.0, f).unwrap().naive(&pol).unwrap().value;
        prop_assert!((at_x - x.powf(p) * at_1).abs() <= 1e-9 * at_x.abs().max(1.0));
    }

    #[test]
    fn naive_reduced_and_closed_forms_agree(f in catalog_member(), x in 0.05f64..0.95, n in 2usize..=3) {
        let integral = SinProductIntegral::new(n, x, f).unwrap();
        let tol = if f.is_singular_at_one() && n == 3 { 1e-5 } else if f.is_discontinuous() { 1e-6 } else { 1e-8 };
        let pol = QuadPolicy::with_tol(tol * 1e-2);
        let naive = integral.naive(&pol).unwrap().value;
        let reduced = reduce(&integral).unwrap().evaluate(&pol).unwrap().value;
        let scale = naive.abs().max(1.0);
        prop_assert!((naive - reduced).abs() <= tol * scale, "{} n={} x={}: {} vs {}", f, n, x, naive, reduced);
        if let Some(c) = integral.closed_form() {
            prop_assert!((reduced - c).abs() <= tol * scale);
        }
    }

    #[test]
    fn eq20_on_random_moduli(a in 0.01f64..0.99) {
        let r = evaluate_identity("EQ20", &ParamPoint::empty().with("a", a), &EvalContext::default()).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Pass);
    }
}

#[test]
fn eq24_monte_carlo_is_seeded() {
    let ctx = |seed| EvalContext {
        seed,
        mc_samples: 200_000,
        ..EvalContext::default()
    };
    let mut o = GridOverrides::default();
    o.axes.insert("route".into(), vec![2.0]);
    let a = suite("EQ24", o.clone(), &ctx(7));
    let b = suite("EQ24", o.clone(), &ctx(7));
    let c = suite("EQ24", o, &ctx(8));
    assert_eq!(a, b);
    assert_ne!(a[0].lhs, c[0].lhs);
    assert!((a[0].rhs - PI * 0.915_965_594_177_219_015).abs() < 1e-14);
}
