//! The double integral
//!
//! ```text
//! S = ∫₀¹∫₀¹ f(x + y) F(xy) / √((1 − x²)(1 − y²)) dx dy
//! ```
//!
//! and its image under `u = x + y`, `v = xy`:
//!
//! ```text
//! S = 2 ∫₀¹ dv F(v) ∫_{2√v}^{1+v} f(u) du / √((u² − 4v)((1 + v)² − u²)).
//! ```

use crate::identities::{judge, ParamPoint, Side, TestFunction, TolClass, VerificationRecord};
use crate::quadrature::{integrate_nd_ends, AxisSpec, QuadError, QuadPolicy, QuadResult, Transform};

/// `S` over the unit square.
pub fn s_square<G, H>(f: G, big_f: H, policy: &QuadPolicy) -> Result<QuadResult, QuadError>
where
    G: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    let axis = AxisSpec::new(0.0, 1.0, Transform::InverseSqrtEndpoint)?;
    integrate_nd_ends(
        |p| {
            let (a, b) = (p[0], p[1]);
            let w = (a.to_hi * (1.0 + a.x) * b.to_hi * (1.0 + b.x)).sqrt();
            f(a.x + b.x) * big_f(a.x * b.x) / w
        },
        &[axis, axis],
        policy,
    )
}

/// `S` over the `(v, u)` region, with the inner variable mapped to the unit
/// interval by `u = 2√v + (1 − √v)² s`.
///
/// Both inner endpoints carry inverse-square-root singularities, so the inner
/// axis is double-exponential; the outer axis absorbs the logarithmic growth
/// of the inner integral as `v → 0`.
pub fn s_region<G, H>(f: G, big_f: H, policy: &QuadPolicy) -> Result<QuadResult, QuadError>
where
    G: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    let outer = AxisSpec::new(0.0, 1.0, Transform::LogEndpoint)?;
    let inner = AxisSpec::new(0.0, 1.0, Transform::DoubleExponential)?;
    let r = integrate_nd_ends(
        |p| {
            let (v, s) = (p[0].x, p[1]);
            let rv = v.sqrt();
            let w = (1.0 - rv) * (1.0 - rv);
            let u = 2.0 * rv + w * s.x;
            // u - 2√v = w s and (1 + v) - u = w (1 - s); the w² cancels the Jacobian.
            let d = (s.from_lo * s.to_hi * (u + 2.0 * rv) * (1.0 + v + u)).sqrt();
            big_f(v) * f(u) / d
        },
        &[outer, inner],
        &policy.tightened(2.0),
    )?;
    Ok(QuadResult {
        value: 2.0 * r.value,
        err_estimate: 2.0 * r.err_estimate,
        evaluations: r.evaluations,
    })
}

/// Compare both forms of `S` for a smooth `f` and a catalog `F`.
pub fn verify_s_transform<G>(f: G, big_f: TestFunction, tol: f64) -> VerificationRecord
where
    G: Fn(f64) -> f64,
{
    let policy = QuadPolicy::with_tol((tol * 1e-2).max(1e-13));
    let lhs = s_square(&f, |v| big_f.eval(v), &policy).map(Side::quad).map_err(Into::into);
    let rhs = s_region(&f, |v| big_f.eval(v), &policy).map(Side::quad).map_err(Into::into);
    judge(
        "EQ12_14",
        0,
        ParamPoint::empty().with_function(big_f),
        lhs,
        rhs,
        TolClass::Standard,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::Verdict;
    use std::f64::consts::PI;

    #[test]
    fn linear_f_with_linear_big_f() {
        // Square form factorises: ∫∫ (x + y) xy / √… = 2 · (∫ x²/√(1−x²)) (∫ x/√(1−x²)) = 2 (π/4)(1).
        let r = verify_s_transform(|u| u, TestFunction::Power(1.0), 1e-6);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!((r.lhs - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn constant_f_with_square_big_f() {
        // (∫ x²/√(1−x²))² = π²/16
        let r = verify_s_transform(|_| 1.0, TestFunction::Power(2.0), 1e-6);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.rhs - PI * PI / 16.0).abs() < 1e-8);
    }

    #[test]
    fn quadratic_f_with_exponential_big_f() {
        let r = verify_s_transform(|u| u * u, TestFunction::ExpNeg, 1e-6);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }

    #[test]
    fn region_map_inverse_recovers_the_square() {
        // y = (u − √(u² − 4v))/2 and x = u − y undo (x, y) ↦ (x + y, xy).
        for (x, y) in [(0.3, 0.7), (0.9, 0.1), (0.5, 0.5)] {
            let (u, v): (f64, f64) = (x + y, x * y);
            let yy = 0.5 * (u - (u * u - 4.0 * v).max(0.0).sqrt());
            let xx = u - yy;
            assert!((xx.max(yy) - x.max(y)).abs() < 1e-7);
            assert!((xx.min(yy) - x.min(y)).abs() < 1e-7);
            assert!(u >= 2.0 * v.sqrt() - 1e-15 && u <= 1.0 + v + 1e-15);
        }
    }
}
