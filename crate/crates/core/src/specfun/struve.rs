use std::f64::consts::FRAC_2_PI;

use super::{bessel_i0, SeriesPolicy, SpecFunError};
use crate::quadrature::{integrate_1d, AxisSpec, QuadPolicy};

/// Largest |x| evaluated by the power series; beyond it `L₀ = I₀ - (2/π)∫…`.
pub const STRUVE_SERIES_LIMIT: f64 = 20.0;

/// Modified Struve function `L₀(x)`, odd in `x`.
///
/// Power series `Σ (x/2)^{2m+1} / Γ²(m + 3/2)` for `|x| <= 20`; above that,
/// `I₀(x) - (2/π) ∫₀^{π/2} e^{-x sin θ} dθ`.
pub fn struve_l0(x: f64) -> Result<f64, SpecFunError> {
    const NAME: &str = "struve_l0";
    if x.is_nan() {
        return Err(SpecFunError::Domain { func: NAME, arg: x });
    }
    let ax = x.abs();
    let v = if ax <= STRUVE_SERIES_LIMIT {
        struve_l0_series(ax, &SeriesPolicy::default())?
    } else {
        let rep = integrate_1d(
            |theta| (-ax * theta.sin()).exp(),
            &AxisSpec::quarter_turn(),
            &QuadPolicy::with_tol(1e-14),
        )
        .map_err(|source| SpecFunError::Quadrature { func: NAME, source })?;
        bessel_i0(ax)? - FRAC_2_PI * rep.value
    };
    Ok(v.copysign(x))
}

/// Power-series evaluation of `L₀(x)` for `x >= 0` under an explicit policy.
///
/// The terms are all positive, grow until `m ≈ x/2` and then decay; the sum is
/// compensated.
pub fn struve_l0_series(x: f64, policy: &SeriesPolicy) -> Result<f64, SpecFunError> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let h = 0.5 * x;
    // Γ(3/2)² = π/4, so the first term is (x/2)/(π/4) = 2x/π.
    let first = h / (0.25 * std::f64::consts::PI);
    policy.sum_ratio_series("struve_l0", first, |m| {
        let d = m as f64 + 0.5;
        h * h / (d * d)
    })
}

/// Above this, [`i0_minus_l0`] uses the asymptotic expansion.
pub const I0_MINUS_L0_ASYMPTOTIC: f64 = 40.0;

/// `I₀(x) − L₀(x)` without the cancellation of subtracting the two.
///
/// For `0 <= x < 40` the alternating series `Σ (−1)ⁿ (x/2)ⁿ / Γ²(n/2 + 1)` is
/// summed in double-double arithmetic; the largest term is about `eˣ`, so the
/// extra precision absorbs the cancellation. Beyond that the asymptotic series
/// `(2/πx) Σ ((2k−1)!!)² / x^{2k}` is truncated at its smallest term.
/// For `x < 0` there is no cancellation and the plain sum is returned.
pub fn i0_minus_l0(x: f64) -> Result<f64, SpecFunError> {
    const NAME: &str = "i0_minus_l0";
    if !x.is_finite() {
        return Err(SpecFunError::Domain { func: NAME, arg: x });
    }
    if x < 0.0 {
        return Ok(bessel_i0(x)? - struve_l0(x)?);
    }
    if x >= I0_MINUS_L0_ASYMPTOTIC {
        return Ok(asymptotic_i0_minus_l0(x));
    }
    // x/2 is exact; multiplying by it twice keeps both chains at the same argument.
    let h = 0.5 * x;
    // Even terms (x/2)^{2m}/(m!)², odd terms (x/2)^{2m+1}/Γ²(m+3/2), Γ²(3/2) = π/4.
    let mut even = Dd::from(1.0);
    let mut odd = Dd::new(1.273_239_544_735_162_8, -7.871_470_670_072_994e-17).mul_f64(h);
    let mut sum = even.sub(odd);
    for m in 1..10_000 {
        let a = m as f64;
        let b = a + 0.5;
        even = even.mul_f64(h).mul_f64(h).div_f64(a * a);
        odd = odd.mul_f64(h).mul_f64(h).div_f64(b * b);
        sum = sum.add(even.sub(odd));
        if a > x && even.hi < 1e-20 * sum.hi.abs() {
            return Ok(sum.hi + sum.lo);
        }
    }
    Err(SpecFunError::SeriesNotConverged { func: NAME, terms: 10_000 })
}

fn asymptotic_i0_minus_l0(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..200 {
        let d = 2.0 * k as f64 - 1.0;
        let next = term * d * d * inv2;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    FRAC_2_PI / x * sum
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }
}

impl Dd {
    fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Dd { hi, lo }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::new(s, e + self.lo + o.lo)
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        Dd::new(p, e + self.lo * b)
    }

    fn div_f64(self, b: f64) -> Dd {
        let q = self.hi / b;
        // Remainder of self − q·b, exact in the leading part.
        let r = self.sub(Dd::from(q).mul_f64(b));
        Dd::new(q, (r.hi + r.lo) / b)
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}
