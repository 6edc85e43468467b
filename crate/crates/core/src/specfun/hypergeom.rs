use std::f64::consts::FRAC_2_PI;

use super::{ellip_k, Modulus, SeriesPolicy, SpecFunError};
use crate::quadrature::{integrate_1d_ends, AxisSpec, QuadPolicy, Transform};

/// Largest |x| evaluated by the power series in [`hyp3f2_half`].
pub const HYP3F2_SERIES_LIMIT: f64 = 0.9;

/// `₃F₂(½, ½, ½; 1, 3/2; x²)` for `|x| <= 1`.
///
/// Power series for `|x| <= 0.9`; closer to the unit circle the series
/// converges like `Σ x^{2m}/m²` and the integral `(2/π) ∫₀¹ K(xt) dt` is used
/// instead.
pub fn hyp3f2_half(x: f64) -> Result<f64, SpecFunError> {
    check_domain(x)?;
    if x.abs() <= HYP3F2_SERIES_LIMIT {
        hyp3f2_half_series(x, &SeriesPolicy::default())
    } else {
        hyp3f2_half_quadrature(x)
    }
}

fn check_domain(x: f64) -> Result<(), SpecFunError> {
    if x.abs() <= 1.0 {
        Ok(())
    } else {
        Err(SpecFunError::Domain { func: "hyp3f2_half", arg: x })
    }
}

/// Series `Σ [(½)_m]³ / ((1)_m (3/2)_m m!) · x^{2m}`.
///
/// At `|x| = 1` the terms only decay like `1/m²`, so the default policy
/// reports [`SpecFunError::SeriesNotConverged`].
pub fn hyp3f2_half_series(x: f64, policy: &SeriesPolicy) -> Result<f64, SpecFunError> {
    check_domain(x)?;
    let z = x * x;
    policy.sum_ratio_series("hyp3f2_half", 1.0, |m| {
        // term_m / term_{m-1}
        let a = m as f64 - 0.5;
        let mf = m as f64;
        a * a * a * z / (mf * (mf + 0.5) * mf)
    })
}

/// `(2/π) ∫₀¹ K(xt) dt`, valid up to and including `|x| = 1`.
pub fn hyp3f2_half_quadrature(x: f64) -> Result<f64, SpecFunError> {
    check_domain(x)?;
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(1.0);
    }
    let axis = AxisSpec::new(0.0, 1.0, Transform::LogEndpoint).expect("unit axis");
    let r = integrate_1d_ends(
        |p| {
            // 1 - xt = (1 - x) + x (1 - t), both terms exact-ish
            let one_minus = (1.0 - ax) + ax * p.to_hi;
            let kp = (one_minus * (1.0 + ax * p.x)).sqrt();
            match Modulus::from_complement(kp.min(1.0)) {
                Ok(m) => ellip_k(m),
                Err(_) => f64::NAN,
            }
        },
        &axis,
        &QuadPolicy::with_tol(1e-13),
    )
    .map_err(|source| SpecFunError::Quadrature {
        func: "hyp3f2_half",
        source,
    })?;
    Ok(FRAC_2_PI * r.value)
}
