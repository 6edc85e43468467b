use super::{SeriesPolicy, SpecFunError};

/// Modified Bessel function `I₀(x) = Σ (x²/4)^m / (m!)²`.
///
/// Even in `x`. Saturates with [`SpecFunError::Overflow`] once the value
/// leaves the f64 range (around `|x| ≈ 713`).
pub fn bessel_i0(x: f64) -> Result<f64, SpecFunError> {
    bessel_i0_with(x, &SeriesPolicy::default())
}

pub(crate) fn bessel_i0_with(x: f64, policy: &SeriesPolicy) -> Result<f64, SpecFunError> {
    const NAME: &str = "bessel_i0";
    if x.is_nan() {
        return Err(SpecFunError::Domain { func: NAME, arg: x });
    }
    let x = x.abs();
    if x == 0.0 {
        return Ok(1.0);
    }
    if x > 713.987_5 {
        return Err(SpecFunError::Overflow { func: NAME, arg: x });
    }
    let q = 0.25 * x * x;
    let v = policy
        .sum_ratio_series(NAME, 1.0, |m| {
            let m = m as f64;
            q / (m * m)
        })
        .map_err(|e| match e {
            SpecFunError::Overflow { func, .. } => SpecFunError::Overflow { func, arg: x },
            e => e,
        })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecFunError::Overflow { func: NAME, arg: x })
    }
}
