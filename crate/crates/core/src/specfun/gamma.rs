use std::f64::consts::PI;

use super::SpecFunError;

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function on the positive half-line.
///
/// Arguments below 1 are shifted up once through `Γ(x) = Γ(x + 1) / x`;
/// no reflection formula is needed.
pub fn gamma_fn(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain { func: "gamma_fn", arg: x });
    }
    if x < 1.0 {
        return Ok(lanczos(x) / x);
    }
    let v = lanczos(x - 1.0);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecFunError::Overflow { func: "gamma_fn", arg: x })
    }
}

/// Γ(z + 1) for z >= 0.
fn lanczos(z: f64) -> f64 {
    let mut series = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // Split the power to postpone overflow for large z.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * ((-t).exp() * half) * series
}
