use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::SpecFunError;

/// Elliptic modulus `k ∈ [0, 1)` stored together with its complement
/// `k' = sqrt(1 - k²)`.
///
/// Keeping `k'` explicit matters near `k → 1`, where `K(k) ≈ ln(4/k')` and
/// recomputing `k'` from a rounded `k` would lose all precision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    k: f64,
    kp: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self, SpecFunError> {
        if !(0.0..1.0).contains(&k) {
            return Err(SpecFunError::Domain { func: "Modulus::new", arg: k });
        }
        Ok(Self {
            k,
            kp: ((1.0 - k) * (1.0 + k)).sqrt(),
        })
    }

    /// Build from the complementary modulus `k' ∈ (0, 1]`.
    pub fn from_complement(kp: f64) -> Result<Self, SpecFunError> {
        if !(kp > 0.0 && kp <= 1.0) {
            return Err(SpecFunError::Domain {
                func: "Modulus::from_complement",
                arg: kp,
            });
        }
        Ok(Self {
            k: ((1.0 - kp) * (1.0 + kp)).sqrt(),
            kp,
        })
    }

    /// Build from the gap `1 - k ∈ (0, 1]`, which is kept exact when `k` is
    /// close to one.
    pub fn from_one_minus(gap: f64) -> Result<Self, SpecFunError> {
        if !(gap > 0.0 && gap <= 1.0) {
            return Err(SpecFunError::Domain {
                func: "Modulus::from_one_minus",
                arg: gap,
            });
        }
        Ok(Self {
            k: 1.0 - gap,
            kp: (gap * (2.0 - gap)).sqrt(),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn complement(&self) -> f64 {
        self.kp
    }
}

/// Arithmetic–geometric mean of two non-negative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind, `K(k) = π / (2 AGM(1, k'))`.
pub fn ellip_k(m: Modulus) -> f64 {
    FRAC_PI_2 / agm(1.0, m.kp)
}

/// Complementary integral `K'(k) = K(sqrt(1 - k²)) = π / (2 AGM(1, k))` for `k ∈ (0, 1]`.
pub fn ellip_k_comp(k: f64) -> Result<f64, SpecFunError> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(SpecFunError::Domain {
            func: "ellip_k_comp",
            arg: k,
        });
    }
    Ok(FRAC_PI_2 / agm(1.0, k))
}
