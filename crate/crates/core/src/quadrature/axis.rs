use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use super::{Abscissa, QuadError};

/// Variable substitution applied to an axis before integration.
///
/// All substitutions map the reference variable `s ∈ [0, 1]` onto `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// `t = lo + (hi - lo) s`
    None,
    /// `t = lo + (hi - lo) sin(πs/2)`. On `[0, 1]` this is `t = sin θ`, whose
    /// Jacobian absorbs a `1/sqrt(hi - t)` endpoint factor.
    InverseSqrtEndpoint,
    /// `t = lo + (hi - lo) s²(3 - 2s)`. The Jacobian vanishes linearly at both
    /// ends, taming logarithmic and inverse-square-root endpoint behaviour.
    LogEndpoint,
    /// Tanh-sinh quadrature; handles algebraic and logarithmic singularities
    /// at either end.
    DoubleExponential,
}

/// One integration axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub transform: Transform,
}

impl AxisSpec {
    pub fn new(lo: f64, hi: f64, transform: Transform) -> Result<Self, QuadError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(QuadError::InvalidAxis { lo, hi });
        }
        Ok(Self { lo, hi, transform })
    }

    /// Plain axis; panics on an empty or non-finite interval.
    pub fn plain(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, Transform::None).expect("valid interval")
    }

    /// `[0, π/2]` with no substitution: the angular axes of the sin-product integrals.
    pub fn quarter_turn() -> Self {
        Self::plain(0.0, FRAC_PI_2)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Map a reference node given as `(s, 1 - s)` to the axis, returning the
    /// node and the Jacobian `dt/ds`.
    #[inline]
    pub(crate) fn map(&self, s: f64, s_rev: f64) -> (Abscissa, f64) {
        let w = self.hi - self.lo;
        match self.transform {
            Transform::None | Transform::DoubleExponential => {
                let from_lo = w * s;
                let to_hi = w * s_rev;
                let x = if s <= 0.5 { self.lo + from_lo } else { self.hi - to_hi };
                (Abscissa::new(x, from_lo, to_hi), w)
            }
            Transform::InverseSqrtEndpoint => {
                let half = 0.5 * FRAC_PI_2 * s_rev;
                let sin_theta = (FRAC_PI_2 * s).sin();
                let from_lo = w * sin_theta;
                // 1 - sin θ = 2 sin²((π/2 - θ)/2)
                let to_hi = w * 2.0 * half.sin().powi(2);
                let x = if from_lo <= to_hi { self.lo + from_lo } else { self.hi - to_hi };
                let jac = w * FRAC_PI_2 * (FRAC_PI_2 * s_rev).sin();
                (Abscissa::new(x, from_lo, to_hi), jac)
            }
            Transform::LogEndpoint => {
                let from_lo = w * s * s * (3.0 - 2.0 * s);
                let to_hi = w * s_rev * s_rev * (3.0 - 2.0 * s_rev);
                let x = if s <= 0.5 { self.lo + from_lo } else { self.hi - to_hi };
                (Abscissa::new(x, from_lo, to_hi), 6.0 * w * s * s_rev)
            }
        }
    }
}
