use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::specfun::{ellip_k, Modulus};

/// A scalar test function `F` plugged into the sin-product identities.
///
/// Every member is evaluated as `F(t)` with the gap `1 - t` supplied
/// separately, so members singular at `t = 1` stay accurate near it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TestFunction {
    /// `e^{-t}`
    ExpNeg,
    /// `t^p`, `p >= 0`
    Power(f64),
    /// `1 / (1 + t)`
    RationalOneOverOnePlusT,
    /// `cos t`
    Cosine,
    /// `1` for `t > c`, else `0`, with `c ∈ (0, 1)`
    HeavisideStep(f64),
    /// `K(t)`, modulus convention
    EllipticK,
    /// `1 / sqrt(1 - t²)`
    InvSqrtOneMinusT2,
    /// `1 / (1 - t)`
    OneOverOneMinusT,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown test function `{0}`")]
    Unknown(String),
    #[error("bad parameter for `{name}`: {reason}")]
    BadParameter { name: &'static str, reason: String },
}

impl TestFunction {
    /// The default catalog swept by the identity grids.
    pub fn catalog() -> Vec<TestFunction> {
        use TestFunction::*;
        vec![
            ExpNeg,
            Power(0.0),
            Power(1.0),
            Power(2.5),
            RationalOneOverOnePlusT,
            Cosine,
            HeavisideStep(0.4),
            EllipticK,
            InvSqrtOneMinusT2,
            OneOverOneMinusT,
        ]
    }

    pub fn power(p: f64) -> Result<Self, CatalogError> {
        if p.is_finite() && p >= 0.0 {
            Ok(Self::Power(p))
        } else {
            Err(CatalogError::BadParameter {
                name: "power",
                reason: format!("exponent {p} must be finite and >= 0"),
            })
        }
    }

    pub fn heaviside_step(c: f64) -> Result<Self, CatalogError> {
        if c > 0.0 && c < 1.0 {
            Ok(Self::HeavisideStep(c))
        } else {
            Err(CatalogError::BadParameter {
                name: "heaviside_step",
                reason: format!("threshold {c} must lie in (0, 1)"),
            })
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_c(t, 1.0 - t)
    }

    /// `F(t)` given `gap = 1 - t` computed by the caller without cancellation.
    pub fn eval_c(&self, t: f64, gap: f64) -> f64 {
        match *self {
            Self::ExpNeg => (-t).exp(),
            Self::Power(p) => {
                if p == 0.0 {
                    1.0
                } else {
                    t.powf(p)
                }
            }
            Self::RationalOneOverOnePlusT => 1.0 / (1.0 + t),
            Self::Cosine => t.cos(),
            Self::HeavisideStep(c) => {
                if t > c {
                    1.0
                } else {
                    0.0
                }
            }
            Self::EllipticK => {
                let kp = (gap * (1.0 + t)).sqrt();
                match Modulus::from_complement(kp.min(1.0)) {
                    Ok(m) => ellip_k(m),
                    Err(_) => f64::NAN,
                }
            }
            Self::InvSqrtOneMinusT2 => 1.0 / (gap * (1.0 + t)).sqrt(),
            Self::OneOverOneMinusT => 1.0 / gap,
        }
    }

    /// `∫₀^x F(t) dt` where a closed form is known.
    pub fn primitive(&self, x: f64) -> Option<f64> {
        if !self.admits(x) {
            return None;
        }
        Some(match *self {
            Self::ExpNeg => -(-x).exp_m1(),
            Self::Power(p) => x.powf(p + 1.0) / (p + 1.0),
            Self::RationalOneOverOnePlusT => x.ln_1p(),
            Self::Cosine => x.sin(),
            Self::HeavisideStep(c) => (x - c).max(0.0),
            Self::EllipticK => return None,
            Self::InvSqrtOneMinusT2 => x.asin(),
            Self::OneOverOneMinusT => -(-x).ln_1p(),
        })
    }

    /// Whether `F` is integrable on `[0, x]` for `x >= 0`.
    pub fn admits(&self, x: f64) -> bool {
        if !(x >= 0.0 && x.is_finite()) {
            return false;
        }
        match self {
            Self::EllipticK | Self::InvSqrtOneMinusT2 => x <= 1.0,
            Self::OneOverOneMinusT => x < 1.0,
            _ => true,
        }
    }

    pub fn is_discontinuous(&self) -> bool {
        self.jump().is_some()
    }

    /// Location of the jump discontinuity, if any.
    pub fn jump(&self) -> Option<f64> {
        match *self {
            Self::HeavisideStep(c) => Some(c),
            _ => None,
        }
    }

    /// Singular (but integrable) at `t = 1`.
    pub fn is_singular_at_one(&self) -> bool {
        matches!(
            self,
            Self::EllipticK | Self::InvSqrtOneMinusT2 | Self::OneOverOneMinusT
        )
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExpNeg => f.write_str("exp_neg"),
            Self::Power(p) => write!(f, "power:{p}"),
            Self::RationalOneOverOnePlusT => f.write_str("rational_one_over_one_plus_t"),
            Self::Cosine => f.write_str("cosine"),
            Self::HeavisideStep(c) => write!(f, "heaviside_step:{c}"),
            Self::EllipticK => f.write_str("elliptic_k"),
            Self::InvSqrtOneMinusT2 => f.write_str("inv_sqrt_one_minus_t2"),
            Self::OneOverOneMinusT => f.write_str("one_over_one_minus_t"),
        }
    }
}

impl FromStr for TestFunction {
    type Err = CatalogError;

    /// Parses the [`Display`](fmt::Display) form, e.g. `power:2` or
    /// `heaviside_step:0.4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let number = |what: &'static str| -> Result<f64, CatalogError> {
            let a = arg.ok_or_else(|| CatalogError::BadParameter {
                name: what,
                reason: "missing `:<value>`".into(),
            })?;
            a.parse().map_err(|_| CatalogError::BadParameter {
                name: what,
                reason: format!("`{a}` is not a number"),
            })
        };
        let plain = |v: TestFunction| match arg {
            None => Ok(v),
            Some(_) => Err(CatalogError::Unknown(s.to_string())),
        };
        match name {
            "exp_neg" => plain(Self::ExpNeg),
            "power" => Self::power(number("power")?),
            "rational_one_over_one_plus_t" => plain(Self::RationalOneOverOnePlusT),
            "cosine" => plain(Self::Cosine),
            "heaviside_step" => Self::heaviside_step(number("heaviside_step")?),
            "elliptic_k" => plain(Self::EllipticK),
            "inv_sqrt_one_minus_t2" => plain(Self::InvSqrtOneMinusT2),
            "one_over_one_minus_t" => plain(Self::OneOverOneMinusT),
            _ => Err(CatalogError::Unknown(s.to_string())),
        }
    }
}

impl From<TestFunction> for String {
    fn from(f: TestFunction) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for TestFunction {
    type Error = CatalogError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
