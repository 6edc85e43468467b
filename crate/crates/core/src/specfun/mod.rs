//! Special functions needed by the identity registry.
//!
//! All functions are pure and real-valued. Elliptic integrals use the
//! *modulus* convention `K(k) = ∫₀^{π/2} dθ / sqrt(1 - k² sin²θ)`, never the
//! parameter `m = k²`.
//!
//! Negative arguments: `I₀` is extended as an even function and `L₀` as an odd
//! one; `₃F₂(½,½,½;1,3/2;x²)` is even by construction.

mod bessel;
mod catalan;
mod elliptic;
mod gamma;
mod hypergeom;
mod struve;

pub use bessel::bessel_i0;
pub use catalan::catalan_const;
pub use elliptic::{agm, ellip_k, ellip_k_comp, Modulus};
pub use gamma::gamma_fn;
pub use hypergeom::{hyp3f2_half, hyp3f2_half_quadrature, hyp3f2_half_series, HYP3F2_SERIES_LIMIT};
pub use struve::{i0_minus_l0, struve_l0, struve_l0_series, I0_MINUS_L0_ASYMPTOTIC, STRUVE_SERIES_LIMIT};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::QuadError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecFunError {
    #[error("{func}: argument {arg} outside domain")]
    Domain { func: &'static str, arg: f64 },
    #[error("{func}: result overflows f64 at {arg}")]
    Overflow { func: &'static str, arg: f64 },
    #[error("{func}: series did not converge within {terms} terms")]
    SeriesNotConverged { func: &'static str, terms: usize },
    #[error("{func}: integral representation failed: {source}")]
    Quadrature {
        func: &'static str,
        #[source]
        source: QuadError,
    },
}

/// Truncation rule for the power series evaluated here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPolicy {
    /// Stop once `|term| <= rel_term_cutoff * |partial sum|`.
    pub rel_term_cutoff: f64,
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            rel_term_cutoff: 1e-16,
            max_terms: 10_000,
        }
    }
}

impl SeriesPolicy {
    pub fn new(rel_term_cutoff: f64, max_terms: usize) -> Option<Self> {
        (rel_term_cutoff > 0.0 && max_terms >= 1).then_some(Self {
            rel_term_cutoff,
            max_terms,
        })
    }

    /// Sum `first, first·ratio(1), first·ratio(1)·ratio(2), …` with Neumaier
    /// compensation, stopping per the policy.
    pub(crate) fn sum_ratio_series(
        &self,
        func: &'static str,
        first: f64,
        ratio: impl Fn(usize) -> f64,
    ) -> Result<f64, SpecFunError> {
        let mut sum = crate::quadrature::CompensatedSum::default();
        let mut term = first;
        sum.add(term);
        for m in 1..self.max_terms {
            term *= ratio(m);
            if !term.is_finite() {
                return Err(SpecFunError::Overflow { func, arg: f64::NAN });
            }
            sum.add(term);
            if term.abs() <= self.rel_term_cutoff * sum.value().abs() {
                return Ok(sum.value());
            }
        }
        if first == 0.0 {
            return Ok(0.0);
        }
        Err(SpecFunError::SeriesNotConverged {
            func,
            terms: self.max_terms,
        })
    }
}
