//! Moments `Kₙ = ∫₀¹ K(k) / (1 + k)ⁿ dk` of the complete elliptic integral.
//!
//! Two independent routes: direct quadrature and the recursion
//!
//! ```text
//! K_{n+1} = π/2^{n+3} [Γ²((n+1)/2)/Γ²((n+2)/2) − (−1)ⁿ π]
//!           − Σ_{k=1}^{n−1} (−1)ᵏ C(n,k) 2^{−k} K_{n+1−k},      K₁ = π²/8.
//! ```

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{integrate_1d_ends, AxisSpec, QuadError, QuadPolicy, QuadResult, Transform};
use crate::specfun::{ellip_k, Modulus};

/// Absolute tolerance between recursion and oracle.
pub const MOMENT_TOL: f64 = 1e-8;
pub const MIN_TABLE_N: u32 = 2;
pub const MAX_TABLE_N: u32 = 30;

/// `K₁ = π²/8`.
pub const K1: f64 = PI * PI / 8.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error("recursion is defined for n >= 2, got {0}")]
    RecursionDomain(u32),
    #[error("table size {0} outside [{MIN_TABLE_N}, {MAX_TABLE_N}]")]
    TableRange(u32),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

fn oracle_policy() -> QuadPolicy {
    QuadPolicy::with_tol(1e-13)
}

/// `Kₙ` by adaptive quadrature, with the error estimate.
pub fn kn_oracle_quad(n: u32, policy: &QuadPolicy) -> Result<QuadResult, QuadError> {
    let axis = AxisSpec::new(0.0, 1.0, Transform::LogEndpoint)?;
    let p = n as i32;
    integrate_1d_ends(
        |a| {
            // K from 1 - k keeps the logarithmic blow-up at k = 1 accurate.
            let k = match Modulus::from_one_minus(a.to_hi) {
                Ok(m) => ellip_k(m),
                Err(_) => f64::NAN,
            };
            k * (1.0 + a.x).powi(-p)
        },
        &axis,
        policy,
    )
}

/// `Kₙ` by quadrature.
pub fn kn_oracle(n: u32) -> Result<f64, MomentError> {
    Ok(kn_oracle_quad(n, &oracle_policy())?.value)
}

/// One recursion output with the largest term that entered it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecursionStep {
    pub value: f64,
    pub largest_term: f64,
}

/// `Γ((m+1)/2) / Γ((m+2)/2)` for `m = 0..len`, from `Γ(1/2) = √π` and `Γ(z+1) = zΓ(z)`.
fn gamma_ratios(len: usize) -> Vec<f64> {
    let mut r = Vec::with_capacity(len);
    let mut cur = PI.sqrt();
    for m in 0..len {
        r.push(cur);
        cur = 1.0 / (0.5 * (m as f64 + 1.0) * cur);
    }
    r
}

/// `K₁..K_{n_max}` from the recursion; entry `i` holds `K_{i+1}`.
pub fn kn_sequence(n_max: u32) -> Vec<RecursionStep> {
    let n_max = n_max.max(1) as usize;
    let ratios = gamma_ratios(n_max);
    let mut out = vec![RecursionStep {
        value: K1,
        largest_term: K1,
    }];
    for n in 1..n_max {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let r = ratios[n];
        let lead = PI / 2f64.powi(n as i32 + 3) * (r * r - sign * PI);
        let mut largest = lead.abs();
        let mut sum = 0.0;
        let mut binom = 1.0;
        for k in 1..n {
            binom = binom * (n + 1 - k) as f64 / k as f64;
            let sk = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = sk * binom * 2f64.powi(-(k as i32)) * out[n - k].value;
            largest = largest.max(term.abs());
            sum += term;
        }
        out.push(RecursionStep {
            value: lead - sum,
            largest_term: largest,
        });
    }
    out
}

/// `Kₙ` from the recursion, `n >= 2`.
pub fn kn_recursive(n: u32) -> Result<f64, MomentError> {
    if n < 2 {
        return Err(MomentError::RecursionDomain(n));
    }
    Ok(kn_sequence(n)[n as usize - 1].value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: u32,
    /// Exact constant for `n = 1`.
    pub recursion_value: f64,
    pub oracle_value: f64,
    pub oracle_err: f64,
    pub abs_diff: f64,
    /// Magnitude of the largest term summed into the recursion value.
    pub largest_term: f64,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub n_max: u32,
    pub tolerance: f64,
    pub rows: Vec<MomentRow>,
}

impl MomentTable {
    pub fn count(&self, status: RowStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.count(RowStatus::Pass) == self.rows.len()
    }
}

/// Rows `n = 1..=n_max`, recursion against the quadrature oracle.
pub fn moment_table(n_max: u32) -> Result<MomentTable, MomentError> {
    moment_table_with(n_max, MOMENT_TOL)
}

pub fn moment_table_with(n_max: u32, tolerance: f64) -> Result<MomentTable, MomentError> {
    if !(MIN_TABLE_N..=MAX_TABLE_N).contains(&n_max) {
        return Err(MomentError::TableRange(n_max));
    }
    let steps = kn_sequence(n_max);
    let policy = oracle_policy();
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let step = steps[n as usize - 1];
            let (oracle, note) = match kn_oracle_quad(n, &policy) {
                Ok(q) => (Some(q), None),
                Err(e) => (e.best_estimate(), Some(e.to_string())),
            };
            let q = oracle.unwrap_or(QuadResult {
                value: f64::NAN,
                err_estimate: f64::NAN,
                evaluations: 0,
            });
            let abs_diff = (step.value - q.value).abs();
            let status = if note.is_some() || !abs_diff.is_finite() {
                RowStatus::Inconclusive
            } else if abs_diff <= tolerance {
                RowStatus::Pass
            } else {
                RowStatus::Fail
            };
            MomentRow {
                n,
                recursion_value: step.value,
                oracle_value: q.value,
                oracle_err: q.err_estimate,
                abs_diff,
                largest_term: step.largest_term,
                status,
                note,
            }
        })
        .collect();
    Ok(MomentTable {
        n_max,
        tolerance,
        rows,
    })
}
