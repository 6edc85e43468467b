//! Singularity-aware numerical integration.
//!
//! Three integrators share one result type:
//!
//! - [`integrate_1d`]: adaptive Gauss–Kronrod (7/15) bisection on a finite
//!   interval, optionally after an endpoint-smoothing substitution, or
//!   tanh-sinh when the axis asks for [`Transform::DoubleExponential`].
//! - [`integrate_nd`]: nested 1-D integration over 2 to 4 axes.
//! - [`monte_carlo_nd`]: seeded, thread-count independent Monte Carlo.
//!
//! Every deterministic integrator also has an `_ends` variant whose integrand
//! receives an [`Abscissa`]: the node together with its distances to both
//! interval ends. Those distances are computed without cancellation, so
//! integrands that blow up like `1/sqrt(1 - t)` or `ln(1 - t)` can be
//! evaluated accurately arbitrarily close to the endpoint.

mod adaptive;
mod axis;
mod monte_carlo;
mod nested;
mod tanh_sinh;

pub use axis::{AxisSpec, Transform};
pub use monte_carlo::{monte_carlo_nd, MIN_SAMPLES};
pub use nested::{integrate_nd, integrate_nd_ends, integrate_nd_inner, MAX_NESTED_DIM};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Outcome of any integrator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// Non-negative error estimate. For the deterministic integrators this is
    /// the embedded-rule difference summed over panels; for Monte Carlo it is
    /// one standard error.
    pub err_estimate: f64,
    pub evaluations: u64,
}

/// A quadrature node on `[lo, hi]` with cancellation-free endpoint distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    /// `x - lo`
    pub from_lo: f64,
    /// `hi - x`
    pub to_hi: f64,
}

impl Abscissa {
    pub fn new(x: f64, from_lo: f64, to_hi: f64) -> Self {
        Self { x, from_lo, to_hi }
    }

    /// Node for a plain point on `[lo, hi]`; distances computed by subtraction.
    pub fn on_interval(x: f64, lo: f64, hi: f64) -> Self {
        Self {
            x,
            from_lo: x - lo,
            to_hi: hi - x,
        }
    }

    /// `1 - x` for a node on an interval ending at 1, falling back to plain
    /// subtraction when the interval ends elsewhere.
    #[inline]
    pub fn one_minus(&self, hi: f64) -> f64 {
        if hi == 1.0 {
            self.to_hi
        } else {
            1.0 - self.x
        }
    }
}

/// Convergence controls shared by the deterministic integrators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadPolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of a single panel (tanh-sinh: maximum level).
    pub max_depth: u32,
    pub max_evals: u64,
}

impl Default for QuadPolicy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 50,
            max_evals: 5_000_000,
        }
    }
}

impl QuadPolicy {
    pub const MAX_DEPTH_LIMIT: u32 = 60;

    pub fn with_tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_depth > 0
            && self.max_depth <= Self::MAX_DEPTH_LIMIT
            && self.max_evals > 0;
        if ok {
            Ok(())
        } else {
            Err(QuadError::InvalidPolicy(*self))
        }
    }

    /// Tolerance the total error estimate must meet for an integral of size `value`.
    #[inline]
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Tolerances divided by `factor` (used for nested inner levels).
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    #[error("tolerance {target:e} not reached within limits (best {best:?})")]
    AccuracyNotReached { best: QuadResult, target: f64 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteIntegrand { x: f64 },
    #[error("invalid axis [{lo}, {hi}]")]
    InvalidAxis { lo: f64, hi: f64 },
    #[error("invalid quadrature policy {0:?}")]
    InvalidPolicy(QuadPolicy),
    #[error("nested cubature supports 1 to {max} axes, got {got}; use monte_carlo_nd")]
    UnsupportedDimension { got: usize, max: usize },
    #[error("invalid Monte Carlo request: {0}")]
    InvalidSampling(String),
}

impl QuadError {
    /// Best available estimate when the failure was a convergence shortfall.
    pub fn best_estimate(&self) -> Option<QuadResult> {
        match self {
            QuadError::AccuracyNotReached { best, .. } => Some(*best),
            _ => None,
        }
    }
}

/// Integrate `f` over one axis.
pub fn integrate_1d<F>(f: F, axis: &AxisSpec, policy: &QuadPolicy) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    integrate_1d_ends(|p: Abscissa| f(p.x), axis, policy)
}

/// Integrate an endpoint-aware integrand over one axis.
pub fn integrate_1d_ends<F>(
    f: F,
    axis: &AxisSpec,
    policy: &QuadPolicy,
) -> Result<QuadResult, QuadError>
where
    F: Fn(Abscissa) -> f64,
{
    policy.validate()?;
    match axis.transform {
        Transform::DoubleExponential => tanh_sinh::integrate(&f, axis, policy),
        _ => adaptive::integrate(&f, axis, policy),
    }
}

/// [`integrate_1d_ends`] with the axis cut at interior `breaks`, e.g. known
/// jump locations. Every piece keeps the axis transform; abscissas passed to
/// `f` carry distances to the ends of the whole axis.
pub fn integrate_1d_split<F>(f: F, axis: &AxisSpec, breaks: &[f64], policy: &QuadPolicy) -> Result<QuadResult, QuadError>
where
    F: Fn(Abscissa) -> f64,
{
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| *b > axis.lo && *b < axis.hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    if cuts.is_empty() {
        return integrate_1d_ends(f, axis, policy);
    }
    let mut edges = vec![axis.lo];
    edges.extend(cuts);
    edges.push(axis.hi);
    let piece_policy = QuadPolicy {
        abs_tol: policy.abs_tol / (edges.len() - 1) as f64,
        ..*policy
    };
    let mut total = QuadResult {
        value: 0.0,
        err_estimate: 0.0,
        evaluations: 0,
    };
    let mut failed = false;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let piece = AxisSpec::new(a, b, axis.transform)?;
        let (head, tail) = (a - axis.lo, axis.hi - b);
        let r = integrate_1d_ends(
            |p| f(Abscissa::new(p.x, head + p.from_lo, tail + p.to_hi)),
            &piece,
            &piece_policy,
        );
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                failed = true;
                e.best_estimate().ok_or(e)?
            }
        };
        total.value += r.value;
        total.err_estimate += r.err_estimate;
        total.evaluations += r.evaluations;
    }
    if failed {
        Err(QuadError::AccuracyNotReached {
            best: total,
            target: policy.target(total.value),
        })
    } else {
        Ok(total)
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
