//! Collapsing nested sin-product angular integrals to one or two dimensions.
//!
//! The object of study is
//!
//! ```text
//! I_n(x; F) = ∫₀^{π/2} … ∫₀^{π/2} sin θ_w · F(x sin θ_1 ⋯ sin θ_n) dθ_1 ⋯ dθ_n
//! ```
//!
//! with a single sine weight. For `n = 2` it equals `(π/2x) ∫₀^x F`, for
//! `n = 3` it equals `(π/4) ∫₀¹ L(u) F(xu) du` with the logarithmic kernel
//! [`log_kernel`], and `n = 4` is the `n = 3` form under one extra free angle.

mod s_transform;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::identities::{TestFunction, Verdict};
use crate::quadrature::{
    integrate_1d_split, integrate_nd_inner, Abscissa, AxisSpec, QuadError, QuadPolicy, QuadResult, Transform,
};
use crate::specfun::{catalan_const, gamma_fn};

pub use s_transform::{s_region, s_square, verify_s_transform};

pub const MIN_ANGLES: usize = 2;
pub const MAX_ANGLES: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("unsupported number of angles {0}; expected 2, 3 or 4")]
    UnsupportedN(usize),
    #[error("sine weight index {weighted} out of range for {n} angles")]
    BadWeight { n: usize, weighted: usize },
    #[error("scale x = {0} must be positive and finite")]
    BadScale(f64),
    #[error("{f} is not integrable on [0, {x}]")]
    Inadmissible { f: TestFunction, x: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// `∫ sin θ_w · F(x ∏ sin θ_i)` over `n` quarter-turn angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinProductIntegral {
    pub n: usize,
    pub x: f64,
    pub f: TestFunction,
    /// Index of the angle carrying the sine weight (0 = outermost).
    pub weighted: usize,
}

impl SinProductIntegral {
    pub fn new(n: usize, x: f64, f: TestFunction) -> Result<Self, ReductionError> {
        Self::with_weight(n, x, f, 0)
    }

    pub fn with_weight(n: usize, x: f64, f: TestFunction, weighted: usize) -> Result<Self, ReductionError> {
        if !(MIN_ANGLES..=MAX_ANGLES).contains(&n) {
            return Err(ReductionError::UnsupportedN(n));
        }
        if weighted >= n {
            return Err(ReductionError::BadWeight { n, weighted });
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(ReductionError::BadScale(x));
        }
        if !f.admits(x) {
            return Err(ReductionError::Inadmissible { f, x });
        }
        Ok(Self { n, x, f, weighted })
    }

    /// Direct nested cubature over all `n` angles.
    pub fn naive(&self, policy: &QuadPolicy) -> Result<QuadResult, QuadError> {
        let f = self.f;
        naive_with(self.n, self.x, self.weighted, f.jump(), |t, gap| f.eval_c(t, gap), policy)
    }

    /// Known closed form of the full integral, if any.
    pub fn closed_form(&self) -> Option<f64> {
        let x = self.x;
        if let TestFunction::Power(p) = self.f {
            let free = wallis(p)?.powi(self.n as i32 - 1);
            return Some(x.powf(p) * wallis(p + 1.0)? * free);
        }
        match (self.n, self.f) {
            (2, f) => f.primitive(x).map(|prim| FRAC_PI_2 / x * prim),
            (3, TestFunction::InvSqrtOneMinusT2) if x == 1.0 => Some(PI * catalan_const()),
            (3, TestFunction::OneOverOneMinusT) => Some(watson_closed_form(x)),
            _ => None,
        }
    }
}

/// Nested cubature of `∫ sin θ_w · g(x ∏ sin θ_i, 1 - x ∏ sin θ_i)` over `n`
/// quarter-turn angles.
///
/// When `g` jumps at argument `jump`, the innermost angle is cut where the
/// product crosses it; a Gauss–Kronrod panel cannot see a jump lying outside
/// its outermost nodes.
pub(crate) fn naive_with<G>(
    n: usize,
    x: f64,
    weighted: usize,
    jump: Option<f64>,
    g: G,
    policy: &QuadPolicy,
) -> Result<QuadResult, QuadError>
where
    G: Fn(f64, f64) -> f64,
{
    let outer = vec![AxisSpec::quarter_turn(); n - 1];
    let last = AxisSpec::quarter_turn();
    integrate_nd_inner(
        &outer,
        |ps, pol| {
            let (q, gap) = sin_product(ps);
            let w_out = if weighted < n - 1 { ps[weighted].x.sin() } else { 1.0 };
            let xq = x * q;
            let cut = jump.filter(|&c| xq > c).map(|c| (c / xq).asin());
            let r = integrate_1d_split(
                |p| {
                    let s = p.x.sin();
                    let w_in = if weighted == n - 1 { s } else { 1.0 };
                    let gap = gap + q * one_minus_sin(p.to_hi);
                    w_in * g(xq * s, scaled_gap(x, gap))
                },
                &last,
                cut.as_slice(),
                pol,
            )?;
            Ok(scale(r, w_out))
        },
        policy,
    )
}

/// `∫₀^{π/2} sin^q θ dθ = (√π/2) Γ((q+1)/2) / Γ(q/2 + 1)`.
pub fn wallis(q: f64) -> Option<f64> {
    let num = gamma_fn(0.5 * (q + 1.0)).ok()?;
    let den = gamma_fn(0.5 * q + 1.0).ok()?;
    Some(0.5 * PI.sqrt() * num / den)
}

/// `(π/4x)[arccos²x − 2π arccos x + 3π²/4]` for `0 < x <= 1`.
pub fn watson_closed_form(x: f64) -> f64 {
    let a = x.acos();
    FRAC_PI_4 / x * (a * a - 2.0 * PI * a + 0.75 * PI * PI)
}

/// `ln((1 + √(1−u²)) / (1 − √(1−u²))) = 2 ln((1 + √(1−u²)) / u)` for `u ∈ (0, 1]`.
pub fn log_kernel(u: f64) -> f64 {
    log_kernel_c(u, 1.0 - u)
}

pub(crate) fn log_kernel_c(u: f64, gap: f64) -> f64 {
    let c = (gap * (1.0 + u)).sqrt();
    2.0 * ((1.0 + c) / u).ln()
}

/// `1 - sin θ` from the distance `d = π/2 - θ`.
pub(crate) fn one_minus_sin(d: f64) -> f64 {
    let h = (0.5 * d).sin();
    2.0 * h * h
}

/// Product of the sines of angular abscissas and its gap to one.
pub(crate) fn sin_product(ps: &[Abscissa]) -> (f64, f64) {
    let (mut q, mut gap) = (1.0, 0.0);
    for p in ps {
        // 1 - q s = (1 - q) + q (1 - s)
        gap += q * one_minus_sin(p.to_hi);
        q *= p.x.sin();
    }
    (q, gap)
}

/// `1 - x q` from `1 - q`.
pub(crate) fn scaled_gap(x: f64, gap: f64) -> f64 {
    (1.0 - x) + x * gap
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Kernel {
    /// `∫₀^x F(t) dt`
    Flat,
    /// `∫₀¹ L(u) F(xu) du`
    LogKernel,
    /// `∫₀^{π/2} dδ ∫₀¹ L(u) F(x sin δ · u) du`: the log-kernel step under
    /// `free_angles` untouched outer angles.
    Composed { free_angles: usize },
}

/// A reduced representation of a [`SinProductIntegral`]: `prefactor` times
/// the kernel integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedForm {
    pub source: SinProductIntegral,
    pub kernel: Kernel,
    pub prefactor: f64,
    pub dimension: usize,
}

pub fn reduce(integral: &SinProductIntegral) -> Result<ReducedForm, ReductionError> {
    let (kernel, prefactor) = match integral.n {
        2 => (Kernel::Flat, FRAC_PI_2 / integral.x),
        3 => (Kernel::LogKernel, FRAC_PI_4),
        4 => (Kernel::Composed { free_angles: 1 }, FRAC_PI_4),
        n => return Err(ReductionError::UnsupportedN(n)),
    };
    let dimension = match kernel {
        Kernel::Composed { free_angles } => 1 + free_angles,
        _ => 1,
    };
    Ok(ReducedForm {
        source: *integral,
        kernel,
        prefactor,
        dimension,
    })
}

impl ReducedForm {
    pub fn evaluate(&self, policy: &QuadPolicy) -> Result<QuadResult, QuadError> {
        let SinProductIntegral { x, f, .. } = self.source;
        let unit = if f.is_singular_at_one() || matches!(self.kernel, Kernel::LogKernel | Kernel::Composed { .. }) {
            Transform::LogEndpoint
        } else {
            Transform::None
        };
        let policy = abs_scaled(policy, self.prefactor);
        let r = match self.kernel {
            Kernel::Flat => integrate_1d_split(
                |p| f.eval_c(p.x, (1.0 - x) + p.to_hi),
                &AxisSpec::new(0.0, x, unit)?,
                f.jump().as_slice(),
                &policy,
            )?,
            Kernel::LogKernel => integrate_1d_split(
                |p| log_kernel_c(p.x, p.to_hi) * f.eval_c(x * p.x, scaled_gap(x, p.to_hi)),
                &AxisSpec::new(0.0, 1.0, unit)?,
                f.jump().map(|c| c / x).as_slice(),
                &policy,
            )?,
            Kernel::Composed { free_angles } => {
                let u_axis = AxisSpec::new(0.0, 1.0, unit)?;
                integrate_nd_inner(
                    &vec![AxisSpec::quarter_turn(); free_angles],
                    |angles, pol| {
                        let (q, gap) = sin_product(angles);
                        integrate_1d_split(
                            |u| {
                                // 1 - q u = (1 - q) + q (1 - u)
                                let gap = gap + q * u.to_hi;
                                log_kernel_c(u.x, u.to_hi) * f.eval_c(x * q * u.x, scaled_gap(x, gap))
                            },
                            &u_axis,
                            f.jump().map(|c| c / (x * q)).as_slice(),
                            pol,
                        )
                    },
                    &policy,
                )?
            }
        };
        Ok(scale(r, self.prefactor))
    }
}

/// Policy for an integral that will be multiplied by `c`: only the absolute
/// tolerance scales.
fn abs_scaled(policy: &QuadPolicy, c: f64) -> QuadPolicy {
    QuadPolicy {
        abs_tol: policy.abs_tol / c.abs(),
        ..*policy
    }
}

fn scale(r: QuadResult, c: f64) -> QuadResult {
    QuadResult {
        value: c * r.value,
        err_estimate: c.abs() * r.err_estimate,
        evaluations: r.evaluations,
    }
}

/// One side of a [`BenchmarkRecord`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSide {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: u64,
    /// Distance to the closed form when one is registered.
    pub actual_error: Option<f64>,
    /// Whether the integrator reported reaching the requested tolerance.
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub integral: SinProductIntegral,
    pub target_error: f64,
    pub closed_form: Option<f64>,
    pub naive: BenchmarkSide,
    pub reduced: BenchmarkSide,
}

impl BenchmarkRecord {
    /// Ratio of naive to reduced evaluation counts.
    pub fn speedup(&self) -> f64 {
        self.naive.evaluations as f64 / self.reduced.evaluations.max(1) as f64
    }

    /// Allowed distance between the two sides, and from each to the closed form.
    pub fn agreement_bound(&self) -> f64 {
        10.0 * self.target_error * self.reduced.value.abs().max(1.0)
    }

    /// Inconclusive unless both sides converged; otherwise pass iff the sides
    /// agree with each other and with the closed form, if any.
    pub fn verdict(&self) -> Verdict {
        if !(self.naive.converged && self.reduced.converged) {
            return Verdict::Inconclusive;
        }
        let bound = self.agreement_bound();
        let close = |e: Option<f64>| e.is_none_or(|e| e <= bound);
        if (self.naive.value - self.reduced.value).abs() <= bound
            && close(self.naive.actual_error)
            && close(self.reduced.actual_error)
        {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Evaluation counts of naive cubature and of the reduced form, both asked
/// for `target_error` (absolute and relative).
pub fn benchmark_reduction(integral: &SinProductIntegral, target_error: f64) -> Result<BenchmarkRecord, ReductionError> {
    benchmark_reduction_with(integral, &QuadPolicy::with_tol(target_error))
}

/// As [`benchmark_reduction`] under an explicit policy; `abs_tol` is the target.
pub fn benchmark_reduction_with(integral: &SinProductIntegral, policy: &QuadPolicy) -> Result<BenchmarkRecord, ReductionError> {
    let form = reduce(integral)?;
    policy.validate()?;
    let target_error = policy.abs_tol;
    let closed_form = integral.closed_form();
    let side = |r: Result<QuadResult, QuadError>| -> Result<BenchmarkSide, ReductionError> {
        let (r, converged) = match r {
            Ok(r) => (r, true),
            Err(e) => (e.best_estimate().ok_or(e)?, false),
        };
        Ok(BenchmarkSide {
            value: r.value,
            err_estimate: r.err_estimate,
            evaluations: r.evaluations,
            actual_error: closed_form.map(|c| (r.value - c).abs()),
            converged,
        })
    };
    Ok(BenchmarkRecord {
        integral: *integral,
        target_error,
        closed_form,
        naive: side(integral.naive(policy))?,
        reduced: side(form.evaluate(policy))?,
    })
}
