//! Nested adaptive cubature over a box of up to four axes.

use std::cell::Cell;

use super::{integrate_1d_ends, Abscissa, AxisSpec, QuadError, QuadPolicy, QuadResult};

pub const MAX_NESTED_DIM: usize = 4;

/// Tolerance divisor between consecutive nesting levels.
const LEVEL_SHARE: f64 = 3.0;

/// Integrate `f` over the box `axes` (outermost axis first).
pub fn integrate_nd<F>(f: F, axes: &[AxisSpec], policy: &QuadPolicy) -> Result<QuadResult, QuadError>
where
    F: Fn(&[f64]) -> f64,
{
    integrate_nd_ends(
        |p: &[Abscissa]| {
            let mut xs = [0.0; MAX_NESTED_DIM];
            for (x, a) in xs.iter_mut().zip(p) {
                *x = a.x;
            }
            f(&xs[..p.len()])
        },
        axes,
        policy,
    )
}

/// Endpoint-aware variant of [`integrate_nd`]: the integrand receives one
/// [`Abscissa`] per axis, in the same order as `axes`.
///
/// Level `ℓ` (0 = outermost) runs with tolerances divided by `3^ℓ`. Inner
/// failures do not abort the outer sweep; their best estimates are used and
/// the overall call reports [`QuadError::AccuracyNotReached`].
pub fn integrate_nd_ends<F>(f: F, axes: &[AxisSpec], policy: &QuadPolicy) -> Result<QuadResult, QuadError>
where
    F: Fn(&[Abscissa]) -> f64,
{
    let Some((last, outer)) = axes.split_last() else {
        return Err(QuadError::UnsupportedDimension {
            got: 0,
            max: MAX_NESTED_DIM,
        });
    };
    let n = axes.len();
    integrate_nd_inner(
        outer,
        |prefix: &[Abscissa], pol: &QuadPolicy| {
            let mut c = [Abscissa::new(0.0, 0.0, 0.0); MAX_NESTED_DIM];
            c[..n - 1].copy_from_slice(prefix);
            integrate_1d_ends(
                |p| {
                    let mut c = c;
                    c[n - 1] = p;
                    f(&c[..n])
                },
                last,
                pol,
            )
        },
        policy,
    )
}

/// Nested cubature whose innermost integral is computed by the caller.
///
/// `inner` receives the outer abscissas and the policy for the innermost
/// level, which lets its limits or breakpoints depend on the outer
/// variables. Tolerance sharing and error propagation follow
/// [`integrate_nd_ends`]; `outer` may be empty.
pub fn integrate_nd_inner<L>(outer: &[AxisSpec], inner: L, policy: &QuadPolicy) -> Result<QuadResult, QuadError>
where
    L: Fn(&[Abscissa], &QuadPolicy) -> Result<QuadResult, QuadError>,
{
    if outer.len() >= MAX_NESTED_DIM {
        return Err(QuadError::UnsupportedDimension {
            got: outer.len() + 1,
            max: MAX_NESTED_DIM,
        });
    }
    policy.validate()?;
    let inner_failed = Cell::new(false);
    let nest = Nest {
        leaf: &inner,
        axes: outer,
        policy,
        inner_failed: &inner_failed,
    };
    let mut coords = [Abscissa::new(0.0, 0.0, 0.0); MAX_NESTED_DIM];
    match nest.level(0, &mut coords) {
        Ok(r) if inner_failed.get() => Err(QuadError::AccuracyNotReached {
            best: r,
            target: policy.target(r.value),
        }),
        other => other,
    }
}

struct Nest<'a, L> {
    leaf: &'a L,
    axes: &'a [AxisSpec],
    policy: &'a QuadPolicy,
    inner_failed: &'a Cell<bool>,
}

impl<L> Nest<'_, L>
where
    L: Fn(&[Abscissa], &QuadPolicy) -> Result<QuadResult, QuadError>,
{
    fn level(&self, depth: usize, coords: &mut [Abscissa; MAX_NESTED_DIM]) -> Result<QuadResult, QuadError> {
        let policy = self.policy.tightened(LEVEL_SHARE.powi(depth as i32));
        if depth == self.axes.len() {
            return (self.leaf)(&coords[..depth], &policy);
        }
        let axis = &self.axes[depth];
        let inner_evals = Cell::new(0u64);
        let inner_err = Cell::new(0.0f64);
        let prefix = *coords;
        let inner_error: Cell<Option<QuadError>> = Cell::new(None);
        let outer = integrate_1d_ends(
            |p| {
                let mut c = prefix;
                c[depth] = p;
                let r = match self.level(depth + 1, &mut c) {
                    Ok(r) => r,
                    Err(e) => match e.best_estimate() {
                        Some(best) => {
                            self.inner_failed.set(true);
                            best
                        }
                        None => {
                            inner_error.set(Some(e));
                            return f64::NAN;
                        }
                    },
                };
                inner_evals.set(inner_evals.get() + r.evaluations);
                inner_err.set(inner_err.get().max(r.err_estimate));
                r.value
            },
            axis,
            &policy,
        );
        if let Some(e) = inner_error.take() {
            return Err(e);
        }
        let combine = |r: QuadResult| QuadResult {
            value: r.value,
            err_estimate: r.err_estimate + axis.width() * inner_err.get(),
            evaluations: inner_evals.get(),
        };
        match outer {
            Ok(r) => Ok(combine(r)),
            Err(QuadError::AccuracyNotReached { best, target }) => Err(QuadError::AccuracyNotReached {
                best: combine(best),
                target,
            }),
            Err(e) => Err(e),
        }
    }
}
