//! Registry of integral identities and the machinery that checks them.
//!
//! Each [`Identity`] evaluates a left and a right side at every point of its
//! [`ParamGrid`] and compares them under a [`TolClass`]. A side whose
//! quadrature does not converge makes the record [`Verdict::Inconclusive`];
//! it is never reported as a pass.

mod catalog;
mod grid;
mod registry;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quadrature::{QuadError, QuadPolicy, QuadResult};
use crate::specfun::SpecFunError;

pub use catalog::{CatalogError, TestFunction};
pub use grid::{GridOverrides, ParamGrid, ParamPoint};
pub use registry::{kernel_eq15, registry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TolClass {
    Tight,
    Standard,
    /// Three-dimensional cubature with a corner singularity.
    Singular3d,
    /// Integrands with a jump discontinuity.
    Piecewise,
    /// Monte Carlo; the tolerance is a multiple of the standard error.
    Statistical,
}

impl TolClass {
    pub const ALL: [TolClass; 5] = [
        TolClass::Tight,
        TolClass::Standard,
        TolClass::Singular3d,
        TolClass::Piecewise,
        TolClass::Statistical,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TolClass::Tight => "tight",
            TolClass::Standard => "standard",
            TolClass::Singular3d => "singular3d",
            TolClass::Piecewise => "piecewise",
            TolClass::Statistical => "statistical",
        }
    }
}

impl fmt::Display for TolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TolClass {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TolClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| IdentityError::UnknownTolClass(s.to_string()))
    }
}

/// Tolerance per class. Deterministic classes are relative with an absolute
/// floor of the same size; `statistical` counts standard errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tight: f64,
    pub standard: f64,
    pub singular3d: f64,
    pub piecewise: f64,
    pub statistical: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tight: 1e-10,
            standard: 1e-8,
            singular3d: 1e-5,
            piecewise: 1e-6,
            statistical: 3.0,
        }
    }
}

impl Tolerances {
    pub fn get(&self, class: TolClass) -> f64 {
        match class {
            TolClass::Tight => self.tight,
            TolClass::Standard => self.standard,
            TolClass::Singular3d => self.singular3d,
            TolClass::Piecewise => self.piecewise,
            TolClass::Statistical => self.statistical,
        }
    }

    pub fn set(&mut self, class: TolClass, value: f64) -> Result<(), IdentityError> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(IdentityError::BadTolerance { class, value });
        }
        let slot = match class {
            TolClass::Tight => &mut self.tight,
            TolClass::Standard => &mut self.standard,
            TolClass::Singular3d => &mut self.singular3d,
            TolClass::Piecewise => &mut self.piecewise,
            TolClass::Statistical => &mut self.statistical,
        };
        *slot = value;
        Ok(())
    }
}

/// Knobs shared by every record of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalContext {
    pub tolerances: Tolerances,
    pub seed: u64,
    pub mc_samples: u64,
}

impl Default for EvalContext {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            seed: 0,
            mc_samples: 10_000_000,
        }
    }
}

/// Integrators are asked for this fraction of the comparison tolerance.
const QUAD_MARGIN: f64 = 1e-2;
/// Below this, requests fall under the double-precision roundoff floor.
const QUAD_FLOOR: f64 = 1e-13;

/// Resolved evaluation settings for one record.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Plan {
    pub policy: QuadPolicy,
    pub seed: u64,
    pub mc_samples: u64,
}

impl Plan {
    fn new(class: TolClass, ctx: &EvalContext) -> Self {
        let tol = match class {
            TolClass::Statistical => ctx.tolerances.standard,
            c => ctx.tolerances.get(c),
        };
        Self {
            policy: QuadPolicy::with_tol((tol * QUAD_MARGIN).max(QUAD_FLOOR)),
            seed: ctx.seed,
            mc_samples: ctx.mc_samples,
        }
    }
}

/// A successfully evaluated side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Side {
    pub value: f64,
    pub quad: Option<QuadResult>,
}

impl Side {
    pub fn exact(value: f64) -> Self {
        Self { value, quad: None }
    }

    pub fn quad(r: QuadResult) -> Self {
        Self {
            value: r.value,
            quad: Some(r),
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Self {
            value: c * self.value,
            quad: self.quad.map(|q| QuadResult {
                value: c * q.value,
                err_estimate: c.abs() * q.err_estimate,
                evaluations: q.evaluations,
            }),
        }
    }
}

/// Why a side could not be evaluated to the requested accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct Inconclusive {
    pub best: Option<Side>,
    pub reason: String,
}

impl From<QuadError> for Inconclusive {
    fn from(e: QuadError) -> Self {
        Self {
            best: e.best_estimate().map(Side::quad),
            reason: e.to_string(),
        }
    }
}

impl From<SpecFunError> for Inconclusive {
    fn from(e: SpecFunError) -> Self {
        let best = match &e {
            SpecFunError::Quadrature { source, .. } => source.best_estimate().map(Side::quad),
            _ => None,
        };
        Self {
            best,
            reason: e.to_string(),
        }
    }
}

impl From<crate::reduction::ReductionError> for Inconclusive {
    fn from(e: crate::reduction::ReductionError) -> Self {
        match e {
            crate::reduction::ReductionError::Quadrature(q) => q.into(),
            other => Self {
                best: None,
                reason: other.to_string(),
            },
        }
    }
}

pub type SideResult = Result<Side, Inconclusive>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome of one (identity, point) comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub id: String,
    pub point_index: usize,
    pub point: ParamPoint,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub tol_class: TolClass,
    /// Bound `abs_diff` was held to.
    pub bound: f64,
    pub lhs_quad: Option<QuadResult>,
    pub rhs_quad: Option<QuadResult>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Compare two sides. Deterministic classes pass iff
/// `abs_diff <= tol · max(1, |rhs|)`; the statistical class passes iff
/// `abs_diff <= tol · σ` with `σ` the left side's standard error.
pub(crate) fn judge(
    id: &str,
    point_index: usize,
    point: ParamPoint,
    lhs: SideResult,
    rhs: SideResult,
    class: TolClass,
    tol: f64,
) -> VerificationRecord {
    let mut reasons = Vec::new();
    let mut unpack = |r: SideResult, which: &str| match r {
        Ok(s) => (Some(s), true),
        Err(e) => {
            reasons.push(format!("{which}: {}", e.reason));
            (e.best, false)
        }
    };
    let (l, l_ok) = unpack(lhs, "lhs");
    let (r, r_ok) = unpack(rhs, "rhs");
    let lv = l.map_or(f64::NAN, |s| s.value);
    let rv = r.map_or(f64::NAN, |s| s.value);
    let abs_diff = (lv - rv).abs();
    let rel_diff = if rv != 0.0 { abs_diff / rv.abs() } else { abs_diff };
    let lhs_quad = l.and_then(|s| s.quad);
    let bound = match class {
        TolClass::Statistical => tol * lhs_quad.map_or(f64::NAN, |q| q.err_estimate),
        _ => tol * rv.abs().max(1.0),
    };
    let verdict = if !(l_ok && r_ok) || !abs_diff.is_finite() || !bound.is_finite() {
        Verdict::Inconclusive
    } else if abs_diff <= bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    VerificationRecord {
        id: id.to_string(),
        point_index,
        point,
        lhs: lv,
        rhs: rv,
        abs_diff,
        rel_diff,
        tol_class: class,
        bound,
        lhs_quad,
        rhs_quad: r.and_then(|s| s.quad),
        verdict,
        note: (!reasons.is_empty()).then(|| reasons.join("; ")),
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IdentityError {
    #[error("unknown identity id `{0}`")]
    UnknownId(String),
    #[error("grid axis `{0}` is not used by any selected identity")]
    UnknownAxis(String),
    #[error("no selected identity takes a test-function axis")]
    NoFunctionAxis,
    #[error("{id}: point {point} outside the validity domain: {reason}")]
    OutsideDomain { id: String, point: String, reason: String },
    #[error("{0}: grid has no admissible points")]
    EmptyGrid(String),
    #[error("unknown tolerance class `{0}`")]
    UnknownTolClass(String),
    #[error("tolerance for {class} must be positive and finite, got {value}")]
    BadTolerance { class: TolClass, value: f64 },
}

type SideFn = fn(&ParamPoint, &Plan) -> SideResult;

/// A registered left/right pair.
pub struct Identity {
    pub id: &'static str,
    /// The identity written out.
    pub statement: &'static str,
    /// Correction applied relative to the usual printed form, if any.
    pub erratum: Option<&'static str>,
    grid: fn() -> ParamGrid,
    class: fn(&ParamPoint) -> TolClass,
    domain: fn(&ParamPoint) -> Result<(), String>,
    /// Upper end of the range on which the test function is evaluated.
    reach: fn(&ParamPoint) -> f64,
    lhs: SideFn,
    rhs: SideFn,
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Identity").field("id", &self.id).finish_non_exhaustive()
    }
}

impl Identity {
    pub fn default_grid(&self) -> ParamGrid {
        (self.grid)()
    }

    pub fn tol_class(&self, point: &ParamPoint) -> TolClass {
        (self.class)(point)
    }

    pub fn check_domain(&self, point: &ParamPoint) -> Result<(), IdentityError> {
        (self.domain)(point).map_err(|reason| IdentityError::OutsideDomain {
            id: self.id.to_string(),
            point: point.to_string(),
            reason,
        })
    }

    /// Whether the point's test function (if any) is integrable where this
    /// identity evaluates it.
    pub fn admits(&self, point: &ParamPoint) -> bool {
        point.function.map_or(true, |f| f.admits((self.reach)(point)))
    }

    /// Grid points after dropping test functions that are not integrable at
    /// the point; remaining points must lie in the validity domain.
    pub fn points(&self, grid: &ParamGrid) -> Result<Vec<ParamPoint>, IdentityError> {
        let pts: Vec<ParamPoint> = grid.points().into_iter().filter(|p| self.admits(p)).collect();
        if pts.is_empty() {
            return Err(IdentityError::EmptyGrid(self.id.to_string()));
        }
        for p in &pts {
            self.check_domain(p)?;
        }
        Ok(pts)
    }

    pub fn evaluate(&self, point_index: usize, point: &ParamPoint, ctx: &EvalContext) -> VerificationRecord {
        let class = self.tol_class(point);
        let plan = Plan::new(class, ctx);
        let lhs = (self.lhs)(point, &plan);
        let rhs = (self.rhs)(point, &plan);
        let mut rec = judge(self.id, point_index, point.clone(), lhs, rhs, class, ctx.tolerances.get(class));
        if let Some(e) = self.erratum {
            rec.note = Some(match rec.note {
                Some(n) => format!("{e}; {n}"),
                None => e.to_string(),
            });
        }
        rec
    }
}

pub fn find_identity(id: &str) -> Result<&'static Identity, IdentityError> {
    registry()
        .iter()
        .find(|i| i.id == id)
        .ok_or_else(|| IdentityError::UnknownId(id.to_string()))
}

/// Evaluate one identity at one point.
pub fn evaluate_identity(id: &str, point: &ParamPoint, ctx: &EvalContext) -> Result<VerificationRecord, IdentityError> {
    let ident = find_identity(id)?;
    ident.check_domain(point)?;
    Ok(ident.evaluate(0, point, ctx))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn tally<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> Self {
        let mut s = Self::default();
        for v in verdicts {
            match v {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }

    /// Fail dominates inconclusive.
    pub fn status(&self) -> Verdict {
        if self.fail > 0 {
            Verdict::Fail
        } else if self.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
}

/// Resolve ids to registry entries in registry order, without duplicates.
pub fn select(ids: &[String]) -> Result<Vec<&'static Identity>, IdentityError> {
    for id in ids {
        find_identity(id)?;
    }
    Ok(registry().iter().filter(|i| ids.iter().any(|s| s == i.id)).collect())
}

/// Evaluate every (identity, point) pair. Records come back ordered by
/// registry position, then point index, independent of thread count.
pub fn verify_suite(ids: &[String], overrides: &GridOverrides, ctx: &EvalContext) -> Result<SuiteResult, IdentityError> {
    let selected = select(ids)?;
    let grids: Vec<ParamGrid> = selected.iter().map(|i| i.default_grid()).collect();
    for axis in overrides.axes.keys() {
        if !grids.iter().any(|g| g.has_axis(axis)) {
            return Err(IdentityError::UnknownAxis(axis.clone()));
        }
    }
    if overrides.functions.is_some() && grids.iter().all(|g| g.functions.is_empty()) {
        return Err(IdentityError::NoFunctionAxis);
    }
    let mut tasks = Vec::new();
    for (ident, grid) in selected.iter().zip(&grids) {
        for (k, p) in ident.points(&grid.overridden(overrides))?.into_iter().enumerate() {
            tasks.push((*ident, k, p));
        }
    }
    let records: Vec<VerificationRecord> = tasks.par_iter().map(|(i, k, p)| i.evaluate(*k, p, ctx)).collect();
    let summary = Summary::tally(records.iter().map(|r| &r.verdict));
    Ok(SuiteResult { records, summary })
}
