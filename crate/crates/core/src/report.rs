//! Reports for verification runs, moment tables and reductions, rendered as
//! JSON, CSV or plain text.
//!
//! JSON floats use the shortest round-trip form; CSV and text print 17
//! significant digits. Output depends only on the report contents, so equal
//! runs give byte-identical files.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::identities::{Summary, Verdict, VerificationRecord};
use crate::moments::{MomentTable, RowStatus};
use crate::reduction::{BenchmarkRecord, BenchmarkSide, Kernel};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}` (json, csv, text)")),
        }
    }
}

/// Output of `reduce`: the benchmark plus the shape of the reduced form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceOutcome {
    pub kernel: Kernel,
    pub prefactor: f64,
    pub reduced_dimension: usize,
    pub agreement_bound: f64,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub benchmark: BenchmarkRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Body {
    Verify { records: Vec<VerificationRecord> },
    Moments { moments: MomentTable },
    Reduce { reduce: ReduceOutcome },
}

impl Body {
    pub fn summary(&self) -> Summary {
        match self {
            Body::Verify { records } => Summary::tally(records.iter().map(|r| &r.verdict)),
            Body::Moments { moments } => Summary {
                pass: moments.count(RowStatus::Pass),
                fail: moments.count(RowStatus::Fail),
                inconclusive: moments.count(RowStatus::Inconclusive),
            },
            Body::Reduce { reduce } => Summary::tally([&reduce.verdict]),
        }
    }
}

/// One top-level report object. `C` is the echoed run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<C> {
    pub version: String,
    pub command: String,
    pub config: C,
    #[serde(flatten)]
    pub body: Body,
    pub summary: Summary,
    /// Only present when timing was requested; omitted to keep reports reproducible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
}

impl<C: Serialize> Report<C> {
    pub fn new(command: &str, config: C, body: Body) -> Self {
        let summary = body.summary();
        Report {
            version: VERSION.to_string(),
            command: command.to_string(),
            config,
            body,
            summary,
            wall_time_s: None,
        }
    }

    pub fn status(&self) -> Verdict {
        self.summary.status()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn config_line(&self) -> String {
        serde_json::to_string(&self.config).expect("config serializes")
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let res = match &self.body {
            Body::Verify { records } => csv_records(&mut w, records),
            Body::Moments { moments } => csv_moments(&mut w, moments),
            Body::Reduce { reduce } => csv_reduce(&mut w, reduce),
        };
        res.expect("writing to memory");
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 csv")
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "quadid {} {}", self.version, self.command);
        let _ = writeln!(s, "config {}", self.config_line());
        match &self.body {
            Body::Verify { records } => text_records(&mut s, records),
            Body::Moments { moments } => text_moments(&mut s, moments),
            Body::Reduce { reduce } => text_reduce(&mut s, reduce),
        }
        let Summary {
            pass,
            fail,
            inconclusive,
        } = self.summary;
        let _ = writeln!(s, "summary pass={pass} fail={fail} inconclusive={inconclusive} status={}", self.status());
        if let Some(t) = self.wall_time_s {
            let _ = writeln!(s, "wall_time_s {t:.3}");
        }
        s
    }
}

/// 17 significant digits.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt17(v: Option<f64>) -> String {
    v.map(sig17).unwrap_or_default()
}

type CsvResult = Result<(), csv::Error>;

fn csv_records(w: &mut csv::Writer<Vec<u8>>, records: &[VerificationRecord]) -> CsvResult {
    w.write_record([
        "id",
        "point_index",
        "point",
        "lhs",
        "rhs",
        "abs_diff",
        "rel_diff",
        "tol_class",
        "bound",
        "lhs_evaluations",
        "rhs_evaluations",
        "verdict",
        "note",
    ])?;
    for r in records {
        let evals = |q: &Option<crate::quadrature::QuadResult>| q.map(|q| q.evaluations.to_string()).unwrap_or_default();
        w.write_record([
            r.id.clone(),
            r.point_index.to_string(),
            r.point.to_string(),
            sig17(r.lhs),
            sig17(r.rhs),
            sig17(r.abs_diff),
            sig17(r.rel_diff),
            r.tol_class.to_string(),
            sig17(r.bound),
            evals(&r.lhs_quad),
            evals(&r.rhs_quad),
            r.verdict.to_string(),
            r.note.clone().unwrap_or_default(),
        ])?;
    }
    Ok(())
}

fn csv_moments(w: &mut csv::Writer<Vec<u8>>, t: &MomentTable) -> CsvResult {
    w.write_record([
        "n",
        "recursion_value",
        "oracle_value",
        "oracle_err",
        "abs_diff",
        "largest_term",
        "status",
        "note",
    ])?;
    for r in &t.rows {
        w.write_record([
            r.n.to_string(),
            sig17(r.recursion_value),
            sig17(r.oracle_value),
            sig17(r.oracle_err),
            sig17(r.abs_diff),
            sig17(r.largest_term),
            status_name(r.status).to_string(),
            r.note.clone().unwrap_or_default(),
        ])?;
    }
    Ok(())
}

fn csv_reduce(w: &mut csv::Writer<Vec<u8>>, r: &ReduceOutcome) -> CsvResult {
    w.write_record([
        "form",
        "value",
        "err_estimate",
        "evaluations",
        "actual_error",
        "converged",
    ])?;
    for (name, side) in [("naive", &r.benchmark.naive), ("reduced", &r.benchmark.reduced)] {
        w.write_record([
            name.to_string(),
            sig17(side.value),
            sig17(side.err_estimate),
            side.evaluations.to_string(),
            opt17(side.actual_error),
            side.converged.to_string(),
        ])?;
    }
    if let Some(c) = r.benchmark.closed_form {
        w.write_record(["closed_form", &sig17(c), "", "", "", ""])?;
    }
    Ok(())
}

fn status_name(s: RowStatus) -> &'static str {
    match s {
        RowStatus::Pass => "pass",
        RowStatus::Fail => "fail",
        RowStatus::Inconclusive => "inconclusive",
    }
}

fn text_records(s: &mut String, records: &[VerificationRecord]) {
    for r in records {
        let _ = writeln!(
            s,
            "{:<8} {:>3} {:<12} {} lhs={} rhs={} diff={} bound={} [{}]",
            r.id,
            r.point_index,
            r.verdict.to_string(),
            r.point,
            sig17(r.lhs),
            sig17(r.rhs),
            sig17(r.abs_diff),
            sig17(r.bound),
            r.tol_class
        );
        if let Some(n) = &r.note {
            let _ = writeln!(s, "{:>13} note: {n}", "");
        }
    }
}

fn text_moments(s: &mut String, t: &MomentTable) {
    let _ = writeln!(s, "tolerance {}", sig17(t.tolerance));
    let _ = writeln!(
        s,
        "{:>3}  {:<24} {:<24} {:<24} {:<24} {}",
        "n", "recursion", "oracle", "abs_diff", "largest_term", "status"
    );
    for r in &t.rows {
        let _ = writeln!(
            s,
            "{:>3}  {:<24} {:<24} {:<24} {:<24} {}",
            r.n,
            sig17(r.recursion_value),
            sig17(r.oracle_value),
            sig17(r.abs_diff),
            sig17(r.largest_term),
            status_name(r.status)
        );
        if let Some(n) = &r.note {
            let _ = writeln!(s, "     note: {n}");
        }
    }
}

fn text_reduce(s: &mut String, r: &ReduceOutcome) {
    let b = &r.benchmark;
    let i = &b.integral;
    let _ = writeln!(s, "integral n={} fn={} x={} weighted={}", i.n, i.f, sig17(i.x), i.weighted);
    let kernel = match r.kernel {
        Kernel::Flat => "flat".to_string(),
        Kernel::LogKernel => "log_kernel".to_string(),
        Kernel::Composed { free_angles } => format!("composed(free_angles={free_angles})"),
    };
    let _ = writeln!(
        s,
        "reduced kernel={kernel} prefactor={} dimension={}",
        sig17(r.prefactor),
        r.reduced_dimension
    );
    let side = |s: &mut String, name: &str, v: &BenchmarkSide| {
        let _ = writeln!(
            s,
            "{name:<8} value={} err={} evaluations={} actual_error={} converged={}",
            sig17(v.value),
            sig17(v.err_estimate),
            v.evaluations,
            v.actual_error.map(sig17).unwrap_or_else(|| "-".into()),
            v.converged
        );
    };
    side(s, "naive", &b.naive);
    side(s, "reduced", &b.reduced);
    match b.closed_form {
        Some(c) => {
            let _ = writeln!(s, "closed_form {}", sig17(c));
        }
        None => {
            let _ = writeln!(s, "closed_form -");
        }
    }
    let _ = writeln!(
        s,
        "target={} bound={} verdict={}",
        sig17(b.target_error),
        sig17(r.agreement_bound),
        r.verdict
    );
}
