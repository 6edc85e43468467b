mod args;
mod config;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use quadid_core::identities::{
    registry, verify_suite, EvalContext, GridOverrides, IdentityError, TestFunction, TolClass, Tolerances, Verdict,
};
use quadid_core::quadrature::{QuadPolicy, MIN_SAMPLES};
use quadid_core::moments::{moment_table, MOMENT_TOL};
use quadid_core::reduction::{benchmark_reduction_with, reduce, ReductionError, SinProductIntegral};
use quadid_core::report::{Body, Format, ReduceOutcome, Report};
use serde::Serialize;

use args::{Cli, Command, Common, MomentsArgs, ReduceArgs, VerifyArgs};

const EXIT_FAIL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

const DEFAULT_REDUCE_TARGET: f64 = 1e-8;

#[derive(Debug)]
pub struct UsageError(pub String);

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Numeric(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let res = match cli.command {
        Command::Verify(a) => config::merge_verify(a).map_err(Failure::from).and_then(cmd_verify),
        Command::Moments(a) => config::merge_moments(a).map_err(Failure::from).and_then(cmd_moments),
        Command::Reduce(a) => config::merge_reduce(a).map_err(Failure::from).and_then(cmd_reduce),
    };
    match res {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(EXIT_FAIL),
        Ok(Verdict::Inconclusive) => ExitCode::from(EXIT_INCONCLUSIVE),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nUsage: quadid <verify|moments|reduce> [OPTIONS]; see `quadid --help`");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    }
}

/// Run `work` on a pool of `jobs` threads, or the global pool.
fn with_jobs<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(work()),
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Io(e.to_string()))?;
            Ok(pool.install(work))
        }
    }
}

fn emit<C: Serialize>(mut report: Report<C>, common: &Common, started: Instant) -> Result<Verdict, Failure> {
    if common.timing {
        report.wall_time_s = Some(started.elapsed().as_secs_f64());
    }
    let text = report.render(common.format.unwrap_or_default());
    match &common.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            let s = report.summary;
            eprintln!(
                "{}: pass={} fail={} inconclusive={} -> {}",
                report.command,
                s.pass,
                s.fail,
                s.inconclusive,
                path.display()
            );
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    Ok(report.status())
}

#[derive(Serialize)]
struct VerifyEcho {
    ids: Vec<String>,
    grid: GridOverrides,
    tolerances: Tolerances,
    seed: u64,
    mc_samples: u64,
    format: Format,
}

fn parse_grid(entries: &[String]) -> Result<GridOverrides, Failure> {
    let mut g = GridOverrides::default();
    for e in entries {
        let (axis, values) = e
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--grid expects AXIS=V1,V2,..., got `{e}`")))?;
        let axis = axis.trim();
        let items: Vec<&str> = values.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if items.is_empty() {
            return Err(Failure::Usage(format!("--grid {axis}: no values")));
        }
        if axis == "fn" {
            let fs = items
                .iter()
                .map(|s| s.parse::<TestFunction>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            g.functions = Some(fs);
        } else {
            let vs = items
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Failure::Usage(format!("--grid {axis}: `{s}` is not a finite number")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            g.axes.insert(axis.to_string(), vs);
        }
    }
    Ok(g)
}

fn parse_tolerances(entries: &[String]) -> Result<Tolerances, Failure> {
    let mut t = Tolerances::default();
    for e in entries {
        let (class, value) = e
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--tol expects CLASS=VALUE, got `{e}`")))?;
        let class: TolClass = class.trim().parse().map_err(|e: IdentityError| Failure::Usage(e.to_string()))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("--tol {class}: `{value}` is not a number")))?;
        t.set(class, value).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(t)
}

fn cmd_verify(a: VerifyArgs) -> Result<Verdict, Failure> {
    let started = Instant::now();
    let ids: Vec<String> = if a.all {
        registry().iter().map(|i| i.id.to_string()).collect()
    } else if a.id.is_empty() {
        return Err(Failure::Usage("verify needs --all or --id <ID>...".into()));
    } else {
        a.id.clone()
    };
    let grid = parse_grid(&a.grid)?;
    let mut ctx = EvalContext {
        tolerances: parse_tolerances(&a.tol)?,
        ..EvalContext::default()
    };
    if let Some(s) = a.seed {
        ctx.seed = s;
    }
    if let Some(m) = a.mc_samples {
        if m < MIN_SAMPLES {
            return Err(Failure::Usage(format!("--mc-samples must be at least {MIN_SAMPLES}")));
        }
        ctx.mc_samples = m;
    }
    let suite = with_jobs(a.common.jobs, || verify_suite(&ids, &grid, &ctx))?
        .map_err(|e: IdentityError| Failure::Usage(e.to_string()))?;
    let mut selected: Vec<String> = Vec::new();
    for r in &suite.records {
        if selected.last() != Some(&r.id) {
            selected.push(r.id.clone());
        }
    }
    let echo = VerifyEcho {
        ids: selected,
        grid,
        tolerances: ctx.tolerances,
        seed: ctx.seed,
        mc_samples: ctx.mc_samples,
        format: a.common.format.unwrap_or_default(),
    };
    let report = Report::new("verify", echo, Body::Verify { records: suite.records });
    emit(report, &a.common, started)
}

#[derive(Serialize)]
struct MomentsEcho {
    max_n: u32,
    tolerance: f64,
    format: Format,
}

fn cmd_moments(a: MomentsArgs) -> Result<Verdict, Failure> {
    let started = Instant::now();
    let max_n = a.max_n.ok_or_else(|| Failure::Usage("moments needs --max-n".into()))?;
    let table = with_jobs(a.common.jobs, || moment_table(max_n))?.map_err(|e| Failure::Usage(e.to_string()))?;
    let echo = MomentsEcho {
        max_n,
        tolerance: MOMENT_TOL,
        format: a.common.format.unwrap_or_default(),
    };
    emit(Report::new("moments", echo, Body::Moments { moments: table }), &a.common, started)
}

#[derive(Serialize)]
struct ReduceEcho {
    n: usize,
    function: TestFunction,
    x: f64,
    weight: usize,
    target: f64,
    max_evals: u64,
    format: Format,
}

fn cmd_reduce(a: ReduceArgs) -> Result<Verdict, Failure> {
    let started = Instant::now();
    let n = a.n.ok_or_else(|| Failure::Usage("reduce needs --n".into()))?;
    let name = a.function.as_deref().ok_or_else(|| Failure::Usage("reduce needs --fn".into()))?;
    let f: TestFunction = name.parse().map_err(|e: quadid_core::identities::CatalogError| Failure::Usage(e.to_string()))?;
    let x = a.x.ok_or_else(|| Failure::Usage("reduce needs --x".into()))?;
    let weight = a.weight.unwrap_or(0);
    let target = a.target.unwrap_or(DEFAULT_REDUCE_TARGET);
    if !(target > 0.0 && target.is_finite()) {
        return Err(Failure::Usage(format!("--target must be positive, got {target}")));
    }
    let mut policy = QuadPolicy::with_tol(target);
    if let Some(m) = a.max_evals {
        policy.max_evals = m;
    }
    policy.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let integral = SinProductIntegral::with_weight(n, x, f, weight).map_err(|e| Failure::Usage(e.to_string()))?;
    let form = reduce(&integral).map_err(|e| Failure::Usage(e.to_string()))?;
    let bench = with_jobs(a.common.jobs, || benchmark_reduction_with(&integral, &policy))?.map_err(|e| match e {
        ReductionError::Quadrature(q) => Failure::Numeric(q.to_string()),
        other => Failure::Usage(other.to_string()),
    })?;
    let outcome = ReduceOutcome {
        kernel: form.kernel,
        prefactor: form.prefactor,
        reduced_dimension: form.dimension,
        agreement_bound: bench.agreement_bound(),
        verdict: bench.verdict(),
        benchmark: bench,
    };
    let echo = ReduceEcho {
        n,
        function: f,
        x,
        weight,
        target,
        max_evals: policy.max_evals,
        format: a.common.format.unwrap_or_default(),
    };
    emit(Report::new("reduce", echo, Body::Reduce { reduce: outcome }), &a.common, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flags_parse() {
        let g = parse_grid(&["x=0.1, 1".into(), "fn=exp_neg,power:2".into()]).unwrap();
        assert_eq!(g.axes["x"], vec![0.1, 1.0]);
        assert_eq!(g.functions.unwrap().len(), 2);
        assert!(parse_grid(&["x".into()]).is_err());
        assert!(parse_grid(&["x=a".into()]).is_err());
        assert!(parse_grid(&["fn=sine".into()]).is_err());
        assert!(parse_grid(&["x=".into()]).is_err());
    }

    #[test]
    fn tolerance_flags_parse() {
        let t = parse_tolerances(&["standard=1e-9".into()]).unwrap();
        assert_eq!(t.standard, 1e-9);
        assert!(parse_tolerances(&["loose=1".into()]).is_err());
        assert!(parse_tolerances(&["tight=-1".into()]).is_err());
    }
}
