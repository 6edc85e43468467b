use std::f64::consts::PI;
use std::process::{Command, Output};

const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

fn quadid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    quadid(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = quadid(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["verify", "--help"]), 0);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&["verify", "--id", "NOPE"]), 64);
    assert_eq!(code(&["verify"]), 64);
    assert_eq!(code(&["verify", "--all", "--id", "EQ1"]), 64);
    assert_eq!(code(&["verify", "--id", "EQ7", "--grid", "q=1"]), 64);
    assert_eq!(code(&["verify", "--id", "EQ7", "--grid", "x=-1"]), 64);
    assert_eq!(code(&["verify", "--id", "EQ7", "--tol", "loose=1"]), 64);
    assert_eq!(code(&["verify", "--id", "EQ7", "--format", "xml"]), 64);
    assert_eq!(code(&["verify", "--id", "EQ7", "--jobs", "0"]), 64);
    assert_eq!(code(&["moments", "--max-n", "1"]), 64);
    assert_eq!(code(&["moments", "--max-n", "31"]), 64);
    assert_eq!(code(&["reduce", "--n", "5", "--fn", "exp_neg", "--x", "1"]), 64);
    assert_eq!(code(&["reduce", "--n", "3", "--fn", "sine", "--x", "1"]), 64);
    assert_eq!(code(&["reduce", "--n", "3", "--fn", "one_over_one_minus_t", "--x", "1"]), 64);
    assert_eq!(code(&["frobnicate"]), 64);
}

#[test]
fn failing_and_inconclusive_exit_codes() {
    // An absurd tolerance turns agreement to ~1e-16 into a failure.
    assert_eq!(code(&["verify", "--id", "EQ20", "--tol", "tight=1e-300"]), 1);
    // A starved evaluation budget leaves both forms unconverged.
    let starved = ["reduce", "--n", "3", "--fn", "power:0.5", "--x", "1", "--target", "1e-12", "--max-evals", "60"];
    assert_eq!(code(&starved), 2);
    // Fewer Monte Carlo samples widen the statistical bound with the error.
    assert_eq!(code(&["verify", "--id", "EQ24", "--mc-samples", "20000"]), 0);
    assert_eq!(code(&["verify", "--id", "EQ24", "--mc-samples", "1000"]), 64);
}

#[test]
fn eq23_rhs_is_pi_catalan_over_four() {
    let v = json(&["verify", "--id", "EQ23", "--format", "json"]);
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 1);
    let rhs = recs[0]["rhs"].as_f64().unwrap();
    assert!((rhs - PI * CATALAN / 4.0).abs() < 1e-15);
    assert_eq!(v["summary"]["pass"], 1);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn summary_matches_records() {
    let v = json(&["verify", "--id", "EQ9", "EQ20", "--grid", "x=0.5,2", "--grid", "fn=exp_neg,cosine"]);
    let recs = v["records"].as_array().unwrap();
    let count = |verdict: &str| recs.iter().filter(|r| r["verdict"] == verdict).count() as u64;
    assert_eq!(v["summary"]["pass"].as_u64().unwrap(), count("pass"));
    assert_eq!(v["summary"]["fail"].as_u64().unwrap(), count("fail"));
    assert_eq!(recs.len(), 4 + 5);
    let keys: Vec<(String, u64)> = recs
        .iter()
        .map(|r| (r["id"].as_str().unwrap().to_string(), r["point_index"].as_u64().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by_key(|(id, k)| (id[2..].parse::<u32>().unwrap(), *k));
    assert_eq!(keys, sorted);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["json", "csv", "text"] {
        let a = dir.path().join(format!("a.{fmt}"));
        let b = dir.path().join(format!("b.{fmt}"));
        let run = |p: &std::path::Path, jobs: &str| {
            let s = p.to_str().unwrap();
            assert_eq!(
                code(&["verify", "--id", "EQ9", "EQ12_14", "EQ24", "--format", fmt, "--jobs", jobs, "--out", s]),
                0
            );
        };
        run(&a, "1");
        run(&b, "4");
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{fmt}");
    }
}

#[test]
fn timing_is_opt_in() {
    let v = json(&["verify", "--id", "EQ23"]);
    assert!(v.get("wall_time_s").is_none());
    let v = json(&["verify", "--id", "EQ23", "--timing"]);
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run.toml");
    std::fs::write(&p, "ids = [\"EQ7\"]\nformat = \"json\"\n[grid]\nx = \"0.25\"\n").unwrap();
    let cfg = p.to_str().unwrap();
    let v = json(&["verify", "--config", cfg]);
    assert_eq!(v["records"].as_array().unwrap().len(), 1);
    let v = json(&["verify", "--config", cfg, "--grid", "x=1,2"]);
    assert_eq!(v["records"].as_array().unwrap().len(), 2);
    std::fs::write(&p, "bogus = true\n").unwrap();
    assert_eq!(code(&["verify", "--id", "EQ7", "--config", cfg]), 64);
}

#[test]
fn moments_tables() {
    let v = json(&["moments", "--max-n", "8"]);
    let rows = v["moments"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["abs_diff"].as_f64().unwrap() <= 1e-8));
    let v = json(&["moments", "--max-n", "2"]);
    let k1 = v["moments"]["rows"][0]["recursion_value"].as_f64().unwrap();
    assert_eq!(k1, PI * PI / 8.0);
    let text = String::from_utf8(quadid(&["moments", "--max-n", "3", "--format", "csv"]).stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn reduce_examples() {
    let v = json(&["reduce", "--n", "3", "--fn", "inv_sqrt_one_minus_t2", "--x", "1"]);
    let pig = PI * CATALAN;
    assert!((v["reduce"]["naive"]["value"].as_f64().unwrap() - pig).abs() < 1e-6);
    assert!((v["reduce"]["reduced"]["value"].as_f64().unwrap() - pig).abs() < 1e-6);
    assert!(v["reduce"]["closed_form"].as_f64().is_some());

    let v = json(&["reduce", "--n", "2", "--fn", "exp_neg", "--x", "1"]);
    let want = PI / 2.0 * (1.0 - (-1.0f64).exp());
    assert!((v["reduce"]["reduced"]["value"].as_f64().unwrap() - want).abs() < 1e-12);
    let naive = v["reduce"]["naive"]["evaluations"].as_u64().unwrap();
    let reduced = v["reduce"]["reduced"]["evaluations"].as_u64().unwrap();
    assert!(reduced < naive);
}
