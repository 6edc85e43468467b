//! Optional TOML defaults. Keys mirror the long flags with `-` written as `_`;
//! `grid` and `tol` are tables using the flag syntax for values:
//!
//! ```toml
//! ids = ["EQ7", "EQ9"]
//! format = "text"
//! seed = 3
//!
//! [grid]
//! x = "0.1,1,10"
//! fn = "exp_neg,cosine"
//!
//! [tol]
//! standard = 1e-9
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use quadid_core::report::Format;
use serde::Deserialize;

use crate::args::{Common, MomentsArgs, ReduceArgs, VerifyArgs};
use crate::UsageError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub all: Option<bool>,
    pub ids: Option<Vec<String>>,
    #[serde(default)]
    pub grid: BTreeMap<String, String>,
    #[serde(default)]
    pub tol: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub mc_samples: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub timing: Option<bool>,
    pub max_n: Option<u32>,
    pub n: Option<usize>,
    #[serde(rename = "fn")]
    pub function: Option<String>,
    pub x: Option<f64>,
    pub weight: Option<usize>,
    pub target: Option<f64>,
    pub max_evals: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| UsageError(format!("bad config {}: {e}", path.display())))
    }

    fn load_for(common: &Common) -> Result<Self, UsageError> {
        match &common.config {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }

    fn fill_common(&self, c: &mut Common) {
        c.format = c.format.or(self.format);
        c.out = c.out.take().or_else(|| self.out.clone());
        c.jobs = c.jobs.or(self.jobs);
        c.timing |= self.timing.unwrap_or(false);
    }
}

fn key(entry: &str) -> Option<&str> {
    entry.split_once('=').map(|(k, _)| k.trim())
}

/// Merge file values under the flags. Grid axes and tolerance classes merge
/// per key.
pub fn merge_verify(mut a: VerifyArgs) -> Result<VerifyArgs, UsageError> {
    let f = FileConfig::load_for(&a.common)?;
    f.fill_common(&mut a.common);
    if !a.all && a.id.is_empty() {
        a.all = f.all.unwrap_or(false);
        if !a.all {
            a.id = f.ids.clone().unwrap_or_default();
        }
    }
    for (k, v) in &f.grid {
        if !a.grid.iter().any(|g| key(g) == Some(k.as_str())) {
            a.grid.push(format!("{k}={v}"));
        }
    }
    for (k, v) in &f.tol {
        if !a.tol.iter().any(|t| key(t) == Some(k.as_str())) {
            a.tol.push(format!("{k}={v:e}"));
        }
    }
    a.seed = a.seed.or(f.seed);
    a.mc_samples = a.mc_samples.or(f.mc_samples);
    Ok(a)
}

pub fn merge_moments(mut a: MomentsArgs) -> Result<MomentsArgs, UsageError> {
    let f = FileConfig::load_for(&a.common)?;
    f.fill_common(&mut a.common);
    a.max_n = a.max_n.or(f.max_n);
    Ok(a)
}

pub fn merge_reduce(mut a: ReduceArgs) -> Result<ReduceArgs, UsageError> {
    let f = FileConfig::load_for(&a.common)?;
    f.fill_common(&mut a.common);
    a.n = a.n.or(f.n);
    a.function = a.function.take().or(f.function);
    a.x = a.x.or(f.x);
    a.weight = a.weight.or(f.weight);
    a.target = a.target.or(f.target);
    a.max_evals = a.max_evals.or(f.max_evals);
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_per_key() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(
            &p,
            "ids = [\"EQ7\"]\nseed = 3\nformat = \"csv\"\n[grid]\nx = \"1,2\"\na = \"0.5\"\n[tol]\nstandard = 1e-9\n",
        )
        .unwrap();
        let a = VerifyArgs {
            grid: vec!["x=5".into()],
            seed: Some(9),
            common: Common {
                config: Some(p),
                ..Common::default()
            },
            ..VerifyArgs::default()
        };
        let m = merge_verify(a).unwrap();
        assert_eq!(m.id, vec!["EQ7"]);
        assert_eq!(m.seed, Some(9));
        assert_eq!(m.common.format, Some(Format::Csv));
        assert_eq!(m.grid, vec!["x=5", "a=0.5"]);
        assert_eq!(m.tol, vec!["standard=1e-9"]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "colour = 1\n").unwrap();
        assert!(FileConfig::load(&p).is_err());
    }
}
