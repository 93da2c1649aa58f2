//! Run configuration: every tunable constant in one place, loaded from `key=value` text.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    Two,
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub c0: f64,
    pub s: u32,
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub big_c: f64,
    pub big_k: f64,
    pub log_base: LogBase,
    pub seed: u64,
    pub m_override: Option<usize>,
    /// Largest vertex count for exhaustive expansion checks.
    pub exact_cap: usize,
    /// Random sets tried by sampled expansion checks.
    pub sample_trials: usize,
    /// Node expansions allowed to one exact-length path search.
    pub path_budget: u64,
    /// Longest subdivision length tried by balanced orchestration.
    pub max_ell: usize,
    /// Host degree at or above which a vertex counts as large; `None` uses `2dm^12`.
    pub large_degree_threshold: Option<usize>,
    /// Pattern degree at or above which a vertex is in L; `None` uses `d/m^10`.
    pub split_large: Option<usize>,
    /// Pattern degree below which a vertex is in S; `None` uses `m^4`.
    pub split_small: Option<usize>,
    /// Expansion size `D` used by adjusters.
    pub adjuster_size: usize,
    /// Length range `k` of adjusters built by the pipelines.
    pub adjuster_range: usize,
    /// Leaves per pendant star in units and webs.
    pub star_leaves: usize,
    /// Fraction of a spare web's interior that routed paths may cross before it is demoted.
    pub overuse_frac: f64,
    /// Branch length bound `h3` for units and webs built by the pipelines.
    pub branch_len: usize,
    /// Branches `h1` of each unit inside a web.
    pub unit_branches: usize,
    /// Pairs per sampled regularity test.
    pub regularity_trials: usize,
    /// Largest host vertex count for which the dense-reduction witness search is exact.
    pub dense_exact_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            eps0: 1.0,
            eps1: 0.1,
            eps2: 0.1,
            c0: 0.1,
            s: 1600,
            x: 50,
            y: 12,
            z: 4,
            big_c: 8.0,
            big_k: 8.0,
            log_base: LogBase::Two,
            seed: 0,
            m_override: None,
            exact_cap: 18,
            sample_trials: 2000,
            path_budget: 1_000_000,
            max_ell: 12,
            large_degree_threshold: None,
            split_large: None,
            split_small: None,
            adjuster_size: 2,
            adjuster_range: 2,
            star_leaves: 2,
            overuse_frac: 0.5,
            branch_len: 2,
            unit_branches: 2,
            regularity_trials: 64,
            dense_exact_cap: 14,
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse { line, msg: format!("bad value {v:?} for {key}") })
}

fn check(line: usize, ok: bool, key: &str, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parse { line, msg: format!("{key} out of range: {what}") })
    }
}

impl RunConfig {
    /// `m`: the smallest even integer strictly above `log^4(n/d)`, unless overridden.
    pub fn m(&self, n: usize, d: f64) -> usize {
        if let Some(m) = self.m_override {
            return m;
        }
        let ratio = if d > 0.0 { n as f64 / d } else { n as f64 };
        let l = self.log_base.log(ratio.max(1.0)).powi(4);
        let mut m = l.floor() as usize + 1;
        if m % 2 == 1 {
            m += 1;
        }
        m
    }

    pub fn expander_params(&self, k: f64) -> crate::expander::ExpanderParams {
        crate::expander::ExpanderParams { eps1: self.eps1, eps2: self.eps2, k, log_base: self.log_base }
    }

    /// Applies one `key=value` pair. `line` is used for diagnostics only.
    pub fn set(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "eps0" => {
                self.eps0 = parse_num(line, key, v)?;
                check(line, self.eps0 > 0.0 && self.eps0.is_finite(), key, "must be positive")?;
            }
            "eps1" => {
                self.eps1 = parse_num(line, key, v)?;
                check(line, self.eps1 > 0.0 && self.eps1 <= 0.125, key, "0 < eps1 <= 1/8")?;
            }
            "eps2" => {
                self.eps2 = parse_num(line, key, v)?;
                check(line, self.eps2 > 0.0 && self.eps2 < 1.0, key, "0 < eps2 < 1")?;
            }
            "c0" => {
                self.c0 = parse_num(line, key, v)?;
                check(line, self.c0 > 0.0 && self.c0 <= 1.0, key, "0 < c0 <= 1")?;
            }
            "s" => {
                self.s = parse_num(line, key, v)?;
                check(line, self.s > 0, key, "must be positive")?;
            }
            "x" => self.x = parse_num(line, key, v)?,
            "y" => self.y = parse_num(line, key, v)?,
            "z" => self.z = parse_num(line, key, v)?,
            "C" | "big_c" => {
                self.big_c = parse_num(line, key, v)?;
                check(line, self.big_c > 0.0, key, "must be positive")?;
            }
            "K" | "big_k" => {
                self.big_k = parse_num(line, key, v)?;
                check(line, self.big_k > 0.0, key, "must be positive")?;
            }
            "log_base" => {
                self.log_base = match v {
                    "2" => LogBase::Two,
                    "e" => LogBase::E,
                    _ => return Err(Error::Parse { line, msg: format!("log_base must be 2 or e, got {v:?}") }),
                }
            }
            "seed" => self.seed = parse_num(line, key, v)?,
            "m" | "m_override" => {
                let m: usize = parse_num(line, key, v)?;
                check(line, m >= 1, key, "must be at least 1")?;
                self.m_override = Some(m);
            }
            "exact_cap" => {
                self.exact_cap = parse_num(line, key, v)?;
                check(line, self.exact_cap <= 24, key, "at most 24")?;
            }
            "sample_trials" => self.sample_trials = parse_num(line, key, v)?,
            "path_budget" => self.path_budget = parse_num(line, key, v)?,
            "max_ell" => self.max_ell = parse_num(line, key, v)?,
            "large_degree_threshold" => self.large_degree_threshold = Some(parse_num(line, key, v)?),
            "split_large" => self.split_large = Some(parse_num(line, key, v)?),
            "split_small" => self.split_small = Some(parse_num(line, key, v)?),
            "adjuster_size" => {
                self.adjuster_size = parse_num(line, key, v)?;
                check(line, self.adjuster_size >= 1, key, "at least 1")?;
            }
            "adjuster_range" => {
                self.adjuster_range = parse_num(line, key, v)?;
                check(line, self.adjuster_range >= 1, key, "at least 1")?;
            }
            "star_leaves" => {
                self.star_leaves = parse_num(line, key, v)?;
                check(line, self.star_leaves >= 1, key, "at least 1")?;
            }
            "overuse_frac" => {
                self.overuse_frac = parse_num(line, key, v)?;
                check(line, self.overuse_frac > 0.0 && self.overuse_frac <= 1.0, key, "0 < f <= 1")?;
            }
            "branch_len" => {
                self.branch_len = parse_num(line, key, v)?;
                check(line, self.branch_len >= 1, key, "at least 1")?;
            }
            "unit_branches" => {
                self.unit_branches = parse_num(line, key, v)?;
                check(line, self.unit_branches >= 1, key, "at least 1")?;
            }
            "regularity_trials" => self.regularity_trials = parse_num(line, key, v)?,
            "dense_exact_cap" => {
                self.dense_exact_cap = parse_num(line, key, v)?;
                check(line, self.dense_exact_cap <= 20, key, "at most 20")?;
            }
            other => return Err(Error::Parse { line, msg: format!("unknown key {other:?}") }),
        }
        Ok(())
    }

    /// Parses `key=value` lines over the defaults. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key=value, got {line:?}") })?;
            cfg.set(i + 1, k, v)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Applies `SUBFORGE_SEED` if set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var("SUBFORGE_SEED") {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse { line: 0, msg: format!("SUBFORGE_SEED is not an integer: {v:?}") })?;
        }
        Ok(())
    }
}
