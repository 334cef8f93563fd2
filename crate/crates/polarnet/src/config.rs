//! Pipeline configuration in a flat `key = value` format.
//!
//! ```text
//! # comment
//! edges = data/edges.tsv
//! followership = data/followership.csv
//! tweets = data/tweets.jsonl
//! anchor = right_daily
//! gammas = 0.01, 0.05, 0.1, 1, 5, 10
//! seed = 7
//! ```
//!
//! Relative paths resolve against the config file's directory.

use std::path::{Path, PathBuf};

use polarnet_core::centrality::DEFAULT_HUB_THRESHOLD;
use polarnet_core::community::DEFAULT_GAMMAS;
use polarnet_core::text::{DEFAULT_EXTRAS, DEFAULT_HASHTAG_EXCLUDE};
use serde::Serialize;

use crate::error::{Error, Result};

/// Overrides `out_dir` when set.
pub const OUT_DIR_ENV: &str = "POLARNET_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub edges: PathBuf,
    pub followership: PathBuf,
    pub tweets: Option<PathBuf>,
    pub anchor: String,
    pub gammas: Vec<f64>,
    pub tau: f64,
    pub permutations: usize,
    pub seed: u64,
    /// `None` picks the floor from the component size.
    pub size_floor: Option<usize>,
    pub top_k: usize,
    pub hub_threshold: f64,
    pub drop_media_accounts: bool,
    pub keywords: Vec<String>,
    pub hashtag_exclude: String,
    pub stopword_extras: Vec<String>,
    pub out_dir: PathBuf,
}

impl PipelineConfig {
    pub fn new(edges: impl Into<PathBuf>, followership: impl Into<PathBuf>, anchor: impl Into<String>) -> Self {
        Self {
            edges: edges.into(),
            followership: followership.into(),
            tweets: None,
            anchor: anchor.into(),
            gammas: DEFAULT_GAMMAS.to_vec(),
            tau: 0.15,
            permutations: 100_000,
            seed: 0,
            size_floor: None,
            top_k: 25,
            hub_threshold: DEFAULT_HUB_THRESHOLD,
            drop_media_accounts: false,
            keywords: Vec::new(),
            hashtag_exclude: DEFAULT_HASHTAG_EXCLUDE.to_string(),
            stopword_extras: DEFAULT_EXTRAS.iter().map(|s| s.to_string()).collect(),
            out_dir: PathBuf::from("polarnet-out"),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = Self::new("", "", "");
        let (mut have_edges, mut have_follow, mut have_anchor) = (false, false, false);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: String| Error::Config(format!("line {}: {m}", i + 1));
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let path = || {
                let p = PathBuf::from(value);
                if p.is_absolute() {
                    p
                } else {
                    base.join(p)
                }
            };
            let list = || value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect::<Vec<_>>();
            fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
                v.parse().map_err(|_| format!("invalid number `{v}`"))
            }
            match key {
                "edges" => {
                    cfg.edges = path();
                    have_edges = true;
                }
                "followership" => {
                    cfg.followership = path();
                    have_follow = true;
                }
                "tweets" => cfg.tweets = (!value.is_empty()).then(path),
                "anchor" => {
                    cfg.anchor = value.to_string();
                    have_anchor = true;
                }
                "gammas" => cfg.gammas = list().iter().map(|g| num(g)).collect::<std::result::Result<_, _>>().map_err(err)?,
                "tau" => cfg.tau = num(value).map_err(err)?,
                "permutations" => cfg.permutations = num(value).map_err(err)?,
                "seed" => cfg.seed = num(value).map_err(err)?,
                "size_floor" => {
                    cfg.size_floor = match value {
                        "auto" => None,
                        v => Some(num(v).map_err(err)?),
                    }
                }
                "top_k" => cfg.top_k = num(value).map_err(err)?,
                "hub_threshold" => cfg.hub_threshold = num(value).map_err(err)?,
                "drop_media_accounts" => {
                    cfg.drop_media_accounts = match value {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        v => return Err(err(format!("expected true or false, found `{v}`"))),
                    }
                }
                "keywords" => cfg.keywords = list(),
                "hashtag_exclude" => cfg.hashtag_exclude = value.to_string(),
                "stopword_extras" => cfg.stopword_extras = list(),
                "out_dir" => cfg.out_dir = path(),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        for (present, key) in [(have_edges, "edges"), (have_follow, "followership"), (have_anchor, "anchor")] {
            if !present {
                return Err(Error::Config(format!("missing required key `{key}`")));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies `POLARNET_OUT_DIR` if set.
    pub fn with_env_override(mut self) -> Self {
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()) {
            self.out_dir = PathBuf::from(dir);
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.gammas.is_empty() || self.gammas.iter().any(|g| !(*g > 0.0) || !g.is_finite()) {
            return bad("gammas must be a nonempty list of positive numbers");
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return bad("tau must lie in (0, 1)");
        }
        if self.permutations < 2 {
            return bad("permutations must be at least 2");
        }
        if self.anchor.is_empty() {
            return bad("anchor must name a medium");
        }
        if !(self.hub_threshold >= 0.0) {
            return bad("hub_threshold must be nonnegative");
        }
        if self.keywords.iter().any(String::is_empty) {
            return bad("keywords must be nonempty");
        }
        Ok(())
    }

    /// Reported-community floor: the configured value, else `max(10, n/200)`
    /// below 10,000 nodes and 1000 otherwise.
    pub fn size_floor_for(&self, n: usize) -> usize {
        self.size_floor.unwrap_or(if n < 10_000 { (n / 200).max(10) } else { 1000 })
    }
}
