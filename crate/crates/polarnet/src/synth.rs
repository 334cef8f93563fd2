//! Seeded two-bloc synthetic datasets.
//!
//! Accounts `0..n_left` form the Left bloc and the rest the Right bloc.
//! Every ordered pair of distinct accounts gets a Poisson number of retweets
//! with mean `p_in` (same bloc) or `p_out` (different blocs). Media follows
//! are Bernoulli with bloc-dependent probabilities, and tweets mix the bloc's
//! planted words with shared filler. Each part draws from its own stream so
//! equal seeds give byte-identical files.

use std::path::{Path, PathBuf};

use polarnet_core::rng::stream_rng;
use polarnet_core::text::TweetRecord;
use polarnet_core::EdgeRecord;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::formats;

const STREAM_EDGES: u64 = 0;
const STREAM_FOLLOWS: u64 = 1;
const STREAM_TWEETS: u64 = 2;

/// First tweet timestamp (seconds since the epoch).
const T0: i64 = 1_500_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MediumSpec {
    pub name: String,
    pub p_left: f64,
    pub p_right: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_left: usize,
    pub n_right: usize,
    /// Expected retweets per ordered pair within a bloc.
    pub p_in: f64,
    /// Expected retweets per ordered pair across blocs.
    pub p_out: f64,
    /// The first medium is followed mostly by the Right bloc and serves as
    /// the PCA anchor.
    pub media: Vec<MediumSpec>,
    pub vocab_left: Vec<String>,
    pub vocab_right: Vec<String>,
    pub filler: Vec<String>,
    pub tweets_per_account: usize,
    pub words_per_tweet: usize,
    /// Chance that a tweet copies an earlier one from the same bloc.
    pub retweet_share: f64,
    pub seed: u64,
}

fn words(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

impl SyntheticSpec {
    pub fn new(n_left: usize, n_right: usize, p_in: f64, p_out: f64, seed: u64) -> Self {
        let medium = |name: &str, p_left, p_right| MediumSpec {
            name: name.to_string(),
            p_left,
            p_right,
        };
        Self {
            n_left,
            n_right,
            p_in,
            p_out,
            media: vec![
                medium("right_daily", 0.04, 0.70),
                medium("right_radio", 0.02, 0.45),
                medium("business_wire", 0.25, 0.30),
                medium("left_times", 0.65, 0.08),
                medium("left_cable", 0.55, 0.06),
                medium("left_review", 0.40, 0.03),
            ],
            vocab_left: words(&["solidarity", "equality", "#Resist", "justice", "racism", "protesters"]),
            vocab_right: words(&["heritage", "statues", "#MAGA", "liberty", "patriots", "history"]),
            filler: words(&[
                "today", "people", "news", "city", "rally", "weekend", "police", "crowd", "video", "watch",
                "#Charlottesville",
            ]),
            tweets_per_account: 3,
            words_per_tweet: 6,
            retweet_share: 0.3,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("synthetic spec: {m}")));
        if self.n_left < 2 || self.n_right < 2 {
            return bad("bloc sizes must be at least 2");
        }
        let probs = [self.p_in, self.p_out, self.retweet_share]
            .into_iter()
            .chain(self.media.iter().flat_map(|m| [m.p_left, m.p_right]));
        if probs.clone().any(|p| !(0.0..=1.0).contains(&p)) {
            return bad("probabilities must lie in [0, 1]");
        }
        if self.p_in == 0.0 && self.p_out == 0.0 {
            return bad("p_in and p_out are both 0, so there would be no retweets");
        }
        if self.media.is_empty() || self.media.iter().all(|m| m.p_left == 0.0 && m.p_right == 0.0) {
            return bad("no medium is ever followed");
        }
        if self.vocab_left.is_empty() || self.vocab_right.is_empty() || self.filler.is_empty() {
            return bad("word lists must be nonempty");
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n_left + self.n_right
    }

    pub fn account(&self, i: usize) -> String {
        format!("u{i:06}")
    }

    /// 0 for Left, 1 for Right.
    pub fn bloc(&self, i: usize) -> usize {
        usize::from(i >= self.n_left)
    }

    pub fn anchor(&self) -> &str {
        &self.media[0].name
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub edges: Vec<EdgeRecord>,
    pub accounts: Vec<String>,
    pub media: Vec<String>,
    pub follows: Vec<Vec<bool>>,
    pub tweets: Vec<TweetRecord>,
    /// Bloc of each account, 0 = Left.
    pub blocs: Vec<usize>,
}

fn poisson(mean: f64) -> Option<Poisson<f64>> {
    (mean > 0.0).then(|| Poisson::new(mean).expect("positive finite mean"))
}

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let n = spec.n();
    let accounts: Vec<String> = (0..n).map(|i| spec.account(i)).collect();
    let blocs: Vec<usize> = (0..n).map(|i| spec.bloc(i)).collect();

    let mut rng = stream_rng(spec.seed, STREAM_EDGES);
    let (within, across) = (poisson(spec.p_in), poisson(spec.p_out));
    let mut edges = Vec::new();
    for target in 0..n {
        for source in 0..n {
            if source == target {
                continue;
            }
            let dist = if blocs[source] == blocs[target] { &within } else { &across };
            let count = dist.as_ref().map_or(0, |d| d.sample(&mut rng) as u64);
            if count > 0 {
                edges.push(EdgeRecord::new(accounts[target].clone(), accounts[source].clone(), count));
            }
        }
    }

    let mut rng = stream_rng(spec.seed, STREAM_FOLLOWS);
    let follows = blocs
        .iter()
        .map(|&b| {
            spec.media
                .iter()
                .map(|m| rng.random_bool(if b == 0 { m.p_left } else { m.p_right }))
                .collect()
        })
        .collect();

    let mut rng = stream_rng(spec.seed, STREAM_TWEETS);
    let mut tweets: Vec<TweetRecord> = Vec::new();
    let mut by_bloc: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for round in 0..spec.tweets_per_account {
        for (i, account) in accounts.iter().enumerate() {
            let b = blocs[i];
            let utc = T0 + (round * n + i) as i64 * 37;
            let pool = &by_bloc[b];
            let text = if !pool.is_empty() && rng.random_bool(spec.retweet_share) {
                let src = &tweets[pool[rng.random_range(0..pool.len())]];
                format!("RT @{}: {}", src.account, src.text)
            } else {
                let vocab = if b == 0 { &spec.vocab_left } else { &spec.vocab_right };
                (0..spec.words_per_tweet)
                    .map(|_| {
                        let list = if rng.random_bool(0.5) { vocab } else { &spec.filler };
                        list[rng.random_range(0..list.len())].as_str()
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            by_bloc[b].push(tweets.len());
            tweets.push(TweetRecord::new(account.clone(), utc, text));
        }
    }

    Ok(SyntheticData {
        edges,
        accounts,
        media: spec.media.iter().map(|m| m.name.clone()).collect(),
        follows,
        tweets,
        blocs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundlePaths {
    pub edges: PathBuf,
    pub followership: PathBuf,
    pub tweets: PathBuf,
}

impl BundlePaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            edges: dir.join("edges.tsv"),
            followership: dir.join("followership.csv"),
            tweets: dir.join("tweets.jsonl"),
        }
    }
}

pub fn write_bundle(data: &SyntheticData, dir: &Path) -> Result<BundlePaths> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = BundlePaths::in_dir(dir);
    formats::write_edges(&paths.edges, &data.edges)?;
    formats::write_followership(&paths.followership, &data.accounts, &data.media, &data.follows)?;
    formats::write_tweets(&paths.tweets, &data.tweets)?;
    Ok(paths)
}
