//! Tweet tokenization and Left/Right content statistics.

mod stopwords;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pca::Class;

pub use stopwords::DEFAULT_EXTRAS;

/// Default hashtag exclusion for per-community rankings.
pub const DEFAULT_HASHTAG_EXCLUDE: &str = "charlottesville";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub account: String,
    /// Seconds since the Unix epoch, UTC.
    pub utc: i64,
    pub text: String,
}

impl TweetRecord {
    pub fn new(account: impl Into<String>, utc: i64, text: impl Into<String>) -> Self {
        Self {
            account: account.into(),
            utc,
            text: text.into(),
        }
    }
}

fn starts_with_ci(hay: &[u8], needle: &[u8]) -> bool {
    hay.len() >= needle.len() && hay[..needle.len()].eq_ignore_ascii_case(needle)
}

/// Replaces every `http://` / `https://` run (up to the next whitespace)
/// with a single space.
pub fn strip_urls(text: &str) -> String {
    let find = |s: &str| {
        let b = s.as_bytes();
        (0..b.len()).find(|&i| starts_with_ci(&b[i..], b"http://") || starts_with_ci(&b[i..], b"https://"))
    };
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(pos) = find(rest) {
        out.push_str(&rest[..pos]);
        out.push(' ');
        let tail = &rest[pos..];
        rest = &tail[tail.find(char::is_whitespace).unwrap_or(tail.len())..];
    }
    out.push_str(rest);
    out
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits a tweet into tokens.
///
/// URLs are dropped first. Tokens are maximal runs of alphanumerics, `#`,
/// `@`, `_`, and apostrophes that sit between two alphanumerics. Everything
/// else separates tokens. Case is preserved, so `Trump` and `trump` stay
/// distinct. Runs without any alphanumeric character (a bare `#`) are
/// discarded.
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = strip_urls(text).chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        if current.chars().any(char::is_alphanumeric) {
            tokens.push(core::mem::take(current));
        } else {
            current.clear();
        }
    };
    for (i, &c) in chars.iter().enumerate() {
        let keep = c.is_alphanumeric()
            || matches!(c, '#' | '@' | '_')
            || (is_apostrophe(c)
                && i > 0
                && chars[i - 1].is_alphanumeric()
                && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric()));
        if keep {
            current.push(c);
        } else {
            flush(&mut current);
        }
    }
    flush(&mut current);
    tokens
}

/// Exact-match stop-word filter: the embedded English list plus extras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords {
    extras: BTreeSet<String>,
}

impl Default for StopWords {
    fn default() -> Self {
        Self::with_extras(DEFAULT_EXTRAS)
    }
}

impl StopWords {
    /// The embedded list plus `extras`, which replace [`DEFAULT_EXTRAS`].
    pub fn with_extras<S: AsRef<str>>(extras: impl IntoIterator<Item = S>) -> Self {
        Self {
            extras: extras.into_iter().map(|s| String::from(s.as_ref())).collect(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        stopwords::is_english(token) || self.extras.contains(token)
    }
}

pub fn remove_stopwords(tokens: Vec<String>, stop: &StopWords) -> Vec<String> {
    tokens.into_iter().filter(|t| !stop.contains(t)).collect()
}

/// Token counts of the Left and Right sub-corpora.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordCountTable {
    pub left: BTreeMap<String, u64>,
    pub right: BTreeMap<String, u64>,
    pub total_left: u64,
    pub total_right: u64,
    /// Tweets whose author has no media score.
    pub excluded_unscored: usize,
    /// Tweets whose author scored exactly on the boundary.
    pub excluded_unclassified: usize,
}

impl WordCountTable {
    pub fn add(&mut self, class: Class, tokens: impl IntoIterator<Item = String>) {
        let (map, total) = match class {
            Class::Left => (&mut self.left, &mut self.total_left),
            Class::Right => (&mut self.right, &mut self.total_right),
            Class::Unclassified => {
                self.excluded_unclassified += 1;
                return;
            }
        };
        for t in tokens {
            *map.entry(t).or_insert(0) += 1;
            *total += 1;
        }
    }

    pub fn counts(&self, class: Class) -> Option<&BTreeMap<String, u64>> {
        match class {
            Class::Left => Some(&self.left),
            Class::Right => Some(&self.right),
            Class::Unclassified => None,
        }
    }

    /// The `k` most frequent tokens of a class, ties broken by token order.
    pub fn top_k(&self, class: Class, k: usize) -> Vec<(String, u64)> {
        let Some(map) = self.counts(class) else {
            return Vec::new();
        };
        let mut v: Vec<(String, u64)> = map.iter().map(|(t, &c)| (t.clone(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v.truncate(k);
        v
    }
}

/// Counts stop-filtered tokens per class. `score_of(account)` gives the
/// author's media score; unscored and boundary authors are excluded and
/// tallied.
pub fn word_counts_by_class<F>(corpus: &[TweetRecord], score_of: F, stop: &StopWords) -> WordCountTable
where
    F: Fn(&str) -> Option<f64>,
{
    let mut table = WordCountTable::default();
    for tweet in corpus {
        match score_of(&tweet.account) {
            Some(s) => table.add(Class::of_score(s), remove_stopwords(tokenize(&tweet.text), stop)),
            None => table.excluded_unscored += 1,
        }
    }
    table
}

/// Tweets whose token stream contains `keyword` exactly.
pub fn keyword_subset(corpus: &[TweetRecord], keyword: &str) -> Result<Vec<TweetRecord>> {
    if keyword.is_empty() {
        return Err(Error::InvalidParameter(String::from("empty keyword")));
    }
    Ok(corpus
        .iter()
        .filter(|t| tokenize(&t.text).iter().any(|tok| tok == keyword))
        .cloned()
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareRow {
    pub token: String,
    pub f_left: u64,
    pub f_right: u64,
    pub chi2: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChiSquareTable {
    /// Descending by `chi2`, ties by token.
    pub rows: Vec<ChiSquareRow>,
    /// Tokens whose statistic is undefined because they make up the whole
    /// of both class corpora.
    pub skipped: Vec<String>,
}

/// Single-word Pearson χ² of Left versus Right usage:
/// `(f_L f_¬R − f_R f_¬L)² / ((f_L+f_R)(f_¬L+f_¬R)(f_L+f_¬L)(f_R+f_¬R))`,
/// where `f_¬L` is the Left total minus `f_L`.
pub fn chi_square(table: &WordCountTable) -> Result<ChiSquareTable> {
    if table.total_left == 0 || table.total_right == 0 {
        return Err(Error::InsufficientData(String::from(
            "both classes need at least one token",
        )));
    }
    let (tl, tr) = (table.total_left as i128, table.total_right as i128);
    let tokens: BTreeSet<&String> = table.left.keys().chain(table.right.keys()).collect();
    let mut out = ChiSquareTable::default();
    for token in tokens {
        let fl = table.left.get(token).copied().unwrap_or(0) as i128;
        let fr = table.right.get(token).copied().unwrap_or(0) as i128;
        let (nl, nr) = (tl - fl, tr - fr);
        let diff = fl * nr - fr * nl;
        // Both pair products are exact, so swapping labels gives identical bits.
        let (usage, totals) = ((fl + fr) * (nl + nr), tl * tr);
        if usage == 0 {
            out.skipped.push(token.clone());
            continue;
        }
        let d = diff as f64;
        let chi2 = d * d / (usage as f64 * totals as f64);
        out.rows.push(ChiSquareRow {
            token: token.clone(),
            f_left: fl as u64,
            f_right: fr as u64,
            chi2,
        });
    }
    out.rows
        .sort_by(|a, b| b.chi2.total_cmp(&a.chi2).then_with(|| a.token.cmp(&b.token)));
    Ok(out)
}

/// Most frequent hashtag of every community whose lowercase form does not
/// contain `exclude` (lowercased too; empty disables the filter). Ties go
/// to the lexicographically smallest hashtag. Communities without an
/// eligible hashtag are absent. `community_of(account)` maps authors to
/// communities; tweets by unmapped authors are ignored.
pub fn hashtag_top_per_community<F>(corpus: &[TweetRecord], community_of: F, exclude: &str) -> BTreeMap<usize, (String, u64)>
where
    F: Fn(&str) -> Option<usize>,
{
    let exclude = exclude.to_lowercase();
    let mut counts: BTreeMap<usize, BTreeMap<String, u64>> = BTreeMap::new();
    for tweet in corpus {
        let Some(c) = community_of(&tweet.account) else {
            continue;
        };
        for tok in tokenize(&tweet.text) {
            if tok.starts_with('#') && (exclude.is_empty() || !tok.to_lowercase().contains(&exclude)) {
                *counts.entry(c).or_default().entry(tok).or_insert(0) += 1;
            }
        }
    }
    counts
        .into_iter()
        .filter_map(|(c, tags)| {
            // BTreeMap iterates in token order, so the first maximum wins ties.
            let mut best: Option<(String, u64)> = None;
            for (tag, n) in tags {
                if best.as_ref().is_none_or(|b| n > b.1) {
                    best = Some((tag, n));
                }
            }
            best.map(|b| (c, b))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniqueSummary {
    pub total: usize,
    pub unique: usize,
    /// `unique / total`; `None` for an empty corpus.
    pub fraction: Option<f64>,
}

/// Distinct exact tweet texts.
pub fn unique_fraction(corpus: &[TweetRecord]) -> UniqueSummary {
    let unique = corpus.iter().map(|t| t.text.as_str()).collect::<BTreeSet<_>>().len();
    let total = corpus.len();
    UniqueSummary {
        total,
        unique,
        fraction: (total > 0).then(|| unique as f64 / total as f64),
    }
}
