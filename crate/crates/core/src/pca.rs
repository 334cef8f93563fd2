//! Media-followership PCA.
//!
//! Each account is a 0/1 row over the followed media accounts. The first
//! principal component of the column-centered matrix (sample covariance,
//! divisor `n - 1`) gives every account a scalar media score. The sign of
//! the component is fixed by an anchor column whose loading is forced
//! positive; negative scores are called Left and positive scores Right.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, norm2};

/// Scores with magnitude below this are Unclassified.
pub const UNCLASSIFIED_BAND: f64 = 1e-12;
/// Power-iteration tolerance on successive unit iterates (max norm).
pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITERS: usize = 100_000;

/// Boolean accounts × media matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FollowershipMatrix {
    accounts: Vec<String>,
    media: Vec<String>,
    /// Row-major, `accounts.len() * media.len()`.
    entries: Vec<bool>,
}

impl FollowershipMatrix {
    /// Builds the matrix. Rows must follow at least one medium; media labels
    /// and account ids must be unique.
    pub fn new(accounts: Vec<String>, media: Vec<String>, rows: Vec<Vec<bool>>) -> Result<Self> {
        if rows.len() != accounts.len() {
            return Err(Error::DimensionMismatch {
                expected: accounts.len(),
                found: rows.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for m in &media {
            if !seen.insert(m.as_str()) {
                return Err(Error::DuplicateLabel(m.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for a in &accounts {
            if !seen.insert(a.as_str()) {
                return Err(Error::DuplicateLabel(a.clone()));
            }
        }
        let mut entries = Vec::with_capacity(rows.len() * media.len());
        for (row, account) in rows.iter().zip(&accounts) {
            if row.len() != media.len() {
                return Err(Error::DimensionMismatch {
                    expected: media.len(),
                    found: row.len(),
                });
            }
            if !row.iter().any(|&b| b) {
                return Err(Error::Degenerate(format!(
                    "account {account:?} follows none of the media"
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self {
            accounts,
            media,
            entries,
        })
    }

    pub fn accounts(&self) -> &[String] {
        &self.accounts
    }

    pub fn media(&self) -> &[String] {
        &self.media
    }

    pub fn n_accounts(&self) -> usize {
        self.accounts.len()
    }

    pub fn n_media(&self) -> usize {
        self.media.len()
    }

    pub fn row(&self, i: usize) -> &[bool] {
        let m = self.media.len();
        &self.entries[i * m..(i + 1) * m]
    }

    pub fn column_means(&self) -> Vec<f64> {
        let m = self.n_media();
        let mut means = vec![0.0; m];
        for i in 0..self.n_accounts() {
            for (mean, &b) in means.iter_mut().zip(self.row(i)) {
                if b {
                    *mean += 1.0;
                }
            }
        }
        let n = self.n_accounts() as f64;
        means.iter_mut().for_each(|x| *x /= n);
        means
    }

    /// Sample covariance of the columns, row-major `m × m`.
    pub fn covariance(&self) -> Vec<f64> {
        let m = self.n_media();
        let means = self.column_means();
        let mut cov = vec![0.0; m * m];
        let mut centered = vec![0.0; m];
        for i in 0..self.n_accounts() {
            for ((c, &b), mean) in centered.iter_mut().zip(self.row(i)).zip(&means) {
                *c = if b { 1.0 } else { 0.0 } - mean;
            }
            for a in 0..m {
                for b in a..m {
                    cov[a * m + b] += centered[a] * centered[b];
                }
            }
        }
        let denom = (self.n_accounts() - 1) as f64;
        for a in 0..m {
            for b in a..m {
                let v = cov[a * m + b] / denom;
                cov[a * m + b] = v;
                cov[b * m + a] = v;
            }
        }
        cov
    }
}

/// Unit-norm first principal component.
#[derive(Debug, Clone, PartialEq)]
pub struct MediaLoadings {
    pub media: Vec<String>,
    pub loadings: Vec<f64>,
    pub anchor: String,
    /// Leading eigenvalue of the covariance, i.e. the variance of the scores.
    pub explained_variance: f64,
    pub means: Vec<f64>,
}

impl MediaLoadings {
    /// Score of a (possibly fractional) row: `(row - means) · loadings`.
    pub fn project(&self, row: &[f64]) -> f64 {
        row.iter()
            .zip(&self.means)
            .zip(&self.loadings)
            .map(|((x, mean), l)| (x - mean) * l)
            .sum()
    }
}

/// Political side by score sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Left,
    Right,
    Unclassified,
}

impl Class {
    pub fn of_score(score: f64) -> Class {
        if abs(score) < UNCLASSIFIED_BAND {
            Class::Unclassified
        } else if score < 0.0 {
            Class::Left
        } else {
            Class::Right
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Class::Left => "Left",
            Class::Right => "Right",
            Class::Unclassified => "Unclassified",
        }
    }

    /// Index into a Left/Right pair, `None` when unclassified.
    pub fn side(self) -> Option<usize> {
        match self {
            Class::Left => Some(0),
            Class::Right => Some(1),
            Class::Unclassified => None,
        }
    }
}

/// Per-account media scores, in matrix row order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MediaScores {
    pub accounts: Vec<String>,
    pub scores: Vec<f64>,
}

impl MediaScores {
    pub fn new(accounts: Vec<String>, scores: Vec<f64>) -> Self {
        Self { accounts, scores }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn class(&self, i: usize) -> Class {
        Class::of_score(self.scores[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64, Class)> + '_ {
        self.accounts
            .iter()
            .zip(&self.scores)
            .map(|(a, &s)| (a.as_str(), s, Class::of_score(s)))
    }

    /// Scores aligned to graph nodes: `out[node]` is the score of the account
    /// with that id, if it was scored.
    pub fn align<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Vec<Option<f64>> {
        let lookup: alloc::collections::BTreeMap<&str, f64> = self
            .accounts
            .iter()
            .map(|a| a.as_str())
            .zip(self.scores.iter().copied())
            .collect();
        ids.into_iter().map(|id| lookup.get(id).copied()).collect()
    }
}

/// Leading eigenpair of a symmetric positive semidefinite `m × m` matrix by
/// power iteration from a fixed pseudo-random start vector.
pub(crate) fn leading_eigenpair(a: &[f64], m: usize, tol: f64, max_iters: usize) -> Result<(Vec<f64>, f64)> {
    if a.iter().all(|&x| x == 0.0) {
        return Err(Error::Degenerate(String::from("zero covariance")));
    }
    let mut v: Vec<f64> = (0..m as u64)
        .map(|k| {
            let bits = crate::rng::splitmix64(k ^ 0x5eed) >> 11;
            0.5 + bits as f64 / (1u64 << 53) as f64
        })
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut next = vec![0.0; m];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iters {
        for (r, out) in next.iter_mut().enumerate() {
            *out = a[r * m..(r + 1) * m].iter().zip(&v).map(|(x, y)| x * y).sum();
        }
        let nn = norm2(&next);
        if nn == 0.0 {
            return Err(Error::Degenerate(String::from("power iterate vanished")));
        }
        next.iter_mut().for_each(|x| *x /= nn);
        residual = next
            .iter()
            .zip(&v)
            .map(|(x, y)| abs(x - y))
            .fold(0.0, f64::max);
        core::mem::swap(&mut v, &mut next);
        if residual < tol {
            let lambda = rayleigh(a, m, &v);
            return Ok((v, lambda));
        }
    }
    Err(Error::NonConvergence {
        what: "principal component",
        iterations: max_iters,
        residual,
    })
}

fn rayleigh(a: &[f64], m: usize, v: &[f64]) -> f64 {
    let mut s = 0.0;
    for r in 0..m {
        let av: f64 = a[r * m..(r + 1) * m].iter().zip(v).map(|(x, y)| x * y).sum();
        s += v[r] * av;
    }
    s
}

/// First principal component, oriented so the `anchor` medium loads positive.
pub fn first_principal_component(matrix: &FollowershipMatrix, anchor: &str) -> Result<MediaLoadings> {
    if matrix.n_accounts() < 2 {
        return Err(Error::InsufficientData(String::from(
            "PCA needs at least two accounts",
        )));
    }
    let anchor_col = matrix
        .media
        .iter()
        .position(|m| m == anchor)
        .ok_or_else(|| Error::UnknownLabel(String::from(anchor)))?;
    let first = matrix.row(0);
    if (1..matrix.n_accounts()).all(|i| matrix.row(i) == first) {
        return Err(Error::Degenerate(String::from(
            "all followership rows are identical",
        )));
    }
    let m = matrix.n_media();
    let cov = matrix.covariance();
    let (mut v, lambda) = leading_eigenpair(&cov, m, POWER_TOL, POWER_MAX_ITERS)?;
    if abs(v[anchor_col]) < UNCLASSIFIED_BAND {
        return Err(Error::Anchoring(String::from(anchor)));
    }
    if v[anchor_col] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(MediaLoadings {
        media: matrix.media.clone(),
        loadings: v,
        anchor: String::from(anchor),
        explained_variance: lambda,
        means: matrix.column_means(),
    })
}

/// Projects each centered row onto the loadings.
pub fn score_accounts(matrix: &FollowershipMatrix, loadings: &MediaLoadings) -> Result<MediaScores> {
    if loadings.loadings.len() != matrix.n_media() {
        return Err(Error::DimensionMismatch {
            expected: matrix.n_media(),
            found: loadings.loadings.len(),
        });
    }
    let mut row = vec![0.0; matrix.n_media()];
    let scores = (0..matrix.n_accounts())
        .map(|i| {
            for (x, &b) in row.iter_mut().zip(matrix.row(i)) {
                *x = if b { 1.0 } else { 0.0 };
            }
            loadings.project(&row)
        })
        .collect();
    Ok(MediaScores::new(matrix.accounts.clone(), scores))
}

/// `(n_left, n_right, n_unclassified)`.
pub fn classify_counts(scores: &MediaScores) -> (usize, usize, usize) {
    let mut counts = (0, 0, 0);
    for i in 0..scores.len() {
        match scores.class(i) {
            Class::Left => counts.0 += 1,
            Class::Right => counts.1 += 1,
            Class::Unclassified => counts.2 += 1,
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn matrix(rows: &[&[u8]]) -> FollowershipMatrix {
        let m = rows[0].len();
        FollowershipMatrix::new(
            (0..rows.len()).map(|i| format!("u{i}")).collect(),
            (0..m).map(|j| format!("m{j}")).collect(),
            rows.iter().map(|r| r.iter().map(|&x| x == 1).collect()).collect(),
        )
        .unwrap()
    }

    // Hand oracle: covariance [[1/3,-1/3],[-1/3,1/3]] has eigenpair
    // (2/3, (1,-1)/sqrt 2); centered rows are (±1/2, ∓1/2).
    #[test]
    fn two_by_two_hand_fixture() {
        let mx = matrix(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]);
        let l = first_principal_component(&mx, "m0").unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((l.loadings[0] - h).abs() < 1e-12);
        assert!((l.loadings[1] + h).abs() < 1e-12);
        assert!((l.explained_variance - 2.0 / 3.0).abs() < 1e-12);
        let s = score_accounts(&mx, &l).unwrap();
        for (got, want) in s.scores.iter().zip([h, h, -h, -h]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(classify_counts(&s), (2, 2, 0));
    }

    #[test]
    fn identical_columns_positive_equal_loadings() {
        // Zero rows are not allowed, so add a third column that breaks ties.
        let mx = matrix(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 1], &[0, 0, 1]]);
        for anchor in ["m0", "m1"] {
            let l = first_principal_component(&mx, anchor).unwrap();
            assert!((l.loadings[0] - l.loadings[1]).abs() < 1e-10);
            assert!(l.loadings[0] > 0.0);
        }
        let two = matrix(&[&[1, 1], &[1, 1], &[1, 1], &[1, 1]]);
        assert!(matches!(
            first_principal_component(&two, "m0"),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn two_identical_columns_only() {
        // Rows (1,1) and ... every nonzero row of two identical columns is (1,1),
        // so the only non-degenerate case needs a third column; checked above.
        let mx = matrix(&[&[1, 1, 0], &[1, 1, 1], &[0, 0, 1]]);
        let l = first_principal_component(&mx, "m1").unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((l.loadings[0].abs() - l.loadings[1].abs()).abs() < 1e-10);
        assert!(l.loadings[0] > 0.0 && l.loadings[1] > 0.0);
        assert!(l.loadings[0] <= h + 1e-12);
    }

    #[test]
    fn anchor_flip_negates_scores() {
        let mx = matrix(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1], &[1, 1]]);
        let a = first_principal_component(&mx, "m0").unwrap();
        let b = first_principal_component(&mx, "m1").unwrap();
        let sa = score_accounts(&mx, &a).unwrap();
        let sb = score_accounts(&mx, &b).unwrap();
        for (x, y) in sa.scores.iter().zip(&sb.scores) {
            assert!((x + y).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_row_is_unclassified() {
        let mx = matrix(&[&[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        let l = first_principal_component(&mx, "m0").unwrap();
        let score = l.project(&l.means.clone());
        assert_eq!(Class::of_score(score), Class::Unclassified);
    }

    #[test]
    fn classify_counts_examples() {
        let s = MediaScores::new(
            ["a", "b", "c"].iter().map(|s| s.to_string()).collect(),
            vec![-1.0, -1.0, 2.0],
        );
        assert_eq!(classify_counts(&s), (2, 1, 0));
        assert_eq!(classify_counts(&MediaScores::default()), (0, 0, 0));
    }

    #[test]
    fn rejects_bad_input() {
        let zero_row = FollowershipMatrix::new(
            vec!["a".into()],
            vec!["m".into()],
            vec![vec![false]],
        );
        assert!(matches!(zero_row, Err(Error::Degenerate(_))));
        let dup = FollowershipMatrix::new(
            vec!["a".into()],
            vec!["m".into(), "m".into()],
            vec![vec![true, false]],
        );
        assert!(matches!(dup, Err(Error::DuplicateLabel(_))));
        let single = matrix(&[&[1, 0]]);
        assert!(matches!(
            first_principal_component(&single, "m0"),
            Err(Error::InsufficientData(_))
        ));
        let mx = matrix(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            first_principal_component(&mx, "zz"),
            Err(Error::UnknownLabel(_))
        ));
        let l = first_principal_component(&mx, "m0").unwrap();
        let wide = matrix(&[&[1, 0, 1], &[0, 1, 1]]);
        assert!(matches!(
            score_accounts(&wide, &l),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_anchor_loading_rejected() {
        // Column m2 is constant, so it has zero variance and zero loading.
        let mx = matrix(&[&[1, 0, 1], &[0, 1, 1], &[1, 0, 1], &[0, 1, 1]]);
        assert!(matches!(
            first_principal_component(&mx, "m2"),
            Err(Error::Anchoring(_))
        ));
    }
}
