mod common;

use common::indexed_graph;
use polarnet_core::community::{modularity, ModularityParams, Partition};
use polarnet_core::graph::{build_graph, EdgeRecord};
use polarnet_core::pca::{first_principal_component, score_accounts};
use polarnet_core::polarization::dyad_correlation;
use polarnet_core::text::{chi_square, remove_stopwords, tokenize, word_counts_by_class, StopWords, TweetRecord, WordCountTable};
use polarnet_core::FollowershipMatrix;
use proptest::prelude::*;

fn edge_list() -> impl Strategy<Value = (usize, Vec<(usize, usize, u64)>)> {
    (2usize..12).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n, 1u64..5), 1..40)))
}

proptest! {
    #[test]
    fn strengths_sum_to_total_weight((n, edges) in edge_list()) {
        let g = indexed_graph(n, &edges);
        let total: u64 = edges.iter().map(|e| e.2).sum();
        prop_assert_eq!(g.total_weight(), total);
        prop_assert_eq!(g.in_strengths().iter().sum::<u64>(), total);
        prop_assert_eq!(g.out_strengths().iter().sum::<u64>(), total);
    }

    #[test]
    fn build_is_order_independent((_n, edges) in edge_list(), rot in 0usize..40) {
        let recs: Vec<_> = edges.iter().map(|&(t, s, c)| EdgeRecord::new(format!("n{t}"), format!("n{s}"), c)).collect();
        let mut shuffled = recs.clone();
        shuffled.reverse();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        let a = build_graph(&recs).unwrap();
        let b = build_graph(&shuffled).unwrap();
        prop_assert_eq!(a.edges_by_id(), b.edges_by_id());
    }

    #[test]
    fn largest_component_is_idempotent((n, edges) in edge_list()) {
        let g = indexed_graph(n, &edges);
        let (c1, _) = g.largest_weak_component().unwrap();
        let (c2, map) = c1.largest_weak_component().unwrap();
        prop_assert_eq!(c1.edges_by_id(), c2.edges_by_id());
        prop_assert!(map.iter().all(Option::is_some));
        prop_assert_eq!(c1.weak_components().len(), 1);
    }

    #[test]
    fn one_community_has_zero_modularity((n, edges) in edge_list()) {
        let g = indexed_graph(n, &edges);
        let q = modularity(&g, &Partition::single(n), &ModularityParams::default()).unwrap();
        prop_assert!(q.abs() < 1e-12);
    }

    #[test]
    fn pca_scores_are_centered_with_leading_variance(
        rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 4), 6..60)
    ) {
        let rows: Vec<Vec<bool>> = rows.into_iter().filter(|r| r.iter().any(|&x| x)).collect();
        prop_assume!(rows.len() >= 3);
        let accounts = (0..rows.len()).map(|i| format!("u{i}")).collect();
        let media = (0..4).map(|j| format!("m{j}")).collect();
        let fm = FollowershipMatrix::new(accounts, media, rows).unwrap();
        let Ok(l) = first_principal_component(&fm, "m0") else { return Ok(()); };
        let s: Vec<f64> = score_accounts(&fm, &l).unwrap().iter().map(|x| x.1).collect();
        let n = s.len() as f64;
        let mean = s.iter().sum::<f64>() / n;
        let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        prop_assert!(mean.abs() < 1e-12);
        prop_assert!((var - l.explained_variance).abs() < 1e-9);
        prop_assert!(l.loadings[0] > 0.0);
    }

    #[test]
    fn dyad_correlation_is_affine_invariant(
        (n, edges) in edge_list(),
        raw in prop::collection::vec(-5.0f64..5.0, 12),
        scale in 0.1f64..10.0,
        shift in -3.0f64..3.0,
    ) {
        let g = indexed_graph(n, &edges);
        let s: Vec<Option<f64>> = raw[..n].iter().map(|&x| Some(x)).collect();
        let t: Vec<Option<f64>> = raw[..n].iter().map(|&x| Some(scale * x + shift)).collect();
        if let (Ok(a), Ok(b)) = (dyad_correlation(&g, &s), dyad_correlation(&g, &t)) {
            prop_assert!((a.0 - b.0).abs() < 1e-9);
            prop_assert!(a.0.abs() <= 1.0);
        }
    }

    #[test]
    fn tokenizer_is_idempotent(text in "\\PC{0,80}") {
        let t = tokenize(&text);
        prop_assert!(t.iter().all(|tok| !tok.is_empty() && !tok.chars().any(char::is_whitespace)));
        prop_assert_eq!(tokenize(&t.join(" ")), t);
    }

    #[test]
    fn chi_square_is_label_symmetric(
        left in prop::collection::btree_map("[a-e]", 1u64..50, 1..5),
        right in prop::collection::btree_map("[a-e]", 1u64..50, 1..5),
    ) {
        let table = |l: &std::collections::BTreeMap<String, u64>, r: &std::collections::BTreeMap<String, u64>| WordCountTable {
            left: l.clone(),
            right: r.clone(),
            total_left: l.values().sum(),
            total_right: r.values().sum(),
            ..Default::default()
        };
        let a = chi_square(&table(&left, &right)).unwrap();
        let b = chi_square(&table(&right, &left)).unwrap();
        prop_assert_eq!(a.rows.len(), b.rows.len());
        for row in &a.rows {
            let other = b.rows.iter().find(|r| r.token == row.token).unwrap();
            prop_assert_eq!(row.chi2, other.chi2);
            prop_assert!(row.chi2 >= 0.0);
            let prop_equal = row.f_left as u128 * table(&left, &right).total_right as u128
                == row.f_right as u128 * table(&left, &right).total_left as u128;
            prop_assert_eq!(row.chi2 == 0.0, prop_equal);
        }
    }

    #[test]
    fn class_totals_match_filtered_tokens(texts in prop::collection::vec("[a-z #@]{0,30}", 0..20)) {
        let corpus: Vec<TweetRecord> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| TweetRecord::new(format!("a{}", i % 3), 0, t.clone()))
            .collect();
        let score = |a: &str| match a { "a0" => Some(-1.0), "a1" => Some(1.0), _ => None };
        let stop = StopWords::default();
        let table = word_counts_by_class(&corpus, score, &stop);
        let expected: usize = corpus
            .iter()
            .filter(|t| t.account != "a2")
            .map(|t| remove_stopwords(tokenize(&t.text), &stop).len())
            .sum();
        prop_assert_eq!((table.total_left + table.total_right) as usize, expected);
        prop_assert_eq!(table.left.values().sum::<u64>(), table.total_left);
    }
}
