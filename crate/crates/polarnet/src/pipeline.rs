//! Stage orchestration for the full report.
//!
//! Stages run in a fixed order and pull what they need from a shared
//! [`Context`], which loads files and computes intermediate results on
//! first use. The CLI subcommands run single stages through the same
//! context.

use std::collections::BTreeMap;
use std::time::Instant;

use polarnet_core::centrality::{self, hits, hub_threshold_report, modular_degree_ratio, pagerank, Measure, PageRankParams};
use polarnet_core::community::{
    community_profiles, infomap, louvain, map_equation, modularity, resolution_sweep, MapEquationParams, ModularityParams,
    Partition, VisitOrder,
};
use polarnet_core::graph::{build_graph, Direction};
use polarnet_core::pca::{classify_counts, first_principal_component, score_accounts, POWER_MAX_ITERS, POWER_TOL};
use polarnet_core::polarization::assortativity_report;
use polarnet_core::rng::derive_seed;
use polarnet_core::text::{self, StopWords, TweetRecord, WordCountTable};
use polarnet_core::{Class, MediaLoadings, MediaScores, RetweetGraph};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::formats::{self, Followership};
use crate::output::{num, opt, OutputDir, Provenance};

pub const STAGES: [&str; 8] = [
    "ingest",
    "lwcc",
    "score",
    "centrality",
    "communities",
    "profiles",
    "assortativity",
    "text",
];

const HITS_TOL: f64 = 1e-12;
const HITS_MAX_ITERS: usize = 100_000;

/// Per-stage seeds, `derive_seed(seed, k)` for k = 1..4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Seeds {
    pub louvain: u64,
    pub infomap: u64,
    pub sweep: u64,
    pub permutation: u64,
}

impl Seeds {
    pub fn derive(master: u64) -> Self {
        Self {
            louvain: derive_seed(master, 1),
            infomap: derive_seed(master, 2),
            sweep: derive_seed(master, 3),
            permutation: derive_seed(master, 4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputFile {
    pub role: &'static str,
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Complete,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub name: &'static str,
    pub status: StageStatus,
    pub wall_clock_ms: f64,
    pub outputs: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub seeds: Seeds,
    pub config: PipelineConfig,
    pub inputs: Vec<InputFile>,
    pub stages: Vec<StageRecord>,
    pub warnings: Vec<String>,
}

pub struct Context<'a> {
    cfg: &'a PipelineConfig,
    pub seeds: Seeds,
    pub out: OutputDir,
    pub inputs: Vec<InputFile>,
    pub warnings: Vec<String>,
    graph: Option<RetweetGraph>,
    follow: Option<Followership>,
    lwcc: Option<RetweetGraph>,
    loadings: Option<MediaLoadings>,
    scores: Option<MediaScores>,
    aligned: Option<Vec<Option<f64>>>,
    louvain: Option<Partition>,
    infomap: Option<Partition>,
}

fn read_hashed(role: &'static str, path: &std::path::Path) -> Result<InputFile> {
    if path.as_os_str().is_empty() {
        return Err(Error::Config(format!("no {role} file configured")));
    }
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(InputFile {
        role,
        path: path.display().to_string(),
        bytes: bytes.len() as u64,
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

impl<'a> Context<'a> {
    pub fn new(cfg: &'a PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            seeds: Seeds::derive(cfg.seed),
            out: OutputDir::create(&cfg.out_dir)?,
            inputs: Vec::new(),
            warnings: Vec::new(),
            graph: None,
            follow: None,
            lwcc: None,
            loadings: None,
            scores: None,
            aligned: None,
            louvain: None,
            infomap: None,
        })
    }

    fn prov(&self) -> Provenance {
        Provenance::new(self.cfg.seed)
    }

    fn ensure_graph(&mut self) -> Result<()> {
        if self.graph.is_none() {
            self.inputs.push(read_hashed("edges", &self.cfg.edges)?);
            let records = formats::parse_edges(&self.cfg.edges)?;
            self.graph = Some(build_graph(&records)?);
        }
        Ok(())
    }

    fn ensure_followership(&mut self) -> Result<()> {
        if self.follow.is_none() {
            self.inputs.push(read_hashed("followership", &self.cfg.followership)?);
            self.follow = Some(formats::parse_followership(&self.cfg.followership)?);
        }
        Ok(())
    }

    fn ensure_lwcc(&mut self) -> Result<()> {
        if self.lwcc.is_none() {
            self.ensure_graph()?;
            let (g, _) = self.graph.as_ref().unwrap().largest_weak_component()?;
            self.lwcc = Some(g);
        }
        Ok(())
    }

    fn ensure_scores(&mut self) -> Result<()> {
        if self.scores.is_none() {
            self.ensure_followership()?;
            let m = &self.follow.as_ref().unwrap().matrix;
            let loadings = first_principal_component(m, &self.cfg.anchor)?;
            self.scores = Some(score_accounts(m, &loadings)?);
            self.loadings = Some(loadings);
        }
        Ok(())
    }

    /// Media scores in LWCC node order.
    fn ensure_aligned(&mut self) -> Result<()> {
        if self.aligned.is_none() {
            self.ensure_lwcc()?;
            self.ensure_scores()?;
            let g = self.lwcc.as_ref().unwrap();
            self.aligned = Some(self.scores.as_ref().unwrap().align(g.ids().iter().map(String::as_str)));
        }
        Ok(())
    }

    /// Like `ensure_aligned`, but leaves every node unscored when no
    /// followership file is configured.
    fn ensure_aligned_optional(&mut self) -> Result<()> {
        if self.cfg.followership.as_os_str().is_empty() {
            self.ensure_lwcc()?;
            self.aligned = Some(vec![None; self.lwcc.as_ref().unwrap().node_count()]);
            return Ok(());
        }
        self.ensure_aligned()
    }

    fn ensure_partitions(&mut self) -> Result<()> {
        if self.louvain.is_none() {
            self.ensure_lwcc()?;
            let g = self.lwcc.as_ref().unwrap();
            self.louvain = Some(louvain(g, &ModularityParams::default(), &VisitOrder::Seeded(self.seeds.louvain))?);
            let params = self.map_params();
            self.infomap = Some(infomap(g, &params, &VisitOrder::Seeded(self.seeds.infomap))?);
        }
        Ok(())
    }

    fn map_params(&self) -> MapEquationParams {
        MapEquationParams {
            tau: self.cfg.tau,
            ..Default::default()
        }
    }

    fn size_floor(&self) -> usize {
        self.cfg.size_floor_for(self.lwcc.as_ref().map_or(0, RetweetGraph::node_count))
    }

    pub fn run_stage(&mut self, name: &str) -> Result<()> {
        match name {
            "ingest" => self.ingest(),
            "lwcc" => self.stage_lwcc(),
            "score" => self.score(),
            "centrality" => self.centrality(),
            "communities" => self.communities(),
            "profiles" => self.profiles(),
            "assortativity" => self.assortativity(),
            "text" => self.text(),
            other => Err(Error::Config(format!("unknown stage `{other}`"))),
        }
    }

    fn ingest(&mut self) -> Result<()> {
        self.ensure_graph()?;
        let followership = if self.cfg.followership.as_os_str().is_empty() {
            Value::Null
        } else {
            self.ensure_followership()?;
            let f = self.follow.as_ref().unwrap();
            json!({
                "accounts": f.matrix.n_accounts(),
                "media": f.matrix.media(),
                "dropped_zero_rows": f.dropped.len(),
            })
        };
        let prov = self.prov();
        let g = self.graph.as_ref().unwrap();
        let self_loops = g.edges().iter().filter(|e| e.source == e.target).count();
        self.out.json(
            "graph.json",
            &prov,
            json!({
                "nodes": g.node_count(),
                "edges": g.edge_count(),
                "retweets": g.total_weight(),
                "self_loops": self_loops,
                "followership": followership,
            }),
        )?;
        for (dir, name) in [(Direction::In, "degree_in.csv"), (Direction::Out, "degree_out.csv")] {
            let rows = g
                .degree_histogram(dir)
                .into_iter()
                .map(|(d, c)| vec![d.to_string(), c.to_string()]);
            self.out.csv(name, &prov, &["strength", "nodes"], rows)?;
        }
        Ok(())
    }

    fn stage_lwcc(&mut self) -> Result<()> {
        self.ensure_lwcc()?;
        let prov = self.prov();
        let full = self.graph.as_ref().unwrap();
        let g = self.lwcc.as_ref().unwrap();
        self.out.json(
            "lwcc.json",
            &prov,
            json!({
                "components": full.weak_components().len(),
                "nodes": g.node_count(),
                "edges": g.edge_count(),
                "retweets": g.total_weight(),
                "node_fraction": g.node_count() as f64 / full.node_count() as f64,
            }),
        )?;
        let rows = (0..g.node_count()).map(|i| {
            vec![g.id(i).to_string(), g.in_strength(i).to_string(), g.out_strength(i).to_string()]
        });
        self.out.csv("strengths.csv", &prov, &["account", "in_strength", "out_strength"], rows)?;
        Ok(())
    }

    fn score(&mut self) -> Result<()> {
        self.ensure_scores()?;
        let prov = self
            .prov()
            .with("anchor", &self.cfg.anchor)
            .with("tol", POWER_TOL)
            .with("max_iters", POWER_MAX_ITERS);
        let l = self.loadings.as_ref().unwrap();
        let s = self.scores.as_ref().unwrap();
        let rows = l
            .media
            .iter()
            .zip(&l.loadings)
            .zip(&l.means)
            .map(|((m, x), mean)| vec![m.clone(), num(*x), num(*mean)]);
        self.out.csv("loadings.csv", &prov, &["medium", "loading", "mean"], rows)?;
        let rows = s
            .iter()
            .map(|(a, x, c)| vec![a.to_string(), num(x), c.as_str().to_string()]);
        self.out.csv("scores.csv", &prov, &["account", "score", "class"], rows)?;
        let (left, right, unclassified) = classify_counts(s);
        let dropped = self.follow.as_ref().unwrap().dropped.len();
        self.out.json(
            "pca.json",
            &prov,
            json!({
                "anchor": l.anchor,
                "explained_variance": l.explained_variance,
                "accounts": s.len(),
                "left": left,
                "right": right,
                "unclassified": unclassified,
                "dropped_zero_rows": dropped,
            }),
        )?;
        Ok(())
    }

    fn centrality(&mut self) -> Result<()> {
        self.ensure_aligned_optional()?;
        let aligned = self.aligned.as_ref().unwrap();
        let g = self.lwcc.as_ref().unwrap();
        let pr_params = PageRankParams::default();
        let pr = pagerank(g, &pr_params)?;
        let (hub, auth) = hits(g, HITS_TOL, HITS_MAX_ITERS)?;
        let din = centrality::degree_scores(g, Measure::InDegree);
        let dout = centrality::degree_scores(g, Measure::OutDegree);
        let prov = self
            .prov()
            .with("damping", pr_params.damping)
            .with("pagerank_tol", pr_params.tol)
            .with("hits_tol", HITS_TOL)
            .with("top_k", self.cfg.top_k)
            .with("hub_threshold", self.cfg.hub_threshold);

        let rows = (0..g.node_count()).map(|i| {
            vec![
                g.id(i).to_string(),
                num(pr.values[i]),
                num(hub.values[i]),
                num(auth.values[i]),
                num(din.values[i]),
                num(dout.values[i]),
                opt(aligned[i]),
            ]
        });
        self.out.csv(
            "centrality.csv",
            &prov,
            &["account", "pagerank", "hub", "authority", "in_strength", "out_strength", "score"],
            rows,
        )?;

        let mut top_rows = Vec::new();
        let mut targets = std::collections::BTreeSet::new();
        for scores in [&pr, &hub, &auth, &din, &dout] {
            for (rank, (i, v)) in centrality::top_k(scores, self.cfg.top_k).into_iter().enumerate() {
                targets.insert(i);
                top_rows.push(vec![
                    scores.kind.as_str().to_string(),
                    (rank + 1).to_string(),
                    g.id(i).to_string(),
                    num(v),
                    opt(aligned[i]),
                ]);
            }
        }
        self.out
            .csv("centrality_top.csv", &prov, &["measure", "rank", "account", "value", "score"], top_rows)?;

        let targets: Vec<usize> = targets.into_iter().collect();
        let report = hub_threshold_report(&hub, g, &targets, self.cfg.hub_threshold)?;
        let rows = report.fractions.iter().map(|&(t, f)| {
            vec![g.id(t).to_string(), g.retweeters(t).len().to_string(), opt(f)]
        });
        self.out
            .csv("hub_threshold.csv", &prov, &["account", "retweeters", "large_hub_fraction"], rows)?;
        Ok(())
    }

    fn communities(&mut self) -> Result<()> {
        self.ensure_partitions()?;
        self.ensure_aligned_optional()?;
        let floor = self.size_floor();
        let map_params = self.map_params();
        let g = self.lwcc.as_ref().unwrap();
        let lv = self.louvain.as_ref().unwrap();
        let im = self.infomap.as_ref().unwrap();
        let aligned = self.aligned.as_ref().unwrap();
        let q = modularity(g, lv, &ModularityParams::default())?;
        let l = map_equation(g, im, &map_params)?;
        let prov = self
            .prov()
            .with("louvain_seed", self.seeds.louvain)
            .with("infomap_seed", self.seeds.infomap)
            .with("gamma", 1)
            .with("tau", map_params.tau)
            .with("size_floor", floor);

        let rows = (0..g.node_count()).map(|i| {
            vec![g.id(i).to_string(), lv.community(i).to_string(), im.community(i).to_string()]
        });
        self.out.csv("communities.csv", &prov, &["account", "louvain", "infomap"], rows)?;
        let large = |p: &Partition| p.sizes().into_iter().filter(|&s| s >= floor).count();
        self.out.json(
            "communities.json",
            &prov,
            json!({
                "louvain": { "k": lv.k(), "k_at_floor": large(lv), "modularity": q },
                "infomap": { "k": im.k(), "k_at_floor": large(im), "codelength_bits": l },
            }),
        )?;

        let ratios = modular_degree_ratio(g, lv.assignment())?;
        let rows = ratios.iter().map(|r| {
            vec![
                g.id(r.node).to_string(),
                lv.community(r.node).to_string(),
                r.intra_in.to_string(),
                r.inter_in.to_string(),
                opt(r.ratio()),
            ]
        });
        self.out.csv(
            "modular_degree.csv",
            &prov,
            &["account", "community", "intra_in", "inter_in", "ratio"],
            rows,
        )?;

        let sweep = resolution_sweep(g, &self.cfg.gammas, self.seeds.sweep, aligned, floor)?;
        let sweep_prov = self
            .prov()
            .with("sweep_seed", self.seeds.sweep)
            .with("gammas", self.cfg.gammas.iter().map(|g| num(*g)).collect::<Vec<_>>().join(";"))
            .with("size_floor", floor);
        let mut rows = Vec::new();
        for level in &sweep {
            for c in &level.communities {
                rows.push(vec![
                    num(level.gamma),
                    level.seed.to_string(),
                    level.k.to_string(),
                    num(level.modularity),
                    c.community.to_string(),
                    c.size.to_string(),
                    opt(c.mean_score),
                ]);
            }
        }
        self.out.csv(
            "sweep.csv",
            &sweep_prov,
            &["gamma", "seed", "k", "modularity", "community", "size", "mean_score"],
            rows,
        )?;
        Ok(())
    }

    fn profiles(&mut self) -> Result<()> {
        self.ensure_partitions()?;
        self.ensure_aligned()?;
        let floor = self.size_floor();
        let prov = self.prov().with("size_floor", floor);
        let aligned = self.aligned.as_ref().unwrap();
        let mut rows = Vec::new();
        for (method, p) in [("louvain", self.louvain.as_ref().unwrap()), ("infomap", self.infomap.as_ref().unwrap())] {
            for c in community_profiles(p, aligned)?.into_iter().filter(|c| c.size >= floor) {
                rows.push(vec![
                    method.to_string(),
                    c.community.to_string(),
                    c.size.to_string(),
                    c.n_left.to_string(),
                    c.n_right.to_string(),
                    opt(c.mean_score),
                    opt(c.shannon),
                ]);
            }
        }
        self.out.csv(
            "profiles.csv",
            &prov,
            &["method", "community", "size", "n_left", "n_right", "mean_score", "shannon"],
            rows,
        )?;
        Ok(())
    }

    fn assortativity(&mut self) -> Result<()> {
        self.ensure_aligned()?;
        let mut g = self.lwcc.clone().unwrap();
        let mut scores = self.aligned.clone().unwrap();
        if self.cfg.drop_media_accounts {
            let media: Vec<&str> = self.follow.as_ref().unwrap().matrix.media().iter().map(String::as_str).collect();
            let (h, map) = g.without_nodes(&media);
            let mut kept = vec![None; h.node_count()];
            for (old, new) in map.iter().enumerate() {
                if let Some(new) = new {
                    kept[*new] = scores[old];
                }
            }
            g = h;
            scores = kept;
        }
        let rep = assortativity_report(&g, &scores, self.cfg.permutations, self.seeds.permutation)?;
        let p = &rep.permutation;
        let warning = p.high_skip_rate().then(|| {
            format!("{} of {} permutation replicates skipped (zero variance)", p.skipped, p.n)
        });
        if let Some(w) = &warning {
            self.warnings.push(w.clone());
        }
        let prov = self
            .prov()
            .with("permutations", self.cfg.permutations)
            .with("permutation_seed", self.seeds.permutation)
            .with("drop_media_accounts", self.cfg.drop_media_accounts);
        self.out.json(
            "assortativity.json",
            &prov,
            json!({
                "rho": rep.rho,
                "n_dyads": rep.n_dyads,
                "perm": { "n": p.n, "mean": p.mean, "sd": p.sd, "skipped": p.skipped },
                "z": p.z,
                "r": rep.r,
                "e": rep.mixing.e,
                "a": rep.mixing.a,
                "b": rep.mixing.b,
                "warning": warning,
            }),
        )?;
        Ok(())
    }

    fn text(&mut self) -> Result<()> {
        let Some(path) = self.cfg.tweets.clone() else {
            return Err(Error::Config("no tweets file configured".into()));
        };
        self.inputs.push(read_hashed("tweets", &path)?);
        let tweets = formats::parse_tweets(&path)?;
        self.ensure_scores()?;
        let score_of: BTreeMap<String, f64> = self
            .scores
            .as_ref()
            .unwrap()
            .iter()
            .map(|(a, s, _)| (a.to_string(), s))
            .collect();
        let lookup = |a: &str| score_of.get(a).copied();
        let stop = StopWords::with_extras(&self.cfg.stopword_extras);
        let prov = self
            .prov()
            .with("top_k", self.cfg.top_k)
            .with("stopword_extras", self.cfg.stopword_extras.join(";"))
            .with("hashtag_exclude", &self.cfg.hashtag_exclude);

        let mut summary = serde_json::Map::new();
        let corpora: Vec<(String, Vec<TweetRecord>)> = std::iter::once(Ok((String::from("all"), tweets.clone())))
            .chain(
                self.cfg
                    .keywords
                    .iter()
                    .map(|k| text::keyword_subset(&tweets, k).map(|sub| (k.clone(), sub))),
            )
            .collect::<std::result::Result<_, _>>()?;
        let mut top_rows = Vec::new();
        for (i, (label, corpus)) in corpora.iter().enumerate() {
            let table = text::word_counts_by_class(corpus, lookup, &stop);
            for class in [Class::Left, Class::Right] {
                for (rank, (tok, c)) in table.top_k(class, self.cfg.top_k).into_iter().enumerate() {
                    top_rows.push(vec![label.clone(), class.as_str().to_string(), (rank + 1).to_string(), tok, c.to_string()]);
                }
            }
            let chi_name = if i == 0 { String::from("chi_square.csv") } else { format!("chi_square_{}.csv", file_token(label)) };
            let chi = match text::chi_square(&table) {
                Ok(chi) => Some(chi),
                // Keyword subsets may lack one side; the full corpus may not.
                Err(e) if i > 0 => {
                    self.warnings.push(format!("keyword `{label}`: {e}"));
                    None
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(chi) = &chi {
                let rows = chi.rows.iter().map(|r| {
                    vec![r.token.clone(), r.f_left.to_string(), r.f_right.to_string(), num(r.chi2)]
                });
                self.out.csv(&chi_name, &prov, &["token", "left_count", "right_count", "chi2"], rows)?;
            }
            summary.insert(label.clone(), corpus_summary(corpus, &table, chi.as_ref().map(|c| &c.skipped), lookup));
        }
        self.out
            .csv("words_top.csv", &prov, &["corpus", "class", "rank", "token", "count"], top_rows)?;

        self.ensure_partitions()?;
        let g = self.lwcc.as_ref().unwrap();
        let lv = self.louvain.as_ref().unwrap();
        let community_of = |a: &str| g.index_of(a).map(|i| lv.community(i));
        let tags = text::hashtag_top_per_community(&tweets, community_of, &self.cfg.hashtag_exclude);
        let rows = tags
            .into_iter()
            .map(|(c, (tag, n))| vec![c.to_string(), tag, n.to_string()]);
        let tag_prov = prov.clone().with("louvain_seed", self.seeds.louvain);
        self.out.csv("hashtags.csv", &tag_prov, &["community", "hashtag", "count"], rows)?;
        self.out.json("text.json", &prov, Value::Object(summary))?;
        Ok(())
    }
}

fn file_token(label: &str) -> String {
    label
        .chars()
        .map(|c| match c {
            '#' => 'H',
            '@' => 'A',
            c if c.is_ascii_alphanumeric() || c == '_' => c,
            _ => '-',
        })
        .collect()
}

fn corpus_summary<F: Fn(&str) -> Option<f64>>(
    corpus: &[TweetRecord],
    table: &WordCountTable,
    skipped: Option<&Vec<String>>,
    score_of: F,
) -> Value {
    let unique = |tweets: &[TweetRecord]| {
        let u = text::unique_fraction(tweets);
        json!({ "total": u.total, "unique": u.unique, "fraction": u.fraction })
    };
    let by_class = |class: Class| -> Vec<TweetRecord> {
        corpus
            .iter()
            .filter(|t| score_of(&t.account).map(Class::of_score) == Some(class))
            .cloned()
            .collect()
    };
    json!({
        "tweets": corpus.len(),
        "excluded_unscored": table.excluded_unscored,
        "excluded_unclassified": table.excluded_unclassified,
        "tokens_left": table.total_left,
        "tokens_right": table.total_right,
        "chi_square_skipped": skipped,
        "unique": unique(corpus),
        "unique_left": unique(&by_class(Class::Left)),
        "unique_right": unique(&by_class(Class::Right)),
    })
}

/// Runs all stages, writing outputs and `manifest.json` under
/// `cfg.out_dir`. On failure the files written so far get a `.partial`
/// suffix, the manifest records the failed stage, and the error names it.
pub fn run_report(cfg: &PipelineConfig) -> Result<Manifest> {
    let mut ctx = Context::new(cfg)?;
    let mut stages = Vec::new();
    let mut failure = None;
    for name in STAGES {
        if name == "text" && cfg.tweets.is_none() {
            stages.push(StageRecord {
                name,
                status: StageStatus::Skipped,
                wall_clock_ms: 0.0,
                outputs: Vec::new(),
                error: None,
            });
            continue;
        }
        let before = ctx.out.written().len();
        let start = Instant::now();
        let result = ctx.run_stage(name);
        let wall_clock_ms = start.elapsed().as_secs_f64() * 1e3;
        let outputs = ctx.out.written()[before..]
            .iter()
            .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .collect();
        let (status, error) = match &result {
            Ok(()) => (StageStatus::Complete, None),
            Err(e) => (StageStatus::Failed, Some(e.to_string())),
        };
        stages.push(StageRecord {
            name,
            status,
            wall_clock_ms,
            outputs,
            error,
        });
        if let Err(e) = result {
            failure = Some((name, e));
            break;
        }
    }
    if failure.is_some() {
        ctx.out.mark_partial()?;
    }
    let manifest = Manifest {
        tool: "polarnet",
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        seeds: ctx.seeds,
        config: cfg.clone(),
        inputs: ctx.inputs.clone(),
        stages,
        warnings: ctx.warnings.clone(),
    };
    let value = serde_json::to_value(&manifest).expect("manifest serializes");
    ctx.out.raw_json("manifest.json", &value)?;
    match failure {
        Some((stage, e)) => Err(Error::Stage {
            stage,
            source: Box::new(e),
        }),
        None => Ok(manifest),
    }
}
