use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polarnet::pipeline::{run_report, Context};
use polarnet::synth::{generate, write_bundle, SyntheticSpec};
use polarnet::{Error, PipelineConfig, Result};
use polarnet_core::centrality::DEFAULT_HUB_THRESHOLD;
use polarnet_core::community::DEFAULT_GAMMAS;

#[derive(Parser)]
#[command(name = "polarnet", version, about = "Retweet-network polarization analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output directory (overridden by POLARNET_OUT_DIR).
    #[arg(long, default_value = "polarnet-out")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Build the retweet graph and its largest weakly connected component.
    Ingest {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        followership: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Media-followership PCA scores.
    Score {
        #[arg(long)]
        followership: PathBuf,
        /// Medium whose loading is made positive.
        #[arg(long)]
        anchor: String,
        #[command(flatten)]
        common: Common,
    },
    /// Louvain and map-equation communities plus the resolution sweep.
    Communities {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long, requires = "anchor")]
        followership: Option<PathBuf>,
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GAMMAS.to_vec())]
        gamma: Vec<f64>,
        #[arg(long, default_value_t = 0.15)]
        tau: f64,
        #[arg(long)]
        size_floor: Option<usize>,
        /// Also write community profiles (needs scores).
        #[arg(long, requires = "followership")]
        profiles: bool,
        #[command(flatten)]
        common: Common,
    },
    /// PageRank, HITS and degree rankings.
    Centrality {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long, requires = "anchor")]
        followership: Option<PathBuf>,
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long, default_value_t = 25)]
        top_k: usize,
        #[arg(long, default_value_t = DEFAULT_HUB_THRESHOLD)]
        hub_threshold: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Dyad correlation, permutation test and assortativity coefficient.
    Assort {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        followership: PathBuf,
        #[arg(long)]
        anchor: String,
        #[arg(long, default_value_t = 100_000)]
        permutations: usize,
        #[arg(long)]
        drop_media_accounts: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Left/Right word counts, chi-square rankings and hashtags.
    Text {
        #[arg(long)]
        tweets: PathBuf,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        followership: PathBuf,
        #[arg(long)]
        anchor: String,
        /// Restrict to tweets containing this token (repeatable).
        #[arg(long)]
        keyword: Vec<String>,
        #[arg(long, default_value_t = 25)]
        top_k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Write a seeded two-bloc synthetic bundle.
    Synth {
        #[arg(long, default_value_t = 500)]
        n_left: usize,
        #[arg(long, default_value_t = 500)]
        n_right: usize,
        #[arg(long, default_value_t = 0.02)]
        p_in: f64,
        #[arg(long, default_value_t = 0.001)]
        p_out: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Run every stage from a config file.
    Report {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's out_dir (POLARNET_OUT_DIR still wins).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config(edges: Option<PathBuf>, followership: Option<PathBuf>, anchor: Option<String>, common: &Common) -> PipelineConfig {
    let mut cfg = PipelineConfig::new(edges.unwrap_or_default(), followership.unwrap_or_default(), anchor.unwrap_or_else(|| "-".into()));
    cfg.seed = common.seed;
    cfg.out_dir = common.out.clone();
    cfg.with_env_override()
}

fn run_stages(cfg: &PipelineConfig, stages: &[&str]) -> Result<()> {
    let mut ctx = Context::new(cfg)?;
    for stage in stages {
        ctx.run_stage(stage)?;
    }
    for w in &ctx.warnings {
        eprintln!("warning: {w}");
    }
    for p in ctx.out.written() {
        println!("{}", p.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { edges, followership, common } => {
            let cfg = config(Some(edges), followership, None, &common);
            run_stages(&cfg, &["ingest", "lwcc"])
        }
        Command::Score { followership, anchor, common } => {
            let cfg = config(None, Some(followership), Some(anchor), &common);
            run_stages(&cfg, &["score"])
        }
        Command::Communities { edges, followership, anchor, gamma, tau, size_floor, profiles, common } => {
            let mut cfg = config(Some(edges), followership, anchor, &common);
            cfg.gammas = gamma;
            cfg.tau = tau;
            cfg.size_floor = size_floor;
            let stages: &[&str] = if profiles { &["communities", "profiles"] } else { &["communities"] };
            run_stages(&cfg, stages)
        }
        Command::Centrality { edges, followership, anchor, top_k, hub_threshold, common } => {
            let mut cfg = config(Some(edges), followership, anchor, &common);
            cfg.top_k = top_k;
            cfg.hub_threshold = hub_threshold;
            run_stages(&cfg, &["centrality"])
        }
        Command::Assort { edges, followership, anchor, permutations, drop_media_accounts, common } => {
            let mut cfg = config(Some(edges), Some(followership), Some(anchor), &common);
            cfg.permutations = permutations;
            cfg.drop_media_accounts = drop_media_accounts;
            run_stages(&cfg, &["assortativity"])
        }
        Command::Text { tweets, edges, followership, anchor, keyword, top_k, common } => {
            let mut cfg = config(Some(edges), Some(followership), Some(anchor), &common);
            cfg.tweets = Some(tweets);
            cfg.keywords = keyword;
            cfg.top_k = top_k;
            run_stages(&cfg, &["text"])
        }
        Command::Synth { n_left, n_right, p_in, p_out, common } => {
            let spec = SyntheticSpec::new(n_left, n_right, p_in, p_out, common.seed);
            let data = generate(&spec)?;
            let out = config(None, None, None, &common).out_dir;
            let paths = write_bundle(&data, &out)?;
            for p in [&paths.edges, &paths.followership, &paths.tweets] {
                println!("{}", p.display());
            }
            println!("anchor: {}", spec.anchor());
            Ok(())
        }
        Command::Report { config, seed, out } => {
            let mut cfg = PipelineConfig::from_file(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            let cfg = cfg.with_env_override();
            let manifest = run_report(&cfg)?;
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", cfg.out_dir.join("manifest.json").display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            // Exit status 2 is reserved for numerical non-convergence.
            return if usage_error { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polarnet: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}

fn exit_status(e: &Error) -> u8 {
    e.exit_code() as u8
}
