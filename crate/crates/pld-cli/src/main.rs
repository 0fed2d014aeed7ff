//! Command-line harness: generate instances, match graph pairs, run
//! benchmark sweeps, and estimate model parameters from real data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pld_core::bench::{self, Algorithm, RunConfig};
use pld_core::estimation::{self, derive_practical_params};
use pld_core::gen::{self, load_pairs};
use pld_core::graph::Graph;
use pld_core::matchers::{validate_matching, Matching};
use pld_core::slicing::{feasibility_report, PldParams};
use pld_core::Error;

#[derive(Parser)]
#[command(
    name = "pld",
    about = "Seeded matching of correlated power-law graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance and write it to a directory.
    Generate {
        /// JSON config with at least a "model" section.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (g1.el, g2.el, seeds.txt, instance.json).
        #[arg(long)]
        out: PathBuf,
        /// Also export the hidden correspondence for scoring.
        #[arg(long)]
        with_truth: bool,
        /// Overrides the config's master seed.
        #[arg(long)]
        master_seed: Option<u64>,
    },
    /// Match two graphs from a set of seed pairs.
    Match(MatchArgs),
    /// Run a benchmark sweep and write CSV results.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG plot of median accuracy per sweep value.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Zero the wall-time column so identical configs emit identical bytes.
        #[arg(long)]
        no_timing: bool,
        /// Overrides the config's repetition count.
        #[arg(long)]
        repetitions: Option<u32>,
        /// Overrides the config's master seed.
        #[arg(long)]
        master_seed: Option<u64>,
    },
    /// Estimate model parameters from a graph pair and its seeds.
    Estimate {
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
    },
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    g1: PathBuf,
    #[arg(long)]
    g2: PathBuf,
    #[arg(long)]
    seeds: PathBuf,
    /// Ground truth ("u v" lines) for scoring, when known.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Optional JSON config; its "model"/"algo" sections override estimation.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path for the matching ("u v stage" lines).
    #[arg(long)]
    out: PathBuf,
    /// Which matcher to run.
    #[arg(long, default_value = "pld")]
    algorithm: String,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Parameter(_) => 2,
        Error::Io(_) | Error::Parse { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn load_config(path: &PathBuf) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    RunConfig::from_json(&text)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate { config, out, with_truth, master_seed } => {
            let cfg = load_config(&config)?;
            let model = cfg
                .model
                .as_ref()
                .ok_or_else(|| Error::Config("generate needs a model section".into()))?
                .to_params();
            let seed = master_seed.unwrap_or(cfg.master_seed);
            let inst = gen::generate_instance(&model, seed)?;
            gen::export_instance(&inst, &model, seed, &out, with_truth)?;
            println!(
                "{}",
                serde_json::json!({
                    "out": out.display().to_string(),
                    "n1": inst.g1.vertex_count(),
                    "n2": inst.g2.vertex_count(),
                    "edges_g1": inst.g1.edge_count(),
                    "edges_g2": inst.g2.edge_count(),
                    "common_vertices": inst.truth.len(),
                    "seeds": inst.seeds.len(),
                })
            );
            Ok(())
        }
        Command::Match(args) => run_match(args),
        Command::Benchmark { config, out, plot, no_timing, repetitions, master_seed } => {
            let mut cfg = load_config(&config)?;
            if let Some(reps) = repetitions {
                cfg.repetitions = reps;
            }
            if let Some(seed) = master_seed {
                cfg.master_seed = seed;
            }
            let rows = bench::run_benchmark(&cfg, None)?;
            bench::write_csv(&rows, &out, no_timing)?;
            if let Some(plot_path) = plot {
                bench::write_plot(&rows, plot_path)?;
            }
            println!("{} rows -> {}", rows.len(), out.display());
            Ok(())
        }
        Command::Estimate { g1, g2, seeds } => {
            let g1 = Graph::load_edge_list(g1)?;
            let g2 = Graph::load_edge_list(g2)?;
            let seeds = load_pairs(seeds)?;
            let est = estimation::estimate_all(&g1, &g2, &seeds, Some(6))?;
            println!("{}", serde_json::to_string_pretty(&est)?);
            Ok(())
        }
    }
}

fn run_match(args: MatchArgs) -> Result<(), Error> {
    let g1 = Graph::load_edge_list(&args.g1)?;
    let g2 = Graph::load_edge_list(&args.g2)?;
    let seeds = load_pairs(&args.seeds)?;
    let truth = args.truth.as_ref().map(load_pairs).transpose()?;
    let cfg = args.config.as_ref().map(load_config).transpose()?;

    let algo_cfg = cfg.as_ref().map(|c| c.algo.clone()).unwrap_or_default();
    let mut warnings = Vec::new();
    let mut params: PldParams = match cfg.as_ref().and_then(|c| c.model.as_ref()) {
        // Trusted model parameters straight from the config.
        Some(model) => {
            let m = model.to_params();
            let theta = estimation::estimate_theta(
                seeds.len(),
                g1.vertex_count().min(g2.vertex_count()),
            );
            let mut p = PldParams::new(
                algo_cfg.d_hops,
                g1.vertex_count().min(g2.vertex_count()),
                m.beta,
                m.wbar,
                m.s,
                theta,
            );
            p.simplified_tau1 = true;
            p
        }
        // Real-graph mode: estimate everything first.
        None => {
            let est = estimation::estimate_all(&g1, &g2, &seeds, Some(6))?;
            let (p, w) = derive_practical_params(
                &est,
                algo_cfg.d_hops,
                g1.vertex_count(),
                g2.vertex_count(),
                est.theta_hat,
            );
            warnings = w;
            eprintln!("estimates: {}", serde_json::to_string(&est)?);
            p
        }
    };
    if let Some(gamma) = algo_cfg.gamma {
        params.gamma = gamma;
    }
    params.r_pgm = algo_cfg.r_pgm;
    params.threshold_scale = algo_cfg.threshold_scale;
    params.slice_floor_degree = algo_cfg.slice_floor_degree;
    params.q0_threshold = algo_cfg.q0_threshold;
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let algorithm = match args.algorithm.as_str() {
        "pld" => Algorithm::Pld,
        "one_hop" => Algorithm::OneHop,
        "pgm" => Algorithm::Pgm,
        "dhop_only" => Algorithm::DhopOnly,
        other => return Err(Error::Config(format!("unknown algorithm {other:?}"))),
    };
    let matching: Matching = match algorithm {
        Algorithm::Pld => pld_core::matchers::pld(&g1, &g2, &seeds, &params)?,
        Algorithm::OneHop => {
            pld_core::matchers::baseline_one_hop(&g1, &g2, &seeds, algo_cfg.baseline_tau)
        }
        Algorithm::Pgm => pld_core::matchers::baseline_pgm(&g1, &g2, &seeds, params.r_pgm),
        Algorithm::DhopOnly => pld_core::matchers::baseline_dhop_only(
            &g1,
            &g2,
            &seeds,
            params.d_hops,
            algo_cfg.baseline_tau,
        ),
    };
    validate_matching(&matching, &g1, &g2, &params)?;
    std::fs::write(&args.out, matching.to_text())?;

    let mut summary = serde_json::json!({
        "algorithm": args.algorithm,
        "n_matched": matching.len(),
        "stages": matching.stage_counts(),
        "feasibility": feasibility_report(&params),
    });
    if let Some(truth) = truth {
        let (accuracy, precision) = bench::score(&matching, &truth)?;
        summary["recall"] = accuracy.into();
        summary["precision"] = precision.into();
    }
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
