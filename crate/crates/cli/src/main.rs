use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};

use bscount_cli::config::{
    AbstractBoundParams, AntisymOracleParams, ConstantsTableParams, ExperimentConfig,
    ExperimentKind, JordanParams, SchrodingerParams, SweepParams,
};
use bscount_cli::records::RunOutput;
use bscount_cli::registry::{Registry, RunContext};
use bscount_cli::{DEFAULT_OUT_DIR, OUT_DIR_ENV};

/// Numerical verification of eigenvalue-counting bounds for non-selfadjoint
/// operators: Birman-Schwinger ensembles, antisymmetric-lift oracles, Jordan
/// splitting, spectral constants and discretized complex-potential operators.
#[derive(Parser)]
#[command(name = "bscount", version, about)]
struct Cli {
    /// Seed for all random draws; every record is a pure function of
    /// (seed, trial index).
    #[arg(long, global = true, default_value_t = 20260810)]
    seed: u64,

    /// Number of randomized trials (where the experiment draws any).
    #[arg(long, global = true)]
    trials: Option<u32>,

    /// JSON experiment config; overrides the built-in defaults. Its `kind`
    /// must match the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for record streams, fixtures and plot data.
    /// Defaults to $BSCOUNT_OUT, then ./bscount-out.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Trial-level parallelism. Aggregation is order-independent, so results
    /// are byte-identical for any value.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized verification of the abstract half-plane counting bound.
    VerifyAbstract,
    /// Antisymmetric-lift identities against the full-tensor oracle.
    VerifyAntisym,
    /// Closed-form Jordan-chain splitting against numerical spectra.
    VerifyJordan,
    /// Closed-form constants table with independent numerical oracles.
    Constants,
    /// CLR/moment bound validity on discretized operators.
    Schrodinger,
    /// Strong-coupling accumulation trend sweep.
    Sweep,
    /// Re-execute an archived failure fixture and compare verdicts.
    Replay {
        /// Path to a fixture JSON written by a previous run.
        fixture: PathBuf,
    },
    /// List the registered experiment kinds.
    List,
}

fn default_trials(kind: &str) -> u32 {
    match kind {
        "abstract_bound" => 1000,
        "antisym_oracle" => 50,
        "jordan" => 25,
        _ => 1,
    }
}

fn load_or_default(cli: &Cli, kind: ExperimentKind) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let cfg: ExperimentConfig = serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?;
            if cfg.kind_name() != kind.name() {
                anyhow::bail!(
                    "config kind `{}` does not match subcommand `{}`",
                    cfg.kind_name(),
                    kind.name()
                );
            }
            cfg
        }
        None => ExperimentConfig {
            kind,
            seed: cli.seed,
            trials: 0,
            out: None,
        },
    };
    if cli.config.is_none() {
        cfg.trials = default_trials(cfg.kind_name());
    }
    // explicit flags win over both defaults and config-file values
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    cfg.seed = cli.seed;
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &ExperimentConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.out.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn execute(cli: &Cli, kind: ExperimentKind) -> anyhow::Result<(RunOutput, PathBuf, u128)> {
    let cfg = load_or_default(cli, kind)?;
    let dir = out_dir(cli, &cfg);
    let ctx = RunContext {
        jobs: cli.jobs.max(1),
        out_dir: dir.clone(),
    };
    let registry = Registry::builtin();
    let start = Instant::now();
    let out = registry.run(&cfg, &ctx)?;
    let elapsed = start.elapsed().as_millis();
    out.write_to(&dir)?;
    Ok((out, dir, elapsed))
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let kind = match &cli.command {
        Command::VerifyAbstract => ExperimentKind::AbstractBound(AbstractBoundParams::default()),
        Command::VerifyAntisym => ExperimentKind::AntisymOracle(AntisymOracleParams::default()),
        Command::VerifyJordan => ExperimentKind::Jordan(JordanParams::default()),
        Command::Constants => ExperimentKind::ConstantsTable(ConstantsTableParams::default()),
        Command::Schrodinger => ExperimentKind::Schrodinger(SchrodingerParams::default()),
        Command::Sweep => ExperimentKind::AccumulationSweep(SweepParams::default()),
        Command::Replay { fixture } => {
            let outcome = bscount_cli::replay::replay_file(fixture)?;
            println!(
                "replay {}: archived {} | replayed {} | {}",
                outcome.check,
                if outcome.archived_pass { "PASS" } else { "FAIL" },
                if outcome.replayed_pass { "PASS" } else { "FAIL" },
                outcome.detail
            );
            if outcome.reproduced {
                println!("verdict reproduced");
                return Ok(());
            }
            println!("verdict NOT reproduced");
            std::process::exit(1);
        }
        Command::List => {
            for (kind, describe) in Registry::builtin().kinds() {
                println!("{kind:20} {describe}");
            }
            return Ok(());
        }
    };
    let (out, dir, elapsed) = execute(&cli, kind)?;
    out.print_summary(&dir, elapsed);
    if !out.pass() {
        std::process::exit(1);
    }
    Ok(())
}
