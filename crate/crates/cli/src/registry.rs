//! Name-keyed experiment registry. Every experiment kind implements
//! [`Experiment`] and registers itself here; CLI subcommands and config files
//! select experiments by name at runtime.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::config::ExperimentConfig;
use crate::records::RunOutput;

/// Runtime context shared by all experiments.
pub struct RunContext {
    /// Trial-level parallelism (1 = serial).
    pub jobs: usize,
    /// Output directory for fixtures and artifacts.
    pub out_dir: PathBuf,
}

pub trait Experiment: Sync + Send {
    /// Registry key; matches the config `kind` tag and the CLI subcommand.
    fn kind(&self) -> &'static str;
    /// One-line description for listings.
    fn describe(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig, ctx: &RunContext) -> anyhow::Result<RunOutput>;
}

pub struct Registry {
    entries: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, exp: Box<dyn Experiment>) {
        let kind = exp.kind();
        if self.entries.insert(kind, exp).is_some() {
            panic!("duplicate experiment kind registered: {kind}");
        }
    }

    /// All built-in experiments.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(crate::experiments::abstract_bound::AbstractBound));
        r.register(Box::new(crate::experiments::antisym_oracle::AntisymOracle));
        r.register(Box::new(crate::experiments::jordan_split::JordanSplit));
        r.register(Box::new(crate::experiments::constants_table::ConstantsTable));
        r.register(Box::new(crate::experiments::schrodinger_bounds::SchrodingerBounds));
        r.register(Box::new(crate::experiments::accumulation_sweep::AccumulationSweep));
        r
    }

    pub fn get(&self, kind: &str) -> Option<&dyn Experiment> {
        self.entries.get(kind).map(|b| b.as_ref())
    }

    pub fn kinds(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.entries.values().map(|e| (e.kind(), e.describe()))
    }

    /// Dispatch a config through the registry.
    pub fn run(&self, cfg: &ExperimentConfig, ctx: &RunContext) -> anyhow::Result<RunOutput> {
        let kind = cfg.kind_name();
        let exp = self
            .get(kind)
            .ok_or_else(|| anyhow::anyhow!("unknown experiment kind: {kind}"))?;
        exp.run(cfg, ctx)
    }
}
