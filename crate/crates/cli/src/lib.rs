//! Harness library behind the `bscount` binary: experiment configuration,
//! the name-keyed experiment registry, deterministic seeded trial streams,
//! record emission and failure-fixture replay.

pub mod config;
pub mod experiments;
pub mod records;
pub mod registry;
pub mod replay;
pub mod rng;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BSCOUNT_OUT";

/// Default output directory when neither `--out` nor the environment variable
/// is set.
pub const DEFAULT_OUT_DIR: &str = "bscount-out";
