//! Deterministic randomness: one counter-based stream per trial.
//!
//! The contract is `(seed, trial index) -> independent stream`; parallel
//! trials never share generator state, so results are identical regardless of
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Run `trials` independent closures, optionally on a rayon pool with
/// `jobs` threads, preserving trial order in the output.
pub fn run_trials<T: Send>(
    trials: u32,
    jobs: usize,
    f: impl Fn(u32) -> T + Sync + Send,
) -> Vec<T> {
    if jobs <= 1 {
        (0..trials).map(f).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("rayon pool");
        pool.install(|| (0..trials).into_par_iter().map(f).collect())
    }
}
