//! Randomized verification of the abstract half-plane counting bound, with
//! and without the extra bounded perturbation.
//!
//! The hard check is the clamped-convention bound (the theorem as stated: the
//! partial sum padded with the compact-operator essential value 0). The raw
//! partial sum is computed alongside it; raw violations are possible when the
//! count reaches the full dimension, so they are counted and archived as
//! open-question fixtures instead of failing the run.

use bscount_core::antisym::Convention;
use bscount_core::bsbound::{verify_counting_bound, BoundReport, HalfPlane, PerturbedPair};
use rand::Rng;
use serde::Serialize;

use crate::config::{AbstractBoundParams, ExperimentConfig, ExperimentKind, KMode};
use crate::records::{config_digest, write_fixture, RunOutput};
use crate::registry::{Experiment, RunContext};
use crate::replay::Fixture;
use crate::rng::{run_trials, trial_rng};

/// Trial record stream schema: one line per trial. The margin fields refer to
/// the clamped-convention bound, the one under verification.
#[derive(Serialize)]
struct TrialRecord {
    seed: u64,
    trial: u32,
    dim: usize,
    alpha: f64,
    eps: f64,
    n_count: usize,
    partial_sum: f64,
    margin: f64,
    holds: bool,
}

struct TrialOutcome {
    record: TrialRecord,
    raw_holds: bool,
    boundary_flagged: usize,
    /// Hard failure of the verified (clamped) bound.
    failure: Option<Box<Fixture>>,
    /// Raw-convention violation, archived as open-question data.
    raw_violation: Option<Box<Fixture>>,
}

fn run_trial(seed: u64, trial: u32, p: &AbstractBoundParams) -> anyhow::Result<TrialOutcome> {
    let mut rng = trial_rng(seed, trial as u64);
    let dim = rng.gen_range(p.dim_min..=p.dim_max);
    let sigma = p.sigmas[rng.gen_range(0..p.sigmas.len())];
    let alpha = p.alphas[rng.gen_range(0..p.alphas.len())];
    let (lo, hi) = p.eps_log_range;
    let eps = (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp();

    let g = super::gaussian_complex(&mut rng, dim);
    let h0 = g.adjoint().matmul(&g)?;
    let v = super::gaussian_real(&mut rng, dim)
        .add(&super::gaussian_real(&mut rng, dim).scale(num_complex::Complex64::new(0.0, 1.0)))?
        .scale_re(sigma);
    let with_k = match p.k_mode {
        KMode::None => false,
        KMode::Always => true,
        KMode::Alternate => trial % 2 == 1,
    };
    let k = if with_k {
        Some(super::gaussian_complex(&mut rng, dim).scale_re(p.k_sigma))
    } else {
        None
    };
    let pair = PerturbedPair::new(h0, v, k)?;
    let hp = HalfPlane::new(alpha, eps)?;

    let clamp: BoundReport = verify_counting_bound(&pair, &hp, Convention::ClampAtZero)?;
    let raw = verify_counting_bound(&pair, &hp, Convention::Raw)?;

    let failure = (!clamp.holds).then(|| {
        Box::new(Fixture::AbstractBoundTrial {
            pair: pair.clone(),
            alpha,
            eps,
            convention: Convention::ClampAtZero,
            archived_pass: false,
            archived_margin: clamp.margin,
        })
    });
    let raw_violation = (!raw.holds).then(|| {
        Box::new(Fixture::AbstractBoundTrial {
            pair: pair.clone(),
            alpha,
            eps,
            convention: Convention::Raw,
            archived_pass: false,
            archived_margin: raw.margin,
        })
    });

    Ok(TrialOutcome {
        record: TrialRecord {
            seed,
            trial,
            dim,
            alpha,
            eps,
            n_count: clamp.n_count,
            partial_sum: clamp.partial_sum,
            margin: clamp.margin,
            holds: clamp.holds,
        },
        raw_holds: raw.holds,
        boundary_flagged: clamp.boundary_flagged,
        failure,
        raw_violation,
    })
}

pub struct AbstractBound;

impl Experiment for AbstractBound {
    fn kind(&self) -> &'static str {
        "abstract_bound"
    }

    fn describe(&self) -> &'static str {
        "randomized verification of the half-plane eigenvalue counting bound"
    }

    fn run(&self, cfg: &ExperimentConfig, ctx: &RunContext) -> anyhow::Result<RunOutput> {
        let ExperimentKind::AbstractBound(params) = &cfg.kind else {
            anyhow::bail!("config kind does not match experiment abstract_bound");
        };
        if cfg.trials == 0 {
            anyhow::bail!("trials must be >= 1");
        }
        let mut out = RunOutput::new("abstract_bound", config_digest(cfg));
        let outcomes = run_trials(cfg.trials, ctx.jobs, |t| run_trial(cfg.seed, t, params));

        let mut violations = 0usize;
        let mut raw_violations = 0usize;
        let mut boundary_total = 0usize;
        let mut worst_margin = f64::INFINITY;
        let mut fixture_idx = 0usize;
        let mut raw_fixture_idx = 0usize;
        for outcome in outcomes {
            let outcome = outcome?;
            worst_margin = worst_margin.min(outcome.record.margin);
            boundary_total += outcome.boundary_flagged;
            if !outcome.record.holds {
                violations += 1;
            }
            if !outcome.raw_holds {
                raw_violations += 1;
            }
            if let Some(fixture) = outcome.failure {
                let path = write_fixture(
                    &ctx.out_dir,
                    &format!("abstract-bound-{fixture_idx:05}"),
                    fixture.as_ref(),
                )?;
                out.fixtures.push(path);
                fixture_idx += 1;
            }
            if let Some(fixture) = outcome.raw_violation {
                let path = write_fixture(
                    &ctx.out_dir,
                    &format!("raw-convention-open-question-{raw_fixture_idx:05}"),
                    fixture.as_ref(),
                )?;
                out.fixtures.push(path);
                raw_fixture_idx += 1;
            }
            out.push_record(&outcome.record);
        }

        out.check(
            "counting_bound_no_violations",
            violations == 0,
            format!(
                "{violations} violations in {} trials; worst margin {worst_margin:.3e}",
                cfg.trials
            ),
        );
        out.check(
            "raw_convention_violations_archived",
            true,
            format!(
                "{raw_violations} raw-convention violations archived (the raw partial sum \
                 can drop below the count when it reaches the full dimension)"
            ),
        );
        out.check(
            "boundary_flags_reported",
            true,
            format!("{boundary_total} eigenvalues flagged within 1e-12 of the boundary"),
        );
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    #[test]
    fn small_ensemble_runs_clean() {
        let cfg = ExperimentConfig {
            kind: ExperimentKind::AbstractBound(AbstractBoundParams::default()),
            seed: 20260810,
            trials: 40,
            out: None,
        };
        let ctx = RunContext {
            jobs: 1,
            out_dir: std::env::temp_dir().join("bscount-test-abstract"),
        };
        let out = AbstractBound.run(&cfg, &ctx).unwrap();
        assert!(out.pass(), "{:?}", out.failed_checks().collect::<Vec<_>>());
        assert_eq!(out.stream.len(), 40);
    }

    #[test]
    fn stream_is_parallelism_invariant() {
        let cfg = ExperimentConfig {
            kind: ExperimentKind::AbstractBound(AbstractBoundParams::default()),
            seed: 7,
            trials: 24,
            out: None,
        };
        let dir = std::env::temp_dir().join("bscount-test-abstract-par");
        let serial = AbstractBound
            .run(&cfg, &RunContext { jobs: 1, out_dir: dir.clone() })
            .unwrap();
        let parallel = AbstractBound
            .run(&cfg, &RunContext { jobs: 3, out_dir: dir })
            .unwrap();
        assert_eq!(serial.stream, parallel.stream);
    }

    #[test]
    fn raw_violation_is_archived_without_failing() {
        // the seed/trial window around the known raw-convention counterexample
        let cfg = ExperimentConfig {
            kind: ExperimentKind::AbstractBound(AbstractBoundParams::default()),
            seed: 1,
            trials: 5000,
            out: None,
        };
        let dir = std::env::temp_dir().join("bscount-test-abstract-rawviol");
        let _ = std::fs::remove_dir_all(&dir);
        let out = AbstractBound
            .run(&cfg, &RunContext { jobs: 2, out_dir: dir })
            .unwrap();
        // clamped bound clean, raw violation archived as a fixture
        assert!(out.pass(), "{:?}", out.failed_checks().collect::<Vec<_>>());
        assert!(out
            .fixtures
            .iter()
            .any(|p| p.to_string_lossy().contains("raw-convention-open-question")));
    }
}
