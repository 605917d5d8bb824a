//! Verification of the closed-form eigenvalue splitting of Jordan structures
//! under the corner perturbation, across a delta grid, with semisimplicity
//! and delta-continuity checks.

use bscount_core::jordan::{
    build_jordan_matrix, build_k0, min_cost_matching, split_eigenvalues_closed_form,
    splitting_match_error, verify_semisimple, JordanBlock, JordanStructure,
};
use bscount_core::linalg::{default_cluster_tol, general_spectrum};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind, JordanParams};
use crate::records::{config_digest, write_fixture, RunOutput};
use crate::registry::{Experiment, RunContext};
use crate::replay::Fixture;
use crate::rng::{run_trials, trial_rng};

#[derive(Serialize)]
struct SplitRecord {
    trial: u32,
    structure: JordanStructure,
    delta: f64,
    match_error: f64,
    tolerance: f64,
    semisimple_expected: bool,
    semisimple_ok: bool,
    pass: bool,
}

fn random_structure(rng: &mut impl Rng, p: &JordanParams) -> JordanStructure {
    let blocks = (0..rng.gen_range(1..=p.max_blocks))
        .map(|_| JordanBlock {
            lambda: Complex64::new(
                (rng.gen::<f64>() * 2.0 - 1.0) * p.lambda_radius,
                (rng.gen::<f64>() * 2.0 - 1.0) * p.lambda_radius,
            ),
            size: rng.gen_range(1..=p.max_block_size),
        })
        .collect();
    JordanStructure::new(blocks).expect("non-empty structure")
}

struct TrialOut {
    records: Vec<SplitRecord>,
    continuity_ok: bool,
    failures: Vec<Fixture>,
}

fn run_trial(seed: u64, trial: u32, p: &JordanParams) -> anyhow::Result<TrialOut> {
    let mut rng = trial_rng(seed, trial as u64);
    let s = random_structure(&mut rng, p);
    let scale = 1.0 + s.max_abs_lambda();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut unperturbed_distances = Vec::new();

    for &delta in &p.deltas {
        let tolerance = 1e-8 * (scale + delta.powf(1.0 / s.max_block_size() as f64));
        let match_error = splitting_match_error(&s, delta)?;

        // semisimplicity whenever the predicted split points are separated by
        // more than 10 * cluster_tol
        let perturbed = build_jordan_matrix(&s).add(&build_k0(&s).scale_re(delta))?;
        let tol = default_cluster_tol(&perturbed);
        let predicted = split_eigenvalues_closed_form(&s, delta)?;
        let mut min_sep = f64::INFINITY;
        for i in 0..predicted.len() {
            for j in (i + 1)..predicted.len() {
                min_sep = min_sep.min((predicted[i] - predicted[j]).norm());
            }
        }
        let semisimple_expected = min_sep > 10.0 * tol;
        let semisimple_ok = if semisimple_expected {
            verify_semisimple(&perturbed, Some(tol))?.all_semisimple
        } else {
            true
        };

        let pass = match_error <= tolerance && semisimple_ok;
        if !pass {
            failures.push(Fixture::JordanSplit {
                structure: s.clone(),
                delta,
                tolerance,
                archived_pass: false,
                archived_error: match_error,
            });
        }
        records.push(SplitRecord {
            trial,
            structure: s.clone(),
            delta,
            match_error,
            tolerance,
            semisimple_expected,
            semisimple_ok,
            pass,
        });

        // matching distance to the unperturbed spectrum, for the continuity
        // check below (deltas are listed in decreasing order)
        let spec = general_spectrum(&perturbed, 1e-12 * scale)?;
        let mut computed = Vec::new();
        for it in &spec.items {
            for _ in 0..it.alg_mult {
                computed.push(it.lambda);
            }
        }
        let mut original = Vec::new();
        for b in &s.blocks {
            for _ in 0..b.size {
                original.push(b.lambda);
            }
        }
        let n = original.len();
        let costs: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (original[i] - computed[j]).norm()).collect())
            .collect();
        let (asg, _) = min_cost_matching(&costs)?;
        unperturbed_distances.push((0..n).map(|i| costs[i][asg[i]]).fold(0.0, f64::max));
    }

    // eigenvalues converge to the unperturbed ones as delta decreases
    let continuity_ok = unperturbed_distances
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-12 * scale);

    Ok(TrialOut {
        records,
        continuity_ok,
        failures,
    })
}

pub struct JordanSplit;

impl Experiment for JordanSplit {
    fn kind(&self) -> &'static str {
        "jordan"
    }

    fn describe(&self) -> &'static str {
        "closed-form Jordan-chain splitting against numerical spectra"
    }

    fn run(&self, cfg: &ExperimentConfig, ctx: &RunContext) -> anyhow::Result<RunOutput> {
        let ExperimentKind::Jordan(params) = &cfg.kind else {
            anyhow::bail!("config kind does not match experiment jordan");
        };
        if params.deltas.windows(2).any(|w| w[1] >= w[0]) {
            anyhow::bail!("jordan deltas must be strictly decreasing");
        }
        if cfg.trials == 0 {
            anyhow::bail!("trials must be >= 1");
        }
        let mut out = RunOutput::new("jordan", config_digest(cfg));
        let trials = run_trials(cfg.trials, ctx.jobs, |t| run_trial(cfg.seed, t, params));

        let mut split_failures = 0usize;
        let mut continuity_failures = 0usize;
        let mut worst: f64 = 0.0;
        let mut fixture_idx = 0usize;
        for t in trials {
            let t = t?;
            for rec in &t.records {
                if !rec.pass {
                    split_failures += 1;
                }
                worst = worst.max(rec.match_error / rec.tolerance);
            }
            if !t.continuity_ok {
                continuity_failures += 1;
            }
            for f in &t.failures {
                let path = write_fixture(&ctx.out_dir, &format!("jordan-{fixture_idx:05}"), f)?;
                out.fixtures.push(path);
                fixture_idx += 1;
            }
            for rec in t.records {
                out.push_record(&rec);
            }
        }
        out.check(
            "closed_form_matches_spectrum",
            split_failures == 0,
            format!("{split_failures} failing (trial, delta) pairs; worst error/tol {worst:.3}"),
        );
        out.check(
            "delta_continuity",
            continuity_failures == 0,
            format!("{continuity_failures} trials with non-shrinking matching distance"),
        );
        Ok(out)
    }
}
