//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p bscount-cli --test acceptance -- --nocapture` to
//! see the lines; every tolerance is pinned in code.

use std::time::Instant;

use bscount_cli::config::{
    default_schrodinger_cases, AbstractBoundParams, AntisymOracleParams, ConstantsTableParams,
    ExperimentConfig, ExperimentKind, JordanParams, SchrodingerParams,
};
use bscount_cli::registry::{Registry, RunContext};
use bscount_cli::rng::trial_rng;
use bscount_core::constants::layer_cake_check;
use bscount_core::linalg::{Spectrum, SpectrumItem};
use num_complex::Complex64;
use rand::Rng;

fn criterion(n: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {n} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {name}: {detail}");
}

fn run(kind: ExperimentKind, seed: u64, trials: u32, jobs: usize, tag: &str) -> (bool, String) {
    let cfg = ExperimentConfig {
        kind,
        seed,
        trials,
        out: None,
    };
    let ctx = RunContext {
        jobs,
        out_dir: std::env::temp_dir().join(format!("bscount-acceptance-{tag}")),
    };
    let out = Registry::builtin().run(&cfg, &ctx).expect("experiment runs");
    let detail = out
        .checks
        .iter()
        .map(|c| format!("{}={}", c.name, if c.pass { "ok" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join(", ");
    (out.pass(), detail)
}

#[test]
fn criterion_1_abstract_counting_bound() {
    let start = Instant::now();
    let (pass, detail) = run(
        ExperimentKind::AbstractBound(AbstractBoundParams::default()),
        20260810,
        1000,
        1,
        "c1",
    );
    let elapsed = start.elapsed().as_secs_f64();
    let in_budget = elapsed <= 120.0;
    criterion(
        1,
        "abstract counting bound (clamped partial sums), 1000 trials with and without K",
        pass && in_budget,
        &format!("{detail}; {elapsed:.1}s (budget 120s)"),
    );
}

#[test]
fn criterion_2_antisym_lemma_oracle() {
    let (pass, detail) = run(
        ExperimentKind::AntisymOracle(AntisymOracleParams::default()),
        20260810,
        50,
        1,
        "c2",
    );
    criterion(
        2,
        "antisymmetric-lift identities vs full-tensor oracle (N in {2,3}, d in {3..6}, 50 families)",
        pass,
        &detail,
    );
}

#[test]
fn criterion_3_jordan_splitting() {
    let (pass, detail) = run(
        ExperimentKind::Jordan(JordanParams::default()),
        20260810,
        25,
        1,
        "c3",
    );
    criterion(
        3,
        "closed-form Jordan splitting, blocks up to m=5, delta in 1e-6..1e-1",
        pass,
        &detail,
    );
}

#[test]
fn criterion_4_delta_well_sharpness() {
    let start = Instant::now();
    let sharp_case = default_schrodinger_cases()
        .into_iter()
        .find(|c| c.check_delta_sharpness)
        .expect("sharpness case in the default matrix");
    assert_eq!(sharp_case.half_width, 20.0);
    assert_eq!(sharp_case.n, 4000);
    let (pass, detail) = run(
        ExperimentKind::Schrodinger(SchrodingerParams {
            cases: vec![sharp_case],
            allowance: 0.05,
        }),
        20260810,
        1,
        1,
        "c4",
    );
    let elapsed = start.elapsed().as_secs_f64();
    let in_budget = elapsed <= 60.0;
    criterion(
        4,
        "delta-well sharpness: ground within 2% of -1/4, ratio in (0.9, 1.0]",
        pass && in_budget,
        &format!("{detail}; {elapsed:.1}s (budget 60s)"),
    );
}

#[test]
fn criterion_5_constants_reproduction() {
    let (pass, detail) = run(
        ExperimentKind::ConstantsTable(ConstantsTableParams::default()),
        20260810,
        1,
        1,
        "c5",
    );
    criterion(
        5,
        "constants: C(1,1)=1/2 exact, weak norms/KSS to 1e-8, t-opt to 1e-6, identities to 1e-12",
        pass,
        &detail,
    );
}

#[test]
fn criterion_6_layer_cake_identity() {
    let mut rng = trial_rng(20260810, 777);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = 1 + rng.gen_range(0..15);
        let items: Vec<SpectrumItem> = (0..n)
            .map(|_| SpectrumItem {
                lambda: Complex64::new(
                    rng.gen::<f64>() * 10.0 - 6.0,
                    rng.gen::<f64>() * 6.0 - 3.0,
                ),
                alg_mult: 1 + rng.gen_range(0..3),
                geo_mult: 1,
            })
            .collect();
        let spectrum = Spectrum {
            items,
            cluster_tol: 1e-8,
        };
        let gamma = 0.25 + rng.gen::<f64>() * 2.75;
        let alpha = rng.gen::<f64>() * 4.0 - 2.0;
        let r = layer_cake_check(&spectrum, gamma, alpha).expect("valid spectrum");
        worst = worst.max(r.rel_err);
    }
    criterion(
        6,
        "layer-cake identity on 100 random spectra",
        worst <= 1e-12,
        &format!("worst rel err {worst:.3e} (tolerance 1e-12)"),
    );
}

#[test]
fn criterion_7_schrodinger_bound_validity() {
    let start = Instant::now();
    let (pass, detail) = run(
        ExperimentKind::Schrodinger(SchrodingerParams::default()),
        20260810,
        1,
        1,
        "c7",
    );
    let elapsed = start.elapsed().as_secs_f64();
    let in_budget = elapsed <= 600.0;
    criterion(
        7,
        "CLR/moment validity matrix at desk scale (5% discretization allowance)",
        pass && in_budget,
        &format!("{detail}; {elapsed:.1}s (budget 600s)"),
    );
}

#[test]
fn criterion_8_determinism_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_bscount");
    let base = std::env::temp_dir().join("bscount-acceptance-c8");
    let _ = std::fs::remove_dir_all(&base);

    let mut cmd_runs: Vec<(String, Vec<String>)> = Vec::new();
    for (label, args) in [
        ("abstract-j1-a", vec!["verify-abstract", "--trials", "120", "--jobs", "1"]),
        ("abstract-j1-b", vec!["verify-abstract", "--trials", "120", "--jobs", "1"]),
        ("abstract-j2", vec!["verify-abstract", "--trials", "120", "--jobs", "2"]),
        ("jordan-j1", vec!["verify-jordan", "--trials", "8", "--jobs", "1"]),
        ("jordan-j2", vec!["verify-jordan", "--trials", "8", "--jobs", "2"]),
    ] {
        cmd_runs.push((label.to_string(), args.iter().map(|s| s.to_string()).collect()));
    }
    // a small discretized-operator run exercises the LAPACK-heavy path
    let schro_cfg = serde_json::json!({
        "kind": "schrodinger",
        "cases": [{
            "name": "det-check-1d",
            "d": 1, "half_width": 4.0, "n": 64,
            "potential": {"kind": "imaginary_ball", "strength": 2.0},
            "levels": 2,
            "alphas": [-1.0, 0.0], "eps_list": [0.2], "gammas": [0.5, 1.0],
            "kappas": [0.3, 1.0],
            "weights": [{"kind": "exp_decay", "rate": 1.0}]
        }, {
            // 2D complex eigensolve: exercises the threaded LAPACK path
            "name": "det-check-2d",
            "d": 2, "half_width": 4.0, "n": 24,
            "potential": {"kind": "scaled_char", "value": [-2.0, 1.0], "radius": 1.0},
            "levels": 1,
            "alphas": [0.0, 1.0], "eps_list": [0.3], "gammas": [0.5],
            "kappas": [1.0],
            "weights": [{"kind": "reciprocal"}]
        }],
        "allowance": 0.05,
        "seed": 20260810, "trials": 1
    });
    let cfg_path = base.join("schro.json");
    std::fs::create_dir_all(&base).unwrap();
    std::fs::write(&cfg_path, serde_json::to_string_pretty(&schro_cfg).unwrap()).unwrap();
    for label in ["schro-a", "schro-b"] {
        cmd_runs.push((
            label.to_string(),
            vec![
                "schrodinger".into(),
                "--config".into(),
                cfg_path.display().to_string(),
            ],
        ));
    }

    let mut streams = std::collections::BTreeMap::new();
    for (label, args) in &cmd_runs {
        let out_dir = base.join(label);
        let status = std::process::Command::new(bin)
            .args(args)
            .arg("--seed")
            .arg("20260810")
            .arg("--out")
            .arg(&out_dir)
            .stdout(std::process::Stdio::null())
            .status()
            .expect("binary runs");
        assert!(status.success(), "{label} exited nonzero");
        let bytes = std::fs::read(out_dir.join("records.jsonl")).expect("records written");
        streams.insert(label.clone(), bytes);
    }

    let same_abstract = streams["abstract-j1-a"] == streams["abstract-j1-b"]
        && streams["abstract-j1-a"] == streams["abstract-j2"];
    let same_jordan = streams["jordan-j1"] == streams["jordan-j2"];
    let same_schro = streams["schro-a"] == streams["schro-b"];
    criterion(
        8,
        "byte-identical record streams across reruns and --jobs",
        same_abstract && same_jordan && same_schro,
        &format!(
            "abstract identical: {same_abstract}, jordan identical: {same_jordan}, schrodinger identical: {same_schro}"
        ),
    );
}
