//! Experiment configuration: one tagged `kind` selecting the experiment, its
//! parameters, and the common seed/trials/output fields. Every random draw in
//! a run is a pure function of `(seed, trial index)`.

use std::path::PathBuf;

use bscount_core::schrodinger::{PotentialSpec, WeightFunction};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub kind: ExperimentKind,
    pub seed: u64,
    pub trials: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn kind_name(&self) -> &'static str {
        self.kind.name()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentKind {
    AbstractBound(AbstractBoundParams),
    AntisymOracle(AntisymOracleParams),
    Jordan(JordanParams),
    ConstantsTable(ConstantsTableParams),
    Schrodinger(SchrodingerParams),
    AccumulationSweep(SweepParams),
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::AbstractBound(_) => "abstract_bound",
            ExperimentKind::AntisymOracle(_) => "antisym_oracle",
            ExperimentKind::Jordan(_) => "jordan",
            ExperimentKind::ConstantsTable(_) => "constants_table",
            ExperimentKind::Schrodinger(_) => "schrodinger",
            ExperimentKind::AccumulationSweep(_) => "accumulation_sweep",
        }
    }
}

/// How the extra bounded perturbation K is drawn for abstract-bound trials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KMode {
    None,
    Always,
    /// Odd trials carry a K, even trials do not.
    Alternate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct AbstractBoundParams {
    pub dim_min: usize,
    pub dim_max: usize,
    pub sigmas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub eps_log_range: (f64, f64),
    pub k_mode: KMode,
    pub k_sigma: f64,
}

impl Default for AbstractBoundParams {
    fn default() -> Self {
        Self {
            dim_min: 1,
            dim_max: 12,
            sigmas: vec![0.1, 1.0, 10.0],
            alphas: vec![-3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0],
            eps_log_range: (1e-3, 10.0),
            k_mode: KMode::Alternate,
            k_sigma: 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct AntisymOracleParams {
    pub n_list: Vec<usize>,
    pub d_list: Vec<usize>,
}

impl Default for AntisymOracleParams {
    fn default() -> Self {
        Self {
            n_list: vec![2, 3],
            d_list: vec![3, 4, 5, 6],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct JordanParams {
    pub max_blocks: usize,
    pub max_block_size: usize,
    pub lambda_radius: f64,
    pub deltas: Vec<f64>,
}

impl Default for JordanParams {
    fn default() -> Self {
        Self {
            max_blocks: 3,
            max_block_size: 5,
            lambda_radius: 2.0,
            deltas: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstantsTableParams {
    pub d_list: Vec<usize>,
    pub gammas: Vec<f64>,
    pub weak_norm_pairs: Vec<(usize, f64)>,
    pub eps_list: Vec<f64>,
}

impl Default for ConstantsTableParams {
    fn default() -> Self {
        Self {
            d_list: vec![1, 2, 3],
            gammas: vec![0.5, 1.0, 1.5, 2.0],
            weak_norm_pairs: vec![(1, 3.0), (2, 4.0), (3, 3.0), (3, 6.0)],
            eps_list: vec![0.1, 1.0, 10.0],
        }
    }
}

/// One discretized-operator case of the Schrodinger experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchrodingerCase {
    pub name: String,
    pub d: usize,
    pub half_width: f64,
    pub n: usize,
    pub potential: PotentialSpec,
    /// Refinement levels; 1 solves a single grid without certificates.
    pub levels: usize,
    pub alphas: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub gammas: Vec<f64>,
    pub kappas: Vec<f64>,
    pub weights: Vec<WeightFunction>,
    /// Compare the ground state with the closed-form point-interaction value
    /// and demand a near-sharp counting ratio (1D delta wells only).
    #[serde(default)]
    pub check_delta_sharpness: bool,
    /// Compare against the closed-form free spectrum (zero potentials only).
    #[serde(default)]
    pub check_free_spectrum: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SchrodingerParams {
    pub cases: Vec<SchrodingerCase>,
    /// Relative slack applied to every bound check (discretization allowance).
    pub allowance: f64,
}

impl Default for SchrodingerParams {
    fn default() -> Self {
        Self {
            cases: default_schrodinger_cases(),
            allowance: 0.05,
        }
    }
}

fn standard_weights() -> Vec<WeightFunction> {
    vec![
        WeightFunction::ExpDecay { rate: 1.0 },
        WeightFunction::Reciprocal,
    ]
}

/// The desk-scale validity matrix: every potential family from the bounds,
/// in both dimensions, across tilted half-planes.
pub fn default_schrodinger_cases() -> Vec<SchrodingerCase> {
    let alphas = vec![-1.0, 0.0, 1.0];
    vec![
        SchrodingerCase {
            name: "zero-1d".into(),
            d: 1,
            half_width: 5.0,
            n: 400,
            potential: PotentialSpec::ScaledChar {
                value: Complex64::new(0.0, 0.0),
                radius: 1.0,
            },
            levels: 2,
            alphas: alphas.clone(),
            eps_list: vec![0.1, 1.0],
            gammas: vec![0.5, 1.0],
            kappas: vec![],
            weights: vec![],
            check_delta_sharpness: false,
            check_free_spectrum: true,
        },
        SchrodingerCase {
            name: "delta-sharp-1d".into(),
            d: 1,
            half_width: 20.0,
            n: 4000,
            potential: PotentialSpec::DeltaWell {
                depth: 1.0,
                width: 0.01,
            },
            levels: 1,
            alphas: vec![0.0],
            eps_list: vec![0.2475, 0.05, 0.15, 0.5, 2.0],
            gammas: vec![0.5],
            kappas: vec![],
            weights: vec![],
            check_delta_sharpness: true,
            check_free_spectrum: false,
        },
        SchrodingerCase {
            name: "well-1d".into(),
            d: 1,
            half_width: 12.0,
            n: 1200,
            potential: PotentialSpec::DeltaWell {
                depth: 1.0,
                width: 0.05,
            },
            levels: 2,
            alphas: alphas.clone(),
            eps_list: vec![0.05, 0.2, 0.5, 2.0],
            gammas: vec![0.5, 1.0, 1.5],
            kappas: vec![0.05, 0.3, 1.0, 5.0],
            weights: standard_weights(),
            check_delta_sharpness: false,
            check_free_spectrum: false,
        },
        SchrodingerCase {
            name: "iball-1d".into(),
            d: 1,
            half_width: 8.0,
            n: 640,
            potential: PotentialSpec::ImaginaryBall { strength: 4.0 },
            levels: 2,
            alphas: alphas.clone(),
            eps_list: vec![0.1, 0.5, 2.0],
            gammas: vec![0.5, 1.0, 1.5],
            kappas: vec![0.05, 0.3, 1.0, 5.0],
            weights: standard_weights(),
            check_delta_sharpness: false,
            check_free_spectrum: false,
        },
        SchrodingerCase {
            name: "cchar-1d".into(),
            d: 1,
            half_width: 8.0,
            n: 640,
            potential: PotentialSpec::ScaledChar {
                value: Complex64::new(-2.0, 1.5),
                radius: 1.0,
            },
            levels: 2,
            alphas: alphas.clone(),
            eps_list: vec![0.1, 0.5, 2.0],
            gammas: vec![0.5, 1.0, 1.5],
            kappas: vec![0.05, 0.3, 1.0, 5.0],
            weights: standard_weights(),
            check_delta_sharpness: false,
            check_free_spectrum: false,
        },
        SchrodingerCase {
            name: "well-2d".into(),
            d: 2,
            half_width: 5.0,
            n: 32,
            potential: PotentialSpec::DeltaWell {
                depth: 2.0,
                width: 0.8,
            },
            levels: 2,
            alphas: alphas.clone(),
            eps_list: vec![0.05, 0.3, 1.0],
            gammas: vec![0.5, 1.0],
            kappas: vec![0.05, 0.3, 1.0, 5.0],
            weights: standard_weights(),
            check_delta_sharpness: false,
            check_free_spectrum: false,
        },
        SchrodingerCase {
            name: "iball-2d".into(),
            d: 2,
            half_width: 6.0,
            n: 32,
            potential: PotentialSpec::ImaginaryBall { strength: 6.0 },
            levels: 2,
            alphas: alphas.clone(),
            eps_list: vec![0.1, 0.5, 2.0],
            gammas: vec![0.5, 1.0],
            kappas: vec![0.05, 0.3, 1.0, 5.0],
            weights: standard_weights(),
            check_delta_sharpness: false,
            check_free_spectrum: false,
        },
        SchrodingerCase {
            name: "cchar-2d".into(),
            d: 2,
            half_width: 5.0,
            n: 32,
            potential: PotentialSpec::ScaledChar {
                value: Complex64::new(-3.0, -2.0),
                radius: 1.2,
            },
            levels: 2,
            alphas,
            eps_list: vec![0.1, 0.5, 2.0],
            gammas: vec![0.5, 1.0],
            kappas: vec![0.05, 0.3, 1.0, 5.0],
            weights: standard_weights(),
            check_delta_sharpness: false,
            check_free_spectrum: false,
        },
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepParams {
    pub h_strengths: Vec<f64>,
    pub d: usize,
    pub half_width: f64,
    pub n: usize,
    pub levels: usize,
    pub weights: Vec<WeightFunction>,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            h_strengths: vec![1.0, 4.0, 16.0, 64.0],
            d: 2,
            half_width: 5.0,
            n: 32,
            levels: 2,
            weights: standard_weights(),
        }
    }
}
