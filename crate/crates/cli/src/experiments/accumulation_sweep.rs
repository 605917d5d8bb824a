//! Strong-coupling sweep for purely imaginary step potentials: tracks the
//! distance-weighted sums and the normalized accumulation functional as the
//! coupling grows. Trend data only; box truncation rules out quantitative
//! divergence claims.

use bscount_core::schrodinger::{
    dist_weighted_sum, potential_abs_quadrature, refine_and_extrapolate, Grid, PotentialSpec,
    WeightFunction,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::records::{config_digest, RunOutput};
use crate::registry::{Experiment, RunContext};

#[derive(Serialize)]
struct SweepRecord {
    h_strength: f64,
    weight: String,
    integrable: bool,
    weighted_sum: f64,
    /// `sum dist^p/|l|^{d/2}` over converged eigenvalues divided by
    /// `int |V|^p`, with `p = d/2`.
    normalized: f64,
    converged: usize,
    excluded: usize,
}

pub struct AccumulationSweep;

impl Experiment for AccumulationSweep {
    fn kind(&self) -> &'static str {
        "accumulation_sweep"
    }

    fn describe(&self) -> &'static str {
        "strong-coupling trend of distance-weighted eigenvalue sums"
    }

    fn run(&self, cfg: &ExperimentConfig, _ctx: &RunContext) -> anyhow::Result<RunOutput> {
        let ExperimentKind::AccumulationSweep(params) = &cfg.kind else {
            anyhow::bail!("config kind does not match experiment accumulation_sweep");
        };
        if params.d != 2 {
            anyhow::bail!("accumulation sweep is defined on a 2D grid");
        }
        let mut out = RunOutput::new("accumulation_sweep", config_digest(cfg));
        let grid = Grid::new(params.d, params.half_width, params.n)?;
        let p = params.d as f64 / 2.0;
        let mut trend = String::from("# h weight weighted_sum normalized converged excluded\n");
        let mut all_finite = true;

        for &h in &params.h_strengths {
            let pot = PotentialSpec::ImaginaryBall { strength: h };
            let cloud = if params.levels >= 2 {
                refine_and_extrapolate(&grid, &pot, params.levels)?
            } else {
                bscount_core::schrodinger::solve_cloud(&grid, &pot)?
            };
            let spectrum = cloud.effective_spectrum();
            let converged = spectrum.total_alg_mult();
            let excluded = cloud.spectrum.total_alg_mult() - converged;
            let abs_quad = potential_abs_quadrature(&grid, &pot, p)?;
            let unit = WeightFunction::Constant { value: 1.0 };
            let base = dist_weighted_sum(&spectrum, p, params.d, &unit)?;
            let normalized = base.value / abs_quad;

            for weight in &params.weights {
                let r = dist_weighted_sum(&spectrum, p, params.d, weight)?;
                all_finite &= r.value.is_finite() && normalized.is_finite();
                trend.push_str(&format!(
                    "{h} {} {:.12e} {normalized:.12e} {converged} {excluded}\n",
                    weight.label().replace(' ', "_"),
                    r.value,
                ));
                out.push_record(&SweepRecord {
                    h_strength: h,
                    weight: weight.label(),
                    integrable: weight.integrable(),
                    weighted_sum: r.value,
                    normalized,
                    converged,
                    excluded,
                });
            }
        }
        out.artifacts.push(("accumulation-trend.dat".into(), trend));
        out.check(
            "trend_values_finite",
            all_finite,
            "all weighted sums and normalized ratios finite on converged clouds",
        );
        Ok(out)
    }
}
