//! Brute-force verification of the antisymmetric-lift identities: the Gram
//! formulas against the full-tensor oracle, positivity of the lifted form for
//! PSD operators, and the Ky Fan domination with attainment.

use bscount_core::antisym::{
    build_wedge_tensor, kyfan_sum, lifted_apply, lifted_quadratic_form, mixed_matrix,
    wedge_norm_sq, Convention, VectorFamily, DEFAULT_TENSOR_BUDGET,
};
use bscount_core::linalg::hermitian_spectrum;
use ndarray::Array1;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::records::{config_digest, RunOutput};
use crate::registry::{Experiment, RunContext};
use crate::rng::{run_trials, trial_rng};

#[derive(Serialize)]
struct InstanceRecord {
    n: usize,
    d: usize,
    family: u32,
    wedge_rel_err: f64,
    qform_rel_err: f64,
    sign_flip_err: f64,
    psd_m_min_eig: f64,
    psd_qform_re: f64,
    psd_qform_im_abs: f64,
    kyfan_slack: f64,
    kyfan_attain_err: f64,
    pass: bool,
}

fn random_family(rng: &mut impl Rng, n: usize, d: usize) -> VectorFamily {
    let vectors = (0..n)
        .map(|_| {
            Array1::from_shape_fn(d, |_| {
                Complex64::new(
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                )
            })
        })
        .collect();
    VectorFamily::new(vectors).expect("finite family")
}

fn run_instance(seed: u64, stream: u64, n: usize, d: usize, family: u32) -> anyhow::Result<InstanceRecord> {
    let mut rng = trial_rng(seed, stream);
    let f = random_family(&mut rng, n, d);
    let t = super::gaussian_complex(&mut rng, d);

    // Gram route vs full-tensor oracle
    let psi = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET)?;
    let norm_direct = wedge_norm_sq(&f)?;
    let norm_oracle = psi.norm_sq();
    let wedge_rel_err = (norm_direct - norm_oracle).abs() / norm_oracle.max(1e-300);

    let q_direct = lifted_quadratic_form(&t, &f)?;
    let t_psi = lifted_apply(&t, &psi, DEFAULT_TENSOR_BUDGET)?;
    let q_oracle = t_psi.inner(&psi)?;
    let qform_rel_err = (q_direct - q_oracle).norm() / q_oracle.norm().max(1e-300);

    // antisymmetry: swapping two vectors negates the wedge
    let g = f.swapped(0, n - 1);
    let psi_swapped = build_wedge_tensor(&g, DEFAULT_TENSOR_BUDGET)?;
    let scale = psi.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sign_flip_err = psi
        .coeffs()
        .iter()
        .zip(psi_swapped.coeffs().iter())
        .map(|(a, b)| (a + b).norm())
        .fold(0.0, f64::max)
        / scale.max(1e-300);

    // PSD operator: M PSD, lifted form real non-negative
    let w = super::gaussian_complex(&mut rng, d);
    let t_psd = w.adjoint().matmul(&w)?;
    let m = mixed_matrix(&t_psd, &f)?;
    let m_eigs = hermitian_spectrum(&m)?.eigenvalues;
    let m_scale = m_eigs.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let psd_m_min_eig = m_eigs.last().copied().unwrap_or(0.0) / m_scale.max(1e-300);
    let q_psd = lifted_quadratic_form(&t_psd, &f)?;
    let q_scale = q_psd.norm().max(norm_direct * m_scale).max(1e-300);
    let psd_qform_re = q_psd.re / q_scale;
    let psd_qform_im_abs = q_psd.im.abs() / q_scale;

    // Ky Fan domination for the Hermitian part, with attainment at the
    // eigenvector family
    let t_herm = t.hermitian_part();
    let fan = kyfan_sum(&t_herm, n, Convention::Raw)?;
    let q_herm = lifted_quadratic_form(&t_herm, &f)?;
    let rayleigh = q_herm.re / norm_direct;
    let kyfan_slack = fan - rayleigh;

    let eig = hermitian_spectrum(&t_herm)?;
    let basis = eig.basis.as_array();
    let top = VectorFamily::new(
        (0..n)
            .map(|j| Array1::from_shape_fn(d, |i| basis[(i, j)]))
            .collect(),
    )?;
    let q_top = lifted_quadratic_form(&t_herm, &top)?;
    let attained = q_top.re / wedge_norm_sq(&top)?;
    let kyfan_attain_err = (attained - fan).abs() / (1.0 + fan.abs());

    let pass = wedge_rel_err <= 1e-10
        && qform_rel_err <= 1e-9
        && sign_flip_err <= 1e-13
        && psd_m_min_eig >= -1e-10
        && psd_qform_re >= -1e-10
        && psd_qform_im_abs <= 1e-10
        && kyfan_slack >= -1e-9 * (1.0 + fan.abs())
        && kyfan_attain_err <= 1e-8;

    Ok(InstanceRecord {
        n,
        d,
        family,
        wedge_rel_err,
        qform_rel_err,
        sign_flip_err,
        psd_m_min_eig,
        psd_qform_re,
        psd_qform_im_abs,
        kyfan_slack,
        kyfan_attain_err,
        pass,
    })
}

pub struct AntisymOracle;

impl Experiment for AntisymOracle {
    fn kind(&self) -> &'static str {
        "antisym_oracle"
    }

    fn describe(&self) -> &'static str {
        "antisymmetric-lift identities against the full-tensor oracle"
    }

    fn run(&self, cfg: &ExperimentConfig, ctx: &RunContext) -> anyhow::Result<RunOutput> {
        let ExperimentKind::AntisymOracle(params) = &cfg.kind else {
            anyhow::bail!("config kind does not match experiment antisym_oracle");
        };
        if cfg.trials == 0 {
            anyhow::bail!("trials must be >= 1");
        }
        let mut out = RunOutput::new("antisym_oracle", config_digest(cfg));
        let mut cells: Vec<(usize, usize)> = Vec::new();
        for &n in &params.n_list {
            for &d in &params.d_list {
                if n > d {
                    continue;
                }
                cells.push((n, d));
            }
        }
        let total = cells.len() as u32 * cfg.trials;
        let records = run_trials(total, ctx.jobs, |idx| {
            let cell = (idx / cfg.trials) as usize;
            let family = idx % cfg.trials;
            let (n, d) = cells[cell];
            run_instance(cfg.seed, idx as u64, n, d, family)
        });

        let mut failures = 0usize;
        let mut worst_qform = 0.0f64;
        for rec in records {
            let rec = rec?;
            if !rec.pass {
                failures += 1;
            }
            worst_qform = worst_qform.max(rec.qform_rel_err);
            out.push_record(&rec);
        }
        out.check(
            "gram_route_matches_full_tensor",
            failures == 0,
            format!(
                "{failures} failing instances of {total}; worst lifted-form rel err {worst_qform:.3e}"
            ),
        );
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AntisymOracleParams;

    #[test]
    fn oracle_grid_passes() {
        let cfg = ExperimentConfig {
            kind: ExperimentKind::AntisymOracle(AntisymOracleParams::default()),
            seed: 11,
            trials: 3,
            out: None,
        };
        let ctx = RunContext {
            jobs: 1,
            out_dir: std::env::temp_dir().join("bscount-test-antisym"),
        };
        let out = AntisymOracle.run(&cfg, &ctx).unwrap();
        assert!(out.pass());
        // 2x4 grid of (n, d) cells, all with n <= d
        assert_eq!(out.stream.len(), 8 * 3);
    }
}
