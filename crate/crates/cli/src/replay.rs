//! Self-contained failure fixtures and their replay.
//!
//! Every hard failure archives enough data to re-execute the single failing
//! check standalone; `bscount replay <fixture>` re-runs it and reports whether
//! the archived verdict reproduces.

use std::path::Path;

use bscount_core::antisym::Convention;
use bscount_core::bsbound::{verify_counting_bound, HalfPlane, PerturbedPair};
use bscount_core::jordan::{splitting_match_error, JordanStructure};
use bscount_core::schrodinger::{clr_functional, lt_halfplane_sum, solve_cloud, Grid, PotentialSpec};
use serde::{Deserialize, Serialize};

/// A reproducible check, with the verdict it produced when archived.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Fixture {
    AbstractBoundTrial {
        pair: PerturbedPair,
        alpha: f64,
        eps: f64,
        convention: Convention,
        archived_pass: bool,
        archived_margin: f64,
    },
    JordanSplit {
        structure: JordanStructure,
        delta: f64,
        tolerance: f64,
        archived_pass: bool,
        archived_error: f64,
    },
    SchrodingerClr {
        d: usize,
        half_width: f64,
        n: usize,
        potential: PotentialSpec,
        gamma: f64,
        alpha: f64,
        eps: f64,
        allowance: f64,
        archived_pass: bool,
        archived_ratio: f64,
    },
    SchrodingerLt {
        d: usize,
        half_width: f64,
        n: usize,
        potential: PotentialSpec,
        gamma: f64,
        alpha: f64,
        bound: f64,
        allowance: f64,
        archived_pass: bool,
        archived_sum: f64,
    },
}

/// Result of replaying a fixture.
#[derive(Clone, Debug, Serialize)]
pub struct ReplayOutcome {
    pub check: String,
    pub archived_pass: bool,
    pub replayed_pass: bool,
    /// The replay reproduced the archived verdict.
    pub reproduced: bool,
    pub detail: String,
}

pub fn replay_fixture(fixture: &Fixture) -> anyhow::Result<ReplayOutcome> {
    match fixture {
        Fixture::AbstractBoundTrial {
            pair,
            alpha,
            eps,
            convention,
            archived_pass,
            archived_margin,
        } => {
            let hp = HalfPlane::new(*alpha, *eps)?;
            let rep = verify_counting_bound(pair, &hp, *convention)?;
            Ok(ReplayOutcome {
                check: "abstract_bound_trial".into(),
                archived_pass: *archived_pass,
                replayed_pass: rep.holds,
                reproduced: rep.holds == *archived_pass,
                detail: format!(
                    "margin {:.6e} (archived {:.6e}), n={}, partial_sum={:.6e}",
                    rep.margin, archived_margin, rep.n_count, rep.partial_sum
                ),
            })
        }
        Fixture::JordanSplit {
            structure,
            delta,
            tolerance,
            archived_pass,
            archived_error,
        } => {
            let err = splitting_match_error(structure, *delta)?;
            let pass = err <= *tolerance;
            Ok(ReplayOutcome {
                check: "jordan_split".into(),
                archived_pass: *archived_pass,
                replayed_pass: pass,
                reproduced: pass == *archived_pass,
                detail: format!(
                    "match error {err:.6e} (archived {archived_error:.6e}) vs tol {tolerance:.6e}"
                ),
            })
        }
        Fixture::SchrodingerClr {
            d,
            half_width,
            n,
            potential,
            gamma,
            alpha,
            eps,
            allowance,
            archived_pass,
            archived_ratio,
        } => {
            let grid = Grid::new(*d, *half_width, *n)?;
            let cloud = solve_cloud(&grid, potential)?;
            let hp = HalfPlane::new(*alpha, *eps)?;
            let rec = clr_functional(&cloud, *gamma, &hp, potential)?;
            let pass = !rec.vacuous_inconsistent && rec.ratio <= 1.0 + allowance;
            Ok(ReplayOutcome {
                check: "schrodinger_clr".into(),
                archived_pass: *archived_pass,
                replayed_pass: pass,
                reproduced: pass == *archived_pass,
                detail: format!(
                    "ratio {:.6} (archived {:.6}), n={} rhs={:.6e}",
                    rec.ratio, archived_ratio, rec.n_count, rec.rhs
                ),
            })
        }
        Fixture::SchrodingerLt {
            d,
            half_width,
            n,
            potential,
            gamma,
            alpha,
            bound,
            allowance,
            archived_pass,
            archived_sum,
        } => {
            let grid = Grid::new(*d, *half_width, *n)?;
            let cloud = solve_cloud(&grid, potential)?;
            let sum = lt_halfplane_sum(&cloud, *gamma, *alpha);
            let pass = sum <= bound * (1.0 + allowance);
            Ok(ReplayOutcome {
                check: "schrodinger_lt".into(),
                archived_pass: *archived_pass,
                replayed_pass: pass,
                reproduced: pass == *archived_pass,
                detail: format!("sum {sum:.6e} (archived {archived_sum:.6e}) vs bound {bound:.6e}"),
            })
        }
    }
}

pub fn replay_file(path: &Path) -> anyhow::Result<ReplayOutcome> {
    let text = std::fs::read_to_string(path)?;
    let fixture: Fixture = serde_json::from_str(&text)?;
    replay_fixture(&fixture)
}
