//! Jordan-structured matrices and the chain-breaking corner perturbation.
//!
//! A [`JordanStructure`] declares blocks `(lambda_n, m_n)`; from it we build
//! the block-diagonal Jordan matrix, the rank-one-per-block perturbation `K0`
//! (a single 1 in the bottom-left corner of each block), and the closed-form
//! eigenvalues of `J + delta K0`. Numerical Jordan-form *detection* for
//! arbitrary matrices is out of scope; construction is forward-only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{default_cluster_tol, general_spectrum, ComplexMatrix};

/// One Jordan block: eigenvalue and chain length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanBlock {
    pub lambda: Complex64,
    pub size: usize,
}

/// A list of Jordan blocks. Distinct blocks may share an eigenvalue; each
/// block is treated independently throughout.
///
/// Serialized as a list of `(re lambda, im lambda, m)` triples.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanStructure {
    pub blocks: Vec<JordanBlock>,
}

impl Serialize for JordanStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let triples: Vec<(f64, f64, usize)> = self
            .blocks
            .iter()
            .map(|b| (b.lambda.re, b.lambda.im, b.size))
            .collect();
        triples.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JordanStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let triples: Vec<(f64, f64, usize)> = Vec::deserialize(d)?;
        JordanStructure::new(
            triples
                .into_iter()
                .map(|(re, im, m)| JordanBlock {
                    lambda: Complex64::new(re, im),
                    size: m,
                })
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

impl JordanStructure {
    pub fn new(blocks: Vec<JordanBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("Jordan structure needs at least one block"));
        }
        for b in &blocks {
            if b.size == 0 {
                return Err(Error::invalid("Jordan block size must be >= 1"));
            }
            if !b.lambda.re.is_finite() || !b.lambda.im.is_finite() {
                return Err(Error::invalid("Jordan block eigenvalue must be finite"));
            }
        }
        Ok(Self { blocks })
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(|b| b.size).max().unwrap_or(1)
    }

    pub fn max_abs_lambda(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.lambda.norm())
            .fold(0.0, f64::max)
    }
}

/// Block-diagonal matrix with block `n` equal to `lambda_n I + N_n`, where
/// `N_n` is the superdiagonal-ones nilpotent of size `m_n`.
pub fn build_jordan_matrix(s: &JordanStructure) -> ComplexMatrix {
    let dim = s.total_dim();
    let mut m = ComplexMatrix::zeros(dim).expect("dim >= 1");
    let mut offset = 0usize;
    let mut data = m.as_array().clone();
    for b in &s.blocks {
        for i in 0..b.size {
            data[(offset + i, offset + i)] = b.lambda;
            if i + 1 < b.size {
                data[(offset + i, offset + i + 1)] = Complex64::new(1.0, 0.0);
            }
        }
        offset += b.size;
    }
    m = ComplexMatrix::from_array(data).expect("finite by construction");
    m
}

/// Block-diagonal chain-breaking perturbation: block `n` carries a single 1 in
/// its bottom-left corner. Its rank equals the number of blocks.
pub fn build_k0(s: &JordanStructure) -> ComplexMatrix {
    let dim = s.total_dim();
    let mut data = ComplexMatrix::zeros(dim).expect("dim >= 1").as_array().clone();
    let mut offset = 0usize;
    for b in &s.blocks {
        data[(offset + b.size - 1, offset)] = Complex64::new(1.0, 0.0);
        offset += b.size;
    }
    ComplexMatrix::from_array(data).expect("finite by construction")
}

/// `K0` padded with zero rows/columns to act on a space of dimension `dim`,
/// vanishing outside the leading Jordan coordinates.
pub fn build_k0_embedded(s: &JordanStructure, dim: usize) -> Result<ComplexMatrix> {
    let inner = s.total_dim();
    if inner > dim {
        return Err(Error::DimensionMismatch(format!(
            "Jordan structure dim {inner} exceeds ambient dim {dim}"
        )));
    }
    let small = build_k0(s);
    ComplexMatrix::from_fn(dim, |(i, j)| {
        if i < inner && j < inner {
            small.get(i, j)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Closed-form eigenvalues of `J + delta K0`: the multiset
/// `{ lambda_n - ((-1)^{m_n} delta)^{1/m_n} e^{2 pi i l / m_n} }`, which is
/// branch-independent and equals `lambda_n` plus the `m_n`-th roots of
/// `delta`.
pub fn split_eigenvalues_closed_form(s: &JordanStructure, delta: f64) -> Result<Vec<Complex64>> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let mut out = Vec::with_capacity(s.total_dim());
    for b in &s.blocks {
        let m = b.size as f64;
        // substituting u = -w in w^m = (-1)^m delta gives u^m = delta, so the
        // multiset is lambda + delta^{1/m} * (all m-th roots of unity)
        let radius = delta.powf(1.0 / m);
        for l in 0..b.size {
            let theta = 2.0 * std::f64::consts::PI * l as f64 / m;
            out.push(b.lambda + Complex64::from_polar(radius, theta));
        }
    }
    Ok(out)
}

/// Per-eigenvalue entry of a semisimplicity report.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SemisimpleItem {
    pub lambda: Complex64,
    pub alg_mult: usize,
    pub geo_mult: usize,
    pub semisimple: bool,
    /// Set when another cluster sits within `10 * cluster_tol`; clustering is
    /// then ambiguous and the verdict for this eigenvalue should be read with
    /// care (the clusters are reported separately, never silently merged).
    pub ambiguous: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemisimpleReport {
    pub all_semisimple: bool,
    pub cluster_tol: f64,
    pub items: Vec<SemisimpleItem>,
}

/// Check whether every clustered eigenvalue of `m` has equal algebraic and
/// geometric multiplicity.
pub fn verify_semisimple(m: &ComplexMatrix, cluster_tol: Option<f64>) -> Result<SemisimpleReport> {
    let tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(m));
    let spectrum = general_spectrum(m, tol)?;
    let n = spectrum.items.len();
    let mut items = Vec::with_capacity(n);
    for (i, it) in spectrum.items.iter().enumerate() {
        let ambiguous = spectrum
            .items
            .iter()
            .enumerate()
            .any(|(j, jt)| i != j && (it.lambda - jt.lambda).norm() < 10.0 * tol);
        items.push(SemisimpleItem {
            lambda: it.lambda,
            alg_mult: it.alg_mult,
            geo_mult: it.geo_mult,
            semisimple: it.alg_mult == it.geo_mult,
            ambiguous,
        });
    }
    Ok(SemisimpleReport {
        all_semisimple: items.iter().all(|x| x.semisimple),
        cluster_tol: tol,
        items,
    })
}

/// Exact minimum-cost bipartite assignment on a square cost matrix, by
/// bitmask dynamic programming. Intended for the small matching problems in
/// splitting verification (n <= 20 or so).
///
/// Returns the assignment `sigma` (row `i` matched to column `sigma(i)`) and
/// the total cost.
pub fn min_cost_matching(costs: &[Vec<f64>]) -> Result<(Vec<usize>, f64)> {
    let n = costs.len();
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    if n > 22 {
        return Err(Error::invalid(format!(
            "min_cost_matching supports n <= 22, got {n}"
        )));
    }
    for row in costs {
        if row.len() != n {
            return Err(Error::DimensionMismatch("cost matrix must be square".into()));
        }
    }
    let full = 1usize << n;
    let mut best = vec![f64::INFINITY; full];
    let mut from = vec![usize::MAX; full];
    best[0] = 0.0;
    for mask in 0..full {
        if !best[mask].is_finite() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let next = mask | (1 << col);
            let cand = best[mask] + costs[row][col];
            if cand < best[next] {
                best[next] = cand;
                from[next] = col;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    let mut mask = full - 1;
    for row in (0..n).rev() {
        let col = from[mask];
        assignment[row] = col;
        mask &= !(1 << col);
    }
    Ok((assignment, best[full - 1]))
}

/// Max pointwise distance between the closed-form split points and the
/// numerically computed eigenvalues of `J + delta K0`, after minimum-cost
/// matching.
pub fn splitting_match_error(s: &JordanStructure, delta: f64) -> Result<f64> {
    let j = build_jordan_matrix(s);
    let k0 = build_k0(s);
    let perturbed = j.add(&k0.scale_re(delta))?;
    let predicted = split_eigenvalues_closed_form(s, delta)?;
    // cluster_tol small enough that every split point stays its own cluster
    let tol = 1e-12 * (1.0 + s.max_abs_lambda());
    let spectrum = general_spectrum(&perturbed, tol)?;
    let mut computed = Vec::with_capacity(s.total_dim());
    for it in &spectrum.items {
        for _ in 0..it.alg_mult {
            computed.push(it.lambda);
        }
    }
    let n = predicted.len();
    let costs: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| (predicted[i] - computed[j]).norm()).collect())
        .collect();
    let (assignment, _) = min_cost_matching(&costs)?;
    Ok((0..n)
        .map(|i| costs[i][assignment[i]])
        .fold(0.0, f64::max))
}
