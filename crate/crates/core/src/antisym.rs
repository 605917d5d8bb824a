//! Antisymmetric N-fold tensor products and lifted operators.
//!
//! Two routes to the same quantities live here on purpose. The production
//! route works with N x N Gram data: `wedge_norm_sq` is a Gram determinant and
//! `lifted_quadratic_form` is `det(A) * Tr(A^{-1/2} M A^{-1/2})`. The oracle
//! route ([`build_wedge_tensor`], [`lifted_apply`]) materialises the full
//! `d^N` coefficient array of the wedge and applies the lifted operator slot
//! by slot; it is deliberately unoptimised and budget-guarded, and exists to
//! falsify the Gram-side identities on small instances.

use ndarray::Array1;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_spectrum, ComplexMatrix};

/// Default ceiling on `N! * d^N`-scale coefficient work for the oracle route.
pub const DEFAULT_TENSOR_BUDGET: u128 = 10_000_000;

/// Inner product, linear in the first slot: `sum_k u_k * conj(v_k)`.
pub fn inner(u: &Array1<Complex64>, v: &Array1<Complex64>) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// A family of N complex vectors in ambient dimension d.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorFamily {
    vectors: Vec<Vec<Complex64>>,
    ambient_dim: usize,
}

impl VectorFamily {
    pub fn new(vectors: Vec<Array1<Complex64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::invalid("vector family must contain at least one vector"));
        }
        let d = vectors[0].len();
        if d == 0 {
            return Err(Error::invalid("ambient dimension must be >= 1"));
        }
        for (k, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "vector {} has length {}, expected {}",
                    k,
                    v.len(),
                    d
                )));
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::invalid(format!("vector {k} has a non-finite entry")));
            }
        }
        Ok(Self {
            vectors: vectors.into_iter().map(|v| v.to_vec()).collect(),
            ambient_dim: d,
        })
    }

    pub fn n_vectors(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vector(&self, j: usize) -> Array1<Complex64> {
        Array1::from_vec(self.vectors[j].clone())
    }

    /// Product of the squared vector norms; the scale the independence
    /// threshold is relative to (Hadamard bound for the Gram determinant).
    pub fn norm_sq_product(&self) -> f64 {
        self.vectors
            .iter()
            .map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .product()
    }

    /// Default linear-independence threshold `1e-12 * prod ||phi_j||^2`.
    pub fn rank_tol(&self) -> f64 {
        1e-12 * self.norm_sq_product()
    }

    /// Swap two vectors (used by the sign-flip invariant).
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.vectors.swap(a, b);
        out
    }
}

/// Gram matrix `A_ij = <phi_j, phi_i>`; Hermitian, positive definite exactly
/// when the family is linearly independent.
pub fn gram_matrix(f: &VectorFamily) -> ComplexMatrix {
    let n = f.n_vectors();
    ComplexMatrix::from_fn(n, |(i, j)| inner(&f.vector(j), &f.vector(i)))
        .expect("gram matrix of a finite family is finite")
}

/// Mixed matrix `M_ij = <T phi_j, phi_i>`.
pub fn mixed_matrix(t: &ComplexMatrix, f: &VectorFamily) -> Result<ComplexMatrix> {
    if t.dim() != f.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} vs ambient dim {}",
            t.dim(),
            f.ambient_dim()
        )));
    }
    let n = f.n_vectors();
    let images: Vec<Array1<Complex64>> = (0..n)
        .map(|j| t.apply(&f.vector(j)))
        .collect::<Result<_>>()?;
    ComplexMatrix::from_fn(n, |(i, j)| inner(&images[j], &f.vector(i)))
}

/// Squared norm of the wedge `phi_1 ^ ... ^ phi_N`, i.e. `det(gram_matrix)`.
pub fn wedge_norm_sq(f: &VectorFamily) -> Result<f64> {
    let a = gram_matrix(f);
    let eig = hermitian_spectrum(&a)?;
    Ok(eig.eigenvalues.iter().product())
}

/// `<T^(N) Psi, Psi> = det(A) * Tr(A^{-1/2} M A^{-1/2})`, computed through the
/// Hermitian spectral calculus of the Gram matrix.
///
/// Families whose Gram matrix is numerically degenerate (determinant at or
/// below `rank_tol`, or smallest eigenvalue below `1e-13 * ||A||_2`) are
/// rejected rather than regularised.
pub fn lifted_quadratic_form(t: &ComplexMatrix, f: &VectorFamily) -> Result<Complex64> {
    let a = gram_matrix(f);
    let eig = hermitian_spectrum(&a)?;
    let det: f64 = eig.eigenvalues.iter().product();
    let max_eig = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if det <= f.rank_tol() || min_eig < 1e-13 * max_eig {
        return Err(Error::DegenerateFamily { gram_det: det });
    }
    let n = f.n_vectors();
    let u = eig.basis.as_array();
    let inv_sqrt: Vec<f64> = eig.eigenvalues.iter().map(|l| 1.0 / l.sqrt()).collect();
    let a_inv_sqrt = ComplexMatrix::from_fn(n, |(i, j)| {
        (0..n)
            .map(|k| u[(i, k)] * inv_sqrt[k] * u[(j, k)].conj())
            .sum()
    })?;
    let m = mixed_matrix(t, f)?;
    let g = a_inv_sqrt.matmul(&m)?.matmul(&a_inv_sqrt)?;
    Ok(g.trace() * det)
}

/// Ky Fan convention for eigenvalue partial sums of compact-operator models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Each term is `max(E_j, 0)`: the eigenvalue sequence is padded with the
    /// essential-spectrum value 0 of a compact operator.
    ClampAtZero,
    /// Plain sum of the n largest eigenvalues; requires `n <= dim`.
    Raw,
}

/// Sum of the n largest eigenvalues of a Hermitian matrix, under the given
/// convention. Under [`Convention::Raw`], `n` must not exceed the dimension.
pub fn kyfan_sum(t: &ComplexMatrix, n: usize, convention: Convention) -> Result<f64> {
    let eigs = crate::linalg::hermitian_eigenvalues(t)?;
    match convention {
        Convention::Raw => {
            if n > eigs.len() {
                return Err(Error::invalid(format!(
                    "raw Ky Fan sum of {n} terms on a matrix of dimension {}",
                    eigs.len()
                )));
            }
            // + 0.0 normalizes the empty sum's -0.0
            Ok(eigs[..n].iter().sum::<f64>() + 0.0)
        }
        Convention::ClampAtZero => {
            Ok(eigs.iter().take(n).map(|l| l.max(0.0)).sum::<f64>() + 0.0)
        }
    }
}

/// Full coefficient array of an order-N tensor over `C^d`, indexed by
/// multi-indices in row-major order (slot 0 most significant).
#[derive(Clone, Debug)]
pub struct FullTensor {
    order: usize,
    ambient_dim: usize,
    coeffs: Vec<Complex64>,
}

impl FullTensor {
    fn zeros(order: usize, ambient_dim: usize) -> Self {
        let len = ambient_dim.pow(order as u32);
        Self {
            order,
            ambient_dim,
            coeffs: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `<x, y> = sum over multi-indices of x * conj(y)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.order != other.order || self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "tensor shapes ({}, {}) vs ({}, {})",
                self.order, self.ambient_dim, other.order, other.ambient_dim
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            order: self.order,
            ambient_dim: self.ambient_dim,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.order != other.order || self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch("tensor shapes differ".into()));
        }
        Ok(Self {
            order: self.order,
            ambient_dim: self.ambient_dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0usize; self.order];
        for slot in (0..self.order).rev() {
            digits[slot] = idx % self.ambient_dim;
            idx /= self.ambient_dim;
        }
        digits
    }

    fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0usize, |acc, &k| acc * self.ambient_dim + k)
    }

    /// Largest violation of antisymmetry over all coefficients and all slot
    /// transpositions: `max |c(idx swapped) + c(idx)|`.
    pub fn max_antisymmetry_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in 0..self.coeffs.len() {
            let digits = self.decode(idx);
            for a in 0..self.order {
                for b in (a + 1)..self.order {
                    let mut sw = digits.clone();
                    sw.swap(a, b);
                    let j = self.encode(&sw);
                    worst = worst.max((self.coeffs[j] + self.coeffs[idx]).norm());
                }
            }
        }
        worst
    }
}

/// All permutations of `0..n` in lexicographic order, with their signs.
fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        let mut inversions = 0usize;
        for a in 0..n {
            for b in (a + 1)..n {
                if p[a] > p[b] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        out.push((p.clone(), sign));
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// The wedge `phi_1 ^ ... ^ phi_N = (1/sqrt(N!)) sum_pi sgn(pi)
/// phi_pi(1) x ... x phi_pi(N)` as a full coefficient array.
///
/// Oracle for small instances only: requires `N! * d^N <= budget`.
pub fn build_wedge_tensor(f: &VectorFamily, budget: u128) -> Result<FullTensor> {
    let n = f.n_vectors();
    let d = f.ambient_dim();
    let required = factorial(n) * (d as u128).pow(n as u32);
    check_budget(required, budget)?;
    let perms = permutations_with_sign(n);
    let norm = 1.0 / (factorial(n) as f64).sqrt();
    let mut t = FullTensor::zeros(n, d);
    let len = t.coeffs.len();
    for idx in 0..len {
        let digits = t.decode(idx);
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, sign) in &perms {
            let mut prod = Complex64::new(*sign, 0.0);
            for (slot, &k) in digits.iter().enumerate() {
                prod *= f.vectors[p[slot]][k];
            }
            acc += prod;
        }
        t.coeffs[idx] = acc * norm;
    }
    Ok(t)
}

/// Apply the lifted operator `T^(N)` slot by slot:
/// `(T^(N) x)[idx] = sum_j sum_b T[idx_j, b] x[idx with slot j := b]`.
pub fn lifted_apply(t: &ComplexMatrix, x: &FullTensor, budget: u128) -> Result<FullTensor> {
    if t.dim() != x.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} vs tensor ambient dim {}",
            t.dim(),
            x.ambient_dim()
        )));
    }
    let n = x.order();
    let d = x.ambient_dim();
    let required = (n as u128) * (d as u128).pow(n as u32 + 1);
    check_budget(required, budget)?;
    let mut out = FullTensor::zeros(n, d);
    let len = out.coeffs.len();
    for idx in 0..len {
        let digits = out.decode(idx);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut probe = digits.clone();
        for slot in 0..n {
            let a = digits[slot];
            for b in 0..d {
                probe[slot] = b;
                acc += t.get(a, b) * x.coeffs[x.encode(&probe)];
            }
            probe[slot] = a;
        }
        out.coeffs[idx] = acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;
    use num_complex::Complex64 as C;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn basis_vector(d: usize, k: usize) -> Array1<C> {
        Array1::from_shape_fn(d, |i| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    fn random_vector(rng: &mut impl Rng, d: usize) -> Array1<C> {
        Array1::from_shape_fn(d, |_| {
            c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        })
    }

    fn random_family(rng: &mut impl Rng, n: usize, d: usize) -> VectorFamily {
        VectorFamily::new((0..n).map(|_| random_vector(rng, d)).collect()).unwrap()
    }

    fn random_matrix(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d, |_| {
            c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        })
        .unwrap()
    }

    #[test]
    fn gram_of_orthonormal_pair_is_identity() {
        let f = VectorFamily::new(vec![basis_vector(3, 0), basis_vector(3, 1)]).unwrap();
        let a = gram_matrix(&f);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.get(i, j) - c(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn gram_of_parallel_vectors_is_singular() {
        let f = VectorFamily::new(vec![basis_vector(2, 0), basis_vector(2, 0)]).unwrap();
        let a = gram_matrix(&f);
        for i in 0..2 {
            for j in 0..2 {
                assert!((a.get(i, j) - c(1.0, 0.0)).norm() < 1e-15);
            }
        }
        assert!(wedge_norm_sq(&f).unwrap().abs() < 1e-14);
    }

    #[test]
    fn gram_is_exactly_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let f = random_family(&mut rng, 3, 5);
        let a = gram_matrix(&f);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.get(i, j), a.get(j, i).conj());
            }
        }
    }

    #[test]
    fn wedge_norm_orthonormal_family() {
        let f = VectorFamily::new(vec![basis_vector(4, 0), basis_vector(4, 1), basis_vector(4, 2)])
            .unwrap();
        assert!((wedge_norm_sq(&f).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wedge_norm_matches_full_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let f = random_family(&mut rng, 2, 4);
            let psi = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
            let direct = wedge_norm_sq(&f).unwrap();
            let oracle = psi.norm_sq();
            assert!(
                (direct - oracle).abs() <= 1e-10 * oracle.abs().max(1e-30),
                "{direct} vs {oracle}"
            );
        }
    }

    #[test]
    fn quadratic_form_identity_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let f = random_family(&mut rng, 3, 5);
        let id = ComplexMatrix::identity(5).unwrap();
        let q = lifted_quadratic_form(&id, &f).unwrap();
        let want = 3.0 * wedge_norm_sq(&f).unwrap();
        assert!((q - c(want, 0.0)).norm() <= 1e-10 * want.abs());
    }

    #[test]
    fn quadratic_form_diagonal_on_basis_pair() {
        let f = VectorFamily::new(vec![basis_vector(2, 0), basis_vector(2, 1)]).unwrap();
        let t = ComplexMatrix::from_diag(&[c(2.5, 1.0), c(-1.0, 0.5)]).unwrap();
        let q = lifted_quadratic_form(&t, &f).unwrap();
        assert!((q - c(1.5, 1.5)).norm() < 1e-12);
    }

    #[test]
    fn quadratic_form_matches_full_tensor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for &(n, d) in &[(2usize, 4usize), (3, 5), (3, 6)] {
            for _ in 0..10 {
                let f = random_family(&mut rng, n, d);
                let t = random_matrix(&mut rng, d);
                let q = lifted_quadratic_form(&t, &f).unwrap();
                let psi = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
                let tpsi = lifted_apply(&t, &psi, DEFAULT_TENSOR_BUDGET).unwrap();
                let oracle = tpsi.inner(&psi).unwrap();
                assert!(
                    (q - oracle).norm() <= 1e-9 * oracle.norm().max(1e-12),
                    "n={n} d={d}: {q} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn degenerate_family_rejected_with_det() {
        let f = VectorFamily::new(vec![basis_vector(3, 0), basis_vector(3, 0)]).unwrap();
        let t = ComplexMatrix::identity(3).unwrap();
        match lifted_quadratic_form(&t, &f) {
            Err(crate::Error::DegenerateFamily { gram_det }) => assert!(gram_det.abs() < 1e-12),
            other => panic!("expected degenerate-family rejection, got {other:?}"),
        }
    }

    #[test]
    fn wedge_tensor_orthonormal_pair_norm_one() {
        let f = VectorFamily::new(vec![basis_vector(2, 0), basis_vector(2, 1)]).unwrap();
        let psi = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
        assert!((psi.norm_sq() - 1.0).abs() < 1e-14);
        assert!(psi.max_antisymmetry_violation() < 1e-14);
    }

    #[test]
    fn wedge_tensor_repeated_vector_vanishes() {
        let v = basis_vector(3, 1);
        let f = VectorFamily::new(vec![v.clone(), v]).unwrap();
        let psi = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
        assert!(psi.norm_sq() < 1e-28);
    }

    #[test]
    fn wedge_inner_products_follow_cauchy_binet() {
        // <u1 ^ u2, v1 ^ v2> = det of the 2x2 mixed Gram matrix <u_j, v_i>
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..10 {
            let u = random_family(&mut rng, 2, 3);
            let v = random_family(&mut rng, 2, 3);
            let pu = build_wedge_tensor(&u, DEFAULT_TENSOR_BUDGET).unwrap();
            let pv = build_wedge_tensor(&v, DEFAULT_TENSOR_BUDGET).unwrap();
            let lhs = pu.inner(&pv).unwrap();
            let m00 = inner(&u.vector(0), &v.vector(0));
            let m01 = inner(&u.vector(1), &v.vector(0));
            let m10 = inner(&u.vector(0), &v.vector(1));
            let m11 = inner(&u.vector(1), &v.vector(1));
            let rhs = m00 * m11 - m01 * m10;
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn sign_flip_on_swap_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        // N = 2: the two permutation terms are identical up to IEEE negation,
        // so the flip is bit-exact
        let f = random_family(&mut rng, 2, 4);
        let g = f.swapped(0, 1);
        let pf = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
        let pg = build_wedge_tensor(&g, DEFAULT_TENSOR_BUDGET).unwrap();
        for (a, b) in pf.coeffs().iter().zip(pg.coeffs().iter()) {
            assert_eq!(*a, -*b);
        }
        // N = 3: the permutation sum is accumulated in a different order, so
        // the flip holds to rounding
        let f = random_family(&mut rng, 3, 4);
        let g = f.swapped(0, 2);
        let pf = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
        let pg = build_wedge_tensor(&g, DEFAULT_TENSOR_BUDGET).unwrap();
        let scale = pf.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (a, b) in pf.coeffs().iter().zip(pg.coeffs().iter()) {
            assert!((a + b).norm() <= 1e-14 * scale);
        }
    }

    #[test]
    fn lifted_apply_identity_and_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let f = random_family(&mut rng, 2, 3);
        let psi = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
        let id = ComplexMatrix::identity(3).unwrap();
        let out = lifted_apply(&id, &psi, DEFAULT_TENSOR_BUDGET).unwrap();
        for (a, b) in out.coeffs().iter().zip(psi.coeffs().iter()) {
            assert!((a - b * 2.0).norm() < 1e-13);
        }
        let zero = ComplexMatrix::zeros(3).unwrap();
        let out = lifted_apply(&zero, &psi, DEFAULT_TENSOR_BUDGET).unwrap();
        assert!(out.norm_sq() == 0.0);
    }

    #[test]
    fn diagonal_eigentensor() {
        // wedge of basis vectors is an eigenvector of the lifted diagonal
        // operator, with eigenvalue the sum of the selected diagonal entries
        let d = 5;
        let diag: Vec<C> = (0..d).map(|k| c(k as f64 + 0.5, 0.25 * k as f64)).collect();
        let t = ComplexMatrix::from_diag(&diag).unwrap();
        let f = VectorFamily::new(vec![basis_vector(d, 1), basis_vector(d, 3), basis_vector(d, 4)])
            .unwrap();
        let psi = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
        let out = lifted_apply(&t, &psi, DEFAULT_TENSOR_BUDGET).unwrap();
        let lam = diag[1] + diag[3] + diag[4];
        for (a, b) in out.coeffs().iter().zip(psi.coeffs().iter()) {
            assert!((a - b * lam).norm() < 1e-12);
        }
    }

    #[test]
    fn lifted_apply_preserves_antisymmetric_subspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let f = random_family(&mut rng, 3, 4);
        let t = random_matrix(&mut rng, 4);
        let psi = build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET).unwrap();
        let out = lifted_apply(&t, &psi, DEFAULT_TENSOR_BUDGET).unwrap();
        let scale = out.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(out.max_antisymmetry_violation() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn budget_guard_rejects_large_instances() {
        let f = random_family(&mut ChaCha8Rng::seed_from_u64(1), 8, 12);
        assert!(matches!(
            build_wedge_tensor(&f, DEFAULT_TENSOR_BUDGET),
            Err(crate::Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn kyfan_examples() {
        let t = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        assert_eq!(kyfan_sum(&t, 2, Convention::Raw).unwrap(), 4.0);
        assert_eq!(kyfan_sum(&t, 3, Convention::ClampAtZero).unwrap(), 4.0);
        assert_eq!(kyfan_sum(&t, 3, Convention::Raw).unwrap(), 2.0);
        assert!(kyfan_sum(&t, 4, Convention::Raw).is_err());
        // beyond the dimension the clamped terms are the essential value 0
        assert_eq!(kyfan_sum(&t, 7, Convention::ClampAtZero).unwrap(), 4.0);
    }

    #[test]
    fn kyfan_variational_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let d = 6;
        let g = random_matrix(&mut rng, d);
        let t = g.add(&g.adjoint()).unwrap().scale_re(0.5);
        let fan = kyfan_sum(&t, 2, Convention::Raw).unwrap();
        // random orthonormal pairs give lower bounds
        for _ in 0..200 {
            let f = random_family(&mut rng, 2, d);
            let a = gram_matrix(&f);
            let eig = hermitian_spectrum(&a).unwrap();
            if eig.eigenvalues.last().copied().unwrap_or(0.0) < 1e-8 {
                continue;
            }
            // orthonormalise by A^{-1/2}
            let q = lifted_quadratic_form(&t, &f).unwrap();
            let w = wedge_norm_sq(&f).unwrap();
            assert!(q.re / w <= fan + 1e-9 * (1.0 + fan.abs()));
        }
        // eigenvector pair attains the sum
        let eig = hermitian_spectrum(&t).unwrap();
        let u = eig.basis.as_array();
        let v0 = Array1::from_shape_fn(d, |i| u[(i, 0)]);
        let v1 = Array1::from_shape_fn(d, |i| u[(i, 1)]);
        let f = VectorFamily::new(vec![v0, v1]).unwrap();
        let q = lifted_quadratic_form(&t, &f).unwrap();
        let w = wedge_norm_sq(&f).unwrap();
        assert!((q.re / w - fan).abs() <= 1e-9 * (1.0 + fan.abs()));
    }

    #[test]
    fn hermitian_psd_lift_properties() {
        // Gram-side statements for selfadjoint non-negative operators:
        // M is PSD and the quadratic form is (numerically) real non-negative
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..20 {
            let d = 5;
            let g = random_matrix(&mut rng, d);
            let t = g.adjoint().matmul(&g).unwrap();
            let f = random_family(&mut rng, 3, d);
            let m = mixed_matrix(&t, &f).unwrap();
            let eigs = hermitian_spectrum(&m).unwrap().eigenvalues;
            let m_norm = eigs.iter().map(|x| x.abs()).fold(0.0, f64::max);
            assert!(eigs.last().copied().unwrap() >= -1e-10 * m_norm);

            let q = lifted_quadratic_form(&t, &f).unwrap();
            let scale = q.norm().max(wedge_norm_sq(&f).unwrap() * m_norm).max(1e-30);
            assert!(q.re >= -1e-10 * scale);
            assert!(q.im.abs() <= 1e-10 * scale);
        }
    }
}
