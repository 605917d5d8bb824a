//! The experiment roster. Each module holds one registered strategy.

pub mod abstract_bound;
pub mod accumulation_sweep;
pub mod antisym_oracle;
pub mod constants_table;
pub mod jordan_split;
pub mod schrodinger_bounds;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use bscount_core::linalg::ComplexMatrix;

/// Standard complex Gaussian matrix (independent N(0,1) real and imaginary
/// parts, row-major draw order).
pub(crate) fn gaussian_complex(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..n * n)
        .map(|_| {
            Complex64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            )
        })
        .collect();
    ComplexMatrix::from_fn(n, |(i, j)| entries[i * n + j]).expect("finite draws")
}

/// Real Gaussian matrix embedded in the complex carrier.
pub(crate) fn gaussian_real(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let entries: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    ComplexMatrix::from_fn(n, |(i, j)| Complex64::new(entries[i * n + j], 0.0))
        .expect("finite draws")
}
