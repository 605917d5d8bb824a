//! Thin FFI onto the system LAPACK (provided by OpenBLAS).
//!
//! Only the handful of drivers the crate needs are bound: the general complex
//! eigensolver (Hessenberg reduction followed by shifted QR, eigenvalues read
//! off the triangular Schur factor), Hermitian/symmetric eigensolvers, the
//! complex SVD and the symmetric tridiagonal eigenvalue routine. All wrappers
//! copy into column-major scratch buffers, run workspace queries, and map
//! nonzero `info` to an explicit error.

use ndarray::Array2;
use num_complex::Complex64;
use std::ffi::c_char;

use crate::error::{Error, Result};

extern "C" {
    fn zgeev_(
        jobvl: *const c_char,
        jobvr: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const i32,
        vr: *mut Complex64,
        ldvr: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn zheev_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut f64,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn dsyev_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        info: *mut i32,
    );

    fn zgesvd_(
        jobu: *const c_char,
        jobvt: *const c_char,
        m: *const i32,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        s: *mut f64,
        u: *mut Complex64,
        ldu: *const i32,
        vt: *mut Complex64,
        ldvt: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn dsterf_(n: *const i32, d: *mut f64, e: *mut f64, info: *mut i32);
}

fn check_info(routine: &'static str, info: i32) -> Result<()> {
    if info == 0 {
        Ok(())
    } else {
        Err(Error::EigFailed { routine, info })
    }
}

/// Column-major copy of a square (or rectangular) ndarray matrix.
fn to_col_major(a: &Array2<Complex64>) -> Vec<Complex64> {
    let (rows, cols) = a.dim();
    let mut buf = vec![Complex64::new(0.0, 0.0); rows * cols];
    for j in 0..cols {
        for i in 0..rows {
            buf[i + j * rows] = a[(i, j)];
        }
    }
    buf
}

fn col_major_to_array(buf: &[Complex64], rows: usize, cols: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((rows, cols), |(i, j)| buf[i + j * rows])
}

/// Eigenvalues (and optionally right eigenvectors) of a general complex matrix.
pub(crate) fn eig_general(
    a: &Array2<Complex64>,
    vectors: bool,
) -> Result<(Vec<Complex64>, Option<Array2<Complex64>>)> {
    let n = a.nrows();
    let ni = n as i32;
    let mut buf = to_col_major(a);
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut vr = vec![Complex64::new(0.0, 0.0); if vectors { n * n } else { 1 }];
    let mut rwork = vec![0.0f64; 2 * n.max(1)];
    let jobvl = b'N' as c_char;
    let jobvr = (if vectors { b'V' } else { b'N' }) as c_char;
    let ldvr = if vectors { ni } else { 1 };
    let mut info = 0i32;

    // workspace query
    let mut wkopt = Complex64::new(0.0, 0.0);
    let query = -1i32;
    unsafe {
        zgeev_(
            &jobvl,
            &jobvr,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            vr.as_mut_ptr(),
            &ldvr,
            &mut wkopt,
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgeev", info)?;
    let lwork = (wkopt.re as i32).max(2 * ni).max(1);
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        zgeev_(
            &jobvl,
            &jobvr,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            vr.as_mut_ptr(),
            &ldvr,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgeev", info)?;
    let vecs = vectors.then(|| col_major_to_array(&vr, n, n));
    Ok((w, vecs))
}

/// Eigenvalues (ascending) and optionally eigenvectors of a complex Hermitian
/// matrix. Only the lower triangle is referenced.
pub(crate) fn eigh(
    a: &Array2<Complex64>,
    vectors: bool,
) -> Result<(Vec<f64>, Option<Array2<Complex64>>)> {
    let n = a.nrows();
    let ni = n as i32;
    let mut buf = to_col_major(a);
    let mut w = vec![0.0f64; n];
    let mut rwork = vec![0.0f64; (3 * n).max(1)];
    let jobz = (if vectors { b'V' } else { b'N' }) as c_char;
    let uplo = b'L' as c_char;
    let mut info = 0i32;

    let mut wkopt = Complex64::new(0.0, 0.0);
    let query = -1i32;
    unsafe {
        zheev_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            &mut wkopt,
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zheev", info)?;
    let lwork = (wkopt.re as i32).max(2 * ni - 1).max(1);
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        zheev_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zheev", info)?;
    let vecs = vectors.then(|| col_major_to_array(&buf, n, n));
    Ok((w, vecs))
}

/// Eigenvalues (ascending) and optionally eigenvectors of a real symmetric
/// matrix. Only the lower triangle is referenced.
pub(crate) fn eigh_real(a: &Array2<f64>, vectors: bool) -> Result<(Vec<f64>, Option<Array2<f64>>)> {
    let n = a.nrows();
    let ni = n as i32;
    let mut buf = vec![0.0f64; n * n];
    for j in 0..n {
        for i in 0..n {
            buf[i + j * n] = a[(i, j)];
        }
    }
    let mut w = vec![0.0f64; n];
    let jobz = (if vectors { b'V' } else { b'N' }) as c_char;
    let uplo = b'L' as c_char;
    let mut info = 0i32;

    let mut wkopt = 0.0f64;
    let query = -1i32;
    unsafe {
        dsyev_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            &mut wkopt,
            &query,
            &mut info,
        );
    }
    check_info("dsyev", info)?;
    let lwork = (wkopt as i32).max(3 * ni - 1).max(1);
    let mut work = vec![0.0f64; lwork as usize];
    unsafe {
        dsyev_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    check_info("dsyev", info)?;
    let vecs = vectors.then(|| Array2::from_shape_fn((n, n), |(i, j)| buf[i + j * n]));
    Ok((w, vecs))
}

/// Singular values (non-increasing) of a complex rectangular matrix.
pub(crate) fn singular_values_raw(a: &Array2<Complex64>) -> Result<Vec<f64>> {
    let (m, n) = a.dim();
    let (mi, ni) = (m as i32, n as i32);
    let k = m.min(n);
    let mut buf = to_col_major(a);
    let mut s = vec![0.0f64; k.max(1)];
    let mut rwork = vec![0.0f64; (5 * k).max(1)];
    let jobu = b'N' as c_char;
    let jobvt = b'N' as c_char;
    let mut info = 0i32;

    let mut wkopt = Complex64::new(0.0, 0.0);
    let query = -1i32;
    unsafe {
        zgesvd_(
            &jobu,
            &jobvt,
            &mi,
            &ni,
            buf.as_mut_ptr(),
            &mi.max(1),
            s.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            std::ptr::null_mut(),
            &1,
            &mut wkopt,
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgesvd", info)?;
    let lwork = (wkopt.re as i32).max(1);
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        zgesvd_(
            &jobu,
            &jobvt,
            &mi,
            &ni,
            buf.as_mut_ptr(),
            &mi.max(1),
            s.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            std::ptr::null_mut(),
            &1,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgesvd", info)?;
    Ok(s)
}

/// All eigenvalues (ascending) of a real symmetric tridiagonal matrix.
pub(crate) fn tridiagonal_eigenvalues_raw(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if off.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!(
            "tridiagonal: diag has {} entries, off-diagonal has {} (want {})",
            n,
            off.len(),
            n - 1
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let ni = n as i32;
    let mut info = 0i32;
    unsafe {
        dsterf_(&ni, d.as_mut_ptr(), e.as_mut_ptr(), &mut info);
    }
    check_info("dsterf", info)?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn zgeev_on_triangular() {
        let a = array![
            [Complex64::new(1.0, 2.0), Complex64::new(3.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(-4.0, 0.5)],
        ];
        let (mut w, _) = eig_general(&a, false).unwrap();
        w.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((w[0] - Complex64::new(-4.0, 0.5)).norm() < 1e-12);
        assert!((w[1] - Complex64::new(1.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn eigh_matches_known_values() {
        let a = array![
            [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)],
            [Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)],
        ];
        let (w, v) = eigh(&a, true).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12);
        assert!((w[1] - 3.0).abs() < 1e-12);
        let v = v.unwrap();
        // residual A v = w v for the first pair
        for i in 0..2 {
            let mut r = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                r += a[(i, k)] * v[(k, 0)];
            }
            assert!((r - v[(i, 0)] * w[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let d = vec![2.0, 2.0, 2.0, 2.0];
        let e = vec![-1.0, -1.0, -1.0];
        let tr = tridiagonal_eigenvalues_raw(&d, &e).unwrap();
        let a = Array2::from_shape_fn((4, 4), |(i, j)| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let (dense, _) = eigh_real(&a, false).unwrap();
        for (x, y) in tr.iter().zip(dense.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
