fn main() {
    // LAPACK/BLAS provider. Debian's libopenblas bundles BLAS, CBLAS and the
    // full LAPACK symbol set in one shared object.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
