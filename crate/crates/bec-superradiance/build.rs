fn main() {
    // The truncated-Fock thermal oracle diagonalizes symmetric tridiagonal
    // blocks through LAPACK's dstevd. OpenBLAS ships the full LAPACK API.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
