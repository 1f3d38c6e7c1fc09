//! Brute-force thermal oracle: exact diagonalization of the coupled
//! two-mode Hamiltonian on a truncated occupation basis.
//!
//! On the basis |n_a, n_b> with 0 <= n_a, n_b <= n_max the coupled block is
//!
//! ```text
//! model 1:  A n_a + B n_b + (g/2)(a' b + b' a)      (conserves n_a + n_b)
//! model 2:  A n_a + B n_b + (g/2)(a' b' + a b)      (conserves n_a - n_b)
//! ```
//!
//! with A = eps_q - mu and B = Omega. Thermal expectations come from the
//! eigendecomposition of each conserved-charge block (symmetric tridiagonal,
//! LAPACK dstevd); [`thermal_expectations_dense`] keeps the naive dense
//! lexicographic construction on an independent eigensolver as a cross-check.

use crate::error::{Error, Result};
use crate::params::ModelVariant;

/// Basis guard: (n_max + 1)^2 states at most.
const MAX_BASIS: usize = 1_000_000;
/// Doubling start and cap for [`converged_thermal_expectations`].
const N_MAX_START: usize = 8;
const N_MAX_CAP: usize = 1024;

/// Per-mode occupation cutoff plus the convergence tolerance used by the
/// adaptive driver; also the receipt returned by
/// [`converged_thermal_expectations`] (then `n_max` is the cutoff actually
/// used).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    pub n_max: usize,
    pub tol: f64,
}

/// Thermal expectations of the coupled block in the truncated space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalExpectations {
    /// <n_a> (matter mode).
    pub n_matter: f64,
    /// <n_b> (photon mode).
    pub n_photon: f64,
    /// Re<a' b> for model 1, Re<a' b'> for model 2.
    pub correlation: f64,
    /// Trace of exp(-beta H) over the truncated basis.
    pub partition_value: f64,
}

fn check_stable(model: ModelVariant, a: f64, b: f64, g: f64) -> Result<()> {
    // Both models are thermally stable iff A, B > 0 and 4AB > g^2 (both
    // normal-mode energies positive); otherwise the trace diverges with
    // n_max and truncation artifacts would be returned.
    if model == ModelVariant::Pbg {
        return Err(Error::Domain("the PBG has no coupled block to diagonalize".into()));
    }
    if !(a > 0.0) || !(b > 0.0) || 4.0 * a * b <= g * g {
        return Err(Error::Domain(format!(
            "thermally unstable coupled block: A = {a}, B = {b}, 4AB - g^2 = {}",
            4.0 * a * b - g * g
        )));
    }
    Ok(())
}

/// Exact thermal expectations at per-mode cutoff `n_max`.
pub fn thermal_expectations(
    model: ModelVariant,
    a: f64,
    b: f64,
    g: f64,
    beta: f64,
    n_max: usize,
) -> Result<ThermalExpectations> {
    check_stable(model, a, b, g)?;
    if n_max < 1 {
        return Err(Error::InvalidParams("n_max must be >= 1".into()));
    }
    if (n_max + 1) * (n_max + 1) > MAX_BASIS {
        return Err(Error::InvalidParams(format!(
            "basis dimension ({})^2 exceeds the guard of {MAX_BASIS}",
            n_max + 1
        )));
    }
    let mut acc = Accumulator::default();
    match model {
        ModelVariant::Model1 => {
            // blocks of conserved N = n_a + n_b
            for total in 0..=(2 * n_max) {
                let lo = total.saturating_sub(n_max);
                let hi = total.min(n_max);
                let na: Vec<f64> = (lo..=hi).map(|m| m as f64).collect();
                let nb: Vec<f64> = (lo..=hi).map(|m| (total - m) as f64).collect();
                // a' b raises n_a: <na+1, nb-1 | a' b | na, nb> = sqrt((na+1) nb)
                let coef: Vec<f64> =
                    (lo..hi).map(|m| (((m + 1) * (total - m)) as f64).sqrt()).collect();
                acc.add_block(&na, &nb, &coef, a, b, g, beta)?;
            }
        }
        ModelVariant::Model2 => {
            // blocks of conserved D = n_a - n_b
            for dd in -(n_max as i64)..=(n_max as i64) {
                let extra = dd.unsigned_abs() as usize;
                let len = n_max - extra + 1;
                let (na, nb): (Vec<f64>, Vec<f64>) = if dd >= 0 {
                    (
                        (0..len).map(|j| (j + extra) as f64).collect(),
                        (0..len).map(|j| j as f64).collect(),
                    )
                } else {
                    (
                        (0..len).map(|j| j as f64).collect(),
                        (0..len).map(|j| (j + extra) as f64).collect(),
                    )
                };
                // a' b' raises both: <na+1, nb+1 | a' b' | na, nb> = sqrt((na+1)(nb+1))
                let coef: Vec<f64> = (0..len.saturating_sub(1))
                    .map(|j| ((na[j] + 1.0) * (nb[j] + 1.0)).sqrt())
                    .collect();
                acc.add_block(&na, &nb, &coef, a, b, g, beta)?;
            }
        }
        ModelVariant::Pbg => unreachable!(),
    }
    Ok(acc.finish())
}

#[derive(Default)]
struct Accumulator {
    z: f64,
    na: f64,
    nb: f64,
    cross: f64,
}

impl Accumulator {
    /// Diagonalize one conserved-charge block (symmetric tridiagonal with
    /// diagonal A na + B nb and off-diagonal (g/2) coef) and fold its
    /// Boltzmann-weighted observables into the running sums.
    #[allow(clippy::too_many_arguments)]
    fn add_block(
        &mut self,
        na: &[f64],
        nb: &[f64],
        coef: &[f64],
        a: f64,
        b: f64,
        g: f64,
        beta: f64,
    ) -> Result<()> {
        let n = na.len();
        let diag: Vec<f64> = (0..n).map(|j| a * na[j] + b * nb[j]).collect();
        if n == 1 || g == 0.0 {
            for j in 0..n {
                let w = (-beta * diag[j]).exp();
                self.z += w;
                self.na += w * na[j];
                self.nb += w * nb[j];
            }
            return Ok(());
        }
        let off: Vec<f64> = coef.iter().map(|c| 0.5 * g * c).collect();
        let (vals, vecs) = lapack::symtridiag_eigh(&diag, &off)?;
        for (i, &lambda) in vals.iter().enumerate() {
            let w = (-beta * lambda).exp();
            if w == 0.0 {
                continue;
            }
            let v = &vecs[i * n..(i + 1) * n];
            let mut pa = 0.0;
            let mut pb = 0.0;
            for j in 0..n {
                let p = v[j] * v[j];
                pa += p * na[j];
                pb += p * nb[j];
            }
            let mut cx = 0.0;
            for j in 0..n - 1 {
                cx += v[j] * v[j + 1] * coef[j];
            }
            self.z += w;
            self.na += w * pa;
            self.nb += w * pb;
            self.cross += w * cx;
        }
        Ok(())
    }

    fn finish(&self) -> ThermalExpectations {
        ThermalExpectations {
            n_matter: self.na / self.z,
            n_photon: self.nb / self.z,
            correlation: self.cross / self.z,
            partition_value: self.z,
        }
    }
}

/// Naive reference path: the full (n_max+1)^2 Hamiltonian in lexicographic
/// (n_a, n_b) order, eigendecomposed with a dense solver independent of the
/// LAPACK route. Small n_max only; used to cross-check the block path.
pub fn thermal_expectations_dense(
    model: ModelVariant,
    a: f64,
    b: f64,
    g: f64,
    beta: f64,
    n_max: usize,
) -> Result<ThermalExpectations> {
    check_stable(model, a, b, g)?;
    let np = n_max + 1;
    let dim = np * np;
    if dim > 2500 {
        return Err(Error::InvalidParams(format!(
            "dense reference path capped at basis dimension 2500, got {dim}"
        )));
    }
    let idx = |na: usize, nb: usize| na * np + nb;
    let mut h = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    // symmetrized coupling operator (X + X^T)/2 used for Re<X>
    let mut sym = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    for na in 0..np {
        for nb in 0..np {
            let s = idx(na, nb);
            h[(s, s)] = a * na as f64 + b * nb as f64;
            match model {
                ModelVariant::Model1 => {
                    if na + 1 < np && nb > 0 {
                        let t = idx(na + 1, nb - 1);
                        let c = (((na + 1) * nb) as f64).sqrt();
                        h[(t, s)] += 0.5 * g * c;
                        h[(s, t)] += 0.5 * g * c;
                        sym[(t, s)] += 0.5 * c;
                        sym[(s, t)] += 0.5 * c;
                    }
                }
                ModelVariant::Model2 => {
                    if na + 1 < np && nb + 1 < np {
                        let t = idx(na + 1, nb + 1);
                        let c = (((na + 1) * (nb + 1)) as f64).sqrt();
                        h[(t, s)] += 0.5 * g * c;
                        h[(s, t)] += 0.5 * g * c;
                        sym[(t, s)] += 0.5 * c;
                        sym[(s, t)] += 0.5 * c;
                    }
                }
                ModelVariant::Pbg => unreachable!(),
            }
        }
    }
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut acc = Accumulator::default();
    for i in 0..dim {
        let w = (-beta * eig.eigenvalues[i]).exp();
        if w == 0.0 {
            continue;
        }
        let v = eig.eigenvectors.column(i);
        let mut pa = 0.0;
        let mut pb = 0.0;
        for na in 0..np {
            for nb in 0..np {
                let p = v[idx(na, nb)] * v[idx(na, nb)];
                pa += p * na as f64;
                pb += p * nb as f64;
            }
        }
        let cx = (&sym * v).dot(&v);
        acc.z += w;
        acc.na += w * pa;
        acc.nb += w * pb;
        acc.cross += w * cx;
    }
    Ok(acc.finish())
}

/// Doubles `n_max` from 8 until all three observables change by less than
/// `tol` between successive truncations; returns the converged values and
/// the cutoff used.
pub fn converged_thermal_expectations(
    model: ModelVariant,
    a: f64,
    b: f64,
    g: f64,
    beta: f64,
    tol: f64,
) -> Result<(ThermalExpectations, TruncationSpec)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tol = {tol} must be > 0")));
    }
    let close = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs()) + 0.01 * tol;
    let mut n_max = N_MAX_START;
    let mut prev = thermal_expectations(model, a, b, g, beta, n_max)?;
    while 2 * n_max <= N_MAX_CAP && (2 * n_max + 1) * (2 * n_max + 1) <= MAX_BASIS {
        n_max *= 2;
        let cur = thermal_expectations(model, a, b, g, beta, n_max)?;
        if close(cur.n_matter, prev.n_matter)
            && close(cur.n_photon, prev.n_photon)
            && close(cur.correlation, prev.correlation)
        {
            return Ok((cur, TruncationSpec { n_max, tol }));
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "truncated Fock thermal expectations".into(),
        details: format!(
            "not converged by n_max = {N_MAX_CAP} within the basis guard \
             (n_max+1)^2 <= {MAX_BASIS}; last n_matter = {:.6e} at n_max = {n_max} \
             (occupation ~ 1/(beta E_min) may require a cutoff beyond the cap)",
            prev.n_matter
        ),
    })
}

/// Symmetric tridiagonal eigendecomposition through LAPACK's
/// divide-and-conquer driver.
mod lapack {
    use crate::error::{Error, Result};

    extern "C" {
        fn dstevd_(
            jobz: *const u8,
            n: *const i32,
            d: *mut f64,
            e: *mut f64,
            z: *mut f64,
            ldz: *const i32,
            work: *mut f64,
            lwork: *const i32,
            iwork: *mut i32,
            liwork: *const i32,
            info: *mut i32,
        );
    }

    /// Eigenvalues (ascending) and column-major eigenvectors of the
    /// symmetric tridiagonal matrix with the given diagonal and
    /// off-diagonal. `off.len()` must be `diag.len() - 1`.
    pub fn symtridiag_eigh(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = diag.len();
        assert_eq!(off.len(), n - 1);
        let ni = n as i32;
        let mut d = diag.to_vec();
        let mut e = off.to_vec();
        e.push(0.0);
        let mut z = vec![0.0f64; n * n];
        let lwork = (1 + 4 * n + n * n) as i32;
        let liwork = (3 + 5 * n) as i32;
        let mut work = vec![0.0f64; lwork as usize];
        let mut iwork = vec![0i32; liwork as usize];
        let mut info = 0i32;
        unsafe {
            dstevd_(
                b"V".as_ptr(),
                &ni,
                d.as_mut_ptr(),
                e.as_mut_ptr(),
                z.as_mut_ptr(),
                &ni,
                work.as_mut_ptr(),
                &lwork,
                iwork.as_mut_ptr(),
                &liwork,
                &mut info,
            );
        }
        if info != 0 {
            return Err(Error::NonConvergence {
                what: "LAPACK dstevd".into(),
                details: format!("info = {info} for n = {n}"),
            });
        }
        Ok((d, z))
    }
}
