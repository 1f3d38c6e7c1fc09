//! Closed-form diagonalization of the coupled (matter mode, photon) block.
//!
//! Model 1 (rotation): with A = eps_q - mu and B = Omega,
//!
//! ```text
//! E_1± = ((A + B) ± sqrt((B - A)^2 + g^2)) / 2,
//! tan 2θ = -g / (B - A),
//! ```
//!
//! so E_+ + E_- = A + B and E_+ E_- = A B - g^2/4.
//!
//! Model 2 (Bogoliubov squeezing): exists only while (A + B)^2 > g^2,
//!
//! ```text
//! E_2± = (±(A - B) + sqrt((A + B)^2 - g^2)) / 2,
//! tanh 2φ = -g / (A + B),
//! ```
//!
//! so E_+ - E_- = A - B, E_+ + E_- = sqrt((A + B)^2 - g^2), and again
//! E_+ E_- = A B - g^2/4.
//!
//! Both products vanish linearly at mu = eps_q - g^2/(4 Omega); the small
//! branch is therefore computed as product / (large branch), which is exact
//! at the stability boundary and free of cancellation near it.

use crate::error::{Error, Result};
use crate::params::{ModelParams, ModelVariant};

/// Normal-mode energies of the coupled block plus the mixing parameter
/// (rotation angle for model 1, squeezing rapidity for model 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPair {
    pub e_plus: f64,
    pub e_minus: f64,
    pub mixing: f64,
    pub model: ModelVariant,
}

/// Model-1 normal modes from (A = eps_q - mu, B = Omega, g).
///
/// The mixing angle is fixed in (-pi/4, pi/4] by continuity at g = 0.
pub fn model1_spectrum(eps_q: f64, mu: f64, omega: f64, g: f64) -> SpectrumPair {
    let a = eps_q - mu;
    let (e_plus, e_minus) = model1_energies(a, omega, g);
    let mixing = if g == 0.0 {
        0.0
    } else if a >= omega {
        0.5 * g.atan2(a - omega)
    } else {
        0.5 * (-g).atan2(omega - a)
    };
    SpectrumPair { e_plus, e_minus, mixing, model: ModelVariant::Model1 }
}

/// Model-1 energies in the raw block parametrization (A = eps_q - mu,
/// B = Omega).
pub fn model1_energies(a: f64, b: f64, g: f64) -> (f64, f64) {
    let disc = (b - a).hypot(g);
    let e_plus = 0.5 * ((a + b) + disc);
    let e_minus = if e_plus == 0.0 { 0.0 } else { (a * b - 0.25 * g * g) / e_plus };
    (e_plus, e_minus)
}

/// Model-2 normal modes; errors with the squeezing divergence when
/// (A + B)^2 <= g^2 and the Bogoliubov transformation does not exist.
pub fn model2_spectrum(eps_q: f64, mu: f64, omega: f64, g: f64) -> Result<SpectrumPair> {
    let a = eps_q - mu;
    let (e_plus, e_minus) = model2_energies(a, omega, g)?;
    let mixing = if g == 0.0 { 0.0 } else { 0.5 * (-g / (a + omega)).atanh() };
    Ok(SpectrumPair { e_plus, e_minus, mixing, model: ModelVariant::Model2 })
}

/// Model-2 energies in the raw block parametrization.
pub fn model2_energies(a: f64, b: f64, g: f64) -> Result<(f64, f64)> {
    let s = a + b;
    if s * s <= g * g {
        return Err(Error::SqueezingDivergence { lhs: s * s, rhs: g * g });
    }
    // (s-g)(s+g) halves the cancellation error of s^2 - g^2 near the edge
    let r = ((s - g) * (s + g)).sqrt();
    let e_max = 0.5 * ((a - b).abs() + r);
    let e_min = (a * b - 0.25 * g * g) / e_max;
    Ok(if a >= b { (e_max, e_min) } else { (e_min, e_max) })
}

/// Independent spectral check: eigenvalues computed by a general-purpose
/// eigensolver, never through the closed forms.
///
/// Model 1: the Hermitian 2x2 block [[A, g/2], [g/2, B]], sorted descending.
/// Model 2: the linear-dynamics matrix [[A, g/2], [-g/2, -B]] has spectrum
/// {E_+, -E_-}; complex eigenvalues signal the squeezing divergence.
pub fn numerical_spectrum_oracle(
    model: ModelVariant,
    a: f64,
    b: f64,
    g: f64,
) -> Result<(f64, f64)> {
    match model {
        ModelVariant::Pbg | ModelVariant::Model1 => {
            let m = nalgebra::Matrix2::new(a, 0.5 * g, 0.5 * g, b);
            let eig = nalgebra::SymmetricEigen::new(m);
            let (x, y) = (eig.eigenvalues[0], eig.eigenvalues[1]);
            Ok((x.max(y), x.min(y)))
        }
        ModelVariant::Model2 => {
            let m = nalgebra::Matrix2::new(a, 0.5 * g, -0.5 * g, -b);
            let eig = m.complex_eigenvalues();
            let scale = a.abs() + b.abs() + g.abs();
            if eig[0].im.abs() > 1e-12 * scale {
                return Err(Error::SqueezingDivergence { lhs: (a + b) * (a + b), rhs: g * g });
            }
            let (x, y) = (eig[0].re, eig[1].re);
            // spectrum is {E_+, -E_-}: the larger root is E_+, the smaller is -E_-
            Ok((x.max(y), -x.min(y)))
        }
    }
}

/// Stability verdict at chemical potential `mu`: stable iff mu <= mu_c.
/// `margin` is the smaller normal-mode energy of the coupled block (negative
/// beyond the boundary, `None` where the model-2 transformation does not
/// exist; -mu for the PBG's zero mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub margin: Option<f64>,
}

/// Chemical potential at which the soft normal mode has the given gap
/// (the smaller of E+ and E-). The gap closes at the coupled divergence
/// point and saturates at Omega as mu -> -infinity, so `e_min` must lie in
/// (0, Omega); monotonicity of the gap in mu makes the inverse unique.
pub fn mu_for_soft_gap(params: &ModelParams, e_min: f64) -> Result<f64> {
    if params.variant == ModelVariant::Pbg {
        return Err(Error::Domain("the PBG has no coupled-mode gap".into()));
    }
    if !(e_min > 0.0) || e_min >= params.omega {
        return Err(Error::Domain(format!(
            "soft gap {e_min} not reachable: the gap spans (0, Omega = {})",
            params.omega
        )));
    }
    let gap = |mu: f64| -> Result<f64> {
        let (ep, em) = match params.variant {
            ModelVariant::Model1 => model1_energies(params.eps_q - mu, params.omega, params.g),
            _ => model2_energies(params.eps_q - mu, params.omega, params.g)?,
        };
        Ok(ep.min(em))
    };
    let mut hi = params.coupled_divergence_mu(); // gap 0 here
    let mut step = 1.0;
    let mut lo = hi - step;
    while gap(lo)? < e_min {
        step *= 2.0;
        lo = hi - step;
        if step > 1e12 {
            return Err(Error::NonConvergence {
                what: "soft-gap inversion".into(),
                details: format!("gap {e_min} not bracketed by mu = {lo}"),
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? > e_min {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(lo.abs()).max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn stability_check(params: &ModelParams, mu: f64) -> StabilityVerdict {
    let stable = mu <= params.critical_chemical_potential();
    let margin = match params.variant {
        ModelVariant::Pbg => Some(-mu),
        ModelVariant::Model1 => {
            let s = model1_spectrum(params.eps_q, mu, params.omega, params.g);
            Some(s.e_minus.min(s.e_plus))
        }
        ModelVariant::Model2 => model2_spectrum(params.eps_q, mu, params.omega, params.g)
            .ok()
            .map(|s| s.e_minus.min(s.e_plus)),
    };
    StabilityVerdict { stable, margin }
}
