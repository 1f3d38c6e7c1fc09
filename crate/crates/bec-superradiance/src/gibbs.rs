//! Grand-canonical expectations of the coupled (matter, photon) block and
//! the thermodynamic-limit condensate densities.
//!
//! With A = eps_q - mu, B = Omega, n± the Bose occupations of the normal
//! modes E± and D = E+ - E-, the model-1 (rotation) expectations are
//!
//! ```text
//! <a' a> = ((n+ + n-) - ((B-A)/D)(n+ - n-)) / 2
//! <b' b> = ((n+ + n-) + ((B-A)/D)(n+ - n-)) / 2
//! <a' b> = (g/2)(n+ - n-) / D                    (<= 0 for g >= 0)
//! ```
//!
//! and the model-2 (squeezing) expectations, with R = E+ + E-,
//! cosh^2 = (A+B+R)/2R, sinh^2 = g^2/(2R(A+B+R)),
//!
//! ```text
//! <a' a>  = cosh^2 n+ + sinh^2 n- + sinh^2
//! <b' b>  = sinh^2 n+ + cosh^2 n- + sinh^2
//! <a' b'> = -(g/2R)(n+ + n- + 1)                 (<= 0 for g >= 0)
//! ```
//!
//! The matter and photon modes of model 2 keep a nonzero zero-temperature
//! (squeezed-vacuum) occupation sinh^2 when g > 0. All block values are
//! counts, not densities; only `free_density` carries the 1/V.

use crate::error::{Error, Result};
use crate::lattice::{self, VolumeSpec};
use crate::params::{Density, ModelParams, ModelVariant, Regime, RegimeTag};
use crate::spectrum;

/// Bose occupation 1/(e^x - 1) for x > 0.
fn occ(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

/// Expectations of the coupled block (counts) plus the free-mode density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationSet {
    /// Coupled matter-mode count <a' a>.
    pub matter_mode: f64,
    /// Photon count <b' b>.
    pub photon_mode: f64,
    /// Cross expectation: Re<a' b> (model 1), Re<a' b'> (model 2), 0 (PBG).
    pub correlation: f64,
    /// V^-1 sum of the free-mode occupations.
    pub free_density: f64,
}

/// Coupled-block counts alone (no volume involved).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledBlock {
    pub matter: f64,
    pub photon: f64,
    pub correlation: f64,
}

fn instability_guard(params: &ModelParams, mu: f64) -> Result<()> {
    let mu_c = params.critical_chemical_potential();
    if mu >= mu_c {
        return Err(Error::Instability { mu, mu_c });
    }
    Ok(())
}

/// Coupled-block expectations at chemical potential `mu < mu_c`.
///
/// For the PBG the "coupled block" is the k = 0 matter mode together with
/// the decoupled photon mode (their g = 0 limits), which is what the
/// interacting models reduce to.
pub fn coupled_occupations(params: &ModelParams, mu: f64) -> Result<CoupledBlock> {
    instability_guard(params, mu)?;
    let beta = params.beta;
    let (a, b, g) = (params.eps_q - mu, params.omega, params.g);
    match params.variant {
        ModelVariant::Pbg => Ok(CoupledBlock {
            matter: occ(-beta * mu),
            photon: occ(beta * b),
            correlation: 0.0,
        }),
        ModelVariant::Model1 => {
            if g == 0.0 {
                return Ok(CoupledBlock {
                    matter: occ(beta * a),
                    photon: occ(beta * b),
                    correlation: 0.0,
                });
            }
            let (e_plus, e_minus) = spectrum::model1_energies(a, b, g);
            Ok(model1_block_from_energies(a, b, g, beta, e_plus, e_minus))
        }
        ModelVariant::Model2 => {
            if g == 0.0 {
                return Ok(CoupledBlock {
                    matter: occ(beta * a),
                    photon: occ(beta * b),
                    correlation: 0.0,
                });
            }
            let (e_plus, e_minus) = spectrum::model2_energies(a, b, g)?;
            Ok(model2_block_from_energies(a, b, g, beta, e_plus, e_minus))
        }
    }
}

/// Model-1 expectations with the normal-mode energies supplied by the
/// caller (the solver feeds cancellation-free energies near criticality).
pub(crate) fn model1_block_from_energies(
    a: f64,
    b: f64,
    g: f64,
    beta: f64,
    e_plus: f64,
    e_minus: f64,
) -> CoupledBlock {
    let delta = b - a;
    let d = e_plus - e_minus;
    // (D -+ |delta|)/(2D) without cancellation
    let w_small = g * g / (2.0 * d * (d + delta.abs()));
    let w_big = 1.0 - w_small;
    let (n_plus, n_minus) = (occ(beta * e_plus), occ(beta * e_minus));
    let (wm_plus, wm_minus) = if delta >= 0.0 { (w_small, w_big) } else { (w_big, w_small) };
    CoupledBlock {
        matter: wm_plus * n_plus + wm_minus * n_minus,
        photon: wm_minus * n_plus + wm_plus * n_minus,
        correlation: 0.5 * g * (n_plus - n_minus) / d,
    }
}

pub(crate) fn model2_block_from_energies(
    a: f64,
    b: f64,
    g: f64,
    beta: f64,
    e_plus: f64,
    e_minus: f64,
) -> CoupledBlock {
    let r = e_plus + e_minus;
    let cosh2 = (a + b + r) / (2.0 * r);
    let sinh2 = g * g / (2.0 * r * (a + b + r));
    let cs = -g / (2.0 * r);
    let (n_plus, n_minus) = (occ(beta * e_plus), occ(beta * e_minus));
    CoupledBlock {
        matter: cosh2 * n_plus + sinh2 * n_minus + sinh2,
        photon: sinh2 * n_plus + cosh2 * n_minus + sinh2,
        correlation: cs * (n_plus + n_minus + 1.0),
    }
}

fn occupation_set_impl(
    params: &ModelParams,
    mu: f64,
    vol: &VolumeSpec,
    expect: ModelVariant,
) -> Result<OccupationSet> {
    if params.variant != expect {
        return Err(Error::InvalidParams(format!(
            "expected a {expect} parameter set, got {}",
            params.variant
        )));
    }
    let block = coupled_occupations(params, mu)?;
    let free_density = lattice::free_mode_density(vol, params, mu)?;
    Ok(OccupationSet {
        matter_mode: block.matter,
        photon_mode: block.photon,
        correlation: block.correlation,
        free_density,
    })
}

/// Model-1 finite-volume expectations (counts for the coupled block,
/// density for the free modes).
pub fn model1_occupations(params: &ModelParams, mu: f64, vol: &VolumeSpec) -> Result<OccupationSet> {
    occupation_set_impl(params, mu, vol, ModelVariant::Model1)
}

/// Model-2 finite-volume expectations.
pub fn model2_occupations(params: &ModelParams, mu: f64, vol: &VolumeSpec) -> Result<OccupationSet> {
    occupation_set_impl(params, mu, vol, ModelVariant::Model2)
}

/// PBG finite-volume expectations (matter mode = the k = 0 mode).
pub fn pbg_occupations(params: &ModelParams, mu: f64, vol: &VolumeSpec) -> Result<OccupationSet> {
    occupation_set_impl(params, mu, vol, ModelVariant::Pbg)
}

/// Variant-dispatched [`OccupationSet`].
pub fn occupation_set(params: &ModelParams, mu: f64, vol: &VolumeSpec) -> Result<OccupationSet> {
    occupation_set_impl(params, mu, vol, params.variant)
}

/// Thermodynamic-limit densities of the condensed phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensateReport {
    /// lim <a' a>/V = rho - rho_c in the condensed regime.
    pub matter_condensate: f64,
    /// lim <b' b>/V = (g^2/4 Omega^2)(rho - rho_c).
    pub photon_condensate: f64,
    /// lim of the cross expectation density, -+(g/2 Omega)(rho - rho_c)
    /// (- model 1, + model 2).
    pub correlation_density: f64,
    /// lim <U>/V = -+(g^2/2 Omega)(rho - rho_c) (- model 1, + model 2).
    pub interaction_energy_density: f64,
    pub regime: Regime,
}

/// Which set of limit formulas to report for model 2 with g^2 < 4 Omega^2.
///
/// `Uniform` applies the same expressions in both sub-cases (what the
/// Bogoliubov weight analysis gives and what the finite-volume
/// extrapolation confirms). `Interchanged` swaps g and Omega in the
/// photon/correlation/interaction formulas in that sub-case; it is kept as
/// a comparison variant so the extrapolation can arbitrate between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitVariant {
    Uniform,
    Interchanged,
}

/// Condensate densities in the thermodynamic limit at total density `rho`.
pub fn condensate_limits(params: &ModelParams, rho: f64) -> Result<CondensateReport> {
    condensate_limits_with_variant(params, rho, LimitVariant::Uniform)
}

pub fn condensate_limits_with_variant(
    params: &ModelParams,
    rho: f64,
    variant: LimitVariant,
) -> Result<CondensateReport> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("rho = {rho} must be > 0")));
    }
    let regime = params.regime_for(rho);
    let zero = CondensateReport {
        matter_condensate: 0.0,
        photon_condensate: 0.0,
        correlation_density: 0.0,
        interaction_energy_density: 0.0,
        regime,
    };
    let rho_c = match regime.rho_c {
        Density::Infinite => return Ok(zero),
        Density::Finite(rc) => rc,
    };
    if regime.tag == RegimeTag::Normal {
        return Ok(zero);
    }
    let drho = rho - rho_c;
    let (g, om) = (params.g, params.omega);
    let sign = match params.variant {
        ModelVariant::Model2 => 1.0,
        _ => -1.0,
    };
    let interchange = variant == LimitVariant::Interchanged
        && params.variant == ModelVariant::Model2
        && g > 0.0
        && g * g < 4.0 * om * om;
    let (gg, oo) = if interchange { (om, g) } else { (g, om) };
    Ok(CondensateReport {
        matter_condensate: drho,
        photon_condensate: gg * gg / (4.0 * oo * oo) * drho,
        correlation_density: sign * gg / (2.0 * oo) * drho,
        interaction_energy_density: sign * gg * gg / (2.0 * oo) * drho,
        regime,
    })
}

/// Sign-carrying interaction energy density, a convenience projection of
/// [`condensate_limits`]: negative for model 1 (bound state), positive for
/// model 2, zero without a condensate.
pub fn interaction_energy_density(params: &ModelParams, rho: f64) -> Result<f64> {
    Ok(condensate_limits(params, rho)?.interaction_energy_density)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock;
    use proptest::prelude::*;

    const RHO_C_CRIT5: f64 = 0.018_194_205_980_410_225; // rho_0(-0.5), d=3, beta=1

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn decoupled_occupations() {
        let p = ModelParams::model1(3, 1.0, 2.0, 0.0, 1.0).unwrap();
        let b = coupled_occupations(&p, -0.5).unwrap();
        assert_eq!(b.matter, occ(1.5));
        assert_eq!(b.photon, occ(2.0));
        assert_eq!(b.correlation, 0.0);
        let p = ModelParams::model2(3, 1.0, 2.0, 0.0, 1.0).unwrap();
        let b = coupled_occupations(&p, -0.5).unwrap();
        assert_eq!(b.matter, occ(1.5));
    }

    #[test]
    fn model1_matches_fock_oracle() {
        // beta=1, eps_q=1, mu=-0.5, Omega=2, g=1
        let p = ModelParams::model1(3, 1.0, 2.0, 1.0, 1.0).unwrap();
        let b = coupled_occupations(&p, -0.5).unwrap();
        let (orc, _) =
            fock::converged_thermal_expectations(ModelVariant::Model1, 1.5, 2.0, 1.0, 1.0, 1e-10)
                .unwrap();
        assert!(rel(b.matter, orc.n_matter) < 1e-8, "{} {}", b.matter, orc.n_matter);
        assert!(rel(b.photon, orc.n_photon) < 1e-8);
        assert!(rel(b.correlation, orc.correlation) < 1e-8);
        assert!(b.correlation < 0.0);
    }

    #[test]
    fn model2_matches_fock_oracle() {
        let p = ModelParams::model2(3, 1.0, 2.0, 1.0, 1.0).unwrap();
        let b = coupled_occupations(&p, -0.5).unwrap();
        let (orc, _) =
            fock::converged_thermal_expectations(ModelVariant::Model2, 1.5, 2.0, 1.0, 1.0, 1e-10)
                .unwrap();
        assert!(rel(b.matter, orc.n_matter) < 1e-8);
        assert!(rel(b.photon, orc.n_photon) < 1e-8);
        assert!(rel(b.correlation, orc.correlation) < 1e-8);
        assert!(b.correlation < 0.0);
    }

    #[test]
    fn zero_temperature_limits() {
        // model 1: both normal modes gapped, occupations vanish
        let p = ModelParams::model1(3, 50.0, 2.0, 1.0, 1.0).unwrap();
        let b = coupled_occupations(&p, -0.5).unwrap();
        assert!(b.matter < 1e-10 && b.photon < 1e-10 && b.correlation.abs() < 1e-10);
        // model 2: squeezed vacuum keeps sinh^2 > 0
        let p = ModelParams::model2(3, 50.0, 2.0, 1.0, 1.0).unwrap();
        let b = coupled_occupations(&p, -0.5).unwrap();
        let (a, om, g) = (1.5f64, 2.0f64, 1.0f64);
        let r = ((a + om) * (a + om) - g * g).sqrt();
        let sinh2 = g * g / (2.0 * r * (a + om + r));
        assert!(rel(b.matter, sinh2) < 1e-9, "{} vs {}", b.matter, sinh2);
        assert!(b.matter > 0.0);
    }

    #[test]
    fn instability_errors() {
        let p = ModelParams::model1(3, 1.0, 1.0, 2.0, 0.5).unwrap(); // mu_c = -0.5
        assert!(matches!(
            coupled_occupations(&p, -0.4),
            Err(Error::Instability { .. })
        ));
        assert!(matches!(
            coupled_occupations(&p, -0.5),
            Err(Error::Instability { .. })
        ));
        assert!(coupled_occupations(&p, -0.6).is_ok());
        let p2 = ModelParams::model2(3, 1.0, 1.0, 2.0, 0.5).unwrap();
        assert!(matches!(
            coupled_occupations(&p2, -0.4),
            Err(Error::Instability { .. })
        ));
    }

    #[test]
    fn near_critical_divergence_rate() {
        // occupations diverge like 1/(beta E_1-) with the n_- weight
        let p = ModelParams::model1(3, 1.0, 2.0, 2.0, 0.0).unwrap(); // mu_c = -0.5
        let mu_c = p.critical_chemical_potential();
        let s = spectrum::model1_spectrum(p.eps_q, mu_c - 1e-8, p.omega, p.g);
        let b = coupled_occupations(&p, mu_c - 1e-8).unwrap();
        // weight of n_- in the matter mode at criticality: (D+Delta)/2D = 0.8
        assert!((b.matter * p.beta * s.e_minus - 0.8).abs() < 1e-4, "{}", b.matter * s.e_minus);
    }

    #[test]
    fn condensate_report_spec_values() {
        // model 1, g=1, Omega=2, rho - rho_c = 0.5
        let p = ModelParams::model1(3, 1.0, 2.0, 1.0, 0.0).unwrap(); // mu_c = -1/8
        let rho_c = p.critical_density().finite().unwrap();
        let r = condensate_limits(&p, rho_c + 0.5).unwrap();
        assert!(rel(r.matter_condensate, 0.5) < 1e-12);
        assert!(rel(r.photon_condensate, 0.03125) < 1e-12);
        assert!(rel(r.correlation_density, -0.125) < 1e-12);
        assert!(rel(r.interaction_energy_density, -0.125) < 1e-12);
        assert_eq!(r.regime.tag, RegimeTag::Condensed);

        // continuity at the transition
        let r = condensate_limits(&p, rho_c).unwrap();
        assert_eq!(r.matter_condensate, 0.0);
        assert_eq!(r.regime.tag, RegimeTag::Normal);

        // the benchmark parameter set: rho_c = rho_0(-0.5)
        let p = ModelParams::model1(3, 1.0, 1.0, 2.0, 0.5).unwrap();
        let r = condensate_limits(&p, 0.1).unwrap();
        assert!(rel(r.matter_condensate, 0.1 - RHO_C_CRIT5) < 1e-12);
        assert_eq!(r.regime.tag, RegimeTag::Condensed);
    }

    #[test]
    fn interaction_energy_sign_dichotomy() {
        let p1 = ModelParams::model1(3, 1.0, 1.0, 2.0, 0.5).unwrap();
        let p2 = ModelParams::model2(3, 1.0, 1.0, 2.0, 0.5).unwrap();
        let rho = 0.1;
        let u1 = interaction_energy_density(&p1, rho).unwrap();
        let u2 = interaction_energy_density(&p2, rho).unwrap();
        let drho = rho - RHO_C_CRIT5;
        assert!(u1 < 0.0 && u2 > 0.0);
        assert!(rel(-u1, 2.0 * drho) < 1e-12); // g^2/(2 Omega) = 2
        assert!(rel(u2, 2.0 * drho) < 1e-12);
        // below rho_c: zero
        assert_eq!(interaction_energy_density(&p1, 0.01).unwrap(), 0.0);
    }

    #[test]
    fn interchanged_variant() {
        // only active for model 2 with g^2 < 4 Omega^2
        let p = ModelParams::model2(3, 1.0, 1.0, 1.5, 0.1).unwrap(); // mu_c = -0.4625
        let rho_c = p.critical_density().finite().unwrap();
        let rho = 2.0 * rho_c;
        let uni = condensate_limits_with_variant(&p, rho, LimitVariant::Uniform).unwrap();
        let int = condensate_limits_with_variant(&p, rho, LimitVariant::Interchanged).unwrap();
        let drho = rho - rho_c;
        assert!(rel(uni.photon_condensate, 1.5 * 1.5 / 4.0 * drho) < 1e-12);
        assert!(rel(int.photon_condensate, 1.0 / (4.0 * 1.5 * 1.5) * drho) < 1e-12);
        assert_eq!(uni.matter_condensate, int.matter_condensate);
        // inactive when g^2 >= 4 Omega^2
        let p = ModelParams::model2(3, 1.0, 1.0, 2.5, 0.5).unwrap();
        let rho_c = p.critical_density().finite().unwrap();
        let a = condensate_limits_with_variant(&p, 2.0 * rho_c, LimitVariant::Uniform).unwrap();
        let b =
            condensate_limits_with_variant(&p, 2.0 * rho_c, LimitVariant::Interchanged).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn condensate_ratios() {
        // photon/matter = g^2/4Omega^2 and corr^2/(matter*photon) = 1
        let p = ModelParams::model1(3, 1.0, 1.7, 2.2, 0.3).unwrap();
        let rho_c = p.critical_density().finite().unwrap();
        let r = condensate_limits(&p, 3.0 * rho_c).unwrap();
        let ratio = r.photon_condensate / r.matter_condensate;
        assert!(rel(ratio, 2.2 * 2.2 / (4.0 * 1.7 * 1.7)) < 1e-12);
        let coherence = r.correlation_density * r.correlation_density
            / (r.matter_condensate * r.photon_condensate);
        assert!(rel(coherence, 1.0) < 1e-12);
    }

    proptest! {
        #[test]
        fn cauchy_schwarz_model1(
            eps_q in 0.0f64..2.0,
            omega in 0.1f64..3.0,
            g in 0.0f64..2.0,
            dmu in 0.01f64..3.0,
            beta in 0.2f64..3.0,
        ) {
            let mut p = ModelParams::model1(3, beta, omega, g, eps_q).unwrap();
            p.beta = beta;
            let mu = p.critical_chemical_potential() - dmu;
            let b = coupled_occupations(&p, mu).unwrap();
            prop_assert!(b.matter >= 0.0 && b.photon >= 0.0);
            prop_assert!(
                b.correlation * b.correlation <= b.matter * b.photon * (1.0 + 1e-12)
            );
        }

        #[test]
        fn matter_strictly_increasing_in_mu(
            g in 0.0f64..2.0,
            dmu in 0.02f64..2.0,
        ) {
            let p = ModelParams::model1(3, 1.0, 1.5, g, 0.7).unwrap();
            let mu_c = p.critical_chemical_potential();
            let lo = coupled_occupations(&p, mu_c - dmu - 0.01).unwrap();
            let hi = coupled_occupations(&p, mu_c - dmu).unwrap();
            prop_assert!(hi.matter > lo.matter);
        }
    }
}
