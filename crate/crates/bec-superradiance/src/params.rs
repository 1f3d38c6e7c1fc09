//! Physical parameters, stability thresholds and critical constants.
//!
//! Two solvable models couple a perfect Bose gas (PBG) in a periodic box to a
//! one-mode photon field of energy `Omega`:
//!
//! * model 1 mixes the matter mode with the photon through a
//!   number-conserving rotation, coupling `(g/2)(a' b + a b')`;
//! * model 2 pairs them through a squeezing interaction `(g/2)(a' b' + a b)`.
//!
//! Both share the stability threshold `mu_c = min(0, eps_q - g^2/(4 Omega))`
//! for the chemical potential, and condense above the critical density
//! `rho_c = rho_0(mu_c)` where `rho_0` is the Bose density integral
//! (see [`crate::specfun`]).

use crate::error::{Error, Result};
use crate::specfun;
use serde::{Deserialize, Serialize};

/// Which Hamiltonian the parameters describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelVariant {
    /// Perfect Bose gas, no photon coupling.
    Pbg,
    /// Rotation-coupled model (number-conserving interaction).
    Model1,
    /// Squeezing-coupled model (pair-creating interaction).
    Model2,
}

impl std::fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelVariant::Pbg => write!(f, "pbg"),
            ModelVariant::Model1 => write!(f, "1"),
            ModelVariant::Model2 => write!(f, "2"),
        }
    }
}

/// Full physical specification of one model instance.
///
/// Natural units: `c_kin` is the kinetic coefficient in `eps_k = c_kin k^2`
/// (i.e. hbar^2/2m, default 1) and every energy is dimensionless. The
/// chemical potential `mu` is *not* a field; operations take it as a free
/// argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub variant: ModelVariant,
    /// Spatial dimension, 1..=3.
    pub d: u32,
    /// Kinetic coefficient in eps_k = c_kin k^2 (> 0).
    pub c_kin: f64,
    /// Photon energy (> 0).
    pub omega: f64,
    /// Matter-photon coupling (>= 0; must be 0 for the PBG).
    pub g: f64,
    /// Kinetic energy of the coupled matter mode (>= 0).
    pub eps_q: f64,
    /// Inverse temperature (> 0).
    pub beta: f64,
}

impl ModelParams {
    pub fn new(
        variant: ModelVariant,
        d: u32,
        c_kin: f64,
        omega: f64,
        g: f64,
        eps_q: f64,
        beta: f64,
    ) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidParams(format!("d = {d} not in 1..=3")));
        }
        if !(c_kin > 0.0) || !c_kin.is_finite() {
            return Err(Error::InvalidParams(format!("c_kin = {c_kin} must be > 0")));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParams(format!("omega = {omega} must be > 0")));
        }
        if !(g >= 0.0) || !g.is_finite() {
            return Err(Error::InvalidParams(format!("g = {g} must be >= 0")));
        }
        if !(eps_q >= 0.0) || !eps_q.is_finite() {
            return Err(Error::InvalidParams(format!("eps_q = {eps_q} must be >= 0")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParams(format!("beta = {beta} must be > 0")));
        }
        if variant == ModelVariant::Pbg && g != 0.0 {
            return Err(Error::InvalidParams(format!(
                "PBG has no photon coupling; g = {g} must be 0"
            )));
        }
        Ok(ModelParams { variant, d, c_kin, omega, g, eps_q, beta })
    }

    /// Perfect Bose gas in natural units (the photon sector is decoupled
    /// and `omega` only enters its trivial free occupation).
    pub fn pbg(d: u32, beta: f64) -> Result<Self> {
        Self::new(ModelVariant::Pbg, d, 1.0, 1.0, 0.0, 0.0, beta)
    }

    /// Rotation-coupled model in natural units, c_kin = 1.
    pub fn model1(d: u32, beta: f64, omega: f64, g: f64, eps_q: f64) -> Result<Self> {
        Self::new(ModelVariant::Model1, d, 1.0, omega, g, eps_q, beta)
    }

    /// Squeezing-coupled model in natural units, c_kin = 1.
    pub fn model2(d: u32, beta: f64, omega: f64, g: f64, eps_q: f64) -> Result<Self> {
        Self::new(ModelVariant::Model2, d, 1.0, omega, g, eps_q, beta)
    }

    /// Chemical potential where the coupled two-mode block loses stability:
    /// `eps_q - g^2/(4 Omega)` for the coupled models, 0 for the PBG.
    ///
    /// Unlike [`Self::critical_chemical_potential`] this is not clipped at 0;
    /// it is where the lower normal-mode energy actually vanishes, which is
    /// the finite-volume divergence point of the coupled-block occupation.
    pub(crate) fn coupled_divergence_mu(&self) -> f64 {
        match self.variant {
            ModelVariant::Pbg => 0.0,
            _ => self.eps_q - self.g * self.g / (4.0 * self.omega),
        }
    }

    /// Thermodynamic stability threshold `mu_c = min(0, eps_q - g^2/(4 Omega))`
    /// (0 for the PBG).
    pub fn critical_chemical_potential(&self) -> f64 {
        match self.variant {
            ModelVariant::Pbg => 0.0,
            _ => self.coupled_divergence_mu().min(0.0),
        }
    }

    /// Critical density `rho_c = rho_0(mu_c)`; infinite exactly when
    /// `mu_c = 0` and `d <= 2`.
    pub fn critical_density(&self) -> Density {
        let mu_c = self.critical_chemical_potential();
        specfun::bose_density(self.beta, mu_c, self.d, self.c_kin)
            .expect("mu_c <= 0 is always in the domain of the Bose integral")
            .value
    }

    /// Regime classification at total particle density `rho`.
    pub fn regime_for(&self, rho: f64) -> Regime {
        let rho_c = self.critical_density();
        let tag = match rho_c {
            Density::Finite(rc) if rho > rc => RegimeTag::Condensed,
            _ => RegimeTag::Normal,
        };
        Regime { tag, rho_c, mu_c: self.critical_chemical_potential() }
    }
}

/// A particle density that may be infinite (`rho_c` of the PBG in d <= 2).
/// Kept as a tagged value so the infinite case is explicit, never a large
/// float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    Finite(f64),
    Infinite,
}

impl Density {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Density::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Density::Finite(v) => Some(*v),
            Density::Infinite => None,
        }
    }

    /// Collapse to f64, mapping the infinite tag to `f64::INFINITY`
    /// (for display and serialization only).
    pub fn as_f64(&self) -> f64 {
        match self {
            Density::Finite(v) => *v,
            Density::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Density::Finite(v) => write!(f, "{v}"),
            Density::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    Normal,
    Condensed,
}

/// Regime classification together with the critical constants it was
/// derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    pub rho_c: Density,
    pub mu_c: f64,
}

/// Effective coupling from the condensate substitution, `g = lambda sqrt(rho_0)`.
pub fn effective_coupling(lambda: f64, rho0: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda = {lambda} must be >= 0")));
    }
    if !(rho0 >= 0.0) {
        return Err(Error::Domain(format!("rho0 = {rho0} must be >= 0")));
    }
    Ok(lambda * rho0.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn critical_chemical_potential_examples() {
        // eps_q - g^2/(4 Omega) positive: clipped to 0
        let p = ModelParams::model1(3, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(p.critical_chemical_potential(), 0.0);
        // direct substitution
        let p = ModelParams::model1(3, 1.0, 1.0, 2.0, 0.1).unwrap();
        assert!((p.critical_chemical_potential() - (-0.9)).abs() < 1e-15);
        // free-gas boundary
        let p = ModelParams::pbg(2, 1.0).unwrap();
        assert_eq!(p.critical_chemical_potential(), 0.0);
    }

    #[test]
    fn critical_density_matches_pbg_when_mu_c_zero() {
        // g^2 <= 4 Omega eps_q: mu_c = 0 and rho_c equals the PBG value
        let p = ModelParams::model1(3, 1.0, 1.0, 1.0, 1.0).unwrap();
        let pbg = ModelParams::pbg(3, 1.0).unwrap();
        assert_eq!(p.critical_density(), pbg.critical_density());
        // and is finite for every d whenever mu_c < 0
        for d in 1..=3 {
            let p = ModelParams::model1(d, 1.0, 1.0, 2.0, 0.1).unwrap();
            assert!(p.critical_density().finite().is_some());
        }
    }

    #[test]
    fn effective_coupling_examples() {
        assert_eq!(effective_coupling(2.0, 0.25).unwrap(), 1.0);
        assert_eq!(effective_coupling(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(effective_coupling(1.0, 0.0).unwrap(), 0.0);
        assert!(effective_coupling(-1.0, 1.0).is_err());
        assert!(effective_coupling(1.0, -0.1).is_err());
    }

    #[test]
    fn construction_validation() {
        assert!(ModelParams::new(ModelVariant::Pbg, 3, 1.0, 1.0, 0.5, 0.0, 1.0).is_err());
        assert!(ModelParams::new(ModelVariant::Model1, 4, 1.0, 1.0, 0.5, 0.0, 1.0).is_err());
        assert!(ModelParams::new(ModelVariant::Model1, 3, 0.0, 1.0, 0.5, 0.0, 1.0).is_err());
        assert!(ModelParams::new(ModelVariant::Model1, 3, 1.0, -1.0, 0.5, 0.0, 1.0).is_err());
        assert!(ModelParams::new(ModelVariant::Model1, 3, 1.0, 1.0, -0.5, 0.0, 1.0).is_err());
        assert!(ModelParams::new(ModelVariant::Model1, 3, 1.0, 1.0, 0.5, -0.1, 1.0).is_err());
        assert!(ModelParams::new(ModelVariant::Model1, 3, 1.0, 1.0, 0.5, 0.0, 0.0).is_err());
        assert!(ModelParams::new(ModelVariant::Model2, 1, 0.7, 2.0, 0.5, 0.3, 2.0).is_ok());
    }

    #[test]
    fn infinite_density_is_tagged() {
        let p = ModelParams::pbg(1, 1.0).unwrap();
        assert_eq!(p.critical_density(), Density::Infinite);
        assert_eq!(p.critical_density().to_string(), "inf");
        assert!(p.critical_density().as_f64().is_infinite());
    }

    proptest! {
        #[test]
        fn mu_c_monotone_in_g_and_eps_q(
            omega in 0.1f64..5.0,
            g in 0.0f64..4.0,
            eps_q in 0.0f64..2.0,
            dg in 0.001f64..1.0,
            de in 0.001f64..1.0,
        ) {
            let base = ModelParams::model1(3, 1.0, omega, g, eps_q).unwrap();
            let more_g = ModelParams::model1(3, 1.0, omega, g + dg, eps_q).unwrap();
            let more_e = ModelParams::model1(3, 1.0, omega, g, eps_q + de).unwrap();
            prop_assert!(more_g.critical_chemical_potential() <= base.critical_chemical_potential());
            prop_assert!(more_e.critical_chemical_potential() >= base.critical_chemical_potential());
            // strict negativity exactly when g^2 > 4 Omega eps_q
            let mu_c = base.critical_chemical_potential();
            if g * g > 4.0 * omega * eps_q {
                prop_assert!(mu_c < 0.0);
            } else {
                prop_assert!(mu_c == 0.0);
            }
        }
    }
}
