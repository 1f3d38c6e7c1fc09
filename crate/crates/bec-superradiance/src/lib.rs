//! Exact equilibrium thermodynamics of a perfect Bose gas coupled to a
//! one-mode photon field.
//!
//! Two solvable models are treated at finite volume and in the
//! thermodynamic limit: a number-conserving rotation coupling (model 1)
//! and a pair-creating squeezing coupling (model 2). Both lower the
//! critical density of Bose-Einstein condensation to
//! `rho_c = rho_0(eps_q - g^2/(4 Omega))`, make condensation possible in
//! d = 1 and 2, and lock a macroscopic photon occupation (equilibrium
//! superradiance) to the matter condensate:
//!
//! ```text
//! <a' a>/V -> rho - rho_c,     <b' b>/V -> (g^2/4 Omega^2)(rho - rho_c).
//! ```
//!
//! Every closed form is paired with an independent numerical oracle:
//! normal-mode energies against a matrix eigensolver
//! ([`spectrum::numerical_spectrum_oracle`]), Gibbs-state occupations
//! against exact diagonalization on a truncated Fock basis
//! ([`fock::converged_thermal_expectations`]), and the Bose density
//! against adaptive quadrature
//! ([`specfun::bose_density_quadrature_oracle`]).
//!
//! Start with the runnable programs under `examples/`; the `bec-superradiance`
//! binary exposes the same machinery as batch subcommands.

// Full-precision numeric literals (quadrature nodes, frozen reference
// values) and NaN-rejecting `!(x > 0)` validations are intentional.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod params;
pub mod specfun;
pub mod lattice;
pub mod spectrum;
pub mod gibbs;
pub mod fock;
pub mod solver;
pub mod sweep;
pub mod cli;

pub use error::{Error, Result};
pub use gibbs::{
    condensate_limits, condensate_limits_with_variant, interaction_energy_density,
    CondensateReport, LimitVariant, OccupationSet,
};
pub use lattice::{enumerate_shells, free_mode_density, ModeShells, VolumeSpec};
pub use params::{effective_coupling, Density, ModelParams, ModelVariant, Regime, RegimeTag};
pub use solver::{
    asymptotic_gap, asymptotic_mu, finite_volume_condensates, limiting_mu, solve_mu, MuSolution,
};
pub use specfun::{bose_density, bose_density_quadrature_oracle, polylog, BoseDensityResult};
pub use spectrum::{
    model1_spectrum, model2_spectrum, numerical_spectrum_oracle, stability_check, SpectrumPair,
};
pub use sweep::{fit_power_law, run_sweep, FitResult, SweepConfig, Task};
