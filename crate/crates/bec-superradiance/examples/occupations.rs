//! Closed-form Gibbs occupations of the coupled block against the
//! truncated-Fock thermal oracle, and their temperature dependence.
//!
//! The oracle builds the two-mode Hamiltonian on |n_a, n_b> up to a cutoff,
//! diagonalizes it exactly and thermally averages; the closed forms follow
//! from the rotation/squeezing diagonalization. Model 2 keeps a squeezed
//! vacuum at T = 0: its occupations do not vanish as beta grows.
//!
//!     cargo run --release --example occupations

use bec_superradiance::fock;
use bec_superradiance::gibbs;
use bec_superradiance::params::{ModelParams, ModelVariant};

fn main() {
    let (omega, g, eps_q, mu) = (2.0, 1.0, 1.0, -0.5);
    println!("Omega = {omega}, g = {g}, eps_q = {eps_q}, mu = {mu}");
    for variant in [ModelVariant::Model1, ModelVariant::Model2] {
        println!();
        println!("model {}", if variant == ModelVariant::Model1 { "1 (rotation)" } else { "2 (squeezing)" });
        println!(
            "{:>6} {:>14} {:>14} {:>14} {:>12} {:>7}",
            "beta", "matter", "photon", "correlation", "oracle dev", "n_max"
        );
        for beta in [0.25, 0.5, 1.0, 2.0, 4.0, 16.0] {
            let params = ModelParams::new(variant, 3, 1.0, omega, g, eps_q, beta).unwrap();
            let block = gibbs::coupled_occupations(&params, mu).unwrap();
            let (orc, trunc) = fock::converged_thermal_expectations(
                variant,
                eps_q - mu,
                omega,
                g,
                beta,
                1e-10,
            )
            .unwrap();
            let dev = (block.matter - orc.n_matter)
                .abs()
                .max((block.photon - orc.n_photon).abs())
                .max((block.correlation - orc.correlation).abs());
            println!(
                "{beta:>6.2} {:>14.10} {:>14.10} {:>14.10} {dev:>12.2e} {:>7}",
                block.matter, block.photon, block.correlation, trunc.n_max
            );
        }
    }
    println!();
    let s = bec_superradiance::spectrum::model2_spectrum(eps_q, mu, omega, g).unwrap();
    let sinh2 = 0.5 * ((eps_q - mu + omega) / (s.e_plus + s.e_minus) - 1.0);
    println!("model-2 zero-temperature limit: sinh^2(phi) = {sinh2:.10}");
    println!("(the beta = 16 matter occupation above is already there)");
}
