//! Condensate densities across the transition: matter and photon
//! condensation lock together above rho_c.
//!
//! In the condensed regime the matter condensate grows like rho - rho_c,
//! the photon condensate like (g^2/4 Omega^2)(rho - rho_c), and the
//! interaction energy density is -g^2(rho - rho_c)/(2 Omega) for model 1
//! (bound state) but positive for model 2.
//!
//!     cargo run --release --example condensates

use bec_superradiance::gibbs;
use bec_superradiance::params::ModelParams;

fn main() {
    let (omega, g, eps_q, beta) = (1.0, 2.0, 0.5, 1.0);
    let p1 = ModelParams::model1(3, beta, omega, g, eps_q).unwrap();
    let p2 = ModelParams::model2(3, beta, omega, g, eps_q).unwrap();
    let rho_c = p1.critical_density().finite().unwrap();
    println!(
        "Omega = {omega}, g = {g}, eps_q = {eps_q}, beta = {beta}: mu_c = {}, rho_c = {rho_c:.8}",
        p1.critical_chemical_potential()
    );
    println!();
    println!(
        "{:>10} {:>10} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "rho", "regime", "matter", "photon", "corr (m1)", "U/V (m1)", "U/V (m2)"
    );
    for i in 0..=10 {
        let rho = rho_c * (0.25 + 0.25 * i as f64);
        let r1 = gibbs::condensate_limits(&p1, rho).unwrap();
        let r2 = gibbs::condensate_limits(&p2, rho).unwrap();
        println!(
            "{rho:>10.6} {:>10} {:>12.8} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            match r1.regime.tag {
                bec_superradiance::RegimeTag::Normal => "normal",
                bec_superradiance::RegimeTag::Condensed => "condensed",
            },
            r1.matter_condensate,
            r1.photon_condensate,
            r1.correlation_density,
            r1.interaction_energy_density,
            r2.interaction_energy_density,
        );
    }
    println!();
    println!("photon/matter ratio in the condensed rows: g^2/(4 Omega^2) = {}", g * g / (4.0 * omega * omega));
    println!("model-1 coherence: corr^2/(matter * photon) = 1 exactly");
}
