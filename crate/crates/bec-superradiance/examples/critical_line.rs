//! Where condensation happens once the gas couples to the photon mode.
//!
//! The stability threshold mu_c = min(0, eps_q - g^2/(4 Omega)) drops below
//! zero as soon as g^2 > 4 Omega eps_q; the critical density
//! rho_c = rho_0(mu_c) then falls below the free-gas value rho_0c, and is
//! finite even in d = 1 and 2 where the free gas never condenses.
//!
//!     cargo run --release --example critical_line

use bec_superradiance::params::{Density, ModelParams};

fn main() {
    let (omega, eps_q, beta) = (1.0, 0.5, 1.0);
    println!("Omega = {omega}, eps_q = {eps_q}, beta = {beta}");
    println!();
    println!("{:>6} {:>10} {:>14} {:>14} {:>14}", "g", "mu_c", "rho_c (d=3)", "rho_c (d=2)", "rho_c (d=1)");
    for i in 0..=12 {
        let g = 0.25 * i as f64;
        let mut row = format!("{g:>6.2}");
        let p = ModelParams::model1(3, beta, omega, g, eps_q).unwrap();
        row += &format!(" {:>10.5}", p.critical_chemical_potential());
        for d in [3, 2, 1] {
            let p = ModelParams::model1(d, beta, omega, g, eps_q).unwrap();
            match p.critical_density() {
                Density::Finite(rc) => row += &format!(" {rc:>14.8}"),
                Density::Infinite => row += &format!(" {:>14}", "inf"),
            }
        }
        println!("{row}");
    }
    println!();
    let pbg = ModelParams::pbg(3, beta).unwrap();
    println!(
        "free-gas reference: rho_0c(d=3) = {:.8}; in d = 1, 2 the free gas needs infinite density",
        pbg.critical_density().as_f64()
    );
    println!("the threshold coupling here is g = sqrt(4 Omega eps_q) = {:.4}", (4.0 * omega * eps_q).sqrt());
}
