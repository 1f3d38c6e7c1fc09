//! Finite-size scaling in the condensed regime: the chemical potential
//! approaches mu_c like -1/(beta V (rho - rho_c)), the soft gap E_1-(mu_V)
//! closes like Omega/(beta V (rho - rho_c)(Omega - mu_c + eps_q)), and the
//! per-volume occupations of the coupled block extrapolate to the
//! condensate densities.
//!
//!     cargo run --release --example finite_size_scaling

use bec_superradiance::lattice::VolumeSpec;
use bec_superradiance::params::ModelParams;
use bec_superradiance::solver;
use bec_superradiance::spectrum;
use bec_superradiance::sweep::fit_power_law;

fn main() {
    let params = ModelParams::model1(3, 1.0, 1.0, 2.0, 0.5).unwrap(); // mu_c = -0.5
    let mu_c = params.critical_chemical_potential();
    let rho_c = params.critical_density().finite().unwrap();
    let rho = 2.0 * rho_c;
    println!("model 1, d = 3, beta = 1, Omega = 1, g = 2, eps_q = 0.5");
    println!("rho = 2 rho_c = {rho:.8}, mu_c = {mu_c}");
    println!();
    println!(
        "{:>5} {:>9} {:>15} {:>13} {:>12} {:>12} {:>12}",
        "L", "V", "mu_V - mu_c", "(mu_V-mu_c)V", "E_1- * V", "matter/V", "photon/V"
    );
    let mut vols = Vec::new();
    let mut devs = Vec::new();
    for l in [16.0, 24.0, 32.0, 48.0, 64.0, 96.0] {
        let vol = VolumeSpec::new(l, 3).unwrap();
        let sol = solver::solve_mu(&params, rho, &vol).unwrap();
        let occ = solver::finite_volume_condensates(&params, rho, &vol).unwrap();
        let gap = spectrum::model1_spectrum(params.eps_q, sol.mu, params.omega, params.g).e_minus;
        println!(
            "{l:>5.0} {:>9.0} {:>15.6e} {:>13.5} {:>12.5} {:>12.8} {:>12.8}",
            sol.volume,
            sol.mu - mu_c,
            (sol.mu - mu_c) * sol.volume,
            gap * sol.volume,
            occ.matter_mode,
            occ.photon_mode
        );
        vols.push(sol.volume);
        devs.push(sol.mu - mu_c);
    }
    let fit = fit_power_law(&vols, &devs).unwrap();
    println!();
    println!(
        "log-log fit of mu_V - mu_c vs V: slope = {:.5} (exact -1), r^2 = {:.8}",
        fit.slope, fit.r_squared
    );
    println!(
        "asymptotic coefficients: (mu_V - mu_c) V -> {:.5}, E_1- V -> {:.5}",
        -1.0 / (params.beta * (rho - rho_c)),
        solver::asymptotic_gap(&params, rho, 1.0).unwrap()
    );
    println!(
        "condensate targets: matter {:.8}, photon {:.8}",
        rho - rho_c,
        params.g * params.g / (4.0 * params.omega * params.omega) * (rho - rho_c)
    );
}
