//! Finite-volume momentum lattice: periodic-box modes k = 2 pi n / L with
//! n in Z^d, grouped into radial shells of equal |n|^2.
//!
//! The kinetic energy depends on n only through m = |n|^2, so occupation
//! sums over the O(L^d) modes collapse to sums over the O(max_m) shells
//! with exact integer multiplicities.

use crate::error::{Error, Result};
use crate::params::{ModelParams, ModelVariant};

/// Tail threshold: shells are enumerated until beta * eps(m) exceeds this,
/// which keeps the discarded occupation tail below 1e-16 of the retained sum.
const TAIL_EXPONENT: f64 = 46.0;

/// A cubic box of side `l` in `d` dimensions with periodic boundary
/// conditions. `k_cut` optionally pins the radial cutoff; `None` selects it
/// automatically from the tail criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeSpec {
    pub l: f64,
    pub d: u32,
    pub k_cut: Option<f64>,
}

impl VolumeSpec {
    pub fn new(l: f64, d: u32) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidParams(format!("box side l = {l} must be > 0")));
        }
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidParams(format!("d = {d} not in 1..=3")));
        }
        Ok(VolumeSpec { l, d, k_cut: None })
    }

    pub fn with_cutoff(mut self, k_cut: f64) -> Self {
        self.k_cut = Some(k_cut);
        self
    }

    pub fn volume(&self) -> f64 {
        self.l.powi(self.d as i32)
    }
}

/// One radial shell: all lattice vectors n with |n|^2 = `norm_sq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shell {
    pub norm_sq: u64,
    pub multiplicity: u64,
}

/// The nonzero lattice modes inside the cutoff ball, aggregated by |n|^2
/// in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeShells {
    pub shells: Vec<Shell>,
    pub d: u32,
    pub l: f64,
    pub max_norm_sq: u64,
}

impl ModeShells {
    /// Kinetic energy of a mode in shell m: c_kin (2 pi / L)^2 m.
    pub fn energy(&self, c_kin: f64, norm_sq: u64) -> f64 {
        let k1 = 2.0 * std::f64::consts::PI / self.l;
        c_kin * k1 * k1 * norm_sq as f64
    }

    /// Total number of modes retained (excluding n = 0).
    pub fn mode_count(&self) -> u64 {
        self.shells.iter().map(|s| s.multiplicity).sum()
    }
}

/// Enumerate the shells of `vol` by direct lattice-point counting.
///
/// With `k_cut = None` the cutoff is taken from the tail criterion for
/// `params` (occupations at the cutoff below e^-46 of the lowest shell's).
pub fn enumerate_shells(vol: &VolumeSpec, params: &ModelParams) -> Result<ModeShells> {
    let k1 = 2.0 * std::f64::consts::PI / vol.l;
    let eps1 = params.c_kin * k1 * k1;
    let max_m = match vol.k_cut {
        Some(k_cut) => {
            if !(k_cut > 0.0) {
                return Err(Error::InvalidParams(format!("k_cut = {k_cut} must be > 0")));
            }
            ((k_cut / k1) * (k_cut / k1)).floor() as i64
        }
        None => (TAIL_EXPONENT / (params.beta * eps1)).ceil() as i64,
    };
    if max_m < 1 {
        return Err(Error::InvalidParams(format!(
            "cutoff too small: no lattice mode inside |n|^2 <= {max_m}"
        )));
    }
    let max_m = max_m as u64;
    let n_max = (max_m as f64).sqrt().floor() as i64;
    let mut counts = vec![0u64; max_m as usize + 1];
    match vol.d {
        1 => {
            for n in 1..=n_max {
                let m = (n * n) as u64;
                if m <= max_m {
                    counts[m as usize] += 2;
                }
            }
        }
        2 => {
            for nx in -n_max..=n_max {
                for ny in -n_max..=n_max {
                    let m = (nx * nx + ny * ny) as u64;
                    if m > 0 && m <= max_m {
                        counts[m as usize] += 1;
                    }
                }
            }
        }
        _ => {
            for nx in -n_max..=n_max {
                let mx = nx * nx;
                for ny in -n_max..=n_max {
                    let mxy = mx + ny * ny;
                    if mxy as u64 > max_m {
                        continue;
                    }
                    for nz in -n_max..=n_max {
                        let m = (mxy + nz * nz) as u64;
                        if m > 0 && m <= max_m {
                            counts[m as usize] += 1;
                        }
                    }
                }
            }
        }
    }
    let shells: Vec<Shell> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(m, &c)| Shell { norm_sq: m as u64, multiplicity: c })
        .collect();
    if shells.is_empty() {
        return Err(Error::InvalidParams("cutoff too small to contain any mode".into()));
    }
    Ok(ModeShells { shells, d: vol.d, l: vol.l, max_norm_sq: max_m })
}

/// Index of the shell whose energy is nearest `eps_q` (ties toward the
/// smaller |k|). This is the single grid mode replaced by the coupled block
/// in the models' Hamiltonians; the PBG removes nothing.
pub(crate) fn q_slot(shells: &ModeShells, params: &ModelParams) -> Option<usize> {
    if params.variant == ModelVariant::Pbg {
        return None;
    }
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, s) in shells.shells.iter().enumerate() {
        let d = (shells.energy(params.c_kin, s.norm_sq) - params.eps_q).abs();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    Some(best)
}

/// Finite-volume free-mode density
/// V^-1 sum over k in Lambda* \ {0}, minus the Q-slot for the coupled models,
/// of the Bose occupation at energy eps_k - mu.
pub fn free_mode_density(vol: &VolumeSpec, params: &ModelParams, mu: f64) -> Result<f64> {
    let shells = enumerate_shells(vol, params)?;
    free_mode_density_from_shells(&shells, params, mu)
}

/// Same as [`free_mode_density`] but reusing a precomputed shell table
/// (the table is the expensive part; the sum is O(#shells)).
pub fn free_mode_density_from_shells(
    shells: &ModeShells,
    params: &ModelParams,
    mu: f64,
) -> Result<f64> {
    let eps_min = shells.energy(params.c_kin, shells.shells[0].norm_sq);
    if mu >= eps_min {
        return Err(Error::DivergentSum(format!(
            "mu = {mu} not below the lowest retained mode energy {eps_min}"
        )));
    }
    let beta = params.beta;
    let mut sum = 0.0;
    for s in &shells.shells {
        let e = shells.energy(params.c_kin, s.norm_sq);
        sum += s.multiplicity as f64 / (beta * (e - mu)).exp_m1();
    }
    if let Some(i) = q_slot(shells, params) {
        let e = shells.energy(params.c_kin, shells.shells[i].norm_sq);
        sum -= 1.0 / (beta * (e - mu)).exp_m1();
    }
    let v = shells.l.powi(shells.d as i32);
    Ok(sum / v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use crate::specfun;

    fn pbg(d: u32) -> ModelParams {
        ModelParams::pbg(d, 1.0).unwrap()
    }

    #[test]
    fn shell_multiplicities_small_norms() {
        // d=1, |n| <= 2: shells (1, 2) and (4, 2)
        let vol = VolumeSpec::new(10.0, 1).unwrap().with_cutoff(2.0 * 2.0 * std::f64::consts::PI / 10.0 + 1e-9);
        let s = enumerate_shells(&vol, &pbg(1)).unwrap();
        assert_eq!(
            s.shells,
            vec![Shell { norm_sq: 1, multiplicity: 2 }, Shell { norm_sq: 4, multiplicity: 2 }]
        );

        // d=3, m=1: the six unit vectors
        let vol = VolumeSpec::new(8.0, 3).unwrap();
        let s = enumerate_shells(&vol, &pbg(3)).unwrap();
        assert_eq!(s.shells[0], Shell { norm_sq: 1, multiplicity: 6 });

        // d=2, m=5: (+-1,+-2) and (+-2,+-1)
        let vol = VolumeSpec::new(8.0, 2).unwrap();
        let s = enumerate_shells(&vol, &pbg(2)).unwrap();
        let m5 = s.shells.iter().find(|sh| sh.norm_sq == 5).unwrap();
        assert_eq!(m5.multiplicity, 8);
    }

    #[test]
    fn multiplicities_match_ball_counts() {
        // sum of multiplicities up to M plus the origin equals the number of
        // lattice points in the ball, by independent brute-force counting
        for d in 1..=3u32 {
            let vol = VolumeSpec::new(50.0, d).unwrap();
            let shells = enumerate_shells(&vol, &pbg(d)).unwrap();
            for m_cap in [1u64, 4, 9, 25, 100] {
                let retained: u64 = shells
                    .shells
                    .iter()
                    .filter(|s| s.norm_sq <= m_cap)
                    .map(|s| s.multiplicity)
                    .sum();
                let n = m_cap as f64;
                let r = n.sqrt().floor() as i64;
                let mut count = 0u64;
                for nx in -r..=r {
                    for ny in -r..=r {
                        for nz in -r..=r {
                            let use_y = d >= 2;
                            let use_z = d >= 3;
                            if (!use_y && ny != 0) || (!use_z && nz != 0) {
                                continue;
                            }
                            if (nx * nx + ny * ny + nz * nz) as u64 <= m_cap {
                                count += 1;
                            }
                        }
                    }
                }
                assert_eq!(retained + 1, count, "d={d} M={m_cap}");
            }
        }
    }

    #[test]
    fn free_density_pbg_golden_d1() {
        // direct 50-digit summation: d=1, L=10, beta=1, mu=-1
        let vol = VolumeSpec::new(10.0, 1).unwrap();
        let v = free_mode_density(&vol, &pbg(1), -1.0).unwrap();
        let golden = 0.084_596_191_877_716_452;
        assert!((v - golden).abs() < 1e-15, "{v}");
    }

    #[test]
    fn free_density_converges_to_bose_integral() {
        // fixed mu=-1, beta=1, d=3: finite-volume sum approaches rho_0 as L grows
        let rho0 = specfun::bose_density(1.0, -1.0, 3, 1.0)
            .unwrap()
            .value
            .finite()
            .unwrap();
        let mut prev_err = f64::INFINITY;
        for l in [8.0, 16.0, 32.0, 64.0] {
            let vol = VolumeSpec::new(l, 3).unwrap();
            let v = free_mode_density(&vol, &pbg(3), -1.0).unwrap();
            let err = (v - rho0).abs();
            assert!(err < prev_err, "L={l}: error {err} did not shrink (prev {prev_err})");
            prev_err = err;
        }
        // the excluded k = 0 term sets the O(1/V) floor of the approach
        assert!(prev_err < 1e-5);
    }

    #[test]
    fn q_slot_removed_only_for_models() {
        let vol = VolumeSpec::new(12.0, 3).unwrap();
        let p_pbg = pbg(3);
        let p1 = ModelParams::model1(3, 1.0, 1.0, 1.0, 0.5).unwrap();
        let pbg_d = free_mode_density(&vol, &p_pbg, -1.0).unwrap();
        let m1_d = free_mode_density(&vol, &p1, -1.0).unwrap();
        // model-1 sum removes exactly one mode near eps_q = 0.5
        let shells = enumerate_shells(&vol, &p1).unwrap();
        let slot = q_slot(&shells, &p1).unwrap();
        let e_slot = shells.energy(1.0, shells.shells[slot].norm_sq);
        let removed = 1.0 / (1.0f64 * (e_slot + 1.0)).exp_m1() / vol.volume();
        assert!((pbg_d - m1_d - removed).abs() < 1e-18);
        // and the slot is the nearest shell to eps_q
        for s in &shells.shells {
            assert!(
                (e_slot - 0.5).abs() <= (shells.energy(1.0, s.norm_sq) - 0.5).abs() + 1e-15
            );
        }
    }

    #[test]
    fn divergent_sum_error() {
        let vol = VolumeSpec::new(10.0, 3).unwrap();
        let p = pbg(3);
        let shells = enumerate_shells(&vol, &p).unwrap();
        let eps_min = shells.energy(1.0, 1);
        assert!(matches!(
            free_mode_density(&vol, &p, eps_min),
            Err(Error::DivergentSum(_))
        ));
        assert!(free_mode_density(&vol, &p, eps_min - 1e-6).is_ok());
    }

    #[test]
    fn monotone_in_mu() {
        let vol = VolumeSpec::new(10.0, 2).unwrap();
        let p = pbg(2);
        let mut prev = 0.0;
        for &mu in &[-3.0, -2.0, -1.0, -0.5, -0.1] {
            let v = free_mode_density(&vol, &p, mu).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }
}
