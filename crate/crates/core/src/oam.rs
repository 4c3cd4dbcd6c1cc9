//! Orbital-angular-momentum mode weights, moments, and depth-dependent
//! conversion curves.
//!
//! Mode weights follow the spectral norm convention of the transforms
//! module: the raw weight of mode `l` is `A_l = int |f_l(k)|^2 k dk`, and
//! distributions normalize the weights to unit total before computing
//! moments, so `sigma_ell` is a genuine standard deviation.

use crate::beams::DivergenceProfile;
use crate::error::{Error, Result};
use crate::scattering::{scatter_mode, transmitted_spinor, SpectralMode};
use crate::transforms::AzimuthalSpectrum;
use crate::C64;
use std::collections::BTreeMap;

/// Normalized OAM mode weights with their first two moments.
#[derive(Debug, Clone, PartialEq)]
pub struct OamDistribution {
    weights: BTreeMap<i32, f64>,
    mean_lz: f64,
    sigma_ell: f64,
}

impl OamDistribution {
    /// Build a distribution from raw nonnegative weights; normalizes to
    /// unit total and computes the moments.
    pub fn from_weights(raw: impl IntoIterator<Item = (i32, f64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        let mut total = 0.0;
        for (ell, w) in raw {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::Domain(format!(
                    "mode weight for l = {ell} must be a finite nonnegative number, got {w}"
                )));
            }
            *weights.entry(ell).or_insert(0.0) += w;
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut mean = 0.0;
        let mut second = 0.0;
        for (&ell, w) in weights.iter_mut() {
            *w /= total;
            mean += ell as f64 * *w;
            second += (ell as f64) * (ell as f64) * *w;
        }
        let sigma_ell = (second - mean * mean).max(0.0).sqrt();
        Ok(OamDistribution {
            weights,
            mean_lz: mean,
            sigma_ell,
        })
    }

    /// Normalized weight of mode `ell` (0 outside the stored window).
    pub fn weight(&self, ell: i32) -> f64 {
        self.weights.get(&ell).copied().unwrap_or(0.0)
    }

    /// All normalized weights, keyed by mode number.
    pub fn weights(&self) -> &BTreeMap<i32, f64> {
        &self.weights
    }

    /// Mean orbital angular momentum per particle, in units of hbar.
    pub fn mean_lz(&self) -> f64 {
        self.mean_lz
    }

    /// OAM bandwidth: standard deviation of the mode number.
    pub fn sigma_ell(&self) -> f64 {
        self.sigma_ell
    }
}

/// OAM mode weights of a spectrum: `A_l = int |f_l|^2 k dk`, normalized to
/// unit total.
pub fn mode_amplitudes(spec: &AzimuthalSpectrum) -> Result<OamDistribution> {
    let (lo, hi) = spec.window();
    OamDistribution::from_weights((lo..=hi).map(|ell| (ell, spec.mode_norm(ell))))
}

/// Depth-resolved population split of a spin-down beam transmitted into the
/// field region.
///
/// `converted[i]` is the fraction of the transmitted density at `z[i]` that
/// has flipped spin and acquired one unit of OAM; `retained[i]` is the
/// complementary unconverted fraction (the two sum to 1). `total[i]` is the
/// unnormalized transmitted density norm, which stays constant in `z`
/// whenever both eigenchannels are propagating over the whole profile
/// support.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthScan {
    pub z: Vec<f64>,
    pub converted: Vec<f64>,
    pub retained: Vec<f64>,
    pub total: Vec<f64>,
}

impl DepthScan {
    /// Michelson contrast `(max - min) / (max + min)` of the converted
    /// fraction over the index range `[from, to)`.
    pub fn contrast(&self, from: usize, to: usize) -> f64 {
        let slice = &self.converted[from..to];
        let max = slice.iter().cloned().fold(f64::MIN, f64::max);
        let min = slice.iter().cloned().fold(f64::MAX, f64::min);
        if max + min == 0.0 {
            0.0
        } else {
            (max - min) / (max + min)
        }
    }
}

/// Scan the OAM-converted population of a transmitted spin-down beam over
/// depth.
///
/// Every radial sample of the divergence profile is scattered independently
/// at the interface (spin-down incidence, energy `k_z^2 + k_r^2`) and the
/// transmitted spinor densities are integrated over the profile per depth.
/// The spin-flipped component carries exactly one unit of OAM (signed to
/// conserve total angular momentum `l + s_z`), so the converted fraction is
/// the population of the lone `|l| = 1` mode.
pub fn oam_vs_depth(
    profile: &DivergenceProfile,
    coupling: f64,
    k_z: f64,
    z_grid: &[f64],
) -> Result<DepthScan> {
    if z_grid.is_empty() {
        return Err(Error::Domain("depth grid must be nonempty".into()));
    }
    if z_grid.iter().any(|z| !z.is_finite() || *z < 0.0) {
        return Err(Error::Domain(
            "depths must be finite and >= 0 (transmitted side)".into(),
        ));
    }
    let grid = profile.grid().clone();
    let modes: Vec<_> = grid
        .nodes()
        .iter()
        .zip(profile.density())
        .map(|(&k_r, &density)| {
            let mode = SpectralMode::new(
                k_r,
                0.0,
                k_z,
                C64::new(0.0, 0.0),
                C64::new(density.sqrt(), 0.0),
            )?;
            Ok(scatter_mode(&mode, coupling))
        })
        .collect::<Result<_>>()?;

    let mut scan = DepthScan {
        z: z_grid.to_vec(),
        converted: Vec::with_capacity(z_grid.len()),
        retained: Vec::with_capacity(z_grid.len()),
        total: Vec::with_capacity(z_grid.len()),
    };
    let mut flipped = vec![0.0; grid.len()];
    let mut kept = vec![0.0; grid.len()];
    for &z in z_grid {
        for (i, coefs) in modes.iter().enumerate() {
            let (psi_plus, psi_minus) = transmitted_spinor(coefs, 0.0, z);
            flipped[i] = psi_plus.norm_sqr();
            kept[i] = psi_minus.norm_sqr();
        }
        let converted = grid.integrate_radial(&flipped);
        let retained = grid.integrate_radial(&kept);
        let total = converted + retained;
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        scan.converted.push(converted / total);
        scan.retained.push(retained / total);
        scan.total.push(total);
    }
    Ok(scan)
}
