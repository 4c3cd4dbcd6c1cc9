//! Incident-beam models: Bessel beams, Gaussian wavepackets, and the
//! divergence profiles produced by collimator geometries.

use crate::error::{Error, Result};
use crate::transforms::{AzimuthalSpectrum, RadialGrid};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Bessel beam `J_0(k_rho r)` with spin amplitudes `(b_plus, b_minus)`,
/// normalized so `|b_plus|^2 + |b_minus|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselBeamSpec {
    pub k_rho: f64,
    pub k_z: f64,
    pub b_plus: C64,
    pub b_minus: C64,
}

impl BesselBeamSpec {
    pub fn new(k_rho: f64, k_z: f64, b_plus: C64, b_minus: C64) -> Result<Self> {
        if !(k_rho >= 0.0) || !k_rho.is_finite() {
            return Err(Error::Domain(format!(
                "transverse wavenumber must be >= 0, got {k_rho}"
            )));
        }
        if !(k_z > 0.0) || !k_z.is_finite() {
            return Err(Error::Domain(format!(
                "longitudinal wavenumber must be > 0, got {k_z}"
            )));
        }
        let norm = (b_plus.norm_sqr() + b_minus.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(BesselBeamSpec {
            k_rho,
            k_z,
            b_plus: b_plus / norm,
            b_minus: b_minus / norm,
        })
    }
}

/// Gaussian wavepacket spectrum
/// `a(k_x, k_y) = exp(-(k_y - k_y_mean)^2 / sigma_y^2) exp(-k_x^2 / (R sigma_y)^2)`,
/// with `R = sigma_x / sigma_y` the transverse symmetry factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacketSpec {
    pub k_y_mean: f64,
    pub sigma_y: f64,
    pub symmetry: f64,
}

impl GaussianPacketSpec {
    pub fn new(k_y_mean: f64, sigma_y: f64, symmetry: f64) -> Result<Self> {
        if !(sigma_y > 0.0) || !sigma_y.is_finite() {
            return Err(Error::Domain(format!(
                "spectral width sigma_y must be > 0, got {sigma_y}"
            )));
        }
        if !(symmetry > 0.0) || !symmetry.is_finite() {
            return Err(Error::Domain(format!(
                "symmetry factor R must be > 0, got {symmetry}"
            )));
        }
        if !k_y_mean.is_finite() {
            return Err(Error::Domain("mean wavenumber must be finite".into()));
        }
        Ok(GaussianPacketSpec {
            k_y_mean,
            sigma_y,
            symmetry,
        })
    }
}

/// Unnormalized Gaussian spectral amplitude at `(k_x, k_y)`; 1 at the
/// packet center `(0, k_y_mean)`.
pub fn gaussian_spectral_amplitude(spec: &GaussianPacketSpec, k_x: f64, k_y: f64) -> f64 {
    let dy = (k_y - spec.k_y_mean) / spec.sigma_y;
    let dx = k_x / (spec.symmetry * spec.sigma_y);
    (-dy * dy - dx * dx).exp()
}

/// Analytic L2 norm of [`gaussian_spectral_amplitude`] over the full plane:
/// `pi R sigma_y^2 / 2`.
pub fn gaussian_l2_norm(spec: &GaussianPacketSpec) -> f64 {
    0.5 * PI * spec.symmetry * spec.sigma_y * spec.sigma_y
}

/// Collimator aperture pair that shapes the beam divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CollimatorKind {
    /// Two identical pinholes of the given radius.
    TwoPinholes { radius: f64 },
    /// A large exit window followed by a comparatively small pinhole.
    ExitAndPinhole { exit_radius: f64, pinhole_radius: f64 },
    /// An annular opening followed by a pinhole.
    AnnulusAndPinhole {
        inner_radius: f64,
        outer_radius: f64,
        pinhole_radius: f64,
    },
}

/// Two coaxial apertures a distance `separation` apart, illuminating a beam
/// of longitudinal wavenumber `k_z`; rays through both apertures populate
/// transverse wavenumbers `k_r ~ k_z * alpha` in the small-angle regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollimatorGeometry {
    pub kind: CollimatorKind,
    pub separation: f64,
    pub k_z: f64,
}

impl CollimatorGeometry {
    pub fn new(kind: CollimatorKind, separation: f64, k_z: f64) -> Result<Self> {
        let all_positive = match kind {
            CollimatorKind::TwoPinholes { radius } => radius > 0.0,
            CollimatorKind::ExitAndPinhole {
                exit_radius,
                pinhole_radius,
            } => exit_radius > 0.0 && pinhole_radius > 0.0,
            CollimatorKind::AnnulusAndPinhole {
                inner_radius,
                outer_radius,
                pinhole_radius,
            } => inner_radius > 0.0 && outer_radius > inner_radius && pinhole_radius > 0.0,
        };
        if !all_positive {
            return Err(Error::Domain(
                "aperture radii must be positive (and annulus inner < outer)".into(),
            ));
        }
        if !(separation > 0.0) || !(k_z > 0.0) {
            return Err(Error::Domain(
                "separation and k_z must be positive".into(),
            ));
        }
        Ok(CollimatorGeometry {
            kind,
            separation,
            k_z,
        })
    }

    /// Largest transverse wavenumber any ray through both apertures can
    /// carry (extreme edge-to-edge ray).
    pub fn k_r_support(&self) -> f64 {
        let d_max = match self.kind {
            CollimatorKind::TwoPinholes { radius } => 2.0 * radius,
            CollimatorKind::ExitAndPinhole {
                exit_radius,
                pinhole_radius,
            } => exit_radius + pinhole_radius,
            CollimatorKind::AnnulusAndPinhole {
                outer_radius,
                pinhole_radius,
                ..
            } => outer_radius + pinhole_radius,
        };
        self.k_z * d_max / self.separation
    }

    /// Wavenumbers where the acceptance switches analytic branch (an
    /// aperture edge entering or leaving the other aperture). The overlap
    /// area is analytic between consecutive breakpoints, so quadrature
    /// panels aligned to them converge at full Gauss-Legendre order.
    pub fn k_r_breakpoints(&self) -> Vec<f64> {
        let offsets: Vec<f64> = match self.kind {
            CollimatorKind::TwoPinholes { radius } => vec![2.0 * radius],
            CollimatorKind::ExitAndPinhole {
                exit_radius,
                pinhole_radius,
            } => vec![
                (exit_radius - pinhole_radius).abs(),
                exit_radius + pinhole_radius,
            ],
            CollimatorKind::AnnulusAndPinhole {
                inner_radius,
                outer_radius,
                pinhole_radius,
            } => vec![
                (inner_radius - pinhole_radius).abs(),
                inner_radius + pinhole_radius,
                (outer_radius - pinhole_radius).abs(),
                outer_radius + pinhole_radius,
            ],
        };
        let mut ks: Vec<f64> = offsets
            .into_iter()
            .map(|d| self.k_z * d / self.separation)
            .filter(|k| *k > 0.0)
            .collect();
        ks.sort_by(f64::total_cmp);
        ks.dedup();
        ks
    }

    /// Unnormalized angular acceptance at transverse wavenumber `k_r`: the
    /// overlap area of the first aperture with the second displaced by
    /// `separation * alpha`, `alpha = k_r / k_z`.
    fn acceptance(&self, k_r: f64) -> f64 {
        let d = self.separation * k_r / self.k_z;
        match self.kind {
            CollimatorKind::TwoPinholes { radius } => disk_overlap_area(radius, radius, d),
            CollimatorKind::ExitAndPinhole {
                exit_radius,
                pinhole_radius,
            } => disk_overlap_area(exit_radius, pinhole_radius, d),
            CollimatorKind::AnnulusAndPinhole {
                inner_radius,
                outer_radius,
                pinhole_radius,
            } => {
                disk_overlap_area(outer_radius, pinhole_radius, d)
                    - disk_overlap_area(inner_radius, pinhole_radius, d)
            }
        }
    }
}

/// Intersection area of two disks with radii `r1`, `r2` and center
/// distance `d` (the circular "lens" formula).
fn disk_overlap_area(r1: f64, r2: f64, d: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    let r_small = r1.min(r2);
    if d <= (r1 - r2).abs() {
        return PI * r_small * r_small;
    }
    let clamp = |x: f64| x.clamp(-1.0, 1.0);
    let a1 = r1 * r1 * clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).acos();
    let a2 = r2 * r2 * clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).acos();
    let s = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    a1 + a2 - 0.5 * s.max(0.0).sqrt()
}

/// Transverse-wavenumber probability density `|f|^2(k_r)` on a radial grid,
/// normalized so `\int |f|^2 k_r dk_r = 1`.
#[derive(Debug, Clone)]
pub struct DivergenceProfile {
    grid: RadialGrid,
    density: Vec<f64>,
}

impl DivergenceProfile {
    /// Normalize a sampled nonnegative density onto its grid.
    pub fn from_samples(grid: RadialGrid, mut density: Vec<f64>) -> Result<Self> {
        if density.len() != grid.len() {
            return Err(Error::Domain(
                "density samples must match the radial grid".into(),
            ));
        }
        if density.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain("density must be finite and >= 0".into()));
        }
        let total = grid.integrate_radial(&density);
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        density.iter_mut().for_each(|v| *v /= total);
        Ok(DivergenceProfile { grid, density })
    }

    /// Profile concentrated on a single ring at `k_r` (ideal Bessel beam).
    pub fn delta_ring(k_r: f64) -> Result<Self> {
        Ok(DivergenceProfile {
            grid: RadialGrid::delta_ring(k_r)?,
            density: vec![1.0],
        })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// `\int k |f|^2 k dk`, the mean transverse wavenumber.
    pub fn mean_k(&self) -> f64 {
        let vals: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(&self.density)
            .map(|(&k, &p)| k * p)
            .collect();
        self.grid.integrate_radial(&vals)
    }

    /// Variance of the transverse wavenumber under the profile.
    pub fn variance_k(&self) -> f64 {
        let mean = self.mean_k();
        let vals: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(&self.density)
            .map(|(&k, &p)| k * k * p)
            .collect();
        (self.grid.integrate_radial(&vals) - mean * mean).max(0.0)
    }
}

/// Analytic divergence profile of a collimator: the aperture-overlap
/// acceptance evaluated on a Gauss-Legendre grid spanning the geometric
/// support, normalized to unit radial mass. `resolution` is the approximate
/// number of radial nodes. Panel boundaries sit on the acceptance
/// breakpoints, so the node placement converges at spectral order in the
/// resolution.
pub fn divergence_profile(geom: &CollimatorGeometry, resolution: usize) -> Result<DivergenceProfile> {
    if resolution == 0 {
        return Err(Error::Domain("resolution must be >= 1".into()));
    }
    let per_panel = 16.min(resolution.max(1));
    let panels = resolution.div_ceil(per_panel);
    let support = geom.k_r_support();

    // Split [0, support] at the acceptance breakpoints, then divide every
    // segment into equal panels, spending the panel budget proportionally
    // to segment length (at least one panel per segment).
    let mut cuts: Vec<f64> = vec![0.0];
    cuts.extend(geom.k_r_breakpoints().into_iter().filter(|k| *k < support));
    cuts.push(support);
    let mut edges: Vec<f64> = Vec::with_capacity(panels + cuts.len());
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let share = ((panels as f64) * (hi - lo) / support).ceil().max(1.0) as usize;
        for p in 0..share {
            edges.push(lo + (hi - lo) * p as f64 / share as f64);
        }
    }
    edges.push(support);
    let grid = RadialGrid::gauss_legendre_segments(&edges, per_panel)?;
    let density: Vec<f64> = grid.nodes().iter().map(|&k| geom.acceptance(k)).collect();
    DivergenceProfile::from_samples(grid, density)
}

/// Monte Carlo divergence profile: `n_rays` rays with endpoints uniform on
/// each aperture, histogrammed into `bins` equal wavenumber bins over the
/// geometric support. Deterministic for a fixed seed.
pub fn divergence_profile_monte_carlo(
    geom: &CollimatorGeometry,
    bins: usize,
    n_rays: u64,
    seed: u64,
) -> Result<DivergenceProfile> {
    if bins == 0 || n_rays == 0 {
        return Err(Error::Domain(
            "Monte Carlo needs at least one bin and one ray".into(),
        ));
    }
    let k_max = geom.k_r_support();
    let dk = k_max / bins as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; bins];

    let sample_first = |rng: &mut ChaCha8Rng| -> (f64, f64) {
        match geom.kind {
            CollimatorKind::TwoPinholes { radius } => sample_disk(rng, radius),
            CollimatorKind::ExitAndPinhole { exit_radius, .. } => sample_disk(rng, exit_radius),
            CollimatorKind::AnnulusAndPinhole {
                inner_radius,
                outer_radius,
                ..
            } => sample_annulus(rng, inner_radius, outer_radius),
        }
    };
    let second_radius = match geom.kind {
        CollimatorKind::TwoPinholes { radius } => radius,
        CollimatorKind::ExitAndPinhole { pinhole_radius, .. } => pinhole_radius,
        CollimatorKind::AnnulusAndPinhole { pinhole_radius, .. } => pinhole_radius,
    };

    for _ in 0..n_rays {
        let (x1, y1) = sample_first(&mut rng);
        let (x2, y2) = sample_disk(&mut rng, second_radius);
        let d = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt();
        let k = geom.k_z * d / geom.separation;
        let bin = ((k / dk) as usize).min(bins - 1);
        counts[bin] += 1;
    }

    // Bin-center grid; midpoint weights make the radial mass of bin i
    // exactly count_i / n_rays, so the histogram is normalized by
    // construction.
    let nodes: Vec<f64> = (0..bins).map(|i| (i as f64 + 0.5) * dk).collect();
    let density: Vec<f64> = counts
        .iter()
        .zip(&nodes)
        .map(|(&c, &kc)| c as f64 / (n_rays as f64 * kc * dk))
        .collect();
    let grid = RadialGrid::from_bins(nodes, vec![dk; bins])?;
    DivergenceProfile::from_samples(grid, density)
}

fn sample_disk(rng: &mut ChaCha8Rng, radius: f64) -> (f64, f64) {
    let r = radius * rng.gen_range(0.0..1.0f64).sqrt();
    let t = rng.gen_range(0.0..2.0 * PI);
    (r * t.cos(), r * t.sin())
}

fn sample_annulus(rng: &mut ChaCha8Rng, inner: f64, outer: f64) -> (f64, f64) {
    let u: f64 = rng.gen_range(0.0..1.0);
    let r = (inner * inner + u * (outer * outer - inner * inner)).sqrt();
    let t = rng.gen_range(0.0..2.0 * PI);
    (r * t.cos(), r * t.sin())
}

/// Regularized delta-ring spectrum of a Bessel beam: a single `l = 0` mode
/// whose radial profile is a Gaussian ring of the given width around
/// `k_rho`, scaled to unit analytic norm `\int |f_0|^2 k dk = 1`. The spin
/// components of the beam are `b_plus` and `b_minus` times this spectrum.
pub fn bessel_spectrum(spec: &BesselBeamSpec, width: f64) -> Result<AzimuthalSpectrum> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::Domain(format!(
            "regularization width must be > 0, got {width}"
        )));
    }
    if spec.k_rho <= 0.0 {
        return Err(Error::Domain(
            "a delta-ring spectrum needs k_rho > 0".into(),
        ));
    }
    let k_lo = (spec.k_rho - 8.0 * width).max(0.0);
    let k_hi = spec.k_rho + 8.0 * width;
    let grid = RadialGrid::gauss_legendre_panels(k_lo, k_hi, 8, 16)?;
    // |f_0(k)|^2 k = exp(-(k - k_rho)^2 / width^2) / (width sqrt(pi)), a
    // unit-mass Gaussian in k; the square root carries 1/sqrt(k).
    let norm = (width * PI.sqrt()).sqrt();
    let coeffs: Vec<C64> = grid
        .nodes()
        .iter()
        .map(|&k| {
            let g = (-(k - spec.k_rho) * (k - spec.k_rho) / (2.0 * width * width)).exp();
            C64::new(g / (norm * k.sqrt()), 0.0)
        })
        .collect();
    AzimuthalSpectrum::new(0, vec![coeffs], grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_amplitude_center_symmetry_and_norm() {
        let spec = GaussianPacketSpec::new(2.0, 0.3, 1.5).unwrap();
        assert_eq!(gaussian_spectral_amplitude(&spec, 0.0, 2.0), 1.0);
        let a = gaussian_spectral_amplitude(&spec, 0.4, 2.1);
        let b = gaussian_spectral_amplitude(&spec, -0.4, 2.1);
        assert_eq!(a, b);

        // Numeric L2 norm over a wide Cartesian box vs pi R sigma^2 / 2.
        let n = 400;
        let (lo, hi) = (-2.5f64, 6.5f64);
        let h = (hi - lo) / n as f64;
        let mut num = 0.0;
        for i in 0..n {
            for j in 0..n {
                let kx = lo + (i as f64 + 0.5) * h;
                let ky = lo + (j as f64 + 0.5) * h;
                let v = gaussian_spectral_amplitude(&spec, kx, ky);
                num += v * v * h * h;
            }
        }
        let want = gaussian_l2_norm(&spec);
        assert!(
            (num - want).abs() < 1e-8 * want,
            "numeric {num} vs analytic {want}"
        );
    }

    #[test]
    fn gaussian_is_isotropic_about_center_when_symmetric() {
        let spec = GaussianPacketSpec::new(1.0, 0.5, 1.0).unwrap();
        for &(dx, dy) in &[(0.3, 0.0), (0.0, 0.3), (0.3 / 2.0_f64.sqrt(), 0.3 / 2.0_f64.sqrt())] {
            let v = gaussian_spectral_amplitude(&spec, dx, 1.0 + dy);
            let v0 = gaussian_spectral_amplitude(&spec, 0.3, 1.0);
            assert!((v - v0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_pinhole_profile_has_exact_support_and_peak_at_zero() {
        let geom = CollimatorGeometry::new(
            CollimatorKind::TwoPinholes { radius: 0.15 },
            1.0,
            1.0,
        )
        .unwrap();
        assert!((geom.k_r_support() - 0.3).abs() < 1e-15);
        let prof = divergence_profile(&geom, 160).unwrap();
        // Normalized within 1e-10.
        let total = prof.grid().integrate_radial(prof.density());
        assert!((total - 1.0).abs() < 1e-10);
        // Density decreases from the axis and vanishes at the support edge.
        assert!(prof.density()[0] > *prof.density().last().unwrap());
        assert!(geom.acceptance(0.2999) > 0.0);
        assert_eq!(geom.acceptance(0.3001), 0.0);
        assert!(geom.acceptance(0.0) >= geom.acceptance(0.1));
    }

    #[test]
    fn annulus_profile_peaks_on_a_ring() {
        let geom = CollimatorGeometry::new(
            CollimatorKind::AnnulusAndPinhole {
                inner_radius: 0.20,
                outer_radius: 0.26,
                pinhole_radius: 0.02,
            },
            1.0,
            1.0,
        )
        .unwrap();
        let prof = divergence_profile(&geom, 200).unwrap();
        let (peak_idx, _) = prof
            .density()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let k_peak = prof.grid().nodes()[peak_idx];
        // Band-limited around the annulus mean angle (0.20..0.26), zero at 0.
        assert!(k_peak > 0.18 && k_peak < 0.28, "peak at {k_peak}");
        assert_eq!(prof.density()[0], 0.0);
    }

    #[test]
    fn exit_and_pinhole_profile_has_a_plateau() {
        let geom = CollimatorGeometry::new(
            CollimatorKind::ExitAndPinhole {
                exit_radius: 0.25,
                pinhole_radius: 0.05,
            },
            1.0,
            1.0,
        )
        .unwrap();
        // Inside d < exit - pinhole the pinhole sits fully inside the exit
        // window: constant acceptance.
        let a0 = geom.acceptance(0.0);
        let a1 = geom.acceptance(0.19);
        assert!((a0 - a1).abs() < 1e-14 * a0);
        assert!(geom.acceptance(0.25) < a0);
        assert_eq!(geom.acceptance(0.31), 0.0);
    }

    #[test]
    fn monte_carlo_reproduces_the_analytic_bin_masses() {
        // Bin-mass comparison: with 1e7 rays the per-bin standard error is
        // ~5e-5, well under the 1e-3 acceptance bound.
        let geometries = [
            CollimatorGeometry::new(CollimatorKind::TwoPinholes { radius: 0.15 }, 1.0, 1.0)
                .unwrap(),
            CollimatorGeometry::new(
                CollimatorKind::AnnulusAndPinhole {
                    inner_radius: 0.20,
                    outer_radius: 0.26,
                    pinhole_radius: 0.02,
                },
                1.0,
                1.0,
            )
            .unwrap(),
        ];
        for geom in &geometries {
            let bins = 64;
            let mc = divergence_profile_monte_carlo(geom, bins, 10_000_000, 0x5eed).unwrap();
            let k_max = geom.k_r_support();
            let dk = k_max / bins as f64;
            // Analytic bin masses by fine quadrature of the acceptance.
            let fine = RadialGrid::gauss_legendre_panels(0.0, k_max, bins, 8).unwrap();
            let dens: Vec<f64> = fine.nodes().iter().map(|&k| geom.acceptance(k)).collect();
            let total = fine.integrate_radial(&dens);
            let mut worst = 0.0f64;
            for b in 0..bins {
                let mass_mc = mc.density()[b] * mc.grid().nodes()[b] * dk;
                // The fine grid has `bins` panels of 8 nodes aligned with
                // the histogram bins.
                let mut mass_an = 0.0;
                for j in 0..8 {
                    let idx = b * 8 + j;
                    mass_an += fine.weights()[idx] * fine.nodes()[idx] * dens[idx];
                }
                worst = worst.max((mass_mc - mass_an / total).abs());
            }
            assert!(worst < 1e-3, "sup-norm of bin masses {worst}");
        }
    }

    #[test]
    fn monte_carlo_is_deterministic_for_a_seed() {
        let geom =
            CollimatorGeometry::new(CollimatorKind::TwoPinholes { radius: 0.1 }, 1.0, 1.0)
                .unwrap();
        let a = divergence_profile_monte_carlo(&geom, 32, 100_000, 42).unwrap();
        let b = divergence_profile_monte_carlo(&geom, 32, 100_000, 42).unwrap();
        assert_eq!(a.density(), b.density());
        let c = divergence_profile_monte_carlo(&geom, 32, 100_000, 43).unwrap();
        assert_ne!(a.density(), c.density());
    }

    #[test]
    fn narrowing_an_aperture_narrows_the_support() {
        let wide =
            CollimatorGeometry::new(CollimatorKind::TwoPinholes { radius: 0.2 }, 1.0, 1.0)
                .unwrap();
        let narrow =
            CollimatorGeometry::new(CollimatorKind::TwoPinholes { radius: 0.1 }, 1.0, 1.0)
                .unwrap();
        assert!(narrow.k_r_support() < wide.k_r_support());
    }

    #[test]
    fn bessel_spectrum_is_a_unit_norm_ring_at_ell_zero() {
        let beam = BesselBeamSpec::new(0.25, 1.0, C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        for &width in &[0.02, 0.01, 0.005] {
            let spec = bessel_spectrum(&beam, width).unwrap();
            assert_eq!(spec.window(), (0, 0));
            let a0 = spec.mode_norm(0);
            // Quadrature norm approaches the analytic unit norm at least
            // quadratically in the ring width.
            assert!(
                (a0 - 1.0).abs() < 0.5 * width * width,
                "width {width}: A0 = {a0}"
            );
        }
    }

    #[test]
    fn bessel_spectrum_synthesizes_to_j0() {
        use crate::transforms::{bessel_j, hankel_synthesize};
        let beam = BesselBeamSpec::new(0.25, 1.0, C64::new(1.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        // Ring-width bias grows like (width * r)^2; keep width * r_max small.
        let spec = bessel_spectrum(&beam, 0.002).unwrap();
        let radii = [0.0, 2.0, 7.0];
        let field = hankel_synthesize(&spec, &radii, &[0.0]).unwrap();
        let scale = field[0][0].re; // profile is J0 up to overall scale
        for (i, &r) in radii.iter().enumerate() {
            let want = bessel_j(0, beam.k_rho * r);
            let got = field[i][0].re / scale;
            assert!(
                (got - want).abs() < 1e-4,
                "r={r}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn spin_amplitudes_normalize_on_construction() {
        let beam = BesselBeamSpec::new(0.1, 1.0, C64::new(3.0, 0.0), C64::new(0.0, 4.0)).unwrap();
        let total = beam.b_plus.norm_sqr() + beam.b_minus.norm_sqr();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(BesselBeamSpec::new(0.1, 1.0, C64::new(0.0, 0.0), C64::new(0.0, 0.0)).is_err());
        assert!(BesselBeamSpec::new(-0.1, 1.0, C64::new(1.0, 0.0), C64::new(0.0, 0.0)).is_err());
        assert!(BesselBeamSpec::new(0.1, 0.0, C64::new(1.0, 0.0), C64::new(0.0, 0.0)).is_err());
    }
}
