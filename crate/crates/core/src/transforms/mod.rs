//! Azimuthal Fourier decomposition and Hankel transforms between the
//! transverse wavenumber plane `(k, phi)` and the transverse position plane
//! `(r, theta)`.
//!
//! Conventions, fixed once here and relied on everywhere else:
//!
//! - azimuthal analysis carries no `1/2pi`:
//!   `f_l(k) = \int_0^{2pi} f(k, phi) e^{-i l phi} dphi`
//! - synthesis:
//!   `psi(r, theta) = sum_l i^{-l} e^{i l theta} \int_0^inf f_l(k) J_l(k r) k dk`
//! - analysis back to the spectrum:
//!   `psi_l(r) = (1/2pi) \int psi e^{-i l theta} dtheta`, then
//!   `f_l(k) = i^{+l} \int_0^inf psi_l(r) J_l(k r) r dr`
//!
//! With these factors the round trip is the identity and the per-mode
//! Parseval identity reads `\int |f_l|^2 k dk = \int |psi_l|^2 r dr`.

pub mod bessel;
pub mod quadrature;

use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

pub use bessel::{bessel_j, bessel_j_sequence};
pub use quadrature::{gauss_legendre, RadialGrid};

/// Fraction of the total norm a mode window may miss before decomposition
/// reports it as too narrow.
pub const WINDOW_TAIL_TOLERANCE: f64 = 1e-10;

/// Safety factor on top of the Nyquist limit when checking that a quadrature
/// grid can resolve the oscillation of the transform kernel at the farthest
/// target point.
pub const NYQUIST_SAFETY: f64 = 2.0;

/// Azimuthal mode coefficients `f_l(k)` on a contiguous window of integers
/// `l`, sharing one radial quadrature grid.
#[derive(Debug, Clone)]
pub struct AzimuthalSpectrum {
    ell_min: i32,
    coeffs: Vec<Vec<C64>>,
    grid: RadialGrid,
}

impl AzimuthalSpectrum {
    /// Wrap precomputed coefficients; `coeffs[j]` holds mode
    /// `ell_min + j` sampled on `grid`.
    pub fn new(ell_min: i32, coeffs: Vec<Vec<C64>>, grid: RadialGrid) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("spectrum needs at least one mode".into()));
        }
        if coeffs.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::Domain(
                "every mode must be sampled on the shared radial grid".into(),
            ));
        }
        Ok(AzimuthalSpectrum {
            ell_min,
            coeffs,
            grid,
        })
    }

    /// All-zero spectrum on the inclusive window `[ell_min, ell_max]`.
    pub fn zeros(window: (i32, i32), grid: RadialGrid) -> Self {
        let (ell_min, ell_max) = window;
        assert!(ell_min <= ell_max, "window must be non-empty");
        let n = (ell_max - ell_min + 1) as usize;
        let coeffs = vec![vec![C64::new(0.0, 0.0); grid.len()]; n];
        AzimuthalSpectrum {
            ell_min,
            coeffs,
            grid,
        }
    }

    /// Inclusive mode window `(ell_min, ell_max)`.
    pub fn window(&self) -> (i32, i32) {
        (
            self.ell_min,
            self.ell_min + self.coeffs.len() as i32 - 1,
        )
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    /// Coefficients of mode `ell`, if the window contains it.
    pub fn coeff(&self, ell: i32) -> Option<&[C64]> {
        let idx = ell.checked_sub(self.ell_min)?;
        if idx < 0 {
            return None;
        }
        self.coeffs.get(idx as usize).map(|c| c.as_slice())
    }

    pub fn coeff_mut(&mut self, ell: i32) -> Option<&mut [C64]> {
        let idx = ell.checked_sub(self.ell_min)?;
        if idx < 0 {
            return None;
        }
        self.coeffs.get_mut(idx as usize).map(|c| c.as_mut_slice())
    }

    /// Iterate `(ell, coefficients)` over the window.
    pub fn rows(&self) -> impl Iterator<Item = (i32, &[C64])> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(j, c)| (self.ell_min + j as i32, c.as_slice()))
    }

    /// Relabel every mode `l -> l + shift`, the exact spectral form of
    /// multiplying the wavenumber-plane field by `e^{i shift phi}`.
    pub fn shifted(&self, shift: i32) -> Self {
        AzimuthalSpectrum {
            ell_min: self.ell_min + shift,
            coeffs: self.coeffs.clone(),
            grid: self.grid.clone(),
        }
    }

    /// Largest |l| in the window.
    pub fn max_abs_ell(&self) -> i32 {
        let (lo, hi) = self.window();
        lo.abs().max(hi.abs())
    }

    /// Norm of one mode, `\int |f_l(k)|^2 k dk`; zero for modes outside the
    /// window.
    pub fn mode_norm(&self, ell: i32) -> f64 {
        match self.coeff(ell) {
            None => 0.0,
            Some(c) => {
                let vals: Vec<f64> = c.iter().map(|v| v.norm_sqr()).collect();
                self.grid.integrate_radial(&vals)
            }
        }
    }

    /// Sum of `mode_norm` over the window.
    pub fn total_norm(&self) -> f64 {
        let (lo, hi) = self.window();
        (lo..=hi).map(|l| self.mode_norm(l)).sum()
    }
}

/// Norm carried by mode `ell`: `\int |f_l(k)|^2 k dk`, which by the
/// conventions of this module equals the real-space integral
/// `\int |psi_l(r)|^2 r dr` of the synthesized field.
pub fn parseval_mode_norm(spec: &AzimuthalSpectrum, ell: i32) -> f64 {
    spec.mode_norm(ell)
}

/// Sample a function of `(k, phi)` on `grid x {2 pi j / n_phi}` in the
/// row-major layout `[radial][azimuthal]` the decomposition routines expect.
pub fn sample_polar(
    grid: &RadialGrid,
    n_phi: usize,
    f: impl Fn(f64, f64) -> C64,
) -> Vec<Vec<C64>> {
    grid.nodes()
        .iter()
        .map(|&k| {
            (0..n_phi)
                .map(|j| f(k, 2.0 * PI * j as f64 / n_phi as f64))
                .collect()
        })
        .collect()
}

/// Extract azimuthal coefficients `f_l(k_i)` on the requested window from
/// samples at uniform angles `phi_j = 2 pi j / n_phi`.
///
/// Errors with [`Error::Aliasing`] when the angular sampling cannot separate
/// the window's modes (`n_phi < 2 (max|l| + 1)`), and with
/// [`Error::WindowTail`] when more than [`WINDOW_TAIL_TOLERANCE`] of the
/// sampled norm lies in resolvable modes outside the window.
pub fn azimuthal_decompose(
    samples: &[Vec<C64>],
    grid: &RadialGrid,
    window: (i32, i32),
) -> Result<AzimuthalSpectrum> {
    let spectrum = decompose_unchecked(samples, grid, window)?;
    let tail = window_tail_fraction(samples, grid, &spectrum);
    if tail > WINDOW_TAIL_TOLERANCE {
        return Err(Error::WindowTail {
            tail_fraction: tail,
        });
    }
    Ok(spectrum)
}

/// Like [`azimuthal_decompose`], but grows the window symmetrically until
/// the tail criterion is met instead of failing. Errors only when even the
/// widest window the angular sampling supports leaves too much tail.
pub fn azimuthal_decompose_auto(
    samples: &[Vec<C64>],
    grid: &RadialGrid,
    initial_window: (i32, i32),
) -> Result<AzimuthalSpectrum> {
    let n_phi = samples.first().map_or(0, |row| row.len());
    let mut window = initial_window;
    loop {
        match azimuthal_decompose(samples, grid, window) {
            Err(Error::WindowTail { tail_fraction }) => {
                let grown = (window.0 - 2, window.1 + 2);
                let max_abs = grown.0.abs().max(grown.1.abs()) as usize;
                if 2 * (max_abs + 1) > n_phi {
                    // The sampling cannot resolve a wider window; report the
                    // tail that remains at the widest one we could test.
                    return Err(Error::WindowTail { tail_fraction });
                }
                window = grown;
            }
            other => return other,
        }
    }
}

fn decompose_unchecked(
    samples: &[Vec<C64>],
    grid: &RadialGrid,
    window: (i32, i32),
) -> Result<AzimuthalSpectrum> {
    let (ell_min, ell_max) = window;
    if ell_min > ell_max {
        return Err(Error::Domain(format!(
            "mode window [{ell_min}, {ell_max}] is empty"
        )));
    }
    if samples.len() != grid.len() {
        return Err(Error::Domain(
            "sample rows must match the radial grid".into(),
        ));
    }
    let n_phi = samples.first().map_or(0, |row| row.len());
    if n_phi == 0 || samples.iter().any(|row| row.len() != n_phi) {
        return Err(Error::Domain(
            "azimuthal samples must form a non-empty rectangular table".into(),
        ));
    }
    let max_abs = ell_min.abs().max(ell_max.abs()) as usize;
    let required = 2 * (max_abs + 1);
    if n_phi < required {
        return Err(Error::Aliasing { n_phi, required });
    }

    let dphi = 2.0 * PI / n_phi as f64;
    let mut coeffs = Vec::with_capacity((ell_max - ell_min + 1) as usize);
    for ell in ell_min..=ell_max {
        let phases: Vec<C64> = (0..n_phi)
            .map(|j| C64::from_polar(1.0, -(ell as f64) * dphi * j as f64))
            .collect();
        let row: Vec<C64> = samples
            .iter()
            .map(|ring| {
                ring.iter()
                    .zip(&phases)
                    .map(|(&v, &p)| v * p)
                    .sum::<C64>()
                    * dphi
            })
            .collect();
        coeffs.push(row);
    }
    AzimuthalSpectrum::new(ell_min, coeffs, grid.clone())
}

/// Fraction of the sampled field's norm that the window fails to capture.
///
/// The discrete angular Parseval identity
/// `dphi sum_j |f(k, phi_j)|^2 = (1/2pi) sum_l |f_l(k)|^2` (sum over the
/// `n_phi` distinguishable modes) turns the comparison into two quadratures
/// over the same samples.
fn window_tail_fraction(
    samples: &[Vec<C64>],
    grid: &RadialGrid,
    spectrum: &AzimuthalSpectrum,
) -> f64 {
    let n_phi = samples[0].len();
    let dphi = 2.0 * PI / n_phi as f64;
    let ring_norms: Vec<f64> = samples
        .iter()
        .map(|ring| dphi * ring.iter().map(|v| v.norm_sqr()).sum::<f64>())
        .collect();
    let total = grid.integrate_radial(&ring_norms);
    if total <= 0.0 {
        return 0.0;
    }
    let (lo, hi) = spectrum.window();
    let windowed: f64 = (lo..=hi)
        .map(|l| spectrum.mode_norm(l) / (2.0 * PI))
        .sum();
    ((total - windowed) / total).max(0.0)
}

/// Transverse position grid of a synthesized field.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldGrid {
    Polar { r: Vec<f64>, theta: Vec<f64> },
    Cartesian { x: Vec<f64>, y: Vec<f64> },
}

/// Two-component (spin up / spin down) field sampled on a position grid,
/// stored row-major: `plus[i][j]` is the first grid axis at `i`, second at
/// `j`.
#[derive(Debug, Clone)]
pub struct RealSpaceField {
    pub grid: FieldGrid,
    pub plus: Vec<Vec<C64>>,
    pub minus: Vec<Vec<C64>>,
}

/// Largest gap between consecutive entries of an ascending sequence.
fn max_gap(xs: &[f64]) -> f64 {
    xs.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max)
}

/// Check that quadrature nodes spaced up to `gap` can resolve the kernel
/// oscillation `J_l(k r)` out to the farthest target `reach`.
fn check_kernel_resolution(gap: f64, reach: f64, what: &str) -> Result<()> {
    if gap > 0.0 && reach * gap > PI / NYQUIST_SAFETY {
        return Err(Error::Resolution(format!(
            "{what}: node spacing {gap:.3e} cannot resolve the kernel \
             oscillation at reach {reach:.3e} (need spacing <= {:.3e})",
            PI / (NYQUIST_SAFETY * reach)
        )));
    }
    Ok(())
}

/// Synthesize one component on a polar grid:
/// `psi(r_i, theta_j) = sum_l i^{-l} e^{i l theta_j} \int f_l(k) J_l(k r_i) k dk`.
///
/// The radial quadrature grid must be fine enough to resolve `J_l(k r)` at
/// the largest requested radius; otherwise this errors rather than return a
/// silently under-resolved integral.
pub fn hankel_synthesize(
    spec: &AzimuthalSpectrum,
    r: &[f64],
    theta: &[f64],
) -> Result<Vec<Vec<C64>>> {
    if r.is_empty() || theta.is_empty() {
        return Err(Error::Domain("synthesis target grid is empty".into()));
    }
    if r.iter().any(|&ri| ri < 0.0) {
        return Err(Error::Domain("radii must be >= 0".into()));
    }
    let r_max = r.iter().cloned().fold(0.0, f64::max);
    check_kernel_resolution(max_gap(spec.grid().nodes()), r_max, "hankel synthesis")?;

    let (ell_lo, ell_hi) = spec.window();
    let n_ell = (ell_hi - ell_lo + 1) as usize;
    let max_abs = spec.max_abs_ell() as usize;
    let nodes = spec.grid().nodes();
    let weights = spec.grid().weights();

    let mut out = vec![vec![C64::new(0.0, 0.0); theta.len()]; r.len()];
    let mut radial = vec![C64::new(0.0, 0.0); n_ell];
    for (i, &ri) in r.iter().enumerate() {
        radial.iter_mut().for_each(|h| *h = C64::new(0.0, 0.0));
        for (idx, (&k, &w)) in nodes.iter().zip(weights).enumerate() {
            let j_seq = bessel_j_sequence(max_abs, k * ri);
            let kw = k * w;
            for (slot, ell) in (ell_lo..=ell_hi).enumerate() {
                let n = ell.unsigned_abs() as usize;
                let mut j = j_seq[n];
                if ell < 0 && n % 2 == 1 {
                    j = -j;
                }
                radial[slot] += spec.coeffs[slot][idx] * (kw * j);
            }
        }
        for (j, &th) in theta.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (slot, ell) in (ell_lo..=ell_hi).enumerate() {
                acc += radial[slot] * i_pow(-ell) * C64::from_polar(1.0, ell as f64 * th);
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// Synthesize both spinor components onto one polar [`RealSpaceField`].
pub fn hankel_synthesize_spinor(
    plus: &AzimuthalSpectrum,
    minus: &AzimuthalSpectrum,
    r: &[f64],
    theta: &[f64],
) -> Result<RealSpaceField> {
    Ok(RealSpaceField {
        grid: FieldGrid::Polar {
            r: r.to_vec(),
            theta: theta.to_vec(),
        },
        plus: hankel_synthesize(plus, r, theta)?,
        minus: hankel_synthesize(minus, r, theta)?,
    })
}

/// Recover spectrum coefficients from field samples on a polar quadrature
/// grid (radii on `r_grid`, angles uniform `theta_j = 2 pi j / n_theta`),
/// the exact inverse of [`hankel_synthesize`]:
/// `f_l(k) = i^{+l} \int [(1/2pi) \int psi e^{-i l theta} dtheta] J_l(k r) r dr`.
pub fn hankel_analyze(
    values: &[Vec<C64>],
    r_grid: &RadialGrid,
    window: (i32, i32),
    k_grid: &RadialGrid,
) -> Result<AzimuthalSpectrum> {
    let (ell_min, ell_max) = window;
    if ell_min > ell_max {
        return Err(Error::Domain(format!(
            "mode window [{ell_min}, {ell_max}] is empty"
        )));
    }
    if values.len() != r_grid.len() {
        return Err(Error::Domain(
            "sample rows must match the radial quadrature grid".into(),
        ));
    }
    let n_theta = values.first().map_or(0, |row| row.len());
    if n_theta == 0 || values.iter().any(|row| row.len() != n_theta) {
        return Err(Error::Domain(
            "angular samples must form a non-empty rectangular table".into(),
        ));
    }
    let max_abs = ell_min.abs().max(ell_max.abs()) as usize;
    let required = 2 * (max_abs + 1);
    if n_theta < required {
        return Err(Error::Aliasing {
            n_phi: n_theta,
            required,
        });
    }
    check_kernel_resolution(max_gap(r_grid.nodes()), k_grid.k_max(), "hankel analysis")?;

    let dtheta = 2.0 * PI / n_theta as f64;
    let mut coeffs = Vec::with_capacity((ell_max - ell_min + 1) as usize);
    for ell in ell_min..=ell_max {
        // psi_l on the radial quadrature nodes.
        let phases: Vec<C64> = (0..n_theta)
            .map(|j| C64::from_polar(1.0, -(ell as f64) * dtheta * j as f64))
            .collect();
        let psi_l: Vec<C64> = values
            .iter()
            .map(|ring| {
                ring.iter()
                    .zip(&phases)
                    .map(|(&v, &p)| v * p)
                    .sum::<C64>()
                    * (dtheta / (2.0 * PI))
            })
            .collect();
        // Hankel transform of psi_l onto the target wavenumbers.
        let n = ell.unsigned_abs() as usize;
        let parity = if ell < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
        let row: Vec<C64> = k_grid
            .nodes()
            .iter()
            .map(|&k| {
                let mut acc = C64::new(0.0, 0.0);
                for ((&r, &w), &p) in r_grid.nodes().iter().zip(r_grid.weights()).zip(&psi_l) {
                    let j = parity * bessel_j_sequence(n, k * r)[n];
                    acc += p * (w * r * j);
                }
                acc * i_pow(ell)
            })
            .collect();
        coeffs.push(row);
    }
    AzimuthalSpectrum::new(ell_min, coeffs, k_grid.clone())
}

/// Integer power of the imaginary unit, exact for any sign.
pub fn i_pow(n: i32) -> C64 {
    match n.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Modified Bessel function `I_l(x)` by its power series; converges for
    /// the moderate arguments used in tests.
    fn bessel_i(ell: u32, x: f64) -> f64 {
        let half = 0.5 * x;
        let mut term = 1.0;
        for m in 1..=ell {
            term *= half / m as f64;
        }
        let mut sum = term;
        let q = half * half;
        let mut m = 1.0;
        while term.abs() > 1e-18 * sum.abs().max(1.0) {
            term *= q / (m * (m + ell as f64));
            sum += term;
            m += 1.0;
        }
        sum
    }

    fn test_grid() -> RadialGrid {
        RadialGrid::gauss_legendre_panels(0.0, 3.0, 4, 12).unwrap()
    }

    #[test]
    fn decompose_recovers_modified_bessel_generating_function() {
        // f(k, phi) = exp(k cos phi) has coefficients 2 pi I_l(k).
        let grid = test_grid();
        let samples = sample_polar(&grid, 128, |k, phi| C64::new((k * phi.cos()).exp(), 0.0));
        let spec = azimuthal_decompose(&samples, &grid, (-20, 20)).unwrap();
        for &ell in &[0i32, 1, 3, 8] {
            let want: Vec<f64> = grid
                .nodes()
                .iter()
                .map(|&k| 2.0 * PI * bessel_i(ell as u32, k))
                .collect();
            let got = spec.coeff(ell).unwrap();
            for (g, w) in got.iter().zip(&want) {
                assert!(
                    (g.re - w).abs() < 1e-10 * w.abs().max(1.0) && g.im.abs() < 1e-10,
                    "l={ell}: got {g}, want {w}"
                );
            }
            // Negative orders mirror positive ones for this even field.
            let neg = spec.coeff(-ell).unwrap();
            for (n, p) in neg.iter().zip(got) {
                assert!((n - p).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn decompose_rejects_undersampled_windows() {
        let grid = test_grid();
        let samples = sample_polar(&grid, 8, |_, _| C64::new(1.0, 0.0));
        match azimuthal_decompose(&samples, &grid, (-6, 6)) {
            Err(Error::Aliasing { n_phi, required }) => {
                assert_eq!(n_phi, 8);
                assert_eq!(required, 14);
            }
            other => panic!("expected aliasing error, got {other:?}"),
        }
    }

    #[test]
    fn decompose_reports_norm_leaking_past_the_window() {
        let grid = test_grid();
        // Content at l = +/-5 only.
        let samples = sample_polar(&grid, 64, |k, phi| {
            C64::new((-k).exp() * (5.0 * phi).cos(), 0.0)
        });
        match azimuthal_decompose(&samples, &grid, (-2, 2)) {
            Err(Error::WindowTail { tail_fraction }) => {
                assert!(tail_fraction > 0.99, "tail should be ~1, got {tail_fraction}");
            }
            other => panic!("expected window-tail error, got {other:?}"),
        }
        // The auto variant widens until it captures the content.
        let spec = azimuthal_decompose_auto(&samples, &grid, (-2, 2)).unwrap();
        let (lo, hi) = spec.window();
        assert!(lo <= -5 && hi >= 5);
        let n5 = spec.mode_norm(5);
        let total = spec.total_norm();
        assert!((spec.mode_norm(-5) - n5).abs() < 1e-12 * n5);
        assert!((2.0 * n5 / total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_hankel_pair_is_reproduced() {
        // f_0(k) = exp(-k^2 / (2 sigma^2))  <->  psi(r) = sigma^2 exp(-sigma^2 r^2 / 2).
        let sigma = 1.0f64;
        let grid = RadialGrid::gauss_legendre_panels(0.0, 8.0, 10, 16).unwrap();
        let coeffs: Vec<C64> = grid
            .nodes()
            .iter()
            .map(|&k| C64::new((-k * k / (2.0 * sigma * sigma)).exp(), 0.0))
            .collect();
        let spec = AzimuthalSpectrum::new(0, vec![coeffs], grid).unwrap();
        let radii = [0.0, 0.3, 1.0, 2.2, 4.0];
        let field = hankel_synthesize(&spec, &radii, &[0.0]).unwrap();
        for (i, &r) in radii.iter().enumerate() {
            let want = sigma * sigma * (-sigma * sigma * r * r / 2.0).exp();
            let got = field[i][0];
            assert!(
                (got.re - want).abs() < 1e-10 && got.im.abs() < 1e-14,
                "r={r}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn delta_ring_synthesizes_to_a_bessel_profile() {
        // A unit-mass ring at k_rho becomes J_0(k_rho r) exactly, because the
        // single-node grid evaluates the sifting integral in closed form.
        let k_rho = 1.7;
        let ring = RadialGrid::delta_ring(k_rho).unwrap();
        let spec = AzimuthalSpectrum::new(
            0,
            vec![vec![C64::new(1.0, 0.0)]],
            ring,
        )
        .unwrap();
        for &r in &[0.0, 0.9, 3.3, 10.0] {
            let got = hankel_synthesize(&spec, &[r], &[0.0]).unwrap()[0][0];
            let want = bessel_j(0, k_rho * r);
            assert!((got.re - want).abs() < 1e-14 && got.im == 0.0);
        }
    }

    /// Band-limited random spectrum whose synthesized field is compact to
    /// machine precision inside the analysis aperture. Profiles have the
    /// form `k^|l| (even polynomial) exp(-k^2/2s^2)`, which makes the 2D
    /// field `f_l(k) e^{i l phi}` smooth at the wavenumber origin and its
    /// Hankel image decay like a Gaussian in `r`.
    fn random_band_limited(seed: u64, window: (i32, i32), grid: &RadialGrid) -> AzimuthalSpectrum {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let s = 0.5;
        let mut coeffs = Vec::new();
        for ell in window.0..=window.1 {
            let a2 = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let a4 = C64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
            let amp = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let row: Vec<C64> = grid
                .nodes()
                .iter()
                .map(|&k| {
                    let poly = C64::new(1.0, 0.0) + a2 * (k * k) + a4 * (k * k * k * k);
                    (amp + poly) * k.powi(ell.abs()) * (-k * k / (2.0 * s * s)).exp()
                })
                .collect();
            coeffs.push(row);
        }
        AzimuthalSpectrum::new(window.0, coeffs, grid.clone()).unwrap()
    }

    #[test]
    fn synthesize_then_analyze_is_the_identity_on_band_limited_fields() {
        let window = (-4, 6);
        let k_grid = RadialGrid::gauss_legendre_panels(0.0, 4.0, 8, 16).unwrap();
        let spec = random_band_limited(7, window, &k_grid);

        let r_grid = RadialGrid::gauss_legendre_panels(0.0, 25.0, 10, 16).unwrap();
        let n_theta = 32;
        let thetas: Vec<f64> = (0..n_theta)
            .map(|j| 2.0 * PI * j as f64 / n_theta as f64)
            .collect();
        let field = hankel_synthesize(&spec, r_grid.nodes(), &thetas).unwrap();
        let back = hankel_analyze(&field, &r_grid, window, &k_grid).unwrap();

        let scale = spec.total_norm().sqrt();
        for (ell, row) in spec.rows() {
            let rec = back.coeff(ell).unwrap();
            for (a, b) in row.iter().zip(rec) {
                assert!(
                    (a - b).norm() < 1e-8 * scale,
                    "l={ell}: {a} went to {b}"
                );
            }
        }
    }

    #[test]
    fn mode_norm_matches_real_space_norm() {
        // Parseval per mode: \int |f_l|^2 k dk = \int |psi_l|^2 r dr.
        let window = (-2, 3);
        let k_grid = RadialGrid::gauss_legendre_panels(0.0, 4.0, 8, 16).unwrap();
        let spec = random_band_limited(11, window, &k_grid);
        let r_grid = RadialGrid::gauss_legendre_panels(0.0, 25.0, 10, 16).unwrap();

        for (ell, _) in spec.rows() {
            // Synthesize the single mode; at theta = 0 the field value is the
            // radial profile times a unit phase.
            let single = AzimuthalSpectrum::new(
                ell,
                vec![spec.coeff(ell).unwrap().to_vec()],
                k_grid.clone(),
            )
            .unwrap();
            let field = hankel_synthesize(&single, r_grid.nodes(), &[0.0]).unwrap();
            let dens: Vec<f64> = field.iter().map(|row| row[0].norm_sqr()).collect();
            let real_norm = r_grid.integrate_radial(&dens);
            let spec_norm = parseval_mode_norm(&spec, ell);
            assert!(
                (real_norm - spec_norm).abs() < 1e-8 * spec_norm.max(1e-12),
                "l={ell}: real {real_norm} vs spectral {spec_norm}"
            );
        }
    }

    #[test]
    fn synthesis_refuses_unresolvable_targets() {
        let k_grid = RadialGrid::gauss_legendre_panels(0.0, 4.0, 2, 4).unwrap();
        let spec = AzimuthalSpectrum::zeros((0, 0), k_grid);
        // Coarse 8-node grid over [0,4] cannot resolve J_0(k r) at r = 100.
        match hankel_synthesize(&spec, &[100.0], &[0.0]) {
            Err(Error::Resolution(_)) => {}
            other => panic!("expected resolution error, got {other:?}"),
        }
    }

    #[test]
    fn window_shift_relabels_modes_exactly() {
        let grid = test_grid();
        let spec = random_band_limited(3, (-2, 2), &grid);
        let up = spec.shifted(1);
        assert_eq!(up.window(), (-1, 3));
        for (ell, row) in spec.rows() {
            let moved = up.coeff(ell + 1).unwrap();
            assert!(row.iter().zip(moved).all(|(a, b)| a == b));
            assert_eq!(spec.mode_norm(ell), up.mode_norm(ell + 1));
        }
        let back = up.shifted(-1);
        for (ell, row) in spec.rows() {
            assert!(row.iter().zip(back.coeff(ell).unwrap()).all(|(a, b)| a == b));
        }
    }

    #[test]
    fn i_pow_cycles_through_the_four_units() {
        assert_eq!(i_pow(0), C64::new(1.0, 0.0));
        assert_eq!(i_pow(1), C64::new(0.0, 1.0));
        assert_eq!(i_pow(-1), C64::new(0.0, -1.0));
        assert_eq!(i_pow(-2), C64::new(-1.0, 0.0));
        assert_eq!(i_pow(7), i_pow(3));
    }
}
