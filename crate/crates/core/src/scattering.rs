//! Per-mode scattering at the boundary of a semi-infinite uniform electric
//! field region.
//!
//! Each transverse Fourier mode `(k_r, phi)` of an incident spinor wave with
//! longitudinal wavenumber `k_z` scatters independently. Inside the field
//! the two spin-orbit eigenchannels propagate with
//! `k_pm = sqrt(eps - k_r^2 +- C k_r)`; matching value and derivative at the
//! interface yields closed-form transmission and reflection coefficients.
//!
//! Conventions: forward propagation is `e^{-i k z}`, reflected waves carry
//! `e^{+i k_z z}`, and evanescent roots take the branch `-i sqrt(|.|)` so
//! the transmitted factor `e^{-i k z}` decays into the field region.

use crate::beams::BesselBeamSpec;
use crate::error::{Error, Result};
use crate::transforms::AzimuthalSpectrum;
use crate::units::PhysicsContext;
use crate::C64;
use std::f64::consts::TAU;

/// Incident spin polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

/// One transverse Fourier mode of the incident spinor field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMode {
    /// Transverse radial wavenumber, >= 0.
    pub k_r: f64,
    /// Azimuth in the transverse wavenumber plane, normalized to [0, 2pi).
    pub phi: f64,
    /// Longitudinal wavenumber of the incident wave, > 0.
    pub k_z: f64,
    /// Energy parameter `eps = k_z^2 + k_r^2` (scaled units).
    pub eps: f64,
    /// Incident spin-up spectral amplitude.
    pub f_plus: C64,
    /// Incident spin-down spectral amplitude.
    pub f_minus: C64,
}

impl SpectralMode {
    pub fn new(k_r: f64, phi: f64, k_z: f64, f_plus: C64, f_minus: C64) -> Result<Self> {
        if !(k_r >= 0.0) || !k_r.is_finite() {
            return Err(Error::Domain(format!(
                "transverse wavenumber must be >= 0, got {k_r}"
            )));
        }
        if !(k_z > 0.0) || !k_z.is_finite() {
            return Err(Error::Domain(format!(
                "longitudinal wavenumber must be > 0 (grazing k_z = 0 is rejected), got {k_z}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::Domain("azimuth must be finite".into()));
        }
        Ok(SpectralMode {
            k_r,
            phi: phi.rem_euclid(TAU),
            k_z,
            eps: k_z * k_z + k_r * k_r,
            f_plus,
            f_minus,
        })
    }
}

/// Closed-form solution of the interface boundary-value problem for one
/// mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringCoefficients {
    /// Transmitted amplitude of the first spin-orbit eigenchannel (k_plus).
    pub t2: C64,
    /// Transmitted amplitude of the second eigenchannel (k_minus).
    pub t4: C64,
    /// Reflected spin-up amplitude.
    pub r_plus: C64,
    /// Reflected spin-down amplitude.
    pub r_minus: C64,
    /// Longitudinal wavenumber of the first eigenchannel in the field.
    pub k_plus: C64,
    /// Longitudinal wavenumber of the second eigenchannel in the field.
    pub k_minus: C64,
}

/// Branch-resolved longitudinal wavenumbers
/// `k_pm = sqrt(eps - k_r^2 +- C k_r)` inside the field.
///
/// A nonnegative radicand takes the principal (real, >= 0) root; a negative
/// radicand takes `-i sqrt(|.|)` so that `e^{-i k z}` decays as z grows.
pub fn longitudinal_wavenumbers(eps: f64, k_r: f64, coupling: f64) -> (C64, C64) {
    debug_assert!(eps >= 0.0 && k_r >= 0.0);
    let root = |rho: f64| -> C64 {
        if rho >= 0.0 {
            C64::new(rho.sqrt(), 0.0)
        } else {
            C64::new(0.0, -(-rho).sqrt())
        }
    };
    let base = eps - k_r * k_r;
    (root(base + coupling * k_r), root(base - coupling * k_r))
}

/// Solve the interface boundary-value problem for one mode in closed form.
///
/// With `d_pm = k_z + k_pm` and `D = d_plus d_minus`:
///
/// ```text
/// t2      = k_z (-i f_plus e^{i phi} + f_minus) / d_plus
/// t4      = k_z (+i f_plus e^{i phi} + f_minus) / d_minus
/// r_plus  = [ (k_z^2 - k_plus k_minus) f_plus
///             - i k_z (k_plus - k_minus) e^{-i phi} f_minus ] / D
/// r_minus = [ (k_z^2 - k_plus k_minus) f_minus
///             + i k_z (k_plus - k_minus) e^{+i phi} f_plus ] / D
/// ```
///
/// These are the unique coefficients satisfying continuity of the spinor
/// and its z-derivative at the interface (verified against a direct linear
/// solve of the 4x4 matching system in the tests).
pub fn scatter_mode(mode: &SpectralMode, coupling: f64) -> ScatteringCoefficients {
    let (k_plus, k_minus) = longitudinal_wavenumbers(mode.eps, mode.k_r, coupling);
    let k_z = mode.k_z;
    let d_plus = k_plus + k_z;
    let d_minus = k_minus + k_z;
    // Re(k_pm) >= 0 and k_z > 0, so the denominators never vanish.
    debug_assert!(d_plus.norm_sqr() > 0.0 && d_minus.norm_sqr() > 0.0);

    let i = C64::i();
    let e_phi = C64::from_polar(1.0, mode.phi);
    let fp = mode.f_plus;
    let fm = mode.f_minus;

    let t2 = (-i * fp * e_phi + fm) * k_z / d_plus;
    let t4 = (i * fp * e_phi + fm) * k_z / d_minus;

    let denom = d_plus * d_minus;
    let open = C64::new(k_z * k_z, 0.0) - k_plus * k_minus;
    let split = i * k_z * (k_plus - k_minus);
    let r_plus = (open * fp - split * e_phi.conj() * fm) / denom;
    let r_minus = (open * fm + split * e_phi * fp) / denom;

    ScatteringCoefficients {
        t2,
        t4,
        r_plus,
        r_minus,
        k_plus,
        k_minus,
    }
}

/// Transmitted spinor at depth `z` inside the field region:
/// `psi_plus = i e^{-i phi} (t2 e^{-i k_plus z} - t4 e^{-i k_minus z})`,
/// `psi_minus = t2 e^{-i k_plus z} + t4 e^{-i k_minus z}`.
pub fn transmitted_spinor(coefs: &ScatteringCoefficients, phi: f64, z: f64) -> (C64, C64) {
    debug_assert!(z >= 0.0, "transmitted field lives at z >= 0");
    let i = C64::i();
    let a = coefs.t2 * (-i * coefs.k_plus * z).exp();
    let b = coefs.t4 * (-i * coefs.k_minus * z).exp();
    let psi_plus = i * C64::from_polar(1.0, -phi) * (a - b);
    let psi_minus = a + b;
    (psi_plus, psi_minus)
}

/// Incident and outgoing longitudinal flux of one scattered mode:
/// `(k_z (|f+|^2 + |f-|^2),
///   k_z (|r+|^2 + |r-|^2) + 2 Re(k+) |t2|^2 + 2 Re(k-) |t4|^2)`.
///
/// The factor 2 on the transmitted channels is the squared norm of the
/// spin-orbit eigenvectors; evanescent channels have `Re k = 0` and carry
/// no flux.
pub fn mode_flux_balance(mode: &SpectralMode, coefs: &ScatteringCoefficients) -> (f64, f64) {
    let incident = mode.k_z * (mode.f_plus.norm_sqr() + mode.f_minus.norm_sqr());
    let reflected = mode.k_z * (coefs.r_plus.norm_sqr() + coefs.r_minus.norm_sqr());
    let transmitted =
        2.0 * coefs.k_plus.re * coefs.t2.norm_sqr() + 2.0 * coefs.k_minus.re * coefs.t4.norm_sqr();
    (incident, reflected + transmitted)
}

/// Spin-flip and spin-conserving reflection probabilities for a plane wave
/// of wavelength `lambda` hitting the field boundary at grazing angle
/// `theta`, normalized as reflected flux over incident flux.
pub fn reflection_probability(
    ctx: &PhysicsContext,
    theta: f64,
    lambda: f64,
    field_strength: f64,
    incident_spin: Spin,
) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "grazing angle must lie in (0, pi/2], got {theta} rad"
        )));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "wavelength must be > 0, got {lambda} m"
        )));
    }
    let k = TAU / lambda;
    let (f_plus, f_minus) = match incident_spin {
        Spin::Up => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        Spin::Down => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
    };
    let mode = SpectralMode::new(k * theta.cos(), 0.0, k * theta.sin(), f_plus, f_minus)?;
    let coupling = ctx.coupling_constant(field_strength).value();
    let coefs = scatter_mode(&mode, coupling);
    let (p_up, p_down) = (coefs.r_plus.norm_sqr(), coefs.r_minus.norm_sqr());
    Ok(match incident_spin {
        Spin::Up => (p_down, p_up),
        Spin::Down => (p_up, p_down),
    })
}

/// Component amplitudes of a transmitted Bessel beam at depth `z`.
///
/// The transmitted field is
/// `psi_pm(r, theta, z) = j0_pm J0(k_rho r) + e^{∓i theta} j1_pm J1(k_rho r)`,
/// where the `j1` parts carry the spin-orbit-converted population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselBeamFields {
    pub k_rho: f64,
    pub j0_plus: C64,
    pub j0_minus: C64,
    pub j1_plus: C64,
    pub j1_minus: C64,
}

impl BesselBeamFields {
    /// Evaluate both spinor components at `(r, theta)`.
    pub fn at(&self, r: f64, theta: f64) -> (C64, C64) {
        let j0 = crate::transforms::bessel_j(0, self.k_rho * r);
        let j1 = crate::transforms::bessel_j(1, self.k_rho * r);
        let plus = self.j0_plus * j0 + C64::from_polar(1.0, -theta) * self.j1_plus * j1;
        let minus = self.j0_minus * j0 + C64::from_polar(1.0, theta) * self.j1_minus * j1;
        (plus, minus)
    }

    /// Population fractions `(oam_free, oam_carrying)` of the transmitted
    /// field, using equal ring norms of the J0 and J1 parts.
    pub fn populations(&self) -> (f64, f64) {
        let free = self.j0_plus.norm_sqr() + self.j0_minus.norm_sqr();
        let carrying = self.j1_plus.norm_sqr() + self.j1_minus.norm_sqr();
        let total = free + carrying;
        if total == 0.0 {
            (0.0, 0.0)
        } else {
            (free / total, carrying / total)
        }
    }
}

/// Per-ring transmission factors `sum/diff = k_z (e+/d+ ± e-/d-)` with
/// `e_pm = e^{-i k_pm z}` and `d_pm = k_z + k_pm`, the two combinations
/// every transmitted component is built from.
fn ring_factors(k_z: f64, k_plus: C64, k_minus: C64, z: f64) -> (C64, C64) {
    let i = C64::i();
    let a = (-i * k_plus * z).exp() / (k_plus + k_z);
    let b = (-i * k_minus * z).exp() / (k_minus + k_z);
    ((a + b) * k_z, (a - b) * k_z)
}

/// Exact transmitted Bessel-beam components at depth `z`:
/// `j0_pm = b_pm sum(z)`, `j1_plus = b_minus diff(z)`,
/// `j1_minus = -b_plus diff(z)`.
pub fn bessel_beam_transmission(beam: &BesselBeamSpec, coupling: f64, z: f64) -> BesselBeamFields {
    debug_assert!(z >= 0.0);
    let eps = beam.k_z * beam.k_z + beam.k_rho * beam.k_rho;
    let (k_plus, k_minus) = longitudinal_wavenumbers(eps, beam.k_rho, coupling);
    let (sum, diff) = ring_factors(beam.k_z, k_plus, k_minus, z);
    BesselBeamFields {
        k_rho: beam.k_rho,
        j0_plus: beam.b_plus * sum,
        j0_minus: beam.b_minus * sum,
        j1_plus: beam.b_minus * diff,
        j1_minus: -beam.b_plus * diff,
    }
}

/// Linearized transmitted Bessel-beam components: a pure two-level rotation
/// by the angle `gamma E alpha z / (2 c^2)`, with `alpha = k_rho / k_z` the
/// beam cone angle. Valid for small `C k_rho / k_z^2`; drops the overall
/// carrier phase and the order-`C` phase of the converted component.
pub fn linearized_bessel_transmission(
    beam: &BesselBeamSpec,
    ctx: &PhysicsContext,
    field_strength: f64,
    alpha: f64,
    z: f64,
) -> BesselBeamFields {
    debug_assert!(z >= 0.0);
    let coupling = ctx.coupling_constant(field_strength).value();
    let angle = 0.5 * coupling * alpha * z;
    let (c, s) = (angle.cos(), angle.sin());
    BesselBeamFields {
        k_rho: beam.k_rho,
        j0_plus: beam.b_plus * c,
        j0_minus: beam.b_minus * c,
        j1_plus: beam.b_minus * s,
        j1_minus: -beam.b_plus * s,
    }
}

/// Transmit a spinor spectrum through the interface to depth `z`.
///
/// Both input spectra must share one radial grid; every radial node is
/// scattered independently with `eps = k_z^2 + k^2`. The output windows
/// grow by the spin-orbit selection rule: spin-up output at `l` mixes
/// spin-down input at `l + 1`, spin-down output at `l` mixes spin-up input
/// at `l - 1` (total angular momentum `l + s` is conserved).
pub fn transmit_spectrum(
    plus: &AzimuthalSpectrum,
    minus: &AzimuthalSpectrum,
    coupling: f64,
    k_z: f64,
    z: f64,
) -> Result<(AzimuthalSpectrum, AzimuthalSpectrum)> {
    if !(k_z > 0.0) || !k_z.is_finite() {
        return Err(Error::Domain(format!(
            "longitudinal wavenumber must be > 0, got {k_z}"
        )));
    }
    if plus.grid() != minus.grid() {
        return Err(Error::Domain(
            "spinor components must share one radial grid".into(),
        ));
    }
    let grid = plus.grid().clone();
    let n = grid.len();

    // Precompute the per-ring factors once per radial node.
    let mut sums = Vec::with_capacity(n);
    let mut diffs = Vec::with_capacity(n);
    for &k in grid.nodes() {
        let eps = k_z * k_z + k * k;
        let (k_plus, k_minus) = longitudinal_wavenumbers(eps, k, coupling);
        let (sum, diff) = ring_factors(k_z, k_plus, k_minus, z);
        sums.push(sum);
        diffs.push(diff);
    }

    let zero_row = vec![C64::new(0.0, 0.0); n];
    let (p_lo, p_hi) = plus.window();
    let (m_lo, m_hi) = minus.window();
    let out_p_window = (p_lo.min(m_lo - 1), p_hi.max(m_hi - 1));
    let out_m_window = (m_lo.min(p_lo + 1), m_hi.max(p_hi + 1));
    let i = C64::i();

    let mut out_plus = Vec::new();
    for ell in out_p_window.0..=out_p_window.1 {
        let p = plus.coeff(ell).unwrap_or(&zero_row);
        let m = minus.coeff(ell + 1).unwrap_or(&zero_row);
        let row: Vec<C64> = (0..n)
            .map(|j| sums[j] * p[j] + i * diffs[j] * m[j])
            .collect();
        out_plus.push(row);
    }
    let mut out_minus = Vec::new();
    for ell in out_m_window.0..=out_m_window.1 {
        let m = minus.coeff(ell).unwrap_or(&zero_row);
        let p = plus.coeff(ell - 1).unwrap_or(&zero_row);
        let row: Vec<C64> = (0..n)
            .map(|j| sums[j] * m[j] - i * diffs[j] * p[j])
            .collect();
        out_minus.push(row);
    }

    Ok((
        AzimuthalSpectrum::new(out_p_window.0, out_plus, grid.clone())?,
        AzimuthalSpectrum::new(out_m_window.0, out_minus, grid)?,
    ))
}
