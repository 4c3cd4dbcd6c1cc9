//! Time evolution of transverse wavepackets in an unbounded field region,
//! ideal OAM raising, twist-quality surfaces, and real-space synthesis.
//!
//! A [`SpectralPacket`] holds both spinor components sampled on a polar
//! reciprocal-space grid (one longitudinal slice; the constant longitudinal
//! kinetic phase is global on the slice and omitted). Evolution acts
//! pointwise as a two-level rotation whose angle grows linearly in time and
//! in the transverse wavenumber, exchanging spin and one signed unit of
//! OAM.

use crate::beams::{gaussian_spectral_amplitude, GaussianPacketSpec};
use crate::error::{Error, Result};
use crate::oam::{mode_amplitudes, OamDistribution};
use crate::transforms::{
    azimuthal_decompose_auto, hankel_synthesize, sample_polar, AzimuthalSpectrum, FieldGrid,
    RadialGrid, RealSpaceField,
};
use crate::C64;
use std::f64::consts::TAU;

/// Two-component wavepacket sampled on a polar reciprocal-space grid:
/// radial quadrature nodes times `n_phi` uniform angles.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPacket {
    grid: RadialGrid,
    n_phi: usize,
    a_plus: Vec<Vec<C64>>,
    a_minus: Vec<Vec<C64>>,
    origin: Option<GaussianPacketSpec>,
}

impl SpectralPacket {
    /// Wrap raw samples (rows per radial node, columns per uniform angle).
    pub fn from_samples(
        grid: RadialGrid,
        a_plus: Vec<Vec<C64>>,
        a_minus: Vec<Vec<C64>>,
    ) -> Result<Self> {
        if a_plus.len() != grid.len() || a_minus.len() != grid.len() {
            return Err(Error::Domain(
                "component sample rows must match the radial grid".into(),
            ));
        }
        let n_phi = a_plus.first().map_or(0, |row| row.len());
        if n_phi == 0
            || a_plus.iter().any(|row| row.len() != n_phi)
            || a_minus.iter().any(|row| row.len() != n_phi)
        {
            return Err(Error::Domain(
                "component samples must form equal non-empty rectangular tables".into(),
            ));
        }
        let finite = |rows: &[Vec<C64>]| {
            rows.iter()
                .flatten()
                .all(|v| v.re.is_finite() && v.im.is_finite())
        };
        if !finite(&a_plus) || !finite(&a_minus) {
            return Err(Error::Domain("packet samples must be finite".into()));
        }
        Ok(SpectralPacket {
            grid,
            n_phi,
            a_plus,
            a_minus,
            origin: None,
        })
    }

    /// Sample a Gaussian packet with spinor amplitudes `(b_plus, b_minus)`
    /// (normalized to a unit spinor) on the given grid.
    pub fn gaussian(
        spec: &GaussianPacketSpec,
        b_plus: C64,
        b_minus: C64,
        grid: RadialGrid,
        n_phi: usize,
    ) -> Result<Self> {
        let norm = (b_plus.norm_sqr() + b_minus.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        if n_phi == 0 {
            return Err(Error::Domain("need at least one angular sample".into()));
        }
        let (b_plus, b_minus) = (b_plus / norm, b_minus / norm);
        let envelope = |k: f64, phi: f64| {
            C64::new(
                gaussian_spectral_amplitude(spec, k * phi.cos(), k * phi.sin()),
                0.0,
            )
        };
        let a_plus = sample_polar(&grid, n_phi, |k, phi| envelope(k, phi) * b_plus);
        let a_minus = sample_polar(&grid, n_phi, |k, phi| envelope(k, phi) * b_minus);
        let mut packet = SpectralPacket::from_samples(grid, a_plus, a_minus)?;
        packet.origin = Some(*spec);
        Ok(packet)
    }

    /// [`SpectralPacket::gaussian`] on an automatically sized grid: radial
    /// panels out to where the envelope has decayed below ~1e-28, and 256
    /// angular samples.
    pub fn gaussian_auto(spec: &GaussianPacketSpec, b_plus: C64, b_minus: C64) -> Result<Self> {
        let k_max = spec.k_y_mean + 8.0 * spec.sigma_y * (1.0 + spec.symmetry);
        let grid = RadialGrid::gauss_legendre_panels(0.0, k_max, 8, 16)?;
        SpectralPacket::gaussian(spec, b_plus, b_minus, grid, 256)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn a_plus(&self) -> &[Vec<C64>] {
        &self.a_plus
    }

    pub fn a_minus(&self) -> &[Vec<C64>] {
        &self.a_minus
    }

    /// Gaussian parameters the packet was built from, if any.
    pub fn origin(&self) -> Option<&GaussianPacketSpec> {
        self.origin.as_ref()
    }

    /// Total squared norm `int (|a+|^2 + |a-|^2) k dk dphi`.
    pub fn l2_norm(&self) -> f64 {
        let dphi = TAU / self.n_phi as f64;
        let per_node: Vec<f64> = (0..self.grid.len())
            .map(|i| {
                let ring: f64 = self.a_plus[i]
                    .iter()
                    .zip(&self.a_minus[i])
                    .map(|(p, m)| p.norm_sqr() + m.norm_sqr())
                    .sum();
                ring * dphi
            })
            .collect();
        self.grid.integrate_radial(&per_node)
    }

    /// Azimuthal decomposition of both components, growing the mode window
    /// from a single mode outward until the tail criterion is met. Starting
    /// minimal keeps pure-mode packets free of rounding-level ghost modes.
    pub fn decompose(&self) -> Result<(AzimuthalSpectrum, AzimuthalSpectrum)> {
        let window = (0, 0);
        Ok((
            azimuthal_decompose_auto(&self.a_plus, &self.grid, window)?,
            azimuthal_decompose_auto(&self.a_minus, &self.grid, window)?,
        ))
    }
}

/// Evolve a packet for scaled time `t >= 0` in a uniform unbounded field
/// with coupling constant `coupling`.
///
/// Pointwise on the grid, with `eps = k_r^2` (transverse slice):
///
/// ```text
/// psi_plus  = e^{i eps t} [ a_plus  cos(C k_r t) + a_minus sin(C k_r t) e^{-i phi} ]
/// psi_minus = e^{i eps t} [ a_minus cos(C k_r t) - a_plus  sin(C k_r t) e^{+i phi} ]
/// ```
///
/// Each point undergoes a unitary two-level rotation, so the L2 norm is
/// conserved exactly; the spin-flipped admixture carries e^{∓i phi}, the
/// selection rule that trades one signed unit of OAM for the spin flip.
pub fn evolve(packet: &SpectralPacket, coupling: f64, t: f64) -> SpectralPacket {
    debug_assert!(t >= 0.0, "evolution runs forward in time");
    let dphi = TAU / packet.n_phi as f64;
    let mut out = packet.clone();
    for (i, &k_r) in packet.grid.nodes().iter().enumerate() {
        let global = C64::from_polar(1.0, k_r * k_r * t);
        let (sin, cos) = (coupling * k_r * t).sin_cos();
        for j in 0..packet.n_phi {
            let swirl = C64::from_polar(1.0, dphi * j as f64);
            let (ap, am) = (packet.a_plus[i][j], packet.a_minus[i][j]);
            out.a_plus[i][j] = global * (ap * cos + am * sin * swirl.conj());
            out.a_minus[i][j] = global * (am * cos - ap * sin * swirl);
        }
    }
    out
}

/// Relabel every azimuthal mode `l -> l + 1`: a lossless, perfectly
/// k-independent model of a quarter-twist device.
pub fn ideal_raise(spec: &AzimuthalSpectrum) -> AzimuthalSpectrum {
    spec.shifted(1)
}

/// Inverse of [`ideal_raise`]: relabel `l -> l - 1`.
pub fn ideal_lower(spec: &AzimuthalSpectrum) -> AzimuthalSpectrum {
    spec.shifted(-1)
}

/// How the twist is applied when scanning packet parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwistModel {
    /// Perfect mode relabeling, independent of the transverse wavenumber.
    IdealRaise,
    /// Finite-time evolution in a uniform field; the rotation angle
    /// `C k_r t` varies across the packet, so conversion is imperfect.
    ExactEvolution { coupling: f64, time: f64 },
}

/// Scan of twisted-packet quality over coherence and symmetry parameters.
///
/// `amplitude[i][j]` is the population of the singly-raised OAM mode and
/// `log_bandwidth[i][j]` the base-10 log of the OAM standard deviation, for
/// `sigma_y[i]` and `symmetry[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistSurfaces {
    pub sigma_y: Vec<f64>,
    pub symmetry: Vec<f64>,
    pub amplitude: Vec<Vec<f64>>,
    pub log_bandwidth: Vec<Vec<f64>>,
}

/// Compute twisted-packet quality surfaces over Gaussian packet parameters.
///
/// For every `(sigma_y, symmetry)` pair: build the packet with mean
/// transverse wavenumber `k_y_mean`, apply the twist model, and record the
/// raised-mode population together with the OAM bandwidth.
///
/// With [`TwistModel::IdealRaise`] the whole packet is relabeled and the
/// raised population is the weight at `l = +1`. With
/// [`TwistModel::ExactEvolution`] the spin-flipped component carries the
/// twist at `l = -1` (mirror labeling, same magnitude of OAM transfer); its
/// population is reported against the total norm, and the bandwidth is that
/// of the flipped component alone.
pub fn fig3_surfaces(
    sigma_y_range: &[f64],
    symmetry_range: &[f64],
    k_y_mean: f64,
    model: TwistModel,
) -> Result<TwistSurfaces> {
    if sigma_y_range.is_empty() || symmetry_range.is_empty() {
        return Err(Error::Domain("parameter ranges must be nonempty".into()));
    }
    let mut amplitude = Vec::with_capacity(sigma_y_range.len());
    let mut log_bandwidth = Vec::with_capacity(sigma_y_range.len());
    for &sigma_y in sigma_y_range {
        let mut amp_row = Vec::with_capacity(symmetry_range.len());
        let mut band_row = Vec::with_capacity(symmetry_range.len());
        for &symmetry in symmetry_range {
            let spec = GaussianPacketSpec::new(k_y_mean, sigma_y, symmetry)?;
            let (a1, sigma_ell) = twisted_quality(&spec, model)?;
            amp_row.push(a1);
            band_row.push(sigma_ell.log10());
        }
        amplitude.push(amp_row);
        log_bandwidth.push(band_row);
    }
    Ok(TwistSurfaces {
        sigma_y: sigma_y_range.to_vec(),
        symmetry: symmetry_range.to_vec(),
        amplitude,
        log_bandwidth,
    })
}

fn twisted_quality(spec: &GaussianPacketSpec, model: TwistModel) -> Result<(f64, f64)> {
    match model {
        TwistModel::IdealRaise => {
            let packet =
                SpectralPacket::gaussian_auto(spec, C64::new(0.0, 0.0), C64::new(1.0, 0.0))?;
            let (_, minus) = packet.decompose()?;
            let dist = mode_amplitudes(&ideal_raise(&minus))?;
            Ok((dist.weight(1), dist.sigma_ell()))
        }
        TwistModel::ExactEvolution { coupling, time } => {
            let packet =
                SpectralPacket::gaussian_auto(spec, C64::new(0.0, 0.0), C64::new(1.0, 0.0))?;
            let evolved = evolve(&packet, coupling, time);
            let (plus, minus) = evolved.decompose()?;
            let flipped = mode_amplitudes(&plus)?;
            let total: f64 = plus.total_norm() + minus.total_norm();
            let a1 = plus.mode_norm(-1) / total;
            Ok((a1, flipped.sigma_ell()))
        }
    }
}

/// OAM distribution of one packet component after an optional ideal raise;
/// exposed for parameter studies beyond the fixed surfaces.
pub fn packet_oam_distribution(
    packet: &SpectralPacket,
    raised: bool,
) -> Result<OamDistribution> {
    let (_, minus) = packet.decompose()?;
    let spec = if raised { ideal_raise(&minus) } else { minus };
    mode_amplitudes(&spec)
}

/// Synthesize both packet components on a Cartesian grid, optionally after
/// an ideal raise of every azimuthal mode.
///
/// Returns the complex field; plots use its real part. Errors when the
/// radial sampling cannot resolve the synthesis kernel at the farthest
/// grid point.
pub fn synthesize_real_space(
    packet: &SpectralPacket,
    raised: bool,
    x: &[f64],
    y: &[f64],
) -> Result<RealSpaceField> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Domain("synthesis target grid is empty".into()));
    }
    let (mut plus, mut minus) = packet.decompose()?;
    if raised {
        plus = ideal_raise(&plus);
        minus = ideal_raise(&minus);
    }
    let synthesize = |spec: &AzimuthalSpectrum| -> Result<Vec<Vec<C64>>> {
        if spec.total_norm() == 0.0 {
            return Ok(vec![vec![C64::new(0.0, 0.0); y.len()]; x.len()]);
        }
        let mut out = Vec::with_capacity(x.len());
        for &xi in x {
            let mut row = Vec::with_capacity(y.len());
            for &yj in y {
                let r = xi.hypot(yj);
                let theta = yj.atan2(xi);
                row.push(hankel_synthesize(spec, &[r], &[theta])?[0][0]);
            }
            out.push(row);
        }
        Ok(out)
    };
    Ok(RealSpaceField {
        grid: FieldGrid::Cartesian {
            x: x.to_vec(),
            y: y.to_vec(),
        },
        plus: synthesize(&plus)?,
        minus: synthesize(&minus)?,
    })
}

/// Local carrier phase of a packet value at height `y`, relative to the
/// plane-wave carrier `e^{-i k_y_mean y}` the synthesis convention
/// produces: zero for an untwisted real-envelope packet.
pub fn carrier_phase(value: C64, k_y_mean: f64, y: f64) -> f64 {
    (value * C64::from_polar(1.0, k_y_mean * y)).arg()
}
