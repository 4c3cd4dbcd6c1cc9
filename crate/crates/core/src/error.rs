//! Error type shared by all simulation routines.

use std::fmt;

/// Failure modes of the simulation routines.
///
/// Every variant describes a condition the caller can repair: an input
/// outside the mathematical domain, a grid too coarse for the requested
/// bandwidth, or a normalization that does not exist.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    Domain(String),
    /// The azimuthal sampling is too coarse to resolve the mode window.
    Aliasing {
        /// Number of azimuthal samples provided.
        n_phi: usize,
        /// Minimum number of samples the window needs.
        required: usize,
    },
    /// The mode window misses a non-negligible share of the field norm.
    WindowTail {
        /// Fraction of the total norm outside the window.
        tail_fraction: f64,
    },
    /// A field or distribution with zero norm cannot be normalized.
    ZeroNorm,
    /// A target grid cannot resolve the bandwidth it is asked to represent.
    Resolution(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Aliasing { n_phi, required } => write!(
                f,
                "aliasing: {n_phi} azimuthal samples cannot resolve the mode \
                 window (need at least {required})"
            ),
            Error::WindowTail { tail_fraction } => write!(
                f,
                "mode window too narrow: {tail_fraction:.3e} of the norm \
                 falls outside it"
            ),
            Error::ZeroNorm => write!(f, "field has zero norm"),
            Error::Resolution(msg) => write!(f, "resolution error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
