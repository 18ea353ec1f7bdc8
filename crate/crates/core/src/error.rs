use std::path::PathBuf;

/// Failure modes shared by every module.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of a function (branch point, `n = 0`, non-finite input).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration or specification violates its invariants.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Quadrature stopped before reaching its tolerance; `estimate` is the best value found.
    #[error(
        "no convergence: estimate {estimate_re:+.6e}{estimate_im:+.6e}i, error bound {bound:.3e}"
    )]
    Convergence {
        estimate_re: f64,
        estimate_im: f64,
        bound: f64,
    },

    /// Too few samples above the noise floor to fit a power law.
    #[error("insufficient data: {usable} usable samples, need at least 3")]
    InsufficientData { usable: usize },

    /// The surface map stops being a diffeomorphism at `x`.
    #[error("degenerate Jacobian (det = {det:.3e}) at ({x1}, {x2})")]
    Degenerate { x1: f64, x2: f64, det: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn convergence(estimate: num_complex::Complex64, bound: f64) -> Self {
        Error::Convergence {
            estimate_re: estimate.re,
            estimate_im: estimate.im,
            bound,
        }
    }

    /// A copy for reporting the same failure in several places; I/O sources keep their kind and
    /// message only.
    pub(crate) fn clone_lossy(&self) -> Self {
        match self {
            Error::Domain(m) => Error::Domain(m.clone()),
            Error::Parameter(m) => Error::Parameter(m.clone()),
            Error::Convergence {
                estimate_re,
                estimate_im,
                bound,
            } => Error::Convergence {
                estimate_re: *estimate_re,
                estimate_im: *estimate_im,
                bound: *bound,
            },
            Error::InsufficientData { usable } => Error::InsufficientData { usable: *usable },
            Error::Degenerate { x1, x2, det } => Error::Degenerate {
                x1: *x1,
                x2: *x2,
                det: *det,
            },
            Error::Io { path, source } => Error::Io {
                path: path.clone(),
                source: std::io::Error::new(source.kind(), source.to_string()),
            },
            Error::Format { path, message } => Error::Format {
                path: path.clone(),
                message: message.clone(),
            },
        }
    }

    /// Best estimate carried by a convergence failure.
    pub fn estimate(&self) -> Option<num_complex::Complex64> {
        match *self {
            Error::Convergence {
                estimate_re,
                estimate_im,
                ..
            } => Some(num_complex::Complex64::new(estimate_re, estimate_im)),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
