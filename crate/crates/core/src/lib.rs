//! Prefractal Sierpinski and harmonic gaskets as metric graphs, their
//! curve-based Dirac operators, and the finite computations used to certify
//! Gromov-Hausdorff and propinquity-style convergence bounds.

pub mod dyadic;
pub mod gasket;
pub mod harmonic;
pub mod hilbert;
pub mod metric;
pub mod scalar;
pub mod spectrum;
pub mod svg;
pub mod transport;

pub use dyadic::Dyadic;
pub use gasket::{build_gasket, GasketError, LatticePoint, PrefractalComplex};
pub use harmonic::{build_harmonic_gasket, HarmonicError, HarmonicGasket, HarmonicValues};
pub use hilbert::{CurveLengths, HilbertError, ModeVector};
pub use metric::{EdgePoint, FiniteMetricSpace, GasketGraph, MetricError, MetricGraph};
pub use scalar::{Field, Rational, Weight};
pub use spectrum::{SpectrumError, SpectrumSpec};
pub use transport::{CoupledGraph, DiscreteMeasure, TransportError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Gasket(#[from] GasketError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

impl Error {
    /// Whether the failure is numerical (undecidable floor, stalled solver)
    /// rather than a rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Spectrum(SpectrumError::Ambiguous(_)) | Error::Transport(TransportError::Infeasible)
        )
    }
}
