pub mod approximant;
pub mod arith;
pub mod digitset;
pub mod dissection;
mod error;
pub mod expsum;
pub mod goldbach;
pub mod quad;
pub mod scalar;

pub use error::{Error, Result};

/// Double-precision complex scalar used throughout the reports.
pub type Complex64 = num_complex::Complex<f64>;
/// Double-precision spectrum on a DFT grid.
pub type Spectrum64 = expsum::SpectrumGrid<f64>;
/// Double-precision cubic in `log n`.
pub type Cubic64 = approximant::Cubic<f64>;
/// Double-precision quadrature settings.
pub type QuadConfig64 = quad::QuadConfig<f64>;
