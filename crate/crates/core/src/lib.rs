//! Compressed-sensing purification of classifier inputs and the arithmetic
//! that certifies the robustness it buys.
//!
//! The pipeline is: sample a random partial Fourier operator, measure the
//! input, reconstruct it by iterative soft thresholding in a sparsifying
//! frame, and hand the reconstruction to the classifier. The `defect` and
//! `certify` modules turn sparsity of the data plus robust-width parameters
//! of the operator into certified radii and probabilities.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the bottom of this file fix the common `f64` instantiations.
//!
//! ```
//! use rwkit_core::reconstruct::purify;
//! use rwkit_core::{Frame, Params, Signal};
//!
//! let x = Signal::real_1d(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0])?;
//! let params = Params::new(200, 0.01, 0.75, Frame::haar(2))?;
//! let cleaned = purify(&x, &params, 42)?;
//! assert_eq!(cleaned.iterations_run, 200);
//! # Ok::<(), rwkit_core::RwError>(())
//! ```

// `!(a > b)` is used on purpose so NaN parameters are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod classifier;
pub mod cs_core;
pub mod defect;
mod error;
pub mod reconstruct;
mod scalar;
pub mod seed;
pub mod sensing;

pub use certify::{Certificate, CertificateInputs};
pub use classifier::{Label, LinearClassifier, RadiusMeasurement, RadiusMethod, RadiusSearch};
pub use cs_core::{soft_threshold, sparsity_norm, CsSpace, Frame, FrameKind, Shape, SignalVector};
pub use defect::{DStep, DefectEstimate, DefectParams, DefectResult};
pub use error::{Result, RwError};
pub use reconstruct::{PurifiedSignal, ReconstructionParams};
pub use scalar::Scalar;
pub use sensing::{RwpParameters, SensingOperator};

pub use num_complex::Complex;

/// Double-precision signal.
pub type Signal = SignalVector<f64>;
/// Single-precision signal.
pub type Signal32 = SignalVector<f32>;
pub type Operator = SensingOperator<f64>;
pub type Operator32 = SensingOperator<f32>;
pub type Params = ReconstructionParams<f64>;
pub type Purified = PurifiedSignal<f64>;
pub type Classifier = LinearClassifier<f64>;
pub type Cert = Certificate<f64>;
