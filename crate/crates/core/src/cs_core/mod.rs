//! Signals, sparsifying frames, the sparsity norm and soft thresholding.

mod fourier;
mod frame;
mod signal;
mod space;
mod threshold;
mod wavelet;

pub use fourier::UnitaryDft;
pub use frame::{Frame, FrameKind, FrameOperator};
pub use signal::{l1_norm, l2_norm, Shape, SignalVector};
pub use space::{sparsity_norm, CsSpace};
pub use threshold::soft_threshold;

pub(crate) use threshold::{l1_ball_threshold, shrink_in_place};
