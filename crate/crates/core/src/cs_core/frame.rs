use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use super::fourier::UnitaryDft;
use super::wavelet::FilterBank;
use super::{Shape, SignalVector};
use crate::{Result, RwError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameKind {
    Identity,
    HaarDwt,
    Db4Dwt,
    UnitaryDft,
}

impl FrameKind {
    pub fn name(&self) -> &'static str {
        match self {
            FrameKind::Identity => "identity",
            FrameKind::HaarDwt => "haar-dwt",
            FrameKind::Db4Dwt => "db4-dwt",
            FrameKind::UnitaryDft => "unitary-dft",
        }
    }

    pub fn is_wavelet(&self) -> bool {
        matches!(self, FrameKind::HaarDwt | FrameKind::Db4Dwt)
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameKind {
    type Err = RwError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" | "id" => Ok(FrameKind::Identity),
            "haar-dwt" | "haar" => Ok(FrameKind::HaarDwt),
            "db4-dwt" | "db4" => Ok(FrameKind::Db4Dwt),
            "unitary-dft" | "dft" | "fourier" => Ok(FrameKind::UnitaryDft),
            other => Err(RwError::param("frame", format!("unknown frame kind `{other}`"))),
        }
    }
}

/// A square, invertible, orthonormal sparsifying transform.
///
/// `levels` is the decomposition depth of the wavelet kinds and is ignored
/// by the others. All kinds here are tight with frame bounds `A = B = 1`, so
/// synthesis is both the inverse and the adjoint of analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frame {
    kind: FrameKind,
    levels: usize,
}

impl Frame {
    pub fn new(kind: FrameKind, levels: usize) -> Self {
        let levels = if kind.is_wavelet() { levels } else { 0 };
        Self { kind, levels }
    }

    pub fn identity() -> Self {
        Self::new(FrameKind::Identity, 0)
    }

    pub fn haar(levels: usize) -> Self {
        Self::new(FrameKind::HaarDwt, levels)
    }

    pub fn db4(levels: usize) -> Self {
        Self::new(FrameKind::Db4Dwt, levels)
    }

    pub fn unitary_dft() -> Self {
        Self::new(FrameKind::UnitaryDft, 0)
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn is_orthonormal(&self) -> bool {
        true
    }

    /// Checks that the frame can act on `shape`.
    pub fn check_shape(&self, shape: Shape) -> Result<()> {
        shape.validate()?;
        if self.kind.is_wavelet() && self.levels > 0 {
            let needed = 1usize.checked_shl(self.levels as u32).unwrap_or(usize::MAX);
            if shape.min_axis() < needed {
                return Err(RwError::Shape(format!(
                    "{} levels of {} need every axis >= {needed}, got {shape}",
                    self.levels, self.kind
                )));
            }
        }
        Ok(())
    }

    /// Prepares the transform for repeated use on one shape.
    pub fn bind<T: Scalar>(&self, shape: Shape) -> Result<FrameOperator<T>> {
        self.check_shape(shape)?;
        let engine = match self.kind {
            FrameKind::Identity => Engine::Identity,
            FrameKind::HaarDwt => Engine::Wavelet(FilterBank::haar()),
            FrameKind::Db4Dwt => Engine::Wavelet(FilterBank::db4()),
            FrameKind::UnitaryDft => Engine::Fourier(UnitaryDft::new(shape)),
        };
        Ok(FrameOperator {
            frame: *self,
            shape,
            engine,
        })
    }

    /// Frame coefficients of `x`, laid out in the shape of `x`.
    pub fn analyze<T: Scalar>(&self, x: &SignalVector<T>) -> Result<SignalVector<T>> {
        self.bind(x.shape())?.analyze(x)
    }

    /// Inverse of [`Frame::analyze`].
    pub fn synthesize<T: Scalar>(&self, coeffs: &SignalVector<T>) -> Result<SignalVector<T>> {
        self.bind(coeffs.shape())?.synthesize(coeffs)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_wavelet() {
            write!(f, "{}(levels={})", self.kind, self.levels)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

#[derive(Debug, Clone)]
enum Engine<T: Scalar> {
    Identity,
    Wavelet(FilterBank<T>),
    Fourier(UnitaryDft<T>),
}

/// A [`Frame`] bound to a shape, with its transform plans built.
#[derive(Debug, Clone)]
pub struct FrameOperator<T: Scalar> {
    frame: Frame,
    shape: Shape,
    engine: Engine<T>,
}

impl<T: Scalar> FrameOperator<T> {
    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn analyze_in_place(&self, data: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.shape.len(), "buffer/shape mismatch");
        match &self.engine {
            Engine::Identity => {}
            Engine::Wavelet(bank) => bank.analyze(data, self.shape, self.frame.levels),
            Engine::Fourier(dft) => dft.forward(data),
        }
    }

    pub fn synthesize_in_place(&self, data: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.shape.len(), "buffer/shape mismatch");
        match &self.engine {
            Engine::Identity => {}
            Engine::Wavelet(bank) => bank.synthesize(data, self.shape, self.frame.levels),
            Engine::Fourier(dft) => dft.inverse(data),
        }
    }

    fn check(&self, shape: Shape) -> Result<()> {
        if shape == self.shape {
            Ok(())
        } else {
            Err(RwError::Shape(format!(
                "frame bound to {} applied to {shape}",
                self.shape
            )))
        }
    }

    pub fn analyze(&self, x: &SignalVector<T>) -> Result<SignalVector<T>> {
        self.check(x.shape())?;
        let mut data = x.values().to_vec();
        self.analyze_in_place(&mut data);
        Ok(SignalVector::from_parts(self.shape, data))
    }

    pub fn synthesize(&self, coeffs: &SignalVector<T>) -> Result<SignalVector<T>> {
        self.check(coeffs.shape())?;
        let mut data = coeffs.values().to_vec();
        self.synthesize_in_place(&mut data);
        Ok(SignalVector::from_parts(self.shape, data))
    }
}
