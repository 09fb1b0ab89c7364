use std::fmt;

use num_complex::Complex;

use crate::{Result, RwError, Scalar};

/// Layout of a signal: a vector or a row-major image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    D1(usize),
    D2 { rows: usize, cols: usize },
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::D1(n) => n,
            Shape::D2 { rows, cols } => rows * cols,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every axis must be a nonzero power of two.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Shape::D1(n) => n.is_power_of_two(),
            Shape::D2 { rows, cols } => rows.is_power_of_two() && cols.is_power_of_two(),
        };
        if ok {
            Ok(())
        } else {
            Err(RwError::Shape(format!(
                "{self} is not a power of two along every axis"
            )))
        }
    }

    /// Length of the shortest axis.
    pub fn min_axis(&self) -> usize {
        match *self {
            Shape::D1(n) => n,
            Shape::D2 { rows, cols } => rows.min(cols),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::D1(n) => write!(f, "{n}"),
            Shape::D2 { rows, cols } => write!(f, "{rows}x{cols}"),
        }
    }
}

/// A finite complex signal (or coefficient array) with a validated shape.
///
/// Real inputs are stored with zero imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalVector<T> {
    shape: Shape,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> SignalVector<T> {
    pub fn new(shape: Shape, values: Vec<Complex<T>>) -> Result<Self> {
        shape.validate()?;
        if values.len() != shape.len() {
            return Err(RwError::Shape(format!(
                "shape {shape} needs {} values, got {}",
                shape.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(RwError::param("values", format!("entry {i} is not finite")));
        }
        Ok(Self { shape, values })
    }

    pub fn from_real(shape: Shape, values: &[T]) -> Result<Self> {
        Self::new(shape, values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    /// One-dimensional real signal.
    pub fn real_1d(values: &[T]) -> Result<Self> {
        Self::from_real(Shape::D1(values.len()), values)
    }

    pub fn zeros(shape: Shape) -> Result<Self> {
        shape.validate()?;
        Ok(Self {
            shape,
            values: vec![Complex::new(T::zero(), T::zero()); shape.len()],
        })
    }

    /// Skips the finiteness scan; callers guarantee the invariants.
    pub(crate) fn from_parts(shape: Shape, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(shape.len(), values.len());
        Self { shape, values }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn real_part(&self) -> Vec<T> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == T::zero())
    }

    /// Largest imaginary magnitude.
    pub fn max_imag(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.im.abs()))
    }

    pub fn norm_l2(&self) -> T {
        l2_norm(&self.values)
    }

    pub fn norm_l1(&self) -> T {
        l1_norm(&self.values)
    }

    /// Max-norm distance to `other`; `None` when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        (self.shape == other.shape).then(|| {
            self.values
                .iter()
                .zip(&other.values)
                .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
        })
    }

    /// L2 distance to `other`; `None` when shapes differ.
    pub fn distance(&self, other: &Self) -> Option<T> {
        (self.shape == other.shape).then(|| {
            self.values
                .iter()
                .zip(&other.values)
                .fold(T::zero(), |s, (a, b)| s + (a - b).norm_sqr())
                .sqrt()
        })
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.shape != other.shape {
            return Err(RwError::Shape(format!(
                "cannot combine shapes {} and {}",
                self.shape, other.shape
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Ok(Self::from_parts(self.shape, values))
    }

    pub fn scaled(&self, c: T) -> Self {
        Self::from_parts(self.shape, self.values.iter().map(|v| v * c).collect())
    }

    /// Adds a real perturbation to the real parts.
    pub fn perturbed(&self, delta: &[T]) -> Result<Self> {
        if delta.len() != self.len() {
            return Err(RwError::Shape(format!(
                "perturbation of length {} for a signal of length {}",
                delta.len(),
                self.len()
            )));
        }
        let values = self
            .values
            .iter()
            .zip(delta)
            .map(|(v, &d)| Complex::new(v.re + d, v.im))
            .collect();
        Ok(Self::from_parts(self.shape, values))
    }
}

pub fn l1_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |s, c| s + c.norm())
}

pub fn l2_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |s, c| s + c.norm_sqr()).sqrt()
}
