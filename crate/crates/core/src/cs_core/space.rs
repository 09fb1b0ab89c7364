use super::{Frame, SignalVector};
use crate::{Result, RwError, Scalar};

/// Sparsity norm `||x||_# = ||Psi x||_1`: the L1 norm (complex modulus) of
/// the analysis coefficients.
pub fn sparsity_norm<T: Scalar>(frame: &Frame, x: &SignalVector<T>) -> Result<T> {
    Ok(frame.analyze(x)?.norm_l1())
}

/// A frame together with the solution set `{x : ||x||_# <= T}` and the
/// decomposition constant `L` of the surrounding CS space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsSpace<T> {
    frame: Frame,
    solution_bound: T,
    cs_bound: T,
}

impl<T: Scalar> CsSpace<T> {
    pub fn new(frame: Frame, solution_bound: T, cs_bound: T) -> Result<Self> {
        if !(solution_bound > T::zero()) || !solution_bound.is_finite() {
            return Err(RwError::param("solution_bound", "must be finite and > 0"));
        }
        if !(cs_bound > T::zero()) || !cs_bound.is_finite() {
            return Err(RwError::param("cs_bound", "must be finite and > 0"));
        }
        Ok(Self {
            frame,
            solution_bound,
            cs_bound,
        })
    }

    /// The K-sparse setting, whose CS-space constant is `sqrt(K)`.
    pub fn k_sparse(frame: Frame, solution_bound: T, sparsity: usize) -> Result<Self> {
        if sparsity == 0 {
            return Err(RwError::param("sparsity", "must be >= 1"));
        }
        Self::new(frame, solution_bound, T::lit(sparsity as f64).sqrt())
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn solution_bound(&self) -> T {
        self.solution_bound
    }

    pub fn cs_bound(&self) -> T {
        self.cs_bound
    }

    pub fn contains(&self, x: &SignalVector<T>) -> Result<bool> {
        Ok(sparsity_norm(&self.frame, x)? <= self.solution_bound)
    }

    /// Largest robust-width `rho` for which the reconstruction error bound
    /// holds in this space: `1 / (4 L)`.
    pub fn max_rho(&self) -> T {
        T::one() / (T::lit(4.0) * self.cs_bound)
    }
}
