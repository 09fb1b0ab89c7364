//! Random partial Fourier sensing: `Phi(x) = m ⊙ FFT(x)` and
//! `Phi*(y) = IFFT(m ⊙ y)` with a Bernoulli mask `m` and the unitary DFT,
//! so that `Phi Phi* = Id` on the masked coefficients.

use num_complex::Complex;
use rand::Rng;

use crate::cs_core::{Shape, SignalVector, UnitaryDft};
use crate::seed::rng_from_seed;
use crate::{Result, RwError, Scalar};

#[derive(Debug, Clone)]
pub struct SensingOperator<T: Scalar> {
    shape: Shape,
    mask: Vec<bool>,
    seed: u64,
    subsample_prob: f64,
    dft: UnitaryDft<T>,
}

/// Samples a partial Fourier operator whose mask keeps each coefficient
/// independently with probability `subsample_prob`.
///
/// The mask is drawn from `ChaCha8Rng::seed_from_u64(seed)`, one uniform
/// `f64` per coefficient in row-major order, so it depends only on
/// `(shape, subsample_prob, seed)`.
pub fn make_partial_fourier<T: Scalar>(
    shape: Shape,
    subsample_prob: f64,
    seed: u64,
) -> Result<SensingOperator<T>> {
    shape.validate()?;
    check_probability("subsample_prob", subsample_prob)?;
    let mut rng = rng_from_seed(seed);
    let mask = (0..shape.len())
        .map(|_| rng.random::<f64>() < subsample_prob)
        .collect();
    Ok(SensingOperator {
        shape,
        mask,
        seed,
        subsample_prob,
        dft: UnitaryDft::new(shape),
    })
}

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(RwError::param(name, format!("{p} is outside [0, 1]")))
    }
}

impl<T: Scalar> SensingOperator<T> {
    pub fn sample(shape: Shape, subsample_prob: f64, seed: u64) -> Result<Self> {
        make_partial_fourier(shape, subsample_prob, seed)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn subsample_prob(&self) -> f64 {
        self.subsample_prob
    }

    /// Fraction of retained coefficients.
    pub fn density(&self) -> f64 {
        self.mask.iter().filter(|&&m| m).count() as f64 / self.mask.len() as f64
    }

    fn check(&self, shape: Shape, what: &str) -> Result<()> {
        if shape == self.shape {
            Ok(())
        } else {
            Err(RwError::Shape(format!(
                "operator of shape {} applied to {what} of shape {shape}",
                self.shape
            )))
        }
    }

    pub(crate) fn apply_in_place(&self, data: &mut [Complex<T>]) {
        self.dft.forward(data);
        self.mask_in_place(data);
    }

    pub(crate) fn adjoint_in_place(&self, data: &mut [Complex<T>]) {
        self.mask_in_place(data);
        self.dft.inverse(data);
    }

    pub(crate) fn mask_in_place(&self, data: &mut [Complex<T>]) {
        for (v, &keep) in data.iter_mut().zip(&self.mask) {
            if !keep {
                *v = Complex::new(T::zero(), T::zero());
            }
        }
    }

    /// Masked unitary Fourier coefficients of `x`; entries off the mask are
    /// exactly zero.
    pub fn apply(&self, x: &SignalVector<T>) -> Result<SignalVector<T>> {
        self.check(x.shape(), "signal")?;
        let mut data = x.values().to_vec();
        self.apply_in_place(&mut data);
        Ok(SignalVector::from_parts(self.shape, data))
    }

    pub fn adjoint(&self, y: &SignalVector<T>) -> Result<SignalVector<T>> {
        self.check(y.shape(), "measurement")?;
        let mut data = y.values().to_vec();
        self.adjoint_in_place(&mut data);
        Ok(SignalVector::from_parts(self.shape, data))
    }

    /// `Phi* Phi x`, the orthogonal projection onto the sampled frequencies.
    pub fn project(&self, x: &SignalVector<T>) -> Result<SignalVector<T>> {
        self.adjoint(&self.apply(x)?)
    }
}

/// Robust-width parameters `(rho, alpha)` of an operator, with the
/// probability that a random operator has them when it is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwpParameters<T> {
    pub rho: T,
    pub alpha: T,
    pub rwp_prob: Option<f64>,
}

impl<T: Scalar> RwpParameters<T> {
    pub fn new(rho: T, alpha: T, rwp_prob: Option<f64>) -> Result<Self> {
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(RwError::param("rho", format!("must be finite and > 0, got {rho}")));
        }
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(RwError::param("alpha", format!("must be finite and > 0, got {alpha}")));
        }
        if let Some(q) = rwp_prob {
            check_probability("rwp_prob", q)?;
        }
        Ok(Self { rho, alpha, rwp_prob })
    }
}
