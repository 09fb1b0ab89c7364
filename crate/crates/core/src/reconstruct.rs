//! Iterative soft-thresholding reconstruction and the purification
//! pipeline built on it.
//!
//! Starting from `u_0 = 0`, each of exactly `T` iterations computes
//!
//! ```text
//! u_t = S_lambda(u_{t-1} + Psi Phi*(y - Phi Psi^{-1} u_{t-1}))
//! ```
//!
//! and the result is `Psi^{-1} u_T`. The gradient step has unit length,
//! which is admissible because `||Phi Psi^{-1}|| <= 1` for a masked unitary
//! transform composed with an orthonormal frame. There is no early stopping.

use num_complex::Complex;

use crate::cs_core::{l1_norm, shrink_in_place, Frame, SignalVector};
use crate::sensing::{check_probability, make_partial_fourier, SensingOperator};
use crate::{Result, RwError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionParams<T> {
    pub iterations: usize,
    pub threshold: T,
    pub subsample_prob: f64,
    pub frame: Frame,
}

impl<T: Scalar> ReconstructionParams<T> {
    pub fn new(iterations: usize, threshold: T, subsample_prob: f64, frame: Frame) -> Result<Self> {
        let params = Self {
            iterations,
            threshold,
            subsample_prob,
            frame,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(RwError::param("iterations", "must be >= 1"));
        }
        if !(self.threshold >= T::zero()) || !self.threshold.is_finite() {
            return Err(RwError::param(
                "threshold",
                format!("must be finite and >= 0, got {}", self.threshold),
            ));
        }
        check_probability("subsample_prob", self.subsample_prob)
    }
}

/// Output of [`purify`].
#[derive(Debug, Clone, PartialEq)]
pub struct PurifiedSignal<T> {
    /// Reconstruction; for real inputs only the real part is kept.
    pub value: SignalVector<T>,
    pub operator_seed: u64,
    pub iterations_run: usize,
    /// `||u_T||_1` of the final coefficient iterate.
    pub final_coefficient_l1: T,
    /// Largest imaginary magnitude that was discarded for a real input.
    pub imag_residual: T,
}

impl<T: Scalar> PurifiedSignal<T> {
    pub fn real_part(&self) -> Vec<T> {
        self.value.real_part()
    }
}

struct Reconstruction<T> {
    signal: SignalVector<T>,
    coefficient_l1: T,
}

fn run_ista<T: Scalar>(
    y: &SignalVector<T>,
    op: &SensingOperator<T>,
    params: &ReconstructionParams<T>,
) -> Result<Reconstruction<T>> {
    params.validate()?;
    let shape = op.shape();
    if y.shape() != shape {
        return Err(RwError::Shape(format!(
            "measurement of shape {} for an operator of shape {shape}",
            y.shape()
        )));
    }
    let frame = params.frame.bind::<T>(shape)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut u = vec![zero; shape.len()];
    let mut work = vec![zero; shape.len()];
    let measured = y.values();

    for t in 1..=params.iterations {
        // work = Psi Phi*(y - Phi Psi^{-1} u)
        work.copy_from_slice(&u);
        frame.synthesize_in_place(&mut work);
        op.apply_in_place(&mut work);
        for (w, &m) in work.iter_mut().zip(measured) {
            *w = m - *w;
        }
        op.adjoint_in_place(&mut work);
        frame.analyze_in_place(&mut work);

        for (ui, &wi) in u.iter_mut().zip(&work) {
            *ui = *ui + wi;
        }
        shrink_in_place(&mut u, params.threshold);

        if u.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(RwError::NonFinite {
                stage: "iterative soft thresholding",
                iteration: t,
            });
        }
    }

    let coefficient_l1 = l1_norm(&u);
    frame.synthesize_in_place(&mut u);
    Ok(Reconstruction {
        signal: SignalVector::from_parts(shape, u),
        coefficient_l1,
    })
}

/// Reconstructs a signal from measurements `y` taken with `op`.
pub fn ista_reconstruct<T: Scalar>(
    y: &SignalVector<T>,
    op: &SensingOperator<T>,
    params: &ReconstructionParams<T>,
) -> Result<SignalVector<T>> {
    Ok(run_ista(y, op, params)?.signal)
}

/// Purifies `x`: samples the operator from `seed`, measures `x` with it and
/// reconstructs. Deterministic in `(x, params, seed)`.
pub fn purify<T: Scalar>(
    x: &SignalVector<T>,
    params: &ReconstructionParams<T>,
    seed: u64,
) -> Result<PurifiedSignal<T>> {
    params.validate()?;
    let op = make_partial_fourier(x.shape(), params.subsample_prob, seed)?;
    purify_with(x, &op, params)
}

/// Purification with an already sampled operator.
pub fn purify_with<T: Scalar>(
    x: &SignalVector<T>,
    op: &SensingOperator<T>,
    params: &ReconstructionParams<T>,
) -> Result<PurifiedSignal<T>> {
    let y = op.apply(x)?;
    let rec = run_ista(&y, op, params)?;
    let (value, imag_residual) = if x.is_real() {
        let residual = rec.signal.max_imag();
        let real = SignalVector::from_real(rec.signal.shape(), &rec.signal.real_part())?;
        (real, residual)
    } else {
        (rec.signal, T::zero())
    };
    Ok(PurifiedSignal {
        value,
        operator_seed: op.seed(),
        iterations_run: params.iterations,
        final_coefficient_l1: rec.coefficient_l1,
        imag_residual,
    })
}

/// Purifies the channels of a multi-channel input with one shared mask.
pub fn purify_channels<T: Scalar>(
    channels: &[SignalVector<T>],
    params: &ReconstructionParams<T>,
    seed: u64,
) -> Result<Vec<PurifiedSignal<T>>> {
    let Some(first) = channels.first() else {
        return Ok(Vec::new());
    };
    if let Some(bad) = channels.iter().find(|c| c.shape() != first.shape()) {
        return Err(RwError::Shape(format!(
            "channels disagree in shape: {} vs {}",
            first.shape(),
            bad.shape()
        )));
    }
    params.validate()?;
    let op = make_partial_fourier(first.shape(), params.subsample_prob, seed)?;
    channels.iter().map(|c| purify_with(c, &op, params)).collect()
}

/// The defended classifier: `classifier(purify(x))`.
pub fn defend<T, L, F>(classifier: F, x: &SignalVector<T>, params: &ReconstructionParams<T>, seed: u64) -> Result<L>
where
    T: Scalar,
    F: Fn(&SignalVector<T>) -> L,
{
    Ok(classifier(&purify(x, params, seed)?.value))
}
