//! Sparsity defect `E(x) = inf_{||Psi a||_1 <= T} ||Psi(Phi* Phi x - a)||_1`,
//! computed with a split-Bregman iteration on the frame coefficients
//! `z = Psi Phi* Phi x`:
//!
//! ```text
//! d_0 = z, b_0 = 0, d_{-1} = 0
//! while ||d_i - d_{i-1}||_1 > tol:
//!     u_{i+1} = S_lambda(d_i - b_i - z) + z
//!     d_{i+1} = S_theta(u_{i+1} + b_i)
//!     b_{i+1} = b_i + u_{i+1} - d_{i+1}
//! defect = ||z - d_i||_1 if ||d_i||_1 <= T, otherwise FAILED
//! ```
//!
//! With [`DStep::BallProjection`] (the default) `theta` is the threshold that
//! projects `u + b` onto the L1 ball of radius `T`; with
//! [`DStep::FixedShrink`] it is `lambda`, which never consults `T` and
//! generally ends in the FAILED branch for points outside the ball.

use num_complex::Complex;
use rayon::prelude::*;

use crate::cs_core::{l1_ball_threshold, l1_norm, shrink_in_place, Frame, SignalVector};
use crate::seed::derive_seed;
use crate::sensing::{make_partial_fourier, SensingOperator};
use crate::{Result, RwError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DStep {
    #[default]
    BallProjection,
    FixedShrink,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectParams<T> {
    /// Radius `T` of the solution set in the sparsity norm.
    pub solution_bound: T,
    pub bregman_lambda: T,
    /// Per-coefficient tolerance; the loop compares `||d_i - d_{i-1}||_1`
    /// against `tolerance * n`.
    pub tolerance: T,
    pub max_iterations: usize,
    pub d_step: DStep,
}

impl<T: Scalar> DefectParams<T> {
    pub fn new(solution_bound: T) -> Self {
        Self {
            solution_bound,
            bregman_lambda: T::lit(0.5),
            tolerance: T::lit(1e-6),
            max_iterations: 10_000,
            d_step: DStep::BallProjection,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("solution_bound", self.solution_bound),
            ("bregman_lambda", self.bregman_lambda),
            ("tolerance", self.tolerance),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(RwError::param(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if self.max_iterations == 0 {
            return Err(RwError::param("max_iterations", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectResult<T> {
    /// `None` is the FAILED outcome: the final `d` lies outside the ball.
    pub defect: Option<T>,
    pub iterations: usize,
    /// `||d||_1` at exit.
    pub final_l1: T,
}

impl<T: Scalar> DefectResult<T> {
    pub fn is_failed(&self) -> bool {
        self.defect.is_none()
    }
}

/// Runs the split-Bregman loop on coefficients `z`.
pub fn bregman_defect<T: Scalar>(z: &[Complex<T>], params: &DefectParams<T>) -> Result<DefectResult<T>> {
    params.validate()?;
    let n = z.len();
    let zero = Complex::new(T::zero(), T::zero());
    let tol = params.tolerance * T::lit(n.max(1) as f64);
    let lambda = params.bregman_lambda;

    let mut d = z.to_vec();
    let mut b = vec![zero; n];
    let mut u = vec![zero; n];
    let mut change = l1_norm(&d);
    let mut iterations = 0;

    while change > tol {
        if iterations == params.max_iterations {
            return Err(RwError::IterationCap {
                stage: "sparsity defect",
                cap: params.max_iterations,
                last_change: change.as_f64(),
            });
        }
        for i in 0..n {
            u[i] = d[i] - b[i] - z[i];
        }
        shrink_in_place(&mut u, lambda);
        let mut next: Vec<Complex<T>> = (0..n)
            .map(|i| {
                u[i] = u[i] + z[i];
                u[i] + b[i]
            })
            .collect();
        let theta = match params.d_step {
            DStep::BallProjection => l1_ball_threshold(&next, params.solution_bound),
            DStep::FixedShrink => lambda,
        };
        shrink_in_place(&mut next, theta);
        for i in 0..n {
            b[i] = b[i] + u[i] - next[i];
        }
        change = next.iter().zip(&d).fold(T::zero(), |s, (a, c)| s + (a - c).norm());
        d = next;
        iterations += 1;
        if !change.is_finite() {
            return Err(RwError::NonFinite {
                stage: "sparsity defect",
                iteration: iterations,
            });
        }
    }

    let final_l1 = l1_norm(&d);
    let slack = params.solution_bound * T::lit(1e-12);
    let defect = (final_l1 <= params.solution_bound + slack).then(|| {
        z.iter().zip(&d).fold(T::zero(), |s, (a, c)| s + (a - c).norm())
    });
    Ok(DefectResult {
        defect,
        iterations,
        final_l1,
    })
}

/// Sparsity defect of the sample `x` as seen through `op`: the loop runs
/// on `Psi Phi* Phi x`.
pub fn sparsity_defect<T: Scalar>(
    x: &SignalVector<T>,
    op: &SensingOperator<T>,
    frame: &Frame,
    params: &DefectParams<T>,
) -> Result<DefectResult<T>> {
    let z = frame.analyze(&op.project(x)?)?;
    bregman_defect(z.values(), params)
}

/// Exhaustive grid search for `min ||x - a||_1` over grid points `a` with
/// `||a||_1 <= bound`, for vectors of dimension at most 3.
pub fn brute_force_defect<T: Scalar>(x: &[T], bound: T, grid_step: T) -> Result<T> {
    if x.is_empty() || x.len() > 3 {
        return Err(RwError::param(
            "x",
            format!("brute force supports dimensions 1..=3, got {}", x.len()),
        ));
    }
    if !(grid_step > T::zero()) || !grid_step.is_finite() {
        return Err(RwError::param("grid_step", "must be finite and > 0"));
    }
    if !(bound >= T::zero()) || !bound.is_finite() {
        return Err(RwError::param("bound", "must be finite and >= 0"));
    }
    let steps = (T::lit(2.0) * bound / grid_step).floor().to_usize().unwrap_or(0);
    let axis: Vec<T> = (0..=steps).map(|k| -bound + grid_step * T::lit(k as f64)).collect();
    let slack = bound * T::lit(1e-12);
    let dim = x.len();
    let mut best = x.iter().fold(T::zero(), |s, v| s + v.abs());
    let mut idx = vec![0usize; dim];
    loop {
        let mut norm = T::zero();
        let mut dist = T::zero();
        for (k, &i) in idx.iter().enumerate() {
            norm = norm + axis[i].abs();
            dist = dist + (x[k] - axis[i]).abs();
        }
        if norm <= bound + slack && dist < best {
            best = dist;
        }
        // odometer increment
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < axis.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == dim {
                return Ok(best);
            }
        }
    }
}

/// Monte-Carlo estimate of the expected worst-case defect.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectEstimate<T> {
    pub estimate: T,
    /// Per-operator maximum over samples; `None` when every sample failed.
    pub per_operator_max: Vec<Option<T>>,
    /// Number of (operator, sample) instances that ended FAILED.
    pub failed: usize,
}

/// Averages, over `num_operators` operators seeded with
/// `derive_seed(master_seed, i)`, the maximum defect across `samples`.
/// FAILED instances are left out and counted.
pub fn expected_defect<T: Scalar>(
    samples: &[SignalVector<T>],
    frame: &Frame,
    params: &DefectParams<T>,
    subsample_prob: f64,
    num_operators: usize,
    master_seed: u64,
) -> Result<DefectEstimate<T>> {
    if num_operators == 0 {
        return Err(RwError::param("num_operators", "must be >= 1"));
    }
    let Some(first) = samples.first() else {
        return Err(RwError::param("samples", "need at least one sample"));
    };
    if let Some(bad) = samples.iter().find(|s| s.shape() != first.shape()) {
        return Err(RwError::Shape(format!(
            "samples disagree in shape: {} vs {}",
            first.shape(),
            bad.shape()
        )));
    }
    params.validate()?;

    let per_operator: Vec<(Option<T>, usize)> = (0..num_operators)
        .into_par_iter()
        .map(|i| {
            let op = make_partial_fourier(first.shape(), subsample_prob, derive_seed(master_seed, i as u64))?;
            let mut worst: Option<T> = None;
            let mut failed = 0;
            for x in samples {
                match sparsity_defect(x, &op, frame, params)?.defect {
                    Some(v) => worst = Some(worst.map_or(v, |w| w.max(v))),
                    None => failed += 1,
                }
            }
            Ok((worst, failed))
        })
        .collect::<Result<_>>()?;

    let failed = per_operator.iter().map(|(_, f)| f).sum();
    let maxima: Vec<Option<T>> = per_operator.into_iter().map(|(m, _)| m).collect();
    let kept: Vec<T> = maxima.iter().flatten().copied().collect();
    if kept.is_empty() {
        return Err(RwError::Estimation(format!(
            "all {failed} defect instances failed"
        )));
    }
    let estimate = kept.iter().fold(T::zero(), |s, &v| s + v) / T::lit(kept.len() as f64);
    Ok(DefectEstimate {
        estimate,
        per_operator_max: maxima,
        failed,
    })
}
