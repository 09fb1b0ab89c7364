//! Certification arithmetic.
//!
//! For an operator with robust-width parameters `(rho, alpha)` and data whose
//! worst sparsity defect is `E`, purification has performance bound
//! `C(eps) = eps * kappa(eps)` with `kappa(eps) = 2/alpha + 4 rho E / eps`,
//! and the defended classifier gains robustness by at least `1/kappa(eps)`.

use crate::sensing::{check_probability, RwpParameters};
use crate::{Result, RwError, Scalar};

/// What a certificate was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateInputs<T> {
    pub alpha: T,
    pub rho: Option<T>,
    pub tau: T,
    pub epsilon: T,
    pub rwp_prob: Option<f64>,
    pub expected_defect: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate<T> {
    /// Certified L2 perturbation radius.
    pub radius: T,
    /// Lower bound on the probability that the certificate holds; 1 for
    /// deterministic statements.
    pub probability: f64,
    /// Lower bound on the robustness gain.
    pub gain: T,
    /// The probability bound was clamped at zero.
    pub vacuous: bool,
    pub inputs: CertificateInputs<T>,
}

impl<T: Scalar> Certificate<T> {
    /// The gain bound exceeds the trivial denoiser's gain of 1.
    pub fn improves(&self) -> bool {
        self.gain > T::one()
    }
}

fn positive<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(RwError::param(name, format!("must be finite and > 0, got {v}")))
    }
}

fn non_negative<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v >= T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(RwError::param(name, format!("must be finite and >= 0, got {v}")))
    }
}

/// `kappa(eps) = 2/alpha + (4 rho / eps) * max_defect`.
pub fn kappa<T: Scalar>(epsilon: T, alpha: T, rho: T, max_defect: T) -> Result<T> {
    positive("alpha", alpha)?;
    positive("rho", rho)?;
    non_negative("max_defect", max_defect)?;
    non_negative("epsilon", epsilon)?;
    let base = T::lit(2.0) / alpha;
    if max_defect == T::zero() {
        return Ok(base);
    }
    if epsilon == T::zero() {
        return Err(RwError::param(
            "epsilon",
            "kappa is undefined at epsilon = 0 with a nonzero defect",
        ));
    }
    Ok(base + T::lit(4.0) * rho * max_defect / epsilon)
}

/// `C(eps) = eps * kappa(eps) = 2 eps / alpha + 4 rho max_defect`.
pub fn performance_bound<T: Scalar>(epsilon: T, alpha: T, rho: T, max_defect: T) -> Result<T> {
    Ok(epsilon * kappa(epsilon, alpha, rho, max_defect)?)
}

/// Largest worst-case defect for which `C(eps) <= tau`:
/// `(tau - 2 eps / alpha) / (4 rho)`. Requires `tau alpha / 2 > eps`.
pub fn defect_budget<T: Scalar>(tau: T, epsilon: T, alpha: T, rho: T) -> Result<T> {
    positive("tau", tau)?;
    positive("alpha", alpha)?;
    positive("rho", rho)?;
    non_negative("epsilon", epsilon)?;
    let two = T::lit(2.0);
    if !(tau * alpha > two * epsilon) {
        return Err(RwError::Infeasible(format!(
            "tau * alpha / 2 = {} must exceed epsilon = {epsilon}",
            tau * alpha / two
        )));
    }
    Ok((tau - two * epsilon / alpha) / (T::lit(4.0) * rho))
}

/// `1 / kappa`.
pub fn robustness_gain<T: Scalar>(kappa_value: T) -> Result<T> {
    positive("kappa", kappa_value)?;
    Ok(T::one() / kappa_value)
}

/// Probabilistic certificate for a randomly sampled operator that has the
/// `(rho, alpha)` robust-width property with probability at least `rwp_prob`:
/// the label is preserved within radius `epsilon` with probability at least
/// `rwp_prob - 4 alpha rho E / (alpha tau - 2 eps)`, clamped to `[0, 1]`.
pub fn certify_probabilistic<T: Scalar>(
    rwp_prob: f64,
    alpha: T,
    rho: T,
    tau: T,
    epsilon: T,
    expected_defect: T,
) -> Result<Certificate<T>> {
    check_probability("rwp_prob", rwp_prob)?;
    positive("alpha", alpha)?;
    positive("rho", rho)?;
    positive("tau", tau)?;
    non_negative("epsilon", epsilon)?;
    non_negative("expected_defect", expected_defect)?;
    let margin = alpha * tau - T::lit(2.0) * epsilon;
    if !(margin > T::zero()) {
        return Err(RwError::Infeasible(format!(
            "alpha * tau = {} must exceed 2 * epsilon = {}",
            alpha * tau,
            T::lit(2.0) * epsilon
        )));
    }
    let penalty = (T::lit(4.0) * alpha * rho * expected_defect / margin).as_f64();
    let raw = rwp_prob - penalty;
    let probability = raw.clamp(0.0, 1.0);
    let gain = robustness_gain(kappa(epsilon, alpha, rho, expected_defect)?)?;
    Ok(Certificate {
        radius: epsilon,
        probability,
        gain,
        vacuous: raw <= 0.0,
        inputs: CertificateInputs {
            alpha,
            rho: Some(rho),
            tau,
            epsilon,
            rwp_prob: Some(rwp_prob),
            expected_defect: Some(expected_defect),
        },
    })
}

/// Robust-width parameters implied by the `(J, delta)` restricted isometry
/// property of a random partial Fourier matrix: `rho = 3 / sqrt(J)`,
/// `alpha = 1/3 - delta`. The probability is left unset; see
/// [`rwp_failure_exponent`].
pub fn partial_fourier_rwp<T: Scalar>(sparsity: T, delta: T) -> Result<RwpParameters<T>> {
    if !(sparsity >= T::one()) || !sparsity.is_finite() {
        return Err(RwError::param("sparsity", format!("must be >= 1, got {sparsity}")));
    }
    let third = T::one() / T::lit(3.0);
    if !(delta >= T::zero() && delta < third) {
        return Err(RwError::param(
            "delta",
            format!("must lie in [0, 1/3), got {delta}"),
        ));
    }
    RwpParameters::new(T::lit(3.0) / sparsity.sqrt(), third - delta, None)
}

/// Inverse of [`partial_fourier_rwp`]: `J = 9 / rho^2`, `delta = 1/3 - alpha`.
pub fn rwp_to_rip<T: Scalar>(rho: T, alpha: T) -> Result<(T, T)> {
    positive("rho", rho)?;
    positive("alpha", alpha)?;
    let third = T::one() / T::lit(3.0);
    if !(alpha <= third) {
        return Err(RwError::param(
            "alpha",
            format!("partial Fourier robust width needs alpha <= 1/3, got {alpha}"),
        ));
    }
    Ok((T::lit(9.0) / (rho * rho), third - alpha))
}

/// `log N * (log 9 - log(rho^2 (1/3 - alpha)))`, the exponent (up to an
/// unknown constant) in the failure probability `2^{-Omega(.)}` of the
/// partial Fourier robust-width guarantee. Only meaningful for comparing
/// settings; it is not a calibrated probability.
pub fn rwp_failure_exponent<T: Scalar>(dimension: usize, rho: T, alpha: T) -> Result<T> {
    let (_, delta) = rwp_to_rip(rho, alpha)?;
    if dimension < 2 {
        return Err(RwError::param("dimension", "must be >= 2"));
    }
    if !(delta > T::zero()) {
        return Err(RwError::param("alpha", "exponent diverges at alpha = 1/3"));
    }
    let n = T::lit(dimension as f64);
    Ok(n.ln() * (T::lit(9.0).ln() - (rho * rho * delta).ln()))
}
