//! Linear sign classifier on sparse vectors, its exact robustness, the
//! certificates purification gives it, and an empirical robust-radius
//! search usable on any label function.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::certify::{kappa, robustness_gain, Certificate, CertificateInputs};
use crate::cs_core::SignalVector;
use crate::seed::{derive_seed, rng_from_seed};
use crate::{Result, RwError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// Sign with `sign(0) = +1`.
    pub fn from_sign<T: Scalar>(v: T) -> Self {
        if v < T::zero() {
            Label::Negative
        } else {
            Label::Positive
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }
}

/// `f(x) = sgn(<w, x>)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearClassifier<T> {
    weights: Vec<T>,
    support_mask: Vec<bool>,
    weight_norm: T,
}

impl<T: Scalar> LinearClassifier<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(RwError::param("weights", "entries must be finite"));
        }
        let weight_norm = weights.iter().fold(T::zero(), |s, &w| s + w * w).sqrt();
        if weight_norm == T::zero() {
            return Err(RwError::param("weights", "weight vector must be nonzero"));
        }
        let support_mask = weights.iter().map(|&w| w != T::zero()).collect();
        Ok(Self {
            weights,
            support_mask,
            weight_norm,
        })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `m_i = 1` iff `w_i != 0`.
    pub fn support_mask(&self) -> &[bool] {
        &self.support_mask
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weight_norm(&self) -> T {
        self.weight_norm
    }

    pub fn inner(&self, x: &[T]) -> Result<T> {
        if x.len() != self.weights.len() {
            return Err(RwError::Shape(format!(
                "classifier of dimension {} given input of length {}",
                self.weights.len(),
                x.len()
            )));
        }
        Ok(self.weights.iter().zip(x).fold(T::zero(), |s, (&w, &v)| s + w * v))
    }

    pub fn predict(&self, x: &[T]) -> Result<Label> {
        Ok(Label::from_sign(self.inner(x)?))
    }

    /// Classifies the real part of a signal.
    pub fn predict_signal(&self, x: &SignalVector<T>) -> Result<Label> {
        self.predict(&x.real_part())
    }

    /// `m ⊙ x`.
    pub fn mask_input(&self, x: &[T]) -> Vec<T> {
        x.iter()
            .zip(&self.support_mask)
            .map(|(&v, &keep)| if keep { v } else { T::zero() })
            .collect()
    }

    /// Exact L2 distance to the decision boundary, `|<w, x>| / ||w||`.
    pub fn margin(&self, x: &[T]) -> Result<T> {
        Ok(self.inner(x)?.abs() / self.weight_norm)
    }

    /// Smallest perturbation reaching the boundary,
    /// `-<w, x> w / ||w||^2`.
    pub fn min_perturbation(&self, x: &[T]) -> Result<Vec<T>> {
        let scale = -self.inner(x)? / (self.weight_norm * self.weight_norm);
        Ok(self.weights.iter().map(|&w| w * scale).collect())
    }

    /// Unit direction towards the other side of the boundary; for boundary
    /// points (labelled +1) it points to the negative side.
    pub fn adversarial_direction(&self, x: &[T]) -> Result<Vec<T>> {
        let sign = match self.predict(x)? {
            Label::Positive => -T::one(),
            Label::Negative => T::one(),
        };
        Ok(self.weights.iter().map(|&w| sign * w / self.weight_norm).collect())
    }
}

fn require_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::lit(2.0) && alpha.is_finite() {
        Ok(())
    } else {
        Err(RwError::param(
            "alpha",
            format!("purification only improves robustness for alpha > 2, got {alpha}"),
        ))
    }
}

/// Certificate for an exactly sparse input: radius `alpha * margin / 2`,
/// gain `alpha / 2`.
pub fn linear_certificate<T: Scalar>(clf: &LinearClassifier<T>, x: &[T], alpha: T) -> Result<Certificate<T>> {
    require_alpha(alpha)?;
    let tau = clf.margin(x)?;
    let half = alpha / T::lit(2.0);
    Ok(Certificate {
        radius: half * tau,
        probability: 1.0,
        gain: half,
        vacuous: false,
        inputs: CertificateInputs {
            alpha,
            rho: None,
            tau,
            epsilon: half * tau,
            rwp_prob: None,
            expected_defect: Some(T::zero()),
        },
    })
}

/// Certificate for an approximately sparse input with defect `defect`:
/// radius `(alpha/2) (margin - 4 rho defect)` when `margin > 4 rho defect`.
pub fn linear_certificate_approx<T: Scalar>(
    clf: &LinearClassifier<T>,
    x: &[T],
    alpha: T,
    rho: T,
    defect: T,
) -> Result<Certificate<T>> {
    require_alpha(alpha)?;
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(RwError::param("rho", format!("must be finite and > 0, got {rho}")));
    }
    if !(defect >= T::zero()) || !defect.is_finite() {
        return Err(RwError::param("defect", format!("must be finite and >= 0, got {defect}")));
    }
    if defect == T::zero() {
        let mut cert = linear_certificate(clf, x, alpha)?;
        cert.inputs.rho = Some(rho);
        return Ok(cert);
    }
    let tau = clf.margin(x)?;
    let penalty = T::lit(4.0) * rho * defect;
    if !(tau > penalty) {
        return Err(RwError::NoCertificate(format!(
            "margin {tau} does not exceed 4 * rho * defect = {penalty}"
        )));
    }
    let radius = alpha / T::lit(2.0) * (tau - penalty);
    let gain = robustness_gain(kappa(radius, alpha, rho, defect)?)?;
    Ok(Certificate {
        radius,
        probability: 1.0,
        gain,
        vacuous: false,
        inputs: CertificateInputs {
            alpha,
            rho: Some(rho),
            tau,
            epsilon: radius,
            rwp_prob: None,
            expected_defect: Some(defect),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusMethod {
    ClosedForm,
    BisectionRandomProbe,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusMeasurement<T> {
    /// Largest probed radius without a label flip.
    pub radius: T,
    /// Smallest probed radius with a flip.
    pub upper: T,
    /// Pipeline evaluations budgeted across all probed radii.
    pub trials: usize,
    pub method: RadiusMethod,
}

/// Settings of [`empirical_robust_radius`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSearch<T> {
    /// Random directions tried at each radius.
    pub probes: usize,
    /// Width of the final bracket.
    pub tol: T,
    pub seed: u64,
    /// First radius tried by the doubling phase.
    pub initial: T,
    /// Doubling gives up beyond this radius.
    pub ceiling: T,
}

impl<T: Scalar> Default for RadiusSearch<T> {
    fn default() -> Self {
        Self {
            probes: 200,
            tol: T::lit(1e-3),
            seed: 0,
            initial: T::lit(1e-2),
            ceiling: T::lit(1e3),
        }
    }
}

impl<T: Scalar> RadiusSearch<T> {
    fn validate(&self) -> Result<()> {
        if self.probes == 0 {
            return Err(RwError::param("probes", "must be >= 1"));
        }
        for (name, v) in [("tol", self.tol), ("initial", self.initial), ("ceiling", self.ceiling)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(RwError::param(name, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Uniform direction on the unit sphere of `R^dim`.
pub fn random_direction<T: Scalar>(dim: usize, seed: u64) -> Vec<T> {
    let mut rng = rng_from_seed(seed);
    let raw: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    raw.iter().map(|v| T::lit(v / norm)).collect()
}

/// Measures how far `x` can be pushed before `pipeline` changes its label.
///
/// At each radius `r`, the `priority` directions and `search.probes` random
/// unit directions are tried at distance exactly `r`; a radius counts as
/// flipping if any of them changes the label. The radius is doubled from
/// `search.initial` until a flip appears, then bisected down to `search.tol`.
/// Random directions at the k-th probed radius come from
/// `derive_seed(derive_seed(seed, k), j)`, so the result does not depend on
/// thread count.
pub fn empirical_robust_radius<T, L, F>(
    pipeline: &F,
    x: &[T],
    search: &RadiusSearch<T>,
    priority: &[Vec<T>],
) -> Result<RadiusMeasurement<T>>
where
    T: Scalar,
    L: PartialEq + Send + Sync,
    F: Fn(&[T]) -> Result<L> + Sync,
{
    search.validate()?;
    if let Some(d) = priority.iter().find(|d| d.len() != x.len()) {
        return Err(RwError::Shape(format!(
            "priority direction of length {} for input of length {}",
            d.len(),
            x.len()
        )));
    }
    let base = pipeline(x)?;
    let dim = x.len();
    let per_level = priority.len() + search.probes;
    let mut level = 0u64;

    let flips_at = |r: T, level: u64| -> Result<bool> {
        let level_seed = derive_seed(search.seed, level);
        let shifted = |d: &[T]| -> Vec<T> { x.iter().zip(d).map(|(&v, &dv)| v + r * dv).collect() };
        for d in priority {
            if pipeline(&shifted(d))? != base {
                return Ok(true);
            }
        }
        let hit = (0..search.probes as u64).into_par_iter().find_any(|&j| {
            let d = random_direction::<T>(dim, derive_seed(level_seed, j));
            !matches!(pipeline(&shifted(&d)), Ok(ref label) if *label == base)
        });
        match hit {
            None => Ok(false),
            Some(j) => {
                // Re-evaluate so that errors surface instead of counting as flips.
                let d = random_direction::<T>(dim, derive_seed(level_seed, j));
                pipeline(&shifted(&d))?;
                Ok(true)
            }
        }
    };

    let mut lo = T::zero();
    let mut hi = search.initial;
    loop {
        let flipped = flips_at(hi, level)?;
        level += 1;
        if flipped {
            break;
        }
        lo = hi;
        hi = hi * T::lit(2.0);
        if hi > search.ceiling {
            return Err(RwError::NoUpperBracket {
                ceiling: search.ceiling.as_f64(),
            });
        }
    }
    while hi - lo > search.tol {
        let mid = (lo + hi) / T::lit(2.0);
        let flipped = flips_at(mid, level)?;
        level += 1;
        if flipped {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RadiusMeasurement {
        radius: lo,
        upper: hi,
        trials: level as usize * per_level,
        method: RadiusMethod::BisectionRandomProbe,
    })
}

/// Empirical radius of the undefended classifier, probing the closed-form
/// worst direction along with random ones.
pub fn linear_empirical_radius<T: Scalar>(
    clf: &LinearClassifier<T>,
    x: &[T],
    search: &RadiusSearch<T>,
) -> Result<RadiusMeasurement<T>> {
    let direction = clf.adversarial_direction(x)?;
    empirical_robust_radius(&|v: &[T]| clf.predict(v), x, search, &[direction])
}

/// Exact radius of the undefended classifier.
pub fn linear_exact_radius<T: Scalar>(clf: &LinearClassifier<T>, x: &[T]) -> Result<RadiusMeasurement<T>> {
    let margin = clf.margin(x)?;
    Ok(RadiusMeasurement {
        radius: margin,
        upper: margin,
        trials: 0,
        method: RadiusMethod::ClosedForm,
    })
}
