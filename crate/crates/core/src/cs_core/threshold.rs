use num_complex::Complex;

use crate::{Result, RwError, Scalar};

/// Complex soft thresholding `S_lambda`, applied componentwise: zero where
/// `|u| < lambda`, otherwise `u (|u| - lambda) / |u|`.
pub fn soft_threshold<T: Scalar>(u: &[Complex<T>], lambda: T) -> Result<Vec<Complex<T>>> {
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(RwError::param(
            "lambda",
            format!("threshold must be finite and >= 0, got {lambda}"),
        ));
    }
    let mut out = u.to_vec();
    shrink_in_place(&mut out, lambda);
    Ok(out)
}

pub(crate) fn shrink_in_place<T: Scalar>(u: &mut [Complex<T>], lambda: T) {
    if lambda == T::zero() {
        return;
    }
    for v in u.iter_mut() {
        let mag = v.norm();
        // |u| == lambda also maps to zero; this sidesteps 0/0 at lambda = 0.
        *v = if mag <= lambda {
            Complex::new(T::zero(), T::zero())
        } else {
            *v * ((mag - lambda) / mag)
        };
    }
}

/// Threshold `theta` such that soft thresholding `v` by `theta` lands on the
/// L1 ball of the given radius (Euclidean projection onto the ball). Zero
/// when `v` is already inside.
pub(crate) fn l1_ball_threshold<T: Scalar>(v: &[Complex<T>], radius: T) -> T {
    let mut mags: Vec<T> = v.iter().map(|c| c.norm()).collect();
    let total = mags.iter().fold(T::zero(), |s, &m| s + m);
    if total <= radius {
        return T::zero();
    }
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumulative = T::zero();
    let mut theta = T::zero();
    for (k, &m) in mags.iter().enumerate() {
        cumulative = cumulative + m;
        let candidate = (cumulative - radius) / T::lit((k + 1) as f64);
        if m > candidate {
            theta = candidate;
        } else {
            break;
        }
    }
    theta.max(T::zero())
}
