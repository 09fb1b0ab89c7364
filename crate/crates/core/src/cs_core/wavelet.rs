//! Periodized orthonormal two-channel filter banks (Mallat layout).
//!
//! One analysis step maps `x` of even length `m` to `[a | d]` with
//! `a[k] = sum_j h[j] x[(2k + j) mod m]` and `d[k] = sum_j g[j] x[(2k + j) mod m]`,
//! where `g[j] = (-1)^j h[L-1-j]`. Periodization keeps the step orthonormal
//! for every even `m`, including lengths shorter than the filter.

use num_complex::Complex;

use super::Shape;
use crate::Scalar;

/// One analysis or synthesis pass over a single line, with scratch space.
type LineStep<S, T> = fn(&S, &mut [Complex<T>], &mut Vec<Complex<T>>);

const HAAR: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];

/// Daubechies scaling filter with four vanishing moments (8 taps).
const DB4: [f64; 8] = [
    0.230_377_813_308_896_5,
    0.714_846_570_552_915_6,
    0.630_880_767_929_858_9,
    -0.027_983_769_416_859_854,
    -0.187_034_811_719_093_08,
    0.030_841_381_835_560_764,
    0.032_883_011_666_885_2,
    -0.010_597_401_785_069_032,
];

#[derive(Debug, Clone)]
pub(crate) struct FilterBank<T> {
    low: Vec<T>,
    high: Vec<T>,
}

impl<T: Scalar> FilterBank<T> {
    pub(crate) fn haar() -> Self {
        Self::from_scaling(&HAAR)
    }

    pub(crate) fn db4() -> Self {
        Self::from_scaling(&DB4)
    }

    fn from_scaling(h: &[f64]) -> Self {
        let len = h.len();
        let low = h.iter().map(|&v| T::lit(v)).collect();
        let high = (0..len)
            .map(|j| {
                let v = T::lit(h[len - 1 - j]);
                if j % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        Self { low, high }
    }

    fn analyze_step(&self, x: &mut [Complex<T>], scratch: &mut Vec<Complex<T>>) {
        let m = x.len();
        let half = m / 2;
        scratch.clear();
        scratch.resize(m, Complex::new(T::zero(), T::zero()));
        for k in 0..half {
            let mut a = Complex::new(T::zero(), T::zero());
            let mut d = a;
            for (j, (&lo, &hi)) in self.low.iter().zip(&self.high).enumerate() {
                let v = x[(2 * k + j) % m];
                a = a + v * lo;
                d = d + v * hi;
            }
            scratch[k] = a;
            scratch[half + k] = d;
        }
        x.copy_from_slice(scratch);
    }

    fn synthesize_step(&self, x: &mut [Complex<T>], scratch: &mut Vec<Complex<T>>) {
        let m = x.len();
        let half = m / 2;
        scratch.clear();
        scratch.resize(m, Complex::new(T::zero(), T::zero()));
        for k in 0..half {
            let a = x[k];
            let d = x[half + k];
            for (j, (&lo, &hi)) in self.low.iter().zip(&self.high).enumerate() {
                let i = (2 * k + j) % m;
                scratch[i] = scratch[i] + a * lo + d * hi;
            }
        }
        x.copy_from_slice(scratch);
    }

    /// Multi-level forward transform in place.
    pub(crate) fn analyze(&self, data: &mut [Complex<T>], shape: Shape, levels: usize) {
        let mut scratch = Vec::new();
        match shape {
            Shape::D1(n) => {
                let mut m = n;
                for _ in 0..levels {
                    self.analyze_step(&mut data[..m], &mut scratch);
                    m /= 2;
                }
            }
            Shape::D2 { rows, cols } => {
                let (mut h, mut w) = (rows, cols);
                for _ in 0..levels {
                    self.on_block(data, cols, h, w, &mut scratch, Self::analyze_step);
                    h /= 2;
                    w /= 2;
                }
            }
        }
    }

    /// Multi-level inverse transform in place.
    pub(crate) fn synthesize(&self, data: &mut [Complex<T>], shape: Shape, levels: usize) {
        let mut scratch = Vec::new();
        match shape {
            Shape::D1(n) => {
                for l in (0..levels).rev() {
                    self.synthesize_step(&mut data[..n >> l], &mut scratch);
                }
            }
            Shape::D2 { rows, cols } => {
                for l in (0..levels).rev() {
                    self.on_block(data, cols, rows >> l, cols >> l, &mut scratch, Self::synthesize_step);
                }
            }
        }
    }

    /// Applies `step` to every row, then every column, of the top-left
    /// `h x w` block of a row-major buffer with row stride `stride`.
    fn on_block(
        &self,
        data: &mut [Complex<T>],
        stride: usize,
        h: usize,
        w: usize,
        scratch: &mut Vec<Complex<T>>,
        step: LineStep<Self, T>,
    ) {
        for r in 0..h {
            step(self, &mut data[r * stride..r * stride + w], scratch);
        }
        let mut column = Vec::with_capacity(h);
        for c in 0..w {
            column.clear();
            column.extend((0..h).map(|r| data[r * stride + c]));
            step(self, &mut column, scratch);
            for (r, v) in column.iter().enumerate() {
                data[r * stride + c] = *v;
            }
        }
    }
}
