use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::Shape;
use crate::Scalar;

struct Plans<T: Scalar> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> Plans<T> {
    fn new(planner: &mut FftPlanner<T>, len: usize) -> Self {
        Self {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }
}

impl<T: Scalar> Clone for Plans<T> {
    fn clone(&self) -> Self {
        Self {
            forward: Arc::clone(&self.forward),
            inverse: Arc::clone(&self.inverse),
        }
    }
}

/// Unitary DFT (scaled by `1/sqrt(n)` in both directions) over a 1D or 2D
/// shape; the 2D transform is the tensor product of 1D transforms.
#[derive(Clone)]
pub struct UnitaryDft<T: Scalar> {
    shape: Shape,
    rows: Plans<T>,
    cols: Option<Plans<T>>,
    scale: T,
}

impl<T: Scalar> fmt::Debug for UnitaryDft<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnitaryDft").field("shape", &self.shape).finish()
    }
}

impl<T: Scalar> UnitaryDft<T> {
    pub fn new(shape: Shape) -> Self {
        let mut planner = FftPlanner::new();
        let (rows, cols) = match shape {
            Shape::D1(n) => (Plans::new(&mut planner, n), None),
            Shape::D2 { rows, cols } => (
                Plans::new(&mut planner, cols),
                Some(Plans::new(&mut planner, rows)),
            ),
        };
        let scale = T::one() / T::lit(shape.len() as f64).sqrt();
        Self {
            shape,
            rows,
            cols,
            scale,
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.run(data, true);
    }

    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.run(data, false);
    }

    fn run(&self, data: &mut [Complex<T>], forward: bool) {
        assert_eq!(data.len(), self.shape.len(), "buffer/shape mismatch");
        let pick = |p: &Plans<T>| {
            if forward {
                Arc::clone(&p.forward)
            } else {
                Arc::clone(&p.inverse)
            }
        };
        // Processes every contiguous row of length `cols`.
        pick(&self.rows).process(data);
        if let (Some(cols), Shape::D2 { rows: h, cols: w }) = (&self.cols, self.shape) {
            let mut t = transpose(data, h, w);
            pick(cols).process(&mut t);
            data.copy_from_slice(&transpose(&t, w, h));
        }
        for v in data.iter_mut() {
            *v = *v * self.scale;
        }
    }
}

fn transpose<T: Copy>(data: &[T], rows: usize, cols: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(data.len());
    for c in 0..cols {
        for r in 0..rows {
            out.push(data[r * cols + c]);
        }
    }
    out
}
