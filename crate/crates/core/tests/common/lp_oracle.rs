//! Basis pursuit `min ||x||_1 s.t. m ⊙ F x = y` over real `x`, posed as a
//! linear program with `x = p - q`, `p, q >= 0`. Used only as a reference
//! solver; it knows nothing about the iterative reconstruction.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use std::f64::consts::PI;

/// Solves basis pursuit for a real signal of length `n` observed through the
/// unitary DFT rows selected by `mask`, with measurements taken from `x`.
pub fn basis_pursuit(x: &[f64], mask: &[bool]) -> Vec<f64> {
    let n = x.len();
    let scale = 1.0 / (n as f64).sqrt();
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let pos: Vec<_> = (0..n).map(|_| problem.add_var(1.0, (0.0, f64::INFINITY))).collect();
    let neg: Vec<_> = (0..n).map(|_| problem.add_var(1.0, (0.0, f64::INFINITY))).collect();

    // Row k of a real signal's DFT determines row n-k, so keep one of each pair.
    let mut rows: Vec<usize> = mask
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(k, _)| k.min((n - k) % n))
        .collect();
    rows.sort_unstable();
    rows.dedup();

    for k in rows {
        let cos: Vec<f64> = (0..n)
            .map(|j| scale * (2.0 * PI * (j * k) as f64 / n as f64).cos())
            .collect();
        let sin: Vec<f64> = (0..n)
            .map(|j| -scale * (2.0 * PI * (j * k) as f64 / n as f64).sin())
            .collect();
        let mut parts = vec![cos];
        if k != 0 && 2 * k != n {
            parts.push(sin);
        }
        for coeffs in parts {
            let rhs: f64 = coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
            let expr: Vec<_> = pos
                .iter()
                .zip(&coeffs)
                .map(|(&v, &c)| (v, c))
                .chain(neg.iter().zip(&coeffs).map(|(&v, &c)| (v, -c)))
                .collect();
            problem.add_constraint(&expr[..], ComparisonOp::Eq, rhs);
        }
    }
    let solution = problem.solve().expect("basis pursuit LP is feasible");
    pos.iter().zip(&neg).map(|(&p, &q)| solution[p] - solution[q]).collect()
}
