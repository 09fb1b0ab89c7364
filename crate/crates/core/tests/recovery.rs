mod common;

use common::{lp_oracle::basis_pursuit, median, spearman, unit_direction, unit_sparse};
use rwkit_core::reconstruct::{defend, ista_reconstruct, purify};
use rwkit_core::sensing::make_partial_fourier;
use rwkit_core::{Complex, Frame, LinearClassifier, ReconstructionParams, Shape, SignalVector};

const N: usize = 128;
const K: usize = 4;

fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn reconstruct(x: &[f64], seed: u64, lambda: f64, iterations: usize) -> Vec<f64> {
    let params = ReconstructionParams::new(iterations, lambda, 0.5, Frame::identity()).unwrap();
    purify(&SignalVector::real_1d(x).unwrap(), &params, seed).unwrap().real_part()
}

#[test]
fn basis_pursuit_recovers_the_sparse_setting() {
    let errors: Vec<f64> = (0..50u64)
        .map(|seed| {
            let x = unit_sparse(N, K, seed);
            let op = make_partial_fourier::<f64>(Shape::D1(N), 0.5, seed).unwrap();
            l2(&basis_pursuit(&x, op.mask()), &x)
        })
        .collect();
    assert!(median(errors) < 1e-6);
}

#[test]
fn small_threshold_recovers_like_basis_pursuit() {
    let errors: Vec<f64> = (0..50u64)
        .map(|seed| l2(&reconstruct(&unit_sparse(N, K, seed), seed, 1e-3, 2000), &unit_sparse(N, K, seed)))
        .collect();
    let med = median(errors);
    assert!(med <= 1e-2, "median error {med}");
}

/// Solves `A z = b` for a small complex system by Gaussian elimination.
fn solve(mut a: Vec<Vec<Complex<f64>>>, mut b: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap()).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(row);
            for (dst, &src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= f * src;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut z = vec![Complex::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let s: Complex<f64> = (row + 1..n).map(|k| a[row][k] * z[k]).sum();
        z[row] = (b[row] - s) / a[row][row];
    }
    z
}

/// Fixed point of the thresholded iteration restricted to the true support:
/// `P_SS (u_S - x_S) = -lambda u_S / |u_S|`, with `P = Phi* Phi`.
fn lasso_on_support(x: &[f64], mask: &[bool], lambda: f64) -> Vec<f64> {
    let n = x.len();
    let support: Vec<usize> = (0..n).filter(|&i| x[i] != 0.0).collect();
    let p = |a: usize, b: usize| -> Complex<f64> {
        let d = a as f64 - b as f64;
        mask.iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(k, _)| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 * d / n as f64))
            .sum::<Complex<f64>>()
            / n as f64
    };
    let pss: Vec<Vec<Complex<f64>>> = support.iter().map(|&a| support.iter().map(|&b| p(a, b)).collect()).collect();
    let mut u: Vec<Complex<f64>> = support.iter().map(|&i| Complex::new(x[i], 0.0)).collect();
    for _ in 0..200 {
        let rhs: Vec<Complex<f64>> = u.iter().map(|v| -lambda * v / v.norm()).collect();
        let shift = solve(pss.clone(), rhs);
        u = support.iter().zip(&shift).map(|(&i, s)| Complex::new(x[i], 0.0) + s).collect();
    }
    let mut out = vec![0.0; n];
    for (&i, v) in support.iter().zip(&u) {
        out[i] = v.re;
    }
    out
}

#[test]
fn documented_threshold_converges_to_the_biased_lasso_point() {
    let mut ista_errors = Vec::new();
    let mut oracle_errors = Vec::new();
    let mut agreement = Vec::new();
    for seed in 0..50u64 {
        let x = unit_sparse(N, K, seed);
        let op = make_partial_fourier::<f64>(Shape::D1(N), 0.5, seed).unwrap();
        let xr = reconstruct(&x, seed, 0.02, 500);
        let oracle = lasso_on_support(&x, op.mask(), 0.02);
        ista_errors.push(l2(&xr, &x));
        oracle_errors.push(l2(&oracle, &x));
        agreement.push(l2(&xr, &oracle));
    }
    // The shrinkage bias, not the solver, sets the error at this threshold.
    let agree = median(agreement);
    assert!(agree < 1e-3, "ista vs oracle {agree}");
    assert!((median(ista_errors.clone()) - median(oracle_errors)).abs() < 1e-3);
    assert!(median(ista_errors) > 0.05);
}

#[test]
fn noisy_reconstruction_contracts_towards_the_signal() {
    let contracted = (0..50u64)
        .filter(|&seed| {
            let x = unit_sparse(N, K, seed);
            let delta: Vec<f64> = unit_direction(N, seed + 1000).iter().map(|v| 0.1 * v).collect();
            let noisy: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + b).collect();
            l2(&reconstruct(&noisy, seed, 1e-3, 2000), &x) <= 0.1
        })
        .count();
    assert!(contracted >= 45, "{contracted}/50");
}

#[test]
fn error_grows_with_noise() {
    for seed in 0..5u64 {
        let x = unit_sparse(N, K, seed);
        let dir = unit_direction(N, seed + 77);
        let eps: Vec<f64> = (1..=10).map(|i| i as f64 / 100.0).collect();
        let errs: Vec<f64> = eps
            .iter()
            .map(|e| {
                let noisy: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + e * d).collect();
                l2(&reconstruct(&noisy, seed, 2e-3, 1000), &x)
            })
            .collect();
        assert!(spearman(&eps, &errs) >= 0.9, "seed {seed}: {errs:?}");
    }
}

#[test]
fn final_coefficients_shrink() {
    for (i, frame) in [Frame::identity(), Frame::haar(3), Frame::db4(2), Frame::unitary_dft()].into_iter().enumerate() {
        let coeffs = SignalVector::real_1d(&unit_sparse(64, 5, i as u64)).unwrap();
        let x = frame.synthesize(&coeffs).unwrap();
        let params = ReconstructionParams::new(200, 0.01, 0.6, frame).unwrap();
        for seed in 0..5 {
            let p = purify(&x, &params, seed).unwrap();
            assert!(p.final_coefficient_l1 <= coeffs.norm_l1() + 1e-8, "{frame}");
        }
    }
}

#[test]
fn real_preserving_pipeline_has_no_imaginary_residual() {
    let x = SignalVector::real_1d(&unit_sparse(64, 3, 9)).unwrap();
    for frame in [Frame::identity(), Frame::haar(2), Frame::unitary_dft()] {
        let params = ReconstructionParams::new(50, 0.05, 1.0, frame).unwrap();
        assert!(purify(&x, &params, 1).unwrap().imag_residual <= 1e-8, "{frame}");
    }
}

#[test]
fn ista_is_generic_over_precision() {
    let x: Vec<f32> = unit_sparse(64, 3, 4).iter().map(|&v| v as f32).collect();
    let x = SignalVector::<f32>::real_1d(&x).unwrap();
    let op = make_partial_fourier::<f32>(x.shape(), 1.0, 2).unwrap();
    let params = ReconstructionParams::new(1, 0.0f32, 1.0, Frame::haar(2)).unwrap();
    let xr = ista_reconstruct(&op.apply(&x).unwrap(), &op, &params).unwrap();
    assert!(xr.max_abs_diff(&x).unwrap() < 1e-5);
}

#[test]
fn defended_labels_survive_bounded_noise() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let params = ReconstructionParams::new(500, 0.02, 0.5, Frame::identity()).unwrap();
    let mut kept = 0;
    let trials = 1000;
    for t in 0..trials {
        let x = unit_sparse(N, K, 10_000 + t);
        let w = unit_direction(N, 20_000 + t);
        let clf = LinearClassifier::new(w).unwrap();
        let tau = clf.margin(&x).unwrap();
        let clean = clf.predict(&x).unwrap();
        let r = 0.9 * tau * rng.random::<f64>();
        let noisy: Vec<f64> = x.iter().zip(unit_direction(N, 30_000 + t)).map(|(a, d)| a + r * d).collect();
        let label = defend(
            |s: &SignalVector<f64>| clf.predict_signal(s).unwrap(),
            &SignalVector::real_1d(&noisy).unwrap(),
            &params,
            t,
        )
        .unwrap();
        kept += usize::from(label == clean);
    }
    assert!(kept * 100 >= 99 * trials as usize, "{kept}/{trials}");
}

#[test]
fn defended_clean_label_matches_when_lossless() {
    let x = unit_sparse(N, K, 3);
    let clf = LinearClassifier::new(unit_direction(N, 4)).unwrap();
    let params = ReconstructionParams::new(1, 0.0, 1.0, Frame::identity()).unwrap();
    let label = defend(
        |s: &SignalVector<f64>| clf.predict_signal(s).unwrap(),
        &SignalVector::real_1d(&x).unwrap(),
        &params,
        0,
    )
    .unwrap();
    assert_eq!(label, clf.predict(&x).unwrap());
}
