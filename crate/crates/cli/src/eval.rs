//! The `eval` report.
//!
//! For every epsilon in the grid and every sample, the defended pipeline
//! (purify with the sample's own operator, then the linear classifier) is
//! queried at `x + epsilon * d` for the closed-form worst direction of the
//! undefended classifier and `probes` random unit directions. A sample
//! counts as correct under probing when every query returns its label.
//! Sample `i` uses seed `derive_seed(master_seed, i)` for its operator and
//! `derive_seed(that, j + 1)` for probe `j`.

use std::fmt::Write as _;

use rayon::prelude::*;
use rwkit_core::certify::certify_probabilistic;
use rwkit_core::classifier::random_direction;
use rwkit_core::defect::expected_defect;
use rwkit_core::reconstruct::purify_with;
use rwkit_core::seed::derive_seed;
use rwkit_core::sensing::make_partial_fourier;
use rwkit_core::{Cert, DefectEstimate, Label, Shape, Signal};

use crate::config::ExperimentConfig;
use crate::dataset::Dataset;
use crate::error::{numeric, CliResult};

pub const COLUMNS: &str = "epsilon,clean_accuracy,defended_accuracy_under_probe,mean_reconstruction_error,\
mean_defect,defect_failed,cert_radius,cert_probability,cert_gain,cert_vacuous,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub epsilon: f64,
    /// Defended pipeline on unperturbed inputs.
    pub clean_accuracy: f64,
    pub defended_accuracy_under_probe: f64,
    /// Mean of `||purify(x + epsilon d) - x||` along the worst direction `d`.
    pub mean_reconstruction_error: f64,
    /// Expected-defect estimate used by the certificate.
    pub mean_defect: f64,
    pub defect_failed: usize,
    /// `None` when the radius is infeasible for the configured `alpha` and
    /// `tau`.
    pub certificate: Option<Cert>,
    pub seed: u64,
}

struct SampleOutcome {
    clean_ok: bool,
    probe_ok: Vec<bool>,
    errors: Vec<f64>,
}

fn shifted(x: &[f64], d: &[f64], eps: f64) -> CliResult<Signal> {
    let v: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + eps * b).collect();
    Signal::real_1d(&v).map_err(numeric("eval"))
}

/// Expected-defect estimate of the dataset under the configured operators.
pub fn defect_estimate(cfg: &ExperimentConfig, data: &Dataset) -> CliResult<DefectEstimate<f64>> {
    let params = cfg.reconstruction()?;
    let signals: Vec<Signal> = data
        .samples
        .iter()
        .map(|x| Signal::real_1d(x).map_err(numeric("defect")))
        .collect::<CliResult<_>>()?;
    expected_defect(
        &signals,
        &params.frame,
        &cfg.defect_params(),
        params.subsample_prob,
        cfg.defect_operators,
        cfg.master_seed,
    )
    .map_err(numeric("defect"))
}

pub fn evaluate(cfg: &ExperimentConfig, data: &Dataset) -> CliResult<Vec<ReportRow>> {
    let n = data.dim();
    let shape = Shape::D1(n);
    let params = cfg.reconstruction()?;
    let clf = data.classifier()?;

    let outcomes: Vec<SampleOutcome> = (0..data.samples.len())
        .into_par_iter()
        .map(|i| {
            let x = &data.samples[i];
            let label = data.labels[i];
            let seed = derive_seed(cfg.master_seed, i as u64);
            let op = make_partial_fourier(shape, params.subsample_prob, seed).map_err(numeric("eval"))?;
            let defended = |v: &Signal| -> CliResult<(Label, Vec<f64>)> {
                let p = purify_with(v, &op, &params).map_err(numeric("purify"))?;
                let out = p.value.real_part();
                Ok((clf.predict(&out).map_err(numeric("eval"))?, out))
            };
            let worst = clf.adversarial_direction(x).map_err(numeric("eval"))?;
            let zero = vec![0.0; n];
            let clean_ok = defended(&shifted(x, &zero, 0.0)?)?.0 == label;

            let mut probe_ok = Vec::with_capacity(cfg.epsilon_grid.len());
            let mut errors = Vec::with_capacity(cfg.epsilon_grid.len());
            for &eps in &cfg.epsilon_grid {
                let (worst_label, out) = defended(&shifted(x, &worst, eps)?)?;
                let err = out.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                errors.push(err);
                let mut ok = worst_label == label;
                if eps > 0.0 {
                    for j in 0..cfg.probes {
                        if !ok {
                            break;
                        }
                        let d: Vec<f64> = random_direction(n, derive_seed(seed, j as u64 + 1));
                        ok = defended(&shifted(x, &d, eps)?)?.0 == label;
                    }
                }
                probe_ok.push(ok);
            }
            Ok(SampleOutcome {
                clean_ok,
                probe_ok,
                errors,
            })
        })
        .collect::<CliResult<_>>()?;

    let estimate = defect_estimate(cfg, data)?;
    let tau = match cfg.tau {
        Some(t) => t,
        None => data.min_margin()?,
    };

    let count = outcomes.len() as f64;
    let clean = outcomes.iter().filter(|o| o.clean_ok).count() as f64 / count;
    let mut rows = Vec::with_capacity(cfg.epsilon_grid.len());
    for (k, &eps) in cfg.epsilon_grid.iter().enumerate() {
        let defended = outcomes.iter().filter(|o| o.probe_ok[k]).count() as f64 / count;
        let error = outcomes.iter().map(|o| o.errors[k]).sum::<f64>() / count;
        let certificate =
            certify_probabilistic(cfg.rwp_prob, cfg.alpha, cfg.rho, tau, eps, estimate.estimate).ok();
        rows.push(ReportRow {
            epsilon: eps,
            clean_accuracy: clean,
            defended_accuracy_under_probe: defended,
            mean_reconstruction_error: error,
            mean_defect: estimate.estimate,
            defect_failed: estimate.failed,
            certificate,
            seed: cfg.master_seed,
        });
    }
    Ok(rows)
}

/// Report CSV: config header comment, column line, one row per epsilon.
/// Missing certificate fields are written as `NA`.
pub fn to_csv(cfg: &ExperimentConfig, rows: &[ReportRow]) -> String {
    let mut s = format!("{}\n{COLUMNS}\n", cfg.header("report"));
    for r in rows {
        let cert = match &r.certificate {
            Some(c) => format!("{},{},{},{}", c.radius, c.probability, c.gain, c.vacuous),
            None => "NA,NA,NA,NA".to_string(),
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.epsilon,
            r.clean_accuracy,
            r.defended_accuracy_under_probe,
            r.mean_reconstruction_error,
            r.mean_defect,
            r.defect_failed,
            cert,
            r.seed
        );
    }
    s
}
