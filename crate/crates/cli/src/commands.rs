//! Subcommand bodies. Each returns the bytes destined for `--out` or stdout.

use std::fmt::Write as _;
use std::path::Path;

use rwkit_core::certify::{
    certify_probabilistic, defect_budget, partial_fourier_rwp, performance_bound, rwp_failure_exponent,
};
use rwkit_core::defect::sparsity_defect;
use rwkit_core::reconstruct::purify;
use rwkit_core::sensing::make_partial_fourier;
use rwkit_core::{Shape, Signal};

use crate::config::ExperimentConfig;
use crate::dataset::{gen_data, Dataset};
use crate::error::{numeric, CliError, CliResult};
use crate::{eval, signal_io};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GenData,
    Purify,
    Defect,
    Certify,
    Eval,
}

pub fn run(command: Command, cfg: &ExperimentConfig, out: Option<&Path>) -> CliResult<Vec<u8>> {
    match command {
        Command::GenData => Ok(generate(cfg)?.to_text(&cfg.header("dataset")).into_bytes()),
        Command::Purify => run_purify(cfg, out),
        Command::Defect => run_defect(cfg).map(String::into_bytes),
        Command::Certify => run_certify(cfg).map(String::into_bytes),
        Command::Eval => {
            let data = dataset(cfg)?;
            Ok(eval::to_csv(cfg, &eval::evaluate(cfg, &data)?).into_bytes())
        }
    }
}

fn generate(cfg: &ExperimentConfig) -> CliResult<Dataset> {
    gen_data(cfg.dim, cfg.count, cfg.sparsity, cfg.master_seed, cfg.margin_floor)
}

/// The configured dataset file, or a freshly generated one.
fn dataset(cfg: &ExperimentConfig) -> CliResult<Dataset> {
    let data = match &cfg.dataset {
        Some(path) => Dataset::load(path)?,
        None => generate(cfg)?,
    };
    let shape = Shape::D1(data.dim());
    let frame = cfg.frame_spec()?;
    shape
        .validate()
        .and_then(|()| frame.check_shape(shape))
        .map_err(|e| CliError::config("dataset", e.to_string()))?;
    Ok(data)
}

fn input(cfg: &ExperimentConfig) -> CliResult<Signal> {
    let path = cfg.input.as_ref().ok_or_else(|| CliError::config("input", "required by this command"))?;
    let x = signal_io::read_signal(path)?;
    cfg.frame_spec()?
        .check_shape(x.shape())
        .map_err(|e| CliError::config("levels", e.to_string()))?;
    Ok(x)
}

fn run_purify(cfg: &ExperimentConfig, out: Option<&Path>) -> CliResult<Vec<u8>> {
    let x = input(cfg)?;
    let p = purify(&x, &cfg.reconstruction()?, cfg.master_seed).map_err(numeric("purify"))?;
    Ok(match out {
        Some(path) if path.extension().is_some_and(|e| e == "rwks" || e == "bin") => signal_io::to_binary(&p.value),
        _ => signal_io::to_csv(&p.value, Some(&cfg.header("signal"))).into_bytes(),
    })
}

fn run_defect(cfg: &ExperimentConfig) -> CliResult<String> {
    let x = input(cfg)?;
    let op = make_partial_fourier(x.shape(), cfg.subsample_prob, cfg.master_seed).map_err(numeric("defect"))?;
    let r = sparsity_defect(&x, &op, &cfg.frame_spec()?, &cfg.defect_params()).map_err(numeric("defect"))?;
    let mut s = format!("{}\n", cfg.header("defect"));
    match r.defect {
        Some(d) => writeln!(s, "defect = {d}"),
        None => writeln!(s, "defect = FAILED"),
    }
    .ok();
    let _ = writeln!(s, "iterations = {}", r.iterations);
    let _ = writeln!(s, "final_l1 = {}", r.final_l1);
    let _ = writeln!(s, "solution_bound = {}", cfg.defect_bound);
    Ok(s)
}

fn run_certify(cfg: &ExperimentConfig) -> CliResult<String> {
    // Both inputs given explicitly: no data needed.
    let data = match (cfg.expected_defect, cfg.tau) {
        (Some(_), Some(_)) => None,
        _ => Some(dataset(cfg)?),
    };
    let expected = match (cfg.expected_defect, &data) {
        (Some(e), _) => e,
        (None, Some(d)) => eval::defect_estimate(cfg, d)?.estimate,
        (None, None) => unreachable!("data is loaded when expected_defect is unset"),
    };
    let tau = match (cfg.tau, &data) {
        (Some(t), _) => t,
        (None, Some(d)) => d.min_margin()?,
        (None, None) => unreachable!("data is loaded when tau is unset"),
    };

    let mut s = format!("{}\n", cfg.header("certificate"));
    let _ = writeln!(s, "alpha = {}", cfg.alpha);
    let _ = writeln!(s, "rho = {}", cfg.rho);
    let _ = writeln!(s, "tau = {tau}");
    let _ = writeln!(s, "rwp_prob = {}", cfg.rwp_prob);
    let _ = writeln!(s, "expected_defect = {expected}");
    for &eps in &cfg.epsilon_grid {
        let _ = writeln!(s, "\n[epsilon = {eps}]");
        match certify_probabilistic(cfg.rwp_prob, cfg.alpha, cfg.rho, tau, eps, expected) {
            Ok(c) => {
                let _ = writeln!(s, "radius = {}", c.radius);
                let _ = writeln!(s, "probability = {}", c.probability);
                let _ = writeln!(s, "gain = {}", c.gain);
                let _ = writeln!(s, "vacuous = {}", c.vacuous);
                let _ = writeln!(s, "improves = {}", c.improves());
                if let Ok(b) = performance_bound(eps, cfg.alpha, cfg.rho, expected) {
                    let _ = writeln!(s, "performance_bound = {b}");
                }
            }
            Err(e) => {
                let _ = writeln!(s, "status = {e}");
            }
        }
        match defect_budget(tau, eps, cfg.alpha, cfg.rho) {
            Ok(b) => writeln!(s, "defect_budget = {b}"),
            Err(_) => writeln!(s, "defect_budget = infeasible"),
        }
        .ok();
    }
    if let (Some(j), Some(delta)) = (cfg.rip_sparsity, cfg.rip_delta) {
        let p = partial_fourier_rwp(j, delta).map_err(numeric("certify"))?;
        let _ = writeln!(s, "\n[partial fourier]");
        let _ = writeln!(s, "rho = {}", p.rho);
        let _ = writeln!(s, "alpha = {}", p.alpha);
        // alpha < 1/3 here, far below the alpha > 2 that a gain needs.
        let _ = writeln!(s, "certifies_gain = false");
        if let Ok(x) = rwp_failure_exponent(cfg.dim.max(2), p.rho, p.alpha) {
            let _ = writeln!(s, "failure_exponent = {x}");
        }
    }
    Ok(s)
}
