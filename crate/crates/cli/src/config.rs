//! Experiment configuration.
//!
//! The file format is flat `key = value` text. Blank lines and anything after
//! `#` are ignored; list values are comma separated. Keys left out take the
//! values of [`ExperimentConfig::default`]. Relative paths are resolved
//! against the directory holding the config file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rwkit_core::{DefectParams, Frame, FrameKind, ReconstructionParams, Shape};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub frame: FrameKind,
    pub levels: usize,
    pub threshold: f64,
    pub iterations: usize,
    pub subsample_prob: f64,

    pub defect_bound: f64,
    pub bregman_lambda: f64,
    pub bregman_tolerance: f64,
    pub bregman_max_iterations: usize,
    /// Operators drawn for the expected-defect estimate.
    pub defect_operators: usize,

    pub alpha: f64,
    pub rho: f64,
    /// Base robustness of the classifier; eval falls back to the smallest
    /// dataset margin when unset.
    pub tau: Option<f64>,
    pub rwp_prob: f64,
    /// Used by `certify` in place of an estimate from a dataset.
    pub expected_defect: Option<f64>,
    /// Optional restricted-isometry inputs `(J, delta)` reported next to a
    /// certificate for comparison.
    pub rip_sparsity: Option<f64>,
    pub rip_delta: Option<f64>,

    pub dim: usize,
    pub count: usize,
    pub sparsity: usize,
    pub margin_floor: f64,

    pub master_seed: u64,
    pub epsilon_grid: Vec<f64>,
    /// Random probe directions per sample and radius in `eval`.
    pub probes: usize,

    pub dataset: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            frame: FrameKind::UnitaryDft,
            levels: 0,
            threshold: 0.11,
            iterations: 49,
            subsample_prob: 0.7494,
            defect_bound: 4.0,
            bregman_lambda: 0.5,
            bregman_tolerance: 1e-6,
            bregman_max_iterations: 10_000,
            defect_operators: 8,
            alpha: 4.0,
            rho: 0.05,
            tau: None,
            rwp_prob: 0.99,
            expected_defect: None,
            rip_sparsity: None,
            rip_delta: None,
            dim: 128,
            count: 50,
            sparsity: 4,
            margin_floor: 1e-3,
            master_seed: 0,
            epsilon_grid: vec![0.0, 0.05, 0.1, 0.2],
            probes: 50,
            dataset: None,
            input: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse()
        .map_err(|e| CliError::config(key, format!("cannot parse {raw:?}: {e}")))
}

fn parse_list(key: &str, raw: &str) -> CliResult<Vec<f64>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

impl ExperimentConfig {
    /// Parses config text. `base` resolves relative paths.
    pub fn parse(text: &str, base: Option<&Path>) -> CliResult<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<String> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got {line:?}"),
                ));
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(CliError::config(key, "given more than once"));
            }
            seen.push(key.to_string());
            cfg.set(key, value, base)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path.parent())
    }

    fn set(&mut self, key: &str, v: &str, base: Option<&Path>) -> CliResult<()> {
        let path = |v: &str| {
            let p = PathBuf::from(v);
            match base {
                Some(b) if p.is_relative() && !b.as_os_str().is_empty() => b.join(p),
                _ => p,
            }
        };
        match key {
            "frame" => self.frame = parse_value(key, v)?,
            "levels" => self.levels = parse_value(key, v)?,
            "threshold" => self.threshold = parse_value(key, v)?,
            "iterations" => self.iterations = parse_value(key, v)?,
            "subsample_prob" => self.subsample_prob = parse_value(key, v)?,
            "defect_bound" => self.defect_bound = parse_value(key, v)?,
            "bregman_lambda" => self.bregman_lambda = parse_value(key, v)?,
            "bregman_tolerance" => self.bregman_tolerance = parse_value(key, v)?,
            "bregman_max_iterations" => self.bregman_max_iterations = parse_value(key, v)?,
            "defect_operators" => self.defect_operators = parse_value(key, v)?,
            "alpha" => self.alpha = parse_value(key, v)?,
            "rho" => self.rho = parse_value(key, v)?,
            "tau" => self.tau = Some(parse_value(key, v)?),
            "rwp_prob" => self.rwp_prob = parse_value(key, v)?,
            "expected_defect" => self.expected_defect = Some(parse_value(key, v)?),
            "rip_sparsity" => self.rip_sparsity = Some(parse_value(key, v)?),
            "rip_delta" => self.rip_delta = Some(parse_value(key, v)?),
            "dim" => self.dim = parse_value(key, v)?,
            "count" => self.count = parse_value(key, v)?,
            "sparsity" => self.sparsity = parse_value(key, v)?,
            "margin_floor" => self.margin_floor = parse_value(key, v)?,
            "master_seed" => self.master_seed = parse_value(key, v)?,
            "epsilon_grid" => self.epsilon_grid = parse_list(key, v)?,
            "probes" => self.probes = parse_value(key, v)?,
            "dataset" => self.dataset = Some(path(v)),
            "input" => self.input = Some(path(v)),
            _ => return Err(CliError::config(key, "unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        fn check(ok: bool, key: &str, reason: &str) -> CliResult<()> {
            if ok {
                Ok(())
            } else {
                Err(CliError::config(key, reason))
            }
        }
        let pos = |v: f64| v.is_finite() && v > 0.0;
        let prob = |v: f64| (0.0..=1.0).contains(&v);
        check(self.iterations >= 1, "iterations", "must be >= 1")?;
        check(self.threshold.is_finite() && self.threshold >= 0.0, "threshold", "must be finite and >= 0")?;
        check(prob(self.subsample_prob), "subsample_prob", "must lie in [0, 1]")?;
        check(pos(self.defect_bound), "defect_bound", "must be finite and > 0")?;
        check(pos(self.bregman_lambda), "bregman_lambda", "must be finite and > 0")?;
        check(pos(self.bregman_tolerance), "bregman_tolerance", "must be finite and > 0")?;
        check(self.bregman_max_iterations >= 1, "bregman_max_iterations", "must be >= 1")?;
        check(self.defect_operators >= 1, "defect_operators", "must be >= 1")?;
        check(pos(self.alpha), "alpha", "must be finite and > 0")?;
        check(pos(self.rho), "rho", "must be finite and > 0")?;
        check(self.tau.is_none_or(pos), "tau", "must be finite and > 0")?;
        check(prob(self.rwp_prob), "rwp_prob", "must lie in [0, 1]")?;
        check(
            self.expected_defect.is_none_or(|e| e.is_finite() && e >= 0.0),
            "expected_defect",
            "must be finite and >= 0",
        )?;
        check(self.rip_sparsity.is_none_or(|j| j.is_finite() && j >= 1.0), "rip_sparsity", "must be >= 1")?;
        check(
            self.rip_delta.is_none_or(|d| (0.0..1.0 / 3.0).contains(&d)),
            "rip_delta",
            "must lie in [0, 1/3)",
        )?;
        check(self.rip_sparsity.is_some() == self.rip_delta.is_some(), "rip_delta", "set together with rip_sparsity")?;
        check(self.dim >= 1, "dim", "must be >= 1")?;
        check(self.count >= 1, "count", "must be >= 1")?;
        check((1..=self.dim).contains(&self.sparsity), "sparsity", "must lie in [1, dim]")?;
        check(self.margin_floor.is_finite() && self.margin_floor >= 0.0, "margin_floor", "must be finite and >= 0")?;
        check(self.probes >= 1, "probes", "must be >= 1")?;
        check(!self.epsilon_grid.is_empty(), "epsilon_grid", "must not be empty")?;
        check(
            self.epsilon_grid.iter().all(|e| e.is_finite() && *e >= 0.0),
            "epsilon_grid",
            "entries must be finite and >= 0",
        )?;
        check(
            self.epsilon_grid.windows(2).all(|w| w[0] < w[1]),
            "epsilon_grid",
            "must be strictly increasing",
        )?;
        let shape = Shape::D1(self.dim);
        shape.validate().map_err(|e| CliError::config("dim", e.to_string()))?;
        self.frame_spec()?
            .check_shape(shape)
            .map_err(|e| CliError::config("levels", e.to_string()))?;
        Ok(())
    }

    pub fn frame_spec(&self) -> CliResult<Frame> {
        let is_wavelet = matches!(self.frame, FrameKind::HaarDwt | FrameKind::Db4Dwt);
        if !is_wavelet && self.levels != 0 {
            return Err(CliError::config("levels", format!("only wavelet frames take levels, frame is {}", self.frame)));
        }
        Ok(Frame::new(self.frame, self.levels))
    }

    pub fn reconstruction(&self) -> CliResult<ReconstructionParams<f64>> {
        ReconstructionParams::new(self.iterations, self.threshold, self.subsample_prob, self.frame_spec()?)
            .map_err(crate::error::numeric("reconstruction parameters"))
    }

    pub fn defect_params(&self) -> DefectParams<f64> {
        DefectParams {
            bregman_lambda: self.bregman_lambda,
            tolerance: self.bregman_tolerance,
            max_iterations: self.bregman_max_iterations,
            ..DefectParams::new(self.defect_bound)
        }
    }

    /// Canonical text form; every key is written, unset optional keys are
    /// left out.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("frame", self.frame.to_string());
        kv("levels", self.levels.to_string());
        kv("threshold", self.threshold.to_string());
        kv("iterations", self.iterations.to_string());
        kv("subsample_prob", self.subsample_prob.to_string());
        kv("defect_bound", self.defect_bound.to_string());
        kv("bregman_lambda", self.bregman_lambda.to_string());
        kv("bregman_tolerance", self.bregman_tolerance.to_string());
        kv("bregman_max_iterations", self.bregman_max_iterations.to_string());
        kv("defect_operators", self.defect_operators.to_string());
        kv("alpha", self.alpha.to_string());
        kv("rho", self.rho.to_string());
        if let Some(t) = self.tau {
            kv("tau", t.to_string());
        }
        kv("rwp_prob", self.rwp_prob.to_string());
        if let Some(e) = self.expected_defect {
            kv("expected_defect", e.to_string());
        }
        if let Some(j) = self.rip_sparsity {
            kv("rip_sparsity", j.to_string());
        }
        if let Some(d) = self.rip_delta {
            kv("rip_delta", d.to_string());
        }
        kv("dim", self.dim.to_string());
        kv("count", self.count.to_string());
        kv("sparsity", self.sparsity.to_string());
        kv("margin_floor", self.margin_floor.to_string());
        kv("master_seed", self.master_seed.to_string());
        let grid: Vec<String> = self.epsilon_grid.iter().map(f64::to_string).collect();
        kv("epsilon_grid", grid.join(", "));
        kv("probes", self.probes.to_string());
        if let Some(p) = &self.dataset {
            kv("dataset", p.display().to_string());
        }
        if let Some(p) = &self.input {
            kv("input", p.display().to_string());
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of [`Self::serialize`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.serialize().as_bytes());
        format!("{digest:x}")[..16].to_string()
    }

    /// Comment line stamped on every output file.
    pub fn header(&self, kind: &str) -> String {
        format!("# rwkit-{kind} v1 config={} seed={}", self.hash(), self.master_seed)
    }
}
