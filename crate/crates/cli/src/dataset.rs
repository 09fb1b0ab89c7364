//! Synthetic K-sparse classification data.
//!
//! File layout: a `# rwkit-dataset v1 ...` comment line, a
//! `weights,w_0,...,w_{n-1}` line, then one `label,x_0,...,x_{n-1}` line per
//! sample with labels written as `1` or `-1`.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index::sample;
use rand::Rng;
use rwkit_core::classifier::random_direction;
use rwkit_core::seed::{derive_seed, rng_from_seed};
use rwkit_core::{Classifier, Label};

use crate::error::{numeric, CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub weights: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

/// Gives up on a sample after this many draws below the margin floor.
const MAX_RESAMPLES: usize = 10_000;

/// `count` vectors of length `n` with exactly `k` nonzeros each, labelled by
/// a random unit weight vector. Nonzero values are uniform on
/// `[-1, 1] \ {0}`; draws whose margin falls below `margin_floor` are
/// replaced. Weights come from stream 0 of `seed`, sample `i` from stream
/// `i + 1`.
pub fn gen_data(n: usize, count: usize, k: usize, seed: u64, margin_floor: f64) -> CliResult<Dataset> {
    if k == 0 || k > n {
        return Err(CliError::config("sparsity", format!("must lie in [1, {n}], got {k}")));
    }
    let weights: Vec<f64> = random_direction(n, derive_seed(seed, 0));
    let clf = Classifier::new(weights.clone()).map_err(numeric("dataset"))?;
    let mut samples = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = rng_from_seed(derive_seed(seed, i as u64 + 1));
        let mut accepted = None;
        for _ in 0..MAX_RESAMPLES {
            let mut x = vec![0.0; n];
            for pos in sample(&mut rng, n, k) {
                let mut v = 0.0;
                while v == 0.0 {
                    v = rng.random_range(-1.0..=1.0);
                }
                x[pos] = v;
            }
            if clf.margin(&x).map_err(numeric("dataset"))? >= margin_floor {
                accepted = Some(x);
                break;
            }
        }
        let Some(x) = accepted else {
            return Err(CliError::config(
                "margin_floor",
                format!("sample {i} stayed below the floor after {MAX_RESAMPLES} draws"),
            ));
        };
        labels.push(clf.predict(&x).map_err(numeric("dataset"))?);
        samples.push(x);
    }
    Ok(Dataset {
        weights,
        samples,
        labels,
    })
}

fn join(values: &[f64]) -> String {
    let mut s = String::new();
    for v in values {
        let _ = write!(s, ",{v}");
    }
    s
}

impl Dataset {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn classifier(&self) -> CliResult<Classifier> {
        Classifier::new(self.weights.clone()).map_err(numeric("dataset"))
    }

    pub fn to_text(&self, header: &str) -> String {
        let mut s = format!(
            "{header} n={} count={}\nweights{}\n",
            self.dim(),
            self.samples.len(),
            join(&self.weights)
        );
        for (x, label) in self.samples.iter().zip(&self.labels) {
            let _ = writeln!(s, "{}{}", label.as_i8(), join(x));
        }
        s
    }

    pub fn parse(text: &str, origin: &Path) -> CliResult<Self> {
        let mut weights = None;
        let mut samples = Vec::new();
        let mut labels = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| CliError::input(origin, format!("line {}: {what}", lineno + 1));
            let mut fields = line.split(',');
            let head = fields.next().unwrap_or("");
            let values: Vec<f64> = fields
                .map(|f| f.trim().parse().map_err(|_| bad("bad number")))
                .collect::<CliResult<_>>()?;
            if head == "weights" {
                if weights.is_some() {
                    return Err(bad("second weights line"));
                }
                weights = Some(values);
                continue;
            }
            let dim = weights.as_ref().map(Vec::len).ok_or_else(|| bad("sample before weights"))?;
            if values.len() != dim {
                return Err(bad(&format!("expected {dim} values, found {}", values.len())));
            }
            labels.push(match head {
                "1" => Label::Positive,
                "-1" => Label::Negative,
                _ => return Err(bad("label must be 1 or -1")),
            });
            samples.push(values);
        }
        let weights = weights.ok_or_else(|| CliError::input(origin, "no weights line"))?;
        if samples.is_empty() {
            return Err(CliError::input(origin, "no samples"));
        }
        Ok(Self {
            weights,
            samples,
            labels,
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Smallest margin over the samples.
    pub fn min_margin(&self) -> CliResult<f64> {
        let clf = self.classifier()?;
        self.samples
            .iter()
            .map(|x| clf.margin(x).map_err(numeric("dataset")))
            .try_fold(f64::INFINITY, |m, v| Ok(m.min(v?)))
    }
}
