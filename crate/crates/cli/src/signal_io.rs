//! Signal files.
//!
//! CSV: optional `#` comment lines (the first one may carry `shape=RxC` or
//! `shape=N`), a `index,real,imag` header, then one row per entry in
//! row-major order. Values are written in Rust's shortest round-trip float
//! form, so a write/read cycle is bit exact.
//!
//! Binary (`.rwks`): 16-byte header of ASCII `RWKS`, then little-endian
//! `u32` rank (1 or 2), rows, cols (cols = 1 for rank 1), followed by
//! interleaved little-endian `f64` real/imag pairs in row-major order.

use std::fmt::Write as _;
use std::path::Path;

use rwkit_core::{Complex, Shape, Signal};

use crate::error::{CliError, CliResult};

pub const MAGIC: &[u8; 4] = b"RWKS";

fn shape_token(shape: Shape) -> String {
    match shape {
        Shape::D1(n) => n.to_string(),
        Shape::D2 { rows, cols } => format!("{rows}x{cols}"),
    }
}

fn parse_shape(token: &str) -> Option<Shape> {
    match token.split_once('x') {
        Some((r, c)) => Some(Shape::D2 {
            rows: r.parse().ok()?,
            cols: c.parse().ok()?,
        }),
        None => Some(Shape::D1(token.parse().ok()?)),
    }
}

/// CSV text for `x`; `header` is written first when given.
pub fn to_csv(x: &Signal, header: Option<&str>) -> String {
    let mut s = String::new();
    match header {
        Some(h) => {
            let _ = writeln!(s, "{h} shape={}", shape_token(x.shape()));
        }
        None => {
            let _ = writeln!(s, "# rwkit-signal v1 shape={}", shape_token(x.shape()));
        }
    }
    s.push_str("index,real,imag\n");
    for (i, v) in x.values().iter().enumerate() {
        let _ = writeln!(s, "{i},{},{}", v.re, v.im);
    }
    s
}

pub fn from_csv(text: &str, origin: &Path) -> CliResult<Signal> {
    let mut shape = None;
    let mut values = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(tok) = comment.split_whitespace().find_map(|t| t.strip_prefix("shape=")) {
                shape = Some(parse_shape(tok).ok_or_else(|| CliError::input(origin, format!("bad shape {tok:?}")))?);
            }
            continue;
        }
        if !saw_header {
            if line != "index,real,imag" {
                return Err(CliError::input(origin, format!("line {}: expected `index,real,imag`", lineno + 1)));
            }
            saw_header = true;
            continue;
        }
        let bad = || CliError::input(origin, format!("line {}: expected `index,real,imag` row", lineno + 1));
        let mut fields = line.split(',');
        let (Some(i), Some(re), Some(im), None) = (fields.next(), fields.next(), fields.next(), fields.next()) else {
            return Err(bad());
        };
        let i: usize = i.trim().parse().map_err(|_| bad())?;
        if i != values.len() {
            return Err(CliError::input(origin, format!("line {}: index {i} out of order", lineno + 1)));
        }
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        values.push(Complex::new(re, im));
    }
    let shape = shape.unwrap_or(Shape::D1(values.len()));
    Signal::new(shape, values).map_err(|e| CliError::input(origin, e.to_string()))
}

pub fn to_binary(x: &Signal) -> Vec<u8> {
    let (rank, rows, cols) = match x.shape() {
        Shape::D1(n) => (1u32, n as u32, 1u32),
        Shape::D2 { rows, cols } => (2, rows as u32, cols as u32),
    };
    let mut out = Vec::with_capacity(16 + 16 * x.len());
    out.extend_from_slice(MAGIC);
    for v in [rank, rows, cols] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in x.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn from_binary(bytes: &[u8], origin: &Path) -> CliResult<Signal> {
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(CliError::input(origin, "missing RWKS header"));
    }
    let word = |k: usize| u32::from_le_bytes(bytes[4 * k..4 * k + 4].try_into().unwrap()) as usize;
    let shape = match (word(1), word(2), word(3)) {
        (1, n, 1) => Shape::D1(n),
        (2, rows, cols) => Shape::D2 { rows, cols },
        (rank, _, _) => return Err(CliError::input(origin, format!("unsupported rank {rank}"))),
    };
    let body = &bytes[16..];
    if body.len() != 16 * shape.len() {
        return Err(CliError::input(
            origin,
            format!("expected {} bytes of data for shape {shape}, found {}", 16 * shape.len(), body.len()),
        ));
    }
    let values = body
        .chunks_exact(16)
        .map(|c| {
            Complex::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    Signal::new(shape, values).map_err(|e| CliError::input(origin, e.to_string()))
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "rwks" || e == "bin")
}

/// Reads a signal, choosing the format from the extension (`.rwks`/`.bin`
/// binary, anything else CSV).
pub fn read_signal(path: &Path) -> CliResult<Signal> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    if is_binary(path) {
        from_binary(&bytes, path)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| CliError::input(path, "not UTF-8 text"))?;
        from_csv(&text, path)
    }
}

pub fn write_signal(path: &Path, x: &Signal, header: &str) -> CliResult<()> {
    let bytes = if is_binary(path) {
        to_binary(x)
    } else {
        to_csv(x, Some(header)).into_bytes()
    };
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
