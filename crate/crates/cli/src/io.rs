use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use hx_core::spectral::{Grid, Signal};
use num_complex::Complex64;

const UNIFORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    F64le,
}

/// Reading failed before any data was seen, as opposed to malformed data.
#[derive(Debug)]
pub struct Unreadable(pub anyhow::Error);

impl std::fmt::Display for Unreadable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Unreadable {}

pub fn read_signal(path: &Path, format: Format) -> Result<Signal> {
    let bytes = fs::read(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(|e| anyhow!(Unreadable(e)))?;
    match format {
        Format::Csv => {
            let text = String::from_utf8(bytes)
                .with_context(|| format!("{} is not UTF-8 text", path.display()))?;
            parse_csv(&text)
        }
        Format::F64le => parse_f64le(&bytes),
    }
}

pub fn parse_csv(text: &str) -> Result<Signal> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = line
            .split(',')
            .map(|f| {
                let v: f64 = f.trim().parse().with_context(|| {
                    format!("line {}: `{}` is not a number", lineno + 1, f.trim())
                })?;
                if !v.is_finite() {
                    bail!("line {}: non-finite value", lineno + 1);
                }
                Ok(v)
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != fields.len() {
                bail!(
                    "line {}: expected {} columns, found {}",
                    lineno + 1,
                    first.len(),
                    fields.len()
                );
            }
        }
        rows.push(fields);
    }
    if rows.is_empty() {
        bail!("input contains no samples");
    }
    match rows[0].len() {
        1 => Ok(Signal::real(
            rows.into_iter().map(|r| r[0]).collect(),
            Grid::unit(),
        )?),
        2 => {
            let x: Vec<f64> = rows.iter().map(|r| r[0]).collect();
            let values = rows.iter().map(|r| r[1]).collect();
            if x.len() < 2 {
                bail!("input needs at least 2 samples");
            }
            let dx = x[1] - x[0];
            if dx <= 0.0 {
                bail!("abscissae must increase");
            }
            for (k, w) in x.windows(2).enumerate() {
                if ((w[1] - w[0]) - dx).abs() > UNIFORM_TOL * dx {
                    bail!("abscissae are not uniform at row {}", k + 2);
                }
            }
            Ok(Signal::real(values, Grid::new(x[0], dx)?)?)
        }
        n => bail!("expected 1 or 2 columns, found {n}"),
    }
}

pub fn parse_f64le(bytes: &[u8]) -> Result<Signal> {
    if bytes.is_empty() {
        bail!("input contains no samples");
    }
    if bytes.len() % 8 != 0 {
        bail!("f64le input length {} is not a multiple of 8", bytes.len());
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok(Signal::real(values, Grid::unit())?)
}

pub fn encode_real(values: &[f64], format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut s = String::with_capacity(values.len() * 20);
            for v in values {
                writeln!(s, "{v}").expect("writing to a String");
            }
            s.into_bytes()
        }
        Format::F64le => values.iter().flat_map(|v| v.to_le_bytes()).collect(),
    }
}

pub fn encode_complex(values: &[Complex64], format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut s = String::with_capacity(values.len() * 40);
            for v in values {
                writeln!(s, "{},{}", v.re, v.im).expect("writing to a String");
            }
            s.into_bytes()
        }
        Format::F64le => values
            .iter()
            .flat_map(|v| v.re.to_le_bytes().into_iter().chain(v.im.to_le_bytes()))
            .collect(),
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}
