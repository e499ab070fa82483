//! Timing of the inverse stage of both transform forms.
//!
//! Plans, signals and multiplied spectra are prepared before the clock
//! starts; each trial times exactly one inverse transform into a buffer that
//! is reused across trials.

use std::fmt;
use std::hint::black_box;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dft::{dft_inverse_halfband_into, ComplexSequence, DftPlan, HalfbandPlan, Spectrum};
use crate::error::{HxError, Result};
use crate::spectral::{infinity_norm_log10, Branch, Grid, MultiplierSpec, Signal};

pub const CSV_HEADER: &str = "form,power,trials,percent_increase,mean_ms,stddev_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    First,
    Second,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::First => "first",
            Form::Second => "second",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    powers: Vec<f64>,
    trials: usize,
    warmup: usize,
    seed: u64,
}

impl BenchConfig {
    pub fn new(powers: Vec<f64>, trials: usize, warmup: usize, seed: u64) -> Result<Self> {
        if powers.is_empty() {
            return Err(HxError::Domain("at least one power is required".into()));
        }
        if trials < 2 {
            return Err(HxError::Domain(format!(
                "trials must be at least 2, got {trials}"
            )));
        }
        for &p in &powers {
            if !p.is_finite() || p > 40.0 {
                return Err(HxError::Domain(format!("power {p} is out of range")));
            }
            let n = size_for_power(p);
            if n < 16 {
                return Err(HxError::Domain(format!("size 2^{p} = {n} is below 16")));
            }
        }
        Ok(Self {
            powers,
            trials,
            warmup,
            seed,
        })
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn warmup(&self) -> usize {
        self.warmup
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// `round(2^power)`, moved to the nearest even integer when odd so the
/// half-length inverse applies.
pub fn size_for_power(power: f64) -> usize {
    let exact = 2f64.powf(power);
    let n = exact.round() as usize;
    if n % 2 == 0 {
        n
    } else {
        2 * (exact / 2.0).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub form: Form,
    pub power: f64,
    pub size: usize,
    pub trials: usize,
    pub mean_ms: f64,
    pub stddev_ms: f64,
    pub percent_increase: Option<f64>,
    pub resolution_warning: bool,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.form,
            sig6(self.power),
            self.trials,
            self.percent_increase.map(sig6).unwrap_or_default(),
            sig6(self.mean_ms),
            sig6(self.stddev_ms),
        )
    }
}

/// Six significant digits, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..6).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        let s = trim(format!("{x:.decimals$}"));
        // rounding can carry into a new leading digit, e.g. 999999.5
        if s.trim_start_matches('-')
            .replace('.', "")
            .trim_start_matches('0')
            .len()
            <= 6
        {
            return s;
        }
    }
    let s = format!("{x:.5e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    format!("{}e{exp}", trim(mantissa.to_string()))
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Seeded uniform noise on `[-1, 1)` with its mean removed.
pub fn generate_test_signal(n: usize, seed: u64) -> Result<Signal> {
    if n < 16 {
        return Err(HxError::InvalidSize(format!(
            "test signals need n >= 16, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter_mut().for_each(|v| *v -= mean);
    Signal::real(values, Grid::unit())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageTiming {
    pub durations_ms: Vec<f64>,
    pub resolution_warning: bool,
    /// Output of the last timed trial.
    pub output: Vec<Complex64>,
}

/// Smallest observable step of the monotonic clock.
pub fn timer_resolution() -> Duration {
    let mut best = Duration::MAX;
    for _ in 0..16 {
        let start = Instant::now();
        let mut now = Instant::now();
        while now == start {
            now = Instant::now();
        }
        best = best.min(now - start);
    }
    best
}

pub fn time_inverse_stage(
    form: Form,
    n: usize,
    trials: usize,
    warmup: usize,
    seed: u64,
) -> Result<StageTiming> {
    let signal = generate_test_signal(n, seed)?;
    let plan = DftPlan::new(n)?;
    let spectrum = plan.forward(&ComplexSequence::new(signal.samples().to_vec())?)?;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut durations_ms = Vec::with_capacity(trials);

    match form {
        Form::First => {
            let multiplied = MultiplierSpec::first_form().apply(&spectrum);
            for i in 0..warmup + trials {
                let start = Instant::now();
                plan.inverse_into(black_box(&multiplied), &mut out)?;
                let elapsed = start.elapsed();
                black_box(&out);
                if i >= warmup {
                    durations_ms.push(elapsed.as_secs_f64() * 1e3);
                }
            }
        }
        Form::Second => {
            let multiplied = MultiplierSpec::second_form(Branch::Plus).apply(&spectrum);
            let half = HalfbandPlan::new(n)?;
            let mut scratch = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..warmup + trials {
                let start = Instant::now();
                dft_inverse_halfband_into(&half, black_box(&multiplied), &mut out, &mut scratch)?;
                let elapsed = start.elapsed();
                black_box(&out);
                if i >= warmup {
                    durations_ms.push(elapsed.as_secs_f64() * 1e3);
                }
            }
            check_against_full(&plan, &multiplied, &out)?;
        }
    }

    let (mean, _) = stats(&durations_ms)?;
    let resolution_ms = timer_resolution().as_secs_f64() * 1e3;
    Ok(StageTiming {
        durations_ms,
        resolution_warning: resolution_ms > 0.01 * mean,
        output: out,
    })
}

fn check_against_full(plan: &DftPlan, spectrum: &Spectrum, fast: &[Complex64]) -> Result<()> {
    let reference = plan.inverse(spectrum)?;
    let digits = infinity_norm_log10(fast, &reference)?;
    if digits < 12.0 {
        return Err(HxError::InvariantBreach(format!(
            "half-length inverse disagrees with the full inverse: -log10 L∞ = {digits:.2}"
        )));
    }
    Ok(())
}

/// Mean and sample standard deviation.
pub fn stats(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(HxError::InsufficientData(samples.len()));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, var.sqrt()))
}

/// `(baseline / fast - 1) · 100`.
pub fn percent_increase(baseline_mean: f64, fast_mean: f64) -> Result<f64> {
    if !(baseline_mean > 0.0 && fast_mean > 0.0) {
        return Err(HxError::Domain(format!(
            "percent increase needs positive means, got {baseline_mean} and {fast_mean}"
        )));
    }
    Ok((baseline_mean / fast_mean - 1.0) * 100.0)
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::with_capacity(2 * config.powers.len());
    for &power in &config.powers {
        let n = size_for_power(power);
        let first = time_inverse_stage(Form::First, n, config.trials, config.warmup, config.seed)?;
        let second =
            time_inverse_stage(Form::Second, n, config.trials, config.warmup, config.seed)?;
        let (m1, s1) = stats(&first.durations_ms)?;
        let (m2, s2) = stats(&second.durations_ms)?;
        let record = |form, mean_ms, stddev_ms, percent_increase, resolution_warning| BenchRecord {
            form,
            power,
            size: n,
            trials: config.trials,
            mean_ms,
            stddev_ms,
            percent_increase,
            resolution_warning,
        };
        records.push(record(Form::First, m1, s1, None, first.resolution_warning));
        let pct = if m1 > 0.0 && m2 > 0.0 {
            Some(percent_increase(m1, m2)?)
        } else {
            None
        };
        records.push(record(Form::Second, m2, s2, pct, second.resolution_warning));
    }
    Ok(records)
}
