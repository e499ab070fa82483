//! Hilbert transforms of the first and second form as spectral multipliers.
//!
//! The first form is the classical transform, convolution with `-1/(πx)`,
//! which becomes multiplication by `i·sgn(s)` on the spectrum. The second
//! form convolves the derivative with a logarithmic kernel; on the spectrum
//! it is the one-sided weight `-i(sgn(s) ± 1)`, where the sign is the
//! [`Branch`] of the logarithm.
//!
//! DC and Nyquist carry `sgn = 0`. For the second form this puts `∓i` on both
//! bins, which is where the Dirac mass of the Heaviside formulation lands on
//! a discrete grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dft::{
    bin_frequency, dft_inverse_halfband, is_nyquist, ComplexSequence, DftPlan, HalfbandPlan,
    Spectrum,
};
use crate::error::{HxError, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Abscissa metadata of a uniformly sampled signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub origin: f64,
    pub spacing: f64,
}

impl Grid {
    pub fn new(origin: f64, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite() && origin.is_finite()) {
            return Err(HxError::Domain(format!(
                "grid needs a finite origin and positive spacing, got origin {origin}, spacing {spacing}"
            )));
        }
        Ok(Self { origin, spacing })
    }

    /// `n` samples covering `[start, end)`.
    pub fn covering(start: f64, end: f64, n: usize) -> Result<Self> {
        Self::new(start, (end - start) / n as f64)
    }

    pub fn unit() -> Self {
        Self {
            origin: 0.0,
            spacing: 1.0,
        }
    }

    pub fn abscissa(&self, n: usize) -> f64 {
        self.origin + n as f64 * self.spacing
    }
}

/// Uniformly sampled real- or complex-valued data.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    grid: Grid,
    real: bool,
}

impl Signal {
    pub fn real(samples: Vec<f64>, grid: Grid) -> Result<Self> {
        Self::build(
            samples
                .into_iter()
                .map(|v| Complex64::new(v, 0.0))
                .collect(),
            grid,
            true,
        )
    }

    pub fn complex(samples: Vec<Complex64>, grid: Grid) -> Result<Self> {
        let real = samples.iter().all(|v| v.im == 0.0);
        Self::build(samples, grid, real)
    }

    /// Samples `f` at `grid.abscissa(k)` for `k < n`.
    pub fn from_fn(n: usize, grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::real((0..n).map(|k| f(grid.abscissa(k))).collect(), grid)
    }

    fn build(samples: Vec<Complex64>, grid: Grid, real: bool) -> Result<Self> {
        if samples.len() < 2 {
            return Err(HxError::InvalidSize(format!(
                "a signal needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(index) = samples
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(HxError::NonFinite { index });
        }
        Grid::new(grid.origin, grid.spacing)?;
        Ok(Self {
            samples,
            grid,
            real,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn abscissae(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.grid.abscissa(k)).collect()
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v.re).collect()
    }

    pub fn imag_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v.im).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.samples
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v.norm()).collect()
    }

    fn require_real(&self) -> Result<()> {
        if !self.real {
            return Err(HxError::Domain(
                "transform expects a real-valued signal".into(),
            ));
        }
        Ok(())
    }
}

impl AsRef<[Complex64]> for Signal {
    fn as_ref(&self) -> &[Complex64] {
        &self.samples
    }
}

impl AsRef<[Complex64]> for ComplexSequence {
    fn as_ref(&self) -> &[Complex64] {
        self.as_slice()
    }
}

/// Sign choice for the argument of the logarithm at negative arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Keeps positive frequencies; `arg(-1) = +π`.
    Plus,
    /// Keeps negative frequencies; `arg(-1) = -π`.
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// How a finite record is extended before the periodic transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// The record is one period.
    Periodic,
    /// The record is zero-extended to `factor` times its length and the
    /// output cropped back, approximating the transform on the whole line
    /// for compactly supported data.
    ZeroPadded { factor: usize },
}

impl Boundary {
    fn extended_len(self, n: usize) -> Result<usize> {
        match self {
            Boundary::Periodic => Ok(n),
            Boundary::ZeroPadded { factor } if factor >= 1 => Ok(n * factor),
            Boundary::ZeroPadded { .. } => Err(HxError::Domain(
                "zero-padding factor must be at least 1".into(),
            )),
        }
    }
}

fn sgn(s: f64) -> f64 {
    if s > 0.0 {
        1.0
    } else if s < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `i·sgn(s)` with `sgn(0) = 0`.
pub fn sign_multiplier(s: f64) -> Complex64 {
    I * sgn(s)
}

/// `-i(sgn(s) ± 1)`; at `s = 0` this is `∓i`.
pub fn second_form_multiplier(s: f64, branch: Branch) -> Complex64 {
    -I * (sgn(s) + branch.sign())
}

/// Fourier image of `ln(x)`: `-(1/2)(1/|s| ± 1/s)`.
pub fn log_image(s: f64, branch: Branch) -> Result<Complex64> {
    if s == 0.0 {
        return Err(HxError::SingularFrequency);
    }
    Ok(Complex64::new(
        -0.5 * (1.0 / s.abs() + branch.sign() / s),
        0.0,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplierKind {
    FirstForm,
    SecondForm(Branch),
}

/// Per-bin weights of a spectral multiplier with explicit DC and Nyquist
/// values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierSpec {
    pub kind: MultiplierKind,
    pub dc: Complex64,
    pub nyquist: Complex64,
}

impl MultiplierSpec {
    pub fn first_form() -> Self {
        Self {
            kind: MultiplierKind::FirstForm,
            dc: ZERO,
            nyquist: ZERO,
        }
    }

    pub fn second_form(branch: Branch) -> Self {
        let edge = second_form_multiplier(0.0, branch);
        Self {
            kind: MultiplierKind::SecondForm(branch),
            dc: edge,
            nyquist: edge,
        }
    }

    pub fn weight(&self, k: usize, n: usize) -> Complex64 {
        if k == 0 {
            return self.dc;
        }
        if is_nyquist(k, n) {
            return self.nyquist;
        }
        let s = bin_frequency(k, n);
        match self.kind {
            MultiplierKind::FirstForm => sign_multiplier(s),
            MultiplierKind::SecondForm(branch) => second_form_multiplier(s, branch),
        }
    }

    pub fn weights(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| self.weight(k, n)).collect()
    }

    /// Multiplies `spectrum` bin by bin.
    pub fn apply(&self, spectrum: &Spectrum) -> Spectrum {
        let n = spectrum.len();
        let values = spectrum
            .as_slice()
            .iter()
            .enumerate()
            .map(|(k, &v)| v * self.weight(k, n))
            .collect();
        Spectrum::from_vec(values).expect("finite weights keep the spectrum finite")
    }
}

/// Forward-transforms the (possibly extended) samples of `f`.
fn extended_spectrum(f: &Signal, boundary: Boundary) -> Result<(DftPlan, Spectrum)> {
    let len = boundary.extended_len(f.len())?;
    let mut values = f.samples.clone();
    values.resize(len, ZERO);
    let plan = DftPlan::new(len)?;
    let spectrum = plan.forward(&ComplexSequence::new(values)?)?;
    Ok((plan, spectrum))
}

fn crop(values: ComplexSequence, n: usize) -> Vec<Complex64> {
    let mut v = values.into_vec();
    v.truncate(n);
    v
}

fn multiplier_pass(f: &Signal, spec: MultiplierSpec, boundary: Boundary) -> Result<Vec<Complex64>> {
    let (plan, spectrum) = extended_spectrum(f, boundary)?;
    let out = plan.inverse(&spec.apply(&spectrum))?;
    Ok(crop(out, f.len()))
}

/// Classical Hilbert transform on one period.
pub fn hilbert_first(f: &Signal) -> Result<Signal> {
    hilbert_first_with(f, Boundary::Periodic)
}

pub fn hilbert_first_with(f: &Signal, boundary: Boundary) -> Result<Signal> {
    f.require_real()?;
    let out = multiplier_pass(f, MultiplierSpec::first_form(), boundary)?;
    let residue = out.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if residue > 1e-12 * f.max_abs() {
        return Err(HxError::InvariantBreach(format!(
            "first-form output has imaginary residue {residue:e}"
        )));
    }
    Signal::real(out.into_iter().map(|v| v.re).collect(), f.grid)
}

/// Second-form transform: `-i(sgn(s) ± 1)` applied to the spectrum.
pub fn hilbert_second(f: &Signal, branch: Branch) -> Result<Signal> {
    hilbert_second_with(f, branch, Boundary::Periodic)
}

pub fn hilbert_second_with(f: &Signal, branch: Branch, boundary: Boundary) -> Result<Signal> {
    f.require_real()?;
    let out = multiplier_pass(f, MultiplierSpec::second_form(branch), boundary)?;
    Signal::complex(out, f.grid)
}

/// Second-form transform through the log image and the derivative theorem:
/// `F{H₂ f} = (1/π)·F{ln}·(2πis)·F{f}`.
///
/// DC takes the product limit `∓i`. The Nyquist bin is shared by `s = ±1/2`,
/// so it takes the mean of the two one-sided products.
pub fn hilbert_second_via_log_image(f: &Signal, branch: Branch) -> Result<Signal> {
    hilbert_second_via_log_image_with(f, branch, Boundary::Periodic)
}

pub fn hilbert_second_via_log_image_with(
    f: &Signal,
    branch: Branch,
    boundary: Boundary,
) -> Result<Signal> {
    f.require_real()?;
    let (plan, spectrum) = extended_spectrum(f, boundary)?;
    let n = spectrum.len();
    let dx = f.grid.spacing;
    let product = |s_cycles: f64, value: Complex64| -> Result<Complex64> {
        let s = s_cycles / dx;
        let derivative = 2.0 * PI * I * s * value;
        Ok(log_image(s, branch)? * derivative / PI)
    };
    let mut weighted = Vec::with_capacity(n);
    for (k, &v) in spectrum.as_slice().iter().enumerate() {
        let w = if k == 0 {
            -I * branch.sign() * v
        } else if is_nyquist(k, n) {
            0.5 * (product(0.5, v)? + product(-0.5, v)?)
        } else {
            product(bin_frequency(k, n), v)?
        };
        weighted.push(w);
    }
    let out = plan.inverse(&Spectrum::from_vec(weighted)?)?;
    Signal::complex(crop(out, f.len()), f.grid)
}

/// Second-form transform whose inverse stage runs at half length.
///
/// The minus branch keeps the negative frequencies; it is handled by reversing
/// the bin order, which maps the inverse to the index-reversed output.
pub fn hilbert_second_halfband(f: &Signal, branch: Branch) -> Result<Signal> {
    f.require_real()?;
    let n = f.len();
    if n % 2 != 0 {
        return Err(HxError::InvalidSize(format!(
            "half-band pipeline needs an even length, got {n}"
        )));
    }
    let plan = DftPlan::new(n)?;
    let half = HalfbandPlan::new(n)?;
    let spectrum = MultiplierSpec::second_form(branch)
        .apply(&plan.forward(&ComplexSequence::new(f.samples.clone())?)?);
    let out = match branch {
        Branch::Plus => dft_inverse_halfband(&half, &spectrum)?.into_vec(),
        Branch::Minus => {
            let x = spectrum.as_slice();
            let reversed = (0..n).map(|k| x[(n - k) % n]).collect();
            let y = dft_inverse_halfband(&half, &Spectrum::from_vec(reversed)?)?;
            let y = y.as_slice();
            (0..n).map(|j| y[(n - j) % n]).collect()
        }
    };
    Signal::complex(out, f.grid)
}

/// `f - i·H f`, whose spectrum vanishes on negative frequencies.
pub fn analytic_signal(f: &Signal) -> Result<Signal> {
    let h = hilbert_first(f)?;
    let values = f
        .samples
        .iter()
        .zip(&h.samples)
        .map(|(&a, &b)| a - I * b)
        .collect();
    Signal::complex(values, f.grid)
}

/// Least-squares verdict on `H₂ f = -H f + c·i·f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub c_fit: f64,
    pub residual_inf: f64,
    /// Whether `|c_fit|` lies within `1e-3` of 2.
    pub paper_consistent: bool,
    pub branch: Branch,
}

pub fn corollary_equivalence_report(f: &Signal, branch: Branch) -> Result<EquivalenceReport> {
    corollary_equivalence_report_with(f, branch, Boundary::Periodic)
}

pub fn corollary_equivalence_report_with(
    f: &Signal,
    branch: Branch,
    boundary: Boundary,
) -> Result<EquivalenceReport> {
    f.require_real()?;
    let norm = f.norm2();
    if norm < 1e-300 {
        return Err(HxError::DegenerateFit { norm });
    }
    let h2 = hilbert_second_with(f, branch, boundary)?;
    let h1 = hilbert_first_with(f, boundary)?;
    // r = H₂ + H; the real c minimizing ‖r - c·i·f‖₂ is <f, Im r> / <f, f>
    let r: Vec<Complex64> = h2
        .samples
        .iter()
        .zip(&h1.samples)
        .map(|(a, b)| a + b)
        .collect();
    let fr = f.real_parts();
    let c_fit = fr.iter().zip(&r).map(|(x, v)| x * v.im).sum::<f64>() / (norm * norm);
    let residual_inf = r
        .iter()
        .zip(&fr)
        .map(|(v, &x)| (v - I * c_fit * x).norm())
        .fold(0.0, f64::max);
    Ok(EquivalenceReport {
        c_fit,
        residual_inf,
        paper_consistent: (c_fit.abs() - 2.0).abs() <= 1e-3,
        branch,
    })
}

/// `-log10 max|a_n - b_n|`; identical inputs give `f64::INFINITY`.
pub fn infinity_norm_log10(a: impl AsRef<[Complex64]>, b: impl AsRef<[Complex64]>) -> Result<f64> {
    let (a, b) = (a.as_ref(), b.as_ref());
    if a.len() != b.len() {
        return Err(HxError::SizeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let max = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    Ok(if max == 0.0 {
        f64::INFINITY
    } else {
        -max.log10()
    })
}
