//! Discrete Fourier transforms.
//!
//! One convention holds for the whole crate: the forward transform uses the
//! kernel `e^{-2πikn/N}` with no prefactor, the inverse uses `e^{+2πikn/N}`
//! with a `1/N` prefactor. Power-of-two sizes run an iterative radix-2
//! transform; every other size goes through a chirp-z (Bluestein) reduction
//! onto a padded radix-2 convolution.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HxError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A non-empty sequence of finite complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence {
    values: Vec<Complex64>,
}

impl ComplexSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(HxError::InvalidSize("sequence must not be empty".into()));
        }
        if let Some(index) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(HxError::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.values)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn imag_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }
}

/// Frequency-domain coefficients under the `e^{-2πikn/N}` forward kernel.
///
/// Bin `k` sits at frequency `k/N` for `k < N/2` and `(k-N)/N` above the
/// midpoint. For even `N` the bin `N/2` is the Nyquist bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coefficients: ComplexSequence,
}

impl Spectrum {
    pub fn new(coefficients: ComplexSequence) -> Self {
        Self { coefficients }
    }

    pub fn from_vec(values: Vec<Complex64>) -> Result<Self> {
        ComplexSequence::new(values).map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.coefficients.as_slice()
    }

    pub fn coefficients(&self) -> &ComplexSequence {
        &self.coefficients
    }

    pub fn into_sequence(self) -> ComplexSequence {
        self.coefficients
    }

    pub fn frequency(&self, k: usize) -> f64 {
        bin_frequency(k, self.len())
    }
}

/// Frequency of bin `k` in a length-`n` spectrum, in cycles per sample.
/// The Nyquist bin reports `+0.5`.
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    if 2 * k <= n {
        k as f64 / n as f64
    } else {
        (k as f64 - n as f64) / n as f64
    }
}

pub fn is_nyquist(k: usize, n: usize) -> bool {
    n % 2 == 0 && 2 * k == n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Radix2,
    ArbitraryLength,
}

/// A reusable, immutable transform plan for one size.
#[derive(Debug, Clone)]
pub struct DftPlan {
    size: usize,
    kind: PlanKind,
}

#[derive(Debug, Clone)]
enum PlanKind {
    Radix2(Radix2),
    Bluestein(Box<Bluestein>),
}

pub fn plan(n: usize) -> Result<DftPlan> {
    DftPlan::new(n)
}

impl DftPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HxError::InvalidSize(
                "transform size must be at least 1".into(),
            ));
        }
        let kind = if n.is_power_of_two() {
            PlanKind::Radix2(Radix2::new(n))
        } else {
            PlanKind::Bluestein(Box::new(Bluestein::new(n)))
        };
        Ok(Self { size: n, kind })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn strategy(&self) -> Strategy {
        match self.kind {
            PlanKind::Radix2(_) => Strategy::Radix2,
            PlanKind::Bluestein(_) => Strategy::ArbitraryLength,
        }
    }

    /// Unnormalized transform in place: `Σ x_n e^{∓2πikn/N}`.
    pub fn process(&self, buf: &mut [Complex64], direction: Direction) -> Result<()> {
        self.check_len(buf.len())?;
        match (&self.kind, direction) {
            (PlanKind::Radix2(r), Direction::Forward) => r.process::<false>(buf),
            (PlanKind::Radix2(r), Direction::Inverse) => r.process::<true>(buf),
            (PlanKind::Bluestein(b), Direction::Forward) => b.forward(buf),
            (PlanKind::Bluestein(b), Direction::Inverse) => {
                buf.iter_mut().for_each(|v| *v = v.conj());
                b.forward(buf);
                buf.iter_mut().for_each(|v| *v = v.conj());
            }
        }
        Ok(())
    }

    pub fn forward(&self, x: &ComplexSequence) -> Result<Spectrum> {
        let mut buf = x.as_slice().to_vec();
        self.process(&mut buf, Direction::Forward)?;
        Ok(Spectrum::new(ComplexSequence { values: buf }))
    }

    pub fn inverse(&self, spectrum: &Spectrum) -> Result<ComplexSequence> {
        let mut buf = spectrum.as_slice().to_vec();
        self.process(&mut buf, Direction::Inverse)?;
        let scale = 1.0 / self.size as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        Ok(ComplexSequence { values: buf })
    }

    /// Normalized inverse written into `out`, no allocation on radix-2 sizes.
    pub fn inverse_into(&self, spectrum: &Spectrum, out: &mut [Complex64]) -> Result<()> {
        self.check_len(spectrum.len())?;
        self.check_len(out.len())?;
        match &self.kind {
            PlanKind::Radix2(r) => {
                let x = spectrum.as_slice();
                for (o, &j) in out.iter_mut().zip(&r.bitrev) {
                    *o = x[j as usize];
                }
                r.butterflies::<true>(out);
            }
            PlanKind::Bluestein(_) => {
                out.copy_from_slice(spectrum.as_slice());
                self.process(out, Direction::Inverse)?;
            }
        }
        let scale = 1.0 / self.size as f64;
        out.iter_mut().for_each(|v| *v *= scale);
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size {
            return Err(HxError::SizeMismatch {
                expected: self.size,
                actual: len,
            });
        }
        Ok(())
    }
}

pub fn dft_forward(plan: &DftPlan, x: &ComplexSequence) -> Result<Spectrum> {
    plan.forward(x)
}

pub fn dft_inverse(plan: &DftPlan, spectrum: &Spectrum) -> Result<ComplexSequence> {
    plan.inverse(spectrum)
}

/// Direct O(N²) evaluation of the defining sums, same normalization as the
/// fast path. Used as the oracle for the planned transforms.
pub fn dft_direct_reference(x: &ComplexSequence, direction: Direction) -> ComplexSequence {
    let n = x.len();
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let scale = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => 1.0 / n as f64,
    };
    let input = x.as_slice();
    let values = (0..n)
        .map(|k| {
            let acc: Complex64 = input
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    // reduce k*j mod n in integers so the angle stays exact
                    let phase = ((k as u128 * j as u128) % n as u128) as f64;
                    v * Complex64::from_polar(1.0, sign * 2.0 * PI * phase / n as f64)
                })
                .sum();
            acc * scale
        })
        .collect();
    ComplexSequence { values }
}

/// Inverse transform for spectra whose upper half `N/2 < k < N` is zero,
/// computed with two transforms of length `N/2`.
#[derive(Debug, Clone)]
pub struct HalfbandPlan {
    full_size: usize,
    half: DftPlan,
    // e^{+2πik/N}, k < N/2
    twiddles: Vec<Complex64>,
    // the same factors permuted into the half plan's bit-reversed gather order
    gather_twiddles: Vec<Complex64>,
}

impl HalfbandPlan {
    pub fn new(full_size: usize) -> Result<Self> {
        if full_size < 2 || full_size % 2 != 0 {
            return Err(HxError::InvalidSize(format!(
                "half-band inverse needs an even length of at least 2, got {full_size}"
            )));
        }
        let half_size = full_size / 2;
        let twiddles: Vec<Complex64> = (0..half_size)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / full_size as f64))
            .collect();
        let half = DftPlan::new(half_size)?;
        let gather_twiddles = match &half.kind {
            PlanKind::Radix2(r) => r.bitrev.iter().map(|&j| twiddles[j as usize]).collect(),
            PlanKind::Bluestein(_) => Vec::new(),
        };
        Ok(Self {
            full_size,
            half,
            twiddles,
            gather_twiddles,
        })
    }

    pub fn full_size(&self) -> usize {
        self.full_size
    }

    pub fn half(&self) -> &DftPlan {
        &self.half
    }
}

/// Exact length-N inverse of a one-sided spectrum.
///
/// Even outputs come from the half-length inverse of the lower half with the
/// Nyquist bin folded onto DC; odd outputs from the half-length inverse of
/// the lower half twiddled by `e^{2πik/N}`, with the Nyquist bin entering
/// DC with a negative sign.
pub fn dft_inverse_halfband(plan: &HalfbandPlan, spectrum: &Spectrum) -> Result<ComplexSequence> {
    let n = plan.full_size;
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    dft_inverse_halfband_into(plan, spectrum, &mut values, &mut scratch)?;
    Ok(ComplexSequence { values })
}

/// [`dft_inverse_halfband`] with caller-provided output and scratch, both of
/// the full length.
pub fn dft_inverse_halfband_into(
    plan: &HalfbandPlan,
    spectrum: &Spectrum,
    out: &mut [Complex64],
    scratch: &mut [Complex64],
) -> Result<()> {
    let n = plan.full_size;
    for len in [spectrum.len(), out.len(), scratch.len()] {
        if len != n {
            return Err(HxError::SizeMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    let m = n / 2;
    let x = spectrum.as_slice();
    let (even, odd) = scratch.split_at_mut(m);

    // magnitudes compared squared; the norm is only taken on failure
    let mut lower_max = x[m].norm_sqr();
    match &plan.half.kind {
        PlanKind::Radix2(r) => {
            // gather straight into bit-reversed order for the half-length stages
            for (((e, o), &j), &w) in even
                .iter_mut()
                .zip(odd.iter_mut())
                .zip(&r.bitrev)
                .zip(&plan.gather_twiddles)
            {
                let v = x[j as usize];
                lower_max = lower_max.max(v.norm_sqr());
                *e = v;
                *o = v * w;
            }
            // bit reversal fixes index 0
            even[0] = x[0] + x[m];
            odd[0] = x[0] - x[m];
        }
        PlanKind::Bluestein(_) => {
            lower_max = x[..m]
                .iter()
                .map(|v| v.norm_sqr())
                .fold(lower_max, f64::max);
            even[0] = x[0] + x[m];
            odd[0] = x[0] - x[m];
            for k in 1..m {
                even[k] = x[k];
                odd[k] = x[k] * plan.twiddles[k];
            }
        }
    }
    let (upper_bin, upper_max) = x[m + 1..]
        .iter()
        .enumerate()
        .map(|(i, v)| (m + 1 + i, v.norm_sqr()))
        .fold(
            (0, 0.0f64),
            |acc, cur| if cur.1 > acc.1 { cur } else { acc },
        );
    if upper_max > 1e-24 * lower_max.max(upper_max) {
        return Err(HxError::NotOneSided {
            bin: upper_bin,
            magnitude: upper_max.sqrt(),
        });
    }

    match &plan.half.kind {
        PlanKind::Radix2(r) => {
            r.butterflies::<true>(even);
            r.butterflies::<true>(odd);
        }
        PlanKind::Bluestein(_) => {
            plan.half.process(even, Direction::Inverse)?;
            plan.half.process(odd, Direction::Inverse)?;
        }
    }

    let scale = 1.0 / n as f64;
    for (pair, (&e, &o)) in out.chunks_exact_mut(2).zip(even.iter().zip(odd.iter())) {
        pair[0] = e * scale;
        pair[1] = o * scale;
    }
    Ok(())
}

/// `max|a - b| / max|b|`, or the absolute error when `b` is identically zero.
pub fn max_relative_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max);
    let scale = max_abs(b);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

pub(crate) fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0f64, f64::max)
}

#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    // stage with half-width h stores e^{-iπj/h}, j < h, at offset h - 1
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let bits = n.trailing_zeros();
        let bitrev = (0..n as u32)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (32 - bits)
                }
            })
            .collect();
        let mut twiddles = Vec::with_capacity(n.saturating_sub(1));
        let mut h = 1;
        while h < n {
            twiddles.extend((0..h).map(|j| Complex64::from_polar(1.0, -PI * j as f64 / h as f64)));
            h *= 2;
        }
        Self {
            n,
            twiddles,
            bitrev,
        }
    }

    fn process<const INVERSE: bool>(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        for (i, &j) in self.bitrev.iter().enumerate() {
            let j = j as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        self.butterflies::<INVERSE>(buf);
    }

    /// Butterfly stages on input already in bit-reversed order.
    fn butterflies<const INVERSE: bool>(&self, buf: &mut [Complex64]) {
        if self.n >= 2 {
            for pair in buf.chunks_exact_mut(2) {
                let (a, b) = (pair[0], pair[1]);
                pair[0] = a + b;
                pair[1] = a - b;
            }
        }
        let mut h = 2;
        while h < self.n {
            let tw = &self.twiddles[h - 1..2 * h - 1];
            for chunk in buf.chunks_exact_mut(2 * h) {
                let (lo, hi) = chunk.split_at_mut(h);
                for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                    let w = if INVERSE { w.conj() } else { *w };
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            h *= 2;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    n: usize,
    // e^{-iπk²/n}
    chirp: Vec<Complex64>,
    inner: Radix2,
    // forward transform of the conjugate chirp, wrapped to the padded length
    kernel: Vec<Complex64>,
}

impl Bluestein {
    fn new(n: usize) -> Self {
        let m = (2 * n - 1).next_power_of_two();
        let two_n = 2 * n as u128;
        let chirp: Vec<Complex64> = (0..n)
            .map(|k| {
                let k = k as u128;
                let phase = ((k * k) % two_n) as f64;
                Complex64::from_polar(1.0, -PI * phase / n as f64)
            })
            .collect();
        let inner = Radix2::new(m);
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for k in 1..n {
            kernel[k] = chirp[k].conj();
            kernel[m - k] = chirp[k].conj();
        }
        inner.process::<false>(&mut kernel);
        let scale = 1.0 / m as f64;
        kernel.iter_mut().for_each(|v| *v *= scale);
        Self {
            n,
            chirp,
            inner,
            kernel,
        }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let m = self.kernel.len();
        let mut work = vec![Complex64::new(0.0, 0.0); m];
        for ((w, &x), &c) in work.iter_mut().zip(buf.iter()).zip(&self.chirp) {
            *w = x * c;
        }
        self.inner.process::<false>(&mut work);
        for (w, &k) in work.iter_mut().zip(&self.kernel) {
            *w *= k;
        }
        self.inner.process::<true>(&mut work);
        for ((out, &w), &c) in buf.iter_mut().zip(&work[..self.n]).zip(&self.chirp) {
            *out = w * c;
        }
    }
}
