//! Self-check suites: each check records a measured value against a
//! threshold, and a suite passes only if all of its checks do.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::{generate_test_signal, sig6};
use crate::contour::{
    compare_lemma, log_kernel_line_integral, log_kernel_line_integral_with, winding,
    AnalyticTestFunction, JordanCurve, LogConvention,
};
use crate::dft::{dft_direct_reference, max_relative_error, ComplexSequence, DftPlan, Direction};
use crate::error::{HxError, Result};
use crate::quadrature::{
    all_nodes, centered_derivative, hilbert_first_pv_quadrature, hilbert_second_quadrature,
    log_kernel_convolution, pv_symmetric_demo, stieltjes_residual, GridFunction,
};
use crate::special::dawson;
use crate::spectral::{
    corollary_equivalence_report, hilbert_first, hilbert_first_with, hilbert_second,
    hilbert_second_halfband, hilbert_second_via_log_image, hilbert_second_with,
    infinity_norm_log10, Boundary, Branch, Grid, Signal,
};

/// Padding used whenever a spectral result is compared with a whole-line
/// closed form or quadrature.
pub const WHOLE_LINE: Boundary = Boundary::ZeroPadded { factor: 8 };
pub const GAUSSIAN_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub metric: String,
    pub measured: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub passed: bool,
    pub finding: Option<String>,
}

impl Check {
    fn new(
        name: &str,
        metric: &str,
        measured: f64,
        comparison: Comparison,
        threshold: f64,
    ) -> Self {
        let passed = match comparison {
            Comparison::AtMost => measured <= threshold,
            Comparison::AtLeast => measured >= threshold,
        };
        Self {
            name: name.into(),
            metric: metric.into(),
            measured,
            threshold,
            comparison,
            passed,
            finding: None,
        }
    }

    fn with_finding(mut self, finding: String) -> Self {
        self.finding = Some(finding);
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.comparison {
            Comparison::AtMost => "≤",
            Comparison::AtLeast => "≥",
        };
        write!(
            f,
            "{}: {} {op} {} (measured {:.3e}) {}",
            self.name,
            self.metric,
            sig6(self.threshold),
            self.measured,
            if self.passed { "PASS" } else { "FAIL" }
        )?;
        if let Some(finding) = &self.finding {
            write!(f, "\n{}: {finding}", self.name)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyOutcome {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self {
            suite: suite.into(),
            checks,
            passed,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.suite)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(
            f,
            "{}: {}",
            self.suite,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    Quadrature,
    Contour,
    All,
}

impl std::str::FromStr for Suite {
    type Err = HxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Suite::Core),
            "quadrature" => Ok(Suite::Quadrature),
            "contour" => Ok(Suite::Contour),
            "all" => Ok(Suite::All),
            other => Err(HxError::Domain(format!("unknown suite `{other}`"))),
        }
    }
}

/// Loosens every threshold by `scale`: bounds are multiplied by it and digit
/// counts reduced by its base-10 logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    scale: f64,
}

impl Tolerance {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(HxError::Domain(format!(
                "tolerance scale must be positive, got {scale}"
            )));
        }
        Ok(Self { scale })
    }

    fn at_most(&self, name: &str, metric: &str, measured: f64, bound: f64) -> Check {
        Check::new(
            name,
            metric,
            measured,
            Comparison::AtMost,
            bound * self.scale,
        )
    }

    fn digits(&self, name: &str, measured: f64, digits: f64) -> Check {
        Check::new(
            name,
            "-log10 L∞",
            measured,
            Comparison::AtLeast,
            digits - self.scale.log10(),
        )
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { scale: 1.0 }
    }
}

pub fn run(suite: Suite, tol: Tolerance) -> Result<Vec<VerifyOutcome>> {
    Ok(match suite {
        Suite::Core => vec![core_suite(tol)?],
        Suite::Quadrature => vec![quadrature_suite(tol)?],
        Suite::Contour => vec![contour_suite(tol)?],
        Suite::All => vec![
            core_suite(tol)?,
            quadrature_suite(tol)?,
            contour_suite(tol)?,
        ],
    })
}

/// `exp(-x²)` on `[-8, 8)`.
pub fn gaussian_signal(n: usize) -> Result<Signal> {
    Signal::from_fn(n, Grid::covering(-8.0, 8.0, n)?, |x| (-x * x).exp())
}

/// `-(2/√π)·D(x)`, the transform of `exp(-x²)`.
pub fn gaussian_transform(x: f64) -> f64 {
    -2.0 / PI.sqrt() * dawson(x)
}

fn random_complex(n: usize, seed: u64) -> Result<ComplexSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexSequence::new(
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m, v| m.max(v.abs()))
}

fn relative_inf(a: &[f64], b: &[f64]) -> f64 {
    let diff = max_abs(a.iter().zip(b).map(|(x, y)| x - y));
    diff / max_abs(b.iter().copied())
}

pub fn dft_oracle_error() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 1..=64 {
        let x = random_complex(n, n as u64)?;
        let plan = DftPlan::new(n)?;
        let fwd = plan.forward(&x)?;
        let reference = dft_direct_reference(&x, Direction::Forward);
        worst = worst.max(max_relative_error(fwd.as_slice(), reference.as_slice()));
        let inv = plan.inverse(&fwd)?;
        let reference = dft_direct_reference(fwd.coefficients(), Direction::Inverse);
        worst = worst.max(max_relative_error(inv.as_slice(), reference.as_slice()));
    }
    Ok(worst)
}

pub fn dft_roundtrip_error(n: usize) -> Result<f64> {
    let x = random_complex(n, 7)?;
    let plan = DftPlan::new(n)?;
    let back = plan.inverse(&plan.forward(&x)?)?;
    Ok(max_relative_error(back.as_slice(), x.as_slice()))
}

pub fn cosine_first_form_error(n: usize) -> Result<f64> {
    let w = 2.0 * PI * 5.0 / n as f64;
    let f = Signal::from_fn(n, Grid::unit(), |x| (w * x).cos())?;
    let h = hilbert_first(&f)?.real_parts();
    let expected: Vec<f64> = (0..n).map(|k| -(w * k as f64).sin()).collect();
    Ok(max_abs(h.iter().zip(&expected).map(|(a, b)| a - b)))
}

pub fn gaussian_first_form_error(n: usize) -> Result<f64> {
    let f = gaussian_signal(n)?;
    let h = hilbert_first_with(&f, WHOLE_LINE)?.real_parts();
    let exact: Vec<f64> = f.abscissae().into_iter().map(gaussian_transform).collect();
    Ok(relative_inf(&h, &exact))
}

/// Digits of agreement for `Re H₂⁺f = -Hf` and `Im H₂⁺f = -f`.
pub fn second_form_identity_digits(f: &Signal) -> Result<(f64, f64)> {
    let h2 = hilbert_second(f, Branch::Plus)?;
    let h1 = hilbert_first(f)?;
    let zero = vec![Complex64::new(0.0, 0.0); f.len()];
    let re: Vec<Complex64> = h2
        .samples()
        .iter()
        .zip(h1.samples())
        .map(|(a, b)| Complex64::new(a.re + b.re, 0.0))
        .collect();
    let im: Vec<Complex64> = h2
        .samples()
        .iter()
        .zip(f.samples())
        .map(|(a, b)| Complex64::new(a.im + b.re, 0.0))
        .collect();
    Ok((
        infinity_norm_log10(&re, &zero)?,
        infinity_norm_log10(&im, &zero)?,
    ))
}

pub fn route_equivalence_error(f: &Signal) -> Result<f64> {
    let a = hilbert_second(f, Branch::Plus)?;
    let b = hilbert_second_via_log_image(f, Branch::Plus)?;
    Ok(max_relative_error(b.samples(), a.samples()))
}

pub fn halfband_digits(n: usize, seed: u64) -> Result<f64> {
    let f = generate_test_signal(n, seed)?;
    let fast = hilbert_second_halfband(&f, Branch::Plus)?;
    let full = hilbert_second(&f, Branch::Plus)?;
    infinity_norm_log10(fast.samples(), full.samples())
}

fn core_suite(tol: Tolerance) -> Result<VerifyOutcome> {
    let mut checks = vec![
        tol.at_most("dft_oracle", "max rel err N≤64", dft_oracle_error()?, 1e-10),
        tol.at_most(
            "dft_roundtrip_1024",
            "max rel err",
            dft_roundtrip_error(1024)?,
            1e-12,
        ),
        tol.at_most(
            "dft_roundtrip_5793",
            "max rel err",
            dft_roundtrip_error(5793)?,
            1e-12,
        ),
        tol.at_most(
            "first_cos",
            "L∞ vs -sin",
            cosine_first_form_error(256)?,
            1e-12,
        ),
        tol.at_most(
            "first_gaussian",
            "rel L∞ vs -(2/√π)D",
            gaussian_first_form_error(GAUSSIAN_SIZE)?,
            5e-3,
        ),
    ];
    let (mut re, mut im, mut route) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for (n, seed) in [(64, 42), (1024, 43)] {
        let f = generate_test_signal(n, seed)?;
        let (r, i) = second_form_identity_digits(&f)?;
        re = re.min(r);
        im = im.min(i);
        route = route.max(route_equivalence_error(&f)?);
    }
    checks.push(tol.digits("re_identity", re, 12.0));
    checks.push(tol.digits("im_identity", im, 12.0));
    checks.push(tol.at_most("route_a_vs_b", "max rel err", route, 1e-10));
    for p in [10, 16] {
        checks.push(tol.digits(
            &format!("halfband_2^{p}"),
            halfband_digits(1 << p, 5)?,
            12.0,
        ));
    }

    let g = gaussian_signal(GAUSSIAN_SIZE)?;
    let plus = corollary_equivalence_report(&g, Branch::Plus)?;
    let minus = corollary_equivalence_report(&g, Branch::Minus)?;
    let matched = |r: &crate::spectral::EquivalenceReport| {
        if r.paper_consistent {
            "matched"
        } else {
            "NOT matched"
        }
    };
    let finding = format!(
        "c_fit={:.3}, paper ±2 {} (minus branch c_fit={:.3}, paper ±2 {}; residual {:.1e})",
        plus.c_fit,
        matched(&plus),
        minus.c_fit,
        matched(&minus),
        plus.residual_inf.max(minus.residual_inf)
    );
    checks.push(
        tol.at_most(
            "corollary_2_4",
            "|c_fit + 1|",
            (plus.c_fit + 1.0).abs().max((minus.c_fit - 1.0).abs()),
            1e-3,
        )
        .with_finding(finding),
    );
    Ok(VerifyOutcome::new("core", checks))
}

/// Spectral and quadrature second forms of the Gaussian: relative L∞ error of
/// the real and imaginary parts.
pub fn second_form_quadrature_errors(n: usize) -> Result<(f64, f64)> {
    let f = gaussian_signal(n)?;
    let spectral = hilbert_second_with(&f, Branch::Plus, WHOLE_LINE)?;
    let quad =
        hilbert_second_quadrature(&GridFunction::from_signal(&f)?, Branch::Plus, &all_nodes(n))?;
    let re = relative_inf(&quad.real_values(), &spectral.real_parts());
    let im = relative_inf(&quad.imag_values(), &spectral.imag_parts());
    Ok((re, im))
}

pub fn pv_quadrature_error(n: usize) -> Result<f64> {
    let f = gaussian_signal(n)?;
    let g = GridFunction::from_signal(&f)?;
    let h = hilbert_first_pv_quadrature(&g, &all_nodes(n))?;
    let exact: Vec<f64> = g.nodes().iter().map(|&x| gaussian_transform(x)).collect();
    Ok(relative_inf(&h.real_values(), &exact))
}

/// Derivative of the log-kernel convolution against the convolution of the
/// derivative, on the Gaussian.
pub fn derivative_of_convolution_error(n: usize) -> Result<f64> {
    let f = GridFunction::from_signal(&gaussian_signal(n)?)?;
    let h = f.spacing().expect("uniform grid");
    let nodes = all_nodes(n);
    let conv = log_kernel_convolution(&f, Branch::Plus, &nodes)?;
    let lhs = centered_derivative(conv.values(), h);
    let df = GridFunction::new(f.nodes().to_vec(), centered_derivative(f.values(), h))?;
    let rhs = log_kernel_convolution(&df, Branch::Plus, &nodes)?;
    let norm = max_abs(rhs.values().iter().map(|v| v.norm()));
    let diff = max_abs(lhs.iter().zip(rhs.values()).map(|(a, b)| (a - b).norm()));
    Ok(diff / norm)
}

pub fn stieltjes_pairs(n: usize) -> Result<Vec<(&'static str, f64)>> {
    let linear = GridFunction::linspace(0.0, 1.0, n, |x| x)?;
    let square = GridFunction::linspace(0.0, 1.0, n, |x| x * x)?;
    let sine = GridFunction::linspace(0.0, 1.0, n, f64::sin)?;
    let log = GridFunction::linspace(0.0, 1.0, n, |x| (x + 2.0).ln())?;
    Ok(vec![
        ("x, x²", stieltjes_residual(&linear, &square, 0.0, 1.0)?),
        ("sin x, ln(x+2)", stieltjes_residual(&sine, &log, 0.0, 1.0)?),
    ])
}

/// Largest deviation of `pv_symmetric_demo` from 0 (symmetric) and
/// `ln(b/|a|)` (asymmetric) over a few intervals.
pub fn pv_demo_error() -> Result<f64> {
    let mut worst = 0.0f64;
    for (a, b) in [
        (-1.0f64, 1.0f64),
        (-2.5, 2.5),
        (-1.0, 2.0),
        (-3.0, 0.5),
        (-0.2, 7.0),
    ] {
        let expected = if a + b == 0.0 { 0.0 } else { (b / -a).ln() };
        for eps in [1e-3, 1e-6] {
            worst = worst.max((pv_symmetric_demo(a, b, eps)? - expected).abs());
        }
    }
    Ok(worst)
}

fn quadrature_suite(tol: Tolerance) -> Result<VerifyOutcome> {
    let (re, im) = second_form_quadrature_errors(GAUSSIAN_SIZE)?;
    let mut checks = vec![
        tol.at_most("pv_demo", "max abs err", pv_demo_error()?, 1e-12),
        tol.at_most(
            "pv_quadrature_gaussian",
            "rel L∞ vs -(2/√π)D",
            pv_quadrature_error(GAUSSIAN_SIZE)?,
            5e-3,
        ),
        tol.at_most("second_form_quadrature_re", "rel L∞ vs spectral", re, 5e-3),
        tol.at_most("second_form_quadrature_im", "rel L∞ vs spectral", im, 5e-3),
        tol.at_most(
            "derivative_of_convolution",
            "rel L∞",
            derivative_of_convolution_error(GAUSSIAN_SIZE)?,
            5e-3,
        ),
    ];
    for (pair, residual) in stieltjes_pairs(2000)? {
        checks.push(tol.at_most(&format!("stieltjes[{pair}]"), "residual", residual, 1e-5));
    }
    Ok(VerifyOutcome::new("quadrature", checks))
}

pub fn lemma_test_function() -> AnalyticTestFunction {
    AnalyticTestFunction::polynomial_real(&[1.0, -2.0, 0.0, 1.0])
}

pub fn lemma_test_point() -> Complex64 {
    Complex64::new(0.3, 0.2)
}

pub fn lemma_circle(nodes: usize) -> Result<JordanCurve> {
    JordanCurve::circle(Complex64::new(0.0, 0.0), 2.0, 0.0, nodes)
}

pub fn lemma_rectangle(nodes: usize) -> Result<JordanCurve> {
    JordanCurve::rectangle(
        Complex64::new(-2.0, -2.0),
        Complex64::new(2.0, 2.0),
        0.0,
        nodes,
    )
}

/// Measurements behind the contour checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourFindings {
    pub cauchy_error: f64,
    pub refinement_change: f64,
    pub shape_difference: f64,
    pub oracle: Complex64,
    pub direct: Complex64,
    pub start_corrected: Complex64,
    pub convention_difference: f64,
}

pub fn contour_findings() -> Result<ContourFindings> {
    let f = lemma_test_function();
    let z = lemma_test_point();
    let circle = lemma_circle(4096)?;
    let rect = lemma_rectangle(4096)?;

    let mut cauchy_error = 0.0f64;
    for curve in [&circle, &rect] {
        cauchy_error = cauchy_error.max(compare_lemma(&f, curve, z)?.cauchy_error());
    }
    let exp = AnalyticTestFunction::Exponential {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.5, -1.0),
    };
    cauchy_error = cauchy_error.max(compare_lemma(&exp, &circle, z)?.cauchy_error());

    let coarse = log_kernel_line_integral(&f, &circle, z)?.value;
    let fine = log_kernel_line_integral(&f, &circle.with_nodes(8192)?, z)?.value;
    let boxed = log_kernel_line_integral(&f, &rect, z)?.value;
    let oracle = compare_lemma(&f, &circle.with_nodes(1 << 16)?, z)?;
    let swapped = log_kernel_line_integral_with(
        &f,
        &circle.with_nodes(1 << 16)?,
        z,
        LogConvention::NodeMinusPoint,
    )?;
    Ok(ContourFindings {
        cauchy_error,
        refinement_change: (fine - coarse).norm(),
        shape_difference: (boxed - coarse).norm(),
        oracle: oracle.log_kernel,
        direct: oracle.direct,
        start_corrected: oracle.start_corrected,
        convention_difference: (swapped.value - oracle.log_kernel).norm(),
    })
}

fn show(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn contour_suite(tol: Tolerance) -> Result<VerifyOutcome> {
    let c = contour_findings()?;
    let circle = lemma_circle(1024)?;
    let inside = winding(&circle, lemma_test_point())?;
    let outside = winding(&circle, Complex64::new(5.0, 0.0))?;
    let winding_error = (inside - 2.0 * PI).abs().max(outside.abs());
    let lemma_error = (c.oracle - c.direct).norm();
    let corrected_error = (c.oracle - c.start_corrected).norm();
    let finding = format!(
        "oracle(M=65536)={}; lemma claims f(z)={} (|diff|={:.3e}, {}); \
         start-corrected f(z)-f(z0)={} (|diff|={:.3e}); ln(z'-z) convention differs by {:.1e}",
        show(c.oracle),
        show(c.direct),
        lemma_error,
        if lemma_error <= 1e-8 {
            "matched"
        } else {
            "NOT matched"
        },
        show(c.start_corrected),
        corrected_error,
        c.convention_difference,
    );
    let checks = vec![
        tol.at_most("winding", "|winding - 2π·[inside]|", winding_error, 1e-6),
        tol.at_most("cauchy", "|I - f(z)|", c.cauchy_error, 1e-8),
        tol.at_most("refinement", "|I(2M) - I(M)|", c.refinement_change, 1e-8),
        tol.at_most(
            "shape_invariance",
            "|I_rect - I_circle|",
            c.shape_difference,
            1e-6,
        ),
        tol.at_most(
            "sign_conventions",
            "|I_swapped - I|",
            c.convention_difference,
            1e-8,
        ),
        tol.at_most("lemma_2_6", "|I - (f(z)-f(z0))|", corrected_error, 1e-8)
            .with_finding(finding),
    ];
    Ok(VerifyOutcome::new("contour", checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        assert_eq!("core".parse::<Suite>().unwrap(), Suite::Core);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerance_scaling() {
        let tol = Tolerance::new(10.0).unwrap();
        assert!(tol.at_most("x", "m", 5e-9, 1e-9).passed);
        assert!(tol.digits("x", 11.5, 12.0).passed);
        assert!(!Tolerance::default().digits("x", 11.5, 12.0).passed);
        assert!(Tolerance::new(0.0).is_err());
    }

    #[test]
    fn outcome_conjunction() {
        let ok = Check::new("a", "m", 1.0, Comparison::AtMost, 2.0);
        let bad = Check::new("b", "m", 3.0, Comparison::AtMost, 2.0);
        assert!(VerifyOutcome::new("s", vec![ok.clone()]).passed);
        assert!(!VerifyOutcome::new("s", vec![ok, bad]).passed);
    }

    #[test]
    fn check_lines() {
        let c = Check::new("im_identity", "-log10 L∞", 15.2, Comparison::AtLeast, 12.0);
        assert_eq!(
            c.to_string(),
            "im_identity: -log10 L∞ ≥ 12 (measured 1.520e1) PASS"
        );
    }
}
