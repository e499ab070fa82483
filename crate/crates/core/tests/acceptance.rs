//! One line per acceptance criterion; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hx_core::bench::{run_bench, to_csv, BenchConfig, Form, CSV_HEADER};
use hx_core::quadrature::pv_symmetric_demo;
use hx_core::spectral::{corollary_equivalence_report, Branch};
use hx_core::verify::*;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

type Criterion = fn() -> hx_core::error::Result<Verdict>;

fn c1() -> hx_core::error::Result<Verdict> {
    let oracle = dft_oracle_error()?;
    let rt1024 = dft_roundtrip_error(1024)?;
    let rt5793 = dft_roundtrip_error(5793)?;
    Ok(verdict(
        oracle <= 1e-10 && rt1024 <= 1e-12 && rt5793 <= 1e-12,
        format!(
            "direct-sum rel err {oracle:.2e} (≤ 1e-10); round trip {rt1024:.2e} @1024, {rt5793:.2e} @5793 (≤ 1e-12)"
        ),
    ))
}

fn c2() -> hx_core::error::Result<Verdict> {
    let gauss = gaussian_first_form_error(4096)?;
    let cos = cosine_first_form_error(256)?;
    Ok(verdict(
        gauss <= 5e-3 && cos <= 1e-12,
        format!(
            "Gaussian vs -(2/√π)D rel L∞ {gauss:.2e} (≤ 5e-3); H cos + sin L∞ {cos:.2e} (≤ 1e-12)"
        ),
    ))
}

fn c3() -> hx_core::error::Result<Verdict> {
    let mut passed = true;
    let mut parts = Vec::new();
    for (n, seed) in [(64, 42), (1024, 42)] {
        let f = hx_core::bench::generate_test_signal(n, seed)?;
        let (re, im) = second_form_identity_digits(&f)?;
        let route = route_equivalence_error(&f)?;
        passed &= re >= 12.0 && im >= 12.0 && route <= 1e-10;
        parts.push(format!(
            "N={n}: re {re:.2} im {im:.2} digits, route A/B {route:.1e}"
        ));
    }
    Ok(verdict(
        passed,
        format!("{} (≥ 12 digits, ≤ 1e-10)", parts.join("; ")),
    ))
}

fn c4() -> hx_core::error::Result<Verdict> {
    let (re, im) = second_form_quadrature_errors(4096)?;
    let report = corollary_equivalence_report(&gaussian_signal(4096)?, Branch::Plus)?;
    Ok(verdict(
        re <= 5e-3 && im <= 5e-3 && (report.c_fit + 1.0).abs() <= 1e-3 && !report.paper_consistent,
        format!(
            "quadrature vs spectral rel L∞ re {re:.2e}, im {im:.2e} (≤ 5e-3); c_fit = {:.6} (-1 ± 1e-3), paper_consistent = {}",
            report.c_fit, report.paper_consistent
        ),
    ))
}

fn c5() -> hx_core::error::Result<Verdict> {
    let d10 = halfband_digits(1 << 10, 42)?;
    let d16 = halfband_digits(1 << 16, 42)?;
    Ok(verdict(
        d10 >= 12.0 && d16 >= 12.0,
        format!("half vs full -log10 L∞: {d10:.2} @2^10, {d16:.2} @2^16 (≥ 12)"),
    ))
}

fn c6() -> hx_core::error::Result<Verdict> {
    let config = BenchConfig::new(vec![18.0], 100, 10, 42)?;
    let records = run_bench(&config)?;
    let first = records
        .iter()
        .find(|r| r.form == Form::First)
        .expect("first record");
    let second = records
        .iter()
        .find(|r| r.form == Form::Second)
        .expect("second record");
    let ratio = second.mean_ms / first.mean_ms;
    let csv = to_csv(&records);
    let header_ok = csv.lines().next() == Some(CSV_HEADER)
        && CSV_HEADER == "form,power,trials,percent_increase,mean_ms,stddev_ms";
    Ok(verdict(
        ratio <= 0.87 && header_ok,
        format!(
            "2^18 inverse stage: first {:.3} ms, second {:.3} ms, ratio {ratio:.3} (≤ 0.87), percent_increase {:.1}% (≥ 15); CSV columns ok: {header_ok}",
            first.mean_ms,
            second.mean_ms,
            second.percent_increase.unwrap_or(f64::NAN)
        ),
    ))
}

fn c7() -> hx_core::error::Result<Verdict> {
    let c = contour_findings()?;
    let lemma = (c.oracle - c.direct).norm();
    let corrected = (c.oracle - c.start_corrected).norm();
    Ok(verdict(
        c.cauchy_error <= 1e-8 && c.refinement_change <= 1e-8 && c.shape_difference <= 1e-6,
        format!(
            "Cauchy err {:.1e} (≤ 1e-8), refinement {:.1e} (≤ 1e-8), shape {:.1e} (≤ 1e-6); \
             M=2^16 oracle: |I - f(z)| = {lemma:.3e}, |I - (f(z) - f(z0))| = {corrected:.1e}",
            c.cauchy_error, c.refinement_change, c.shape_difference
        ),
    ))
}

fn c8() -> hx_core::error::Result<Verdict> {
    let residuals = stieltjes_pairs(2000)?;
    let worst = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    let demo = pv_demo_error()?;
    let symmetric = pv_symmetric_demo(-1.5, 1.5, 1e-4)?;
    let thm = derivative_of_convolution_error(4096)?;
    Ok(verdict(
        worst <= 1e-5 && demo <= 1e-12 && symmetric.abs() <= 1e-12 && thm <= 5e-3,
        format!(
            "Stieltjes residual {worst:.2e} (≤ 1e-5); PV demo err {demo:.1e} (≤ 1e-12); \
             derivative-of-convolution rel L∞ {thm:.2e} (≤ 5e-3)"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(Criterion, Duration); 8] = [
        (c1, Duration::from_secs(10)),
        (c2, Duration::from_secs(5)),
        (c3, Duration::from_secs(5)),
        (c4, Duration::from_secs(30)),
        (c5, Duration::from_secs(5)),
        (c6, Duration::from_secs(180)),
        (c7, Duration::from_secs(30)),
        (c8, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (i, (run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(v) => (v.passed && elapsed <= *budget, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {}: {} {detail}; {:.2} s (budget {} s)",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {}/8 criteria pass", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
