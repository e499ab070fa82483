use std::f64::consts::PI;

use hx_core::bench::{percent_increase, stats};
use hx_core::contour::{
    cauchy_integral, unwrap_argument, winding, AnalyticTestFunction, JordanCurve,
};
use hx_core::dft::{max_relative_error, ComplexSequence, DftPlan};
use hx_core::quadrature::{hilbert_second_quadrature, strided_nodes, GridFunction};
use hx_core::spectral::{
    analytic_signal, hilbert_first, hilbert_second, hilbert_second_halfband, infinity_norm_log10,
    Branch, Grid, Signal,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_vec(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_len).prop_map(|v| {
        v.into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    })
}

fn real_vec(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, min_len..=max_len)
}

/// Removes the DC and Nyquist components, which the sign multiplier annihilates.
fn without_dc_and_nyquist(mut v: Vec<f64>) -> Vec<f64> {
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    v.iter_mut().for_each(|x| *x -= mean);
    if n % 2 == 0 {
        let alt = v
            .iter()
            .enumerate()
            .map(|(k, x)| if k % 2 == 0 { *x } else { -*x })
            .sum::<f64>()
            / n as f64;
        for (k, x) in v.iter_mut().enumerate() {
            *x -= if k % 2 == 0 { alt } else { -alt };
        }
    }
    v
}

fn signal(v: Vec<f64>) -> Signal {
    Signal::real(v, Grid::unit()).unwrap()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dft_round_trip(x in complex_vec(300)) {
        let plan = DftPlan::new(x.len()).unwrap();
        let seq = ComplexSequence::new(x.clone()).unwrap();
        let back = plan.inverse(&plan.forward(&seq).unwrap()).unwrap();
        prop_assert!(max_relative_error(back.as_slice(), &x) <= 1e-12);
    }

    #[test]
    fn dft_parseval(x in complex_vec(300)) {
        let n = x.len() as f64;
        let plan = DftPlan::new(x.len()).unwrap();
        let spec = plan.forward(&ComplexSequence::new(x.clone()).unwrap()).unwrap();
        let time: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let freq: f64 = spec.as_slice().iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((freq - n * time).abs() <= 1e-12 * n * time.max(1e-300));
    }

    #[test]
    fn dft_linearity(pair in (1usize..200).prop_flat_map(|n| (
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n),
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n))),
        a in -3.0f64..3.0)
    {
        let to_c = |v: &Vec<(f64, f64)>| v.iter().map(|&(r, i)| Complex64::new(r, i)).collect::<Vec<_>>();
        let (x, y) = (to_c(&pair.0), to_c(&pair.1));
        let plan = DftPlan::new(x.len()).unwrap();
        let f = |v: Vec<Complex64>| plan.forward(&ComplexSequence::new(v).unwrap()).unwrap();
        let combo: Vec<Complex64> = x.iter().zip(&y).map(|(p, q)| p * a + q).collect();
        let lhs = f(combo);
        let (fx, fy) = (f(x), f(y));
        let rhs: Vec<Complex64> = fx.as_slice().iter().zip(fy.as_slice()).map(|(p, q)| p * a + q).collect();
        let scale = rhs.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let err = lhs.as_slice().iter().zip(&rhs).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * scale);
    }

    #[test]
    fn hilbert_linearity(pair in (2usize..200).prop_flat_map(|n| (
        prop::collection::vec(-1.0f64..1.0, n), prop::collection::vec(-1.0f64..1.0, n))),
        a in -3.0f64..3.0)
    {
        let (x, y) = pair;
        let combo: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + q).collect();
        let h = |v: &Vec<f64>| hilbert_first(&signal(v.clone())).unwrap().real_parts();
        let (hx, hy, hc) = (h(&x), h(&y), h(&combo));
        for k in 0..x.len() {
            prop_assert!((hc[k] - (a * hx[k] + hy[k])).abs() <= 1e-12 * (1.0 + a.abs()));
        }
        let h2 = |v: &Vec<f64>| hilbert_second(&signal(v.clone()), Branch::Plus).unwrap();
        let (sx, sy, sc) = (h2(&x), h2(&y), h2(&combo));
        for k in 0..x.len() {
            let expect = sx.samples()[k] * a + sy.samples()[k];
            prop_assert!((sc.samples()[k] - expect).norm() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn first_form_involution_and_energy(v in real_vec(4, 300)) {
        let v = without_dc_and_nyquist(v);
        let norm = norm2(&v);
        prop_assume!(norm > 1e-6);
        let h = hilbert_first(&signal(v.clone())).unwrap();
        let hh = hilbert_first(&h).unwrap().real_parts();
        let err = v.iter().zip(&hh).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
        let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        prop_assert!(err <= 1e-10 * max);
        prop_assert!((norm2(&h.real_parts()) - norm).abs() <= 1e-10 * norm);
    }

    #[test]
    fn second_form_branches(v in real_vec(2, 300)) {
        let f = signal(v.clone());
        let plus = hilbert_second(&f, Branch::Plus).unwrap();
        let minus = hilbert_second(&f, Branch::Minus).unwrap();
        let h = hilbert_first(&f).unwrap().real_parts();
        let scale = v.iter().fold(1e-300f64, |m, x| m.max(x.abs()));
        for k in 0..v.len() {
            let (p, m) = (plus.samples()[k], minus.samples()[k]);
            prop_assert!((p.re - m.re).abs() <= 1e-12 * scale);
            prop_assert!((p.im + m.im).abs() <= 1e-12 * scale);
            prop_assert!((p.re + h[k]).abs() <= 1e-12 * scale);
            prop_assert!((p.im + v[k]).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn analytic_signal_is_one_sided(v in real_vec(2, 300)) {
        let n = v.len();
        let a = analytic_signal(&signal(v)).unwrap();
        let plan = DftPlan::new(n).unwrap();
        let spec = plan.forward(&ComplexSequence::new(a.samples().to_vec()).unwrap()).unwrap();
        let max = spec.as_slice().iter().map(|c| c.norm()).fold(0.0, f64::max);
        for k in 0..n {
            if spec.frequency(k) < 0.0 {
                prop_assert!(spec.as_slice()[k].norm() <= 1e-10 * max.max(1e-300));
            }
        }
    }

    #[test]
    fn halfband_matches_full(half in 1usize..200, seed in any::<u64>(), minus in any::<bool>()) {
        let n = 2 * half;
        let mut state = seed | 1;
        let v: Vec<f64> = (0..n).map(|_| {
            state ^= state << 13; state ^= state >> 7; state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        }).collect();
        let branch = if minus { Branch::Minus } else { Branch::Plus };
        let f = signal(v);
        let fast = hilbert_second_halfband(&f, branch).unwrap();
        let full = hilbert_second(&f, branch).unwrap();
        prop_assert!(infinity_norm_log10(fast.samples(), full.samples()).unwrap() >= 12.0);
    }

    #[test]
    fn quadrature_branch_conjugacy(width in 0.5f64..1.5, shift in -1.0f64..1.0) {
        let f = GridFunction::sample(-8.0, 16.0 / 256.0, 256, |x| (-((x - shift) / width).powi(2)).exp()).unwrap();
        let nodes = strided_nodes(256, 5);
        let p = hilbert_second_quadrature(&f, Branch::Plus, &nodes).unwrap();
        let m = hilbert_second_quadrature(&f, Branch::Minus, &nodes).unwrap();
        for (a, b) in p.values().iter().zip(m.values()) {
            prop_assert!((a.conj() - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn percent_increase_antisymmetry(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
        prop_assume!(a != b);
        let ab = percent_increase(a, b).unwrap();
        let ba = percent_increase(b, a).unwrap();
        prop_assert_eq!(ab > 0.0, ba < 0.0);
    }

    #[test]
    fn stats_bounds(v in prop::collection::vec(0.0f64..100.0, 2..50)) {
        let (mean, sd) = stats(&v).unwrap();
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(sd >= 0.0);
        prop_assert!(mean >= lo - 1e-12 && mean <= hi + 1e-12);
    }

    #[test]
    fn unwrapping_is_minimal(raw in prop::collection::vec(-PI..PI, 1..100)) {
        if let Ok(trace) = unwrap_argument(&raw) {
            for (k, w) in trace.arguments.windows(2).enumerate() {
                prop_assert!((w[1] - w[0]).abs() < PI);
                let turns = (trace.arguments[k + 1] - raw[k + 1]) / (2.0 * PI);
                prop_assert!((turns - turns.round()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn winding_and_cauchy(r in 0.0f64..1.5, t in 0.0f64..(2.0 * PI), start in -3.0f64..3.0,
                          c in prop::collection::vec(-2.0f64..2.0, 1..6)) {
        let z = Complex64::from_polar(r, t);
        let circle = JordanCurve::circle(Complex64::new(0.0, 0.0), 2.0, start, 1024).unwrap();
        prop_assert!((winding(&circle, z).unwrap() - 2.0 * PI).abs() < 1e-6);
        prop_assert!(winding(&circle, z * 2.0 + Complex64::from_polar(3.5, t)).unwrap().abs() < 1e-6);
        let f = AnalyticTestFunction::polynomial_real(&c);
        prop_assert!((cauchy_integral(&f, &circle, z).unwrap() - f.eval(z)).norm() <= 1e-8);
    }
}
