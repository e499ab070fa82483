//! Reference special functions used as closed-form oracles.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let p = if order == 1 { x } else { p1 };
            let prev = if order == 1 { 1.0 } else { p0 };
            dp = n * (x * p - prev) / (x * x - 1.0);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Dawson's integral `D(x) = e^{-x²} ∫₀ˣ e^{t²} dt`.
///
/// Evaluated as `∫₀ˣ e^{-u(2x-u)} du`, whose integrand is bounded by one,
/// with composite 10-point Gauss–Legendre panels.
pub fn dawson(x: f64) -> f64 {
    if x < 0.0 {
        return -dawson(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    // the integrand is below e^{-ux}; past u = 745/x it underflows
    let upper = x.min(745.0 / x);
    let panels = (upper / 0.05).ceil().max(1.0) as usize;
    let width = upper / panels as f64;
    let (nodes, weights) = gauss_legendre(10);
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        let panel: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| {
                let u = mid + 0.5 * width * t;
                w * (-u * (2.0 * x - u)).exp()
            })
            .sum();
        total += 0.5 * width * panel;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_integrate_polynomials() {
        for order in [1, 2, 5, 10, 21] {
            let (x, w) = gauss_legendre(order);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-14, "order {order}");
            let degree = 2 * order - 1;
            let integral: f64 = x
                .iter()
                .zip(&w)
                .map(|(x, w)| w * x.powi(degree as i32 - 1))
                .sum();
            // ∫ x^{2n-2} on [-1,1] = 2/(2n-1)
            assert!(
                (integral - 2.0 / degree as f64).abs() < 1e-13,
                "order {order}"
            );
        }
    }

    // Maclaurin series D(x) = Σ (-1)^n 2^n x^{2n+1} / (2n+1)!!, fine for small |x|
    fn dawson_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..80 {
            term *= -2.0 * x * x / (2 * n + 1) as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn dawson_matches_series_and_tabulated_values() {
        for x in [0.05, 0.3, 0.7, 1.0, 1.5] {
            assert!((dawson(x) - dawson_series(x)).abs() < 1e-14, "{x}");
        }
        assert!((dawson(1.0) - 0.538_079_506_912_768_4).abs() < 1e-15);
        assert!((dawson(-1.0) + 0.538_079_506_912_768_4).abs() < 1e-15);
        assert_eq!(dawson(0.0), 0.0);
        // large-x asymptote 1/(2x) + 1/(4x³) + 3/(8x⁵)
        let x = 50.0f64;
        let asym = 1.0 / (2.0 * x) + 1.0 / (4.0 * x.powi(3)) + 3.0 / (8.0 * x.powi(5));
        assert!((dawson(x) - asym).abs() < 1e-10);
    }
}
