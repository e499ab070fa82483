//! Time-domain oracles for both transform forms.
//!
//! Everything here works on a [`GridFunction`] and evaluates the defining
//! integrals directly, independent of the FFT path in [`crate::spectral`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HxError, Result};
use crate::spectral::{Branch, Signal};

const UNIFORM_TOL: f64 = 1e-9;
const DECAY_TOL: f64 = 1e-6;

/// Ordinates on strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    uniform: bool,
}

impl GridFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(HxError::SizeMismatch {
                expected: nodes.len(),
                actual: values.len(),
            });
        }
        if nodes.len() < 3 {
            return Err(HxError::InvalidSize(format!(
                "a grid function needs at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        if let Some(index) = nodes.iter().position(|x| !x.is_finite()).or_else(|| {
            values
                .iter()
                .position(|v| !v.re.is_finite() || !v.im.is_finite())
        }) {
            return Err(HxError::NonFinite { index });
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HxError::Domain("nodes must be strictly increasing".into()));
        }
        let h0 = nodes[1] - nodes[0];
        let uniform = nodes
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h0).abs() <= UNIFORM_TOL * h0);
        Ok(Self {
            nodes,
            values,
            uniform,
        })
    }

    pub fn real(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(
            nodes,
            values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// `n` uniform samples of `f` starting at `start` with spacing `h`.
    pub fn sample(start: f64, h: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let nodes: Vec<f64> = (0..n).map(|k| start + k as f64 * h).collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::real(nodes, values)
    }

    /// `n` uniform samples spanning `[a, b]` inclusive.
    pub fn linspace(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::sample(a, (b - a) / (n as f64 - 1.0), n, f)
    }

    pub fn from_signal(signal: &Signal) -> Result<Self> {
        Self::new(signal.abscissae(), signal.samples().to_vec())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn imag_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Mean spacing of a uniform grid.
    pub fn spacing(&self) -> Option<f64> {
        self.uniform
            .then(|| (self.nodes[self.len() - 1] - self.nodes[0]) / (self.len() - 1) as f64)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn uniform_spacing(&self) -> Result<f64> {
        self.spacing()
            .ok_or_else(|| HxError::Unsupported("non-uniform grids".into()))
    }

    fn check_decay(&self) -> Result<()> {
        let limit = DECAY_TOL * self.max_abs();
        let endpoint = self.values[0]
            .norm()
            .max(self.values[self.len() - 1].norm());
        if endpoint > limit {
            return Err(HxError::InsufficientDecay { endpoint, limit });
        }
        Ok(())
    }

    /// Results at a node subset; the three-node minimum applies to inputs only.
    fn select(&self, x_eval: &[usize], values: Vec<Complex64>) -> Result<Self> {
        let nodes: Vec<f64> = x_eval.iter().map(|&j| self.nodes[j]).collect();
        let uniform = nodes.len() < 3 || {
            let h0 = nodes[1] - nodes[0];
            nodes
                .windows(2)
                .all(|w| ((w[1] - w[0]) - h0).abs() <= UNIFORM_TOL * h0)
        };
        Ok(Self {
            nodes,
            values,
            uniform,
        })
    }

    fn check_eval(&self, x_eval: &[usize]) -> Result<()> {
        if let Some(&bad) = x_eval.iter().find(|&&j| j >= self.len()) {
            return Err(HxError::Domain(format!(
                "evaluation node {bad} is outside a grid of {} nodes",
                self.len()
            )));
        }
        if x_eval.is_empty() || x_eval.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HxError::Domain(
                "evaluation nodes must be non-empty and strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Every node index of a grid of `n` nodes.
pub fn all_nodes(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Every `stride`-th node index, starting at 0.
pub fn strided_nodes(n: usize, stride: usize) -> Vec<usize> {
    (0..n).step_by(stride.max(1)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointRule {
    Trapezoid,
}

/// Principal-value rule: nodes within `exclusion_cells` spacings of the
/// singular node are excluded symmetrically and the excluded block is
/// replaced by its leading-order value `-2ε·f'(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PvRule {
    pub exclusion_cells: usize,
    pub endpoint: EndpointRule,
}

impl Default for PvRule {
    fn default() -> Self {
        Self {
            exclusion_cells: 0,
            endpoint: EndpointRule::Trapezoid,
        }
    }
}

/// `∫_a^{-ε} dx/x + ∫_ε^b dx/x` from the antiderivative.
pub fn pv_symmetric_demo(a: f64, b: f64, eps: f64) -> Result<f64> {
    if !(a < 0.0 && b > 0.0) {
        return Err(HxError::Domain(format!(
            "need a < 0 < b, got a = {a}, b = {b}"
        )));
    }
    if !(eps > 0.0 && eps < (-a).min(b)) {
        return Err(HxError::Domain(format!(
            "eps must lie in (0, {}), got {eps}",
            (-a).min(b)
        )));
    }
    let left = eps.ln() - (-a).ln();
    let right = b.ln() - eps.ln();
    Ok(left + right)
}

/// Centered differences: 4th order in the interior, 2nd order on the two
/// nodes next to each edge (centered, then one-sided at the edge itself).
pub fn centered_derivative(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    assert!(n >= 3, "derivative stencil needs at least 3 nodes");
    let f = values;
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    for k in 2..n.saturating_sub(2) {
        d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
    }
    for k in [1, n - 2] {
        d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d
}

fn trapezoid_weight(k: usize, n: usize) -> f64 {
    if k == 0 || k == n - 1 {
        0.5
    } else {
        1.0
    }
}

/// `-(1/π) P∫ f(x')/(x - x') dx'` at the selected nodes.
pub fn hilbert_first_pv_quadrature(f: &GridFunction, x_eval: &[usize]) -> Result<GridFunction> {
    hilbert_first_pv_quadrature_with(f, x_eval, PvRule::default())
}

pub fn hilbert_first_pv_quadrature_with(
    f: &GridFunction,
    x_eval: &[usize],
    rule: PvRule,
) -> Result<GridFunction> {
    let h = f.uniform_spacing()?;
    f.check_decay()?;
    f.check_eval(x_eval)?;
    let n = f.len();
    let df = centered_derivative(&f.values, h);
    let m_ex = rule.exclusion_cells;
    let out = x_eval
        .iter()
        .map(|&j| {
            // P∫ f(x')/(x_j - x') dx' = ∫₀^∞ g(u) du, g(u) = (f(x-u) - f(x+u))/u;
            // the block |u| <= ε contributes -2ε f'(x_j), and for ε = 0 the
            // trapezoid's half-weight at u = 0 gives -h f'(x_j)
            let mut acc = if m_ex == 0 {
                -h * df[j]
            } else {
                -2.0 * (m_ex as f64) * h * df[j]
            };
            for k in 0..n {
                let offset = k as isize - j as isize;
                let m = offset.unsigned_abs();
                if m == 0 || m < m_ex {
                    continue;
                }
                let mut w = trapezoid_weight(k, n);
                if m_ex > 0 && m == m_ex {
                    w *= 0.5;
                }
                acc += f.values[k] * (w * h / (f.nodes[j] - f.nodes[k]));
            }
            -acc / PI
        })
        .collect();
    f.select(x_eval, out)
}

/// `(1/π) ∫ ln(x - x') g(x') dx'` at the selected nodes, with
/// `arg(x - x') = ±π` for `x' > x` according to `branch`.
///
/// The singular node carries the punctured-trapezoid log correction
/// `h·ln(h/2π)` on the real part and the trapezoid half weight on the
/// branch part.
pub fn log_kernel_convolution(
    g: &GridFunction,
    branch: Branch,
    x_eval: &[usize],
) -> Result<GridFunction> {
    let h = g.uniform_spacing()?;
    g.check_eval(x_eval)?;
    let n = g.len();
    let log_table: Vec<f64> = (0..n)
        .map(|m| if m == 0 { 0.0 } else { (m as f64 * h).ln() })
        .collect();
    let arg = branch.sign() * PI;
    let out = x_eval
        .iter()
        .map(|&j| {
            let mut re = Complex64::new(0.0, 0.0);
            let mut im = Complex64::new(0.0, 0.0);
            for k in 0..n {
                if k == j {
                    continue;
                }
                let w = trapezoid_weight(k, n) * h;
                let v = g.values[k] * w;
                re += v * log_table[k.abs_diff(j)];
                if k > j {
                    im += v;
                }
            }
            let gj = g.values[j] * trapezoid_weight(j, n) * h;
            re += gj * (h / (2.0 * PI)).ln();
            im += 0.5 * gj;
            (re + Complex64::new(0.0, arg) * im) / PI
        })
        .collect();
    g.select(x_eval, out)
}

/// `(1/π) ∫ ln(x - x') f'(x') dx'` with `f'` from [`centered_derivative`].
pub fn hilbert_second_quadrature(
    f: &GridFunction,
    branch: Branch,
    x_eval: &[usize],
) -> Result<GridFunction> {
    let h = f.uniform_spacing()?;
    f.check_decay()?;
    f.check_eval(x_eval)?;
    let df = GridFunction::new(f.nodes.clone(), centered_derivative(&f.values, h))?;
    log_kernel_convolution(&df, branch, x_eval)
}

/// `|∫f dα + ∫α df - (f(b)α(b) - f(a)α(a))|` over the nodes in `[a, b]`.
///
/// Both integrals are trapezoid sums of `f·α'` and `α·f'` with derivatives
/// from [`centered_derivative`].
pub fn stieltjes_residual(f: &GridFunction, alpha: &GridFunction, a: f64, b: f64) -> Result<f64> {
    if f.len() != alpha.len() {
        return Err(HxError::SizeMismatch {
            expected: f.len(),
            actual: alpha.len(),
        });
    }
    let h = f.uniform_spacing()?;
    if f.nodes
        .iter()
        .zip(&alpha.nodes)
        .any(|(x, y)| (x - y).abs() > UNIFORM_TOL * h)
    {
        return Err(HxError::Domain("f and alpha must share a grid".into()));
    }
    if !(a < b) {
        return Err(HxError::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    let tol = 1e-9 * h;
    let lo = f.nodes.iter().position(|&x| (x - a).abs() <= tol);
    let hi = f.nodes.iter().position(|&x| (x - b).abs() <= tol);
    let (lo, hi) = match (lo, hi) {
        (Some(lo), Some(hi)) if hi >= lo + 2 => (lo, hi),
        _ => {
            return Err(HxError::Domain(format!(
                "[{a}, {b}] must start and end on grid nodes and span at least 3 of them"
            )))
        }
    };
    let fv = &f.values[lo..=hi];
    let av = &alpha.values[lo..=hi];
    let df = centered_derivative(fv, h);
    let da = centered_derivative(av, h);
    let len = fv.len();
    let mut first = Complex64::new(0.0, 0.0);
    let mut second = Complex64::new(0.0, 0.0);
    for k in 0..len {
        let w = trapezoid_weight(k, len) * h;
        first += fv[k] * da[k] * w;
        second += av[k] * df[k] * w;
    }
    let boundary = fv[len - 1] * av[len - 1] - fv[0] * av[0];
    Ok((first + second - boundary).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::dawson;

    fn gaussian(n: usize) -> GridFunction {
        GridFunction::sample(-8.0, 16.0 / n as f64, n, |x| (-x * x).exp()).unwrap()
    }

    #[test]
    fn pv_demo_values() {
        assert!(pv_symmetric_demo(-1.0, 1.0, 1e-6).unwrap().abs() < 1e-12);
        assert!((pv_symmetric_demo(-1.0, 2.0, 1e-6).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((pv_symmetric_demo(-2.0, 1.0, 1e-3).unwrap() + 2f64.ln()).abs() < 1e-12);
        assert!(pv_symmetric_demo(-1.0, 1.0, 1.0).is_err());
        assert!(pv_symmetric_demo(-1.0, 1.0, 0.0).is_err());
        assert!(pv_symmetric_demo(1.0, 2.0, 0.1).is_err());
    }

    #[test]
    fn grid_function_validation() {
        assert!(GridFunction::real(vec![0.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(GridFunction::real(vec![0.0, 2.0, 1.0], vec![1.0; 3]).is_err());
        assert!(GridFunction::real(vec![0.0, 1.0, 2.0], vec![1.0; 2]).is_err());
        let g = GridFunction::real(vec![0.0, 1.0, 3.0], vec![1.0; 3]).unwrap();
        assert!(!g.is_uniform());
        assert_eq!(
            hilbert_first_pv_quadrature(&g, &[1]),
            Err(HxError::Unsupported("non-uniform grids".into()))
        );
    }

    #[test]
    fn derivative_stencil_is_exact_on_quartics() {
        let g = GridFunction::linspace(-1.0, 1.0, 21, |x| x.powi(4) - x * x + 3.0).unwrap();
        let d = centered_derivative(g.values(), g.spacing().unwrap());
        for k in 2..19 {
            let x = g.nodes()[k];
            assert!((d[k].re - (4.0 * x.powi(3) - 2.0 * x)).abs() < 1e-11);
        }
        let q = GridFunction::linspace(0.0, 1.0, 11, |x| x * x).unwrap();
        let d = centered_derivative(q.values(), q.spacing().unwrap());
        for (x, v) in q.nodes().iter().zip(&d) {
            assert!((v.re - 2.0 * x).abs() < 1e-12);
        }
    }

    #[test]
    fn pv_quadrature_on_gaussian_at_one() {
        let f = gaussian(4096);
        let j = 2304;
        assert!((f.nodes()[j] - 1.0).abs() < 1e-12);
        let h = hilbert_first_pv_quadrature(&f, &[j]).unwrap();
        let expected = -2.0 / PI.sqrt() * dawson(1.0);
        assert!((h.values()[0].re - expected).abs() < 5e-3);
        assert!((h.values()[0].re + 0.60716).abs() < 1e-5);
    }

    #[test]
    fn pv_quadrature_with_exclusion_still_converges() {
        let f = gaussian(2048);
        let j = 1152;
        let rule = PvRule {
            exclusion_cells: 2,
            ..PvRule::default()
        };
        let h = hilbert_first_pv_quadrature_with(&f, &[j], rule).unwrap();
        let expected = -2.0 / PI.sqrt() * dawson(f.nodes()[j]);
        assert!((h.values()[0].re - expected).abs() < 1e-4);
    }

    #[test]
    fn pv_quadrature_rejects_slow_decay() {
        let f = GridFunction::linspace(-1.0, 1.0, 64, |_| 1.0).unwrap();
        assert!(matches!(
            hilbert_first_pv_quadrature(&f, &[10]),
            Err(HxError::InsufficientDecay { .. })
        ));
    }

    #[test]
    fn second_form_quadrature_of_constant_is_zero() {
        // decay check skipped by convolving the (zero) derivative directly
        let f = GridFunction::linspace(-1.0, 1.0, 33, |_| 4.0).unwrap();
        let df = GridFunction::new(
            f.nodes().to_vec(),
            centered_derivative(f.values(), f.spacing().unwrap()),
        )
        .unwrap();
        let out = log_kernel_convolution(&df, Branch::Plus, &all_nodes(33)).unwrap();
        assert!(out.max_abs() == 0.0);
    }

    #[test]
    fn second_form_quadrature_branches_are_conjugate() {
        let f = gaussian(512);
        let nodes = strided_nodes(512, 7);
        let plus = hilbert_second_quadrature(&f, Branch::Plus, &nodes).unwrap();
        let minus = hilbert_second_quadrature(&f, Branch::Minus, &nodes).unwrap();
        for (p, m) in plus.values().iter().zip(minus.values()) {
            assert!((p.conj() - m).norm() <= 1e-12);
        }
    }

    #[test]
    fn stieltjes_pairs() {
        let f = GridFunction::linspace(0.0, 1.0, 1000, |x| x).unwrap();
        let a = GridFunction::linspace(0.0, 1.0, 1000, |x| x * x).unwrap();
        assert!(stieltjes_residual(&f, &a, 0.0, 1.0).unwrap() <= 1e-5);
        let c = GridFunction::linspace(0.0, 1.0, 50, |_| 3.0).unwrap();
        assert_eq!(stieltjes_residual(&c, &c, 0.0, 1.0).unwrap(), 0.0);
        let short = GridFunction::linspace(0.0, 1.0, 999, |x| x).unwrap();
        assert!(stieltjes_residual(&f, &short, 0.0, 1.0).is_err());
        assert!(stieltjes_residual(&f, &a, 0.0, 0.5004).is_err());
    }

    #[test]
    fn eval_nodes_are_validated() {
        let f = gaussian(64);
        assert!(hilbert_first_pv_quadrature(&f, &[64]).is_err());
        assert!(hilbert_first_pv_quadrature(&f, &[5, 3]).is_err());
    }
}
