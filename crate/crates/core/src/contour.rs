//! Closed-contour integrals with a logarithmic kernel.
//!
//! The logarithm `ln(z - z')` is made single-valued along the path by
//! unwrapping its argument node by node, anchored at the principal value at
//! the curve's start point. After one counterclockwise loop the argument has
//! gained `2π`, so integrating by parts against the Cauchy formula gives
//!
//! ```text
//! -(1/2πi) ∮ ln(z - z') f'(z') dz' = f(z) - f(z₀)
//! ```
//!
//! where `z₀` is the start point. Both this and the bare `f(z)` are reported by
//! [`LemmaComparison`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HxError, Result};

const TWO_PI: f64 = 2.0 * PI;
const WINDING_TOL: f64 = 1e-6;
const MIN_NODES: usize = 16;

/// Entire test functions with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticTestFunction {
    /// `c₀ + c₁z + … + cₙzⁿ`.
    Polynomial(Vec<Complex64>),
    /// `a·e^{bz}`.
    Exponential { a: Complex64, b: Complex64 },
}

impl AnalyticTestFunction {
    pub fn polynomial_real(coefficients: &[f64]) -> Self {
        Self::Polynomial(
            coefficients
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Polynomial(c) => c
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c),
            Self::Exponential { a, b } => a * (b * z).exp(),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| {
                    acc * z + c * k as f64
                }),
            Self::Exponential { a, b } => a * b * (b * z).exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// Axis-aligned, given by opposite corners.
    Rectangle {
        lower: Complex64,
        upper: Complex64,
    },
    /// Closed polygon through `vertices` (the closing edge is implied).
    Polyline {
        vertices: Vec<Complex64>,
    },
}

/// A closed path traversed counterclockwise from the point where the ray at
/// angle `start` from the curve's center meets it.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanCurve {
    kind: CurveKind,
    start: f64,
    nodes: usize,
}

/// Nodes `z_k` (first equals last) and complex weights `w_k` such that
/// `∮ g(z) dz ≈ Σ w_k g(z_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub points: Vec<Complex64>,
    pub weights: Vec<Complex64>,
}

impl JordanCurve {
    pub fn circle(center: Complex64, radius: f64, start: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(HxError::Geometry(format!(
                "circle radius must be positive, got {radius}"
            )));
        }
        Self::build(CurveKind::Circle { center, radius }, start, nodes)
    }

    pub fn rectangle(a: Complex64, b: Complex64, start: f64, nodes: usize) -> Result<Self> {
        let lower = Complex64::new(a.re.min(b.re), a.im.min(b.im));
        let upper = Complex64::new(a.re.max(b.re), a.im.max(b.im));
        if upper.re - lower.re <= 0.0 || upper.im - lower.im <= 0.0 {
            return Err(HxError::Geometry("rectangle has zero area".into()));
        }
        Self::build(CurveKind::Rectangle { lower, upper }, start, nodes)
    }

    pub fn polyline(vertices: Vec<Complex64>, start: f64, nodes: usize) -> Result<Self> {
        let mut vertices = vertices;
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(HxError::Geometry(
                "a polygon needs at least 3 vertices".into(),
            ));
        }
        if signed_area(&vertices).abs() == 0.0 {
            return Err(HxError::Geometry("polygon has zero area".into()));
        }
        Self::build(CurveKind::Polyline { vertices }, start, nodes)
    }

    fn build(kind: CurveKind, start: f64, nodes: usize) -> Result<Self> {
        if nodes < MIN_NODES || nodes % 2 != 0 {
            return Err(HxError::Geometry(format!(
                "node count must be even and at least {MIN_NODES}, got {nodes}"
            )));
        }
        if !start.is_finite() {
            return Err(HxError::Geometry("start parameter must be finite".into()));
        }
        Ok(Self { kind, start, nodes })
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn with_nodes(&self, nodes: usize) -> Result<Self> {
        Self::build(self.kind.clone(), self.start, nodes)
    }

    pub fn center(&self) -> Complex64 {
        match &self.kind {
            CurveKind::Circle { center, .. } => *center,
            CurveKind::Rectangle { lower, upper } => (lower + upper) * 0.5,
            CurveKind::Polyline { vertices } => {
                vertices.iter().sum::<Complex64>() / vertices.len() as f64
            }
        }
    }

    /// Diagonal of the bounding box.
    pub fn scale(&self) -> f64 {
        match &self.kind {
            CurveKind::Circle { radius, .. } => 2.0 * std::f64::consts::SQRT_2 * radius,
            CurveKind::Rectangle { lower, upper } => (upper - lower).norm(),
            CurveKind::Polyline { vertices } => {
                let (mut lo, mut hi) = (vertices[0], vertices[0]);
                for v in vertices {
                    lo = Complex64::new(lo.re.min(v.re), lo.im.min(v.im));
                    hi = Complex64::new(hi.re.max(v.re), hi.im.max(v.im));
                }
                (hi - lo).norm()
            }
        }
    }

    /// Counterclockwise polygon vertices; `None` for circles.
    fn polygon(&self) -> Option<Vec<Complex64>> {
        match &self.kind {
            CurveKind::Circle { .. } => None,
            CurveKind::Rectangle { lower, upper } => Some(vec![
                *lower,
                Complex64::new(upper.re, lower.im),
                *upper,
                Complex64::new(lower.re, upper.im),
            ]),
            CurveKind::Polyline { vertices } => {
                let mut v = vertices.clone();
                if signed_area(&v) < 0.0 {
                    v.reverse();
                }
                Some(v)
            }
        }
    }

    pub fn start_point(&self) -> Result<Complex64> {
        match &self.kind {
            CurveKind::Circle { center, radius } => {
                Ok(center + Complex64::from_polar(*radius, self.start))
            }
            _ => {
                let poly = self.polygon().expect("polygonal curve");
                ray_hit(&poly, self.center(), self.start).map(|(_, p)| p)
            }
        }
    }

    pub fn discretize(&self) -> Result<Discretization> {
        match &self.kind {
            CurveKind::Circle { center, radius } => {
                let m = self.nodes;
                let h = TWO_PI / m as f64;
                let mut points = Vec::with_capacity(m + 1);
                let mut weights = Vec::with_capacity(m + 1);
                for k in 0..=m {
                    let t = self.start + h * k as f64;
                    let e = Complex64::from_polar(1.0, t);
                    points.push(center + radius * e);
                    let dz = Complex64::new(0.0, *radius) * e;
                    weights.push(dz * simpson_coefficient(k, m) * (h / 3.0));
                }
                // first and last node coincide exactly
                points[m] = points[0];
                Ok(Discretization { points, weights })
            }
            _ => {
                let poly = self.polygon().expect("polygonal curve");
                let (edge, start) = ray_hit(&poly, self.center(), self.start)?;
                let mut path = vec![start];
                let n = poly.len();
                for i in 1..=n {
                    path.push(poly[(edge + i) % n]);
                }
                path.push(start);
                path.dedup_by(|a, b| (*a - *b).norm() == 0.0);
                polyline_simpson(&path, self.nodes)
            }
        }
    }
}

fn simpson_coefficient(k: usize, m: usize) -> f64 {
    if k == 0 || k == m {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

fn signed_area(v: &[Complex64]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
}

/// First intersection of the ray `center + s·e^{iθ}` (s > 0) with the polygon:
/// returns the edge index `i` (edge from `v[i]` to `v[i+1]`) and the point.
fn ray_hit(poly: &[Complex64], center: Complex64, angle: f64) -> Result<(usize, Complex64)> {
    let dir = Complex64::from_polar(1.0, angle);
    let n = poly.len();
    let mut best: Option<(f64, usize, Complex64)> = None;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let e = b - a;
        // solve center + s·dir = a + u·e
        let denom = dir.re * (-e.im) - dir.im * (-e.re);
        if denom.abs() < 1e-300 {
            continue;
        }
        let r = a - center;
        let s = (r.re * (-e.im) - r.im * (-e.re)) / denom;
        let u = (dir.re * r.im - dir.im * r.re) / denom;
        if s > 0.0 && (-1e-12..1.0 - 1e-12).contains(&u) {
            let u = u.max(0.0);
            if best.is_none_or(|(bs, _, _)| s < bs) {
                best = Some((s, i, a + e * u));
            }
        }
    }
    best.map(|(_, i, p)| (i, p))
        .ok_or_else(|| HxError::Geometry(format!("no boundary point at start angle {angle}")))
}

/// Composite Simpson weights along consecutive straight segments, `m`
/// intervals in total, each segment getting an even share.
fn polyline_simpson(path: &[Complex64], m: usize) -> Result<Discretization> {
    let lengths: Vec<f64> = path.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let total: f64 = lengths.iter().sum();
    let segments = lengths.len();
    if 2 * segments > m {
        return Err(HxError::Geometry(format!(
            "{m} nodes are too few for {segments} segments"
        )));
    }
    let mut counts: Vec<usize> = lengths
        .iter()
        .map(|l| ((m as f64 * l / total / 2.0).round() as usize).max(1) * 2)
        .collect();
    // settle the rounding on the longest segment
    let assigned: usize = counts.iter().sum();
    let longest = (0..segments)
        .max_by(|&a, &b| lengths[a].total_cmp(&lengths[b]))
        .expect("non-empty path");
    let adjusted = counts[longest] as isize + m as isize - assigned as isize;
    if adjusted < 2 {
        return Err(HxError::Geometry(
            "cannot distribute nodes over segments".into(),
        ));
    }
    counts[longest] = adjusted as usize;

    let mut points = vec![path[0]];
    let mut weights = vec![Complex64::new(0.0, 0.0)];
    for (w, &q) in path.windows(2).zip(&counts) {
        let step = (w[1] - w[0]) / q as f64;
        let base = weights.len() - 1;
        for k in 1..=q {
            points.push(w[0] + step * k as f64);
            weights.push(Complex64::new(0.0, 0.0));
        }
        for k in 0..=q {
            weights[base + k] += step * (simpson_coefficient(k, q) / 3.0);
        }
    }
    let last = points.len() - 1;
    points[last] = points[0];
    Ok(Discretization { points, weights })
}

/// Continuous argument along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchTrace {
    pub arguments: Vec<f64>,
    /// Total change of argument from first to last node.
    pub winding: f64,
    /// Largest single increment, in magnitude.
    pub max_increment: f64,
}

/// Shifts each principal argument by a multiple of 2π so successive
/// increments are minimal.
pub fn unwrap_argument(raw: &[f64]) -> Result<BranchTrace> {
    let mut arguments = Vec::with_capacity(raw.len());
    let mut max_increment = 0.0f64;
    if let Some(&first) = raw.first() {
        arguments.push(first);
    }
    for (i, w) in raw.windows(2).enumerate() {
        let d = w[1] - w[0];
        let d = d - TWO_PI * (d / TWO_PI).round();
        if (d.abs() - PI).abs() <= 1e-12 {
            return Err(HxError::Density {
                index: i + 1,
                increment: d,
            });
        }
        max_increment = max_increment.max(d.abs());
        let prev = *arguments.last().expect("seeded above");
        arguments.push(prev + d);
    }
    let winding = match (arguments.first(), arguments.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    Ok(BranchTrace {
        arguments,
        winding,
        max_increment,
    })
}

/// Trace of `arg(z - z'_k)` over the curve nodes.
pub fn branch_trace(points: &[Complex64], z: Complex64) -> Result<BranchTrace> {
    let raw: Vec<f64> = points.iter().map(|&p| (z - p).arg()).collect();
    let trace = unwrap_argument(&raw)?;
    // beyond half of π per step the nearest-shift choice is no longer reliable
    if trace.max_increment > PI / 2.0 {
        let index = trace
            .arguments
            .windows(2)
            .position(|w| (w[1] - w[0]).abs() == trace.max_increment)
            .map_or(0, |i| i + 1);
        return Err(HxError::Density {
            index,
            increment: trace.max_increment,
        });
    }
    Ok(trace)
}

fn check_interior(curve: &JordanCurve, disc: &Discretization, z: Complex64) -> Result<BranchTrace> {
    let min_dist = disc
        .points
        .iter()
        .map(|p| (p - z).norm())
        .fold(f64::INFINITY, f64::min);
    if min_dist < 1e-3 * curve.scale() {
        return Err(HxError::Geometry(format!(
            "point {z} lies within {min_dist:e} of the curve"
        )));
    }
    let trace = branch_trace(&disc.points, z)?;
    if (trace.winding - TWO_PI).abs() >= WINDING_TOL {
        return Err(HxError::Geometry(format!(
            "point {z} is not enclosed (winding {:.6})",
            trace.winding
        )));
    }
    Ok(trace)
}

/// Winding number (in radians) of the curve about `z`.
pub fn winding(curve: &JordanCurve, z: Complex64) -> Result<f64> {
    let disc = curve.discretize()?;
    Ok(branch_trace(&disc.points, z)?.winding)
}

/// `(1/2πi) ∮ f(z')/(z' - z) dz'`.
pub fn cauchy_integral(
    f: &AnalyticTestFunction,
    curve: &JordanCurve,
    z: Complex64,
) -> Result<Complex64> {
    let disc = curve.discretize()?;
    check_interior(curve, &disc, z)?;
    let sum: Complex64 = disc
        .points
        .iter()
        .zip(&disc.weights)
        .map(|(&p, &w)| w * f.eval(p) / (p - z))
        .sum();
    Ok(sum / Complex64::new(0.0, TWO_PI))
}

/// Which difference the logarithm is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogConvention {
    /// `ln(z - z')`, as the lemma is written.
    PointMinusNode,
    /// `ln(z' - z)`, which differs by a constant `±iπ` along the path.
    NodeMinusPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogKernelIntegral {
    pub value: Complex64,
    pub start_point: Complex64,
}

/// `-(1/2πi) ∮ ln(z - z') f'(z') dz'` with the unwrapped logarithm.
pub fn log_kernel_line_integral(
    f: &AnalyticTestFunction,
    curve: &JordanCurve,
    z: Complex64,
) -> Result<LogKernelIntegral> {
    log_kernel_line_integral_with(f, curve, z, LogConvention::PointMinusNode)
}

pub fn log_kernel_line_integral_with(
    f: &AnalyticTestFunction,
    curve: &JordanCurve,
    z: Complex64,
    convention: LogConvention,
) -> Result<LogKernelIntegral> {
    let disc = curve.discretize()?;
    check_interior(curve, &disc, z)?;
    let raw: Vec<f64> = disc
        .points
        .iter()
        .map(|&p| match convention {
            LogConvention::PointMinusNode => (z - p).arg(),
            LogConvention::NodeMinusPoint => (p - z).arg(),
        })
        .collect();
    let trace = unwrap_argument(&raw)?;
    let sum: Complex64 = disc
        .points
        .iter()
        .zip(&disc.weights)
        .zip(&trace.arguments)
        .map(|((&p, &w), &arg)| {
            let log = Complex64::new((z - p).norm().ln(), arg);
            w * log * f.derivative(p)
        })
        .sum();
    Ok(LogKernelIntegral {
        value: -sum / Complex64::new(0.0, TWO_PI),
        start_point: disc.points[0],
    })
}

/// The log-kernel integral next to the two candidate identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaComparison {
    pub cauchy: Complex64,
    pub log_kernel: Complex64,
    /// `f(z)`, the value the lemma asserts.
    pub direct: Complex64,
    /// `f(z) - f(z₀)`, from integrating the Cauchy formula by parts.
    pub start_corrected: Complex64,
    pub start_point: Complex64,
}

impl LemmaComparison {
    pub fn lemma_error(&self) -> f64 {
        (self.log_kernel - self.direct).norm()
    }

    pub fn corrected_error(&self) -> f64 {
        (self.log_kernel - self.start_corrected).norm()
    }

    pub fn cauchy_error(&self) -> f64 {
        (self.cauchy - self.direct).norm()
    }
}

pub fn compare_lemma(
    f: &AnalyticTestFunction,
    curve: &JordanCurve,
    z: Complex64,
) -> Result<LemmaComparison> {
    let cauchy = cauchy_integral(f, curve, z)?;
    let log = log_kernel_line_integral(f, curve, z)?;
    let direct = f.eval(z);
    Ok(LemmaComparison {
        cauchy,
        log_kernel: log.value,
        direct,
        start_corrected: direct - f.eval(log.start_point),
        start_point: log.start_point,
    })
}
