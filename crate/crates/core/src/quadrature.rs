//! Quadrature rules shared by the transform and the test-facing inner products.
//!
//! Disc integrals use Gauss–Legendre in `u = r²` on `[0, 1]` times the
//! trapezoid rule in angle. With `dA = r dr dψ = ½ du dψ`, a polynomial in
//! `(z, z̄)` of total degree `D` is integrated exactly once
//! `angular > D` and `radial ≥ D/4 + 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, TomoError};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
///
/// Newton iteration on the Legendre recurrence; accurate to roundoff for
/// the node counts used here (a few hundred at most).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    if n == 0 {
        return (nodes, weights);
    }
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_interval(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| (mid + half * xi, half * wi))
        .collect()
}

/// Node counts of the tensor disc rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub radial: usize,
    pub angular: usize,
}

impl QuadratureSpec {
    pub fn new(radial: usize, angular: usize) -> Self {
        Self { radial, angular }
    }

    /// Smallest rule exact for products whose total degree is at most `degree`.
    pub fn for_degree(degree: usize) -> Self {
        Self {
            radial: degree / 4 + 2,
            angular: degree + 2,
        }
    }

    /// Accepts the rule for an inner product of two Zernike polynomials of
    /// degrees `n1` and `n2`: radial nodes ≥ n1+n2+2 and angular nodes ≥ n1+n2+1.
    pub fn check_zernike_pair(&self, n1: usize, n2: usize) -> Result<()> {
        let need_r = n1 + n2 + 2;
        let need_a = n1 + n2 + 1;
        if self.radial < need_r || self.angular < need_a {
            return Err(TomoError::UnderResolved(format!(
                "degrees ({n1}, {n2}) need radial >= {need_r} and angular >= {need_a}, got ({}, {})",
                self.radial, self.angular
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(24, 48)
    }
}

/// Points and weights of a disc rule; weights sum to π.
#[derive(Debug, Clone)]
pub struct DiscQuadrature {
    pub points: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl DiscQuadrature {
    pub fn new(spec: QuadratureSpec) -> Self {
        let radial = gauss_legendre_interval(spec.radial, 0.0, 1.0);
        let na = spec.angular.max(1);
        let dpsi = 2.0 * PI / na as f64;
        let mut points = Vec::with_capacity(radial.len() * na);
        let mut weights = Vec::with_capacity(radial.len() * na);
        for &(u, wu) in &radial {
            let r = u.sqrt();
            for j in 0..na {
                let psi = dpsi * j as f64;
                points.push(Complex64::from_polar(r, psi));
                weights.push(0.5 * wu * dpsi);
            }
        }
        Self { points, weights }
    }

    /// `∫∫_D f dV²` for a complex integrand.
    pub fn integrate<F: FnMut(Complex64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| f(z) * w)
            .sum()
    }

    /// `∫∫_D f dV²` for a real integrand.
    pub fn integrate_real<F: FnMut(Complex64) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| f(z) * w)
            .sum()
    }
}

/// Composite Simpson rule settings for chord integrals over sampled fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineQuadratureSpec {
    /// Number of sub-intervals along a chord (rounded up to even).
    pub intervals: usize,
}

impl Default for LineQuadratureSpec {
    fn default() -> Self {
        Self { intervals: 1024 }
    }
}

impl LineQuadratureSpec {
    /// Composite Simpson over `[0, length]`.
    pub fn simpson<F: FnMut(f64) -> f64>(&self, length: f64, mut f: F) -> f64 {
        let n = (self.intervals.max(2) + 1) & !1;
        let h = length / n as f64;
        let mut acc = f(0.0) + f(length);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(h * i as f64);
        }
        acc * h / 3.0
    }
}
