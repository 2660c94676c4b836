//! Zernike polynomials `Z^{n,k}(z, z̄)` indexed by degree `n` and order `k`
//! within the bunch `Z^{n,0}, …, Z^{n,n}`, and their fan-beam transform.
//!
//! `Z^{n,k} = (−1)^k z^{n−2k} P_k^{(0, n−2k)}(2|z|² − 1)` for `k ≤ ⌊n/2⌋` and
//! `Z^{n,k} = (−1)^n conj(Z^{n,n−k})` above the middle of the bunch. Indices
//! with `k < 0` or `k > n` denote the zero polynomial.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Result, TomoError};
use crate::poly::Poly2;
use crate::quadrature::{DiscQuadrature, QuadratureSpec};

/// A point of the plane, `z = x¹ + i x²`.
pub type ComplexPoint = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZernikeIndex {
    pub n: u32,
    pub k: i32,
}

impl ZernikeIndex {
    pub fn new(n: u32, k: i32) -> Self {
        Self { n, k }
    }

    /// True for the zero-extended indices `k < 0` or `k > n`.
    pub fn is_zero(&self) -> bool {
        self.k < 0 || self.k > self.n as i32
    }

    /// Angular frequency `n − 2k`.
    pub fn frequency(&self) -> i32 {
        self.n as i32 - 2 * self.k
    }
}

/// Jacobi polynomial `P_k^{(a,b)}(s)` by the three-term recurrence in `k`.
pub fn jacobi(k: usize, a: f64, b: f64, s: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = (a + 1.0) + 0.5 * (a + b + 2.0) * (s - 1.0);
    for j in 2..=k {
        let next = jacobi_step(j, a, b, s, p, p_prev);
        p_prev = p;
        p = next;
    }
    p
}

/// `P_j` from `P_{j−1}` and `P_{j−2}` (valid for `j ≥ 2`).
#[inline]
fn jacobi_step(j: usize, a: f64, b: f64, s: f64, p1: f64, p2: f64) -> f64 {
    let jf = j as f64;
    let c = 2.0 * jf + a + b;
    let lead = 2.0 * jf * (jf + a + b) * (c - 2.0);
    let t1 = (c - 1.0) * (c * (c - 2.0) * s + a * a - b * b);
    let t2 = 2.0 * (jf + a - 1.0) * (jf + b - 1.0) * c;
    (t1 * p1 - t2 * p2) / lead
}

pub(crate) fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `z^l` for `l ≥ 0` and `z̄^{|l|}` for `l < 0`.
fn angular_power(z: Complex64, l: i32) -> Complex64 {
    if l >= 0 {
        z.powu(l as u32)
    } else {
        z.conj().powu((-l) as u32)
    }
}

/// Point value of `Z^{n,k}` via the radial Jacobi form.
pub fn zernike_eval(idx: ZernikeIndex, z: ComplexPoint) -> Complex64 {
    if idx.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    let n = idx.n as i64;
    let k = idx.k as i64;
    if 2 * k > n {
        let mirror = zernike_eval(ZernikeIndex::new(idx.n, (n - k) as i32), z);
        return mirror.conj() * sign(n);
    }
    let l = (n - 2 * k) as i32;
    let s = 2.0 * z.norm_sqr() - 1.0;
    angular_power(z, l) * (sign(k) * jacobi(k as usize, 0.0, l as f64, s))
}

/// Monomial expansion of `Z^{n,k}`:
/// `Σ_s (−1)^{k−s} C(n−k, s) C(n−s, k−s) z̄^{k−s} z^{n−k−s}` for `k ≤ ⌊n/2⌋`.
pub fn zernike_poly(idx: ZernikeIndex) -> Poly2 {
    if idx.is_zero() {
        return Poly2::zero();
    }
    let n = idx.n as u64;
    let k = idx.k as u64;
    if 2 * k > n {
        let mirror = zernike_poly(ZernikeIndex::new(idx.n, (n - k) as i32));
        return mirror.conj().scale_real(sign(n as i64));
    }
    let mut out = Poly2::zero();
    for s in 0..=k {
        let c = sign((k - s) as i64) * binomial(n - k, s) * binomial(n - s, k - s);
        out.add_term((n - k - s) as u32, (k - s) as u32, Complex64::new(c, 0.0));
    }
    out
}

/// Binomial coefficient as a float, exact while it fits in 53 bits.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

/// Binomial coefficient with the zero convention outside `0 ≤ p ≤ m`.
pub fn binomial_ext(m: i64, p: i64) -> f64 {
    if p < 0 || m < 0 || p > m {
        0.0
    } else {
        binomial(m as u64, p as u64)
    }
}

/// Boundary value `(−1)^k t^{n−2k}` on the unit circle.
pub fn zernike_boundary(idx: ZernikeIndex, t: ComplexPoint) -> Result<Complex64> {
    if (t.norm() - 1.0).abs() > 1e-12 {
        return Err(TomoError::OffCircle(format!("{t}")));
    }
    if idx.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(angular_power(t, idx.frequency()) * sign(idx.k as i64))
}

/// Disc inner product `⟨⟨Z1, Z2⟩⟩ = ∫∫ Z1 conj(Z2) dV²`.
pub fn zernike_inner(a: ZernikeIndex, b: ZernikeIndex, quad: QuadratureSpec) -> Result<Complex64> {
    quad.check_zernike_pair(a.n as usize, b.n as usize)?;
    let rule = DiscQuadrature::new(quad);
    Ok(rule.integrate(|z| zernike_eval(a, z) * zernike_eval(b, z).conj()))
}

/// Reduce an angle to `[0, 2π)`.
pub fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed angular difference `β − φ` reduced to `(−π, π]`.
pub fn angle_diff(beta: f64, phi: f64) -> f64 {
    let d = normalize_angle(beta - phi);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Whether `(β, φ)` parameterizes a chord directly, i.e. `|β − φ| ≤ π/2` on the circle.
pub fn is_direct_ray(beta: f64, phi: f64) -> bool {
    angle_diff(beta, phi).abs() <= 0.5 * PI
}

/// Closed-form fan-beam transform of `Z^{n,k}`:
/// `2 e^{i(n−2k)φ}/(n+1)` times `cos[(n+1)(β−φ)]` (even `n`) or `i sin[(n+1)(β−φ)]` (odd `n`).
///
/// Outside the direct range the value follows the scalar extension rule
/// `[Da](β, φ) = −[Da](β, φ + π)`.
pub fn fanbeam_zernike(idx: ZernikeIndex, beta: f64, phi: f64) -> Complex64 {
    if idx.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    let beta = normalize_angle(beta);
    let phi = normalize_angle(phi);
    if !is_direct_ray(beta, phi) {
        return -fanbeam_zernike_direct(idx, beta, normalize_angle(phi + PI));
    }
    fanbeam_zernike_direct(idx, beta, phi)
}

fn fanbeam_zernike_direct(idx: ZernikeIndex, beta: f64, phi: f64) -> Complex64 {
    let n = idx.n as f64;
    let phase = Complex64::from_polar(2.0 / (n + 1.0), idx.frequency() as f64 * phi);
    let x = (n + 1.0) * (beta - phi);
    if idx.n % 2 == 0 {
        phase * x.cos()
    } else {
        phase * Complex64::new(0.0, x.sin())
    }
}

/// All `Z^{n,k}`, `n ≤ max_degree`, at one point.
///
/// Radial factors come from the Jacobi recurrence run once per angular
/// frequency, so a full table costs `O(N²)`.
#[derive(Debug, Clone)]
pub struct ZernikeTable {
    max_degree: usize,
    values: Vec<Complex64>,
}

impl ZernikeTable {
    pub fn new(max_degree: usize, z: ComplexPoint) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); (max_degree + 1) * (max_degree + 2) / 2];
        let s = 2.0 * z.norm_sqr() - 1.0;
        let mut zl = Complex64::new(1.0, 0.0);
        for l in 0..=max_degree {
            let b = l as f64;
            let mut p_prev = 0.0;
            let mut p = 1.0;
            let mut k = 0;
            while l + 2 * k <= max_degree {
                if k == 1 {
                    p_prev = 1.0;
                    p = 1.0 + 0.5 * (b + 2.0) * (s - 1.0);
                } else if k >= 2 {
                    let next = jacobi_step(k, 0.0, b, s, p, p_prev);
                    p_prev = p;
                    p = next;
                }
                let n = l + 2 * k;
                let v = zl * (sign(k as i64) * p);
                values[Self::slot(n, k)] = v;
                values[Self::slot(n, n - k)] = v.conj() * sign(n as i64);
                k += 1;
            }
            zl *= z;
        }
        Self { max_degree, values }
    }

    #[inline]
    fn slot(n: usize, k: usize) -> usize {
        n * (n + 1) / 2 + k
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `Z^{n,k}` with the zero extension for out-of-range `k`.
    #[inline]
    pub fn get(&self, n: usize, k: i64) -> Complex64 {
        if k < 0 || k > n as i64 || n > self.max_degree {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[Self::slot(n, k as usize)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Rodrigues' formula with `a = 0` expanded symbolically:
    /// `P_k^{(0,b)}(s) = (−1)^k/(k! 2^k) (1+s)^{−b} d^k/ds^k [(1−s)^k (1+s)^{k+b}]`,
    /// for integer `b`, by differentiating the explicit polynomial.
    fn rodrigues(k: usize, b: usize, s: f64) -> f64 {
        // coefficients of (1−s)^k (1+s)^{k+b} in powers of s
        let mut poly = vec![1.0f64];
        let mul = |p: &Vec<f64>, c0: f64, c1: f64| {
            let mut out = vec![0.0; p.len() + 1];
            for (i, &v) in p.iter().enumerate() {
                out[i] += c0 * v;
                out[i + 1] += c1 * v;
            }
            out
        };
        for _ in 0..k {
            poly = mul(&poly, 1.0, -1.0);
        }
        for _ in 0..(k + b) {
            poly = mul(&poly, 1.0, 1.0);
        }
        for _ in 0..k {
            poly = poly.iter().enumerate().skip(1).map(|(i, &v)| v * i as f64).collect();
        }
        let val: f64 = poly.iter().enumerate().map(|(i, &v)| v * s.powi(i as i32)).sum();
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        sign(k as i64) / (fact * 2f64.powi(k as i32)) * val / (1.0 + s).powi(b as i32)
    }

    #[test]
    fn jacobi_degree_zero_is_one() {
        assert_eq!(jacobi(0, 0.0, 0.0, 0.3), 1.0);
    }

    #[test]
    fn jacobi_is_one_at_one_for_a_zero() {
        for k in 0..12 {
            for b in [0.0, 1.0, 2.5, 7.0] {
                assert_abs_diff_eq!(jacobi(k, 0.0, b, 1.0), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_matches_rodrigues() {
        assert_abs_diff_eq!(jacobi(2, 0.0, 1.0, -0.5), rodrigues(2, 1, -0.5), epsilon = 1e-14);
        for k in 0..8 {
            for b in 0..6 {
                for &s in &[-0.9, -0.3, 0.1, 0.77] {
                    let want = rodrigues(k, b, s);
                    let tol = 1e-12 / (1.0 + s).powi(b as i32);
                    assert_abs_diff_eq!(jacobi(k, 0.0, b as f64, s), want, epsilon = tol);
                }
            }
        }
    }

    #[test]
    fn table_values_from_the_low_degree_list() {
        let z = c(0.31, -0.52);
        let zb = z.conj();
        let one = c(1.0, 0.0);
        let cases = [
            (0, 0, one),
            (1, 1, -zb),
            (2, 1, one - 2.0 * z * zb),
            (3, 1, 2.0 * z - 3.0 * z * z * zb),
            (3, 2, 3.0 * z * zb * zb - 2.0 * zb),
            (4, 2, one - 6.0 * z * zb + 6.0 * z * z * zb * zb),
            (4, 3, 3.0 * zb * zb - 4.0 * z * zb * zb * zb),
        ];
        for (n, k, want) in cases {
            let idx = ZernikeIndex::new(n, k);
            assert!((zernike_eval(idx, z) - want).norm() < 1e-14, "Z^{n},{k}");
            assert!((zernike_poly(idx).eval(z) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn out_of_range_orders_vanish() {
        let z = c(0.2, 0.1);
        assert_eq!(zernike_eval(ZernikeIndex::new(3, -1), z), c(0.0, 0.0));
        assert_eq!(zernike_eval(ZernikeIndex::new(3, 4), z), c(0.0, 0.0));
        assert!(zernike_poly(ZernikeIndex::new(2, 3)).is_zero());
    }

    #[test]
    fn boundary_values() {
        let v = zernike_boundary(ZernikeIndex::new(2, 1), c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, -1.0);
        let v = zernike_boundary(ZernikeIndex::new(0, 0), c(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(v.re, 1.0);
        let t = Complex64::from_polar(1.0, PI / 4.0);
        let v = zernike_boundary(ZernikeIndex::new(3, 0), t).unwrap();
        assert!((v - Complex64::from_polar(1.0, 3.0 * PI / 4.0)).norm() < 1e-15);
        assert!(zernike_boundary(ZernikeIndex::new(1, 0), c(0.9, 0.0)).is_err());
    }

    #[test]
    fn boundary_agrees_with_interior_formula() {
        for n in 0..=10u32 {
            for k in 0..=n as i32 {
                for j in 0..7 {
                    let t = Complex64::from_polar(1.0, 0.9 * j as f64 + 0.1);
                    let idx = ZernikeIndex::new(n, k);
                    let d = zernike_boundary(idx, t).unwrap() - zernike_eval(idx, t);
                    assert!(d.norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn inner_products() {
        let q = QuadratureSpec::new(8, 8);
        let v = zernike_inner(ZernikeIndex::new(3, 1), ZernikeIndex::new(3, 1), q).unwrap();
        assert_abs_diff_eq!(v.re, PI / 4.0, epsilon = 1e-13);
        let v = zernike_inner(ZernikeIndex::new(3, 1), ZernikeIndex::new(3, 2), q).unwrap();
        assert!(v.norm() < 1e-13);
        let v = zernike_inner(ZernikeIndex::new(0, 0), ZernikeIndex::new(0, 0), q).unwrap();
        assert_abs_diff_eq!(v.re, PI, epsilon = 1e-13);
        assert!(zernike_inner(ZernikeIndex::new(5, 1), ZernikeIndex::new(5, 2), q).is_err());
    }

    #[test]
    fn fanbeam_examples() {
        for &(b, p) in &[(0.3, 0.1), (1.0, 2.0), (5.0, 4.2)] {
            let v = fanbeam_zernike(ZernikeIndex::new(0, 0), b, p);
            assert_abs_diff_eq!(v.re, 2.0 * f64::cos(b - p), epsilon = 1e-14);
        }
        let v = fanbeam_zernike(ZernikeIndex::new(2, 1), 0.0, 0.0);
        assert_abs_diff_eq!(v.re, 2.0 / 3.0, epsilon = 1e-15);
        let v = fanbeam_zernike(ZernikeIndex::new(1, 0), 0.7, 0.7);
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn fanbeam_extension_rule() {
        for n in 0..6u32 {
            for k in 0..=n as i32 {
                let idx = ZernikeIndex::new(n, k);
                let (b, p) = (0.4, 0.4 + 2.3);
                let lhs = fanbeam_zernike(idx, b, p);
                let rhs = -fanbeam_zernike(idx, b, p + PI);
                assert!((lhs - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn table_matches_pointwise_eval() {
        let z = c(-0.44, 0.61);
        let t = ZernikeTable::new(14, z);
        for n in 0..=14usize {
            for k in -1..=(n as i64 + 1) {
                let want = zernike_eval(ZernikeIndex::new(n as u32, k as i32), z);
                assert!((t.get(n, k) - want).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn angle_helpers() {
        assert_abs_diff_eq!(normalize_angle(-0.5), TAU - 0.5);
        assert_abs_diff_eq!(angle_diff(0.1, TAU - 0.1), 0.2, epsilon = 1e-15);
        assert!(is_direct_ray(0.1, TAU - 1.0));
        assert!(!is_direct_ray(0.0, 2.0));
    }
}
