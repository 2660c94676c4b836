//! Exact polynomials in the independent variables `z` and `z̄`.
//!
//! A [`Poly2`] stores the coefficient of `z^p z̄^q` under the key `(p, q)`.
//! All the algebraic identities (differential representation, elliptic
//! system, solenoidality, potential invisibility) are checked on this form,
//! where the coefficients of low-degree Zernike polynomials are small
//! integers and cancellation is exact.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly2 {
    coeffs: BTreeMap<(u32, u32), Complex64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c · z^p z̄^q`
    pub fn monomial(p: u32, q: u32, c: Complex64) -> Self {
        let mut out = Self::zero();
        out.add_term(p, q, c);
        out
    }

    /// `z`
    pub fn z() -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    /// `z̄`
    pub fn zbar() -> Self {
        Self::monomial(0, 1, Complex64::new(1.0, 0.0))
    }

    /// `1 − z z̄`, which vanishes on the unit circle.
    pub fn boundary_factor() -> Self {
        Self::constant(Complex64::new(1.0, 0.0)) - Self::monomial(1, 1, Complex64::new(1.0, 0.0))
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.coeffs.entry((p, q)).or_default();
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&(p, q));
        }
    }

    pub fn coeff(&self, p: u32, q: u32) -> Complex64 {
        self.coeffs.get(&(p, q)).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient modulus; zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Total degree `max(p + q)`; zero for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|&(p, q)| p + q).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero();
        for (&(p, q), &v) in &self.coeffs {
            out.add_term(p, q, v * c);
        }
        out
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Complex conjugate as a function: `conj(c z^p z̄^q) = conj(c) z^q z̄^p`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (&(p, q), &v) in &self.coeffs {
            out.add_term(q, p, v.conj());
        }
        out
    }

    /// Formal derivative `∂/∂z`.
    pub fn d_z(&self) -> Self {
        let mut out = Self::zero();
        for (&(p, q), &v) in &self.coeffs {
            if p > 0 {
                out.add_term(p - 1, q, v * p as f64);
            }
        }
        out
    }

    /// Formal derivative `∂/∂z̄`.
    pub fn d_zbar(&self) -> Self {
        let mut out = Self::zero();
        for (&(p, q), &v) in &self.coeffs {
            if q > 0 {
                out.add_term(p, q - 1, v * q as f64);
            }
        }
        out
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.coeffs
            .iter()
            .map(|(&(p, q), &c)| c * z.powu(p) * zb.powu(q))
            .sum()
    }

    /// Coefficient-wise distance to another polynomial.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs_coeff()
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(p, q), &v) in &rhs.coeffs {
            out.add_term(p, q, v);
        }
        out
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        &self + &rhs
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(p, q), &v) in &rhs.coeffs {
            out.add_term(p, q, -v);
        }
        out
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        &self - &rhs
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale_real(-1.0)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(p1, q1), &a) in &self.coeffs {
            for (&(p2, q2), &b) in &rhs.coeffs {
                out.add_term(p1 + p2, q1 + q2, a * b);
            }
        }
        out
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}
