//! Orthogonal polynomial basis of solenoidal symmetric tensor fields and the
//! singular system of the fan-beam transform.
//!
//! For rank `m`, degree `n` and order `0 ≤ k ≤ ⌊(n+m)/2⌋` the basis fields
//! `s^{(±m)}_{n,k}` have complex components
//!
//! ```text
//! A_{m−j} = (−1)^n (Z^{n,k−j} + conj Z^{n,k−m+j})     (+)
//! A_{m−j} = −i     (Z^{n,k−j} − conj Z^{n,k−m+j})     (−)
//! ```
//!
//! for `j = 0..m`. When `2k = m + n` the two terms coincide; the field keeps a
//! single copy and one of the two signs is the zero field.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Result, TomoError};
use crate::poly::Poly2;
use crate::tensor::PolyField;
use crate::zernike::{binomial, sign, zernike_poly, ZernikeIndex, ZernikeTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "+" => Some(Sign::Plus),
            "-" => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub sign: Sign,
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s({}{})[n={}, k={}]", self.sign.symbol(), self.m, self.n, self.k)
    }
}

impl BasisIndex {
    /// Validated index; degenerate (zero-field) indices are accepted here.
    pub fn new(sign: Sign, m: usize, n: usize, k: usize) -> Result<Self> {
        let idx = Self { sign, m, n, k };
        check_order(m, n, k)?;
        Ok(idx)
    }

    pub fn plus(m: usize, n: usize, k: usize) -> Result<Self> {
        Self::new(Sign::Plus, m, n, k)
    }

    pub fn minus(m: usize, n: usize, k: usize) -> Result<Self> {
        Self::new(Sign::Minus, m, n, k)
    }

    /// `2k = m + n`
    pub fn is_diagonal(&self) -> bool {
        2 * self.k == self.m + self.n
    }

    /// True for the indices that denote the zero field.
    pub fn is_degenerate(&self) -> bool {
        self.is_diagonal()
            && match self.sign {
                Sign::Plus => self.n % 2 == 1,
                Sign::Minus => self.n % 2 == 0,
            }
    }

    /// Angular frequency `n − 2k + m` of the singular functions.
    pub fn frequency(&self) -> i64 {
        self.n as i64 - 2 * self.k as i64 + self.m as i64
    }
}

fn check_order(m: usize, n: usize, k: usize) -> Result<()> {
    if 2 * k > n + m {
        return Err(TomoError::InvalidIndex(format!(
            "order k={k} exceeds floor((n+m)/2) for m={m}, n={n}"
        )));
    }
    Ok(())
}

fn check_nondegenerate(idx: &BasisIndex) -> Result<()> {
    check_order(idx.m, idx.n, idx.k)?;
    if idx.is_degenerate() {
        return Err(TomoError::DegenerateIndex(idx.to_string()));
    }
    Ok(())
}

/// `α = Σ_{p=max(0,k−n)}^{min(k,m)} C(m, p)`.
pub fn alpha(m: usize, n: usize, k: usize) -> Result<u64> {
    check_order(m, n, k)?;
    Ok(alpha_unchecked(m, n, k))
}

fn alpha_unchecked(m: usize, n: usize, k: usize) -> u64 {
    let lo = k.saturating_sub(n);
    let hi = k.min(m);
    (lo..=hi).map(|p| binomial(m as u64, p as u64) as u64).sum()
}

/// `σ = sqrt(8π α / ((n+1) 2^m))`, shared by both signs.
pub fn singular_value(m: usize, n: usize, k: usize) -> Result<f64> {
    check_order(m, n, k)?;
    Ok(singular_value_unchecked(m, n, k))
}

fn singular_value_unchecked(m: usize, n: usize, k: usize) -> f64 {
    let a = alpha_unchecked(m, n, k) as f64;
    (8.0 * PI * a / ((n + 1) as f64 * 2f64.powi(m as i32))).sqrt()
}

/// Unnormalized basis field `S^{(±m)}_{n,k}` in complex components.
pub fn basis_field(idx: BasisIndex) -> Result<PolyField> {
    check_order(idx.m, idx.n, idx.k)?;
    let m = idx.m;
    if idx.is_degenerate() {
        return Ok(PolyField::zero(m));
    }
    let n = idx.n as u32;
    let k = idx.k as i32;
    let z = |kk: i32| zernike_poly(ZernikeIndex::new(n, kk));
    let mut comps = Vec::with_capacity(m + 1);
    for j in 0..=m as i32 {
        let first = z(k - j);
        let comp = if idx.is_diagonal() {
            match idx.sign {
                Sign::Plus => first,
                Sign::Minus => first.scale(Complex64::new(0.0, -1.0)),
            }
        } else {
            let second = z(k - m as i32 + j).conj();
            match idx.sign {
                Sign::Plus => (&first + &second).scale_real(sign(n as i64)),
                Sign::Minus => (&first - &second).scale(Complex64::new(0.0, -1.0)),
            }
        };
        comps.push(comp);
    }
    PolyField::new(m, comps)
}

/// `‖s‖ = sqrt(2^{m+1} π α / (n+1))`, halved inside the root when `2k = m + n`.
pub fn basis_norm(idx: BasisIndex) -> Result<f64> {
    check_nondegenerate(&idx)?;
    Ok(basis_norm_unchecked(&idx))
}

fn basis_norm_unchecked(idx: &BasisIndex) -> f64 {
    let a = alpha_unchecked(idx.m, idx.n, idx.k) as f64;
    let mut sq = 2f64.powi(idx.m as i32 + 1) * PI * a / (idx.n + 1) as f64;
    if idx.is_diagonal() {
        sq *= 0.5;
    }
    sq.sqrt()
}

/// Data-space singular function `f^{(±m)}_{n,k}(β, φ)`.
///
/// Defined on the whole torus; it already satisfies
/// `f(β, φ + π) = (−1)^{m+1} f(β, φ)`.
pub fn singular_function(idx: BasisIndex, beta: f64, phi: f64) -> f64 {
    if idx.is_degenerate() {
        return 0.0;
    }
    let radial = (idx.n + 1) as f64 * (beta - phi);
    let even = idx.n % 2 == 0;
    if idx.is_diagonal() {
        let v = if even { radial.cos() } else { radial.sin() };
        return v / (SQRT_2 * PI);
    }
    let ang = idx.frequency() as f64 * phi;
    let v = match (idx.sign, even) {
        (Sign::Plus, true) => radial.cos() * ang.cos(),
        (Sign::Plus, false) => radial.sin() * ang.sin(),
        (Sign::Minus, true) => radial.cos() * ang.sin(),
        (Sign::Minus, false) => radial.sin() * ang.cos(),
    };
    v / PI
}

/// Singular value, index and field norm bundled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularTriple {
    pub index: BasisIndex,
    pub sigma: f64,
    pub norm: f64,
}

impl SingularTriple {
    pub fn new(index: BasisIndex) -> Result<Self> {
        check_nondegenerate(&index)?;
        Ok(Self {
            index,
            sigma: singular_value_unchecked(index.m, index.n, index.k),
            norm: basis_norm_unchecked(&index),
        })
    }

    /// `[D_m (s/‖s‖)](β, φ) = σ f(β, φ)`.
    pub fn transform(&self, beta: f64, phi: f64) -> f64 {
        self.sigma * singular_function(self.index, beta, phi)
    }
}

/// `dim H_N = (N+1)(N+2+2m)/2`.
pub fn subspace_dim(m: usize, max_degree: usize) -> usize {
    (max_degree + 1) * (max_degree + 2 + 2 * m) / 2
}

/// All non-degenerate indices with `n ≤ N`: `n` ascending, then `k`, `+` before `−`.
pub fn enumerate_basis(m: usize, max_degree: usize) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(subspace_dim(m, max_degree));
    for n in 0..=max_degree {
        for k in 0..=(n + m) / 2 {
            for sign in [Sign::Plus, Sign::Minus] {
                let idx = BasisIndex { sign, m, n, k };
                if !idx.is_degenerate() {
                    out.push(idx);
                }
            }
        }
    }
    out
}

/// Singular triples over [`enumerate_basis`].
pub fn singular_triples(m: usize, max_degree: usize) -> Vec<SingularTriple> {
    enumerate_basis(m, max_degree)
        .into_iter()
        .map(|index| SingularTriple {
            index,
            sigma: singular_value_unchecked(index.m, index.n, index.k),
            norm: basis_norm_unchecked(&index),
        })
        .collect()
}

/// Complex components `[A_m, …, A_0]` of the unnormalized basis field at the
/// point whose Zernike values are tabulated in `table`.
pub fn basis_components_at(idx: BasisIndex, table: &ZernikeTable) -> Vec<Complex64> {
    let m = idx.m;
    let zero = Complex64::new(0.0, 0.0);
    if idx.is_degenerate() {
        return vec![zero; m + 1];
    }
    let n = idx.n;
    let k = idx.k as i64;
    let mi = m as i64;
    (0..=mi)
        .map(|j| {
            let first = table.get(n, k - j);
            if idx.is_diagonal() {
                return match idx.sign {
                    Sign::Plus => first,
                    Sign::Minus => first * Complex64::new(0.0, -1.0),
                };
            }
            let second = table.get(n, k - mi + j).conj();
            match idx.sign {
                Sign::Plus => (first + second) * sign(n as i64),
                Sign::Minus => (first - second) * Complex64::new(0.0, -1.0),
            }
        })
        .collect()
}

/// Real-valued field `Σ c_idx s_idx / ‖s_idx‖` as an exact polynomial field.
pub fn expansion_field(m: usize, terms: &[(BasisIndex, f64)]) -> Result<PolyField> {
    let mut acc = PolyField::zero(m);
    for &(idx, c) in terms {
        if idx.m != m {
            return Err(TomoError::RankMismatch {
                expected: m,
                got: idx.m,
            });
        }
        if c == 0.0 {
            continue;
        }
        let f = basis_field(idx)?;
        let scale = c / basis_norm(idx)?;
        acc = acc.add(&f.scale(Complex64::new(scale, 0.0)))?;
    }
    Ok(acc)
}

/// Boundary-vanishing factor used to build potentials: `1 − z z̄`.
pub fn boundary_factor() -> Poly2 {
    Poly2::boundary_factor()
}
