//! Symmetric `m`-covariant tensors on the plane in complex coordinates.
//!
//! A symmetric tensor has `m + 1` independent components. Cartesian ones are
//! `a_k = a_{1…1 2…2}` (`k` ones, `m − k` twos); complex ones are
//! `A_k = A_{1…1 2…2}` with index 1 standing for `z` and 2 for `z̄`.
//! Both are stored as pseudovectors in the order `[·_m, ·_{m−1}, …, ·_0]`,
//! so slot `j` of a slice holds component `m − j`. A real tensor satisfies
//! `A_k = conj(A_{m−k})`.

use num_complex::Complex64;

use crate::error::{Result, TomoError};
use crate::grid::GridField;
use crate::poly::Poly2;
use crate::quadrature::DiscQuadrature;
use crate::zernike::{binomial, ComplexPoint};

const REALITY_TOL: f64 = 1e-12;

/// `i^p` for any integer `p`.
pub(crate) fn ipow(p: i64) -> Complex64 {
    match p.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn check_len(m: usize, len: usize) -> Result<()> {
    if len != m + 1 {
        return Err(TomoError::LengthMismatch {
            expected: m + 1,
            got: len,
        });
    }
    Ok(())
}

/// Cartesian components `[a_m, …, a_0]` to complex components `[A_m, …, A_0]`.
pub fn real_to_complex(m: usize, a: &[f64]) -> Result<Vec<Complex64>> {
    check_len(m, a.len())?;
    let comp = |k: usize| a[m - k];
    let scale = 0.5f64.powi(m as i32);
    let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
    for k in 0..=m {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..=(m - k) {
            for s in 0..=k {
                let c = binomial((m - k) as u64, r as u64) * binomial(k as u64, s as u64);
                // (−i)^{k+r−s}
                acc += ipow(-((k + r) as i64 - s as i64)) * (c * comp(r + s));
            }
        }
        out[m - k] = ipow((m - k) as i64) * acc * scale;
    }
    Ok(out)
}

/// Largest violation of `A_k = conj(A_{m−k})`.
pub fn reality_deviation(a: &[Complex64]) -> f64 {
    let m = a.len().saturating_sub(1);
    (0..=m)
        .map(|j| (a[j] - a[m - j].conj()).norm())
        .fold(0.0, f64::max)
}

/// Complex components `[A_m, …, A_0]` of a real tensor to Cartesian `[a_m, …, a_0]`.
pub fn complex_to_real(m: usize, big_a: &[Complex64]) -> Result<Vec<f64>> {
    check_len(m, big_a.len())?;
    let scale = big_a.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let dev = reality_deviation(big_a);
    if dev > REALITY_TOL * scale {
        return Err(TomoError::NotRealValued { deviation: dev });
    }
    Ok(complex_to_real_unchecked(m, big_a))
}

pub(crate) fn complex_to_real_unchecked(m: usize, big_a: &[Complex64]) -> Vec<f64> {
    let comp = |k: usize| big_a[m - k];
    let mut out = vec![0.0; m + 1];
    for k in 0..=m {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..=(m - k) {
            for q in 0..=k {
                let c = binomial((m - k) as u64, p as u64) * binomial(k as u64, q as u64);
                let sgn = if p % 2 == 0 { 1.0 } else { -1.0 };
                acc += comp(p + q) * (c * sgn);
            }
        }
        out[m - k] = (ipow(-((m - k) as i64)) * acc).re;
    }
    out
}

/// `⟨A, B⟩ = 2^m Σ_k C(m,k) A_k B_{m−k}`.
pub fn pointwise_inner(m: usize, a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    check_len(m, a.len())?;
    check_len(m, b.len())?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=m {
        // A_k sits in slot m−k, B_{m−k} in slot k
        acc += a[m - k] * b[k] * binomial(m as u64, k as u64);
    }
    Ok(acc * 2f64.powi(m as i32))
}

/// `|A|² = 2^m Σ_k C(m,k) |A_k|²`.
pub fn pointwise_norm_sq(m: usize, a: &[Complex64]) -> Result<f64> {
    check_len(m, a.len())?;
    let s: f64 = (0..=m)
        .map(|k| binomial(m as u64, k as u64) * a[m - k].norm_sqr())
        .sum();
    Ok(s * 2f64.powi(m as i32))
}

/// Cartesian contraction `a^{i…} b_{i…} = Σ_k C(m,k) a_k b_k`.
pub fn cartesian_inner(m: usize, a: &[f64], b: &[f64]) -> Result<f64> {
    check_len(m, a.len())?;
    check_len(m, b.len())?;
    Ok((0..=m)
        .map(|k| binomial(m as u64, k as u64) * a[m - k] * b[m - k])
        .sum())
}

/// A symmetric tensor field whose complex components are polynomials in `(z, z̄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField {
    rank: usize,
    /// `[A_m, …, A_0]`
    components: Vec<Poly2>,
}

impl PolyField {
    /// Build from components in pseudovector order `[A_m, …, A_0]`.
    pub fn new(rank: usize, components: Vec<Poly2>) -> Result<Self> {
        check_len(rank, components.len())?;
        Ok(Self { rank, components })
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            components: vec![Poly2::zero(); rank + 1],
        }
    }

    /// Rank-0 field from a single polynomial.
    pub fn scalar(p: Poly2) -> Self {
        Self {
            rank: 0,
            components: vec![p],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Component `A_k`.
    pub fn component(&self, k: usize) -> &Poly2 {
        &self.components[self.rank - k]
    }

    /// Components in pseudovector order.
    pub fn components(&self) -> &[Poly2] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly2::is_zero)
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(Poly2::degree).max().unwrap_or(0)
    }

    /// Coefficient-wise violation of `A_k = conj(A_{m−k})`.
    pub fn reality_deviation(&self) -> f64 {
        let m = self.rank;
        (0..=m)
            .map(|k| self.component(k).max_diff(&self.component(m - k).conj()))
            .fold(0.0, f64::max)
    }

    pub fn is_real_valued(&self) -> bool {
        let scale = self
            .components
            .iter()
            .map(Poly2::max_abs_coeff)
            .fold(1.0, f64::max);
        self.reality_deviation() <= REALITY_TOL * scale
    }

    /// Projection onto real-valued fields: `A_k ← (A_k + conj A_{m−k}) / 2`.
    pub fn real_part(&self) -> Self {
        let m = self.rank;
        let comps = (0..=m)
            .rev()
            .map(|k| (self.component(k) + &self.component(m - k).conj()).scale_real(0.5))
            .collect();
        Self {
            rank: m,
            components: comps,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rank: self.rank,
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Componentwise product with a scalar polynomial.
    pub fn mul_poly(&self, p: &Poly2) -> Self {
        Self {
            rank: self.rank,
            components: self.components.iter().map(|c| c * p).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(TomoError::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        Ok(Self {
            rank: self.rank,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// Pointwise value `[A_m(z), …, A_0(z)]`.
pub fn eval_field(field: &PolyField, z: ComplexPoint) -> Vec<Complex64> {
    field.components.iter().map(|p| p.eval(z)).collect()
}

/// Disc inner product `⟨⟨a, b⟩⟩ = ∫∫ ⟨A, conj-reflect(B)⟩ dV²`; for real
/// fields this is the Euclidean `L²` product.
pub fn l2_inner(a: &PolyField, b: &PolyField, quad: &DiscQuadrature) -> Result<Complex64> {
    if a.rank() != b.rank() {
        return Err(TomoError::RankMismatch {
            expected: a.rank(),
            got: b.rank(),
        });
    }
    let m = a.rank();
    let weights: Vec<f64> = (0..=m)
        .map(|k| binomial(m as u64, k as u64) * 2f64.powi(m as i32))
        .collect();
    Ok(quad.integrate(|z| {
        (0..=m)
            .map(|k| a.component(k).eval(z) * b.component(k).eval(z).conj() * weights[k])
            .sum()
    }))
}

/// Symmetric inner differentiation `d` of a rank `m − 1` field `V`:
/// `A_k = ((m−k)/m) ∂_z̄ V_k + (k/m) ∂_z V_{k−1}`, with `V_{−1} = V_m = 0`.
pub fn d_sym(m: usize, v: &PolyField) -> Result<PolyField> {
    if m == 0 {
        return Err(TomoError::RankMismatch {
            expected: 1,
            got: 0,
        });
    }
    if v.rank() + 1 != m {
        return Err(TomoError::RankMismatch {
            expected: m - 1,
            got: v.rank(),
        });
    }
    let mf = m as f64;
    let mut comps = Vec::with_capacity(m + 1);
    for k in (0..=m).rev() {
        let mut a = Poly2::zero();
        if k < m {
            a = &a + &v.component(k).d_zbar().scale_real((m - k) as f64 / mf);
        }
        if k >= 1 {
            a = &a + &v.component(k - 1).d_z().scale_real(k as f64 / mf);
        }
        comps.push(a);
    }
    PolyField::new(m, comps)
}

/// Divergence `δ`: rank `m − 1` field with `(δA)_k = 2(∂_z A_k + ∂_z̄ A_{k+1})`.
pub fn divergence(a: &PolyField) -> Result<PolyField> {
    let m = a.rank();
    if m == 0 {
        return Err(TomoError::RankMismatch {
            expected: 1,
            got: 0,
        });
    }
    let comps = (0..m)
        .rev()
        .map(|k| (&a.component(k).d_z() + &a.component(k + 1).d_zbar()).scale_real(2.0))
        .collect();
    PolyField::new(m - 1, comps)
}

/// Sample a real polynomial field at the pixel centers of an `nx × ny` grid.
pub fn sample_to_grid(field: &PolyField, nx: usize, ny: usize) -> Result<GridField> {
    if !field.is_real_valued() {
        return Err(TomoError::NotRealValued {
            deviation: field.reality_deviation(),
        });
    }
    let m = field.rank();
    GridField::from_fn(m, nx, ny, |x, y| {
        let vals = eval_field(field, Complex64::new(x, y));
        complex_to_real_unchecked(m, &vals)
    })
}
