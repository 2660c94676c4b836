//! Coefficient recovery from fan-beam data and reconstruction on a grid.
//!
//! A reconstructed field is `Σ c_idx s_idx / ‖s_idx‖` over
//! [`enumerate_basis`]; its data are `Σ c_idx σ_idx f_idx`. Three solvers are
//! provided:
//!
//! * [`invert_scalar_regular`]: closed-form double sums for scalar data on a
//!   regular geometry, evaluated directly or through a 2D FFT;
//! * [`invert_projection`]: `c = σ⁻¹ ⟨f, f_idx⟩` by lattice quadrature on the
//!   torus, any rank, regular geometry;
//! * [`invert_lsq`]: least squares against the closed-form singular system,
//!   any rank and geometry.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::basis::{
    basis_components_at, basis_field, enumerate_basis, singular_function, singular_triples,
    subspace_dim, BasisIndex, Sign, SingularTriple,
};
use crate::error::{Result, TomoError};
use crate::forward::{make_sinogram_fn, ScanGeometry, Sinogram};
use crate::grid::GridField;
use crate::quadrature::{DiscQuadrature, QuadratureSpec};
use crate::tensor::{cartesian_inner, complex_to_real_unchecked, eval_field, PolyField};
use crate::zernike::{sign, ZernikeTable};

/// Expansion coefficients over `enumerate_basis(m, N)`, stored in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    m: usize,
    max_degree: usize,
    values: Vec<f64>,
}

impl CoefficientSet {
    pub fn zeros(m: usize, max_degree: usize) -> Self {
        Self {
            m,
            max_degree,
            values: vec![0.0; subspace_dim(m, max_degree)],
        }
    }

    /// Values in canonical order.
    pub fn from_values(m: usize, max_degree: usize, values: Vec<f64>) -> Result<Self> {
        let expected = subspace_dim(m, max_degree);
        if values.len() != expected {
            return Err(TomoError::LengthMismatch {
                expected,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(TomoError::Parse(format!("non-finite coefficient {v}")));
        }
        Ok(Self {
            m,
            max_degree,
            values,
        })
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn indices(&self) -> Vec<BasisIndex> {
        enumerate_basis(self.m, self.max_degree)
    }

    /// `(index, value)` pairs in canonical order.
    pub fn entries(&self) -> Vec<(BasisIndex, f64)> {
        self.indices().into_iter().zip(self.values.iter().copied()).collect()
    }

    /// Position of `idx` in canonical order, if it belongs to this set.
    pub fn position(&self, idx: BasisIndex) -> Option<usize> {
        if idx.m != self.m || idx.n > self.max_degree || 2 * idx.k > idx.n + idx.m || idx.is_degenerate() {
            return None;
        }
        let offset = if idx.n == 0 { 0 } else { subspace_dim(self.m, idx.n - 1) };
        let minus = usize::from(idx.sign == Sign::Minus && !idx.is_diagonal());
        Some(offset + 2 * idx.k + minus)
    }

    pub fn get(&self, idx: BasisIndex) -> Option<f64> {
        self.position(idx).map(|p| self.values[p])
    }

    pub fn set(&mut self, idx: BasisIndex, value: f64) -> Result<()> {
        let p = self
            .position(idx)
            .ok_or_else(|| TomoError::InvalidIndex(format!("{idx} not in set (m={}, N={})", self.m, self.max_degree)))?;
        self.values[p] = value;
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.m != other.m || self.max_degree != other.max_degree {
            return Err(TomoError::ShapeMismatch(format!(
                "(m={}, N={}) vs (m={}, N={})",
                self.m, self.max_degree, other.m, other.max_degree
            )));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Number of non-zero coefficients.
    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }

    /// The represented field as an exact polynomial field.
    pub fn to_polyfield(&self) -> Result<PolyField> {
        let mut acc = PolyField::zero(self.m);
        for (idx, c) in self.entries() {
            if c == 0.0 {
                continue;
            }
            let t = SingularTriple::new(idx)?;
            acc = acc.add(&basis_field(idx)?.scale(Complex64::new(c / t.norm, 0.0)))?;
        }
        Ok(acc)
    }
}

/// Truncated-SVD regularization rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    /// Keep the `count` terms with the largest singular values.
    MaxTerms(usize),
    /// Keep terms whose 1-based position in the σ order is at most `1/γ`.
    Threshold { gamma: f64 },
}

impl TruncationPolicy {
    pub fn kept_terms(&self, available: usize) -> Result<usize> {
        match *self {
            TruncationPolicy::MaxTerms(c) => Ok(c.min(available)),
            TruncationPolicy::Threshold { gamma } => {
                if gamma <= 0.0 || !gamma.is_finite() {
                    return Err(TomoError::Config(format!("gamma must be positive, got {gamma}")));
                }
                let lim = (1.0 / gamma).floor();
                Ok(if lim >= available as f64 { available } else { lim as usize })
            }
        }
    }
}

/// Canonical positions sorted by descending σ, ties in canonical order.
pub fn sigma_order(m: usize, max_degree: usize) -> Vec<usize> {
    let triples = singular_triples(m, max_degree);
    let mut order: Vec<usize> = (0..triples.len()).collect();
    order.sort_by(|&a, &b| {
        triples[b]
            .sigma
            .partial_cmp(&triples[a].sigma)
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Zero every coefficient beyond the policy limit in σ order.
pub fn truncate(c: &CoefficientSet, policy: TruncationPolicy) -> Result<CoefficientSet> {
    let keep = policy.kept_terms(c.len())?;
    let order = sigma_order(c.m, c.max_degree);
    let mut out = CoefficientSet::zeros(c.m, c.max_degree);
    for &pos in &order[..keep] {
        out.values[pos] = c.values[pos];
    }
    Ok(out)
}

/// Evaluation strategy for the closed-form scalar sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScalarMethod {
    /// Direct double summation, `O(N⁴)`.
    #[default]
    Direct,
    /// One zero-padded 2D FFT of the sinogram, `O(N² log N)`.
    Fft,
}

fn regular_size(s: &Sinogram) -> Result<usize> {
    match s.geometry {
        ScanGeometry::Regular { size } => Ok(size),
        ScanGeometry::Irregular { .. } => Err(TomoError::Geometry(
            "a regular geometry is required; use invert_lsq for irregular data".into(),
        )),
    }
}

/// Raw `(a_{n,k}, b_{n,k})` of the scalar polynomial
/// `2 Σ (a cos(lψ) − b sin(lψ)) (−1)^k r^l P_k^{(0,l)}(2r²−1)`, `l = n − 2k`,
/// for `0 ≤ k ≤ ⌊n/2⌋`, indexed `[n][k]`.
fn scalar_raw_coefficients(s: &Sinogram, max_degree: usize, method: ScalarMethod) -> Result<Vec<Vec<(f64, f64)>>> {
    let size = regular_size(s)?;
    let kk = size + 2;
    let eps = 2.0 * PI / kk as f64;
    let norm = 1.0 / (kk * kk) as f64;
    let mut out = Vec::with_capacity(max_degree + 1);
    match method {
        ScalarMethod::Direct => {
            for n in 0..=max_degree {
                let row: Vec<(f64, f64)> = (0..=n / 2)
                    .into_par_iter()
                    .map(|k| {
                        let u = (2 * k) as f64 - n as f64;
                        let v = (2 * k + 1) as f64 / 2.0;
                        let (mut ss, mut cs) = (0.0, 0.0);
                        for p in 0..kk {
                            for q in 0..kk {
                                let f = s.values[p * kk + q];
                                let (si, co) = (eps * (p as f64 * u + q as f64 * v)).sin_cos();
                                ss += f * si;
                                cs += f * co;
                            }
                        }
                        let scale = (n + 1) as f64 * norm;
                        (sign(k as i64) * scale * ss, sign(k as i64 + 1) * scale * cs)
                    })
                    .collect();
                out.push(row);
            }
        }
        ScalarMethod::Fft => {
            let g = sinogram_fft(&s.values, kk);
            let w = 2 * kk;
            for n in 0..=max_degree {
                let row = (0..=n / 2)
                    .map(|k| {
                        let u = (2 * k as i64 - n as i64).rem_euclid(kk as i64) as usize;
                        let v = (2 * k + 1) % w;
                        let val = g[u * w + v];
                        let scale = (n + 1) as f64 * norm;
                        (sign(k as i64) * scale * val.im, sign(k as i64 + 1) * scale * val.re)
                    })
                    .collect();
                out.push(row);
            }
        }
    }
    Ok(out)
}

/// `G[u][v] = Σ_{p,q} f_{p,q} e^{2πi(pu/K + qv/(2K))}` on a `K × 2K` grid.
fn sinogram_fft(values: &[f64], kk: usize) -> Vec<Complex64> {
    let w = 2 * kk;
    let mut buf = vec![Complex64::new(0.0, 0.0); kk * w];
    for p in 0..kk {
        for q in 0..kk {
            buf[p * w + q] = Complex64::new(values[p * kk + q], 0.0);
        }
    }
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft_inverse(w);
    for row in buf.chunks_mut(w) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_inverse(kk);
    let mut col = vec![Complex64::new(0.0, 0.0); kk];
    for v in 0..w {
        for p in 0..kk {
            col[p] = buf[p * w + v];
        }
        col_fft.process(&mut col);
        for p in 0..kk {
            buf[p * w + v] = col[p];
        }
    }
    buf
}

/// Scalar coefficients from regular fan-beam data by the closed-form double
/// sums; exact for data of a polynomial of degree `≤ N` when `N ≤ M`.
pub fn invert_scalar_regular(s: &Sinogram, max_degree: usize, method: ScalarMethod) -> Result<CoefficientSet> {
    if s.rank != 0 {
        return Err(TomoError::RankMismatch {
            expected: 0,
            got: s.rank,
        });
    }
    let size = regular_size(s)?;
    if max_degree > size {
        return Err(TomoError::DegreeTooLarge {
            degree: max_degree,
            limit: size,
        });
    }
    let raw = scalar_raw_coefficients(s, max_degree, method)?;
    let mut out = CoefficientSet::zeros(0, max_degree);
    for (n, row) in raw.iter().enumerate() {
        let full = (2.0 * PI / (n + 1) as f64).sqrt();
        for (k, &(a, b)) in row.iter().enumerate() {
            if 2 * k == n {
                out.set(BasisIndex::plus(0, n, k)?, a * (PI / (n + 1) as f64).sqrt())?;
            } else {
                out.set(BasisIndex::plus(0, n, k)?, sign(n as i64) * a * full)?;
                out.set(BasisIndex::minus(0, n, k)?, -b * full)?;
            }
        }
    }
    Ok(out)
}

/// Largest degree `N` whose rank-`m` solenoidal fields are determined by the
/// chords joining `vertices` boundary points: `vertices − 2` for functions and
/// `⌊(vertices − 3)/2⌋` for `m ≥ 1`.
pub fn degree_limit(m: usize, vertices: usize) -> usize {
    if m == 0 {
        vertices.saturating_sub(2)
    } else {
        vertices.saturating_sub(3) / 2
    }
}

/// `c_idx = σ⁻¹ ⟨f, f_idx⟩` over `[0, 2π)²` by the lattice rule of a regular
/// geometry. The data are extended to the full torus with
/// `f(β, φ + π) = (−1)^{m+1} f(β, φ)`, which on the lattice is the index
/// shift `q → q + M + 2`.
pub fn invert_projection(s: &Sinogram, m: usize, max_degree: usize) -> Result<CoefficientSet> {
    if s.rank != m {
        return Err(TomoError::RankMismatch {
            expected: m,
            got: s.rank,
        });
    }
    let size = regular_size(s)?;
    let limit = degree_limit(m, size + 2);
    if max_degree > limit {
        return Err(TomoError::DegreeTooLarge {
            degree: max_degree,
            limit,
        });
    }
    let kk = size + 2;
    let eps = 2.0 * PI / kk as f64;
    let ext = sign(m as i64 + 1);
    let weight = eps * eps / 2.0;
    let triples = singular_triples(m, max_degree);
    let values: Vec<f64> = triples
        .par_iter()
        .map(|t| {
            let mut acc = 0.0;
            for p in 0..kk {
                let beta = p as f64 * eps;
                for j in 0..2 * kk {
                    let f = if j < kk {
                        s.values[p * kk + j]
                    } else {
                        ext * s.values[p * kk + j - kk]
                    };
                    if f == 0.0 {
                        continue;
                    }
                    let phi = beta - PI / 2.0 + j as f64 * eps / 2.0;
                    acc += f * singular_function(t.index, beta, phi);
                }
            }
            acc * weight / t.sigma
        })
        .collect();
    CoefficientSet::from_values(m, max_degree, values)
}

/// Diagnostics of a least-squares solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsqReport {
    pub rows: usize,
    pub unknowns: usize,
    /// Ratio of largest to smallest singular value of the design matrix.
    pub condition: f64,
    pub residual: f64,
}

/// Least-squares fit of `Σ c σ f_idx` to arbitrary ray data, with optional
/// ridge `λ‖c‖²`. Without a ridge a rank-deficient system is an error.
pub fn invert_lsq(s: &Sinogram, m: usize, max_degree: usize, ridge: f64) -> Result<(CoefficientSet, LsqReport)> {
    if s.rank != m {
        return Err(TomoError::RankMismatch {
            expected: m,
            got: s.rank,
        });
    }
    if ridge < 0.0 || !ridge.is_finite() {
        return Err(TomoError::Config(format!("ridge must be non-negative, got {ridge}")));
    }
    let rays = s.rays();
    let triples = singular_triples(m, max_degree);
    let (rows, cols) = (rays.len(), triples.len());
    let a = DMatrix::from_fn(rows, cols, |r, c| {
        let (b, p) = rays[r];
        triples[c].transform(b, p)
    });
    let rhs = DVector::from_column_slice(&s.values);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = if rows < cols {
        0.0
    } else {
        sv.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    log::info!("lsq: {rows} rays, {cols} unknowns, condition {condition:.3e}, ridge {ridge:e}");
    if ridge == 0.0 && (smax == 0.0 || condition > 1e12) {
        return Err(TomoError::RankDeficient { condition });
    }
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let vt = svd.v_t.as_ref().expect("right singular vectors requested");
    let utb = u.transpose() * &rhs;
    let mut x = DVector::zeros(cols);
    for i in 0..sv.len() {
        let si = sv[i];
        let denom = si * si + ridge;
        if denom == 0.0 {
            continue;
        }
        let scale = si * utb[i] / denom;
        x += vt.row(i).transpose() * scale;
    }
    let residual = (&a * &x - &rhs).norm();
    let report = LsqReport {
        rows,
        unknowns: cols,
        condition,
        residual,
    };
    Ok((CoefficientSet::from_values(m, max_degree, x.iter().copied().collect())?, report))
}

/// Closed-form data `Σ c σ f_idx` of a coefficient set on a geometry.
pub fn synthesize_sinogram(c: &CoefficientSet, geometry: &ScanGeometry) -> Result<Sinogram> {
    let terms: Vec<(SingularTriple, f64)> = c
        .entries()
        .into_iter()
        .filter(|(_, v)| *v != 0.0)
        .map(|(i, v)| SingularTriple::new(i).map(|t| (t, v)))
        .collect::<Result<_>>()?;
    make_sinogram_fn(c.m, geometry, |b, p| terms.iter().map(|(t, v)| v * t.transform(b, p)).sum())
}

/// Sample `Σ c s/‖s‖` at the pixel centers of an `nx × ny` grid.
pub fn reconstruct_grid(c: &CoefficientSet, nx: usize, ny: usize) -> Result<GridField> {
    let m = c.m;
    let terms: Vec<(BasisIndex, f64)> = c
        .entries()
        .into_iter()
        .filter(|(_, v)| *v != 0.0)
        .map(|(i, v)| SingularTriple::new(i).map(|t| (i, v / t.norm)))
        .collect::<Result<_>>()?;
    let max_n = terms.iter().map(|(i, _)| i.n).max().unwrap_or(0);
    GridField::from_fn(m, nx, ny, |x, y| {
        let table = ZernikeTable::new(max_n, Complex64::new(x, y));
        let mut acc = vec![Complex64::new(0.0, 0.0); m + 1];
        for &(idx, w) in &terms {
            for (a, v) in acc.iter_mut().zip(basis_components_at(idx, &table)) {
                *a += v * w;
            }
        }
        complex_to_real_unchecked(m, &acc)
    })
}

/// Orthogonal projection of a field given pointwise in Cartesian components
/// onto the basis up to degree `N`: `c_idx = ⟨⟨a, s_idx⟩⟩ / ‖s_idx‖`.
pub fn project_field<F>(m: usize, max_degree: usize, quad: QuadratureSpec, field: F) -> Result<CoefficientSet>
where
    F: Fn(f64, f64) -> Vec<f64> + Sync,
{
    let rule = DiscQuadrature::new(quad);
    let samples: Vec<Vec<f64>> = rule.points.par_iter().map(|z| field(z.re, z.im)).collect();
    if let Some(s) = samples.iter().find(|s| s.len() != m + 1) {
        return Err(TomoError::LengthMismatch {
            expected: m + 1,
            got: s.len(),
        });
    }
    let triples = singular_triples(m, max_degree);
    let values: Vec<f64> = triples
        .par_iter()
        .map(|t| {
            let f = basis_field(t.index).expect("enumerated index is valid");
            let mut acc = 0.0;
            for ((z, w), a) in rule.points.iter().zip(&rule.weights).zip(&samples) {
                let b = complex_to_real_unchecked(m, &eval_field(&f, *z));
                acc += w * cartesian_inner(m, a, &b).expect("lengths checked");
            }
            acc / t.norm
        })
        .collect();
    CoefficientSet::from_values(m, max_degree, values)
}
