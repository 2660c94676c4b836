//! Fan-beam transform of symmetric tensor fields on the unit disc.
//!
//! A ray is identified by its vertex `t = e^{iβ}` on the boundary circle and
//! direction angle `φ`; the chord is `ζ(l) = t − l e^{iφ}`, `0 ≤ l ≤ 2cos(β − φ)`.
//! Rays with `|β − φ| > π/2` do not enter the disc and are defined through
//! `[D_m a](β, φ) = (−1)^{m+1} [D_m a](β, φ + π)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Result, TomoError};
use crate::grid::GridField;
use crate::quadrature::{gauss_legendre, LineQuadratureSpec};
use crate::tensor::PolyField;
use crate::zernike::{binomial, is_direct_ray, normalize_angle, sign};

/// How rays are drawn between the vertices of an irregular geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChordMode {
    /// One ray per unordered vertex pair, cast from the lower-index vertex.
    #[default]
    AllPairs,
    /// A fan from every vertex to every other vertex (each chord twice).
    PerVertexFan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanGeometry {
    /// `M + 2` vertices `β_p = pε` with `M + 2` rays each,
    /// `φ_{p,q} = β_p − π/2 + qε/2`, `ε = 2π/(M + 2)`; `size` is `M`.
    Regular { size: usize },
    /// Vertices at arbitrary angles; rays join vertex pairs.
    Irregular { vertices: Vec<f64>, mode: ChordMode },
}

impl ScanGeometry {
    pub fn regular(size: usize) -> Self {
        Self::Regular { size }
    }

    /// `count` vertices at seeded uniformly random angles, sorted.
    pub fn random_vertices(count: usize, seed: u64, mode: ChordMode) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vertices: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        vertices.sort_by(f64::total_cmp);
        Self::Irregular { vertices, mode }
    }

    /// `count` vertices at `iε + u·ε` with `ε = 2π/count` and `u` uniform in
    /// `[−jitter, jitter]`, sorted.
    pub fn jittered_vertices(count: usize, jitter: f64, seed: u64, mode: ChordMode) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eps = 2.0 * PI / count.max(1) as f64;
        let mut vertices: Vec<f64> = (0..count)
            .map(|i| {
                let u = if jitter > 0.0 { rng.gen_range(-jitter..jitter) } else { 0.0 };
                (i as f64 + u) * eps
            })
            .map(|b| b.rem_euclid(2.0 * PI))
            .collect();
        vertices.sort_by(f64::total_cmp);
        Self::Irregular { vertices, mode }
    }

    /// Angular step `ε = 2π/(M + 2)` of a regular geometry.
    pub fn step(&self) -> Option<f64> {
        match self {
            Self::Regular { size } => Some(2.0 * PI / (size + 2) as f64),
            Self::Irregular { .. } => None,
        }
    }

    /// `(β, φ)` of every ray, row-major in `(p, q)` for regular geometries.
    pub fn rays(&self) -> Vec<(f64, f64)> {
        match self {
            Self::Regular { size } => {
                let k = size + 2;
                let eps = 2.0 * PI / k as f64;
                let mut out = Vec::with_capacity(k * k);
                for p in 0..k {
                    let beta = p as f64 * eps;
                    for q in 0..k {
                        out.push((beta, beta - PI / 2.0 + q as f64 * eps / 2.0));
                    }
                }
                out
            }
            Self::Irregular { vertices, mode } => {
                let chord = |i: usize, j: usize| {
                    let ti = Complex64::from_polar(1.0, vertices[i]);
                    let tj = Complex64::from_polar(1.0, vertices[j]);
                    (vertices[i], (ti - tj).arg())
                };
                let n = vertices.len();
                let mut out = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let keep = match mode {
                            ChordMode::AllPairs => i < j,
                            ChordMode::PerVertexFan => i != j,
                        };
                        if keep {
                            out.push(chord(i, j));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn ray_count(&self) -> usize {
        match self {
            Self::Regular { size } => (size + 2) * (size + 2),
            Self::Irregular { vertices, mode } => {
                let n = vertices.len();
                match mode {
                    ChordMode::AllPairs => n * n.saturating_sub(1) / 2,
                    ChordMode::PerVertexFan => n * n.saturating_sub(1),
                }
            }
        }
    }
}

/// Fan-beam measurements of a rank-`m` field, one value per ray of the geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    pub rank: usize,
    pub geometry: ScanGeometry,
    /// Ordered like [`ScanGeometry::rays`].
    pub values: Vec<f64>,
}

impl Sinogram {
    pub fn new(rank: usize, geometry: ScanGeometry, values: Vec<f64>) -> Result<Self> {
        let expected = geometry.ray_count();
        if values.len() != expected {
            return Err(TomoError::LengthMismatch {
                expected,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(TomoError::Parse(format!("non-finite sinogram value {v}")));
        }
        Ok(Self {
            rank,
            geometry,
            values,
        })
    }

    pub fn zeros(rank: usize, geometry: ScanGeometry) -> Self {
        let n = geometry.ray_count();
        Self {
            rank,
            geometry,
            values: vec![0.0; n],
        }
    }

    pub fn rays(&self) -> Vec<(f64, f64)> {
        self.geometry.rays()
    }

    /// `f_{p,q}` of a regular sinogram.
    pub fn regular_value(&self, p: usize, q: usize) -> Option<f64> {
        match self.geometry {
            ScanGeometry::Regular { size } if p < size + 2 && q < size + 2 => {
                Some(self.values[p * (size + 2) + q])
            }
            _ => None,
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `‖self − other‖ / ‖other‖` over the ray values.
    pub fn relative_difference(&self, other: &Self) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(TomoError::ShapeMismatch(format!(
                "{} vs {} rays",
                self.values.len(),
                other.values.len()
            )));
        }
        let d: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let r = other.l2_norm();
        if r == 0.0 {
            return Err(TomoError::ZeroReference);
        }
        Ok(d / r)
    }
}

/// Weights `C(m,k) cos^k φ sin^{m−k} φ` in pseudovector order.
fn direction_weights(m: usize, phi: f64) -> Vec<f64> {
    let (s, c) = phi.sin_cos();
    (0..=m)
        .map(|slot| {
            let k = m - slot;
            binomial(m as u64, k as u64) * c.powi(k as i32) * s.powi((m - k) as i32)
        })
        .collect()
}

/// Reduce a ray to one entering the disc; returns the sign picked up.
fn direct_ray(m: usize, beta: f64, phi: f64) -> (f64, f64, f64) {
    let beta = normalize_angle(beta);
    let phi = normalize_angle(phi);
    if is_direct_ray(beta, phi) {
        (beta, phi, 1.0)
    } else {
        (beta, normalize_angle(phi + PI), sign(m as i64 + 1))
    }
}

/// Bound on the relative sinogram error of [`chord_integrate`] for smooth
/// fields sampled on grids of 256² and finer.
pub const FORWARD_MODEL_TOL: f64 = 2e-3;

/// Numeric chord integral of a sampled field with bilinear interpolation
/// and composite Simpson quadrature.
pub fn chord_integrate(field: &GridField, beta: f64, phi: f64, quad: &LineQuadratureSpec) -> f64 {
    let m = field.rank();
    let (beta, phi, sgn) = direct_ray(m, beta, phi);
    let length = 2.0 * (beta - phi).cos();
    if length <= 0.0 {
        return 0.0;
    }
    let w = direction_weights(m, phi);
    let t = Complex64::from_polar(1.0, beta);
    let e = Complex64::from_polar(1.0, phi);
    let integral = quad.simpson(length, |l| {
        let p = t - e * l;
        let a = field.interpolate(p.re, p.im);
        a.iter().zip(&w).map(|(x, y)| x * y).sum()
    });
    sgn * integral
}

/// Exact transform of a real polynomial field:
/// `Σ_k C(m,k) e^{i(2k−m)φ} ∫ A_k(ζ) |dζ|`, integrated by Gauss–Legendre with
/// enough nodes for the field's degree.
pub fn transform_polyfield(field: &PolyField, beta: f64, phi: f64) -> Result<f64> {
    if !field.is_real_valued() {
        return Err(TomoError::NotRealValued {
            deviation: field.reality_deviation(),
        });
    }
    let nodes = field.degree() as usize / 2 + 1;
    let (x, w) = gauss_legendre(nodes);
    Ok(transform_polyfield_with(field, beta, phi, &x, &w))
}

fn transform_polyfield_with(field: &PolyField, beta: f64, phi: f64, x: &[f64], w: &[f64]) -> f64 {
    let m = field.rank();
    let (beta, phi, sgn) = direct_ray(m, beta, phi);
    let length = 2.0 * (beta - phi).cos();
    if length <= 0.0 {
        return 0.0;
    }
    let t = Complex64::from_polar(1.0, beta);
    let e = Complex64::from_polar(1.0, phi);
    let half = 0.5 * length;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..=m {
        let poly = field.component(k);
        if poly.is_zero() {
            continue;
        }
        let line: Complex64 = x
            .iter()
            .zip(w)
            .map(|(&xi, &wi)| poly.eval(t - e * (half * (xi + 1.0))) * (wi * half))
            .sum();
        let phase = Complex64::from_polar(1.0, (2 * k) as f64 * phi - m as f64 * phi);
        total += phase * line * binomial(m as u64, k as u64);
    }
    sgn * total.re
}

/// Input of [`make_sinogram`].
#[derive(Debug, Clone, Copy)]
pub enum FieldSource<'a> {
    /// Sampled field integrated numerically along each chord.
    Grid(&'a GridField, LineQuadratureSpec),
    /// Exact polynomial field.
    Poly(&'a PolyField),
}

impl FieldSource<'_> {
    pub fn rank(&self) -> usize {
        match self {
            FieldSource::Grid(g, _) => g.rank(),
            FieldSource::Poly(p) => p.rank(),
        }
    }
}

/// Evaluate the transform at every ray of `geometry` (parallel over rays).
pub fn make_sinogram(source: FieldSource<'_>, geometry: &ScanGeometry) -> Result<Sinogram> {
    let rays = geometry.rays();
    let values: Vec<f64> = match source {
        FieldSource::Grid(g, quad) => rays
            .par_iter()
            .map(|&(b, p)| chord_integrate(g, b, p, &quad))
            .collect(),
        FieldSource::Poly(f) => {
            if !f.is_real_valued() {
                return Err(TomoError::NotRealValued {
                    deviation: f.reality_deviation(),
                });
            }
            let (x, w) = gauss_legendre(f.degree() as usize / 2 + 1);
            rays.par_iter()
                .map(|&(b, p)| transform_polyfield_with(f, b, p, &x, &w))
                .collect()
        }
    };
    Sinogram::new(source.rank(), geometry.clone(), values)
}

/// Sinogram from a closed-form data function `f(β, φ)`.
pub fn make_sinogram_fn<F>(rank: usize, geometry: &ScanGeometry, f: F) -> Result<Sinogram>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let values = geometry.rays().par_iter().map(|&(b, p)| f(b, p)).collect();
    Sinogram::new(rank, geometry.clone(), values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// I.i.d. zero-mean uniform noise rescaled to the requested relative norm.
    Uniform,
    /// Counting noise: `|f|·counts_per_unit` is resampled as a Poisson count.
    Poisson { counts_per_unit: f64 },
}

impl NoiseModel {
    pub const DEFAULT_COUNTS_PER_UNIT: f64 = 1e4;

    pub fn poisson() -> Self {
        Self::Poisson {
            counts_per_unit: Self::DEFAULT_COUNTS_PER_UNIT,
        }
    }
}

/// Noisy copy of `s` together with the realized `‖noise‖ / ‖s‖`.
///
/// For the uniform model the realized ratio equals `level`. For the Poisson
/// model the perturbation size is set by `counts_per_unit`; `level = 0` still
/// returns the input unchanged. Use [`poisson_counts_for_level`] to pick a
/// count scale that targets a given level.
pub fn add_noise(s: &Sinogram, model: NoiseModel, level: f64, seed: u64) -> Result<(Sinogram, f64)> {
    if level < 0.0 || !level.is_finite() {
        return Err(TomoError::NegativeLevel(level));
    }
    if level == 0.0 {
        return Ok((s.clone(), 0.0));
    }
    let norm = s.l2_norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = match model {
        NoiseModel::Uniform => {
            let raw: Vec<f64> = s.values.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rn = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            let scale = if rn > 0.0 { level * norm / rn } else { 0.0 };
            s.values.iter().zip(&raw).map(|(v, r)| v + scale * r).collect()
        }
        NoiseModel::Poisson { counts_per_unit } => {
            if counts_per_unit <= 0.0 || !counts_per_unit.is_finite() {
                return Err(TomoError::Config(format!(
                    "counts_per_unit must be positive, got {counts_per_unit}"
                )));
            }
            s.values
                .iter()
                .map(|&v| {
                    let lambda = v.abs() * counts_per_unit;
                    if lambda == 0.0 {
                        return 0.0;
                    }
                    let count: f64 = Poisson::new(lambda).map(|d| d.sample(&mut rng)).unwrap_or(lambda);
                    v.signum() * count / counts_per_unit
                })
                .collect()
        }
    };
    let noisy = Sinogram {
        rank: s.rank,
        geometry: s.geometry.clone(),
        values,
    };
    let realized = if norm > 0.0 {
        noisy.relative_difference(s)?
    } else {
        0.0
    };
    Ok((noisy, realized))
}

/// Count scale whose expected Poisson perturbation has relative norm `level`:
/// `E‖noise‖² = Σ|f| / c`, so `c = Σ|f| / (level² ‖f‖²)`.
pub fn poisson_counts_for_level(s: &Sinogram, level: f64) -> Result<f64> {
    if level <= 0.0 || !level.is_finite() {
        return Err(TomoError::NegativeLevel(level));
    }
    let l1: f64 = s.values.iter().map(|v| v.abs()).sum();
    let l2 = s.l2_norm();
    if l2 == 0.0 {
        return Err(TomoError::ZeroReference);
    }
    Ok(l1 / (level * level * l2 * l2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{basis_field, enumerate_basis, BasisIndex, SingularTriple};
    use crate::poly::Poly2;
    use crate::tensor::{d_sym, sample_to_grid};
    use crate::zernike::{fanbeam_zernike, zernike_poly, ZernikeIndex};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one() -> PolyField {
        PolyField::scalar(Poly2::constant(c(1.0, 0.0)))
    }

    fn random_direct_ray(rng: &mut ChaCha8Rng) -> (f64, f64) {
        let b = rng.gen_range(0.0..2.0 * PI);
        let p = b + rng.gen_range(-1.5..1.5);
        (b, normalize_angle(p))
    }

    #[test]
    fn regular_geometry_layout() {
        let g = ScanGeometry::regular(2);
        let rays = g.rays();
        assert_eq!(rays.len(), 16);
        assert_eq!(g.ray_count(), 16);
        let eps = PI / 2.0;
        assert_abs_diff_eq!(rays[4 + 3].0, eps);
        assert_abs_diff_eq!(rays[4 + 3].1, eps - PI / 2.0 + 1.5 * eps);
    }

    #[test]
    fn irregular_geometry_rays_join_vertices() {
        let g = ScanGeometry::random_vertices(20, 7, ChordMode::AllPairs);
        let rays = g.rays();
        assert_eq!(rays.len(), 190);
        let ScanGeometry::Irregular { vertices, .. } = &g else {
            unreachable!()
        };
        for &(b, p) in &rays {
            assert!(is_direct_ray(b, p));
            let end = Complex64::from_polar(1.0, b) - Complex64::from_polar(2.0 * (b - p).cos(), p);
            assert_abs_diff_eq!(end.norm(), 1.0, epsilon = 1e-12);
            let hit = vertices.iter().any(|&v| (Complex64::from_polar(1.0, v) - end).norm() < 1e-9);
            assert!(hit);
        }
        let fan = ScanGeometry::random_vertices(20, 7, ChordMode::PerVertexFan);
        assert_eq!(fan.rays().len(), 380);
        assert_eq!(fan.ray_count(), 380);
    }

    #[test]
    fn jittered_vertices_stay_near_lattice() {
        let g = ScanGeometry::jittered_vertices(20, 0.25, 3, ChordMode::AllPairs);
        let ScanGeometry::Irregular { vertices, .. } = &g else {
            unreachable!()
        };
        assert_eq!(vertices.len(), 20);
        let eps = 2.0 * PI / 20.0;
        for v in vertices {
            let d = (v / eps - (v / eps).round()).abs();
            assert!(d <= 0.25 + 1e-12);
        }
        let plain = ScanGeometry::jittered_vertices(4, 0.0, 0, ChordMode::AllPairs);
        let ScanGeometry::Irregular { vertices, .. } = plain else {
            unreachable!()
        };
        assert_abs_diff_eq!(vertices[1], PI / 2.0);
    }

    #[test]
    fn constant_field_gives_chord_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = sample_to_grid(&one(), 256, 256).unwrap();
        let quad = LineQuadratureSpec::default();
        for _ in 0..20 {
            let (b, p) = random_direct_ray(&mut rng);
            let want = 2.0 * (b - p).cos();
            assert_abs_diff_eq!(transform_polyfield(&one(), b, p).unwrap(), want, epsilon = 1e-13);
            assert_abs_diff_eq!(chord_integrate(&g, b, p, &quad), want, epsilon = 1e-2);
        }
    }

    #[test]
    fn zernike_chord_on_grid() {
        let z = zernike_poly(ZernikeIndex::new(2, 1));
        let f = PolyField::scalar(z);
        let g = sample_to_grid(&f, 512, 512).unwrap();
        let v = chord_integrate(&g, 0.0, 0.0, &LineQuadratureSpec::default());
        assert_abs_diff_eq!(v, 2.0 / 3.0, epsilon = 1e-3);
        assert_abs_diff_eq!(transform_polyfield(&f, 0.0, 0.0).unwrap(), 2.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn scalar_zernike_transforms_match_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..=8u32 {
            for k in 0..=n as i32 {
                let idx = ZernikeIndex::new(n, k);
                let z = zernike_poly(idx);
                // real and imaginary parts as separate real scalar fields
                let re = PolyField::scalar((&z + &z.conj()).scale_real(0.5));
                let im = PolyField::scalar((&z - &z.conj()).scale(c(0.0, -0.5)));
                for _ in 0..10 {
                    let b = rng.gen_range(0.0..2.0 * PI);
                    let p = rng.gen_range(0.0..2.0 * PI);
                    let want = fanbeam_zernike(idx, b, p);
                    let got = c(
                        transform_polyfield(&re, b, p).unwrap(),
                        transform_polyfield(&im, b, p).unwrap(),
                    );
                    assert!((got - want).norm() < 1e-12, "{idx:?} {b} {p}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn basis_fields_map_to_singular_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in 0..=2 {
            for idx in enumerate_basis(m, 6) {
                let t = SingularTriple::new(idx).unwrap();
                let s = basis_field(idx).unwrap().scale(c(1.0 / t.norm, 0.0));
                for _ in 0..20 {
                    let b = rng.gen_range(0.0..2.0 * PI);
                    let p = rng.gen_range(0.0..2.0 * PI);
                    let got = transform_polyfield(&s, b, p).unwrap();
                    assert_abs_diff_eq!(got, t.transform(b, p), epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn potentials_are_invisible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bf = Poly2::boundary_factor();
        for m in 1..=2usize {
            let mut comps = Vec::new();
            for _ in 0..m {
                let mut w = Poly2::zero();
                for p in 0..=3u32 {
                    for q in 0..=(3 - p) {
                        w.add_term(p, q, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                    }
                }
                comps.push(&bf * &w);
            }
            let v = PolyField::new(m - 1, comps).unwrap().real_part();
            let a = d_sym(m, &v).unwrap();
            assert!(!a.is_zero());
            for _ in 0..50 {
                let (b, p) = random_direct_ray(&mut rng);
                assert!(transform_polyfield(&a, b, p).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn extension_rule_holds_on_all_paths() {
        let idx = BasisIndex::plus(1, 2, 1).unwrap();
        let f = basis_field(idx).unwrap();
        let g = sample_to_grid(&f, 128, 128).unwrap();
        let quad = LineQuadratureSpec { intervals: 256 };
        for &(b, p) in &[(0.4, 0.1), (2.0, 2.9), (5.5, 4.3)] {
            let a = transform_polyfield(&f, b, p).unwrap();
            let e = transform_polyfield(&f, b, p + PI).unwrap();
            assert_abs_diff_eq!(e, a, epsilon = 1e-13); // (−1)^{m+1} = +1 for m = 1
            let a = chord_integrate(&g, b, p, &quad);
            let e = chord_integrate(&g, b, p + PI, &quad);
            assert_abs_diff_eq!(e, a, epsilon = 1e-13);
        }
        let s = PolyField::scalar(zernike_poly(ZernikeIndex::new(2, 1)));
        assert_abs_diff_eq!(
            transform_polyfield(&s, 1.0, 1.2 + PI).unwrap(),
            -transform_polyfield(&s, 1.0, 1.2).unwrap(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn grid_refinement_converges() {
        let idx = BasisIndex::minus(2, 3, 1).unwrap();
        let f = basis_field(idx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rays: Vec<_> = (0..20).map(|_| random_direct_ray(&mut rng)).collect();
        let quad = LineQuadratureSpec::default();
        let err = |n: usize| {
            let g = sample_to_grid(&f, n, n).unwrap();
            rays.iter()
                .map(|&(b, p)| (chord_integrate(&g, b, p, &quad) - transform_polyfield(&f, b, p).unwrap()).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(64), err(256));
        assert!(e2 < e1 / 3.0, "{e1} -> {e2}");
    }

    #[test]
    fn sinogram_assembly() {
        let geom = ScanGeometry::regular(6);
        let zero = PolyField::zero(1);
        let s = make_sinogram(FieldSource::Poly(&zero), &geom).unwrap();
        assert!(s.values.iter().all(|&v| v == 0.0));
        let f = PolyField::scalar(zernike_poly(ZernikeIndex::new(2, 1)));
        let s = make_sinogram(FieldSource::Poly(&f), &geom).unwrap();
        for (i, &(b, p)) in geom.rays().iter().enumerate() {
            assert_abs_diff_eq!(s.values[i], fanbeam_zernike(ZernikeIndex::new(2, 1), b, p).re, epsilon = 1e-13);
        }
        assert_eq!(s.regular_value(1, 2), Some(s.values[8 + 2]));
        assert!(Sinogram::new(0, geom, vec![0.0; 3]).is_err());
    }

    #[test]
    fn noise_contract() {
        let geom = ScanGeometry::regular(10);
        let f = PolyField::scalar(zernike_poly(ZernikeIndex::new(2, 1)));
        let s = make_sinogram(FieldSource::Poly(&f), &geom).unwrap();
        let (same, r) = add_noise(&s, NoiseModel::Uniform, 0.0, 1).unwrap();
        assert_eq!(same, s);
        assert_eq!(r, 0.0);
        let (n1, r1) = add_noise(&s, NoiseModel::Uniform, 0.1, 42).unwrap();
        assert_abs_diff_eq!(r1, 0.1, epsilon = 1e-12);
        let (n2, _) = add_noise(&s, NoiseModel::Uniform, 0.1, 42).unwrap();
        assert_eq!(n1, n2);
        let (n3, _) = add_noise(&s, NoiseModel::Uniform, 0.1, 43).unwrap();
        assert_ne!(n1, n3);
        assert!(matches!(
            add_noise(&s, NoiseModel::Uniform, -0.1, 1),
            Err(TomoError::NegativeLevel(_))
        ));
        let (p1, rp) = add_noise(&s, NoiseModel::poisson(), 0.05, 9).unwrap();
        let (p2, _) = add_noise(&s, NoiseModel::poisson(), 0.05, 9).unwrap();
        assert_eq!(p1, p2);
        assert!(rp > 0.0 && rp < 0.1);
        let counts = poisson_counts_for_level(&s, 0.05).unwrap();
        let (_, rt) = add_noise(&s, NoiseModel::Poisson { counts_per_unit: counts }, 0.05, 9).unwrap();
        assert!((rt - 0.05).abs() < 0.01, "{rt}");
    }
}
