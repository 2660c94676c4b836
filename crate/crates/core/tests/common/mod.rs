//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;

use fanbeam_tomo::poly::Poly2;
use fanbeam_tomo::tensor::{complex_to_real, eval_field, PolyField};
use fanbeam_tomo::zernike::binomial;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, fa, b, fb, m, fm, whole, tol, 40)
}

/// Point `e^{iβ} − l e^{iφ}` of the chord from vertex `β` in direction `φ`.
pub fn chord_point(beta: f64, phi: f64, l: f64) -> Complex64 {
    Complex64::from_polar(1.0, beta) - Complex64::from_polar(l, phi)
}

pub fn chord_length(beta: f64, phi: f64) -> f64 {
    (2.0 * (beta - phi).cos()).max(0.0)
}

/// `∫ g` along the chord, complex valued, by adaptive Simpson on both parts.
pub fn chord_integral_complex<G: Fn(Complex64) -> Complex64>(g: G, beta: f64, phi: f64, tol: f64) -> Complex64 {
    let len = chord_length(beta, phi);
    let re = adaptive_simpson(|l| g(chord_point(beta, phi, l)).re, 0.0, len, tol);
    let im = adaptive_simpson(|l| g(chord_point(beta, phi, l)).im, 0.0, len, tol);
    Complex64::new(re, im)
}

/// Full Cartesian contraction `Σ_{i₁…i_m} a_{i₁…i_m} ξ^{i₁}⋯ξ^{i_m}` with
/// `ξ = (cos φ, sin φ)`, summed over all `2^m` index tuples. `a` is
/// `[a_m, …, a_0]` where `a_k` has `k` ones.
pub fn contract_all_tuples(m: usize, a: &[f64], phi: f64) -> f64 {
    let xi = [phi.cos(), phi.sin()];
    let mut total = 0.0;
    for bits in 0..(1usize << m) {
        let ones = (0..m).filter(|b| bits >> b & 1 == 0).count();
        let mut prod = a[m - ones];
        for b in 0..m {
            prod *= xi[bits >> b & 1];
        }
        total += prod;
    }
    total
}

/// Transform of a real polynomial field through its Cartesian components,
/// by adaptive quadrature.
pub fn chord_transform_oracle(field: &PolyField, beta: f64, phi: f64, tol: f64) -> f64 {
    let m = field.rank();
    let len = chord_length(beta, phi);
    adaptive_simpson(
        |l| {
            let z = chord_point(beta, phi, l);
            let a = complex_to_real(m, &eval_field(field, z)).expect("real field");
            contract_all_tuples(m, &a, phi)
        },
        0.0,
        len,
        tol,
    )
}

/// `(1/k!) ∂^k_z [z^n (1/z − z̄)^k]`, expanded symbolically (`k ≤ n`).
pub fn differential_representation(n: u32, k: u32) -> Poly2 {
    let mut p = Poly2::zero();
    for j in 0..=k {
        // C(k, j) z^{n−j} (−z̄)^{k−j}
        let c = binomial(k as u64, j as u64) * if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
        p.add_term(n - j, k - j, Complex64::new(c, 0.0));
    }
    let mut fact = 1.0;
    for i in 1..=k {
        p = p.d_z();
        fact *= i as f64;
    }
    p.scale_real(1.0 / fact)
}

/// `(1/2πi) ∮ t^n (t̄ − z̄)^k / (t − z)^{k+1} dt` by the trapezoid rule.
pub fn cauchy_integral(n: u32, k: u32, z: Complex64, nodes: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let t = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
        acc += t.powu(n) * (t.conj() - z.conj()).powu(k) / (t - z).powu(k + 1) * t;
    }
    acc / nodes as f64
}

/// Random point of the disc of radius `r`.
pub fn random_point(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
        if z.norm() <= r {
            return z;
        }
    }
}

/// Random ray `(β, φ)` with `|β − φ| < π/2 − margin`.
pub fn random_ray(rng: &mut ChaCha8Rng, margin: f64) -> (f64, f64) {
    let beta = rng.gen_range(0.0..2.0 * PI);
    let phi = beta + rng.gen_range(-(PI / 2.0 - margin)..(PI / 2.0 - margin));
    (beta, phi)
}

/// Random complex polynomial of total degree ≤ `deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, deg: u32) -> Poly2 {
    let mut p = Poly2::zero();
    for a in 0..=deg {
        for b in 0..=deg - a {
            p.add_term(a, b, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    p
}

/// Random real rank-`m` polynomial field: `A_k = conj(A_{m−k})`.
pub fn random_real_field(rng: &mut ChaCha8Rng, m: usize, deg: u32) -> PolyField {
    let mut comps = vec![Poly2::zero(); m + 1];
    for k in (m + 1) / 2..=m {
        let p = random_poly(rng, deg);
        if 2 * k == m {
            comps[m - k] = (&p + &p.conj()).scale_real(0.5);
        } else {
            comps[k] = p.conj();
            comps[m - k] = p;
        }
    }
    PolyField::new(m, comps).expect("rank matches")
}

/// Trapezoid rule over `[0, 2π)²` with `n × n` nodes.
pub fn torus_trapezoid<F: Fn(f64, f64) -> f64>(f: F, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += f(i as f64 * h, j as f64 * h);
        }
    }
    acc * h * h
}
