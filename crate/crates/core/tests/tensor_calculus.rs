mod common;

use common::*;
use fanbeam_tomo::forward::transform_polyfield;
use fanbeam_tomo::quadrature::{DiscQuadrature, QuadratureSpec};
use fanbeam_tomo::tensor::*;
use fanbeam_tomo::Poly2;

fn vanishing_on_boundary(rng: &mut rand_chacha::ChaCha8Rng, m: usize, deg: u32) -> PolyField {
    let w = random_real_field(rng, m, deg);
    w.mul_poly(&Poly2::boundary_factor())
}

#[test]
fn complex_and_cartesian_products_agree() {
    let quad = DiscQuadrature::new(QuadratureSpec::for_degree(12));
    let mut rng = rng(1);
    for m in 0..=3 {
        for _ in 0..3 {
            let a = random_real_field(&mut rng, m, 4);
            let b = random_real_field(&mut rng, m, 4);
            let complex = l2_inner(&a, &b, &quad).unwrap();
            let cart = quad.integrate_real(|z| {
                let ra = complex_to_real(m, &eval_field(&a, z)).unwrap();
                let rb = complex_to_real(m, &eval_field(&b, z)).unwrap();
                // Σ over all index tuples of a_t b_t
                (0..1usize << m)
                    .map(|bits| {
                        let ones = (0..m).filter(|j| bits >> j & 1 == 0).count();
                        ra[m - ones] * rb[m - ones]
                    })
                    .sum()
            });
            assert!(complex.im.abs() <= 1e-10);
            assert!((complex.re - cart).abs() <= 1e-10 * cart.abs().max(1.0), "m={m}");
        }
    }
}

#[test]
fn inner_differentiation_is_minus_adjoint_of_divergence() {
    let quad = DiscQuadrature::new(QuadratureSpec::for_degree(16));
    let mut rng = rng(2);
    for m in 1..=3 {
        for _ in 0..3 {
            let v = vanishing_on_boundary(&mut rng, m - 1, 3);
            let a = random_real_field(&mut rng, m, 4);
            let lhs = l2_inner(&d_sym(m, &v).unwrap(), &a, &quad).unwrap();
            let rhs = l2_inner(&v, &divergence(&a).unwrap(), &quad).unwrap();
            assert!((lhs + rhs).norm() <= 1e-9, "m={m}: {lhs} vs {rhs}");
            assert!(lhs.norm() > 1e-3);
        }
    }
}

#[test]
fn potentials_are_invisible() {
    let mut rng = rng(3);
    for m in 1..=2 {
        for _ in 0..4 {
            let v = vanishing_on_boundary(&mut rng, m - 1, 5);
            let a = d_sym(m, &v).unwrap();
            assert!(a.is_real_valued());
            let mut worst = 0.0f64;
            for _ in 0..200 {
                let (beta, phi) = random_ray(&mut rng, 1e-3);
                worst = worst.max(transform_polyfield(&a, beta, phi).unwrap().abs());
            }
            assert!(worst <= 1e-9, "m={m}: {worst:e}");
            // the independent quadrature route sees the same zero
            let (beta, phi) = random_ray(&mut rng, 0.1);
            assert!(chord_transform_oracle(&a, beta, phi, 1e-12).abs() <= 1e-8);
        }
    }
}

#[test]
fn polynomial_transform_matches_cartesian_quadrature() {
    let mut rng = rng(4);
    for m in 0..=3 {
        let f = random_real_field(&mut rng, m, 6);
        for _ in 0..20 {
            let (beta, phi) = random_ray(&mut rng, 1e-2);
            let got = transform_polyfield(&f, beta, phi).unwrap();
            let want = chord_transform_oracle(&f, beta, phi, 1e-12);
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "m={m}");
        }
    }
}

#[test]
fn component_conversion_round_trips() {
    let mut rng = rng(5);
    for m in 0..=4 {
        let a: Vec<f64> = (0..=m).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
        let back = complex_to_real(m, &real_to_complex(m, &a).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&back) {
            assert!((x - y).abs() <= 1e-13);
        }
        let big = real_to_complex(m, &a).unwrap();
        let again = real_to_complex(m, &complex_to_real(m, &big).unwrap()).unwrap();
        for (x, y) in big.iter().zip(&again) {
            assert!((x - y).norm() <= 1e-13);
        }
        let n1 = pointwise_norm_sq(m, &big).unwrap();
        let n2 = cartesian_inner(m, &a, &a).unwrap();
        assert!((n1 - n2).abs() <= 1e-12);
    }
}
