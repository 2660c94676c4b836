//! Zernike polynomials in complex form: values, boundary behaviour,
//! orthogonality and the closed-form fan-beam transform.

use std::error::Error;

use fanbeam_tomo::quadrature::QuadratureSpec;
use fanbeam_tomo::zernike::*;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let z = Complex64::new(0.3, 0.2);
    println!("Z^{{n,k}} at z = {z}");
    for n in 0..=4u32 {
        let row: Vec<String> = (0..=n as i32)
            .map(|k| {
                let v = zernike_eval(ZernikeIndex::new(n, k), z);
                format!("{:+.4}{:+.4}i", v.re, v.im)
            })
            .collect();
        println!("  n={n}: {}", row.join("  "));
    }

    // monomial form of a low-order polynomial
    let p = zernike_poly(ZernikeIndex::new(4, 1));
    let terms: Vec<String> = p.terms().map(|((a, b), c)| format!("{:+}·z^{a}z̄^{b}", c.re)).collect();
    println!("Z^{{4,1}} = {}", terms.join(" "));

    let t = Complex64::from_polar(1.0, 0.7);
    let idx = ZernikeIndex::new(5, 1);
    println!("on the circle: Z^{{5,1}}(t) = {:.6}, -t^3 = {:.6}", zernike_eval(idx, t), -t.powi(3));

    let quad = QuadratureSpec::new(12, 16);
    for (a, b) in [((3, 1), (3, 1)), ((3, 1), (3, 2)), ((4, 2), (2, 1))] {
        let ia = ZernikeIndex::new(a.0, a.1);
        let ib = ZernikeIndex::new(b.0, b.1);
        println!("<<Z{a:?}, Z{b:?}>> = {:.3e}", zernike_inner(ia, ib, quad)?.re);
    }

    let (beta, phi) = (1.1, 0.6);
    for k in 0..=3 {
        let v = fanbeam_zernike(ZernikeIndex::new(3, k), beta, phi);
        println!("D Z^{{3,{k}}}(β={beta}, φ={phi}) = {:.6}", v);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
