//! Symmetric tensors in complex coordinates: component conversion,
//! invariant products, inner differentiation and divergence.

use std::error::Error;

use fanbeam_tomo::forward::transform_polyfield;
use fanbeam_tomo::poly::Poly2;
use fanbeam_tomo::tensor::*;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // a_11 = 1, a_12 = 0.5, a_22 = -2, stored as [a_2, a_1, a_0]
    let a = [1.0, 0.5, -2.0];
    let big = real_to_complex(2, &a)?;
    println!("Cartesian {a:?}");
    println!("complex   [{:.3}, {:.3}, {:.3}]", big[0], big[1], big[2]);
    println!("back      {:?}", complex_to_real(2, &big)?);
    println!(
        "|a|² Cartesian {:.4}, complex {:.4}",
        cartesian_inner(2, &a, &a)?,
        pointwise_norm_sq(2, &big)?
    );

    // potential v = (1 − |z|²)·(x, 2y) has zero ray integrals after d
    let w = PolyField::new(
        0,
        vec![(Poly2::z() + Poly2::zbar()).scale_real(0.5)],
    )?;
    let v = w.mul_poly(&Poly2::boundary_factor());
    let dv = d_sym(1, &v)?;
    println!("d(v) components:");
    for k in (0..=1).rev() {
        let terms: Vec<String> = dv.component(k).terms().map(|((p, q), c)| format!("({:+.2})z^{p}z̄^{q}", c.re)).collect();
        println!("  A_{k} = {}", terms.join(" "));
    }
    for (beta, phi) in [(0.2, 0.1), (2.0, 2.9), (4.0, 3.2)] {
        println!("  D(dv)({beta}, {phi}) = {:.2e}", transform_polyfield(&dv, beta, phi)?);
    }
    println!("δ(dv) at 0.3+0.1i: {:.4}", eval_field(&divergence(&dv)?, Complex64::new(0.3, 0.1))[0]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
