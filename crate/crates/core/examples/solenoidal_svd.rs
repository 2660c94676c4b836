//! The singular system of the rank-1 transform: basis fields, norms,
//! singular values and the relation D(s/‖s‖) = σ f.

use std::error::Error;

use fanbeam_tomo::basis::*;
use fanbeam_tomo::forward::transform_polyfield;
use fanbeam_tomo::tensor::divergence;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (m, max_degree) = (1, 3);
    println!("rank {m}, degree <= {max_degree}: {} basis fields", subspace_dim(m, max_degree));
    println!("{:<16} {:>9} {:>9} {:>12} {:>12}", "index", "σ", "‖s‖", "D(s/‖s‖)", "σ f");
    let (beta, phi) = (0.8, 0.3);
    for t in singular_triples(m, max_degree) {
        let field = basis_field(t.index)?;
        assert!(divergence(&field)?.is_zero());
        let unit = field.scale(Complex64::new(1.0 / t.norm, 0.0));
        println!(
            "{:<16} {:>9.5} {:>9.5} {:>12.8} {:>12.8}",
            t.index.to_string(),
            t.sigma,
            t.norm,
            transform_polyfield(&unit, beta, phi)?,
            t.transform(beta, phi)
        );
    }
    for m in 0..=3 {
        let dims: Vec<usize> = (0..=6).map(|n| subspace_dim(m, n)).collect();
        println!("dim H_N for m={m}, N=0..6: {dims:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
