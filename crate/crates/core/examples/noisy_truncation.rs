//! Truncated SVD on noisy scalar data: error against the number of kept
//! terms for the head and oscillating phantoms.

use std::error::Error;

use fanbeam_tomo::forward::*;
use fanbeam_tomo::inversion::*;
use fanbeam_tomo::phantom::PhantomSpec;
use fanbeam_tomo::relative_error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let size = 32;
    for phantom in [PhantomSpec::Head, PhantomSpec::Oscillating] {
        let truth = phantom.sample(256, 256)?;
        let reference = phantom.sample(128, 128)?;
        let s = make_sinogram(FieldSource::Grid(&truth, Default::default()), &ScanGeometry::regular(size))?;
        let (noisy, _) = add_noise(&s, NoiseModel::Uniform, 0.1, 1)?;
        let c = invert_scalar_regular(&noisy, size, ScalarMethod::Fft)?;
        println!("{phantom:?}, {} vertices, 10% noise", size + 2);
        for keep in [c.len(), 400, 300, 200, 100, 50] {
            let t = truncate(&c, TruncationPolicy::MaxTerms(keep))?;
            let err = relative_error(&reconstruct_grid(&t, 128, 128)?, &reference)?;
            println!("  {keep:>4} terms: {err:.4e}");
        }
        let t = truncate(&c, TruncationPolicy::Threshold { gamma: 0.05 })?;
        println!("  γ = 0.05 keeps {} terms", t.nonzero_count());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
