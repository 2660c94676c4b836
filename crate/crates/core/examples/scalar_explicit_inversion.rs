//! Scalar reconstruction on a regular scanning scheme with M = N, by
//! direct summation and by FFT.

use std::error::Error;
use std::time::Instant;

use fanbeam_tomo::forward::*;
use fanbeam_tomo::inversion::*;
use fanbeam_tomo::phantom::PhantomSpec;
use fanbeam_tomo::relative_error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let size = 32;
    let truth = PhantomSpec::Oscillating.sample(256, 256)?;
    let geom = ScanGeometry::regular(size);
    let s = make_sinogram(FieldSource::Grid(&truth, Default::default()), &geom)?;
    println!("{} vertices, {} rays", size + 2, s.values.len());

    let t = Instant::now();
    let direct = invert_scalar_regular(&s, size, ScalarMethod::Direct)?;
    let t_direct = t.elapsed();
    let t = Instant::now();
    let fft = invert_scalar_regular(&s, size, ScalarMethod::Fft)?;
    let t_fft = t.elapsed();
    println!(
        "{} coefficients; direct {:?}, fft {:?}, max difference {:.2e}",
        fft.len(),
        t_direct,
        t_fft,
        fft.max_abs_diff(&direct)?
    );

    let rec = reconstruct_grid(&fft, 128, 128)?;
    let reference = PhantomSpec::Oscillating.sample(128, 128)?;
    println!("relative L2 error {:.4e}", relative_error(&rec, &reference)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
