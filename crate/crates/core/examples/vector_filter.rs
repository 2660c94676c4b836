//! Vector tomography on 20 regular fan-projections: a solenoidal field and
//! the same field plus a potential give the same reconstruction.

use std::error::Error;

use fanbeam_tomo::forward::*;
use fanbeam_tomo::inversion::*;
use fanbeam_tomo::phantom::PhantomSpec;
use fanbeam_tomo::relative_error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let size = 18;
    let degree = degree_limit(1, size + 2);
    let geom = ScanGeometry::regular(size);
    let v = PhantomSpec::SolenoidalV.sample(256, 256)?;
    let w = PhantomSpec::MixedV.sample(256, 256)?;
    let sv = make_sinogram(FieldSource::Grid(&v, Default::default()), &geom)?;
    let sw = make_sinogram(FieldSource::Grid(&w, Default::default()), &geom)?;
    println!("fields differ by {:.3e}, sinograms by {:.3e}", relative_error(&w, &v)?, sw.relative_difference(&sv)?);

    let rv = reconstruct_grid(&invert_projection(&sv, 1, degree)?, 128, 128)?;
    let rw = reconstruct_grid(&invert_projection(&sw, 1, degree)?, 128, 128)?;
    let truth = PhantomSpec::SolenoidalV.sample(128, 128)?;
    println!("degree {degree} (largest determined by {} vertices)", size + 2);
    println!("solenoidal input: error {:.3e}", relative_error(&rv, &truth)?);
    println!("with potential:   error {:.3e}", relative_error(&rw, &truth)?);
    println!("reconstructions differ by {:.3e}", relative_error(&rw, &rv)?);

    let dense = ScanGeometry::regular(30);
    let s = make_sinogram(FieldSource::Grid(&v, Default::default()), &dense)?;
    let n = degree_limit(1, 32);
    let r = reconstruct_grid(&invert_projection(&s, 1, n)?, 128, 128)?;
    println!("32 vertices, degree {n}: error {:.3e}", relative_error(&r, &truth)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
