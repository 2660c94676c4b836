//! Vector tomography from chords joining 20 irregular boundary points, by
//! least squares over the singular functions, with and without noise.

use std::error::Error;

use fanbeam_tomo::forward::*;
use fanbeam_tomo::inversion::*;
use fanbeam_tomo::phantom::PhantomSpec;
use fanbeam_tomo::relative_error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let v = PhantomSpec::SolenoidalV.sample(256, 256)?;
    let truth = PhantomSpec::SolenoidalV.sample(128, 128)?;
    let degree = degree_limit(1, 20);
    let layouts = [
        ("jittered", ScanGeometry::jittered_vertices(20, 0.25, 2024, ChordMode::AllPairs)),
        ("uniform", ScanGeometry::random_vertices(20, 2024, ChordMode::AllPairs)),
    ];
    for (name, geom) in layouts {
        let s = make_sinogram(FieldSource::Grid(&v, Default::default()), &geom)?;
        let (c, rep) = invert_lsq(&s, 1, degree, 0.0)?;
        let err = relative_error(&reconstruct_grid(&c, 128, 128)?, &truth)?;
        println!("{name:>8}: {} chords, condition {:.2e}, error {err:.3e}", rep.rows, rep.condition);
        let (noisy, level) = add_noise(&s, NoiseModel::Uniform, 0.03, 7)?;
        for ridge in [0.0, 1e-2] {
            let (c, _) = invert_lsq(&noisy, 1, degree, ridge)?;
            let err = relative_error(&reconstruct_grid(&c, 128, 128)?, &truth)?;
            println!("          noise {level:.2}, ridge {ridge:e}: error {err:.3e}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
