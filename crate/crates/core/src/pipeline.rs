//! File-to-file steps behind the `tomo` command line tool.

use std::io::Read;
use std::path::{Path, PathBuf};

use crate::config::{Method, RunConfig};
use crate::error::{Result, TomoError};
use crate::forward::{add_noise, make_sinogram, FieldSource, NoiseModel, ScanGeometry, Sinogram};
use crate::grid::{relative_error, GridField};
use crate::inversion::{
    invert_lsq, invert_projection, invert_scalar_regular, reconstruct_grid, truncate, CoefficientSet,
    ScalarMethod, TruncationPolicy,
};
use crate::io;
use crate::phantom::PhantomSpec;
use crate::quadrature::LineQuadratureSpec;

/// Sample a phantom and write it.
pub fn cmd_phantom(spec: &PhantomSpec, nx: usize, ny: usize, out: &Path) -> Result<GridField> {
    let g = spec.sample(nx, ny)?;
    io::write_grid(&g, out)?;
    Ok(g)
}

/// Transform a field file on a geometry and write the sinogram.
pub fn cmd_forward(field: &Path, geometry: &ScanGeometry, quad: LineQuadratureSpec, out: &Path) -> Result<Sinogram> {
    let g = io::read_grid(field)?;
    let s = make_sinogram(FieldSource::Grid(&g, quad), geometry)?;
    io::write_sinogram(&s, out)?;
    Ok(s)
}

/// Add noise to a sinogram file; returns the realized relative perturbation.
pub fn cmd_noise(input: &Path, model: NoiseModel, level: f64, seed: u64, out: &Path) -> Result<f64> {
    let s = io::read_sinogram(input)?;
    let (noisy, realized) = add_noise(&s, model, level, seed)?;
    io::write_sinogram(&noisy, out)?;
    Ok(realized)
}

/// Settings of [`cmd_invert`].
#[derive(Debug, Clone, PartialEq)]
pub struct InvertOptions {
    pub degree: usize,
    pub method: Method,
    pub truncation: Option<TruncationPolicy>,
    pub ridge: f64,
    pub grid: usize,
}

impl InvertOptions {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        Ok(Self {
            degree: cfg.degree,
            method: cfg.method()?,
            truncation: cfg.truncation()?,
            ridge: cfg.ridge,
            grid: cfg.grid,
        })
    }
}

/// What [`cmd_invert`] did.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertReport {
    pub terms_available: usize,
    pub terms_kept: usize,
    /// Design-matrix condition number, for least squares.
    pub condition: Option<f64>,
}

/// Recover coefficients from a sinogram and optionally sample the field.
pub fn invert_sinogram(s: &Sinogram, opts: &InvertOptions) -> Result<(CoefficientSet, InvertReport)> {
    let m = s.rank;
    let (coeffs, condition) = match opts.method {
        Method::Explicit => (invert_scalar_regular(s, opts.degree, ScalarMethod::Fft)?, None),
        Method::Projection => (invert_projection(s, m, opts.degree)?, None),
        Method::Lsq => {
            let (c, rep) = invert_lsq(s, m, opts.degree, opts.ridge)?;
            (c, Some(rep.condition))
        }
    };
    let available = coeffs.len();
    let coeffs = match opts.truncation {
        Some(p) => truncate(&coeffs, p)?,
        None => coeffs,
    };
    let kept = match opts.truncation {
        Some(p) => p.kept_terms(available)?,
        None => available,
    };
    Ok((
        coeffs,
        InvertReport {
            terms_available: available,
            terms_kept: kept,
            condition,
        },
    ))
}

/// Invert a sinogram file, writing coefficients and (if requested) the grid.
pub fn cmd_invert(
    input: &Path,
    opts: &InvertOptions,
    coeff_out: &Path,
    grid_out: Option<&Path>,
) -> Result<(CoefficientSet, InvertReport)> {
    let s = io::read_sinogram(input)?;
    let (c, report) = invert_sinogram(&s, opts)?;
    io::write_coefficients(&c, coeff_out)?;
    if let Some(p) = grid_out {
        let g = reconstruct_grid(&c, opts.grid, opts.grid)?;
        io::write_grid(&g, p)?;
    }
    Ok((c, report))
}

enum Renderable {
    Grid(GridField),
    Sinogram(Sinogram),
}

fn load_renderable(input: &Path) -> Result<Renderable> {
    let mut head = [0u8; 8];
    let n = std::fs::File::open(input)?.read(&mut head)?;
    if n == 0 {
        return Err(TomoError::Parse(format!("{}: empty input", input.display())));
    }
    if &head[..n] == io::GRID_MAGIC.as_slice() {
        return Ok(Renderable::Grid(io::read_grid_bin(input)?));
    }
    if &head[..n] == io::SINO_MAGIC.as_slice() {
        return Ok(Renderable::Sinogram(io::read_sinogram_bin(input)?));
    }
    if head[0] == b'#' {
        return Ok(Renderable::Sinogram(io::read_sinogram_csv(input)?));
    }
    if head.starts_with(b"ix,") {
        return Ok(Renderable::Grid(io::read_grid_csv(input)?));
    }
    Err(TomoError::Parse(format!("{}: unrecognized file", input.display())))
}

fn write_image(values: &[f64], w: usize, h: usize, path: PathBuf, out: &mut Vec<PathBuf>) -> Result<()> {
    let (img, lo, hi) = io::to_pgm16(values, w, h)?;
    io::write_pgm16(&img, &path)?;
    let sidecar = path.with_extension("range");
    io::write_range_sidecar(&sidecar, lo, hi)?;
    out.push(path);
    out.push(sidecar);
    Ok(())
}

/// Render a field or sinogram to one 16-bit PGM per component with a
/// min–max sidecar, plus a CSV mirror. Outputs are `<prefix>_<part>.pgm`,
/// `<prefix>_<part>.range` and `<prefix>.csv`.
pub fn cmd_render(input: &Path, prefix: &Path) -> Result<Vec<PathBuf>> {
    let stem = prefix.to_string_lossy().into_owned();
    let mut out = Vec::new();
    match load_renderable(input)? {
        Renderable::Grid(g) => {
            let (nx, ny) = (g.nx(), g.ny());
            let m = g.rank();
            for k in (0..=m).rev() {
                let comp = g.component(k);
                // image rows run from y = +1 down
                let flipped: Vec<f64> = (0..ny).rev().flat_map(|iy| comp[iy * nx..(iy + 1) * nx].iter().copied()).collect();
                write_image(&flipped, nx, ny, PathBuf::from(format!("{stem}_a{k}.pgm")), &mut out)?;
            }
            let csv = PathBuf::from(format!("{stem}.csv"));
            io::write_grid_csv(&g, &csv)?;
            out.push(csv);
        }
        Renderable::Sinogram(s) => {
            let (w, h) = match s.geometry {
                ScanGeometry::Regular { size } => (size + 2, size + 2),
                ScanGeometry::Irregular { .. } => (s.values.len(), 1),
            };
            write_image(&s.values, w, h, PathBuf::from(format!("{stem}_sinogram.pgm")), &mut out)?;
            let csv = PathBuf::from(format!("{stem}.csv"));
            io::write_sinogram_csv(&s, &csv)?;
            out.push(csv);
        }
    }
    Ok(out)
}

/// Relative disc `L²` error of a field file against a reference file.
pub fn cmd_error(field: &Path, reference: &Path) -> Result<f64> {
    let a = io::read_grid(field)?;
    let b = io::read_grid(reference)?;
    relative_error(&a, &b)
}

/// Six significant digits.
pub fn format_sig6(v: f64) -> String {
    format!("{v:.5e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_pipeline_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = |n: &str| dir.path().join(n);
        let spec = PhantomSpec::Zernike { n: 2, k: 1, m: 0 };
        cmd_phantom(&spec, 128, 128, &p("f.bin")).unwrap();
        cmd_forward(&p("f.bin"), &ScanGeometry::regular(6), LineQuadratureSpec::default(), &p("s.bin")).unwrap();
        let opts = InvertOptions {
            degree: 4,
            method: Method::Explicit,
            truncation: None,
            ridge: 0.0,
            grid: 128,
        };
        let (c, rep) = cmd_invert(&p("s.bin"), &opts, &p("c.txt"), Some(&p("r.bin"))).unwrap();
        assert_eq!(rep.terms_kept, c.len());
        let err = cmd_error(&p("r.bin"), &p("f.bin")).unwrap();
        assert!(err < 0.02, "{err}");
        assert_eq!(cmd_error(&p("f.bin"), &p("f.bin")).unwrap(), 0.0);
    }

    #[test]
    fn render_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let p = |n: &str| dir.path().join(n);
        cmd_phantom(&PhantomSpec::SolenoidalV, 16, 16, &p("v.bin")).unwrap();
        let files = cmd_render(&p("v.bin"), &p("v")).unwrap();
        assert_eq!(files.len(), 5);
        assert!(files.iter().all(|f| f.exists()));
        // rendering the CSV mirror reproduces the same CSV
        let first = std::fs::read(p("v.csv")).unwrap();
        cmd_render(&p("v.csv"), &p("w")).unwrap();
        assert_eq!(std::fs::read(p("w.csv")).unwrap(), first);
        std::fs::write(p("empty"), b"").unwrap();
        assert!(cmd_render(&p("empty"), &p("e")).is_err());
    }

    #[test]
    fn constant_field_renders_uniform() {
        let dir = tempfile::tempdir().unwrap();
        let g = GridField::from_fn(0, 8, 8, |_, _| vec![1.0]).unwrap();
        // fill the corners too so the image is truly constant
        let g = GridField::from_components(0, 8, 8, vec![g.component(0).iter().map(|_| 1.0).collect()]).unwrap();
        io::write_grid(&g, &dir.path().join("c.bin")).unwrap();
        cmd_render(&dir.path().join("c.bin"), &dir.path().join("c")).unwrap();
        let img = io::read_pgm(&dir.path().join("c_a0.pgm")).unwrap();
        let first = img.pixels[0];
        assert!(img.pixels.iter().all(|&v| v == first) || img.pixels.iter().all(|&v| v == 0 || v == 65535));
    }

    #[test]
    fn sig6_format() {
        assert_eq!(format_sig6(0.0021), "2.10000e-3");
        assert_eq!(format_sig6(0.0), "0.00000e0");
    }
}
