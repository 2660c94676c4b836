//! Test fields: the two vector fields of the vector experiments, basis
//! fields, and synthetic scalar rasters.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::basis::{basis_field, BasisIndex, Sign};
use crate::error::{Result, TomoError};
use crate::grid::GridField;
use crate::tensor::{complex_to_real_unchecked, eval_field};

/// Divergence-free vector field
/// `a₁ = 2xy cos r² + cos 6xy − 6xy sin 6xy`,
/// `a₂ = −sin r² − 2x² cos r² + 6y² sin 6xy`.
/// Returns `[a₁, a₂]`.
pub fn solenoidal_v(x: f64, y: f64) -> [f64; 2] {
    let r2 = x * x + y * y;
    let (s, c) = r2.sin_cos();
    let (s6, c6) = (6.0 * x * y).sin_cos();
    [
        2.0 * x * y * c + c6 - 6.0 * x * y * s6,
        -s - 2.0 * x * x * c + 6.0 * y * y * s6,
    ]
}

/// [`solenoidal_v`] plus the potential field `∇ sin(π r²)`, which vanishes
/// with its potential on the unit circle.
pub fn mixed_v(x: f64, y: f64) -> [f64; 2] {
    let [a1, a2] = solenoidal_v(x, y);
    let c = (PI * (x * x + y * y)).cos();
    [a1 + 2.0 * PI * x * c, a2 + 2.0 * PI * y * c]
}

/// One ellipse of an additive intensity phantom.
#[derive(Debug, Clone, Copy)]
struct Ellipse {
    value: f64,
    a: f64,
    b: f64,
    x0: f64,
    y0: f64,
    theta_deg: f64,
}

const HEAD: [Ellipse; 10] = [
    Ellipse { value: 1.0, a: 0.69, b: 0.92, x0: 0.0, y0: 0.0, theta_deg: 0.0 },
    Ellipse { value: -0.8, a: 0.6624, b: 0.874, x0: 0.0, y0: -0.0184, theta_deg: 0.0 },
    Ellipse { value: -0.2, a: 0.11, b: 0.31, x0: 0.22, y0: 0.0, theta_deg: -18.0 },
    Ellipse { value: -0.2, a: 0.16, b: 0.41, x0: -0.22, y0: 0.0, theta_deg: 18.0 },
    Ellipse { value: 0.1, a: 0.21, b: 0.25, x0: 0.0, y0: 0.35, theta_deg: 0.0 },
    Ellipse { value: 0.1, a: 0.046, b: 0.046, x0: 0.0, y0: 0.1, theta_deg: 0.0 },
    Ellipse { value: 0.1, a: 0.046, b: 0.046, x0: 0.0, y0: -0.1, theta_deg: 0.0 },
    Ellipse { value: 0.1, a: 0.046, b: 0.023, x0: -0.08, y0: -0.605, theta_deg: 0.0 },
    Ellipse { value: 0.1, a: 0.023, b: 0.023, x0: 0.0, y0: -0.606, theta_deg: 0.0 },
    Ellipse { value: 0.1, a: 0.023, b: 0.046, x0: 0.06, y0: -0.605, theta_deg: 0.0 },
];

/// Modified Shepp–Logan head phantom (piecewise constant).
pub fn head(x: f64, y: f64) -> f64 {
    HEAD.iter()
        .filter(|e| {
            let (s, c) = e.theta_deg.to_radians().sin_cos();
            let (dx, dy) = (x - e.x0, y - e.y0);
            let u = (dx * c + dy * s) / e.a;
            let v = (-dx * s + dy * c) / e.b;
            u * u + v * v <= 1.0
        })
        .map(|e| e.value)
        .sum()
}

/// Smooth field with fine oscillating detail: concentric rings modulated by
/// an angular pattern, plus a Gaussian bump.
pub fn oscillating(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    let psi = y.atan2(x);
    let rings = (18.0 * r2).cos() * (1.0 - r2);
    let petals = 0.5 * (6.0 * psi).cos() * r2 * (1.0 - r2);
    let bump = (-((x - 0.3).powi(2) + (y + 0.2).powi(2)) / 0.02).exp();
    rings + petals + bump
}

/// Named test fields.
#[derive(Debug, Clone, PartialEq)]
pub enum PhantomSpec {
    SolenoidalV,
    MixedV,
    /// Unnormalized `s^{(+m)}_{n,k}`, or `s^{(−m)}_{n,k}` when the `+` field is zero.
    Zernike { n: usize, k: usize, m: usize },
    Head,
    Oscillating,
    /// Coefficient file; see [`crate::io`].
    Coeffs(PathBuf),
    /// Scalar raster from a PGM image.
    Raster(PathBuf),
}

impl PhantomSpec {
    /// Parse `solenoidal_v`, `mixed_v`, `zernike:n,k,m`, `head`, `oscillating`,
    /// `coeffs:PATH` or `raster:PATH`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        match (name, arg) {
            ("solenoidal_v", None) => Ok(Self::SolenoidalV),
            ("mixed_v", None) => Ok(Self::MixedV),
            ("head", None) => Ok(Self::Head),
            ("oscillating", None) => Ok(Self::Oscillating),
            ("coeffs", Some(p)) => Ok(Self::Coeffs(p.into())),
            ("raster", Some(p)) => Ok(Self::Raster(p.into())),
            ("zernike", Some(args)) => {
                let v: Vec<usize> = args
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| TomoError::Parse(format!("zernike arguments `{args}`: {e}")))?;
                match v.as_slice() {
                    &[n, k, m] => Ok(Self::Zernike { n, k, m }),
                    _ => Err(TomoError::Parse(format!("zernike needs n,k,m, got `{args}`"))),
                }
            }
            _ => Err(TomoError::UnknownPhantom(s.to_string())),
        }
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            Self::SolenoidalV | Self::MixedV => Some(1),
            Self::Zernike { m, .. } => Some(*m),
            Self::Head | Self::Oscillating | Self::Raster(_) => Some(0),
            Self::Coeffs(_) => None,
        }
    }

    /// Sample on an `nx × ny` grid.
    pub fn sample(&self, nx: usize, ny: usize) -> Result<GridField> {
        match self {
            Self::SolenoidalV => GridField::from_fn(1, nx, ny, |x, y| solenoidal_v(x, y).to_vec()),
            Self::MixedV => GridField::from_fn(1, nx, ny, |x, y| mixed_v(x, y).to_vec()),
            Self::Head => GridField::from_fn(0, nx, ny, |x, y| vec![head(x, y)]),
            Self::Oscillating => GridField::from_fn(0, nx, ny, |x, y| vec![oscillating(x, y)]),
            Self::Zernike { n, k, m } => {
                let mut idx = BasisIndex::new(Sign::Plus, *m, *n, *k)?;
                if idx.is_degenerate() {
                    idx.sign = Sign::Minus;
                }
                let f = basis_field(idx)?;
                let m = *m;
                GridField::from_fn(m, nx, ny, move |x, y| {
                    complex_to_real_unchecked(m, &eval_field(&f, Complex64::new(x, y)))
                })
            }
            Self::Coeffs(path) => {
                let c = crate::io::read_coefficients(path)?;
                crate::inversion::reconstruct_grid(&c, nx, ny)
            }
            Self::Raster(path) => {
                let img = crate::io::read_pgm(path)?;
                img.resample_to_grid(nx, ny)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Centered-difference divergence.
    fn div(f: fn(f64, f64) -> [f64; 2], x: f64, y: f64) -> f64 {
        let h = 1e-5;
        (f(x + h, y)[0] - f(x - h, y)[0] + f(x, y + h)[1] - f(x, y - h)[1]) / (2.0 * h)
    }

    #[test]
    fn solenoidal_field_values_at_origin() {
        assert_eq!(solenoidal_v(0.0, 0.0), [1.0, 0.0]);
    }

    #[test]
    fn solenoidal_field_is_divergence_free() {
        for &(x, y) in &[(0.1, 0.2), (-0.5, 0.3), (0.7, -0.6), (0.0, 0.9)] {
            assert!(div(solenoidal_v, x, y).abs() < 1e-8);
            // the added gradient has Laplacian 4π cos(πr²) − 4π² r² sin(πr²)
            let r2: f64 = x * x + y * y;
            let lap = 4.0 * PI * (PI * r2).cos() - 4.0 * PI * PI * r2 * (PI * r2).sin();
            assert_abs_diff_eq!(div(mixed_v, x, y), lap, epsilon = 1e-6);
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(PhantomSpec::parse("solenoidal_v").unwrap(), PhantomSpec::SolenoidalV);
        assert_eq!(
            PhantomSpec::parse("zernike:2,1,0").unwrap(),
            PhantomSpec::Zernike { n: 2, k: 1, m: 0 }
        );
        assert!(matches!(PhantomSpec::parse("eagle"), Err(TomoError::UnknownPhantom(_))));
        assert!(PhantomSpec::parse("zernike:1,2").is_err());
    }

    #[test]
    fn zernike_phantom_is_paraboloid() {
        let g = PhantomSpec::Zernike { n: 2, k: 1, m: 0 }.sample(32, 32).unwrap();
        for iy in 0..32 {
            for ix in 0..32 {
                let (x, y) = g.pixel_center(ix, iy);
                let r2 = x * x + y * y;
                let want = if r2 < 1.0 { 1.0 - 2.0 * r2 } else { 0.0 };
                assert_abs_diff_eq!(g.value(0, ix, iy), want, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_plus_falls_back_to_minus() {
        let g = PhantomSpec::Zernike { n: 1, k: 1, m: 1 }.sample(8, 8).unwrap();
        assert!(g.norm_sq() > 0.0);
    }

    #[test]
    fn head_phantom_levels() {
        assert_abs_diff_eq!(head(0.0, 0.0), 0.2, epsilon = 1e-12);
        assert_eq!(head(0.0, 0.95), 0.0);
        assert_abs_diff_eq!(head(0.0, 0.9), 1.0, epsilon = 1e-12);
    }
}
