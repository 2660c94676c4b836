//! Real symmetric tensor fields sampled at pixel centers over `[-1, 1]²`.
//!
//! Pixel `(ix, iy)` has center `x = −1 + (2 ix + 1)/nx`, `y = −1 + (2 iy + 1)/ny`;
//! `iy = 0` is the bottom row. Samples outside the open unit disc are zero.

use rayon::prelude::*;

use crate::error::{Result, TomoError};
use crate::zernike::binomial;

#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    rank: usize,
    nx: usize,
    ny: usize,
    /// One `nx · ny` row-major array per Cartesian component, in the order
    /// `[a_m, …, a_0]`.
    data: Vec<Vec<f64>>,
}

impl GridField {
    pub fn zeros(rank: usize, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(TomoError::InvalidGrid(format!("{nx}x{ny}")));
        }
        Ok(Self {
            rank,
            nx,
            ny,
            data: vec![vec![0.0; nx * ny]; rank + 1],
        })
    }

    /// Sample `f(x, y) -> [a_m, …, a_0]` at in-disc pixel centers.
    pub fn from_fn<F>(rank: usize, nx: usize, ny: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Vec<f64> + Sync,
    {
        let mut g = Self::zeros(rank, nx, ny)?;
        let samples: Vec<Option<Vec<f64>>> = (0..nx * ny)
            .into_par_iter()
            .map(|idx| {
                let (x, y) = g.pixel_center(idx % nx, idx / nx);
                (x * x + y * y < 1.0).then(|| f(x, y))
            })
            .collect();
        for (idx, s) in samples.into_iter().enumerate() {
            if let Some(v) = s {
                if v.len() != rank + 1 {
                    return Err(TomoError::LengthMismatch {
                        expected: rank + 1,
                        got: v.len(),
                    });
                }
                for (slot, val) in v.into_iter().enumerate() {
                    g.data[slot][idx] = val;
                }
            }
        }
        Ok(g)
    }

    /// Build from raw component arrays; out-of-disc samples are zeroed.
    pub fn from_components(rank: usize, nx: usize, ny: usize, data: Vec<Vec<f64>>) -> Result<Self> {
        let mut g = Self::zeros(rank, nx, ny)?;
        if data.len() != rank + 1 {
            return Err(TomoError::LengthMismatch {
                expected: rank + 1,
                got: data.len(),
            });
        }
        for (slot, comp) in data.into_iter().enumerate() {
            if comp.len() != nx * ny {
                return Err(TomoError::ShapeMismatch(format!(
                    "component has {} samples, grid needs {}",
                    comp.len(),
                    nx * ny
                )));
            }
            g.data[slot] = comp;
        }
        g.mask_outside();
        Ok(g)
    }

    fn mask_outside(&mut self) {
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if !self.in_disc(ix, iy) {
                    let idx = iy * self.nx + ix;
                    for comp in &mut self.data {
                        comp[idx] = 0.0;
                    }
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn pixel_center(&self, ix: usize, iy: usize) -> (f64, f64) {
        (
            -1.0 + (2 * ix + 1) as f64 / self.nx as f64,
            -1.0 + (2 * iy + 1) as f64 / self.ny as f64,
        )
    }

    pub fn in_disc(&self, ix: usize, iy: usize) -> bool {
        let (x, y) = self.pixel_center(ix, iy);
        x * x + y * y < 1.0
    }

    /// Sample of pseudovector slot `slot` (component `a_{m−slot}`).
    pub fn value(&self, slot: usize, ix: usize, iy: usize) -> f64 {
        self.data[slot][iy * self.nx + ix]
    }

    /// Row-major samples of component `a_k`.
    pub fn component(&self, k: usize) -> &[f64] {
        &self.data[self.rank - k]
    }

    /// All components in pseudovector order.
    pub fn components(&self) -> &[Vec<f64>] {
        &self.data
    }

    /// Cartesian components `[a_m, …, a_0]` at pixel `(ix, iy)`.
    pub fn pixel(&self, ix: usize, iy: usize) -> Vec<f64> {
        let idx = iy * self.nx + ix;
        self.data.iter().map(|c| c[idx]).collect()
    }

    /// Bilinear interpolation at `(x, y)`. Only in-disc neighbours contribute;
    /// their weights are renormalized so the disc edge is not smeared toward
    /// zero. Returns zeros outside the disc or with no in-disc neighbour.
    /// Points within `1e-9` of the unit circle count as inside, so chord
    /// endpoints pick up the boundary value.
    pub fn interpolate(&self, x: f64, y: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.rank + 1];
        if x * x + y * y > 1.0 + 1e-9 {
            return out;
        }
        let fx = (x + 1.0) * self.nx as f64 / 2.0 - 0.5;
        let fy = (y + 1.0) * self.ny as f64 / 2.0 - 0.5;
        let x0 = fx.floor();
        let y0 = fy.floor();
        let tx = fx - x0;
        let ty = fy - y0;
        let mut wsum = 0.0;
        for (dx, wx) in [(0i64, 1.0 - tx), (1, tx)] {
            for (dy, wy) in [(0i64, 1.0 - ty), (1, ty)] {
                let ix = x0 as i64 + dx;
                let iy = y0 as i64 + dy;
                if ix < 0 || iy < 0 || ix >= self.nx as i64 || iy >= self.ny as i64 {
                    continue;
                }
                let (ix, iy) = (ix as usize, iy as usize);
                let w = wx * wy;
                if w == 0.0 || !self.in_disc(ix, iy) {
                    continue;
                }
                wsum += w;
                let idx = iy * self.nx + ix;
                for (o, c) in out.iter_mut().zip(&self.data) {
                    *o += w * c[idx];
                }
            }
        }
        if wsum > 0.0 {
            for o in &mut out {
                *o /= wsum;
            }
        }
        out
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.nx != other.nx || self.ny != other.ny {
            return Err(TomoError::ShapeMismatch(format!(
                "rank {} {}x{} vs rank {} {}x{}",
                self.rank, self.nx, self.ny, other.rank, other.nx, other.ny
            )));
        }
        Ok(())
    }

    /// Discrete `∫∫ |a|²` over in-disc pixels, `|a|² = Σ_k C(m,k) a_k²`.
    pub fn norm_sq(&self) -> f64 {
        let m = self.rank;
        let area = 4.0 / (self.nx * self.ny) as f64;
        let mut acc = 0.0;
        for (slot, comp) in self.data.iter().enumerate() {
            let mult = binomial(m as u64, (m - slot) as u64);
            acc += mult * comp.iter().map(|v| v * v).sum::<f64>();
        }
        acc * area
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Ok(self.with_data(data))
    }

    pub fn scale(&self, c: f64) -> Self {
        let data = self
            .data
            .iter()
            .map(|a| a.iter().map(|x| x * c).collect())
            .collect();
        self.with_data(data)
    }

    fn with_data(&self, data: Vec<Vec<f64>>) -> Self {
        Self {
            rank: self.rank,
            nx: self.nx,
            ny: self.ny,
            data,
        }
    }

    /// Largest absolute sample difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max))
    }
}

/// `‖x − ref‖ / ‖ref‖` in the discrete disc `L²` norm.
pub fn relative_error(x: &GridField, reference: &GridField) -> Result<f64> {
    let diff = x.sub(reference)?;
    let r = reference.norm_sq();
    if r == 0.0 {
        return Err(TomoError::ZeroReference);
    }
    Ok((diff.norm_sq() / r).sqrt())
}
