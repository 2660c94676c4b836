//! File formats for fields, sinograms, coefficient sets and images.
//!
//! All multi-byte binary values are little-endian except PGM samples, which
//! the PGM format fixes as big-endian. Layouts are described on each writer.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::basis::{BasisIndex, Sign};
use crate::error::{Result, TomoError};
use crate::forward::{ChordMode, ScanGeometry, Sinogram};
use crate::grid::GridField;
use crate::inversion::CoefficientSet;

pub const GRID_MAGIC: &[u8; 8] = b"TTGRID01";
pub const SINO_MAGIC: &[u8; 8] = b"TTSINO01";

fn has_ext(path: &Path, ext: &str) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| TomoError::Parse(format!("bad {what} `{s}`")))
}

// ---------------------------------------------------------------- grid fields

/// Binary grid layout:
///
/// ```text
/// 0   8 bytes  "TTGRID01"
/// 8   u32      rank m
/// 12  u32      nx
/// 16  u32      ny
/// 20  f64 ×(m+1)·nx·ny   components a_m, …, a_0; each row-major, index iy·nx + ix
/// ```
pub fn write_grid_bin(g: &GridField, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(GRID_MAGIC)?;
    for v in [g.rank() as u32, g.nx() as u32, g.ny() as u32] {
        w.write_all(&v.to_le_bytes())?;
    }
    for comp in g.components() {
        for v in comp {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid_bin(path: &Path) -> Result<GridField> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != GRID_MAGIC {
        return Err(TomoError::Parse(format!("{}: not a grid file", path.display())));
    }
    let rank = read_u32(&mut r)? as usize;
    let nx = read_u32(&mut r)? as usize;
    let ny = read_u32(&mut r)? as usize;
    let mut data = Vec::with_capacity(rank + 1);
    for _ in 0..=rank {
        let comp = (0..nx * ny).map(|_| read_f64(&mut r)).collect::<Result<Vec<_>>>()?;
        data.push(comp);
    }
    GridField::from_components(rank, nx, ny, data)
}

/// CSV grid layout: header `ix,iy,x,y,a{m},…,a{0}` then one row per pixel in
/// row-major order. Values use the shortest round-trip decimal form.
pub fn write_grid_csv(g: &GridField, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let m = g.rank();
    let mut header = vec!["ix".to_string(), "iy".into(), "x".into(), "y".into()];
    header.extend((0..=m).rev().map(|k| format!("a{k}")));
    w.write_record(&header)?;
    for iy in 0..g.ny() {
        for ix in 0..g.nx() {
            let (x, y) = g.pixel_center(ix, iy);
            let mut rec = vec![ix.to_string(), iy.to_string(), x.to_string(), y.to_string()];
            rec.extend(g.pixel(ix, iy).iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid_csv(path: &Path) -> Result<GridField> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.len() < 5 || &headers[0] != "ix" || &headers[1] != "iy" {
        return Err(TomoError::Parse(format!("{}: not a grid CSV", path.display())));
    }
    let rank = headers.len() - 5;
    let mut rows = Vec::new();
    let (mut nx, mut ny) = (0usize, 0usize);
    for rec in r.records() {
        let rec = rec?;
        let ix: usize = parse_num(&rec[0], "ix")?;
        let iy: usize = parse_num(&rec[1], "iy")?;
        let vals = (4..rec.len()).map(|i| parse_num::<f64>(&rec[i], "value")).collect::<Result<Vec<_>>>()?;
        nx = nx.max(ix + 1);
        ny = ny.max(iy + 1);
        rows.push((ix, iy, vals));
    }
    if rows.len() != nx * ny {
        return Err(TomoError::ShapeMismatch(format!("{} rows for a {nx}x{ny} grid", rows.len())));
    }
    let mut data = vec![vec![0.0; nx * ny]; rank + 1];
    for (ix, iy, vals) in rows {
        for (slot, v) in vals.into_iter().enumerate() {
            data[slot][iy * nx + ix] = v;
        }
    }
    GridField::from_components(rank, nx, ny, data)
}

/// Write by extension: `.csv` as CSV, anything else binary.
pub fn write_grid(g: &GridField, path: &Path) -> Result<()> {
    if has_ext(path, "csv") {
        write_grid_csv(g, path)
    } else {
        write_grid_bin(g, path)
    }
}

pub fn read_grid(path: &Path) -> Result<GridField> {
    if has_ext(path, "csv") {
        read_grid_csv(path)
    } else {
        read_grid_bin(path)
    }
}

// ------------------------------------------------------------------ sinograms

fn geometry_header(g: &ScanGeometry) -> String {
    match g {
        ScanGeometry::Regular { size } => format!("regular size={size}"),
        ScanGeometry::Irregular { vertices, mode } => {
            let mode = match mode {
                ChordMode::AllPairs => "all_pairs",
                ChordMode::PerVertexFan => "per_vertex_fan",
            };
            let v: Vec<String> = vertices.iter().map(|v| format!("{v:e}")).collect();
            format!("irregular mode={mode} vertices={}", v.join(";"))
        }
    }
}

fn parse_geometry_header(s: &str) -> Result<ScanGeometry> {
    let mut parts = s.split_whitespace();
    let kind = parts.next().unwrap_or_default();
    let mut fields = std::collections::HashMap::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| TomoError::Parse(format!("geometry field `{p}`")))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| TomoError::Parse(format!("geometry lacks `{k}`")));
    match kind {
        "regular" => Ok(ScanGeometry::Regular {
            size: parse_num(get("size")?, "size")?,
        }),
        "irregular" => {
            let mode = match get("mode")? {
                "all_pairs" => ChordMode::AllPairs,
                "per_vertex_fan" => ChordMode::PerVertexFan,
                other => return Err(TomoError::Parse(format!("chord mode `{other}`"))),
            };
            let vertices = get("vertices")?
                .split(';')
                .filter(|t| !t.is_empty())
                .map(|t| parse_num(t, "vertex"))
                .collect::<Result<_>>()?;
            Ok(ScanGeometry::Irregular { vertices, mode })
        }
        other => Err(TomoError::Parse(format!("geometry kind `{other}`"))),
    }
}

/// CSV sinogram layout:
///
/// ```text
/// # rank=<m>
/// # geometry=regular size=<M>            | irregular mode=<all_pairs|per_vertex_fan> vertices=<v;v;…>
/// ray,beta,phi,value
/// 0,<β>,<φ>,<f>
/// …
/// ```
///
/// Rays are ordered as `ScanGeometry::rays` (row-major `(p, q)` for regular).
pub fn write_sinogram_csv(s: &Sinogram, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "# rank={}", s.rank)?;
    writeln!(f, "# geometry={}", geometry_header(&s.geometry))?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(["ray", "beta", "phi", "value"])?;
    for (i, ((b, p), v)) in s.rays().into_iter().zip(&s.values).enumerate() {
        w.write_record([i.to_string(), b.to_string(), p.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sinogram_csv(path: &Path) -> Result<Sinogram> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut rank = None;
    let mut geometry = None;
    let mut line = String::new();
    for _ in 0..2 {
        line.clear();
        reader.read_line(&mut line)?;
        let t = line.trim().trim_start_matches('#').trim();
        if let Some(v) = t.strip_prefix("rank=") {
            rank = Some(parse_num::<usize>(v, "rank")?);
        } else if let Some(v) = t.strip_prefix("geometry=") {
            geometry = Some(parse_geometry_header(v)?);
        }
    }
    let (rank, geometry) = match (rank, geometry) {
        (Some(r), Some(g)) => (r, g),
        _ => return Err(TomoError::Parse(format!("{}: missing sinogram header", path.display()))),
    };
    let mut r = csv::Reader::from_reader(reader);
    let values = r
        .records()
        .map(|rec| {
            let rec = rec?;
            let v = rec.get(3).ok_or_else(|| TomoError::Parse("short sinogram row".into()))?;
            parse_num::<f64>(v, "value")
        })
        .collect::<Result<Vec<_>>>()?;
    Sinogram::new(rank, geometry, values)
}

/// Binary sinogram layout:
///
/// ```text
/// 0   8 bytes  "TTSINO01"
/// 8   u32      rank m
/// 12  u32      geometry kind: 0 regular, 1 irregular
///     regular:   u32 M
///     irregular: u32 chord mode (0 all pairs, 1 per-vertex fan), u32 vertex count V, f64 ×V angles
/// …   u64      ray count R
/// …   f64 ×R   values in ray order
/// ```
pub fn write_sinogram_bin(s: &Sinogram, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(SINO_MAGIC)?;
    w.write_all(&(s.rank as u32).to_le_bytes())?;
    match &s.geometry {
        ScanGeometry::Regular { size } => {
            w.write_all(&0u32.to_le_bytes())?;
            w.write_all(&(*size as u32).to_le_bytes())?;
        }
        ScanGeometry::Irregular { vertices, mode } => {
            w.write_all(&1u32.to_le_bytes())?;
            let code: u32 = match mode {
                ChordMode::AllPairs => 0,
                ChordMode::PerVertexFan => 1,
            };
            w.write_all(&code.to_le_bytes())?;
            w.write_all(&(vertices.len() as u32).to_le_bytes())?;
            for v in vertices {
                w.write_all(&v.to_le_bytes())?;
            }
        }
    }
    w.write_all(&(s.values.len() as u64).to_le_bytes())?;
    for v in &s.values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sinogram_bin(path: &Path) -> Result<Sinogram> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != SINO_MAGIC {
        return Err(TomoError::Parse(format!("{}: not a sinogram file", path.display())));
    }
    let rank = read_u32(&mut r)? as usize;
    let geometry = match read_u32(&mut r)? {
        0 => ScanGeometry::Regular {
            size: read_u32(&mut r)? as usize,
        },
        1 => {
            let mode = match read_u32(&mut r)? {
                0 => ChordMode::AllPairs,
                1 => ChordMode::PerVertexFan,
                c => return Err(TomoError::Parse(format!("chord mode code {c}"))),
            };
            let n = read_u32(&mut r)? as usize;
            let vertices = (0..n).map(|_| read_f64(&mut r)).collect::<Result<_>>()?;
            ScanGeometry::Irregular { vertices, mode }
        }
        c => return Err(TomoError::Parse(format!("geometry code {c}"))),
    };
    let count = read_u64(&mut r)? as usize;
    let values = (0..count).map(|_| read_f64(&mut r)).collect::<Result<_>>()?;
    Sinogram::new(rank, geometry, values)
}

pub fn write_sinogram(s: &Sinogram, path: &Path) -> Result<()> {
    if has_ext(path, "csv") {
        write_sinogram_csv(s, path)
    } else {
        write_sinogram_bin(s, path)
    }
}

pub fn read_sinogram(path: &Path) -> Result<Sinogram> {
    if has_ext(path, "csv") {
        read_sinogram_csv(path)
    } else {
        read_sinogram_bin(path)
    }
}

// --------------------------------------------------------------- coefficients

/// Text layout:
///
/// ```text
/// # coefficients m=<m> N=<N>
/// <sign> <m> <n> <k> <value>
/// ```
///
/// One line per basis index in canonical order; `sign` is `+` or `-`;
/// values in `{:.17e}` form, which round-trips exactly.
pub fn write_coefficients(c: &CoefficientSet, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# coefficients m={} N={}", c.rank(), c.max_degree())?;
    for (idx, v) in c.entries() {
        writeln!(w, "{} {} {} {} {:.17e}", idx.sign.symbol(), idx.m, idx.n, idx.k, v)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_coefficients(path: &Path) -> Result<CoefficientSet> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    let mut m = None;
    let mut n = None;
    for tok in header.trim_start_matches('#').split_whitespace() {
        if let Some(v) = tok.strip_prefix("m=") {
            m = Some(parse_num::<usize>(v, "m")?);
        } else if let Some(v) = tok.strip_prefix("N=") {
            n = Some(parse_num::<usize>(v, "N")?);
        }
    }
    let (m, n) = match (m, n) {
        (Some(m), Some(n)) => (m, n),
        _ => return Err(TomoError::Parse(format!("{}: missing coefficient header", path.display()))),
    };
    let mut c = CoefficientSet::zeros(m, n);
    for line in lines.filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 5 {
            return Err(TomoError::Parse(format!("coefficient line `{line}`")));
        }
        let sign = Sign::parse(t[0]).ok_or_else(|| TomoError::Parse(format!("sign `{}`", t[0])))?;
        let idx = BasisIndex::new(sign, parse_num(t[1], "m")?, parse_num(t[2], "n")?, parse_num(t[3], "k")?)?;
        c.set(idx, parse_num(t[4], "value")?)?;
    }
    Ok(c)
}

// ----------------------------------------------------------------------- PGM

/// Grayscale raster, first row on top.
#[derive(Debug, Clone, PartialEq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

impl PgmImage {
    /// Scalar grid with values `pixel / maxval`, sampled by nearest neighbour.
    /// Image row 0 maps to `y = +1`.
    pub fn resample_to_grid(&self, nx: usize, ny: usize) -> Result<GridField> {
        if self.width == 0 || self.height == 0 {
            return Err(TomoError::InvalidGrid("empty image".into()));
        }
        GridField::from_fn(0, nx, ny, |x, y| {
            let col = (((x + 1.0) / 2.0) * self.width as f64).floor() as usize;
            let row = (((1.0 - y) / 2.0) * self.height as f64).floor() as usize;
            let v = self.pixels[row.min(self.height - 1) * self.width + col.min(self.width - 1)];
            vec![v as f64 / self.maxval as f64]
        })
    }
}

/// Binary PGM (`P5`) with `maxval 65535`: ASCII header
/// `P5\n<width> <height>\n65535\n` followed by big-endian `u16` samples,
/// row by row from the top.
pub fn write_pgm16(img: &PgmImage, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{} {}\n{}\n", img.width, img.height, img.maxval)?;
    for &p in &img.pixels {
        if img.maxval > 255 {
            w.write_all(&p.to_be_bytes())?;
        } else {
            w.write_all(&[p as u8])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads `P5` (8- or 16-bit) and `P2` images.
pub fn read_pgm(path: &Path) -> Result<PgmImage> {
    let bytes = std::fs::read(path)?;
    let mut pos = 0;
    let mut token = || -> Result<String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(TomoError::Parse("truncated PGM header".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    let magic = token()?;
    let width: usize = parse_num(&token()?, "width")?;
    let height: usize = parse_num(&token()?, "height")?;
    let maxval: u16 = parse_num(&token()?, "maxval")?;
    if maxval == 0 {
        return Err(TomoError::Parse("PGM maxval 0".into()));
    }
    let count = width * height;
    let pixels = match magic.as_str() {
        "P5" => {
            let data = &bytes[pos + 1..];
            if maxval > 255 {
                if data.len() < 2 * count {
                    return Err(TomoError::Parse("truncated PGM data".into()));
                }
                data.chunks_exact(2).take(count).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
            } else {
                if data.len() < count {
                    return Err(TomoError::Parse("truncated PGM data".into()));
                }
                data[..count].iter().map(|&b| b as u16).collect()
            }
        }
        "P2" => (0..count).map(|_| parse_num::<u16>(&token()?, "sample")).collect::<Result<Vec<_>>>()?,
        other => return Err(TomoError::Parse(format!("unsupported image type `{other}`"))),
    };
    Ok(PgmImage {
        width,
        height,
        maxval,
        pixels,
    })
}

/// Linear min–max mapping of `values` (row 0 on top) to a 16-bit image.
/// Returns the image and the `(min, max)` used; a constant input maps to 0.
pub fn to_pgm16(values: &[f64], width: usize, height: usize) -> Result<(PgmImage, f64, f64)> {
    if values.is_empty() || values.len() != width * height {
        return Err(TomoError::ShapeMismatch(format!(
            "{} values for a {width}x{height} image",
            values.len()
        )));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let pixels = values
        .iter()
        .map(|&v| if span > 0.0 { ((v - lo) / span * 65535.0).round() as u16 } else { 0 })
        .collect();
    Ok((
        PgmImage {
            width,
            height,
            maxval: 65535,
            pixels,
        },
        lo,
        hi,
    ))
}

/// Sidecar text recording the grayscale mapping: `min <v>\nmax <v>\n`.
pub fn write_range_sidecar(path: &Path, lo: f64, hi: f64) -> Result<()> {
    std::fs::write(path, format!("min {lo:.17e}\nmax {hi:.17e}\n"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phantom::solenoidal_v;

    fn sample_grid() -> GridField {
        GridField::from_fn(1, 9, 7, |x, y| solenoidal_v(x, y).to_vec()).unwrap()
    }

    #[test]
    fn grid_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let g = sample_grid();
        for name in ["g.bin", "g.csv"] {
            let p = dir.path().join(name);
            write_grid(&g, &p).unwrap();
            assert_eq!(read_grid(&p).unwrap(), g);
        }
    }

    #[test]
    fn grid_binary_layout() {
        let dir = tempfile::tempdir().unwrap();
        let g = GridField::from_fn(0, 2, 1, |_, _| vec![0.5]).unwrap();
        let p = dir.path().join("g.bin");
        write_grid_bin(&g, &p).unwrap();
        let b = std::fs::read(&p).unwrap();
        assert_eq!(&b[..8], GRID_MAGIC);
        assert_eq!(&b[8..20], &[0, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(b.len(), 20 + 16);
        assert_eq!(f64::from_le_bytes(b[20..28].try_into().unwrap()), 0.5);
    }

    #[test]
    fn sinogram_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let geoms = [
            ScanGeometry::regular(3),
            ScanGeometry::random_vertices(6, 3, ChordMode::PerVertexFan),
        ];
        for geom in geoms {
            let n = geom.ray_count();
            let s = Sinogram::new(2, geom, (0..n).map(|i| (i as f64).sin() / 3.0).collect()).unwrap();
            for name in ["s.bin", "s.csv"] {
                let p = dir.path().join(name);
                write_sinogram(&s, &p).unwrap();
                assert_eq!(read_sinogram(&p).unwrap(), s);
            }
        }
    }

    #[test]
    fn coefficient_round_trip_and_format() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = CoefficientSet::zeros(1, 2);
        c.set(BasisIndex::minus(1, 1, 0).unwrap(), 1.0 / 3.0).unwrap();
        let p = dir.path().join("c.txt");
        write_coefficients(&c, &p).unwrap();
        assert_eq!(read_coefficients(&p).unwrap(), c);
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# coefficients m=1 N=2");
        assert_eq!(lines.len(), 1 + c.len());
        assert!(lines.contains(&"- 1 1 0 3.33333333333333315e-1"));
    }

    #[test]
    fn pgm_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let (img, lo, hi) = to_pgm16(&[0.0, 1.0, 2.0, 4.0, 3.0, 2.0], 3, 2).unwrap();
        assert_eq!((lo, hi), (0.0, 4.0));
        assert_eq!(img.pixels[3], 65535);
        let p = dir.path().join("a.pgm");
        write_pgm16(&img, &p).unwrap();
        assert_eq!(read_pgm(&p).unwrap(), img);
        let (flat, _, _) = to_pgm16(&[2.0; 4], 2, 2).unwrap();
        assert!(flat.pixels.iter().all(|&v| v == 0));
        assert!(to_pgm16(&[], 0, 0).is_err());
    }

    #[test]
    fn raster_orientation() {
        // top row bright, bottom row dark
        let img = PgmImage {
            width: 1,
            height: 2,
            maxval: 255,
            pixels: vec![255, 0],
        };
        let g = img.resample_to_grid(4, 4).unwrap();
        assert_eq!(g.value(0, 1, 3), 1.0);
        assert_eq!(g.value(0, 1, 0), 0.0);
    }
}
