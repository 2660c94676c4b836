//! Run configuration: a flat, versioned TOML table.
//!
//! ```toml
//! schema_version = 1
//! rank = 1
//! degree = 12
//! phantom = "solenoidal_v"
//! grid = 256
//! geometry = "regular"        # or "irregular"
//! projections = 18            # M for regular geometries
//! vertices = 20               # irregular: number of vertices
//! vertex_layout = "jittered"  # or "uniform"
//! vertex_jitter = 0.25        # jittered: offset bound in units of 2π/vertices
//! vertex_seed = 2024
//! chord_mode = "all_pairs"    # or "per_vertex_fan"
//! line_intervals = 1024
//! noise = "none"              # "uniform" or "poisson"
//! noise_level = 0.0
//! noise_seed = 0
//! counts_per_unit = 10000.0
//! method = "lsq"              # "explicit", "projection" or "lsq"
//! ridge = 0.0
//! truncation = "all"          # "terms:<count>" or "gamma:<value>"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::forward::{ChordMode, NoiseModel, ScanGeometry};
use crate::inversion::TruncationPolicy;
use crate::phantom::PhantomSpec;
use crate::quadrature::LineQuadratureSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub schema_version: u32,
    pub rank: usize,
    pub degree: usize,
    pub phantom: String,
    pub grid: usize,
    pub geometry: String,
    pub projections: usize,
    pub vertices: usize,
    pub vertex_layout: String,
    pub vertex_jitter: f64,
    pub vertex_seed: u64,
    pub chord_mode: String,
    pub line_intervals: usize,
    pub noise: String,
    pub noise_level: f64,
    pub noise_seed: u64,
    pub counts_per_unit: f64,
    pub method: String,
    pub ridge: f64,
    pub truncation: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            rank: 0,
            degree: 8,
            phantom: "head".into(),
            grid: 256,
            geometry: "regular".into(),
            projections: 18,
            vertices: 20,
            vertex_layout: "jittered".into(),
            vertex_jitter: 0.25,
            vertex_seed: 2024,
            chord_mode: "all_pairs".into(),
            line_intervals: LineQuadratureSpec::default().intervals,
            noise: "none".into(),
            noise_level: 0.0,
            noise_seed: 0,
            counts_per_unit: NoiseModel::DEFAULT_COUNTS_PER_UNIT,
            method: "lsq".into(),
            ridge: 0.0,
            truncation: "all".into(),
        }
    }
}

/// Inversion method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Explicit,
    Projection,
    Lsq,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Self::Explicit),
            "projection" => Ok(Self::Projection),
            "lsq" => Ok(Self::Lsq),
            _ => Err(TomoError::Config(format!("unknown method `{s}`"))),
        }
    }
}

/// `all`, `terms:<count>` or `gamma:<value>`; `None` keeps every term.
pub fn parse_truncation(s: &str) -> Result<Option<TruncationPolicy>> {
    if s == "all" {
        return Ok(None);
    }
    let bad = || TomoError::Config(format!("unknown truncation `{s}`"));
    let (kind, v) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "terms" => Ok(Some(TruncationPolicy::MaxTerms(v.parse().map_err(|_| bad())?))),
        "gamma" => {
            let gamma: f64 = v.parse().map_err(|_| bad())?;
            if gamma <= 0.0 || !gamma.is_finite() {
                return Err(bad());
            }
            Ok(Some(TruncationPolicy::Threshold { gamma }))
        }
        _ => Err(bad()),
    }
}

pub fn parse_chord_mode(s: &str) -> Result<ChordMode> {
    match s {
        "all_pairs" => Ok(ChordMode::AllPairs),
        "per_vertex_fan" => Ok(ChordMode::PerVertexFan),
        _ => Err(TomoError::Config(format!("unknown chord mode `{s}`"))),
    }
}

/// `None` for `"none"`.
pub fn parse_noise(s: &str, counts_per_unit: f64) -> Result<Option<NoiseModel>> {
    match s {
        "none" => Ok(None),
        "uniform" => Ok(Some(NoiseModel::Uniform)),
        "poisson" => Ok(Some(NoiseModel::Poisson { counts_per_unit })),
        _ => Err(TomoError::Config(format!("unknown noise model `{s}`"))),
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| TomoError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| TomoError::Config(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(TomoError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.grid == 0 {
            return Err(TomoError::Config("grid must be positive".into()));
        }
        if self.line_intervals < 2 {
            return Err(TomoError::Config("line_intervals must be at least 2".into()));
        }
        if self.noise_level < 0.0 || !self.noise_level.is_finite() {
            return Err(TomoError::NegativeLevel(self.noise_level));
        }
        if self.ridge < 0.0 || !self.ridge.is_finite() {
            return Err(TomoError::Config("ridge must be non-negative".into()));
        }
        PhantomSpec::parse(&self.phantom)?;
        self.scan_geometry()?;
        self.noise_model()?;
        self.method()?;
        self.truncation()?;
        Ok(())
    }

    pub fn scan_geometry(&self) -> Result<ScanGeometry> {
        match self.geometry.as_str() {
            "regular" => Ok(ScanGeometry::regular(self.projections)),
            "irregular" => {
                if self.vertices < 2 {
                    return Err(TomoError::Config("irregular geometry needs at least 2 vertices".into()));
                }
                let mode = parse_chord_mode(&self.chord_mode)?;
                match self.vertex_layout.as_str() {
                    "jittered" => {
                        if !(0.0..=0.5).contains(&self.vertex_jitter) {
                            return Err(TomoError::Config("vertex_jitter must lie in [0, 0.5]".into()));
                        }
                        Ok(ScanGeometry::jittered_vertices(self.vertices, self.vertex_jitter, self.vertex_seed, mode))
                    }
                    "uniform" => Ok(ScanGeometry::random_vertices(self.vertices, self.vertex_seed, mode)),
                    other => Err(TomoError::Config(format!("unknown vertex layout `{other}`"))),
                }
            }
            other => Err(TomoError::Config(format!("unknown geometry `{other}`"))),
        }
    }

    pub fn noise_model(&self) -> Result<Option<NoiseModel>> {
        parse_noise(&self.noise, self.counts_per_unit)
    }

    pub fn method(&self) -> Result<Method> {
        Method::parse(&self.method)
    }

    pub fn truncation(&self) -> Result<Option<TruncationPolicy>> {
        parse_truncation(&self.truncation)
    }

    pub fn line_quadrature(&self) -> LineQuadratureSpec {
        LineQuadratureSpec {
            intervals: self.line_intervals,
        }
    }
}
