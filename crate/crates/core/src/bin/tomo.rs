use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fanbeam_tomo::config::RunConfig;
use fanbeam_tomo::forward::NoiseModel;
use fanbeam_tomo::phantom::PhantomSpec;
use fanbeam_tomo::pipeline::{self, InvertOptions};
use fanbeam_tomo::Result;

#[derive(Parser)]
#[command(name = "tomo", version, about = "Fan-beam tensor tomography on the unit disc")]
struct Cli {
    /// TOML run configuration supplying defaults for unset options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a test field on a square grid.
    Phantom {
        /// solenoidal_v, mixed_v, zernike:n,k,m, head, oscillating, coeffs:PATH, raster:PATH
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Integrate a field along every ray of a scanning geometry.
    Forward {
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Simpson intervals per chord.
        #[arg(long)]
        intervals: Option<usize>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Perturb a sinogram.
    Noise {
        #[arg(long, short)]
        input: PathBuf,
        /// uniform or poisson
        #[arg(long)]
        model: Option<String>,
        /// Relative L2 level.
        #[arg(long)]
        level: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        counts_per_unit: Option<f64>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Recover the solenoidal part from a sinogram.
    Invert {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        /// explicit, projection or lsq
        #[arg(long)]
        method: Option<String>,
        /// all, terms:COUNT or gamma:VALUE
        #[arg(long)]
        truncation: Option<String>,
        #[arg(long)]
        ridge: Option<f64>,
        /// Side of the output grid.
        #[arg(long)]
        grid: Option<usize>,
        /// Coefficient file to write.
        #[arg(long)]
        coeffs: PathBuf,
        /// Reconstructed field to write.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Write PGM images, range sidecars and a CSV mirror.
    Render {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long)]
        prefix: PathBuf,
    },
    /// Relative L2 error of a field against a reference.
    Error {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        reference: PathBuf,
    },
}

#[derive(Args)]
struct GeometryArgs {
    /// regular or irregular
    #[arg(long)]
    geometry: Option<String>,
    /// M: a regular geometry has M + 2 vertices.
    #[arg(long)]
    projections: Option<usize>,
    #[arg(long)]
    vertices: Option<usize>,
    /// jittered or uniform
    #[arg(long)]
    vertex_layout: Option<String>,
    #[arg(long)]
    vertex_jitter: Option<f64>,
    #[arg(long)]
    vertex_seed: Option<u64>,
    /// all_pairs or per_vertex_fan
    #[arg(long)]
    chord_mode: Option<String>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Phantom { name, size, out } => {
            set(&mut cfg.phantom, name);
            set(&mut cfg.grid, size);
            cfg.validate()?;
            let spec = PhantomSpec::parse(&cfg.phantom)?;
            let g = pipeline::cmd_phantom(&spec, cfg.grid, cfg.grid, &out)?;
            log::info!("{} rank {} on {}x{}", cfg.phantom, g.rank(), g.nx(), g.ny());
        }
        Command::Forward {
            input,
            geometry,
            intervals,
            out,
        } => {
            set(&mut cfg.geometry, geometry.geometry);
            set(&mut cfg.projections, geometry.projections);
            set(&mut cfg.vertices, geometry.vertices);
            set(&mut cfg.vertex_layout, geometry.vertex_layout);
            set(&mut cfg.vertex_jitter, geometry.vertex_jitter);
            set(&mut cfg.vertex_seed, geometry.vertex_seed);
            set(&mut cfg.chord_mode, geometry.chord_mode);
            set(&mut cfg.line_intervals, intervals);
            cfg.validate()?;
            let s = pipeline::cmd_forward(&input, &cfg.scan_geometry()?, cfg.line_quadrature(), &out)?;
            log::info!("{} rays", s.values.len());
        }
        Command::Noise {
            input,
            model,
            level,
            seed,
            counts_per_unit,
            out,
        } => {
            if model.is_none() && cfg.noise == "none" {
                cfg.noise = "uniform".into();
            }
            set(&mut cfg.noise, model);
            set(&mut cfg.noise_level, level);
            set(&mut cfg.noise_seed, seed);
            set(&mut cfg.counts_per_unit, counts_per_unit);
            cfg.validate()?;
            let model = cfg.noise_model()?.unwrap_or(NoiseModel::Uniform);
            let realized = pipeline::cmd_noise(&input, model, cfg.noise_level, cfg.noise_seed, &out)?;
            println!("realized {}", pipeline::format_sig6(realized));
        }
        Command::Invert {
            input,
            degree,
            method,
            truncation,
            ridge,
            grid,
            coeffs,
            out,
        } => {
            set(&mut cfg.degree, degree);
            set(&mut cfg.method, method);
            set(&mut cfg.truncation, truncation);
            set(&mut cfg.ridge, ridge);
            set(&mut cfg.grid, grid);
            cfg.validate()?;
            let opts = InvertOptions::from_config(&cfg)?;
            let (c, report) = pipeline::cmd_invert(&input, &opts, &coeffs, out.as_deref())?;
            cfg.rank = c.rank();
            if let Some(c) = report.condition {
                log::info!("condition {c:.3e}");
            }
            log::info!("kept {} of {} terms", report.terms_kept, report.terms_available);
            cfg.save(&effective_config_path(&coeffs))?;
        }
        Command::Render { input, prefix } => {
            for f in pipeline::cmd_render(&input, &prefix)? {
                println!("{}", f.display());
            }
        }
        Command::Error { field, reference } => {
            println!("{}", pipeline::format_sig6(pipeline::cmd_error(&field, &reference)?));
        }
    }
    Ok(())
}

fn effective_config_path(coeffs: &Path) -> PathBuf {
    let mut name = coeffs.file_name().unwrap_or_default().to_os_string();
    name.push(".toml");
    coeffs.with_file_name(name)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
