//! The file-based pipeline behind the `tomo` binary, driven by a run
//! configuration: phantom, forward, noise, invert, render, error.

use std::error::Error;

use fanbeam_tomo::config::RunConfig;
use fanbeam_tomo::phantom::PhantomSpec;
use fanbeam_tomo::pipeline::*;

const CONFIG: &str = r#"
schema_version = 1
rank = 1
phantom = "solenoidal_v"
grid = 128
geometry = "regular"
projections = 18
noise = "uniform"
noise_level = 0.01
noise_seed = 42
method = "projection"
degree = 8
"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = RunConfig::from_toml_str(CONFIG)?;
    let dir = std::env::temp_dir().join(format!("tomo-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let p = |name: &str| dir.join(name);

    cmd_phantom(&PhantomSpec::parse(&cfg.phantom)?, cfg.grid, cfg.grid, &p("field.bin"))?;
    cmd_forward(&p("field.bin"), &cfg.scan_geometry()?, cfg.line_quadrature(), &p("sino.csv"))?;
    let model = cfg.noise_model()?.expect("noise configured");
    let realized = cmd_noise(&p("sino.csv"), model, cfg.noise_level, cfg.noise_seed, &p("noisy.csv"))?;
    let (coeffs, report) = cmd_invert(&p("noisy.csv"), &InvertOptions::from_config(&cfg)?, &p("coeffs.txt"), Some(&p("rec.bin")))?;
    cfg.save(&p("run.toml"))?;
    let images = cmd_render(&p("rec.bin"), &p("rec"))?;
    let err = cmd_error(&p("rec.bin"), &p("field.bin"))?;

    println!("noise realized {}", format_sig6(realized));
    println!("{} of {} coefficients, largest |c| {:.3}", report.terms_kept, report.terms_available, coeffs.norm());
    println!("rendered {} files under {}", images.len(), dir.display());
    println!("relative error {}", format_sig6(err));
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
