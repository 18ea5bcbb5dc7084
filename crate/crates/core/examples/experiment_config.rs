//! Loads a TOML experiment and writes the coverage outputs into a
//! directory; pass a config path as the first argument or use the defaults.

use drv_isac::harness::{cmd_coverage, ExperimentConfig};

fn main() -> drv_isac::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::from_path(path.as_ref())?,
        None => ExperimentConfig::default_config(),
    };
    println!("config sha256 {}", cfg.hash);
    for sweep in &cfg.sweeps {
        println!("sweep {} over {} points", sweep.name, sweep.grid().len());
    }
    let out = std::env::temp_dir().join("drv-isac-example");
    let summary = cmd_coverage(&cfg, &out)?;
    for m in &summary.methods {
        println!("{:<6} {:<16} area {:.4e} m2  IoU {:.4}", m.case, m.method, m.area, m.iou);
    }
    println!("outputs in {}", out.display());
    Ok(())
}
