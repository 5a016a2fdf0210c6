//! Runs the full batch pipeline in a temporary directory: estimate maps,
//! augment, verify, and split, through the same entry points the `jndmix`
//! binary uses.
//!
//! ```text
//! cargo run --example batch_pipeline
//! ```

use jndmix::batch::{cmd_augment, cmd_estimate_jnd, cmd_split, cmd_verify, Command, RunConfig};
use jndmix::protocol::save_manifest;
use jndmix::{save_image, DatasetManifest, Image, Record};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = tempfile::tempdir()?;
    let mut records = Vec::new();
    for i in 0..12usize {
        let image = Image::from_fn(48, 40, 3, |x, y, c| ((x * (i + 1) + y * 3 + c * 50) % 256) as u8)?;
        let name = format!("img_{i:02}.png");
        save_image(&image, root.path().join(&name))?;
        records.push(Record { path: name.into(), mos: 20.0 + 5.0 * i as f64 });
    }
    let manifest = root.path().join("manifest.csv");
    save_manifest(&DatasetManifest::new("demo", records)?, &manifest)?;

    let maps = root.path().join("maps");
    let mut config = RunConfig::new(Command::EstimateJnd);
    config.manifest = Some(manifest.clone());
    config.out = Some(maps.clone());
    let estimated = cmd_estimate_jnd(&config)?;
    println!("estimate-jnd: {} maps", estimated.written.len());

    let augmented = root.path().join("augmented");
    config.command = Command::Augment;
    config.maps = Some(maps.clone());
    config.out = Some(augmented.clone());
    config.seed = 42;
    let report = cmd_augment(&config)?;
    println!("augment: {} images, audit at {}", report.audit.len(), report.audit_path.display());
    for entry in report.audit.iter().take(3) {
        println!("  {} seed {} lambda {:.4}", entry.source.display(), entry.seed, entry.lambda.unwrap_or(f64::NAN));
    }

    config.command = Command::Verify;
    config.augmented = Some(report.manifest_path.clone());
    let verified = cmd_verify(&config)?;
    println!(
        "verify: {} samples, {} violations",
        verified.samples_checked,
        verified.total_violations()
    );

    config.command = Command::Split;
    config.out = Some(root.path().join("splits"));
    config.repeats = 3;
    let splits = cmd_split(&config)?;
    println!("split: {} files", splits.files.len());
    Ok(())
}
