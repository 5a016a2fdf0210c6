//! Runs the repeated-split protocol on a synthetic dataset with a toy
//! predictor, at full and reduced training data.
//!
//! ```text
//! cargo run --example split_protocol
//! ```

use jndmix::protocol::repeat_split;
use jndmix::{repeat_protocol, DatasetManifest, MetricReport, Record};

fn main() -> jndmix::Result<()> {
    // 1162 records with a hidden "true" quality and a noisy MOS.
    let records: Vec<Record> = (0..1162)
        .map(|i| Record {
            path: format!("img_{i:04}.jpg").into(),
            mos: (i % 97) as f64 + ((i * 7919) % 13) as f64 * 0.5,
        })
        .collect();
    let manifest = DatasetManifest::new("synthetic", records)?;
    let labels = manifest.labels();

    for fraction in [1.0, 0.5, 0.25] {
        let split = repeat_split(&manifest, 2024, 0, fraction)?;
        // Toy predictor: the MOS rounded to the training set's granularity.
        // Fewer training records give a coarser step and lower scores.
        let step = 2000.0 / split.train.len() as f64;
        let report = repeat_protocol(&manifest, 2024, 10, fraction, |s| {
            let gt: Vec<f64> = s.test.iter().map(|&i| labels[i]).collect();
            let pred: Vec<f64> = gt.iter().map(|v| (v / step).floor() * step).collect();
            MetricReport::evaluate(&pred, &gt, s.seed, s.train_fraction)
        })?;
        println!(
            "fraction {fraction:<5} train {:>4} test {:>4}  mean SRCC {:.4} PLCC {:.4}",
            split.train.len(),
            split.test.len(),
            report.srcc,
            report.plcc
        );
    }
    Ok(())
}
