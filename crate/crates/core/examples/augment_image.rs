//! Produces several JNDMix variants of one image and reports how far each
//! one moved from the original.
//!
//! ```text
//! cargo run --example augment_image [image.png] [out-dir]
//! ```

use std::env;
use std::path::PathBuf;

use jndmix::{estimate_jnd, jndmix, load_image, save_image, Image};

fn main() -> jndmix::Result<()> {
    let mut args = env::args().skip(1);
    let image = match args.next() {
        Some(path) => load_image(path)?,
        None => Image::from_fn(64, 64, 3, |x, y, c| ((x * 3 + y * 2 + c * 40) % 256) as u8)?,
    };
    let out_dir = args.next().map(PathBuf::from);
    let map = estimate_jnd(&image);
    let mos = 62.5;

    println!("seed  lambda  max|diff|  changed");
    for seed in 0..5u64 {
        let sample = jndmix(&image, mos, &map, seed)?;
        assert_eq!(sample.label, mos);
        let diffs: Vec<u8> = image
            .data()
            .iter()
            .zip(sample.image.data())
            .map(|(a, b)| a.abs_diff(*b))
            .collect();
        let changed = diffs.iter().filter(|&&d| d > 0).count();
        println!(
            "{seed:>4}  {:.4}  {:>9}  {:>6.1}%",
            sample.lambda,
            diffs.iter().max().unwrap_or(&0),
            100.0 * changed as f64 / diffs.len() as f64
        );
        if let Some(dir) = &out_dir {
            std::fs::create_dir_all(dir).map_err(|e| jndmix::Error::Io {
                path: dir.clone(),
                source: e,
            })?;
            save_image(&sample.image, dir.join(format!("variant_{seed}.png")))?;
        }
    }
    Ok(())
}
