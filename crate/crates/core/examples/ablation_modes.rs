//! Compares JNDMix with the two ablation injectors on one image: counts
//! how many samples each pushes past its JND threshold.
//!
//! ```text
//! cargo run --example ablation_modes [image.png]
//! ```

use std::env;

use jndmix::batch::find_violations;
use jndmix::{estimate_jnd, load_image, Image, Injection};

fn main() -> jndmix::Result<()> {
    let image = match env::args().nth(1) {
        Some(path) => load_image(path)?,
        None => Image::from_fn(128, 96, 3, |x, y, c| {
            let base = (x * 2 + y) as u32 + 30 * c as u32;
            (base % 256) as u8
        })?,
    };
    let map = estimate_jnd(&image);
    let sigma = 3.0 * map.mean();
    println!("mean JND {:.3}; gaussian sigma {sigma:.3}", map.mean());

    for (name, injection) in [
        ("jndmix", Injection::JndMix),
        ("full-jnd", Injection::FullJnd),
        ("gaussian", Injection::Gaussian { sigma }),
    ] {
        let (out, lambda) = injection.apply(&image, Some(&map), 11)?;
        let violations = find_violations(&image, &out, &map)?;
        let lambda = lambda.map_or("-".to_string(), |l| format!("{l:.4}"));
        println!("{name:<10} lambda {lambda:<7} violations {}", violations.len());
    }
    Ok(())
}
