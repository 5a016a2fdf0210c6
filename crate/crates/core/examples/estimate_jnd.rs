//! Estimates a JND map and prints its statistics.
//!
//! ```text
//! cargo run --example estimate_jnd [image.png] [out.jndm]
//! ```
//!
//! Without arguments a synthetic test card is used.

use std::env;

use jndmix::{estimate_jnd, load_image, save_jnd_map, Image};

fn test_card() -> jndmix::Result<Image> {
    // Flat dark band, flat bright band, and a fine checkerboard.
    Image::from_fn(96, 64, 3, |x, y, c| match x / 32 {
        0 => 20 + c as u8 * 5,
        1 => 230,
        _ => {
            if (x + y) % 2 == 0 {
                40
            } else {
                200
            }
        }
    })
}

fn main() -> jndmix::Result<()> {
    let mut args = env::args().skip(1);
    let image = match args.next() {
        Some(path) => load_image(path)?,
        None => test_card()?,
    };
    let map = estimate_jnd(&image);
    println!("image      {}", image.dims());
    println!("mean JND   {:.3}", map.mean());
    println!("max JND    {:.3}", map.max());

    if image.width() == 96 && image.height() == 64 {
        for (name, x) in [("dark flat", 16), ("bright flat", 48), ("checkerboard", 80)] {
            println!("{name:<13}{:.3}", map.get(x, 32, 0));
        }
    }
    if let Some(out) = args.next() {
        save_jnd_map(&map, &out)?;
        println!("wrote {out}");
    }
    Ok(())
}
