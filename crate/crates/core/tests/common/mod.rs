//! Test-only oracles and corpus builders. Nothing here calls into the
//! implementation paths it is used to check.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use jndmix::Image;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank of every value by counting: 1 + (#smaller) + (#equal - 1) / 2.
pub fn oracle_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let smaller = v.iter().filter(|&&y| y < x).count() as f64;
            let equal = v.iter().filter(|&&y| y == x).count() as f64;
            1.0 + smaller + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Pearson correlation from raw sums.
pub fn oracle_pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let sx: f64 = a.iter().sum();
    let sy: f64 = b.iter().sum();
    let sxx: f64 = a.iter().map(|x| x * x).sum();
    let syy: f64 = b.iter().map(|y| y * y).sum();
    let sxy: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt()
}

pub fn oracle_spearman(a: &[f64], b: &[f64]) -> f64 {
    oracle_pearson(&oracle_ranks(a), &oracle_ranks(b))
}

/// Kolmogorov-Smirnov statistic of `draws` against Uniform(0, 1).
pub fn ks_uniform(draws: &[f64]) -> f64 {
    let mut s = draws.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let above = (i as f64 + 1.0) / n - x;
            let below = x - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random image mixing a gradient, flat patches and per-pixel noise of
/// random strength, so both smooth and textured regions occur.
pub fn random_image(rng: &mut impl Rng, width: usize, height: usize, channels: usize) -> Image {
    let base: Vec<f64> = (0..channels).map(|_| rng.random_range(0.0..255.0)).collect();
    let gx = rng.random_range(-3.0..3.0);
    let gy = rng.random_range(-3.0..3.0);
    let amp = rng.random_range(0.0..90.0);
    let rects: Vec<(usize, usize, usize, usize, f64)> = (0..rng.random_range(0..4))
        .map(|_| {
            let x0 = rng.random_range(0..width);
            let y0 = rng.random_range(0..height);
            (
                x0,
                y0,
                rng.random_range(x0..width) + 1,
                rng.random_range(y0..height) + 1,
                rng.random_range(0.0..255.0),
            )
        })
        .collect();
    let mut noise = || rng.random_range(-1.0..1.0) * amp;
    let data = (0..width * height * channels)
        .map(|i| {
            let c = i % channels;
            let x = (i / channels) % width;
            let y = i / channels / width;
            let mut v = base[c] + gx * x as f64 + gy * y as f64;
            for &(x0, y0, x1, y1, level) in &rects {
                if (x0..x1).contains(&x) && (y0..y1).contains(&y) {
                    v = level;
                }
            }
            (v + noise()).round().clamp(0.0, 255.0) as u8
        })
        .collect();
    Image::new(width, height, channels, data).unwrap()
}

/// Writes `count` random PNGs plus `manifest.csv` into `dir`. Labels are
/// random reals so that bit-exact copying is meaningful.
pub fn write_corpus(dir: &Path, count: usize, width: usize, height: usize, seed: u64) -> PathBuf {
    let mut r = rng(seed);
    let mut csv = String::from("path,mos\n");
    fs::create_dir_all(dir.join("images")).unwrap();
    for i in 0..count {
        let img = random_image(&mut r, width, height, 3);
        let name = format!("images/img_{i:04}.png");
        jndmix::save_image(&img, dir.join(&name)).unwrap();
        let mos: f64 = r.random_range(0.0..100.0);
        writeln!(csv, "{name},{mos}").unwrap();
    }
    let manifest = dir.join("manifest.csv");
    fs::write(&manifest, csv).unwrap();
    manifest
}

/// Every file in `dir` with its bytes, sorted by name.
pub fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}
