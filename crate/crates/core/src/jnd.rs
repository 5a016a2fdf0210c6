//! Pixel-domain JND estimation (Chou & Li).
//!
//! The threshold at each pixel is the larger of two visibility effects
//! computed on luma:
//!
//! * luminance adaptation, driven by the weighted 5x5 background mean
//!   `bg`: `17 * (1 - sqrt(bg / 127)) + 3` for `bg <= 127`, otherwise
//!   `3/128 * (bg - 127) + 3`;
//! * texture masking, `0.117 * G`, where `G` is the largest absolute
//!   response of four 5x5 directional gradient operators (each scaled
//!   by 1/16).
//!
//! Borders are handled by edge replication, so the map always has the
//! same dimensions as the image. The luma threshold is replicated into
//! every channel of a color image.

use crate::error::{Error, Result};
use crate::image_io::{Image, JndMap};

/// Background-luminance weights, normalized by [`BACKGROUND_NORM`].
const BACKGROUND_KERNEL: [[i32; 5]; 5] = [
    [1, 1, 1, 1, 1],
    [1, 2, 2, 2, 1],
    [1, 2, 0, 2, 1],
    [1, 2, 2, 2, 1],
    [1, 1, 1, 1, 1],
];
const BACKGROUND_NORM: f64 = 32.0;

/// Directional high-pass operators, normalized by [`GRADIENT_NORM`].
const GRADIENT_KERNELS: [[[i32; 5]; 5]; 4] = [
    [
        [0, 0, 0, 0, 0],
        [1, 3, 8, 3, 1],
        [0, 0, 0, 0, 0],
        [-1, -3, -8, -3, -1],
        [0, 0, 0, 0, 0],
    ],
    [
        [0, 0, 1, 0, 0],
        [0, 8, 3, 0, 0],
        [1, 3, 0, -3, -1],
        [0, 0, -3, -8, 0],
        [0, 0, -1, 0, 0],
    ],
    [
        [0, 0, 1, 0, 0],
        [0, 0, 3, 8, 0],
        [-1, -3, 0, 3, 1],
        [0, -8, -3, 0, 0],
        [0, 0, -1, 0, 0],
    ],
    [
        [0, 1, 0, -1, 0],
        [0, 3, 0, -3, 0],
        [0, 8, 0, -8, 0],
        [0, 3, 0, -3, 0],
        [0, 1, 0, -1, 0],
    ],
];
const GRADIENT_NORM: f64 = 16.0;

/// Slope of the texture-masking term.
pub const TEXTURE_SLOPE: f64 = 0.117;

/// Upper bound on any threshold produced for 8-bit input.
pub const MAX_THRESHOLD: f64 = 64.0;

const RADIUS: usize = 2;

/// Single-channel luma plane with values in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LumaPlane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl LumaPlane {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Value at `(x, y)` with coordinates clamped into the plane.
    #[inline]
    fn get_replicated(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.data[y * self.width + x]
    }
}

/// Converts to luma with BT.601 weights. Gray images pass through.
pub fn to_luma(image: &Image) -> Result<LumaPlane> {
    let data = match image.channels() {
        1 => image.data().iter().map(|&v| f64::from(v)).collect(),
        // Integer weights keep the sum exact; one division rounds once.
        3 => image
            .data()
            .chunks_exact(3)
            .map(|p| {
                let y = 299 * u32::from(p[0]) + 587 * u32::from(p[1]) + 114 * u32::from(p[2]);
                f64::from(y) / 1000.0
            })
            .collect(),
        n => return Err(Error::UnsupportedChannels(n)),
    };
    Ok(LumaPlane {
        width: image.width(),
        height: image.height(),
        data,
    })
}

/// Luminance-adaptation threshold for background luminance `bg`.
pub fn luminance_adaptation(bg: f64) -> f64 {
    if bg <= 127.0 {
        17.0 * (1.0 - (bg / 127.0).sqrt()) + 3.0
    } else {
        3.0 / 128.0 * (bg - 127.0) + 3.0
    }
}

fn background_and_gradient(luma: &LumaPlane, x: usize, y: usize) -> (f64, f64) {
    let mut bg = 0.0;
    let mut grads = [0.0f64; 4];
    for (j, dy) in (-(RADIUS as isize)..=RADIUS as isize).enumerate() {
        for (i, dx) in (-(RADIUS as isize)..=RADIUS as isize).enumerate() {
            let p = luma.get_replicated(x as isize + dx, y as isize + dy);
            bg += f64::from(BACKGROUND_KERNEL[j][i]) * p;
            for (g, kernel) in grads.iter_mut().zip(&GRADIENT_KERNELS) {
                *g += f64::from(kernel[j][i]) * p;
            }
        }
    }
    let max_grad = grads
        .iter()
        .map(|g| (g / GRADIENT_NORM).abs())
        .fold(0.0, f64::max);
    (bg / BACKGROUND_NORM, max_grad)
}

/// Threshold at one pixel of a luma plane.
pub fn threshold_at(luma: &LumaPlane, x: usize, y: usize) -> f64 {
    let (bg, grad) = background_and_gradient(luma, x, y);
    luminance_adaptation(bg).max(TEXTURE_SLOPE * grad)
}

/// Single-channel JND map of a luma plane.
pub fn estimate_luma_jnd(luma: &LumaPlane) -> JndMap {
    let data = (0..luma.height)
        .flat_map(|y| (0..luma.width).map(move |x| threshold_at(luma, x, y) as f32))
        .collect();
    JndMap::new(luma.width, luma.height, 1, data).expect("thresholds are finite and non-negative")
}

/// JND map for `image`, with the luma threshold replicated per channel.
pub fn estimate_jnd(image: &Image) -> JndMap {
    let luma = to_luma(image).expect("Image guarantees 1 or 3 channels");
    let plane = estimate_luma_jnd(&luma);
    let channels = image.channels();
    if channels == 1 {
        return plane;
    }
    let data = plane
        .data()
        .iter()
        .flat_map(|&t| std::iter::repeat_n(t, channels))
        .collect();
    JndMap::new(image.width(), image.height(), channels, data)
        .expect("replication preserves validity")
}

/// Multiplies every threshold by `gain`.
pub fn scale_map(map: &JndMap, gain: f64) -> Result<JndMap> {
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::InvalidParameter {
            name: "gain",
            value: gain,
            reason: "must be finite and positive",
        });
    }
    if gain == 1.0 {
        return Ok(map.clone());
    }
    let d = map.dims();
    let data = map
        .data()
        .iter()
        .map(|&t| (f64::from(t) * gain) as f32)
        .collect();
    JndMap::new(d.width, d.height, d.channels, data)
}
