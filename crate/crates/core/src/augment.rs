//! JNDMix sample generation and the two ablation injectors.
//!
//! A JNDMix sample is produced in four steps from an image `x`, its
//! label `y` and a JND map:
//!
//! 1. draw a scalar ratio `lambda` uniformly from the open interval (0, 1);
//! 2. scale the map: `noise = lambda * jnd`;
//! 3. draw an independent sign (+1 or -1) for every sample;
//! 4. inject: `x' = clamp(round(x + sign * noise), 0, 255)`.
//!
//! The label is carried over untouched. Because `lambda < 1`, every
//! changed sample moves by at most `round(jnd)` intensity levels.
//!
//! Rounding is half-away-from-zero throughout.

use rand::distr::Open01;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::image_io::{Dims, Image, JndMap};
use crate::rng::JndRng;

/// Per-sample injection direction, each element +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignField {
    dims: Dims,
    data: Vec<i8>,
}

impl SignField {
    /// Builds a field from explicit signs. Every value must be +1 or -1.
    pub fn new(dims: Dims, data: Vec<i8>) -> Result<Self> {
        let dims = dims.ensure_positive()?;
        if data.len() != dims.len() {
            return Err(Error::BufferLength {
                dims,
                expected: dims.len(),
                found: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter {
                name: "sign",
                value: f64::from(bad),
                reason: "signs must be +1 or -1",
            });
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[i8] {
        &self.data
    }

    pub fn positive_fraction(&self) -> f64 {
        self.data.iter().filter(|&&s| s > 0).count() as f64 / self.data.len() as f64
    }
}

/// Non-negative noise magnitudes, element-wise bounded by their source map.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseField {
    dims: Dims,
    data: Vec<f64>,
}

impl NoiseField {
    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// An augmented image with the label and the randomness that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSample {
    pub image: Image,
    pub label: f64,
    pub lambda: f64,
    pub seed: u64,
}

/// Draws the noise ratio, strictly inside (0, 1).
pub fn sample_lambda(rng: &mut JndRng) -> f64 {
    rng.sample(Open01)
}

/// Draws an independent fair sign for each of `width * height * channels`
/// samples. Signs are taken 64 at a time from the bits of one draw.
pub fn sample_sign_field(
    rng: &mut JndRng,
    width: usize,
    height: usize,
    channels: usize,
) -> Result<SignField> {
    let dims = Dims::new(width, height, channels).ensure_positive()?;
    let mut data = Vec::with_capacity(dims.len());
    while data.len() < dims.len() {
        let bits = rng.next_u64();
        let take = (dims.len() - data.len()).min(64);
        data.extend((0..take).map(|b| if (bits >> b) & 1 == 1 { 1i8 } else { -1 }));
    }
    Ok(SignField { dims, data })
}

/// Scales `jnd` by `lambda`, which must lie in (0, 1].
pub fn make_noise(jnd: &JndMap, lambda: f64) -> Result<NoiseField> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "must lie in (0, 1]",
        });
    }
    Ok(NoiseField {
        dims: jnd.dims(),
        data: jnd.data().iter().map(|&t| lambda * f64::from(t)).collect(),
    })
}

#[inline]
fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Adds signed noise to every sample, then rounds and clamps to 8 bits.
pub fn inject(image: &Image, noise: &NoiseField, sign: &SignField) -> Result<Image> {
    image.dims().ensure_matches(noise.dims())?;
    image.dims().ensure_matches(sign.dims())?;
    let data = image
        .data()
        .iter()
        .zip(&noise.data)
        .zip(&sign.data)
        .map(|((&x, &n), &s)| quantize(f64::from(x) + f64::from(s) * n))
        .collect();
    let d = image.dims();
    Image::new(d.width, d.height, d.channels, data)
}

/// Produces one JNDMix sample. `lambda` and the sign field are drawn, in
/// that order, from a generator seeded with `seed`.
pub fn jndmix(image: &Image, label: f64, jnd: &JndMap, seed: u64) -> Result<AugmentedSample> {
    image.dims().ensure_matches(jnd.dims())?;
    let mut rng = JndRng::from_seed(seed);
    let lambda = sample_lambda(&mut rng);
    let noise = make_noise(jnd, lambda)?;
    let d = image.dims();
    let sign = sample_sign_field(&mut rng, d.width, d.height, d.channels)?;
    Ok(AugmentedSample {
        image: inject(image, &noise, &sign)?,
        label,
        lambda,
        seed,
    })
}

/// Ablation: adds the full map with positive sign, no ratio and no signs.
pub fn full_jnd_inject(image: &Image, jnd: &JndMap) -> Result<Image> {
    image.dims().ensure_matches(jnd.dims())?;
    let data = image
        .data()
        .iter()
        .zip(jnd.data())
        .map(|(&x, &t)| quantize(f64::from(x) + f64::from(t)))
        .collect();
    let d = image.dims();
    Image::new(d.width, d.height, d.channels, data)
}

/// Ablation variant: adds the full map with a random sign per sample.
pub fn full_jnd_inject_random_sign(image: &Image, jnd: &JndMap, seed: u64) -> Result<Image> {
    image.dims().ensure_matches(jnd.dims())?;
    let d = image.dims();
    let sign = sample_sign_field(&mut JndRng::from_seed(seed), d.width, d.height, d.channels)?;
    let noise = make_noise(jnd, 1.0)?;
    inject(image, &noise, &sign)
}

/// Ablation: adds i.i.d. zero-mean Gaussian noise with standard deviation `sigma`.
pub fn gaussian_inject(image: &Image, sigma: f64, seed: u64) -> Result<Image> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "must be finite and positive",
        });
    }
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    let mut rng = JndRng::from_seed(seed);
    let data = image
        .data()
        .iter()
        .map(|&x| quantize(f64::from(x) + normal.sample(&mut rng)))
        .collect();
    let d = image.dims();
    Image::new(d.width, d.height, d.channels, data)
}

/// Which injector to run on a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Injection {
    JndMix,
    FullJnd,
    Gaussian { sigma: f64 },
}

impl Injection {
    pub fn needs_map(&self) -> bool {
        !matches!(self, Injection::Gaussian { .. })
    }

    /// Applies the injector. Returns the new image and, for JNDMix, the drawn ratio.
    pub fn apply(
        &self,
        image: &Image,
        jnd: Option<&JndMap>,
        seed: u64,
    ) -> Result<(Image, Option<f64>)> {
        let map = || jnd.ok_or(Error::MissingArgument("maps"));
        match *self {
            Injection::JndMix => {
                let s = jndmix(image, 0.0, map()?, seed)?;
                Ok((s.image, Some(s.lambda)))
            }
            Injection::FullJnd => Ok((full_jnd_inject(image, map()?)?, None)),
            Injection::Gaussian { sigma } => Ok((gaussian_inject(image, sigma, seed)?, None)),
        }
    }
}
