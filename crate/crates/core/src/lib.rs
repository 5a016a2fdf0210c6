//! Label-preserving noise augmentation for no-reference image quality
//! assessment.
//!
//! Each training image is perturbed by noise that stays below its
//! per-pixel just-noticeable-difference (JND) threshold, so the mean
//! opinion score attached to it remains valid:
//!
//! ```text
//! noise = lambda * jnd             lambda ~ U(0, 1), one per sample
//! x'    = x + sign * noise         sign in {+1, -1}, one per element
//! y'    = y
//! ```
//!
//! The crate is organized as:
//!
//! * [`image_io`]: 8-bit images and JND maps, PNG/JPEG input, PNG and
//!   JNDM output;
//! * [`jnd`]: a pixel-domain JND estimator (luminance adaptation and
//!   texture masking);
//! * [`augment`]: the augmentation itself and two ablation injectors;
//! * [`metrics`]: SRCC and PLCC;
//! * [`protocol`]: manifests, seeded 80/20 splits, reduced-data regimes
//!   and repeated evaluation;
//! * [`batch`]: manifest-wide commands behind the `jndmix` binary;
//! * [`rng`]: seeded random streams.
//!
//! Runnable walkthroughs live in `examples/`: `estimate_jnd`,
//! `augment_image`, `ablation_modes`, `correlation_metrics`,
//! `split_protocol` and `batch_pipeline`.
//!
//! ```
//! use jndmix::{estimate_jnd, jndmix, Image};
//!
//! let image = Image::from_fn(32, 32, 3, |x, y, _| (4 * x + 2 * y) as u8)?;
//! let map = estimate_jnd(&image);
//! let sample = jndmix(&image, 3.75, &map, 7)?;
//! assert_eq!(sample.label, 3.75);
//! # Ok::<(), jndmix::Error>(())
//! ```

pub mod augment;
pub mod batch;
pub mod error;
pub mod image_io;
pub mod jnd;
pub mod metrics;
pub mod protocol;
pub mod rng;

pub use augment::{
    full_jnd_inject, gaussian_inject, inject, jndmix, make_noise, sample_lambda, sample_sign_field,
    AugmentedSample, Injection, NoiseField, SignField,
};
pub use error::{Error, Result};
pub use image_io::{load_image, load_jnd_map, save_image, save_jnd_map, Dims, Image, JndMap};
pub use jnd::{estimate_jnd, scale_map, to_luma, LumaPlane};
pub use metrics::{plcc, rank_with_ties, srcc, MetricReport, ScoreSeries};
pub use protocol::{
    load_manifest, make_split, repeat_protocol, subsample_train, DatasetManifest, Record, Split,
};
pub use rng::{derive_seed, splitmix64, JndRng};
