//! Image and JND-map containers plus their on-disk formats.
//!
//! Images are decoded from PNG or JPEG and always written back as PNG.
//! JND maps are stored in the JNDM sidecar format, a flat little-endian
//! container holding exact `f32` thresholds:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "JNDM"
//! 4       2     version (u16 LE) = 1
//! 6       4     width (u32 LE)
//! 10      4     height (u32 LE)
//! 14      2     channels (u16 LE)
//! 16      4*N   thresholds, N = width*height*channels, f32 LE,
//!               row-major, channel-interleaved
//! ```
//!
//! 16-bit PNGs are also accepted as maps (threshold = sample / 256) so
//! that maps produced by external generators can be imported.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageError, ImageReader};

use crate::error::{Error, Result};

pub const JNDM_MAGIC: &[u8; 4] = b"JNDM";
pub const JNDM_VERSION: u16 = 1;
const JNDM_HEADER_LEN: usize = 16;
const PNG_SIGNATURE: &[u8; 8] = b"\x89PNG\r\n\x1a\n";

/// Width, height and channel count of a sample grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
}

impl Dims {
    pub const fn new(width: usize, height: usize, channels: usize) -> Self {
        Self {
            width,
            height,
            channels,
        }
    }

    /// Total number of samples, `width * height * channels`.
    pub fn len(&self) -> usize {
        self.width * self.height * self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Offset of sample `(x, y, c)` in a row-major, channel-interleaved buffer.
    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    /// Inverse of [`Dims::index`].
    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize, usize) {
        let c = index % self.channels;
        let pixel = index / self.channels;
        (pixel % self.width, pixel / self.width, c)
    }

    pub(crate) fn ensure_positive(self) -> Result<Self> {
        if self.is_empty() {
            Err(Error::ZeroDimension(self))
        } else {
            Ok(self)
        }
    }

    pub(crate) fn ensure_matches(self, other: Dims) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self,
                found: other,
            })
        }
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.width, self.height, self.channels)
    }
}

/// An 8-bit image with 1 (gray) or 3 (RGB) interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Image {
    dims: Dims,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        let dims = Dims::new(width, height, channels).ensure_positive()?;
        if channels != 1 && channels != 3 {
            return Err(Error::UnsupportedChannels(channels));
        }
        if data.len() != dims.len() {
            return Err(Error::BufferLength {
                dims,
                expected: dims.len(),
                found: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    /// Uniform image with every sample set to `value`.
    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    /// Builds an image by evaluating `f(x, y, c)` for every sample.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> u8,
    ) -> Result<Self> {
        let dims = Dims::new(width, height, channels);
        let data = (0..dims.len())
            .map(|i| {
                let (x, y, c) = dims.coords(i);
                f(x, y, c)
            })
            .collect();
        Self::new(width, height, channels, data)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn width(&self) -> usize {
        self.dims.width
    }

    pub fn height(&self) -> usize {
        self.dims.height
    }

    pub fn channels(&self) -> usize {
        self.dims.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.data[self.dims.index(x, y, c)]
    }
}

/// Per-sample visibility thresholds in 8-bit intensity units.
#[derive(Debug, Clone, PartialEq)]
pub struct JndMap {
    dims: Dims,
    data: Vec<f32>,
}

impl JndMap {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        let dims = Dims::new(width, height, channels).ensure_positive()?;
        if data.len() != dims.len() {
            return Err(Error::BufferLength {
                dims,
                expected: dims.len(),
                found: data.len(),
            });
        }
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidThreshold { index, value });
        }
        Ok(Self { dims, data })
    }

    pub fn constant(width: usize, height: usize, channels: usize, value: f32) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[self.dims.index(x, y, c)]
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().map(|&v| f64::from(v)).sum::<f64>() / self.data.len() as f64
    }

    pub fn max(&self) -> f32 {
        self.data.iter().copied().fold(0.0, f32::max)
    }
}

/// Decodes a PNG or JPEG file. Alpha channels are dropped; sources with
/// more than 8 bits per sample are rejected.
pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .and_then(|r| r.with_guessed_format())
        .map_err(|e| Error::io(path, e))?;
    let decoded = reader.decode().map_err(|e| match e {
        ImageError::IoError(source) => Error::io(path, source),
        other => Error::Decode {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    })?;

    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    match decoded {
        DynamicImage::ImageLuma8(buf) => Image::new(w, h, 1, buf.into_raw()),
        DynamicImage::ImageRgb8(buf) => Image::new(w, h, 3, buf.into_raw()),
        DynamicImage::ImageLumaA8(buf) => {
            Image::new(w, h, 1, buf.into_raw().chunks_exact(2).map(|p| p[0]).collect())
        }
        DynamicImage::ImageRgba8(buf) => Image::new(
            w,
            h,
            3,
            buf.into_raw()
                .chunks_exact(4)
                .flat_map(|p| [p[0], p[1], p[2]])
                .collect(),
        ),
        other => Err(Error::UnsupportedBitDepth {
            path: path.to_path_buf(),
            bits: other.color().bits_per_pixel() / u16::from(other.color().channel_count()),
        }),
    }
}

/// Encodes an image as PNG into memory.
pub fn encode_png(image: &Image) -> Result<Vec<u8>> {
    let color = match image.channels() {
        1 => ExtendedColorType::L8,
        3 => ExtendedColorType::Rgb8,
        n => return Err(Error::UnsupportedChannels(n)),
    };
    let mut out = Vec::new();
    image::codecs::png::PngEncoder::new(&mut out)
        .write_image(
            image.data(),
            image.width() as u32,
            image.height() as u32,
            color,
        )
        .map_err(|e| Error::Encode(e.to_string()))?;
    Ok(out)
}

/// Writes `image` as a lossless PNG. The file appears atomically: on
/// failure nothing is left at `path`.
pub fn save_image(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_png(image)?)
}

/// Serializes a map into JNDM bytes.
pub fn encode_jndm(map: &JndMap) -> Result<Vec<u8>> {
    let dims = map.dims();
    let width = u32::try_from(dims.width).map_err(|_| Error::ZeroDimension(dims))?;
    let height = u32::try_from(dims.height).map_err(|_| Error::ZeroDimension(dims))?;
    let channels = u16::try_from(dims.channels).map_err(|_| Error::ZeroDimension(dims))?;

    let mut out = Vec::with_capacity(JNDM_HEADER_LEN + 4 * dims.len());
    out.extend_from_slice(JNDM_MAGIC);
    out.extend_from_slice(&JNDM_VERSION.to_le_bytes());
    out.extend_from_slice(&width.to_le_bytes());
    out.extend_from_slice(&height.to_le_bytes());
    out.extend_from_slice(&channels.to_le_bytes());
    for v in map.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

/// Parses JNDM bytes.
pub fn decode_jndm(bytes: &[u8]) -> Result<JndMap> {
    if bytes.len() < JNDM_HEADER_LEN {
        return Err(Error::JndFormat(format!(
            "{} bytes is shorter than the {JNDM_HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[0..4] != JNDM_MAGIC {
        return Err(Error::JndFormat("bad magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != JNDM_VERSION {
        return Err(Error::JndFormat(format!("unsupported version {version}")));
    }
    let width = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize;
    let channels = u16::from_le_bytes([bytes[14], bytes[15]]) as usize;

    let payload = &bytes[JNDM_HEADER_LEN..];
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .and_then(|n| n.checked_mul(4));
    if expected != Some(payload.len()) {
        return Err(Error::JndFormat(format!(
            "header declares {width}x{height}x{channels} but payload holds {} bytes",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
        .collect();
    JndMap::new(width, height, channels, data)
}

/// Loads a JND map from a JNDM file or a 16-bit PNG.
pub fn load_jnd_map(path: impl AsRef<Path>) -> Result<JndMap> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(JNDM_MAGIC) {
        decode_jndm(&bytes)
    } else if bytes.starts_with(PNG_SIGNATURE) {
        decode_png16_map(path, &bytes)
    } else {
        Err(Error::JndFormat(format!(
            "{}: neither JNDM nor PNG",
            path.display()
        )))
    }
}

fn decode_png16_map(path: &Path, bytes: &[u8]) -> Result<JndMap> {
    let decoded = image::load_from_memory_with_format(bytes, image::ImageFormat::Png).map_err(
        |e| Error::Decode {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
    )?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let (channels, raw) = match decoded {
        DynamicImage::ImageLuma16(buf) => (1, buf.into_raw()),
        DynamicImage::ImageRgb16(buf) => (3, buf.into_raw()),
        other => {
            return Err(Error::JndFormat(format!(
                "{}: PNG maps must be 16-bit gray or RGB, found {:?}",
                path.display(),
                other.color()
            )))
        }
    };
    let data = raw.into_iter().map(|v| f32::from(v) / 256.0).collect();
    JndMap::new(w, h, channels, data)
}

/// Writes `map` in JNDM format, atomically.
pub fn save_jnd_map(map: &JndMap, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_jndm(map)?)
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn black_rgb_png_decodes_to_zeros() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("black.png");
        image::RgbImage::new(2, 2).save(&p).unwrap();
        let img = load_image(&p).unwrap();
        assert_eq!(img.dims(), Dims::new(2, 2, 3));
        assert!(img.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn white_gray_png_is_single_channel() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("white.png");
        image::GrayImage::from_pixel(1, 1, image::Luma([255])).save(&p).unwrap();
        let img = load_image(&p).unwrap();
        assert_eq!(img.dims(), Dims::new(1, 1, 1));
        assert_eq!(img.data(), &[255]);
    }

    #[test]
    fn save_then_load_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rb.png");
        let img = Image::new(2, 1, 3, vec![255, 0, 0, 0, 0, 255]).unwrap();
        save_image(&img, &p).unwrap();
        assert_eq!(load_image(&p).unwrap(), img);

        let black = Image::new(1, 1, 1, vec![0]).unwrap();
        save_image(&black, &p).unwrap();
        assert_eq!(load_image(&p).unwrap(), black);
    }

    #[test]
    fn rgba_sources_drop_alpha() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rgba.png");
        image::RgbaImage::from_pixel(1, 1, image::Rgba([10, 20, 30, 40]))
            .save(&p)
            .unwrap();
        assert_eq!(load_image(&p).unwrap().data(), &[10, 20, 30]);
    }

    #[test]
    fn jpeg_is_readable() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("gray.jpg");
        image::RgbImage::from_pixel(8, 8, image::Rgb([128, 128, 128]))
            .save(&p)
            .unwrap();
        let img = load_image(&p).unwrap();
        assert_eq!(img.dims(), Dims::new(8, 8, 3));
        assert!(img.data().iter().all(|&v| v.abs_diff(128) <= 2));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_image("/nonexistent/nope.png").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn garbage_payload_is_decode_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("junk.png");
        fs::write(&p, b"\x89PNG\r\n\x1a\nnot really").unwrap();
        assert!(matches!(load_image(&p), Err(Error::Decode { .. })));
    }

    #[test]
    fn sixteen_bit_image_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("deep.png");
        image::ImageBuffer::<image::Luma<u16>, _>::from_pixel(2, 2, image::Luma([1000u16]))
            .save(&p)
            .unwrap();
        assert!(matches!(
            load_image(&p),
            Err(Error::UnsupportedBitDepth { bits: 16, .. })
        ));
    }

    #[test]
    fn unwritable_directory_leaves_no_file() {
        let p = Path::new("/nonexistent-dir/out.png");
        let err = save_image(&Image::filled(1, 1, 1, 0).unwrap(), p).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(!p.exists());
    }

    #[test]
    fn jndm_constant_payload() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"JNDM");
        bytes.extend_from_slice(&1u16.to_le_bytes());
        bytes.extend_from_slice(&2u32.to_le_bytes());
        bytes.extend_from_slice(&2u32.to_le_bytes());
        bytes.extend_from_slice(&1u16.to_le_bytes());
        for _ in 0..4 {
            bytes.extend_from_slice(&3.0f32.to_le_bytes());
        }
        let map = decode_jndm(&bytes).unwrap();
        assert_eq!(map.dims(), Dims::new(2, 2, 1));
        assert_eq!(map.data(), &[3.0; 4]);
        assert_eq!(encode_jndm(&map).unwrap(), bytes);
    }

    #[test]
    fn jndm_payload_length_mismatch() {
        let mut bytes = encode_jndm(&JndMap::constant(2, 2, 1, 3.0).unwrap()).unwrap();
        bytes.pop();
        assert!(matches!(decode_jndm(&bytes), Err(Error::JndFormat(_))));
        bytes.extend_from_slice(&[0, 0, 0, 0, 0]);
        assert!(matches!(decode_jndm(&bytes), Err(Error::JndFormat(_))));
    }

    #[test]
    fn jndm_rejects_bad_header_and_values() {
        let good = encode_jndm(&JndMap::constant(1, 1, 1, 1.0).unwrap()).unwrap();

        let mut magic = good.clone();
        magic[0] = b'X';
        assert!(matches!(decode_jndm(&magic), Err(Error::JndFormat(_))));

        let mut version = good.clone();
        version[4] = 2;
        assert!(matches!(decode_jndm(&version), Err(Error::JndFormat(_))));

        for bad in [-1.0f32, f32::NAN, f32::INFINITY] {
            let mut b = good.clone();
            b[16..20].copy_from_slice(&bad.to_le_bytes());
            assert!(matches!(
                decode_jndm(&b),
                Err(Error::InvalidThreshold { index: 0, .. })
            ));
        }
        assert!(matches!(decode_jndm(&good[..10]), Err(Error::JndFormat(_))));
    }

    #[test]
    fn jndm_file_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.jndm");

        let zero = JndMap::constant(3, 2, 1, 0.0).unwrap();
        save_jnd_map(&zero, &p).unwrap();
        assert_eq!(load_jnd_map(&p).unwrap(), zero);

        let frac = JndMap::constant(1, 1, 1, 17.25).unwrap();
        save_jnd_map(&frac, &p).unwrap();
        assert_eq!(load_jnd_map(&p).unwrap().data(), &[17.25]);

        let rgb = JndMap::new(2, 1, 3, vec![0.5, 1.5, 2.5, 3.5, 4.5, 5.5]).unwrap();
        save_jnd_map(&rgb, &p).unwrap();
        let back = load_jnd_map(&p).unwrap();
        for x in 0..2 {
            for c in 0..3 {
                assert_eq!(back.get(x, 0, c), rgb.get(x, 0, c));
            }
        }
    }

    #[test]
    fn png16_map_scales_by_256() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.png");
        image::ImageBuffer::<image::Luma<u16>, _>::from_pixel(2, 1, image::Luma([768u16]))
            .save(&p)
            .unwrap();
        let map = load_jnd_map(&p).unwrap();
        assert_eq!(map.dims(), Dims::new(2, 1, 1));
        assert_eq!(map.data(), &[3.0, 3.0]);
    }

    #[test]
    fn eight_bit_png_is_not_a_map() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.png");
        image::GrayImage::new(1, 1).save(&p).unwrap();
        assert!(matches!(load_jnd_map(&p), Err(Error::JndFormat(_))));
    }

    #[test]
    fn constructor_invariants() {
        assert!(matches!(
            Image::new(2, 2, 1, vec![0; 3]),
            Err(Error::BufferLength { .. })
        ));
        assert!(matches!(
            Image::new(0, 2, 1, vec![]),
            Err(Error::ZeroDimension(_))
        ));
        assert!(matches!(
            Image::new(1, 1, 4, vec![0; 4]),
            Err(Error::UnsupportedChannels(4))
        ));
    }
}
