//! Dataset manifests and the seeded train/test protocol.
//!
//! A split shuffles record indices with Fisher-Yates, keeps the first
//! `round(0.8 * n)` as training data and the rest as the test set.
//! Smaller training regimes take a prefix of the shuffled training order,
//! so the test set never changes with the fraction and training subsets
//! are nested (10% within 25% within 50% within 100%).
//!
//! All rounding is half-away-from-zero.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;

use crate::error::{Error, Result};
use crate::image_io::write_atomic;
use crate::metrics::MetricReport;
use crate::rng::{derive_seed, JndRng};

pub const MANIFEST_HEADER: &str = "path,mos";

/// Share of records assigned to training.
pub const TRAIN_SHARE: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub path: PathBuf,
    pub mos: f64,
}

/// An ordered list of labelled images.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub name: String,
    pub records: Vec<Record>,
    /// Directory against which relative record paths resolve.
    pub root: PathBuf,
}

impl DatasetManifest {
    /// Builds a manifest, checking that paths are unique, labels finite
    /// and that there are at least two records.
    pub fn new(name: impl Into<String>, records: Vec<Record>) -> Result<Self> {
        let name = name.into();
        let manifest = Self {
            name,
            records,
            root: PathBuf::new(),
        };
        manifest.check(Path::new(&manifest.name))?;
        Ok(manifest)
    }

    fn check(&self, origin: &Path) -> Result<()> {
        if self.records.len() < 2 {
            return Err(Error::Manifest {
                path: origin.to_path_buf(),
                reason: format!("{} records; at least 2 are required", self.records.len()),
            });
        }
        let mut seen = HashSet::with_capacity(self.records.len());
        for r in &self.records {
            if !r.mos.is_finite() {
                return Err(Error::Manifest {
                    path: origin.to_path_buf(),
                    reason: format!("non-finite mos for {}", r.path.display()),
                });
            }
            if !seen.insert(&r.path) {
                return Err(Error::DuplicatePath {
                    path: origin.to_path_buf(),
                    dup: r.path.display().to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Location of record `i` on disk.
    pub fn resolve(&self, i: usize) -> PathBuf {
        self.root.join(&self.records[i].path)
    }

    pub fn labels(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.mos).collect()
    }

    /// CSV text with the `path,mos` header. Labels use the shortest
    /// representation that parses back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(MANIFEST_HEADER);
        out.push('\n');
        for r in &self.records {
            writeln!(out, "{},{}", r.path.display(), r.mos).unwrap();
        }
        out
    }
}

/// Reads a `path,mos` CSV. Relative paths resolve against the file's directory.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut manifest = parse_manifest(&text, path)?;
    manifest.root = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    Ok(manifest)
}

/// Parses manifest CSV text. `origin` is only used in error messages and
/// to name the manifest.
pub fn parse_manifest(text: &str, origin: &Path) -> Result<DatasetManifest> {
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, l)| l.trim_end_matches('\r'));
    if header != Some(MANIFEST_HEADER) {
        return Err(Error::Manifest {
            path: origin.to_path_buf(),
            reason: format!("expected header {MANIFEST_HEADER:?}"),
        });
    }

    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let line_no = i + 1;
        let Some((p, mos)) = line.rsplit_once(',') else {
            return Err(Error::Manifest {
                path: origin.to_path_buf(),
                reason: format!("line {line_no}: expected two fields"),
            });
        };
        let mos_value = mos
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::BadMos {
                path: origin.to_path_buf(),
                line: line_no,
                value: mos.to_string(),
            })?;
        records.push(Record {
            path: PathBuf::from(p),
            mos: mos_value,
        });
    }

    let manifest = DatasetManifest {
        name: origin
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        records,
        root: PathBuf::new(),
    };
    manifest.check(origin)?;
    Ok(manifest)
}

/// Writes a manifest atomically.
pub fn save_manifest(manifest: &DatasetManifest, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), manifest.to_csv().as_bytes())
}

/// Seeded partition of record indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
    pub train_fraction: f64,
}

impl Split {
    /// Plain-text form: training indices, a `---` line, then test indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in &self.train {
            writeln!(out, "{i}").unwrap();
        }
        out.push_str("---\n");
        for i in &self.test {
            writeln!(out, "{i}").unwrap();
        }
        out
    }

    /// Parses the output of [`Split::to_text`]. Seed and fraction are not
    /// stored in the text and must be supplied.
    pub fn from_text(text: &str, seed: u64, train_fraction: f64) -> Result<Self> {
        let mut train = Vec::new();
        let mut test = Vec::new();
        let mut in_test = false;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line == "---" {
                in_test = true;
                continue;
            }
            let idx = line.parse::<usize>().map_err(|_| {
                Error::FileSetMismatch(format!("split line {}: not an index: {line:?}", n + 1))
            })?;
            if in_test { &mut test } else { &mut train }.push(idx);
        }
        Ok(Self {
            train,
            test,
            seed,
            train_fraction,
        })
    }
}

fn round_count(share: f64, n: usize) -> usize {
    (share * n as f64).round() as usize
}

/// 80/20 split of `manifest` using a Fisher-Yates shuffle seeded by `seed`.
pub fn make_split(manifest: &DatasetManifest, seed: u64) -> Split {
    split_indices(manifest.len(), seed)
}

/// Same as [`make_split`] for `n` records.
pub fn split_indices(n: usize, seed: u64) -> Split {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = JndRng::from_seed(seed);
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let test = order.split_off(round_count(TRAIN_SHARE, n));
    Split {
        train: order,
        test,
        seed,
        train_fraction: 1.0,
    }
}

/// Keeps the first `round(fraction * |train|)` training indices; the test
/// set is untouched. `fraction` is relative to the full training set, so
/// the input split must have `train_fraction == 1`.
pub fn subsample_train(split: &Split, fraction: f64) -> Result<Split> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "fraction",
            value: fraction,
            reason: "must lie in (0, 1]",
        });
    }
    if split.train_fraction != 1.0 {
        return Err(Error::InvalidParameter {
            name: "train_fraction",
            value: split.train_fraction,
            reason: "subsampling starts from a full training set",
        });
    }
    let keep = round_count(fraction, split.train.len());
    if keep == 0 {
        return Err(Error::EmptyTrain {
            fraction,
            available: split.train.len(),
        });
    }
    Ok(Split {
        train: split.train[..keep].to_vec(),
        test: split.test.clone(),
        seed: split.seed,
        train_fraction: fraction,
    })
}

/// Seed for repeat `k` under `base_seed`.
pub fn repeat_seed(base_seed: u64, k: usize) -> u64 {
    derive_seed(base_seed, k as u64)
}

/// The `k`-th split of a repeated experiment, subsampled to `fraction`.
pub fn repeat_split(manifest: &DatasetManifest, base_seed: u64, k: usize, fraction: f64) -> Result<Split> {
    subsample_train(&make_split(manifest, repeat_seed(base_seed, k)), fraction)
}

/// Runs `eval` on `repeats` independently seeded splits and averages SRCC
/// and PLCC. A single repeat returns the evaluator's report as is.
pub fn repeat_protocol<F>(
    manifest: &DatasetManifest,
    base_seed: u64,
    repeats: usize,
    fraction: f64,
    mut eval: F,
) -> Result<MetricReport>
where
    F: FnMut(&Split) -> Result<MetricReport>,
{
    if repeats == 0 {
        return Err(Error::InvalidParameter {
            name: "repeats",
            value: 0.0,
            reason: "at least one repeat is required",
        });
    }
    let mut reports = Vec::with_capacity(repeats);
    for k in 0..repeats {
        let annotate = |e| Error::Repeat {
            k,
            source: Box::new(e),
        };
        let split = repeat_split(manifest, base_seed, k, fraction).map_err(annotate)?;
        reports.push(eval(&split).map_err(annotate)?);
    }
    if reports.len() == 1 {
        return Ok(reports[0]);
    }
    let count = reports.len() as f64;
    Ok(MetricReport {
        srcc: reports.iter().map(|r| r.srcc).sum::<f64>() / count,
        plcc: reports.iter().map(|r| r.plcc).sum::<f64>() / count,
        n: reports[0].n,
        split_seed: base_seed,
        train_fraction: fraction,
    })
}
