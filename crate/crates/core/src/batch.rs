//! Batch commands over whole manifests.
//!
//! Each command reads a [`RunConfig`] and returns an [`Outcome`] that knows
//! how to print itself and which exit status it maps to. Records are
//! processed on a worker pool; every random choice for record `i` is
//! seeded with `derive_seed(master_seed, i)`, so output bytes do not
//! depend on the number of workers or on scheduling.
//!
//! Output layout of `augment` (under `--out`):
//!
//! ```text
//! <stem>.png      augmented image for each record
//! manifest.csv    path,mos   (labels copied unchanged)
//! audit.csv       path,seed,lambda,mode   (one line per written image)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use crate::augment::Injection;
use crate::error::{Error, Result};
use crate::image_io::{load_image, load_jnd_map, save_image, save_jnd_map, write_atomic, Image, JndMap};
use crate::jnd::{estimate_jnd, scale_map};
use crate::metrics::{MetricReport, ScoreSeries};
use crate::protocol::{load_manifest, repeat_split, DatasetManifest, Record};
use crate::rng::derive_seed;

pub const AUDIT_FILE: &str = "audit.csv";
pub const AUDIT_HEADER: &str = "path,seed,lambda,mode";
pub const OUTPUT_MANIFEST: &str = "manifest.csv";

/// Located violations kept in a [`VerifyReport`]; counts are always complete.
pub const MAX_LOCATED_VIOLATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    EstimateJnd,
    Augment,
    Verify,
    Split,
    Metrics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    #[default]
    Jndmix,
    FullJnd,
    Gaussian,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Jndmix => "jndmix",
            Mode::FullJnd => "full-jnd",
            Mode::Gaussian => "gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Estimator {
    ChouLi,
    Import,
}

/// JND-noise augmentation toolkit.
#[derive(Debug, Clone, Parser)]
#[command(name = "jndmix", version)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// Input manifest (`path,mos` CSV). For `verify`, the original images.
    #[arg(long)]
    pub manifest: Option<PathBuf>,

    /// Augmented manifest to check (`verify`).
    #[arg(long)]
    pub augmented: Option<PathBuf>,

    /// Directory of JND maps named `<image-stem>.jndm` (or 16-bit `.png`).
    #[arg(long)]
    pub maps: Option<PathBuf>,

    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Predicted scores (`metrics`).
    #[arg(long)]
    pub pred: Option<PathBuf>,

    /// Ground-truth scores (`metrics`).
    #[arg(long)]
    pub gt: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = Mode::Jndmix)]
    pub mode: Mode,

    /// Standard deviation for `--mode gaussian`.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Multiplier applied to every JND map before use.
    #[arg(long)]
    pub gain: Option<f64>,

    #[arg(long, default_value_t = 1.0)]
    pub fraction: f64,

    #[arg(long, default_value_t = 10)]
    pub repeats: usize,

    /// Where maps come from; defaults to `import` when --maps is given.
    #[arg(long, value_enum)]
    pub estimator: Option<Estimator>,

    /// Worker threads (default: one per core).
    #[arg(long)]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            manifest: None,
            augmented: None,
            maps: None,
            out: None,
            pred: None,
            gt: None,
            seed: 0,
            mode: Mode::Jndmix,
            sigma: None,
            gain: None,
            fraction: 1.0,
            repeats: 10,
            estimator: None,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == Mode::Gaussian {
            match self.sigma {
                None => return Err(Error::MissingArgument("sigma")),
                Some(s) if !(s.is_finite() && s > 0.0) => {
                    return Err(Error::InvalidParameter {
                        name: "sigma",
                        value: s,
                        reason: "must be finite and positive",
                    })
                }
                _ => {}
            }
        }
        if let Some(g) = self.gain {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "gain",
                    value: g,
                    reason: "must be finite and positive",
                });
            }
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "fraction",
                value: self.fraction,
                reason: "must lie in (0, 1]",
            });
        }
        if self.repeats == 0 {
            return Err(Error::InvalidParameter {
                name: "repeats",
                value: 0.0,
                reason: "at least one repeat is required",
            });
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidParameter {
                name: "workers",
                value: 0.0,
                reason: "at least one worker is required",
            });
        }
        Ok(())
    }

    fn injection(&self) -> Injection {
        match self.mode {
            Mode::Jndmix => Injection::JndMix,
            Mode::FullJnd => Injection::FullJnd,
            Mode::Gaussian => Injection::Gaussian {
                sigma: self.sigma.unwrap_or(0.0),
            },
        }
    }

    fn map_source(&self) -> Result<MapSource<'_>> {
        let estimator = self.estimator.unwrap_or(if self.maps.is_some() {
            Estimator::Import
        } else {
            Estimator::ChouLi
        });
        match estimator {
            Estimator::ChouLi => Ok(MapSource::Estimate),
            Estimator::Import => self
                .maps
                .as_deref()
                .map(MapSource::Import)
                .ok_or(Error::MissingArgument("maps")),
        }
    }
}

fn required<'a>(value: &'a Option<PathBuf>, name: &'static str) -> Result<&'a Path> {
    value.as_deref().ok_or(Error::MissingArgument(name))
}

#[derive(Debug, Clone, Copy)]
enum MapSource<'a> {
    Estimate,
    Import(&'a Path),
}

impl MapSource<'_> {
    fn map_for(&self, image: &Image, stem: &str, gain: Option<f64>) -> Result<JndMap> {
        let map = match self {
            MapSource::Estimate => estimate_jnd(image),
            MapSource::Import(dir) => load_jnd_map(find_map(dir, stem)?)?,
        };
        match gain {
            Some(g) => scale_map(&map, g),
            None => Ok(map),
        }
    }
}

/// Path of the map for `stem` inside `dir`, preferring JNDM over PNG.
pub fn find_map(dir: &Path, stem: &str) -> Result<PathBuf> {
    ["jndm", "png"]
        .iter()
        .map(|ext| dir.join(format!("{stem}.{ext}")))
        .find(|p| p.is_file())
        .ok_or_else(|| Error::MissingMap {
            path: dir.join(format!("{stem}.jndm")),
        })
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// File stems of every record, which must be unique because outputs are
/// named after them.
fn unique_stems(manifest: &DatasetManifest) -> Result<Vec<String>> {
    let stems: Vec<String> = manifest.records.iter().map(|r| stem_of(&r.path)).collect();
    let mut seen = HashMap::new();
    for (i, s) in stems.iter().enumerate() {
        if let Some(j) = seen.insert(s.as_str(), i) {
            return Err(Error::FileSetMismatch(format!(
                "records {j} and {i} share the file stem {s:?}"
            )));
        }
    }
    Ok(stems)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn par_map<T, F>(n: usize, workers: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::WorkerPool(e.to_string()))?;
    Ok(pool.install(|| (0..n).into_par_iter().map(f).collect()))
}

/// A record that could not be processed.
#[derive(Debug)]
pub struct RecordFailure {
    pub index: usize,
    pub path: PathBuf,
    pub error: Error,
}

fn failures_exit_code(failures: &[RecordFailure]) -> i32 {
    failures.iter().map(|f| f.error.exit_code()).max().unwrap_or(0)
}

/// Files produced by a per-record command, plus the records that failed.
#[derive(Debug, Default)]
pub struct BatchReport {
    pub written: Vec<PathBuf>,
    pub failures: Vec<RecordFailure>,
}

fn collect_batch(results: Vec<(usize, PathBuf, Result<PathBuf>)>) -> BatchReport {
    let mut report = BatchReport::default();
    for (index, path, result) in results {
        match result {
            Ok(p) => report.written.push(p),
            Err(error) => report.failures.push(RecordFailure { index, path, error }),
        }
    }
    report
}

/// Writes `<out>/<stem>.jndm` for every record using the Chou-Li estimator.
pub fn cmd_estimate_jnd(config: &RunConfig) -> Result<BatchReport> {
    config.validate()?;
    let manifest = load_manifest(required(&config.manifest, "manifest")?)?;
    let out = required(&config.out, "out")?;
    let stems = unique_stems(&manifest)?;
    create_dir(out)?;

    let results = par_map(manifest.len(), config.workers, |i| {
        let src = manifest.resolve(i);
        let result = load_image(&src).and_then(|image| {
            let dst = out.join(format!("{}.jndm", stems[i]));
            save_jnd_map(&estimate_jnd(&image), &dst)?;
            Ok(dst)
        });
        (i, src, result)
    })?;
    Ok(collect_batch(results))
}

/// One line of the augmentation audit log.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub index: usize,
    pub source: PathBuf,
    pub output: PathBuf,
    pub seed: u64,
    pub lambda: Option<f64>,
    pub mode: Mode,
    pub mos: f64,
}

#[derive(Debug, Default)]
pub struct AugmentReport {
    pub batch: BatchReport,
    pub audit: Vec<AuditEntry>,
    pub manifest_path: PathBuf,
    pub audit_path: PathBuf,
}

fn audit_csv(entries: &[AuditEntry]) -> String {
    let mut out = format!("{AUDIT_HEADER}\n");
    for e in entries {
        let lambda = e.lambda.map(|l| l.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            e.source.display(),
            e.seed,
            lambda,
            e.mode.name()
        )
        .unwrap();
    }
    out
}

/// Augments every record and writes images, an output manifest and an
/// audit log under `--out`.
pub fn cmd_augment(config: &RunConfig) -> Result<AugmentReport> {
    config.validate()?;
    let manifest = load_manifest(required(&config.manifest, "manifest")?)?;
    let out = required(&config.out, "out")?;
    let injection = config.injection();
    let maps = if injection.needs_map() {
        Some(config.map_source()?)
    } else {
        None
    };
    let stems = unique_stems(&manifest)?;
    create_dir(out)?;

    let results = par_map(manifest.len(), config.workers, |i| {
        let src = manifest.resolve(i);
        let seed = derive_seed(config.seed, i as u64);
        let result = (|| {
            let image = load_image(&src)?;
            let map = match maps {
                Some(source) => Some(source.map_for(&image, &stems[i], config.gain)?),
                None => None,
            };
            let (augmented, lambda) = injection.apply(&image, map.as_ref(), seed)?;
            let name = PathBuf::from(format!("{}.png", stems[i]));
            save_image(&augmented, out.join(&name))?;
            Ok(AuditEntry {
                index: i,
                source: manifest.records[i].path.clone(),
                output: name,
                seed,
                lambda,
                mode: config.mode,
                mos: manifest.records[i].mos,
            })
        })();
        (i, src, result)
    })?;

    let mut report = AugmentReport::default();
    for (index, path, result) in results {
        match result {
            Ok(entry) => {
                report.batch.written.push(out.join(&entry.output));
                report.audit.push(entry);
            }
            Err(error) => report.batch.failures.push(RecordFailure { index, path, error }),
        }
    }
    report.audit.sort_by_key(|e| e.index);

    let labelled = DatasetManifest {
        name: manifest.name.clone(),
        records: report
            .audit
            .iter()
            .map(|e| Record {
                path: e.output.clone(),
                mos: e.mos,
            })
            .collect(),
        root: out.to_path_buf(),
    };
    report.manifest_path = out.join(OUTPUT_MANIFEST);
    write_atomic(&report.manifest_path, labelled.to_csv().as_bytes())?;
    report.audit_path = out.join(AUDIT_FILE);
    write_atomic(&report.audit_path, audit_csv(&report.audit).as_bytes())?;
    Ok(report)
}

/// A sample that moved further than its rounded JND threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub x: usize,
    pub y: usize,
    pub c: usize,
    pub original: u8,
    pub augmented: u8,
    pub bound: f64,
}

/// Every sample of `augmented` that differs from `original` by more than
/// `round(jnd)`.
///
/// Clamping to [0, 255] can only shrink a deviation, so clamped samples
/// are checked like any other.
pub fn find_violations(original: &Image, augmented: &Image, jnd: &JndMap) -> Result<Vec<Violation>> {
    original.dims().ensure_matches(augmented.dims())?;
    original.dims().ensure_matches(jnd.dims())?;
    let dims = original.dims();
    Ok(original
        .data()
        .iter()
        .zip(augmented.data())
        .zip(jnd.data())
        .enumerate()
        .filter_map(|(i, ((&o, &a), &t))| {
            let bound = f64::from(t).round();
            (f64::from(o.abs_diff(a)) > bound).then(|| {
                let (x, y, c) = dims.coords(i);
                Violation {
                    x,
                    y,
                    c,
                    original: o,
                    augmented: a,
                    bound,
                }
            })
        })
        .collect())
}

#[derive(Debug, Default)]
pub struct VerifyReport {
    /// Violation count per original record path, in manifest order.
    pub counts: Vec<(PathBuf, usize)>,
    /// The first [`MAX_LOCATED_VIOLATIONS`] violations with their image.
    pub located: Vec<(PathBuf, Violation)>,
    pub samples_checked: u64,
    pub failures: Vec<RecordFailure>,
}

impl VerifyReport {
    pub fn total_violations(&self) -> usize {
        self.counts.iter().map(|(_, n)| n).sum()
    }

    pub fn images_with_violations(&self) -> usize {
        self.counts.iter().filter(|(_, n)| *n > 0).count()
    }
}

/// Checks an augmented corpus against the JND maps of its originals.
/// Records are paired by file stem.
pub fn cmd_verify(config: &RunConfig) -> Result<VerifyReport> {
    config.validate()?;
    let original = load_manifest(required(&config.manifest, "manifest")?)?;
    let augmented = load_manifest(required(&config.augmented, "augmented")?)?;
    let maps = config.map_source()?;
    let stems = unique_stems(&original)?;
    let aug_stems = unique_stems(&augmented)?;

    if original.len() != augmented.len() {
        return Err(Error::FileSetMismatch(format!(
            "{} original records but {} augmented",
            original.len(),
            augmented.len()
        )));
    }
    let by_stem: HashMap<&str, usize> = aug_stems
        .iter()
        .enumerate()
        .map(|(j, s)| (s.as_str(), j))
        .collect();
    let pairing = stems
        .iter()
        .map(|s| {
            by_stem
                .get(s.as_str())
                .copied()
                .ok_or_else(|| Error::FileSetMismatch(format!("no augmented image for {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let results = par_map(original.len(), config.workers, |i| {
        let src = original.resolve(i);
        let result = (|| {
            let before = load_image(&src)?;
            let after = load_image(augmented.resolve(pairing[i]))?;
            let map = maps.map_for(&before, &stems[i], config.gain)?;
            find_violations(&before, &after, &map).map(|v| (before.data().len(), v))
        })();
        (i, src, result)
    })?;

    let mut report = VerifyReport::default();
    for (index, path, result) in results {
        match result {
            Ok((samples, violations)) => {
                report.samples_checked += samples as u64;
                let room = MAX_LOCATED_VIOLATIONS.saturating_sub(report.located.len());
                report
                    .located
                    .extend(violations.iter().take(room).map(|v| (path.clone(), *v)));
                report.counts.push((path, violations.len()));
            }
            Err(error) => report.failures.push(RecordFailure { index, path, error }),
        }
    }
    Ok(report)
}

#[derive(Debug, Default)]
pub struct SplitReport {
    pub files: Vec<PathBuf>,
}

/// Writes `<out>/split_KK.txt` for `k = 0..repeats`.
pub fn cmd_split(config: &RunConfig) -> Result<SplitReport> {
    config.validate()?;
    let manifest = load_manifest(required(&config.manifest, "manifest")?)?;
    let out = required(&config.out, "out")?;
    create_dir(out)?;
    let mut report = SplitReport::default();
    for k in 0..config.repeats {
        let split = repeat_split(&manifest, config.seed, k, config.fraction)?;
        let path = out.join(format!("split_{k:02}.txt"));
        write_atomic(&path, split.to_text().as_bytes())?;
        report.files.push(path);
    }
    Ok(report)
}

/// Reads one score per line, taking the last comma-separated field. A
/// first line that does not parse is treated as a header.
pub fn read_scores(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut scores = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) => scores.push(v),
            Err(_) if i == 0 => {}
            Err(_) => {
                return Err(Error::BadScore {
                    path: path.to_path_buf(),
                    line: i + 1,
                    value: field.to_string(),
                })
            }
        }
    }
    Ok(scores)
}

/// SRCC and PLCC of two aligned score files.
pub fn cmd_metrics(config: &RunConfig) -> Result<MetricReport> {
    let pred = read_scores(required(&config.pred, "pred")?)?;
    let gt = read_scores(required(&config.gt, "gt")?)?;
    if pred.len() != gt.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: gt.len(),
        });
    }
    let pred = ScoreSeries::new(pred)?;
    let gt = ScoreSeries::new(gt)?;
    MetricReport::evaluate(pred.as_ref(), gt.as_ref(), config.seed, 1.0)
}

/// Result of [`run`].
#[derive(Debug)]
pub enum Outcome {
    EstimateJnd(BatchReport),
    Augment(AugmentReport),
    Verify(VerifyReport),
    Split(SplitReport),
    Metrics(MetricReport),
}

impl Outcome {
    /// 0 on success, 1 for validation failures (including JND-bound
    /// violations), 2 when any record hit an I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::EstimateJnd(b) => failures_exit_code(&b.failures),
            Outcome::Augment(a) => failures_exit_code(&a.batch.failures),
            Outcome::Verify(v) => {
                let code = failures_exit_code(&v.failures);
                if code == 0 && v.total_violations() > 0 {
                    1
                } else {
                    code
                }
            }
            Outcome::Split(_) | Outcome::Metrics(_) => 0,
        }
    }

    /// Prints machine-readable results to `out` and per-record problems to `err`.
    pub fn write_to(&self, out: &mut impl Write, err: &mut impl Write) -> io::Result<()> {
        let failures = match self {
            Outcome::EstimateJnd(b) => {
                writeln!(out, "written,{}", b.written.len())?;
                &b.failures[..]
            }
            Outcome::Augment(a) => {
                writeln!(out, "written,{}", a.batch.written.len())?;
                writeln!(out, "manifest,{}", a.manifest_path.display())?;
                writeln!(out, "audit,{}", a.audit_path.display())?;
                &a.batch.failures[..]
            }
            Outcome::Verify(v) => {
                for (path, x) in &v.located {
                    writeln!(
                        out,
                        "violation,{},{},{},{},{},{},{}",
                        path.display(),
                        x.x,
                        x.y,
                        x.c,
                        x.original,
                        x.augmented,
                        x.bound
                    )?;
                }
                writeln!(out, "images,{}", v.counts.len())?;
                writeln!(out, "images_with_violations,{}", v.images_with_violations())?;
                writeln!(out, "violations,{}", v.total_violations())?;
                &v.failures[..]
            }
            Outcome::Split(s) => {
                for f in &s.files {
                    writeln!(out, "{}", f.display())?;
                }
                &[]
            }
            Outcome::Metrics(m) => {
                writeln!(out, "{m}")?;
                &[]
            }
        };
        for f in failures {
            writeln!(err, "record {} ({}): {}", f.index, f.path.display(), f.error)?;
        }
        Ok(())
    }
}

/// Dispatches on `config.command`.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    Ok(match config.command {
        Command::EstimateJnd => Outcome::EstimateJnd(cmd_estimate_jnd(config)?),
        Command::Augment => Outcome::Augment(cmd_augment(config)?),
        Command::Verify => Outcome::Verify(cmd_verify(config)?),
        Command::Split => Outcome::Split(cmd_split(config)?),
        Command::Metrics => Outcome::Metrics(cmd_metrics(config)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_requires_sigma() {
        let mut c = RunConfig::new(Command::Augment);
        c.mode = Mode::Gaussian;
        assert!(matches!(c.validate(), Err(Error::MissingArgument("sigma"))));
        c.sigma = Some(-1.0);
        assert!(c.validate().is_err());
        c.sigma = Some(2.0);
        c.validate().unwrap();
    }

    #[test]
    fn config_ranges() {
        let mut c = RunConfig::new(Command::Split);
        c.fraction = 0.0;
        assert!(c.validate().is_err());
        c.fraction = 1.0;
        c.repeats = 0;
        assert!(c.validate().is_err());
        c.repeats = 1;
        c.gain = Some(0.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn estimator_defaults_follow_maps_flag() {
        let mut c = RunConfig::new(Command::Augment);
        assert!(matches!(c.map_source(), Ok(MapSource::Estimate)));
        c.maps = Some("maps".into());
        assert!(matches!(c.map_source(), Ok(MapSource::Import(_))));
        c.maps = None;
        c.estimator = Some(Estimator::Import);
        assert!(matches!(c.map_source(), Err(Error::MissingArgument("maps"))));
    }

    #[test]
    fn violations_are_located() {
        let a = Image::filled(4, 3, 3, 100).unwrap();
        let mut data = a.data().to_vec();
        let at = a.dims().index(2, 1, 1);
        data[at] = 125;
        let b = Image::new(4, 3, 3, data).unwrap();
        let jnd = JndMap::constant(4, 3, 3, 4.6).unwrap();
        let v = find_violations(&a, &b, &jnd).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].x, v[0].y, v[0].c), (2, 1, 1));
        assert_eq!(v[0].bound, 5.0);
    }

    #[test]
    fn bound_uses_rounded_threshold() {
        let a = Image::filled(1, 1, 1, 100).unwrap();
        let b = Image::filled(1, 1, 1, 103).unwrap();
        let jnd = JndMap::constant(1, 1, 1, 2.5).unwrap();
        assert!(find_violations(&a, &b, &jnd).unwrap().is_empty());
        let jnd = JndMap::constant(1, 1, 1, 2.49).unwrap();
        assert_eq!(find_violations(&a, &b, &jnd).unwrap().len(), 1);
    }

    #[test]
    fn score_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        fs::write(&p, "path,score\na.png,1.5\nb.png,2\n\n").unwrap();
        assert_eq!(read_scores(&p).unwrap(), vec![1.5, 2.0]);
        fs::write(&p, "0.5\n0.25\n").unwrap();
        assert_eq!(read_scores(&p).unwrap(), vec![0.5, 0.25]);
        fs::write(&p, "1\nx\n").unwrap();
        assert!(matches!(read_scores(&p), Err(Error::BadScore { line: 2, .. })));
    }

    #[test]
    fn duplicate_stems_are_rejected() {
        let m = DatasetManifest::new(
            "m",
            vec![
                Record { path: "a/x.png".into(), mos: 1.0 },
                Record { path: "b/x.jpg".into(), mos: 2.0 },
            ],
        )
        .unwrap();
        assert!(matches!(unique_stems(&m), Err(Error::FileSetMismatch(_))));
    }
}
