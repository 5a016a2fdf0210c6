//! SRCC and PLCC.
//!
//! Both are reported as plain Pearson correlations; SRCC is computed on
//! average ranks so ties are handled the conventional way. Degenerate
//! input (mismatched lengths, fewer than two values, zero variance) is an
//! error rather than a NaN.

use std::fmt;

use crate::error::{Error, Result};

/// A validated series of finite scores with at least two entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSeries(Vec<f64>);

impl ScoreSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate(&values)?;
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for ScoreSeries {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Correlations for one evaluation, tagged with the split that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub srcc: f64,
    pub plcc: f64,
    pub n: usize,
    pub split_seed: u64,
    pub train_fraction: f64,
}

impl MetricReport {
    /// Scores `pred` against `gt`.
    pub fn evaluate(pred: &[f64], gt: &[f64], split_seed: u64, train_fraction: f64) -> Result<Self> {
        Ok(Self {
            srcc: srcc(pred, gt)?,
            plcc: plcc(pred, gt)?,
            n: pred.len(),
            split_seed,
            train_fraction,
        })
    }
}

/// `srcc,plcc,n` with six decimals.
impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6},{:.6},{}", self.srcc, self.plcc, self.n)
    }
}

fn validate(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::SeriesTooShort(values.len()));
    }
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFiniteScore(i)),
        None => Ok(()),
    }
}

fn validate_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    validate(a)?;
    validate(b)
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Ranks starting at 1; tied values share the mean of their positions.
pub fn rank_with_ties(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end, averaged
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson linear correlation coefficient.
pub fn plcc(pred: &[f64], gt: &[f64]) -> Result<f64> {
    validate_pair(pred, gt)?;
    pearson(pred, gt)
}

/// Spearman rank-order correlation coefficient.
pub fn srcc(pred: &[f64], gt: &[f64]) -> Result<f64> {
    validate_pair(pred, gt)?;
    pearson(&rank_with_ties(pred), &rank_with_ties(gt))
}
