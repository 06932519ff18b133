//! Population statistics over per-developer scores, and the plot-ready
//! files derived from them.
//!
//! Undefined scores are counted in `n_undefined` and excluded from every
//! other statistic. Quartiles interpolate linearly between closest ranks
//! (the "type 7" rule used by R and NumPy by default).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{ratio, to_f64, Score};

pub const HISTOGRAM_BINS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub metric: String,
    pub n_defined: usize,
    pub n_undefined: usize,
    pub mean: Option<f64>,
    pub fraction_zero: Option<f64>,
    /// Fraction of defined scores `>=` each threshold, keyed by the
    /// threshold's decimal text.
    pub fraction_ge: BTreeMap<String, Option<f64>>,
    pub histogram: Vec<HistogramBin>,
    pub five_number: Option<FiveNumber>,
}

pub fn default_thresholds() -> Vec<Score> {
    vec![ratio(1, 2)]
}

pub fn summarize(metric: &str, values: &[Option<Score>]) -> DistributionSummary {
    summarize_with_thresholds(metric, values, &default_thresholds())
}

pub fn summarize_with_thresholds(
    metric: &str,
    values: &[Option<Score>],
    thresholds: &[Score],
) -> DistributionSummary {
    let defined: Vec<&Score> = values.iter().flatten().collect();
    let n = defined.len();
    let n_undefined = values.len() - n;
    let fraction = |count: usize| (n > 0).then(|| count as f64 / n as f64);

    let mut counts = [0usize; HISTOGRAM_BINS];
    for v in &defined {
        counts[histogram_bin(v)] += 1;
    }
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(i, &count)| HistogramBin {
            low: i as f64 / HISTOGRAM_BINS as f64,
            high: (i + 1) as f64 / HISTOGRAM_BINS as f64,
            count,
        })
        .collect();

    let fraction_ge = thresholds
        .iter()
        .map(|t| {
            let key = to_f64(t).to_string();
            (key, fraction(defined.iter().filter(|v| **v >= t).count()))
        })
        .collect();

    let mut floats: Vec<f64> = defined.iter().map(|v| to_f64(v)).collect();
    floats.sort_by(f64::total_cmp);
    let five_number = (n > 0).then(|| FiveNumber {
        min: floats[0],
        q1: quantile_sorted(&floats, 0.25),
        median: quantile_sorted(&floats, 0.5),
        q3: quantile_sorted(&floats, 0.75),
        max: floats[n - 1],
    });

    DistributionSummary {
        metric: metric.to_string(),
        n_defined: n,
        n_undefined,
        mean: (n > 0).then(|| compensated_sum(&floats) / n as f64),
        fraction_zero: fraction(defined.iter().filter(|v| v.is_zero()).count()),
        fraction_ge,
        histogram,
        five_number,
    }
}

/// Bin `i` covers `[i/20, (i+1)/20)`; the last bin also holds 1.0. Computed
/// on the exact value so boundaries never wobble.
fn histogram_bin(v: &Score) -> usize {
    if v.is_negative() {
        return 0;
    }
    let scaled = (v.numer() * HISTOGRAM_BINS).div_floor(v.denom());
    scaled
        .to_usize()
        .unwrap_or(usize::MAX)
        .min(HISTOGRAM_BINS - 1)
}

/// Linear interpolation between closest ranks on sorted, non-empty data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Neumaier summation.
fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    metrics: &'a [DistributionSummary],
}

pub fn write_summary_json(path: &Path, summaries: &[DistributionSummary]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &SummaryFile { metrics: summaries })?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// File-name form of a metric name (`pair:fork:ask` -> `pair_fork_ask`).
pub fn metric_slug(metric: &str) -> String {
    metric.replace(':', "_")
}

/// Writes `hist_<metric>.csv` and `box_<metric>.csv` for every summary.
/// A box file for a metric with no defined scores has only its header.
pub fn write_plotdata(dir: &Path, summaries: &[DistributionSummary]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for s in summaries {
        let slug = metric_slug(&s.metric);

        let path = dir.join(format!("hist_{slug}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["bin_low", "bin_high", "count"])?;
        for bin in &s.histogram {
            w.write_record([
                format!("{:.2}", bin.low),
                format!("{:.2}", bin.high),
                bin.count.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;

        let path = dir.join(format!("box_{slug}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["min", "q1", "median", "q3", "max"])?;
        if let Some(f) = s.five_number {
            w.write_record([f.min, f.q1, f.median, f.q3, f.max].map(|v| format!("{v:.6}")))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
