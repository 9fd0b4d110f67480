//! Seeded sampling harness: empirical cdfs, Kolmogorov-Smirnov comparison
//! against exact laws, and row-extrema sampling that switches to exact
//! inverse-transform draws once a row is too wide to reduce directly.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::extremes::RowParams;
use crate::rng::StreamRng;

/// Widest row the direct `nu`-draw reduction will attempt.
pub const DIRECT_SAMPLING_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McError {
    /// An empirical cdf needs at least one sample.
    EmptySample,
    /// The range of a row is only samplable on the direct path; the
    /// inverse-transform path draws max and min from their marginal laws
    /// and carries no joint information.
    RangeNeedsDirectPath { nu: u64 },
}

impl fmt::Display for McError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McError::EmptySample => write!(f, "empirical cdf needs at least one sample"),
            McError::RangeNeedsDirectPath { nu } => write!(
                f,
                "range sampling requires nu <= {DIRECT_SAMPLING_LIMIT} (got {nu})"
            ),
        }
    }
}

impl core::error::Error for McError {}

/// Sorted sample with step-function evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    values: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_values(mut values: Vec<f64>) -> Result<Self, McError> {
        if values.is_empty() {
            return Err(McError::EmptySample);
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `#{samples <= x} / n`.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.values.partition_point(|&v| v <= x);
        k as f64 / self.values.len() as f64
    }

    /// Left limit `#{samples < x} / n`.
    pub fn eval_left(&self, x: f64) -> f64 {
        let k = self.values.partition_point(|&v| v < x);
        k as f64 / self.values.len() as f64
    }
}

/// Two-sided Kolmogorov-Smirnov statistic against a (possibly atomic)
/// reference cdf: the sup over sample points of
/// `max(|Fhat(x) - F(x)|, |Fhat(x-) - F(x-)|)`.
///
/// Left limits pair with left limits. Pairing `Fhat(x-)` with `F(x)`, as
/// the continuous-case formula does, charges every atom of `F` its full
/// jump height even to a perfect sample. `F(x-)` is obtained by
/// evaluating one ulp below `x`, exact for the step cdfs used here and
/// indistinguishable from `F(x)` for continuous ones.
pub fn ks_distance<F: Fn(f64) -> f64>(emp: &EmpiricalCdf, exact: F) -> f64 {
    let mut worst = 0.0f64;
    let values = emp.values();
    let mut i = 0;
    while i < values.len() {
        let x = values[i];
        worst = worst.max((emp.eval(x) - exact(x)).abs());
        worst = worst.max((emp.eval_left(x) - exact(x.next_down())).abs());
        // skip duplicates: eval/eval_left already bracket the whole jump
        let mut j = i + 1;
        while j < values.len() && values[j] == x {
            j += 1;
        }
        i = j;
    }
    worst
}

/// Asymptotic KS critical levels `c(alpha)/sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsLevel {
    TenPercent,
    FivePercent,
    OnePercent,
}

impl KsLevel {
    pub fn coefficient(&self) -> f64 {
        match self {
            KsLevel::TenPercent => 1.224,
            KsLevel::FivePercent => 1.358,
            KsLevel::OnePercent => 1.628,
        }
    }
}

/// Critical KS distance at the given level for a sample of size `n`.
pub fn ks_critical(level: KsLevel, n: u64) -> f64 {
    level.coefficient() / (n as f64).sqrt()
}

/// One sampled row reduced to its extrema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremaSample {
    pub max: u64,
    pub min: u64,
    /// Present only on the direct path; the wide-row path samples the two
    /// marginals independently and cannot form their difference.
    pub range: Option<u64>,
}

/// Sample `(max, min, range)` of one row.
///
/// Rows up to [`DIRECT_SAMPLING_LIMIT`] are reduced draw by draw. Wider
/// rows sample the maximum and minimum exactly from their closed-form
/// laws by inverse transform (two uniforms, fixed cost); requesting the
/// range there is an error rather than a silent wrong answer.
pub fn sample_row_extrema(
    row: &RowParams,
    rng: &mut StreamRng,
    want_range: bool,
) -> Result<ExtremaSample, McError> {
    if row.nu() <= DIRECT_SAMPLING_LIMIT {
        let mut max = 0u64;
        let mut min = u64::MAX;
        for _ in 0..row.nu() {
            let x = row.zmg().sample(rng);
            max = max.max(x);
            min = min.min(x);
        }
        Ok(ExtremaSample {
            max,
            min,
            range: if want_range { Some(max - min) } else { None },
        })
    } else {
        if want_range {
            return Err(McError::RangeNeedsDirectPath { nu: row.nu() });
        }
        Ok(sample_extrema_via_quantiles(row, rng))
    }
}

/// Inverse-transform sampling of the extrema from their closed-form laws;
/// exact in distribution for each marginal at any `nu`. Exposed so the
/// two sampling paths can be compared head to head.
pub fn sample_extrema_via_quantiles(row: &RowParams, rng: &mut StreamRng) -> ExtremaSample {
    let u_max = rng.next_open_f64();
    let u_min = rng.next_open_f64();
    ExtremaSample {
        max: row.max_quantile(u_max),
        min: row.min_quantile(u_min),
        range: None,
    }
}
