//! Limit laws for the row extrema, the normalizing constants that reach
//! them, oscillation bands for the non-convergent regimes, finite-horizon
//! regime classification, and sup-distance convergence diagnostics.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::extremes::RowParams;
use crate::numeric::{
    gumbel_cdf, gumbel_quantile, integer_part, log1mexp, logistic_cdf, logistic_quantile,
    pow_one_minus,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticsError {
    /// The evaluation grid resolved to no points.
    EmptyGrid,
    /// Trend analysis needs a horizon of at least 10 rows.
    ShortHorizon { len: usize },
}

impl fmt::Display for AsymptoticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticsError::EmptyGrid => write!(f, "evaluation grid is empty"),
            AsymptoticsError::ShortHorizon { len } => {
                write!(f, "horizon {len} too short for trend analysis (need >= 10)")
            }
        }
    }
}

impl core::error::Error for AsymptoticsError {}

/// The centering/scaling constants attached to one row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizers {
    /// `alpha_n = log(nu * a)`, formed as `log nu + log a`.
    pub alpha: f64,
    /// `beta_n = -nu * log a`; zero exactly when `a = 1`.
    pub beta: f64,
    /// `C_n = -alpha_n / log(1-p)`, the centering for the oscillation band.
    pub center: f64,
}

impl Normalizers {
    pub fn from_row(row: &RowParams) -> Self {
        let nu = row.nu() as f64;
        let a = row.zmg().a();
        let p = row.zmg().p();
        let alpha = nu.ln() + a.ln();
        Self {
            alpha,
            beta: -nu * a.ln(),
            center: -alpha / (-p).ln_1p(),
        }
    }
}

/// Tagged family of limit cdfs arising for the normalized extrema.
///
/// Defective members (total mass < 1 on the reals) place the deficit at
/// `+inf`; [`LimitLaw::total_mass`] reports the mass actually on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitLaw {
    /// Law of `Gumbel - shift`: cdf `exp(-e^{-x-shift})`.
    GumbelShift { shift: f64 },
    /// Gumbel conditioned to `[-alpha, inf)` with an atom at `-alpha`:
    /// cdf `G(x)` for `x >= -alpha`, zero below.
    TruncatedGumbel { alpha: f64 },
    /// Discrete max limit `exp(-e^{alpha} (1-p)^{floor(x)})` on `x >= 0`;
    /// defective when `p = 0`.
    DiscreteMaxLimit { alpha: f64, p: f64 },
    /// Law of `(Exp - beta)^+`: cdf `1 - e^{-y-beta}` on `y >= 0`.
    ShiftedExpPositivePart { beta: f64 },
    /// Discrete min limit `1 - e^{-beta - rho*floor(y)}` on `y >= 0`;
    /// defective when `rho = 0` (mass `e^{-beta}` escapes to infinity).
    ZmgMinLimit { beta: f64, rho: f64 },
    /// Law of `Logistic - shift`: cdf `1/(1+e^{-x-shift})`.
    LogisticShift { shift: f64 },
    /// Logistic analogue of [`LimitLaw::TruncatedGumbel`].
    TruncatedLogistic { alpha: f64 },
    /// Atom of the given mass at zero, remainder at `+inf`.
    DefectiveTwoPoint { mass_at_zero: f64 },
}

impl LimitLaw {
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            LimitLaw::GumbelShift { shift } => gumbel_cdf(x + shift),
            LimitLaw::TruncatedGumbel { alpha } => {
                if x < -alpha {
                    0.0
                } else {
                    gumbel_cdf(x)
                }
            }
            LimitLaw::DiscreteMaxLimit { alpha, p } => {
                if x < 0.0 {
                    0.0
                } else {
                    (-(alpha.exp()) * pow_one_minus(p, integer_part(x))).exp()
                }
            }
            LimitLaw::ShiftedExpPositivePart { beta } => {
                if x < 0.0 {
                    0.0
                } else {
                    -(-(x + beta)).exp_m1()
                }
            }
            LimitLaw::ZmgMinLimit { beta, rho } => {
                if x < 0.0 {
                    0.0
                } else {
                    -(-(beta + rho * integer_part(x))).exp_m1()
                }
            }
            LimitLaw::LogisticShift { shift } => logistic_cdf(x + shift),
            LimitLaw::TruncatedLogistic { alpha } => {
                if x < -alpha {
                    0.0
                } else {
                    logistic_cdf(x)
                }
            }
            LimitLaw::DefectiveTwoPoint { mass_at_zero } => {
                if x < 0.0 {
                    0.0
                } else {
                    mass_at_zero
                }
            }
        }
    }

    /// Total mass on the reals; 1 unless the law is defective.
    pub fn total_mass(&self) -> f64 {
        match *self {
            LimitLaw::DiscreteMaxLimit { alpha, p } if p == 0.0 => (-alpha.exp()).exp(),
            LimitLaw::ZmgMinLimit { beta, rho } if rho == 0.0 => -(-beta).exp_m1(),
            LimitLaw::DefectiveTwoPoint { mass_at_zero } => mass_at_zero,
            _ => 1.0,
        }
    }

    /// Left-continuous inverse: smallest `x` with `cdf(x) >= q`.
    /// `None` when the level is never reached (defective deficit).
    pub fn quantile(&self, q: f64) -> Option<f64> {
        debug_assert!(q > 0.0 && q < 1.0);
        if q > self.total_mass() {
            return None;
        }
        match *self {
            LimitLaw::GumbelShift { shift } => Some(gumbel_quantile(q) - shift),
            LimitLaw::TruncatedGumbel { alpha } => Some(gumbel_quantile(q).max(-alpha)),
            LimitLaw::DiscreteMaxLimit { alpha, p } => {
                if p == 0.0 {
                    return Some(0.0);
                }
                // smallest integer k with e^{alpha}(1-p)^k <= -ln q
                let k = (((-q.ln()).ln() - alpha) / (-p).ln_1p()).ceil();
                Some(k.max(0.0))
            }
            LimitLaw::ShiftedExpPositivePart { beta } => {
                Some((-(1.0 - q).ln() - beta).max(0.0))
            }
            LimitLaw::ZmgMinLimit { beta, rho } => {
                if rho == 0.0 {
                    return Some(0.0);
                }
                let k = ((-(1.0 - q).ln() - beta) / rho).ceil();
                Some(k.max(0.0))
            }
            LimitLaw::LogisticShift { shift } => Some(logistic_quantile(q) - shift),
            LimitLaw::TruncatedLogistic { alpha } => Some(logistic_quantile(q).max(-alpha)),
            LimitLaw::DefectiveTwoPoint { .. } => Some(0.0),
        }
    }
}

/// Evaluation grid: limit-law quantile levels plus explicit extra points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub quantile_levels: Vec<f64>,
    pub extra_points: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            quantile_levels: alloc::vec![
                0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99,
                0.999,
            ],
            extra_points: Vec::new(),
        }
    }
}

impl GridSpec {
    /// Resolve against a limit law: quantiles of reachable levels, then
    /// the explicit extras.
    pub fn points(&self, law: &LimitLaw) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .quantile_levels
            .iter()
            .filter_map(|&q| law.quantile(q))
            .filter(|x| x.is_finite())
            .collect();
        pts.extend(self.extra_points.iter().copied().filter(|x| x.is_finite()));
        pts
    }
}

/// Exact law of `p * max - alpha_n` at `x`, i.e. the row maximum cdf
/// evaluated at `x_n = (x + alpha_n) / p`.
pub fn normalized_max_cdf(row: &RowParams, x: f64) -> f64 {
    let norm = Normalizers::from_row(row);
    row.max_cdf((x + norm.alpha) / row.zmg().p())
}

/// Exact law of `nu * p * min` at `y`, i.e. the row minimum cdf evaluated
/// at `y / (nu * p)`.
pub fn normalized_min_cdf(row: &RowParams, y: f64) -> f64 {
    if y < 0.0 {
        return 0.0;
    }
    row.min_cdf(y / (row.nu() as f64 * row.zmg().p()))
}

/// Max over the grid of `|exact(x) - limit.cdf(x)|`.
pub fn sup_distance<F: Fn(f64) -> f64>(
    exact: F,
    law: &LimitLaw,
    grid: &GridSpec,
) -> Result<f64, AsymptoticsError> {
    let pts = grid.points(law);
    if pts.is_empty() {
        return Err(AsymptoticsError::EmptyGrid);
    }
    let mut worst = 0.0f64;
    for &x in &pts {
        let d = (exact(x) - law.cdf(x)).abs();
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// Oscillation envelope for the centered maximum when `p_n -> p` with
/// `0 < p < 1`: no limit law exists, but `P(max - C_n <= x)` is eventually
/// pinched between `G(gamma(x-1))` and `G(gamma x)` with
/// `gamma = -log(1-p)`. Returns `(lower, upper)`.
pub fn gumbel_oscillation_band(p_lim: f64, x: f64) -> (f64, f64) {
    assert!(p_lim > 0.0 && p_lim < 1.0, "p_lim={p_lim} must lie in (0,1)");
    let gamma = -(-p_lim).ln_1p();
    (gumbel_cdf(gamma * (x - 1.0)), gumbel_cdf(gamma * x))
}

/// Envelope for the scaled minimum when `nu_n p_n -> xi > 0`, written in
/// the orientation of the source display: the pair is
/// `(1 - e^{-y-beta-xi}, 1 - e^{-y-beta})`, whose first member is the
/// larger one (the two exponentials order the other way).
pub fn min_oscillation_band(beta: f64, xi: f64, y: f64) -> (f64, f64) {
    assert!(beta >= 0.0, "beta={beta} must be >= 0");
    assert!(xi > 0.0, "xi={xi} must be > 0");
    assert!(y >= 0.0, "y={y} must be >= 0");
    (
        -(-(y + beta + xi)).exp_m1(),
        -(-(y + beta)).exp_m1(),
    )
}

/// `log P(max > x_n) / (alpha_n * p)` at `x_n = (x + alpha_n)/p`, via the
/// log-space survival of the max law. In the regime where `alpha_n p_n`
/// diverges this ratio tends to -1/2.
pub fn large_deviation_ratio(row: &RowParams, x: f64) -> f64 {
    let norm = Normalizers::from_row(row);
    assert!(norm.alpha > 0.0, "alpha_n={} must be > 0", norm.alpha);
    let p = row.zmg().p();
    let x_n = (x + norm.alpha) / p;
    let log_max = row.log_max_cdf(x_n); // <= 0
    let log_upper_tail = log1mexp(log_max);
    log_upper_tail / (norm.alpha * p)
}

// ---------------------------------------------------------------------------
// Trend classification
// ---------------------------------------------------------------------------

/// Outcome of the finite-horizon trend heuristic for one quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trend {
    ToZero,
    ToInfinity,
    ToMinusInfinity,
    Constant(f64),
    Inconclusive,
}

impl Trend {
    /// The finite limit this trend asserts, if any (`ToZero` counts as 0).
    pub fn limit_value(&self) -> Option<f64> {
        match *self {
            Trend::ToZero => Some(0.0),
            Trend::Constant(c) => Some(c),
            _ => None,
        }
    }
}

/// Slope threshold below which a trajectory counts as constant.
pub const TREND_SLOPE_TOL: f64 = 0.01;

/// Classify a trajectory `values[i]` observed at positions `n = i + 1`.
///
/// Least-squares slope of the value against `log n` over the last half of
/// the horizon; `|slope| < 0.01` reads as constant (with the fitted
/// constant = mean of the window) and a decisive slope reads as divergence
/// in the slope's direction — downward slopes of a still-positive quantity
/// read as decay to zero. A flat raw slope alone cannot separate "constant
/// near zero" from "still shrinking", so a positive window that passes the
/// constant test is re-fitted on the log scale and sustained multiplicative
/// movement overrides the constant verdict. Windows whose step-to-step
/// movement mostly contradicts the fitted slope are flagged inconclusive.
pub fn fit_trend(values: &[f64]) -> Trend {
    let len = values.len();
    let window = &values[len / 2..];
    if window.len() < 2 || window.iter().any(|v| !v.is_finite()) {
        return Trend::Inconclusive;
    }
    let n0 = len / 2 + 1;
    let xs: Vec<f64> = (0..window.len()).map(|i| ((n0 + i) as f64).ln()).collect();
    let slope_against = |ys: &[f64]| -> f64 {
        let mean_x = xs.iter().sum::<f64>() / xs.len() as f64;
        let mean_y = ys.iter().sum::<f64>() / ys.len() as f64;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for (x, y) in xs.iter().zip(ys.iter()) {
            sxx += (x - mean_x) * (x - mean_x);
            sxy += (x - mean_x) * (y - mean_y);
        }
        if sxx > 0.0 {
            sxy / sxx
        } else {
            0.0
        }
    };
    let mean_y = window.iter().sum::<f64>() / window.len() as f64;
    let slope = slope_against(window);

    if slope.abs() < TREND_SLOPE_TOL {
        if mean_y.abs() <= 1e-9 {
            return Trend::ToZero;
        }
        if window.iter().all(|&v| v > 0.0) {
            let logs: Vec<f64> = window.iter().map(|v| v.ln()).collect();
            let log_slope = slope_against(&logs);
            if log_slope <= -TREND_SLOPE_TOL {
                return Trend::ToZero;
            }
            if log_slope >= TREND_SLOPE_TOL {
                return Trend::ToInfinity;
            }
        }
        return Trend::Constant(mean_y);
    }

    // movement must mostly agree with the fitted direction
    let mut agree = 0usize;
    let mut disagree = 0usize;
    for pair in window.windows(2) {
        let d = pair[1] - pair[0];
        if d * slope > 0.0 {
            agree += 1;
        } else if d * slope < 0.0 {
            disagree += 1;
        }
    }
    if disagree > agree {
        return Trend::Inconclusive;
    }

    if slope > 0.0 {
        Trend::ToInfinity
    } else if *window.last().unwrap() < 0.0 {
        Trend::ToMinusInfinity
    } else {
        Trend::ToZero
    }
}

/// Which limit regime a row sequence appears to realize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeFinding {
    /// `nu_n a_n -> 0`: the maximum collapses to 0 in probability.
    MaxConvergesToZero,
    /// `alpha_n -> alpha`, `p_n -> p`: the raw maximum has the discrete
    /// limit law `exp(-e^{alpha}(1-p)^{floor(x)})` (defective if `p = 0`).
    MaxDiscreteLimit { alpha: f64, p: f64 },
    /// `alpha_n -> inf` with `p` bounded away from 1: max diverges.
    MaxDivergesInProbability,
    /// `p_n -> 0`, `alpha_n -> inf`, `alpha_n p_n -> 2c`: the scaled
    /// centered maximum is asymptotically Gumbel shifted by `c`.
    MaxGumbelAfterScaling { c: f64 },
    /// `p_n -> 0`, `alpha_n -> alpha` finite: scaled maximum tends to the
    /// truncated Gumbel law pinned at `-alpha`.
    MaxTruncatedGumbelAfterScaling { alpha: f64 },
    /// `a_n^{nu_n} -> 0`: the minimum collapses to 0 in probability.
    MinConvergesToZero,
    /// `nu_n(1-a_n) -> beta`, `nu_n p_n -> rho`, not both zero: the raw
    /// minimum has the zero-modified geometric limit law.
    MinDiscreteLimit { beta: f64, rho: f64 },
    /// `nu_n(1-a_n) -> 0` and `nu_n p_n -> 0`: minimum diverges.
    MinDivergesInProbability,
    /// `nu_n p_n -> 0`, `beta_n -> beta` finite: the scaled minimum tends
    /// to `(Exp - beta)^+`.
    MinExponentialAfterScaling { beta: f64 },
}

/// Finite-horizon trend of every quantity the limit hypotheses mention,
/// plus the regimes those trends support.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub nu: Trend,
    pub nu_a: Trend,
    pub alpha: Trend,
    pub p: Trend,
    pub a_pow_nu: Trend,
    pub nu_one_minus_a: Trend,
    pub nu_p: Trend,
    pub beta: Trend,
    pub alpha_p: Trend,
    pub findings: Vec<RegimeFinding>,
}

/// Evaluate the finite-horizon trajectories of `nu a`, `alpha_n`, `p_n`,
/// `a^{nu}`, `nu(1-a)`, `nu p`, `beta_n`, and `alpha_n p_n` along the row
/// sequence and report which limit hypotheses appear satisfied. Findings
/// are only emitted when `nu` itself diverges.
pub fn classify_regimes(rows: &[RowParams]) -> Result<RegimeReport, AsymptoticsError> {
    if rows.len() < 10 {
        return Err(AsymptoticsError::ShortHorizon { len: rows.len() });
    }
    let collect = |f: &dyn Fn(&RowParams) -> f64| -> Vec<f64> { rows.iter().map(f).collect() };

    let nu = fit_trend(&collect(&|r| r.nu() as f64));
    let nu_a = fit_trend(&collect(&|r| r.nu() as f64 * r.zmg().a()));
    let alpha = fit_trend(&collect(&|r| Normalizers::from_row(r).alpha));
    let p = fit_trend(&collect(&|r| r.zmg().p()));
    let a_pow_nu = fit_trend(&collect(&|r| (r.nu() as f64 * r.zmg().a().ln()).exp()));
    let nu_one_minus_a = fit_trend(&collect(&|r| r.nu() as f64 * (1.0 - r.zmg().a())));
    let nu_p = fit_trend(&collect(&|r| r.nu() as f64 * r.zmg().p()));
    let beta = fit_trend(&collect(&|r| Normalizers::from_row(r).beta));
    let alpha_p = fit_trend(&collect(&|r| {
        Normalizers::from_row(r).alpha * r.zmg().p()
    }));

    let mut findings = Vec::new();
    if nu == Trend::ToInfinity {
        if nu_a == Trend::ToZero {
            findings.push(RegimeFinding::MaxConvergesToZero);
        }
        if let (Some(al), Some(pl)) = (alpha.limit_value(), p.limit_value()) {
            findings.push(RegimeFinding::MaxDiscreteLimit { alpha: al, p: pl });
        }
        let p_below_one = match p.limit_value() {
            Some(pl) => pl < 1.0,
            None => false,
        };
        if alpha == Trend::ToInfinity && p_below_one {
            findings.push(RegimeFinding::MaxDivergesInProbability);
        }
        if alpha == Trend::ToInfinity && p == Trend::ToZero {
            if let Some(v) = alpha_p.limit_value() {
                findings.push(RegimeFinding::MaxGumbelAfterScaling { c: v / 2.0 });
            }
        }
        if let Some(al) = alpha.limit_value() {
            if p == Trend::ToZero {
                findings.push(RegimeFinding::MaxTruncatedGumbelAfterScaling { alpha: al });
            }
        }
        if a_pow_nu == Trend::ToZero {
            findings.push(RegimeFinding::MinConvergesToZero);
        }
        match (nu_one_minus_a.limit_value(), nu_p.limit_value()) {
            (Some(b), Some(rh)) if b == 0.0 && rh == 0.0 => {
                findings.push(RegimeFinding::MinDivergesInProbability);
            }
            (Some(b), Some(rh)) => {
                findings.push(RegimeFinding::MinDiscreteLimit { beta: b, rho: rh });
            }
            _ => {}
        }
        if nu_p == Trend::ToZero {
            if let Some(b) = beta.limit_value() {
                findings.push(RegimeFinding::MinExponentialAfterScaling { beta: b });
            }
        }
    }

    Ok(RegimeReport {
        nu,
        nu_a,
        alpha,
        p,
        a_pow_nu,
        nu_one_minus_a,
        nu_p,
        beta,
        alpha_p,
        findings,
    })
}
