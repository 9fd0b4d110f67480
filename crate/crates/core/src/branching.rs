//! Branching process with varying zero-modified geometric offspring laws.
//!
//! The offspring pgf of generation `n` is the fractional-linear (Moebius)
//! transform `f_n(s) = ((1-s)R_n + s) / ((1-s)r_n + 1)` with
//! `r_n = 1/p_n - 1`, `R_n = 1/p_n - m_n`, `m_n = a_n/p_n`. Moebius
//! transforms compose in closed form, so the generation-`n` pgf, the
//! survival probability, and the conditioned generation law all evaluate
//! exactly without iterating distributions.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::asymptotics::{fit_trend, Trend};
use crate::numeric::CompensatedSum;
use crate::rng::StreamRng;
use crate::zmg::ZmgParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchingError {
    /// A schedule must cover at least one generation.
    EmptySchedule,
    /// Requested generation index exceeds the schedule.
    GenerationOutOfRange { n: usize, len: usize },
    /// Generation index 0 is the ancestor, not a reproduction step.
    ZeroGeneration,
    /// `M_n = exp(log_mean_product)` (and with it `A_n`/`B_n`) left the
    /// representable range; the log-space state is still reported.
    MeanProductOverflow {
        n: usize,
        log_mean_product: f64,
        log_survival: f64,
    },
    /// Trend analysis needs a horizon of at least 10 generations.
    ShortHorizon { horizon: usize },
    /// Conditioned law needs a finite nonnegative tail coefficient.
    InvalidTailCoefficient { b: f64 },
}

impl fmt::Display for BranchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchingError::EmptySchedule => write!(f, "offspring schedule is empty"),
            BranchingError::GenerationOutOfRange { n, len } => {
                write!(f, "generation {n} out of range (schedule covers {len})")
            }
            BranchingError::ZeroGeneration => write!(f, "generation index must be >= 1"),
            BranchingError::MeanProductOverflow {
                n,
                log_mean_product,
                ..
            } => write!(
                f,
                "mean product overflows f64 at generation {n} (log M_n = {log_mean_product})"
            ),
            BranchingError::ShortHorizon { horizon } => {
                write!(f, "horizon {horizon} too short for trend analysis (need >= 10)")
            }
            BranchingError::InvalidTailCoefficient { b } => {
                write!(f, "tail coefficient B={b} must be finite and >= 0")
            }
        }
    }
}

impl core::error::Error for BranchingError {}

/// Per-generation offspring laws, one entry per generation `n = 1, 2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringSchedule {
    params: Vec<ZmgParams>,
}

impl OffspringSchedule {
    pub fn new(params: Vec<ZmgParams>) -> Result<Self, BranchingError> {
        if params.is_empty() {
            return Err(BranchingError::EmptySchedule);
        }
        Ok(Self { params })
    }

    /// Constant environment: the same law for `horizon` generations.
    pub fn constant(law: ZmgParams, horizon: usize) -> Result<Self, BranchingError> {
        Self::new(alloc::vec![law; horizon])
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Offspring law of generation `n` (1-based).
    pub fn generation(&self, n: usize) -> Result<&ZmgParams, BranchingError> {
        if n == 0 {
            return Err(BranchingError::ZeroGeneration);
        }
        self.params
            .get(n - 1)
            .ok_or(BranchingError::GenerationOutOfRange {
                n,
                len: self.params.len(),
            })
    }

    pub fn as_slice(&self) -> &[ZmgParams] {
        &self.params
    }
}

/// Everything the closed forms determine about generation `n`:
/// the per-generation Moebius coefficients, the composed ones, and the
/// survival probability `P(Z_n > 0) = M_n / (1 + B_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationAggregates {
    pub n: usize,
    /// Mean family size `m_n = a_n / p_n` of generation `n`.
    pub mean: f64,
    /// `r_n = 1/p_n - 1`.
    pub tail_coef: f64,
    /// `R_n = 1/p_n - m_n`.
    pub zero_coef: f64,
    /// `log M_n = sum_j log m_j`; kept in log-space throughout.
    pub log_mean_product: f64,
    /// `A_n = M_n * sum_j R_j/M_j`.
    pub composed_zero_coef: f64,
    /// `B_n = M_n * sum_j r_j/M_j`.
    pub composed_tail_coef: f64,
    /// `P(Z_n > 0)`, from `1 / (exp(-log M_n) + sum_j r_j/M_j)`; that form
    /// never overflows on the way up, only saturates when the true value
    /// drops below f64 range.
    pub survival: f64,
    /// `log P(Z_n > 0)`, finite even where `survival` underflows.
    pub log_survival: f64,
}

/// Running log-space state of the composed pgf.
#[derive(Debug, Clone, Copy)]
struct ComposedState {
    n: usize,
    log_mean_product: f64,
    /// `sum_j r_j / M_j`, compensated.
    sum_tail: CompensatedSum,
    /// `sum_j R_j / M_j`, compensated.
    sum_zero: CompensatedSum,
}

impl ComposedState {
    fn start() -> Self {
        Self {
            n: 0,
            log_mean_product: 0.0,
            sum_tail: CompensatedSum::new(),
            sum_zero: CompensatedSum::new(),
        }
    }

    fn step(&mut self, law: &ZmgParams) {
        let a = law.a();
        let p = law.p();
        self.n += 1;
        self.log_mean_product += (a / p).ln();
        // terms r_j/M_j and R_j/M_j, each formed as exp(log . - log M_j)
        let log_m = self.log_mean_product;
        let r = 1.0 / p - 1.0;
        self.sum_tail.add((r.ln() - log_m).exp());
        let big_r = (1.0 - a) / p;
        if big_r > 0.0 {
            self.sum_zero.add((big_r.ln() - log_m).exp());
        }
    }

    fn log_survival(&self) -> f64 {
        // -log( exp(-log M_n) + S_r ), as a stable log-add
        let x = -self.log_mean_product;
        let y = self.sum_tail.total().ln();
        let hi = x.max(y);
        let lo = x.min(y);
        if hi == f64::NEG_INFINITY {
            return f64::INFINITY; // both empty: cannot happen past step 1
        }
        -(hi + (lo - hi).exp().ln_1p())
    }

    fn aggregates(&self, law: &ZmgParams) -> GenerationAggregates {
        let a = law.a();
        let p = law.p();
        let sum_tail = self.sum_tail.total();
        let sum_zero = self.sum_zero.total();
        let composed_tail = if sum_tail > 0.0 {
            (self.log_mean_product + sum_tail.ln()).exp()
        } else {
            0.0
        };
        let composed_zero = if sum_zero > 0.0 {
            (self.log_mean_product + sum_zero.ln()).exp()
        } else {
            0.0
        };
        let survival = 1.0 / ((-self.log_mean_product).exp() + sum_tail);
        GenerationAggregates {
            n: self.n,
            mean: a / p,
            tail_coef: 1.0 / p - 1.0,
            zero_coef: (1.0 - a) / p,
            log_mean_product: self.log_mean_product,
            composed_zero_coef: composed_zero,
            composed_tail_coef: composed_tail,
            survival,
            log_survival: self.log_survival(),
        }
    }
}

/// Iterator over per-generation aggregates, `n = 1..=len`.
pub struct AggregatesIter<'a> {
    schedule: &'a OffspringSchedule,
    state: ComposedState,
}

impl<'a> Iterator for AggregatesIter<'a> {
    type Item = GenerationAggregates;

    fn next(&mut self) -> Option<GenerationAggregates> {
        let law = self.schedule.params.get(self.state.n)?;
        self.state.step(law);
        Some(self.state.aggregates(law))
    }
}

/// Stream the aggregates generation by generation (prefix sums, O(1) each).
pub fn aggregates_iter(schedule: &OffspringSchedule) -> AggregatesIter<'_> {
    AggregatesIter {
        schedule,
        state: ComposedState::start(),
    }
}

/// Aggregates for generation `n`, with overflow of the materialized
/// `M_n`/`A_n`/`B_n` reported distinctly (the log-space quantities in the
/// error remain valid).
pub fn aggregates(
    schedule: &OffspringSchedule,
    n: usize,
) -> Result<GenerationAggregates, BranchingError> {
    if n == 0 {
        return Err(BranchingError::ZeroGeneration);
    }
    if n > schedule.len() {
        return Err(BranchingError::GenerationOutOfRange {
            n,
            len: schedule.len(),
        });
    }
    let agg = aggregates_iter(schedule).nth(n - 1).expect("validated range");
    if !agg.composed_tail_coef.is_finite() || !agg.composed_zero_coef.is_finite() {
        return Err(BranchingError::MeanProductOverflow {
            n,
            log_mean_product: agg.log_mean_product,
            log_survival: agg.log_survival,
        });
    }
    Ok(agg)
}

/// Generation-`n` pgf `phi_n(s) = ((1-s)A_n + s) / ((1-s)B_n + 1)`.
///
/// Evaluated from the log-space state in whichever of the two
/// algebraically equal scalings is well conditioned: direct `A_n`/`B_n`
/// when `M_n <= 1`, the by-`M_n` scaled form otherwise, so supercritical
/// schedules never overflow.
pub fn pgf_eval(schedule: &OffspringSchedule, n: usize, s: f64) -> Result<f64, BranchingError> {
    assert!((0.0..=1.0).contains(&s), "s={s} must lie in [0,1]");
    if n == 0 {
        return Err(BranchingError::ZeroGeneration);
    }
    if n > schedule.len() {
        return Err(BranchingError::GenerationOutOfRange {
            n,
            len: schedule.len(),
        });
    }
    if s == 1.0 {
        return Ok(1.0);
    }
    let mut state = ComposedState::start();
    for law in &schedule.params[..n] {
        state.step(law);
    }
    let u = 1.0 - s;
    let log_m = state.log_mean_product;
    let sum_tail = state.sum_tail.total();
    let sum_zero = state.sum_zero.total();
    if log_m <= 0.0 {
        let m = log_m.exp();
        let a_n = m * sum_zero;
        let b_n = m * sum_tail;
        Ok((u * a_n + s) / (u * b_n + 1.0))
    } else {
        let inv_m = (-log_m).exp();
        Ok((u * sum_zero + s * inv_m) / (u * sum_tail + inv_m))
    }
}

/// The law of `Z_n` conditioned on `Z_n > 0`: a shifted geometric with pgf
/// `s / ((1-s)B + 1)`, mass `B^{k-1}/(1+B)^k` on `k >= 1`, mean `1 + B`.
/// The same family is the limit law when `B_n` converges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionedLaw {
    excess_mean: f64,
}

impl ConditionedLaw {
    /// `b` is the composed tail coefficient `B`; must be finite and >= 0.
    pub fn new(b: f64) -> Result<Self, BranchingError> {
        if !b.is_finite() || b < 0.0 {
            return Err(BranchingError::InvalidTailCoefficient { b });
        }
        Ok(Self { excess_mean: b })
    }

    pub fn tail_coef(&self) -> f64 {
        self.excess_mean
    }

    pub fn mean(&self) -> f64 {
        1.0 + self.excess_mean
    }

    /// `P(Z = k) = B^{k-1} / (1+B)^k`, in log-space for large `k`.
    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let b = self.excess_mean;
        if b == 0.0 {
            return if k == 1 { 1.0 } else { 0.0 };
        }
        ((k as f64 - 1.0) * b.ln() - k as f64 * b.ln_1p()).exp()
    }

    /// `P(Z <= z) = 1 - (B/(1+B))^{floor(z)}` for `z >= 1` (geometric tail
    /// identity), zero below 1.
    pub fn cdf(&self, z: f64) -> f64 {
        if z < 1.0 {
            return 0.0;
        }
        let b = self.excess_mean;
        if b == 0.0 {
            return 1.0;
        }
        let k = z.floor();
        -(k * (b.ln() - b.ln_1p())).exp_m1()
    }
}

/// Weakly-varying environment classification from the partial sums of
/// `m_j - 1`: divergence up is supercritical, a finite limit is critical,
/// divergence down is subcritical, anything unresolved is reported as not
/// weakly varying.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Supercritical,
    Critical,
    Subcritical,
    NotWeaklyVarying,
}

pub fn classify_environment(
    schedule: &OffspringSchedule,
    horizon: usize,
) -> Result<Criticality, BranchingError> {
    if horizon < 10 {
        return Err(BranchingError::ShortHorizon { horizon });
    }
    if horizon > schedule.len() {
        return Err(BranchingError::GenerationOutOfRange {
            n: horizon,
            len: schedule.len(),
        });
    }
    let mut sums = Vec::with_capacity(horizon);
    let mut acc = CompensatedSum::new();
    for law in &schedule.params[..horizon] {
        acc.add(law.mean() - 1.0);
        sums.push(acc.total());
    }
    Ok(match fit_trend(&sums) {
        Trend::ToInfinity => Criticality::Supercritical,
        Trend::ToMinusInfinity => Criticality::Subcritical,
        Trend::Constant(_) | Trend::ToZero => Criticality::Critical,
        Trend::Inconclusive => Criticality::NotWeaklyVarying,
    })
}

/// Verdict of the finite-horizon extinction diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtinctionOutlook {
    /// Survival probability is still falling at the horizon.
    AppearsCertain,
    /// Survival probability has levelled off at a positive value.
    AppearsPositiveSurvival,
    Inconclusive,
}

/// Finite-horizon trajectories behind the extinction criterion
/// (`P(Z_n=0) -> 1` iff `M_n -> 0` and/or `sum r_j/M_j = inf`).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtinctionReport {
    /// Trend of `P(Z_n = 0)`.
    pub extinction_prob_trend: Trend,
    /// Trend of `B_n`.
    pub tail_coef_trend: Trend,
    /// Whether `log M_n` trends to minus infinity (`M_n -> 0`).
    pub mean_product_to_zero: bool,
    /// Whether `sum_j r_j/M_j` trends to infinity.
    pub tail_sum_diverges: bool,
    pub outlook: ExtinctionOutlook,
}

pub fn extinction_report(
    schedule: &OffspringSchedule,
    horizon: usize,
) -> Result<ExtinctionReport, BranchingError> {
    if horizon < 10 {
        return Err(BranchingError::ShortHorizon { horizon });
    }
    if horizon > schedule.len() {
        return Err(BranchingError::GenerationOutOfRange {
            n: horizon,
            len: schedule.len(),
        });
    }
    let mut q = Vec::with_capacity(horizon);
    let mut b = Vec::with_capacity(horizon);
    let mut log_m = Vec::with_capacity(horizon);
    let mut log_surv = Vec::with_capacity(horizon);
    let mut tail_sum = Vec::with_capacity(horizon);
    let mut state = ComposedState::start();
    for law in &schedule.params[..horizon] {
        state.step(law);
        let agg = state.aggregates(law);
        q.push(1.0 - agg.survival);
        b.push(agg.composed_tail_coef);
        log_m.push(agg.log_mean_product);
        log_surv.push(agg.log_survival);
        tail_sum.push(state.sum_tail.total());
    }
    let outlook = match fit_trend(&log_surv) {
        Trend::ToMinusInfinity => ExtinctionOutlook::AppearsCertain,
        Trend::Constant(_) | Trend::ToZero => ExtinctionOutlook::AppearsPositiveSurvival,
        _ => ExtinctionOutlook::Inconclusive,
    };
    Ok(ExtinctionReport {
        extinction_prob_trend: fit_trend(&q),
        tail_coef_trend: fit_trend(&b),
        mean_product_to_zero: fit_trend(&log_m) == Trend::ToMinusInfinity,
        tail_sum_diverges: fit_trend(&tail_sum) == Trend::ToInfinity,
        outlook,
    })
}

/// Knobs for [`simulate_path`].
#[derive(Debug, Clone, Copy)]
pub struct PathOptions {
    /// Record the largest single family of each generation.
    pub track_families: bool,
    /// Abort (with a reported outcome, never silently) once a generation's
    /// running total exceeds this; supercritical paths grow exponentially
    /// and the cap turns an out-of-memory hazard into data.
    pub population_cap: u64,
}

impl Default for PathOptions {
    fn default() -> Self {
        Self {
            track_families: false,
            population_cap: 1_000_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathOutcome {
    Completed,
    /// The cap tripped while producing generation `generation`; sizes and
    /// family maxima are complete strictly below it.
    CapExceeded { generation: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPath {
    /// `sizes[n] = Z_n`, starting from the single ancestor `Z_0 = 1`.
    pub sizes: Vec<u64>,
    /// When tracked: `max_family[n-1]` is the largest family size produced
    /// by the parents of generation `n-1` (zero once extinct).
    pub max_family: Option<Vec<u64>>,
    pub outcome: PathOutcome,
}

impl SimulatedPath {
    pub fn is_extinct_by(&self, n: usize) -> bool {
        self.sizes.get(n).map(|&z| z == 0).unwrap_or(false)
    }
}

/// Simulate one path `Z_0 = 1, Z_n = sum of Z_{n-1} draws`, absorbing at 0.
pub fn simulate_path(
    schedule: &OffspringSchedule,
    n_max: usize,
    rng: &mut StreamRng,
    options: &PathOptions,
) -> Result<SimulatedPath, BranchingError> {
    if n_max == 0 {
        return Err(BranchingError::ZeroGeneration);
    }
    if n_max > schedule.len() {
        return Err(BranchingError::GenerationOutOfRange {
            n: n_max,
            len: schedule.len(),
        });
    }
    let mut sizes = Vec::with_capacity(n_max + 1);
    sizes.push(1u64);
    let mut families = if options.track_families {
        Some(Vec::with_capacity(n_max))
    } else {
        None
    };
    for n in 1..=n_max {
        let law = &schedule.params[n - 1];
        let parents = *sizes.last().expect("nonempty");
        let mut total = 0u64;
        let mut largest = 0u64;
        for _ in 0..parents {
            let x = law.sample(rng);
            total = total.saturating_add(x);
            if x > largest {
                largest = x;
            }
            if total > options.population_cap {
                return Ok(SimulatedPath {
                    sizes,
                    max_family: families,
                    outcome: PathOutcome::CapExceeded { generation: n },
                });
            }
        }
        sizes.push(total);
        if let Some(f) = families.as_mut() {
            f.push(largest);
        }
    }
    Ok(SimulatedPath {
        sizes,
        max_family: families,
        outcome: PathOutcome::Completed,
    })
}
