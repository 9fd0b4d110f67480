//! Conditional law of the largest family within a generation.
//!
//! `M_n` is the biggest offspring count produced by any parent of
//! generation `n-1`; conditioning on `Z_{n-1} > 0` (the event that there
//! are parents at all) its distribution function is the conditioned pgf of
//! `Z_{n-1}` evaluated at the offspring cdf:
//!
//! ```text
//! H_n(x) = F_n(x) / ((1 - F_n(x)) B_{n-1} + 1)
//! ```
//!
//! The analysis of the triangular-array maximum carries over with the
//! composed tail coefficient `B_{n-1}` in the role of the row count, and
//! the Gumbel limits become logistic ones.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::branching::{simulate_path, BranchingError, OffspringSchedule, PathOptions, PathOutcome};
use crate::montecarlo::EmpiricalCdf;
use crate::numeric::{integer_part, logistic_cdf, pow_one_minus};
use crate::rng::StreamRng;
use crate::zmg::ZmgParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxFamilyError {
    Branching(BranchingError),
    /// Monte Carlo needs at least 10^3 requested paths.
    TooFewPaths { paths: u64 },
    /// Fewer than 100 paths survived the conditioning event.
    TooFewSurvivors { retained: u64, requested: u64 },
    /// A simulated path tripped the population cap.
    PopulationCapExceeded { generation: usize },
}

impl From<BranchingError> for MaxFamilyError {
    fn from(e: BranchingError) -> Self {
        MaxFamilyError::Branching(e)
    }
}

impl fmt::Display for MaxFamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxFamilyError::Branching(e) => write!(f, "{e}"),
            MaxFamilyError::TooFewPaths { paths } => {
                write!(f, "need at least 1000 Monte Carlo paths, got {paths}")
            }
            MaxFamilyError::TooFewSurvivors { retained, requested } => write!(
                f,
                "only {retained} of {requested} paths survived the conditioning event (need >= 100)"
            ),
            MaxFamilyError::PopulationCapExceeded { generation } => {
                write!(f, "population cap exceeded at generation {generation}")
            }
        }
    }
}

impl core::error::Error for MaxFamilyError {}

/// A resolved query: generation `n`, its offspring law, and the composed
/// tail coefficient `B_{n-1}` of the parents' generation (`B_0 = 0`, so
/// `n = 1` collapses to the unconditioned single-ancestor law).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxFamilyQuery {
    generation: usize,
    offspring: ZmgParams,
    prev_tail_coef: f64,
}

impl MaxFamilyQuery {
    pub fn new(schedule: &OffspringSchedule, n: usize) -> Result<Self, MaxFamilyError> {
        let offspring = *schedule.generation(n)?;
        let prev_tail_coef = if n == 1 {
            0.0
        } else {
            crate::branching::aggregates(schedule, n - 1)?.composed_tail_coef
        };
        Ok(Self {
            generation: n,
            offspring,
            prev_tail_coef,
        })
    }

    /// Build directly from the pieces (useful when the aggregates are
    /// already known in closed form, as for the sampled birth-death chain).
    pub fn from_parts(generation: usize, offspring: ZmgParams, prev_tail_coef: f64) -> Self {
        debug_assert!(prev_tail_coef >= 0.0);
        Self {
            generation,
            offspring,
            prev_tail_coef,
        }
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn offspring(&self) -> &ZmgParams {
        &self.offspring
    }

    pub fn prev_tail_coef(&self) -> f64 {
        self.prev_tail_coef
    }

    /// `alpha*_n = log(a_n B_{n-1})`, defined once `B_{n-1} > 0`.
    pub fn alpha_star(&self) -> Option<f64> {
        if self.prev_tail_coef > 0.0 {
            Some((self.offspring.a() * self.prev_tail_coef).ln())
        } else {
            None
        }
    }

    /// `P(M_n <= x | Z_{n-1} > 0)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let f = self.offspring.cdf(x);
        f / ((1.0 - f) * self.prev_tail_coef + 1.0)
    }

    /// Exact law of `p_n M_n - alpha*_n` (given `Z_{n-1} > 0`) at `x`.
    pub fn centered_cdf(&self, x: f64) -> f64 {
        let alpha_star = self
            .alpha_star()
            .expect("centered law needs B_{n-1} > 0 so alpha* is defined");
        self.cdf((x + alpha_star) / self.offspring.p())
    }

    /// Exact law of `p_n M_n` (given `Z_{n-1} > 0`) at `x`.
    pub fn scaled_cdf(&self, x: f64) -> f64 {
        self.cdf(x / self.offspring.p())
    }
}

/// The two limit shapes of the conditional max-family law when `p_n -> p`
/// with `0 < p < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxFamilyLimit {
    /// `a_n -> a`, `B_n -> B < inf`:
    /// `(1 - a(1-p)^{floor(x)}) / (1 + a B (1-p)^{floor(x)})`.
    Stable { a: f64, p: f64, tail_coef: f64 },
    /// `B_n -> inf` with `log(a_n B_n) -> alpha`:
    /// `1 / (1 + e^{alpha} (1-p)^{floor(x)})`.
    Growing { alpha: f64, p: f64 },
}

impl MaxFamilyLimit {
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            MaxFamilyLimit::Stable { a, p, tail_coef } => {
                let w = pow_one_minus(p, integer_part(x));
                (1.0 - a * w) / (1.0 + a * tail_coef * w)
            }
            MaxFamilyLimit::Growing { alpha, p } => {
                let w = pow_one_minus(p, integer_part(x));
                1.0 / (1.0 + alpha.exp() * w)
            }
        }
    }
}

/// Oscillation envelope for the centered max family size when `p_n -> p`
/// in (0,1): the logistic counterpart of the Gumbel band, with endpoints
/// `L(gamma(x-1))` and `L(gamma x)`, `gamma = -log(1-p)`.
pub fn logistic_oscillation_band(p_lim: f64, x: f64) -> (f64, f64) {
    assert!(p_lim > 0.0 && p_lim < 1.0, "p_lim={p_lim} must lie in (0,1)");
    let gamma = -(-p_lim).ln_1p();
    (logistic_cdf(gamma * (x - 1.0)), logistic_cdf(gamma * x))
}

/// One conditioned Monte Carlo draw of `M_n`: simulate the path, keep the
/// generation-`n` family maximum when `Z_{n-1} > 0`, otherwise discard.
pub fn maxfam_path_sample(
    schedule: &OffspringSchedule,
    n: usize,
    rng: &mut StreamRng,
) -> Result<Option<u64>, MaxFamilyError> {
    let options = PathOptions {
        track_families: true,
        ..PathOptions::default()
    };
    let path = simulate_path(schedule, n, rng, &options)?;
    if let PathOutcome::CapExceeded { generation } = path.outcome {
        return Err(MaxFamilyError::PopulationCapExceeded { generation });
    }
    if path.sizes[n - 1] == 0 {
        return Ok(None);
    }
    Ok(Some(
        path.max_family.as_ref().expect("families tracked")[n - 1],
    ))
}

/// Result of [`mc_maxfam`].
#[derive(Debug, Clone, PartialEq)]
pub struct MaxFamilyMc {
    /// Empirical conditional cdf of the retained samples.
    pub empirical: EmpiricalCdf,
    pub retained: u64,
    pub requested: u64,
}

/// Seeded Monte Carlo estimate of the conditional law of `M_n`: simulates
/// `paths` paths on streams `0..paths` of the master seed, discards those
/// extinct before generation `n-1`. Deterministic in `(seed, paths)` and
/// safe to shard across workers by stream index.
pub fn mc_maxfam(
    schedule: &OffspringSchedule,
    n: usize,
    paths: u64,
    seed: u64,
) -> Result<MaxFamilyMc, MaxFamilyError> {
    if paths < 1_000 {
        return Err(MaxFamilyError::TooFewPaths { paths });
    }
    let mut kept = alloc::vec::Vec::new();
    for stream in 0..paths {
        let mut rng = StreamRng::new(seed, stream);
        if let Some(m) = maxfam_path_sample(schedule, n, &mut rng)? {
            kept.push(m as f64);
        }
    }
    let retained = kept.len() as u64;
    if retained < 100 {
        return Err(MaxFamilyError::TooFewSurvivors {
            retained,
            requested: paths,
        });
    }
    Ok(MaxFamilyMc {
        empirical: EmpiricalCdf::from_values(kept).expect("retained >= 100"),
        retained,
        requested: paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{sup_distance, GridSpec, LimitLaw};
    use crate::branching::ConditionedLaw;
    use crate::montecarlo::{ks_critical, ks_distance, KsLevel};
    use crate::scenarios::ScenarioSpec;

    fn critical_geometric(horizon: usize) -> OffspringSchedule {
        OffspringSchedule::constant(ZmgParams::new(0.5, 0.5).unwrap(), horizon).unwrap()
    }

    #[test]
    fn first_generation_is_the_offspring_cdf() {
        let sched = critical_geometric(10);
        let q = MaxFamilyQuery::new(&sched, 1).unwrap();
        assert_eq!(q.prev_tail_coef(), 0.0);
        assert_eq!(q.alpha_star(), None);
        for &x in &[-1.0, 0.0, 1.5, 4.0] {
            assert_eq!(q.cdf(x), q.offspring().cdf(x));
        }
    }

    #[test]
    fn closed_form_reference_values() {
        // B_3 = 3 for the critical geometric; F_4(1) = 0.75
        let sched = critical_geometric(10);
        let q = MaxFamilyQuery::new(&sched, 4).unwrap();
        assert!((q.prev_tail_coef() - 3.0).abs() < 1e-12);
        assert!((q.cdf(1.0) - 3.0 / 7.0).abs() < 1e-12);

        // generation 5: B_4 = 4, H(1) = 0.75/(0.25*4 + 1) = 0.375
        let q = MaxFamilyQuery::new(&sched, 5).unwrap();
        assert!((q.cdf(1.0) - 0.375).abs() < 1e-12);
    }

    #[test]
    fn closed_form_equals_conditioned_series() {
        // H_n(x) = sum_k P(Z_{n-1}=k | Z_{n-1}>0) F_n(x)^k
        let sched = critical_geometric(25);
        for n in [2usize, 5, 12, 20] {
            let q = MaxFamilyQuery::new(&sched, n).unwrap();
            let law = ConditionedLaw::new(q.prev_tail_coef()).unwrap();
            for k in 0..12 {
                let x = k as f64;
                let f = q.offspring().cdf(x);
                let mut series = 0.0;
                let mut j = 1u64;
                loop {
                    series += law.pmf(j) * f.powi(j as i32);
                    // remaining terms are below pmf tail * f^j
                    if 1.0 - law.cdf(j as f64) < 1e-14 {
                        break;
                    }
                    j += 1;
                }
                assert!(
                    (q.cdf(x) - series).abs() < 1e-12,
                    "n={n} x={x}: {} vs {series}",
                    q.cdf(x)
                );
            }
        }
    }

    #[test]
    fn conditioning_pushes_the_maximum_up() {
        let sched = critical_geometric(10);
        let q = MaxFamilyQuery::new(&sched, 6).unwrap();
        for k in 0..20 {
            let x = k as f64;
            assert!(q.cdf(x) <= q.offspring().cdf(x) + 1e-15);
            // step function: constant on [k, k+1), right-continuous
            assert_eq!(q.cdf(x), q.cdf(x + 0.999));
        }
    }

    #[test]
    fn limit_case_reference_values() {
        // tail_coef = 0 collapses to the plain cdf limit
        let lim = MaxFamilyLimit::Stable {
            a: 0.6,
            p: 0.4,
            tail_coef: 0.0,
        };
        for k in 0..10 {
            let x = k as f64;
            let f = 1.0 - 0.6 * 0.6f64.powi(k);
            assert!((lim.cdf(x) - f).abs() < 1e-14);
        }

        let lim = MaxFamilyLimit::Growing { alpha: 0.0, p: 0.5 };
        assert!((lim.cdf(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(lim.cdf(-0.2), 0.0);
    }

    #[test]
    fn growing_limit_is_the_stable_limit_at_vanishing_a() {
        // with aB pinned to e^alpha, letting a -> 0 sends Stable -> Growing
        let alpha = 0.7f64;
        let a = 1e-9;
        let stable = MaxFamilyLimit::Stable {
            a,
            p: 0.35,
            tail_coef: alpha.exp() / a,
        };
        let growing = MaxFamilyLimit::Growing { alpha, p: 0.35 };
        for k in 0..30 {
            let x = k as f64 / 2.0;
            assert!(
                (stable.cdf(x) - growing.cdf(x)).abs() < 1e-8,
                "x={x}: {} vs {}",
                stable.cdf(x),
                growing.cdf(x)
            );
        }
    }

    #[test]
    fn subcritical_bd_heads_to_stable_limit() {
        // birth 1, death 2, unit sampling times: B_n -> 1, p constant,
        // a constant; the conditional law converges to the Stable shape
        let times: Vec<f64> = (1..=40).map(|n| n as f64).collect();
        let spec = ScenarioSpec::BirthDeath {
            birth_rate: 1.0,
            death_rate: 2.0,
            times,
        };
        let sched = spec.offspring_schedule(40).unwrap();
        let g1 = *sched.generation(1).unwrap();
        let lim = MaxFamilyLimit::Stable {
            a: g1.a(),
            p: g1.p(),
            tail_coef: 1.0,
        };
        let dist = |n: usize| -> f64 {
            let q = MaxFamilyQuery::new(&sched, n).unwrap();
            let mut worst = 0.0f64;
            for k in 0..15 {
                let x = k as f64;
                worst = worst.max((q.cdf(x) - lim.cdf(x)).abs());
            }
            worst
        };
        assert!(dist(40) < dist(10), "{} !< {}", dist(40), dist(10));
        assert!(dist(40) < 1e-12);
    }

    #[test]
    fn centered_law_approaches_logistic_on_equal_rates_squares() {
        // birth = death = 1, t_n = n^2: B_{n-1} -> inf, p_n -> 0, and the
        // centered conditional law approaches the standard logistic
        let times: Vec<f64> = (1..=45).map(|n| (n * n) as f64).collect();
        let spec = ScenarioSpec::BirthDeath {
            birth_rate: 1.0,
            death_rate: 1.0,
            times,
        };
        let sched = spec.offspring_schedule(45).unwrap();
        let law = LimitLaw::LogisticShift { shift: 0.0 };
        let grid = GridSpec::default();
        let dist = |n: usize| -> f64 {
            let q = MaxFamilyQuery::new(&sched, n).unwrap();
            sup_distance(|x| q.centered_cdf(x), &law, &grid).unwrap()
        };
        let (d10, d44) = (dist(10), dist(44));
        assert!(d44 < d10, "{d44} !< {d10}");
        // L(0) = 0.5 is approached at the median
        let q = MaxFamilyQuery::new(&sched, 44).unwrap();
        assert!((q.centered_cdf(0.0) - 0.5).abs() < 0.15);
    }

    #[test]
    fn scaled_law_with_geometric_times_approaches_shifted_logistic() {
        // t_{n-1}/t_n -> tau = 2/3 gives a_n B_{n-1} -> tau/(1-tau) = 2,
        // so alpha = log 2 and p_n M_n tends to (V + alpha)^+ whose cdf is
        // L(x - alpha) on x >= 0
        let tau: f64 = 2.0 / 3.0;
        let times: Vec<f64> = (1..=60).map(|n| (1.0 / tau).powi(n)).collect();
        let spec = ScenarioSpec::BirthDeath {
            birth_rate: 1.0,
            death_rate: 1.0,
            times,
        };
        let sched = spec.offspring_schedule(60).unwrap();
        let alpha = 2.0f64.ln();
        let q = MaxFamilyQuery::new(&sched, 58).unwrap();
        assert!((q.alpha_star().unwrap() - alpha).abs() < 0.01);
        let limit = |x: f64| {
            if x < 0.0 {
                0.0
            } else {
                logistic_cdf(x - alpha)
            }
        };
        let dist_58: f64 = (0..40)
            .map(|i| {
                let x = i as f64 * 0.25;
                (q.scaled_cdf(x) - limit(x)).abs()
            })
            .fold(0.0, f64::max);
        let q10 = MaxFamilyQuery::new(&sched, 10).unwrap();
        let dist_10: f64 = (0..40)
            .map(|i| {
                let x = i as f64 * 0.25;
                (q10.scaled_cdf(x) - limit(x)).abs()
            })
            .fold(0.0, f64::max);
        assert!(dist_58 < dist_10, "{dist_58} !< {dist_10}");
    }

    #[test]
    fn band_reference_values() {
        let p = 1.0 - (-1.0f64).exp(); // gamma = 1
        let (lo, hi) = logistic_oscillation_band(p, 0.0);
        assert!((lo - 1.0 / (1.0 + core::f64::consts::E)).abs() < 1e-12);
        assert!((hi - 0.5).abs() < 1e-12);
        let (lo, hi) = logistic_oscillation_band(0.5, 60.0);
        assert!(lo > 1.0 - 1e-9 && hi > 1.0 - 1e-9);
    }

    #[test]
    fn mc_validates_inputs_and_conditions_correctly() {
        let sched = critical_geometric(5);
        assert!(matches!(
            mc_maxfam(&sched, 5, 100, 1),
            Err(MaxFamilyError::TooFewPaths { paths: 100 })
        ));

        // no-extinction schedule retains every path
        let sched = OffspringSchedule::constant(ZmgParams::new(1.0, 0.5).unwrap(), 3).unwrap();
        let mc = mc_maxfam(&sched, 3, 1_000, 7).unwrap();
        assert_eq!(mc.retained, 1_000);

        // fixed seed, identical empirical cdf
        let sched = critical_geometric(5);
        let a = mc_maxfam(&sched, 5, 2_000, 42).unwrap();
        let b = mc_maxfam(&sched, 5, 2_000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mc_agrees_with_closed_form_at_desk_scale() {
        let sched = critical_geometric(5);
        let n = 5;
        let mc = mc_maxfam(&sched, n, 50_000, 2024).unwrap();
        let q = MaxFamilyQuery::new(&sched, n).unwrap();
        let d = ks_distance(&mc.empirical, |x| q.cdf(x));
        let crit = ks_critical(KsLevel::OnePercent, mc.retained);
        assert!(d < crit, "KS {d} vs critical {crit} (retained {})", mc.retained);
    }

    #[test]
    fn too_few_survivors_is_reported() {
        // heavily subcritical: survival to generation 9 is ~1e-4
        let sched =
            OffspringSchedule::constant(ZmgParams::new(0.2, 0.6).unwrap(), 10).unwrap();
        match mc_maxfam(&sched, 10, 1_000, 3) {
            Err(MaxFamilyError::TooFewSurvivors { retained, requested }) => {
                assert_eq!(requested, 1_000);
                assert!(retained < 100);
            }
            other => panic!("expected survivor shortfall, got {other:?}"),
        }
    }
}
