//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible under `cargo test -- --nocapture`; captured output is
//! replayed on failure). Convergence criteria carry regression constants
//! frozen from the first run of this implementation; they guard against
//! regressions, not against the (rate-free) limit statements themselves.

mod common;

use std::time::Instant;

use common::ExtremaOracle;
use zmx_core::asymptotics::{
    gumbel_oscillation_band, large_deviation_ratio, normalized_max_cdf, normalized_min_cdf,
    sup_distance, GridSpec, LimitLaw, Normalizers,
};
use zmx_core::branching::{aggregates_iter, pgf_eval, ConditionedLaw, OffspringSchedule};
use zmx_core::maxfamily::{logistic_oscillation_band, mc_maxfam, MaxFamilyQuery};
use zmx_core::montecarlo::{ks_critical, ks_distance, KsLevel};
use zmx_core::numeric::{gumbel_cdf, gumbel_quantile, logistic_quantile};
use zmx_core::rng::StreamRng;
use zmx_core::scenarios::{bd_crosscheck, bd_schedule, ScenarioSpec, TableRow};
use zmx_core::{RowParams, ZmgParams};

struct Criterion {
    name: &'static str,
    started: Instant,
    limit_s: f64,
    failures: Vec<String>,
}

impl Criterion {
    fn start(name: &'static str, limit_s: f64) -> Self {
        Self {
            name,
            started: Instant::now(),
            limit_s,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(detail());
        }
    }

    fn finish(self) {
        let elapsed = self.started.elapsed().as_secs_f64();
        let in_time = elapsed <= self.limit_s;
        let ok = self.failures.is_empty() && in_time;
        println!(
            "[acceptance] {}: {} ({elapsed:.2}s / limit {}s)",
            self.name,
            if ok { "PASS" } else { "FAIL" },
            self.limit_s
        );
        if !in_time {
            panic!("{}: exceeded runtime limit ({elapsed:.2}s)", self.name);
        }
        if !self.failures.is_empty() {
            panic!("{}: {} failures, first: {}", self.name, self.failures.len(), self.failures[0]);
        }
    }
}

fn row(nu: u64, a: f64, p: f64) -> RowParams {
    RowParams::new(nu, ZmgParams::new(a, p).unwrap()).unwrap()
}

#[test]
fn criterion_01_exact_law_oracle_equivalence() {
    let mut c = Criterion::start("1 exact-law oracle equivalence", 10.0);
    const CAP: usize = 40;
    let a_grid = [0.1, 0.3, 0.5, 0.7, 0.9];
    // p >= 0.5 keeps the truncated-tail correction of the enumeration
    // below 5e-12, so the 1e-10 comparison is meaningful for the range too
    let p_grid = [0.5, 0.6, 0.7, 0.8, 0.9];
    for &a in &a_grid {
        for &p in &p_grid {
            for nu in 1..=6u64 {
                let oracle = ExtremaOracle::build(nu, a, p, CAP);
                let r = row(nu, a, p);
                for k in 0..=CAP {
                    let x = k as f64;
                    c.check((r.max_cdf(x) - oracle.max_cdf(k)).abs() < 1e-10, || {
                        format!("max nu={nu} a={a} p={p} k={k}")
                    });
                    c.check((r.min_cdf(x) - oracle.min_cdf(k)).abs() < 1e-10, || {
                        format!("min nu={nu} a={a} p={p} k={k}")
                    });
                    let range = r.range_cdf(k as u64, 1e-12).unwrap();
                    c.check(
                        (range - oracle.range_cdf_restricted(k)).abs() < 1e-10,
                        || format!("range nu={nu} a={a} p={p} r={k}"),
                    );
                }
                for x in (0..=CAP).step_by(5) {
                    for y in (0..=CAP).step_by(5) {
                        c.check(
                            (r.joint_cdf(x as f64, y as f64) - oracle.joint_cdf(x, y)).abs()
                                < 1e-10,
                            || format!("joint nu={nu} a={a} p={p} x={x} y={y}"),
                        );
                    }
                }
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_02_branching_identity_suite() {
    let mut c = Criterion::start("2 branching identity suite", 5.0);
    let mut rng = StreamRng::new(20_2020, 0);
    for schedule_idx in 0..20 {
        let params: Vec<ZmgParams> = (0..12)
            .map(|_| {
                let a = 0.05 + 0.95 * rng.next_f64();
                let p = 0.05 + 0.90 * rng.next_f64();
                ZmgParams::new(a, p).unwrap()
            })
            .collect();
        let sched = OffspringSchedule::new(params).unwrap();

        for agg in aggregates_iter(&sched) {
            let m = agg.log_mean_product.exp();
            let lhs = 1.0 + agg.composed_tail_coef - agg.composed_zero_coef;
            c.check((lhs - m).abs() <= 1e-9 * m.max(1.0), || {
                format!("identity schedule={schedule_idx} n={}: {lhs} vs {m}", agg.n)
            });
        }

        for n in 1..=12usize {
            for &s in &[0.0, 0.3, 0.5, 0.9, 1.0] {
                let closed = pgf_eval(&sched, n, s).unwrap();
                let composed = {
                    let mut x = s;
                    for law in sched.as_slice()[..n].iter().rev() {
                        let p = law.p();
                        let m = law.a() / p;
                        let r = 1.0 / p - 1.0;
                        let big_r = 1.0 / p - m;
                        x = ((1.0 - x) * big_r + x) / ((1.0 - x) * r + 1.0);
                    }
                    x
                };
                c.check((closed - composed).abs() < 1e-12, || {
                    format!("pgf schedule={schedule_idx} n={n} s={s}: {closed} vs {composed}")
                });
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_03_critical_geometric_closed_form() {
    let mut c = Criterion::start("3 critical geometric closed form", 1.0);
    let sched =
        OffspringSchedule::constant(ZmgParams::new(0.5, 0.5).unwrap(), 10_000).unwrap();
    for agg in aggregates_iter(&sched) {
        let n = agg.n as f64;
        let expected = 1.0 / (1.0 + n);
        c.check(
            (agg.survival - expected).abs() <= 1e-12 * expected.max(1e-12),
            || format!("survival n={}: {} vs {expected}", agg.n, agg.survival),
        );
        let law = ConditionedLaw::new(agg.composed_tail_coef).unwrap();
        c.check(
            (law.mean() - (1.0 + n)).abs() <= 1e-9 * (1.0 + n),
            || format!("conditioned mean n={}: {}", agg.n, law.mean()),
        );
    }
    c.finish();
}

#[test]
fn criterion_04_gumbel_convergence_trend() {
    let mut c = Criterion::start("4 scaled-max convergence to Gumbel", 30.0);
    let spec = ScenarioSpec::Power {
        alpha: 0.0,
        delta: 0.5,
        gamma: 1.0,
        zeta: 1.5,
        nu_base: 2.0,
    };
    let indices = [10u32, 15, 20, 25, 30, 35, 40];
    let rows = spec.generate_rows(&indices).unwrap();
    let law = LimitLaw::GumbelShift { shift: 0.0 };
    let grid = GridSpec::default();
    let distances: Vec<f64> = rows
        .iter()
        .map(|r| sup_distance(|x| normalized_max_cdf(r, x), &law, &grid).unwrap())
        .collect();

    c.check(
        distances[6] < distances[0],
        || format!("no overall decrease: {:?}", distances),
    );
    let decreasing_steps = distances.windows(2).filter(|w| w[1] < w[0]).count();
    c.check(decreasing_steps >= 5, || {
        format!("only {decreasing_steps}/6 steps decreasing: {distances:?}")
    });

    // regression constants frozen from the first run (±30%)
    let pinned = [
        2.5432e-4, 8.0187e-6, 2.5227e-7, 7.8962e-9, 2.4686e-10, 7.7152e-12, 2.4127e-13,
    ];
    for (i, (&d, &pin)) in distances.iter().zip(pinned.iter()).enumerate() {
        c.check((d / pin - 1.0).abs() < 0.3, || {
            format!("checkpoint {i}: {d:e} drifted from pinned {pin:e}")
        });
    }
    c.finish();
}

/// Rows with `beta_n = 1` exactly and `nu_n p_n = 2^{-n} -> 0`.
fn shifted_exponential_scenario() -> ScenarioSpec {
    let rows: Vec<TableRow> = (1..=16)
        .map(|n| TableRow {
            nu: 1u64 << n,
            a: (-((2.0f64).powi(-n))).exp(),
            p: (4.0f64).powi(-n),
        })
        .collect();
    ScenarioSpec::Table { rows }
}

#[test]
fn criterion_05_min_and_joint_convergence() {
    let mut c = Criterion::start("5 scaled-min and joint convergence", 30.0);
    let indices = [4u32, 6, 8, 10, 12, 14, 16];
    let rows = shifted_exponential_scenario().generate_rows(&indices).unwrap();
    let exp_law = LimitLaw::ShiftedExpPositivePart { beta: 1.0 };
    let grid = GridSpec::default();

    let min_distances: Vec<f64> = rows
        .iter()
        .map(|r| sup_distance(|y| normalized_min_cdf(r, y), &exp_law, &grid).unwrap())
        .collect();
    c.check(
        min_distances[6] < min_distances[0],
        || format!("min distances not shrinking: {min_distances:?}"),
    );
    c.check(
        (min_distances[0] / 9.3806e-3 - 1.0).abs() < 0.3
            && (min_distances[6] / 2.5713e-6 - 1.0).abs() < 0.3,
        || format!("min regression drift: {min_distances:?}"),
    );

    // joint law of (p M - log nu, nu p min) against the product of limits
    let gumbel = LimitLaw::GumbelShift { shift: 0.0 };
    let xs = grid.points(&gumbel);
    let ys = grid.points(&exp_law);
    let joint_distances: Vec<f64> = rows
        .iter()
        .map(|r| {
            let nuf = r.nu() as f64;
            let p = r.zmg().p();
            let mut worst = 0.0f64;
            for &x in &xs {
                for &y in &ys {
                    let exact = r.joint_cdf((x + nuf.ln()) / p, y / (nuf * p));
                    let limit = gumbel_cdf(x) * exp_law.cdf(y);
                    worst = worst.max((exact - limit).abs());
                }
            }
            worst
        })
        .collect();
    c.check(
        joint_distances[6] < joint_distances[0],
        || format!("joint distances not shrinking: {joint_distances:?}"),
    );
    c.check(
        (joint_distances[0] / 1.8032e-2 - 1.0).abs() < 0.3
            && (joint_distances[6] / 4.2793e-6 - 1.0).abs() < 0.3,
        || format!("joint regression drift: {joint_distances:?}"),
    );
    c.finish();
}

#[test]
fn criterion_06_large_deviation_ratio_trend() {
    let mut c = Criterion::start("6 large-deviation ratio trend", 10.0);
    // log-power success parameters with zeta = 0.5: alpha_n p_n -> inf,
    // the regime where the ratio tends to -1/2
    let spec = ScenarioSpec::LogPower {
        alpha: 0.0,
        delta: 0.5,
        coefficient: 1.0,
        zeta: 0.5,
        nu_base: 2.0,
    };
    let indices = [10u32, 15, 20, 25, 30, 35, 40];
    let rows = spec.generate_rows(&indices).unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| large_deviation_ratio(r, 0.0)).collect();
    let gaps: Vec<f64> = ratios.iter().map(|v| (v + 0.5).abs()).collect();

    c.check(gaps[6] < gaps[0], || format!("gap not shrinking: {gaps:?}"));
    // The march toward -1/2 carries a floor-phase wobble (the fractional
    // part of x_n re-enters the exact law), so per-step monotonicity holds
    // at 5 of 6 steps on the pinned run; require at least 4.
    let decreasing_steps = gaps.windows(2).filter(|w| w[1] < w[0]).count();
    c.check(decreasing_steps >= 4, || {
        format!("only {decreasing_steps}/6 gap steps decreasing: {gaps:?}")
    });

    // regression constants frozen from the first run (±0.02 absolute)
    let pinned = [
        -0.792483, -0.601756, -0.583590, -0.657814, -0.605005, -0.567519, -0.544802,
    ];
    for (i, (&r, &pin)) in ratios.iter().zip(pinned.iter()).enumerate() {
        c.check((r - pin).abs() < 0.02, || {
            format!("checkpoint {i}: ratio {r} drifted from pinned {pin}")
        });
    }
    c.finish();
}

#[test]
fn criterion_07_birth_death_crosscheck() {
    let mut c = Criterion::start("7 birth-death closed forms vs recurrences", 1.0);
    let times: Vec<f64> = (1..=50).map(|n| n as f64).collect();
    for &(birth, death) in &[(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)] {
        let worst = bd_crosscheck(birth, death, &times).unwrap();
        c.check(worst < 1e-8, || {
            format!("({birth},{death}): discrepancy {worst:e}")
        });
    }
    c.finish();
}

#[test]
fn criterion_08_max_family_law_exact_and_mc() {
    let mut c = Criterion::start("8 max-family law: series identity and Monte Carlo", 120.0);
    let sched =
        OffspringSchedule::constant(ZmgParams::new(0.5, 0.5).unwrap(), 20).unwrap();

    // closed form vs conditioned-pmf series, n <= 20
    for n in 1..=20usize {
        let q = MaxFamilyQuery::new(&sched, n).unwrap();
        let law = ConditionedLaw::new(q.prev_tail_coef()).unwrap();
        for k in 0..15 {
            let x = k as f64;
            let f = q.offspring().cdf(x);
            let mut series = 0.0;
            let mut j = 1u64;
            loop {
                series += law.pmf(j) * f.powi(j as i32);
                if 1.0 - law.cdf(j as f64) < 1e-14 {
                    break;
                }
                j += 1;
            }
            c.check((q.cdf(x) - series).abs() < 1e-12, || {
                format!("series n={n} x={x}: {} vs {series}", q.cdf(x))
            });
        }
    }

    // Monte Carlo: 10^6 seeded paths, KS at the 1% level
    let n = 5;
    let mc = mc_maxfam(&sched, n, 1_000_000, 0x5eed_2024).unwrap();
    let q = MaxFamilyQuery::new(&sched, n).unwrap();
    let d = ks_distance(&mc.empirical, |x| q.cdf(x));
    let crit = ks_critical(KsLevel::OnePercent, mc.retained);
    c.check(d < crit, || {
        format!("KS {d} vs critical {crit} (retained {})", mc.retained)
    });
    c.finish();
}

#[test]
fn criterion_09_band_sweeps() {
    let mut c = Criterion::start("9 oscillation band sweeps", 20.0);
    let grid = GridSpec::default();
    let gamma = core::f64::consts::LN_2; // -log(1-p) with p = 0.5

    // constant-p triangular rows: nu = 2^n, a = 0.5, p = 0.5
    for n in 10..=60u32 {
        let r = row(1u64 << n, 0.5, 0.5);
        let center = Normalizers::from_row(&r).center;
        for &q in &grid.quantile_levels {
            let x = gumbel_quantile(q) / gamma;
            let exact = r.max_cdf(x + center);
            let (lo, hi) = gumbel_oscillation_band(0.5, x);
            c.check(
                exact >= lo - 1e-3 && exact <= hi + 1e-3,
                || format!("max band n={n} q={q}: {exact} outside [{lo}, {hi}]"),
            );
        }
    }

    // sampled birth-death chain with equal rates and unit gaps shifted far
    // out (B_{n-1} ~ 2000) so the conditional law sits inside the band
    let times: Vec<f64> = (1..=60).map(|n| 2000.0 + n as f64).collect();
    let gens = bd_schedule(1.0, 1.0, &times).unwrap();
    for n in 10..=60usize {
        let g = &gens[n - 1];
        let b_prev = gens[n - 2].composed_tail_coef;
        let q = MaxFamilyQuery::from_parts(n, ZmgParams::new(g.a, g.p).unwrap(), b_prev);
        let alpha_star = q.alpha_star().unwrap();
        let center = -alpha_star / (-g.p).ln_1p();
        for &level in &grid.quantile_levels {
            let x = logistic_quantile(level) / gamma;
            let exact = q.cdf(x + center);
            let (lo, hi) = logistic_oscillation_band(0.5, x);
            c.check(
                exact >= lo - 1e-3 && exact <= hi + 1e-3,
                || format!("maxfam band n={n} level={level}: {exact} outside [{lo}, {hi}]"),
            );
        }
    }
    c.finish();
}
