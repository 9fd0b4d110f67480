//! The experiment drivers: each turns a validated configuration into one
//! detail table plus optional summary/Monte Carlo tables. Schemas are
//! fixed per experiment and pinned by golden-file tests.

use zmx_core::asymptotics::{
    classify_regimes, gumbel_oscillation_band, large_deviation_ratio, normalized_max_cdf,
    normalized_min_cdf, GridSpec, LimitLaw, Normalizers, RegimeFinding, Trend,
};
use zmx_core::branching::{aggregates, aggregates_iter, BranchingError, ConditionedLaw};
use zmx_core::extremes::RowParams;
use zmx_core::maxfamily::{
    logistic_oscillation_band, maxfam_path_sample, MaxFamilyError, MaxFamilyLimit, MaxFamilyQuery,
};
use zmx_core::montecarlo::{ks_critical, ks_distance, EmpiricalCdf, KsLevel};
use zmx_core::numeric::{gumbel_quantile, logistic_quantile};
use zmx_core::rng::StreamRng;
use zmx_core::scenarios::bd_schedule;
use zmx_core::zmg::ZmgParams;

use crate::config::{Experiment, RunConfig, ScenarioConfig};
use crate::error::CliError;
use crate::output::{format_float, Table};
use crate::workers::collect_indexed;

/// One rendered table plus the filename suffix it lands under.
pub struct OutputTable {
    pub suffix: &'static str,
    pub table: Table,
    pub extra_header: Vec<(String, String)>,
}

impl OutputTable {
    fn detail(table: Table) -> Self {
        Self {
            suffix: "",
            table,
            extra_header: Vec::new(),
        }
    }

    fn summary(table: Table) -> Self {
        Self {
            suffix: "_summary",
            table,
            extra_header: Vec::new(),
        }
    }
}

pub fn run_experiment(
    cfg: &RunConfig,
    seed: u64,
    workers: usize,
) -> Result<Vec<OutputTable>, CliError> {
    match cfg.experiment {
        Experiment::MaxLimit => max_limit(cfg),
        Experiment::MinLimit => min_limit(cfg),
        Experiment::Joint => joint(cfg),
        Experiment::Range => range(cfg),
        Experiment::BandSweep => band_sweep(cfg),
        Experiment::BranchingSurvival => branching_survival(cfg),
        Experiment::ConditionedLaw => conditioned_law(cfg),
        Experiment::MaxfamLimit => maxfam_limit(cfg, seed, workers),
        Experiment::LargeDeviation => large_deviation(cfg),
        Experiment::Regimes => regimes(cfg),
    }
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::validation(e.to_string())
}

fn scenario_rows(cfg: &RunConfig) -> Result<(Vec<u32>, Vec<RowParams>), CliError> {
    let indices = cfg.sweep.resolve_indices()?;
    let rows = cfg
        .scenario
        .to_spec()
        .generate_rows(&indices)
        .map_err(validation)?;
    Ok((indices, rows))
}

fn grid_points(grid: &GridSpec, law: &LimitLaw) -> Result<Vec<f64>, CliError> {
    let pts = grid.points(law);
    if pts.is_empty() {
        Err(CliError::validation("grid resolves to no points"))
    } else {
        Ok(pts)
    }
}

fn branching_error(e: BranchingError) -> CliError {
    match e {
        BranchingError::MeanProductOverflow { .. } => CliError::overflow(e.to_string()),
        other => CliError::validation(other.to_string()),
    }
}

fn maxfam_error(e: MaxFamilyError) -> CliError {
    match e {
        MaxFamilyError::Branching(inner) => branching_error(inner),
        MaxFamilyError::TooFewSurvivors { .. } | MaxFamilyError::TooFewPaths { .. } => {
            CliError::insufficient_survivors(e.to_string())
        }
        MaxFamilyError::PopulationCapExceeded { .. } => CliError::overflow(e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// row-extrema experiments
// ---------------------------------------------------------------------------

fn max_limit(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let (indices, rows) = scenario_rows(cfg)?;
    let law = LimitLaw::GumbelShift {
        shift: cfg.params.gumbel_shift,
    };
    let points = grid_points(&cfg.grid.to_grid(), &law)?;

    let mut detail = Table::new(vec![
        "n", "nu", "a", "p", "alpha_n", "x", "exact_cdf", "limit_cdf", "abs_diff",
    ]);
    let mut summary = Table::new(vec!["n", "sup_distance"]);
    for (&n, row) in indices.iter().zip(rows.iter()) {
        let norm = Normalizers::from_row(row);
        let mut sup = 0.0f64;
        for &x in &points {
            let exact = normalized_max_cdf(row, x);
            let limit = law.cdf(x);
            let diff = (exact - limit).abs();
            sup = sup.max(diff);
            detail.push(vec![
                u64::from(n).into(),
                row.nu().into(),
                row.zmg().a().into(),
                row.zmg().p().into(),
                norm.alpha.into(),
                x.into(),
                exact.into(),
                limit.into(),
                diff.into(),
            ]);
        }
        summary.push(vec![u64::from(n).into(), sup.into()]);
    }
    Ok(vec![OutputTable::detail(detail), OutputTable::summary(summary)])
}

/// `beta` of the exponential reference law: explicit override or the
/// `beta_n` of the last swept row.
fn resolve_beta(cfg: &RunConfig, rows: &[RowParams]) -> f64 {
    cfg.params
        .beta
        .unwrap_or_else(|| Normalizers::from_row(rows.last().expect("rows nonempty")).beta)
}

fn min_limit(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let (indices, rows) = scenario_rows(cfg)?;
    let beta = resolve_beta(cfg, &rows);
    let law = LimitLaw::ShiftedExpPositivePart { beta };
    let points = grid_points(&cfg.grid.to_grid(), &law)?;

    let mut detail = Table::new(vec![
        "n", "nu", "a", "p", "beta_n", "y", "exact_cdf", "limit_cdf", "abs_diff",
    ]);
    let mut summary = Table::new(vec!["n", "sup_distance"]);
    for (&n, row) in indices.iter().zip(rows.iter()) {
        let norm = Normalizers::from_row(row);
        let mut sup = 0.0f64;
        for &y in &points {
            let exact = normalized_min_cdf(row, y);
            let limit = law.cdf(y);
            let diff = (exact - limit).abs();
            sup = sup.max(diff);
            detail.push(vec![
                u64::from(n).into(),
                row.nu().into(),
                row.zmg().a().into(),
                row.zmg().p().into(),
                norm.beta.into(),
                y.into(),
                exact.into(),
                limit.into(),
                diff.into(),
            ]);
        }
        summary.push(vec![u64::from(n).into(), sup.into()]);
    }
    Ok(vec![OutputTable::detail(detail), OutputTable::summary(summary)])
}

fn joint(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let (indices, rows) = scenario_rows(cfg)?;
    let beta = resolve_beta(cfg, &rows);
    let max_law = LimitLaw::GumbelShift {
        shift: cfg.params.gumbel_shift,
    };
    let min_law = LimitLaw::ShiftedExpPositivePart { beta };
    let grid = cfg.grid.to_grid();
    let xs = grid_points(&grid, &max_law)?;
    let ys = grid_points(&grid, &min_law)?;

    let mut detail = Table::new(vec![
        "n", "nu", "a", "p", "x", "y", "exact_cdf", "limit_product", "abs_diff",
    ]);
    let mut summary = Table::new(vec!["n", "sup_distance"]);
    for (&n, row) in indices.iter().zip(rows.iter()) {
        let nuf = row.nu() as f64;
        let p = row.zmg().p();
        let mut sup = 0.0f64;
        for &x in &xs {
            for &y in &ys {
                let exact = row.joint_cdf((x + nuf.ln()) / p, y / (nuf * p));
                let limit = max_law.cdf(x) * min_law.cdf(y);
                let diff = (exact - limit).abs();
                sup = sup.max(diff);
                detail.push(vec![
                    u64::from(n).into(),
                    row.nu().into(),
                    row.zmg().a().into(),
                    p.into(),
                    x.into(),
                    y.into(),
                    exact.into(),
                    limit.into(),
                    diff.into(),
                ]);
            }
        }
        summary.push(vec![u64::from(n).into(), sup.into()]);
    }
    Ok(vec![OutputTable::detail(detail), OutputTable::summary(summary)])
}

/// Row cap for the exact range law: past this the truncated sums stop
/// being desk-scale work.
const RANGE_NU_LIMIT: u64 = 10_000_000;

fn range(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let (indices, rows) = scenario_rows(cfg)?;
    if let Some(row) = rows.iter().find(|r| r.nu() > RANGE_NU_LIMIT) {
        return Err(CliError::validation(format!(
            "range experiment supports nu <= {RANGE_NU_LIMIT}, got {}",
            row.nu()
        )));
    }
    let law = LimitLaw::GumbelShift {
        shift: cfg.params.gumbel_shift,
    };

    let mut detail = Table::new(vec![
        "n", "nu", "a", "p", "r", "exact_cdf", "limit_cdf", "abs_diff",
    ]);
    let mut summary = Table::new(vec!["n", "sup_distance"]);
    for (&n, row) in indices.iter().zip(rows.iter()) {
        let norm = Normalizers::from_row(row);
        let p = row.zmg().p();
        let mut sup = 0.0f64;
        for r in 0..=cfg.params.range_max {
            let exact = row.range_cdf(r, cfg.params.tail_tol).map_err(validation)?;
            // the range obeys the same limit as the maximum
            let limit = law.cdf(p * r as f64 - norm.alpha);
            let diff = (exact - limit).abs();
            sup = sup.max(diff);
            detail.push(vec![
                u64::from(n).into(),
                row.nu().into(),
                row.zmg().a().into(),
                p.into(),
                r.into(),
                exact.into(),
                limit.into(),
                diff.into(),
            ]);
        }
        summary.push(vec![u64::from(n).into(), sup.into()]);
    }
    Ok(vec![OutputTable::detail(detail), OutputTable::summary(summary)])
}

// ---------------------------------------------------------------------------
// band sweep
// ---------------------------------------------------------------------------

fn band_sweep(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let mut detail = Table::new(vec![
        "n", "scale", "a", "p", "center", "x", "exact_cdf", "band_low", "band_high", "violation",
    ]);
    let mut summary = Table::new(vec!["n", "max_violation"]);
    let levels = &cfg.grid.quantiles;

    if let ScenarioConfig::BirthDeath {
        birth_rate,
        death_rate,
        times,
    } = &cfg.scenario
    {
        // conditional max-family flavor: logistic band around the centered
        // law, with B_{n-1} in the role of the row count
        let indices = cfg.sweep.resolve_indices()?;
        let gens = bd_schedule(*birth_rate, *death_rate, times).map_err(validation)?;
        let p_lim = gens.last().expect("times nonempty").p;
        let gamma = -(-p_lim).ln_1p();
        for &n in &indices {
            let n = n as usize;
            if n < 2 || n > gens.len() {
                return Err(CliError::validation(format!(
                    "band-sweep over a birth-death scenario needs 2 <= n <= {}, got {n}",
                    gens.len()
                )));
            }
            let g = &gens[n - 1];
            let b_prev = gens[n - 2].composed_tail_coef;
            let query = MaxFamilyQuery::from_parts(
                n,
                ZmgParams::new(g.a, g.p).map_err(validation)?,
                b_prev,
            );
            let alpha_star = query.alpha_star().ok_or_else(|| {
                CliError::validation(format!("B_{} = 0: centered law undefined", n - 1))
            })?;
            let center = -alpha_star / (-g.p).ln_1p();
            let mut worst = 0.0f64;
            for &q in levels {
                let x = logistic_quantile(q) / gamma;
                let exact = query.cdf(x + center);
                let (lo, hi) = logistic_oscillation_band(p_lim, x);
                let violation = (lo - exact).max(exact - hi).max(0.0);
                worst = worst.max(violation);
                detail.push(vec![
                    (n as u64).into(),
                    b_prev.into(),
                    g.a.into(),
                    g.p.into(),
                    center.into(),
                    x.into(),
                    exact.into(),
                    lo.into(),
                    hi.into(),
                    violation.into(),
                ]);
            }
            summary.push(vec![(n as u64).into(), worst.into()]);
        }
    } else {
        // triangular-row flavor: Gumbel band around the centered maximum
        let (indices, rows) = scenario_rows(cfg)?;
        let p_lim = rows.last().expect("rows nonempty").zmg().p();
        let gamma = -(-p_lim).ln_1p();
        for (&n, row) in indices.iter().zip(rows.iter()) {
            let center = Normalizers::from_row(row).center;
            let mut worst = 0.0f64;
            for &q in levels {
                let x = gumbel_quantile(q) / gamma;
                let exact = row.max_cdf(x + center);
                let (lo, hi) = gumbel_oscillation_band(p_lim, x);
                let violation = (lo - exact).max(exact - hi).max(0.0);
                worst = worst.max(violation);
                detail.push(vec![
                    u64::from(n).into(),
                    (row.nu() as f64).into(),
                    row.zmg().a().into(),
                    row.zmg().p().into(),
                    center.into(),
                    x.into(),
                    exact.into(),
                    lo.into(),
                    hi.into(),
                    violation.into(),
                ]);
            }
            summary.push(vec![u64::from(n).into(), worst.into()]);
        }
    }
    Ok(vec![OutputTable::detail(detail), OutputTable::summary(summary)])
}

// ---------------------------------------------------------------------------
// branching experiments
// ---------------------------------------------------------------------------

fn branching_survival(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let horizon = cfg.sweep.resolve_horizon()?;
    let schedule = cfg
        .scenario
        .to_spec()
        .offspring_schedule(horizon)
        .map_err(validation)?;

    let mut detail = Table::new(vec![
        "n",
        "mean",
        "log_mean_product",
        "b_n",
        "survival",
        "log_survival",
        "extinction_prob",
    ]);
    for agg in aggregates_iter(&schedule).take(horizon) {
        if !agg.composed_tail_coef.is_finite() {
            return Err(CliError::overflow(format!(
                "B_n overflows f64 at generation {} (log M_n = {})",
                agg.n, agg.log_mean_product
            )));
        }
        detail.push(vec![
            agg.n.into(),
            agg.mean.into(),
            agg.log_mean_product.into(),
            agg.composed_tail_coef.into(),
            agg.survival.into(),
            agg.log_survival.into(),
            (1.0 - agg.survival).into(),
        ]);
    }
    Ok(vec![OutputTable::detail(detail)])
}

fn conditioned_law(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let indices = cfg.sweep.resolve_indices()?;
    let horizon = *indices.last().expect("indices nonempty") as usize;
    let schedule = cfg
        .scenario
        .to_spec()
        .offspring_schedule(horizon)
        .map_err(validation)?;

    let mut detail = Table::new(vec!["n", "b_n", "k", "pmf", "cdf"]);
    let mut summary = Table::new(vec!["n", "b_n", "mean"]);
    for &n in &indices {
        let agg = aggregates(&schedule, n as usize).map_err(branching_error)?;
        let law = ConditionedLaw::new(agg.composed_tail_coef).map_err(branching_error)?;
        for k in 1..=cfg.params.k_max {
            detail.push(vec![
                u64::from(n).into(),
                agg.composed_tail_coef.into(),
                k.into(),
                law.pmf(k).into(),
                law.cdf(k as f64).into(),
            ]);
        }
        summary.push(vec![
            u64::from(n).into(),
            agg.composed_tail_coef.into(),
            law.mean().into(),
        ]);
    }
    Ok(vec![OutputTable::detail(detail), OutputTable::summary(summary)])
}

fn maxfam_limit(cfg: &RunConfig, seed: u64, workers: usize) -> Result<Vec<OutputTable>, CliError> {
    let indices = cfg.sweep.resolve_indices()?;
    let horizon = *indices.last().expect("indices nonempty") as usize;
    let schedule = cfg
        .scenario
        .to_spec()
        .offspring_schedule(horizon)
        .map_err(validation)?;

    // reference law from the last swept generation (treated as converged)
    let last = MaxFamilyQuery::new(&schedule, horizon).map_err(maxfam_error)?;
    let limit = MaxFamilyLimit::Stable {
        a: last.offspring().a(),
        p: last.offspring().p(),
        tail_coef: last.prev_tail_coef(),
    };

    let mut detail = Table::new(vec![
        "n",
        "b_prev",
        "a",
        "p",
        "alpha_star",
        "x",
        "exact_cdf",
        "limit_cdf",
        "abs_diff",
    ]);
    let mut summary = Table::new(vec!["n", "sup_distance"]);
    for &n in &indices {
        let query = MaxFamilyQuery::new(&schedule, n as usize).map_err(maxfam_error)?;
        let alpha_star = query.alpha_star().unwrap_or(f64::NAN);
        let mut sup = 0.0f64;
        for k in 0..=cfg.params.x_max {
            let x = k as f64;
            let exact = query.cdf(x);
            let lim = limit.cdf(x);
            let diff = (exact - lim).abs();
            sup = sup.max(diff);
            detail.push(vec![
                u64::from(n).into(),
                query.prev_tail_coef().into(),
                query.offspring().a().into(),
                query.offspring().p().into(),
                alpha_star.into(),
                x.into(),
                exact.into(),
                lim.into(),
                diff.into(),
            ]);
        }
        summary.push(vec![u64::from(n).into(), sup.into()]);
    }
    let mut tables = vec![OutputTable::detail(detail), OutputTable::summary(summary)];

    if cfg.mc.paths > 0 {
        tables.push(maxfam_mc_table(cfg, &schedule, horizon, seed, workers)?);
    }
    Ok(tables)
}

fn maxfam_mc_table(
    cfg: &RunConfig,
    schedule: &zmx_core::branching::OffspringSchedule,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<OutputTable, CliError> {
    if cfg.mc.paths < 1_000 {
        return Err(CliError::validation(format!(
            "mc.paths = {} too small (need >= 1000)",
            cfg.mc.paths
        )));
    }
    // one stream per path: worker-count invariant by construction
    let draws = collect_indexed(cfg.mc.paths, workers, |stream| {
        let mut rng = StreamRng::new(seed, stream);
        maxfam_path_sample(schedule, n, &mut rng)
    });
    let mut kept = Vec::new();
    for draw in draws {
        if let Some(m) = draw.map_err(maxfam_error)? {
            kept.push(m as f64);
        }
    }
    let retained = kept.len() as u64;
    if retained < 100 {
        return Err(CliError::insufficient_survivors(format!(
            "only {retained} of {} paths survived the conditioning event",
            cfg.mc.paths
        )));
    }
    let empirical = EmpiricalCdf::from_values(kept).expect("retained >= 100");
    let query = MaxFamilyQuery::new(schedule, n).map_err(maxfam_error)?;
    let ks = ks_distance(&empirical, |x| query.cdf(x));
    let critical = ks_critical(KsLevel::OnePercent, retained);

    let mut table = Table::new(vec!["x", "empirical_cdf", "exact_cdf", "abs_diff"]);
    for k in 0..=cfg.params.x_max {
        let x = k as f64;
        let emp = empirical.eval(x);
        let exact = query.cdf(x);
        table.push(vec![
            x.into(),
            emp.into(),
            exact.into(),
            (emp - exact).abs().into(),
        ]);
    }
    Ok(OutputTable {
        suffix: "_mc",
        table,
        extra_header: vec![
            ("generation".into(), n.to_string()),
            ("paths".into(), cfg.mc.paths.to_string()),
            ("retained".into(), retained.to_string()),
            ("ks_distance".into(), format_float(ks)),
            ("ks_critical_1pct".into(), format_float(critical)),
        ],
    })
}

// ---------------------------------------------------------------------------
// diagnostics experiments
// ---------------------------------------------------------------------------

fn large_deviation(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let (indices, rows) = scenario_rows(cfg)?;
    let x = cfg.params.ld_x;

    let mut detail = Table::new(vec![
        "n", "nu", "a", "p", "alpha_n", "alpha_p", "x", "ratio",
    ]);
    let mut summary = Table::new(vec!["n", "ratio", "gap_to_limit"]);
    for (&n, row) in indices.iter().zip(rows.iter()) {
        let norm = Normalizers::from_row(row);
        if norm.alpha <= 0.0 {
            return Err(CliError::validation(format!(
                "large-deviation needs alpha_n > 0; index {n} gives {}",
                norm.alpha
            )));
        }
        let ratio = large_deviation_ratio(row, x);
        detail.push(vec![
            u64::from(n).into(),
            row.nu().into(),
            row.zmg().a().into(),
            row.zmg().p().into(),
            norm.alpha.into(),
            (norm.alpha * row.zmg().p()).into(),
            x.into(),
            ratio.into(),
        ]);
        summary.push(vec![
            u64::from(n).into(),
            ratio.into(),
            (ratio + 0.5).abs().into(),
        ]);
    }
    Ok(vec![OutputTable::detail(detail), OutputTable::summary(summary)])
}

fn trend_text(t: &Trend) -> String {
    match t {
        Trend::ToZero => "to-zero".to_string(),
        Trend::ToInfinity => "to-infinity".to_string(),
        Trend::ToMinusInfinity => "to-minus-infinity".to_string(),
        Trend::Constant(c) => format!("constant {}", format_float(*c)),
        Trend::Inconclusive => "inconclusive".to_string(),
    }
}

fn finding_text(f: &RegimeFinding) -> (&'static str, String) {
    match f {
        RegimeFinding::MaxConvergesToZero => ("max-converges-to-zero", String::new()),
        RegimeFinding::MaxDiscreteLimit { alpha, p } => (
            "max-discrete-limit",
            format!("alpha {} p {}", format_float(*alpha), format_float(*p)),
        ),
        RegimeFinding::MaxDivergesInProbability => ("max-diverges-in-probability", String::new()),
        RegimeFinding::MaxGumbelAfterScaling { c } => {
            ("max-gumbel-after-scaling", format!("c {}", format_float(*c)))
        }
        RegimeFinding::MaxTruncatedGumbelAfterScaling { alpha } => (
            "max-truncated-gumbel-after-scaling",
            format!("alpha {}", format_float(*alpha)),
        ),
        RegimeFinding::MinConvergesToZero => ("min-converges-to-zero", String::new()),
        RegimeFinding::MinDiscreteLimit { beta, rho } => (
            "min-discrete-limit",
            format!("beta {} rho {}", format_float(*beta), format_float(*rho)),
        ),
        RegimeFinding::MinDivergesInProbability => ("min-diverges-in-probability", String::new()),
        RegimeFinding::MinExponentialAfterScaling { beta } => (
            "min-exponential-after-scaling",
            format!("beta {}", format_float(*beta)),
        ),
    }
}

fn regimes(cfg: &RunConfig) -> Result<Vec<OutputTable>, CliError> {
    let (indices, rows) = scenario_rows(cfg)?;
    let report = classify_regimes(&rows).map_err(validation)?;

    let mut detail = Table::new(vec![
        "n",
        "nu",
        "a",
        "p",
        "nu_a",
        "alpha_n",
        "a_pow_nu",
        "nu_one_minus_a",
        "nu_p",
        "beta_n",
        "alpha_p",
    ]);
    for (&n, row) in indices.iter().zip(rows.iter()) {
        let nuf = row.nu() as f64;
        let a = row.zmg().a();
        let p = row.zmg().p();
        let norm = Normalizers::from_row(row);
        detail.push(vec![
            u64::from(n).into(),
            row.nu().into(),
            a.into(),
            p.into(),
            (nuf * a).into(),
            norm.alpha.into(),
            (nuf * a.ln()).exp().into(),
            (nuf * (1.0 - a)).into(),
            (nuf * p).into(),
            norm.beta.into(),
            (norm.alpha * p).into(),
        ]);
    }

    let mut summary = Table::new(vec!["kind", "name", "detail"]);
    let trends = [
        ("nu", &report.nu),
        ("nu_a", &report.nu_a),
        ("alpha_n", &report.alpha),
        ("p", &report.p),
        ("a_pow_nu", &report.a_pow_nu),
        ("nu_one_minus_a", &report.nu_one_minus_a),
        ("nu_p", &report.nu_p),
        ("beta_n", &report.beta),
        ("alpha_p", &report.alpha_p),
    ];
    for (name, trend) in trends {
        summary.push(vec!["trend".into(), name.into(), trend_text(trend).into()]);
    }
    for finding in &report.findings {
        let (name, detail_text) = finding_text(finding);
        summary.push(vec!["finding".into(), name.into(), detail_text.into()]);
    }
    Ok(vec![OutputTable::detail(detail), OutputTable::summary(summary)])
}
