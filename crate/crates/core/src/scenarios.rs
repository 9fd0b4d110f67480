//! Generators of parameter sequences that realize the limit hypotheses:
//! power-law and log-power families for the triangular array, explicit
//! tables, and the geometric chain embedded in a linear birth-death
//! process sampled at increasing times.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::branching::{aggregates_iter, OffspringSchedule};
use crate::extremes::RowParams;
use crate::zmg::{ParamError, ZmgParams};

/// Cap on generated row counts: `nu = base^n` stops at 2^50, past which
/// geometric growth has long since reached asymptopia anyway.
pub const MAX_GENERATED_NU: u64 = 1 << 50;

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    /// A family constant violates its domain.
    InvalidConstant { name: &'static str, value: f64 },
    /// Index list empty or not strictly increasing positive.
    BadIndices,
    /// `base^n` exceeds the generated-count cap.
    IndexTooLarge { n: u32 },
    /// The family formula produced parameters outside the law's domain;
    /// silently clamping would mask a mis-specified scenario.
    FormulaOutOfDomain { n: u32, a: f64, p: f64 },
    /// Table lookups past the end of the table.
    TableTooShort { wanted: usize, len: usize },
    /// Sampling times must be strictly increasing and positive.
    BadTimes,
    /// This scenario family does not define row counts / this use.
    Unsupported { what: &'static str },
    Param(ParamError),
}

impl From<ParamError> for ScenarioError {
    fn from(e: ParamError) -> Self {
        ScenarioError::Param(e)
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::InvalidConstant { name, value } => {
                write!(f, "scenario constant {name}={value} outside its domain")
            }
            ScenarioError::BadIndices => {
                write!(f, "indices must be nonempty, positive, strictly increasing")
            }
            ScenarioError::IndexTooLarge { n } => {
                write!(f, "index {n}: generated count would exceed 2^50")
            }
            ScenarioError::FormulaOutOfDomain { n, a, p } => {
                write!(f, "index {n}: formula gave a={a}, p={p} outside (0,1]x(0,1)")
            }
            ScenarioError::TableTooShort { wanted, len } => {
                write!(f, "table has {len} rows, {wanted} requested")
            }
            ScenarioError::BadTimes => {
                write!(f, "times must be nonempty, positive, strictly increasing")
            }
            ScenarioError::Unsupported { what } => {
                write!(f, "scenario family does not support {what}")
            }
            ScenarioError::Param(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ScenarioError {}

/// One explicit table entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub nu: u64,
    pub a: f64,
    pub p: f64,
}

/// A parameter-sequence family.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSpec {
    /// `a_n = e^{-alpha} nu_n^{-delta}`, `p_n = gamma nu_n^{-zeta}` with
    /// `nu_n = nu_base^n`.
    Power {
        alpha: f64,
        delta: f64,
        gamma: f64,
        zeta: f64,
        nu_base: f64,
    },
    /// `a_n = e^{-alpha} nu_n^{-delta}`, `p_n = coefficient (log nu_n)^{-zeta}`.
    LogPower {
        alpha: f64,
        delta: f64,
        coefficient: f64,
        zeta: f64,
        nu_base: f64,
    },
    /// Explicit `(nu, a, p)` rows, passed through as-is.
    Table { rows: Vec<TableRow> },
    /// Linear birth-death process observed at the given times; yields the
    /// embedded geometric offspring schedule, no row counts.
    BirthDeath {
        birth_rate: f64,
        death_rate: f64,
        times: Vec<f64>,
    },
}

impl ScenarioSpec {
    /// Reject constants outside the family domains up front.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |name: &'static str, value: f64| ScenarioError::InvalidConstant { name, value };
        match self {
            ScenarioSpec::Power {
                alpha,
                delta,
                gamma,
                zeta,
                nu_base,
            } => {
                if !alpha.is_finite() {
                    return Err(bad("alpha", *alpha));
                }
                if !(*delta >= 0.0) || !delta.is_finite() {
                    return Err(bad("delta", *delta));
                }
                if !(*gamma > 0.0) || !gamma.is_finite() {
                    return Err(bad("gamma", *gamma));
                }
                if !(*zeta > 0.0) || !zeta.is_finite() {
                    return Err(bad("zeta", *zeta));
                }
                if !(*nu_base > 1.0) || !nu_base.is_finite() {
                    return Err(bad("nu_base", *nu_base));
                }
            }
            ScenarioSpec::LogPower {
                alpha,
                delta,
                coefficient,
                zeta,
                nu_base,
            } => {
                if !alpha.is_finite() {
                    return Err(bad("alpha", *alpha));
                }
                if !(*delta < 1.0) || !delta.is_finite() {
                    return Err(bad("delta", *delta));
                }
                if !(*coefficient > 0.0) || !coefficient.is_finite() {
                    return Err(bad("coefficient", *coefficient));
                }
                if !(*zeta > 0.0) || !zeta.is_finite() {
                    return Err(bad("zeta", *zeta));
                }
                if !(*nu_base > 1.0) || !nu_base.is_finite() {
                    return Err(bad("nu_base", *nu_base));
                }
            }
            ScenarioSpec::Table { rows } => {
                if rows.is_empty() {
                    return Err(ScenarioError::TableTooShort { wanted: 1, len: 0 });
                }
            }
            ScenarioSpec::BirthDeath {
                birth_rate,
                death_rate,
                times,
            } => {
                if !(*birth_rate > 0.0) || !birth_rate.is_finite() {
                    return Err(bad("birth_rate", *birth_rate));
                }
                if !(*death_rate >= 0.0) || !death_rate.is_finite() {
                    return Err(bad("death_rate", *death_rate));
                }
                validate_times(times)?;
            }
        }
        Ok(())
    }

    /// Default base for the generated `nu`-sequence.
    pub fn default_nu_base() -> f64 {
        2.0
    }

    /// `(nu_n, a_n, p_n)` at one index of a generated family.
    fn formula_row(&self, n: u32) -> Result<TableRow, ScenarioError> {
        let (nu, a, p) = match self {
            ScenarioSpec::Power {
                alpha,
                delta,
                gamma,
                zeta,
                nu_base,
            } => {
                let nu = generated_nu(*nu_base, n)?;
                let nuf = nu as f64;
                let a = (-alpha).exp() * nuf.powf(-delta);
                let p = gamma * nuf.powf(-zeta);
                (nu, a, p)
            }
            ScenarioSpec::LogPower {
                alpha,
                delta,
                coefficient,
                zeta,
                nu_base,
            } => {
                let nu = generated_nu(*nu_base, n)?;
                let nuf = nu as f64;
                let a = (-alpha).exp() * nuf.powf(-delta);
                let p = coefficient * nuf.ln().powf(-zeta);
                (nu, a, p)
            }
            _ => return Err(ScenarioError::Unsupported { what: "formula rows" }),
        };
        if !(a > 0.0 && a <= 1.0 && p > 0.0 && p < 1.0) {
            return Err(ScenarioError::FormulaOutOfDomain { n, a, p });
        }
        Ok(TableRow { nu, a, p })
    }

    /// Deterministic rows at the requested indices.
    ///
    /// For the generated families an index `n` means `nu_n = nu_base^n`;
    /// for a table the indices are 1-based positions. Birth-death carries
    /// no row counts and is rejected.
    pub fn generate_rows(&self, indices: &[u32]) -> Result<Vec<RowParams>, ScenarioError> {
        self.validate()?;
        if indices.is_empty()
            || indices[0] == 0
            || indices.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(ScenarioError::BadIndices);
        }
        match self {
            ScenarioSpec::Power { .. } | ScenarioSpec::LogPower { .. } => indices
                .iter()
                .map(|&n| {
                    let row = self.formula_row(n)?;
                    Ok(RowParams::new(row.nu, ZmgParams::new(row.a, row.p)?)
                        .expect("nu >= 1"))
                })
                .collect(),
            ScenarioSpec::Table { rows } => indices
                .iter()
                .map(|&n| {
                    let row = rows.get(n as usize - 1).ok_or(ScenarioError::TableTooShort {
                        wanted: n as usize,
                        len: rows.len(),
                    })?;
                    Ok(RowParams::new(row.nu, ZmgParams::new(row.a, row.p)?)
                        .expect("nu >= 1"))
                })
                .collect(),
            ScenarioSpec::BirthDeath { .. } => {
                Err(ScenarioError::Unsupported { what: "row counts" })
            }
        }
    }

    /// The per-generation offspring laws `(a_n, p_n)` for the branching
    /// process, over generations `1..=horizon`.
    pub fn offspring_schedule(&self, horizon: usize) -> Result<OffspringSchedule, ScenarioError> {
        self.validate()?;
        if horizon == 0 {
            return Err(ScenarioError::BadIndices);
        }
        let params: Vec<ZmgParams> = match self {
            ScenarioSpec::Power { .. } | ScenarioSpec::LogPower { .. } => (1..=horizon as u32)
                .map(|n| {
                    let row = self.formula_row(n)?;
                    Ok(ZmgParams::new(row.a, row.p)?)
                })
                .collect::<Result<_, ScenarioError>>()?,
            ScenarioSpec::Table { rows } => {
                if horizon > rows.len() {
                    return Err(ScenarioError::TableTooShort {
                        wanted: horizon,
                        len: rows.len(),
                    });
                }
                rows[..horizon]
                    .iter()
                    .map(|r| Ok(ZmgParams::new(r.a, r.p)?))
                    .collect::<Result<_, ScenarioError>>()?
            }
            ScenarioSpec::BirthDeath {
                birth_rate,
                death_rate,
                times,
            } => {
                if horizon > times.len() {
                    return Err(ScenarioError::TableTooShort {
                        wanted: horizon,
                        len: times.len(),
                    });
                }
                bd_schedule(*birth_rate, *death_rate, &times[..horizon])?
                    .iter()
                    .map(|g| Ok(ZmgParams::new(g.a, g.p)?))
                    .collect::<Result<_, ScenarioError>>()?
            }
        };
        Ok(OffspringSchedule::new(params).expect("horizon >= 1"))
    }
}

fn generated_nu(base: f64, n: u32) -> Result<u64, ScenarioError> {
    let nu = base.powi(n as i32);
    if !(nu >= 1.0) || nu > MAX_GENERATED_NU as f64 {
        return Err(ScenarioError::IndexTooLarge { n });
    }
    Ok(nu.round() as u64)
}

fn validate_times(times: &[f64]) -> Result<(), ScenarioError> {
    if times.is_empty()
        || !(times[0] > 0.0)
        || times.iter().any(|t| !t.is_finite())
        || times.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(ScenarioError::BadTimes);
    }
    Ok(())
}

/// One generation of the sampled birth-death chain with its closed forms.
///
/// With `d_n = t_n - t_{n-1}` (and `t_0 = 0`, one initial individual):
/// for `birth != death`, `m_n = e^{(birth-death) d_n}`,
/// `p_n = (birth-death)/(birth*m_n - death)`, `B_n = birth (M_n-1)/(birth-death)`,
/// `M_n = e^{(birth-death) t_n}`; the equal-rates case degenerates to
/// `p_n = 1/(1 + birth*d_n)`, `m_n = 1`, `B_n = birth*t_n`, `M_n = 1`.
/// Always `a_n = m_n p_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdGeneration {
    pub n: usize,
    /// Sampling gap `d_n`.
    pub interval: f64,
    pub p: f64,
    pub a: f64,
    /// Mean family size `m_n`.
    pub mean: f64,
    /// `log M_n = (birth-death) * t_n`.
    pub log_mean_product: f64,
    /// Closed-form composed tail coefficient `B_n`.
    pub composed_tail_coef: f64,
}

/// Closed-form per-generation parameters of the embedded chain.
pub fn bd_schedule(
    birth_rate: f64,
    death_rate: f64,
    times: &[f64],
) -> Result<Vec<BdGeneration>, ScenarioError> {
    if !(birth_rate > 0.0) || !birth_rate.is_finite() {
        return Err(ScenarioError::InvalidConstant {
            name: "birth_rate",
            value: birth_rate,
        });
    }
    if !(death_rate >= 0.0) || !death_rate.is_finite() {
        return Err(ScenarioError::InvalidConstant {
            name: "death_rate",
            value: death_rate,
        });
    }
    validate_times(times)?;
    let growth = birth_rate - death_rate;
    let mut out = Vec::with_capacity(times.len());
    let mut prev_t = 0.0;
    for (i, &t) in times.iter().enumerate() {
        let d = t - prev_t;
        prev_t = t;
        let (p, m, log_mn, b) = if growth == 0.0 {
            (1.0 / (1.0 + birth_rate * d), 1.0, 0.0, birth_rate * t)
        } else {
            let m = (growth * d).exp();
            let p = growth / (birth_rate * m - death_rate);
            let log_mn = growth * t;
            let b = birth_rate * log_mn.exp_m1() / growth;
            (p, m, log_mn, b)
        };
        out.push(BdGeneration {
            n: i + 1,
            interval: d,
            p,
            a: m * p,
            mean: m,
            log_mean_product: log_mn,
            composed_tail_coef: b,
        });
    }
    Ok(out)
}

/// Feed the embedded schedule through the generic branching recurrences and
/// return the worst discrepancy against the closed forms: max over `n` of
/// the differences in `B_n` and in `log M_n`, each relative with an
/// absolute floor of 1.
pub fn bd_crosscheck(
    birth_rate: f64,
    death_rate: f64,
    times: &[f64],
) -> Result<f64, ScenarioError> {
    let closed = bd_schedule(birth_rate, death_rate, times)?;
    let params: Vec<ZmgParams> = closed
        .iter()
        .map(|g| Ok(ZmgParams::new(g.a, g.p)?))
        .collect::<Result<_, ScenarioError>>()?;
    let schedule = OffspringSchedule::new(params).expect("times validated nonempty");
    let mut worst = 0.0f64;
    for (agg, cf) in aggregates_iter(&schedule).zip(closed.iter()) {
        let db = (agg.composed_tail_coef - cf.composed_tail_coef).abs()
            / cf.composed_tail_coef.abs().max(1.0);
        let dm = (agg.log_mean_product - cf.log_mean_product).abs()
            / cf.log_mean_product.abs().max(1.0);
        worst = worst.max(db).max(dm);
    }
    Ok(worst)
}
