//! Exact finite-n laws of the extrema of a row of `nu` iid zero-modified
//! geometric variables: maximum, minimum, joint law, and range.
//!
//! `nu` is held as an integer count but every power `F^nu` is formed in
//! log-space (`exp(nu * log1p(-survival))`), so rows with `nu` up to 2^60
//! evaluate without overflow, underflow surprises, or `nu`-length loops.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::numeric::{log1mexp, pow_one_minus};
use crate::zmg::ZmgParams;

/// Largest `tail_tol` accepted by [`RowParams::range_cdf`].
pub const MAX_RANGE_TAIL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtremesError {
    /// Row count must be at least 1.
    EmptyRow,
    /// `tail_tol` outside (0, 1e-8].
    TailTolerance { tail_tol: f64 },
}

impl fmt::Display for ExtremesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtremesError::EmptyRow => write!(f, "row count nu must be >= 1"),
            ExtremesError::TailTolerance { tail_tol } => {
                write!(f, "tail_tol={tail_tol} must lie in (0, {MAX_RANGE_TAIL_TOL}]")
            }
        }
    }
}

impl core::error::Error for ExtremesError {}

/// A triangular-array row: `nu` iid copies of one zero-modified geometric law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowParams {
    nu: u64,
    zmg: ZmgParams,
}

impl RowParams {
    pub fn new(nu: u64, zmg: ZmgParams) -> Result<Self, ExtremesError> {
        if nu == 0 {
            return Err(ExtremesError::EmptyRow);
        }
        Ok(Self { nu, zmg })
    }

    #[inline]
    pub fn nu(&self) -> u64 {
        self.nu
    }

    #[inline]
    pub fn zmg(&self) -> &ZmgParams {
        &self.zmg
    }

    #[inline]
    fn nu_f(&self) -> f64 {
        self.nu as f64
    }

    /// `log P(max <= x) = nu * log F(x)`, with `log F` formed as
    /// `log1p(-survival)` so values near 1 keep full precision.
    pub fn log_max_cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        let log_surv = self.zmg.log_survival(x);
        if log_surv == 0.0 {
            // survival is exactly 1, F(x) = 0
            return f64::NEG_INFINITY;
        }
        self.nu_f() * log1mexp(log_surv)
    }

    /// `P(max <= x) = F(x)^nu`.
    pub fn max_cdf(&self, x: f64) -> f64 {
        self.log_max_cdf(x).exp()
    }

    /// `P(min <= y) = 1 - (a(1-p)^{floor(y)})^nu`, exponent in log-space.
    pub fn min_cdf(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        -(self.nu_f() * self.zmg.log_survival(y)).exp_m1()
    }

    /// Joint law `P(max <= x, min <= y)`.
    ///
    /// Equals `max_cdf(x)` for `y >= x`; otherwise
    /// `F(x)^nu * [1 - (1 - F(y)/F(x))^nu]` with the inner power formed as
    /// `exp(nu * log1p(-F(y)/F(x)))` so ratios near 0 or 1 both survive.
    pub fn joint_cdf(&self, x: f64, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        if y >= x {
            return self.max_cdf(x);
        }
        let fx = self.zmg.cdf(x);
        if fx == 0.0 {
            return 0.0;
        }
        let ratio = self.zmg.cdf(y) / fx;
        let inner = -(self.nu_f() * (-ratio).ln_1p()).exp_m1();
        self.max_cdf(x) * inner
    }

    /// `P(max - min <= r)`, summing the per-minimum decomposition
    ///
    /// ```text
    /// sum_m [ (F(m+r) - F(m-1))^nu - (F(m+r) - F(m))^nu ]
    /// ```
    ///
    /// truncated at the first `m` where `nu * a(1-p)^{m-1} < tail_tol`
    /// (a union bound on `P(min >= m)`), so the result is a lower bound
    /// within `tail_tol` of the exact value.
    pub fn range_cdf(&self, r: u64, tail_tol: f64) -> Result<f64, ExtremesError> {
        if !(tail_tol > 0.0 && tail_tol <= MAX_RANGE_TAIL_TOL) {
            return Err(ExtremesError::TailTolerance { tail_tol });
        }
        if self.nu == 1 {
            return Ok(1.0);
        }
        let a = self.zmg.a();
        let p = self.zmg.p();
        let nu = self.nu_f();
        let log_a = a.ln();
        let log_q = (-p).ln_1p(); // log(1-p)
        let r = r as f64;

        // log(1 - (1-p)^r) and log(1 - (1-p)^{r+1}); r = 0 empties the
        // second term of the decomposition entirely.
        let log_gap_r = if r == 0.0 {
            f64::NEG_INFINITY
        } else {
            log1mexp(r * log_q)
        };
        let log_gap_r1 = log1mexp((r + 1.0) * log_q);

        let mut sum = crate::numeric::CompensatedSum::new();
        let mut m = 0.0f64;
        loop {
            // truncation: remaining mass P(min >= m) <= nu * a(1-p)^{m-1}
            if m >= 1.0 && nu * a * pow_one_minus(p, m - 1.0) < tail_tol {
                break;
            }
            // first term: (F(m+r) - F(m-1))^nu, with F(-1) := 0
            let log_lead = if m == 0.0 {
                // 1 - a(1-p)^r
                log1mexp(log_a + r * log_q)
            } else {
                // a(1-p)^{m-1} (1 - (1-p)^{r+1})
                log_a + (m - 1.0) * log_q + log_gap_r1
            };
            // second term: (F(m+r) - F(m))^nu = (a(1-p)^m (1 - (1-p)^r))^nu
            let log_trail = log_a + m * log_q + log_gap_r;
            let term = (nu * log_lead).exp() - (nu * log_trail).exp();
            sum.add(term);
            m += 1.0;
        }
        Ok(sum.total().clamp(0.0, 1.0))
    }

    /// Smallest integer `k` with `max_cdf(k) >= q`, located by doubling
    /// then bisection on the closed form; no linear scan, so quantiles of
    /// rows with astronomically large `nu` resolve in ~60 evaluations.
    pub fn max_quantile(&self, q: f64) -> u64 {
        debug_assert!(q > 0.0 && q < 1.0);
        let log_q = q.ln();
        let hit = |k: u64| self.log_max_cdf(k as f64) >= log_q;
        smallest_hit(hit)
    }

    /// Smallest integer `k` with `min_cdf(k) >= q`; same search strategy.
    pub fn min_quantile(&self, q: f64) -> u64 {
        debug_assert!(q > 0.0 && q < 1.0);
        let hit = |k: u64| self.min_cdf(k as f64) >= q;
        smallest_hit(hit)
    }
}

/// Smallest `k` satisfying a monotone predicate, by doubling + bisection.
fn smallest_hit<F: Fn(u64) -> bool>(hit: F) -> u64 {
    if hit(0) {
        return 0;
    }
    let mut lo = 0u64; // known miss
    let mut hi = 1u64;
    while !hit(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi == u64::MAX {
            break;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if hit(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
