//! Numerically stable building blocks shared by the probability modules.
//!
//! All survival masses in this crate have the shape `a * (1-p)^k` with `k`
//! possibly in the trillions, and all powering has the shape `F^nu` with
//! `nu` up to 2^60, so everything routes through `log1p`/`expm1` forms.

#[allow(unused_imports)]
use num_traits::Float;

/// `(1-p)^k` for real `k >= 0`, formed as `exp(k * log1p(-p))`.
///
/// Small integer exponents (`k <= 64`) go through `powi` directly; the two
/// paths agree to ~1 ulp and the invariant tests pin that agreement.
#[inline]
pub fn pow_one_minus(p: f64, k: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&p));
    debug_assert!(k >= 0.0);
    if k <= 64.0 && k == k.trunc() {
        (1.0 - p).powi(k as i32)
    } else {
        (k * (-p).ln_1p()).exp()
    }
}

/// `log((1-p)^k) = k * log1p(-p)` for real `k >= 0`.
#[inline]
pub fn log_pow_one_minus(p: f64, k: f64) -> f64 {
    k * (-p).ln_1p()
}

/// `log(1 - e^u)` for `u <= 0`, switching forms at `-ln 2` to dodge the
/// cancellation on either side.
///
/// Returns `-inf` at `u = 0` (the argument of the log is exactly zero).
#[inline]
pub fn log1mexp(u: f64) -> f64 {
    debug_assert!(u <= 0.0);
    if u < -core::f64::consts::LN_2 {
        (-u.exp()).ln_1p()
    } else {
        (-u.exp_m1()).ln()
    }
}

/// Standard Gumbel cdf `G(x) = exp(-e^{-x})`.
#[inline]
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Standard Gumbel quantile `G^{-1}(q) = -ln(-ln q)` for `q` in (0,1).
#[inline]
pub fn gumbel_quantile(q: f64) -> f64 {
    -(-q.ln()).ln()
}

/// Standard logistic cdf `L(x) = 1/(1+e^{-x})`, evaluated without overflow
/// on either tail.
#[inline]
pub fn logistic_cdf(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Standard logistic quantile `logit(q)` for `q` in (0,1).
#[inline]
pub fn logistic_quantile(q: f64) -> f64 {
    (q / (1.0 - q)).ln()
}

/// Floor that mirrors how the integer part enters every cdf here: negative
/// arguments never reach it (callers short-circuit to 0 below the support).
#[inline]
pub fn integer_part(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    x.floor()
}

/// Neumaier compensated summation.
///
/// The branching aggregates add terms spanning hundreds of orders of
/// magnitude; a plain sum loses the survival probability entirely on mixed
/// schedules.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_one_minus_matches_naive_for_small_k() {
        for &p in &[0.01, 0.3, 0.5, 0.9, 0.999] {
            let mut direct = 1.0;
            for k in 0..=64u32 {
                let stable = pow_one_minus(p, k as f64);
                // both sides accumulate ~k*eps of rounding
                assert!(
                    (stable - direct).abs() <= 1e-14 * direct.max(1e-300),
                    "p={p} k={k}: {stable} vs {direct}"
                );
                direct *= 1.0 - p;
            }
        }
    }

    #[test]
    fn pow_one_minus_large_k_stays_in_log_space() {
        // direct powering underflows long before k = 5000
        let v = pow_one_minus(0.5, 5_000.0);
        assert_eq!(v, 0.0); // below the subnormal range
        let lv = log_pow_one_minus(0.5, 5_000.0);
        assert!((lv - 5_000.0 * (-0.5f64).ln_1p()).abs() < 1e-9);
    }

    #[test]
    fn log1mexp_agrees_with_naive_in_safe_range() {
        // only where the naive difference itself is trustworthy
        for &u in &[-40.0, -5.0, -1.0, -0.5, -1e-3] {
            let naive = (1.0 - u.exp()).ln();
            let stable = log1mexp(u);
            let tol = 1e-12 * naive.abs().max(1.0);
            assert!((stable - naive).abs() < tol, "u={u}: {stable} vs {naive}");
        }
    }

    #[test]
    fn log1mexp_tiny_argument_does_not_cancel() {
        // ln(1 - e^{-1e-8}) = ln(1e-8) + ln(1 - 5e-9) + O(1e-17); the naive
        // route loses ~7 digits here
        let v = log1mexp(-1e-8);
        assert!((v - (-18.420680748952367)).abs() < 1e-12, "{v}");
        // and 1 - e^{-1e-300} rounds to 0 outright
        let v = log1mexp(-1e-300);
        assert!((v - (-690.7755278982137)).abs() < 1e-9);
    }

    #[test]
    fn gumbel_and_logistic_round_trip() {
        for &q in &[0.001, 0.1, 0.5, 0.9, 0.999] {
            assert!((gumbel_cdf(gumbel_quantile(q)) - q).abs() < 1e-12);
            assert!((logistic_cdf(logistic_quantile(q)) - q).abs() < 1e-12);
        }
    }

    #[test]
    fn logistic_tails_do_not_overflow() {
        assert_eq!(logistic_cdf(800.0), 1.0);
        assert_eq!(logistic_cdf(-800.0), 0.0);
        assert!(logistic_cdf(-745.0) > 0.0);
    }

    #[test]
    fn compensated_sum_survives_magnitude_mixing() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..10_000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.total(), 10_000.0);
    }
}
