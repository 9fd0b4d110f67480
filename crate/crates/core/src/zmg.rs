//! Zero-modified geometric law: mass `1-a` at zero and a geometric tail
//! `a*p*(1-p)^{j-1}` on `j >= 1`, so the zero-class probability is
//! adjustable independently of the success parameter. `a = 1-p` recovers
//! the standard geometric law.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::numeric::{integer_part, log_pow_one_minus, pow_one_minus};
use crate::rng::StreamRng;

/// Parameter error raised at construction time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamError {
    /// `a` outside (0, 1] or not finite.
    ZeroClassWeight { a: f64 },
    /// `p` outside (0, 1) or not finite.
    SuccessParameter { p: f64 },
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::ZeroClassWeight { a } => {
                write!(f, "zero-class weight a={a} must lie in (0, 1]")
            }
            ParamError::SuccessParameter { p } => {
                write!(f, "success parameter p={p} must lie in (0, 1)")
            }
        }
    }
}

impl core::error::Error for ParamError {}

/// One row's offspring/entry law: `P(X=0) = 1-a`, `P(X=j) = a p (1-p)^{j-1}`.
///
/// Immutable after construction and freely shareable across threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZmgParams {
    a: f64,
    p: f64,
}

impl ZmgParams {
    /// `a` in (0, 1], `p` in (0, 1); anything else is rejected.
    pub fn new(a: f64, p: f64) -> Result<Self, ParamError> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(ParamError::ZeroClassWeight { a });
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(ParamError::SuccessParameter { p });
        }
        Ok(Self { a, p })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Mean `a/p`.
    #[inline]
    pub fn mean(&self) -> f64 {
        self.a / self.p
    }

    /// Probability mass at `j`.
    pub fn pmf(&self, j: u64) -> f64 {
        if j == 0 {
            1.0 - self.a
        } else {
            self.a * self.p * pow_one_minus(self.p, (j - 1) as f64)
        }
    }

    /// Distribution function: `1 - a(1-p)^{floor(x)}` for `x >= 0`, zero
    /// below the support. Right-continuous with jumps at the integers.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            1.0 - self.a * pow_one_minus(self.p, integer_part(x))
        }
    }

    /// `log(1 - cdf(x))` without forming the survival probability, so it
    /// stays finite far past the point where the direct difference
    /// underflows. Zero for `x < 0` (survival is 1 there).
    pub fn log_survival(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.a.ln() + log_pow_one_minus(self.p, integer_part(x))
        }
    }

    /// One draw by inverse transform.
    ///
    /// Always consumes exactly two uniforms: the first decides the zero
    /// class, the second drives the geometric tail `ceil(ln U / ln(1-p))`.
    /// The fixed cost keeps the stream position independent of the outcome,
    /// which is what makes seeded runs bit-reproducible across refactors.
    pub fn sample(&self, rng: &mut StreamRng) -> u64 {
        let u_zero = rng.next_f64();
        let u_tail = rng.next_open_f64();
        if u_zero < 1.0 - self.a {
            return 0;
        }
        let k = (u_tail.ln() / (-self.p).ln_1p()).ceil();
        if k < 1.0 {
            1
        } else {
            k as u64
        }
    }
}
