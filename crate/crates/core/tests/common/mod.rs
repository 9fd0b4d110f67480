//! Exhaustive-enumeration oracle for the row-extrema laws.
//!
//! Builds the exact joint distribution of (max, min) over `nu` iid draws
//! by dynamic programming on outcome values `0..=cap`, with one overflow
//! bucket carrying the analytically known tail mass `P(X > cap)`. Only
//! direct arithmetic on pmf values enters, so the oracle is independent
//! of the closed-form/log-space paths it is used to check.

pub struct ExtremaOracle {
    cap: usize,
    /// joint[m][mn] = P(max = value m, min = value mn); index cap+1 is the
    /// "> cap" bucket.
    joint: Vec<Vec<f64>>,
}

impl ExtremaOracle {
    pub fn build(nu: u64, a: f64, p: f64, cap: usize) -> Self {
        let states = cap + 2;
        // pmf by direct multiplication: a*p*(1-p)^{j-1}, plus the bucket
        let mut pmf = vec![0.0f64; states];
        pmf[0] = 1.0 - a;
        let mut geo = a * p;
        for j in 1..=cap {
            pmf[j] = geo;
            geo *= 1.0 - p;
        }
        // geo is now a*p*(1-p)^cap; the bucket holds a*(1-p)^cap
        pmf[cap + 1] = geo / p;

        // DP over the nu variables on the (max, min) pair
        let mut joint = vec![vec![0.0f64; states]; states];
        for (v, &mass) in pmf.iter().enumerate() {
            joint[v][v] = mass;
        }
        for _ in 1..nu {
            let mut next = vec![vec![0.0f64; states]; states];
            for m in 0..states {
                for mn in 0..=m {
                    let mass = joint[m][mn];
                    if mass == 0.0 {
                        continue;
                    }
                    for (v, &pv) in pmf.iter().enumerate() {
                        next[m.max(v)][mn.min(v)] += mass * pv;
                    }
                }
            }
            joint = next;
        }
        Self { cap, joint }
    }

    /// `P(max <= k)`, exact for `k <= cap`.
    pub fn max_cdf(&self, k: usize) -> f64 {
        assert!(k <= self.cap);
        let mut total = 0.0;
        for m in 0..=k {
            for mn in 0..=m {
                total += self.joint[m][mn];
            }
        }
        total
    }

    /// `P(min <= k)`, exact for `k <= cap`.
    pub fn min_cdf(&self, k: usize) -> f64 {
        assert!(k <= self.cap);
        let mut total = 0.0;
        for m in 0..self.joint.len() {
            for mn in 0..=k.min(m) {
                total += self.joint[m][mn];
            }
        }
        total
    }

    /// `P(max <= x, min <= y)`, exact for `x, y <= cap`.
    pub fn joint_cdf(&self, x: usize, y: usize) -> f64 {
        assert!(x <= self.cap && y <= self.cap);
        let mut total = 0.0;
        for m in 0..=x {
            for mn in 0..=y.min(m) {
                total += self.joint[m][mn];
            }
        }
        total
    }

    /// `P(max - min <= r, max <= cap)`: a lower bound on `P(range <= r)`
    /// that misses at most `P(max > cap)`.
    pub fn range_cdf_restricted(&self, r: usize) -> f64 {
        let mut total = 0.0;
        for m in 0..=self.cap {
            for mn in m.saturating_sub(r)..=m {
                total += self.joint[m][mn];
            }
        }
        total
    }
}
