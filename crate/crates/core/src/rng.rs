//! Counter-based splittable random number generator.
//!
//! Reproducibility contract: a `(seed, stream)` pair fully determines the
//! output sequence, independent of platform, worker count, or call pattern.
//! The generator identity [`RNG_ID`] is stamped into every output file
//! header so that golden data stays attributable to the exact algorithm.
//!
//! Algorithm (`splitmix64ctr-v1`): the i-th output is
//!
//! ```text
//! mix(key + (i+1) * 0x9e3779b97f4a7c15)
//! ```
//!
//! where `mix` is the splitmix64 finalizer and the per-stream key is
//! `mix(mix(seed ^ C0) + mix(stream ^ C1))` with the constants below. This
//! is splitmix64 evaluated at a counter, so any output index is addressable
//! in O(1) and disjoint stream indices give decorrelated sequences (the
//! Monte Carlo suite runs a lag-correlation smoke test over adjacent
//! streams).

/// Identity string pinned into output metadata.
pub const RNG_ID: &str = "splitmix64ctr-v1";

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const SEED_SALT: u64 = 0x6a09_e667_f3bc_c909;
const STREAM_SALT: u64 = 0xbb67_ae85_84ca_a73b;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Master seed plus stream index; the full address of a draw sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Materialize the generator for this spec.
    pub fn rng(&self) -> StreamRng {
        StreamRng::from_spec(*self)
    }
}

/// One stream of the counter-based generator.
#[derive(Debug, Clone)]
pub struct StreamRng {
    key: u64,
    counter: u64,
}

impl StreamRng {
    pub fn from_spec(spec: RngSpec) -> Self {
        let key = mix(mix(spec.seed ^ SEED_SALT).wrapping_add(mix(spec.stream ^ STREAM_SALT)));
        Self { key, counter: 0 }
    }

    pub fn new(seed: u64, stream: u64) -> Self {
        Self::from_spec(RngSpec::new(seed, stream))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform on the open interval `(0, 1)`; safe to feed to `ln`.
    #[inline]
    pub fn next_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_spec_identical_sequence() {
        let mut a = StreamRng::new(42, 7);
        let mut b = StreamRng::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_streams_distinct_sequences() {
        let mut a = StreamRng::new(42, 0);
        let mut b = StreamRng::new(42, 1);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn uniform_ranges() {
        let mut r = StreamRng::new(1, 0);
        for _ in 0..10_000 {
            let u = r.next_f64();
            assert!((0.0..1.0).contains(&u));
            let v = r.next_open_f64();
            assert!(v > 0.0 && v < 1.0);
        }
    }

    #[test]
    fn mean_of_uniforms_is_centered() {
        let mut r = StreamRng::new(3, 5);
        let n = 100_000;
        let sum: f64 = (0..n).map(|_| r.next_f64()).sum();
        let mean = sum / n as f64;
        // 5 sigma for Var = 1/12
        assert!((mean - 0.5).abs() < 5.0 * (1.0 / 12.0f64).sqrt() / (n as f64).sqrt());
    }
}
