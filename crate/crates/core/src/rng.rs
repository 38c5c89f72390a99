//! Deterministic, splittable random streams.
//!
//! Every stochastic operation in the toolkit draws from a [`RandomStream`].
//! A stream is fully determined by `(master_seed, stream_id)`, so any run
//! can be replayed bit-exactly, and runs executed in parallel with distinct
//! stream ids are independent of scheduling order.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{contract_error, Result};

/// SplitMix64 finalizer. Used to turn correlated integers (seeds, stream
/// indices) into well-mixed key material.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seedable source of uniform, Gaussian, and derived draws.
///
/// Identical `(master_seed, stream_id)` pairs produce identical draw
/// sequences; distinct stream ids produce statistically independent
/// sequences (ChaCha keyed by SplitMix64-mixed inputs).
#[derive(Debug, Clone)]
pub struct RandomStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha12Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = mix64(master_seed).wrapping_add(mix64(stream_id.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        for chunk in key.chunks_mut(8) {
            state = mix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        RandomStream {
            master_seed,
            stream_id,
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Combine run indices (pair index, run index, ...) into a single
    /// stream id. The chain `mix(mix(a) ^ b)` keeps distinct index tuples
    /// on distinct ids.
    pub fn compose_id(parts: &[u64]) -> u64 {
        let mut id = 0x243f_6a88_85a3_08d3; // arbitrary nonzero start
        for &p in parts {
            id = mix64(id ^ mix64(p));
        }
        id
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw in `[lo, hi)`. Errors when `lo >= hi`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo < hi) {
            return Err(contract_error(format!(
                "uniform range requires lo < hi, got [{lo}, {hi})"
            )));
        }
        let x = lo + (hi - lo) * self.next_f64();
        // Guard against round-up at the top of the range.
        Ok(if x >= hi { hi.next_down() } else { x })
    }

    /// Standard normal draw via Box-Muller. Consumes exactly two uniform
    /// draws per call.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1]: keeps ln finite
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform index in `[0, n)`.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.rng.random_range(0..n)
    }

    /// Fisher-Yates permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.rng.random_range(0..=i);
            perm.swap(i, j);
        }
        perm
    }

    /// Raw 64-bit output; exposed for tests and id derivation.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RandomStream::new(42, 7);
        let mut b = RandomStream::new(42, 7);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_stream_ids_diverge() {
        let mut a = RandomStream::new(42, 0);
        let mut b = RandomStream::new(42, 1);
        let same = (0..16).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn uniform_range_contract() {
        let mut s = RandomStream::new(1, 0);
        assert!(s.uniform(2.0, 2.0).is_err());
        for _ in 0..1000 {
            let x = s.uniform(-1.5, 2.5).unwrap();
            assert!((-1.5..2.5).contains(&x));
        }
    }

    #[test]
    fn uniform_mean_close_to_half() {
        let mut s = RandomStream::new(3, 0);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| s.next_f64()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn gaussian_moments_and_quantile() {
        let mut s = RandomStream::new(4, 0);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| s.gaussian()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        let inside = draws.iter().filter(|x| x.abs() <= 1.96).count() as f64 / n as f64;
        assert!(mean.abs() < 0.02, "mean = {mean}");
        assert!((var - 1.0).abs() < 0.03, "var = {var}");
        assert!((inside - 0.95).abs() < 0.01, "P(|x|<=1.96) = {inside}");
    }

    #[test]
    fn gaussian_reproducible() {
        let mut a = RandomStream::new(9, 2);
        let mut b = RandomStream::new(9, 2);
        let va: Vec<f64> = (0..10).map(|_| a.gaussian()).collect();
        let vb: Vec<f64> = (0..10).map(|_| b.gaussian()).collect();
        assert_eq!(va, vb);
    }

    #[test]
    fn permutation_is_permutation() {
        let mut s = RandomStream::new(5, 0);
        let mut p = s.permutation(17);
        p.sort_unstable();
        assert_eq!(p, (0..17).collect::<Vec<_>>());
    }

    #[test]
    fn compose_id_distinguishes_order() {
        assert_ne!(
            RandomStream::compose_id(&[1, 2]),
            RandomStream::compose_id(&[2, 1])
        );
        assert_ne!(RandomStream::compose_id(&[0]), RandomStream::compose_id(&[0, 0]));
    }
}
