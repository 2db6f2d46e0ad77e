//! Seeded, labelled random streams.
//!
//! Every stochastic quantity in a simulation trial (data bits, channel taps,
//! phase-noise increments, thermal noise, ...) draws from its own
//! [`RngStream`], identified by a root seed plus a human-readable label.
//! The stream is a ChaCha12 generator keyed by `SHA-256(seed || label)`, so
//! the pair `(seed, label)` fully determines the byte sequence — across
//! runs, platforms and thread schedules.  Forking derives a child label by
//! appending `"/<label>"` to the parent's, and never depends on how much of
//! the parent stream has been consumed.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    label: String,
    rng: ChaCha12Rng,
}

impl RngStream {
    /// Open the stream identified by `(seed, label)`, positioned at its start.
    pub fn new(seed: u64, label: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(seed.to_le_bytes());
        hasher.update([0u8]); // separates the seed bytes from the label bytes
        hasher.update(label.as_bytes());
        let key: [u8; 32] = hasher.finalize().into();
        RngStream {
            seed,
            label: label.to_string(),
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Derive the child stream `parent_label + "/" + label`.
    ///
    /// The child starts at its beginning regardless of how many values have
    /// been drawn from `self`, and two forks with the same label are
    /// identical streams.
    pub fn fork(&self, label: &str) -> Self {
        RngStream::new(self.seed, &format!("{}/{}", self.label, label))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Raw generator word; the determinism contract is defined at this level.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// One standard-normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// `n` independent fair bits, as 0/1 bytes.
    pub fn bits(&mut self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        let mut word = 0u64;
        let mut left = 0u32;
        for _ in 0..n {
            if left == 0 {
                word = self.rng.next_u64();
                left = 64;
            }
            out.push((word & 1) as u8);
            word >>= 1;
            left -= 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_identity_same_stream() {
        let mut a = RngStream::new(42, "pn");
        let mut b = RngStream::new(42, "pn");
        for _ in 0..64 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn fork_is_independent_of_parent_consumption() {
        let parent = RngStream::new(7, "trial/0");
        let mut early = parent.fork("pn");

        let mut parent2 = RngStream::new(7, "trial/0");
        for _ in 0..1000 {
            parent2.next_u64();
        }
        let mut late = parent2.fork("pn");

        for _ in 0..64 {
            assert_eq!(early.next_u64(), late.next_u64());
        }
    }

    #[test]
    fn distinct_labels_are_statistically_independent() {
        const N: usize = 100_000;
        let mut a = RngStream::new(3, "root").fork("awgn");
        let mut b = RngStream::new(3, "root").fork("bits");
        let (mut sum_xy, mut sum_x, mut sum_y, mut sum_x2, mut sum_y2) =
            (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..N {
            let x = a.standard_normal();
            let y = b.standard_normal();
            sum_xy += x * y;
            sum_x += x;
            sum_y += y;
            sum_x2 += x * x;
            sum_y2 += y * y;
        }
        let n = N as f64;
        let cov = sum_xy / n - (sum_x / n) * (sum_y / n);
        let var_x = sum_x2 / n - (sum_x / n).powi(2);
        let var_y = sum_y2 / n - (sum_y / n).powi(2);
        let corr = cov / (var_x * var_y).sqrt();
        assert!(
            corr.abs() <= 0.02,
            "cross-label correlation too large: {corr}"
        );
    }

    #[test]
    fn bit_stream_is_balanced() {
        let mut s = RngStream::new(11, "bits");
        let bits = s.bits(100_000);
        let ones: usize = bits.iter().map(|&b| b as usize).sum();
        let frac = ones as f64 / bits.len() as f64;
        assert!((frac - 0.5).abs() < 0.01, "bit bias: {frac}");
        assert!(bits.iter().all(|&b| b == 0 || b == 1));
    }

    // Pins the generator output so that accidental changes to the key
    // derivation or backing generator are caught; the exact values were
    // captured from the first release of this module.
    #[test]
    fn stream_words_are_stable_across_builds() {
        let mut s = RngStream::new(1, "x");
        let got: Vec<u64> = (0..4).map(|_| s.next_u64()).collect();
        let expect = expected_stream_head();
        assert_eq!(got, expect);
    }

    fn expected_stream_head() -> Vec<u64> {
        // Regenerated by running this module's generator once at version 0.1;
        // see `stream_words_are_stable_across_builds`.
        vec![
            11697912807513467568,
            4453066809900426895,
            8612015907103593595,
            13398844845576917570,
        ]
    }
}
