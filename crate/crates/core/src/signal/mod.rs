//! Complex-baseband containers and the modulation stack.
//!
//! Everything downstream fixes a single transform convention, defined in
//! [`fourier`]: the forward DFT is the plain unnormalised sum
//! `X_k = Σ_n x_n e^{-j2πnk/N}` and the inverse carries the `1/N` factor,
//! so `idft(dft(x)) == x`.

pub mod fourier;
pub mod ofdm;
pub mod qam;

use num_complex::Complex64;

/// A sampled complex baseband signal together with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    pub samples: Vec<Complex64>,
    /// Samples per second.
    pub sample_rate: f64,
}

impl ComplexSignal {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64) -> Self {
        ComplexSignal {
            samples,
            sample_rate,
        }
    }

    /// All-zero signal of length `n`.
    pub fn zeros(n: usize, sample_rate: f64) -> Self {
        ComplexSignal::new(vec![Complex64::new(0.0, 0.0); n], sample_rate)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean per-sample power `(1/n) Σ |x_n|²`; zero for an empty signal.
    pub fn mean_power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    /// Total energy `Σ |x_n|²`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }
}

/// A length-N vector of DFT bins under the convention fixed in [`fourier`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bins: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(bins: Vec<Complex64>) -> Self {
        Spectrum { bins }
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }
}
