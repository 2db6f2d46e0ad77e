//! OFDM framing: subcarrier allocation, cyclic prefix, (de)modulation.

use crate::error::{Error, Result};
use crate::signal::fourier::{dft, idft};
use crate::signal::qam::QamOrder;
use crate::signal::{ComplexSignal, Spectrum};
use num_complex::Complex64;

/// Numerology of one OFDM link.
///
/// The default is a 1024-point FFT carrying 300 data subcarriers placed
/// symmetrically around (and excluding) DC — bins `1..=150` and
/// `874..=1023` — with a 72-sample cyclic prefix, 16-QAM data and a
/// 15.36 MS/s sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmConfig {
    pub n_fft: usize,
    pub used_subcarriers: Vec<usize>,
    pub cp_len: usize,
    pub qam_order: QamOrder,
    pub sample_rate: f64,
    pub n_symbols: usize,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        OfdmConfig {
            n_fft: 1024,
            used_subcarriers: symmetric_allocation(1024, 300)
                .expect("default allocation is valid"),
            cp_len: 72,
            qam_order: QamOrder::Q16,
            sample_rate: 15.36e6,
            n_symbols: 64,
        }
    }
}

impl OfdmConfig {
    /// Samples in one OFDM symbol including its cyclic prefix.
    pub fn symbol_len(&self) -> usize {
        self.n_fft + self.cp_len
    }

    /// Samples in the whole frame.
    pub fn frame_len(&self) -> usize {
        self.n_symbols * self.symbol_len()
    }

    /// Data symbols carried by the whole frame.
    pub fn symbols_per_frame(&self) -> usize {
        self.n_symbols * self.used_subcarriers.len()
    }

    /// Sample period in seconds.
    pub fn sample_period(&self) -> f64 {
        1.0 / self.sample_rate
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_fft < 2 {
            return Err(Error::Config(format!("n_fft = {} is too small", self.n_fft)));
        }
        if self.cp_len >= self.n_fft {
            return Err(Error::Config(format!(
                "cp_len = {} must be shorter than n_fft = {}",
                self.cp_len, self.n_fft
            )));
        }
        if self.used_subcarriers.is_empty() {
            return Err(Error::Config("no used subcarriers".into()));
        }
        let mut seen = vec![false; self.n_fft];
        for &k in &self.used_subcarriers {
            if k == 0 {
                return Err(Error::Config("subcarrier 0 (DC) must stay unused".into()));
            }
            if k >= self.n_fft {
                return Err(Error::Config(format!(
                    "subcarrier index {k} out of range for n_fft = {}",
                    self.n_fft
                )));
            }
            if seen[k] {
                return Err(Error::Config(format!("subcarrier index {k} repeated")));
            }
            seen[k] = true;
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(Error::Config(format!(
                "sample_rate = {} must be positive",
                self.sample_rate
            )));
        }
        if self.n_symbols == 0 {
            return Err(Error::Config("n_symbols must be at least 1".into()));
        }
        Ok(())
    }
}

/// Place `n_used` data subcarriers symmetrically around DC: bins
/// `1..=n_used/2` and `n_fft-n_used/2..=n_fft-1`.  `n_used` must be even
/// and leave DC plus at least one guard bin free.
pub fn symmetric_allocation(n_fft: usize, n_used: usize) -> Result<Vec<usize>> {
    if n_used == 0 || n_used % 2 != 0 {
        return Err(Error::Config(format!(
            "symmetric allocation needs a positive even subcarrier count, got {n_used}"
        )));
    }
    let half = n_used / 2;
    if 2 * half + 1 > n_fft {
        return Err(Error::Config(format!(
            "{n_used} used subcarriers do not fit in an {n_fft}-point FFT with DC unused"
        )));
    }
    let mut used: Vec<usize> = (1..=half).collect();
    used.extend(n_fft - half..n_fft);
    Ok(used)
}

/// Modulate `cfg.symbols_per_frame()` data symbols into a CP-OFDM frame.
///
/// Each OFDM symbol fills the used bins of a length-`n_fft` spectrum in the
/// order given by `cfg.used_subcarriers`, transforms with the `1/N` inverse,
/// and prepends its last `cp_len` samples as the cyclic prefix.
pub fn ofdm_modulate(symbols: &[Complex64], cfg: &OfdmConfig) -> Result<ComplexSignal> {
    cfg.validate()?;
    let expected = cfg.symbols_per_frame();
    if symbols.len() != expected {
        return Err(Error::Input(format!(
            "expected {expected} data symbols ({} per OFDM symbol × {}), got {}",
            cfg.used_subcarriers.len(),
            cfg.n_symbols,
            symbols.len()
        )));
    }

    let mut out = Vec::with_capacity(cfg.frame_len());
    for chunk in symbols.chunks(cfg.used_subcarriers.len()) {
        let mut bins = vec![Complex64::new(0.0, 0.0); cfg.n_fft];
        for (&k, &s) in cfg.used_subcarriers.iter().zip(chunk) {
            bins[k] = s;
        }
        let body = idft(&bins);
        out.extend_from_slice(&body[cfg.n_fft - cfg.cp_len..]);
        out.extend_from_slice(&body);
    }
    Ok(ComplexSignal::new(out, cfg.sample_rate))
}

/// Strip each cyclic prefix, transform the symbol bodies and return the data
/// symbols bin-by-bin in the same order `ofdm_modulate` consumed them.
pub fn ofdm_demodulate(x: &ComplexSignal, cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    if x.len() != cfg.frame_len() {
        return Err(Error::Input(format!(
            "frame length {} does not match configuration ({} samples)",
            x.len(),
            cfg.frame_len()
        )));
    }

    let mut out = Vec::with_capacity(cfg.symbols_per_frame());
    for sym in x.samples.chunks(cfg.symbol_len()) {
        let body = &sym[cfg.cp_len..];
        let bins = dft(body);
        out.extend(cfg.used_subcarriers.iter().map(|&k| bins[k]));
    }
    Ok(out)
}

/// Per-bin spectrum of one OFDM symbol body (used by frequency-domain
/// diagnostics): the data symbols on their bins, zeros elsewhere.
pub fn symbol_spectrum(symbols: &[Complex64], cfg: &OfdmConfig) -> Result<Spectrum> {
    if symbols.len() != cfg.used_subcarriers.len() {
        return Err(Error::Input(format!(
            "expected {} data symbols, got {}",
            cfg.used_subcarriers.len(),
            symbols.len()
        )));
    }
    let mut bins = vec![Complex64::new(0.0, 0.0); cfg.n_fft];
    for (&k, &s) in cfg.used_subcarriers.iter().zip(symbols) {
        bins[k] = s;
    }
    Ok(Spectrum::new(bins))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::signal::qam::qam_map;

    fn small_cfg() -> OfdmConfig {
        OfdmConfig {
            n_fft: 64,
            used_subcarriers: symmetric_allocation(64, 20).unwrap(),
            cp_len: 8,
            qam_order: QamOrder::Q16,
            sample_rate: 15.36e6,
            n_symbols: 3,
        }
    }

    #[test]
    fn default_numerology_matches_design() {
        let cfg = OfdmConfig::default();
        assert_eq!(cfg.n_fft, 1024);
        assert_eq!(cfg.used_subcarriers.len(), 300);
        assert_eq!(cfg.cp_len, 72);
        assert_eq!(cfg.symbol_len(), 1096);
        assert!(!cfg.used_subcarriers.contains(&0));
        assert!(cfg.used_subcarriers.contains(&1));
        assert!(cfg.used_subcarriers.contains(&150));
        assert!(cfg.used_subcarriers.contains(&874));
        assert!(cfg.used_subcarriers.contains(&1023));
        assert!(!cfg.used_subcarriers.contains(&151));
        assert!(!cfg.used_subcarriers.contains(&873));
        cfg.validate().unwrap();
    }

    #[test]
    fn modulate_demodulate_round_trip() {
        let cfg = small_cfg();
        let mut rng = RngStream::new(21, "ofdm-roundtrip");
        let bits = rng.bits(cfg.symbols_per_frame() * cfg.qam_order.bits_per_symbol());
        let symbols = qam_map(&bits, cfg.qam_order).unwrap();
        let frame = ofdm_modulate(&symbols, &cfg).unwrap();
        assert_eq!(frame.len(), cfg.frame_len());
        let back = ofdm_demodulate(&frame, &cfg).unwrap();
        for (a, b) in back.iter().zip(&symbols) {
            assert!((a - b).norm() < 1e-9, "round trip drifted: {a} vs {b}");
        }
    }

    #[test]
    fn cyclic_prefix_copies_the_symbol_tail() {
        let cfg = small_cfg();
        let mut rng = RngStream::new(22, "ofdm-cp");
        let bits = rng.bits(cfg.symbols_per_frame() * cfg.qam_order.bits_per_symbol());
        let symbols = qam_map(&bits, cfg.qam_order).unwrap();
        let frame = ofdm_modulate(&symbols, &cfg).unwrap();
        for sym in frame.samples.chunks(cfg.symbol_len()) {
            let cp = &sym[..cfg.cp_len];
            let tail = &sym[cfg.symbol_len() - cfg.cp_len..];
            assert_eq!(cp, tail);
        }
    }

    #[test]
    fn rejects_wrong_symbol_count_and_bad_config() {
        let cfg = small_cfg();
        let symbols = vec![Complex64::new(1.0, 0.0); 7];
        assert!(matches!(
            ofdm_modulate(&symbols, &cfg),
            Err(Error::Input(_))
        ));

        let mut bad = small_cfg();
        bad.used_subcarriers.push(0);
        assert!(matches!(bad.validate(), Err(Error::Config(_))));

        let mut oversized_cp = small_cfg();
        oversized_cp.cp_len = 64;
        assert!(matches!(oversized_cp.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn symmetric_allocation_rejects_odd_or_oversized_counts() {
        assert!(symmetric_allocation(64, 19).is_err());
        assert!(symmetric_allocation(64, 64).is_err());
        assert!(symmetric_allocation(64, 0).is_err());
        let used = symmetric_allocation(64, 20).unwrap();
        assert_eq!(used.len(), 20);
        assert_eq!(used[0], 1);
        assert_eq!(*used.last().unwrap(), 63);
    }

    proptest::proptest! {
        #[test]
        fn modulation_round_trips_any_frame(
            seed in 0u64..1 << 32,
            order in proptest::sample::select(vec![
                QamOrder::Q4, QamOrder::Q16, QamOrder::Q64
            ]),
            n_used in proptest::sample::select(vec![2usize, 10, 20, 30]),
            n_symbols in 1usize..4,
        ) {
            let cfg = OfdmConfig {
                n_fft: 64,
                used_subcarriers: symmetric_allocation(64, n_used).unwrap(),
                cp_len: 8,
                qam_order: order,
                sample_rate: 15.36e6,
                n_symbols,
            };
            let mut rng = crate::rng::RngStream::new(seed, "ofdm-prop");
            let bits = rng.bits(cfg.symbols_per_frame() * order.bits_per_symbol());
            let data = crate::signal::qam::qam_map(&bits, order).unwrap();
            let frame = ofdm_modulate(&data, &cfg).unwrap();
            proptest::prop_assert_eq!(frame.len(), cfg.frame_len());
            let back = ofdm_demodulate(&frame, &cfg).unwrap();
            proptest::prop_assert_eq!(back.len(), data.len());
            for (a, b) in back.iter().zip(&data) {
                proptest::prop_assert!((a - b).norm() <= 1e-9);
            }
        }
    }
}
