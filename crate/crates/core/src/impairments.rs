//! Link impairments: oscillator phase noise, multipath fading, imperfect
//! channel knowledge and thermal noise.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::signal::ComplexSignal;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Free-running-oscillator phase-noise parameters.
///
/// The phase evolves as a Wiener process: `φ_{n+1} = φ_n + g_n` with
/// `g_n ~ N(0, 2π·β·T_s)`, where `β` is the oscillator's 3-dB linewidth in
/// hertz and `T_s` the sample period in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseParams {
    pub beta_hz: f64,
    pub ts_s: f64,
}

impl PhaseNoiseParams {
    pub fn new(beta_hz: f64, ts_s: f64) -> Result<Self> {
        let p = PhaseNoiseParams { beta_hz, ts_s };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta_hz.is_finite() && self.beta_hz >= 0.0) {
            return Err(Error::Config(format!(
                "phase-noise linewidth must be finite and non-negative, got {}",
                self.beta_hz
            )));
        }
        if !(self.ts_s.is_finite() && self.ts_s > 0.0) {
            return Err(Error::Config(format!(
                "sample period must be positive, got {}",
                self.ts_s
            )));
        }
        Ok(())
    }

    /// Variance of one phase increment, `2π·β·T_s`.
    pub fn increment_variance(&self) -> f64 {
        2.0 * PI * self.beta_hz * self.ts_s
    }
}

/// A realised phase trajectory, one value per sample, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePath {
    pub phases: Vec<f64>,
}

impl PhasePath {
    pub fn new(phases: Vec<f64>) -> Self {
        PhasePath { phases }
    }

    pub fn constant(value: f64, n: usize) -> Self {
        PhasePath {
            phases: vec![value; n],
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Whether the transmitter and receiver share one oscillator (the
/// self-interference path then sees its phase twice) or run independent
/// oscillators with the same linewidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscillatorMode {
    Common,
    Independent,
}

/// Draw a Wiener phase path of `n` samples starting at `φ_0 = 0`.
///
/// A zero linewidth yields the exactly-zero path.
pub fn gen_wiener_pn(params: &PhaseNoiseParams, n: usize, rng: &mut RngStream) -> Result<PhasePath> {
    params.validate()?;
    let sigma = params.increment_variance().sqrt();
    let mut phases = Vec::with_capacity(n);
    let mut phi = 0.0;
    for i in 0..n {
        if i > 0 {
            phi += sigma * rng.standard_normal();
        }
        phases.push(phi);
    }
    Ok(PhasePath::new(phases))
}

/// Rotate each sample by its phase: `out_n = x_n · e^{jφ_n}`.
pub fn apply_pn(x: &ComplexSignal, path: &PhasePath) -> Result<ComplexSignal> {
    if x.len() != path.len() {
        return Err(Error::Input(format!(
            "signal has {} samples but phase path has {}",
            x.len(),
            path.len()
        )));
    }
    let samples = x
        .samples
        .iter()
        .zip(&path.phases)
        .map(|(&s, &phi)| s * Complex64::new(phi.cos(), phi.sin()))
        .collect();
    Ok(ComplexSignal::new(samples, x.sample_rate))
}

/// Element-wise sum of two phase trajectories — the phase a signal
/// accumulates passing through both oscillators.
pub fn combined_pn(tx: &PhasePath, rx: &PhasePath) -> Result<PhasePath> {
    if tx.len() != rx.len() {
        return Err(Error::Input(format!(
            "phase paths differ in length: {} vs {}",
            tx.len(),
            rx.len()
        )));
    }
    Ok(PhasePath::new(
        tx.phases.iter().zip(&rx.phases).map(|(a, b)| a + b).collect(),
    ))
}

/// Parameters of a Rician multipath channel: Rician K-factor of the first
/// tap in dB, and the mean power of every tap (normalised to sum to one).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    pub rician_k_db: f64,
    pub tap_powers: Vec<f64>,
}

impl ChannelParams {
    /// Exponentially decaying power-delay profile: tap `i` carries
    /// `decay_db_per_tap` dB less mean power than tap `i-1`; the profile is
    /// normalised to unit total power.
    pub fn exponential(rician_k_db: f64, n_taps: usize, decay_db_per_tap: f64) -> Result<Self> {
        if n_taps == 0 {
            return Err(Error::Config("channel needs at least one tap".into()));
        }
        if !decay_db_per_tap.is_finite() || decay_db_per_tap < 0.0 {
            return Err(Error::Config(format!(
                "per-tap decay must be finite and non-negative dB, got {decay_db_per_tap}"
            )));
        }
        let ratio = 10f64.powf(-decay_db_per_tap / 10.0);
        let mut powers: Vec<f64> = (0..n_taps).map(|i| ratio.powi(i as i32)).collect();
        let total: f64 = powers.iter().sum();
        for p in &mut powers {
            *p /= total;
        }
        let params = ChannelParams {
            rician_k_db,
            tap_powers: powers,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn n_taps(&self) -> usize {
        self.tap_powers.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.tap_powers.is_empty() {
            return Err(Error::Config("channel needs at least one tap".into()));
        }
        if !self.rician_k_db.is_finite() {
            return Err(Error::Config(format!(
                "Rician K must be finite dB, got {}",
                self.rician_k_db
            )));
        }
        if self
            .tap_powers
            .iter()
            .any(|p| !p.is_finite() || *p < 0.0)
        {
            return Err(Error::Config("tap powers must be finite and non-negative".into()));
        }
        let total: f64 = self.tap_powers.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "tap powers must sum to 1, got {total}"
            )));
        }
        Ok(())
    }
}

/// One realised multipath channel: complex taps, first tap first.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    pub taps: Vec<Complex64>,
}

/// A receiver's (imperfect) estimate of a channel; same layout as the
/// channel itself so the two can share the convolution kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    pub taps: Vec<Complex64>,
}

/// Draw one Rician channel realisation.
///
/// The first tap is `√(p₀·K/(K+1))·e^{jθ} + √(p₀/(K+1))·CN(0,1)` with
/// `θ ~ U[0, 2π)` and `K` the linear K-factor; the remaining taps are pure
/// Rayleigh scatter `√(p_i)·CN(0,1)`.  Mean total power is exactly the unit
/// profile sum.
pub fn gen_rician_channel(params: &ChannelParams, rng: &mut RngStream) -> Result<ChannelModel> {
    params.validate()?;
    let k_lin = 10f64.powf(params.rician_k_db / 10.0);
    let los_frac = k_lin / (k_lin + 1.0);
    let scatter_frac = 1.0 / (k_lin + 1.0);

    let mut taps = Vec::with_capacity(params.n_taps());
    for (i, &p) in params.tap_powers.iter().enumerate() {
        let scatter_scale = if i == 0 { p * scatter_frac } else { p };
        let scatter = circular_gaussian(rng) * scatter_scale.sqrt();
        if i == 0 {
            let theta = 2.0 * PI * rng.uniform();
            let los = Complex64::new(theta.cos(), theta.sin()) * (p * los_frac).sqrt();
            taps.push(los + scatter);
        } else {
            taps.push(scatter);
        }
    }
    Ok(ChannelModel { taps })
}

/// Linear convolution truncated to the input length:
/// `out_n = Σ_k h_k · x_{n-k}` for `n` in `0..x.len()`.
pub fn apply_channel(x: &ComplexSignal, channel: &ChannelModel) -> Result<ComplexSignal> {
    if channel.taps.is_empty() {
        return Err(Error::Config("channel needs at least one tap".into()));
    }
    Ok(ComplexSignal::new(
        convolve_truncated(&x.samples, &channel.taps),
        x.sample_rate,
    ))
}

/// Shared convolution kernel for channels and channel estimates.
pub(crate) fn convolve_truncated(x: &[Complex64], taps: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    for (n, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &h) in taps.iter().enumerate().take(n + 1) {
            acc += h * x[n - k];
        }
        *slot = acc;
    }
    out
}

/// Corrupt a channel into the estimate a real receiver would hold.
///
/// Each tap gains an independent circular-Gaussian error whose power is
/// `10^{err_rel_db/10}` times that tap's realised power.  At or below
/// −300 dB the error is treated as exactly zero, giving a perfect estimate.
pub fn perturb_channel_estimate(
    channel: &ChannelModel,
    err_rel_db: f64,
    rng: &mut RngStream,
) -> Result<ChannelEstimate> {
    if err_rel_db.is_nan() {
        return Err(Error::Config("channel-estimate error must not be NaN".into()));
    }
    if err_rel_db > 0.0 {
        return Err(Error::Config(format!(
            "channel-estimate error must be ≤ 0 dB (an estimate no worse than noise-only), got {err_rel_db}"
        )));
    }
    if err_rel_db <= -300.0 {
        return Ok(ChannelEstimate {
            taps: channel.taps.clone(),
        });
    }
    let rel_amp = 10f64.powf(err_rel_db / 20.0);
    let taps = channel
        .taps
        .iter()
        .map(|&h| h + circular_gaussian(rng) * (h.norm() * rel_amp))
        .collect();
    Ok(ChannelEstimate { taps })
}

/// Add complex white Gaussian noise with power `ref_power · 10^{-snr_db/10}`.
///
/// `ref_power` is the mean power of whatever the SNR is quoted against.  A
/// zero noise power (for example `snr_db = +∞` or `ref_power = 0`) returns
/// the input untouched.
pub fn add_awgn(
    x: &ComplexSignal,
    snr_db: f64,
    ref_power: f64,
    rng: &mut RngStream,
) -> Result<ComplexSignal> {
    let noise = gen_awgn(x.len(), noise_power(snr_db, ref_power)?, x.sample_rate, rng)?;
    let samples = x
        .samples
        .iter()
        .zip(&noise.samples)
        .map(|(&s, &z)| s + z)
        .collect();
    Ok(ComplexSignal::new(samples, x.sample_rate))
}

/// Noise power implied by an SNR against a reference power.
pub fn noise_power(snr_db: f64, ref_power: f64) -> Result<f64> {
    if snr_db.is_nan() || !(ref_power.is_finite() && ref_power >= 0.0) {
        return Err(Error::Config(format!(
            "invalid SNR {snr_db} dB against reference power {ref_power}"
        )));
    }
    if snr_db == f64::NEG_INFINITY {
        return Err(Error::Config("SNR of -inf dB would mean infinite noise".into()));
    }
    Ok(ref_power * 10f64.powf(-snr_db / 10.0))
}

/// Draw a circular white Gaussian noise signal of the given mean power.
pub fn gen_awgn(
    n: usize,
    power: f64,
    sample_rate: f64,
    rng: &mut RngStream,
) -> Result<ComplexSignal> {
    if !(power.is_finite() && power >= 0.0) {
        return Err(Error::Config(format!(
            "noise power must be finite and non-negative, got {power}"
        )));
    }
    if power == 0.0 {
        return Ok(ComplexSignal::zeros(n, sample_rate));
    }
    let scale = (power / 2.0).sqrt();
    let samples = (0..n)
        .map(|_| {
            Complex64::new(
                scale * rng.standard_normal(),
                scale * rng.standard_normal(),
            )
        })
        .collect();
    Ok(ComplexSignal::new(samples, sample_rate))
}

/// Scale a signal down by `db` decibels (amplitude factor `10^{-db/20}`).
pub fn attenuate(x: &ComplexSignal, db: f64) -> ComplexSignal {
    let amp = 10f64.powf(-db / 20.0);
    ComplexSignal::new(x.samples.iter().map(|&s| s * amp).collect(), x.sample_rate)
}

/// One unit-variance circularly-symmetric complex Gaussian draw,
/// `(g₁ + j·g₂)/√2`.
fn circular_gaussian(rng: &mut RngStream) -> Complex64 {
    Complex64::new(rng.standard_normal(), rng.standard_normal()) / 2f64.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FS: f64 = 15.36e6;

    #[test]
    fn increment_variance_matches_linewidth() {
        let p = PhaseNoiseParams::new(10.0, 1.0 / FS).unwrap();
        let expect = 2.0 * PI * 10.0 / FS;
        assert!((p.increment_variance() - expect).abs() < 1e-18);
        assert!((p.increment_variance() - 4.0906e-6).abs() < 1e-9);
    }

    #[test]
    fn wiener_path_statistics() {
        let p = PhaseNoiseParams::new(100.0, 1.0 / FS).unwrap();
        let mut rng = RngStream::new(17, "wiener-stats");
        let n = 200_001;
        let path = gen_wiener_pn(&p, n, &mut rng).unwrap();
        assert_eq!(path.phases[0], 0.0);

        let incs: Vec<f64> = path.phases.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = incs.iter().sum::<f64>() / incs.len() as f64;
        let var = incs.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (incs.len() - 1) as f64;
        let expect = p.increment_variance();
        assert!(
            (var / expect - 1.0).abs() < 0.05,
            "increment variance off: {var} vs {expect}"
        );
    }

    #[test]
    fn zero_linewidth_gives_exactly_zero_path() {
        let p = PhaseNoiseParams::new(0.0, 1.0 / FS).unwrap();
        let mut rng = RngStream::new(18, "wiener-zero");
        let path = gen_wiener_pn(&p, 1000, &mut rng).unwrap();
        assert!(path.phases.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn apply_pn_rotates_and_preserves_magnitude() {
        let mut rng = RngStream::new(19, "apply-pn");
        let x = ComplexSignal::new(
            (0..256)
                .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
                .collect(),
            FS,
        );

        let pi_path = PhasePath::constant(PI, x.len());
        let flipped = apply_pn(&x, &pi_path).unwrap();
        for (a, b) in flipped.samples.iter().zip(&x.samples) {
            assert!((a + b).norm() < 1e-12 * b.norm().max(1.0));
        }

        let p = PhaseNoiseParams::new(1000.0, 1.0 / FS).unwrap();
        let path = gen_wiener_pn(&p, x.len(), &mut rng).unwrap();
        let rotated = apply_pn(&x, &path).unwrap();
        for (a, b) in rotated.samples.iter().zip(&x.samples) {
            assert!((a.norm() - b.norm()).abs() <= 1e-12 * b.norm().max(1.0));
        }

        let zero = PhasePath::constant(0.0, x.len());
        let same = apply_pn(&x, &zero).unwrap();
        assert_eq!(same.samples, x.samples);
    }

    #[test]
    fn common_oscillator_doubles_the_path() {
        let p = PhaseNoiseParams::new(10.0, 1.0 / FS).unwrap();
        let mut rng = RngStream::new(20, "combined");
        let path = gen_wiener_pn(&p, 64, &mut rng).unwrap();
        let combined = combined_pn(&path, &path).unwrap();
        for (c, p) in combined.phases.iter().zip(&path.phases) {
            assert_eq!(*c, 2.0 * p);
        }
    }

    #[test]
    fn rician_mean_power_is_normalised() {
        let params = ChannelParams::exponential(6.0, 4, 6.0).unwrap();
        let mut rng = RngStream::new(23, "rician-power");
        let trials = 100_000;
        let mut total = 0.0;
        for _ in 0..trials {
            let ch = gen_rician_channel(&params, &mut rng).unwrap();
            total += ch.taps.iter().map(|t| t.norm_sqr()).sum::<f64>();
        }
        let mean = total / trials as f64;
        assert!(
            (mean - 1.0).abs() < 0.02,
            "mean channel power {mean} should be 1"
        );
    }

    #[test]
    fn huge_k_factor_pins_the_first_tap_magnitude() {
        let params = ChannelParams {
            rician_k_db: 200.0,
            tap_powers: vec![1.0],
        };
        let mut rng = RngStream::new(24, "rician-los");
        for _ in 0..100 {
            let ch = gen_rician_channel(&params, &mut rng).unwrap();
            assert!((ch.taps[0].norm() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn single_tap_channel_scales_the_input() {
        let x = ComplexSignal::new(
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(-2.0, 0.5),
            ],
            FS,
        );
        let ch = ChannelModel {
            taps: vec![Complex64::new(0.0, 2.0)],
        };
        let y = apply_channel(&x, &ch).unwrap();
        for (a, b) in y.samples.iter().zip(&x.samples) {
            assert_eq!(*a, b * Complex64::new(0.0, 2.0));
        }
    }

    #[test]
    fn convolution_matches_hand_computation() {
        // x = [1, j], h = [1, 1] → y = [1, 1+j] truncated to the input length.
        let x = ComplexSignal::new(
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            FS,
        );
        let ch = ChannelModel {
            taps: vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        };
        let y = apply_channel(&x, &ch).unwrap();
        assert_eq!(y.samples[0], Complex64::new(1.0, 0.0));
        assert_eq!(y.samples[1], Complex64::new(1.0, 1.0));
    }

    #[test]
    fn perfect_estimate_below_error_floor() {
        let mut rng = RngStream::new(25, "chest");
        let params = ChannelParams::exponential(30.0, 2, 15.0).unwrap();
        let ch = gen_rician_channel(&params, &mut rng).unwrap();
        let est = perturb_channel_estimate(&ch, -300.0, &mut rng).unwrap();
        assert_eq!(est.taps, ch.taps);
    }

    #[test]
    fn estimate_error_power_tracks_the_requested_level() {
        let mut rng = RngStream::new(26, "chest-power");
        let ch = ChannelModel {
            taps: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)],
        };
        let err_db = -20.0;
        let trials = 200_000;
        let mut err_energy = 0.0;
        let mut ch_energy = 0.0;
        for _ in 0..trials {
            let est = perturb_channel_estimate(&ch, err_db, &mut rng).unwrap();
            for (e, h) in est.taps.iter().zip(&ch.taps) {
                err_energy += (e - h).norm_sqr();
                ch_energy += h.norm_sqr();
            }
        }
        let measured_db = 10.0 * (err_energy / ch_energy).log10();
        assert!(
            (measured_db - err_db).abs() < 0.1,
            "estimate error level {measured_db} dB vs requested {err_db} dB"
        );
    }

    #[test]
    fn awgn_power_matches_the_requested_snr() {
        let mut rng = RngStream::new(27, "awgn");
        let n = 200_000;
        let x = ComplexSignal::zeros(n, FS);
        let snr_db = 7.0;
        let ref_power = 2.5;
        let noisy = add_awgn(&x, snr_db, ref_power, &mut rng).unwrap();
        let measured = noisy.mean_power();
        let expect = ref_power * 10f64.powf(-snr_db / 10.0);
        assert!(
            (measured / expect - 1.0).abs() < 0.02,
            "noise power {measured} vs expected {expect}"
        );
    }

    #[test]
    fn infinite_snr_adds_nothing() {
        let mut rng = RngStream::new(28, "awgn-inf");
        let x = ComplexSignal::new(vec![Complex64::new(0.25, -1.5); 16], FS);
        let noisy = add_awgn(&x, f64::INFINITY, 1.0, &mut rng).unwrap();
        assert_eq!(noisy.samples, x.samples);
        assert!(add_awgn(&x, f64::NEG_INFINITY, 1.0, &mut rng).is_err());
    }

    #[test]
    fn attenuate_by_twenty_db_divides_amplitude_by_ten() {
        let x = ComplexSignal::new(vec![Complex64::new(3.0, -4.0)], FS);
        let y = attenuate(&x, 20.0);
        assert!((y.samples[0] - Complex64::new(0.3, -0.4)).norm() < 1e-15);
        let z = attenuate(&x, 0.0);
        assert_eq!(z.samples, x.samples);
    }

    #[test]
    fn exponential_profile_is_normalised_and_decaying() {
        let p = ChannelParams::exponential(6.0, 4, 6.0).unwrap();
        let total: f64 = p.tap_powers.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for w in p.tap_powers.windows(2) {
            let ratio_db = 10.0 * (w[0] / w[1]).log10();
            assert!((ratio_db - 6.0).abs() < 1e-9);
        }
    }
}
