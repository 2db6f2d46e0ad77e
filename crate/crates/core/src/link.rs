//! End-to-end link trials and Monte-Carlo sweeps.
//!
//! One trial builds the received signal
//! `y = [(x^I·e^{jφ_tx}) * h^I + (x^S·e^{jφ_tx,S}) * h^S]·e^{jφ_rx} + z`
//! — self-interference and signal-of-interest frames through their own
//! channels and oscillator paths — plus the receiver's reference
//! `u = x^I * ĥ^I`, runs the configured phase estimator, and cancels.
//!
//! Power bookkeeping happens at the digital canceller input: the realised
//! SI frame is normalised to unit mean power there (the channel estimate is
//! taken of the same scaled channel, as a real receiver would), the SOI is
//! scaled to `10^{sir/10}`, and AWGN power is set by an SNR quoted against
//! the SOI.  When the scenario is given a channel-attenuation difference
//! instead of an SIR, the two are linked by
//! `sir_at_digital_db = atten_diff_db + analog_sic_db`: the difference is
//! quoted after antenna separation but before analog cancellation, and the
//! analog stage attenuates only the self-interference on its way to the
//! digital input.
//!
//! Every random quantity in trial `i` of a run seeded `s` comes from
//! labelled forks of `RngStream::new(s, "trial/i")`, so results do not
//! depend on execution order or thread count, and any sweep using the same
//! `(seed, trial)` pair sees the identical channel, data, noise and phase
//! draws.

use crate::error::{Error, Result};
use crate::estimators::{
    mitigate_and_cancel, reference_signal, run_estimator, EstimatorConfig, LpfKind, PhaseEstimate,
};
use crate::impairments::{
    apply_channel, apply_pn, combined_pn, gen_awgn, gen_rician_channel, gen_wiener_pn,
    noise_power, perturb_channel_estimate, ChannelModel, ChannelParams, OscillatorMode,
    PhaseNoiseParams, PhasePath,
};
use crate::rng::RngStream;
use crate::signal::ofdm::{ofdm_modulate, OfdmConfig};
use crate::signal::qam::qam_map;
use crate::signal::ComplexSignal;
use num_complex::Complex64;
use rayon::prelude::*;

/// Suppression values are clamped here; reaching the cap means the residual
/// was zero or indistinguishable from rounding noise.
pub const SUPPRESSION_CAP_DB: f64 = 300.0;

/// How the signal-of-interest level is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SirSpec {
    /// SOI-to-SI power ratio at the digital canceller input, in dB.
    AtDigital(f64),
    /// SOI-to-SI power difference after antenna separation but before the
    /// analog canceller, in dB.
    AttenDiff(f64),
}

impl SirSpec {
    /// The SOI-to-SI ratio at the digital input implied by this
    /// specification.
    pub fn sir_at_digital_db(&self, analog_sic_db: f64) -> f64 {
        match *self {
            SirSpec::AtDigital(v) => v,
            SirSpec::AttenDiff(d) => d + analog_sic_db,
        }
    }
}

/// Complete description of one simulated operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkScenario {
    pub ofdm: OfdmConfig,
    pub pn: PhaseNoiseParams,
    /// Diagnostic override: freeze the combined self-interference phase at
    /// this constant (and the independent SOI oscillator at zero) instead of
    /// drawing Wiener paths.
    pub constant_phase_rad: Option<f64>,
    pub oscillator: OscillatorMode,
    pub si_channel: ChannelParams,
    pub soi_channel: ChannelParams,
    /// Per-tap channel-estimate error relative to the tap power, in dB;
    /// at or below −300 dB the estimate is exact.
    pub channel_est_err_db: f64,
    pub antenna_sep_db: f64,
    pub analog_sic_db: f64,
    pub sir: SirSpec,
    /// AWGN level, quoted against the SOI power at the digital input.
    pub snr_soi_db: f64,
    pub estimator: EstimatorConfig,
    pub seed: u64,
    pub n_trials: usize,
}

impl Default for LinkScenario {
    fn default() -> Self {
        let ofdm = OfdmConfig::default();
        let pn = PhaseNoiseParams {
            beta_hz: 10.0,
            ts_s: ofdm.sample_period(),
        };
        LinkScenario {
            ofdm,
            pn,
            constant_phase_rad: None,
            oscillator: OscillatorMode::Common,
            si_channel: ChannelParams::exponential(30.0, 2, 15.0)
                .expect("default SI channel is valid"),
            soi_channel: ChannelParams::exponential(6.0, 4, 6.0)
                .expect("default SOI channel is valid"),
            channel_est_err_db: -40.0,
            antenna_sep_db: 30.0,
            analog_sic_db: 30.0,
            sir: SirSpec::AtDigital(-30.0),
            snr_soi_db: 25.0,
            estimator: EstimatorConfig::default(),
            seed: 1,
            n_trials: 200,
        }
    }
}

impl LinkScenario {
    pub fn validate(&self) -> Result<()> {
        self.ofdm.validate()?;
        self.pn.validate()?;
        if (self.pn.ts_s * self.ofdm.sample_rate - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "phase-noise sample period {} does not match the OFDM sample rate {}",
                self.pn.ts_s, self.ofdm.sample_rate
            )));
        }
        if let Some(c) = self.constant_phase_rad {
            if !c.is_finite() {
                return Err(Error::Config(format!(
                    "constant phase override must be finite, got {c}"
                )));
            }
        }
        self.si_channel.validate()?;
        self.soi_channel.validate()?;
        if self.channel_est_err_db.is_nan() || self.channel_est_err_db > 0.0 {
            return Err(Error::Config(format!(
                "channel-estimate error must be ≤ 0 dB, got {}",
                self.channel_est_err_db
            )));
        }
        for (name, v) in [
            ("antenna_sep_db", self.antenna_sep_db),
            ("analog_sic_db", self.analog_sic_db),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        let sir = self.sir.sir_at_digital_db(self.analog_sic_db);
        if sir.is_nan() || sir == f64::INFINITY {
            return Err(Error::Config(format!(
                "SOI-to-SI ratio at the digital input must not be NaN or +inf, got {sir}"
            )));
        }
        if self.snr_soi_db.is_nan() || self.snr_soi_db == f64::NEG_INFINITY {
            return Err(Error::Config(format!(
                "SNR against the SOI must not be NaN or -inf, got {}",
                self.snr_soi_db
            )));
        }
        match self.estimator {
            EstimatorConfig::WfWindow { window_m } if window_m == 0 => {
                return Err(Error::Config("estimator window must be at least 1 sample".into()))
            }
            EstimatorConfig::LpfBased { len_l, .. } if len_l == 0 => {
                return Err(Error::Config("estimator filter must be at least 1 tap".into()))
            }
            _ => {}
        }
        if self.n_trials == 0 {
            return Err(Error::Config("n_trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Scenario description as ordered key/value pairs, stable across runs,
    /// suitable for embedding in result files.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut md = Vec::new();
        let mut put = |k: &str, v: String| md.push((k.to_string(), v));
        put("ofdm.n_fft", self.ofdm.n_fft.to_string());
        put("ofdm.n_used", self.ofdm.used_subcarriers.len().to_string());
        put("ofdm.cp_len", self.ofdm.cp_len.to_string());
        put("ofdm.qam_order", self.ofdm.qam_order.points().to_string());
        put("ofdm.sample_rate_hz", format_f64(self.ofdm.sample_rate));
        put("ofdm.n_symbols", self.ofdm.n_symbols.to_string());
        put("pn.beta_hz", format_f64(self.pn.beta_hz));
        put(
            "pn.oscillator",
            match self.oscillator {
                OscillatorMode::Common => "common".to_string(),
                OscillatorMode::Independent => "independent".to_string(),
            },
        );
        if let Some(c) = self.constant_phase_rad {
            put("pn.constant_phase_rad", format_f64(c));
        }
        put("si_channel.k_db", format_f64(self.si_channel.rician_k_db));
        put("si_channel.tap_powers", format_f64_list(&self.si_channel.tap_powers));
        put("soi_channel.k_db", format_f64(self.soi_channel.rician_k_db));
        put(
            "soi_channel.tap_powers",
            format_f64_list(&self.soi_channel.tap_powers),
        );
        put("channel.est_err_rel_db", format_f64(self.channel_est_err_db));
        put("link.antenna_sep_db", format_f64(self.antenna_sep_db));
        put("link.analog_sic_db", format_f64(self.analog_sic_db));
        match self.sir {
            SirSpec::AtDigital(v) => put("link.sir_at_digital_db", format_f64(v)),
            SirSpec::AttenDiff(d) => {
                put("link.atten_diff_db", format_f64(d));
                put(
                    "link.sir_at_digital_db",
                    format_f64(self.sir.sir_at_digital_db(self.analog_sic_db)),
                );
                put(
                    "link.sir_linkage",
                    "sir_at_digital_db = atten_diff_db + analog_sic_db".to_string(),
                );
            }
        }
        put("link.snr_soi_db", format_f64(self.snr_soi_db));
        put("estimator", self.estimator.label());
        put("run.seed", self.seed.to_string());
        put("run.n_trials", self.n_trials.to_string());
        put(
            "metric",
            "SI suppression 10*log10(P_si / P_residual_si) in dB, capped at +300".to_string(),
        );
        md
    }
}

fn format_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

fn format_f64_list(vs: &[f64]) -> String {
    vs.iter().map(|&v| format_f64(v)).collect::<Vec<_>>().join(",")
}

/// Everything a trial produced before and after estimation.
#[derive(Debug, Clone)]
pub struct TrialArtifacts {
    /// Received signal at the digital canceller input.
    pub y: ComplexSignal,
    /// Receiver's reconstruction of the SI (known data through the
    /// estimated channel).
    pub u: ComplexSignal,
    /// Oracle: the SI component of `y` alone.
    pub si_true: ComplexSignal,
    /// Oracle: the SOI component of `y` alone.
    pub soi: ComplexSignal,
    /// Oracle: the additive noise component of `y` alone.
    pub noise: ComplexSignal,
    /// Oracle: the combined oscillator phase on the SI path.
    pub combined_phase: PhasePath,
    pub phi_hat: PhaseEstimate,
    /// Canceller output `y − u·e^{jφ̂}`.
    pub residual: ComplexSignal,
}

/// The estimator-independent part of a trial.
#[derive(Debug, Clone)]
pub struct TrialSignals {
    pub y: ComplexSignal,
    pub u: ComplexSignal,
    pub si_true: ComplexSignal,
    pub soi: ComplexSignal,
    pub noise: ComplexSignal,
    pub combined_phase: PhasePath,
}

/// Draw every signal of trial `trial_idx` under scenario `s`.
///
/// Deterministic in `(s.seed, trial_idx)` and the scenario parameters; the
/// estimator choice plays no part.
pub fn gen_trial_signals(s: &LinkScenario, trial_idx: usize) -> Result<TrialSignals> {
    s.validate()?;
    let root = RngStream::new(s.seed, &format!("trial/{trial_idx}"));
    let n = s.ofdm.frame_len();
    let fs = s.ofdm.sample_rate;

    // Oscillator trajectories.
    let (tx_si_path, rx_path, tx_soi_path) = match s.constant_phase_rad {
        Some(c) => (
            PhasePath::constant(c, n),
            PhasePath::constant(0.0, n),
            PhasePath::constant(0.0, n),
        ),
        None => {
            let tx_si = gen_wiener_pn(&s.pn, n, &mut root.fork("pn-si-tx"))?;
            let rx = match s.oscillator {
                OscillatorMode::Common => tx_si.clone(),
                OscillatorMode::Independent => gen_wiener_pn(&s.pn, n, &mut root.fork("pn-rx"))?,
            };
            let tx_soi = gen_wiener_pn(&s.pn, n, &mut root.fork("pn-soi-tx"))?;
            (tx_si, rx, tx_soi)
        }
    };
    let combined_phase = combined_pn(&tx_si_path, &rx_path)?;

    // Self-interference frame through its channel, normalised to unit mean
    // power at the digital input.  The scaled channel is what the receiver
    // estimates.
    let x_si = random_frame(&s.ofdm, &mut root.fork("si-bits"))?;
    let si_rotated = apply_pn(&x_si, &tx_si_path)?;
    let h_si = gen_rician_channel(&s.si_channel, &mut root.fork("si-chan"))?;
    let raw = apply_channel(&si_rotated, &h_si)?;
    let p_raw = raw.mean_power();
    if p_raw == 0.0 {
        return Err(Error::UndefinedMetric(
            "self-interference frame has zero power; cannot normalise".into(),
        ));
    }
    let h_si_eff = scale_channel(&h_si, 1.0 / p_raw.sqrt());
    let si_at_input = apply_channel(&si_rotated, &h_si_eff)?;
    let si_true = apply_pn(&si_at_input, &rx_path)?;

    // Signal of interest, scaled to the requested ratio at the digital input.
    let sir_db = s.sir.sir_at_digital_db(s.analog_sic_db);
    let p_soi_target = 10f64.powf(sir_db / 10.0);
    let soi = if p_soi_target == 0.0 {
        ComplexSignal::zeros(n, fs)
    } else {
        let x_soi = random_frame(&s.ofdm, &mut root.fork("soi-bits"))?;
        let soi_rotated = apply_pn(&x_soi, &tx_soi_path)?;
        let h_soi = gen_rician_channel(&s.soi_channel, &mut root.fork("soi-chan"))?;
        let raw_soi = apply_channel(&soi_rotated, &h_soi)?;
        let p_raw_soi = raw_soi.mean_power();
        if p_raw_soi == 0.0 {
            return Err(Error::UndefinedMetric(
                "signal-of-interest frame has zero power; cannot scale".into(),
            ));
        }
        let h_soi_eff = scale_channel(&h_soi, (p_soi_target / p_raw_soi).sqrt());
        let soi_at_input = apply_channel(&soi_rotated, &h_soi_eff)?;
        apply_pn(&soi_at_input, &rx_path)?
    };

    // Thermal noise, quoted against the SOI.
    let p_noise = noise_power(s.snr_soi_db, p_soi_target)?;
    let noise = gen_awgn(n, p_noise, fs, &mut root.fork("awgn"))?;

    // Received signal, exactly the sum of its parts.
    let y = ComplexSignal::new(
        (0..n)
            .map(|i| si_true.samples[i] + soi.samples[i] + noise.samples[i])
            .collect(),
        fs,
    );

    // Receiver's reference from the imperfect channel estimate.
    let h_hat = perturb_channel_estimate(&h_si_eff, s.channel_est_err_db, &mut root.fork("chan-err"))?;
    let u = reference_signal(&x_si, &h_hat)?;

    Ok(TrialSignals {
        y,
        u,
        si_true,
        soi,
        noise,
        combined_phase,
    })
}

/// One full trial: draw signals, estimate, cancel.
pub fn run_trial(s: &LinkScenario, trial_idx: usize) -> Result<TrialArtifacts> {
    let sig = gen_trial_signals(s, trial_idx)?;
    let phi_hat = run_estimator(&sig.y, &sig.u, &s.estimator, &s.ofdm)?;
    let residual = mitigate_and_cancel(&sig.y, &sig.u, &phi_hat)?;
    Ok(TrialArtifacts {
        y: sig.y,
        u: sig.u,
        si_true: sig.si_true,
        soi: sig.soi,
        noise: sig.noise,
        combined_phase: sig.combined_phase,
        phi_hat,
        residual,
    })
}

fn random_frame(ofdm: &OfdmConfig, rng: &mut RngStream) -> Result<ComplexSignal> {
    let bits = rng.bits(ofdm.symbols_per_frame() * ofdm.qam_order.bits_per_symbol());
    let data = qam_map(&bits, ofdm.qam_order)?;
    ofdm_modulate(&data, ofdm)
}

fn scale_channel(ch: &ChannelModel, amp: f64) -> ChannelModel {
    ChannelModel {
        taps: ch.taps.iter().map(|&t| t * amp).collect(),
    }
}

/// Self-interference suppression achieved by a phase estimate:
/// `10·log10(Σ|si|² / Σ|si − u·e^{jφ̂}|²)`, measured against the oracle SI
/// component and capped at [`SUPPRESSION_CAP_DB`].
pub fn si_suppression_db(
    si_true: &ComplexSignal,
    u: &ComplexSignal,
    phi_hat: &PhaseEstimate,
) -> Result<f64> {
    if si_true.len() != u.len() || si_true.len() != phi_hat.len() {
        return Err(Error::Input(format!(
            "length mismatch: si has {}, u has {}, phase estimate has {}",
            si_true.len(),
            u.len(),
            phi_hat.len()
        )));
    }
    let num = si_true.energy();
    if num == 0.0 {
        return Err(Error::UndefinedMetric(
            "suppression of a zero-power SI component is undefined".into(),
        ));
    }
    let mut den = 0.0;
    for ((&si, &um), &p) in si_true
        .samples
        .iter()
        .zip(&u.samples)
        .zip(&phi_hat.phases)
    {
        den += (si - um * Complex64::new(p.cos(), p.sin())).norm_sqr();
    }
    if den == 0.0 {
        return Ok(SUPPRESSION_CAP_DB);
    }
    Ok((10.0 * (num / den).log10()).min(SUPPRESSION_CAP_DB))
}

/// Suppression for one estimator on already-drawn trial signals.
pub fn trial_suppression_db(
    sig: &TrialSignals,
    est: &EstimatorConfig,
    ofdm: &OfdmConfig,
) -> Result<f64> {
    let phi = run_estimator(&sig.y, &sig.u, est, ofdm)?;
    si_suppression_db(&sig.si_true, &sig.u, &phi)
}

/// Aggregated sweep output: one row per x value, one `(mean, ci95)` cell
/// per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Name of the swept quantity, e.g. `beta_hz`.
    pub x_name: String,
    pub x_values: Vec<f64>,
    /// Column labels, e.g. estimator names.
    pub columns: Vec<String>,
    /// `cells[i][j]`: mean suppression and 95% CI half-width in dB for
    /// `x_values[i]` under `columns[j]`.
    pub cells: Vec<Vec<(f64, f64)>>,
    /// Ordered description of the generating configuration.
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == label)
    }
}

/// The estimator set every comparison sweep reports: the configured
/// Wiener-filter window, the per-symbol baseline, and the configured
/// low-pass baseline.
pub fn comparison_estimators(s: &LinkScenario) -> [EstimatorConfig; 3] {
    let wf = match s.estimator {
        EstimatorConfig::WfWindow { .. } => s.estimator,
        _ => EstimatorConfig::default(),
    };
    let lpf = match s.estimator {
        EstimatorConfig::LpfBased { .. } => s.estimator,
        _ => EstimatorConfig::LpfBased {
            len_l: 50,
            kind: LpfKind::MovingAverage,
        },
    };
    [wf, EstimatorConfig::OnlyCpe, lpf]
}

/// Mean and 95% confidence half-width (normal approximation) of `vals`,
/// accumulated in index order so results do not depend on scheduling.
fn mean_ci95(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    if vals.len() < 2 {
        return (mean, 0.0);
    }
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * (var / n).sqrt())
}

/// Suppression versus oscillator linewidth for the three-estimator
/// comparison set.
pub fn sweep_beta(template: &LinkScenario, betas: &[f64]) -> Result<SweepResult> {
    template.validate()?;
    if betas.is_empty() {
        return Err(Error::Input("sweep needs at least one linewidth".into()));
    }
    for &b in betas {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::Config(format!(
                "linewidth values must be finite and non-negative, got {b}"
            )));
        }
    }
    let estimators = comparison_estimators(template);
    let columns: Vec<String> = estimators.iter().map(|e| e.label()).collect();

    let mut cells = Vec::with_capacity(betas.len());
    for &beta in betas {
        let mut s = template.clone();
        s.pn.beta_hz = beta;
        cells.push(run_comparison_point(&s, &estimators)?);
    }

    let mut metadata = template.metadata();
    metadata.push(("sweep.x".into(), "beta_hz".into()));
    metadata.push(("sweep.betas_hz".into(), format_f64_list(betas)));
    Ok(SweepResult {
        x_name: "beta_hz".into(),
        x_values: betas.to_vec(),
        columns,
        cells,
        metadata,
    })
}

/// Suppression versus the SOI/SI power difference before analog
/// cancellation, for the three-estimator comparison set.
pub fn sweep_atten_diff(template: &LinkScenario, diffs: &[f64]) -> Result<SweepResult> {
    template.validate()?;
    if diffs.is_empty() {
        return Err(Error::Input("sweep needs at least one attenuation difference".into()));
    }
    let estimators = comparison_estimators(template);
    let columns: Vec<String> = estimators.iter().map(|e| e.label()).collect();

    let mut cells = Vec::with_capacity(diffs.len());
    for &diff in diffs {
        let mut s = template.clone();
        s.sir = SirSpec::AttenDiff(diff);
        s.validate()?;
        cells.push(run_comparison_point(&s, &estimators)?);
    }

    let mut metadata = template.metadata();
    metadata.push(("sweep.x".into(), "atten_diff_db".into()));
    metadata.push(("sweep.atten_diffs_db".into(), format_f64_list(diffs)));
    Ok(SweepResult {
        x_name: "atten_diff_db".into(),
        x_values: diffs.to_vec(),
        columns,
        cells,
        metadata,
    })
}

/// Wiener-filter suppression versus window length, one column per
/// SOI-to-SI ratio at the digital input.
pub fn sweep_window(
    template: &LinkScenario,
    window_sizes: &[usize],
    sirs_db: &[f64],
) -> Result<SweepResult> {
    template.validate()?;
    if window_sizes.is_empty() || sirs_db.is_empty() {
        return Err(Error::Input(
            "window sweep needs at least one window size and one SOI-to-SI ratio".into(),
        ));
    }
    if window_sizes.contains(&0) {
        return Err(Error::Config("window sizes must be at least 1".into()));
    }

    let columns: Vec<String> = sirs_db.iter().map(|&v| format!("sir_{}db", format_f64(v))).collect();

    // cells[i][j]: window_sizes[i] × sirs_db[j].  Signals are drawn once per
    // (ratio, trial) and reused across window sizes.
    let mut cells = vec![Vec::with_capacity(sirs_db.len()); window_sizes.len()];
    for &sir in sirs_db {
        let mut s = template.clone();
        s.sir = SirSpec::AtDigital(sir);
        s.validate()?;

        let per_trial: Vec<Vec<f64>> = (0..s.n_trials)
            .into_par_iter()
            .map(|t| {
                let sig = gen_trial_signals(&s, t)?;
                window_sizes
                    .iter()
                    .map(|&m| {
                        trial_suppression_db(
                            &sig,
                            &EstimatorConfig::WfWindow { window_m: m },
                            &s.ofdm,
                        )
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;

        for (i, _) in window_sizes.iter().enumerate() {
            let vals: Vec<f64> = per_trial.iter().map(|row| row[i]).collect();
            cells[i].push(mean_ci95(&vals));
        }
    }

    let mut metadata = template.metadata();
    metadata.push(("sweep.x".into(), "window_m".into()));
    metadata.push((
        "sweep.window_sizes".into(),
        window_sizes
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(","),
    ));
    metadata.push(("sweep.window_sirs_db".into(), format_f64_list(sirs_db)));
    Ok(SweepResult {
        x_name: "window_m".into(),
        x_values: window_sizes.iter().map(|&m| m as f64).collect(),
        columns,
        cells,
        metadata,
    })
}

/// Monte-Carlo over trials at one operating point, evaluating several
/// estimators on shared signal draws.
fn run_comparison_point(
    s: &LinkScenario,
    estimators: &[EstimatorConfig],
) -> Result<Vec<(f64, f64)>> {
    let per_trial: Vec<Vec<f64>> = (0..s.n_trials)
        .into_par_iter()
        .map(|t| {
            let sig = gen_trial_signals(s, t)?;
            estimators
                .iter()
                .map(|e| trial_suppression_db(&sig, e, &s.ofdm))
                .collect()
        })
        .collect::<Result<_>>()?;

    Ok((0..estimators.len())
        .map(|j| {
            let vals: Vec<f64> = per_trial.iter().map(|row| row[j]).collect();
            mean_ci95(&vals)
        })
        .collect())
}
