//! Time-domain phase estimators for digital self-interference cancellation,
//! plus their arithmetic-cost accounting.
//!
//! All three estimators consume the received signal `y` and the receiver's
//! reconstruction `u` of the self-interference (known transmit samples
//! convolved with the estimated channel), and produce one phase per sample:
//!
//! * [`wf_estimate`] — the windowed Wiener-filter tracker.  The frame is cut
//!   into consecutive windows of `M` samples; each window gets the weight
//!   `w = Σ y_m·u_m* / Σ |u_m|²` and every sample in the window shares the
//!   phase `arg(w)`.  A trailing partial window uses its own shorter sums.
//! * [`only_cpe_estimate`] — the same machinery with `M` equal to one whole
//!   OFDM symbol (body plus cyclic prefix): one common phase per symbol,
//!   which corrects the common phase error and nothing else.
//! * [`lpf_estimate`] — the low-pass-filter baseline: the instantaneous
//!   correlation `c_n = y_n·u_n*` is smoothed by a length-`L` centred FIR
//!   (moving average by default, windowed-sinc optionally) and the phase is
//!   read off per sample as `arg` of the filtered sequence.  Frame edges
//!   fall back to shortened symmetric windows, renormalised so a constant
//!   phase is still recovered exactly.
//!
//! # Cost accounting
//!
//! [`op_count`] reports real-arithmetic-operation equivalents per sample
//! under one fixed set of counting rules:
//!
//! * a complex×complex multiply–accumulate counts 4;
//! * a complex×real-tap multiply–accumulate counts 3 (two multiplies, one
//!   accumulate);
//! * `arg`, a division, and an interpolation step count 1 each;
//! * the Wiener-filter window charges its `M` correlation MACs, one
//!   division and one `arg`; the window's reference-energy sum is reusable
//!   side information about the known reference and is not charged;
//! * the low-pass baseline charges per sample: one correlation multiply,
//!   `L` filter-tap MACs, one `arg` and one interpolation step;
//! * the frequency-domain MMSE estimator is scored analytically only: an
//!   `N×N` solve per OFDM symbol of `K` samples with `N = K/2`, i.e.
//!   `N²/K` per sample.

use crate::error::{Error, Result};
use crate::impairments::{convolve_truncated, ChannelEstimate};
use crate::signal::ofdm::OfdmConfig;
use crate::signal::ComplexSignal;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which estimator to run, with its tuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorConfig {
    /// Windowed Wiener filter with `window_m` samples per window.
    WfWindow { window_m: usize },
    /// One phase per OFDM symbol.
    OnlyCpe,
    /// Low-pass filtering of the instantaneous correlation.
    LpfBased { len_l: usize, kind: LpfKind },
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig::WfWindow { window_m: 35 }
    }
}

impl EstimatorConfig {
    /// Short stable name used in result tables.
    pub fn label(&self) -> String {
        match self {
            EstimatorConfig::WfWindow { window_m } => format!("wf_m{window_m}"),
            EstimatorConfig::OnlyCpe => "only_cpe".to_string(),
            EstimatorConfig::LpfBased { len_l, kind } => match kind {
                LpfKind::MovingAverage => format!("lpf_ma_l{len_l}"),
                LpfKind::WindowedSinc => format!("lpf_sinc_l{len_l}"),
            },
        }
    }
}

/// Shape of the baseline's low-pass filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpfKind {
    MovingAverage,
    WindowedSinc,
}

/// A per-sample phase trajectory estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEstimate {
    pub phases: Vec<f64>,
    /// Start sample of every estimation region whose reference energy was
    /// exactly zero; those samples carry phase 0 by convention.
    pub degenerate: Vec<usize>,
}

impl PhaseEstimate {
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Rebuild the receiver's reference: known transmit samples through the
/// estimated channel.  Shares its convolution kernel with the channel
/// application itself, so a perfect estimate reproduces the channel output
/// bit for bit.
pub fn reference_signal(x: &ComplexSignal, est: &ChannelEstimate) -> Result<ComplexSignal> {
    if est.taps.is_empty() {
        return Err(Error::Config("channel estimate needs at least one tap".into()));
    }
    Ok(ComplexSignal::new(
        convolve_truncated(&x.samples, &est.taps),
        x.sample_rate,
    ))
}

/// The Wiener weight of one window: `w = Σ y_m·u_m* / Σ |u_m|²`.
///
/// Returns a degenerate-window error when the reference energy is exactly
/// zero; the caller decides how to fall back.
pub fn wf_window_weight(y: &[Complex64], u: &[Complex64]) -> Result<Complex64> {
    if y.len() != u.len() {
        return Err(Error::Input(format!(
            "window slices differ in length: {} vs {}",
            y.len(),
            u.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::Input("window must not be empty".into()));
    }
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (ym, um) in y.iter().zip(u) {
        num += ym * um.conj();
        den += um.norm_sqr();
    }
    if den == 0.0 {
        return Err(Error::DegenerateWindow {
            start: 0,
            len: y.len(),
        });
    }
    Ok(num / den)
}

/// Windowed Wiener-filter phase tracker.
///
/// Sample `n` belongs to window `⌊n/M⌋`; each window's phase is the `arg`
/// of its [`wf_window_weight`], shared by all its samples.  A final partial
/// window is estimated from its own samples.  Windows with zero reference
/// energy yield phase 0 and are listed in
/// [`PhaseEstimate::degenerate`].
pub fn wf_estimate(y: &ComplexSignal, u: &ComplexSignal, window_m: usize) -> Result<PhaseEstimate> {
    if window_m == 0 {
        return Err(Error::Config("window length must be at least 1".into()));
    }
    if y.len() != u.len() {
        return Err(Error::Input(format!(
            "received and reference signals differ in length: {} vs {}",
            y.len(),
            u.len()
        )));
    }
    let n = y.len();
    let mut phases = vec![0.0; n];
    let mut degenerate = Vec::new();
    let mut start = 0;
    while start < n {
        let end = (start + window_m).min(n);
        match wf_window_weight(&y.samples[start..end], &u.samples[start..end]) {
            Ok(w) => {
                let phi = w.arg();
                for p in &mut phases[start..end] {
                    *p = phi;
                }
            }
            Err(Error::DegenerateWindow { .. }) => degenerate.push(start),
            Err(e) => return Err(e),
        }
        start = end;
    }
    Ok(PhaseEstimate { phases, degenerate })
}

/// Common-phase-error-only baseline: one phase per whole OFDM symbol
/// (cyclic prefix included).  Defined as — and implemented by — the
/// Wiener-filter tracker with `M` equal to the symbol length, so results
/// coincide bit for bit.  The input must hold whole symbols.
pub fn only_cpe_estimate(
    y: &ComplexSignal,
    u: &ComplexSignal,
    cfg: &OfdmConfig,
) -> Result<PhaseEstimate> {
    let m = cfg.symbol_len();
    if y.len() % m != 0 {
        return Err(Error::Input(format!(
            "signal length {} is not a whole number of {m}-sample OFDM symbols",
            y.len()
        )));
    }
    wf_estimate(y, u, m)
}

/// Low-pass-filter baseline.
///
/// See the module docs for the filter definition and edge policy.
pub fn lpf_estimate(
    y: &ComplexSignal,
    u: &ComplexSignal,
    len_l: usize,
    kind: LpfKind,
) -> Result<PhaseEstimate> {
    if len_l == 0 {
        return Err(Error::Config("filter length must be at least 1".into()));
    }
    if y.len() != u.len() {
        return Err(Error::Input(format!(
            "received and reference signals differ in length: {} vs {}",
            y.len(),
            u.len()
        )));
    }
    let n = y.len();
    let corr: Vec<Complex64> = y
        .samples
        .iter()
        .zip(&u.samples)
        .map(|(ym, um)| ym * um.conj())
        .collect();

    let kernel = lpf_kernel(len_l, kind);
    let center = (len_l - 1) / 2;
    let right_reach = len_l - 1 - center;

    let mut phases = vec![0.0; n];
    for i in 0..n {
        let filtered = if i >= center && i + right_reach < n {
            // Full kernel (already normalised to unit DC gain).
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &w) in kernel.iter().enumerate() {
                acc += corr[i + j - center] * w;
            }
            acc
        } else {
            // Shortened symmetric window around i, renormalised so a
            // constant input passes through unchanged.  The half-width is
            // capped by the signal edges and by the kernel's shorter arm.
            let d = i.min(n - 1 - i).min(center).min(right_reach);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut weight = 0.0;
            for off in 0..=2 * d {
                let j = center + off - d;
                acc += corr[i + off - d] * kernel[j];
                weight += kernel[j];
            }
            if weight != 0.0 {
                acc / weight
            } else {
                acc
            }
        };
        phases[i] = filtered.arg();
    }

    let degenerate = if u.samples.iter().all(|s| s.norm_sqr() == 0.0) {
        vec![0]
    } else {
        Vec::new()
    };
    Ok(PhaseEstimate { phases, degenerate })
}

/// Filter taps, normalised to unit DC gain.
fn lpf_kernel(len_l: usize, kind: LpfKind) -> Vec<f64> {
    match kind {
        LpfKind::MovingAverage => vec![1.0 / len_l as f64; len_l],
        LpfKind::WindowedSinc => {
            if len_l == 1 {
                return vec![1.0];
            }
            // Hamming-windowed sinc with cutoff 1/L cycles per sample — the
            // same bandwidth scale as the length-L average.
            let cutoff = 1.0 / len_l as f64;
            let center = (len_l - 1) as f64 / 2.0;
            let mut taps: Vec<f64> = (0..len_l)
                .map(|i| {
                    let t = i as f64 - center;
                    let s = sinc(2.0 * cutoff * t);
                    let w = 0.54 - 0.46 * (2.0 * PI * i as f64 / (len_l - 1) as f64).cos();
                    s * w
                })
                .collect();
            let total: f64 = taps.iter().sum();
            for t in &mut taps {
                *t /= total;
            }
            taps
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Subtract the phase-corrected reference: `e_n = y_n − u_n·e^{jφ̂_n}`.
pub fn mitigate_and_cancel(
    y: &ComplexSignal,
    u: &ComplexSignal,
    phi: &PhaseEstimate,
) -> Result<ComplexSignal> {
    if y.len() != u.len() || y.len() != phi.len() {
        return Err(Error::Input(format!(
            "length mismatch: y has {}, u has {}, phase estimate has {}",
            y.len(),
            u.len(),
            phi.len()
        )));
    }
    let samples = y
        .samples
        .iter()
        .zip(&u.samples)
        .zip(&phi.phases)
        .map(|((&ym, &um), &p)| ym - um * Complex64::new(p.cos(), p.sin()))
        .collect();
    Ok(ComplexSignal::new(samples, y.sample_rate))
}

/// Run whichever estimator the configuration names.
pub fn run_estimator(
    y: &ComplexSignal,
    u: &ComplexSignal,
    est: &EstimatorConfig,
    ofdm: &OfdmConfig,
) -> Result<PhaseEstimate> {
    match est {
        EstimatorConfig::WfWindow { window_m } => wf_estimate(y, u, *window_m),
        EstimatorConfig::OnlyCpe => only_cpe_estimate(y, u, ofdm),
        EstimatorConfig::LpfBased { len_l, kind } => lpf_estimate(y, u, *len_l, *kind),
    }
}

/// What to score in [`op_count`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexityModel {
    WfWindow { window_m: usize },
    LpfBased { len_l: usize },
    /// Frequency-domain MMSE reference, scored analytically: an `N×N` solve
    /// per `k_per_symbol`-sample OFDM symbol with `N = k_per_symbol/2`.
    TdMmseAnalytic { k_per_symbol: usize },
}

/// Real-arithmetic-operation-equivalent tallies; see the module docs for
/// the counting rules.  Fields are fractional because analytic models
/// amortise whole-symbol costs over samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpCount {
    pub real_mults: f64,
    pub real_adds: f64,
    pub divisions: f64,
    pub arg_evals: f64,
    pub n_samples: usize,
}

impl OpCount {
    pub fn total(&self) -> f64 {
        self.real_mults + self.real_adds + self.divisions + self.arg_evals
    }

    pub fn per_sample(&self) -> f64 {
        self.total() / self.n_samples as f64
    }
}

/// Score an estimator's arithmetic cost over `n_samples` samples.
pub fn op_count(model: ComplexityModel, n_samples: usize) -> Result<OpCount> {
    if n_samples == 0 {
        return Err(Error::Input("cannot score an empty signal".into()));
    }
    match model {
        ComplexityModel::WfWindow { window_m } => {
            if window_m == 0 {
                return Err(Error::Config("window length must be at least 1".into()));
            }
            let n_windows = n_samples.div_ceil(window_m) as f64;
            Ok(OpCount {
                real_mults: 4.0 * n_samples as f64,
                real_adds: 0.0,
                divisions: n_windows,
                arg_evals: n_windows,
                n_samples,
            })
        }
        ComplexityModel::LpfBased { len_l } => {
            if len_l == 0 {
                return Err(Error::Config("filter length must be at least 1".into()));
            }
            let n = n_samples as f64;
            let l = len_l as f64;
            Ok(OpCount {
                // Correlation multiply (4) plus two real multiplies per tap.
                real_mults: n * (4.0 + 2.0 * l),
                // One accumulate per tap plus the interpolation step.
                real_adds: n * (l + 1.0),
                divisions: 0.0,
                arg_evals: n,
                n_samples,
            })
        }
        ComplexityModel::TdMmseAnalytic { k_per_symbol } => {
            if k_per_symbol < 2 || k_per_symbol % 2 != 0 {
                return Err(Error::Config(format!(
                    "analytic MMSE model needs an even symbol length ≥ 2, got {k_per_symbol}"
                )));
            }
            let n_est = (k_per_symbol / 2) as f64;
            Ok(OpCount {
                real_mults: n_samples as f64 * n_est * n_est / k_per_symbol as f64,
                real_adds: 0.0,
                divisions: 0.0,
                arg_evals: 0.0,
                n_samples,
            })
        }
    }
}
