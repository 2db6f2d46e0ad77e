//! Frequency-domain view of a phase-noise trajectory.
//!
//! Over one N-sample block, multiplying a signal by `e^{jφ_n}` in time is a
//! normalised circular convolution with `J_k = Σ_n e^{jφ_n} e^{-j2πnk/N}` in
//! frequency.  `J_0/N` is the common phase error (CPE) every subcarrier sees
//! identically; the remaining bins leak energy between subcarriers
//! (inter-carrier interference, ICI).  These routines exist mostly as
//! validation oracles for the time-domain estimators, so the convolution
//! sums are evaluated literally rather than through a transform.

use crate::error::{Error, Result};
use crate::impairments::PhasePath;
use crate::signal::fourier::dft;
use crate::signal::Spectrum;
use num_complex::Complex64;

/// DFT of one block of the multiplicative phase-noise term `e^{jφ_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PnSpectrum {
    pub j: Spectrum,
}

impl PnSpectrum {
    pub fn len(&self) -> usize {
        self.j.len()
    }

    pub fn is_empty(&self) -> bool {
        self.j.is_empty()
    }

    /// The common-phase-error term `J_0/N`; its magnitude never exceeds 1.
    pub fn cpe(&self) -> Complex64 {
        self.j.bins[0] / self.len() as f64
    }
}

/// Transform one block of a phase path: `J_k = Σ_n e^{jφ_n} e^{-j2πnk/N}`.
pub fn pn_dft(path: &PhasePath) -> Result<PnSpectrum> {
    if path.is_empty() {
        return Err(Error::Input("phase path block must not be empty".into()));
    }
    let exp: Vec<Complex64> = path
        .phases
        .iter()
        .map(|&phi| Complex64::new(phi.cos(), phi.sin()))
        .collect();
    Ok(PnSpectrum {
        j: Spectrum::new(dft(&exp)),
    })
}

/// Combine the transmit- and receive-side spectra into the spectrum of the
/// summed phase path: `J^c_k = (1/N) Σ_m J^t_m · J^r_{(k-m) mod N}`.
///
/// Because `e^{j(φ^t+φ^r)} = e^{jφ^t}·e^{jφ^r}`, this equals
/// `pn_dft(combined_pn(tx, rx))` up to rounding.
pub fn combine_spectra(tx: &PnSpectrum, rx: &PnSpectrum) -> Result<PnSpectrum> {
    let n = tx.len();
    if n != rx.len() {
        return Err(Error::Input(format!(
            "spectra differ in length: {} vs {}",
            n,
            rx.len()
        )));
    }
    if n == 0 {
        return Err(Error::Input("spectra must not be empty".into()));
    }
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    for (k, bin) in bins.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..n {
            let idx = (k + n - m) % n;
            acc += tx.j.bins[m] * rx.j.bins[idx];
        }
        *bin = acc / n as f64;
    }
    Ok(PnSpectrum {
        j: Spectrum::new(bins),
    })
}

/// Split the received spectrum of one OFDM symbol into its CPE and ICI
/// parts.
///
/// With data spectrum `X`, per-bin channel `H` and combined phase-noise
/// spectrum `J^c`, bin `k` of the received symbol is
/// `(1/N)·X_k·H_k·J^c_0  +  (1/N)·Σ_{l≠k} X_l·H_l·J^c_{(k-l) mod N}`;
/// the first term is returned as `cpe`, the second as `ici`, and their sum
/// reconstructs the DFT of the time-domain product signal.
pub fn cpe_ici_split(
    x_spec: &Spectrum,
    h_spec: &Spectrum,
    jc: &PnSpectrum,
) -> Result<(Spectrum, Spectrum)> {
    let n = x_spec.len();
    if n == 0 {
        return Err(Error::Input("spectra must not be empty".into()));
    }
    if h_spec.len() != n || jc.len() != n {
        return Err(Error::Input(format!(
            "spectra differ in length: X has {n}, H has {}, J has {}",
            h_spec.len(),
            jc.len()
        )));
    }
    let scale = 1.0 / n as f64;
    let j0 = jc.j.bins[0];
    let mut cpe = vec![Complex64::new(0.0, 0.0); n];
    let mut ici = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        cpe[k] = x_spec.bins[k] * h_spec.bins[k] * j0 * scale;
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..n {
            if l == k {
                continue;
            }
            let idx = (k + n - l) % n;
            acc += x_spec.bins[l] * h_spec.bins[l] * jc.j.bins[idx];
        }
        ici[k] = acc * scale;
    }
    Ok((Spectrum::new(cpe), Spectrum::new(ici)))
}
