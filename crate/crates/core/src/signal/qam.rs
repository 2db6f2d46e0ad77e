//! Gray-coded square QAM with unit average symbol energy.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Supported square constellations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QamOrder {
    Q4,
    Q16,
    Q64,
}

impl QamOrder {
    pub fn from_points(points: usize) -> Result<Self> {
        match points {
            4 => Ok(QamOrder::Q4),
            16 => Ok(QamOrder::Q16),
            64 => Ok(QamOrder::Q64),
            other => Err(Error::Config(format!(
                "unsupported QAM order {other}; expected 4, 16 or 64"
            ))),
        }
    }

    pub fn points(self) -> usize {
        match self {
            QamOrder::Q4 => 4,
            QamOrder::Q16 => 16,
            QamOrder::Q64 => 64,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        match self {
            QamOrder::Q4 => 2,
            QamOrder::Q16 => 4,
            QamOrder::Q64 => 6,
        }
    }

    fn bits_per_axis(self) -> usize {
        self.bits_per_symbol() / 2
    }

    /// `1/sqrt(2(M-1)/3)`, the factor that gives unit mean symbol energy
    /// over a uniform symbol distribution.
    fn amplitude_scale(self) -> f64 {
        (3.0 / (2.0 * (self.points() as f64 - 1.0))).sqrt()
    }
}

/// Map `0/1` bits onto constellation points, most significant bit first,
/// I-axis bits before Q-axis bits within each symbol.
///
/// Per axis the bits are read as a binary-reflected Gray codeword, so
/// adjacent amplitude levels differ in exactly one bit; the all-zeros word
/// sits on the most positive level.  With 4 points and input `00` this
/// yields `(1+j)/√2`.
pub fn qam_map(bits: &[u8], order: QamOrder) -> Result<Vec<Complex64>> {
    let bps = order.bits_per_symbol();
    if bits.len() % bps != 0 {
        return Err(Error::Input(format!(
            "bit count {} is not a multiple of {} (bits per {}-QAM symbol)",
            bits.len(),
            bps,
            order.points()
        )));
    }
    if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::Input(format!(
            "bit values must be 0 or 1, found {bad}"
        )));
    }

    let per_axis = order.bits_per_axis();
    let scale = order.amplitude_scale();
    let symbols = bits
        .chunks(bps)
        .map(|chunk| {
            let i_level = axis_level(&chunk[..per_axis]);
            let q_level = axis_level(&chunk[per_axis..]);
            Complex64::new(i_level * scale, q_level * scale)
        })
        .collect();
    Ok(symbols)
}

/// Decode one axis: Gray codeword → index → amplitude level
/// `(2^m - 1) - 2·index`, i.e. levels descend from `+{2^m - 1}` as the
/// decoded index grows.
fn axis_level(bits: &[u8]) -> f64 {
    let mut code: u32 = 0;
    for &b in bits {
        code = (code << 1) | b as u32;
    }
    // Binary-reflected Gray decode.
    let mut index = code;
    let mut shift = code >> 1;
    while shift != 0 {
        index ^= shift;
        shift >>= 1;
    }
    let m = bits.len() as u32;
    ((1u32 << m) - 1) as f64 - 2.0 * index as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpsk_all_zero_bits_hit_the_first_quadrant() {
        let s = qam_map(&[0, 0], QamOrder::Q4).unwrap();
        let expect = Complex64::new(1.0, 1.0) / 2f64.sqrt();
        assert!((s[0] - expect).norm() < 1e-15);
    }

    #[test]
    fn constellations_have_unit_mean_energy() {
        for order in [QamOrder::Q4, QamOrder::Q16, QamOrder::Q64] {
            let bps = order.bits_per_symbol();
            let m = order.points();
            let mut total = 0.0;
            for word in 0..m {
                let bits: Vec<u8> = (0..bps)
                    .map(|i| ((word >> (bps - 1 - i)) & 1) as u8)
                    .collect();
                let s = qam_map(&bits, order).unwrap()[0];
                total += s.norm_sqr();
            }
            let mean = total / m as f64;
            assert!(
                (mean - 1.0).abs() < 1e-12,
                "{m}-QAM mean energy {mean}"
            );
        }
    }

    #[test]
    fn mapping_is_injective() {
        for order in [QamOrder::Q4, QamOrder::Q16, QamOrder::Q64] {
            let bps = order.bits_per_symbol();
            let m = order.points();
            let mut points = Vec::new();
            for word in 0..m {
                let bits: Vec<u8> = (0..bps)
                    .map(|i| ((word >> (bps - 1 - i)) & 1) as u8)
                    .collect();
                points.push(qam_map(&bits, order).unwrap()[0]);
            }
            for a in 0..m {
                for b in (a + 1)..m {
                    assert!(
                        (points[a] - points[b]).norm() > 1e-9,
                        "duplicate constellation point for words {a} and {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit_per_axis() {
        // Walk the 16-QAM I-axis levels in descending order and check the
        // codewords form a Gray sequence.
        let mut by_level: Vec<(f64, u8)> = (0..4u8)
            .map(|w| {
                let bits = [(w >> 1) & 1, w & 1];
                (axis_level(&bits), w)
            })
            .collect();
        by_level.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        for pair in by_level.windows(2) {
            let diff = (pair[0].1 ^ pair[1].1).count_ones();
            assert_eq!(diff, 1, "adjacent levels must differ in one bit");
        }
    }

    #[test]
    fn rejects_ragged_and_non_binary_input() {
        assert!(matches!(
            qam_map(&[0, 1, 0], QamOrder::Q16),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            qam_map(&[0, 2], QamOrder::Q4),
            Err(Error::Input(_))
        ));
    }
}
