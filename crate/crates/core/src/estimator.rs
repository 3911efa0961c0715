//! Per-pilot least-squares estimation and the int16 estimate layout.
//!
//! With unit-magnitude pilots the LS estimate `y / x` is `y · conj(x)`, so no
//! division is performed. Estimates are scaled by a per-trace power of two,
//! rounded half-to-even and saturated to int16. Four REs form one 128-bit
//! lane group:
//!
//! ```text
//! byte  0      2      4      6      8      10     12     14
//!       re[0]  im[0]  re[1]  im[1]  re[2]  im[2]  re[3]  im[3]   (i16 LE)
//! ```
//!
//! A trailing partial group is zero padded.

use alloc::vec::Vec;
use core::time::Duration;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SUBCARRIERS_PER_RB;
use crate::pilot::PilotSequence;

pub const RES_PER_LANE: usize = 4;
pub const LANE_BYTES: usize = 16;
/// 2^14 leaves about 6 dB of headroom above unit power before saturation.
pub const DEFAULT_SCALE_EXPONENT: i8 = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateBlock {
    pub slot_counter: u64,
    /// One estimate per allocated subcarrier, ascending subcarrier index.
    pub estimates: Vec<Complex64>,
}

pub fn ls_estimate(y: &[Complex64], x: &PilotSequence) -> Result<EstimateBlock> {
    if y.len() != x.len() {
        return Err(Error::invalid(alloc::format!(
            "received {} pilots but {} were transmitted",
            y.len(),
            x.len()
        )));
    }
    let estimates = y.iter().zip(&x.values).map(|(yi, xi)| yi * xi.conj()).collect();
    Ok(EstimateBlock { slot_counter: x.slot_counter, estimates })
}

/// One RE as signed 16-bit I/Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Iq16 {
    pub re: i16,
    pub im: i16,
}

impl Iq16 {
    pub const fn new(re: i16, im: i16) -> Self {
        Iq16 { re, im }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedBlock {
    pub samples: Vec<Iq16>,
    /// Components clipped to the int16 range.
    pub saturated: usize,
}

fn quantize_component(value: f64, scale: f64, saturated: &mut usize) -> i16 {
    let scaled = libm::rint(value * scale);
    if scaled > i16::MAX as f64 {
        *saturated += 1;
        i16::MAX
    } else if scaled < i16::MIN as f64 {
        *saturated += 1;
        i16::MIN
    } else if scaled.is_nan() {
        *saturated += 1;
        0
    } else {
        scaled as i16
    }
}

fn scale_factor(scale_exponent: i8) -> f64 {
    libm::ldexp(1.0, scale_exponent as i32)
}

/// Quantizes each component to `round_half_even(v · 2^scale_exponent)`.
pub fn quantize_block(block: &EstimateBlock, scale_exponent: i8) -> QuantizedBlock {
    let mut out = QuantizedBlock { samples: Vec::with_capacity(block.estimates.len()), saturated: 0 };
    quantize_into(&block.estimates, scale_exponent, &mut out);
    out
}

pub(crate) fn quantize_into(values: &[Complex64], scale_exponent: i8, out: &mut QuantizedBlock) {
    let scale = scale_factor(scale_exponent);
    out.samples.clear();
    let mut saturated = 0;
    out.samples.extend(values.iter().map(|v| {
        Iq16::new(
            quantize_component(v.re, scale, &mut saturated),
            quantize_component(v.im, scale, &mut saturated),
        )
    }));
    out.saturated = saturated;
}

pub fn dequantize(sample: Iq16, scale_exponent: i8) -> Complex64 {
    let inv = scale_factor(-scale_exponent);
    Complex64::new(sample.re as f64 * inv, sample.im as f64 * inv)
}

/// Packed size of `n_res` REs.
pub const fn lane_bytes(n_res: usize) -> usize {
    n_res.div_ceil(RES_PER_LANE) * LANE_BYTES
}

pub fn pack_lanes(samples: &[Iq16]) -> Vec<u8> {
    let mut out = Vec::with_capacity(lane_bytes(samples.len()));
    pack_lanes_into(samples, &mut out);
    out
}

/// Appends the packed lane groups of `samples` to `out`.
pub fn pack_lanes_into(samples: &[Iq16], out: &mut Vec<u8>) {
    for group in samples.chunks(RES_PER_LANE) {
        let mut lane = [0u8; LANE_BYTES];
        for (slot, s) in lane.chunks_exact_mut(4).zip(group) {
            slot[..2].copy_from_slice(&s.re.to_le_bytes());
            slot[2..].copy_from_slice(&s.im.to_le_bytes());
        }
        out.extend_from_slice(&lane);
    }
}

/// Inverse of [`pack_lanes`]. `bytes` must be exactly `lane_bytes(n)` long
/// with zeroed padding.
pub fn unpack_lanes(bytes: &[u8], n: usize) -> Result<Vec<Iq16>> {
    let expected = lane_bytes(n);
    if bytes.len() < expected {
        return Err(Error::Format {
            offset: bytes.len(),
            reason: alloc::format!("truncated lane data: expected {expected} bytes for {n} REs, found {}", bytes.len()),
        });
    }
    if bytes.len() > expected {
        return Err(Error::Format {
            offset: expected,
            reason: alloc::format!("{} trailing bytes after {n} REs", bytes.len() - expected),
        });
    }
    let mut out = Vec::with_capacity(n);
    for (i, word) in bytes.chunks_exact(4).enumerate() {
        let re = i16::from_le_bytes([word[0], word[1]]);
        let im = i16::from_le_bytes([word[2], word[3]]);
        if i < n {
            out.push(Iq16::new(re, im));
        } else if re != 0 || im != 0 {
            return Err(Error::Format { offset: i * 4, reason: "non-zero lane padding".into() });
        }
    }
    Ok(out)
}

/// Estimate output rate when every pilot RE of `n_rb` RBs is stored as
/// 2×16-bit words once per slot.
pub fn throughput_bits_per_s(n_rb: usize, slot_duration: Duration) -> Result<f64> {
    if n_rb == 0 {
        return Err(Error::invalid("throughput needs at least one RB"));
    }
    if slot_duration.is_zero() {
        return Err(Error::invalid("slot duration must be positive"));
    }
    let bits_per_slot = (n_rb * SUBCARRIERS_PER_RB * 2 * 16) as f64;
    Ok(bits_per_slot * 1e9 / slot_duration.as_nanos() as f64)
}
