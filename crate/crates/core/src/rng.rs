//! Helpers over the seeded ChaCha streams.

use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Stream identifiers so pilots, channel parameters and noise never share
/// keystream for the same seed.
pub(crate) const STREAM_CHANNEL: u64 = 1 << 62;
pub(crate) const STREAM_SCHEDULER: u64 = (1 << 62) + 1;

pub(crate) fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in [0, 1) with 53 bits of resolution.
pub(crate) fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Circularly-symmetric complex Gaussian with the given total variance.
pub(crate) fn complex_gaussian<R: RngCore + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    let r = libm::sqrt(-variance * libm::log(u1));
    let (s, c) = libm::sincos(2.0 * PI * u2);
    Complex64::new(r * c, r * s)
}
