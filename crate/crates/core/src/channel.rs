//! Flat Rayleigh fading with Jakes Doppler correlation, applied per pilot.
//!
//! The fading process is a sum of sinusoids in the form of Zheng and Xiao:
//!
//! ```text
//! I(t) = sqrt(1/M) Σ cos(ωd·t·cos αₙ + φₙ)    αₙ = (2πn − π + θ_I) / 4M
//! Q(t) = sqrt(1/M) Σ cos(ωd·t·sin βₙ + ψₙ)    βₙ = (2πn − π + θ_Q) / 4M
//! ```
//!
//! with `M = 64` equal-power sinusoids per quadrature and independent
//! uniform phases. Each quadrature contributes power 1/2, so `h = I + jQ`
//! has unit power, and the time-averaged autocorrelation is a Riemann sum of
//! `(2/π)∫cos(ωd·τ·cos α) dα = J0(ωd·τ)`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::time::Duration;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::grid::SLOT_DURATION;
use crate::pilot::PilotSequence;
use crate::rng;

pub const SINUSOIDS_PER_QUADRATURE: usize = 64;

const STREAM_NOISE: u64 = (1 << 62) + 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelModel {
    /// Time-correlated CN(0,1) process, one gain shared by all subcarriers.
    FlatRayleighJakes,
    /// One CN(0,1) draw held for the whole run.
    Static,
    /// h = 1 at every instant.
    Unit,
}

impl ChannelModel {
    pub const fn code(self) -> u8 {
        match self {
            ChannelModel::FlatRayleighJakes => 0,
            ChannelModel::Static => 1,
            ChannelModel::Unit => 2,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(ChannelModel::FlatRayleighJakes),
            1 => Ok(ChannelModel::Static),
            2 => Ok(ChannelModel::Unit),
            _ => Err(Error::invalid(alloc::format!("unknown channel model code {code}"))),
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            ChannelModel::FlatRayleighJakes => "flat_rayleigh_jakes",
            ChannelModel::Static => "static",
            ChannelModel::Unit => "unit",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim() {
            "flat_rayleigh_jakes" | "jakes" => Ok(ChannelModel::FlatRayleighJakes),
            "static" => Ok(ChannelModel::Static),
            "unit" => Ok(ChannelModel::Unit),
            other => Err(Error::invalid(alloc::format!(
                "unknown channel model {other:?} (expected flat_rayleigh_jakes, static or unit)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModelConfig {
    pub model: ChannelModel,
    pub doppler_hz: f64,
    /// Per-RE SNR relative to unit pilot power; `f64::INFINITY` is noiseless.
    pub snr_db: f64,
    pub seed: u64,
}

impl ChannelModelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.doppler_hz >= 0.0) || !self.doppler_hz.is_finite() {
            return Err(Error::invalid(alloc::format!(
                "Doppler frequency must be finite and non-negative, got {}",
                self.doppler_hz
            )));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(Error::invalid(alloc::format!("invalid SNR {} dB", self.snr_db)));
        }
        Ok(())
    }

    /// Noise variance per RE, zero when noiseless.
    pub fn noise_variance(&self) -> f64 {
        noise_variance(self.snr_db)
    }
}

pub(crate) fn noise_variance(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        libm::pow(10.0, -snr_db / 10.0)
    }
}

/// Ground-truth channel gains, one per pilot instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h_series: Vec<Complex64>,
    pub sample_interval: Duration,
}

#[derive(Debug, Clone)]
enum Process {
    Sinusoids { omega_i: Vec<f64>, phase_i: Vec<f64>, omega_q: Vec<f64>, phase_q: Vec<f64> },
    Constant(Complex64),
}

/// Channel gain generator stepping one pilot instant per call.
#[derive(Debug, Clone)]
pub struct FadingProcess {
    process: Process,
    interval_s: f64,
    index: u64,
}

impl FadingProcess {
    pub fn new(config: &ChannelModelConfig) -> Result<Self> {
        Self::with_interval(config, SLOT_DURATION)
    }

    pub fn with_interval(config: &ChannelModelConfig, interval: Duration) -> Result<Self> {
        config.validate()?;
        let mut stream = rng::seeded(config.seed, rng::STREAM_CHANNEL);
        let process = match config.model {
            ChannelModel::Unit => Process::Constant(Complex64::new(1.0, 0.0)),
            ChannelModel::Static => Process::Constant(rng::complex_gaussian(&mut stream, 1.0)),
            ChannelModel::FlatRayleighJakes => {
                let m = SINUSOIDS_PER_QUADRATURE;
                let omega_d = 2.0 * PI * config.doppler_hz;
                let arrival = |stream: &mut ChaCha8Rng, quadrature_sin: bool| {
                    let theta = 2.0 * PI * rng::uniform(stream) - PI;
                    let omega: Vec<f64> = (1..=m)
                        .map(|n| {
                            let alpha = (2.0 * PI * n as f64 - PI + theta) / (4 * m) as f64;
                            let projection = if quadrature_sin { libm::sin(alpha) } else { libm::cos(alpha) };
                            omega_d * projection
                        })
                        .collect();
                    let phase: Vec<f64> = (0..m).map(|_| 2.0 * PI * rng::uniform(stream) - PI).collect();
                    (omega, phase)
                };
                let (omega_i, phase_i) = arrival(&mut stream, false);
                let (omega_q, phase_q) = arrival(&mut stream, true);
                Process::Sinusoids { omega_i, phase_i, omega_q, phase_q }
            }
        };
        Ok(FadingProcess { process, interval_s: interval.as_secs_f64(), index: 0 })
    }

    /// Gain at an arbitrary time offset from the start of the realization.
    pub fn gain_at(&self, t: f64) -> Complex64 {
        match &self.process {
            Process::Constant(h) => *h,
            Process::Sinusoids { omega_i, phase_i, omega_q, phase_q } => {
                let sum = |omega: &[f64], phase: &[f64]| -> f64 {
                    omega.iter().zip(phase).map(|(w, p)| libm::cos(w * t + p)).sum()
                };
                let scale = 1.0 / libm::sqrt(omega_i.len() as f64);
                Complex64::new(scale * sum(omega_i, phase_i), scale * sum(omega_q, phase_q))
            }
        }
    }
}

impl Iterator for FadingProcess {
    type Item = Complex64;

    fn next(&mut self) -> Option<Complex64> {
        let h = self.gain_at(self.index as f64 * self.interval_s);
        self.index += 1;
        Some(h)
    }
}

pub fn generate_channel(config: &ChannelModelConfig, n_instants: usize) -> Result<ChannelRealization> {
    if n_instants == 0 {
        return Err(Error::invalid("channel realization needs at least one instant"));
    }
    let process = FadingProcess::new(config)?;
    Ok(ChannelRealization { h_series: process.take(n_instants).collect(), sample_interval: SLOT_DURATION })
}

/// Noise stream for a run seed, disjoint from the pilot and channel streams.
pub fn noise_stream(seed: u64) -> ChaCha8Rng {
    rng::seeded(seed, STREAM_NOISE)
}

/// Received pilots `y = h·x + n` with `n ~ CN(0, 10^(-snr_db/10))`.
pub fn apply_channel<R: RngCore + ?Sized>(
    x: &PilotSequence,
    h: Complex64,
    snr_db: f64,
    noise: &mut R,
) -> Vec<Complex64> {
    let mut y = Vec::with_capacity(x.len());
    apply_channel_into(&x.values, h, snr_db, noise, &mut y);
    y
}

pub(crate) fn apply_channel_into<R: RngCore + ?Sized>(
    x: &[Complex64],
    h: Complex64,
    snr_db: f64,
    noise: &mut R,
    out: &mut Vec<Complex64>,
) {
    let variance = noise_variance(snr_db);
    out.clear();
    if variance == 0.0 {
        out.extend(x.iter().map(|xi| h * xi));
    } else {
        out.extend(x.iter().map(|xi| h * xi + rng::complex_gaussian(noise, variance)));
    }
}

/// Jakes autocorrelation `J0(2π·fD·τ)`.
pub fn theoretical_autocorr(doppler_hz: f64, lag_s: f64) -> f64 {
    libm::j0(2.0 * PI * doppler_hz * lag_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::Grant;
    use crate::pilot::generate_pilots;

    fn jakes(doppler_hz: f64, seed: u64) -> ChannelModelConfig {
        ChannelModelConfig { model: ChannelModel::FlatRayleighJakes, doppler_hz, snr_db: f64::INFINITY, seed }
    }

    #[test]
    fn rejects_negative_doppler() {
        assert!(matches!(generate_channel(&jakes(-1.0, 0), 10), Err(Error::InvalidInput(_))));
        assert!(generate_channel(&jakes(f64::NAN, 0), 10).is_err());
        assert!(generate_channel(&jakes(10.0, 0), 0).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_channel(&jakes(50.0, 3), 500).unwrap();
        let b = generate_channel(&jakes(50.0, 3), 500).unwrap();
        let c = generate_channel(&jakes(50.0, 4), 500).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn static_and_unit_models_are_constant() {
        let cfg = ChannelModelConfig { model: ChannelModel::Static, doppler_hz: 0.0, snr_db: 10.0, seed: 9 };
        let r = generate_channel(&cfg, 100).unwrap();
        assert!(r.h_series.iter().all(|h| *h == r.h_series[0]));
        let unit = ChannelModelConfig { model: ChannelModel::Unit, ..cfg };
        let r = generate_channel(&unit, 10).unwrap();
        assert!(r.h_series.iter().all(|h| *h == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn zero_doppler_jakes_is_constant() {
        let r = generate_channel(&jakes(0.0, 1), 50).unwrap();
        assert!(r.h_series.iter().all(|h| *h == r.h_series[0]));
    }

    #[test]
    fn identity_channel_noiseless() {
        let x = PilotSequence {
            seed: 0,
            slot_counter: 0,
            values: alloc::vec![Complex64::new(core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2)],
        };
        let mut noise = noise_stream(0);
        let y = apply_channel(&x, Complex64::new(1.0, 0.0), f64::INFINITY, &mut noise);
        assert_eq!(y, x.values);
    }

    #[test]
    fn noiseless_is_exact_product() {
        let x = generate_pilots(3, 8, &Grant::new(0, 3, 0).unwrap()).unwrap();
        let h = Complex64::new(0.5, -0.5);
        let y = apply_channel(&x, h, f64::INFINITY, &mut noise_stream(1));
        for (yi, xi) in y.iter().zip(&x.values) {
            assert_eq!(*yi, h * xi);
        }
    }

    #[test]
    fn noise_power_matches_snr() {
        let x = PilotSequence { seed: 0, slot_counter: 0, values: alloc::vec![Complex64::new(1.0, 0.0); 100_000] };
        let h = Complex64::new(1.0, 0.0);
        let y = apply_channel(&x, h, 20.0, &mut noise_stream(11));
        let power: f64 = y.iter().zip(&x.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / y.len() as f64;
        assert!((power - 0.01).abs() < 0.05 * 0.01, "noise power {power}");
    }

    #[test]
    fn autocorr_limits() {
        assert_eq!(theoretical_autocorr(100.0, 0.0), 1.0);
        assert_eq!(theoretical_autocorr(0.0, 3.7), 1.0);
        let tau = 2.404_825_557_695_773 / (2.0 * PI * 100.0);
        assert!(theoretical_autocorr(100.0, tau).abs() < 1e-4);
    }

    #[test]
    fn model_codes_round_trip() {
        for m in [ChannelModel::FlatRayleighJakes, ChannelModel::Static, ChannelModel::Unit] {
            assert_eq!(ChannelModel::from_code(m.code()).unwrap(), m);
            assert_eq!(ChannelModel::from_name(m.name()).unwrap(), m);
        }
        assert!(ChannelModel::from_code(9).is_err());
        assert!(ChannelModel::from_name("rician").is_err());
    }
}
