//! Uplink channel measurement pipeline, allocation-only core.
//!
//! The crate models an LTE FDD uplink at resource-element level: the frame
//! and pilot grid, a seeded unit-magnitude pilot sequence, a flat Rayleigh
//! channel with Jakes Doppler correlation, per-pilot least-squares channel
//! estimation with int16 I/Q quantization packed four REs per 128-bit lane
//! group, a frozen-CQI uplink grant scheduler, and a harness that evaluates
//! one-step channel prediction against a Wiener oracle.
//!
//! Nothing here touches IO; file formats and the CLI live in the `chanmeas`
//! companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod error;
pub mod estimator;
pub mod grid;
mod linalg;
pub mod pilot;
pub mod predictor;
mod rng;
pub mod scheduler;

pub use num_complex::Complex64;

pub use channel::{
    apply_channel, generate_channel, noise_stream, theoretical_autocorr, ChannelModel, ChannelModelConfig,
    ChannelRealization, FadingProcess,
};
pub use error::{Error, Result};
pub use estimator::{
    dequantize, lane_bytes, ls_estimate, pack_lanes, pack_lanes_into, quantize_block,
    throughput_bits_per_s, unpack_lanes, EstimateBlock, Iq16, QuantizedBlock,
    DEFAULT_SCALE_EXPONENT, LANE_BYTES, RES_PER_LANE,
};
pub use grid::{
    grid_dimensions, instants_to_duration, pilot_res, BandwidthClass, GridConfig, PilotInstant,
    ReIndex,
};
pub use pilot::{generate_pilots, PilotSequence};
pub use predictor::{
    evaluate, evaluate_series, fit_ar, predict, wiener_oracle, zscore, ArModel, ArPredictor,
    EvalConfig, Feature, NormalizedSeries, PredictionPair, PredictionReport, Predictor,
    ZScoreParams,
};
pub use scheduler::{override_cqi, Cqi, Grant, Scheduler, SchedulerMode};
