//! Simulated measurement run: frozen grant, pilots through the fading
//! channel, LS estimation, quantization, trace output.

use std::io::Write;
use std::time::Duration;

use chanmeas_core::channel::noise_stream;
use chanmeas_core::grid::{SLOTS_PER_SUBFRAME, SLOT_DURATION};
use chanmeas_core::{
    apply_channel, generate_pilots, grid_dimensions, instants_to_duration, ls_estimate,
    quantize_block, throughput_bits_per_s, FadingProcess, Scheduler, SchedulerMode,
};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::trace::{TraceHeader, TraceWriter, HEADER_LEN};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSummary {
    pub n_instants: u64,
    pub n_subcarriers: usize,
    pub span: Duration,
    /// Estimate output rate of the configured grant.
    pub throughput_bps: f64,
    /// Quantized components clipped to the int16 range.
    pub saturated: usize,
    pub bytes: usize,
}

impl MeasureSummary {
    pub fn render(&self) -> String {
        format!(
            "instants={}\nsubcarriers={}\nspan_s={}\nthroughput_bps={}\nsaturated={}\nbytes={}\n",
            self.n_instants,
            self.n_subcarriers,
            self.span.as_secs_f64(),
            self.throughput_bps,
            self.saturated,
            self.bytes
        )
    }
}

pub fn header_for(config: &RunConfig) -> TraceHeader {
    TraceHeader {
        bandwidth: config.bandwidth,
        start_rb: config.start_rb as u16,
        rb_count: config.rb_count as u16,
        pilot_interval: 1,
        scale_exponent: config.scale_exponent,
        n_instants: config.n_instants,
        seed: config.seed,
        channel_model: config.channel_model,
        doppler_hz: config.doppler_hz as f32,
        snr_db: config.snr_db as f32,
    }
}

/// Runs the measurement and streams the trace to `out`.
pub fn measure<W: Write>(config: &RunConfig, out: W) -> Result<(W, MeasureSummary)> {
    config.validate()?;
    if config.scheduler_mode != SchedulerMode::Frozen {
        return Err(Error::Config(
            "measurement needs scheduler.mode = frozen: a dynamic allocation changes the grant width between subframes"
                .into(),
        ));
    }
    let grid = grid_dimensions(config.bandwidth);
    let mut scheduler = Scheduler::frozen(config.grant_template(), grid.n_rb_total, config.scheduler_snr_db)?;
    let header = header_for(config);
    let mut writer = TraceWriter::new(out, header)?;

    let mut fading = FadingProcess::new(&config.channel_config())?;
    let mut noise = noise_stream(config.seed);
    let mut grant = *scheduler.template();
    let mut saturated = 0;
    for slot in 0..config.n_instants {
        if slot % SLOTS_PER_SUBFRAME as u64 == 0 {
            grant = scheduler.next_grant();
        }
        let h = fading.next().expect("fading process is unbounded");
        let pilots = generate_pilots(config.seed, slot, &grant)?;
        let received = apply_channel(&pilots, h, config.snr_db, &mut noise);
        let block = ls_estimate(&received, &pilots)?;
        let quantized = quantize_block(&block, config.scale_exponent);
        saturated += quantized.saturated;
        writer.write_block(&quantized.samples)?;
    }
    let out = writer.finish()?;

    let summary = MeasureSummary {
        n_instants: config.n_instants,
        n_subcarriers: header.n_subcarriers(),
        span: instants_to_duration(config.n_instants),
        throughput_bps: throughput_bits_per_s(config.rb_count, SLOT_DURATION)?,
        saturated,
        bytes: HEADER_LEN + header.payload_len().unwrap_or(0),
    };
    Ok((out, summary))
}

pub fn measure_to_vec(config: &RunConfig) -> Result<(Vec<u8>, MeasureSummary)> {
    measure(config, Vec::new())
}
