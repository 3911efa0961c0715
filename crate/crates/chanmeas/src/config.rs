//! Flat `key = value` run configuration.
//!
//! Lines starting with `#` and blank lines are ignored. Every key has a
//! default, so an empty file is a valid configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chanmeas_core::{
    grid_dimensions, override_cqi, BandwidthClass, ChannelModel, ChannelModelConfig, EvalConfig,
    Feature, Grant, SchedulerMode, DEFAULT_SCALE_EXPONENT,
};

use crate::error::{Error, Result};

pub const SEED_ENV: &str = "CHTR_SEED";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub bandwidth: BandwidthClass,
    pub scheduler_mode: SchedulerMode,
    pub start_rb: usize,
    pub rb_count: usize,
    pub scheduler_snr_db: f64,
    pub channel_model: ChannelModel,
    pub doppler_hz: f64,
    pub snr_db: f64,
    pub scale_exponent: i8,
    pub feature: Feature,
    pub order: usize,
    pub horizon: usize,
    pub split: f64,
    pub subcarrier: usize,
    pub n_instants: u64,
    pub seed: u64,
    pub trace_path: PathBuf,
    pub csv_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bandwidth: BandwidthClass::Mhz5,
            scheduler_mode: SchedulerMode::Frozen,
            start_rb: 0,
            rb_count: 3,
            scheduler_snr_db: 20.0,
            channel_model: ChannelModel::FlatRayleighJakes,
            doppler_hz: 10.0,
            snr_db: 20.0,
            scale_exponent: DEFAULT_SCALE_EXPONENT,
            feature: Feature::RealPart,
            order: 4,
            horizon: 1,
            split: 0.7,
            subcarrier: 0,
            n_instants: 240,
            seed: 1,
            trace_path: PathBuf::from("trace.chtr"),
            csv_path: None,
            report_path: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "grid.bandwidth_mhz",
    "scheduler.mode",
    "scheduler.start_rb",
    "scheduler.rb_count",
    "scheduler.snr_db",
    "channel.model",
    "channel.doppler_hz",
    "channel.snr_db",
    "quantizer.scale_exponent",
    "predictor.feature",
    "predictor.order",
    "predictor.horizon",
    "predictor.split",
    "predictor.subcarrier",
    "run.n_instants",
    "run.seed",
    "output.trace",
    "output.csv",
    "output.report",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_db(key: &str, value: &str) -> Result<f64> {
    match value.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => parse(key, value),
    }
}

fn mode_name(mode: SchedulerMode) -> &'static str {
    match mode {
        SchedulerMode::Frozen => "frozen",
        SchedulerMode::DynamicStub => "dynamic_stub",
    }
}

fn optional_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "grid.bandwidth_mhz" => {
                self.bandwidth = value.parse().map_err(|e: chanmeas_core::Error| Error::Config(e.to_string()))?
            }
            "scheduler.mode" => {
                self.scheduler_mode = match value {
                    "frozen" => SchedulerMode::Frozen,
                    "dynamic_stub" => SchedulerMode::DynamicStub,
                    other => {
                        return Err(Error::Config(format!(
                            "invalid scheduler.mode {other:?} (expected frozen or dynamic_stub)"
                        )))
                    }
                }
            }
            "scheduler.start_rb" => self.start_rb = parse(key, value)?,
            "scheduler.rb_count" => self.rb_count = parse(key, value)?,
            "scheduler.snr_db" => self.scheduler_snr_db = parse(key, value)?,
            "channel.model" => {
                self.channel_model = ChannelModel::from_name(value).map_err(|e| Error::Config(e.to_string()))?
            }
            "channel.doppler_hz" => self.doppler_hz = parse(key, value)?,
            "channel.snr_db" => self.snr_db = parse_db(key, value)?,
            "quantizer.scale_exponent" => self.scale_exponent = parse(key, value)?,
            "predictor.feature" => {
                self.feature = Feature::from_name(value).map_err(|e| Error::Config(e.to_string()))?
            }
            "predictor.order" => self.order = parse(key, value)?,
            "predictor.horizon" => self.horizon = parse(key, value)?,
            "predictor.split" => self.split = parse(key, value)?,
            "predictor.subcarrier" => self.subcarrier = parse(key, value)?,
            "run.n_instants" => self.n_instants = parse(key, value)?,
            "run.seed" => self.seed = parse(key, value)?,
            "output.trace" => self.trace_path = PathBuf::from(value),
            "output.csv" => self.csv_path = optional_path(value),
            "output.report" => self.report_path = optional_path(value),
            other => return Err(Error::Config(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` assignment.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {assignment:?}")))?;
        self.set(key, value)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.apply_assignment(line)
                .map_err(|e| Error::Config(format!("line {}: {}", lineno + 1, e.to_string().trim_start_matches("configuration error: "))))?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut config = RunConfig::default();
        config.apply_text(text)?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn apply_seed_override(&mut self, value: Option<&str>) -> Result<()> {
        if let Some(v) = value {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let grid = grid_dimensions(self.bandwidth);
        Grant::new(self.start_rb, self.rb_count, 0)
            .and_then(|g| g.check_fits(grid.n_rb_total))
            .map_err(|e| Error::Config(e.to_string()))?;
        override_cqi(self.scheduler_snr_db).map_err(|e| Error::Config(e.to_string()))?;
        self.channel_config().validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.order == 0 || self.horizon == 0 {
            return Err(Error::Config("predictor.order and predictor.horizon must be at least 1".into()));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(Error::Config(format!("predictor.split must lie in (0, 1), got {}", self.split)));
        }
        if u16::try_from(self.rb_count).is_err() || u16::try_from(self.start_rb).is_err() {
            return Err(Error::Config("RB indices exceed the trace header range".into()));
        }
        Ok(())
    }

    pub fn grant_template(&self) -> Grant {
        Grant { start_rb: self.start_rb, rb_count: self.rb_count, subframe_index: 0 }
    }

    pub fn channel_config(&self) -> ChannelModelConfig {
        ChannelModelConfig {
            model: self.channel_model,
            doppler_hz: self.doppler_hz,
            snr_db: self.snr_db,
            seed: self.seed,
        }
    }

    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig { feature: self.feature, order: self.order, horizon: self.horizon, split: self.split }
    }

    /// Serializes every key, so `RunConfig::parse(&c.to_kv()) == c`.
    pub fn to_kv(&self) -> String {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("grid.bandwidth_mhz", self.bandwidth.to_string());
        kv("scheduler.mode", mode_name(self.scheduler_mode).into());
        kv("scheduler.start_rb", self.start_rb.to_string());
        kv("scheduler.rb_count", self.rb_count.to_string());
        kv("scheduler.snr_db", self.scheduler_snr_db.to_string());
        kv("channel.model", self.channel_model.name().into());
        kv("channel.doppler_hz", self.doppler_hz.to_string());
        kv("channel.snr_db", self.snr_db.to_string());
        kv("quantizer.scale_exponent", self.scale_exponent.to_string());
        kv("predictor.feature", self.feature.name().into());
        kv("predictor.order", self.order.to_string());
        kv("predictor.horizon", self.horizon.to_string());
        kv("predictor.split", self.split.to_string());
        kv("predictor.subcarrier", self.subcarrier.to_string());
        kv("run.n_instants", self.n_instants.to_string());
        kv("run.seed", self.seed.to_string());
        kv("output.trace", self.trace_path.display().to_string());
        kv("output.csv", path(&self.csv_path));
        kv("output.report", path(&self.report_path));
        out
    }
}
