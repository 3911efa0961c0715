//! Prediction over one subcarrier of a trace, with report rendering.

use std::fmt::Write as _;

use chanmeas_core::grid::SLOT_DURATION;
use chanmeas_core::{evaluate, wiener_oracle, ChannelModel, EvalConfig, PredictionReport};

use crate::error::Result;
use crate::trace::ChannelTrace;

#[derive(Debug, Clone, PartialEq)]
pub struct PredictOutcome {
    pub subcarrier: usize,
    pub report: PredictionReport,
    /// Wiener bound for traces simulated with the Jakes model.
    pub oracle_mse: Option<f64>,
}

pub fn evaluate_trace(trace: &ChannelTrace, config: &EvalConfig, subcarrier: usize) -> Result<PredictOutcome> {
    let series = trace.subcarrier_series(subcarrier)?;
    let report = evaluate(&series, config)?;
    let header = &trace.header;
    let oracle_mse = match header.channel_model {
        ChannelModel::FlatRayleighJakes => Some(wiener_oracle(
            header.doppler_hz as f64,
            SLOT_DURATION,
            config.order,
            header.snr_db as f64,
        )?),
        _ => None,
    };
    Ok(PredictOutcome { subcarrier, report, oracle_mse })
}

/// `key=value` report, one entry per line.
pub fn format_report(outcome: &PredictOutcome) -> String {
    let r = &outcome.report;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("predictor", r.predictor.clone());
    kv("feature", r.feature.map(|f| f.name()).unwrap_or("custom").into());
    kv("subcarrier", outcome.subcarrier.to_string());
    kv("order", r.order.to_string());
    kv("horizon", r.horizon.to_string());
    kv("horizon_symbols", (r.horizon * chanmeas_core::grid::SYMBOLS_PER_SLOT).to_string());
    kv("split", r.split.to_string());
    kv("n_train", r.n_train.to_string());
    kv("n_test", r.n_test.to_string());
    kv("norm_mean", r.normalization.mean.to_string());
    kv("norm_std", r.normalization.std.to_string());
    kv(
        "coefficients",
        r.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
    );
    kv("mse", r.mse.to_string());
    if let Some(oracle) = outcome.oracle_mse {
        kv("oracle_mse", oracle.to_string());
        kv("mse_over_oracle", (r.mse / oracle).to_string());
    }
    out
}

/// `instant,actual,predicted` rows on the normalized scale.
pub fn pairs_csv(report: &PredictionReport) -> String {
    let mut out = String::from("instant,actual,predicted\n");
    for p in &report.pairs {
        let _ = writeln!(out, "{},{},{}", p.instant, p.actual, p.predicted);
    }
    out
}
