//! Prediction harness over per-subcarrier estimate series.
//!
//! A series is taken from one subcarrier (envelope or real part), z-scored
//! with statistics of the training span only, fitted by a [`Predictor`] and
//! scored by the mean squared error of `horizon`-step-ahead predictions over
//! the held-out span. One step is one pilot instant (7 symbols, 0.5 ms).
//! The built-in predictor is a Yule-Walker AR model solved by
//! Levinson-Durbin; [`wiener_oracle`] gives the matching theoretical lower
//! bound for a Jakes process.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::time::Duration;

use num_complex::Complex64;

use crate::channel::noise_variance;
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    Envelope,
    RealPart,
}

impl Feature {
    pub fn extract(self, h: Complex64) -> f64 {
        match self {
            Feature::Envelope => h.norm(),
            Feature::RealPart => h.re,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Feature::Envelope => "envelope",
            Feature::RealPart => "real_part",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim() {
            "envelope" => Ok(Feature::Envelope),
            "real_part" | "real" => Ok(Feature::RealPart),
            other => Err(Error::invalid(alloc::format!(
                "unknown feature {other:?} (expected envelope or real_part)"
            ))),
        }
    }
}

/// Population mean and standard deviation of a z-scored span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZScoreParams {
    pub mean: f64,
    pub std: f64,
}

impl ZScoreParams {
    pub fn normalize(&self, x: f64) -> f64 {
        (x - self.mean) / self.std
    }

    pub fn denormalize(&self, z: f64) -> f64 {
        z * self.std + self.mean
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSeries {
    pub values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

impl NormalizedSeries {
    pub fn params(&self) -> ZScoreParams {
        ZScoreParams { mean: self.mean, std: self.std }
    }

    pub fn denormalize(&self) -> Vec<f64> {
        let params = self.params();
        self.values.iter().map(|&z| params.denormalize(z)).collect()
    }
}

pub fn zscore(series: &[f64]) -> Result<NormalizedSeries> {
    if series.len() < 2 {
        return Err(Error::invalid(alloc::format!(
            "z-score needs at least 2 samples, got {}",
            series.len()
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("series contains non-finite values"));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let std = libm::sqrt(var);
    if !(std > 1e-14 * mean.abs()) {
        return Err(Error::DegenerateInput(alloc::format!(
            "series of {} samples is constant (std {std:e})",
            series.len()
        )));
    }
    let params = ZScoreParams { mean, std };
    Ok(NormalizedSeries { values: series.iter().map(|&x| params.normalize(x)).collect(), mean, std })
}

/// Linear one-step predictor `x̂[t] = Σ coefficients[j] · x[t-1-j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArModel {
    pub coefficients: Vec<f64>,
    /// In-sample one-step mean squared error.
    pub training_mse: f64,
}

impl ArModel {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    fn one_step(&self, history: &[f64]) -> f64 {
        self.coefficients.iter().zip(history.iter().rev()).map(|(c, x)| c * x).sum()
    }
}

/// Biased autocorrelation estimate for lags `0..=max_lag`.
fn autocorrelation(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    (0..=max_lag)
        .map(|lag| x[lag..].iter().zip(&x[..n - lag]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect()
}

/// Levinson-Durbin recursion on `r[0..=order]`, returning prediction
/// coefficients (lag 1 first).
fn levinson_durbin(r: &[f64], order: usize) -> Result<Vec<f64>> {
    if !(r[0] > 0.0) || r.iter().any(|v| !v.is_finite()) {
        return Err(Error::Conditioning(alloc::format!("autocorrelation r[0] = {} is not positive", r[0])));
    }
    let mut a = vec![0.0; order + 1];
    let mut prev = vec![0.0; order + 1];
    let mut err = r[0];
    for m in 1..=order {
        let acc: f64 = r[m] - (1..m).map(|j| a[j] * r[m - j]).sum::<f64>();
        let k = acc / err;
        if !(k.abs() < 1.0) {
            return Err(Error::Conditioning(alloc::format!(
                "reflection coefficient {k} at order {m} is outside (-1, 1)"
            )));
        }
        prev.copy_from_slice(&a);
        for j in 1..m {
            a[j] = prev[j] - k * prev[m - j];
        }
        a[m] = k;
        err *= 1.0 - k * k;
        if !(err > 0.0) {
            return Err(Error::Conditioning(alloc::format!("prediction error vanished at order {m}")));
        }
    }
    Ok(a[1..].to_vec())
}

pub fn fit_ar(train: &[f64], order: usize) -> Result<ArModel> {
    if order == 0 {
        return Err(Error::invalid("AR order must be at least 1"));
    }
    if train.len() <= 10 * order {
        return Err(Error::invalid(alloc::format!(
            "AR({order}) needs more than {} training samples, got {}",
            10 * order,
            train.len()
        )));
    }
    let r = autocorrelation(train, order);
    let coefficients = levinson_durbin(&r, order)?;
    let mut model = ArModel { coefficients, training_mse: 0.0 };
    let residual: f64 = (order..train.len())
        .map(|t| {
            let e = train[t] - model.one_step(&train[..t]);
            e * e
        })
        .sum();
    model.training_mse = residual / (train.len() - order) as f64;
    Ok(model)
}

/// Iterated one-step prediction of the `horizon` values following `history`.
pub fn predict(model: &ArModel, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
    let p = model.order();
    if history.len() < p {
        return Err(Error::invalid(alloc::format!(
            "prediction needs {p} history samples, got {}",
            history.len()
        )));
    }
    if horizon == 0 {
        return Err(Error::invalid("prediction horizon must be at least 1"));
    }
    let mut window: Vec<f64> = history[history.len() - p..].to_vec();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let next = model.one_step(&window);
        window.remove(0);
        window.push(next);
        out.push(next);
    }
    Ok(out)
}

/// Pluggable predictor: fit on a normalized training span, then predict
/// from a window of normalized history.
pub trait Predictor {
    type Model;

    fn name(&self) -> String;

    /// Number of trailing history samples a prediction consumes.
    fn history_len(&self) -> usize;

    fn fit(&self, train: &[f64]) -> Result<Self::Model>;

    fn predict(&self, model: &Self::Model, history: &[f64], horizon: usize) -> Result<Vec<f64>>;

    fn coefficients(&self, _model: &Self::Model) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArPredictor {
    pub order: usize,
}

impl Predictor for ArPredictor {
    type Model = ArModel;

    fn name(&self) -> String {
        alloc::format!("ar({})", self.order)
    }

    fn history_len(&self) -> usize {
        self.order
    }

    fn fit(&self, train: &[f64]) -> Result<ArModel> {
        fit_ar(train, self.order)
    }

    fn predict(&self, model: &ArModel, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
        predict(model, history, horizon)
    }

    fn coefficients(&self, model: &ArModel) -> Vec<f64> {
        model.coefficients.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub feature: Feature,
    pub order: usize,
    pub horizon: usize,
    /// Fraction of instants used for training.
    pub split: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { feature: Feature::RealPart, order: 4, horizon: 1, split: 0.7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionPair {
    pub instant: usize,
    pub actual: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionReport {
    pub predictor: String,
    pub feature: Option<Feature>,
    pub order: usize,
    pub horizon: usize,
    pub split: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub normalization: ZScoreParams,
    pub coefficients: Vec<f64>,
    /// Held-out mean squared error on the normalized scale.
    pub mse: f64,
    pub pairs: Vec<PredictionPair>,
}

/// Evaluates the built-in AR predictor on one subcarrier's estimate series.
pub fn evaluate(series: &[Complex64], config: &EvalConfig) -> Result<PredictionReport> {
    let values: Vec<f64> = series.iter().map(|&h| config.feature.extract(h)).collect();
    let mut report = evaluate_series(&values, &ArPredictor { order: config.order }, config.horizon, config.split)?;
    report.feature = Some(config.feature);
    Ok(report)
}

pub fn evaluate_series<P: Predictor>(
    values: &[f64],
    predictor: &P,
    horizon: usize,
    split: f64,
) -> Result<PredictionReport> {
    let p = predictor.history_len();
    let min_len = 2 * p + 20;
    if values.len() < min_len {
        return Err(Error::invalid(alloc::format!(
            "evaluation needs at least {min_len} instants, got {}",
            values.len()
        )));
    }
    if !(split > 0.0 && split < 1.0) {
        return Err(Error::invalid(alloc::format!("split must lie in (0, 1), got {split}")));
    }
    if horizon == 0 {
        return Err(Error::invalid("prediction horizon must be at least 1"));
    }
    let n_train = (values.len() as f64 * split) as usize;
    if n_train + 1 < p + horizon || n_train >= values.len() {
        return Err(Error::invalid(alloc::format!(
            "split {split} leaves {n_train} training instants of {}",
            values.len()
        )));
    }

    let train = zscore(&values[..n_train])?;
    let params = train.params();
    let normalized: Vec<f64> = values.iter().map(|&x| params.normalize(x)).collect();
    let model = predictor.fit(&train.values)?;

    let mut pairs = Vec::with_capacity(values.len() - n_train);
    for t in n_train..values.len() {
        let end = t + 1 - horizon;
        let predicted = *predictor
            .predict(&model, &normalized[end - p..end], horizon)?
            .last()
            .ok_or_else(|| Error::invalid("predictor returned no values"))?;
        pairs.push(PredictionPair { instant: t, actual: normalized[t], predicted });
    }
    let mse = pairs.iter().map(|q| (q.actual - q.predicted) * (q.actual - q.predicted)).sum::<f64>()
        / pairs.len() as f64;

    Ok(PredictionReport {
        predictor: predictor.name(),
        feature: None,
        order: p,
        horizon,
        split,
        n_train,
        n_test: pairs.len(),
        normalization: params,
        coefficients: predictor.coefficients(&model),
        mse,
        pairs,
    })
}

/// Minimum one-step MSE of a linear predictor of the given order for a
/// Jakes process observed in white noise, relative to the observation
/// variance (the z-scored scale `evaluate` reports on).
///
/// The Wiener-Hopf equations are built from `J0` plus the noise variance on
/// the diagonal and solved by direct elimination.
pub fn wiener_oracle(doppler_hz: f64, sample_interval: Duration, order: usize, snr_db: f64) -> Result<f64> {
    if order == 0 {
        return Err(Error::invalid("oracle order must be at least 1"));
    }
    if !(doppler_hz >= 0.0) || !doppler_hz.is_finite() {
        return Err(Error::invalid(alloc::format!("invalid Doppler frequency {doppler_hz}")));
    }
    let noise = noise_variance(snr_db);
    let dt = sample_interval.as_secs_f64();
    let corr = |lag: usize| libm::j0(2.0 * PI * doppler_hz * dt * lag as f64);
    let r0 = 1.0 + noise;

    let mut matrix = vec![0.0; order * order];
    for i in 0..order {
        for j in 0..order {
            let lag = i.abs_diff(j);
            matrix[i * order + j] = corr(lag) + if lag == 0 { noise } else { 0.0 };
        }
    }
    let rhs: Vec<f64> = (1..=order).map(corr).collect();
    let weights = linalg::solve(matrix, rhs.clone(), order).ok_or_else(|| {
        Error::Conditioning(alloc::format!(
            "singular autocorrelation matrix (fD = {doppler_hz} Hz, order {order}, SNR {snr_db} dB)"
        ))
    })?;
    let explained: f64 = weights.iter().zip(&rhs).map(|(w, r)| w * r).sum();
    Ok(((r0 - explained) / r0).max(0.0))
}
