//! Ten-variable feature vectors extracted from paired detection events.
//!
//! Each receiver contributes mean, std, coefficient of variation, duration
//! and area of the window-std series inside its event.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::detect::{DetectionEvent, EventPair};
use crate::stats::mean_std;

pub const N_FEATURES: usize = 10;

pub const FEATURE_NAMES: [&str; N_FEATURES] = [
    "r1_mean",
    "r2_mean",
    "r1_std",
    "r2_std",
    "r1_cv",
    "r2_cv",
    "r1_duration",
    "r2_duration",
    "r1_area",
    "r2_area",
];

pub const FEATURES_HEADER: &str =
    "label,r1_mean,r2_mean,r1_std,r2_std,r1_cv,r2_cv,r1_duration,r2_duration,r1_area,r2_area";

/// Below this mean the coefficient of variation is reported as 0.
pub const CV_GUARD: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("event on {0} carries no window statistics")]
    EmptyEvent(String),
    #[error("group {0} has no samples")]
    EmptyGroup(u32),
    #[error("label {0} outside [1, 5]")]
    BadLabel(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReceiverFeatures {
    pub mean: f64,
    pub std: f64,
    pub cv: f64,
    pub duration: usize,
    pub area: f64,
    /// Set when the mean fell under [`CV_GUARD`].
    pub degenerate: bool,
}

/// Trapezoidal area with unit spacing; a single value has zero area.
pub fn trapezoid_area(series: &[f64]) -> f64 {
    series.windows(2).map(|w| 0.5 * (w[0] + w[1])).sum()
}

pub fn receiver_features(event: &DetectionEvent) -> Result<ReceiverFeatures, FeatureError> {
    let series = event.std_series();
    if series.is_empty() {
        return Err(FeatureError::EmptyEvent(event.receiver_id.clone()));
    }
    let (mean, std) = mean_std(&series);
    let degenerate = mean.abs() < CV_GUARD;
    Ok(ReceiverFeatures {
        mean,
        std,
        cv: if degenerate { 0.0 } else { std / mean },
        duration: event.duration(),
        area: trapezoid_area(&series),
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventFeatureVector {
    pub values: [f64; N_FEATURES],
    pub label: Option<u32>,
    pub degenerate: bool,
}

impl EventFeatureVector {
    pub fn new(values: [f64; N_FEATURES], label: Option<u32>) -> Self {
        EventFeatureVector {
            values,
            label,
            degenerate: false,
        }
    }

    pub fn from_receivers(r1: &ReceiverFeatures, r2: &ReceiverFeatures, label: Option<u32>) -> Self {
        EventFeatureVector {
            values: [
                r1.mean,
                r2.mean,
                r1.std,
                r2.std,
                r1.cv,
                r2.cv,
                r1.duration as f64,
                r2.duration as f64,
                r1.area,
                r2.area,
            ],
            label,
            degenerate: r1.degenerate || r2.degenerate,
        }
    }

    pub fn r1_duration(&self) -> f64 {
        self.values[6]
    }

    pub fn r2_duration(&self) -> f64 {
        self.values[7]
    }
}

/// Features of a fused pair; `pair.a` is the first receiver (R1).
pub fn extract(pair: &EventPair) -> Result<EventFeatureVector, FeatureError> {
    let r1 = receiver_features(&pair.a)?;
    let r2 = receiver_features(&pair.b)?;
    Ok(EventFeatureVector::from_receivers(&r1, &r2, None))
}

/// `g × 10` per-group means, rows ordered by the given labels.
pub fn group_means(
    dataset: &[EventFeatureVector],
    labels: &[u32],
) -> Result<Vec<[f64; N_FEATURES]>, FeatureError> {
    for v in dataset {
        match v.label {
            Some(l) if (1..=5).contains(&l) => {}
            Some(l) => return Err(FeatureError::BadLabel(l)),
            None => return Err(FeatureError::BadLabel(0)),
        }
    }
    labels
        .iter()
        .map(|&g| {
            let rows: Vec<&EventFeatureVector> =
                dataset.iter().filter(|v| v.label == Some(g)).collect();
            if rows.is_empty() {
                return Err(FeatureError::EmptyGroup(g));
            }
            let mut m = [0.0; N_FEATURES];
            for r in &rows {
                for (acc, x) in m.iter_mut().zip(r.values) {
                    *acc += x;
                }
            }
            m.iter_mut().for_each(|x| *x /= rows.len() as f64);
            Ok(m)
        })
        .collect()
}

/// Distinct labels present in a dataset, ascending.
pub fn present_labels(dataset: &[EventFeatureVector]) -> Vec<u32> {
    let mut labels: Vec<u32> = dataset.iter().filter_map(|v| v.label).collect();
    labels.sort_unstable();
    labels.dedup();
    labels
}

pub fn features_to_csv(dataset: &[EventFeatureVector]) -> String {
    let mut out = String::from(FEATURES_HEADER);
    out.push('\n');
    for v in dataset {
        if let Some(l) = v.label {
            let _ = write!(out, "{l}");
        }
        for x in v.values {
            let _ = write!(out, ",{x}");
        }
        out.push('\n');
    }
    out
}

pub fn features_from_csv(text: &str) -> Result<Vec<EventFeatureVector>, FeatureError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == FEATURES_HEADER {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let err = |msg: String| FeatureError::Parse { line: line_no, msg };
        if f.len() != N_FEATURES + 1 {
            return Err(err(format!(
                "expected {} columns, found {}",
                N_FEATURES + 1,
                f.len()
            )));
        }
        let label = if f[0].is_empty() {
            None
        } else {
            Some(
                f[0].parse::<u32>()
                    .map_err(|_| err(format!("label {:?} is not an integer", f[0])))?,
            )
        };
        let mut values = [0.0; N_FEATURES];
        for (slot, s) in values.iter_mut().zip(&f[1..]) {
            *slot = s
                .parse::<f64>()
                .map_err(|_| err(format!("{s:?} is not a number")))?;
        }
        out.push(EventFeatureVector::new(values, label));
    }
    Ok(out)
}

pub fn read_features(path: impl AsRef<Path>) -> Result<Vec<EventFeatureVector>, FeatureError> {
    let text = fs::read_to_string(path).map_err(|e| FeatureError::Io(e.to_string()))?;
    features_from_csv(&text)
}

pub fn write_features(dataset: &[EventFeatureVector], path: impl AsRef<Path>) -> Result<(), FeatureError> {
    fs::write(path, features_to_csv(dataset)).map_err(|e| FeatureError::Io(e.to_string()))
}
