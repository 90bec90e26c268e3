//! End-to-end counting: trace → per-receiver detection → fusion → features
//! → discriminant classification → counts and evaluation.

pub mod corpus;
pub mod eval;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::detect::{detect_receiver, fuse_receivers, DetectError, DetectorConfig, EventPair, FusionResult, ReceiverDetection};
use crate::exec::Execution;
use crate::features::{extract, EventFeatureVector, FeatureError};
use crate::lda::{LdaError, LdaModel};
use crate::trace::Trace;
use crate::truth::GroundTruth;

pub use eval::{evaluate, head_count_accuracy, match_to_truth, ConfusionMatrix, Evaluation};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Lda(#[from] LdaError),
}

/// Near receiver (`first`, R1 role) and far receiver (`second`, R2 role) of
/// one single-transmitter sensing zone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReceiverPair {
    pub first: String,
    pub second: String,
}

impl ReceiverPair {
    pub fn new(first: impl Into<String>, second: impl Into<String>) -> Self {
        ReceiverPair {
            first: first.into(),
            second: second.into(),
        }
    }

    pub fn ids(&self) -> [&str; 2] {
        [&self.first, &self.second]
    }
}

impl fmt::Display for ReceiverPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first, self.second)
    }
}

impl FromStr for ReceiverPair {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(',')
            .or_else(|| s.split_once('-'))
            .ok_or_else(|| PipelineError::Config(format!("receiver pair {s:?} is not FIRST,SECOND")))?;
        let (a, b) = (a.trim(), b.trim());
        if a.is_empty() || b.is_empty() || a == b {
            return Err(PipelineError::Config(format!("invalid receiver pair {s:?}")));
        }
        Ok(ReceiverPair::new(a, b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDetection {
    pub first: ReceiverDetection,
    pub second: ReceiverDetection,
    pub fusion: FusionResult,
}

pub fn check_receivers(trace: &Trace, pair: &ReceiverPair) -> Result<(), PipelineError> {
    for id in pair.ids() {
        if trace.receiver(id).is_none() {
            return Err(PipelineError::Config(format!("trace has no receiver {id}")));
        }
    }
    Ok(())
}

/// Detects on both receivers of a pair and fuses their events.
pub fn detect_pair(
    trace: &Trace,
    pair: &ReceiverPair,
    config: &DetectorConfig,
    exec: Execution,
) -> Result<PairDetection, PipelineError> {
    check_receivers(trace, pair)?;
    let (first, second) = exec.join(
        || detect_receiver(trace, &pair.first, config),
        || detect_receiver(trace, &pair.second, config),
    );
    let (first, second) = (first?, second?);
    let fusion = fuse_receivers(&first.events, &second.events, config.pairing_window);
    Ok(PairDetection {
        first,
        second,
        fusion,
    })
}

pub fn extract_all(pairs: &[EventPair], exec: Execution) -> Result<Vec<EventFeatureVector>, FeatureError> {
    exec.try_map(pairs, extract)
}

/// Inclusive packet-index span covered by a fused pair.
pub fn pair_packet_span(pair: &EventPair) -> (usize, usize) {
    (pair.start() + 1, pair.end() + 1)
}

/// Ground-truth group size for each fused pair, matched by maximal overlap.
pub fn label_pairs(pairs: &[EventPair], truth: &GroundTruth, receivers: &[&str]) -> Vec<Option<u32>> {
    let spans: Vec<(usize, usize)> = pairs.iter().map(pair_packet_span).collect();
    match_to_truth(&spans, truth, receivers)
        .into_iter()
        .map(|j| j.map(|j| truth.events[j].group_size))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountedEvent {
    /// Inclusive packet indices spanned by both receivers' detections.
    pub start_sample: usize,
    pub end_sample: usize,
    pub start_ms: u64,
    pub end_ms: u64,
    pub first_duration: usize,
    pub second_duration: usize,
    pub predicted: u32,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodCount {
    pub period: usize,
    pub start_sample: usize,
    pub events: usize,
    pub head_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub pair: ReceiverPair,
    pub events: Vec<CountedEvent>,
    pub predicted_head_count: u64,
    pub discarded_false_positives: usize,
    pub evaluation: Option<Evaluation>,
    pub periods: Vec<PeriodCount>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CountOptions {
    pub detector: DetectorConfig,
    /// Split the report into periods of this many samples.
    pub period_samples: Option<usize>,
}

fn timestamp_at(trace: &Trace, receiver: &str, index: usize) -> u64 {
    trace
        .receiver(receiver)
        .and_then(|s| s.get(index).or_else(|| s.last()))
        .map_or(0, |s| s.timestamp_ms)
}

/// Counts people crossing one receiver pair's zone.
pub fn run_count(
    trace: &Trace,
    pair: &ReceiverPair,
    model: &LdaModel,
    options: &CountOptions,
    truth: Option<&GroundTruth>,
    exec: Execution,
) -> Result<CountReport, PipelineError> {
    if model.p != crate::features::N_FEATURES {
        return Err(LdaError::DimensionMismatch {
            expected: crate::features::N_FEATURES,
            got: model.p,
        }
        .into());
    }
    let det = detect_pair(trace, pair, &options.detector, exec)?;
    let features = extract_all(&det.fusion.pairs, exec)?;
    let classified: Vec<(Vec<f64>, u32)> = exec.try_map(&features, |v| {
        Ok::<_, LdaError>((model.score(&v.values)?, model.classify(&v.values)?))
    })?;

    let events: Vec<CountedEvent> = det
        .fusion
        .pairs
        .iter()
        .zip(classified)
        .map(|(p, (scores, predicted))| {
            let (start, end) = pair_packet_span(p);
            CountedEvent {
                start_sample: start,
                end_sample: end,
                start_ms: timestamp_at(trace, &pair.first, start),
                end_ms: timestamp_at(trace, &pair.first, end),
                first_duration: p.a.duration(),
                second_duration: p.b.duration(),
                predicted,
                scores,
            }
        })
        .collect();
    let predicted_head_count = events.iter().map(|e| u64::from(e.predicted)).sum();

    let evaluation = truth.map(|t| {
        let preds: Vec<((usize, usize), u32)> = events
            .iter()
            .map(|e| ((e.start_sample, e.end_sample), e.predicted))
            .collect();
        evaluate(&preds, t, &pair.ids(), &model.group_labels)
    });

    let periods = match options.period_samples {
        Some(len) if len > 0 => {
            let n = trace.receiver(&pair.first).map_or(0, <[_]>::len);
            (0..n.div_ceil(len))
                .map(|k| {
                    let inside: Vec<&CountedEvent> = events
                        .iter()
                        .filter(|e| e.start_sample / len == k)
                        .collect();
                    PeriodCount {
                        period: k,
                        start_sample: k * len,
                        events: inside.len(),
                        head_count: inside.iter().map(|e| u64::from(e.predicted)).sum(),
                    }
                })
                .collect()
        }
        _ => Vec::new(),
    };

    Ok(CountReport {
        pair: pair.clone(),
        events,
        predicted_head_count,
        discarded_false_positives: det.fusion.discarded_count(),
        evaluation,
        periods,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneReport {
    pub pairs: Vec<CountReport>,
    /// Index into `pairs` of the report chosen as the zone's count: the pair
    /// whose model had the higher training accuracy (first on ties).
    pub combined: usize,
}

impl ZoneReport {
    pub fn combined_report(&self) -> &CountReport {
        &self.pairs[self.combined]
    }
}

/// Runs every receiver pair of a zone (e.g. R1-R2 and R3-R2 sharing the
/// middle receiver) with its own model.
pub fn run_zone(
    trace: &Trace,
    pairs: &[(ReceiverPair, &LdaModel)],
    options: &CountOptions,
    truth: Option<&GroundTruth>,
    exec: Execution,
) -> Result<ZoneReport, PipelineError> {
    if pairs.is_empty() {
        return Err(PipelineError::Config("no receiver pairs given".into()));
    }
    let reports = exec.try_map(pairs, |(pair, model)| run_count(trace, pair, model, options, truth, exec))?;
    let mut combined = 0;
    let acc = |i: usize| pairs[i].1.training_accuracy.unwrap_or(0.0);
    for i in 1..pairs.len() {
        if acc(i) > acc(combined) {
            combined = i;
        }
    }
    Ok(ZoneReport {
        pairs: reports,
        combined,
    })
}

impl CountReport {
    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = format!("pair {}\n", self.pair);
        out.push_str(&format!(
            "events {}  head_count {}  discarded_false_positives {}\n",
            self.events.len(),
            self.predicted_head_count,
            self.discarded_false_positives
        ));
        for (k, e) in self.events.iter().enumerate() {
            out.push_str(&format!(
                "  #{k:<3} samples {:>6}-{:<6} ({:>8}-{:<8} ms)  durations {:>3}/{:<3}  group {}\n",
                e.start_sample, e.end_sample, e.start_ms, e.end_ms, e.first_duration, e.second_duration, e.predicted
            ));
        }
        for p in &self.periods {
            out.push_str(&format!(
                "  period {} from sample {}: {} events, head count {}\n",
                p.period, p.start_sample, p.events, p.head_count
            ));
        }
        if let Some(ev) = &self.evaluation {
            out.push_str(&format!(
                "group_accuracy {:.4}  head_count_accuracy {:.4}  (predicted {} / actual {})  misses {}  false_alarms {}\n",
                ev.group_accuracy,
                ev.head_count_accuracy,
                ev.predicted_head_count,
                ev.actual_head_count,
                ev.misses,
                ev.false_alarms
            ));
        }
        out
    }

    /// Machine-readable event rows.
    pub fn events_csv(&self) -> String {
        let mut out = String::from("pair,event,start_sample,end_sample,start_ms,end_ms,first_duration,second_duration,predicted\n");
        for (k, e) in self.events.iter().enumerate() {
            out.push_str(&format!(
                "{},{k},{},{},{},{},{},{},{}\n",
                self.pair, e.start_sample, e.end_sample, e.start_ms, e.end_ms, e.first_duration, e.second_duration, e.predicted
            ));
        }
        out
    }
}
