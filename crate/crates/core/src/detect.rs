//! Movement detection from RSSI fluctuations.
//!
//! The fluctuation of a packet is the RSSI difference to the previously
//! received packet on the same receiver. Over a sliding window of `n`
//! fluctuations we track mean and sample standard deviation, and flag
//! movement either when the Gaussian probability of a fluctuation falling in
//! `[-1, 1]` drops below a threshold, or when the standard deviation itself
//! exceeds a threshold. Positive decisions are segmented into events, and
//! events from two receivers covering the same zone are fused to drop
//! detections the other receiver does not confirm.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::stats::normal_cdf;
use crate::trace::{PacketSample, Trace};
use crate::truth::GroundTruth;

pub const DEFAULT_WINDOW: usize = 10;
pub const DEFAULT_PROB_THRESHOLD: f64 = 0.3;
pub const DEFAULT_STD_THRESHOLD: f64 = 2.0;
pub const DEFAULT_MIN_DURATION: usize = 3;
pub const DEFAULT_MERGE_GAP: usize = 2;
pub const DEFAULT_PAIRING_WINDOW: usize = 30;

#[derive(Debug, Error, PartialEq)]
pub enum DetectError {
    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown receiver {0}")]
    MissingReceiver(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Probability of fluctuation in `[-1, 1]` below threshold.
    #[serde(rename = "prob")]
    Probability,
    /// Window standard deviation above threshold.
    #[default]
    Std,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Probability => "prob",
            Method::Std => "std",
        })
    }
}

impl FromStr for Method {
    type Err = DetectError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prob" | "probability" => Ok(Method::Probability),
            "std" => Ok(Method::Std),
            other => Err(DetectError::Domain(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorConfig {
    pub method: Method,
    pub window: usize,
    pub prob_threshold: f64,
    pub std_threshold: f64,
    pub min_duration: usize,
    pub merge_gap: usize,
    pub pairing_window: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            method: Method::Std,
            window: DEFAULT_WINDOW,
            prob_threshold: DEFAULT_PROB_THRESHOLD,
            std_threshold: DEFAULT_STD_THRESHOLD,
            min_duration: DEFAULT_MIN_DURATION,
            merge_gap: DEFAULT_MERGE_GAP,
            pairing_window: DEFAULT_PAIRING_WINDOW,
        }
    }
}

/// Fluctuation series of one receiver; `values[k]` belongs to packet `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationSeries {
    pub receiver_id: String,
    pub values: Vec<f64>,
}

pub fn fluctuations(samples: &[PacketSample]) -> Result<FluctuationSeries, DetectError> {
    let rssi: Vec<i32> = samples.iter().map(|s| s.rssi_dbm).collect();
    let receiver_id = samples
        .first()
        .map(|s| s.receiver_id.clone())
        .unwrap_or_default();
    Ok(FluctuationSeries {
        receiver_id,
        values: fluctuations_from_rssi(&rssi)?,
    })
}

pub fn fluctuations_from_rssi(rssi: &[i32]) -> Result<Vec<f64>, DetectError> {
    if rssi.len() < 2 {
        return Err(DetectError::InsufficientData {
            needed: 2,
            got: rssi.len(),
        });
    }
    Ok(rssi.windows(2).map(|w| f64::from(w[1] - w[0])).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowStats {
    /// Fluctuation index of the newest value in the window.
    pub index: usize,
    pub mean: f64,
    pub std: f64,
    pub prob_in_band: f64,
}

/// Sliding-window mean, sample std (divisor `n - 1`) and probability-in-band.
///
/// One entry per full window: entry `j` covers `values[j..j + n]` and has
/// `index = j + n - 1`. Earlier indices are warm-up and carry no decision.
pub fn window_stats(values: &[f64], n: usize) -> Result<Vec<WindowStats>, DetectError> {
    if n < 2 {
        return Err(DetectError::Domain(format!("window size {n} < 2")));
    }
    if values.len() < n {
        return Err(DetectError::InsufficientData {
            needed: n,
            got: values.len(),
        });
    }
    let nf = n as f64;
    let mut mean = values[..n].iter().sum::<f64>() / nf;
    let mut m2: f64 = values[..n].iter().map(|v| (v - mean).powi(2)).sum();
    let mut out = Vec::with_capacity(values.len() - n + 1);
    let mut push = |index: usize, mean: f64, m2: f64| {
        let std = (m2.max(0.0) / (nf - 1.0)).sqrt();
        out.push(WindowStats {
            index,
            mean,
            std,
            prob_in_band: prob_in_band_unchecked(mean, std),
        });
    };
    push(n - 1, mean, m2);
    for i in n..values.len() {
        let incoming = values[i];
        let outgoing = values[i - n];
        let new_mean = mean + (incoming - outgoing) / nf;
        m2 += (incoming - outgoing) * (incoming - new_mean + outgoing - mean);
        mean = new_mean;
        push(i, mean, m2);
    }
    Ok(out)
}

/// Probability that a `N(mean, std²)` fluctuation falls in `[-1, 1]`.
pub fn prob_in_band(mean: f64, std: f64) -> Result<f64, DetectError> {
    if !(std >= 0.0) || !mean.is_finite() {
        return Err(DetectError::Domain(format!(
            "invalid distribution mean={mean} std={std}"
        )));
    }
    Ok(prob_in_band_unchecked(mean, std))
}

fn prob_in_band_unchecked(mean: f64, std: f64) -> f64 {
    // Incremental updates can leave a constant window with std ~1e-16.
    if std <= 1e-12 {
        return if (-1.0..=1.0).contains(&mean) { 1.0 } else { 0.0 };
    }
    let p = normal_cdf((1.0 - mean) / std) - normal_cdf((-1.0 - mean) / std);
    p.clamp(0.0, 1.0)
}

/// Movement iff probability-in-band is strictly below `threshold`.
pub fn detect_probability(stats: &[WindowStats], threshold: f64) -> Vec<bool> {
    stats.iter().map(|s| s.prob_in_band < threshold).collect()
}

/// Movement iff window std is strictly above `threshold`.
pub fn detect_std(stats: &[WindowStats], threshold: f64) -> Vec<bool> {
    stats.iter().map(|s| s.std > threshold).collect()
}

pub fn decide(stats: &[WindowStats], config: &DetectorConfig) -> Vec<bool> {
    match config.method {
        Method::Probability => detect_probability(stats, config.prob_threshold),
        Method::Std => detect_std(stats, config.std_threshold),
    }
}

/// Inclusive `(start, end)` positions of positive runs. Runs separated by at
/// most `merge_gap` negatives are merged first, then runs shorter than
/// `min_duration` are dropped.
pub fn segment_runs(decisions: &[bool], min_duration: usize, merge_gap: usize) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < decisions.len() {
        if !decisions[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < decisions.len() && decisions[i] {
            i += 1;
        }
        let end = i - 1;
        match runs.last_mut() {
            Some(last) if start - last.1 - 1 <= merge_gap => last.1 = end,
            _ => runs.push((start, end)),
        }
    }
    runs.retain(|&(s, e)| e - s + 1 >= min_duration);
    runs
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionEvent {
    pub receiver_id: String,
    /// Inclusive window-stat (fluctuation) indices.
    pub start_index: usize,
    pub end_index: usize,
    pub method: Method,
    pub stats: Vec<WindowStats>,
}

impl DetectionEvent {
    pub fn duration(&self) -> usize {
        self.end_index - self.start_index + 1
    }

    pub fn std_series(&self) -> Vec<f64> {
        self.stats.iter().map(|s| s.std).collect()
    }

    /// Inclusive span in packet indices of the receiver stream.
    pub fn packet_span(&self) -> (usize, usize) {
        (self.start_index + 1, self.end_index + 1)
    }

    fn gap_to(&self, other: &DetectionEvent) -> usize {
        if self.end_index < other.start_index {
            other.start_index - self.end_index
        } else if other.end_index < self.start_index {
            self.start_index - other.end_index
        } else {
            0
        }
    }
}

/// Segments decisions (aligned to `stats`) into events carrying their stats.
pub fn segment_events(
    receiver_id: &str,
    stats: &[WindowStats],
    decisions: &[bool],
    method: Method,
    min_duration: usize,
    merge_gap: usize,
) -> Vec<DetectionEvent> {
    debug_assert_eq!(stats.len(), decisions.len());
    segment_runs(decisions, min_duration, merge_gap)
        .into_iter()
        .map(|(s, e)| DetectionEvent {
            receiver_id: receiver_id.to_string(),
            start_index: stats[s].index,
            end_index: stats[e].index,
            method,
            stats: stats[s..=e].to_vec(),
        })
        .collect()
}

/// Everything the detector derives for one receiver stream.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverDetection {
    pub receiver_id: String,
    pub stats: Vec<WindowStats>,
    pub decisions: Vec<bool>,
    pub events: Vec<DetectionEvent>,
}

impl ReceiverDetection {
    /// Decision export: `index,mean,std,prob,decision`.
    pub fn decisions_csv(&self) -> String {
        let mut out = String::from("index,mean,std,prob,decision\n");
        for (s, d) in self.stats.iter().zip(&self.decisions) {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.index,
                s.mean,
                s.std,
                s.prob_in_band,
                u8::from(*d)
            ));
        }
        out
    }
}

pub fn detect_stream(
    samples: &[PacketSample],
    config: &DetectorConfig,
) -> Result<ReceiverDetection, DetectError> {
    let series = fluctuations(samples)?;
    let stats = window_stats(&series.values, config.window)?;
    let decisions = decide(&stats, config);
    let events = segment_events(
        &series.receiver_id,
        &stats,
        &decisions,
        config.method,
        config.min_duration,
        config.merge_gap,
    );
    Ok(ReceiverDetection {
        receiver_id: series.receiver_id,
        stats,
        decisions,
        events,
    })
}

pub fn detect_receiver(
    trace: &Trace,
    receiver_id: &str,
    config: &DetectorConfig,
) -> Result<ReceiverDetection, DetectError> {
    let samples = trace
        .receiver(receiver_id)
        .ok_or_else(|| DetectError::MissingReceiver(receiver_id.to_string()))?;
    detect_stream(samples, config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventPair {
    pub a: DetectionEvent,
    pub b: DetectionEvent,
}

impl EventPair {
    pub fn start(&self) -> usize {
        self.a.start_index.min(self.b.start_index)
    }

    pub fn end(&self) -> usize {
        self.a.end_index.max(self.b.end_index)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FusionResult {
    /// Ordered by earliest start.
    pub pairs: Vec<EventPair>,
    pub discarded_a: Vec<DetectionEvent>,
    pub discarded_b: Vec<DetectionEvent>,
}

impl FusionResult {
    pub fn discarded_count(&self) -> usize {
        self.discarded_a.len() + self.discarded_b.len()
    }
}

/// Pairs events across two receivers of one zone by greedy nearest-start
/// matching among candidates that overlap or lie within `pairing_window`
/// samples of each other. Unpaired events are reported as false positives.
pub fn fuse_receivers(
    events_a: &[DetectionEvent],
    events_b: &[DetectionEvent],
    pairing_window: usize,
) -> FusionResult {
    let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
    for (i, a) in events_a.iter().enumerate() {
        for (j, b) in events_b.iter().enumerate() {
            if a.gap_to(b) <= pairing_window {
                candidates.push((a.start_index.abs_diff(b.start_index), i, j));
            }
        }
    }
    candidates.sort_unstable();

    let mut used_a = vec![false; events_a.len()];
    let mut used_b = vec![false; events_b.len()];
    let mut pairs = Vec::new();
    for (_, i, j) in candidates {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        pairs.push(EventPair {
            a: events_a[i].clone(),
            b: events_b[j].clone(),
        });
    }
    pairs.sort_by_key(|p| (p.start(), p.a.start_index, p.b.start_index));

    let leftovers = |events: &[DetectionEvent], used: &[bool]| {
        events
            .iter()
            .zip(used)
            .filter(|(_, &u)| !u)
            .map(|(e, _)| e.clone())
            .collect::<Vec<_>>()
    };
    FusionResult {
        pairs,
        discarded_a: leftovers(events_a, &used_a),
        discarded_b: leftovers(events_b, &used_b),
    }
}

/// Tolerance band, in fluctuation samples, around each labeled event
/// boundary that is excluded from window-sweep scoring.
pub const DEFAULT_SWEEP_MARGIN: usize = 10;

/// Per-fluctuation-index truth: `Some(true)` inside an event, `Some(false)`
/// well outside, `None` within `margin` samples after an event boundary.
///
/// A labeled packet span `[ps, pe]` touches fluctuations `ps - 1 ..= pe`.
/// The first `margin` of those and the `margin` following them are not
/// scored.
pub fn fluctuation_truth(packet_mask: &[bool], margin: usize) -> Vec<Option<bool>> {
    let len = packet_mask.len().saturating_sub(1);
    // fluctuation k is "active" when either of its packets is labeled.
    let active: Vec<bool> = (0..len)
        .map(|k| packet_mask[k] || packet_mask[k + 1])
        .collect();
    let mut truth: Vec<Option<bool>> = active.iter().map(|&a| Some(a)).collect();
    for k in 0..len {
        let entering = active[k] && (k == 0 || !active[k - 1]);
        let leaving = !active[k] && k > 0 && active[k - 1];
        if entering || leaving {
            for t in truth.iter_mut().skip(k).take(margin) {
                *t = None;
            }
        }
    }
    truth
}

/// Counts `(errors, scored)` of a decision mask against per-index truth.
pub fn score_decisions(mask: &[bool], truth: &[Option<bool>]) -> (usize, usize) {
    mask.iter()
        .zip(truth)
        .filter_map(|(&m, t)| t.map(|t| m != t))
        .fold((0, 0), |(err, n), wrong| (err + usize::from(wrong), n + 1))
}

/// Positive mask over all fluctuation indices implied by a list of events.
pub fn event_mask(events: &[DetectionEvent], len: usize) -> Vec<bool> {
    let mut mask = vec![false; len];
    for e in events {
        for m in mask.iter_mut().take(e.end_index + 1).skip(e.start_index) {
            *m = true;
        }
    }
    mask
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub window: usize,
    pub errors: usize,
    pub scored: usize,
    pub error_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Smallest window achieving the minimum error rate.
    pub best_window: Option<usize>,
}

/// Per-sample detection error rate of the segmented detector output for each
/// window size, pooled over every labeled receiver in the trace.
pub fn window_sweep(
    trace: &Trace,
    labels: &GroundTruth,
    n_values: &[usize],
    config: &DetectorConfig,
    margin: usize,
    exec: Execution,
) -> Result<SweepReport, DetectError> {
    let receivers: Vec<&str> = trace
        .receiver_ids()
        .filter(|id| labels.events.iter().any(|e| e.span(id).is_some()))
        .collect();
    let truths: Vec<(&str, Vec<Option<bool>>)> = receivers
        .iter()
        .map(|id| {
            let len = trace.receiver(id).map_or(0, <[PacketSample]>::len);
            (*id, fluctuation_truth(&labels.sample_mask(id, len), margin))
        })
        .collect();

    let rows = exec.try_map(n_values, |&n| {
        let cfg = DetectorConfig {
            window: n,
            ..config.clone()
        };
        let mut errors = 0;
        let mut scored = 0;
        for (id, truth) in &truths {
            let det = detect_receiver(trace, id, &cfg)?;
            let mask = event_mask(&det.events, truth.len());
            // warm-up indices carry no decision
            let (e, s) = score_decisions(&mask[n - 1..], &truth[n - 1..]);
            errors += e;
            scored += s;
        }
        let error_rate = if scored == 0 {
            0.0
        } else {
            errors as f64 / scored as f64
        };
        Ok(SweepRow {
            window: n,
            errors,
            scored,
            error_rate,
        })
    })?;

    let best_window = rows
        .iter()
        .min_by(|a, b| {
            a.error_rate
                .total_cmp(&b.error_rate)
                .then(a.window.cmp(&b.window))
        })
        .map(|r| r.window);
    Ok(SweepReport { rows, best_window })
}

/// Event export, one row per window-stat sample inside an event:
/// `receiver_id,event,method,index,mean,std,prob`.
pub const EVENTS_HEADER: &str = "receiver_id,event,method,index,mean,std,prob";

pub fn events_to_csv(events: &[DetectionEvent]) -> String {
    let mut out = String::from(EVENTS_HEADER);
    out.push('\n');
    for (k, e) in events.iter().enumerate() {
        write_event_rows(&mut out, None, k, e);
    }
    out
}

fn write_event_rows(out: &mut String, pair: Option<usize>, k: usize, e: &DetectionEvent) {
    for s in &e.stats {
        if let Some(p) = pair {
            out.push_str(&format!("{p},"));
        }
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.receiver_id, k, e.method, s.index, s.mean, s.std, s.prob_in_band
        ));
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {msg}")]
pub struct EventsParseError {
    pub line: usize,
    pub msg: String,
}

type EventRow = (Option<usize>, String, usize, Method, WindowStats);

fn parse_event_rows(text: &str, with_pair: bool) -> Result<Vec<EventRow>, EventsParseError> {
    let expected = if with_pair { 8 } else { 7 };
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.ends_with(EVENTS_HEADER) {
            continue;
        }
        let err = |msg: String| EventsParseError { line: line_no, msg };
        let mut f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != expected {
            return Err(err(format!("expected {expected} columns, found {}", f.len())));
        }
        let pair = if with_pair {
            Some(f.remove(0).parse::<usize>().map_err(|_| err("bad pair id".into()))?)
        } else {
            None
        };
        let uint = |s: &str| s.parse::<usize>().map_err(|_| err(format!("{s:?} is not an integer")));
        let real = |s: &str| s.parse::<f64>().map_err(|_| err(format!("{s:?} is not a number")));
        let method = f[2].parse::<Method>().map_err(|e| err(e.to_string()))?;
        rows.push((
            pair,
            f[0].to_string(),
            uint(f[1])?,
            method,
            WindowStats {
                index: uint(f[3])?,
                mean: real(f[4])?,
                std: real(f[5])?,
                prob_in_band: real(f[6])?,
            },
        ));
    }
    Ok(rows)
}

fn group_events(rows: Vec<EventRow>) -> Vec<(Option<usize>, DetectionEvent)> {
    let mut out: Vec<(Option<usize>, String, usize, DetectionEvent)> = Vec::new();
    for (pair, receiver, k, method, stat) in rows {
        match out.last_mut() {
            Some((p, r, kk, ev)) if *p == pair && *r == receiver && *kk == k => {
                ev.end_index = stat.index;
                ev.stats.push(stat);
            }
            _ => out.push((
                pair,
                receiver.clone(),
                k,
                DetectionEvent {
                    receiver_id: receiver,
                    start_index: stat.index,
                    end_index: stat.index,
                    method,
                    stats: vec![stat],
                },
            )),
        }
    }
    out.into_iter().map(|(p, _, _, e)| (p, e)).collect()
}

pub fn events_from_csv(text: &str) -> Result<Vec<DetectionEvent>, EventsParseError> {
    Ok(group_events(parse_event_rows(text, false)?)
        .into_iter()
        .map(|(_, e)| e)
        .collect())
}

/// Paired event export: `pair,` followed by the event columns; each pair
/// lists its first-receiver event then its second-receiver event.
pub fn pairs_to_csv(pairs: &[EventPair]) -> String {
    let mut out = format!("pair,{EVENTS_HEADER}\n");
    for (p, pair) in pairs.iter().enumerate() {
        write_event_rows(&mut out, Some(p), 0, &pair.a);
        write_event_rows(&mut out, Some(p), 1, &pair.b);
    }
    out
}

pub fn pairs_from_csv(text: &str) -> Result<Vec<EventPair>, EventsParseError> {
    let grouped = group_events(parse_event_rows(text, true)?);
    let mut pairs = Vec::new();
    let mut iter = grouped.into_iter().peekable();
    while let Some((pa, a)) = iter.next() {
        match iter.next() {
            Some((pb, b)) if pb == pa => pairs.push(EventPair { a, b }),
            _ => {
                return Err(EventsParseError {
                    line: 0,
                    msg: format!("pair {} does not have exactly two events", pa.unwrap_or(0)),
                })
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn stats_for(n: usize) -> Vec<WindowStats> {
        (0..n)
            .map(|i| WindowStats {
                index: i,
                mean: 0.0,
                std: 3.0,
                prob_in_band: 0.1,
            })
            .collect()
    }

    fn event(receiver: &str, start: usize, end: usize) -> DetectionEvent {
        DetectionEvent {
            receiver_id: receiver.into(),
            start_index: start,
            end_index: end,
            method: Method::Std,
            stats: (start..=end)
                .map(|i| WindowStats {
                    index: i,
                    mean: 0.0,
                    std: 3.0,
                    prob_in_band: 0.1,
                })
                .collect(),
        }
    }

    #[test]
    fn fluctuation_examples() {
        assert_eq!(fluctuations_from_rssi(&[-60, -60, -60]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(fluctuations_from_rssi(&[-60, -58, -63]).unwrap(), vec![2.0, -5.0]);
        assert_eq!(
            fluctuations_from_rssi(&[-60]),
            Err(DetectError::InsufficientData { needed: 2, got: 1 })
        );
    }

    #[test]
    fn window_of_zeros() {
        let s = window_stats(&[0.0; 10], 10).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].index, 9);
        assert_eq!(s[0].mean, 0.0);
        assert_eq!(s[0].std, 0.0);
        assert_eq!(s[0].prob_in_band, 1.0);
    }

    #[test]
    fn alternating_window_uses_sample_std() {
        let v: Vec<f64> = (0..10).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = window_stats(&v, 10).unwrap();
        assert_abs_diff_eq!(s[0].mean, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s[0].std, 1.0540925533894598, epsilon = 1e-12);
    }

    #[test]
    fn window_errors() {
        assert!(matches!(window_stats(&[1.0; 5], 10), Err(DetectError::InsufficientData { .. })));
        assert!(matches!(window_stats(&[1.0; 5], 1), Err(DetectError::Domain(_))));
    }

    #[test]
    fn prob_degenerate_and_domain() {
        assert_eq!(prob_in_band(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(prob_in_band(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(prob_in_band(1.5, 0.0).unwrap(), 0.0);
        assert!(prob_in_band(0.0, -1.0).is_err());
        assert!(prob_in_band(0.0, f64::NAN).is_err());
    }

    #[test]
    fn prob_matches_reported_movement_case() {
        let p = prob_in_band(0.2727, 4.6280).unwrap();
        assert!((p - 0.17078).abs() < 1e-3, "{p}");
    }

    #[test]
    fn thresholds_are_strict() {
        let mk = |p: f64, s: f64| WindowStats {
            index: 0,
            mean: 0.0,
            std: s,
            prob_in_band: p,
        };
        let stats = [mk(0.17078, 4.6280), mk(0.84303, 0.6325), mk(0.3, 2.0)];
        assert_eq!(detect_probability(&stats, 0.3), vec![true, false, false]);
        assert_eq!(detect_std(&stats, 2.0), vec![true, false, false]);
    }

    #[test]
    fn run_segmentation() {
        let d = |v: &[u8]| v.iter().map(|&x| x == 1).collect::<Vec<_>>();
        assert!(segment_runs(&d(&[0, 0, 0]), 1, 0).is_empty());
        assert_eq!(segment_runs(&d(&[0, 1, 1, 0, 0, 1, 0]), 1, 0), vec![(1, 2), (5, 5)]);
        assert_eq!(segment_runs(&d(&[0, 1, 1, 0, 1, 1, 0]), 1, 1), vec![(1, 5)]);
        assert_eq!(segment_runs(&d(&[1, 1, 0, 0, 1, 1]), 1, 1), vec![(0, 1), (4, 5)]);
        assert_eq!(segment_runs(&d(&[1, 0, 1, 1, 1, 0]), 3, 0), vec![(2, 4)]);
        assert_eq!(segment_runs(&d(&[1, 1, 1, 1]), 5, 2), vec![]);
    }

    #[test]
    fn events_carry_stats_slice() {
        let stats = stats_for(7);
        let d = [false, true, true, false, false, true, false];
        let ev = segment_events("R1", &stats, &d, Method::Std, 1, 0);
        assert_eq!(ev.len(), 2);
        assert_eq!((ev[0].start_index, ev[0].end_index), (1, 2));
        assert_eq!(ev[0].stats.len(), 2);
        assert_eq!(ev[1].duration(), 1);
    }

    #[test]
    fn unmatched_event_is_discarded() {
        let a = vec![event("R1", 60, 68)];
        let r = fuse_receivers(&a, &[], 20);
        assert!(r.pairs.is_empty());
        assert_eq!(r.discarded_a, a);
    }

    #[test]
    fn identical_lists_fully_pair() {
        let a = vec![event("R1", 10, 20), event("R1", 100, 120), event("R1", 300, 310)];
        let b: Vec<_> = a.iter().map(|e| DetectionEvent { receiver_id: "R2".into(), ..e.clone() }).collect();
        let r = fuse_receivers(&a, &b, 30);
        assert_eq!(r.pairs.len(), 3);
        assert_eq!(r.discarded_count(), 0);
        for (p, e) in r.pairs.iter().zip(&a) {
            assert_eq!(&p.a, e);
        }
    }

    #[test]
    fn overlapping_pair_durations() {
        let r = fuse_receivers(&[event("R1", 100, 110)], &[event("R2", 95, 120)], 30);
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.pairs[0].a.duration(), 11);
        assert_eq!(r.pairs[0].b.duration(), 26);
    }

    #[test]
    fn pairing_window_is_inclusive_gap() {
        let r = fuse_receivers(&[event("R1", 0, 10)], &[event("R2", 40, 45)], 30);
        assert_eq!(r.pairs.len(), 1);
        let r = fuse_receivers(&[event("R1", 0, 10)], &[event("R2", 41, 45)], 30);
        assert!(r.pairs.is_empty());
        assert_eq!(r.discarded_count(), 2);
    }

    #[test]
    fn greedy_prefers_nearest_start() {
        let a = [event("R1", 100, 120)];
        let b = [event("R2", 80, 125), event("R2", 98, 118)];
        let r = fuse_receivers(&a, &b, 30);
        assert_eq!(r.pairs[0].b.start_index, 98);
        assert_eq!(r.discarded_b.len(), 1);
    }

    #[test]
    fn truth_margins() {
        // packets 3..=5 labeled, 9 packets -> 8 fluctuations; active 2..=5
        let mask: Vec<bool> = (0..9).map(|i| (3..=5).contains(&i)).collect();
        let t = fluctuation_truth(&mask, 1);
        assert_eq!(
            t,
            vec![
                Some(false),
                Some(false),
                None,
                Some(true),
                Some(true),
                Some(true),
                None,
                Some(false)
            ]
        );
    }

    #[test]
    fn scoring_complement_identity() {
        let truth = vec![Some(true), None, Some(false), Some(false), Some(true)];
        let mask = vec![true, true, true, false, false];
        let (e, n) = score_decisions(&mask, &truth);
        let inverted: Vec<_> = truth.iter().map(|t| t.map(|b| !b)).collect();
        let (ei, ni) = score_decisions(&mask, &inverted);
        assert_eq!(n, ni);
        assert_abs_diff_eq!(ei as f64 / ni as f64, 1.0 - e as f64 / n as f64);
    }

    #[test]
    fn all_negative_scores_zero() {
        let truth = vec![Some(false); 20];
        assert_eq!(score_decisions(&[false; 20], &truth), (0, 20));
    }

    #[test]
    fn events_csv_round_trip() {
        let evs = vec![event("R1", 3, 6), event("R1", 20, 22)];
        assert_eq!(events_from_csv(&events_to_csv(&evs)).unwrap(), evs);
        let pairs = vec![EventPair { a: event("R1", 3, 6), b: event("R2", 2, 9) }];
        assert_eq!(pairs_from_csv(&pairs_to_csv(&pairs)).unwrap(), pairs);
    }

    #[test]
    fn method_parse() {
        assert_eq!("prob".parse::<Method>().unwrap(), Method::Probability);
        assert_eq!("std".parse::<Method>().unwrap(), Method::Std);
        assert!("median".parse::<Method>().is_err());
    }
}
