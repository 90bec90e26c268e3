//! Labeled synthetic RSSI traces for one transmitter and a set of receivers.
//!
//! Near receivers see a crossing for `duration_r1` packets starting at the
//! event start; the far receiver sees it for `duration_r2` packets starting
//! `delay_r2` packets later (negative: earlier). Each packet's RSSI is the
//! baseline plus an integer-valued zero-mean level offset drawn independently
//! per packet. The offset spread is chosen so that the fluctuation between
//! consecutive packets has exactly the configured standard deviation after
//! quantization to whole dBm.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use thiserror::Error;

use crate::stats::normal_cdf;
use crate::trace::{PacketSample, Trace, RSSI_MAX_DBM, RSSI_MIN_DBM};
use crate::truth::{GroundTruth, ReceiverSpan, TruthEvent};

pub const MAX_GROUP_SIZE: u32 = 5;
pub const SCENARIO_HEADER: &str = "start_sample,group_size,delay_r2,duration_r1,duration_r2";

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("config error: {0}")]
    Config(String),
    #[error("scenario line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthConfig {
    pub n_samples: usize,
    pub baseline_rssi_dbm: i32,
    /// Fluctuation std with nobody crossing (dB).
    pub quiet_sigma: f64,
    /// Fluctuation std while a single person crosses (dB).
    pub active_sigma_base: f64,
    /// Additional fluctuation std per extra person (dB).
    pub sigma_per_person: f64,
    pub duration_base: usize,
    pub duration_per_person: usize,
    pub rng_seed: u64,
    pub interval_ms: u32,
    pub near_receivers: Vec<String>,
    pub far_receiver: String,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_samples: 2000,
            baseline_rssi_dbm: -60,
            quiet_sigma: 0.5,
            active_sigma_base: 4.0,
            sigma_per_person: 1.0,
            duration_base: 20,
            duration_per_person: 8,
            rng_seed: 0,
            interval_ms: 150,
            near_receivers: vec!["R1".into()],
            far_receiver: "R2".into(),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Config(m));
        if !(self.quiet_sigma >= 0.0) {
            return bad(format!("quiet_sigma {} must be non-negative", self.quiet_sigma));
        }
        if !(self.quiet_sigma < 2.0 && 2.0 < self.active_sigma_base) {
            return bad(format!(
                "need quiet_sigma < 2 < active_sigma_base, got {} and {}",
                self.quiet_sigma, self.active_sigma_base
            ));
        }
        if !(self.sigma_per_person >= 0.0) {
            return bad("sigma_per_person must be non-negative".into());
        }
        if self.duration_base == 0 {
            return bad("duration_base must be positive".into());
        }
        if !(RSSI_MIN_DBM..=RSSI_MAX_DBM).contains(&self.baseline_rssi_dbm) {
            return bad(format!("baseline {} outside [-127, 0]", self.baseline_rssi_dbm));
        }
        if self.n_samples < 2 {
            return bad("n_samples must be at least 2".into());
        }
        if self.near_receivers.is_empty() {
            return bad("at least one near receiver required".into());
        }
        let mut ids: Vec<&str> = self.near_receivers.iter().map(String::as_str).collect();
        ids.push(&self.far_receiver);
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return bad("receiver ids must be distinct".into());
        }
        Ok(())
    }

    /// Target fluctuation std inside an event of `group_size` people.
    pub fn active_sigma(&self, group_size: u32) -> f64 {
        self.active_sigma_base + self.sigma_per_person * f64::from(group_size.saturating_sub(1))
    }

    pub fn receiver_ids(&self) -> Vec<String> {
        let mut ids = self.near_receivers.clone();
        ids.push(self.far_receiver.clone());
        ids
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossingEvent {
    pub start_sample: usize,
    pub group_size: u32,
    pub delay_r2: i64,
    pub duration_r1: usize,
    pub duration_r2: usize,
}

impl CrossingEvent {
    /// Event with durations implied by the config: the near link sees the
    /// base duration, the far link grows by `duration_per_person` per extra
    /// person and is centred on the near span (starts earlier, ends later).
    pub fn for_group(start_sample: usize, group_size: u32, config: &SynthConfig) -> Self {
        let duration_r1 = config.duration_base;
        let duration_r2 =
            config.duration_base + config.duration_per_person * group_size.saturating_sub(1) as usize;
        let delay_r2 = -(((duration_r2 - duration_r1) / 2) as i64);
        CrossingEvent {
            start_sample,
            group_size,
            delay_r2,
            duration_r1,
            duration_r2,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if !(1..=MAX_GROUP_SIZE).contains(&self.group_size) {
            return Err(SynthError::Config(format!(
                "group_size {} outside [1, 5]",
                self.group_size
            )));
        }
        if self.duration_r1 == 0 || self.duration_r2 == 0 {
            return Err(SynthError::Config("durations must be positive".into()));
        }
        if self.group_size > 1 && self.duration_r2 < self.duration_r1 {
            return Err(SynthError::Config(format!(
                "far-link duration {} shorter than near-link {} for a group of {}",
                self.duration_r2, self.duration_r1, self.group_size
            )));
        }
        Ok(())
    }

    pub fn near_span(&self) -> (i64, i64) {
        let s = self.start_sample as i64;
        (s, s + self.duration_r1 as i64 - 1)
    }

    pub fn far_span(&self) -> (i64, i64) {
        let s = self.start_sample as i64 + self.delay_r2;
        (s, s + self.duration_r2 as i64 - 1)
    }
}

/// Evenly spaced events for a sequence of group sizes, leaving `gap` quiet
/// packets between consecutive events. Returns the events and the trace
/// length needed to hold them plus a trailing gap.
pub fn scenario_from_groups(
    groups: &[u32],
    config: &SynthConfig,
    lead_in: usize,
    gap: usize,
) -> (Vec<CrossingEvent>, usize) {
    let mut events = Vec::with_capacity(groups.len());
    let mut cursor = lead_in;
    for &g in groups {
        let probe = CrossingEvent::for_group(0, g, config);
        let early = (-probe.delay_r2).max(0) as usize;
        let ev = CrossingEvent::for_group(cursor + early, g, config);
        let (_, far_end) = ev.far_span();
        let (_, near_end) = ev.near_span();
        cursor = far_end.max(near_end) as usize + 1 + gap;
        events.push(ev);
    }
    (events, cursor)
}

pub fn parse_scenario(text: &str) -> Result<Vec<CrossingEvent>, SynthError> {
    let mut events = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == SCENARIO_HEADER {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let err = |msg: String| SynthError::Parse { line: line_no, msg };
        if f.len() != 5 {
            return Err(err(format!("expected 5 columns, found {}", f.len())));
        }
        let uint = |s: &str| s.parse::<usize>().map_err(|_| err(format!("{s:?} is not a non-negative integer")));
        events.push(CrossingEvent {
            start_sample: uint(f[0])?,
            group_size: uint(f[1])? as u32,
            delay_r2: f[2]
                .parse::<i64>()
                .map_err(|_| err(format!("{:?} is not an integer", f[2])))?,
            duration_r1: uint(f[3])?,
            duration_r2: uint(f[4])?,
        });
    }
    Ok(events)
}

pub fn scenario_to_csv(events: &[CrossingEvent]) -> String {
    let mut out = String::from(SCENARIO_HEADER);
    out.push('\n');
    for e in events {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.start_sample, e.group_size, e.delay_r2, e.duration_r1, e.duration_r2
        );
    }
    out
}

/// Variance of `round(X)` for `X ~ N(0, s²)`.
fn rounded_normal_variance(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let kmax = (12.0 * s).ceil() as i64 + 2;
    2.0 * (1..=kmax)
        .map(|k| {
            let k = k as f64;
            k * k * (normal_cdf((k + 0.5) / s) - normal_cdf((k - 0.5) / s))
        })
        .sum::<f64>()
}

/// Spread `s` such that `round(N(0, s²))` has variance `target`.
fn level_spread_for(target: f64) -> f64 {
    if target <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, target.sqrt() + 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if rounded_normal_variance(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn span_to_range(span: (i64, i64), n: usize) -> Result<(usize, usize), SynthError> {
    if span.0 < 0 || span.1 >= n as i64 {
        return Err(SynthError::Config(format!(
            "event span [{}, {}] exceeds trace length {n}",
            span.0, span.1
        )));
    }
    Ok((span.0 as usize, span.1 as usize))
}

/// Generates a trace for every configured receiver together with its ground
/// truth. Deterministic for a fixed `rng_seed`.
pub fn generate(
    config: &SynthConfig,
    events: &[CrossingEvent],
) -> Result<(Trace, GroundTruth), SynthError> {
    config.validate()?;
    for e in events {
        e.validate()?;
    }

    let n = config.n_samples;
    let mut near_spans = Vec::with_capacity(events.len());
    let mut far_spans = Vec::with_capacity(events.len());
    for e in events {
        near_spans.push(span_to_range(e.near_span(), n)?);
        far_spans.push(span_to_range(e.far_span(), n)?);
    }
    check_overlap(&near_spans, "near")?;
    check_overlap(&far_spans, "far")?;

    let quiet_spread = level_spread_for(config.quiet_sigma.powi(2) / 2.0);
    let mut spread_cache: Vec<(u32, f64)> = Vec::new();
    let mut active_spread = |g: u32| {
        if let Some(&(_, s)) = spread_cache.iter().find(|(k, _)| *k == g) {
            return s;
        }
        let s = level_spread_for(config.active_sigma(g).powi(2) / 2.0);
        spread_cache.push((g, s));
        s
    };

    let mut samples = Vec::with_capacity(n * (config.near_receivers.len() + 1));
    let receivers: Vec<(&String, &Vec<(usize, usize)>)> = config
        .near_receivers
        .iter()
        .map(|id| (id, &near_spans))
        .chain(std::iter::once((&config.far_receiver, &far_spans)))
        .collect();

    for (stream_id, (receiver_id, spans)) in receivers.iter().enumerate() {
        let mut spread = vec![quiet_spread; n];
        for (e, &(s, t)) in events.iter().zip(spans.iter()) {
            let a = active_spread(e.group_size);
            spread[s..=t].iter_mut().for_each(|v| *v = a);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        rng.set_stream(stream_id as u64);
        let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
        for (i, &sp) in spread.iter().enumerate() {
            let z: f64 = std_normal.sample(&mut rng);
            let level = (z * sp).round() as i32;
            samples.push(PacketSample {
                receiver_id: (*receiver_id).clone(),
                seq: i as u64,
                timestamp_ms: i as u64 * u64::from(config.interval_ms),
                rssi_dbm: (config.baseline_rssi_dbm + level).clamp(RSSI_MIN_DBM, RSSI_MAX_DBM),
            });
        }
    }

    let trace = Trace::from_samples(samples, Some(config.interval_ms))
        .map_err(|e| SynthError::Config(e.to_string()))?;

    let truth = GroundTruth {
        events: events
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let mut spans: Vec<ReceiverSpan> = config
                    .near_receivers
                    .iter()
                    .map(|id| ReceiverSpan {
                        receiver_id: id.clone(),
                        start_sample: near_spans[k].0,
                        end_sample: near_spans[k].1,
                    })
                    .collect();
                spans.push(ReceiverSpan {
                    receiver_id: config.far_receiver.clone(),
                    start_sample: far_spans[k].0,
                    end_sample: far_spans[k].1,
                });
                TruthEvent {
                    event_id: k,
                    group_size: e.group_size,
                    spans,
                }
            })
            .collect(),
    }
    .normalized();

    Ok((trace, truth))
}

fn check_overlap(spans: &[(usize, usize)], which: &str) -> Result<(), SynthError> {
    let mut sorted = spans.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[1].0 <= w[0].1 {
            return Err(SynthError::Config(format!(
                "overlapping events on {which} receiver: [{}, {}] and [{}, {}]",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    Ok(())
}
