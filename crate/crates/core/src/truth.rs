//! Ground-truth crossing labels, as produced by the synthesizer and consumed
//! by the evaluation and window-sweep code.
//!
//! Spans are inclusive positional indices into a receiver's sample stream
//! (not sequence numbers). Label file format:
//! `event_id,receiver_id,start_sample,end_sample,group_size`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub const LABELS_HEADER: &str = "event_id,receiver_id,start_sample,end_sample,group_size";

#[derive(Debug, Error)]
pub enum LabelsError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("event {0}: inconsistent group size across receivers")]
    Inconsistent(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReceiverSpan {
    pub receiver_id: String,
    pub start_sample: usize,
    pub end_sample: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthEvent {
    pub event_id: usize,
    pub group_size: u32,
    pub spans: Vec<ReceiverSpan>,
}

impl TruthEvent {
    pub fn span(&self, receiver_id: &str) -> Option<&ReceiverSpan> {
        self.spans.iter().find(|s| s.receiver_id == receiver_id)
    }

    /// Union extent over all receivers.
    pub fn extent(&self) -> (usize, usize) {
        let start = self.spans.iter().map(|s| s.start_sample).min().unwrap_or(0);
        let end = self.spans.iter().map(|s| s.end_sample).max().unwrap_or(0);
        (start, end)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GroundTruth {
    pub events: Vec<TruthEvent>,
}

impl GroundTruth {
    pub fn head_count(&self) -> u64 {
        self.events.iter().map(|e| u64::from(e.group_size)).sum()
    }

    /// Truth events sorted by start, ids renumbered from 0.
    pub fn normalized(mut self) -> Self {
        self.events.sort_by_key(|e| (e.extent().0, e.event_id));
        for (i, e) in self.events.iter_mut().enumerate() {
            e.event_id = i;
        }
        self
    }

    /// Per-sample movement mask for one receiver stream of `len` packets.
    pub fn sample_mask(&self, receiver_id: &str, len: usize) -> Vec<bool> {
        let mut mask = vec![false; len];
        for span in self.events.iter().filter_map(|e| e.span(receiver_id)) {
            let end = span.end_sample.min(len.saturating_sub(1));
            for m in mask.iter_mut().take(end + 1).skip(span.start_sample) {
                *m = true;
            }
        }
        mask
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(LABELS_HEADER);
        out.push('\n');
        for e in &self.events {
            for s in &e.spans {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    e.event_id, s.receiver_id, s.start_sample, s.end_sample, e.group_size
                );
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, LabelsError> {
        let mut by_id: BTreeMap<usize, TruthEvent> = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line == LABELS_HEADER {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 5 {
                return Err(LabelsError::Parse {
                    line: line_no,
                    msg: format!("expected 5 columns, found {}", f.len()),
                });
            }
            let num = |s: &str, what: &str| {
                s.parse::<usize>().map_err(|_| LabelsError::Parse {
                    line: line_no,
                    msg: format!("{what} {s:?} is not a non-negative integer"),
                })
            };
            let event_id = num(f[0], "event_id")?;
            let start_sample = num(f[2], "start_sample")?;
            let end_sample = num(f[3], "end_sample")?;
            let group_size = num(f[4], "group_size")? as u32;
            if end_sample < start_sample {
                return Err(LabelsError::Parse {
                    line: line_no,
                    msg: "end_sample before start_sample".into(),
                });
            }
            let entry = by_id.entry(event_id).or_insert_with(|| TruthEvent {
                event_id,
                group_size,
                spans: Vec::new(),
            });
            if entry.group_size != group_size {
                return Err(LabelsError::Inconsistent(event_id));
            }
            entry.spans.push(ReceiverSpan {
                receiver_id: f[1].to_string(),
                start_sample,
                end_sample,
            });
        }
        Ok(GroundTruth {
            events: by_id.into_values().collect(),
        })
    }
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<GroundTruth, LabelsError> {
    GroundTruth::parse(&fs::read_to_string(path)?)
}

pub fn write_labels(truth: &GroundTruth, path: impl AsRef<Path>) -> Result<(), LabelsError> {
    fs::write(path, truth.to_csv_string())?;
    Ok(())
}
