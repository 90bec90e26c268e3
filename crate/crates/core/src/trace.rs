//! RSSI packet traces: data model, CSV reader/writer and integrity checks.
//!
//! A trace file is UTF-8 CSV. Optional `#`-prefixed metadata lines precede
//! the header `receiver_id,seq,timestamp_ms,rssi_dbm`; each following row is
//! one received packet. The header itself may be omitted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub const TRACE_HEADER: &str = "receiver_id,seq,timestamp_ms,rssi_dbm";

pub const RSSI_MIN_DBM: i32 = -127;
pub const RSSI_MAX_DBM: i32 = 0;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("receiver {receiver}: {msg}")]
    Integrity { receiver: String, msg: String },
    #[error("empty input: no samples")]
    Empty,
    #[error("invalid trace: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One received packet's RSSI reading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PacketSample {
    pub receiver_id: String,
    pub seq: u64,
    pub timestamp_ms: u64,
    pub rssi_dbm: i32,
}

/// Samples grouped by receiver, each group ordered by sequence number.
///
/// Timestamps are assumed comparable across receivers (shared trace-start
/// epoch).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    receivers: BTreeMap<String, Vec<PacketSample>>,
    pub interval_ms: Option<u32>,
}

impl Trace {
    /// Builds a trace from unordered samples. Groups by receiver, sorts by
    /// seq and validates every invariant.
    pub fn from_samples(
        samples: impl IntoIterator<Item = PacketSample>,
        interval_ms: Option<u32>,
    ) -> Result<Self, TraceError> {
        let mut receivers: BTreeMap<String, Vec<PacketSample>> = BTreeMap::new();
        for s in samples {
            receivers.entry(s.receiver_id.clone()).or_default().push(s);
        }
        if receivers.is_empty() {
            return Err(TraceError::Empty);
        }
        for stream in receivers.values_mut() {
            stream.sort_by_key(|s| s.seq);
        }
        let trace = Trace {
            receivers,
            interval_ms,
        };
        trace.validate()?;
        Ok(trace)
    }

    pub fn validate(&self) -> Result<(), TraceError> {
        if self.receivers.is_empty() {
            return Err(TraceError::Invariant("no receivers".into()));
        }
        for (id, stream) in &self.receivers {
            validate_receiver_id(id).map_err(TraceError::Invariant)?;
            if stream.is_empty() {
                return Err(TraceError::Invariant(format!(
                    "receiver {id} has no samples"
                )));
            }
            for s in stream {
                if &s.receiver_id != id {
                    return Err(TraceError::Invariant(format!(
                        "sample for {} filed under {id}",
                        s.receiver_id
                    )));
                }
                if !(RSSI_MIN_DBM..=RSSI_MAX_DBM).contains(&s.rssi_dbm) {
                    return Err(TraceError::Integrity {
                        receiver: id.clone(),
                        msg: format!("seq {}: rssi {} outside [-127, 0]", s.seq, s.rssi_dbm),
                    });
                }
            }
            for w in stream.windows(2) {
                if w[1].seq == w[0].seq {
                    return Err(TraceError::Integrity {
                        receiver: id.clone(),
                        msg: format!("duplicate seq {}", w[0].seq),
                    });
                }
                if w[1].seq < w[0].seq {
                    return Err(TraceError::Integrity {
                        receiver: id.clone(),
                        msg: format!("seq {} follows {}", w[1].seq, w[0].seq),
                    });
                }
                if w[1].timestamp_ms < w[0].timestamp_ms {
                    return Err(TraceError::Integrity {
                        receiver: id.clone(),
                        msg: format!(
                            "timestamp decreases at seq {} ({} < {})",
                            w[1].seq, w[1].timestamp_ms, w[0].timestamp_ms
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn receiver_ids(&self) -> impl Iterator<Item = &str> {
        self.receivers.keys().map(String::as_str)
    }

    pub fn receiver(&self, id: &str) -> Option<&[PacketSample]> {
        self.receivers.get(id).map(Vec::as_slice)
    }

    pub fn receivers(&self) -> &BTreeMap<String, Vec<PacketSample>> {
        &self.receivers
    }

    pub fn sample_count(&self) -> usize {
        self.receivers.values().map(Vec::len).sum()
    }

    /// RSSI readings of one receiver in seq order.
    pub fn rssi(&self, id: &str) -> Option<Vec<i32>> {
        self.receiver(id)
            .map(|s| s.iter().map(|p| p.rssi_dbm).collect())
    }

    /// Returns a copy with `offset` added to every RSSI reading, clamped to
    /// the valid range.
    pub fn with_rssi_offset(&self, offset: i32) -> Trace {
        let receivers = self
            .receivers
            .iter()
            .map(|(id, stream)| {
                let shifted = stream
                    .iter()
                    .map(|s| PacketSample {
                        rssi_dbm: (s.rssi_dbm + offset).clamp(RSSI_MIN_DBM, RSSI_MAX_DBM),
                        ..s.clone()
                    })
                    .collect();
                (id.clone(), shifted)
            })
            .collect();
        Trace {
            receivers,
            interval_ms: self.interval_ms,
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        if let Some(interval) = self.interval_ms {
            let _ = writeln!(out, "# interval_ms={interval}");
        }
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for stream in self.receivers.values() {
            for s in stream {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    s.receiver_id, s.seq, s.timestamp_ms, s.rssi_dbm
                );
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Trace, TraceError> {
        let mut interval_ms = None;
        let mut samples = Vec::new();
        let mut seen_data = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if seen_data {
                    return Err(parse_err(line_no, "metadata after data rows"));
                }
                if let Some((key, value)) = meta.trim().split_once('=') {
                    if key.trim() == "interval_ms" {
                        let v = value
                            .trim()
                            .parse::<u32>()
                            .map_err(|_| parse_err(line_no, "interval_ms is not an integer"))?;
                        interval_ms = Some(v);
                    }
                }
                continue;
            }
            if !seen_data && line.trim() == TRACE_HEADER {
                seen_data = true;
                continue;
            }
            seen_data = true;
            samples.push(parse_row(line, line_no)?);
        }

        if samples.is_empty() {
            return Err(TraceError::Empty);
        }
        Trace::from_samples(samples, interval_ms)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> TraceError {
    TraceError::Parse {
        line,
        msg: msg.into(),
    }
}

fn validate_receiver_id(id: &str) -> Result<(), String> {
    if id.is_empty() {
        return Err("empty receiver_id".into());
    }
    if id.starts_with('#') || id.chars().any(|c| c == ',' || c.is_whitespace()) {
        return Err(format!("receiver_id {id:?} contains reserved characters"));
    }
    Ok(())
}

fn parse_row(line: &str, line_no: usize) -> Result<PacketSample, TraceError> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 4 {
        return Err(parse_err(
            line_no,
            format!("expected 4 columns, found {}", fields.len()),
        ));
    }
    let receiver_id = fields[0].trim();
    validate_receiver_id(receiver_id).map_err(|m| parse_err(line_no, m))?;
    let seq = fields[1]
        .trim()
        .parse::<u64>()
        .map_err(|_| parse_err(line_no, format!("seq {:?} is not a non-negative integer", fields[1])))?;
    let timestamp_ms = fields[2].trim().parse::<u64>().map_err(|_| {
        parse_err(
            line_no,
            format!("timestamp_ms {:?} is not a non-negative integer", fields[2]),
        )
    })?;
    let rssi_dbm = fields[3]
        .trim()
        .parse::<i32>()
        .map_err(|_| parse_err(line_no, format!("rssi_dbm {:?} is not an integer", fields[3])))?;
    if !(RSSI_MIN_DBM..=RSSI_MAX_DBM).contains(&rssi_dbm) {
        return Err(parse_err(
            line_no,
            format!("rssi_dbm {rssi_dbm} outside [-127, 0]"),
        ));
    }
    Ok(PacketSample {
        receiver_id: receiver_id.to_string(),
        seq,
        timestamp_ms,
        rssi_dbm,
    })
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<Trace, TraceError> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| {
        let line = 1 + e.as_bytes()[..e.utf8_error().valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        parse_err(line, "invalid UTF-8")
    })?;
    Trace::parse(&text)
}

pub fn write_trace(trace: &Trace, path: impl AsRef<Path>) -> Result<(), TraceError> {
    trace.validate()?;
    fs::write(path, trace.to_csv_string())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(id: &str, seq: u64, ts: u64, rssi: i32) -> PacketSample {
        PacketSample {
            receiver_id: id.into(),
            seq,
            timestamp_ms: ts,
            rssi_dbm: rssi,
        }
    }

    #[test]
    fn parses_headerless_rows() {
        let t = Trace::parse("R1,0,0,-60\nR1,1,150,-61\n").unwrap();
        assert_eq!(t.receiver_ids().collect::<Vec<_>>(), vec!["R1"]);
        assert_eq!(t.receiver("R1").unwrap().len(), 2);
        assert_eq!(t.rssi("R1").unwrap(), vec![-60, -61]);
    }

    #[test]
    fn groups_and_sorts_interleaved_receivers() {
        let text = "# interval_ms=150\nreceiver_id,seq,timestamp_ms,rssi_dbm\n\
                    R2,1,150,-70\nR1,1,150,-61\nR2,0,0,-71\nR1,0,0,-60\n";
        let t = Trace::parse(text).unwrap();
        assert_eq!(t.interval_ms, Some(150));
        let r1: Vec<u64> = t.receiver("R1").unwrap().iter().map(|s| s.seq).collect();
        let r2: Vec<u64> = t.receiver("R2").unwrap().iter().map(|s| s.seq).collect();
        assert_eq!(r1, vec![0, 1]);
        assert_eq!(r2, vec![0, 1]);
    }

    #[test]
    fn non_numeric_field_cites_line() {
        match Trace::parse("R1,0,0,-60\nR1,1,150,abc\n") {
            Err(TraceError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_column_count_is_parse_error() {
        assert!(matches!(
            Trace::parse("R1,0,0\n"),
            Err(TraceError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn duplicate_seq_is_integrity_error() {
        assert!(matches!(
            Trace::parse("R1,0,0,-60\nR1,0,10,-61\n"),
            Err(TraceError::Integrity { .. })
        ));
    }

    #[test]
    fn decreasing_timestamp_is_integrity_error() {
        assert!(matches!(
            Trace::parse("R1,0,100,-60\nR1,1,50,-61\n"),
            Err(TraceError::Integrity { .. })
        ));
    }

    #[test]
    fn gaps_are_kept() {
        let t = Trace::parse("R1,0,0,-60\nR1,5,750,-61\n").unwrap();
        assert_eq!(t.receiver("R1").unwrap()[1].seq, 5);
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(Trace::parse(""), Err(TraceError::Empty)));
        assert!(matches!(
            Trace::parse("# interval_ms=150\nreceiver_id,seq,timestamp_ms,rssi_dbm\n"),
            Err(TraceError::Empty)
        ));
    }

    #[test]
    fn rssi_range_enforced() {
        assert!(Trace::parse("R1,0,0,5\n").is_err());
        assert!(Trace::parse("R1,0,0,-128\n").is_err());
        assert!(Trace::parse("R1,0,0,-127\n").is_ok());
    }

    #[test]
    fn empty_receiver_rejected_before_write() {
        let mut receivers = BTreeMap::new();
        receivers.insert("R1".to_string(), Vec::new());
        let t = Trace {
            receivers,
            interval_ms: None,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        assert!(matches!(
            write_trace(&t, &path),
            Err(TraceError::Invariant(_))
        ));
        assert!(!path.exists());
    }

    #[test]
    fn single_sample_rewrite_is_byte_stable() {
        let t = Trace::from_samples([sample("R1", 0, 0, -60)], Some(150)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_trace(&t, &a).unwrap();
        let back = read_trace(&a).unwrap();
        assert_eq!(back, t);
        write_trace(&back, &b).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }

    #[test]
    fn offset_shifts_every_reading() {
        let t = Trace::from_samples(
            [sample("R1", 0, 0, -60), sample("R1", 1, 150, -58)],
            None,
        )
        .unwrap();
        assert_eq!(t.with_rssi_offset(-5).rssi("R1").unwrap(), vec![-65, -63]);
    }
}
