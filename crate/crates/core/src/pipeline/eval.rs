//! Confusion matrices, accuracy metrics and event-to-truth matching.

use serde::Serialize;

use crate::truth::GroundTruth;

/// Square count matrix over group labels plus a trailing "none" row/column:
/// the none column holds labeled crossings with no matching detection
/// (misses), the none row holds detections matching no crossing (false
/// alarms).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<u32>,
    /// `(labels.len() + 1)²` counts, row = actual, column = predicted.
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(labels: &[u32]) -> Self {
        let mut labels = labels.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let n = labels.len() + 1;
        ConfusionMatrix {
            labels,
            counts: vec![vec![0; n]; n],
        }
    }

    /// From a square `g × g` table with no misses or false alarms.
    pub fn from_counts(labels: &[u32], table: &[Vec<u64>]) -> Self {
        let mut m = ConfusionMatrix::new(labels);
        for (i, row) in table.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                m.counts[i][j] = c;
            }
        }
        m
    }

    fn slot(&self, label: Option<u32>) -> usize {
        label
            .and_then(|l| self.labels.iter().position(|&x| x == l))
            .unwrap_or(self.labels.len())
    }

    /// Records one outcome; labels outside the matrix count as none.
    pub fn record(&mut self, actual: Option<u32>, predicted: Option<u32>) {
        let (i, j) = (self.slot(actual), self.slot(predicted));
        self.counts[i][j] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn group_accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            1.0
        } else {
            self.correct() as f64 / total as f64
        }
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let n = self.counts.len();
        (0..n).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }

    /// Σ label × column total.
    pub fn predicted_head_count(&self) -> u64 {
        self.labels
            .iter()
            .zip(self.column_sums())
            .map(|(&l, c)| u64::from(l) * c)
            .sum()
    }

    /// Σ label × row total.
    pub fn actual_head_count(&self) -> u64 {
        self.labels
            .iter()
            .zip(self.row_sums())
            .map(|(&l, c)| u64::from(l) * c)
            .sum()
    }

    pub fn misses(&self) -> u64 {
        let none = self.labels.len();
        (0..none).map(|i| self.counts[i][none]).sum()
    }

    pub fn false_alarms(&self) -> u64 {
        let none = self.labels.len();
        (0..none).map(|j| self.counts[none][j]).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut header: Vec<String> = vec!["actual".into()];
        header.extend(self.labels.iter().map(u32::to_string));
        header.push("none".into());
        header.push("total".into());
        let mut out = header.join(",");
        out.push('\n');
        for (i, row) in self.counts.iter().enumerate() {
            let name = self
                .labels
                .get(i)
                .map_or_else(|| "none".to_string(), u32::to_string);
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&format!("{name},{},{}\n", cells.join(","), row.iter().sum::<u64>()));
        }
        out
    }
}

/// `min(pred, actual) / max(pred, actual)`; 1 when both are zero.
pub fn head_count_accuracy(predicted: u64, actual: u64) -> f64 {
    let hi = predicted.max(actual);
    if hi == 0 {
        1.0
    } else {
        predicted.min(actual) as f64 / hi as f64
    }
}

/// `1 - |pred - actual| / actual`, the relative-error form; may be negative
/// under heavy over-counting. 1 when both are zero.
pub fn head_count_relative_accuracy(predicted: u64, actual: u64) -> f64 {
    if actual == 0 {
        return if predicted == 0 { 1.0 } else { 0.0 };
    }
    1.0 - predicted.abs_diff(actual) as f64 / actual as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub confusion: ConfusionMatrix,
    pub group_accuracy: f64,
    pub head_count_accuracy: f64,
    pub head_count_relative_accuracy: f64,
    pub predicted_head_count: u64,
    pub actual_head_count: u64,
    pub misses: u64,
    pub false_alarms: u64,
}

impl Evaluation {
    pub fn from_confusion(confusion: ConfusionMatrix) -> Self {
        let predicted = confusion.predicted_head_count();
        let actual = confusion.actual_head_count();
        Evaluation {
            group_accuracy: confusion.group_accuracy(),
            head_count_accuracy: head_count_accuracy(predicted, actual),
            head_count_relative_accuracy: head_count_relative_accuracy(predicted, actual),
            predicted_head_count: predicted,
            actual_head_count: actual,
            misses: confusion.misses(),
            false_alarms: confusion.false_alarms(),
            confusion,
        }
    }

    /// Evaluation of paired `(actual, predicted)` labels.
    pub fn from_pairs(labels: &[u32], outcomes: impl IntoIterator<Item = (Option<u32>, Option<u32>)>) -> Self {
        let mut m = ConfusionMatrix::new(labels);
        for (a, p) in outcomes {
            m.record(a, p);
        }
        Evaluation::from_confusion(m)
    }
}

fn overlap(a: (usize, usize), b: (usize, usize)) -> usize {
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    if hi >= lo {
        hi - lo + 1
    } else {
        0
    }
}

/// One-to-one matching of detected spans to truth events by maximal
/// temporal overlap (greedy, largest overlap first). Spans are inclusive
/// packet indices; truth extents are taken over `receivers`. Returns, for
/// each detection, the index of its truth event.
pub fn match_to_truth(
    spans: &[(usize, usize)],
    truth: &GroundTruth,
    receivers: &[&str],
) -> Vec<Option<usize>> {
    let extents: Vec<Option<(usize, usize)>> = truth
        .events
        .iter()
        .map(|e| {
            let spans: Vec<_> = e
                .spans
                .iter()
                .filter(|s| receivers.contains(&s.receiver_id.as_str()))
                .collect();
            let start = spans.iter().map(|s| s.start_sample).min()?;
            let end = spans.iter().map(|s| s.end_sample).max()?;
            Some((start, end))
        })
        .collect();

    let mut candidates = Vec::new();
    for (i, &span) in spans.iter().enumerate() {
        for (j, ext) in extents.iter().enumerate() {
            if let Some(ext) = ext {
                let ov = overlap(span, *ext);
                if ov > 0 {
                    candidates.push((std::cmp::Reverse(ov), i, j));
                }
            }
        }
    }
    candidates.sort_unstable();
    let mut assigned = vec![None; spans.len()];
    let mut used = vec![false; truth.events.len()];
    for (_, i, j) in candidates {
        if assigned[i].is_none() && !used[j] {
            assigned[i] = Some(j);
            used[j] = true;
        }
    }
    assigned
}

/// Evaluates predicted `(span, label)` detections against ground truth.
/// Unmatched truth events (on `receivers`) are misses; unmatched detections
/// are false alarms.
pub fn evaluate(
    predictions: &[((usize, usize), u32)],
    truth: &GroundTruth,
    receivers: &[&str],
    labels: &[u32],
) -> Evaluation {
    let spans: Vec<(usize, usize)> = predictions.iter().map(|(s, _)| *s).collect();
    let assigned = match_to_truth(&spans, truth, receivers);
    let mut all_labels = labels.to_vec();
    all_labels.extend(truth.events.iter().map(|e| e.group_size));
    all_labels.extend(predictions.iter().map(|(_, l)| *l));
    let mut m = ConfusionMatrix::new(&all_labels);
    let mut matched = vec![false; truth.events.len()];
    for ((_, pred), a) in predictions.iter().zip(&assigned) {
        match a {
            Some(j) => {
                matched[*j] = true;
                m.record(Some(truth.events[*j].group_size), Some(*pred));
            }
            None => m.record(None, Some(*pred)),
        }
    }
    for (j, e) in truth.events.iter().enumerate() {
        let relevant = e
            .spans
            .iter()
            .any(|s| receivers.contains(&s.receiver_id.as_str()));
        if relevant && !matched[j] {
            m.record(Some(e.group_size), None);
        }
    }
    Evaluation::from_confusion(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::{ReceiverSpan, TruthEvent};
    use approx::assert_abs_diff_eq;

    fn truth(events: &[(usize, usize, u32)]) -> GroundTruth {
        GroundTruth {
            events: events
                .iter()
                .enumerate()
                .map(|(k, &(s, e, g))| TruthEvent {
                    event_id: k,
                    group_size: g,
                    spans: vec![ReceiverSpan {
                        receiver_id: "R1".into(),
                        start_sample: s,
                        end_sample: e,
                    }],
                })
                .collect(),
        }
    }

    #[test]
    fn perfect_predictions() {
        let t = truth(&[(10, 20, 1), (50, 60, 3)]);
        let e = evaluate(&[((12, 25), 1), ((52, 66), 3)], &t, &["R1"], &[1, 2, 3]);
        assert_eq!(e.group_accuracy, 1.0);
        assert_eq!(e.head_count_accuracy, 1.0);
        assert_eq!(e.misses + e.false_alarms, 0);
    }

    #[test]
    fn misses_and_false_alarms_have_own_cells() {
        let t = truth(&[(10, 20, 2), (50, 60, 1)]);
        let e = evaluate(&[((12, 25), 2), ((200, 210), 1)], &t, &["R1"], &[1, 2]);
        assert_eq!(e.misses, 1);
        assert_eq!(e.false_alarms, 1);
        assert_eq!(e.confusion.total(), 3);
        assert_abs_diff_eq!(e.group_accuracy, 1.0 / 3.0);
        assert_eq!(e.predicted_head_count, 3);
        assert_eq!(e.actual_head_count, 3);
    }

    #[test]
    fn largest_overlap_wins() {
        let t = truth(&[(10, 30, 1), (33, 60, 2)]);
        let a = match_to_truth(&[(25, 50)], &t, &["R1"]);
        assert_eq!(a, vec![Some(1)]);
    }

    #[test]
    fn head_count_symmetric() {
        assert_abs_diff_eq!(head_count_accuracy(734, 750), 734.0 / 750.0);
        assert_eq!(head_count_accuracy(10, 8), head_count_accuracy(8, 10));
        assert_eq!(head_count_accuracy(0, 0), 1.0);
        assert_abs_diff_eq!(head_count_relative_accuracy(50, 39), 1.0 - 11.0 / 39.0);
    }

    #[test]
    fn csv_has_none_row() {
        let m = ConfusionMatrix::from_counts(&[1, 2], &[vec![3, 1], vec![0, 2]]);
        let csv = m.to_csv();
        assert!(csv.starts_with("actual,1,2,none,total\n1,3,1,0,4\n"));
        assert!(csv.ends_with("none,0,0,0,0\n"));
    }
}
