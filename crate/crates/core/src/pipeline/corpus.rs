//! Labeled training corpora assembled from synthetic traces.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{detect_pair, extract_all, label_pairs, PipelineError, ReceiverPair};
use crate::detect::DetectorConfig;
use crate::exec::Execution;
use crate::features::EventFeatureVector;
use crate::synth::{generate, scenario_from_groups, SynthConfig, SynthError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSpec {
    /// Generator settings shared by every trace; `n_samples` is derived and
    /// `rng_seed` is the base seed.
    pub synth: SynthConfig,
    pub per_group: usize,
    pub max_group: u32,
    pub events_per_trace: usize,
    pub lead_in: usize,
    pub gap: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            synth: SynthConfig::default(),
            per_group: 50,
            max_group: 5,
            events_per_trace: 10,
            lead_in: 60,
            gap: 80,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corpus {
    /// Labeled features of every fused detection matched to a crossing.
    pub features: Vec<EventFeatureVector>,
    pub crossings: usize,
    pub unmatched_detections: usize,
    pub discarded_false_positives: usize,
}

impl Corpus {
    pub fn missed(&self) -> usize {
        self.crossings - self.features.len()
    }
}

struct TraceOutcome {
    features: Vec<EventFeatureVector>,
    unmatched: usize,
    discarded: usize,
}

/// Generates `per_group` crossings for every group size in a seeded random
/// order, split over several traces, and runs detection, fusion and feature
/// extraction on each trace.
pub fn build_corpus(
    spec: &CorpusSpec,
    detector: &DetectorConfig,
    exec: Execution,
) -> Result<Corpus, PipelineError> {
    let mut groups: Vec<u32> = (1..=spec.max_group)
        .flat_map(|g| std::iter::repeat_n(g, spec.per_group))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.synth.rng_seed);
    groups.shuffle(&mut rng);
    let chunks: Vec<(usize, Vec<u32>)> = groups
        .chunks(spec.events_per_trace.max(1))
        .map(<[u32]>::to_vec)
        .enumerate()
        .collect();

    let pair = ReceiverPair::new(
        spec.synth.near_receivers[0].clone(),
        spec.synth.far_receiver.clone(),
    );
    let outcomes = exec.try_map(&chunks, |(k, chunk)| {
        let (events, n) = scenario_from_groups(chunk, &spec.synth, spec.lead_in, spec.gap);
        let cfg = SynthConfig {
            n_samples: n,
            rng_seed: spec.synth.rng_seed.wrapping_add(1 + *k as u64),
            ..spec.synth.clone()
        };
        let (trace, truth) = generate(&cfg, &events).map_err(synth_err)?;
        let det = detect_pair(&trace, &pair, detector, Execution::Sequential)?;
        let labels = label_pairs(&det.fusion.pairs, &truth, &pair.ids());
        let feats = extract_all(&det.fusion.pairs, Execution::Sequential)?;
        let mut features = Vec::new();
        let mut unmatched = 0;
        for (mut f, l) in feats.into_iter().zip(labels) {
            match l {
                Some(l) => {
                    f.label = Some(l);
                    features.push(f);
                }
                None => unmatched += 1,
            }
        }
        Ok::<_, PipelineError>(TraceOutcome {
            features,
            unmatched,
            discarded: det.fusion.discarded_count(),
        })
    })?;

    let mut corpus = Corpus {
        features: Vec::new(),
        crossings: groups.len(),
        unmatched_detections: 0,
        discarded_false_positives: 0,
    };
    for o in outcomes {
        corpus.features.extend(o.features);
        corpus.unmatched_detections += o.unmatched;
        corpus.discarded_false_positives += o.discarded;
    }
    Ok(corpus)
}

fn synth_err(e: SynthError) -> PipelineError {
    PipelineError::Config(e.to_string())
}
