mod common;

use proptest::prelude::*;

use common::batch_mean_std;
use rssi_count::detect::{
    fluctuations_from_rssi, fuse_receivers, prob_in_band, window_stats, DetectionEvent, Method,
    WindowStats,
};
use rssi_count::lda::{Dataset, LdaModel};
use rssi_count::trace::{PacketSample, Trace};

fn trace_strategy() -> impl Strategy<Value = Trace> {
    (1usize..4, 1usize..40, 1u32..500).prop_flat_map(|(n_rx, len, interval)| {
        prop::collection::vec(prop::collection::vec(-127i32..=0, len), n_rx).prop_map(
            move |rows| {
                let samples = rows
                    .iter()
                    .enumerate()
                    .flat_map(|(r, rssi)| {
                        rssi.iter().enumerate().map(move |(i, &v)| PacketSample {
                            receiver_id: format!("R{}", r + 1),
                            seq: i as u64,
                            timestamp_ms: i as u64 * u64::from(interval),
                            rssi_dbm: v,
                        })
                    })
                    .collect::<Vec<_>>();
                Trace::from_samples(samples, Some(interval)).unwrap()
            },
        )
    })
}

fn event(id: &str, start: usize, end: usize) -> DetectionEvent {
    DetectionEvent {
        receiver_id: id.into(),
        start_index: start,
        end_index: end,
        method: Method::Std,
        stats: (start..=end)
            .map(|i| WindowStats { index: i, mean: 0.0, std: 3.0, prob_in_band: 0.2 })
            .collect(),
    }
}

fn events_strategy(id: &'static str) -> impl Strategy<Value = Vec<DetectionEvent>> {
    prop::collection::vec((0usize..40, 0usize..15), 0..8).prop_map(move |gaps| {
        let mut at = 0;
        gaps.into_iter()
            .map(|(gap, len)| {
                let start = at + gap + 1;
                at = start + len;
                event(id, start, at)
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn trace_csv_round_trip(trace in trace_strategy()) {
        let text = trace.to_csv_string();
        let back = Trace::parse(&text).unwrap();
        prop_assert_eq!(&back, &trace);
        prop_assert_eq!(back.to_csv_string(), text);
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..400), seed in any::<u64>()) {
        let base = "receiver_id,seq,timestamp_ms,rssi_dbm\nR1,0,0,-60\nR1,1,150,-61\nR2,0,0,-70\n";
        let mut text = base.as_bytes().to_vec();
        for (k, b) in bytes.iter().enumerate() {
            let pos = (seed as usize).wrapping_add(k * 7919) % (text.len() + 1);
            if k % 3 == 0 && !text.is_empty() {
                text.remove(pos.min(text.len() - 1));
            } else {
                text.insert(pos, *b);
            }
        }
        let _ = Trace::parse(&String::from_utf8_lossy(&text));
    }

    #[test]
    fn band_probability_falls_as_spread_grows(mean in -3.0f64..3.0, s1 in 0.05f64..20.0, ds in 0.0f64..20.0) {
        // only holds while the mean sits inside the band
        prop_assume!(mean.abs() <= 1.0);
        let a = prob_in_band(mean, s1).unwrap();
        let b = prob_in_band(mean, s1 + ds).unwrap();
        prop_assert!(b <= a + 1e-12);
    }

    #[test]
    fn fusion_conserves_events(a in events_strategy("R1"), b in events_strategy("R2"), window in 0usize..40) {
        let fused = fuse_receivers(&a, &b, window);
        prop_assert_eq!(fused.pairs.len() + fused.discarded_a.len(), a.len());
        prop_assert_eq!(fused.pairs.len() + fused.discarded_b.len(), b.len());
        for p in &fused.pairs {
            let gap = p.a.start_index.saturating_sub(p.b.end_index).max(p.b.start_index.saturating_sub(p.a.end_index));
            prop_assert!(gap <= window);
        }
    }

    #[test]
    fn incremental_window_matches_batch(values in prop::collection::vec(-30i32..30, 2..200), n in 2usize..20) {
        let v: Vec<f64> = values.iter().map(|&x| f64::from(x)).collect();
        prop_assume!(v.len() >= n);
        let stats = window_stats(&v, n).unwrap();
        prop_assert_eq!(stats.len(), v.len() - n + 1);
        for s in &stats {
            let (m, sd) = batch_mean_std(&v[s.index + 1 - n..=s.index]);
            prop_assert!((s.mean - m).abs() < 1e-9);
            prop_assert!((s.std - sd).abs() < 1e-9);
        }
    }

    #[test]
    fn fluctuations_telescope(rssi in prop::collection::vec(-127i32..=0, 2..300)) {
        let f = fluctuations_from_rssi(&rssi).unwrap();
        prop_assert_eq!(f.len(), rssi.len() - 1);
        let total: f64 = f.iter().sum();
        prop_assert_eq!(total, f64::from(rssi[rssi.len() - 1] - rssi[0]));
    }

    #[test]
    fn classification_ignores_feature_scaling(scale in prop::collection::vec(0.1f64..10.0, 3), seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..45)
            .map(|i| (0..3).map(|j| (i % 3) as f64 * (j + 1) as f64 + rng.random::<f64>() * 3.0).collect())
            .collect();
        let labels: Vec<u32> = (0..45).map(|i| (i % 3) as u32 + 1).collect();
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().zip(&scale).map(|(a, s)| a * s).collect()).collect();
        let m = LdaModel::fit(&Dataset::new(rows.clone(), labels.clone())).unwrap();
        let ms = LdaModel::fit(&Dataset::new(scaled.clone(), labels)).unwrap();
        for (r, rs) in rows.iter().zip(&scaled) {
            let a = m.score(r).unwrap();
            let b = ms.score(rs).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-6 * (1.0 + x.abs()));
            }
            prop_assert_eq!(m.classify(r).unwrap(), ms.classify(rs).unwrap());
        }
    }
}
