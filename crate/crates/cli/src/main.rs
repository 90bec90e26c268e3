use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rssi_count::detect::{
    self, events_from_csv, events_to_csv, fuse_receivers, pairs_from_csv, pairs_to_csv,
    window_sweep, DetectorConfig, Method,
};
use rssi_count::features::{read_features, write_features, FEATURE_NAMES};
use rssi_count::lda::{self, group_stats_table, load_model, save_model, structure_matrix, Dataset, LoadOptions};
use rssi_count::pipeline::corpus::{build_corpus, CorpusSpec};
use rssi_count::pipeline::{
    evaluate, extract_all, label_pairs, pair_packet_span, run_zone, CountOptions, CountReport,
    Evaluation, ReceiverPair,
};
use rssi_count::synth::{generate, parse_scenario, scenario_from_groups, scenario_to_csv, SynthConfig};
use rssi_count::trace::{read_trace, write_trace};
use rssi_count::truth::{read_labels, write_labels};
use rssi_count::{Execution, LdaModel};

/// Device-free people counting from RSSI traces.
#[derive(Parser)]
#[command(name = "rssi-count", version)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory that receives output files.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled synthetic trace (trace.csv, labels.csv).
    Synth(SynthArgs),
    /// Generate a labeled training corpus (features.csv).
    Corpus(CorpusArgs),
    /// Detect movement on each receiver (decisions_<rx>.csv, events_<rx>.csv).
    Detect(DetectArgs),
    /// Pair two receivers' events and drop unconfirmed ones (pairs.csv).
    Fuse(FuseArgs),
    /// Extract feature vectors from paired events (features.csv).
    Features(FeaturesArgs),
    /// Fit a discriminant model (model.txt and report CSVs).
    Train(TrainArgs),
    /// Classify feature vectors with a fitted model (predictions.csv).
    Classify(ClassifyArgs),
    /// Count people crossing a zone, end to end.
    Count(CountArgs),
    /// Detection error rate for a range of window sizes (sweep.csv).
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct DetectorArgs {
    /// Movement test.
    #[arg(long, default_value = "std", value_parser = ["prob", "std"])]
    method: String,
    /// Sliding window length in fluctuations.
    #[arg(long, default_value_t = detect::DEFAULT_WINDOW)]
    window: usize,
    /// Movement when the in-band probability is below this.
    #[arg(long, default_value_t = detect::DEFAULT_PROB_THRESHOLD)]
    prob_threshold: f64,
    /// Movement when the window std is above this (dB).
    #[arg(long, default_value_t = detect::DEFAULT_STD_THRESHOLD)]
    std_threshold: f64,
    /// Shortest event kept, in windows.
    #[arg(long, default_value_t = detect::DEFAULT_MIN_DURATION)]
    min_duration: usize,
    /// Longest quiet run bridged inside one event.
    #[arg(long, default_value_t = detect::DEFAULT_MERGE_GAP)]
    merge_gap: usize,
    /// Largest gap between paired events on two receivers.
    #[arg(long, default_value_t = detect::DEFAULT_PAIRING_WINDOW)]
    pairing_window: usize,
}

impl DetectorArgs {
    fn config(&self) -> Result<DetectorConfig> {
        Ok(DetectorConfig {
            method: self.method.parse::<Method>()?,
            window: self.window,
            prob_threshold: self.prob_threshold,
            std_threshold: self.std_threshold,
            min_duration: self.min_duration,
            merge_gap: self.merge_gap,
            pairing_window: self.pairing_window,
        })
    }
}

#[derive(Args, Clone)]
struct GeneratorArgs {
    #[arg(long, default_value_t = -60, allow_hyphen_values = true)]
    baseline_rssi: i32,
    #[arg(long, default_value_t = 0.5)]
    quiet_sigma: f64,
    #[arg(long, default_value_t = 4.0)]
    active_sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_per_person: f64,
    #[arg(long, default_value_t = 20)]
    duration_base: usize,
    #[arg(long, default_value_t = 8)]
    duration_per_person: usize,
    #[arg(long, default_value_t = 150)]
    interval_ms: u32,
    /// Receivers next to the transmitter (repeatable).
    #[arg(long = "near", default_values_t = vec!["R1".to_string()])]
    near: Vec<String>,
    /// Receiver at the far end of the zone.
    #[arg(long, default_value = "R2")]
    far: String,
    /// Quiet packets before the first crossing.
    #[arg(long, default_value_t = 60)]
    lead_in: usize,
    /// Quiet packets between crossings.
    #[arg(long, default_value_t = 80)]
    gap: usize,
}

impl GeneratorArgs {
    fn config(&self, seed: u64) -> SynthConfig {
        SynthConfig {
            baseline_rssi_dbm: self.baseline_rssi,
            quiet_sigma: self.quiet_sigma,
            active_sigma_base: self.active_sigma,
            sigma_per_person: self.sigma_per_person,
            duration_base: self.duration_base,
            duration_per_person: self.duration_per_person,
            interval_ms: self.interval_ms,
            near_receivers: self.near.clone(),
            far_receiver: self.far.clone(),
            rng_seed: seed,
            ..SynthConfig::default()
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Scenario CSV (start_sample,group_size,delay_r2,duration_r1,duration_r2).
    #[arg(long, conflicts_with = "groups")]
    scenario: Option<PathBuf>,
    /// Comma-separated group sizes laid out one after another.
    #[arg(long, value_delimiter = ',')]
    groups: Vec<u32>,
    /// Trace length; defaults to what the events need.
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    generator: GeneratorArgs,
}

#[derive(Args)]
struct CorpusArgs {
    /// Crossings per group size.
    #[arg(long, default_value_t = 50)]
    per_group: usize,
    #[arg(long, default_value_t = 5)]
    max_group: u32,
    #[arg(long, default_value_t = 10)]
    events_per_trace: usize,
    #[command(flatten)]
    generator: GeneratorArgs,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Receivers to process (repeatable); all when omitted.
    #[arg(long = "receiver")]
    receivers: Vec<String>,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Args)]
struct FuseArgs {
    /// Event CSV of the near receiver.
    first: PathBuf,
    /// Event CSV of the far receiver.
    second: PathBuf,
    #[arg(long, default_value_t = detect::DEFAULT_PAIRING_WINDOW)]
    pairing_window: usize,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    pairs: PathBuf,
    /// Ground-truth labels used to tag each vector with its group size.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    features: PathBuf,
    /// Paired events the features came from; with --labels, evaluates by overlap.
    #[arg(long, requires = "labels")]
    pairs: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Model file; give one per --pair or one shared by all.
    #[arg(long = "model", required = true)]
    models: Vec<PathBuf>,
    /// Receiver pair as NEAR-FAR or NEAR,FAR (repeatable).
    #[arg(long = "pair", default_values_t = vec!["R1-R2".to_string()])]
    pairs: Vec<String>,
    /// Ground-truth labels for evaluation.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Report counts per period of this many samples.
    #[arg(long)]
    period: Option<usize>,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Window sizes to try.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 5, 10, 15, 20, 30, 40])]
    windows: Vec<usize>,
    /// Fluctuations after each truth boundary left unscored.
    #[arg(long, default_value_t = detect::DEFAULT_SWEEP_MARGIN)]
    margin: usize,
    #[command(flatten)]
    detector: DetectorArgs,
}

struct Ctx {
    seed: u64,
    out: PathBuf,
    exec: Execution,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
        Ok(p)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    fs::create_dir_all(&cli.output_dir)
        .with_context(|| format!("creating {}", cli.output_dir.display()))?;
    let ctx = Ctx {
        seed: cli.seed,
        out: cli.output_dir,
        exec: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    match cli.command {
        Command::Synth(a) => synth(&ctx, a),
        Command::Corpus(a) => corpus(&ctx, a),
        Command::Detect(a) => detect_cmd(&ctx, a),
        Command::Fuse(a) => fuse(&ctx, a),
        Command::Features(a) => features(&ctx, a),
        Command::Train(a) => train(&ctx, a),
        Command::Classify(a) => classify(&ctx, a),
        Command::Count(a) => count(&ctx, a),
        Command::Sweep(a) => sweep(&ctx, a),
    }
}

fn synth(ctx: &Ctx, a: SynthArgs) -> Result<()> {
    let mut cfg = a.generator.config(ctx.seed);
    let (events, needed) = match (&a.scenario, a.groups.is_empty()) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let events = parse_scenario(&text)?;
            let needed = events
                .iter()
                .map(|e| e.far_span().1.max(e.near_span().1) + 1 + a.generator.gap as i64)
                .max()
                .unwrap_or(0)
                .max(0) as usize;
            (events, needed)
        }
        (None, false) => scenario_from_groups(&a.groups, &cfg, a.generator.lead_in, a.generator.gap),
        (None, true) => (Vec::new(), 0),
    };
    cfg.n_samples = match a.samples {
        Some(n) => n,
        None if events.is_empty() => cfg.n_samples,
        None => needed,
    };
    let (trace, truth) = generate(&cfg, &events)?;
    write_trace(&trace, ctx.path("trace.csv"))?;
    write_labels(&truth, ctx.path("labels.csv"))?;
    ctx.write("scenario.csv", &scenario_to_csv(&events))?;
    println!(
        "{} events, {} people, {} receivers x {} samples",
        truth.events.len(),
        truth.head_count(),
        trace.receivers().len(),
        cfg.n_samples
    );
    Ok(())
}

fn corpus(ctx: &Ctx, a: CorpusArgs) -> Result<()> {
    let spec = CorpusSpec {
        synth: a.generator.config(ctx.seed),
        per_group: a.per_group,
        max_group: a.max_group,
        events_per_trace: a.events_per_trace,
        lead_in: a.generator.lead_in,
        gap: a.generator.gap,
    };
    let corpus = build_corpus(&spec, &a.detector.config()?, ctx.exec)?;
    write_features(&corpus.features, ctx.path("features.csv"))?;
    println!(
        "{} crossings, {} labeled events, {} missed, {} unmatched detections, {} unconfirmed detections discarded",
        corpus.crossings,
        corpus.features.len(),
        corpus.missed(),
        corpus.unmatched_detections,
        corpus.discarded_false_positives
    );
    Ok(())
}

fn detect_cmd(ctx: &Ctx, a: DetectArgs) -> Result<()> {
    let trace = read_trace(&a.trace)?;
    let cfg = a.detector.config()?;
    let ids: Vec<String> = if a.receivers.is_empty() {
        trace.receiver_ids().map(str::to_string).collect()
    } else {
        a.receivers.clone()
    };
    let results = ctx.exec.try_map(&ids, |id| detect::detect_receiver(&trace, id, &cfg))?;
    for r in &results {
        ctx.write(&format!("decisions_{}.csv", r.receiver_id), &r.decisions_csv())?;
        ctx.write(&format!("events_{}.csv", r.receiver_id), &events_to_csv(&r.events))?;
        println!("{}: {} events", r.receiver_id, r.events.len());
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn fuse(ctx: &Ctx, a: FuseArgs) -> Result<()> {
    let first = events_from_csv(&read_text(&a.first)?)?;
    let second = events_from_csv(&read_text(&a.second)?)?;
    let fused = fuse_receivers(&first, &second, a.pairing_window);
    ctx.write("pairs.csv", &pairs_to_csv(&fused.pairs))?;
    println!(
        "{} pairs, {} unconfirmed detections discarded ({} + {})",
        fused.pairs.len(),
        fused.discarded_count(),
        fused.discarded_a.len(),
        fused.discarded_b.len()
    );
    Ok(())
}

fn pair_of(pairs: &[detect::EventPair]) -> Option<ReceiverPair> {
    pairs
        .first()
        .map(|p| ReceiverPair::new(p.a.receiver_id.clone(), p.b.receiver_id.clone()))
}

fn features(ctx: &Ctx, a: FeaturesArgs) -> Result<()> {
    let pairs = pairs_from_csv(&read_text(&a.pairs)?)?;
    let mut vectors = extract_all(&pairs, ctx.exec)?;
    if let (Some(path), Some(rp)) = (&a.labels, pair_of(&pairs)) {
        let truth = read_labels(path)?;
        for (v, l) in vectors.iter_mut().zip(label_pairs(&pairs, &truth, &rp.ids())) {
            v.label = l;
        }
    }
    write_features(&vectors, ctx.path("features.csv"))?;
    let degenerate = vectors.iter().filter(|v| v.degenerate).count();
    println!("{} feature vectors ({degenerate} with a guarded CV)", vectors.len());
    Ok(())
}

fn train(ctx: &Ctx, a: TrainArgs) -> Result<()> {
    let vectors = read_features(&a.features)?;
    let labeled: Vec<_> = vectors.into_iter().filter(|v| v.label.is_some()).collect();
    let data = Dataset::from_features(&labeled)?;
    let model = LdaModel::fit(&data)?;
    save_model(&model, ctx.path("model.txt"))?;

    let mut t1 = String::from("variable,wilks_lambda,f,df1,df2,p_value\n");
    for (name, s) in FEATURE_NAMES.iter().zip(group_stats_table(&data)?) {
        t1.push_str(&format!(
            "{name},{},{},{},{},{}\n",
            s.wilks_lambda,
            s.f_stat,
            model.n_groups() - 1,
            data.len() - model.n_groups(),
            s.p_value
        ));
    }
    ctx.write("group_stats.csv", &t1)?;

    let mut t2 = String::from("function,eigenvalue,variance_pct,cumulative_pct,canonical_correlation\n");
    let mut cum = 0.0;
    for k in 0..model.n_functions() {
        cum += model.variance_pct[k];
        t2.push_str(&format!(
            "{},{},{},{},{}\n",
            k + 1,
            model.eigenvalues[k],
            model.variance_pct[k],
            cum,
            model.canonical_correlations[k]
        ));
    }
    ctx.write("eigenvalues.csv", &t2)?;

    let sm = structure_matrix(&model, &data)?;
    let fn_cols = |prefix: &str| (1..=model.n_functions()).map(|k| format!("{prefix}{k}")).collect::<Vec<_>>().join(",");
    let mut t3 = format!("variable,{},{},degenerate\n", fn_cols("function"), fn_cols("significant"));
    for (j, name) in FEATURE_NAMES.iter().enumerate() {
        let loads: Vec<String> = sm.loadings[j].iter().map(f64::to_string).collect();
        let sig: Vec<String> = sm.significant[j].iter().map(|b| u8::from(*b).to_string()).collect();
        t3.push_str(&format!("{name},{},{},{}\n", loads.join(","), sig.join(","), u8::from(sm.degenerate[j])));
    }
    ctx.write("structure_matrix.csv", &t3)?;

    let mut t4 = format!("variable,{}\n", fn_cols("function"));
    for (j, name) in FEATURE_NAMES.iter().enumerate() {
        let row: Vec<String> = model.coefficients.iter().map(|c| c[j].to_string()).collect();
        t4.push_str(&format!("{name},{}\n", row.join(",")));
    }
    let consts: Vec<String> = model.constants.iter().map(f64::to_string).collect();
    t4.push_str(&format!("(constant),{}\n", consts.join(",")));
    ctx.write("coefficients.csv", &t4)?;

    let mut centroids = format!("group,{}\n", fn_cols("function"));
    for (l, c) in model.group_labels.iter().zip(&model.centroids) {
        let row: Vec<String> = c.iter().map(f64::to_string).collect();
        centroids.push_str(&format!("{l},{}\n", row.join(",")));
    }
    ctx.write("centroids.csv", &centroids)?;

    let ev = Evaluation::from_pairs(
        &model.group_labels,
        labeled.iter().map(|v| Ok::<_, lda::LdaError>((v.label, Some(model.classify(&v.values)?)))).collect::<Result<Vec<_>, _>>()?,
    );
    println!(
        "trained on {} events, {} groups, {} functions{}",
        data.len(),
        model.n_groups(),
        model.n_functions(),
        if model.regularization_used > 0.0 { format!(", ridge {:e}", model.regularization_used) } else { String::new() }
    );
    print_accuracy("resubstitution", &ev);
    Ok(())
}

fn print_accuracy(what: &str, ev: &Evaluation) {
    println!(
        "{what} group accuracy {:.4}, head count {}/{} -> accuracy {:.4}",
        ev.group_accuracy, ev.predicted_head_count, ev.actual_head_count, ev.head_count_accuracy
    );
}

fn load(path: &Path) -> Result<LdaModel> {
    let opts = LoadOptions { expect_p: Some(FEATURE_NAMES.len()), ..LoadOptions::default() };
    load_model(path, opts).with_context(|| format!("loading model {}", path.display()))
}

fn classify(ctx: &Ctx, a: ClassifyArgs) -> Result<()> {
    let model = load(&a.model)?;
    let vectors = read_features(&a.features)?;
    let scored = ctx.exec.try_map(&vectors, |v| Ok::<_, lda::LdaError>((model.score(&v.values)?, model.classify(&v.values)?)))?;

    let mut out = format!(
        "event,label,predicted,{}\n",
        (1..=model.n_functions()).map(|k| format!("score{k}")).collect::<Vec<_>>().join(",")
    );
    for (k, (v, (scores, pred))) in vectors.iter().zip(&scored).enumerate() {
        let s: Vec<String> = scores.iter().map(f64::to_string).collect();
        let label = v.label.map_or(String::new(), |l| l.to_string());
        out.push_str(&format!("{k},{label},{pred},{}\n", s.join(",")));
    }
    ctx.write("predictions.csv", &out)?;
    println!(
        "{} events, head count {}",
        vectors.len(),
        scored.iter().map(|(_, p)| u64::from(*p)).sum::<u64>()
    );

    let ev = match (&a.pairs, &a.labels) {
        (Some(pairs_path), Some(labels_path)) => {
            let pairs = pairs_from_csv(&read_text(pairs_path)?)?;
            if pairs.len() != vectors.len() {
                bail!("{} pairs but {} feature vectors", pairs.len(), vectors.len());
            }
            let truth = read_labels(labels_path)?;
            let rp = pair_of(&pairs).unwrap_or_else(|| ReceiverPair::new("R1", "R2"));
            let preds: Vec<_> = pairs.iter().map(pair_packet_span).zip(scored.iter().map(|(_, p)| *p)).collect();
            Some(evaluate(&preds, &truth, &rp.ids(), &model.group_labels))
        }
        _ if vectors.iter().any(|v| v.label.is_some()) => Some(Evaluation::from_pairs(
            &model.group_labels,
            vectors.iter().zip(&scored).map(|(v, (_, p))| (v.label, Some(*p))),
        )),
        _ => None,
    };
    if let Some(ev) = ev {
        print_accuracy("classification", &ev);
        ctx.write("confusion.csv", &ev.confusion.to_csv())?;
    }
    Ok(())
}

fn count(ctx: &Ctx, a: CountArgs) -> Result<()> {
    let trace = read_trace(&a.trace)?;
    let truth = a.labels.as_deref().map(read_labels).transpose()?;
    let pairs: Vec<ReceiverPair> = a.pairs.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let models: Vec<LdaModel> = a.models.iter().map(|p| load(p)).collect::<Result<_>>()?;
    if models.len() != 1 && models.len() != pairs.len() {
        bail!("{} models for {} receiver pairs; give one model or one per pair", models.len(), pairs.len());
    }
    let zone: Vec<(ReceiverPair, &LdaModel)> = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), &models[i.min(models.len() - 1)]))
        .collect();
    let opts = CountOptions { detector: a.detector.config()?, period_samples: a.period };
    let report = run_zone(&trace, &zone, &opts, truth.as_ref(), ctx.exec)?;

    let mut csv = String::new();
    let mut jsonl = String::new();
    for (i, r) in report.pairs.iter().enumerate() {
        print!("{}", r.to_text());
        let rows = r.events_csv();
        csv.push_str(if i == 0 { &rows } else { rows.split_once('\n').map_or("", |x| x.1) });
        jsonl.push_str(&json_lines(r)?);
        if let Some(ev) = &r.evaluation {
            ctx.write(&format!("confusion_{}.csv", r.pair), &ev.confusion.to_csv())?;
        }
    }
    if report.pairs.len() > 1 {
        let c = report.combined_report();
        println!("zone head count {} (from pair {})", c.predicted_head_count, c.pair);
        jsonl.push_str(&serde_json::to_string(&json!({
            "record": "zone",
            "combined_pair": c.pair.to_string(),
            "predicted_head_count": c.predicted_head_count,
        }))?);
        jsonl.push('\n');
    }
    ctx.write("count_events.csv", &csv)?;
    ctx.write("count.jsonl", &jsonl)?;
    Ok(())
}

fn json_lines(r: &CountReport) -> Result<String> {
    let mut out = String::new();
    for (k, e) in r.events.iter().enumerate() {
        let mut v = serde_json::to_value(e)?;
        v["record"] = json!("event");
        v["pair"] = json!(r.pair.to_string());
        v["event"] = json!(k);
        out.push_str(&serde_json::to_string(&v)?);
        out.push('\n');
    }
    for p in &r.periods {
        let mut v = serde_json::to_value(p)?;
        v["record"] = json!("period");
        v["pair"] = json!(r.pair.to_string());
        out.push_str(&serde_json::to_string(&v)?);
        out.push('\n');
    }
    let mut summary = json!({
        "record": "summary",
        "pair": r.pair.to_string(),
        "events": r.events.len(),
        "predicted_head_count": r.predicted_head_count,
        "discarded_false_positives": r.discarded_false_positives,
    });
    if let Some(ev) = &r.evaluation {
        summary["evaluation"] = serde_json::to_value(ev)?;
    }
    out.push_str(&serde_json::to_string(&summary)?);
    out.push('\n');
    Ok(out)
}

fn sweep(ctx: &Ctx, a: SweepArgs) -> Result<()> {
    let trace = read_trace(&a.trace)?;
    let truth = read_labels(&a.labels)?;
    let report = window_sweep(&trace, &truth, &a.windows, &a.detector.config()?, a.margin, ctx.exec)?;
    let mut csv = String::from("window,errors,scored,error_rate\n");
    println!("window  errors  scored  error_rate");
    for r in &report.rows {
        csv.push_str(&format!("{},{},{},{}\n", r.window, r.errors, r.scored, r.error_rate));
        println!("{:>6}  {:>6}  {:>6}  {:.4}", r.window, r.errors, r.scored, r.error_rate);
    }
    if let Some(best) = report.best_window {
        println!("best window {best}");
    }
    ctx.write("sweep.csv", &csv)?;
    Ok(())
}
