//! `laughkit` command-line front end.
//!
//! Every subcommand writes its artifacts under `--out`, each file name
//! carrying the first 12 hex digits of the SHA-256 of the resolved
//! configuration and the input digests, plus a `provenance.<hash>.json` listing the inputs'
//! hashes, the configuration and the seed.
//!
//! A `--config` file holds `key = value` lines whose keys are the long flag
//! names of the subcommand; flags given on the command line win.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use laughkit::cfs::best_first_select;
use laughkit::corpus::{load_manifest, synthesize_corpus, validate_corpus, Corpus, SynthConfig};
use laughkit::dsp::WindowKind;
use laughkit::featureset::{check_registry, feature_name, index_of_name, FeatureTable};
use laughkit::harness::{
    balance_rng, balance_training_set, build_feature_table, render_overview, run_experiment,
    Dataset, Regime, SkippedSegment, TaskConfig, POOLED_STREAM,
};
use laughkit::stats;
use laughkit::svm::{SmoConfig, SvmModel};
use laughkit::FrameConfig;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(
    name = "laughkit",
    version,
    about = "Laughter and speech-laugh analysis pipeline"
)]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic annotated corpus.
    Synth(SynthArgs),
    /// Check a corpus manifest and its audio files.
    Validate(CorpusOnlyArgs),
    /// Extract the 5,967 features of every word unit or turn.
    Extract(PipelineArgs),
    /// Run correlation-based feature selection on the balanced data.
    Select(PipelineArgs),
    /// Train a one-vs-one SVM on the balanced data.
    Train(TrainArgs),
    /// Leave-one-speaker-out evaluation.
    Evaluate(PipelineArgs),
    /// Descriptive statistics over the annotations.
    Stats(CorpusOnlyArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Run directory for all artifacts.
    #[arg(long, default_value = "run")]
    out: PathBuf,
    /// Key-value config file; keys are long flag names.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct SynthArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of speakers.
    #[arg(long, default_value_t = 20)]
    speakers: usize,
    /// Turns per speaker.
    #[arg(long, default_value_t = 4)]
    turns_per_speaker: usize,
}

#[derive(Args, Debug, Clone)]
struct CorpusOnlyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Corpus manifest.
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
struct FrameArgs {
    /// Frame length in samples.
    #[arg(long, default_value_t = 400)]
    frame_length: usize,
    /// FFT size (power of two, at least the frame length).
    #[arg(long, default_value_t = 512)]
    fft_size: usize,
    /// Analysis window.
    #[arg(long, value_enum, default_value_t = Window::Hamming)]
    window: Window,
    /// Lowest F0 searched, Hz.
    #[arg(long, default_value_t = 50.0)]
    f0_min: f64,
    /// Highest F0 searched, Hz.
    #[arg(long, default_value_t = 500.0)]
    f0_max: f64,
    /// Pitch analysis window in samples.
    #[arg(long, default_value_t = 640)]
    pitch_window: usize,
    /// Voicing probability threshold.
    #[arg(long, default_value_t = 0.55)]
    voicing_threshold: f64,
    /// Number of mel filters.
    #[arg(long, default_value_t = 26)]
    mel_filters: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Window {
    Hamming,
    Hann,
    Rectangular,
}

impl FrameArgs {
    fn frame_config(&self) -> FrameConfig {
        FrameConfig {
            frame_length: self.frame_length,
            fft_size: self.fft_size,
            window: match self.window {
                Window::Hamming => WindowKind::Hamming,
                Window::Hann => WindowKind::Hann,
                Window::Rectangular => WindowKind::Rectangular,
            },
            f0_min: self.f0_min,
            f0_max: self.f0_max,
            pitch_window: self.pitch_window,
            voicing_threshold: self.voicing_threshold,
            mel_filters: self.mel_filters,
            ..FrameConfig::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
struct TaskArgs {
    /// word2, word3, word6, turn2 or turn3.
    #[arg(long, default_value = "word2")]
    task: String,
    /// Feature regime: FSn (all), FSc (per-fold CFS intersection), FSf (pooled CFS, leaky).
    #[arg(long, default_value = "FSn")]
    regime: String,
    /// Training cap CLASS=N, replacing the task default for that class (repeatable).
    #[arg(long, value_parser = parse_cap)]
    cap: Vec<(String, usize)>,
    /// SVM soft-margin constant.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// SMO stopping tolerance.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// SMO iteration limit.
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Non-improving expansions before the feature search stops.
    #[arg(long, default_value_t = 5)]
    stall_limit: usize,
}

fn parse_cap(s: &str) -> Result<(String, usize), String> {
    let (class, n) = s
        .split_once('=')
        .ok_or_else(|| format!("expected CLASS=N, got `{s}`"))?;
    let n = n.trim().parse().map_err(|e| format!("cap `{s}`: {e}"))?;
    Ok((class.trim().to_string(), n))
}

impl TaskArgs {
    fn task_config(&self, seed: u64) -> Result<TaskConfig> {
        let regime: Regime = self.regime.parse()?;
        let mut task = TaskConfig::from_task_name(&self.task, regime, seed)?;
        let names = task.class_names();
        for (class, n) in &self.cap {
            if !names.contains(class) {
                bail!(
                    "cap for unknown class `{class}` (classes: {})",
                    names.join(", ")
                );
            }
            task.balance_limits.insert(class.clone(), *n);
        }
        task.smo = SmoConfig {
            c: self.c,
            tol: self.tol,
            max_iter: self.max_iter,
        };
        task.stall_limit = self.stall_limit;
        Ok(task)
    }
}

#[derive(Args, Debug, Clone)]
struct PipelineArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Corpus manifest (features are extracted from its audio).
    #[arg(
        long,
        required_unless_present = "features",
        conflicts_with = "features"
    )]
    manifest: Option<PathBuf>,
    /// Previously extracted feature table (CSV).
    #[arg(long)]
    features: Option<PathBuf>,
    #[command(flatten)]
    frame: FrameArgs,
    #[command(flatten)]
    task: TaskArgs,
}

#[derive(Args, Debug, Clone)]
struct TrainArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Restrict training to the features named in this file, one per line.
    #[arg(long)]
    selection: Option<PathBuf>,
}

/// A command-line or config-file problem; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match parse_args(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(e) => {
            if let Some(clap_err) = e.downcast_ref::<clap::Error>() {
                clap_err.exit();
            }
            eprintln!("error: {e:#}");
            eprintln!("{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<UsageError>() { 2 } else { 1 })
        }
    }
}

/// Parses the command line, then reparses with the config file's entries
/// inserted ahead of the user's flags so that the flags win.
fn parse_args(argv: Vec<std::ffi::OsString>) -> Result<Cli> {
    let first = Cli::try_parse_from(&argv)?;
    let Some(config) = common(&first.command).config.clone() else {
        return Ok(first);
    };
    let sub = command_name(&first.command);
    let allowed: Vec<String> = Cli::command()
        .find_subcommand(sub)
        .expect("known subcommand")
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .filter(|l| l != "config" && l != "help")
        .collect();
    let text = fs::read_to_string(&config)
        .map_err(|e| UsageError(format!("config {}: {e}", config.display())))?;
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            UsageError(format!(
                "{}:{}: expected `key = value`",
                config.display(),
                n + 1
            ))
        })?;
        let key = key.trim().replace('_', "-");
        if !allowed.contains(&key) {
            return Err(UsageError(format!(
                "{}:{}: unknown key `{key}` for `{sub}` (known: {})",
                config.display(),
                n + 1,
                allowed.join(", ")
            ))
            .into());
        }
        extra.push(format!("--{key}").into());
        extra.push(value.trim().into());
    }
    let mut merged = argv[..2].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&argv[2..]);
    let matches = Cli::command().try_get_matches_from(merged)?;
    Ok(Cli::from_arg_matches(&matches)?)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Synth(_) => "synth",
        Command::Validate(_) => "validate",
        Command::Extract(_) => "extract",
        Command::Select(_) => "select",
        Command::Train(_) => "train",
        Command::Evaluate(_) => "evaluate",
        Command::Stats(_) => "stats",
    }
}

fn common(c: &Command) -> &CommonArgs {
    match c {
        Command::Synth(a) => &a.common,
        Command::Validate(a) | Command::Stats(a) => &a.common,
        Command::Extract(a) | Command::Select(a) | Command::Evaluate(a) => &a.common,
        Command::Train(a) => &a.pipeline.common,
    }
}

fn run(cli: Cli) -> Result<()> {
    check_registry().context("feature registry")?;
    let common = common(&cli.command).clone();
    if let Some(jobs) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("thread pool")?;
    }
    fs::create_dir_all(&common.out)
        .with_context(|| format!("creating {}", common.out.display()))?;
    let mut run = Run::new(command_name(&cli.command), common.out.clone(), common.seed);
    match &cli.command {
        Command::Synth(a) => synth(&mut run, a),
        Command::Validate(a) => validate(&mut run, a),
        Command::Extract(a) => extract(&mut run, a),
        Command::Select(a) => select(&mut run, a),
        Command::Train(a) => train(&mut run, a),
        Command::Evaluate(a) => evaluate(&mut run, a),
        Command::Stats(a) => stats_report(&mut run, a),
    }?;
    run.finish()
}

/// Artifact bookkeeping for one invocation.
struct Run {
    command: &'static str,
    out: PathBuf,
    seed: u64,
    config: Value,
    hash: String,
    inputs: BTreeMap<String, String>,
    outputs: Vec<String>,
}

impl Run {
    fn new(command: &'static str, out: PathBuf, seed: u64) -> Self {
        Self {
            command,
            out,
            seed,
            config: Value::Null,
            hash: String::new(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    fn set_config(&mut self, config: Value) {
        self.config = config;
    }

    /// Artifact names carry a hash of the resolved configuration and the
    /// input digests, fixed on first use.
    fn hash(&mut self) -> &str {
        if self.hash.is_empty() {
            let mut digests: Vec<&String> = self.inputs.values().collect();
            digests.sort();
            let canonical = json!({
                "command": self.command,
                "seed": self.seed,
                "config": self.config,
                "inputs": digests,
            });
            self.hash =
                hex::encode(Sha256::digest(canonical.to_string().as_bytes()))[..12].to_string();
        }
        &self.hash
    }

    fn path(&mut self, stem: &str, ext: &str) -> PathBuf {
        let name = format!("{stem}.{}.{ext}", self.hash());
        self.dir(&name)
    }

    fn dir(&mut self, name: &str) -> PathBuf {
        self.outputs.push(name.to_string());
        self.out.join(name)
    }

    fn write(&mut self, stem: &str, ext: &str, contents: &str) -> Result<PathBuf> {
        let path = self.path(stem, ext);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    fn input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.insert(
            path.display().to_string(),
            hex::encode(Sha256::digest(&bytes)),
        );
        Ok(())
    }

    fn corpus_inputs(&mut self, manifest: &Path, corpus: &Corpus) -> Result<()> {
        self.input(manifest)?;
        for t in &corpus.turns {
            self.input(&corpus.resolve_audio(t))?;
        }
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        let provenance = json!({
            "command": self.command,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
            "config_hash": self.hash(),
            "config": self.config,
            "inputs": self.inputs,
            "outputs": self.outputs,
        });
        let text = serde_json::to_string_pretty(&provenance)? + "\n";
        let path = self.path("provenance", "json");
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        for name in &self.outputs {
            println!("{}", self.out.join(name).display());
        }
        Ok(())
    }
}

fn synth(run: &mut Run, a: &SynthArgs) -> Result<()> {
    let cfg = SynthConfig {
        speakers: a.speakers,
        turns_per_speaker: a.turns_per_speaker,
        ..SynthConfig::default()
    };
    run.set_config(serde_json::to_value(&cfg)?);
    let name = format!("corpus.{}", run.hash());
    let dir = run.dir(&name);
    let corpus = synthesize_corpus(&cfg, run.seed, &dir)?;
    log::info!("{} turns written to {}", corpus.turns.len(), dir.display());
    Ok(())
}

fn load_corpus(run: &mut Run, manifest: &Path) -> Result<Corpus> {
    let corpus = load_manifest(manifest)?;
    run.corpus_inputs(manifest, &corpus)?;
    Ok(corpus)
}

fn validate(run: &mut Run, a: &CorpusOnlyArgs) -> Result<()> {
    run.set_config(json!({}));
    let corpus = load_corpus(run, &a.manifest)?;
    let report = validate_corpus(&corpus);
    run.write(
        "validation",
        "json",
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    let s = &report.summary;
    eprintln!(
        "{} speakers, {} turns, {} units, {} laughter instances in {} turns",
        s.speakers, s.turns, s.units, s.laughter_instances, s.laughter_turns
    );
    if !report.is_valid() {
        for v in &report.violations {
            eprintln!("{v:?}");
        }
        bail!("{} violations", report.violations.len());
    }
    Ok(())
}

fn pipeline_config(a: &PipelineArgs) -> Result<(TaskConfig, FrameConfig, Value)> {
    let task = a
        .task
        .task_config(a.common.seed)
        .map_err(|e| UsageError(format!("{e:#}")))?;
    let frame = a.frame.frame_config();
    frame.validate().map_err(|e| UsageError(e.to_string()))?;
    let value = json!({ "task": task, "frame": frame });
    Ok((task, frame, value))
}

/// Feature table from `--features`, or extracted from `--manifest`.
fn feature_table(
    run: &mut Run,
    a: &PipelineArgs,
    task: &TaskConfig,
    frame: &FrameConfig,
) -> Result<(FeatureTable, Vec<SkippedSegment>)> {
    if let Some(path) = &a.features {
        run.input(path)?;
        return Ok((FeatureTable::load(path)?, Vec::new()));
    }
    let manifest = a.manifest.as_ref().expect("clap requires one input");
    let corpus = load_corpus(run, manifest)?;
    Ok(build_feature_table(&corpus, task.granularity, frame)?)
}

fn extract(run: &mut Run, a: &PipelineArgs) -> Result<()> {
    if a.features.is_some() {
        return Err(UsageError("extract reads audio; pass --manifest".into()).into());
    }
    let (task, frame, _) = pipeline_config(a)?;
    // only the granularity and frame settings shape the table
    run.set_config(json!({ "granularity": task.granularity, "frame": frame }));
    let (table, skipped) = feature_table(run, a, &task, &frame)?;
    let path = run.path("features", "csv");
    table.save(&path)?;
    run.write(
        "skipped",
        "json",
        &(serde_json::to_string_pretty(&skipped)? + "\n"),
    )?;
    eprintln!("{} rows, {} segments skipped", table.len(), skipped.len());
    Ok(())
}

/// Labelled data with the pooled balancing applied.
fn balanced_pool(
    run: &mut Run,
    a: &PipelineArgs,
    task: &TaskConfig,
    frame: &FrameConfig,
) -> Result<(Dataset, Vec<usize>)> {
    let (table, skipped) = feature_table(run, a, task, frame)?;
    let data = Dataset::from_table(&table, task, skipped)?;
    let caps: Vec<Option<usize>> = task
        .class_names()
        .iter()
        .map(|c| task.balance_limits.get(c).copied())
        .collect();
    let all: Vec<usize> = (0..data.len()).collect();
    let kept = balance_training_set(
        &all,
        &data.labels,
        &caps,
        &mut balance_rng(task.seed, POOLED_STREAM),
    );
    Ok((data, kept))
}

fn select(run: &mut Run, a: &PipelineArgs) -> Result<()> {
    let (task, frame, config) = pipeline_config(a)?;
    run.set_config(config);
    let (data, kept) = balanced_pool(run, a, &task, &frame)?;
    let x: Vec<Vec<f64>> = kept.iter().map(|&i| data.features[i].clone()).collect();
    let y: Vec<usize> = kept.iter().map(|&i| data.labels[i]).collect();
    let sel = best_first_select(&x, &y, task.stall_limit)?;
    let mut names = String::new();
    for &j in &sel.selected {
        names.push_str(feature_name(j)?);
        names.push('\n');
    }
    run.write("selection", "txt", &names)?;
    let summary = json!({
        "merit": sel.merit,
        "evaluations": sel.evaluations,
        "fold": Value::Null,
        "instances": kept.len(),
        "selected": sel.selected,
    });
    run.write(
        "selection",
        "json",
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )?;
    eprintln!(
        "{} features selected, merit {:.4}",
        sel.selected.len(),
        sel.merit
    );
    Ok(())
}

fn read_selection(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let idx = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(index_of_name)
        .collect::<Result<Vec<_>, _>>()?;
    if idx.is_empty() {
        bail!("{} lists no features", path.display());
    }
    Ok(idx)
}

fn train(run: &mut Run, a: &TrainArgs) -> Result<()> {
    let (task, frame, mut config) = pipeline_config(&a.pipeline)?;
    let subset = a.selection.as_deref().map(read_selection).transpose()?;
    config["features"] = json!(subset);
    run.set_config(config);
    if let Some(p) = &a.selection {
        run.input(p)?;
    }
    let (data, kept) = balanced_pool(run, &a.pipeline, &task, &frame)?;
    let x: Vec<Vec<f64>> = kept
        .iter()
        .map(|&i| match &subset {
            Some(s) => s.iter().map(|&j| data.features[i][j]).collect(),
            None => data.features[i].clone(),
        })
        .collect();
    let y: Vec<usize> = kept.iter().map(|&i| data.labels[i]).collect();
    let model = SvmModel::fit(&x, &y, &data.class_names, &task.smo)?;
    run.write("model", "txt", &model.to_text())?;
    if let Some(s) = &subset {
        let names: Vec<&str> = s
            .iter()
            .map(|&j| feature_name(j))
            .collect::<Result<_, _>>()?;
        run.write("model_features", "txt", &(names.join("\n") + "\n"))?;
    }
    eprintln!(
        "trained on {} instances, {} features",
        kept.len(),
        model.num_features()
    );
    Ok(())
}

fn evaluate(run: &mut Run, a: &PipelineArgs) -> Result<()> {
    let (task, frame, config) = pipeline_config(a)?;
    run.set_config(config);
    let (table, skipped) = feature_table(run, a, &task, &frame)?;
    let data = Dataset::from_table(&table, &task, skipped)?;
    let report = run_experiment(&data, &task)?;
    run.write(
        "eval_report",
        "json",
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    let text = format!(
        "{}\n{}",
        report.render_table(),
        render_overview(std::slice::from_ref(&report))
    );
    run.write("eval_report", "txt", &text)?;
    eprint!("{}", report.render_table());
    Ok(())
}

fn stats_report(run: &mut Run, a: &CorpusOnlyArgs) -> Result<()> {
    run.set_config(json!({}));
    let corpus = load_corpus(run, &a.manifest)?;
    let groups = stats::durations_by_group(&corpus);
    let comparisons = stats::duration_comparisons(&groups);
    let sl = [laughkit::LaughterLabel::SLs, laughkit::LaughterLabel::SLw];
    let l = [
        laughkit::LaughterLabel::Lv,
        laughkit::LaughterLabel::Lvu,
        laughkit::LaughterLabel::Lu,
    ];
    let sl_tab = stats::crosstab(corpus.units(), &sl);
    let l_tab = stats::crosstab(corpus.units(), &l);
    let correlations = stats::speaker_correlations(&corpus);
    let histogram = stats::dialogue_position_histogram(&stats::laughter_position_events(&corpus))?;
    let edges = stats::edge_position_counts(&corpus);
    let gof = |c: [usize; 2]| -> Option<stats::TestResult> {
        (c[0] + c[1] > 0)
            .then(|| stats::chi_square_gof(&[c[0] as f64, c[1] as f64], None).ok())
            .flatten()
    };
    let (edge_test, inner_test) = (gof(edges.edge), gof(edges.inner));

    let mut out = BufWriter::new(Vec::new());
    writeln!(
        out,
        "Durations (10 ms frames)\n{}",
        stats::render_duration_table(&groups)
    )?;
    for (x, y, r) in &comparisons {
        writeln!(
            out,
            "Mann-Whitney {x} vs {y}: U = {}, p = {:.4} ({:?})",
            r.statistic, r.p_value, r.method
        )?;
    }
    writeln!(out, "\nSpeech-laugh by emotion\n{}", sl_tab.render())?;
    writeln!(out, "Laughter by emotion\n{}", l_tab.render())?;
    writeln!(
        out,
        "Speaker-level Spearman correlations (* p < {})\n{}",
        stats::CORRELATION_ALPHA,
        correlations.render()
    )?;
    writeln!(
        out,
        "Laughter by dialogue position (10 % bins): {histogram:?}"
    )?;
    for (name, counts, test) in [
        ("edge", edges.edge, &edge_test),
        ("inner", edges.inner, &inner_test),
    ] {
        match test {
            Some(t) => writeln!(
                out,
                "{name} positions SL {} vs L {}: chi2 = {:.3}, p = {:.4}",
                counts[0], counts[1], t.statistic, t.p_value
            )?,
            None => writeln!(
                out,
                "{name} positions SL {} vs L {}: no test",
                counts[0], counts[1]
            )?,
        }
    }
    let text = String::from_utf8(out.into_inner()?)?;
    run.write("stats", "txt", &text)?;
    let described: BTreeMap<&str, Option<stats::DurationStats>> = groups
        .iter()
        .map(|(k, v)| (*k, stats::describe_durations(v).ok()))
        .collect();
    let summary = json!({
        "durations": described,
        "duration_tests": comparisons.iter().map(|(x, y, r)| json!({ "a": x, "b": y, "result": r })).collect::<Vec<_>>(),
        "crosstab_speech_laugh": sl_tab,
        "crosstab_laughter": l_tab,
        "correlations": correlations,
        "position_histogram": histogram,
        "edge_positions": edges,
        "edge_test": edge_test,
        "inner_test": inner_test,
    });
    run.write(
        "stats",
        "json",
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )?;
    print!("{text}");
    Ok(())
}
