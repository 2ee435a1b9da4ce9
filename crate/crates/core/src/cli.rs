//! Command-line front end. Each pipeline stage is its own subcommand and
//! stages exchange JSONL files.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::backend::{build_backend, BackendError, BackendHandle};
use crate::config::{ConfigError, GlobalConfig};
use crate::eval::{self, bench_stats, render_report, BenchItem, EvalError, HypLine, HypSource, ReportFormat};
use crate::filter::{run_filter_pipeline, SentencePair};
use crate::jsonl::{read_jsonl, to_jsonl_string, JsonlError};
use crate::lang::Direction;
use crate::loss::{self, LossError, LossOutput, PolicyLogProbs, TruthItem};
use crate::manifest::SftManifest;
use crate::prefs::{self, AugmentOptions, CandidatePair, Origin, PreferenceTriple, PrefsError, RewriteRecord, Scorer, ScorerKind};
use crate::sampler::{
    emit_sft_pairs, run_backtranslation, stratified_sample, BackTransOptions, BackTransRecord, ChoicePolicy,
    SamplingError, SamplingPlan, SourceSegment, REASON_BACKEND_ERROR,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(m: impl fmt::Display) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: m.to_string(),
        }
    }
    fn data(m: impl fmt::Display) -> Self {
        Self {
            code: EXIT_DATA,
            message: m.to_string(),
        }
    }
    fn backend(m: impl fmt::Display) -> Self {
        Self {
            code: EXIT_BACKEND,
            message: m.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::config(e)
    }
}

impl From<JsonlError> for Failure {
    fn from(e: JsonlError) -> Self {
        Failure::data(e)
    }
}

impl From<BackendError> for Failure {
    fn from(e: BackendError) -> Self {
        match e {
            BackendError::MissingCredential(_) | BackendError::InvalidConfig(_) => Failure::config(e),
            BackendError::InvalidRequest(_) => Failure::data(e),
            _ => Failure::backend(e),
        }
    }
}

impl From<SamplingError> for Failure {
    fn from(e: SamplingError) -> Self {
        match e {
            SamplingError::BucketShortfall { .. } => Failure::data(e),
            _ => Failure::config(e),
        }
    }
}

impl From<PrefsError> for Failure {
    fn from(e: PrefsError) -> Self {
        match e {
            PrefsError::InvalidTau(_) => Failure::config(e),
            _ => Failure::data(e),
        }
    }
}

impl From<LossError> for Failure {
    fn from(e: LossError) -> Self {
        match e {
            LossError::InvalidBeta(_) | LossError::InvalidLambda(_) => Failure::config(e),
            _ => Failure::data(e),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Backend { .. } => Failure::backend(e),
            _ => Failure::data(e),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

#[derive(Debug, Parser)]
#[command(name = "mtcurate", version, about = "Parallel-corpus curation, back-translation sampling and preference-loss tooling")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides `log_level` from the config.
    #[arg(long, global = true)]
    pub log_level: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean, length-check, quality-gate and deduplicate sentence pairs.
    Filter(FilterArgs),
    /// Round-trip source segments through two backends.
    Backtranslate(BacktranslateArgs),
    /// Stratified quota sampling over back-translation records.
    Sample(SampleArgs),
    /// Validate an SFT corpus manifest.
    Manifest(ManifestArgs),
    /// Preference-pair scoring, flagging and rewrite exchange.
    #[command(subcommand)]
    Prefs(PrefsCommand),
    /// Preference-loss computations.
    #[command(subcommand)]
    Loss(LossCommand),
    /// Score a benchmark.
    Eval(EvalArgs),
    /// Benchmark composition and length statistics.
    BenchStats(BenchStatsArgs),
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BacktranslateArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub llm1: String,
    #[arg(long)]
    pub llm2: String,
    #[arg(long)]
    pub direction: Direction,
    #[arg(long)]
    pub out: PathBuf,
    /// Do not exclude en-zh records whose forward output contains Latin letters.
    #[arg(long)]
    pub no_mirror_leak_filter: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Preset name; the `[sampling]` config section is used when omitted.
    #[arg(long)]
    pub plan: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub emit_sft: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ChoicePolicy::BestRoundtrip)]
    pub choice: ChoicePolicy,
    #[arg(long)]
    pub allow_shortfall: bool,
    /// Write an SFT manifest combining `--general-count` with the sample size.
    #[arg(long, requires = "general_count")]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub general_count: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ManifestArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum PrefsCommand {
    /// Fill s1/s2 on candidate pairs.
    Score {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        scorer: Option<ScorerKind>,
        /// `{"x","y","score"}` JSONL for the external_file scorer.
        #[arg(long)]
        scores: Option<PathBuf>,
        #[arg(long)]
        backend: Option<String>,
        /// x→y direction for the roundtrip_bleu scorer.
        #[arg(long)]
        direction: Option<Direction>,
    },
    /// Split scored pairs at threshold tau.
    Flag {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        flagged: PathBuf,
        #[arg(long)]
        passed: Option<PathBuf>,
    },
    /// Write flagged records for relabeling, without y_t.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a relabeled batch.
    Ingest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge ingested rewrites into a preference dataset.
    Build {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        rewrites: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        drop_flagged_originals: bool,
    },
}

#[derive(Debug, Args)]
pub struct LossArgs {
    /// PreferenceTriple JSONL.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `{"x","y","logp_theta","logp_ref"}` JSONL.
    #[arg(long)]
    pub logprobs: PathBuf,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum LossCommand {
    Dpo(LossArgs),
    Repo(LossArgs),
    /// Truth-response NLL over the rewrite triples.
    Sft(LossArgs),
    /// Finite-difference check on random toy policies.
    Gradcheck {
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
    },
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub bench: PathBuf,
    #[arg(long, conflicts_with = "hyp", required_unless_present = "hyp")]
    pub backend: Option<String>,
    #[arg(long)]
    pub hyp: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Tsv)]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub model_name: Option<String>,
    #[arg(long)]
    pub bench_name: Option<String>,
}

#[derive(Debug, Args)]
pub struct BenchStatsArgs {
    #[arg(long)]
    pub bench: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn load_config(path: Option<&Path>) -> CliResult<GlobalConfig> {
    match path {
        Some(p) => Ok(GlobalConfig::load(p)?),
        None => Ok(GlobalConfig::default()),
    }
}

/// Runs a parsed command with an already loaded config.
pub fn run(cli: &Cli, cfg: &GlobalConfig) -> CliResult {
    match &cli.command {
        Command::Filter(a) => cmd_filter(a, cfg),
        Command::Backtranslate(a) => cmd_backtranslate(a, cfg),
        Command::Sample(a) => cmd_sample(a, cfg),
        Command::Manifest(a) => cmd_manifest(a),
        Command::Prefs(c) => cmd_prefs(c, cfg),
        Command::Loss(c) => cmd_loss(c, cfg),
        Command::Eval(a) => cmd_eval(a, cfg),
        Command::BenchStats(a) => cmd_bench_stats(a),
    }
}

fn write_text(path: &Path, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn backend(cfg: &GlobalConfig, name: &str) -> CliResult<BackendHandle> {
    Ok(build_backend(&cfg.backend(name)?)?)
}

fn cmd_filter(a: &FilterArgs, cfg: &GlobalConfig) -> CliResult {
    let judge = match &cfg.filter.judge_backend {
        Some(name) => Some(backend(cfg, name)?),
        None => None,
    };
    let pairs: Vec<SentencePair> = read_jsonl(&a.input)?;
    let (kept, report) = run_filter_pipeline(pairs, &cfg.filter, judge.as_deref());
    write_text(&a.out, &to_jsonl_string(&kept))?;
    if let Some(r) = &a.report {
        write_text(r, &pretty(&report))?;
    }
    tracing::info!(input = report.input_count, kept = report.kept_count, "filter finished");
    Ok(())
}

/// Accepts `{"id","text"}` lines or sentence-pair lines, taking the side
/// that is the source language of `direction`.
fn read_sources(path: &Path, direction: Direction) -> CliResult<Vec<SourceSegment>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Line {
        Plain(SourceSegment),
        Pair(SentencePair),
    }
    let lines: Vec<Line> = read_jsonl(path)?;
    Ok(lines
        .into_iter()
        .map(|l| match l {
            Line::Plain(s) => s,
            Line::Pair(p) => {
                let text = match direction {
                    Direction::ZhEn => p.zh,
                    Direction::EnZh => p.en,
                };
                SourceSegment::new(p.id, text)
            }
        })
        .collect())
}

fn cmd_backtranslate(a: &BacktranslateArgs, cfg: &GlobalConfig) -> CliResult {
    let llm1 = backend(cfg, &a.llm1)?;
    let llm2 = backend(cfg, &a.llm2)?;
    let corpus = read_sources(&a.input, a.direction)?;
    let opts = BackTransOptions {
        metric: cfg.metric.clone(),
        mirror_leak_filter: !a.no_mirror_leak_filter,
    };
    let records = run_backtranslation(&corpus, llm1.as_ref(), llm2.as_ref(), a.direction, &opts);
    write_text(&a.out, &to_jsonl_string(&records))?;
    let failed = records
        .iter()
        .filter(|r| r.exclusion_reason.as_deref() == Some(REASON_BACKEND_ERROR))
        .count();
    let attempted = records.iter().filter(|r| !r.source.trim().is_empty()).count();
    if attempted > 0 && failed == attempted {
        return Err(Failure::backend(format!("all {failed} back-translation requests failed")));
    }
    Ok(())
}

fn resolve_plan(a: &SampleArgs, cfg: &GlobalConfig) -> CliResult<SamplingPlan> {
    let seed = a.seed.unwrap_or(cfg.seed);
    match &a.plan {
        Some(name) => Ok(SamplingPlan::preset(name, seed)?),
        None if !cfg.sampling.is_empty() => Ok(cfg.sampling.resolve(seed)?),
        None => Err(Failure::config("no sampling plan: pass --plan or configure [sampling]")),
    }
}

fn cmd_sample(a: &SampleArgs, cfg: &GlobalConfig) -> CliResult {
    let plan = resolve_plan(a, cfg)?;
    let records: Vec<BackTransRecord> = read_jsonl(&a.input)?;
    let outcome = stratified_sample(&records, &plan, a.allow_shortfall)?;
    for s in &outcome.shortfalls {
        eprintln!(
            "shortfall: bucket {} ({}) took {} of {}",
            s.bucket, s.direction, s.eligible, s.quota
        );
    }
    write_text(&a.out, &to_jsonl_string(&outcome.selected))?;
    if let Some(p) = &a.emit_sft {
        write_text(p, &to_jsonl_string(&emit_sft_pairs(&outcome.selected, a.choice)))?;
    }
    if let (Some(p), Some(general)) = (&a.manifest, a.general_count) {
        let m = SftManifest::from_parts(general, outcome.selected.len() as u64);
        write_text(p, &pretty(&m))?;
    }
    Ok(())
}

fn cmd_manifest(a: &ManifestArgs) -> CliResult {
    let text = std::fs::read_to_string(&a.input).map_err(|e| Failure::data(format!("{}: {e}", a.input.display())))?;
    let m: SftManifest =
        serde_json::from_str(&text).map_err(|e| Failure::data(format!("{}: {e}", a.input.display())))?;
    m.validate().map_err(Failure::data)?;
    println!("ok: {} + {} = {}", m.general, m.sampled, m.total);
    Ok(())
}

fn cmd_prefs(c: &PrefsCommand, cfg: &GlobalConfig) -> CliResult {
    match c {
        PrefsCommand::Score {
            input,
            out,
            scorer,
            scores,
            backend: backend_name,
            direction,
        } => {
            let kind = scorer
                .or(cfg.repo.scorer)
                .ok_or_else(|| Failure::config("no scorer: pass --scorer or set repo.scorer"))?;
            let name = backend_name.clone().or_else(|| cfg.repo.scorer_backend.clone());
            let outcome = match kind {
                ScorerKind::ExternalFile => {
                    let path = scores
                        .clone()
                        .or_else(|| cfg.repo.score_file.clone())
                        .ok_or_else(|| Failure::config("external_file scorer needs --scores or repo.score_file"))?;
                    let table = prefs::load_score_table(&path)?;
                    let pairs: Vec<CandidatePair> = read_jsonl(input)?;
                    prefs::score_candidates(pairs, &Scorer::ExternalFile(&table))?
                }
                ScorerKind::RoundtripBleu | ScorerKind::LlmJudge => {
                    let name = name.ok_or_else(|| Failure::config("scorer needs --backend or repo.scorer_backend"))?;
                    let b = backend(cfg, &name)?;
                    let direction = direction.or(cfg.repo.direction);
                    let scorer = if kind == ScorerKind::LlmJudge {
                        Scorer::LlmJudge { backend: b.as_ref() }
                    } else {
                        Scorer::RoundtripBleu {
                            backend: b.as_ref(),
                            direction: direction
                                .ok_or_else(|| Failure::config("roundtrip_bleu needs --direction or repo.direction"))?,
                            metric: &cfg.metric,
                        }
                    };
                    let pairs: Vec<CandidatePair> = read_jsonl(input)?;
                    prefs::score_candidates(pairs, &scorer)?
                }
            };
            write_text(out, &to_jsonl_string(&outcome.pairs))?;
            if !outcome.failures.is_empty() {
                for f in &outcome.failures {
                    eprintln!("pair {}: {}", f.index, f.error);
                }
                return Err(Failure::backend(format!("{} scoring request(s) failed", outcome.failures.len())));
            }
            Ok(())
        }
        PrefsCommand::Flag {
            input,
            tau,
            flagged,
            passed,
        } => {
            let tau = tau
                .or(cfg.repo.tau)
                .ok_or_else(|| Failure::config("no threshold: pass --tau or set repo.tau"))?;
            if !(0.0..=1.0).contains(&tau) {
                return Err(PrefsError::InvalidTau(tau).into());
            }
            let pairs: Vec<CandidatePair> = read_jsonl(input)?;
            let (f, p) = prefs::flag_for_rewrite(pairs, tau)?;
            write_text(flagged, &to_jsonl_string(&f))?;
            if let Some(path) = passed {
                write_text(path, &to_jsonl_string(&p))?;
            }
            eprintln!("flagged {} of {}", f.len(), f.len() + p.len());
            Ok(())
        }
        PrefsCommand::Export { input, out } => {
            let records: Vec<RewriteRecord> = read_jsonl(input)?;
            let n = prefs::export_rewrite_batch(&records, out)?;
            println!("{n}");
            Ok(())
        }
        PrefsCommand::Ingest { input, out } => {
            let outcome = prefs::ingest_rewrites(input)?;
            for w in &outcome.warnings {
                eprintln!("warning: {}:{w}", input.display());
            }
            match out {
                Some(p) => write_text(p, &to_jsonl_string(&outcome.records)),
                None => {
                    println!("{}", outcome.records.len());
                    Ok(())
                }
            }
        }
        PrefsCommand::Build {
            original,
            rewrites,
            out,
            drop_flagged_originals,
        } => {
            let orig: Vec<PreferenceTriple> = read_jsonl(original)?;
            let rw = prefs::ingest_rewrites(rewrites)?;
            let opts = AugmentOptions {
                drop_flagged_originals: *drop_flagged_originals || cfg.repo.drop_flagged_originals,
            };
            let outcome = prefs::build_augmented_dataset(&orig, &rw.records, opts);
            write_text(out, &to_jsonl_string(&outcome.triples))?;
            eprintln!(
                "triples {} (duplicates dropped {}, invalid skipped {}, originals dropped {})",
                outcome.triples.len(),
                outcome.duplicates_dropped,
                outcome.invalid_skipped,
                outcome.originals_dropped
            );
            Ok(())
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogProbLine {
    x: String,
    y: String,
    logp_theta: f64,
    logp_ref: f64,
}

struct LossInputs {
    batch: Vec<PolicyLogProbs>,
    truths: Vec<TruthItem>,
}

fn loss_inputs(a: &LossArgs) -> CliResult<LossInputs> {
    let triples: Vec<PreferenceTriple> = read_jsonl(&a.input)?;
    let lines: Vec<LogProbLine> = read_jsonl(&a.logprobs)?;
    let table: HashMap<(String, String), (f64, f64)> = lines
        .into_iter()
        .map(|l| ((l.x, l.y), (l.logp_theta, l.logp_ref)))
        .collect();
    let mut missing = Vec::new();
    let mut look = |x: &str, y: &str| match table.get(&(x.to_string(), y.to_string())) {
        Some(&v) => v,
        None => {
            missing.push(format!("{x}\t{y}"));
            (0.0, 0.0)
        }
    };
    let mut batch = Vec::with_capacity(triples.len());
    let mut truths = Vec::new();
    let mut seen_truth = HashSet::new();
    for t in &triples {
        let (tw, rw) = look(&t.x, &t.y_w);
        let (tl, rl) = look(&t.x, &t.y_l);
        batch.push(PolicyLogProbs::new(tw, tl, rw, rl));
        if t.origin != Origin::Original && seen_truth.insert((t.x.clone(), t.y_w.clone())) {
            truths.push(TruthItem::new(tw));
        }
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Failure::data(format!(
            "{}: no log-probabilities for {} (x, y) key(s): {}",
            a.logprobs.display(),
            missing.len(),
            missing.join("; ")
        )));
    }
    Ok(LossInputs { batch, truths })
}

fn required(flag: Option<f64>, config: Option<f64>, name: &str) -> CliResult<f64> {
    flag.or(config)
        .ok_or_else(|| Failure::config(format!("--{name} is required (or set repo.{name})")))
}

fn cmd_loss(c: &LossCommand, cfg: &GlobalConfig) -> CliResult {
    let out: LossOutput = match c {
        LossCommand::Dpo(a) => {
            let beta = required(a.beta, cfg.repo.beta, "beta")?;
            let inputs = loss_inputs(a)?;
            loss::dpo_loss(&inputs.batch, beta)?
        }
        LossCommand::Repo(a) => {
            let beta = required(a.beta, cfg.repo.beta, "beta")?;
            let lambda = required(a.lambda, cfg.repo.lambda, "lambda")?;
            let inputs = loss_inputs(a)?;
            loss::repo_loss(&inputs.batch, &inputs.truths, beta, lambda)?
        }
        LossCommand::Sft(a) => {
            let inputs = loss_inputs(a)?;
            let (term, grads) = loss::truth_alignment_loss(&inputs.truths)?;
            LossOutput {
                loss: term,
                dpo_term: 0.0,
                truth_term: term,
                lambda: 1.0,
                grads: loss::LossGrads {
                    pairs: Vec::new(),
                    truths: grads,
                },
            }
        }
        LossCommand::Gradcheck { seeds, h } => {
            let reports = (0..*seeds)
                .map(|s| loss::run_gradcheck(s, *h))
                .collect::<Result<Vec<_>, _>>()?;
            let worst = |f: fn(&loss::GradCheckReport) -> f64| reports.iter().map(f).fold(0.0, f64::max);
            let failed: Vec<u64> = reports.iter().filter(|r| !r.passed).map(|r| r.seed).collect();
            let summary = serde_json::json!({
                "seeds": seeds,
                "h": h,
                "tolerance": loss::GRADCHECK_TOL,
                "dpo_max_rel_err": worst(|r| r.dpo_max_rel_err),
                "repo_max_rel_err": worst(|r| r.repo_max_rel_err),
                "sft_max_rel_err": worst(|r| r.sft_max_rel_err),
                "failed_seeds": failed,
            });
            print!("{}", pretty(&summary));
            if !failed.is_empty() {
                return Err(Failure::data(format!("gradient check failed for {} seed(s)", failed.len())));
            }
            return Ok(());
        }
    };
    print!("{}", pretty(&out));
    Ok(())
}

fn file_stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn cmd_eval(a: &EvalArgs, cfg: &GlobalConfig) -> CliResult {
    let handle = match &a.backend {
        Some(name) => Some(backend(cfg, name)?),
        None => None,
    };
    let bench: Vec<BenchItem> = read_jsonl(&a.bench)?;
    let bench_name = a.bench_name.clone().unwrap_or_else(|| file_stem(&a.bench));
    let report = match (&handle, &a.hyp) {
        (Some(b), _) => {
            let model = a.model_name.clone().unwrap_or_else(|| b.model_name().to_string());
            eval::run_eval(&bench, &HypSource::Backend(b.as_ref()), &cfg.metric, &model, &bench_name)?
        }
        (None, Some(path)) => {
            let hyps = eval::hyps_from_lines(read_jsonl::<HypLine>(path)?);
            let model = a.model_name.clone().unwrap_or_else(|| file_stem(path));
            eval::run_eval(&bench, &HypSource::Hyps(&hyps), &cfg.metric, &model, &bench_name)?
        }
        (None, None) => return Err(Failure::config("pass --backend or --hyp")),
    };
    emit(a.out.as_deref(), &render_report(&[report], a.format))
}

fn cmd_bench_stats(a: &BenchStatsArgs) -> CliResult {
    let bench: Vec<BenchItem> = read_jsonl(&a.bench)?;
    emit(a.out.as_deref(), &pretty(&bench_stats(&bench)))
}
