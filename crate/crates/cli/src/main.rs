mod output;
mod words;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use valnorm::association::{
    self, resolve, AssociationResult, PValueConfig, PValueStrategy, ResolvedSet, WordSet,
};
use valnorm::evalsuite::{self, EvalResult};
use valnorm::reports::{self, TimelineSlice};
use valnorm::stats::VarianceMode;
use valnorm::valence::{
    self, ColumnSelector, LexiconFormat, LexiconOptions, Scale, ValNormConfig, ValNormReport,
};
use valnorm::vectorspace::{
    load_embeddings, EmbeddingFormat, EmbeddingSet, EmbeddingSource, LoadOptions, LookupPolicy,
    MultiwordPolicy,
};
use valnorm::Error;

use output::{OutputArgs, RunConfig};
use words::PackArgs;

#[derive(Parser)]
#[command(
    name = "valnorm",
    version,
    about = "Valence association tests and intrinsic evaluation for word embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// WEAT effect size and p-value for targets X, Y against attributes A, B.
    Weat(WeatArgs),
    /// Single-category WEAT for one word against attributes A, B.
    Scweat(ScweatArgs),
    /// Correlate SC-WEAT valence scores with a human valence lexicon.
    Valnorm(ValnormArgs),
    /// Word-similarity benchmark (cosine vs human scores).
    Simeval(SimevalArgs),
    /// 3CosAdd analogy accuracy.
    Analogy(AnalogyArgs),
    /// ValNorm over a series of embedding slices.
    Timeline(TimelineArgs),
    /// Variance of effect sizes across saved weat/scweat reports.
    Variance(VarianceArgs),
    /// Summary of an embedding file.
    EmbedInfo(EmbedInfoArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FormatArg {
    #[default]
    Auto,
    Word2vecText,
    GloveText,
    FasttextVec,
}

impl From<FormatArg> for EmbeddingFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Auto => EmbeddingFormat::Auto,
            FormatArg::Word2vecText => EmbeddingFormat::Word2vecText,
            FormatArg::GloveText => EmbeddingFormat::GloveText,
            FormatArg::FasttextVec => EmbeddingFormat::FasttextVec,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MultiwordArg {
    #[default]
    ExactOnly,
    PunctuationVariants,
    AverageSubtokens,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StrategyArg {
    #[default]
    Auto,
    Exact,
    MonteCarlo,
    NormalApprox,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Population,
    #[default]
    Sample,
}

impl From<ModeArg> for VarianceMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Population => VarianceMode::Population,
            ModeArg::Sample => VarianceMode::Sample,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LexiconFormatArg {
    #[default]
    TwoColumnCsv,
    AnewCsv,
    Custom,
}

#[derive(Args, Debug, Serialize)]
struct LoadArgs {
    /// Embedding file layout.
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
    /// Reject files whose dimension differs.
    #[arg(long)]
    dimension: Option<usize>,
    /// Read at most this many vectors.
    #[arg(long)]
    limit: Option<usize>,
}

impl LoadArgs {
    fn options(&self) -> LoadOptions {
        LoadOptions {
            format: self.format.into(),
            expected_dimension: self.dimension,
            limit: self.limit,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct EmbeddingArgs {
    /// Embedding file (word2vec/fastText text or GloVe).
    #[arg(long, short = 'e')]
    embeddings: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    load: LoadArgs,
}

impl EmbeddingArgs {
    fn load(&self) -> Result<EmbeddingSet> {
        Ok(load_embeddings(&self.embeddings, &self.load.options())?)
    }
}

#[derive(Args, Debug, Serialize)]
struct PolicyArgs {
    /// Do not retry lookups in lowercase.
    #[arg(long)]
    no_case_fallback: bool,
    /// How to look up words containing spaces.
    #[arg(long, value_enum, default_value_t)]
    multiword: MultiwordArg,
    /// Compare words as given instead of NFC-normalized.
    #[arg(long)]
    no_unicode_normalize: bool,
}

impl PolicyArgs {
    fn policy(&self) -> LookupPolicy {
        LookupPolicy {
            case_fallback: !self.no_case_fallback,
            multiword_policy: match self.multiword {
                MultiwordArg::ExactOnly => MultiwordPolicy::ExactOnly,
                MultiwordArg::PunctuationVariants => MultiwordPolicy::PunctuationVariants,
                MultiwordArg::AverageSubtokens => MultiwordPolicy::AverageSubtokens,
            },
            unicode_normalize: !self.no_unicode_normalize,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct PValueArgs {
    /// How to compute permutation p-values.
    #[arg(long, value_enum, default_value_t)]
    pvalue: StrategyArg,
    /// Skip p-values entirely.
    #[arg(long)]
    no_pvalue: bool,
    /// Monte Carlo samples.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Largest partition count enumerated exactly.
    #[arg(long, default_value_t = 200_000)]
    max_exact: u64,
    /// Sampler seed.
    #[arg(long, env = "VALNORM_SEED", default_value_t = 0)]
    seed: u64,
    /// Standard deviation divisor for effect sizes.
    #[arg(long, value_enum, default_value_t)]
    stddev: ModeArg,
}

impl PValueArgs {
    fn config(&self) -> Option<PValueConfig> {
        (!self.no_pvalue).then_some(PValueConfig {
            strategy: match self.pvalue {
                StrategyArg::Auto => PValueStrategy::Auto,
                StrategyArg::Exact => PValueStrategy::Exact,
                StrategyArg::MonteCarlo => PValueStrategy::MonteCarlo,
                StrategyArg::NormalApprox => PValueStrategy::NormalApprox,
            },
            max_exact_partitions: self.max_exact,
            mc_samples: self.samples,
            seed: self.seed,
        })
    }
}

#[derive(Args, Debug, Serialize)]
struct AttributeArgs {
    /// Attribute set A: comma-separated words or @file.
    #[arg(long)]
    a: Option<String>,
    /// Attribute set B: comma-separated words or @file.
    #[arg(long)]
    b: Option<String>,
    /// Pack category used for A when --a is absent.
    #[arg(long, default_value = "pleasant")]
    a_cat: String,
    /// Pack category used for B when --b is absent.
    #[arg(long, default_value = "unpleasant")]
    b_cat: String,
    #[command(flatten)]
    #[serde(flatten)]
    pack: PackArgs,
}

impl AttributeArgs {
    fn sets(&self, default_pack: Option<&str>) -> Result<(WordSet, WordSet)> {
        let mut pack = self.pack.load()?;
        if pack.is_none() && (self.a.is_none() || self.b.is_none()) {
            if let Some(lang) = default_pack {
                pack = Some(valnorm::stimuli::load_pack(lang)?);
            }
        }
        let lang = pack.as_ref().map_or("und", |p| p.language.as_str());
        Ok((
            words::word_set("A", self.a.as_deref(), pack.as_ref(), &self.a_cat, lang)?,
            words::word_set("B", self.b.as_deref(), pack.as_ref(), &self.b_cat, lang)?,
        ))
    }
}

#[derive(Args, Debug, Serialize)]
struct WeatArgs {
    #[command(flatten)]
    #[serde(flatten)]
    embeddings: EmbeddingArgs,
    /// Target set X: comma-separated words or @file.
    #[arg(long)]
    x: Option<String>,
    /// Target set Y: comma-separated words or @file.
    #[arg(long)]
    y: Option<String>,
    /// Pack category used for X when --x is absent.
    #[arg(long, default_value = "flowers")]
    x_cat: String,
    /// Pack category used for Y when --y is absent.
    #[arg(long, default_value = "insects")]
    y_cat: String,
    #[command(flatten)]
    #[serde(flatten)]
    attributes: AttributeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pvalue: PValueArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct ScweatArgs {
    #[command(flatten)]
    #[serde(flatten)]
    embeddings: EmbeddingArgs,
    /// Word to score.
    #[arg(long)]
    word: String,
    #[command(flatten)]
    #[serde(flatten)]
    attributes: AttributeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pvalue: PValueArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct LexiconArgs {
    /// Valence lexicon file.
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    lexicon_format: LexiconFormatArg,
    /// Word column, by header name or 0-based index.
    #[arg(long)]
    word_col: Option<String>,
    /// Score column, by header name or 0-based index.
    #[arg(long)]
    score_col: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    scale_min: f64,
    #[arg(long, default_value_t = 9.0)]
    scale_max: f64,
    /// Field delimiter; sniffed when absent.
    #[arg(long)]
    delimiter: Option<char>,
    /// Lexicon language; also picks the default attribute pack.
    #[arg(long, default_value = "en")]
    language: String,
}

impl LexiconArgs {
    fn load(&self) -> Result<valence::ValenceLexicon> {
        let col = |s: &Option<String>| s.as_deref().map(|s| s.parse::<ColumnSelector>().unwrap());
        let opts = LexiconOptions {
            format: match self.lexicon_format {
                LexiconFormatArg::TwoColumnCsv => LexiconFormat::TwoColumnCsv,
                LexiconFormatArg::AnewCsv => LexiconFormat::AnewCsv,
                LexiconFormatArg::Custom => LexiconFormat::Custom,
            },
            word_col: col(&self.word_col),
            score_col: col(&self.score_col),
            scale: Scale {
                min: self.scale_min,
                max: self.scale_max,
            },
            delimiter: self.delimiter,
            name: None,
            language: self.language.clone(),
        };
        Ok(valence::load_lexicon(&self.lexicon, &opts)?)
    }
}

#[derive(Args, Debug, Serialize)]
struct ValnormArgs {
    #[command(flatten)]
    #[serde(flatten)]
    embeddings: EmbeddingArgs,
    #[command(flatten)]
    #[serde(flatten)]
    lexicon: LexiconArgs,
    #[command(flatten)]
    #[serde(flatten)]
    attributes: AttributeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pvalue: PValueArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct SimevalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    embeddings: EmbeddingArgs,
    /// Similarity task: `word1 word2 score` per line.
    #[arg(long)]
    task: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct AnalogyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    embeddings: EmbeddingArgs,
    /// Analogy questions, `: section` headers then `a b c d` lines.
    #[arg(long)]
    task: PathBuf,
    /// Count a question correct if the answer is among the best k.
    #[arg(long, default_value_t = 1)]
    top_k: usize,
    #[command(flatten)]
    #[serde(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct TimelineArgs {
    /// Slices as label=path, e.g. 1800=vectors/1800.txt.
    #[arg(long, num_args = 1.., required = true)]
    slices: Vec<String>,
    #[command(flatten)]
    #[serde(flatten)]
    load: LoadArgs,
    #[command(flatten)]
    #[serde(flatten)]
    lexicon: LexiconArgs,
    #[command(flatten)]
    #[serde(flatten)]
    attributes: AttributeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    policy: PolicyArgs,
    /// Standard deviation divisor for effect sizes.
    #[arg(long, value_enum, default_value_t)]
    stddev: ModeArg,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct VarianceArgs {
    /// Saved weat/scweat reports, as path or label=path.
    #[arg(required = true, num_args = 2..)]
    reports: Vec<String>,
    /// Name of the bias being compared.
    #[arg(long, default_value = "weat")]
    bias: String,
    /// Variance divisor.
    #[arg(long, value_enum, default_value_t = ModeArg::Population)]
    mode: ModeArg,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct EmbedInfoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    embeddings: EmbeddingArgs,
    /// How many leading vocabulary words to list.
    #[arg(long, default_value_t = 10)]
    head: usize,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

/// Where each word set came from and what was found.
#[derive(Debug, Serialize)]
struct SetSummary {
    role: &'static str,
    name: String,
    size: usize,
    found: usize,
    missing: Vec<String>,
    duplicates_removed: usize,
    meets_minimum: bool,
}

fn resolve_all(
    sets: &[(&'static str, &WordSet)],
    emb: &EmbeddingSet,
    policy: &LookupPolicy,
    warnings: &mut Vec<String>,
) -> Result<(Vec<ResolvedSet>, Vec<SetSummary>)> {
    let mut resolved = Vec::new();
    let mut summaries = Vec::new();
    for (role, set) in sets {
        let r = resolve(set, emb, policy);
        if r.is_empty() {
            return Err(Error::EmptySet(format!(
                "{role} ({}): none of its {} words are in the embeddings",
                set.name,
                set.len()
            ))
            .into());
        }
        if r.len() < association::MIN_SET_SIZE {
            let msg = format!(
                "{role} ({}) resolves to {} words, below the minimum of {}",
                set.name,
                r.len(),
                association::MIN_SET_SIZE
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
        summaries.push(SetSummary {
            role,
            name: set.name.clone(),
            size: set.len(),
            found: r.len(),
            missing: r.missing.clone(),
            duplicates_removed: set.duplicates_removed,
            meets_minimum: r.len() >= association::MIN_SET_SIZE,
        });
        resolved.push(r);
    }
    Ok((resolved, summaries))
}

#[derive(Debug, Serialize)]
struct WeatReport {
    association: AssociationResult,
    sets: Vec<SetSummary>,
    warnings: Vec<String>,
}

fn association_csv(r: &AssociationResult, out: &mut dyn std::io::Write) -> valnorm::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "effect_size",
        "p_value",
        "p_strategy",
        "large_effect",
        "significant",
    ])?;
    let strategy = serde_json::to_value(r.p_strategy)?;
    w.write_record([
        r.effect_size.to_string(),
        r.p_value.map(|p| p.to_string()).unwrap_or_default(),
        strategy.as_str().unwrap_or_default().to_owned(),
        r.significance.large_effect.to_string(),
        r.significance
            .significant
            .map(|s| s.to_string())
            .unwrap_or_default(),
    ])?;
    w.flush().map_err(output_err)?;
    Ok(())
}

fn cmd_weat(args: &WeatArgs) -> Result<()> {
    let emb = args.embeddings.load()?;
    let pack = args.attributes.pack.load()?;
    let lang = pack.as_ref().map_or("und", |p| p.language.as_str());
    let x = words::word_set("X", args.x.as_deref(), pack.as_ref(), &args.x_cat, lang)?;
    let y = words::word_set("Y", args.y.as_deref(), pack.as_ref(), &args.y_cat, lang)?;
    let (a, b) = args.attributes.sets(None)?;
    let policy = args.policy.policy();
    let mut warnings = Vec::new();
    let (r, sets) = resolve_all(
        &[("X", &x), ("Y", &y), ("A", &a), ("B", &b)],
        &emb,
        &policy,
        &mut warnings,
    )?;
    let association = association::weat(
        &r[0].vectors,
        &r[1].vectors,
        &r[2].vectors,
        &r[3].vectors,
        args.pvalue.config().as_ref(),
        args.pvalue.stddev.into(),
    )?;
    let report = WeatReport {
        association,
        sets,
        warnings,
    };
    output::emit(
        &args.output,
        &RunConfig::new("weat", args),
        &report,
        Some(&|out| association_csv(&report.association, out)),
    )
}

#[derive(Debug, Serialize)]
struct ScweatReport {
    word: String,
    association: AssociationResult,
    sets: Vec<SetSummary>,
    warnings: Vec<String>,
}

fn cmd_scweat(args: &ScweatArgs) -> Result<()> {
    let emb = args.embeddings.load()?;
    let policy = args.policy.policy();
    let w = emb
        .lookup(&args.word, &policy)
        .ok_or_else(|| Error::WordNotFound(args.word.clone()))?;
    let (a, b) = args.attributes.sets(None)?;
    let mut warnings = Vec::new();
    let (r, sets) = resolve_all(&[("A", &a), ("B", &b)], &emb, &policy, &mut warnings)?;
    let association = association::sc_weat(
        &w,
        &r[0].vectors,
        &r[1].vectors,
        args.pvalue.config().as_ref(),
        args.pvalue.stddev.into(),
    )?;
    let report = ScweatReport {
        word: args.word.clone(),
        association,
        sets,
        warnings,
    };
    output::emit(
        &args.output,
        &RunConfig::new("scweat", args),
        &report,
        Some(&|out| association_csv(&report.association, out)),
    )
}

#[derive(Debug, Serialize)]
struct ValnormOut<'a> {
    #[serde(flatten)]
    report: &'a ValNormReport,
    /// Spearman correlation of effect sizes with their p-values.
    effect_size_p_value_rho: Option<f64>,
}

fn cmd_valnorm(args: &ValnormArgs) -> Result<()> {
    let emb = args.embeddings.load()?;
    let lexicon = args.lexicon.load()?;
    let (a, b) = args.attributes.sets(Some(&args.lexicon.language))?;
    let config = ValNormConfig {
        policy: args.policy.policy(),
        pvalue: args.pvalue.config(),
        stddev_mode: args.pvalue.stddev.into(),
    };
    let report = valence::run_valnorm(&emb, &lexicon, &a, &b, &config)?;
    let rho = valence::effectsize_pvalue_correlation(&report).ok();
    output::emit(
        &args.output,
        &RunConfig::new("valnorm", args),
        &ValnormOut {
            report: &report,
            effect_size_p_value_rho: rho,
        },
        Some(&|out| report.write_csv(out)),
    )
}

fn cmd_simeval(args: &SimevalArgs) -> Result<()> {
    let emb = args.embeddings.load()?;
    let task = evalsuite::load_similarity_task(&args.task)?;
    let result = evalsuite::run_similarity(&emb, &task, &args.policy.policy())?;
    emit_eval(&args.output, &RunConfig::new("simeval", args), &result)
}

fn cmd_analogy(args: &AnalogyArgs) -> Result<()> {
    let emb = args.embeddings.load()?;
    let task = evalsuite::load_analogy_task(&args.task)?;
    let result = evalsuite::run_analogy(&emb, &task, &args.policy.policy(), args.top_k)?;
    emit_eval(&args.output, &RunConfig::new("analogy", args), &result)
}

fn emit_eval<A: Serialize>(
    out: &OutputArgs,
    config: &RunConfig<A>,
    result: &EvalResult,
) -> Result<()> {
    output::emit(out, config, result, Some(&|w| result.write_csv(w)))
}

fn cmd_timeline(args: &TimelineArgs) -> Result<()> {
    let slices = args
        .slices
        .iter()
        .map(|s| s.parse::<TimelineSlice>())
        .collect::<valnorm::Result<Vec<_>>>()?;
    let lexicon = args.lexicon.load()?;
    let (a, b) = args.attributes.sets(Some(&args.lexicon.language))?;
    let config = ValNormConfig {
        policy: args.policy.policy(),
        pvalue: None,
        stddev_mode: args.stddev.into(),
    };
    let report = reports::run_timeline(&slices, &args.load.options(), &lexicon, &a, &b, &config)?;
    output::emit(
        &args.output,
        &RunConfig::new("timeline", args),
        &report,
        Some(&|out| report.write_csv(out)),
    )
}

/// The association result inside a saved report, or a bare result.
fn read_association(path: &str) -> Result<AssociationResult> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io {
            path: path.into(),
            source: e,
        })
        .with_context(|| format!("reading report {path}"))?;
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    for key in ["result", "association"] {
        if let Some(inner) = value.get_mut(key) {
            value = inner.take();
        }
    }
    AssociationResult::deserialize(value)
        .map_err(|e| Error::Invalid(format!("{path}: not an association report: {e}")).into())
}

fn cmd_variance(args: &VarianceArgs) -> Result<()> {
    let runs = args
        .reports
        .iter()
        .map(|spec| {
            let (label, path) = match spec.split_once('=') {
                Some((l, p)) => (l.to_owned(), p.to_owned()),
                None => {
                    let stem = std::path::Path::new(spec)
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| spec.clone());
                    (stem, spec.clone())
                }
            };
            Ok((label, read_association(&path)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = reports::aggregate_variance(&args.bias, &runs, args.mode.into())?;
    output::emit(
        &args.output,
        &RunConfig::new("variance", args),
        &report,
        Some(&|out| {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["label", "effect_size", "variance"])?;
            for r in &report.runs {
                w.write_record([
                    r.label.clone(),
                    r.effect_size.to_string(),
                    report.variance.to_string(),
                ])?;
            }
            w.flush().map_err(output_err)?;
            Ok(())
        }),
    )
}

#[derive(Debug, Serialize)]
struct EmbedInfo {
    source: EmbeddingSource,
    vocabulary: usize,
    dimension: usize,
    duplicates_skipped: usize,
    head: Vec<String>,
}

fn cmd_embed_info(args: &EmbedInfoArgs) -> Result<()> {
    let emb = args.embeddings.load()?;
    let info = EmbedInfo {
        source: emb.source().clone(),
        vocabulary: emb.len(),
        dimension: emb.dimension(),
        duplicates_skipped: emb.duplicate_count(),
        head: emb.words().iter().take(args.head).cloned().collect(),
    };
    output::emit(
        &args.output,
        &RunConfig::new("embed-info", args),
        &info,
        Some(&|out| {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["field", "value"])?;
            w.write_record(["vocabulary", &info.vocabulary.to_string()])?;
            w.write_record(["dimension", &info.dimension.to_string()])?;
            w.write_record(["duplicates_skipped", &info.duplicates_skipped.to_string()])?;
            w.flush().map_err(output_err)?;
            Ok(())
        }),
    )
}

fn output_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        source: e,
    }
}

/// 1 for I/O failures, 2 for everything else (bad input, failed validation).
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return if e.is_io() { 1 } else { 2 };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 1;
        }
    }
    2
}

/// The error and its causes on one line, skipping causes whose text the
/// message already contains.
fn describe(err: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in err.chain() {
        let text = cause.to_string();
        if !msg.contains(&text) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&text);
        }
    }
    msg
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Weat(a) => cmd_weat(a),
        Command::Scweat(a) => cmd_scweat(a),
        Command::Valnorm(a) => cmd_valnorm(a),
        Command::Simeval(a) => cmd_simeval(a),
        Command::Analogy(a) => cmd_analogy(a),
        Command::Timeline(a) => cmd_timeline(a),
        Command::Variance(a) => cmd_variance(a),
        Command::EmbedInfo(a) => cmd_embed_info(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
