//! Human valence lexica and the ValNorm evaluation: SC-WEAT valence scores
//! of every lexicon word against pleasant/unpleasant attribute sets,
//! correlated with the human ratings.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::association::{self, resolve, PValueConfig, WordSet};
use crate::error::{Error, Result};
use crate::stats::{self, PairedSample, VarianceMode};
use crate::vectorspace::{nfc, EmbeddingSet, EmbeddingSource, LookupPolicy};

/// Declared bounds of a rating scale, inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    pub min: f64,
    pub max: f64,
}

impl Scale {
    pub const NINE_POINT: Scale = Scale { min: 1.0, max: 9.0 };

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValenceLexicon {
    pub name: String,
    pub language: String,
    entries: Vec<(String, f64)>,
    pub scale: Scale,
    /// Rows dropped because their word repeated an earlier one.
    pub duplicates: usize,
}

impl ValenceLexicon {
    /// Validates and NFC-normalizes `entries`; the first of repeated words
    /// wins.
    pub fn new<I, S>(
        name: impl Into<String>,
        language: impl Into<String>,
        entries: I,
        scale: Scale,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let name = name.into();
        let mut lex = ValenceLexicon {
            name: name.clone(),
            language: language.into(),
            entries: Vec::new(),
            scale,
            duplicates: 0,
        };
        let mut seen = std::collections::HashSet::new();
        for (i, (word, score)) in entries.into_iter().enumerate() {
            if !scale.contains(score) {
                return Err(Error::OutOfScale {
                    path: name,
                    line: i + 1,
                    score,
                    min: scale.min,
                    max: scale.max,
                });
            }
            lex.insert(&mut seen, word.as_ref(), score);
        }
        if lex.entries.is_empty() {
            return Err(Error::EmptySet(lex.name));
        }
        Ok(lex)
    }

    fn insert(&mut self, seen: &mut std::collections::HashSet<String>, word: &str, score: f64) {
        let word = nfc(word.trim()).into_owned();
        if seen.insert(word.clone()) {
            self.entries.push((word, score));
        } else {
            self.duplicates += 1;
            log::warn!("{}: duplicate word {word:?} ignored", self.name);
        }
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Copy with every score mapped through `f` and the scale replaced.
    pub fn rescaled(&self, scale: Scale, f: impl Fn(f64) -> f64) -> Result<Self> {
        ValenceLexicon::new(
            self.name.clone(),
            self.language.clone(),
            self.entries.iter().map(|(w, s)| (w.as_str(), f(*s))),
            scale,
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LexiconFormat {
    /// `word,score` with an optional header line.
    #[default]
    TwoColumnCsv,
    /// ANEW-style table with named columns (`Word`, `ValMn`, ...).
    AnewCsv,
    /// Arbitrary delimited table; both columns must be given.
    Custom,
}

/// A column picked by header name or 0-based position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl std::str::FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_owned()),
        })
    }
}

impl std::fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "#{i}"),
            ColumnSelector::Name(n) => write!(f, "{n:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LexiconOptions {
    pub format: LexiconFormat,
    pub word_col: Option<ColumnSelector>,
    pub score_col: Option<ColumnSelector>,
    pub scale: Scale,
    /// Field delimiter; sniffed from the first line when absent.
    pub delimiter: Option<char>,
    pub name: Option<String>,
    pub language: String,
}

impl Default for LexiconOptions {
    fn default() -> Self {
        LexiconOptions {
            format: LexiconFormat::TwoColumnCsv,
            word_col: None,
            score_col: None,
            scale: Scale::NINE_POINT,
            delimiter: None,
            name: None,
            language: "en".into(),
        }
    }
}

fn sniff_delimiter(text: &str) -> u8 {
    let first = text.lines().next().unwrap_or("");
    if first.contains('\t') {
        b'\t'
    } else if first.contains(';') && !first.contains(',') {
        b';'
    } else {
        b','
    }
}

/// Reads a delimited valence table.
pub fn load_lexicon(path: impl AsRef<Path>, options: &LexiconOptions) -> Result<ValenceLexicon> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    let name = options.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "lexicon".into())
    });
    parse_lexicon(&text, &path.display().to_string(), &name, options)
}

/// Parses lexicon text; `source` names the input in errors.
pub fn parse_lexicon(
    text: &str,
    source: &str,
    name: &str,
    options: &LexiconOptions,
) -> Result<ValenceLexicon> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let delimiter = match options.delimiter {
        Some(c) if c.is_ascii() => c as u8,
        Some(c) => return Err(Error::Invalid(format!("delimiter {c:?} is not ASCII"))),
        None => sniff_delimiter(text),
    };
    let (word_sel, score_sel) = match options.format {
        LexiconFormat::TwoColumnCsv => (
            options.word_col.clone().unwrap_or(ColumnSelector::Index(0)),
            options
                .score_col
                .clone()
                .unwrap_or(ColumnSelector::Index(1)),
        ),
        LexiconFormat::AnewCsv => (
            options
                .word_col
                .clone()
                .unwrap_or_else(|| ColumnSelector::Name("Word".into())),
            options
                .score_col
                .clone()
                .unwrap_or_else(|| ColumnSelector::Name("ValMn".into())),
        ),
        LexiconFormat::Custom => match (&options.word_col, &options.score_col) {
            (Some(w), Some(s)) => (w.clone(), s.clone()),
            _ => {
                return Err(Error::Invalid(
                    "custom lexicon format needs both word and score columns".into(),
                ))
            }
        },
    };

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records().peekable();

    let named =
        matches!(word_sel, ColumnSelector::Name(_)) || matches!(score_sel, ColumnSelector::Name(_));
    let header: Option<csv::StringRecord> = match records.peek() {
        Some(Ok(first)) => {
            let score_is_text = match &score_sel {
                ColumnSelector::Index(i) => {
                    first.get(*i).is_some_and(|s| s.parse::<f64>().is_err())
                }
                ColumnSelector::Name(_) => true,
            };
            if named || score_is_text {
                Some(first.clone())
            } else {
                None
            }
        }
        _ => None,
    };
    if header.is_some() {
        records.next();
    }
    let column = |sel: &ColumnSelector| -> Result<usize> {
        match sel {
            ColumnSelector::Index(i) => Ok(*i),
            ColumnSelector::Name(n) => header
                .as_ref()
                .and_then(|h| h.iter().position(|c| c.eq_ignore_ascii_case(n)))
                .ok_or_else(|| Error::MissingColumn {
                    path: source.to_owned(),
                    column: n.clone(),
                }),
        }
    };
    let word_idx = column(&word_sel)?;
    let score_idx = column(&score_sel)?;

    let mut lex = ValenceLexicon {
        name: name.to_owned(),
        language: options.language.clone(),
        entries: Vec::new(),
        scale: options.scale,
        duplicates: 0,
    };
    let mut seen = std::collections::HashSet::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let word = record.get(word_idx).ok_or_else(|| Error::Parse {
            path: source.to_owned(),
            line,
            message: format!("no word column {word_sel}"),
        })?;
        let raw = record.get(score_idx).ok_or_else(|| Error::Parse {
            path: source.to_owned(),
            line,
            message: format!("no score column {score_sel}"),
        })?;
        if word.is_empty() {
            continue;
        }
        let score: f64 = raw
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| Error::Parse {
                path: source.to_owned(),
                line,
                message: format!("unparseable score {raw:?}"),
            })?;
        if !options.scale.contains(score) {
            return Err(Error::OutOfScale {
                path: source.to_owned(),
                line,
                score,
                min: options.scale.min,
                max: options.scale.max,
            });
        }
        lex.insert(&mut seen, word, score);
    }
    if lex.entries.is_empty() {
        return Err(Error::EmptySet(format!("lexicon {source}")));
    }
    Ok(lex)
}

/// Settings shared by every ValNorm run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValNormConfig {
    pub policy: LookupPolicy,
    /// `None` skips p-values (effect sizes are enough for the correlation).
    pub pvalue: Option<PValueConfig>,
    pub stddev_mode: VarianceMode,
}

impl Default for ValNormConfig {
    fn default() -> Self {
        ValNormConfig {
            policy: LookupPolicy::default(),
            pvalue: Some(PValueConfig::default()),
            stddev_mode: VarianceMode::Sample,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeSummary {
    pub name: String,
    pub found: usize,
    pub missing: Vec<String>,
    pub meets_minimum: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordRecord {
    pub word: String,
    pub effect_size: f64,
    pub p_value: Option<f64>,
    pub human_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValNormHeader {
    pub lexicon: String,
    pub language: String,
    pub embedding_source: EmbeddingSource,
    pub lexicon_size: usize,
    pub n_present: usize,
    pub n_missing: usize,
    pub missing: Vec<String>,
    pub skipped_degenerate: Vec<String>,
    pub pearson_rho: f64,
    pub spearman_rho: f64,
    pub pleasant: AttributeSummary,
    pub unpleasant: AttributeSummary,
    pub warnings: Vec<String>,
    pub config: ValNormConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValNormReport {
    pub header: ValNormHeader,
    pub records: Vec<WordRecord>,
}

impl ValNormReport {
    /// One row per scored word: `word,effect_size,p_value,human_score`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["word", "effect_size", "p_value", "human_score"])?;
        for r in &self.records {
            w.write_record([
                r.word.clone(),
                r.effect_size.to_string(),
                r.p_value.map(|p| p.to_string()).unwrap_or_default(),
                r.human_score.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

enum Outcome {
    Missing,
    Degenerate,
    Scored(association::AssociationResult),
}

/// Scores every lexicon word against `pleasant`/`unpleasant` and correlates
/// the effect sizes with the human ratings.
///
/// Words missing from the embeddings are listed; words whose attribute
/// cosines are all equal (zero denominator) are excluded and listed. Monte
/// Carlo p-values use sampler stream = the word's lexicon position, so the
/// report does not depend on scheduling.
pub fn run_valnorm(
    embeddings: &EmbeddingSet,
    lexicon: &ValenceLexicon,
    pleasant: &WordSet,
    unpleasant: &WordSet,
    config: &ValNormConfig,
) -> Result<ValNormReport> {
    let a = resolve(pleasant, embeddings, &config.policy);
    let b = resolve(unpleasant, embeddings, &config.policy);
    if a.is_empty() && b.is_empty() {
        return Err(Error::EmptySet(
            "both attribute sets are missing from the embeddings".into(),
        ));
    }
    for set in [&a, &b] {
        if set.is_empty() {
            return Err(Error::EmptySet(format!(
                "attribute set {} has no words in the embeddings",
                set.name
            )));
        }
    }
    let mut warnings = Vec::new();
    for set in [&a, &b] {
        if set.len() < association::MIN_SET_SIZE {
            let msg = format!(
                "attribute set {} resolves to {} words, below the minimum of {}",
                set.name,
                set.len(),
                association::MIN_SET_SIZE
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }

    let outcomes: Vec<Result<Outcome>> = lexicon
        .entries()
        .par_iter()
        .enumerate()
        .map(|(i, (word, _))| {
            let Some(v) = embeddings.lookup(word, &config.policy) else {
                return Ok(Outcome::Missing);
            };
            match association::sc_weat_on_stream(
                &v,
                &a.vectors,
                &b.vectors,
                config.pvalue.as_ref(),
                config.stddev_mode,
                i as u64,
            ) {
                Ok(r) => Ok(Outcome::Scored(r)),
                Err(Error::DegenerateDenominator(_)) => Ok(Outcome::Degenerate),
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut records = Vec::new();
    let mut missing = Vec::new();
    let mut skipped = Vec::new();
    for ((word, human), outcome) in lexicon.entries().iter().zip(outcomes) {
        match outcome? {
            Outcome::Missing => missing.push(word.clone()),
            Outcome::Degenerate => {
                log::warn!("{word}: degenerate denominator, excluded");
                skipped.push(word.clone());
            }
            Outcome::Scored(r) => records.push(WordRecord {
                word: word.clone(),
                effect_size: r.effect_size,
                p_value: r.p_value,
                human_score: *human,
            }),
        }
    }
    if records.len() < 2 {
        return Err(Error::Insufficient {
            what: "ValNorm correlation",
            needed: 2,
            got: records.len(),
        });
    }
    let sample = PairedSample::new(
        records.iter().map(|r| r.effect_size).collect(),
        records.iter().map(|r| r.human_score).collect(),
    )?;
    let summary = |set: &association::ResolvedSet| AttributeSummary {
        name: set.name.clone(),
        found: set.len(),
        missing: set.missing.clone(),
        meets_minimum: set.len() >= association::MIN_SET_SIZE,
    };

    Ok(ValNormReport {
        header: ValNormHeader {
            lexicon: lexicon.name.clone(),
            language: lexicon.language.clone(),
            embedding_source: embeddings.source().clone(),
            lexicon_size: lexicon.len(),
            n_present: records.len(),
            n_missing: missing.len(),
            missing,
            skipped_degenerate: skipped,
            pearson_rho: stats::pearson(&sample)?,
            spearman_rho: stats::spearman(&sample)?,
            pleasant: summary(&a),
            unpleasant: summary(&b),
            warnings,
            config: config.clone(),
        },
        records,
    })
}

/// Spearman correlation between per-word effect sizes and p-values. Under
/// the one-sided upper-tail test the sign is negative; callers usually
/// report the magnitude.
pub fn effectsize_pvalue_correlation(report: &ValNormReport) -> Result<f64> {
    let pairs: Option<Vec<(f64, f64)>> = report
        .records
        .iter()
        .map(|r| r.p_value.map(|p| (r.effect_size, p)))
        .collect();
    let pairs = pairs.ok_or(Error::NoPValues)?;
    if pairs.len() < 2 {
        return Err(Error::Insufficient {
            what: "effect size / p-value correlation",
            needed: 2,
            got: pairs.len(),
        });
    }
    let (d, p): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    stats::spearman(&PairedSample::new(d, p)?)
}
