//! Loading pre-trained embeddings from text formats and looking words up.
//!
//! Two layouts are supported, both UTF-8 with one word per line followed by
//! its components separated by ASCII whitespace:
//!
//! * word2vec / fastText `.vec`: a first line `<count> <dim>`, then the rows.
//! * GloVe: rows only; the dimension is taken from the first row.
//!
//! Vectors are kept as loaded. Euclidean norms are computed once at load
//! time so that cosine similarity against the vocabulary is a single dot
//! product.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingFormat {
    Word2vecText,
    GloveText,
    FasttextVec,
    #[default]
    Auto,
}

impl EmbeddingFormat {
    fn has_header(self) -> Option<bool> {
        match self {
            EmbeddingFormat::Word2vecText | EmbeddingFormat::FasttextVec => Some(true),
            EmbeddingFormat::GloveText => Some(false),
            EmbeddingFormat::Auto => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadOptions {
    pub format: EmbeddingFormat,
    pub expected_dimension: Option<usize>,
    /// Stop after this many accepted rows (files are usually frequency
    /// sorted, so this keeps the most frequent words).
    pub limit: Option<usize>,
}

/// Where an [`EmbeddingSet`] came from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSource {
    pub path: Option<String>,
    /// Format actually used; `auto` is resolved at load time.
    pub format: Option<EmbeddingFormat>,
    /// Row count declared in the header, if there was one.
    pub declared_count: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiwordPolicy {
    #[default]
    ExactOnly,
    /// Retry with spaces replaced by `_`, `-`, or removed.
    PunctuationVariants,
    /// Mean of the whitespace-separated subtokens; every subtoken must exist.
    AverageSubtokens,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LookupPolicy {
    pub case_fallback: bool,
    pub multiword_policy: MultiwordPolicy,
    pub unicode_normalize: bool,
}

impl Default for LookupPolicy {
    fn default() -> Self {
        LookupPolicy {
            case_fallback: true,
            multiword_policy: MultiwordPolicy::ExactOnly,
            unicode_normalize: true,
        }
    }
}

impl LookupPolicy {
    /// Canonical form of a query or vocabulary word under this policy.
    pub fn normalize<'a>(&self, word: &'a str) -> Cow<'a, str> {
        if self.unicode_normalize {
            nfc(word)
        } else {
            Cow::Borrowed(word)
        }
    }
}

pub(crate) fn nfc(word: &str) -> Cow<'_, str> {
    if unicode_normalization::is_nfc(word) {
        Cow::Borrowed(word)
    } else {
        Cow::Owned(word.nfc().collect())
    }
}

/// An immutable vocabulary of dense vectors with cached norms.
#[derive(Clone, Debug)]
pub struct EmbeddingSet {
    dimension: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    norms: Vec<f64>,
    duplicates: usize,
    source: EmbeddingSource,
}

impl EmbeddingSet {
    /// Builds a set from in-memory rows. Keys are NFC-normalized; the first
    /// occurrence of a duplicate key wins.
    pub fn from_entries<I, S>(dimension: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: AsRef<str>,
    {
        let mut builder = Builder::new(dimension);
        for (i, (word, vector)) in entries.into_iter().enumerate() {
            if vector.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: vector.len(),
                });
            }
            builder.push(word.as_ref(), &vector, "<memory>", i + 1)?;
        }
        builder.finish(EmbeddingSource::default())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Rows dropped because their (normalized) word was already present.
    pub fn duplicate_count(&self) -> usize {
        self.duplicates
    }

    pub fn source(&self) -> &EmbeddingSource {
        &self.source
    }

    /// Vocabulary in file order.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn vector(&self, idx: usize) -> &[f64] {
        &self.data[idx * self.dimension..(idx + 1) * self.dimension]
    }

    pub fn norm(&self, idx: usize) -> f64 {
        self.norms[idx]
    }

    /// Exact vocabulary access, no normalization or fallback.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index_of(word).map(|i| self.vector(i))
    }

    /// Returns a copy with every vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let entries = self.words.iter().enumerate().map(|(i, w)| {
            (
                w.clone(),
                self.vector(i).iter().map(|x| x * factor).collect(),
            )
        });
        let mut set = EmbeddingSet::from_entries(self.dimension, entries)?;
        set.source = self.source.clone();
        Ok(set)
    }

    /// Resolves `word` to a vector under `policy`.
    ///
    /// Order of attempts: exact (after optional NFC), lowercase fallback,
    /// then the multiword policy. Absence is not an error.
    pub fn lookup(&self, word: &str, policy: &LookupPolicy) -> Option<Cow<'_, [f64]>> {
        let word = policy.normalize(word.trim());
        if let Some(v) = self.lookup_single(&word, policy) {
            return Some(Cow::Borrowed(v));
        }
        if !word.contains(char::is_whitespace) {
            return None;
        }
        match policy.multiword_policy {
            MultiwordPolicy::ExactOnly => None,
            MultiwordPolicy::PunctuationVariants => {
                let parts: Vec<&str> = word.split_whitespace().collect();
                ["_", "-", ""].iter().find_map(|sep| {
                    self.lookup_single(&parts.join(sep), policy)
                        .map(Cow::Borrowed)
                })
            }
            MultiwordPolicy::AverageSubtokens => {
                let parts: Vec<&[f64]> = word
                    .split_whitespace()
                    .map(|t| self.lookup_single(t, policy))
                    .collect::<Option<_>>()?;
                let mut mean = vec![0.0; self.dimension];
                for v in &parts {
                    for (m, x) in mean.iter_mut().zip(v.iter()) {
                        *m += x;
                    }
                }
                let n = parts.len() as f64;
                mean.iter_mut().for_each(|m| *m /= n);
                Some(Cow::Owned(mean))
            }
        }
    }

    /// Vocabulary row a query maps to, when it maps to a single row (exact,
    /// case fallback or punctuation variant; never for averaged subtokens).
    pub fn lookup_index(&self, word: &str, policy: &LookupPolicy) -> Option<usize> {
        let word = policy.normalize(word.trim());
        if let Some(i) = self.index_single(&word, policy) {
            return Some(i);
        }
        if policy.multiword_policy == MultiwordPolicy::PunctuationVariants
            && word.contains(char::is_whitespace)
        {
            let parts: Vec<&str> = word.split_whitespace().collect();
            return ["_", "-", ""]
                .iter()
                .find_map(|sep| self.index_single(&parts.join(sep), policy));
        }
        None
    }

    fn index_single(&self, word: &str, policy: &LookupPolicy) -> Option<usize> {
        if let Some(i) = self.index_of(word) {
            return Some(i);
        }
        if policy.case_fallback {
            let lower = word.to_lowercase();
            if lower != word {
                return self.index_of(&lower);
            }
        }
        None
    }

    fn lookup_single(&self, word: &str, policy: &LookupPolicy) -> Option<&[f64]> {
        self.index_single(word, policy).map(|i| self.vector(i))
    }
}

struct Builder {
    dimension: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    norms: Vec<f64>,
    duplicates: usize,
}

impl Builder {
    fn new(dimension: usize) -> Self {
        Builder {
            dimension,
            words: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
            norms: Vec::new(),
            duplicates: 0,
        }
    }

    fn push(&mut self, word: &str, vector: &[f64], path: &str, line: usize) -> Result<()> {
        if let Some(pos) = vector.iter().position(|x| !x.is_finite()) {
            return Err(Error::Parse {
                path: path.to_owned(),
                line,
                message: format!("non-finite component {} for word {word:?}", pos + 1),
            });
        }
        let norm = norm(vector);
        if norm == 0.0 {
            return Err(Error::ZeroVector {
                path: path.to_owned(),
                line,
                word: word.to_owned(),
            });
        }
        let key = nfc(word).into_owned();
        if self.index.contains_key(&key) {
            self.duplicates += 1;
            log::warn!("{path}:{line}: duplicate word {key:?} ignored");
            return Ok(());
        }
        self.index.insert(key.clone(), self.words.len());
        self.words.push(key);
        self.data.extend_from_slice(vector);
        self.norms.push(norm);
        Ok(())
    }

    fn finish(self, source: EmbeddingSource) -> Result<EmbeddingSet> {
        if self.dimension == 0 {
            return Err(Error::Invalid(
                "embedding dimension must be positive".into(),
            ));
        }
        Ok(EmbeddingSet {
            dimension: self.dimension,
            words: self.words,
            index: self.index,
            data: self.data,
            norms: self.norms,
            duplicates: self.duplicates,
            source,
        })
    }
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let count = it.next()?.parse().ok()?;
    let dim = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((count, dim))
}

/// Reads a word2vec/fastText/GloVe text file.
pub fn load_embeddings(path: impl AsRef<Path>, options: &LoadOptions) -> Result<EmbeddingSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_embeddings(BufReader::new(file), &path.display().to_string(), options)
}

/// Same as [`load_embeddings`] over any buffered reader; `name` is used in
/// error messages.
pub fn read_embeddings<R: BufRead>(
    reader: R,
    name: &str,
    options: &LoadOptions,
) -> Result<EmbeddingSet> {
    let mut lines = reader.lines().enumerate().peekable();
    let mut declared: Option<(usize, usize)> = None;

    let first = match lines.peek() {
        Some((_, Ok(l))) => Some(l.clone()),
        Some((_, Err(_))) => {
            let (_, err) = lines.next().unwrap();
            return Err(Error::io(name, err.unwrap_err()));
        }
        None => None,
    };
    let header = match options.format.has_header() {
        Some(h) => h,
        None => first.as_deref().and_then(parse_header).is_some(),
    };
    if header {
        let line = first.ok_or_else(|| Error::Parse {
            path: name.to_owned(),
            line: 1,
            message: "missing header line".into(),
        })?;
        declared = Some(parse_header(&line).ok_or_else(|| Error::Parse {
            path: name.to_owned(),
            line: 1,
            message: format!("malformed header {line:?}, expected `<count> <dim>`"),
        })?);
        lines.next();
    }
    let format = match options.format {
        EmbeddingFormat::Auto if header => EmbeddingFormat::Word2vecText,
        EmbeddingFormat::Auto => EmbeddingFormat::GloveText,
        f => f,
    };

    let mut dimension = declared.map(|(_, d)| d);
    if let (Some(expected), Some(found)) = (options.expected_dimension, dimension) {
        if expected != found {
            return Err(Error::DimensionMismatch { expected, found });
        }
    }

    let mut builder: Option<Builder> = dimension.map(Builder::new);
    let mut row = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(name, e))?;
        let mut tokens = line.split_ascii_whitespace();
        let Some(word) = tokens.next() else {
            continue;
        };
        row.clear();
        for tok in tokens {
            let x: f64 = tok.parse().map_err(|_| Error::Parse {
                path: name.to_owned(),
                line: lineno,
                message: format!("malformed number {tok:?}"),
            })?;
            row.push(x);
        }
        let dim = match dimension {
            Some(d) => d,
            None => {
                let d = row.len();
                if d == 0 {
                    return Err(Error::Parse {
                        path: name.to_owned(),
                        line: lineno,
                        message: "row has no components".into(),
                    });
                }
                if let Some(expected) = options.expected_dimension {
                    if expected != d {
                        return Err(Error::DimensionMismatch { expected, found: d });
                    }
                }
                dimension = Some(d);
                builder = Some(Builder::new(d));
                d
            }
        };
        if row.len() != dim {
            return Err(Error::Parse {
                path: name.to_owned(),
                line: lineno,
                message: format!("expected {dim} components, found {}", row.len()),
            });
        }
        let b = builder
            .as_mut()
            .expect("builder exists once dimension is known");
        b.push(word, &row, name, lineno)?;
        if lineno % 100_000 == 0 {
            log::info!("{name}: {lineno} lines");
        }
        if options.limit.is_some_and(|l| b.words.len() >= l) {
            break;
        }
    }

    let builder = builder.ok_or_else(|| Error::Parse {
        path: name.to_owned(),
        line: 1,
        message: "no embedding rows".into(),
    })?;
    if let Some((count, _)) = declared {
        let rows = builder.words.len() + builder.duplicates;
        if options.limit.is_none() && count != rows {
            log::warn!("{name}: header declares {count} rows, read {rows}");
        }
    }
    builder.finish(EmbeddingSource {
        path: Some(name.to_owned()),
        format: Some(format),
        declared_count: declared.map(|(c, _)| c),
    })
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Cosine with precomputed norms; both must be positive.
pub(crate) fn cosine_with_norms(u: &[f64], nu: f64, v: &[f64], nv: f64) -> f64 {
    (dot(u, v) / (nu * nv)).clamp(-1.0, 1.0)
}

/// Cosine of the angle between `u` and `v`, clamped to [-1, 1].
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let nu = norm(u);
    let nv = norm(v);
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(cosine_with_norms(u, nu, v, nv))
}
