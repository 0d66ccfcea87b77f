//! Baseline intrinsic evaluations: word-similarity correlation and
//! 3CosAdd analogy accuracy.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{self, PairedSample};
use crate::vectorspace::{self, nfc, EmbeddingSet, LookupPolicy};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityPair {
    pub word1: String,
    pub word2: String,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityTask {
    pub name: String,
    pub pairs: Vec<SimilarityPair>,
}

impl SimilarityTask {
    pub fn new(name: impl Into<String>, pairs: Vec<SimilarityPair>) -> Result<Self> {
        let name = name.into();
        if pairs.is_empty() {
            return Err(Error::EmptySet(format!("similarity task {name}")));
        }
        if let Some(p) = pairs.iter().find(|p| !p.score.is_finite()) {
            return Err(Error::Invalid(format!(
                "non-finite score for pair ({}, {})",
                p.word1, p.word2
            )));
        }
        Ok(SimilarityTask { name, pairs })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalogyQuestion {
    pub a: String,
    pub b: String,
    pub c: String,
    pub expected: String,
    pub section: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalogyTask {
    pub name: String,
    pub questions: Vec<AnalogyQuestion>,
}

impl AnalogyTask {
    pub fn new(name: impl Into<String>, questions: Vec<AnalogyQuestion>) -> Result<Self> {
        let name = name.into();
        if questions.is_empty() {
            return Err(Error::EmptySet(format!("analogy task {name}")));
        }
        for q in &questions {
            let words = [&q.a, &q.b, &q.c, &q.expected];
            if words.iter().any(|w| w.is_empty()) {
                return Err(Error::Invalid(format!(
                    "analogy question with an empty word: {q:?}"
                )));
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    if words[i] == words[j] {
                        return Err(Error::Invalid(format!(
                            "analogy question repeats {:?}",
                            words[i]
                        )));
                    }
                }
            }
        }
        Ok(AnalogyTask { name, questions })
    }
}

fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    Ok(text)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "task".into())
}

/// `word1<sep>word2<sep>score[<sep>...]` per line with `sep` a tab, a comma
/// or whitespace. A first line whose score does not parse is a header.
/// Blank lines and `#` comments are skipped.
pub fn parse_similarity_task(text: &str, name: &str) -> Result<SimilarityTask> {
    let mut pairs = Vec::new();
    let mut seen_data = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let first_row = !seen_data;
        seen_data = true;
        if fields.len() < 3 {
            return Err(Error::Parse {
                path: name.to_owned(),
                line: i + 1,
                message: format!("expected `word1 word2 score`, got {line:?}"),
            });
        }
        let score = match fields[2].parse::<f64>() {
            Ok(s) => s,
            Err(_) if first_row => continue,
            Err(_) => {
                return Err(Error::Parse {
                    path: name.to_owned(),
                    line: i + 1,
                    message: format!("unparseable score {:?}", fields[2]),
                })
            }
        };
        pairs.push(SimilarityPair {
            word1: fields[0].to_owned(),
            word2: fields[1].to_owned(),
            score,
        });
    }
    SimilarityTask::new(name, pairs)
}

pub fn load_similarity_task(path: impl AsRef<Path>) -> Result<SimilarityTask> {
    let path = path.as_ref();
    parse_similarity_task(&read_text(path)?, &stem(path))
}

/// The sectioned analogy format: `: section-name` lines, then four
/// whitespace-separated words per line.
pub fn parse_analogy_task(text: &str, name: &str) -> Result<AnalogyTask> {
    let mut section = None;
    let mut questions = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(s) = line.strip_prefix(':') {
            section = Some(s.trim().to_owned());
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.len() != 4 {
            return Err(Error::Parse {
                path: name.to_owned(),
                line: i + 1,
                message: format!("expected four words, got {}", words.len()),
            });
        }
        questions.push(AnalogyQuestion {
            a: words[0].to_owned(),
            b: words[1].to_owned(),
            c: words[2].to_owned(),
            expected: words[3].to_owned(),
            section: section.clone(),
        });
    }
    AnalogyTask::new(name, questions)
}

pub fn load_analogy_task(path: impl AsRef<Path>) -> Result<AnalogyTask> {
    let path = path.as_ref();
    parse_analogy_task(&read_text(path)?, &stem(path))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionAccuracy {
    pub section: String,
    pub n_questions: usize,
    pub n_scored: usize,
    pub n_correct: usize,
    /// Correct over scored; absent when nothing was scored.
    pub accuracy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvalMetrics {
    Similarity {
        spearman_rho: f64,
        pearson_rho: f64,
    },
    Analogy {
        accuracy: f64,
        n_correct: usize,
        top_k: usize,
        sections: Vec<SectionAccuracy>,
        semantic: Option<SectionAccuracy>,
        syntactic: Option<SectionAccuracy>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub task: String,
    pub n_total: usize,
    pub n_scored: usize,
    pub n_skipped_missing: usize,
    pub metrics: EvalMetrics,
}

impl EvalResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match &self.metrics {
            EvalMetrics::Similarity {
                spearman_rho,
                pearson_rho,
            } => {
                w.write_record([
                    "task",
                    "n_scored",
                    "n_skipped_missing",
                    "spearman_rho",
                    "pearson_rho",
                ])?;
                w.write_record([
                    self.task.clone(),
                    self.n_scored.to_string(),
                    self.n_skipped_missing.to_string(),
                    spearman_rho.to_string(),
                    pearson_rho.to_string(),
                ])?;
            }
            EvalMetrics::Analogy {
                accuracy,
                n_correct,
                sections,
                ..
            } => {
                w.write_record([
                    "section",
                    "n_questions",
                    "n_scored",
                    "n_correct",
                    "accuracy",
                ])?;
                for s in sections {
                    w.write_record([
                        s.section.clone(),
                        s.n_questions.to_string(),
                        s.n_scored.to_string(),
                        s.n_correct.to_string(),
                        s.accuracy.map(|a| a.to_string()).unwrap_or_default(),
                    ])?;
                }
                w.write_record([
                    "all".to_owned(),
                    self.n_total.to_string(),
                    self.n_scored.to_string(),
                    n_correct.to_string(),
                    accuracy.to_string(),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

/// Cosine of each resolvable pair against the human scores.
pub fn run_similarity(
    embeddings: &EmbeddingSet,
    task: &SimilarityTask,
    policy: &LookupPolicy,
) -> Result<EvalResult> {
    let scored: Vec<Option<(f64, f64)>> = task
        .pairs
        .par_iter()
        .map(|p| {
            let u = embeddings.lookup(&p.word1, policy)?;
            let v = embeddings.lookup(&p.word2, policy)?;
            vectorspace::cosine(&u, &v).ok().map(|c| (c, p.score))
        })
        .collect();
    let (cos, human): (Vec<f64>, Vec<f64>) = scored.iter().flatten().copied().unzip();
    let n_scored = cos.len();
    if n_scored < 2 {
        return Err(Error::Insufficient {
            what: "similarity correlation",
            needed: 2,
            got: n_scored,
        });
    }
    let sample = PairedSample::new(cos, human)?;
    Ok(EvalResult {
        task: task.name.clone(),
        n_total: task.pairs.len(),
        n_scored,
        n_skipped_missing: task.pairs.len() - n_scored,
        metrics: EvalMetrics::Similarity {
            spearman_rho: stats::spearman(&sample)?,
            pearson_rho: stats::pearson(&sample)?,
        },
    })
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = vectorspace::norm(v);
    v.iter().map(|x| x / n).collect()
}

/// Outcome of one analogy question.
#[derive(Clone, Debug, PartialEq)]
pub enum AnalogyOutcome {
    /// A query word (a, b or c) is not in the vocabulary.
    Skipped,
    /// Ranked candidates, best first.
    Answered { top: Vec<String>, correct: bool },
}

/// Best `top_k` vocabulary words for `b - a + c` (inputs unit-normalized),
/// excluding the three query words.
pub fn answer_analogy(
    embeddings: &EmbeddingSet,
    q: &AnalogyQuestion,
    policy: &LookupPolicy,
    top_k: usize,
) -> AnalogyOutcome {
    let (Some(a), Some(b), Some(c)) = (
        embeddings.lookup(&q.a, policy),
        embeddings.lookup(&q.b, policy),
        embeddings.lookup(&q.c, policy),
    ) else {
        return AnalogyOutcome::Skipped;
    };
    let (a, b, c) = (unit(&a), unit(&b), unit(&c));
    let target: Vec<f64> = (0..a.len()).map(|i| b[i] - a[i] + c[i]).collect();
    let exclude: Vec<usize> = [&q.a, &q.b, &q.c]
        .iter()
        .filter_map(|w| embeddings.lookup_index(w, policy))
        .collect();
    let tn = vectorspace::norm(&target);

    let mut best: Vec<(f64, usize)> = Vec::with_capacity(top_k + 1);
    for i in 0..embeddings.len() {
        if exclude.contains(&i) {
            continue;
        }
        let score = if tn == 0.0 {
            0.0
        } else {
            vectorspace::cosine_with_norms(embeddings.vector(i), embeddings.norm(i), &target, tn)
        };
        if best.len() < top_k || score > best[best.len() - 1].0 {
            let pos = best.partition_point(|&(s, _)| s >= score);
            best.insert(pos, (score, i));
            best.truncate(top_k);
        }
    }
    let top: Vec<String> = best
        .iter()
        .map(|&(_, i)| embeddings.words()[i].clone())
        .collect();
    let expected = policy.normalize(q.expected.trim());
    let correct = top.iter().any(|w| {
        let w = nfc(w);
        w == expected || (policy.case_fallback && w.to_lowercase() == expected.to_lowercase())
    });
    AnalogyOutcome::Answered { top, correct }
}

fn section_kind(section: &str) -> &'static str {
    if section.starts_with("gram") {
        "syntactic"
    } else {
        "semantic"
    }
}

/// 3CosAdd accuracy. Questions with an out-of-vocabulary query word are
/// skipped; an out-of-vocabulary expected answer counts as incorrect.
pub fn run_analogy(
    embeddings: &EmbeddingSet,
    task: &AnalogyTask,
    policy: &LookupPolicy,
    top_k: usize,
) -> Result<EvalResult> {
    if embeddings.len() < 4 {
        return Err(Error::Insufficient {
            what: "analogy vocabulary",
            needed: 4,
            got: embeddings.len(),
        });
    }
    if top_k == 0 {
        return Err(Error::Invalid("top_k must be positive".into()));
    }
    let outcomes: Vec<AnalogyOutcome> = task
        .questions
        .par_iter()
        .map(|q| answer_analogy(embeddings, q, policy, top_k))
        .collect();

    let mut sections: Vec<SectionAccuracy> = Vec::new();
    let mut kinds: Vec<SectionAccuracy> = ["semantic", "syntactic"]
        .iter()
        .map(|k| SectionAccuracy {
            section: k.to_string(),
            n_questions: 0,
            n_scored: 0,
            n_correct: 0,
            accuracy: None,
        })
        .collect();
    let mut n_scored = 0;
    let mut n_correct = 0;
    for (q, outcome) in task.questions.iter().zip(&outcomes) {
        let name = q.section.clone().unwrap_or_else(|| "default".into());
        let idx = match sections.iter().position(|s| s.section == name) {
            Some(i) => i,
            None => {
                sections.push(SectionAccuracy {
                    section: name.clone(),
                    n_questions: 0,
                    n_scored: 0,
                    n_correct: 0,
                    accuracy: None,
                });
                sections.len() - 1
            }
        };
        let kind = usize::from(section_kind(&name) == "syntactic");
        for s in [&mut sections[idx], &mut kinds[kind]] {
            s.n_questions += 1;
            if let AnalogyOutcome::Answered { correct, .. } = outcome {
                s.n_scored += 1;
                s.n_correct += *correct as usize;
            }
        }
        if let AnalogyOutcome::Answered { correct, .. } = outcome {
            n_scored += 1;
            n_correct += *correct as usize;
        }
    }
    if n_scored == 0 {
        return Err(Error::Insufficient {
            what: "analogy questions with known query words",
            needed: 1,
            got: 0,
        });
    }
    for s in sections.iter_mut().chain(kinds.iter_mut()) {
        if s.n_scored > 0 {
            s.accuracy = Some(s.n_correct as f64 / s.n_scored as f64);
        }
    }
    let labelled = task.questions.iter().any(|q| q.section.is_some());
    let mut kinds = kinds.into_iter();
    let (semantic, syntactic) = (kinds.next().unwrap(), kinds.next().unwrap());
    let keep = |s: SectionAccuracy| (labelled && s.n_questions > 0).then_some(s);
    Ok(EvalResult {
        task: task.name.clone(),
        n_total: task.questions.len(),
        n_scored,
        n_skipped_missing: task.questions.len() - n_scored,
        metrics: EvalMetrics::Analogy {
            accuracy: n_correct as f64 / n_scored as f64,
            n_correct,
            top_k,
            sections,
            semantic: keep(semantic),
            syntactic: keep(syntactic),
        },
    })
}
