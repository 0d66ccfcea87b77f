//! Aggregation across runs: effect-size variance over languages and
//! ValNorm sweeps over embedding slices (decades, corpus-size bins).

use std::cmp::Ordering;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::association::{AssociationResult, WordSet};
use crate::error::{Error, Result};
use crate::stats::{self, VarianceMode};
use crate::valence::{self, ValNormConfig, ValenceLexicon};
use crate::vectorspace::{load_embeddings, LoadOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledEffect {
    pub label: String,
    pub effect_size: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub bias: String,
    pub runs: Vec<LabeledEffect>,
    pub variance: f64,
    pub mode: VarianceMode,
}

/// Variance of the effect sizes of several runs of the same test.
pub fn aggregate_variance(
    bias: impl Into<String>,
    results: &[(String, AssociationResult)],
    mode: VarianceMode,
) -> Result<VarianceReport> {
    if results.len() < 2 {
        return Err(Error::Insufficient {
            what: "runs for a variance report",
            needed: 2,
            got: results.len(),
        });
    }
    let runs: Vec<LabeledEffect> = results
        .iter()
        .map(|(label, r)| LabeledEffect {
            label: label.clone(),
            effect_size: r.effect_size,
        })
        .collect();
    let values: Vec<f64> = runs.iter().map(|r| r.effect_size).collect();
    Ok(VarianceReport {
        bias: bias.into(),
        variance: stats::variance(&values, mode)?,
        runs,
        mode,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineSlice {
    pub label: String,
    pub path: PathBuf,
}

impl std::str::FromStr for TimelineSlice {
    type Err = Error;

    /// `label=path`
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('=') {
            Some((label, path)) if !label.trim().is_empty() && !path.is_empty() => {
                Ok(TimelineSlice {
                    label: label.trim().to_owned(),
                    path: PathBuf::from(path),
                })
            }
            _ => Err(Error::Invalid(format!("expected label=path, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicePoint {
    pub label: String,
    pub pearson_rho: Option<f64>,
    pub spearman_rho: Option<f64>,
    pub n_present: usize,
    /// Why the correlation is absent, if it is.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimelineReport {
    pub lexicon: String,
    pub slices: Vec<SlicePoint>,
    /// Population variance of the non-null Pearson values; absent with
    /// fewer than two.
    pub pearson_variance: Option<f64>,
    pub spearman_variance: Option<f64>,
}

impl TimelineReport {
    /// `label,rho,n_present` with `rho` the Pearson value (empty when null).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["label", "rho", "n_present"])?;
        for s in &self.slices {
            w.write_record([
                s.label.clone(),
                s.pearson_rho.map(|r| r.to_string()).unwrap_or_default(),
                s.n_present.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

/// Numeric labels (decades, bin sizes) sort by value; anything else sorts
/// after them, lexicographically.
pub fn compare_labels(a: &str, b: &str) -> Ordering {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.total_cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

fn population_variance(values: &[Option<f64>]) -> Result<Option<f64>> {
    let present: Vec<f64> = values.iter().flatten().copied().collect();
    if present.len() < 2 {
        return Ok(None);
    }
    stats::variance(&present, VarianceMode::Population).map(Some)
}

/// Runs ValNorm on every slice. Slices load and run in parallel; the report
/// lists them in label order. A slice that cannot load aborts the sweep
/// with an error naming it. A slice with too few usable words is kept with
/// a null correlation and left out of the variance.
pub fn run_timeline(
    slices: &[TimelineSlice],
    load: &LoadOptions,
    lexicon: &ValenceLexicon,
    pleasant: &WordSet,
    unpleasant: &WordSet,
    config: &ValNormConfig,
) -> Result<TimelineReport> {
    if slices.is_empty() {
        return Err(Error::Insufficient {
            what: "timeline slices",
            needed: 1,
            got: 0,
        });
    }
    let mut ordered: Vec<&TimelineSlice> = slices.iter().collect();
    ordered.sort_by(|a, b| compare_labels(&a.label, &b.label));
    if let Some(w) = ordered.windows(2).find(|w| w[0].label == w[1].label) {
        return Err(Error::Invalid(format!(
            "duplicate slice label {:?}",
            w[0].label
        )));
    }

    let wrap = |label: &str, e: Error| Error::Slice {
        label: label.to_owned(),
        source: Box::new(e),
    };
    let points: Vec<Result<SlicePoint>> = ordered
        .par_iter()
        .map(|slice| {
            let emb = load_embeddings(&slice.path, load).map_err(|e| wrap(&slice.label, e))?;
            let null = |note: String| SlicePoint {
                label: slice.label.clone(),
                pearson_rho: None,
                spearman_rho: None,
                n_present: 0,
                note: Some(note),
            };
            match valence::run_valnorm(&emb, lexicon, pleasant, unpleasant, config) {
                Ok(r) => Ok(SlicePoint {
                    label: slice.label.clone(),
                    pearson_rho: Some(r.header.pearson_rho),
                    spearman_rho: Some(r.header.spearman_rho),
                    n_present: r.header.n_present,
                    note: None,
                }),
                Err(e @ (Error::Insufficient { .. } | Error::EmptySet(_))) => {
                    log::warn!("slice {}: {e}", slice.label);
                    Ok(null(e.to_string()))
                }
                Err(e) => Err(wrap(&slice.label, e)),
            }
        })
        .collect();
    let slices = points.into_iter().collect::<Result<Vec<_>>>()?;
    let pearson: Vec<Option<f64>> = slices.iter().map(|s| s.pearson_rho).collect();
    let spearman: Vec<Option<f64>> = slices.iter().map(|s| s.spearman_rho).collect();
    Ok(TimelineReport {
        lexicon: lexicon.name.clone(),
        pearson_variance: population_variance(&pearson)?,
        spearman_variance: population_variance(&spearman)?,
        slices,
    })
}
