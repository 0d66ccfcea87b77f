//! Association tests over word vectors.
//!
//! * `s(w, A, B)`: mean cosine of `w` with `A` minus mean cosine with `B`.
//! * SC-WEAT effect size: `s(w, A, B)` divided by the standard deviation of
//!   the cosines of `w` with every word of `A ∪ B`.
//! * WEAT effect size: difference of the mean association of the targets in
//!   `X` and in `Y`, divided by the standard deviation of the association
//!   over `X ∪ Y`.
//!
//! `∪` is multiset concatenation throughout. Means and standard deviations
//! are accumulated in sorted order, so reordering the words of any set leaves
//! an effect size bit-for-bit unchanged.
//!
//! Significance comes from a one-sided permutation test: the pooled words
//! (targets for WEAT, attributes for SC-WEAT) are re-split into groups of the
//! original sizes and `p` is the fraction of splits whose statistic is
//! strictly greater than the observed one. The original split is part of the
//! null, so an exact `p` can be zero. Three ways of getting `p` exist: full
//! enumeration, Monte Carlo re-splits, and a normal fit to the null.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::stats::{self, ordered_mean, SeededSampler, VarianceMode, RNG_ALGORITHM};
use crate::vectorspace::{self, nfc, EmbeddingSet, LookupPolicy};

/// Minimum stimulus set size for a well-represented concept.
pub const MIN_SET_SIZE: usize = 8;

/// |d| at or above this is a large effect.
pub const LARGE_EFFECT: f64 = 0.8;

/// One-sided significance level; `p <= 0.05` or `p >= 0.95` is significant.
pub const ALPHA: f64 = 0.05;

/// Null statistics within this distance of the observed one count as ties,
/// not as "greater". Absorbs summation-order rounding.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Null samples used to fit the normal approximation when enumeration is
/// infeasible.
pub const NORMAL_FIT_SAMPLES: u64 = 10_000;

/// Decimal places at which normal-approximation p-values are rounded up.
pub const NORMAL_P_DECIMALS: i32 = 4;

const MC_CHUNK: u64 = 4096;

/// Standard deviations at or below this are treated as zero.
const DEGENERATE_STDDEV: f64 = 1e-12;

/// A named, ordered, duplicate-free list of stimulus words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSet {
    pub name: String,
    pub language: String,
    words: Vec<String>,
    /// Entries dropped because they repeated an earlier word.
    pub duplicates_removed: usize,
}

impl WordSet {
    /// Trims and NFC-normalizes every word, drops blanks, and collapses
    /// repeats (first occurrence kept).
    pub fn new<I, S>(name: impl Into<String>, language: impl Into<String>, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let name = name.into();
        let mut out: Vec<String> = Vec::new();
        let mut duplicates_removed = 0;
        for w in words {
            let w = nfc(w.as_ref().trim()).into_owned();
            if w.is_empty() {
                continue;
            }
            if out.contains(&w) {
                duplicates_removed += 1;
            } else {
                out.push(w);
            }
        }
        if out.is_empty() {
            return Err(Error::EmptySet(name));
        }
        Ok(WordSet {
            name,
            language: language.into(),
            words: out,
            duplicates_removed,
        })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Whether the set has at least [`MIN_SET_SIZE`] words.
    pub fn meets_minimum(&self) -> bool {
        self.words.len() >= MIN_SET_SIZE
    }
}

/// A word set split into the words found in an embedding set (with their
/// vectors) and the words that were not.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedSet {
    pub name: String,
    pub found_words: Vec<String>,
    pub vectors: Vec<Vec<f64>>,
    pub missing: Vec<String>,
}

impl ResolvedSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Looks every word of `set` up; order is preserved on both sides.
pub fn resolve(set: &WordSet, embeddings: &EmbeddingSet, policy: &LookupPolicy) -> ResolvedSet {
    let mut resolved = ResolvedSet {
        name: set.name.clone(),
        found_words: Vec::new(),
        vectors: Vec::new(),
        missing: Vec::new(),
    };
    for w in set.words() {
        match embeddings.lookup(w, policy) {
            Some(v) => {
                resolved.found_words.push(w.clone());
                resolved.vectors.push(v.into_owned());
            }
            None => resolved.missing.push(w.clone()),
        }
    }
    resolved
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PValueStrategy {
    /// Exact when the split count fits `max_exact_partitions` and the sizes
    /// are equal, Monte Carlo otherwise.
    #[default]
    Auto,
    Exact,
    MonteCarlo,
    NormalApprox,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PValueConfig {
    pub strategy: PValueStrategy,
    pub max_exact_partitions: u64,
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for PValueConfig {
    fn default() -> Self {
        PValueConfig {
            strategy: PValueStrategy::Auto,
            max_exact_partitions: 200_000,
            mc_samples: 100_000,
            seed: 0,
        }
    }
}

/// How a reported p-value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PStrategyUsed {
    Exact,
    MonteCarlo,
    NormalApprox,
    None,
}

/// Where the null distribution of a normal fit came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NullSource {
    Enumeration {
        partitions: u64,
    },
    MonteCarlo {
        samples: u64,
        seed: u64,
        stream: u64,
        rng: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PDetail {
    Exact {
        partitions: u64,
        greater: u64,
        ties: u64,
    },
    MonteCarlo {
        samples: u64,
        greater: u64,
        seed: u64,
        stream: u64,
        rng: String,
    },
    NormalApprox {
        null_mean: f64,
        null_std: f64,
        observed: f64,
        fitted_from: NullSource,
    },
}

/// Set sizes after resolution. `y` is absent for single-word tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub x: usize,
    pub y: Option<usize>,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Significance {
    pub large_effect: bool,
    pub significant: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssociationResult {
    pub effect_size: f64,
    pub p_value: Option<f64>,
    pub p_strategy: PStrategyUsed,
    pub p_detail: Option<PDetail>,
    pub counts: Counts,
    pub significance: Significance,
}

impl AssociationResult {
    fn new(effect_size: f64, p: Option<(f64, PStrategyUsed, PDetail)>, counts: Counts) -> Self {
        let (p_value, p_strategy, p_detail) = match p {
            Some((v, s, d)) => (Some(v), s, Some(d)),
            None => (None, PStrategyUsed::None, None),
        };
        AssociationResult {
            effect_size,
            p_value,
            p_strategy,
            p_detail,
            counts,
            significance: Significance {
                large_effect: effect_size.abs() >= LARGE_EFFECT,
                significant: p_value.map(|p| p <= ALPHA || p >= 1.0 - ALPHA),
            },
        }
    }
}

fn cosines<V: AsRef<[f64]>>(w: &[f64], set: &[V]) -> Result<Vec<f64>> {
    if w.is_empty() {
        return Err(Error::Invalid("empty vector".into()));
    }
    let nw = vectorspace::norm(w);
    if nw == 0.0 {
        return Err(Error::ZeroNorm);
    }
    set.iter()
        .map(|v| {
            let v = v.as_ref();
            if v.len() != w.len() {
                return Err(Error::DimensionMismatch {
                    expected: w.len(),
                    found: v.len(),
                });
            }
            let nv = vectorspace::norm(v);
            if nv == 0.0 {
                return Err(Error::ZeroNorm);
            }
            Ok(vectorspace::cosine_with_norms(w, nw, v, nv))
        })
        .collect()
}

fn non_empty<V>(set: &[V], name: &str) -> Result<()> {
    if set.is_empty() {
        Err(Error::EmptySet(name.to_owned()))
    } else {
        Ok(())
    }
}

/// `s(w, A, B)`
pub fn association_score<V: AsRef<[f64]>>(w: &[f64], a: &[V], b: &[V]) -> Result<f64> {
    non_empty(a, "A")?;
    non_empty(b, "B")?;
    Ok(ordered_mean(&cosines(w, a)?) - ordered_mean(&cosines(w, b)?))
}

/// Cohen's d of two groups against the pooled spread. Fails on a zero
/// denominator instead of returning an infinity.
fn cohens_d(first: &[f64], second: &[f64], mode: VarianceMode, what: &str) -> Result<f64> {
    let pooled: Vec<f64> = first.iter().chain(second).copied().collect();
    if pooled.len() < 2 {
        return Err(Error::Insufficient {
            what: "effect size",
            needed: 2,
            got: pooled.len(),
        });
    }
    let sd = stats::stddev(&pooled, mode)?;
    if sd.is_nan() || sd <= DEGENERATE_STDDEV {
        return Err(Error::DegenerateDenominator(format!(
            "all {what} values are equal"
        )));
    }
    Ok((ordered_mean(first) - ordered_mean(second)) / sd)
}

pub fn sc_weat_effect_size<V: AsRef<[f64]>>(
    w: &[f64],
    a: &[V],
    b: &[V],
    mode: VarianceMode,
) -> Result<f64> {
    non_empty(a, "A")?;
    non_empty(b, "B")?;
    cohens_d(&cosines(w, a)?, &cosines(w, b)?, mode, "attribute cosine")
}

fn associations<V: AsRef<[f64]>>(targets: &[V], a: &[V], b: &[V]) -> Result<Vec<f64>> {
    targets
        .iter()
        .map(|t| association_score(t.as_ref(), a, b))
        .collect()
}

pub fn weat_effect_size<V: AsRef<[f64]>>(
    x: &[V],
    y: &[V],
    a: &[V],
    b: &[V],
    mode: VarianceMode,
) -> Result<f64> {
    non_empty(x, "X")?;
    non_empty(y, "Y")?;
    non_empty(a, "A")?;
    non_empty(b, "B")?;
    cohens_d(
        &associations(x, a, b)?,
        &associations(y, a, b)?,
        mode,
        "target association",
    )
}

/// Number of ways to choose `k` of `n`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Permutation null over pooled per-item values; the first `first` items
/// form the observed first group.
struct PermutationNull<'a> {
    pooled: &'a [f64],
    first: usize,
    total: f64,
    observed: f64,
}

impl<'a> PermutationNull<'a> {
    fn new(pooled: &'a [f64], first: usize) -> Self {
        let total: f64 = pooled.iter().sum();
        let mut null = PermutationNull {
            pooled,
            first,
            total,
            observed: 0.0,
        };
        null.observed = null.statistic(pooled[..first].iter().sum());
        null
    }

    fn rest(&self) -> usize {
        self.pooled.len() - self.first
    }

    /// Mean of the first group minus mean of the second, from the sum of
    /// the first group.
    fn statistic(&self, first_sum: f64) -> f64 {
        first_sum / self.first as f64 - (self.total - first_sum) / self.rest() as f64
    }

    fn partitions(&self) -> u128 {
        binomial(self.pooled.len() as u64, self.first as u64)
    }

    fn classify(&self, stat: f64) -> (bool, bool) {
        let greater = stat > self.observed + TIE_TOLERANCE;
        let tie = !greater && stat >= self.observed - TIE_TOLERANCE;
        (greater, tie)
    }

    /// Walks every `first`-subset in lexicographic order.
    fn enumerate(&self, mut visit: impl FnMut(f64)) {
        let n = self.pooled.len();
        let k = self.first;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let sum: f64 = idx.iter().map(|&i| self.pooled[i]).sum();
            visit(self.statistic(sum));
            let mut i = k;
            while i > 0 && idx[i - 1] == i - 1 + n - k {
                i -= 1;
            }
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    fn exact(&self) -> (u64, u64, u64) {
        let (mut partitions, mut greater, mut ties) = (0u64, 0u64, 0u64);
        self.enumerate(|s| {
            partitions += 1;
            let (g, t) = self.classify(s);
            greater += g as u64;
            ties += t as u64;
        });
        (partitions, greater, ties)
    }

    fn exact_moments(&self) -> Moments {
        let mut m = Moments::default();
        self.enumerate(|s| m.push(s));
        m
    }

    /// Random re-splits in fixed-size chunks, each with its own substream,
    /// merged in chunk order: the outcome does not depend on thread count.
    fn sample(&self, samples: u64, seed: u64, stream: u64) -> (u64, Moments) {
        let chunks = samples.div_ceil(MC_CHUNK);
        let parts: Vec<(u64, Moments)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let count = MC_CHUNK.min(samples - c * MC_CHUNK);
                let mut rng = SeededSampler::substream(seed, stream, c);
                let mut idx: Vec<usize> = (0..self.pooled.len()).collect();
                let mut greater = 0;
                let mut moments = Moments::default();
                for _ in 0..count {
                    rng.choose_front(&mut idx, self.first);
                    let sum: f64 = idx[..self.first].iter().map(|&i| self.pooled[i]).sum();
                    let s = self.statistic(sum);
                    greater += self.classify(s).0 as u64;
                    moments.push(s);
                }
                (greater, moments)
            })
            .collect();
        parts
            .into_iter()
            .fold((0, Moments::default()), |(g, m), (pg, pm)| {
                (g + pg, m.merge(&pm))
            })
    }
}

/// Running mean and sum of squared deviations (Welford / Chan).
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&self, other: &Moments) -> Moments {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64,
        }
    }

    fn std_dev(&self) -> f64 {
        (self.m2 / self.n as f64).sqrt()
    }
}

/// Upper-tail probability of `observed` under N(mean, sd), rounded up to
/// [`NORMAL_P_DECIMALS`] places.
pub fn normal_upper_tail(observed: f64, mean: f64, sd: f64) -> Result<f64> {
    let normal = Normal::new(mean, sd)
        .map_err(|_| Error::DegenerateDenominator("null distribution has zero spread".into()))?;
    let scale = 10f64.powi(NORMAL_P_DECIMALS);
    Ok(((normal.sf(observed) * scale).ceil() / scale).min(1.0))
}

fn permutation_p(
    null: &PermutationNull<'_>,
    cfg: &PValueConfig,
    stream: u64,
) -> Result<(f64, PStrategyUsed, PDetail)> {
    let equal = null.first == null.rest();
    let partitions = null.partitions();
    let feasible = partitions <= cfg.max_exact_partitions as u128;
    let strategy = match cfg.strategy {
        PValueStrategy::Auto if equal && feasible => PValueStrategy::Exact,
        PValueStrategy::Auto => PValueStrategy::MonteCarlo,
        s => s,
    };
    match strategy {
        PValueStrategy::Exact => {
            if !equal {
                return Err(Error::UnequalSizes {
                    left: null.first,
                    right: null.rest(),
                });
            }
            if !feasible {
                return Err(Error::ExactInfeasible {
                    partitions,
                    limit: cfg.max_exact_partitions,
                });
            }
            let (partitions, greater, ties) = null.exact();
            Ok((
                greater as f64 / partitions as f64,
                PStrategyUsed::Exact,
                PDetail::Exact {
                    partitions,
                    greater,
                    ties,
                },
            ))
        }
        PValueStrategy::MonteCarlo => {
            if cfg.mc_samples == 0 {
                return Err(Error::Invalid("mc_samples must be positive".into()));
            }
            let (greater, _) = null.sample(cfg.mc_samples, cfg.seed, stream);
            Ok((
                greater as f64 / cfg.mc_samples as f64,
                PStrategyUsed::MonteCarlo,
                PDetail::MonteCarlo {
                    samples: cfg.mc_samples,
                    greater,
                    seed: cfg.seed,
                    stream,
                    rng: RNG_ALGORITHM.to_owned(),
                },
            ))
        }
        PValueStrategy::NormalApprox => {
            let (moments, fitted_from) = if equal && feasible {
                let m = null.exact_moments();
                (m, NullSource::Enumeration { partitions: m.n })
            } else {
                let (_, m) = null.sample(NORMAL_FIT_SAMPLES, cfg.seed, stream);
                (
                    m,
                    NullSource::MonteCarlo {
                        samples: NORMAL_FIT_SAMPLES,
                        seed: cfg.seed,
                        stream,
                        rng: RNG_ALGORITHM.to_owned(),
                    },
                )
            };
            let sd = moments.std_dev();
            let p = normal_upper_tail(null.observed, moments.mean, sd)?;
            Ok((
                p,
                PStrategyUsed::NormalApprox,
                PDetail::NormalApprox {
                    null_mean: moments.mean,
                    null_std: sd,
                    observed: null.observed,
                    fitted_from,
                },
            ))
        }
        PValueStrategy::Auto => unreachable!("auto resolved above"),
    }
}

/// WEAT effect size plus a permutation p-value over re-splits of `X ∪ Y`.
pub fn weat_p_value<V: AsRef<[f64]>>(
    x: &[V],
    y: &[V],
    a: &[V],
    b: &[V],
    cfg: &PValueConfig,
    mode: VarianceMode,
) -> Result<AssociationResult> {
    weat(x, y, a, b, Some(cfg), mode)
}

/// WEAT effect size, with a p-value when `cfg` is given.
pub fn weat<V: AsRef<[f64]>>(
    x: &[V],
    y: &[V],
    a: &[V],
    b: &[V],
    cfg: Option<&PValueConfig>,
    mode: VarianceMode,
) -> Result<AssociationResult> {
    non_empty(x, "X")?;
    non_empty(y, "Y")?;
    non_empty(a, "A")?;
    non_empty(b, "B")?;
    let sx = associations(x, a, b)?;
    let sy = associations(y, a, b)?;
    let d = cohens_d(&sx, &sy, mode, "target association")?;
    let p = match cfg {
        Some(cfg) => {
            let pooled: Vec<f64> = sx.iter().chain(&sy).copied().collect();
            Some(permutation_p(
                &PermutationNull::new(&pooled, sx.len()),
                cfg,
                0,
            )?)
        }
        None => None,
    };
    let counts = Counts {
        x: x.len(),
        y: Some(y.len()),
        a: a.len(),
        b: b.len(),
    };
    Ok(AssociationResult::new(d, p, counts))
}

/// SC-WEAT effect size plus a permutation p-value over re-splits of `A ∪ B`.
pub fn sc_weat_p_value<V: AsRef<[f64]>>(
    w: &[f64],
    a: &[V],
    b: &[V],
    cfg: &PValueConfig,
    mode: VarianceMode,
) -> Result<AssociationResult> {
    sc_weat(w, a, b, Some(cfg), mode)
}

/// SC-WEAT effect size, with a p-value when `cfg` is given.
pub fn sc_weat<V: AsRef<[f64]>>(
    w: &[f64],
    a: &[V],
    b: &[V],
    cfg: Option<&PValueConfig>,
    mode: VarianceMode,
) -> Result<AssociationResult> {
    sc_weat_on_stream(w, a, b, cfg, mode, 0)
}

/// As [`sc_weat`], drawing Monte Carlo samples from sampler stream `stream`.
/// Batch callers give each word its own stream.
pub fn sc_weat_on_stream<V: AsRef<[f64]>>(
    w: &[f64],
    a: &[V],
    b: &[V],
    cfg: Option<&PValueConfig>,
    mode: VarianceMode,
    stream: u64,
) -> Result<AssociationResult> {
    non_empty(a, "A")?;
    non_empty(b, "B")?;
    let ca = cosines(w, a)?;
    let cb = cosines(w, b)?;
    let d = cohens_d(&ca, &cb, mode, "attribute cosine")?;
    let p = match cfg {
        Some(cfg) => {
            let pooled: Vec<f64> = ca.iter().chain(&cb).copied().collect();
            Some(permutation_p(
                &PermutationNull::new(&pooled, ca.len()),
                cfg,
                stream,
            )?)
        }
        None => None,
    };
    let counts = Counts {
        x: 1,
        y: None,
        a: a.len(),
        b: b.len(),
    };
    Ok(AssociationResult::new(d, p, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(xs: &[f64]) -> Vec<f64> {
        xs.to_vec()
    }

    #[test]
    fn word_set_dedup_and_flag() {
        let s = WordSet::new("t", "en", ["a", " b ", "a", "", "c"]).unwrap();
        assert_eq!(s.words(), &["a", "b", "c"]);
        assert_eq!(s.duplicates_removed, 1);
        assert!(!s.meets_minimum());
        let big = WordSet::new("t", "en", (0..8).map(|i| format!("w{i}"))).unwrap();
        assert!(big.meets_minimum());
        assert!(matches!(
            WordSet::new("t", "en", [" "]),
            Err(Error::EmptySet(_))
        ));
    }

    #[test]
    fn word_set_nfc_dedup() {
        let s = WordSet::new("t", "pt", ["divo\u{301}rcio", "div\u{f3}rcio"]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.words()[0], "div\u{f3}rcio");
    }

    #[test]
    fn association_examples() {
        let a = vec![v(&[1.0, 0.0]), v(&[0.3, 0.7])];
        assert_eq!(association_score(&[0.2, 0.9], &a, &a).unwrap(), 0.0);
        let b = vec![v(&[-0.5, 0.1])];
        let s1 = association_score(&[0.2, 0.9], &a, &b).unwrap();
        let s2 = association_score(&[0.2, 0.9], &b, &a).unwrap();
        assert_eq!(s1, -s2);
        let s = association_score(&[1.0, 0.0], &[v(&[1.0, 0.0])], &[v(&[0.0, 1.0])]).unwrap();
        assert_eq!(s, 1.0);
        let empty: Vec<Vec<f64>> = vec![];
        assert!(association_score(&[1.0, 0.0], &empty, &b).is_err());
    }

    #[test]
    fn sc_weat_hand_example() {
        let w = [1.0, 0.0];
        let a = vec![v(&[1.0, 0.0]), v(&[0.8, 0.6])];
        let b = vec![v(&[-1.0, 0.0]), v(&[-0.8, 0.6])];
        // cosines (1, 0.8, -1, -0.8); numerator 1.8
        let pop = sc_weat_effect_size(&w, &a, &b, VarianceMode::Population).unwrap();
        let smp = sc_weat_effect_size(&w, &a, &b, VarianceMode::Sample).unwrap();
        assert_relative_eq!(pop, 1.987_767_469_347_237_8, epsilon = 1e-12);
        assert_relative_eq!(smp, 1.721_457_125_271_013_4, epsilon = 1e-12);
        let swapped = sc_weat_effect_size(&w, &b, &a, VarianceMode::Sample).unwrap();
        assert_eq!(swapped, -smp);
    }

    #[test]
    fn sc_weat_degenerate() {
        let a = vec![v(&[0.3, 0.1]); 3];
        let err = sc_weat_effect_size(&[1.0, 2.0], &a, &a, VarianceMode::Sample).unwrap_err();
        assert!(matches!(err, Error::DegenerateDenominator(_)));
    }

    #[test]
    fn weat_identical_targets_is_zero() {
        let x = vec![v(&[1.0, 0.2]), v(&[0.1, 1.0])];
        let a = vec![v(&[1.0, 0.0]), v(&[0.9, 0.3])];
        let b = vec![v(&[0.0, 1.0]), v(&[-0.2, 1.0])];
        assert_eq!(
            weat_effect_size(&x, &x, &a, &b, VarianceMode::Sample).unwrap(),
            0.0
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(22, 11), 705_432);
        assert_eq!(binomial(50, 25), 126_410_606_437_752);
        assert_eq!(binomial(4, 0), 1);
    }

    #[test]
    fn enumeration_visits_every_subset_once() {
        let pooled = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
        let null = PermutationNull::new(&pooled, 3);
        let mut seen = Vec::new();
        null.enumerate(|s| seen.push(s));
        assert_eq!(seen.len(), 20);
        // each subset sum of distinct powers of two is unique
        let mut sorted = seen.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        assert_eq!(sorted.len(), 20);
        assert_eq!(seen[0], null.observed);
    }

    #[test]
    fn sc_weat_exact_unique_max_gives_zero() {
        let w = [1.0, 0.0];
        let a = vec![v(&[1.0, 0.1]), v(&[0.9, 0.5])];
        let b = vec![v(&[-1.0, 0.2]), v(&[-0.7, 0.8])];
        let cfg = PValueConfig {
            strategy: PValueStrategy::Exact,
            ..Default::default()
        };
        let r = sc_weat_p_value(&w, &a, &b, &cfg, VarianceMode::Sample).unwrap();
        assert_eq!(r.p_value, Some(0.0));
        assert_eq!(
            r.p_detail,
            Some(PDetail::Exact {
                partitions: 6,
                greater: 0,
                ties: 1
            })
        );
        // reversed: every other split is greater
        let r = sc_weat_p_value(&w, &b, &a, &cfg, VarianceMode::Sample).unwrap();
        assert_eq!(r.p_value, Some(5.0 / 6.0));
    }

    #[test]
    fn exact_rejects_unequal_and_oversized() {
        let w = [1.0, 0.0];
        let a = vec![v(&[1.0, 0.1]), v(&[0.9, 0.5]), v(&[0.2, 0.5])];
        let b = vec![v(&[-1.0, 0.2]), v(&[-0.7, 0.8])];
        let cfg = PValueConfig {
            strategy: PValueStrategy::Exact,
            ..Default::default()
        };
        assert!(matches!(
            sc_weat_p_value(&w, &a, &b, &cfg, VarianceMode::Sample),
            Err(Error::UnequalSizes { left: 3, right: 2 })
        ));
        let tight = PValueConfig {
            max_exact_partitions: 5,
            ..cfg.clone()
        };
        assert!(matches!(
            sc_weat_p_value(&w, &a[..2], &b, &tight, VarianceMode::Sample),
            Err(Error::ExactInfeasible {
                partitions: 6,
                limit: 5
            })
        ));
        // auto falls back to Monte Carlo for unequal sizes
        let auto = PValueConfig {
            mc_samples: 1000,
            ..Default::default()
        };
        let r = sc_weat_p_value(&w, &a, &b, &auto, VarianceMode::Sample).unwrap();
        assert_eq!(r.p_strategy, PStrategyUsed::MonteCarlo);
    }

    #[test]
    fn no_config_means_no_p() {
        let w = [1.0, 0.0];
        let a = vec![v(&[1.0, 0.1]), v(&[0.9, 0.5])];
        let b = vec![v(&[-1.0, 0.2]), v(&[-0.7, 0.8])];
        let r = sc_weat(&w, &a, &b, None, VarianceMode::Sample).unwrap();
        assert_eq!(r.p_strategy, PStrategyUsed::None);
        assert!(r.p_value.is_none() && r.p_detail.is_none());
        assert!(r.significance.significant.is_none());
        assert!(r.significance.large_effect);
        assert_eq!(
            r.counts,
            Counts {
                x: 1,
                y: None,
                a: 2,
                b: 2
            }
        );
    }

    #[test]
    fn normal_tail_rounds_up() {
        // sf(0) = 0.5 exactly
        assert_eq!(normal_upper_tail(0.0, 0.0, 1.0).unwrap(), 0.5);
        // sf(1.96) = 0.024997895..., rounded up to 0.0250
        assert_eq!(normal_upper_tail(1.96, 0.0, 1.0).unwrap(), 0.025);
        // sf(1) = 0.158655..., rounded up to 0.1587
        assert_eq!(normal_upper_tail(1.0, 0.0, 1.0).unwrap(), 0.1587);
        assert!(normal_upper_tail(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn resolve_partitions_in_order() {
        let set = EmbeddingSet::from_entries(
            2,
            [
                ("a", v(&[1.0, 0.0])),
                ("c", v(&[0.0, 1.0])),
                ("e", v(&[1.0, 1.0])),
            ],
        )
        .unwrap();
        let ws = WordSet::new("s", "en", ["a", "b", "c", "d", "e"]).unwrap();
        let r = resolve(&ws, &set, &LookupPolicy::default());
        assert_eq!(r.found_words, vec!["a", "c", "e"]);
        assert_eq!(r.missing, vec!["b", "d"]);
        assert_eq!(r.len(), 3);
    }
}
