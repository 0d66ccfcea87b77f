//! Correlation, dispersion and the seeded sampler behind the Monte Carlo
//! permutation tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Divisor convention for variance and standard deviation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceMode {
    /// Divide by n.
    Population,
    /// Divide by n - 1.
    Sample,
}

impl VarianceMode {
    fn min_len(self) -> usize {
        match self {
            VarianceMode::Population => 1,
            VarianceMode::Sample => 2,
        }
    }
}

/// Two equally long series of finite reals, n >= 2.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PairedSample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Invalid(format!(
                "paired sample lengths differ: {} vs {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::Insufficient {
                what: "correlation",
                needed: 2,
                got: xs.len(),
            });
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Invalid(
                "paired sample contains non-finite values".into(),
            ));
        }
        Ok(PairedSample { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Sum that does not depend on the order of `values`: the terms are sorted
/// and accumulated with Neumaier compensation.
pub(crate) fn ordered_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in sorted {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn ordered_mean(values: &[f64]) -> f64 {
    ordered_sum(values) / values.len() as f64
}

/// Pearson product-moment correlation.
pub fn pearson(sample: &PairedSample) -> Result<f64> {
    let (xs, ys) = (sample.xs(), sample.ys());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("first series"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("second series"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the average of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson on average ranks. Without ties the
/// closed form `1 - 6 Σd² / (n (n² - 1))` is used, which is exact because
/// the rank differences are integers.
pub fn spearman(sample: &PairedSample) -> Result<f64> {
    let ranked = PairedSample {
        xs: average_ranks(sample.xs()),
        ys: average_ranks(sample.ys()),
    };
    let untied = |r: &[f64]| r.iter().all(|v| v.fract() == 0.0) && distinct(r);
    if untied(&ranked.xs) && untied(&ranked.ys) {
        let n = ranked.len() as f64;
        let d2: f64 = ranked
            .xs
            .iter()
            .zip(&ranked.ys)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        return Ok(1.0 - 6.0 * d2 / (n * (n * n - 1.0)));
    }
    pearson(&ranked)
}

fn distinct(ranks: &[f64]) -> bool {
    let mut seen = vec![false; ranks.len()];
    ranks
        .iter()
        .all(|&r| !std::mem::replace(&mut seen[r as usize - 1], true))
}

/// Variance with divisor n (population) or n - 1 (sample). The result does
/// not depend on the order of `values`.
pub fn variance(values: &[f64], mode: VarianceMode) -> Result<f64> {
    if values.len() < mode.min_len() {
        return Err(Error::Insufficient {
            what: "variance",
            needed: mode.min_len(),
            got: values.len(),
        });
    }
    let mean = ordered_mean(values);
    let squares: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let divisor = match mode {
        VarianceMode::Population => values.len(),
        VarianceMode::Sample => values.len() - 1,
    };
    Ok(ordered_sum(&squares) / divisor as f64)
}

pub fn stddev(values: &[f64], mode: VarianceMode) -> Result<f64> {
    variance(values, mode).map(f64::sqrt)
}

/// Name of the generator behind [`SeededSampler`], recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha20";

/// Deterministic random source keyed by `(seed, stream_id)`.
///
/// Each stream can be cut into independent substreams (used for chunked
/// parallel sampling); the sequence produced by a given
/// `(seed, stream_id, substream)` never depends on thread scheduling.
#[derive(Clone, Debug)]
pub struct SeededSampler {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl SeededSampler {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        SeededSampler {
            seed,
            stream_id,
            rng,
        }
    }

    /// A sampler positioned at the start of substream `index`. Substreams
    /// are 2^48 words apart.
    pub fn substream(seed: u64, stream_id: u64, index: u64) -> Self {
        let mut s = SeededSampler::new(seed, stream_id);
        s.rng.set_word_pos((index as u128) << 48);
        s
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// Uniform integer in `[lo, hi)`; uses 32-bit draws so the sequence is
    /// the same on every platform.
    pub fn below(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo as u32..hi as u32) as usize
    }

    /// Moves a uniformly random `k`-subset of `items` to the front
    /// (partial Fisher-Yates).
    pub fn choose_front<T>(&mut self, items: &mut [T], k: usize) {
        let n = items.len();
        for i in 0..k.min(n.saturating_sub(1)) {
            let j = self.below(i, n);
            items.swap(i, j);
        }
    }
}
