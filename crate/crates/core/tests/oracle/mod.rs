//! Brute-force reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the library: cosines, means,
//! standard deviations, partition enumeration and the reference sampler are
//! all recomputed from raw vectors with the most literal formulas.

#![allow(dead_code)]

pub fn cos(u: &[f64], v: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for i in 0..u.len() {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    dot / (nu.sqrt() * nv.sqrt())
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// `sample = true` divides by n - 1.
pub fn std_dev(xs: &[f64], sample: bool) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    let d = if sample { xs.len() - 1 } else { xs.len() } as f64;
    (ss / d).sqrt()
}

/// s(w, A, B)
pub fn assoc(w: &[f64], a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let ca: Vec<f64> = a.iter().map(|x| cos(w, x)).collect();
    let cb: Vec<f64> = b.iter().map(|x| cos(w, x)).collect();
    mean(&ca) - mean(&cb)
}

pub fn sc_weat_es(w: &[f64], a: &[Vec<f64>], b: &[Vec<f64>], sample: bool) -> f64 {
    let all: Vec<f64> = a.iter().chain(b.iter()).map(|x| cos(w, x)).collect();
    assoc(w, a, b) / std_dev(&all, sample)
}

pub fn weat_es(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    sample: bool,
) -> f64 {
    let sx: Vec<f64> = x.iter().map(|w| assoc(w, a, b)).collect();
    let sy: Vec<f64> = y.iter().map(|w| assoc(w, a, b)).collect();
    let all: Vec<f64> = sx.iter().chain(sy.iter()).copied().collect();
    (mean(&sx) - mean(&sy)) / std_dev(&all, sample)
}

/// Tie window used when counting "strictly greater" partitions.
pub const TIE: f64 = 1e-12;

/// Exact counts (greater, total) for the WEAT permutation test over every
/// equal-size split of X ∪ Y, enumerated as bitmasks.
pub fn weat_exact_counts(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    a: &[Vec<f64>],
    b: &[Vec<f64>],
) -> (u64, u64) {
    let pooled: Vec<&Vec<f64>> = x.iter().chain(y.iter()).collect();
    let n = pooled.len();
    let m = x.len();
    let stat = |xi: &[&Vec<f64>], yi: &[&Vec<f64>]| {
        let sx: Vec<f64> = xi.iter().map(|w| assoc(w, a, b)).collect();
        let sy: Vec<f64> = yi.iter().map(|w| assoc(w, a, b)).collect();
        mean(&sx) - mean(&sy)
    };
    let observed = stat(&pooled[..m], &pooled[m..]);
    let mut greater = 0;
    let mut total = 0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let xi: Vec<&Vec<f64>> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| pooled[i])
            .collect();
        let yi: Vec<&Vec<f64>> = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| pooled[i])
            .collect();
        total += 1;
        if stat(&xi, &yi) > observed + TIE {
            greater += 1;
        }
    }
    (greater, total)
}

/// Exact counts (greater, total) for the SC-WEAT permutation test over every
/// equal-size split of A ∪ B.
pub fn sc_weat_exact_counts(w: &[f64], a: &[Vec<f64>], b: &[Vec<f64>]) -> (u64, u64) {
    let pooled: Vec<Vec<f64>> = a.iter().chain(b.iter()).cloned().collect();
    let n = pooled.len();
    let m = a.len();
    let observed = assoc(w, a, b);
    let mut greater = 0;
    let mut total = 0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let ai: Vec<Vec<f64>> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| pooled[i].clone())
            .collect();
        let bi: Vec<Vec<f64>> = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| pooled[i].clone())
            .collect();
        total += 1;
        if assoc(w, &ai, &bi) > observed + TIE {
            greater += 1;
        }
    }
    (greater, total)
}

/// SplitMix64: a tiny generator that is deliberately unrelated to the
/// library's sampler.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        (self.unit() * n as f64) as usize
    }

    /// Standard normal via Box-Muller.
    pub fn gauss(&mut self) -> f64 {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

pub fn random_vectors(rng: &mut SplitMix, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gauss()).collect())
        .collect()
}

/// Monte Carlo reference p-value for SC-WEAT: full Fisher-Yates shuffles of
/// the pooled cosines, split at |A|.
pub fn sc_weat_mc_reference(
    w: &[f64],
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    samples: usize,
    seed: u64,
) -> f64 {
    let mut pooled: Vec<f64> = a.iter().chain(b.iter()).map(|x| cos(w, x)).collect();
    let m = a.len();
    let observed = mean(&pooled[..m]) - mean(&pooled[m..]);
    let mut rng = SplitMix(seed);
    let mut greater = 0usize;
    for _ in 0..samples {
        for i in (1..pooled.len()).rev() {
            let j = rng.below(i + 1);
            pooled.swap(i, j);
        }
        let s = mean(&pooled[..m]) - mean(&pooled[m..]);
        if s > observed + TIE {
            greater += 1;
        }
    }
    greater as f64 / samples as f64
}

/// Pearson correlation straight from the textbook definition.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..xs.len() {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx).powi(2);
        syy += (ys[i] - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// The 20-angle synthetic ValNorm geometry: targets on the unit circle,
/// pleasant/unpleasant attributes jittered around +e1 / -e1.
pub struct AngleFixture {
    pub targets: Vec<(String, Vec<f64>)>,
    pub pleasant: Vec<(String, Vec<f64>)>,
    pub unpleasant: Vec<(String, Vec<f64>)>,
    /// Oracle SC-WEAT effect size per target (sample std-dev).
    pub scores: Vec<f64>,
}

pub fn angle_fixture(seed: u64) -> AngleFixture {
    let mut rng = SplitMix(seed);
    let targets: Vec<(String, Vec<f64>)> = (0..20)
        .map(|i| {
            let alpha = 0.1 + i as f64 * (std::f64::consts::PI - 0.2) / 19.0;
            (format!("target{i:02}"), vec![alpha.cos(), alpha.sin()])
        })
        .collect();
    let jitter = |rng: &mut SplitMix, sign: f64| vec![sign + 0.3 * rng.gauss(), 0.3 * rng.gauss()];
    let pleasant: Vec<(String, Vec<f64>)> = (0..8)
        .map(|i| (format!("good{i}"), jitter(&mut rng, 1.0)))
        .collect();
    let unpleasant: Vec<(String, Vec<f64>)> = (0..8)
        .map(|i| (format!("bad{i}"), jitter(&mut rng, -1.0)))
        .collect();
    let a: Vec<Vec<f64>> = pleasant.iter().map(|(_, v)| v.clone()).collect();
    let b: Vec<Vec<f64>> = unpleasant.iter().map(|(_, v)| v.clone()).collect();
    let scores = targets
        .iter()
        .map(|(_, v)| sc_weat_es(v, &a, &b, true))
        .collect();
    AngleFixture {
        targets,
        pleasant,
        unpleasant,
        scores,
    }
}

/// Writes `word v1 v2 ...` lines (GloVe layout) with full precision.
pub fn write_glove(path: &std::path::Path, rows: &[(String, Vec<f64>)]) {
    use std::fmt::Write;
    let mut out = String::new();
    for (w, v) in rows {
        out.push_str(w);
        for x in v {
            write!(out, " {x:?}").unwrap();
        }
        out.push('\n');
    }
    std::fs::write(path, out).unwrap();
}

impl AngleFixture {
    pub fn rows(&self) -> Vec<(String, Vec<f64>)> {
        self.targets
            .iter()
            .chain(&self.pleasant)
            .chain(&self.unpleasant)
            .cloned()
            .collect()
    }

    /// `word,score` lines with the oracle scores mapped affinely into [1, 9].
    pub fn lexicon_csv(&self) -> String {
        let mut out = String::from("word,valence\n");
        for ((w, _), s) in self.targets.iter().zip(&self.scores) {
            out.push_str(&format!("{w},{:?}\n", 5.0 + 2.0 * s));
        }
        out
    }
}

pub fn population_variance(xs: &[f64]) -> f64 {
    let s = std_dev(xs, false);
    s * s
}
