//! Algebraic properties of the association and correlation code, each
//! runnable for a chosen number of random cases.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use valnorm::association::{
    sc_weat, sc_weat_effect_size, weat_effect_size, PDetail, PValueConfig, PValueStrategy,
};
use valnorm::reports::aggregate_variance;
use valnorm::stats::{pearson, spearman, PairedSample, VarianceMode};
use valnorm::vectorspace::cosine;

fn vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim).prop_filter("near-zero vector", |v| {
        v.iter().map(|x| x * x).sum::<f64>() > 1e-4
    })
}

fn vectors(dim: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(vector(dim), n)
}

/// Target word plus attribute sets A and B.
fn sc_fixture() -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    (2usize..6, 2usize..6)
        .prop_flat_map(|(dim, m)| (vector(dim), vectors(dim, m..=m), vectors(dim, m..=m)))
}

type Sets = Vec<Vec<f64>>;

fn weat_fixture() -> impl Strategy<Value = (Sets, Sets, Sets, Sets)> {
    (2usize..6).prop_flat_map(|dim| {
        (2usize..5).prop_flat_map(move |m| {
            (
                vectors(dim, m..=m),
                vectors(dim, m..=m),
                vectors(dim, 2..=5),
                vectors(dim, 2..=5),
            )
        })
    })
}

fn exact() -> PValueConfig {
    PValueConfig {
        strategy: PValueStrategy::Exact,
        ..PValueConfig::default()
    }
}

fn scale(vs: &[Vec<f64>], c: f64) -> Vec<Vec<f64>> {
    vs.iter()
        .map(|v| v.iter().map(|x| x * c).collect())
        .collect()
}

fn exact_counts(r: &valnorm::association::AssociationResult) -> (u64, u64, u64) {
    match r.p_detail {
        Some(PDetail::Exact {
            partitions,
            greater,
            ties,
        }) => (partitions, greater, ties),
        _ => panic!("exact detail expected"),
    }
}

fn spread(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>()
}

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new(config)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

pub fn sc_weat_is_antisymmetric_in_attributes(cases: u32) -> Result<(), String> {
    check(cases, sc_fixture(), |(w, a, b)| {
        let fwd = sc_weat_effect_size(&w, &a, &b, VarianceMode::Sample);
        prop_assume!(fwd.is_ok());
        let rev = sc_weat_effect_size(&w, &b, &a, VarianceMode::Sample).unwrap();
        prop_assert!((fwd.unwrap() + rev).abs() <= 1e-12);
        Ok(())
    })
}

pub fn weat_is_antisymmetric_in_targets_and_attributes(cases: u32) -> Result<(), String> {
    check(cases, weat_fixture(), |(x, y, a, b)| {
        let d = weat_effect_size(&x, &y, &a, &b, VarianceMode::Sample);
        prop_assume!(d.is_ok());
        let d = d.unwrap();
        let dxy = weat_effect_size(&y, &x, &a, &b, VarianceMode::Sample).unwrap();
        let dab = weat_effect_size(&x, &y, &b, &a, VarianceMode::Sample).unwrap();
        prop_assert!((d + dxy).abs() <= 1e-12);
        prop_assert!((d + dab).abs() <= 1e-12);
        Ok(())
    })
}

pub fn cosine_is_scale_invariant(cases: u32) -> Result<(), String> {
    check(
        cases,
        (
            (2usize..8).prop_flat_map(|d| (vector(d), vector(d))),
            0.01f64..100.0,
        ),
        |((u, v), c)| {
            let base = cosine(&u, &v).unwrap();
            let su: Vec<f64> = u.iter().map(|x| x * c).collect();
            prop_assert!((cosine(&su, &v).unwrap() - base).abs() <= 1e-12);
            Ok(())
        },
    )
}

pub fn sc_weat_is_scale_invariant(cases: u32) -> Result<(), String> {
    check(cases, (sc_fixture(), 0.01f64..100.0), |((w, a, b), c)| {
        let base = sc_weat(&w, &a, &b, Some(&exact()), VarianceMode::Sample);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let sw: Vec<f64> = w.iter().map(|x| x * c).collect();
        let scaled = sc_weat(
            &sw,
            &scale(&a, c),
            &scale(&b, 1.0 / c),
            Some(&exact()),
            VarianceMode::Sample,
        )
        .unwrap();
        prop_assert!((scaled.effect_size - base.effect_size).abs() <= 1e-12);
        prop_assert!((scaled.p_value.unwrap() - base.p_value.unwrap()).abs() <= 1e-12);
        Ok(())
    })
}

pub fn weat_is_scale_invariant(cases: u32) -> Result<(), String> {
    check(
        cases,
        (weat_fixture(), 0.01f64..100.0),
        |((x, y, a, b), c)| {
            let cfg = exact();
            let base =
                valnorm::association::weat(&x, &y, &a, &b, Some(&cfg), VarianceMode::Population);
            prop_assume!(base.is_ok());
            let base = base.unwrap();
            let scaled = valnorm::association::weat(
                &scale(&x, c),
                &scale(&y, c),
                &scale(&a, c),
                &scale(&b, c),
                Some(&cfg),
                VarianceMode::Population,
            )
            .unwrap();
            prop_assert!((scaled.effect_size - base.effect_size).abs() <= 1e-12);
            prop_assert!((scaled.p_value.unwrap() - base.p_value.unwrap()).abs() <= 1e-12);
            Ok(())
        },
    )
}

pub fn reordering_a_set_changes_nothing(cases: u32) -> Result<(), String> {
    check(
        cases,
        (sc_fixture(), 0usize..5, 0usize..5),
        |((w, a, b), rot_a, rot_b)| {
            let base = sc_weat(&w, &a, &b, Some(&exact()), VarianceMode::Sample);
            prop_assume!(base.is_ok());
            let base = base.unwrap();
            let mut a2 = a.clone();
            let mut b2 = b.clone();
            a2.rotate_left(rot_a % a.len());
            b2.reverse();
            b2.rotate_left(rot_b % b.len());
            let moved = sc_weat(&w, &a2, &b2, Some(&exact()), VarianceMode::Sample).unwrap();
            prop_assert_eq!(moved.effect_size, base.effect_size);
            prop_assert_eq!(exact_counts(&moved), exact_counts(&base));
            Ok(())
        },
    )
}

pub fn reordering_targets_changes_nothing(cases: u32) -> Result<(), String> {
    check(cases, weat_fixture(), |(x, y, a, b)| {
        let base = weat_effect_size(&x, &y, &a, &b, VarianceMode::Sample);
        prop_assume!(base.is_ok());
        let mut x2 = x.clone();
        x2.reverse();
        let mut a2 = a.clone();
        a2.rotate_left(1);
        prop_assert_eq!(
            weat_effect_size(&x2, &y, &a2, &b, VarianceMode::Sample).unwrap(),
            base.unwrap()
        );
        Ok(())
    })
}

pub fn swapped_attributes_partition_the_null(cases: u32) -> Result<(), String> {
    check(cases, sc_fixture(), |(w, a, b)| {
        let fwd = sc_weat(&w, &a, &b, Some(&exact()), VarianceMode::Sample);
        prop_assume!(fwd.is_ok());
        let rev = sc_weat(&w, &b, &a, Some(&exact()), VarianceMode::Sample).unwrap();
        let (n, g1, t1) = exact_counts(&fwd.unwrap());
        let (_, g2, t2) = exact_counts(&rev);
        prop_assert_eq!(t1, t2);
        prop_assert_eq!(g1 + g2 + t1, n);
        Ok(())
    })
}

pub fn pearson_is_affine_invariant(cases: u32) -> Result<(), String> {
    check(
        cases,
        (
            prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..40),
            prop_oneof![0.1f64..10.0, -10.0f64..-0.1],
            -100.0f64..100.0,
        ),
        |(pairs, slope, shift)| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            prop_assume!(spread(&xs) > 1.0 && spread(&ys) > 1.0);
            let base = pearson(&PairedSample::new(xs.clone(), ys.clone()).unwrap()).unwrap();
            let moved: Vec<f64> = xs.iter().map(|x| slope * x + shift).collect();
            let r = pearson(&PairedSample::new(moved, ys).unwrap()).unwrap();
            prop_assert!(
                (r - slope.signum() * base).abs() <= 1e-12,
                "{} vs {}",
                r,
                base
            );
            Ok(())
        },
    )
}

pub fn spearman_is_monotone_invariant(cases: u32) -> Result<(), String> {
    check(
        cases,
        prop::collection::vec((-500i32..500, -500i32..500), 3..40),
        |pairs| {
            let xs: Vec<f64> = pairs.iter().map(|p| p.0 as f64 / 10.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1 as f64 / 10.0).collect();
            prop_assume!(spread(&xs) > 0.0 && spread(&ys) > 0.0);
            let base = spearman(&PairedSample::new(xs.clone(), ys.clone()).unwrap()).unwrap();
            let cubed: Vec<f64> = xs.iter().map(|x| x * x * x + x).collect();
            let squashed: Vec<f64> = ys.iter().map(|y| (y / 10.0).exp()).collect();
            prop_assert_eq!(
                spearman(&PairedSample::new(cubed, squashed).unwrap()).unwrap(),
                base
            );
            Ok(())
        },
    )
}

pub fn monotone_linkage_gives_perfect_rank_correlation(cases: u32) -> Result<(), String> {
    check(
        cases,
        (prop::collection::btree_set(-1000i32..1000, 3..60), 1u32..4),
        |(xs, power)| {
            // Human scores as a strictly increasing function of the effect sizes.
            let xs: Vec<f64> = xs.into_iter().rev().map(|x| x as f64 / 100.0).collect();
            let ys: Vec<f64> = xs
                .iter()
                .map(|x| x.powi(2 * power as i32 + 1) + 3.0 * x)
                .collect();
            prop_assert_eq!(spearman(&PairedSample::new(xs, ys).unwrap()).unwrap(), 1.0);
            Ok(())
        },
    )
}

pub fn variance_report_ignores_run_order(cases: u32) -> Result<(), String> {
    check(
        cases,
        (prop::collection::vec(-2.0f64..2.0, 2..10), 0usize..10),
        |(effects, rot)| {
            let runs: Vec<(String, valnorm::association::AssociationResult)> = effects
                .iter()
                .enumerate()
                .map(|(i, &d)| {
                    let w = vec![1.0, d];
                    let a = vec![vec![1.0, 0.0], vec![1.0, 0.5]];
                    let b = vec![vec![0.0, 1.0], vec![0.3, 1.0]];
                    let mut r = sc_weat(&w, &a, &b, None, VarianceMode::Sample).unwrap();
                    r.effect_size = d;
                    (format!("run{i}"), r)
                })
                .collect();
            let base = aggregate_variance("bias", &runs, VarianceMode::Population).unwrap();
            let mut moved = runs.clone();
            moved.rotate_left(rot % runs.len());
            moved.reverse();
            let again = aggregate_variance("bias", &moved, VarianceMode::Population).unwrap();
            prop_assert_eq!(again.variance, base.variance);
            Ok(())
        },
    )
}

pub type Property = fn(u32) -> Result<(), String>;

/// Every property with its name, in a fixed order.
pub const ALL: &[(&str, Property)] = &[
    (
        "sc_weat_is_antisymmetric_in_attributes",
        sc_weat_is_antisymmetric_in_attributes,
    ),
    (
        "weat_is_antisymmetric_in_targets_and_attributes",
        weat_is_antisymmetric_in_targets_and_attributes,
    ),
    ("cosine_is_scale_invariant", cosine_is_scale_invariant),
    ("sc_weat_is_scale_invariant", sc_weat_is_scale_invariant),
    ("weat_is_scale_invariant", weat_is_scale_invariant),
    (
        "reordering_a_set_changes_nothing",
        reordering_a_set_changes_nothing,
    ),
    (
        "reordering_targets_changes_nothing",
        reordering_targets_changes_nothing,
    ),
    (
        "swapped_attributes_partition_the_null",
        swapped_attributes_partition_the_null,
    ),
    ("pearson_is_affine_invariant", pearson_is_affine_invariant),
    (
        "spearman_is_monotone_invariant",
        spearman_is_monotone_invariant,
    ),
    (
        "monotone_linkage_gives_perfect_rank_correlation",
        monotone_linkage_gives_perfect_rank_correlation,
    ),
    (
        "variance_report_ignores_run_order",
        variance_report_ignores_run_order,
    ),
];
