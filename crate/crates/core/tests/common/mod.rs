//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::RngCore;
use sparsepr::rng::{stream, uniform_below};
use sparsepr::{MeasurementEnsemble, RealSignal};

/// Small integer ensemble: rows of `{0, ±1}^m`, at most two nonzeros when
/// `m = 3`. Null spaces of such rows always contain a nonzero vector in
/// `{0, ±1}^m`, so the grid `{-2..2}^m` contains an ambiguous pair whenever
/// one exists.
pub fn grid_friendly_ensemble(m: usize, n: usize, seed: u64) -> (MeasurementEnsemble, Vec<Vec<i64>>) {
    let mut pool: Vec<Vec<i64>> = Vec::new();
    for code in 0..3usize.pow(m as u32) {
        let v: Vec<i64> = (0..m).map(|j| (code / 3usize.pow(j as u32) % 3) as i64 - 1).collect();
        let nnz = v.iter().filter(|x| **x != 0).count();
        if nnz > 0 && (m < 3 || nnz <= 2) {
            pool.push(v);
        }
    }
    let mut rng = stream(seed, 0);
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| pool[uniform_below(&mut rng, pool.len() as u64) as usize].clone())
        .collect();
    let real: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(|v| *v as f64).collect())
        .collect();
    (MeasurementEnsemble::from_real_rows(&real).unwrap(), rows)
}

pub fn grid(m: usize, r: i64) -> Vec<Vec<i64>> {
    let side = (2 * r + 1) as usize;
    (0..side.pow(m as u32))
        .map(|code| {
            (0..m)
                .map(|j| (code / side.pow(j as u32) % side) as i64 - r)
                .collect()
        })
        .collect()
}

pub fn exact_measure(rows: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    rows.iter()
        .map(|r| {
            let ip: i64 = r.iter().zip(x).map(|(a, b)| a * b).sum();
            ip * ip
        })
        .collect()
}

pub fn same_up_to_sign(a: &[i64], b: &[i64]) -> bool {
    a == b || a.iter().zip(b).all(|(x, y)| *x == -*y)
}

/// Grid signals bucketed by their exact measurements.
pub fn measurement_buckets(rows: &[Vec<i64>], m: usize, r: i64) -> HashMap<Vec<i64>, Vec<Vec<i64>>> {
    let mut map: HashMap<Vec<i64>, Vec<Vec<i64>>> = HashMap::new();
    for x in grid(m, r) {
        map.entry(exact_measure(rows, &x)).or_default().push(x);
    }
    map
}

/// An ambiguous pair on the grid, if any.
pub fn grid_ambiguity(rows: &[Vec<i64>], m: usize) -> Option<(Vec<i64>, Vec<i64>)> {
    for bucket in measurement_buckets(rows, m, 2).values() {
        for (i, a) in bucket.iter().enumerate() {
            for b in &bucket[i + 1..] {
                if !same_up_to_sign(a, b) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
    }
    None
}

pub fn to_signal(x: &[i64]) -> RealSignal {
    RealSignal::new(x.iter().map(|v| *v as f64).collect())
}

/// Rounds to the integer grid when every entry is within `tol`.
pub fn as_grid_point(x: &RealSignal, tol: f64) -> Option<Vec<i64>> {
    x.values()
        .iter()
        .map(|v| {
            let r = v.round();
            ((v - r).abs() <= tol && r.abs() <= 2.0).then_some(r as i64)
        })
        .collect()
}

pub fn sparsity(x: &[i64]) -> usize {
    x.iter().filter(|v| **v != 0).count()
}

/// The seeded set of 200 small ensembles used by the oracle comparisons.
pub fn oracle_ensembles() -> Vec<(usize, usize, u64)> {
    let mut rng = stream(0x5eed, 7);
    (0..200u64)
        .map(|i| {
            let m = 1 + (rng.next_u64() % 3) as usize;
            let n = 1 + (rng.next_u64() % 6) as usize;
            (m, n, 1000 + i)
        })
        .collect()
}

/// Compares the complement checker with the grid injectivity oracle and
/// `l0_recover` with exhaustive grid search on one ensemble. Returns a
/// description of the first disagreement.
pub fn oracle_disagreement(m: usize, n: usize, seed: u64) -> Option<String> {
    use sparsepr::lifted::{l0_recover_with, RecoveryOptions};
    use sparsepr::{has_complement_property, IntensityMeasurements};

    let (phi, rows) = grid_friendly_ensemble(m, n, seed);
    let holds = has_complement_property(&phi).unwrap().holds();
    let amb = grid_ambiguity(&rows, m);
    if holds != amb.is_none() {
        return Some(format!(
            "M={m} N={n} seed={seed}: checker says {holds}, grid pair {amb:?}"
        ));
    }

    let buckets = measurement_buckets(&rows, m, 2);
    let mut opts = RecoveryOptions::new(m);
    opts.check_certificate = false;
    for x0 in grid(m, 2) {
        let y = exact_measure(&rows, &x0);
        let members = &buckets[&y];
        let grid_min = members.iter().map(|x| sparsity(x)).min().unwrap();
        let yv = IntensityMeasurements::new(y.iter().map(|v| *v as f64).collect(), "grid").unwrap();
        let r = match l0_recover_with(&phi, &yv, &opts) {
            Ok(r) => r,
            Err(e) => return Some(format!("M={m} N={n} seed={seed} x0={x0:?}: {e}")),
        };
        if r.sparsity_found > grid_min || r.unverified {
            return Some(format!(
                "M={m} N={n} seed={seed} x0={x0:?}: l0 sparsity {} vs grid {grid_min}",
                r.sparsity_found
            ));
        }
        // grid members among the l0 solutions, up to sign
        let mut from_l0: Vec<Vec<i64>> = r
            .solution
            .iter()
            .chain(&r.alternates)
            .filter_map(|s| as_grid_point(s, 1e-6))
            .collect();
        let mut from_grid: Vec<Vec<i64>> = members
            .iter()
            .filter(|x| sparsity(x) == r.sparsity_found)
            .cloned()
            .collect();
        for set in [&mut from_l0, &mut from_grid] {
            for x in set.iter_mut() {
                // sign representative: first nonzero positive
                if x.iter().find(|v| **v != 0).is_some_and(|v| *v < 0) {
                    x.iter_mut().for_each(|v| *v = -*v);
                }
            }
            set.sort();
            set.dedup();
        }
        if from_l0 != from_grid {
            return Some(format!(
                "M={m} N={n} seed={seed} x0={x0:?}: l0 grid solutions {from_l0:?} vs grid {from_grid:?}"
            ));
        }
    }
    None
}
