//! Sparse signal from its autocorrelation.
//!
//! Supports are rebuilt turnpike-style: the largest nonzero lag `D` pins the
//! extreme support points `0` and `D`, and the remaining `k - 2` points are
//! enumerated and pruned against the set of nonzero lags. Values on a
//! surviving support are fitted to the lag equations
//! `a(l) = sum_{p_j - p_i = l} v_i v_j`:
//!
//! * `k = 2`: `v_0 ± v_1 = sqrt(a(0) ± 2a(D))`.
//! * all pairwise support differences distinct, `k >= 3`: every lag is a
//!   single product, so `log|v_i| + log|v_j| = log|a(p_j - p_i)|` is a linear
//!   least-squares problem and the signs follow from the lags to `p_0`.
//! * otherwise: Levenberg–Marquardt from every sign pattern of the uniform
//!   start `sqrt(a(0) / k)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::complement::{binomial, unrank_combination};
use crate::error::{Error, Result};
use crate::linalg::lstsq;
use crate::signal::{
    autocorrelation, canonicalize_in, equivalent_under_invariances, Autocorrelation,
    InvarianceGroup, RealSignal, ShiftMode,
};

/// Shifts stay linear here: a wrapped signal has a different (linear)
/// autocorrelation.
pub const SIGNAL_GROUP: InvarianceGroup = InvarianceGroup::Full(ShiftMode::Linear);

#[derive(Debug, Clone, PartialEq)]
pub struct TurnpikeOptions {
    /// Residual tolerance relative to `|a|_2`.
    pub residual_rtol: f64,
    /// Lags with `|a(l)| <= lag_rtol * a(0)` count as zero.
    pub lag_rtol: f64,
    pub max_supports: u128,
    pub lm_iterations: usize,
}

impl Default for TurnpikeOptions {
    fn default() -> Self {
        TurnpikeOptions {
            residual_rtol: 1e-8,
            lag_rtol: 1e-8,
            max_supports: 2_000_000,
            lm_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalRecovery {
    /// Canonical representative (sign, mirror, non-wrapping shift).
    pub signal: RealSignal,
    /// Further solutions, pairwise inequivalent, in canonical form.
    pub alternates: Vec<RealSignal>,
    /// `|autocorrelation(signal) - a|_2`.
    pub residual: f64,
    pub supports_examined: u64,
}

impl SignalRecovery {
    /// Whether inequivalent signals share the autocorrelation.
    pub fn multiple(&self) -> bool {
        !self.alternates.is_empty()
    }
}

pub fn signal_from_autocorrelation(a: &Autocorrelation, k: usize) -> Result<SignalRecovery> {
    signal_from_autocorrelation_with(a, k, &TurnpikeOptions::default())
}

pub fn signal_from_autocorrelation_with(
    a: &Autocorrelation,
    k: usize,
    opts: &TurnpikeOptions,
) -> Result<SignalRecovery> {
    let m = a.signal_len();
    let a0 = a.lag(0);
    if a0 < 0.0 {
        return Err(Error::NegativeEnergy(a0));
    }
    let anorm = a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
    let asym = a.max_asymmetry();
    if asym > opts.residual_rtol * anorm {
        return Err(Error::NotCentroSymmetric(asym));
    }
    if k > m {
        return Err(Error::InvalidArgument(format!(
            "sparsity {k} exceeds signal length {m}"
        )));
    }
    let thr = opts.lag_rtol * a0;
    let nonzero: Vec<bool> = (0..m).map(|l| a.lag(l as isize).abs() > thr).collect();

    if k == 0 || a0 == 0.0 {
        if k == 0 && anorm == 0.0 {
            return Ok(SignalRecovery {
                signal: RealSignal::zeros(m),
                alternates: Vec::new(),
                residual: 0.0,
                supports_examined: 1,
            });
        }
        return Err(Error::NoSolution(k));
    }
    let d = (1..m).rev().find(|&l| nonzero[l]).unwrap_or(0);
    if k == 1 || d == 0 {
        if k != 1 || d != 0 {
            return Err(Error::NoSolution(k));
        }
        let mut v = vec![0.0; m];
        v[0] = a0.sqrt();
        return Ok(finish(vec![RealSignal::new(v)], a, 1));
    }
    if k > d + 1 {
        return Err(Error::NoSolution(k));
    }

    let interior = binomial(d - 1, k - 2);
    if interior > opts.max_supports {
        return Err(Error::CapExceeded {
            what: "candidate supports",
            value: interior,
            cap: opts.max_supports,
        });
    }
    let tol = opts.residual_rtol * anorm;
    let found: Vec<RealSignal> = (0..interior)
        .into_par_iter()
        .flat_map_iter(|r| {
            let mut supp: Vec<usize> = Vec::with_capacity(k);
            supp.push(0);
            supp.extend(unrank_combination(d - 1, k - 2, r).into_iter().map(|p| p + 1));
            supp.push(d);
            let sols = if consistent_support(&supp, &nonzero) {
                solve_values(&supp, a, m, tol, opts)
            } else {
                Vec::new()
            };
            sols.into_iter()
        })
        .collect();
    if found.is_empty() {
        return Err(Error::NoSolution(k));
    }
    Ok(finish(found, a, interior as u64))
}

fn finish(found: Vec<RealSignal>, a: &Autocorrelation, examined: u64) -> SignalRecovery {
    let mut distinct: Vec<RealSignal> = Vec::new();
    for x in found {
        if !distinct
            .iter()
            .any(|y| equivalent_under_invariances(y, &x, SIGNAL_GROUP))
        {
            distinct.push(x);
        }
    }
    let mut canon: Vec<RealSignal> = distinct
        .iter()
        .map(|x| canonicalize_in(x, SIGNAL_GROUP).0)
        .collect();
    let signal = canon.remove(0);
    let residual = lag_residual(&signal, a);
    SignalRecovery {
        signal,
        alternates: canon,
        residual,
        supports_examined: examined,
    }
}

fn lag_residual(x: &RealSignal, a: &Autocorrelation) -> f64 {
    autocorrelation(x)
        .as_slice()
        .iter()
        .zip(a.as_slice())
        .map(|(u, v)| (u - v).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Necessary conditions on a support: every nonzero lag is a support
/// difference, and every difference realised by a single pair has a
/// nonzero lag (it equals the product of two nonzeros).
fn consistent_support(supp: &[usize], nonzero: &[bool]) -> bool {
    let mut hits = vec![0u32; nonzero.len()];
    for (b, &j) in supp.iter().enumerate() {
        for &i in &supp[..b] {
            hits[j - i] += 1;
        }
    }
    (1..nonzero.len()).all(|l| {
        if nonzero[l] {
            hits[l] > 0
        } else {
            hits[l] != 1
        }
    })
}

/// Pairs `(i, j)` of support slots, `i < j`, grouped by lag.
struct LagEquations {
    lags: Vec<usize>,
    pairs: Vec<Vec<(usize, usize)>>,
    targets: Vec<f64>,
}

impl LagEquations {
    fn new(supp: &[usize], a: &Autocorrelation) -> Self {
        let mut lags: Vec<usize> = vec![0];
        let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for j in 0..supp.len() {
            for i in 0..j {
                let l = supp[j] - supp[i];
                match lags.iter().position(|&x| x == l) {
                    Some(p) => pairs[p].push((i, j)),
                    None => {
                        lags.push(l);
                        pairs.push(vec![(i, j)]);
                    }
                }
            }
        }
        let targets = lags.iter().map(|&l| a.lag(l as isize)).collect();
        LagEquations {
            lags,
            pairs,
            targets,
        }
    }

    fn residual(&self, v: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.lags.len(),
            (0..self.lags.len()).map(|e| {
                let model = if e == 0 {
                    v.iter().map(|x| x * x).sum()
                } else {
                    self.pairs[e].iter().map(|&(i, j)| v[i] * v[j]).sum::<f64>()
                };
                model - self.targets[e]
            }),
        )
    }

    fn jacobian(&self, v: &[f64]) -> DMatrix<f64> {
        let mut jm = DMatrix::zeros(self.lags.len(), v.len());
        for (i, x) in v.iter().enumerate() {
            jm[(0, i)] = 2.0 * x;
        }
        for e in 1..self.lags.len() {
            for &(i, j) in &self.pairs[e] {
                jm[(e, i)] += v[j];
                jm[(e, j)] += v[i];
            }
        }
        jm
    }

    fn all_single(&self) -> bool {
        self.pairs[1..].iter().all(|p| p.len() == 1)
    }
}

fn levenberg_marquardt(eq: &LagEquations, start: Vec<f64>, tol: f64, iters: usize) -> Vec<f64> {
    let mut v = start;
    let mut r = eq.residual(&v);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..iters {
        if cost.sqrt() <= 1e-3 * tol {
            break;
        }
        let jm = eq.jacobian(&v);
        let jtj = jm.transpose() * &jm;
        let g = jm.transpose() * &r;
        let mut h = jtj.clone();
        for i in 0..h.nrows() {
            h[(i, i)] += lambda * (jtj[(i, i)] + 1e-12);
        }
        let step = match h.cholesky() {
            Some(c) => c.solve(&(-&g)),
            None => {
                lambda *= 10.0;
                continue;
            }
        };
        let cand: Vec<f64> = v.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        let rc = eq.residual(&cand);
        let cc = rc.norm_squared();
        if cc < cost {
            v = cand;
            r = rc;
            cost = cc;
            lambda = (lambda / 3.0).max(1e-15);
        } else {
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    v
}

fn solve_values(
    supp: &[usize],
    a: &Autocorrelation,
    m: usize,
    tol: f64,
    opts: &TurnpikeOptions,
) -> Vec<RealSignal> {
    let k = supp.len();
    let eq = LagEquations::new(supp, a);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if k == 2 {
        // (v0 + v1)^2 = a(0) + 2a(D) and (v0 - v1)^2 = a(0) - 2a(D); values
        // within the lag tolerance of zero are rounding noise
        let (a0, ad) = (a.lag(0), a.lag(supp[1] as isize));
        let snap = opts.lag_rtol * a0;
        let root = |t: f64| -> Option<f64> {
            if t < -snap {
                None
            } else if t <= snap {
                Some(0.0)
            } else {
                Some(t.sqrt())
            }
        };
        let (Some(sum), Some(diff)) = (root(a0 + 2.0 * ad), root(a0 - 2.0 * ad)) else {
            return Vec::new();
        };
        starts.push(vec![0.5 * (sum + diff), 0.5 * (sum - diff)]);
    } else if eq.all_single() {
        let pairs: Vec<(usize, usize, f64)> = eq.pairs[1..]
            .iter()
            .zip(&eq.targets[1..])
            .map(|(p, t)| (p[0].0, p[0].1, *t))
            .collect();
        if pairs.iter().any(|p| p.2 == 0.0) {
            return Vec::new();
        }
        let design = DMatrix::from_fn(pairs.len(), k, |r, c| {
            if c == pairs[r].0 || c == pairs[r].1 {
                1.0
            } else {
                0.0
            }
        });
        let rhs = DVector::from_iterator(pairs.len(), pairs.iter().map(|p| p.2.abs().ln()));
        let (u, _) = lstsq(&design, &rhs);
        let mut v = vec![0.0; k];
        v[0] = u[0].exp();
        for q in 1..k {
            let lag = a.lag((supp[q] - supp[0]) as isize);
            v[q] = lag.signum() * u[q].exp();
        }
        starts.push(v);
    } else {
        let mag = (a.lag(0) / k as f64).sqrt();
        for p in 0..1u64 << (k - 1) {
            let v = (0..k)
                .map(|i| {
                    if i > 0 && p >> (i - 1) & 1 == 1 {
                        -mag
                    } else {
                        mag
                    }
                })
                .collect();
            starts.push(v);
        }
    }

    let mut out: Vec<RealSignal> = Vec::new();
    for s in starts {
        let v = levenberg_marquardt(&eq, s, tol, opts.lm_iterations);
        if v.iter().any(|x| *x == 0.0) {
            continue;
        }
        let mut full = vec![0.0; m];
        for (&p, x) in supp.iter().zip(&v) {
            full[p] = *x;
        }
        let x = RealSignal::new(full);
        if lag_residual(&x, a) <= tol
            && !out
                .iter()
                .any(|y| equivalent_under_invariances(y, &x, SIGNAL_GROUP))
        {
            out.push(x);
        }
    }
    out
}
