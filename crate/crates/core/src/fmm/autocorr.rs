//! Sparse autocorrelation recovery from Fourier magnitude measurements.
//!
//! With `phi_n(j) = exp(-i pi k_n j / M)` over `j = 0..2M`, the measurement
//! `|<phi_n, [x; 0]>|^2` equals `<phi_n, q>` for the padded arrangement
//! `q = [a(0), .., a(M-1), 0, a(M-1), .., a(1)]` of the autocorrelation.
//! Recovery looks for the sparsest real `q` with `q(M) = 0` satisfying the
//! real and imaginary parts of these `N` equations.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::complement::{binomial, unrank_combination};
use crate::ensemble::{validate_freqs, IntensityMeasurements};
use crate::error::{Error, Result};
use crate::linalg::lstsq;
use crate::signal::Autocorrelation;

/// `q = [a(0), .., a(M-1), 0, a(M-1), .., a(1)]`, length `2M`.
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedAutocorrArrangement {
    q: Vec<f64>,
}

impl PaddedAutocorrArrangement {
    pub fn from_autocorrelation(a: &Autocorrelation) -> Self {
        let m = a.signal_len();
        let half = a.nonnegative_lags();
        let mut q = Vec::with_capacity(2 * m);
        q.extend_from_slice(half);
        q.push(0.0);
        q.extend(half[1..].iter().rev());
        PaddedAutocorrArrangement { q }
    }

    /// Wraps a raw length-`2M` vector. `q(M)` must be exactly zero; the
    /// mirror symmetry is not required.
    pub fn from_vec(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() || q.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "arrangement length must be even and positive, got {}",
                q.len()
            )));
        }
        let m = q.len() / 2;
        if q[m] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "arrangement entry {m} must be zero, got {}",
                q[m]
            )));
        }
        Ok(PaddedAutocorrArrangement { q })
    }

    pub fn signal_len(&self) -> usize {
        self.q.len() / 2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn sparsity(&self) -> usize {
        self.q.iter().filter(|v| **v != 0.0).count()
    }

    /// Largest `|q(j) - q(2M-j)|` over `j = 1..M`.
    pub fn max_asymmetry(&self) -> f64 {
        let m = self.signal_len();
        (1..m)
            .map(|j| (self.q[j] - self.q[2 * m - j]).abs())
            .fold(0.0, f64::max)
    }

    /// The autocorrelation read off the first half, after checking the
    /// mirror symmetry to within `rtol * max|q|`.
    pub fn to_autocorrelation(&self, rtol: f64) -> Result<Autocorrelation> {
        let scale = self.q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let asym = self.max_asymmetry();
        if asym > rtol * scale {
            return Err(Error::NotCentroSymmetric(asym));
        }
        let m = self.signal_len();
        let half: Vec<f64> = (0..m)
            .map(|j| if j == 0 { self.q[0] } else { 0.5 * (self.q[j] + self.q[2 * m - j]) })
            .collect();
        Autocorrelation::from_nonnegative_lags(&half)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryMethod {
    /// The linear system had full column rank: the solution is unique.
    Direct,
    /// Sparsest solutions found by support enumeration.
    Enumeration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrRecovery {
    pub arrangement: PaddedAutocorrArrangement,
    /// Other arrangements of the same sparsity satisfying the equations.
    pub alternates: Vec<PaddedAutocorrArrangement>,
    pub residual: f64,
    pub method: RecoveryMethod,
}

impl AutocorrRecovery {
    pub fn is_unique(&self) -> bool {
        self.alternates.is_empty()
    }

    pub fn candidates(&self) -> impl Iterator<Item = &PaddedAutocorrArrangement> {
        std::iter::once(&self.arrangement).chain(self.alternates.iter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrOptions {
    /// Largest arrangement sparsity searched.
    pub s_max: usize,
    /// Solve for `a(0..M)` directly, imposing the mirror symmetry.
    pub exploit_symmetry: bool,
    /// Residual tolerance relative to `|y|_2`.
    pub residual_rtol: f64,
    pub max_supports: u128,
}

impl AutocorrOptions {
    pub fn new(s_max: usize) -> Self {
        AutocorrOptions {
            s_max,
            exploit_symmetry: false,
            residual_rtol: 1e-8,
            max_supports: 5_000_000,
        }
    }
}

/// Real design matrix: for each frequency, one row for the real part and one
/// for the imaginary part of `<phi_n, q>` over the unknown positions
/// `j != M`.
fn full_system(m: usize, freqs: &[usize]) -> (DMatrix<f64>, Vec<usize>) {
    let cols: Vec<usize> = (0..2 * m).filter(|&j| j != m).collect();
    let mut a = DMatrix::zeros(2 * freqs.len(), cols.len());
    for (n, &k) in freqs.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            // conj(phi_n(j)) = exp(i pi k j / M)
            let w = crate::ensemble::unit_root(k * j, m).conj();
            a[(2 * n, c)] = w.re;
            a[(2 * n + 1, c)] = w.im;
        }
    }
    (a, cols)
}

/// Symmetric system in `a(0..M)`: `y = a(0) + 2 sum_l a(l) cos(pi k l / M)`.
fn symmetric_system(m: usize, freqs: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(freqs.len(), m, |n, l| {
        let c = crate::ensemble::unit_root(freqs[n] * l, m).re;
        if l == 0 {
            c
        } else {
            2.0 * c
        }
    })
}

/// All sparsest solutions of `a z = b` over the given supports, level by
/// level. `level(t)` lists the supports of cost `t`.
fn sparsest(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    tol: f64,
    levels: usize,
    level: &(dyn Fn(usize) -> Vec<Vec<usize>> + Sync),
) -> Option<Vec<(Vec<usize>, Vec<f64>)>> {
    for t in 0..=levels {
        let supports = level(t);
        let found: Vec<(Vec<usize>, Vec<f64>)> = supports
            .into_par_iter()
            .filter_map(|supp| {
                if supp.is_empty() {
                    return (b.norm() <= tol).then_some((supp, Vec::new()));
                }
                let sub = a.select_columns(&supp);
                let (z, rank) = lstsq(&sub, b);
                // a consistent rank-deficient support also admits a sparser
                // solution, already ruled out at a lower level
                if rank < supp.len() || (&sub * &z - b).norm() > tol {
                    return None;
                }
                Some((supp, z.iter().copied().collect()))
            })
            .collect();
        if !found.is_empty() {
            return Some(found);
        }
    }
    None
}

/// Sparsest padded autocorrelation arrangement consistent with `y`.
pub fn recover_autocorrelation(
    y: &IntensityMeasurements,
    freqs: &[usize],
    m: usize,
    opts: &AutocorrOptions,
) -> Result<AutocorrRecovery> {
    if m == 0 {
        return Err(Error::InvalidArgument("signal length M must be >= 1".into()));
    }
    validate_freqs(m, freqs)?;
    if y.len() != freqs.len() {
        return Err(Error::DimensionMismatch {
            expected: freqs.len(),
            actual: y.len(),
        });
    }
    let tol = opts.residual_rtol * y.norm();
    if opts.exploit_symmetry {
        recover_symmetric(y, freqs, m, opts, tol)
    } else {
        recover_full(y, freqs, m, opts, tol)
    }
}

fn rhs_full(y: &IntensityMeasurements) -> DVector<f64> {
    let mut b = DVector::zeros(2 * y.len());
    for (n, v) in y.values().iter().enumerate() {
        b[2 * n] = *v;
    }
    b
}

/// Zeroes entries at most `1e-9 * max|z|`, which are rounding noise of an
/// exact sparse solution.
fn clean(z: &mut [f64]) {
    let scale = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for v in z.iter_mut() {
        if v.abs() <= 1e-9 * scale {
            *v = 0.0;
        }
    }
}

fn recover_full(
    y: &IntensityMeasurements,
    freqs: &[usize],
    m: usize,
    opts: &AutocorrOptions,
    tol: f64,
) -> Result<AutocorrRecovery> {
    let (a, cols) = full_system(m, freqs);
    let b = rhs_full(y);
    let embed = |supp: &[usize], z: &[f64]| {
        let mut q = vec![0.0; 2 * m];
        for (&c, v) in supp.iter().zip(z) {
            q[cols[c]] = *v;
        }
        clean(&mut q);
        PaddedAutocorrArrangement { q }
    };

    let (z, rank) = lstsq(&a, &b);
    if rank == cols.len() {
        let all: Vec<usize> = (0..cols.len()).collect();
        let arr = embed(&all, z.as_slice());
        let res = residual_full(&a, &b, &arr, &cols);
        if res > tol {
            return Err(Error::NoSolution(opts.s_max));
        }
        return Ok(AutocorrRecovery {
            arrangement: arr,
            alternates: Vec::new(),
            residual: res,
            method: RecoveryMethod::Direct,
        });
    }

    let n_cols = cols.len();
    let s_max = opts.s_max.min(n_cols);
    let total: u128 = (0..=s_max).map(|s| binomial(n_cols, s)).sum();
    if total > opts.max_supports {
        return Err(Error::CapExceeded {
            what: "arrangement supports",
            value: total,
            cap: opts.max_supports,
        });
    }
    let level = |s: usize| -> Vec<Vec<usize>> {
        (0..binomial(n_cols, s))
            .map(|r| unrank_combination(n_cols, s, r))
            .collect()
    };
    let found = sparsest(&a, &b, tol, s_max, &level).ok_or(Error::NoSolution(opts.s_max))?;
    let mut arrs: Vec<PaddedAutocorrArrangement> =
        found.iter().map(|(s, z)| embed(s, z)).collect();
    let first = arrs.remove(0);
    let residual = residual_full(&a, &b, &first, &cols);
    Ok(AutocorrRecovery {
        arrangement: first,
        alternates: arrs,
        residual,
        method: RecoveryMethod::Enumeration,
    })
}

fn residual_full(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    arr: &PaddedAutocorrArrangement,
    cols: &[usize],
) -> f64 {
    let z = DVector::from_iterator(cols.len(), cols.iter().map(|&j| arr.q[j]));
    (a * z - b).norm()
}

fn recover_symmetric(
    y: &IntensityMeasurements,
    freqs: &[usize],
    m: usize,
    opts: &AutocorrOptions,
    tol: f64,
) -> Result<AutocorrRecovery> {
    let a = symmetric_system(m, freqs);
    let b = DVector::from_column_slice(y.values());
    let build = |supp: &[usize], z: &[f64]| {
        let mut half = vec![0.0; m];
        for (&l, v) in supp.iter().zip(z) {
            half[l] = *v;
        }
        clean(&mut half);
        PaddedAutocorrArrangement::from_autocorrelation(
            &Autocorrelation::from_nonnegative_lags(&half).expect("m >= 1"),
        )
    };
    let residual = |arr: &PaddedAutocorrArrangement| {
        let z = DVector::from_column_slice(&arr.q[..m]);
        (&a * z - &b).norm()
    };

    let (z, rank) = lstsq(&a, &b);
    if rank == m {
        let all: Vec<usize> = (0..m).collect();
        let arr = build(&all, z.as_slice());
        let res = residual(&arr);
        if res > tol {
            return Err(Error::NoSolution(opts.s_max));
        }
        return Ok(AutocorrRecovery {
            arrangement: arr,
            alternates: Vec::new(),
            residual: res,
            method: RecoveryMethod::Direct,
        });
    }

    // arrangement sparsity of a lag support L is 2|L| - [0 in L]
    let s_max = opts.s_max.min(2 * m - 1);
    let total: u128 = (0..=s_max)
        .map(|t| {
            if t % 2 == 1 {
                binomial(m - 1, (t - 1) / 2)
            } else {
                binomial(m - 1, t / 2)
            }
        })
        .sum();
    if total > opts.max_supports {
        return Err(Error::CapExceeded {
            what: "lag supports",
            value: total,
            cap: opts.max_supports,
        });
    }
    let level = |t: usize| -> Vec<Vec<usize>> {
        let with_zero = t % 2 == 1;
        let rest = if with_zero { (t - 1) / 2 } else { t / 2 };
        (0..binomial(m - 1, rest))
            .map(|r| {
                let mut s: Vec<usize> = unrank_combination(m - 1, rest, r)
                    .into_iter()
                    .map(|l| l + 1)
                    .collect();
                if with_zero {
                    s.insert(0, 0);
                }
                s
            })
            .collect()
    };
    let found = sparsest(&a, &b, tol, s_max, &level).ok_or(Error::NoSolution(opts.s_max))?;
    let mut arrs: Vec<PaddedAutocorrArrangement> =
        found.iter().map(|(s, z)| build(s, z)).collect();
    let first = arrs.remove(0);
    let res = residual(&first);
    Ok(AutocorrRecovery {
        arrangement: first,
        alternates: arrs,
        residual: res,
        method: RecoveryMethod::Enumeration,
    })
}
