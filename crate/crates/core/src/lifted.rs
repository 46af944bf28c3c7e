//! Exact ℓ0 phase retrieval for real ensembles by support enumeration.
//!
//! On a support `K` of size `s` the intensities are linear in the lifted
//! matrix `X = x_K x_K^T`: `y_n = phi_{n,K}^T X phi_{n,K}`. Each support is
//! solved as a least-squares problem in the `s(s+1)/2` entries of a
//! symmetric `X`, and accepted when the residual is small and `X` is a
//! positive semidefinite rank-one matrix. Supports are visited by increasing
//! size; every support of the first feasible size is processed so that all
//! sparsest solutions are reported.
//!
//! When the lifted system on a support is rank deficient the solver falls
//! back to enumerating the signs of `<phi_n, x>`; each sign pattern turns the
//! problem into an ordinary linear least-squares fit.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::complement::{
    binomial, has_k_complement_property_with, unrank_combination, CheckLimits,
};
use crate::ensemble::{intensity_measure, IntensityMeasurements, MeasurementEnsemble};
use crate::error::{Error, Result};
use crate::linalg::lstsq;
use crate::signal::{equivalent_under_invariances, InvarianceGroup, RealSignal};

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOptions {
    pub k_max: usize,
    /// Cap on the total number of supports visited up to `k_max`.
    pub max_supports: u128,
    /// Residual tolerance relative to `|y|_2`.
    pub residual_rtol: f64,
    /// Eigenvalues down to `-psd_rtol * lambda_1` count as nonnegative.
    pub psd_rtol: f64,
    /// Rank one means `lambda_2 <= rank1_rtol * lambda_1`.
    pub rank1_rtol: f64,
    /// Largest `N` for the sign-enumeration fallback (`2^(N-1)` solves).
    pub sign_fallback_max_n: usize,
    /// Also decide the `min(2s, M)`-complement property for the sparsity
    /// found, when within `limits`.
    pub check_certificate: bool,
    pub limits: CheckLimits,
}

impl RecoveryOptions {
    pub fn new(k_max: usize) -> Self {
        RecoveryOptions {
            k_max,
            max_supports: 2_000_000,
            residual_rtol: 1e-8,
            psd_rtol: 1e-8,
            rank1_rtol: 1e-6,
            sign_fallback_max_n: 14,
            check_certificate: true,
            limits: CheckLimits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport {
    /// First sparsest solution in lexicographic support order, with its
    /// largest-magnitude entry positive.
    pub solution: Option<RealSignal>,
    pub sparsity_found: usize,
    /// Further sparsest solutions, pairwise distinct up to sign.
    pub alternates: Vec<RealSignal>,
    /// Whether the `min(2s, M)`-complement property holds for the sparsity
    /// `s` found; `None` when not checked.
    pub certificate_checked: Option<bool>,
    /// `|A(solution) - y|_2`.
    pub residual: f64,
    /// Some lifted system was rank deficient (sign fallback used or skipped).
    pub underdetermined: bool,
    /// Some rank-deficient support exceeded the sign-fallback cap, so
    /// solutions on it may have been missed.
    pub unverified: bool,
    pub supports_examined: u64,
}

impl RecoveryReport {
    pub fn is_unique(&self) -> bool {
        self.solution.is_some() && self.alternates.is_empty()
    }

    pub fn to_record(&self) -> String {
        let opt = |s: &Option<RealSignal>| s.as_ref().map(|x| x.to_csv_row()).unwrap_or_default();
        let mut out = String::new();
        out.push_str(&format!("solution: {}\n", opt(&self.solution)));
        out.push_str(&format!("sparsity_found: {}\n", self.sparsity_found));
        out.push_str(&format!("alternates: {}\n", self.alternates.len()));
        for a in &self.alternates {
            out.push_str(&format!("alternate: {}\n", a.to_csv_row()));
        }
        out.push_str(&format!(
            "certificate_checked: {}\n",
            match self.certificate_checked {
                Some(true) => "holds",
                Some(false) => "violated",
                None => "unchecked",
            }
        ));
        out.push_str(&format!("residual: {:e}\n", self.residual));
        out.push_str(&format!("underdetermined: {}\n", self.underdetermined));
        out.push_str(&format!("unverified: {}\n", self.unverified));
        out.push_str(&format!("supports_examined: {}\n", self.supports_examined));
        out
    }
}

/// Index of the lifted unknown for `X[i][j]`, `i <= j`, in row-major upper
/// triangle order.
fn tri_index(i: usize, j: usize, s: usize) -> usize {
    i * s - i * (i + 1) / 2 + j
}

/// Lifted design matrix on `support`: row `n` holds `phi_{n,i}^2` for the
/// diagonal unknowns and `2 phi_{n,i} phi_{n,j}` for `i < j`.
pub fn lifted_matrix(phi: &DMatrix<f64>, support: &[usize]) -> DMatrix<f64> {
    let s = support.len();
    let cols = s * (s + 1) / 2;
    DMatrix::from_fn(phi.nrows(), cols, |n, c| {
        // invert tri_index by scanning; s is tiny
        let (mut i, mut rem) = (0, c);
        while rem >= s - i {
            rem -= s - i;
            i += 1;
        }
        let j = i + rem;
        let (a, b) = (phi[(n, support[i])], phi[(n, support[j])]);
        if i == j {
            a * a
        } else {
            2.0 * a * b
        }
    })
}

/// Upper-triangle vector of `x x^T` in the order used by [`lifted_matrix`].
pub fn lift(x: &[f64]) -> DVector<f64> {
    let s = x.len();
    let mut z = DVector::zeros(s * (s + 1) / 2);
    for i in 0..s {
        for j in i..s {
            z[tri_index(i, j, s)] = x[i] * x[j];
        }
    }
    z
}

/// Canonical representative of `{x, -x}`: the first entry of largest
/// magnitude is positive.
pub fn sign_canonical(x: &RealSignal) -> RealSignal {
    let mut best = 0.0f64;
    let mut lead = 0.0f64;
    for &v in x.values() {
        if v.abs() > best {
            best = v.abs();
            lead = v;
        }
    }
    if lead < 0.0 {
        x.negated()
    } else {
        x.clone()
    }
}

enum SupportOutcome {
    Solutions(Vec<Vec<f64>>),
    Deficient { solutions: Vec<Vec<f64>>, skipped: bool },
}

struct Solver<'a> {
    phi: &'a DMatrix<f64>,
    y: &'a [f64],
    tol: f64,
    opts: &'a RecoveryOptions,
}

impl Solver<'_> {
    fn residual(&self, support: &[usize], xk: &[f64]) -> f64 {
        let mut r2 = 0.0;
        for (n, yn) in self.y.iter().enumerate() {
            let ip: f64 = support
                .iter()
                .zip(xk)
                .map(|(&j, v)| self.phi[(n, j)] * v)
                .sum();
            r2 += (ip * ip - yn).powi(2);
        }
        r2.sqrt()
    }

    fn solve_support(&self, support: &[usize]) -> SupportOutcome {
        let s = support.len();
        let b = lifted_matrix(self.phi, support);
        let rhs = DVector::from_column_slice(self.y);
        let (z, rank) = lstsq(&b, &rhs);
        if rank < b.ncols() {
            return self.sign_fallback(support);
        }
        if (&b * &z - &rhs).norm() > self.tol {
            return SupportOutcome::Solutions(Vec::new());
        }
        let x = DMatrix::from_fn(s, s, |i, j| z[tri_index(i.min(j), i.max(j), s)]);
        let eig = SymmetricEigen::new(x);
        let mut order: Vec<usize> = (0..s).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let l1 = eig.eigenvalues[order[0]];
        if l1 <= 0.0 {
            return SupportOutcome::Solutions(Vec::new());
        }
        let lmin = eig.eigenvalues[order[s - 1]];
        let l2 = if s > 1 { eig.eigenvalues[order[1]] } else { 0.0 };
        if lmin < -self.opts.psd_rtol * l1 || l2 > self.opts.rank1_rtol * l1 {
            return SupportOutcome::Solutions(Vec::new());
        }
        let v = eig.eigenvectors.column(order[0]);
        let xk: Vec<f64> = v.iter().map(|c| c * l1.sqrt()).collect();
        if self.residual(support, &xk) > self.tol {
            return SupportOutcome::Solutions(Vec::new());
        }
        SupportOutcome::Solutions(vec![xk])
    }

    fn sign_fallback(&self, support: &[usize]) -> SupportOutcome {
        let n = self.y.len();
        if n > self.opts.sign_fallback_max_n {
            return SupportOutcome::Deficient {
                solutions: Vec::new(),
                skipped: true,
            };
        }
        let a = self.phi.select_columns(support);
        let roots: Vec<f64> = self.y.iter().map(|v| v.sqrt()).collect();
        // signs of zero measurements are irrelevant; the first free sign is
        // fixed to quotient out the global sign
        let free: Vec<usize> = (0..n).filter(|&i| roots[i] > 0.0).collect();
        let patterns: u64 = if free.is_empty() { 1 } else { 1 << (free.len() - 1) };
        let mut found: Vec<Vec<f64>> = Vec::new();
        for p in 0..patterns {
            let mut rhs = DVector::from_column_slice(&roots);
            for (b, &i) in free.iter().enumerate().skip(1) {
                if p >> (b - 1) & 1 == 1 {
                    rhs[i] = -rhs[i];
                }
            }
            let (x, rank) = lstsq(&a, &rhs);
            if rank < support.len() {
                continue;
            }
            let xk: Vec<f64> = x.iter().copied().collect();
            if self.residual(support, &xk) <= self.tol {
                found.push(xk);
            }
        }
        SupportOutcome::Deficient {
            solutions: found,
            skipped: false,
        }
    }
}

/// Sparsest real signals consistent with `y`, up to sparsity `k_max`.
pub fn l0_recover(
    phi: &MeasurementEnsemble,
    y: &IntensityMeasurements,
    k_max: usize,
) -> Result<RecoveryReport> {
    l0_recover_with(phi, y, &RecoveryOptions::new(k_max))
}

pub fn l0_recover_with(
    phi: &MeasurementEnsemble,
    y: &IntensityMeasurements,
    opts: &RecoveryOptions,
) -> Result<RecoveryReport> {
    let a = phi.real_matrix().ok_or(Error::RequiresRealEnsemble)?;
    let m = phi.dim();
    if y.len() != phi.count() {
        return Err(Error::DimensionMismatch {
            expected: phi.count(),
            actual: y.len(),
        });
    }
    if opts.k_max > m {
        return Err(Error::InvalidArgument(format!(
            "k_max = {} exceeds signal length {m}",
            opts.k_max
        )));
    }
    let total: u128 = (0..=opts.k_max).map(|s| binomial(m, s)).sum();
    if total > opts.max_supports {
        return Err(Error::CapExceeded {
            what: "supports up to k_max",
            value: total,
            cap: opts.max_supports,
        });
    }

    let tol = opts.residual_rtol * y.norm();
    let solver = Solver {
        phi: a,
        y: y.values(),
        tol,
        opts,
    };
    let mut examined = 0u64;
    let mut underdetermined = false;
    let mut unverified = false;

    for s in 0..=opts.k_max {
        let count = binomial(m, s);
        examined += count as u64;
        let outcomes: Vec<(Vec<usize>, SupportOutcome)> = (0..count)
            .into_par_iter()
            .map(|r| {
                let supp = unrank_combination(m, s, r);
                let out = if s == 0 {
                    let ok = y.norm() <= tol;
                    SupportOutcome::Solutions(if ok { vec![Vec::new()] } else { Vec::new() })
                } else {
                    solver.solve_support(&supp)
                };
                (supp, out)
            })
            .collect();

        let mut found: Vec<RealSignal> = Vec::new();
        for (supp, out) in outcomes {
            let sols = match out {
                SupportOutcome::Solutions(v) => v,
                SupportOutcome::Deficient { solutions, skipped } => {
                    underdetermined = true;
                    unverified |= skipped;
                    solutions
                }
            };
            for xk in sols {
                let mut full = vec![0.0; m];
                for (&j, v) in supp.iter().zip(&xk) {
                    full[j] = *v;
                }
                let cand = sign_canonical(&RealSignal::new(full));
                if !found
                    .iter()
                    .any(|f| equivalent_under_invariances(f, &cand, InvarianceGroup::SignOnly))
                {
                    found.push(cand);
                }
            }
        }

        if let Some(first) = found.first().cloned() {
            let residual = (intensity_measure(phi, &first)?
                .values()
                .iter()
                .zip(y.values())
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>())
            .sqrt();
            let certificate_checked = if opts.check_certificate {
                let d = (2 * s).min(m);
                match has_k_complement_property_with(phi, d, &opts.limits) {
                    Ok(v) => Some(v.holds()),
                    Err(Error::CapExceeded { .. }) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            return Ok(RecoveryReport {
                solution: Some(first),
                sparsity_found: s,
                alternates: found.split_off(1),
                certificate_checked,
                residual,
                underdetermined,
                unverified,
                supports_examined: examined,
            });
        }
    }
    Err(Error::NoSolution(opts.k_max))
}

/// Outcome of [`verify_uniqueness`].
#[derive(Debug, Clone, PartialEq)]
pub enum Uniqueness {
    /// The `min(2k, M)`-complement property holds, which guarantees that
    /// `x0` is the only signal with at most `k` nonzeros matching `A(x0)`.
    GuaranteedUnique,
    /// The property fails but exhaustive recovery finds only `±x0`.
    EmpiricallyUnique,
    /// A signal with at most `k` nonzeros, not `±x0`, has the same
    /// measurements.
    Ambiguous { x0: RealSignal, witness: RealSignal },
}

pub fn verify_uniqueness(phi: &MeasurementEnsemble, x0: &RealSignal) -> Result<Uniqueness> {
    verify_uniqueness_with(phi, x0, &CheckLimits::default())
}

pub fn verify_uniqueness_with(
    phi: &MeasurementEnsemble,
    x0: &RealSignal,
    limits: &CheckLimits,
) -> Result<Uniqueness> {
    if !phi.is_real() {
        return Err(Error::RequiresRealEnsemble);
    }
    let m = phi.dim();
    let k = x0.sparsity();
    // a support pair of two k-sparse signals fits in min(2k, M) coordinates
    let d = (2 * k).min(m);
    if has_k_complement_property_with(phi, d, limits)?.holds() {
        return Ok(Uniqueness::GuaranteedUnique);
    }
    let y = intensity_measure(phi, x0)?;
    let mut opts = RecoveryOptions::new(k);
    opts.check_certificate = false;
    opts.limits = *limits;
    let report = l0_recover_with(phi, &y, &opts)?;
    let candidates = report.solution.iter().chain(report.alternates.iter());
    for c in candidates {
        if !equivalent_under_invariances(c, x0, InvarianceGroup::SignOnly) {
            return Ok(Uniqueness::Ambiguous {
                x0: x0.clone(),
                witness: c.clone(),
            });
        }
    }
    Ok(Uniqueness::EmpiricallyUnique)
}
