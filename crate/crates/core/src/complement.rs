//! Exhaustive complement-property and k-complement-property checks.
//!
//! An ensemble has the complement property when, for every split of the
//! measurement indices into `S` and `S^c`, one side spans the whole space.
//! The k-complement property asks the same of every `k`-coordinate
//! restriction. Both are decided by enumeration; each `{S, S^c}` split is
//! visited once with `0` kept in `S^c`.
//!
//! Rank decisions compare the smallest singular value of a row subset
//! against `1e-8` times the largest singular value of all `N` rows
//! restricted to the same coordinates.

use std::fmt::Write as _;

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::ensemble::{MeasurementEnsemble, Vectors};
use crate::error::{Error, Result};
use crate::linalg::{largest_singular_value, null_vector, rows_span, RANK_RTOL};
use crate::signal::{join_f64, parse_f64_list, RealSignal};

/// Enumeration caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckLimits {
    /// Largest `N` accepted (the check visits `2^(N-1)` splits).
    pub max_n: usize,
    /// Largest number of coordinate subsets `C(L, k)` accepted.
    pub max_k_choose: u128,
    /// Relative singular-value threshold for rank decisions.
    pub rank_rtol: f64,
}

impl Default for CheckLimits {
    fn default() -> Self {
        CheckLimits {
            max_n: 24,
            max_k_choose: 1_000_000,
            rank_rtol: RANK_RTOL,
        }
    }
}

/// A vector over the ensemble's field.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldVector {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl FieldVector {
    pub fn len(&self) -> usize {
        match self {
            FieldVector::Real(v) => v.len(),
            FieldVector::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn norm(&self) -> f64 {
        match self {
            FieldVector::Real(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            FieldVector::Complex(v) => v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    fn as_complex(&self) -> Vec<Complex64> {
        match self {
            FieldVector::Real(v) => v.iter().map(|x| Complex64::new(*x, 0.0)).collect(),
            FieldVector::Complex(v) => v.clone(),
        }
    }

    fn to_record(&self) -> String {
        match self {
            FieldVector::Real(v) => join_f64(v),
            FieldVector::Complex(v) => {
                let flat: Vec<f64> = v.iter().flat_map(|c| [c.re, c.im]).collect();
                join_f64(&flat)
            }
        }
    }
}

/// Witness `(S, K, u, v)` that the (k-)complement property fails: `u` is a
/// unit vector orthogonal to every `phi_{n,K}` with `n` in `S`, and `v` to
/// every `phi_{n,K}` with `n` in `S^c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationCertificate {
    pub s: Vec<usize>,
    pub k_set: Vec<usize>,
    pub u: FieldVector,
    pub v: FieldVector,
}

impl ViolationCertificate {
    /// `S^c` within `0..n`.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.s.contains(i)).collect()
    }

    /// Checks the certificate against `phi`: index ranges, unit norms, and
    /// both orthogonality conditions up to `1e-7 * max(1, |Phi_K|_F)`.
    pub fn validate(&self, phi: &MeasurementEnsemble) -> Result<()> {
        let n = phi.count();
        let l = phi.dim();
        let bad = |m: String| Err(Error::InvalidCertificate(m));
        if self.s.iter().any(|&i| i >= n) {
            return bad("S index out of range".into());
        }
        if self.k_set.iter().any(|&j| j >= l) || self.k_set.is_empty() {
            return bad("K empty or out of range".into());
        }
        if self.u.len() != self.k_set.len() || self.v.len() != self.k_set.len() {
            return bad("null vectors must have length |K|".into());
        }
        for (name, w) in [("u", &self.u), ("v", &self.v)] {
            if (w.norm() - 1.0).abs() > 1e-9 {
                return bad(format!("{name} is not unit norm"));
            }
        }
        let a = phi.complex_matrix().select_columns(&self.k_set);
        let tol = 1e-7 * a.norm().max(1.0);
        let u = DVector::from_vec(self.u.as_complex());
        let v = DVector::from_vec(self.v.as_complex());
        let sc = self.complement(n);
        for (rows, w, name) in [(&self.s, &u, "u"), (&sc, &v, "v")] {
            if rows.is_empty() {
                continue;
            }
            let r = a.select_rows(rows.iter()).conjugate() * w;
            if r.norm() > tol {
                return bad(format!("{name} is not orthogonal to its rows"));
            }
        }
        Ok(())
    }

    /// Structured text record, one `key: value` per line.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        let field = match self.u {
            FieldVector::Real(_) => "real",
            FieldVector::Complex(_) => "complex",
        };
        let _ = writeln!(out, "S: {}", join_idx(&self.s));
        let _ = writeln!(out, "K: {}", join_idx(&self.k_set));
        let _ = writeln!(out, "field: {field}");
        let _ = writeln!(out, "u: {}", self.u.to_record());
        let _ = writeln!(out, "v: {}", self.v.to_record());
        out
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut s = None;
        let mut k = None;
        let mut field = None;
        let mut u = None;
        let mut v = None;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, val) = line.split_once(':').ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected 'key: value', got {line:?}"),
            })?;
            let val = val.trim();
            match key.trim() {
                "S" => s = Some(parse_idx(val, line_no)?),
                "K" => k = Some(parse_idx(val, line_no)?),
                "field" => field = Some(val.to_string()),
                "u" => u = Some(parse_f64_list(val, line_no)?),
                "v" => v = Some(parse_f64_list(val, line_no)?),
                _ => {}
            }
        }
        let missing = |what: &str| Error::Parse {
            line: 0,
            msg: format!("certificate lacks {what}"),
        };
        let field = field.unwrap_or_else(|| "real".into());
        let wrap = |vals: Vec<f64>| -> Result<FieldVector> {
            match field.as_str() {
                "real" => Ok(FieldVector::Real(vals)),
                "complex" if vals.len() % 2 == 0 => Ok(FieldVector::Complex(
                    vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
                )),
                other => Err(Error::Parse {
                    line: 0,
                    msg: format!("bad field {other:?} for vector of length {}", vals.len()),
                }),
            }
        };
        Ok(ViolationCertificate {
            s: s.ok_or_else(|| missing("S"))?,
            k_set: k.ok_or_else(|| missing("K"))?,
            u: wrap(u.ok_or_else(|| missing("u"))?)?,
            v: wrap(v.ok_or_else(|| missing("v"))?)?,
        })
    }
}

fn join_idx(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_idx(val: &str, line: usize) -> Result<Vec<usize>> {
    if val.is_empty() {
        return Ok(Vec::new());
    }
    val.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad index {t:?}"),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Holds,
    Violated(Box<ViolationCertificate>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn certificate(&self) -> Option<&ViolationCertificate> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(c) => Some(c),
        }
    }

    pub fn to_record(&self) -> String {
        match self {
            Verdict::Holds => "verdict: holds\n".to_string(),
            Verdict::Violated(c) => format!("verdict: violated\n{}", c.to_record()),
        }
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
pub(crate) fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let mut c = next;
        loop {
            let count = binomial(n - c - 1, k - slot - 1);
            if rank < count {
                break;
            }
            rank -= count;
            c += 1;
        }
        out.push(c);
        next = c + 1;
    }
    out
}

/// Lexicographic iterator over `k`-subsets of `0..n`.
#[cfg(test)]
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Complement property of the whole ensemble, with default caps.
pub fn has_complement_property(phi: &MeasurementEnsemble) -> Result<Verdict> {
    has_complement_property_with(phi, &CheckLimits::default())
}

pub fn has_complement_property_with(
    phi: &MeasurementEnsemble,
    limits: &CheckLimits,
) -> Result<Verdict> {
    check(phi, phi.dim(), limits)
}

/// k-complement property, with default caps. `k = 0` holds vacuously.
pub fn has_k_complement_property(phi: &MeasurementEnsemble, k: usize) -> Result<Verdict> {
    has_k_complement_property_with(phi, k, &CheckLimits::default())
}

pub fn has_k_complement_property_with(
    phi: &MeasurementEnsemble,
    k: usize,
    limits: &CheckLimits,
) -> Result<Verdict> {
    if k > phi.dim() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds vector length {}",
            phi.dim()
        )));
    }
    check(phi, k, limits)
}

fn check(phi: &MeasurementEnsemble, k: usize, limits: &CheckLimits) -> Result<Verdict> {
    let n = phi.count();
    if n > limits.max_n {
        return Err(Error::CapExceeded {
            what: "N",
            value: n as u128,
            cap: limits.max_n as u128,
        });
    }
    let choose = binomial(phi.dim(), k);
    if choose > limits.max_k_choose {
        return Err(Error::CapExceeded {
            what: "C(L, k)",
            value: choose,
            cap: limits.max_k_choose,
        });
    }
    if k == 0 {
        return Ok(Verdict::Holds);
    }
    let found = match phi.vectors() {
        Vectors::Real(a) => search(a, k, limits.rank_rtol).map(|(s, kk, u, v)| {
            ViolationCertificate {
                s,
                k_set: kk,
                u: FieldVector::Real(u.iter().copied().collect()),
                v: FieldVector::Real(v.iter().copied().collect()),
            }
        }),
        Vectors::Complex(a) => search(a, k, limits.rank_rtol).map(|(s, kk, u, v)| {
            ViolationCertificate {
                s,
                k_set: kk,
                u: FieldVector::Complex(u.iter().copied().collect()),
                v: FieldVector::Complex(v.iter().copied().collect()),
            }
        }),
    };
    Ok(match found {
        None => Verdict::Holds,
        Some(c) => Verdict::Violated(Box::new(c)),
    })
}

type Witness<T> = (Vec<usize>, Vec<usize>, DVector<T>, DVector<T>);

const MASK_CHUNK: u64 = 256;

fn search<T>(a: &DMatrix<T>, k: usize, rtol: f64) -> Option<Witness<T>>
where
    T: ComplexField<RealField = f64> + Send + Sync,
{
    let n = a.nrows();
    let l = a.ncols();

    let witness = |s: Vec<usize>, kk: Vec<usize>| -> Witness<T> {
        let sub = a.select_columns(&kk);
        let sc: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
        // <phi, u> = phi^H u, so null vectors are taken of the conjugated rows
        let u = null_vector(&sub.select_rows(s.iter()).conjugate());
        let v = null_vector(&sub.select_rows(sc.iter()).conjugate());
        (s, kk, u, v)
    };

    // Neither side of a split with |S| = k - 1 can span when N < 2k - 1.
    if n + 1 < 2 * k {
        let s: Vec<usize> = (0..(k - 1).min(n)).collect();
        return Some(witness(s, (0..k).collect()));
    }

    let n_k = binomial(l, k);
    let masks: u64 = if n == 0 { 1 } else { 1u64 << (n - 1) };
    let chunks = masks.div_ceil(MASK_CHUNK);
    let total = n_k * chunks as u128;

    (0..total).into_par_iter().find_map_first(|item| {
        let ki = item / chunks as u128;
        let chunk = (item % chunks as u128) as u64;
        let kk = unrank_combination(l, k, ki);
        let sub = a.select_columns(&kk);
        let thr = rtol * largest_singular_value(&sub);
        let lo = chunk * MASK_CHUNK;
        let hi = (lo + MASK_CHUNK).min(masks);
        for mask in lo..hi {
            // bit b of the mask selects measurement b + 1 into S
            let s: Vec<usize> = (1..n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            let sc_len = n - s.len();
            if s.len() >= k && rows_span(&sub.select_rows(s.iter()), thr) {
                continue;
            }
            if sc_len >= k {
                let sc: Vec<usize> = (0..n).filter(|i| mask << 1 >> i & 1 == 0).collect();
                if rows_span(&sub.select_rows(sc.iter()), thr) {
                    continue;
                }
            }
            return Some(witness(s, kk));
        }
        None
    })
}

/// Turns a real certificate into two signals with identical intensities:
/// `x1 = (u + v) / 2` and `x2 = (u - v) / 2`, embedded on `K`.
///
/// For `n` in `S`, `<phi_n, u> = 0`, so both measurements equal
/// `<phi_n, v>^2 / 4`; symmetrically on `S^c`.
pub fn ambiguity_from_violation(
    phi: &MeasurementEnsemble,
    cert: &ViolationCertificate,
) -> Result<(RealSignal, RealSignal)> {
    if !phi.is_real() {
        return Err(Error::RequiresRealEnsemble);
    }
    let (u, v) = match (&cert.u, &cert.v) {
        (FieldVector::Real(u), FieldVector::Real(v)) => (u, v),
        _ => return Err(Error::RequiresRealEnsemble),
    };
    cert.validate(phi)?;
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    if dot.abs() >= 1.0 - 1e-9 {
        return Err(Error::DegenerateCertificate);
    }
    let l = phi.dim();
    let mut x1 = vec![0.0; l];
    let mut x2 = vec![0.0; l];
    for (i, &j) in cert.k_set.iter().enumerate() {
        x1[j] = 0.5 * (u[i] + v[i]);
        x2[j] = 0.5 * (u[i] - v[i]);
    }
    Ok((RealSignal::new(x1), RealSignal::new(x2)))
}
