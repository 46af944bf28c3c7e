//! Real signals, their autocorrelation, collision detection and the
//! sign/mirror/shift invariance group of Fourier magnitude measurements.
//!
//! Indexing is 0-based everywhere. An autocorrelation of a length-`M` signal
//! is stored as `2M - 1` values ordered by lag `-(M-1)..=(M-1)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A finite real signal with its support cached.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSignal {
    values: Vec<f64>,
    support: Vec<usize>,
}

impl RealSignal {
    /// Builds a signal. Negative zeros are normalized so that lexicographic
    /// comparisons treat `-0.0` and `0.0` alike.
    pub fn new(mut values: Vec<f64>) -> Self {
        for v in values.iter_mut() {
            if *v == 0.0 {
                *v = 0.0;
            }
        }
        let support = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| i)
            .collect();
        RealSignal { values, support }
    }

    pub fn zeros(len: usize) -> Self {
        RealSignal::new(vec![0.0; len])
    }

    /// A length-`len` signal with the given `(index, value)` entries.
    pub fn from_entries(len: usize, entries: &[(usize, f64)]) -> Result<Self> {
        let mut values = vec![0.0; len];
        for &(i, v) in entries {
            if i >= len {
                return Err(Error::InvalidArgument(format!(
                    "entry index {i} outside signal of length {len}"
                )));
            }
            values[i] = v;
        }
        Ok(RealSignal::new(values))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Number of nonzero entries.
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn negated(&self) -> Self {
        RealSignal::new(self.values.iter().map(|v| -v).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        RealSignal::new(self.values.iter().map(|v| c * v).collect())
    }

    /// Reverses the order of the entries over the whole window.
    pub fn reversed(&self) -> Self {
        RealSignal::new(self.values.iter().rev().copied().collect())
    }

    /// `(T_s x)(i) = x((i - s) mod M)`.
    pub fn circular_shift(&self, shift: usize) -> Self {
        let m = self.len();
        if m == 0 {
            return self.clone();
        }
        let s = shift % m;
        let values = (0..m).map(|i| self.values[(i + m - s) % m]).collect();
        RealSignal::new(values)
    }

    /// Moves every entry by `offset` without wrapping. Returns `None` when a
    /// nonzero entry would leave the window.
    pub fn linear_shift(&self, offset: isize) -> Option<Self> {
        let m = self.len() as isize;
        let mut values = vec![0.0; self.len()];
        for &i in &self.support {
            let j = i as isize + offset;
            if j < 0 || j >= m {
                return None;
            }
            values[j as usize] = self.values[i];
        }
        Some(RealSignal::new(values))
    }

    /// Serializes as a single CSV row.
    pub fn to_csv_row(&self) -> String {
        join_f64(&self.values)
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        Ok(RealSignal::new(parse_f64_list(row, 1)?))
    }

    /// `true` when every value is an integer (enables exact comparisons).
    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.fract() == 0.0)
    }
}

impl fmt::Display for RealSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_csv_row())
    }
}

pub(crate) fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn parse_f64_list(row: &str, line: usize) -> Result<Vec<f64>> {
    let row = row.trim();
    if row.is_empty() {
        return Ok(Vec::new());
    }
    row.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|e| Error::Parse {
                line,
                msg: format!("bad number {:?}: {e}", t.trim()),
            })
        })
        .collect()
}

/// Autocorrelation of a length-`M` real signal, `a(l) = sum_s x(s) x(s+l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Autocorrelation {
    lags: Vec<f64>,
}

impl Autocorrelation {
    /// Wraps `2M - 1` values ordered by lag `-(M-1)..=(M-1)`.
    pub fn from_lags(lags: Vec<f64>) -> Result<Self> {
        if lags.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "autocorrelation needs an odd number of lags, got {}",
                lags.len()
            )));
        }
        Ok(Autocorrelation { lags })
    }

    /// Builds the symmetric autocorrelation from its lags `0..M`.
    pub fn from_nonnegative_lags(half: &[f64]) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::InvalidArgument("no lags given".into()));
        }
        let mut lags: Vec<f64> = half.iter().rev().copied().collect();
        lags.extend_from_slice(&half[1..]);
        Ok(Autocorrelation { lags })
    }

    /// Length `M` of the signal this autocorrelation belongs to.
    pub fn signal_len(&self) -> usize {
        self.lags.len().div_ceil(2)
    }

    /// Value at signed lag `l`; zero outside `-(M-1)..=(M-1)`.
    pub fn lag(&self, l: isize) -> f64 {
        let center = (self.signal_len() - 1) as isize;
        let idx = center + l;
        if idx < 0 || idx as usize >= self.lags.len() {
            0.0
        } else {
            self.lags[idx as usize]
        }
    }

    /// Lags `0..M`.
    pub fn nonnegative_lags(&self) -> &[f64] {
        &self.lags[self.signal_len() - 1..]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lags
    }

    /// Nonzero lags over the full range, counting `|a(l)| > tol`.
    pub fn nonzero_count(&self, tol: f64) -> usize {
        self.lags.iter().filter(|v| v.abs() > tol).count()
    }

    /// Largest `|a(l) - a(-l)|`.
    pub fn max_asymmetry(&self) -> f64 {
        let m = self.signal_len() as isize;
        (1..m)
            .map(|l| (self.lag(l) - self.lag(-l)).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv_row(&self) -> String {
        join_f64(&self.lags)
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        Autocorrelation::from_lags(parse_f64_list(row, 1)?)
    }
}

/// Computes the autocorrelation. Only lags `0..M` are summed; negative lags
/// are mirrored so the output is exactly centro-symmetric.
pub fn autocorrelation(x: &RealSignal) -> Autocorrelation {
    let m = x.len();
    if m == 0 {
        return Autocorrelation { lags: vec![0.0] };
    }
    let v = x.values();
    let half: Vec<f64> = (0..m)
        .map(|l| (0..m - l).map(|s| v[s] * v[s + l]).sum())
        .collect();
    Autocorrelation::from_nonnegative_lags(&half).expect("non-empty")
}

/// Rule used to decide whether two support pairs collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CollisionRule {
    /// Index differences `i - j = k - l` over four distinct support indices.
    #[default]
    DisjointPairs,
    /// Index differences over any two distinct support pairs, including pairs
    /// sharing an index (a three-term progression). A signal passing this
    /// rule has an autocorrelation with exactly `k^2 - k + 1` nonzero lags.
    AllPairs,
    /// Value differences `x(i) - x(j) = x(k) - x(l)` over four distinct
    /// support indices.
    ValueDifferences,
}

/// Witness `(i, j, k, l)` with `d(i, j) = d(k, l)` under the chosen rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collision {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl Collision {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.i, self.j, self.k, self.l)
    }
}

/// First colliding quadruple in enumeration order, if any.
///
/// Pairs `(i, j)` with `i > j` are visited with `i` ascending, then `j`
/// ascending; each is compared against the earlier pairs.
pub fn find_collision(x: &RealSignal, rule: CollisionRule) -> Option<Collision> {
    let supp = x.support();
    match rule {
        CollisionRule::DisjointPairs | CollisionRule::AllPairs => {
            // pairs (i, j), i > j, ordered by i then j; the witness is the
            // first pair with a later matching partner
            let mut pairs = Vec::new();
            for (b, &i) in supp.iter().enumerate() {
                for &j in &supp[..b] {
                    pairs.push((i, j));
                }
            }
            let mut by_diff: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (p, &(i, j)) in pairs.iter().enumerate() {
                by_diff.entry(i - j).or_default().push(p);
            }
            for (p, &(i, j)) in pairs.iter().enumerate() {
                for &q in &by_diff[&(i - j)] {
                    if q <= p {
                        continue;
                    }
                    let (k, l) = pairs[q];
                    let disjoint = k != i && k != j && l != i && l != j;
                    if disjoint || rule == CollisionRule::AllPairs {
                        return Some(Collision { i, j, k, l });
                    }
                }
            }
            None
        }
        CollisionRule::ValueDifferences => {
            let v = x.values();
            let mut pairs = Vec::new();
            for &i in supp {
                for &j in supp {
                    if i != j {
                        pairs.push((i, j));
                    }
                }
            }
            for (a, &(i, j)) in pairs.iter().enumerate() {
                for &(k, l) in &pairs[a + 1..] {
                    let distinct = k != i && k != j && l != i && l != j;
                    if distinct && v[i] - v[j] == v[k] - v[l] {
                        return Some(Collision { i, j, k, l });
                    }
                }
            }
            None
        }
    }
}

/// Collision test with the default rule ([`CollisionRule::DisjointPairs`]).
pub fn is_collision_free(x: &RealSignal) -> (bool, Option<Collision>) {
    let c = find_collision(x, CollisionRule::default());
    (c.is_none(), c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// How shifts act on a length-`M` window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftMode {
    /// Modulo-`M` rotation.
    #[default]
    Circular,
    /// Translation of the support that never wraps around the window.
    Linear,
}

/// The group an equivalence is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceGroup {
    /// `{+1, -1}` only.
    SignOnly,
    /// Sign, mirror and shifts.
    Full(ShiftMode),
}

impl Default for InvarianceGroup {
    fn default() -> Self {
        InvarianceGroup::Full(ShiftMode::Circular)
    }
}

/// Group element `x -> sign * T_shift(R^mirror x)`, where `R` reverses the
/// window and `T_s` rotates right by `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InvarianceAction {
    pub sign: Sign,
    pub mirror: bool,
    pub shift: usize,
}

impl Default for InvarianceAction {
    fn default() -> Self {
        Self::identity()
    }
}

impl InvarianceAction {
    pub fn identity() -> Self {
        InvarianceAction {
            sign: Sign::Plus,
            mirror: false,
            shift: 0,
        }
    }

    pub fn apply(&self, x: &RealSignal) -> RealSignal {
        let m = x.len();
        if m == 0 {
            return x.clone();
        }
        let s = self.shift % m;
        let c = self.sign.value();
        let values = (0..m)
            .map(|i| {
                let src = (i + m - s) % m;
                let src = if self.mirror { m - 1 - src } else { src };
                c * x.values()[src]
            })
            .collect();
        RealSignal::new(values)
    }

    /// `self ∘ other` on signals of length `m`: applying the result equals
    /// applying `other` first and then `self`.
    pub fn compose(&self, other: &InvarianceAction, m: usize) -> InvarianceAction {
        // R T_t = T_{-t} R
        let carried = if self.mirror {
            (m - other.shift % m) % m
        } else {
            other.shift % m
        };
        InvarianceAction {
            sign: self.sign.times(other.sign),
            mirror: self.mirror ^ other.mirror,
            shift: (self.shift % m + carried) % m,
        }
    }

    pub fn inverse(&self, m: usize) -> InvarianceAction {
        let s = self.shift % m;
        InvarianceAction {
            sign: self.sign,
            mirror: self.mirror,
            shift: if self.mirror { s } else { (m - s) % m },
        }
    }
}

/// All group elements with their images of `x`. The identity comes first.
///
/// In linear mode only shifts that keep the support inside the window are
/// produced; they are reported as the equivalent (non-wrapping) rotation.
pub fn orbit(x: &RealSignal, group: InvarianceGroup) -> Vec<(InvarianceAction, RealSignal)> {
    let m = x.len();
    let mut out = Vec::new();
    let signs = [Sign::Plus, Sign::Minus];
    let (mirrors, mode): (&[bool], Option<ShiftMode>) = match group {
        InvarianceGroup::SignOnly => (&[false], None),
        InvarianceGroup::Full(mode) => (&[false, true], Some(mode)),
    };
    for &mirror in mirrors {
        let shifts: Vec<usize> = match mode {
            None => vec![0],
            Some(_) if m == 0 => vec![0],
            Some(ShiftMode::Circular) => (0..m).collect(),
            Some(ShiftMode::Linear) => {
                let base = if mirror { x.reversed() } else { x.clone() };
                match (base.support().first(), base.support().last()) {
                    (Some(&lo), Some(&hi)) => {
                        // offsets t in [-lo, m-1-hi], as rotations mod m
                        let lo = lo as isize;
                        let hi = hi as isize;
                        (-lo..=(m as isize - 1 - hi))
                            .map(|t| t.rem_euclid(m as isize) as usize)
                            .collect()
                    }
                    _ => vec![0],
                }
            }
        };
        for &shift in &shifts {
            for &sign in &signs {
                let g = InvarianceAction {
                    sign,
                    mirror,
                    shift,
                };
                out.push((g, g.apply(x)));
            }
        }
    }
    out
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Lexicographically smallest element of the orbit of `x` under sign,
/// mirror and circular shifts, with the action that produces it.
pub fn canonicalize(x: &RealSignal) -> (RealSignal, InvarianceAction) {
    canonicalize_in(x, InvarianceGroup::default())
}

pub fn canonicalize_in(x: &RealSignal, group: InvarianceGroup) -> (RealSignal, InvarianceAction) {
    let mut best: Option<(InvarianceAction, RealSignal)> = None;
    for (g, y) in orbit(x, group) {
        let better = match &best {
            None => true,
            Some((_, b)) => lex_cmp(y.values(), b.values()) == Ordering::Less,
        };
        if better {
            best = Some((g, y));
        }
    }
    let (g, y) = best.expect("orbit contains the identity");
    (y, g)
}

/// Equality tolerance `1e-9 * max(1, |x|_inf)`.
pub fn equivalence_tolerance(x1: &RealSignal, x2: &RealSignal) -> f64 {
    1e-9 * x1.norm_inf().max(x2.norm_inf()).max(1.0)
}

/// Whether `x2` lies in the orbit of `x1` up to [`equivalence_tolerance`].
///
/// For exact inputs this coincides with equality of canonical forms; for
/// floating-point inputs it avoids depending on near-tie orderings inside
/// the canonical representative.
pub fn equivalent_under_invariances(
    x1: &RealSignal,
    x2: &RealSignal,
    group: InvarianceGroup,
) -> bool {
    if x1.len() != x2.len() {
        return false;
    }
    if x1.is_integer_valued() && x2.is_integer_valued() {
        let c1 = canonicalize_in(x1, group).0;
        let c2 = canonicalize_in(x2, group).0;
        return c1 == c2;
    }
    let tol = equivalence_tolerance(x1, x2);
    orbit(x2, group).iter().any(|(_, y)| {
        y.values()
            .iter()
            .zip(x1.values())
            .all(|(a, b)| (a - b).abs() <= tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[f64]) -> RealSignal {
        RealSignal::new(v.to_vec())
    }

    #[test]
    fn autocorrelation_small_cases() {
        let a = autocorrelation(&sig(&[1.0, 0.0, 2.0]));
        assert_eq!(a.as_slice(), &[2.0, 0.0, 5.0, 0.0, 2.0]);
        assert_eq!(a.lag(-2), 2.0);
        assert_eq!(a.lag(0), 5.0);

        let z = autocorrelation(&RealSignal::zeros(4));
        assert!(z.as_slice().iter().all(|v| *v == 0.0));
        assert_eq!(z.as_slice().len(), 7);

        let c = autocorrelation(&sig(&[-3.0]));
        assert_eq!(c.as_slice(), &[9.0]);
    }

    #[test]
    fn support_tracks_exact_zeros() {
        let x = sig(&[0.0, -0.0, 1e-300, 2.0]);
        assert_eq!(x.support(), &[2, 3]);
        assert_eq!(x.sparsity(), 2);
        assert_eq!(x.values()[1].to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn collision_examples() {
        assert!(is_collision_free(&sig(&[1.0, 1.0, 1.0])).0);
        assert!(is_collision_free(&sig(&[1.0, 1.0, 1.0, 0.0, 1.0])).0);
        let (free, w) = is_collision_free(&sig(&[1.0, 1.0, 1.0, 1.0]));
        assert!(!free);
        assert_eq!(w.unwrap().as_tuple(), (1, 0, 3, 2));
    }

    #[test]
    fn all_pairs_rule_catches_progressions() {
        let x = sig(&[1.0, 1.0, 1.0]);
        let c = find_collision(&x, CollisionRule::AllPairs).unwrap();
        assert_eq!(c.as_tuple(), (1, 0, 2, 1));
        // Golomb ruler {0, 1, 4, 6}
        let g = RealSignal::from_entries(7, &[(0, 1.0), (1, 2.0), (4, 3.0), (6, 4.0)]).unwrap();
        assert!(find_collision(&g, CollisionRule::AllPairs).is_none());
    }

    #[test]
    fn value_difference_rule() {
        // 4 - 3 = 2 - 1 over distinct indices
        let x = sig(&[1.0, 2.0, 3.0, 4.0]);
        assert!(find_collision(&x, CollisionRule::ValueDifferences).is_some());
        let y = sig(&[1.0, 2.0, 4.0, 8.0]);
        assert!(find_collision(&y, CollisionRule::ValueDifferences).is_none());
    }

    #[test]
    fn canonical_form_examples() {
        let x = sig(&[0.0, 3.0, -1.0, 0.0]);
        let shifted = sig(&[3.0, -1.0, 0.0, 0.0]);
        assert_eq!(canonicalize(&x).0, canonicalize(&shifted).0);
        assert_eq!(canonicalize(&x).0, canonicalize(&x.negated()).0);
        assert_eq!(canonicalize(&x).0, canonicalize(&x.reversed()).0);

        let (c, g) = canonicalize(&x);
        assert_eq!(g.apply(&x), c);
        assert_eq!(canonicalize(&c).0, c);
    }

    #[test]
    fn canonical_form_matches_orbit_enumeration() {
        // brute force: smallest of all 2 * 2 * M images, built by hand
        let x = sig(&[0.0, 3.0, -1.0, 0.0]);
        let mut images = Vec::new();
        for base in [x.clone(), x.reversed()] {
            for s in 0..4 {
                let r = base.circular_shift(s);
                images.push(r.values().to_vec());
                images.push(r.negated().values().to_vec());
            }
        }
        images.sort_by(|a, b| lex_cmp(a, b));
        assert_eq!(canonicalize(&x).0.values(), &images[0][..]);
        assert_eq!(&images[0], &vec![-3.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn equivalence_examples() {
        let x = sig(&[1.0, 2.0, 0.0]);
        assert!(equivalent_under_invariances(&x, &x.negated(), InvarianceGroup::SignOnly));
        let shifted = sig(&[0.0, 1.0, 2.0]);
        assert!(!equivalent_under_invariances(&x, &shifted, InvarianceGroup::SignOnly));
        assert!(equivalent_under_invariances(&x, &shifted, InvarianceGroup::default()));
        let mn = x.reversed().negated();
        assert!(equivalent_under_invariances(&x, &mn, InvarianceGroup::default()));
    }

    #[test]
    fn linear_group_excludes_wrapping_shifts() {
        let x = sig(&[1.0, 0.0, 0.0, 2.0]);
        let wrapped = x.circular_shift(1); // [2, 1, 0, 0]
        let lin = InvarianceGroup::Full(ShiftMode::Linear);
        assert!(!equivalent_under_invariances(&x, &wrapped, lin));
        assert!(equivalent_under_invariances(&x, &wrapped, InvarianceGroup::default()));
        let y = sig(&[0.0, 1.0, 0.0, 2.0, 0.0]);
        let z = sig(&[2.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(equivalent_under_invariances(&y, &z, lin));
    }

    #[test]
    fn float_equivalence_tolerates_rounding() {
        let x = sig(&[0.1, 0.0, -0.3]);
        let y = sig(&[-0.3 * (1.0 + 1e-12), 0.0, 0.1]).negated();
        assert!(equivalent_under_invariances(&x, &y, InvarianceGroup::default()));
    }

    #[test]
    fn action_composition() {
        let x = sig(&[1.0, 2.0, 0.0, -4.0, 5.0]);
        let g = InvarianceAction {
            sign: Sign::Minus,
            mirror: true,
            shift: 2,
        };
        let h = InvarianceAction {
            sign: Sign::Plus,
            mirror: true,
            shift: 4,
        };
        let gh = g.compose(&h, 5);
        assert_eq!(gh.apply(&x), g.apply(&h.apply(&x)));
        assert_eq!(g.inverse(5).apply(&g.apply(&x)), x);
        assert_eq!(InvarianceAction::identity().apply(&x), x);
    }

    #[test]
    fn csv_round_trip() {
        let x = sig(&[0.1, -2.5, 0.0, 1e-17]);
        assert_eq!(RealSignal::from_csv_row(&x.to_csv_row()).unwrap(), x);
        let a = autocorrelation(&x);
        assert_eq!(Autocorrelation::from_csv_row(&a.to_csv_row()).unwrap(), a);
        assert!(RealSignal::from_csv_row("1,x").is_err());
    }
}
