//! Hypothesis checks for uniqueness from Fourier magnitude measurements.

use crate::signal::{find_collision, Collision, CollisionRule, RealSignal};

/// Number of nonzero lags of the autocorrelation of a collision-free
/// `k`-sparse signal, `k^2 - k + 1` (zero for `k = 0`).
pub fn autocorrelation_sparsity(k: usize) -> usize {
    if k == 0 {
        0
    } else {
        k * k - k + 1
    }
}

/// `2(k^2 - k + 1)`, the measurement-count bound. Uses the polynomial even
/// at `k = 0`.
pub fn measurement_bound(k: usize) -> usize {
    2 * (k * k - k + 1)
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `2(k^2 - k + 1)`.
pub fn next_valid_n(k: usize) -> usize {
    let mut n = measurement_bound(k) + 1;
    while !is_prime(n) {
        n += 1;
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K6Case {
    NotK6,
    /// Six nonzeros, not all equal.
    K6DistinctValues,
    /// Six nonzeros, all equal: uniqueness only almost surely.
    K6AllEqual,
}

impl K6Case {
    pub fn as_str(self) -> &'static str {
        match self {
            K6Case::NotK6 => "not_k6",
            K6Case::K6DistinctValues => "k6_distinct_values",
            K6Case::K6AllEqual => "k6_all_equal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FmmVerdict {
    Unique,
    UniqueAlmostSurely,
    NotGuaranteed(Vec<String>),
}

impl FmmVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            FmmVerdict::Unique => "unique",
            FmmVerdict::UniqueAlmostSurely => "unique_almost_surely",
            FmmVerdict::NotGuaranteed(_) => "not_guaranteed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionOptions {
    /// Collision rule for the collision-free hypothesis. The default is
    /// [`CollisionRule::AllPairs`]: only then is every positive lag hit by at
    /// most one support pair.
    pub collision_rule: CollisionRule,
    /// `N > 2(k^2-k+1)` when true, `N >= 2(k^2-k+1)` otherwise.
    pub strict_bound: bool,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        ConditionOptions {
            collision_rule: CollisionRule::AllPairs,
            strict_bound: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FmmConditionReport {
    pub k: usize,
    pub n: usize,
    pub n_is_prime: bool,
    pub bound_ok: bool,
    pub collision_free: bool,
    pub collision: Option<Collision>,
    pub k6_case: K6Case,
    pub verdict: FmmVerdict,
}

impl FmmConditionReport {
    pub fn to_record(&self) -> String {
        let mut out = format!(
            "k: {}\nN: {}\nn_is_prime: {}\nbound_ok: {}\ncollision_free: {}\nk6_case: {}\nverdict: {}\n",
            self.k,
            self.n,
            self.n_is_prime,
            self.bound_ok,
            self.collision_free,
            self.k6_case.as_str(),
            self.verdict.as_str()
        );
        if let FmmVerdict::NotGuaranteed(reasons) = &self.verdict {
            for r in reasons {
                out.push_str(&format!("reason: {r}\n"));
            }
        }
        out
    }
}

pub fn check_fmm_conditions(x0: &RealSignal, n: usize) -> FmmConditionReport {
    check_fmm_conditions_with(x0, n, &ConditionOptions::default())
}

pub fn check_fmm_conditions_with(
    x0: &RealSignal,
    n: usize,
    opts: &ConditionOptions,
) -> FmmConditionReport {
    let k = x0.sparsity();
    let bound = measurement_bound(k);
    let n_is_prime = is_prime(n);
    let bound_ok = if opts.strict_bound { n > bound } else { n >= bound };
    let collision = find_collision(x0, opts.collision_rule);
    let collision_free = collision.is_none();
    let k6_case = if k != 6 {
        K6Case::NotK6
    } else {
        let vals: Vec<f64> = x0.support().iter().map(|&i| x0.get(i)).collect();
        if vals.iter().all(|v| *v == vals[0]) {
            K6Case::K6AllEqual
        } else {
            K6Case::K6DistinctValues
        }
    };

    let mut reasons = Vec::new();
    if !n_is_prime {
        reasons.push(format!("N = {n} is not prime"));
    }
    if !bound_ok {
        let rel = if opts.strict_bound { "exceed" } else { "reach" };
        reasons.push(format!("N = {n} does not {rel} 2(k^2-k+1) = {bound}"));
    }
    if let Some(c) = collision {
        let (i, j, kk, l) = c.as_tuple();
        reasons.push(format!("support collision {i}-{j} = {kk}-{l}"));
    }
    let verdict = if !reasons.is_empty() {
        FmmVerdict::NotGuaranteed(reasons)
    } else if k6_case == K6Case::K6AllEqual {
        FmmVerdict::UniqueAlmostSurely
    } else {
        FmmVerdict::Unique
    };
    FmmConditionReport {
        k,
        n,
        n_is_prime,
        bound_ok,
        collision_free,
        collision,
        k6_case,
        verdict,
    }
}
