//! Seeded Monte-Carlo experiments and their trial CSV.
//!
//! Trial `t` of an experiment with seed `s` draws everything from
//! `derive_seed(s, t)`, so the records do not depend on scheduling or on the
//! number of worker threads.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::Deserialize;

use crate::complement::{
    ambiguity_from_violation, has_complement_property_with, has_k_complement_property_with,
    CheckLimits,
};
use crate::ensemble::{fourier_rows, gaussian_ensemble, intensity_measure};
use crate::error::{Error, Result};
use crate::fmm::{fmm_recover, next_valid_n, FmmVerdict, SIGNAL_GROUP};
use crate::lifted::{l0_recover_with, RecoveryOptions};
use crate::rng::{derive_seed, sample_indices, stream, uniform_below, NormalSampler};
use crate::signal::{
    equivalent_under_invariances, find_collision, CollisionRule, InvarianceGroup, RealSignal,
};

/// First line of every trial CSV.
pub const CSV_VERSION: &str = "# sparsepr-trials v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ComplementMc,
    KComplementMc,
    SparseUniquenessMc,
    FmmRoundtripMc,
    AmbiguityDemo,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::ComplementMc => "complement_mc",
            ExperimentKind::KComplementMc => "k_complement_mc",
            ExperimentKind::SparseUniquenessMc => "sparse_uniqueness_mc",
            ExperimentKind::FmmRoundtripMc => "fmm_roundtrip_mc",
            ExperimentKind::AmbiguityDemo => "ambiguity_demo",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "complement_mc" => ExperimentKind::ComplementMc,
            "k_complement_mc" => ExperimentKind::KComplementMc,
            "sparse_uniqueness_mc" => ExperimentKind::SparseUniquenessMc,
            "fmm_roundtrip_mc" => ExperimentKind::FmmRoundtripMc,
            "ambiguity_demo" => ExperimentKind::AmbiguityDemo,
            other => return Err(Error::Config(format!("unknown experiment '{other}'"))),
        })
    }
}

/// Measurement count: fixed, or derived from the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum CountSpec {
    Fixed(usize),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl Default for CountSpec {
    fn default() -> Self {
        CountSpec::Auto(AutoTag::Auto)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub m: usize,
    pub k: Option<usize>,
    pub n: CountSpec,
    pub trials: usize,
    pub seed: u64,
    pub limits: CheckLimits,
    /// Draw FMM frequencies as a random subset of `0..2M` per trial instead
    /// of `0..N`.
    pub random_freqs: bool,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, m: usize) -> Self {
        ExperimentConfig {
            kind,
            m,
            k: None,
            n: CountSpec::default(),
            trials: 100,
            seed: 0,
            limits: CheckLimits::default(),
            random_freqs: false,
            out: None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = CountSpec::Fixed(n);
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn need_k(&self) -> Result<usize> {
        self.k
            .ok_or_else(|| Error::Config(format!("{} needs k", self.kind.as_str())))
    }

    /// Measurement count after resolving `auto`.
    pub fn resolved_n(&self) -> Result<usize> {
        let m = self.m;
        Ok(match self.n {
            CountSpec::Fixed(n) => n,
            CountSpec::Auto(_) => match self.kind {
                ExperimentKind::ComplementMc => 2 * m - 1,
                ExperimentKind::KComplementMc => 4 * self.need_k()? - 1,
                ExperimentKind::SparseUniquenessMc => (4 * self.need_k()? - 1).min(2 * m - 1),
                ExperimentKind::FmmRoundtripMc => next_valid_n(self.need_k()?),
                ExperimentKind::AmbiguityDemo => 2 * m - 2,
            },
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.m == 0 {
            return Err(Error::Config("M must be >= 1".into()));
        }
        let n = self.resolved_n()?;
        if n == 0 {
            return Err(Error::Config("N must be >= 1".into()));
        }
        if let Some(k) = self.k {
            if k > self.m {
                return Err(Error::Config(format!("k = {k} exceeds M = {}", self.m)));
            }
        }
        match self.kind {
            ExperimentKind::ComplementMc | ExperimentKind::AmbiguityDemo => {}
            ExperimentKind::KComplementMc | ExperimentKind::SparseUniquenessMc => {
                self.need_k()?;
            }
            ExperimentKind::FmmRoundtripMc => {
                self.need_k()?;
                if n > 2 * self.m {
                    return Err(Error::Config(format!(
                        "N = {n} exceeds the {} available frequencies for M = {}",
                        2 * self.m,
                        self.m
                    )));
                }
            }
        }
        if n > self.limits.max_n {
            return Err(Error::Config(format!(
                "N = {n} exceeds max_n = {}",
                self.limits.max_n
            )));
        }
        Ok(())
    }

    fn label(&self) -> String {
        let k = self.k.map(|k| format!(" k={k}")).unwrap_or_default();
        let n = self
            .resolved_n()
            .map(|n| n.to_string())
            .unwrap_or_else(|_| "?".into());
        format!("{} M={}{k} N={n} trials={} seed={}", self.kind.as_str(), self.m, self.trials, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub experiment: ExperimentKind,
    pub trial: usize,
    pub seed: u64,
    pub m: usize,
    pub k: Option<usize>,
    pub n: usize,
    pub success: bool,
    pub sparsity_found: Option<usize>,
    pub residual: Option<f64>,
    pub note: String,
    pub elapsed_us: u128,
}

impl TrialRecord {
    pub fn csv_header(timing: bool) -> &'static str {
        if timing {
            "experiment,trial,seed,M,k,N,success,sparsity_found,residual,note,elapsed_us"
        } else {
            "experiment,trial,seed,M,k,N,success,sparsity_found,residual,note"
        }
    }

    pub fn to_csv_row(&self, timing: bool) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let mut row = format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.experiment.as_str(),
            self.trial,
            self.seed,
            self.m,
            opt(self.k.map(|k| k.to_string())),
            self.n,
            self.success as u8,
            opt(self.sparsity_found.map(|s| s.to_string())),
            opt(self.residual.map(|r| format!("{r:e}"))),
            self.note.replace([',', '\n'], ";")
        );
        if timing {
            let _ = write!(row, ",{}", self.elapsed_us);
        }
        row
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub successes: usize,
    /// Whether the experiment's acceptance predicate holds.
    pub passed: bool,
    pub expectation: String,
}

impl ExperimentSummary {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.records.len().max(1) as f64
    }

    pub fn to_text(&self) -> String {
        format!(
            "{}: {}/{} success, expected {}: {}",
            self.config.label(),
            self.successes,
            self.records.len(),
            self.expectation,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Trial CSV for several experiments, with the version line on top.
pub fn records_to_csv<'a>(
    summaries: impl IntoIterator<Item = &'a ExperimentSummary>,
    timing: bool,
) -> String {
    let mut out = format!("{CSV_VERSION}\n{}\n", TrialRecord::csv_header(timing));
    for s in summaries {
        for r in &s.records {
            out.push_str(&r.to_csv_row(timing));
            out.push('\n');
        }
    }
    out
}

/// `k` distinct sorted support indices and standard normal values.
pub fn random_sparse_signal<R: RngCore>(rng: R, m: usize, k: usize) -> RealSignal {
    let mut normal = NormalSampler::new(rng);
    let supp = sample_indices(normal.rng_mut(), m, k);
    let mut v = vec![0.0; m];
    for i in supp {
        let mut z = 0.0;
        while z == 0.0 {
            z = normal.sample();
        }
        v[i] = z;
    }
    RealSignal::new(v)
}

/// Integer-valued `k`-sparse signal whose support differences are all
/// distinct, with values in `±1..=±max_abs`. Supports are grown greedily
/// along random orders of `0..m`.
pub fn random_collision_free_signal<R: RngCore>(
    rng: &mut R,
    m: usize,
    k: usize,
    max_abs: u64,
) -> Result<RealSignal> {
    if k > m || max_abs == 0 {
        return Err(Error::InvalidArgument(format!(
            "no {k}-sparse collision-free signal of length {m}"
        )));
    }
    for _ in 0..1000 {
        let order = {
            let mut p: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                p.swap(i, uniform_below(rng, i as u64 + 1) as usize);
            }
            p
        };
        let mut supp: Vec<usize> = Vec::with_capacity(k);
        let mut used = vec![false; m];
        for &c in &order {
            if supp.len() == k {
                break;
            }
            let fresh: Vec<usize> = supp.iter().map(|&s| s.abs_diff(c)).collect();
            let clash = fresh.iter().enumerate().any(|(a, &d)| {
                used[d] || fresh[..a].contains(&d)
            });
            if !clash {
                for d in fresh {
                    used[d] = true;
                }
                supp.push(c);
            }
        }
        if supp.len() == k {
            let mut v = vec![0.0; m];
            for i in supp {
                let mag = 1 + uniform_below(rng, max_abs);
                let sign = if rng.next_u64() & 1 == 1 { -1.0 } else { 1.0 };
                v[i] = sign * mag as f64;
            }
            let x = RealSignal::new(v);
            debug_assert!(find_collision(&x, CollisionRule::AllPairs).is_none());
            return Ok(x);
        }
    }
    Err(Error::InvalidArgument(format!(
        "could not place {k} collision-free indices in length {m}"
    )))
}

struct Outcome {
    success: bool,
    sparsity_found: Option<usize>,
    residual: Option<f64>,
    note: String,
}

impl Outcome {
    fn fail(note: impl Into<String>) -> Self {
        Outcome {
            success: false,
            sparsity_found: None,
            residual: None,
            note: note.into(),
        }
    }
}

fn run_trial(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<Outcome> {
    let m = cfg.m;
    let phi_seed = derive_seed(seed, 0);
    let signal_rng = || stream(derive_seed(seed, 1), 0);
    match cfg.kind {
        ExperimentKind::ComplementMc => {
            let phi = gaussian_ensemble(m, n, phi_seed)?;
            let v = has_complement_property_with(&phi, &cfg.limits)?;
            Ok(Outcome {
                success: v.holds(),
                sparsity_found: None,
                residual: None,
                note: if v.holds() { "holds" } else { "violated" }.into(),
            })
        }
        ExperimentKind::KComplementMc => {
            let d = (2 * cfg.need_k()?).min(m);
            let phi = gaussian_ensemble(m, n, phi_seed)?;
            let v = has_k_complement_property_with(&phi, d, &cfg.limits)?;
            Ok(Outcome {
                success: v.holds(),
                sparsity_found: None,
                residual: None,
                note: format!("order {d} {}", if v.holds() { "holds" } else { "violated" }),
            })
        }
        ExperimentKind::SparseUniquenessMc => {
            let k = cfg.need_k()?;
            let phi = gaussian_ensemble(m, n, phi_seed)?;
            let x0 = random_sparse_signal(signal_rng(), m, k);
            let y = intensity_measure(&phi, &x0)?;
            let mut opts = RecoveryOptions::new(k);
            opts.check_certificate = false;
            opts.limits = cfg.limits;
            let r = l0_recover_with(&phi, &y, &opts)?;
            let sol = r.solution.as_ref().expect("report carries a solution");
            let matches = equivalent_under_invariances(sol, &x0, InvarianceGroup::SignOnly);
            let tight = r.residual <= 1e-8 * y.norm();
            let mut note = String::new();
            if !matches {
                note.push_str("mismatch ");
            }
            if !r.alternates.is_empty() {
                let _ = write!(note, "{} alternates ", r.alternates.len());
            }
            if r.underdetermined {
                note.push_str("underdetermined ");
            }
            Ok(Outcome {
                success: matches && r.alternates.is_empty() && tight,
                sparsity_found: Some(r.sparsity_found),
                residual: Some(r.residual),
                note: note.trim_end().into(),
            })
        }
        ExperimentKind::FmmRoundtripMc => {
            let k = cfg.need_k()?;
            let mut rng = signal_rng();
            let x0 = random_collision_free_signal(&mut rng, m, k, 5)?;
            let freqs = if cfg.random_freqs {
                sample_indices(&mut stream(derive_seed(seed, 2), 0), 2 * m, n)
            } else {
                (0..n).collect()
            };
            let phi = fourier_rows(m, &freqs)?;
            let y = intensity_measure(&phi, &x0)?;
            let r = fmm_recover(&y, &freqs, m, k)?;
            let matches = equivalent_under_invariances(&r.solution, &x0, SIGNAL_GROUP);
            let mut note = r.conditions.verdict.as_str().to_string();
            if !matches {
                note.push_str(" mismatch");
            }
            if !r.is_unique() {
                note.push_str(" multiple");
            }
            Ok(Outcome {
                success: matches && r.is_unique(),
                sparsity_found: Some(r.solution.sparsity()),
                residual: Some(r.residual),
                note,
            })
        }
        ExperimentKind::AmbiguityDemo => {
            let phi = gaussian_ensemble(m, n, phi_seed)?;
            let v = has_complement_property_with(&phi, &cfg.limits)?;
            let Some(cert) = v.certificate() else {
                return Ok(Outcome::fail("property holds"));
            };
            let (x1, x2) = ambiguity_from_violation(&phi, cert)?;
            let y1 = intensity_measure(&phi, &x1)?;
            let y2 = intensity_measure(&phi, &x2)?;
            let gap = y1
                .values()
                .iter()
                .zip(y2.values())
                .fold(0.0f64, |g, (a, b)| g.max((a - b).abs()));
            let distinct = !equivalent_under_invariances(&x1, &x2, InvarianceGroup::SignOnly);
            Ok(Outcome {
                success: gap <= 1e-10 && distinct,
                sparsity_found: None,
                residual: Some(gap),
                note: if distinct { "" } else { "equivalent pair" }.into(),
            })
        }
    }
}

/// Expected outcome of every trial, or `None` when the experiment only
/// reports a rate.
fn expectation(cfg: &ExperimentConfig, n: usize) -> Option<bool> {
    let m = cfg.m;
    match cfg.kind {
        ExperimentKind::ComplementMc => Some(n >= 2 * m - 1),
        ExperimentKind::KComplementMc => {
            let d = (2 * cfg.k.unwrap_or(0)).min(m);
            Some(n + 1 >= 2 * d)
        }
        ExperimentKind::SparseUniquenessMc => {
            let k = cfg.k.unwrap_or(0);
            (n >= (4 * k).saturating_sub(1).min(2 * m - 1)).then_some(true)
        }
        ExperimentKind::FmmRoundtripMc => None,
        ExperimentKind::AmbiguityDemo => Some(true),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let n = cfg.resolved_n()?;
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(cfg.seed, t as u64);
            let start = Instant::now();
            let out = run_trial(cfg, n, seed).unwrap_or_else(|e| Outcome::fail(e.to_string()));
            TrialRecord {
                experiment: cfg.kind,
                trial: t,
                seed,
                m: cfg.m,
                k: cfg.k,
                n,
                success: out.success,
                sparsity_found: out.sparsity_found,
                residual: out.residual,
                note: out.note,
                elapsed_us: start.elapsed().as_micros(),
            }
        })
        .collect();
    let successes = records.iter().filter(|r| r.success).count();
    let (passed, expectation) = match expectation(cfg, n) {
        Some(true) => (successes == records.len(), "all".to_string()),
        Some(false) => (successes == 0, "none".to_string()),
        None if cfg.kind == ExperimentKind::FmmRoundtripMc => {
            // every trial whose hypotheses hold must round-trip
            let ok = records
                .iter()
                .all(|r| r.success || r.note.split(' ').next() != Some(FmmVerdict::Unique.as_str()));
            (ok, "all with hypotheses met".to_string())
        }
        None => (true, "rate only".to_string()),
    };
    let summary = ExperimentSummary {
        config: cfg.clone(),
        records,
        successes,
        passed,
        expectation,
    };
    if let Some(path) = &cfg.out {
        std::fs::write(path, records_to_csv([&summary], true))?;
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BatchSummary {
    pub experiments: Vec<ExperimentSummary>,
}

impl BatchSummary {
    pub fn passed(&self) -> bool {
        self.experiments.iter().all(|e| e.passed)
    }

    pub fn to_csv(&self, timing: bool) -> String {
        records_to_csv(&self.experiments, timing)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.experiments {
            out.push_str(&e.to_text());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    experiment: Vec<RawExperiment>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    #[serde(rename = "type")]
    kind: ExperimentKind,
    #[serde(alias = "m", rename = "M")]
    m: usize,
    k: Option<usize>,
    #[serde(alias = "n", rename = "N", default)]
    n: CountSpec,
    trials: Option<usize>,
    seed: Option<u64>,
    max_n: Option<usize>,
    max_k_choose: Option<u128>,
    rank_rtol: Option<f64>,
    #[serde(default)]
    random_freqs: bool,
    out: Option<PathBuf>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses a TOML list of `[[experiment]]` tables.
pub fn parse_config(text: &str) -> Result<Vec<ExperimentConfig>> {
    let raw: RawFile = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map(|s| line_of(text, s.start)).unwrap_or(0),
        msg: e.message().to_string(),
    })?;
    let mut out = Vec::with_capacity(raw.experiment.len());
    for r in raw.experiment {
        let mut limits = CheckLimits::default();
        if let Some(v) = r.max_n {
            limits.max_n = v;
        }
        if let Some(v) = r.max_k_choose {
            limits.max_k_choose = v;
        }
        if let Some(v) = r.rank_rtol {
            limits.rank_rtol = v;
        }
        let cfg = ExperimentConfig {
            kind: r.kind,
            m: r.m,
            k: r.k,
            n: r.n,
            trials: r.trials.unwrap_or(100),
            seed: r.seed.unwrap_or(0),
            limits,
            random_freqs: r.random_freqs,
            out: r.out,
        };
        cfg.validate()?;
        out.push(cfg);
    }
    Ok(out)
}

pub fn run_config_file(path: &Path) -> Result<BatchSummary> {
    let text = std::fs::read_to_string(path)?;
    run_config_text(&text)
}

pub fn run_config_text(text: &str) -> Result<BatchSummary> {
    let configs = parse_config(text)?;
    let experiments = configs
        .iter()
        .map(run_experiment)
        .collect::<Result<Vec<_>>>()?;
    Ok(BatchSummary { experiments })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_examples() {
        let ok = ExperimentConfig::new(ExperimentKind::ComplementMc, 4)
            .with_n(7)
            .with_seed(1);
        let s = run_experiment(&ok).unwrap();
        assert_eq!(s.successes, 100);
        assert!(s.passed);
        let short = ok.clone().with_n(6);
        let s = run_experiment(&short).unwrap();
        assert_eq!(s.successes, 0);
        assert!(s.passed);
    }

    #[test]
    fn csv_is_deterministic_without_timing() {
        let cfg = ExperimentConfig::new(ExperimentKind::SparseUniquenessMc, 6)
            .with_k(2)
            .with_trials(12)
            .with_seed(9);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(records_to_csv([&a], false), records_to_csv([&b], false));
        let csv = records_to_csv([&a], true);
        assert!(csv.starts_with(CSV_VERSION));
        assert!(csv.lines().nth(1).unwrap().ends_with("note,elapsed_us"));
        assert_eq!(csv.lines().count(), 14);
    }

    #[test]
    fn collision_free_generator() {
        let mut rng = stream(5, 0);
        for k in 0..=5 {
            for _ in 0..50 {
                let x = random_collision_free_signal(&mut rng, 16, k, 5).unwrap();
                assert_eq!(x.sparsity(), k);
                assert!(x.is_integer_valued());
                assert!(x.values().iter().all(|v| v.abs() <= 5.0));
                assert!(find_collision(&x, CollisionRule::AllPairs).is_none());
            }
        }
        // no 5 marks with distinct differences fit in length 11
        assert!(random_collision_free_signal(&mut rng, 11, 5, 5).is_err());
    }

    #[test]
    fn config_parsing() {
        assert!(run_config_text("").unwrap().experiments.is_empty());
        let text = r#"
[[experiment]]
type = "complement_mc"
M = 3
N = 5
trials = 4
seed = 2

[[experiment]]
type = "fmm_roundtrip_mc"
M = 5
k = 2
N = "auto"
trials = 3
"#;
        let cfgs = parse_config(text).unwrap();
        assert_eq!(cfgs.len(), 2);
        assert_eq!(cfgs[1].resolved_n().unwrap(), 7);
        let batch = run_config_text(text).unwrap();
        assert!(batch.passed());
        assert_eq!(batch.to_csv(false).lines().count(), 2 + 4 + 3);

        match parse_config("[[experiment]]\ntype = \"complement_mc\"\nM = \"x\"\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config("[[experiment]]\ntype = \"nope\"\nM = 2\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_config("[[experiment]]\ntype = \"k_complement_mc\"\nM = 4\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn csv_row_escapes_note() {
        let r = TrialRecord {
            experiment: ExperimentKind::AmbiguityDemo,
            trial: 0,
            seed: 1,
            m: 2,
            k: None,
            n: 2,
            success: true,
            sparsity_found: None,
            residual: Some(0.0),
            note: "a,b".into(),
            elapsed_us: 5,
        };
        assert_eq!(r.to_csv_row(false), "ambiguity_demo,0,1,2,,2,1,,0e0,a;b");
        assert_eq!(r.to_csv_row(true), "ambiguity_demo,0,1,2,,2,1,,0e0,a;b,5");
    }
}
