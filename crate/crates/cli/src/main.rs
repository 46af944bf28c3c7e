//! `sparsepr`: uniqueness checks, exact recovery and Monte-Carlo experiments
//! for sparse phase retrieval.
//!
//! Exit codes: 0 when the checked property holds or the run passes, 1 when
//! it is violated or fails, 2 for usage, configuration and input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sparsepr::complement::{has_complement_property_with, has_k_complement_property_with};
use sparsepr::experiment::{parse_config, run_experiment, BatchSummary, CountSpec};
use sparsepr::fmm::{fmm_recover_with, next_valid_n, FmmOptions};
use sparsepr::lifted::{l0_recover_with, RecoveryOptions};
use sparsepr::rng::{sample_indices, stream};
use sparsepr::{
    ambiguity_from_violation, fourier_rows, gaussian_ensemble, intensity_measure, CheckLimits,
    Error, ExperimentConfig, ExperimentKind, IntensityMeasurements, MeasurementEnsemble,
    RealSignal,
};

#[derive(Debug, Parser)]
#[command(name = "sparsepr", version, about = "Uniqueness checks and exact recovery for sparse phase retrieval")]
struct Cli {
    /// Base seed for generated ensembles and experiments.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide the complement property of an ensemble.
    CheckComplement {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Decide the k-complement property of an ensemble.
    CheckKComplement {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long)]
        k: usize,
    },
    /// Sparsest real signal matching intensity measurements.
    Recover {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        data: DataArgs,
        /// Largest sparsity searched (default: sparsity of --signal, else M).
        #[arg(long)]
        kmax: Option<usize>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Recover a signal from Fourier magnitude measurements.
    Fmm {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Frequency list `0,1,2`, `auto-prime`, or `random:N`.
        #[arg(long, default_value = "auto-prime")]
        freqs: String,
        #[command(flatten)]
        data: DataArgs,
        /// Solve for the nonnegative lags only.
        #[arg(long)]
        exploit_symmetry: bool,
    },
    /// Run a Monte-Carlo experiment or a TOML batch file.
    Experiment {
        /// TOML file of `[[experiment]]` tables.
        #[arg(long, conflicts_with = "kind")]
        config: Option<PathBuf>,
        /// Experiment type, e.g. complement_mc.
        #[arg(long = "type", value_name = "TYPE")]
        kind: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Measurement count (default: derived from the experiment).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Omit the timing column so identical runs give identical CSV.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Construct two inequivalent signals with equal measurements.
    Ambiguity {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Debug, Args)]
struct EnsembleArgs {
    /// Ensemble CSV file.
    #[arg(long, conflicts_with_all = ["m", "n"])]
    ensemble: Option<PathBuf>,
    /// Signal length of a seeded Gaussian ensemble.
    #[arg(long, requires = "n")]
    m: Option<usize>,
    /// Number of Gaussian measurement vectors.
    #[arg(long, requires = "m")]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct CapArgs {
    /// Largest number of measurement vectors accepted by the checker.
    #[arg(long)]
    max_n: Option<usize>,
    /// Largest number of coordinate subsets visited by the checker.
    #[arg(long)]
    max_k_choose: Option<u128>,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Measured intensities, comma separated.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "signal")]
    y: Option<String>,
    /// Ground-truth signal to measure, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    signal: Option<String>,
}

impl CapArgs {
    fn limits(&self) -> CheckLimits {
        let mut l = CheckLimits::default();
        if let Some(v) = self.max_n {
            l.max_n = v;
        }
        if let Some(v) = self.max_k_choose {
            l.max_k_choose = v;
        }
        l
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Predicate(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoSolution(_) => Failure::Predicate(e.to_string()),
            other => Failure::Usage(other.into()),
        }
    }
}

struct Output {
    body: String,
    ok: bool,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> anyhow::Result<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| anyhow!("invalid {what} entry '{t}'"))
        })
        .collect()
}

fn load_ensemble(args: &EnsembleArgs, seed: u64) -> anyhow::Result<MeasurementEnsemble> {
    if let Some(path) = &args.ensemble {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(MeasurementEnsemble::from_csv(&text)?);
    }
    match (args.m, args.n) {
        (Some(m), Some(n)) => Ok(gaussian_ensemble(m, n, seed)?),
        _ => bail!("give --ensemble FILE or --m M --n N"),
    }
}

fn measurements(
    data: &DataArgs,
    phi: &MeasurementEnsemble,
) -> anyhow::Result<(IntensityMeasurements, Option<RealSignal>)> {
    match (&data.y, &data.signal) {
        (Some(y), None) => Ok((IntensityMeasurements::new(parse_list(y, "y")?, phi.id())?, None)),
        (None, Some(x)) => {
            let x = RealSignal::new(parse_list(x, "signal")?);
            Ok((intensity_measure(phi, &x)?, Some(x)))
        }
        _ => bail!("give exactly one of --y or --signal"),
    }
}

fn resolve_freqs(spec: &str, m: usize, k: usize, seed: u64) -> anyhow::Result<Vec<usize>> {
    if spec == "auto-prime" {
        let n = next_valid_n(k);
        if n > 2 * m {
            bail!("auto-prime needs N = {n} frequencies but only {} exist for M = {m}", 2 * m);
        }
        return Ok((0..n).collect());
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let n: usize = rest
            .parse()
            .map_err(|_| anyhow!("invalid frequency count '{rest}'"))?;
        if n > 2 * m {
            bail!("cannot draw {n} distinct frequencies from 0..{}", 2 * m);
        }
        return Ok(sample_indices(&mut stream(seed, 0), 2 * m, n));
    }
    parse_list(spec, "frequency")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::CheckComplement { ensemble, caps } => {
            let phi = load_ensemble(ensemble, cli.seed)?;
            let v = has_complement_property_with(&phi, &caps.limits())?;
            Ok(verdict_output(&phi, &v, None, csv))
        }
        Command::CheckKComplement { ensemble, caps, k } => {
            let phi = load_ensemble(ensemble, cli.seed)?;
            let v = has_k_complement_property_with(&phi, *k, &caps.limits())?;
            Ok(verdict_output(&phi, &v, Some(*k), csv))
        }
        Command::Recover {
            ensemble,
            data,
            kmax,
            caps,
        } => {
            let phi = load_ensemble(ensemble, cli.seed)?;
            let (y, truth) = measurements(data, &phi)?;
            let k_max = kmax
                .or(truth.as_ref().map(|x| x.sparsity()))
                .unwrap_or(phi.dim());
            let mut opts = RecoveryOptions::new(k_max);
            opts.limits = caps.limits();
            let r = l0_recover_with(&phi, &y, &opts)?;
            let body = if csv {
                format!(
                    "sparsity_found,alternates,residual,certificate,solution\n{},{},{:e},{},\"{}\"\n",
                    r.sparsity_found,
                    r.alternates.len(),
                    r.residual,
                    match r.certificate_checked {
                        Some(true) => "holds",
                        Some(false) => "violated",
                        None => "unchecked",
                    },
                    r.solution.as_ref().map(|s| s.to_csv_row()).unwrap_or_default()
                )
            } else {
                r.to_record()
            };
            Ok(Output { body, ok: true })
        }
        Command::Fmm {
            m,
            k,
            freqs,
            data,
            exploit_symmetry,
        } => {
            let freqs = resolve_freqs(freqs, *m, *k, cli.seed)?;
            let phi = fourier_rows(*m, &freqs)?;
            let (y, _) = measurements(data, &phi)?;
            let opts = FmmOptions {
                exploit_symmetry: *exploit_symmetry,
                ..Default::default()
            };
            let r = fmm_recover_with(&y, &freqs, *m, *k, &opts)?;
            let body = if csv {
                format!(
                    "M,k,N,verdict,autocorrelation_unique,signal_unique,consistent,residual,solution\n{},{},{},{},{},{},{},{:e},\"{}\"\n",
                    m,
                    k,
                    freqs.len(),
                    r.conditions.verdict.as_str(),
                    r.autocorrelation_unique(),
                    r.signal_unique(),
                    r.consistent,
                    r.residual,
                    r.solution.to_csv_row()
                )
            } else {
                let list: Vec<String> = freqs.iter().map(|f| f.to_string()).collect();
                format!("freqs: {}\n{}", list.join(","), r.to_record())
            };
            Ok(Output {
                body,
                ok: r.consistent,
            })
        }
        Command::Experiment {
            config,
            kind,
            m,
            k,
            n,
            trials,
            no_timing,
            caps,
        } => {
            let configs = match (config, kind) {
                (Some(path), _) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    parse_config(&text).map_err(|e| Failure::Usage(e.into()))?
                }
                (None, Some(kind)) => {
                    let m = m.ok_or_else(|| anyhow!("--m is required with --type"))?;
                    let mut cfg = ExperimentConfig::new(ExperimentKind::parse(kind)?, m)
                        .with_trials(*trials)
                        .with_seed(cli.seed);
                    cfg.k = *k;
                    if let Some(n) = n {
                        cfg.n = CountSpec::Fixed(*n);
                    }
                    cfg.limits = caps.limits();
                    cfg.validate()?;
                    vec![cfg]
                }
                (None, None) => return Err(anyhow!("give --config FILE or --type TYPE").into()),
            };
            let experiments = configs
                .iter()
                .map(run_experiment)
                .collect::<Result<Vec<_>, _>>()?;
            let batch = BatchSummary { experiments };
            let body = if csv || cli.out.is_some() {
                eprint!("{}", batch.to_text());
                batch.to_csv(!no_timing)
            } else {
                batch.to_text()
            };
            Ok(Output {
                body,
                ok: batch.passed(),
            })
        }
        Command::Ambiguity { ensemble, caps } => {
            let phi = load_ensemble(ensemble, cli.seed)?;
            let v = has_complement_property_with(&phi, &caps.limits())?;
            let Some(cert) = v.certificate() else {
                return Err(Failure::Predicate(
                    "the complement property holds: no ambiguous pair exists".into(),
                ));
            };
            let (x1, x2) = ambiguity_from_violation(&phi, cert)?;
            let y1 = intensity_measure(&phi, &x1)?;
            let y2 = intensity_measure(&phi, &x2)?;
            let gap = y1
                .values()
                .iter()
                .zip(y2.values())
                .fold(0.0f64, |g, (a, b)| g.max((a - b).abs()));
            let join = |v: &[f64]| {
                v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
            };
            let body = if csv {
                format!(
                    "x1,x2,max_gap\n\"{}\",\"{}\",{gap:e}\n",
                    x1.to_csv_row(),
                    x2.to_csv_row()
                )
            } else {
                format!(
                    "{}x1: {}\nx2: {}\ny1: {}\ny2: {}\nmax_gap: {gap:e}\n",
                    cert.to_record(),
                    x1.to_csv_row(),
                    x2.to_csv_row(),
                    join(y1.values()),
                    join(y2.values())
                )
            };
            Ok(Output { body, ok: true })
        }
    }
}

fn verdict_output(
    phi: &MeasurementEnsemble,
    v: &sparsepr::Verdict,
    k: Option<usize>,
    csv: bool,
) -> Output {
    let body = if csv {
        let (s, kk) = match v.certificate() {
            Some(c) => (
                c.s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
                c.k_set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
            ),
            None => (String::new(), String::new()),
        };
        format!(
            "ensemble,N,dim,order,holds,S,K\n{},{},{},{},{},{s},{kk}\n",
            phi.id(),
            phi.count(),
            phi.dim(),
            k.unwrap_or(phi.dim()),
            v.holds()
        )
    } else {
        format!("ensemble: {}\n{}", phi.id(), v.to_record())
    };
    Output {
        body,
        ok: v.holds(),
    }
}

fn emit(cli: &Cli, body: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be >= 1");
            return ExitCode::from(2);
        }
        builder = builder.num_threads(w);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| run(&cli));
    match result {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.body) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Predicate(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
