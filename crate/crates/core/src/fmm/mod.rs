//! Recovery from Fourier magnitude measurements: measurements to sparse
//! autocorrelation, then autocorrelation to signal, up to sign, mirroring
//! and shifts.

mod autocorr;
mod conditions;
mod turnpike;

pub use autocorr::{
    recover_autocorrelation, AutocorrOptions, AutocorrRecovery, PaddedAutocorrArrangement,
    RecoveryMethod,
};
pub use conditions::{
    autocorrelation_sparsity, check_fmm_conditions, check_fmm_conditions_with, is_prime,
    measurement_bound, next_valid_n, ConditionOptions, FmmConditionReport, FmmVerdict, K6Case,
};
pub use turnpike::{
    signal_from_autocorrelation, signal_from_autocorrelation_with, SignalRecovery,
    TurnpikeOptions, SIGNAL_GROUP,
};

use crate::ensemble::{fourier_rows, intensity_measure, IntensityMeasurements};
use crate::error::{Error, Result};
use crate::signal::RealSignal;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FmmOptions {
    /// Arrangement sparsity cap; `k^2 - k + 1` when `None`.
    pub s_max: Option<usize>,
    pub exploit_symmetry: bool,
    pub conditions: ConditionOptions,
    pub turnpike: TurnpikeOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FmmReport {
    /// Hypotheses evaluated on the recovered signal.
    pub conditions: FmmConditionReport,
    pub autocorrelation: AutocorrRecovery,
    pub signal: SignalRecovery,
    /// Canonical recovered signal.
    pub solution: RealSignal,
    /// `|A(solution) - y|_2`.
    pub residual: f64,
    /// False when the hypotheses hold yet a stage found several solutions.
    pub consistent: bool,
}

impl FmmReport {
    pub fn autocorrelation_unique(&self) -> bool {
        self.autocorrelation.is_unique()
    }

    pub fn signal_unique(&self) -> bool {
        !self.signal.multiple()
    }

    pub fn is_unique(&self) -> bool {
        self.autocorrelation_unique() && self.signal_unique()
    }

    pub fn to_record(&self) -> String {
        let mut out = self.conditions.to_record();
        out.push_str(&format!("solution: {}\n", self.solution.to_csv_row()));
        for a in &self.signal.alternates {
            out.push_str(&format!("alternate: {}\n", a.to_csv_row()));
        }
        out.push_str(&format!(
            "autocorrelation_unique: {}\n",
            self.autocorrelation_unique()
        ));
        out.push_str(&format!(
            "arrangement: {}\n",
            crate::signal::join_f64(self.autocorrelation.arrangement.as_slice())
        ));
        out.push_str(&format!("signal_unique: {}\n", self.signal_unique()));
        out.push_str(&format!("residual: {:e}\n", self.residual));
        out.push_str(&format!("consistent: {}\n", self.consistent));
        out
    }
}

pub fn fmm_recover(
    y: &IntensityMeasurements,
    freqs: &[usize],
    m: usize,
    k: usize,
) -> Result<FmmReport> {
    fmm_recover_with(y, freqs, m, k, &FmmOptions::default())
}

pub fn fmm_recover_with(
    y: &IntensityMeasurements,
    freqs: &[usize],
    m: usize,
    k: usize,
    opts: &FmmOptions,
) -> Result<FmmReport> {
    let mut aopts = AutocorrOptions::new(opts.s_max.unwrap_or(autocorrelation_sparsity(k).max(1)));
    aopts.exploit_symmetry = opts.exploit_symmetry;
    let autocorrelation = recover_autocorrelation(y, freqs, m, &aopts)?;

    // the first mirror-symmetric candidate; several only when the
    // autocorrelation stage is ambiguous
    let mut last_err = None;
    let mut lags = None;
    for cand in autocorrelation.candidates() {
        match cand.to_autocorrelation(1e-8) {
            Ok(a) => {
                lags = Some(a);
                break;
            }
            Err(e) => last_err = Some(e),
        }
    }
    let lags = match (lags, last_err) {
        (Some(a), _) => a,
        (None, Some(e)) => return Err(e),
        (None, None) => unreachable!("at least one candidate"),
    };
    if lags.lag(0) < 0.0 {
        return Err(Error::NegativeEnergy(lags.lag(0)));
    }
    let signal = signal_from_autocorrelation_with(&lags, k, &opts.turnpike)?;
    let solution = signal.signal.clone();
    let phi = fourier_rows(m, freqs)?;
    let fitted = intensity_measure(&phi, &solution)?;
    let residual = fitted
        .values()
        .iter()
        .zip(y.values())
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let conditions = check_fmm_conditions_with(&solution, freqs.len(), &opts.conditions);
    let unique = autocorrelation.is_unique() && !signal.multiple();
    let consistent = unique || conditions.verdict != FmmVerdict::Unique;
    Ok(FmmReport {
        conditions,
        autocorrelation,
        signal,
        solution,
        residual,
        consistent,
    })
}
