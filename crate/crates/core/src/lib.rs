//! Executable uniqueness theory for sparse phase retrieval.

pub mod complement;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod fmm;
pub mod lifted;
mod linalg;
pub mod rng;
pub mod signal;

pub use complement::{
    ambiguity_from_violation, has_complement_property, has_k_complement_property, CheckLimits,
    FieldVector, Verdict, ViolationCertificate,
};
pub use ensemble::{
    fourier_rows, gaussian_ensemble, intensity_measure, EnsembleKind, IntensityMeasurements,
    MeasurementEnsemble,
};
pub use error::{Error, Result};
pub use experiment::{
    run_config_file, run_experiment, BatchSummary, ExperimentConfig, ExperimentKind,
    ExperimentSummary, TrialRecord,
};
pub use fmm::{
    check_fmm_conditions, fmm_recover, next_valid_n, recover_autocorrelation,
    signal_from_autocorrelation, FmmConditionReport, FmmReport, FmmVerdict,
    PaddedAutocorrArrangement,
};
pub use lifted::{
    l0_recover, l0_recover_with, verify_uniqueness, RecoveryOptions, RecoveryReport, Uniqueness,
};
pub use signal::{
    autocorrelation, canonicalize, equivalent_under_invariances, is_collision_free,
    Autocorrelation, CollisionRule, InvarianceAction, InvarianceGroup, RealSignal, ShiftMode, Sign,
};
