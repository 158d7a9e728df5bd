//! End-to-end verification: brute-force sign checks, the closed-form
//! threshold inequalities, bound and identity sweeps, the modular identity
//! suite and the exact-formula oracle, with JSON and CSV artifacts.

mod pipeline;
mod sign;
mod sweeps;

pub use pipeline::{
    exact_oracle, full_pipeline, threshold_report, threshold_sample_points, Crossover, OracleReport,
    PhaseOutcome, PipelineConfig, PipelineReport, ThresholdPoint, ThresholdReport, MODULAR_PREC,
};
pub use sign::{
    published_threshold, report_from_series, verify_conjecture, Mismatch, MismatchKind, SignReport,
    ThresholdRecord, MIN_N_MAX,
};
pub use sweeps::{
    run_bound_sweeps, run_bound_sweeps_with, BoundSweepReport, CheckTally, NegativeControl, SweepConfig,
    IDENTITY_K_MAX, IDENTITY_TOLERANCE, WEIL_M_VALUES,
};
