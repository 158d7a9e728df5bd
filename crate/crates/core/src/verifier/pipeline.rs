use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::sign::{verify_conjecture, SignReport, MIN_N_MAX};
use super::sweeps::{run_bound_sweeps_with, BoundSweepReport, SweepConfig};
use crate::arithmetic::write_sweep_csv;
use crate::error::{domain, Result};
use crate::exactformula::{c_exact_many, threshold_crossover, threshold_lhs_with, ExactEval, ThresholdForm};
use crate::modularcheck::{validation_suite, ValidationRecord};
use crate::qseries::q10_series;
use crate::{Delta, ErrReal};

/// Working precision of the modular identity checks.
pub const MODULAR_PREC: u32 = 256;

#[derive(Debug, Clone, Serialize)]
pub struct PipelineConfig {
    pub deltas: Vec<Delta>,
    /// Brute-force range `0..=n_max` for the sign check.
    pub n_max: u64,
    pub sweep_k_max: u64,
    pub identity_k_max: u64,
    pub sweep_n_samples: u64,
    /// Inclusive range compared against the exact formula.
    pub oracle_range: [u64; 2],
    pub modular_seed: u64,
    pub precision_bits: u32,
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            deltas: Delta::BOTH.to_vec(),
            n_max: 3000,
            sweep_k_max: 500,
            identity_k_max: 200,
            sweep_n_samples: 20,
            oracle_range: [10, 300],
            modular_seed: 2024,
            precision_bits: 128,
            output_dir: None,
        }
    }
}

/// Outcome of one pipeline phase; `summary` holds the phase's own numbers.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseOutcome {
    pub name: String,
    pub pass: bool,
    pub seconds: f64,
    pub summary: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdPoint {
    pub delta: Delta,
    pub n: u64,
    pub form: ThresholdForm,
    pub lhs: String,
    pub lhs_err: f64,
    pub below_one: bool,
}

/// First `n` at which each closed form drops below 1.
#[derive(Debug, Clone, Serialize)]
pub struct Crossover {
    pub delta: Delta,
    pub form: ThresholdForm,
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub points: Vec<ThresholdPoint>,
    pub crossovers: Vec<Crossover>,
    pub pass: bool,
}

/// Points at which the published closed form must be below 1.
pub fn threshold_sample_points(delta: Delta) -> &'static [u64] {
    match delta {
        Delta::Plus => &[2929, 3000, 4000, 5000, 10_000, 100_000],
        Delta::Minus => &[2234, 2500, 5000, 10_000, 100_000],
    }
}

/// The published inequality at its sample points, and where each form of
/// the inequality first holds on `2000..=3500`.
pub fn threshold_report(deltas: &[Delta], prec: u32) -> Result<ThresholdReport> {
    let one = ErrReal::one(prec);
    let mut points = Vec::new();
    let mut crossovers = Vec::new();
    for &delta in deltas {
        for &n in threshold_sample_points(delta) {
            let v = threshold_lhs_with(delta, n, ThresholdForm::Published, prec)?;
            points.push(ThresholdPoint {
                delta,
                n,
                form: ThresholdForm::Published,
                lhs: v.to_string_digits(15),
                lhs_err: v.rad_f64(),
                below_one: v.certainly_lt(&one),
            });
        }
        for form in [ThresholdForm::Published, ThresholdForm::Corrected] {
            crossovers.push(Crossover { delta, form, n: threshold_crossover(delta, form, 2000, 3500, prec)? });
        }
    }
    let pass = points.iter().all(|p| p.below_one);
    Ok(ThresholdReport { points, crossovers, pass })
}

/// The exact formula against brute force over a range of `n`.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub delta: Delta,
    pub range: [u64; 2],
    pub evaluations: u64,
    /// Rounded partial sum equals the brute-force coefficient.
    pub matches: u64,
    /// Rounding certified by the error and tail bounds.
    pub definitive: u64,
    pub max_gap: f64,
    pub max_tail_bound: f64,
    pub mismatched_n: Vec<u64>,
    #[serde(skip)]
    pub evals: Vec<ExactEval>,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.matches == self.evaluations
    }

    pub fn all_definitive(&self) -> bool {
        self.definitive == self.evaluations
    }
}

pub fn exact_oracle(delta: Delta, range: [u64; 2], prec: u32) -> Result<OracleReport> {
    let [lo, hi] = range;
    if lo > hi {
        return Err(domain(format!("empty oracle range {lo}..={hi}")));
    }
    let ns: Vec<u64> = (lo..=hi).collect();
    let evals = c_exact_many(delta, &ns, None, prec)?;
    let series = q10_series(delta, hi as usize);
    let mismatched_n: Vec<u64> =
        evals.iter().filter(|e| &e.rounded != series.coeff(e.n as usize)).map(|e| e.n).collect();
    Ok(OracleReport {
        delta,
        range,
        evaluations: evals.len() as u64,
        matches: (evals.len() - mismatched_n.len()) as u64,
        definitive: evals.iter().filter(|e| e.definitive).count() as u64,
        max_gap: evals.iter().map(|e| e.gap).fold(0.0, f64::max),
        max_tail_bound: evals.iter().map(|e| e.tail_bound).fold(0.0, f64::max),
        mismatched_n,
        evals,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    pub phases: Vec<PhaseOutcome>,
    pub sign_reports: Vec<SignReport>,
    pub pass: bool,
}

impl PipelineReport {
    pub fn failed_phases(&self) -> Vec<&str> {
        self.phases.iter().filter(|p| !p.pass).map(|p| p.name.as_str()).collect()
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn write_oracle_csv(dir: &Path, reports: &[OracleReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(dir.join("exact_oracle.csv"))?;
    for r in reports {
        for e in &r.evals {
            w.serialize(e)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Runs every phase in order: sign verification per `delta`, closed-form
/// thresholds, bound and identity sweeps, the modular validation suite and
/// the exact-formula oracle. Artifacts go to `output_dir` when set.
pub fn full_pipeline(config: &PipelineConfig) -> Result<PipelineReport> {
    if config.n_max < MIN_N_MAX {
        return Err(domain(format!("n_max must be at least {MIN_N_MAX}, got {}", config.n_max)));
    }
    if config.deltas.is_empty() {
        return Err(domain("no delta selected"));
    }
    let prec = config.precision_bits;
    let dir = config.output_dir.as_deref();
    if let Some(d) = dir {
        fs::create_dir_all(d)?;
    }
    let mut phases = Vec::new();
    let mut sign_reports = Vec::new();

    for &delta in &config.deltas {
        let start = Instant::now();
        let r = verify_conjecture(delta, config.n_max, prec)?;
        phases.push(PhaseOutcome {
            name: format!("sign_pattern[{delta}]"),
            pass: r.pass,
            seconds: start.elapsed().as_secs_f64(),
            summary: json!({
                "range": r.range,
                "zero_set_found": r.zero_set_found,
                "mismatches": r.mismatches.len(),
            }),
        });
        if let Some(d) = dir {
            let file = if delta == Delta::Plus { "sign_report_plus.json" } else { "sign_report_minus.json" };
            write_json(d, file, &r)?;
        }
        sign_reports.push(r);
    }

    let start = Instant::now();
    let t = threshold_report(&config.deltas, prec)?;
    phases.push(PhaseOutcome {
        name: "thresholds".to_owned(),
        pass: t.pass,
        seconds: start.elapsed().as_secs_f64(),
        summary: serde_json::to_value(&t.crossovers)?,
    });
    if let Some(d) = dir {
        write_json(d, "thresholds.json", &t)?;
    }

    let start = Instant::now();
    let cfg = SweepConfig {
        k_max: config.sweep_k_max,
        identity_k_max: config.identity_k_max.min(config.sweep_k_max),
        n_samples: config.sweep_n_samples,
        prec,
    };
    let sweeps: BoundSweepReport = run_bound_sweeps_with(&cfg)?;
    phases.push(PhaseOutcome {
        name: "bound_sweeps".to_owned(),
        pass: sweeps.pass,
        seconds: start.elapsed().as_secs_f64(),
        summary: json!({
            "checks": sweeps.tallies.iter().map(|t| t.checks).sum::<u64>(),
            "failures": sweeps.tallies.iter().map(|t| t.failures).sum::<u64>(),
            "identity_grid_points": sweeps.identity_grid_points,
        }),
    });
    if let Some(d) = dir {
        write_json(d, "bound_sweeps.json", &sweeps)?;
        write_sweep_csv(&sweeps.kj_rows, fs::File::create(d.join("kj_bounds.csv"))?)?;
    }

    let start = Instant::now();
    let records: Vec<ValidationRecord> = validation_suite(config.modular_seed, MODULAR_PREC.max(prec));
    let failures = records.iter().filter(|r| !r.pass).count();
    phases.push(PhaseOutcome {
        name: "modular".to_owned(),
        pass: failures == 0,
        seconds: start.elapsed().as_secs_f64(),
        summary: json!({"checks": records.len(), "failures": failures}),
    });
    if let Some(d) = dir {
        write_json(d, "modular_validation.json", &records)?;
    }

    let start = Instant::now();
    let oracles =
        config.deltas.iter().map(|&delta| exact_oracle(delta, config.oracle_range, prec)).collect::<Result<Vec<_>>>()?;
    phases.push(PhaseOutcome {
        name: "exact_oracle".to_owned(),
        pass: oracles.iter().all(OracleReport::pass),
        seconds: start.elapsed().as_secs_f64(),
        summary: serde_json::to_value(&oracles)?,
    });
    if let Some(d) = dir {
        write_json(d, "exact_oracle.json", &oracles)?;
        write_oracle_csv(d, &oracles)?;
    }

    let pass = phases.iter().all(|p| p.pass);
    let report = PipelineReport { config: config.clone(), phases, sign_reports, pass };
    if let Some(d) = dir {
        let summary = json!({"config": report.config, "phases": report.phases, "pass": report.pass});
        write_json(d, "pipeline.json", &summary)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> PipelineConfig {
        PipelineConfig {
            deltas: vec![Delta::Plus],
            n_max: 60,
            sweep_k_max: 20,
            identity_k_max: 20,
            sweep_n_samples: 2,
            oracle_range: [10, 20],
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn small_pipeline_passes_with_one_report() {
        let r = full_pipeline(&small()).unwrap();
        assert!(r.pass, "{:?}", r.failed_phases());
        assert_eq!(r.sign_reports.len(), 1);
    }

    #[test]
    fn rejects_short_range() {
        let cfg = PipelineConfig { n_max: 10, ..small() };
        assert!(full_pipeline(&cfg).is_err());
    }
}
