use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use qsign_core::arithmetic::write_sweep_csv;
use qsign_core::exactformula::ExactEval;
use qsign_core::modularcheck::ValidationRecord;
use qsign_core::qseries::SeriesExport;
use qsign_core::verifier::{BoundSweepReport, PipelineReport, SignReport, ThresholdPoint};
use qsign_core::Result;
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// Command output, ready to be written out.
pub struct Rendered(String);

impl Rendered {
    pub fn emit(&self, path: Option<&Path>) -> std::io::Result<()> {
        match path {
            Some(p) => std::fs::write(p, &self.0),
            None => std::io::stdout().lock().write_all(self.0.as_bytes()),
        }
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Rendered> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(Rendered(s))
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Rendered> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<Rendered> {
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(Rendered(String::from_utf8(bytes).expect("csv output is utf-8")))
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn series(export: &SeriesExport, format: Format) -> Result<Rendered> {
    match format {
        Format::Json => to_json(export),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                n: usize,
                coefficient: &'a str,
            }
            to_csv(export.coeffs.iter().enumerate().map(|(n, c)| Row { n, coefficient: c }))
        }
        Format::Plain => {
            let mut s = String::new();
            for (n, c) in export.coeffs.iter().enumerate() {
                writeln!(s, "{n} {c}").unwrap();
            }
            Ok(Rendered(s))
        }
    }
}

pub fn exact(evals: &[ExactEval], many: bool, format: Format) -> Result<Rendered> {
    match format {
        Format::Json if many => to_json(evals),
        Format::Json => to_json(&evals[0]),
        Format::Csv => to_csv(evals),
        Format::Plain => {
            let mut s = String::new();
            for e in evals {
                writeln!(
                    s,
                    "c({}, {}) ~ {} (value {:.6}, err {:.3e}, tail {:.3e}, k_max {}): {}",
                    e.delta,
                    e.n,
                    e.rounded,
                    e.value,
                    e.err,
                    e.tail_bound,
                    e.k_max,
                    if e.definitive { "definitive" } else { "not definitive" }
                )
                .unwrap();
            }
            Ok(Rendered(s))
        }
    }
}

pub fn sign_report(r: &SignReport, format: Format) -> Result<Rendered> {
    match format {
        Format::Json => to_json(r),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                verdict: qsign_core::qseries::Verdict,
            }
            to_csv(r.verdicts.iter().enumerate().map(|(n, &verdict)| Row { n, verdict }))
        }
        Format::Plain => {
            let mut s = String::new();
            writeln!(s, "delta {} range {}..={}: {}", r.delta, r.range[0], r.range[1], pass_word(r.pass)).unwrap();
            writeln!(s, "zeros: {:?}", r.zero_set_found).unwrap();
            writeln!(s, "mismatches: {}", r.mismatches.len()).unwrap();
            for m in &r.mismatches {
                writeln!(s, "  n={} {:?} c={}", m.n, m.kind, m.coefficient).unwrap();
            }
            if let Some(t) = &r.thresholds {
                writeln!(
                    s,
                    "threshold lhs at n={}: {:.12} ({}); corrected form at n={}: {:.12} ({})",
                    t.published_threshold,
                    t.lhs_at_threshold,
                    if t.lhs_below_one { "< 1" } else { "not < 1" },
                    t.corrected_n,
                    t.corrected_lhs,
                    if t.corrected_below_one { "< 1" } else { "not < 1" }
                )
                .unwrap();
            }
            Ok(Rendered(s))
        }
    }
}

pub fn sweeps(r: &BoundSweepReport, format: Format) -> Result<Rendered> {
    match format {
        Format::Json => to_json(r),
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&r.kj_rows, &mut buf)?;
            Ok(Rendered(String::from_utf8(buf).expect("csv output is utf-8")))
        }
        Format::Plain => {
            let mut s = String::new();
            for t in &r.tallies {
                writeln!(
                    s,
                    "{:<24} {:>7} checks {:>4} failures  worst ratio {:.3e}",
                    t.name, t.checks, t.failures, t.worst_ratio
                )
                .unwrap();
            }
            for c in &r.negative_controls {
                writeln!(s, "{:<24} {}/{} corrupted points detected", c.name, c.detected, c.checks).unwrap();
            }
            writeln!(s, "identity grid points: {}", r.identity_grid_points).unwrap();
            writeln!(s, "{}", pass_word(r.pass)).unwrap();
            Ok(Rendered(s))
        }
    }
}

pub fn threshold(p: &ThresholdPoint, format: Format) -> Result<Rendered> {
    match format {
        Format::Json => to_json(p),
        Format::Csv => to_csv([p]),
        Format::Plain => Ok(Rendered(format!(
            "threshold lhs (delta {}, n {}, {:?}) = {} +- {:.3e}: {}\n",
            p.delta,
            p.n,
            p.form,
            p.lhs,
            p.lhs_err,
            pass_word(p.below_one)
        ))),
    }
}

pub fn modular(records: &[ValidationRecord], format: Format) -> Result<Rendered> {
    match format {
        Format::Json => to_json(records),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff", "tolerance", "pass"])?;
            for r in records {
                w.write_record([
                    r.check.clone(),
                    r.params.to_string(),
                    r.lhs[0].to_string(),
                    r.lhs[1].to_string(),
                    r.rhs[0].to_string(),
                    r.rhs[1].to_string(),
                    r.abs_diff.to_string(),
                    r.tolerance.to_string(),
                    r.pass.to_string(),
                ])?;
            }
            finish_csv(w)
        }
        Format::Plain => {
            let mut s = String::new();
            for r in records {
                writeln!(s, "{:<34} {} diff {:.3e}: {}", r.check, r.params, r.abs_diff, pass_word(r.pass)).unwrap();
            }
            let failures = records.iter().filter(|r| !r.pass).count();
            writeln!(s, "{} checks, {} failures", records.len(), failures).unwrap();
            Ok(Rendered(s))
        }
    }
}

pub fn pipeline(r: &PipelineReport, format: Format) -> Result<Rendered> {
    match format {
        Format::Json => to_json(&json!({"config": r.config, "phases": r.phases, "pass": r.pass})),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                phase: &'a str,
                pass: bool,
                seconds: f64,
            }
            to_csv(r.phases.iter().map(|p| Row { phase: &p.name, pass: p.pass, seconds: p.seconds }))
        }
        Format::Plain => {
            let mut s = String::new();
            for p in &r.phases {
                writeln!(s, "{:<20} {:>9.3}s {}", p.name, p.seconds, pass_word(p.pass)).unwrap();
            }
            writeln!(s, "{}", pass_word(r.pass)).unwrap();
            Ok(Rendered(s))
        }
    }
}
