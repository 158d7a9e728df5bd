use std::collections::BTreeMap;
use std::time::Instant;

use rug::Integer;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exactformula::{threshold_lhs_with, ThresholdForm};
use crate::qseries::{q10_series, sign_pattern_verdict, zero_exceptions, TruncatedSeries, Verdict};
use crate::{Delta, ErrReal};

/// Smallest `n_max` accepted by [`verify_conjecture`]; every listed zero is below it.
pub const MIN_N_MAX: u64 = 50;

/// `n` from which the closed-form inequality is asserted: 2929 for
/// `delta = 1` and 2234 for `delta = -1`.
pub fn published_threshold(delta: Delta) -> u64 {
    match delta {
        Delta::Plus => 2929,
        Delta::Minus => 2234,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchKind {
    /// Nonzero with the sign opposite to the pattern.
    WrongSign,
    /// Zero at an index outside the exception list.
    UnexpectedZero,
    /// Nonzero at an index on the exception list.
    MissingZero,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub n: u64,
    pub kind: MismatchKind,
    pub coefficient: String,
}

/// The closed-form inequality evaluated where the brute-force range ends.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRecord {
    pub published_threshold: u64,
    /// Published form at `published_threshold`.
    pub lhs_at_threshold: f64,
    pub lhs_err: f64,
    pub lhs_below_one: bool,
    /// Corrected form at `n_max + 1`, the first index the series did not cover.
    pub corrected_n: u64,
    pub corrected_lhs: f64,
    /// The corrected inequality holds at `n_max + 1`, so brute force and the
    /// bound together cover every `n`.
    pub corrected_below_one: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignReport {
    pub delta: Delta,
    pub range: [u64; 2],
    pub verdicts: Vec<Verdict>,
    pub zero_set_found: Vec<u64>,
    pub mismatches: Vec<Mismatch>,
    pub thresholds: Option<ThresholdRecord>,
    pub timing: BTreeMap<String, f64>,
    pub pass: bool,
}

fn classify(delta: Delta, n: u64, c: &Integer) -> Option<MismatchKind> {
    if sign_pattern_verdict(delta, n, c).is_match() {
        return None;
    }
    Some(if *c == 0 {
        MismatchKind::UnexpectedZero
    } else if zero_exceptions(delta).contains(&n) {
        MismatchKind::MissingZero
    } else {
        MismatchKind::WrongSign
    })
}

fn threshold_record(delta: Delta, n_max: u64, prec: u32) -> Result<ThresholdRecord> {
    let one = ErrReal::one(prec);
    let t = published_threshold(delta);
    let lhs = threshold_lhs_with(delta, t, ThresholdForm::Published, prec)?;
    let corrected = threshold_lhs_with(delta, n_max + 1, ThresholdForm::Corrected, prec)?;
    Ok(ThresholdRecord {
        published_threshold: t,
        lhs_at_threshold: lhs.to_f64(),
        lhs_err: lhs.rad_f64(),
        lhs_below_one: lhs.certainly_lt(&one),
        corrected_n: n_max + 1,
        corrected_lhs: corrected.to_f64(),
        corrected_below_one: corrected.certainly_lt(&one),
    })
}

/// Sign report for an already computed series covering `0..=n_max`.
pub fn report_from_series(delta: Delta, series: &TruncatedSeries, prec: u32) -> Result<SignReport> {
    let n_max = series.order() as u64;
    if n_max < MIN_N_MAX {
        return Err(domain(format!("n_max must be at least {MIN_N_MAX}, got {n_max}")));
    }
    let start = Instant::now();
    let mut verdicts = Vec::with_capacity(series.coeffs().len());
    let mut zero_set_found = Vec::new();
    let mut mismatches = Vec::new();
    for (n, c) in series.coeffs().iter().enumerate() {
        let n = n as u64;
        verdicts.push(sign_pattern_verdict(delta, n, c));
        if *c == 0 {
            zero_set_found.push(n);
        }
        if let Some(kind) = classify(delta, n, c) {
            mismatches.push(Mismatch { n, kind, coefficient: c.to_string() });
        }
    }
    let mut timing = BTreeMap::new();
    timing.insert("verdicts".to_owned(), start.elapsed().as_secs_f64());
    let thresholds = if n_max + 1 >= published_threshold(delta) {
        let start = Instant::now();
        let r = threshold_record(delta, n_max, prec)?;
        timing.insert("threshold".to_owned(), start.elapsed().as_secs_f64());
        Some(r)
    } else {
        None
    };
    let pass = mismatches.is_empty();
    Ok(SignReport { delta, range: [0, n_max], verdicts, zero_set_found, mismatches, thresholds, timing, pass })
}

/// Expands the series to `n_max`, checks every coefficient against the sign
/// pattern and the zero list, and, once the range reaches the published
/// threshold, evaluates the closed-form inequality there.
pub fn verify_conjecture(delta: Delta, n_max: u64, prec: u32) -> Result<SignReport> {
    if n_max < MIN_N_MAX {
        return Err(domain(format!("n_max must be at least {MIN_N_MAX}, got {n_max}")));
    }
    let start = Instant::now();
    let series = q10_series(delta, n_max as usize);
    let elapsed = start.elapsed().as_secs_f64();
    let mut report = report_from_series(delta, &series, prec)?;
    report.timing.insert("series".to_owned(), elapsed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_range_passes_with_full_zero_sets() {
        for delta in Delta::BOTH {
            let r = verify_conjecture(delta, 50, 128).unwrap();
            assert!(r.pass);
            assert_eq!(r.zero_set_found, zero_exceptions(delta));
            assert_eq!(r.verdicts.len(), 51);
            assert!(r.thresholds.is_none());
        }
    }

    #[test]
    fn corrupted_series_is_caught() {
        let mut coeffs = q10_series(Delta::Plus, 60).into_coeffs();
        coeffs[11] = Integer::from(0);
        coeffs[12] = -coeffs[12].clone();
        coeffs[47] = Integer::from(1);
        let r = report_from_series(Delta::Plus, &TruncatedSeries::new(coeffs), 128).unwrap();
        assert!(!r.pass);
        let kinds: Vec<_> = r.mismatches.iter().map(|m| (m.n, m.kind)).collect();
        assert_eq!(
            kinds,
            [(11, MismatchKind::UnexpectedZero), (12, MismatchKind::WrongSign), (47, MismatchKind::MissingZero)]
        );
    }

    #[test]
    fn rejects_short_range() {
        assert!(verify_conjecture(Delta::Plus, 10, 128).is_err());
    }
}
