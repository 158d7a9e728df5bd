use rayon::prelude::*;
use rug::Integer;
use serde::{Serialize, Serializer};

use super::bounds::{tail_min_k, TailBounder};
use super::terms::{require_real, shifted_index, twisted_sum, IndexFactors};
use crate::arithmetic::{CuspFamily, RootTable};
use crate::error::{domain, Result};
use crate::numerics::{ErrComplex, ErrReal};
use crate::Delta;

/// How many times the default cutoff is doubled before giving up on a
/// definitive rounding.
pub const MAX_DOUBLINGS: u32 = 3;

/// Smallest cutoff the engine starts from when none is given.
pub const MIN_DEFAULT_K: u64 = 50;

fn serialize_integer<S: Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// A truncated evaluation of the exact formula for `c_delta(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct ExactEval {
    pub delta: Delta,
    pub n: u64,
    pub k_max: u64,
    #[serde(skip)]
    pub partial_sum: ErrReal,
    pub value: f64,
    /// Error bound of the partial sum itself.
    pub err: f64,
    /// Bound on every omitted term `k > k_max`.
    pub tail_bound: f64,
    #[serde(serialize_with = "serialize_integer")]
    pub rounded: Integer,
    /// `|value - rounded|`.
    pub gap: f64,
    /// `gap + err + tail_bound < 1/2`: the coefficient is certainly `rounded`.
    pub definitive: bool,
}

impl ExactEval {
    fn new(delta: Delta, n: u64, k_max: u64, partial_sum: ErrReal, tail_bound: f64) -> Self {
        let rounded = partial_sum.round_mid().unwrap_or_default();
        let value = partial_sum.to_f64();
        let gap = (ErrReal::exact(partial_sum.mid().clone()) - ErrReal::from_integer(&rounded, partial_sum.prec()))
            .abs_upper()
            .to_f64_round(rug::float::Round::Up);
        let err = partial_sum.rad_f64();
        let definitive = partial_sum.is_finite() && gap + err + tail_bound < 0.5;
        ExactEval { delta, n, k_max, partial_sum, value, err, tail_bound, rounded, gap, definitive }
    }

    pub fn total_uncertainty(&self) -> f64 {
        self.err + self.tail_bound
    }
}

/// Starting cutoff `max(50, (4 pi/5) sqrt(3M))`, the point past which every
/// Bessel argument is below 1.
pub fn default_k_max(delta: Delta, n: u64) -> Result<u64> {
    Ok(tail_min_k(delta, n)?.max(MIN_DEFAULT_K))
}

struct Job {
    n: u64,
    factors: IndexFactors,
    checkpoints: Vec<u64>,
    acc: ErrComplex,
    snapshots: Vec<ErrComplex>,
}

/// Partial sums over `k in 5N, k <= K` for every checkpoint `K` of every job.
///
/// Runs `k`-major so each cusp family and root table is built once and shared
/// by all `n`. Each job accumulates its terms in increasing `k`, so results do
/// not depend on thread scheduling.
fn partial_sums(delta: Delta, jobs: &mut [Job], prec: u32) -> Result<()> {
    let k_top = jobs.iter().flat_map(|j| j.checkpoints.iter().copied()).max().unwrap_or(0);
    let mut k = 5;
    while k <= k_top {
        let family = CuspFamily::new(k)?;
        let d = family.d();
        let table = RootTable::new(family.modulus(), prec);
        jobs.par_iter_mut()
            .filter(|job| job.checkpoints.last().is_some_and(|&c| k <= c))
            .try_for_each(|job| -> Result<()> {
                let s = twisted_sum(&family, delta, job.n).evaluate_with(&table);
                let term = s.scale(&job.factors.weight(k, d, prec)?);
                job.acc = &job.acc + &term;
                Ok(())
            })?;
        for job in jobs.iter_mut() {
            for &c in &job.checkpoints {
                if c >= k && c < k + 5 {
                    job.snapshots.push(job.acc.clone());
                }
            }
        }
        k += 5;
    }
    // checkpoints below 5 see an empty sum
    for job in jobs.iter_mut() {
        while job.snapshots.len() < job.checkpoints.len() {
            job.snapshots.insert(0, ErrComplex::zero(prec));
        }
    }
    Ok(())
}

fn finish(delta: Delta, job: &Job, prec: u32) -> Result<Vec<ExactEval>> {
    let top = *job.checkpoints.last().expect("at least one checkpoint");
    let tails = TailBounder::new(top, prec)?;
    job.checkpoints
        .iter()
        .zip(&job.snapshots)
        .map(|(&k, s)| {
            let re = require_real(s, k)?;
            Ok(ExactEval::new(delta, job.n, k, re, tails.bound(k)))
        })
        .collect()
}

fn new_job(delta: Delta, n: u64, checkpoints: Vec<u64>, prec: u32) -> Result<Job> {
    let m = shifted_index(delta, n)?;
    let k_min = tail_min_k(delta, n)?;
    if let Some(&k) = checkpoints.iter().find(|&&k| k < k_min.max(10)) {
        return Err(domain(format!(
            "k_max = {k} is below {} (every omitted term needs a Bessel argument below 1)",
            k_min.max(10)
        )));
    }
    Ok(Job {
        n,
        factors: IndexFactors::new(m, prec),
        checkpoints,
        acc: ErrComplex::zero(prec),
        snapshots: Vec::new(),
    })
}

/// The exact formula for `c_delta(n)` truncated at `k <= k_max`, with the
/// tail bound and rounding verdict. Without `k_max` the cutoff starts at
/// [`default_k_max`] and doubles up to [`MAX_DOUBLINGS`] times until the
/// rounding is definitive; the last attempt is returned either way.
pub fn c_exact(delta: Delta, n: u64, k_max: Option<u64>, prec: u32) -> Result<ExactEval> {
    Ok(c_exact_many(delta, &[n], k_max, prec)?.pop().expect("one result per n"))
}

/// [`c_exact`] for many `n` at once, sharing the per-`k` work.
pub fn c_exact_many(delta: Delta, ns: &[u64], k_max: Option<u64>, prec: u32) -> Result<Vec<ExactEval>> {
    let mut jobs = ns
        .iter()
        .map(|&n| {
            let cps = match k_max {
                Some(k) => vec![k],
                None => {
                    let k0 = default_k_max(delta, n)?;
                    (0..=MAX_DOUBLINGS).map(|j| k0 << j).collect()
                }
            };
            new_job(delta, n, cps, prec)
        })
        .collect::<Result<Vec<_>>>()?;
    partial_sums(delta, &mut jobs, prec)?;
    jobs.iter()
        .map(|job| {
            let evals = finish(delta, job, prec)?;
            let pick = evals.iter().position(|e| e.definitive).unwrap_or(evals.len() - 1);
            Ok(evals.into_iter().nth(pick).expect("index in range"))
        })
        .collect()
}

/// Partial sums at every listed cutoff for one `n`, each with its tail bound.
pub fn c_exact_at_cutoffs(delta: Delta, n: u64, cutoffs: &[u64], prec: u32) -> Result<Vec<ExactEval>> {
    let mut sorted = cutoffs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut jobs = vec![new_job(delta, n, sorted, prec)?];
    partial_sums(delta, &mut jobs, prec)?;
    finish(delta, &jobs[0], prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::q10_series;

    const P: u32 = 128;

    #[test]
    fn rounds_to_brute_force_coefficients() {
        for delta in Delta::BOTH {
            let series = q10_series(delta, 60);
            let ns: Vec<u64> = (10..60).collect();
            let evals = c_exact_many(delta, &ns, None, P).unwrap();
            for e in evals {
                assert_eq!(&e.rounded, series.coeff(e.n as usize), "{delta} n={}", e.n);
                assert!(e.gap < 0.5);
            }
        }
    }

    #[test]
    fn zero_at_47() {
        let e = c_exact(Delta::Plus, 47, None, P).unwrap();
        assert_eq!(e.rounded, 0);
    }

    #[test]
    fn explicit_cutoff_below_validity_rejected() {
        assert!(c_exact(Delta::Plus, 300, Some(20), P).is_err());
        assert!(c_exact(Delta::Plus, 1, Some(5), P).is_err());
    }

    #[test]
    fn snapshots_agree_with_direct_runs() {
        let all = c_exact_at_cutoffs(Delta::Minus, 25, &[60, 120], P).unwrap();
        let one = c_exact(Delta::Minus, 25, Some(120), P).unwrap();
        assert_eq!(all[1].value, one.value);
        assert!((all[0].value - all[1].value).abs() <= all[0].tail_bound);
    }

    #[test]
    fn json_shape() {
        let e = c_exact(Delta::Plus, 30, Some(60), P).unwrap();
        let v = serde_json::to_value(&e).unwrap();
        for key in ["delta", "n", "k_max", "value", "err", "tail_bound", "rounded", "definitive"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["delta"], 1);
    }
}
