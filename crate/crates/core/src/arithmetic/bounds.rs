use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::basic::{divisor_count, gcd};
use super::cusp::cusp_d;
use super::sums::CuspFamily;
use crate::error::{domain, Result};
use crate::numerics::{ErrComplex, ErrReal};

/// One bound check: `abs <= bound` within error bars.
#[derive(Debug, Clone, Serialize)]
pub struct BoundOutcome {
    pub abs: f64,
    pub bound: f64,
    pub ok: bool,
}

impl BoundOutcome {
    fn new(value: &ErrComplex, bound: &ErrReal) -> Self {
        let abs = value.abs();
        BoundOutcome { abs: abs.to_f64(), bound: bound.to_f64(), ok: abs.le_within(bound) }
    }
}

/// `2 d(k) sqrt(k/5)` for `d = 5`, `d(10k) sqrt(3k/5)` for `d = 10`.
pub fn a_kj_bound(k: u64, prec: u32) -> Result<ErrReal> {
    let d = cusp_d(k)?;
    Ok(if d == 5 {
        let dk = divisor_count(k)? as i64;
        ErrReal::from_ratio(k as i64, 5, prec).sqrt().mul_i64(2 * dk)
    } else {
        let d10k = divisor_count(10 * k)? as i64;
        ErrReal::from_ratio(3 * k as i64, 5, prec).sqrt().mul_i64(d10k)
    })
}

/// Bound for `|A_k(n)|` and `|cal A_k(n)|`: twice [`a_kj_bound`].
pub fn a_k_bound(k: u64, prec: u32) -> Result<ErrReal> {
    Ok(a_kj_bound(k, prec)?.mul_i64(2))
}

fn require(k: u64, want: u64) -> Result<()> {
    let d = gcd(k as i64, 10);
    if d != want {
        return Err(domain(format!("bound needs gcd(k, 10) = {want}, got k={k}")));
    }
    Ok(())
}

/// `|A_{k,j}(n)| <= 2 d(k) sqrt(k/5)` for `gcd(k, 10) = 5`.
pub fn bound_check_d5(k: u64, j: i64, n: i64, prec: u32) -> Result<BoundOutcome> {
    require(k, 5)?;
    let v = CuspFamily::new(k)?.a_kj_roots(j, n)?.evaluate(prec);
    Ok(BoundOutcome::new(&v, &a_kj_bound(k, prec)?))
}

/// `|A_{k,j}(n)| <= d(10k) sqrt(3k/5)` for `gcd(k, 10) = 10`.
pub fn bound_check_d10(k: u64, j: i64, n: i64, prec: u32) -> Result<BoundOutcome> {
    require(k, 10)?;
    let v = CuspFamily::new(k)?.a_kj_roots(j, n)?.evaluate(prec);
    Ok(BoundOutcome::new(&v, &a_kj_bound(k, prec)?))
}

/// Aggregated bounds for `A_k(n)` and `cal A_k(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateOutcome {
    pub a_k: BoundOutcome,
    pub cal_a_k: BoundOutcome,
}

pub fn aggregate_bound_check(k: u64, n: i64, prec: u32) -> Result<AggregateOutcome> {
    let f = CuspFamily::new(k)?;
    aggregate_with_family(&f, n, prec)
}

pub(crate) fn aggregate_with_family(f: &CuspFamily, n: i64, prec: u32) -> Result<AggregateOutcome> {
    let bound = a_k_bound(f.k(), prec)?;
    Ok(AggregateOutcome {
        a_k: BoundOutcome::new(&f.a_k_roots(n).evaluate(prec), &bound),
        cal_a_k: BoundOutcome::new(&f.cal_a_k_roots(n).evaluate(prec), &bound),
    })
}

/// One row of the `A_{k,j}` bound sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub k: u64,
    pub j: i64,
    pub n: i64,
    #[serde(rename = "|A_kj|")]
    pub abs: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Checks `|A_{k,j}(n)|` against its bound for all `k <= k_max` with
/// `gcd(k, 10) in {5, 10}`, all `1 <= j < d` coprime to `d`, and all `n` in
/// `ns`. Rows are ordered by `(k, j, n)`.
pub fn sweep_kj_bounds(k_max: u64, ns: &[i64], prec: u32) -> Result<Vec<SweepRow>> {
    let ks: Vec<u64> = (5..=k_max).step_by(5).collect();
    let rows: Result<Vec<Vec<SweepRow>>> = ks
        .par_iter()
        .map(|&k| {
            let f = CuspFamily::new(k)?;
            let bound = a_kj_bound(k, prec)?;
            let d = f.d() as i64;
            let mut out = Vec::new();
            for j in (1..d).filter(|&j| gcd(j, d) == 1) {
                for &n in ns {
                    let o = BoundOutcome::new(&f.a_kj_roots(j, n)?.evaluate(prec), &bound);
                    out.push(SweepRow { k, j, n, abs: o.abs, bound: o.bound, ok: o.ok });
                }
            }
            Ok(out)
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
