use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{
    a_kj, a_kj_reduced_d10_abs_with_alpha, a_kj_reduced_d5_with_alpha, a_kj_rewritten, aggregate_bound_check,
    alpha, gcd, sweep_kj_bounds, weil_bound_check, SweepRow,
};
use crate::error::{domain, Result};
use crate::numerics::{bessel_bound_checks, bessel_bound_grids, ErrReal};

/// Largest `k` for the identity checks (rewrite and Kloosterman reductions).
pub const IDENTITY_K_MAX: u64 = 200;
/// Absolute tolerance for the identity checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-20;
/// Second arguments of the Kloosterman sums in the reductions.
pub const WEIL_M_VALUES: [i64; 4] = [-6, -2, 2, 6];
/// Largest `k` used by the corrupted-identity negative control.
const CONTROL_K_MAX: u64 = 50;

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub k_max: u64,
    pub identity_k_max: u64,
    /// `n` runs over `0..n_samples`.
    pub n_samples: u64,
    pub prec: u32,
}

impl SweepConfig {
    pub fn new(k_max: u64, n_samples: u64, prec: u32) -> Self {
        SweepConfig { k_max, identity_k_max: k_max.min(IDENTITY_K_MAX), n_samples, prec }
    }

    fn ns(&self) -> Vec<i64> {
        (0..self.n_samples as i64).collect()
    }
}

/// Pass/fail counts for one family of inequalities or identities.
#[derive(Debug, Clone, Serialize)]
pub struct CheckTally {
    pub name: String,
    pub checks: u64,
    pub failures: u64,
    /// Largest `lhs / bound` (inequalities) or `|difference| / tolerance` (identities).
    pub worst_ratio: f64,
    pub first_failure: Option<String>,
}

impl CheckTally {
    fn from_outcomes(name: &str, outcomes: impl IntoIterator<Item = Outcome>) -> Self {
        let mut t = CheckTally { name: name.to_owned(), checks: 0, failures: 0, worst_ratio: 0.0, first_failure: None };
        for o in outcomes {
            t.checks += 1;
            if o.ratio.is_finite() {
                t.worst_ratio = t.worst_ratio.max(o.ratio);
            } else {
                t.worst_ratio = f64::INFINITY;
            }
            if !o.ok {
                t.failures += 1;
                t.first_failure.get_or_insert(o.label);
            }
        }
        t
    }

    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

struct Outcome {
    ok: bool,
    ratio: f64,
    label: String,
}

impl Outcome {
    fn bound(lhs: f64, bound: f64, ok: bool, label: String) -> Self {
        Outcome { ok, ratio: if bound > 0.0 { lhs / bound } else { f64::INFINITY }, label }
    }

    fn identity(diff: f64, label: String) -> Self {
        Outcome { ok: diff < IDENTITY_TOLERANCE, ratio: diff / IDENTITY_TOLERANCE, label }
    }

    fn failed(label: String) -> Self {
        Outcome { ok: false, ratio: f64::INFINITY, label }
    }
}

/// A deliberately corrupted identity that the sweep must flag.
#[derive(Debug, Clone, Serialize)]
pub struct NegativeControl {
    pub name: String,
    pub checks: u64,
    pub detected: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSweepReport {
    pub config: SweepConfig,
    pub tallies: Vec<CheckTally>,
    /// Number of `(k, j, n)` points on the identity grid.
    pub identity_grid_points: u64,
    pub negative_controls: Vec<NegativeControl>,
    #[serde(skip)]
    pub kj_rows: Vec<SweepRow>,
    pub timing: BTreeMap<String, f64>,
    pub pass: bool,
}

fn valid_js(d: u64) -> impl Iterator<Item = i64> {
    (1..d as i64).filter(move |&j| gcd(j, d as i64) == 1)
}

fn ks_5n(k_max: u64) -> Vec<u64> {
    (5..=k_max).step_by(5).collect()
}

fn weil_outcomes(cfg: &SweepConfig) -> Vec<Outcome> {
    let ns = cfg.ns();
    (1..=cfg.k_max)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            for &n in &ns {
                for m in WEIL_M_VALUES {
                    let w = weil_bound_check(k, n, m, cfg.prec);
                    out.push(Outcome::bound(w.abs, w.bound, w.ok, format!("K_{k}({n},{m})")));
                }
            }
            out
        })
        .collect()
}

fn aggregate_outcomes(cfg: &SweepConfig) -> Result<(Vec<Outcome>, Vec<Outcome>)> {
    let ns = cfg.ns();
    let per_k: Vec<Vec<(Outcome, Outcome)>> = ks_5n(cfg.k_max)
        .into_par_iter()
        .map(|k| {
            ns.iter()
                .map(|&n| {
                    let a = aggregate_bound_check(k, n, cfg.prec)?;
                    Ok((
                        Outcome::bound(a.a_k.abs, a.a_k.bound, a.a_k.ok, format!("A_{k}({n})")),
                        Outcome::bound(a.cal_a_k.abs, a.cal_a_k.bound, a.cal_a_k.ok, format!("calA_{k}({n})")),
                    ))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_k.into_iter().flatten().unzip())
}

fn bessel_outcomes() -> Vec<Outcome> {
    // x = i/100 on (0, 50]
    (1..=5000i64)
        .into_par_iter()
        .map(|i| {
            let x = ErrReal::from_ratio(i, 100, 128);
            let label = format!("x={}", i as f64 / 100.0);
            match bessel_bound_checks(&x) {
                Ok(c) => Outcome { ok: c.all_hold(), ratio: 0.0, label },
                Err(_) => Outcome::failed(label),
            }
        })
        .collect()
}

/// Identity outcomes for one grid point: the rewrite and the reduction.
fn identity_point(k: u64, d: u64, j: i64, n: i64, prec: u32) -> (Outcome, Outcome) {
    let label = format!("k={k} j={j} n={n}");
    let direct = match a_kj(k, j, n, prec) {
        Ok(v) => v,
        Err(_) => return (Outcome::failed(label.clone()), Outcome::failed(label)),
    };
    let rewrite = match a_kj_rewritten(k, j, n, prec) {
        Ok(v) => Outcome::identity(v.dist_upper(&direct), label.clone()),
        Err(_) => Outcome::failed(label.clone()),
    };
    let a = alpha(j, d).expect("j is a unit mod d") as i64;
    let reduction = if d == 5 {
        match a_kj_reduced_d5_with_alpha(k, j, n, a, prec) {
            Ok(v) => Outcome::identity(v.dist_upper(&direct), label),
            Err(_) => Outcome::failed(label),
        }
    } else {
        match a_kj_reduced_d10_abs_with_alpha(k, j, n, a, prec) {
            Ok(v) => Outcome::identity((&v - &direct.abs()).abs_upper().to_f64(), label),
            Err(_) => Outcome::failed(label),
        }
    };
    (rewrite, reduction)
}

type IdentityOutcomes = (Vec<Outcome>, Vec<Outcome>, Vec<Outcome>);

fn identity_outcomes(cfg: &SweepConfig) -> IdentityOutcomes {
    let ns = cfg.ns();
    let points: Vec<(u64, u64, i64, i64)> = ks_5n(cfg.identity_k_max)
        .into_iter()
        .flat_map(|k| {
            let d = gcd(k as i64, 10);
            let ns = ns.clone();
            valid_js(d).flat_map(move |j| ns.clone().into_iter().map(move |n| (k, d, j, n)))
        })
        .collect();
    let results: Vec<(u64, Outcome, Outcome)> = points
        .par_iter()
        .map(|&(k, d, j, n)| {
            let (a, b) = identity_point(k, d, j, n, cfg.prec);
            (d, a, b)
        })
        .collect();
    let mut rewrite = Vec::new();
    let mut d5 = Vec::new();
    let mut d10 = Vec::new();
    for (d, a, b) in results {
        rewrite.push(a);
        if d == 5 { d5.push(b) } else { d10.push(b) }
    }
    (rewrite, d5, d10)
}

/// Reductions evaluated with a wrong `alpha_j` (shifted by 1 for `d = 5`,
/// by 2 for `d = 10` so the second Kloosterman argument stays integral);
/// each grid point where the identity still appears to hold is a miss.
fn negative_controls(cfg: &SweepConfig) -> Vec<NegativeControl> {
    let ns: Vec<i64> = cfg.ns().into_iter().take(5).collect();
    let k_top = cfg.identity_k_max.min(CONTROL_K_MAX);
    let mut out = Vec::new();
    for (name, want_d, shift) in [("reduction_d5_wrong_alpha", 5u64, 1i64), ("reduction_d10_wrong_alpha", 10, 2)] {
        let mut checks = 0;
        let mut detected = 0;
        for k in ks_5n(k_top).into_iter().filter(|&k| gcd(k as i64, 10) == want_d) {
            for j in valid_js(want_d) {
                for &n in &ns {
                    checks += 1;
                    let direct = a_kj(k, j, n, cfg.prec).expect("valid grid point");
                    let wrong = (alpha(j, want_d).expect("unit") as i64 + shift).rem_euclid(want_d as i64);
                    let diff = if want_d == 5 {
                        a_kj_reduced_d5_with_alpha(k, j, n, wrong, cfg.prec).map(|v| v.dist_upper(&direct))
                    } else {
                        a_kj_reduced_d10_abs_with_alpha(k, j, n, wrong, cfg.prec)
                            .map(|v| (&v - &direct.abs()).abs_upper().to_f64())
                    };
                    if diff.map_or(true, |d| d >= IDENTITY_TOLERANCE) {
                        detected += 1;
                    }
                }
            }
        }
        out.push(NegativeControl { name: name.to_owned(), checks, detected, pass: detected > 0 });
    }
    out
}

/// Every inequality and identity on the `A_{k,j}` / Kloosterman side:
/// the Weil bound for all `k <= k_max`, the `A_{k,j}`, `A_k` and `cal A_k`
/// bounds for `k in 5N, k <= k_max`, the `I_1` bounds on a grid in `(0, 50]`,
/// the rewrite and Kloosterman reductions for `k <= identity_k_max`, and the
/// negative controls. `n` runs over `0..n_samples` throughout.
pub fn run_bound_sweeps_with(cfg: &SweepConfig) -> Result<BoundSweepReport> {
    if cfg.k_max < 10 {
        return Err(domain(format!("k_max must be at least 10, got {}", cfg.k_max)));
    }
    if cfg.n_samples == 0 {
        return Err(domain("n_samples must be positive"));
    }
    let mut timing = BTreeMap::new();
    let mut tallies = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timing: &mut BTreeMap<String, f64>| {
        timing.insert(name.to_owned(), clock.elapsed().as_secs_f64());
        clock = Instant::now();
    };

    tallies.push(CheckTally::from_outcomes("weil_bound", weil_outcomes(cfg)));
    lap("weil_bound", &mut timing);

    let rows = sweep_kj_bounds(cfg.k_max, &cfg.ns(), cfg.prec)?;
    for (name, d) in [("a_kj_bound_d5", 5), ("a_kj_bound_d10", 10)] {
        let outcomes = rows.iter().filter(|r| gcd(r.k as i64, 10) == d).map(|r| {
            Outcome::bound(r.abs, r.bound, r.ok, format!("k={} j={} n={}", r.k, r.j, r.n))
        });
        tallies.push(CheckTally::from_outcomes(name, outcomes));
    }
    lap("a_kj_bounds", &mut timing);

    let (a, cal) = aggregate_outcomes(cfg)?;
    tallies.push(CheckTally::from_outcomes("a_k_bound", a));
    tallies.push(CheckTally::from_outcomes("cal_a_k_bound", cal));
    lap("aggregate_bounds", &mut timing);

    tallies.push(CheckTally::from_outcomes("bessel_bounds", bessel_outcomes()));
    lap("bessel_bounds", &mut timing);
    let grid = bessel_bound_grids(cfg.prec)?;
    tallies.push(CheckTally::from_outcomes(
        "bessel_grids",
        grid.into_iter().map(|p| Outcome { ok: p.holds, ratio: 0.0, label: format!("{:?} x={}", p.bound, p.x) }),
    ));
    lap("bessel_grids", &mut timing);

    let (rewrite, d5, d10) = identity_outcomes(cfg);
    let identity_grid_points = rewrite.len() as u64;
    tallies.push(CheckTally::from_outcomes("rewrite_identity", rewrite));
    tallies.push(CheckTally::from_outcomes("reduction_identity_d5", d5));
    tallies.push(CheckTally::from_outcomes("reduction_identity_d10", d10));
    lap("identities", &mut timing);

    let negative_controls = negative_controls(cfg);
    lap("negative_controls", &mut timing);

    let pass = tallies.iter().all(CheckTally::pass) && negative_controls.iter().all(|c| c.pass);
    Ok(BoundSweepReport {
        config: cfg.clone(),
        tallies,
        identity_grid_points,
        negative_controls,
        kj_rows: rows,
        timing,
        pass,
    })
}

/// [`run_bound_sweeps_with`] with the identity grid capped at [`IDENTITY_K_MAX`].
pub fn run_bound_sweeps(k_max: u64, n_samples: u64, prec: u32) -> Result<BoundSweepReport> {
    run_bound_sweeps_with(&SweepConfig::new(k_max, n_samples, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes_and_counts_grid() {
        let r = run_bound_sweeps(30, 3, 128).unwrap();
        assert!(r.pass, "{:#?}", r.tallies);
        // k = 5, 15, 25 (d = 5, four j each) and k = 10, 20, 30 (d = 10, four j each)
        assert_eq!(r.identity_grid_points, 6 * 4 * 3);
        let weil = r.tallies.iter().find(|t| t.name == "weil_bound").unwrap();
        assert_eq!(weil.checks, 30 * 3 * 4);
        assert!(r.negative_controls.iter().all(|c| c.pass && 2 * c.detected > c.checks), "{:?}", r.negative_controls);
    }

    #[test]
    fn rejects_tiny_k_max() {
        assert!(run_bound_sweeps(5, 3, 128).is_err());
    }
}
