use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::multiplier::{omega_at, omega_hk};
use super::theta::{theta, theta_quasi_period_rhs, theta_triple_product};
use super::transform::{
    f_series_sides, growth_classifier, growth_classifier_reciprocal, leading_term_constant,
    theta_transform_rhs, transformation_sides, ThetaPhase,
};
use crate::arithmetic::{gcd, mod_inverse};
use crate::error::Result;
use crate::numerics::ErrComplex;

/// Tolerance for every identity in the suite except the triple product.
pub const SUITE_TOLERANCE: f64 = 1e-15;
/// Tolerance for the triple product.
pub const TRIPLE_PRODUCT_TOLERANCE: f64 = 1e-20;
/// Bound on the fitted constant of the theta leading-term asymptotic.
pub const LEADING_TERM_MAX_CONSTANT: f64 = 10.0;

/// One evaluated identity. `abs_diff` is a rigorous upper bound for `|lhs - rhs|`.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationRecord {
    pub check: String,
    pub params: Value,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ValidationRecord {
    fn compare(check: &str, params: Value, lhs: &ErrComplex, rhs: &ErrComplex, tolerance: f64) -> Self {
        let (a, b) = (lhs.to_f64_pair(), rhs.to_f64_pair());
        let abs_diff = lhs.dist_upper(rhs);
        ValidationRecord {
            check: check.to_owned(),
            params,
            lhs: [a.0, a.1],
            rhs: [b.0, b.1],
            abs_diff,
            tolerance,
            pass: abs_diff < tolerance,
        }
    }

    fn failed(check: &str, params: Value, tolerance: f64, err: &crate::Error) -> Self {
        let mut params = params;
        params["error"] = json!(err.to_string());
        ValidationRecord {
            check: check.to_owned(),
            params,
            lhs: [f64::NAN; 2],
            rhs: [f64::NAN; 2],
            abs_diff: f64::INFINITY,
            tolerance,
            pass: false,
        }
    }
}

#[derive(Debug, Clone)]
enum Task {
    TripleProduct { w: (f64, f64), tau: (f64, f64) },
    QuasiPeriod { w: (f64, f64), tau: (f64, f64), l: i64, m: i64 },
    Multiplier { h: i64, k: u64, hprime: i64 },
    ThetaTransform { w: (f64, f64), h: i64, k: u64, hprime: i64, z: (f64, f64) },
    FTransform { h: u64, k: u64, z: (f64, f64) },
    FSeries { tau: (f64, f64) },
    LeadingTerm { a: f64 },
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn coprime_h(rng: &mut ChaCha8Rng, k: u64) -> u64 {
    loop {
        let h = rng.gen_range(0..k.max(2));
        if gcd(h as i64, k as i64) == 1 {
            return h;
        }
    }
}

fn tasks(seed: u64) -> Vec<Task> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..20 {
        let w = (uniform(&mut rng, -0.5, 0.5), uniform(&mut rng, -0.2, 0.2));
        let tau = (uniform(&mut rng, -0.5, 0.5), uniform(&mut rng, 0.6, 1.5));
        out.push(Task::TripleProduct { w, tau });
    }
    for _ in 0..5 {
        let w = (uniform(&mut rng, -0.5, 0.5), uniform(&mut rng, -0.2, 0.2));
        let tau = (uniform(&mut rng, -0.5, 0.5), uniform(&mut rng, 0.6, 1.5));
        let (l, m) = (rng.gen_range(-2..=2), rng.gen_range(-3..=3));
        out.push(Task::QuasiPeriod { w, tau, l, m });
    }
    for (h, k, hprime) in [(1, 1, 0), (1, 5, 4), (2, 5, 2), (3, 10, 3), (2, 7, 3), (5, 12, 7)] {
        out.push(Task::Multiplier { h, k, hprime });
    }
    for _ in 0..10 {
        let k = rng.gen_range(1..=12u64);
        let h = coprime_h(&mut rng, k);
        let hprime = if k == 1 { 0 } else { (k - mod_inverse(h as i64, k).unwrap()) % k } as i64;
        let w = (uniform(&mut rng, -0.5, 0.5), uniform(&mut rng, -0.1, 0.1));
        let z = (uniform(&mut rng, 0.6, 1.4), uniform(&mut rng, -0.3, 0.3));
        out.push(Task::ThetaTransform { w, h: h as i64, k, hprime, z });
    }
    for (h, k, z) in [(2, 5, (1.0, 0.0)), (3, 10, (0.8, 0.0)), (7, 10, (1.2, 0.3))] {
        out.push(Task::FTransform { h, k, z });
    }
    for _ in 0..9 {
        let k = 5 * rng.gen_range(1..=6u64);
        let h = coprime_h(&mut rng, k);
        let z = (uniform(&mut rng, 0.6, 1.6), uniform(&mut rng, -0.4, 0.4));
        out.push(Task::FTransform { h, k, z });
    }
    for tau in [(0.1, 0.5), (0.37, 0.8)] {
        out.push(Task::FSeries { tau });
    }
    for a in [0.1, 0.3] {
        out.push(Task::LeadingTerm { a });
    }
    out
}

fn run(task: &Task, prec: u32) -> ValidationRecord {
    let c = |p: (f64, f64)| ErrComplex::from_f64(p.0, p.1, prec);
    let target = 1e-40;
    match *task {
        Task::TripleProduct { w, tau } => {
            let params = json!({"w": [w.0, w.1], "tau": [tau.0, tau.1]});
            let r = theta(&c(w), &c(tau), target)
                .and_then(|a| Ok((a, theta_triple_product(&c(w), &c(tau), target)?)));
            finish("triple_product", params, TRIPLE_PRODUCT_TOLERANCE, r)
        }
        Task::QuasiPeriod { w, tau, l, m } => {
            let params = json!({"w": [w.0, w.1], "tau": [tau.0, tau.1], "l": l, "m": m});
            let shifted = &(&c(w) + &c(tau).mul_i64(l)) + &c((m as f64, 0.0));
            let r = theta(&shifted, &c(tau), target)
                .and_then(|a| Ok((a, theta_quasi_period_rhs(&c(w), &c(tau), l, m, target)?)));
            finish("theta_quasi_periodicity", params, SUITE_TOLERANCE, r)
        }
        Task::Multiplier { h, k, hprime } => {
            let params = json!({"h": h, "k": k, "hprime": hprime, "z": [[0.7, 0.0], [1.3, 0.2]]});
            let r = omega_hk(h, k, hprime, &c((0.7, 0.0)), target).and_then(|m| {
                if !(m.unit_modulus && m.root_of_unity) {
                    return Err(crate::Error::Inconsistent(format!(
                        "omega_{{{h},{k}}} fails |omega| = 1 or omega^(24k) = 1"
                    )));
                }
                Ok((m.omega, omega_at(h, k, hprime, &c((1.3, 0.2)), target)?))
            });
            finish("eta_multiplier", params, SUITE_TOLERANCE, r)
        }
        Task::ThetaTransform { w, h, k, hprime, z } => {
            let params = json!({"w": [w.0, w.1], "h": h, "k": k, "hprime": hprime, "z": [z.0, z.1]});
            let r = (|| {
                let om = omega_hk(h, k, hprime, &c((1.0, 0.0)), target)?.omega;
                let tau = (&c((h as f64, 0.0)) + &c(z).mul_i()).div_ref(&c((k as f64, 0.0)));
                let lhs = theta(&c(w), &tau, target)?;
                let rhs = theta_transform_rhs(&c(w), h, k, hprime, &c(z), &om, ThetaPhase::Corrected, target)?;
                Ok((lhs, rhs))
            })();
            finish("theta_transformation", params, SUITE_TOLERANCE, r)
        }
        Task::FTransform { h, k, z } => {
            let params = json!({"h": h, "k": k, "z": [z.0, z.1]});
            finish("f_transformation", params, SUITE_TOLERANCE, transformation_sides(h, k, &c(z), target))
        }
        Task::FSeries { tau } => {
            let params = json!({"tau": [tau.0, tau.1], "order": 61});
            finish("f_series", params, SUITE_TOLERANCE, f_series_sides(&c(tau), 61, target))
        }
        Task::LeadingTerm { a } => {
            let params = json!({"a": a, "b": 0.2, "t": [2, 3, 4, 5]});
            match leading_term_constant(a, 0.2, &[2.0, 3.0, 4.0, 5.0], prec) {
                Ok(cst) => ValidationRecord {
                    check: "theta_leading_term".to_owned(),
                    params,
                    lhs: [cst, 0.0],
                    rhs: [LEADING_TERM_MAX_CONSTANT, 0.0],
                    abs_diff: cst,
                    tolerance: LEADING_TERM_MAX_CONSTANT,
                    pass: cst < LEADING_TERM_MAX_CONSTANT,
                },
                Err(e) => ValidationRecord::failed("theta_leading_term", params, LEADING_TERM_MAX_CONSTANT, &e),
            }
        }
    }
}

fn finish(check: &str, params: Value, tol: f64, r: Result<(ErrComplex, ErrComplex)>) -> ValidationRecord {
    match r {
        Ok((a, b)) => ValidationRecord::compare(check, params, &a, &b, tol),
        Err(e) => ValidationRecord::failed(check, params, tol, &e),
    }
}

/// The documented cusp sets: `(d, nu2)` pairs that contribute to the principal
/// part of `f` and of `1/f`.
pub const GROWTH_SET: [(u64, u64); 4] = [(5, 2), (5, 3), (10, 3), (10, 7)];
pub const GROWTH_SET_RECIPROCAL: [(u64, u64); 4] = [(5, 1), (5, 4), (10, 1), (10, 9)];

/// Exhaustive comparison of both growth classifiers with the documented sets.
pub fn growth_records() -> Vec<ValidationRecord> {
    let mut out = Vec::new();
    for d in [5u64, 10] {
        for nu2 in (0..d).filter(|&v| gcd(v as i64, d as i64) == 1) {
            for (name, f, set) in [
                ("growth_classification", growth_classifier as fn(u64, u64) -> Result<bool>, &GROWTH_SET),
                ("growth_classification_reciprocal", growth_classifier_reciprocal, &GROWTH_SET_RECIPROCAL),
            ] {
                let expected = set.contains(&(d, nu2));
                let got = f(d, nu2).unwrap_or(!expected);
                let b = |x: bool| [f64::from(u8::from(x)), 0.0];
                out.push(ValidationRecord {
                    check: name.to_owned(),
                    params: json!({"d": d, "nu2": nu2}),
                    lhs: b(got),
                    rhs: b(expected),
                    abs_diff: if got == expected { 0.0 } else { 1.0 },
                    tolerance: 0.5,
                    pass: got == expected,
                });
            }
        }
    }
    out
}

/// Runs every modular identity check at `prec` bits with random sample points
/// drawn from `seed`. Records come back in a fixed order.
pub fn validation_suite(seed: u64, prec: u32) -> Vec<ValidationRecord> {
    let mut records: Vec<ValidationRecord> = tasks(seed).par_iter().map(|t| run(t, prec)).collect();
    records.extend(growth_records());
    records
}
