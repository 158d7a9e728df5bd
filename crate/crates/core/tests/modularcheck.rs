use qsign_core::modularcheck::{
    eta, omega_hk, theta, theta_triple_product, transformation_check, validation_suite,
};
use qsign_core::numerics::ErrComplex;

const P: u32 = 256;

fn c(re: f64, im: f64) -> ErrComplex {
    ErrComplex::from_f64(re, im, P)
}

#[test]
fn validation_suite_passes_for_several_seeds() {
    for seed in [1, 2, 2024] {
        let records = validation_suite(seed, P);
        assert!(records.len() >= 50);
        let bad: Vec<_> = records.iter().filter(|r| !r.pass).collect();
        assert!(bad.is_empty(), "seed {seed}: {bad:#?}");
        let f_checks = records.iter().filter(|r| r.check == "f_transformation").count();
        assert!(f_checks >= 10);
    }
}

#[test]
fn validation_suite_is_reproducible() {
    let a = serde_json::to_string(&validation_suite(11, P)).unwrap();
    let b = serde_json::to_string(&validation_suite(11, P)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn triple_product_on_a_grid() {
    for i in 0..5 {
        for j in 0..4 {
            let w = c(-0.4 + 0.2 * i as f64, 0.05 * j as f64 - 0.1);
            let tau = c(0.3 - 0.15 * j as f64, 0.5 + 0.25 * i as f64);
            let a = theta(&w, &tau, 1e-40).unwrap();
            let b = theta_triple_product(&w, &tau, 1e-40).unwrap();
            assert!(a.dist_upper(&b) < 1e-20);
        }
    }
}

#[test]
fn eta_inversion_at_several_points() {
    for tau in [c(0.0, 1.5), c(0.3, 0.9), c(-0.45, 1.2)] {
        let lhs = eta(&(-tau.recip()), 1e-40).unwrap();
        let rhs = (-tau.mul_i()).sqrt().mul_ref(&eta(&tau, 1e-40).unwrap());
        assert!(lhs.dist_upper(&rhs) < 1e-25);
    }
}

#[test]
fn multiplier_invariants_across_denominators() {
    for k in 1..=15u64 {
        for h in 1..=k as i64 {
            if num_gcd(h, k as i64) != 1 {
                continue;
            }
            let hp = (1..=k as i64).find(|x| (h * x + 1) % k as i64 == 0).unwrap_or(0);
            let m = omega_hk(h, k, hp, &c(0.8, 0.1), 1e-40).unwrap();
            assert!(m.unit_modulus && m.root_of_unity, "h={h} k={k}");
        }
    }
}

#[test]
fn transformation_holds_for_all_cusps_with_k_up_to_30() {
    for k in (5..=30u64).step_by(5) {
        for h in 0..k {
            if num_gcd(h as i64, k as i64) != 1 {
                continue;
            }
            assert!(transformation_check(h, k, &c(1.1, 0.25), 1e-40).unwrap(), "h={h} k={k}");
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { num_gcd(b, a % b) }
}
