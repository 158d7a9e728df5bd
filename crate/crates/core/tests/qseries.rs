use proptest::prelude::*;
use qsign_core::qseries::{
    pochhammer_inf, q10_series, sign_pattern_verdict, ProductExponent, ResidueProductSpec,
    TruncatedSeries, Verdict,
};
use qsign_core::Delta;
use rug::Integer;

fn product(residue: i64, order: usize) -> TruncatedSeries {
    pochhammer_inf(ResidueProductSpec::new(residue, 10, ProductExponent::Product), order)
}

#[test]
fn plus_and_minus_are_reciprocal() {
    let n = 400;
    let prod = q10_series(Delta::Plus, n).mul(&q10_series(Delta::Minus, n));
    assert_eq!(prod, TruncatedSeries::one(n));
}

#[test]
fn in_place_expansion_matches_generic_arithmetic() {
    let n = 250;
    let num = product(1, n).mul(&product(9, n));
    let den = product(3, n).mul(&product(7, n));
    let expected = num.mul(&den.recip().unwrap());
    assert_eq!(q10_series(Delta::Plus, n), expected);
    let expected_minus = den.mul(&num.recip().unwrap());
    assert_eq!(q10_series(Delta::Minus, n), expected_minus);
}

#[test]
fn reciprocal_of_denominator_matches_geometric_expansion() {
    let n = 20;
    let den = product(3, n).mul(&product(7, n));
    // prod 1/(1-q^e) over e = 3, 7 (mod 10) by multiplying geometric series.
    let mut brute = TruncatedSeries::one(n);
    for e in [3usize, 7, 13, 17] {
        let mut geo = vec![Integer::new(); n + 1];
        for i in (0..=n).step_by(e) {
            geo[i] = Integer::from(1);
        }
        brute = brute.mul(&TruncatedSeries::new(geo));
    }
    assert_eq!(den.recip().unwrap(), brute);
    let via_spec =
        pochhammer_inf(ResidueProductSpec::new(3, 10, ProductExponent::Reciprocal), n).mul(
            &pochhammer_inf(ResidueProductSpec::new(7, 10, ProductExponent::Reciprocal), n),
        );
    assert_eq!(via_spec, brute);
}

#[test]
fn coefficients_exceed_machine_words() {
    let s = q10_series(Delta::Plus, 3000);
    let max_bits = s.coeffs().iter().map(|c| c.significant_bits()).max().unwrap();
    assert!(max_bits > 64, "largest coefficient has {max_bits} bits");
}

#[test]
fn sign_pattern_holds_to_six_hundred() {
    for delta in Delta::BOTH {
        let s = q10_series(delta, 600);
        for (n, c) in s.coeffs().iter().enumerate() {
            let v = sign_pattern_verdict(delta, n as u64, c);
            assert_ne!(v, Verdict::Mismatch, "delta={delta} n={n} c={c}");
        }
    }
}

fn series(max_order: usize) -> impl Strategy<Value = TruncatedSeries> {
    (1..=max_order).prop_flat_map(|order| {
        prop::collection::vec(-1_000_000i64..1_000_000, order + 1)
            .prop_map(|v| TruncatedSeries::from_i64s(&v))
    })
}

proptest! {
    #[test]
    fn mul_is_commutative(a in series(24), b in series(24)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn mul_is_associative(a in series(16), b in series(16), c in series(16)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn unit_series_invert(mut v in prop::collection::vec(-50i64..50, 1..20), neg in any::<bool>()) {
        v[0] = if neg { -1 } else { 1 };
        let a = TruncatedSeries::from_i64s(&v);
        let b = a.recip().unwrap();
        prop_assert_eq!(a.mul(&b), TruncatedSeries::one(a.order()));
    }
}
