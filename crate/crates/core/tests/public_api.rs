//! Worked examples and invariants through the public API only.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use polysieve::arith::{euler_phi, gcd_conv, moebius, omega, ramanujan_sum, theta, valuation};
use polysieve::characters::{character_table, corollary_lhs, primitive_count_formula};
use polysieve::farey::{farey_sequence, farey_size, kernel_exact, kernel_k};
use polysieve::polyroots::{
    a_exponent, euler_majorant, lift_roots, prop1_sum, rho, roots_mod_prime, vandermonde_check,
};
use polysieve::sharpness::ex1_check;
use polysieve::sieve::{lhs_exact, lhs_numeric, theorem1_report};
use polysieve::{oracle, Error, IntPolynomial, Rational, SieveInstance64};
use proptest::prelude::*;

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c).unwrap()
}

#[test]
fn arithmetic_examples() {
    assert_eq!((euler_phi(12).unwrap(), euler_phi(97).unwrap()), (4, 96));
    assert_eq!((moebius(12).unwrap(), moebius(30).unwrap()), (0, -1));
    assert_eq!((omega(-12).unwrap(), omega(1).unwrap()), (2, 0));
    assert_eq!([1, 2, 3].map(|k| theta(k).unwrap()), [1, 6, 18]);
    assert_eq!(
        (gcd_conv(0, 7).unwrap(), gcd_conv(-15, 10).unwrap()),
        (7, 5)
    );
    assert_eq!(valuation(50, 5).unwrap(), 2);
    assert_eq!(
        (ramanujan_sum(5, 0).unwrap(), ramanujan_sum(4, 2).unwrap()),
        (4, -2)
    );
    assert!(matches!(euler_phi(0), Err(Error::Domain(_))));
}

#[test]
fn root_count_examples() {
    let t2p1 = poly(&[1, 0, 1]);
    assert_eq!(roots_mod_prime(&t2p1, 5).unwrap().roots(), &[2, 3]);
    assert_eq!(lift_roots(&t2p1, 5, 2).unwrap().roots(), &[7, 18]);
    assert_eq!(
        lift_roots(&poly(&[1, 0, -1]), 2, 3).unwrap().roots(),
        &[1, 3, 5, 7]
    );
    assert_eq!(rho(&t2p1, 65).unwrap(), 4);
    assert_eq!(rho(&poly(&[1, 0, 0]), 4).unwrap(), 2);
    assert_eq!([1, 3, 4].map(|m| a_exponent(m, 2).unwrap()), [1, 1, 2]);

    let v = vandermonde_check(&poly(&[2, 0, 1]), &[0, 1, 2].map(BigInt::from)).unwrap();
    assert_eq!(
        (v.lhs, v.det, v.ok),
        (BigInt::from(-4), BigInt::from(4), true)
    );
}

#[test]
fn proposition_examples() {
    let h10: f64 = prop1_sum(&poly(&[1, 0]), 10).unwrap();
    assert!((h10 - 2.928_968_253_968_254).abs() < 1e-12);
    let e: Rational = euler_majorant(&poly(&[1, 0, 0]), 4).unwrap();
    assert_eq!(e, Rational::new(8.into(), 3.into()));
    let exact: Rational = prop1_sum(&poly(&[1, 0, 1]), 20).unwrap();
    let scan: Rational = (1..=20u64)
        .map(|m| Rational::new(oracle::rho_scan(&poly(&[1, 0, 1]), m).into(), m.into()))
        .sum();
    assert_eq!(exact, scan);
}

#[test]
fn farey_and_kernel_examples() {
    let f3: Vec<(u64, u64)> = farey_sequence(3)
        .unwrap()
        .iter()
        .map(|f| (f.numerator(), f.denominator()))
        .collect();
    assert_eq!(f3, [(0, 1), (1, 3), (1, 2), (2, 3)]);
    assert_eq!(farey_size(5).unwrap(), 10);
    assert_eq!(
        kernel_exact(&BigInt::from(0), 7).unwrap() as u64,
        farey_size(7).unwrap()
    );
    let t2 = poly(&[1, 0, 0]);
    assert_eq!(
        kernel_k(&t2, 9, &3.into(), &(-3).into()).unwrap() as u64,
        farey_size(9).unwrap()
    );
}

#[test]
fn sieve_example() {
    let inst = SieveInstance64::unit_weights(poly(&[1, 0, 0]), 20, 0, 50).unwrap();
    assert_eq!(lhs_exact(&inst).unwrap(), BigInt::from(32304));
    let r = theorem1_report(&inst).unwrap();
    assert!(r.row_chain_ok && r.ratio <= 10.0);
}

#[test]
fn sharpness_and_characters_examples() {
    let c = ex1_check(2, 5).unwrap();
    assert_eq!((c.lhs, c.rhs, c.ok), (20, 20, true));
    assert!(matches!(ex1_check(3, 5), Err(Error::Precondition(_))));
    assert_eq!(character_table(12).unwrap().primitive_count(), 1);
    assert_eq!(character_table(6).unwrap().primitive_count(), 0);
    assert_eq!(primitive_count_formula(15).unwrap(), 3);
}

fn small_poly() -> impl Strategy<Value = IntPolynomial> {
    (prop::collection::vec(-6i64..=6, 1..=3), 1i64..=4).prop_map(|(mut tail, lead)| {
        tail.insert(0, lead);
        poly(&tail)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_matches_scan(p in small_poly(), m in 1u64..200) {
        prop_assert_eq!(rho(&p, m).unwrap(), oracle::rho_scan(&p, m));
    }

    #[test]
    fn kernel_matches_farey_sum(c in -500i64..500, q in 1u64..25) {
        let c = BigInt::from(c);
        let direct: num_complex::Complex64 = oracle::farey_exponential_sum(&farey_sequence(q).unwrap(), &c);
        prop_assert!((direct.re - kernel_exact(&c, q).unwrap() as f64).abs() < 1e-8);
    }

    #[test]
    fn quadratic_form_paths_agree(p in small_poly(), q in 1u64..12, start in -20i64..20, w in prop::collection::vec(-5i64..=5, 1..16)) {
        let inst = SieveInstance64::from_integer_weights(p, q, start, &w).unwrap();
        let exact = lhs_exact(&inst).unwrap().to_f64().unwrap();
        let numeric = lhs_numeric(&inst).unwrap();
        prop_assert!((exact - numeric).abs() <= 1e-9 * exact.max(1.0));
    }

    #[test]
    fn corollary_is_nonnegative_and_finite(p in small_poly(), d in 1u64..20, w in prop::collection::vec(-3i64..=3, 1..12)) {
        let inst = SieveInstance64::from_integer_weights(p, d, 0, &w).unwrap();
        let v = corollary_lhs(&inst).unwrap();
        prop_assert!(v.is_finite() && v >= -1e-9);
    }
}
