use proptest::prelude::*;
use ultragas::exactnum::{rational, RationalFunction, UPoly};
use ultragas::BigRational;

fn small_poly() -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-6i64..=6, 0..5).prop_map(|cs| UPoly::from_i64s(&cs))
}

fn nonzero_poly() -> impl Strategy<Value = UPoly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn rf() -> impl Strategy<Value = RationalFunction> {
    (small_poly(), nonzero_poly(), 1i64..5)
        .prop_map(|(n, d, s)| RationalFunction::from_upolys(&n, &d).unwrap().scale_by(&rational(1, s)))
}

/// Denominator nonzero at the origin, so Taylor coefficients exist.
fn rf_regular_at_zero() -> impl Strategy<Value = RationalFunction> {
    (small_poly(), small_poly(), 1i64..6).prop_map(|(n, d, c0)| {
        let mut dc: Vec<BigRational> = d.coeffs().to_vec();
        if dc.is_empty() {
            dc.push(rational(0, 1));
        }
        dc[0] = rational(c0, 1);
        RationalFunction::from_upolys(&n, &UPoly::from_coeffs(dc)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalizing_twice_changes_nothing(n in small_poly(), d in nonzero_poly()) {
        let once = RationalFunction::from_upolys(&n, &d).unwrap();
        let twice = RationalFunction::from_upolys(&once.numerator(), &once.denominator()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.numerator(), twice.numerator());
        prop_assert_eq!(once.denominator(), twice.denominator());
        let lc = once.denominator().coeffs().last().unwrap().clone();
        prop_assert_eq!(lc, rational(1, 1));
    }

    #[test]
    fn equal_values_have_equal_forms(n in small_poly(), d in nonzero_poly(), k in nonzero_poly()) {
        // n k / (d k) must reduce to the same canonical form as n / d.
        let a = RationalFunction::from_upolys(&n, &d).unwrap();
        let nk = RationalFunction::from_upoly(&n) * RationalFunction::from_upoly(&k);
        let dk = RationalFunction::from_upoly(&d) * RationalFunction::from_upoly(&k);
        prop_assert_eq!(a, nk.checked_div(&dk).unwrap());
    }

    #[test]
    fn ring_axioms(a in rf(), b in rf(), c in rf()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in rf(), b in rf(), x in -4i64..=4) {
        let u0 = rational(x, 3);
        if let (Ok(va), Ok(vb)) = (a.eval(&u0), b.eval(&u0)) {
            prop_assert_eq!((&a * &b).eval(&u0).unwrap(), &va * &vb);
            prop_assert_eq!((&a + &b).eval(&u0).unwrap(), va + vb);
        }
    }

    #[test]
    fn taylor_remainder_starts_after_k(f in rf_regular_at_zero(), k in 0usize..8) {
        let coeffs = f.taylor(k).unwrap();
        let poly = RationalFunction::from_upoly(&UPoly::from_coeffs(coeffs));
        let rest = &f - &poly;
        // The remainder is u^(k+1) times a function regular at the origin.
        let head = rest.mul_u_pow(-(k as i64 + 1));
        prop_assert!(head.taylor(0).is_ok());
        let expanded = rest.taylor(k).unwrap();
        prop_assert!(expanded.iter().all(|c| *c == rational(0, 1)));
    }
}

#[test]
fn shared_root_examples() {
    let den = UPoly::from_i64s(&[3, -1]);
    assert!(RationalFunction::has_root_in_common(&den, &UPoly::from_i64s(&[-9, 0, 1])));
    assert!(!RationalFunction::has_root_in_common(&den, &UPoly::from_i64s(&[-9, 0, 0, 1])));
}

#[test]
fn taylor_of_two_over_three_minus_u_matches_digit_enumeration() {
    // Two uniform elements of Z_3 first differ at digit k with probability
    // (1/3)^k (2/3); enumerate digit pairs to depth 4.
    let depth = 4u32;
    let total = 3u64.pow(depth);
    let mut hits = [0u64; 3];
    for a in 0..total {
        for b in 0..total {
            let (mut x, mut y) = (a, b);
            for k in 0..depth as usize {
                if x % 3 != y % 3 {
                    if k < 3 {
                        hits[k] += 1;
                    }
                    break;
                }
                x /= 3;
                y /= 3;
            }
        }
    }
    let oracle: Vec<BigRational> = hits.iter().map(|&h| rational(h as i64, (total * total) as i64)).collect();
    let f = RationalFunction::from_upolys(&UPoly::from_i64s(&[2]), &UPoly::from_i64s(&[3, -1])).unwrap();
    assert_eq!(f.taylor(2).unwrap(), oracle);
}
