//! Cylinder probabilities: total probability, transport by push-down,
//! conditional structure, agreement of the two ensembles, the worked 5-adic
//! example and brute-force digit enumeration.

mod common;

use num_traits::{One, ToPrimitive};
use ultragas::canonical::canonical_z;
use ultragas::cylinderprob::{
    conditional_factorization_check, cylinder_weight, ensemble_consistency_check, gc_cylinder_gf, gc_cylinder_prob,
    prob_canonical, prob_canonical_full, push_down_check, total_probability,
};
use ultragas::exactnum::rational;
use ultragas::grandcanonical::{eval_series_at, gc_z_whole};
use ultragas::mcoracle::{agreement, estimate_event_prob, McConfig};
use ultragas::{Ball, BallFamily, BigRational, CylinderEvent, Error, RationalFunction, StarSeries};

#[test]
fn total_probability_over_coverings() {
    for q in [2u64, 3] {
        let covers = common::coverings(q, 4, 3);
        assert!(covers.len() >= 2);
        for cover in covers {
            let family = BallFamily::new(q, cover.clone()).unwrap();
            for n in 0..=5 {
                assert!(total_probability(q, n, &family).unwrap().is_one(), "q = {q}, N = {n}, {cover:?}");
            }
        }
    }
}

#[test]
fn push_down_on_random_events() {
    let mut rng = common::rng(7);
    for i in 0..20 {
        let q = if i % 2 == 0 { 2 } else { 3 };
        let event = common::random_event(&mut rng, q, 3, 2, 5);
        let outer = common::random_ball(&mut rng, q, 3);
        assert!(push_down_check(&event, &outer).unwrap(), "{event:?} into {outer}");
    }
}

#[test]
fn partial_events_sum_over_the_complement() {
    // {N_B = n} alone equals the sum of full events over the complement's
    // occupancies.
    let mut rng = common::rng(11);
    for i in 0..10 {
        let q = if i % 2 == 0 { 2 } else { 3 };
        let event = common::random_event(&mut rng, q, 2, 2, 3);
        let n = event.total() + 2;
        let rest = ultragas::ultrametric::complement(event.family(), &Ball::whole(q)).unwrap();
        let mut acc = RationalFunction::zero();
        let mut balls = event.balls().to_vec();
        balls.extend(rest.balls().iter().cloned());
        let family = BallFamily::new(q, balls).unwrap();
        for extra in ultragas::combinat::WeakCompositions::new(2, rest.len()) {
            let mut counts = event.occupancy().to_vec();
            counts.extend(extra);
            acc = acc + prob_canonical_full(q, n, &CylinderEvent::new(family.clone(), counts).unwrap()).unwrap();
        }
        assert_eq!(prob_canonical(q, n, &event).unwrap(), acc, "{event:?}");
    }
}

/// Sum over ordered placements of `N` points at `depth` digits of
/// `[event holds] * [energy = k]`, for `k < depth`.
fn enumerate_weight(event: &CylinderEvent, n: usize, depth: usize) -> Vec<BigRational> {
    let q = event.q();
    let cells = q.pow(depth as u32);
    let total = cells.pow(n as u32);
    let mut counts = vec![0u64; depth];
    for idx in 0..total {
        let mut r = idx;
        let pts: Vec<Vec<u64>> = (0..n)
            .map(|_| {
                let mut c = r % cells;
                r /= cells;
                (0..depth)
                    .map(|_| {
                        let d = c % q;
                        c /= q;
                        d
                    })
                    .collect()
            })
            .collect();
        if !event.holds_for(&pts) {
            continue;
        }
        let mut energy = 0;
        for i in 0..n {
            for j in i + 1..n {
                energy += pts[i].iter().zip(&pts[j]).take_while(|(a, b)| a == b).count();
            }
        }
        if energy < depth {
            counts[energy] += 1;
        }
    }
    counts.iter().map(|&c| rational(c as i64, total as i64)).collect()
}

#[test]
fn weights_match_digit_enumeration() {
    let cases = [
        (2u64, "2:1:0=2", 3usize, 5usize),
        (2, "2:1:0=1,2:2:1.1=2", 3, 5),
        (2, "2:2:0.1=1,2:2:1.0=1", 3, 5),
        (3, "3:1:0=1,3:1:2=1", 3, 3),
        (3, "3:2:1.1=2", 2, 4),
    ];
    for (q, balls, n, depth) in cases {
        let event = CylinderEvent::parse(q, balls).unwrap();
        let weight = prob_canonical(q, n, &event).unwrap() * canonical_z(q, n).unwrap();
        assert_eq!(weight.taylor(depth - 1).unwrap(), enumerate_weight(&event, n, depth), "{balls}, N = {n}");
    }
}

#[test]
fn conditional_factorization() {
    let b: Ball = "2:1:0".parse().unwrap();
    let inner = CylinderEvent::parse(2, "2:2:0.1=1").unwrap();
    let outer = CylinderEvent::parse(2, "2:2:1.0=1").unwrap();
    for (n_total, n) in [(3, 2), (4, 2), (4, 3), (5, 1)] {
        assert!(conditional_factorization_check(2, n_total, &b, n, &inner, &outer).unwrap());
    }
    let b: Ball = "3:1:1".parse().unwrap();
    let inner = CylinderEvent::parse(3, "3:2:1.0=1,3:2:1.2=1").unwrap();
    let outer = CylinderEvent::parse(3, "3:1:0=1").unwrap();
    assert!(conditional_factorization_check(3, 4, &b, 2, &inner, &outer).unwrap());
    let stray = CylinderEvent::parse(3, "3:1:2=1").unwrap();
    assert!(matches!(
        conditional_factorization_check(3, 4, &b, 2, &stray, &outer),
        Err(Error::NotContained(..))
    ));
}

#[test]
fn ensembles_agree_on_random_events() {
    let mut rng = common::rng(3);
    for i in 0..10 {
        let q = if i % 2 == 0 { 2 } else { 3 };
        let event = common::random_event(&mut rng, q, 3, 2, 4);
        assert!(ensemble_consistency_check(q, &event, 6).unwrap(), "{event:?}");
    }
}

#[test]
fn worked_five_adic_example() {
    // Six particles in 1 + m, four in 2 + 3*5 + 25 o, none elsewhere
    // constrained.
    let q = 5;
    let dmax = 14;
    let event = CylinderEvent::parse(q, "5:1:1=6,5:2:2.3=4").unwrap();
    let gf = gc_cylinder_gf(q, &event, dmax).unwrap();

    let whole = gc_z_whole(q, dmax).unwrap();
    let one_coset = whole.overline(1).substitute_t_scale(&rational(1, 5));
    let free_cosets = one_coset.pow(3);
    let fact = |n: i64| (1..=n).product::<i64>();
    let six = StarSeries::monomial(
        q,
        dmax,
        canonical_z(q, 6).unwrap().mul_u_pow(15).scale_by(&rational(1, fact(6) * 5i64.pow(6))),
        6,
    );
    let four = StarSeries::monomial(
        q,
        dmax,
        canonical_z(q, 4).unwrap().mul_u_pow(12).scale_by(&rational(1, fact(4) * 25i64.pow(4))),
        4,
    );
    let small_ball = whole.overline(1).substitute_t_scale(&rational(1, 25)).overline(1);
    let coset_two = four.star_mul(&small_ball.star_pow(4, 1), 1).unwrap();
    let closed = free_cosets.mul(&six).unwrap().mul(&coset_two).unwrap();
    assert_eq!(gf.series(), &closed);
    assert!(gf.series().coeffs()[..10].iter().all(RationalFunction::is_zero));
    assert!(!gf.series().coeff(10).is_zero());
}

#[test]
fn grand_canonical_probability_matches_exact_series() {
    let q = 2;
    let event = CylinderEvent::parse(q, "2:1:0=1,2:2:1.1=1").unwrap();
    let (t0, u0) = (rational(1, 2), rational(1, 2));
    let p = gc_cylinder_prob(q, &event, &t0, &u0, &rational(1, 10_000_000_000)).unwrap();
    assert!(p.error_bound < rational(1, 10_000_000_000));
    let d = p.dmax;
    let num = gc_cylinder_gf(q, &event, d).unwrap().series().eval_coeffs(&u0).unwrap();
    let den = gc_z_whole(q, d).unwrap().eval_coeffs(&u0).unwrap();
    assert_eq!(p.value, eval_series_at(&num, &t0) / eval_series_at(&den, &t0));
    assert!(matches!(
        gc_cylinder_prob(q, &event, &rational(200, 1), &u0, &rational(1, 10_000_000_000)),
        Err(Error::ToleranceUnattainable { .. })
    ));
}

#[test]
fn weights_need_consistent_events() {
    assert!(CylinderEvent::parse(2, "2:1:0=1,2:2:0.1=1").is_err());
    assert!(CylinderEvent::parse(2, "2:1:0").is_err());
    let full = CylinderEvent::parse(2, "2:1:0=1").unwrap();
    assert!(prob_canonical_full(2, 1, &full).is_err());
    assert!(cylinder_weight(2, &["2:1:1".parse().unwrap()], &[2]).unwrap().eval(&BigRational::one()).unwrap() == rational(1, 4));
}

#[test]
fn monte_carlo_agreement_on_random_events() {
    let mut rng = common::rng(19);
    let cfg = McConfig {
        samples: 100_000,
        seed: 2024,
        ..McConfig::default()
    };
    let mut failures = 0;
    for i in 0..10 {
        let q = [2u64, 3, 5][i % 3];
        let event = common::random_event(&mut rng, q, 2, 2, 3);
        let n = event.total() + (i % 2);
        let exact = prob_canonical(q, n, &event).unwrap();
        let beta = 1.0;
        let u0 = rational(1, q as i64);
        let exact = exact.eval(&u0).unwrap().to_f64().unwrap();
        let est = estimate_event_prob(q, n, beta, &event, &cfg).unwrap();
        if !agreement(exact, &est, 3.0).passed {
            failures += 1;
        }
    }
    assert!(failures <= 1, "{failures} of 10 events outside 3 sigma");
}
