mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;
use ultragas::exactnum::rational;
use ultragas::ultrametric::{ball_distance, complement, disjoint, group_by_coset, is_minimal, total_measure};
use ultragas::{Ball, BallDistance, BallFamily, BigRational};

fn ball(q: u64, max_depth: usize) -> impl Strategy<Value = Ball> {
    prop::collection::vec(0..q, 0..=max_depth).prop_map(move |d| Ball::new(q, d).unwrap())
}

fn point(q: u64, len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..q, len)
}

/// `|x - y|` as an exponent of `1/q`, capped at the sample length.
fn valuation(x: &[u64], y: &[u64]) -> usize {
    x.iter().zip(y).take_while(|(a, b)| a == b).count()
}

proptest! {
    #[test]
    fn strong_triangle_inequality(x in point(3, 8), y in point(3, 8), z in point(3, 8)) {
        // |x - z| <= max(|x - y|, |y - z|) reads as v(x,z) >= min(v(x,y), v(y,z)).
        prop_assert!(valuation(&x, &z) >= valuation(&x, &y).min(valuation(&y, &z)));
    }

    #[test]
    fn balls_nest_or_separate(a in ball(3, 4), b in ball(3, 4)) {
        let nested = a.contains(&b) || b.contains(&a);
        prop_assert!(nested != disjoint(&a, &b));
        match ball_distance(&a, &b) {
            BallDistance::Same => prop_assert!(nested),
            BallDistance::Exponent(k) => {
                prop_assert!(!nested);
                prop_assert_eq!(k, valuation(a.digits(), b.digits()));
            }
        }
    }

    #[test]
    fn distance_between_disjoint_balls_is_attained_by_any_points(
        a in ball(2, 4), b in ball(2, 4), tail_a in point(2, 6), tail_b in point(2, 6)
    ) {
        prop_assume!(disjoint(&a, &b));
        let x: Vec<u64> = a.digits().iter().chain(&tail_a).copied().collect();
        let y: Vec<u64> = b.digits().iter().chain(&tail_b).copied().collect();
        prop_assert!(a.contains_point(&x) && b.contains_point(&y));
        prop_assert_eq!(ball_distance(&a, &b), BallDistance::Exponent(valuation(&x, &y)));
    }

    #[test]
    fn children_partition_the_ball(b in ball(5, 3)) {
        let kids: Vec<Ball> = b.children().collect();
        prop_assert_eq!(kids.len(), 5);
        prop_assert_eq!(total_measure(&kids), b.measure());
        for k in &kids {
            prop_assert_eq!(k.parent(), Some(b.clone()));
        }
        let text = b.to_string();
        prop_assert_eq!(text.parse::<Ball>().unwrap(), b);
    }

    #[test]
    fn complement_is_a_minimal_partition(seed in 0u64..10_000, q in 2u64..=4) {
        let mut rng = common::rng(seed);
        let balls = common::random_family(&mut rng, q, 4, 3);
        let within = Ball::whole(q);
        let family = BallFamily::new(q, balls.clone()).unwrap();
        let rest = complement(&family, &within).unwrap();
        prop_assert_eq!(family.measure() + rest.measure(), BigRational::one());
        prop_assert!(is_minimal(&rest));
        for r in rest.balls() {
            prop_assert!(balls.iter().all(|b| disjoint(b, r)));
        }
        // Together they form a valid disjoint family covering o.
        let mut all = balls.clone();
        all.extend(rest.balls().iter().cloned());
        prop_assert!(BallFamily::new(q, all).is_ok());
        // Complement twice gives back a cover of the original union.
        let again = complement(&rest, &within).unwrap();
        prop_assert_eq!(again.measure(), family.measure());
    }

    #[test]
    fn points_outside_the_family_land_in_the_complement(seed in 0u64..10_000, x in point(3, 6)) {
        let mut rng = common::rng(seed);
        let family = BallFamily::new(3, common::random_family(&mut rng, 3, 3, 3)).unwrap();
        let rest = complement(&family, &Ball::whole(3)).unwrap();
        prop_assert!(family.locate(&x).is_some() != rest.locate(&x).is_some());
    }
}

#[test]
fn complement_inside_a_sub_ball() {
    let within: Ball = "3:1:2".parse().unwrap();
    let family = BallFamily::new(3, vec!["3:2:2.0".parse().unwrap()]).unwrap();
    let rest = complement(&family, &within).unwrap();
    let names: Vec<String> = rest.balls().iter().map(|b| b.to_string()).collect();
    assert_eq!(names, ["3:2:2.1", "3:2:2.2"]);
    assert_eq!(rest.measure(), rational(2, 9));
    assert!(complement(&family, &"3:1:1".parse().unwrap()).is_err());
}

#[test]
fn grouping_by_leading_digit() {
    let family = BallFamily::new(
        2,
        vec!["2:2:0.1".parse().unwrap(), "2:1:1".parse().unwrap(), "2:3:0.0.1".parse().unwrap()],
    )
    .unwrap();
    let groups = group_by_coset(&family).unwrap();
    assert_eq!(groups[0].len(), 2);
    assert_eq!(groups[1].len(), 1);
    assert!(BallFamily::empty(2).measure().is_zero());
}
