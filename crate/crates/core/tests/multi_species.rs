mod common;

use num_traits::ToPrimitive;
use ultragas::canonical::canonical_z;
use ultragas::cylinderprob::cylinder_weight;
use ultragas::exactnum::rational;
use ultragas::mcoracle::{agreement, estimate_multi_z, McConfig};
use ultragas::multicomponent::{multi_canonical_z, multi_energy_exponent, verify_multi_qpower};
use ultragas::{BigRational, ChargeProfile, Error, RationalFunction, SpeciesCounts};

fn z(q: u64, charges: &[u64], counts: &[usize]) -> RationalFunction {
    let p = ChargeProfile::with_repeats(charges.to_vec()).unwrap();
    let c = SpeciesCounts::new(&p, counts.to_vec()).unwrap();
    multi_canonical_z(q, &p, &c).unwrap()
}

#[test]
fn q_power_identity() {
    for q in [2, 3] {
        for charges in [vec![1, 2], vec![2, 3]] {
            let p = ChargeProfile::new(charges.clone()).unwrap();
            assert!(verify_multi_qpower(q, &p, 4).unwrap(), "q = {q}, charges {charges:?}");
        }
    }
}

#[test]
fn unit_charges_reduce_to_one_species() {
    for q in [2, 3, 5] {
        for (a, b) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
            assert_eq!(z(q, &[1, 1], &[a, b]), canonical_z(q, a + b).unwrap(), "q = {q}");
        }
    }
}

#[test]
fn single_charge_rescales_the_temperature() {
    for q in [2, 3] {
        for charge in [1u64, 2, 3] {
            for n in 0..=5 {
                let expected = canonical_z(q, n).unwrap().substitute_power((charge * charge) as usize);
                assert_eq!(z(q, &[charge], &[n]), expected, "q = {q}, Q = {charge}, N = {n}");
            }
        }
    }
}

/// Taylor coefficients of `Z(N)` by listing all placements at `depth`
/// digits; exact below `depth` since every charge product is at least 1.
fn enumerate(q: u64, charges: &[u64], depth: usize) -> Vec<BigRational> {
    let n = charges.len();
    let cells = q.pow(depth as u32);
    let total = cells.pow(n as u32);
    let mut counts = vec![0u64; depth];
    for idx in 0..total {
        let mut r = idx;
        let pts: Vec<u64> = (0..n)
            .map(|_| {
                let c = r % cells;
                r /= cells;
                c
            })
            .collect();
        let mut e = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                let (mut x, mut y) = (pts[i], pts[j]);
                let mut v = 0;
                while v < depth && x % q == y % q {
                    x /= q;
                    y /= q;
                    v += 1;
                }
                e += charges[i] * charges[j] * v as u64;
            }
        }
        if (e as usize) < depth {
            counts[e as usize] += 1;
        }
    }
    counts.iter().map(|&c| rational(c as i64, total as i64)).collect()
}

#[test]
fn taylor_coefficients_match_enumeration() {
    for (q, charges, counts, depth) in [
        (2u64, vec![1u64, 2], vec![1usize, 1], 8usize),
        (2, vec![1, 2], vec![2, 1], 6),
        (3, vec![1, 2], vec![1, 2], 5),
        (2, vec![2, 3], vec![1, 2], 7),
    ] {
        let expanded: Vec<u64> = charges
            .iter()
            .zip(&counts)
            .flat_map(|(&c, &k)| std::iter::repeat_n(c, k))
            .collect();
        // The table counts unordered species labels; enumeration is over
        // ordered particles, which is the same normalization.
        let oracle = enumerate(q, &expanded, depth);
        assert_eq!(z(q, &charges, &counts).taylor(depth - 1).unwrap(), oracle, "q = {q}, {charges:?} {counts:?}");
    }
}

#[test]
fn cross_ball_factor_is_a_charged_energy() {
    // The factor between occupied balls in a cylinder weight is the
    // Boltzmann weight of point charges n_m sitting at the ball centers.
    let mut rng = common::rng(5);
    for i in 0..20 {
        let q = [2u64, 3][i % 2];
        let event = common::random_event(&mut rng, q, 3, 3, 5);
        let balls = event.balls();
        let counts = event.occupancy();
        let n: usize = counts.iter().sum();
        let mut own = RationalFunction::one();
        let mut multinomial = rational(1, 1);
        let fact = |k: usize| (1..=k as i64).product::<i64>();
        for (b, &c) in balls.iter().zip(counts) {
            own = own * cylinder_weight(q, std::slice::from_ref(b), &[c]).unwrap();
            multinomial /= rational(fact(c), 1);
        }
        multinomial *= rational(fact(n), 1);
        let cross = cylinder_weight(q, balls, counts).unwrap().checked_div(&own).unwrap();

        let depth = balls.iter().map(|b| b.radius_exp()).max().unwrap_or(0);
        let centers: Vec<Vec<u64>> = balls
            .iter()
            .map(|b| {
                let mut d = b.digits().to_vec();
                d.resize(depth, 0);
                d
            })
            .collect();
        let particles: Vec<(u64, &[u64])> = counts
            .iter()
            .zip(&centers)
            .filter(|(&c, _)| c > 0)
            .map(|(&c, d)| (c as u64, d.as_slice()))
            .collect();
        let k = multi_energy_exponent(&particles).unwrap();
        assert_eq!(cross, RationalFunction::u_pow(k as i64).scale_by(&multinomial), "{event:?}");
    }
}

#[test]
fn coinciding_points_exhaust_precision() {
    let a = [1u64, 0, 1];
    assert!(matches!(
        multi_energy_exponent(&[(1, &a[..]), (2, &a[..])]),
        Err(Error::PrecisionExhausted(3))
    ));
}

#[test]
fn monte_carlo_agreement() {
    let cfg = McConfig {
        seed: 77,
        ..McConfig::default()
    };
    let mut failures = 0;
    for q in [2u64, 3] {
        for charges in [vec![1u64, 2], vec![2, 3]] {
            let p = ChargeProfile::new(charges.clone()).unwrap();
            for counts in [vec![1usize, 1], vec![2, 1]] {
                let c = SpeciesCounts::new(&p, counts.clone()).unwrap();
                let exact = multi_canonical_z(q, &p, &c)
                    .unwrap()
                    .eval(&rational(1, q as i64))
                    .unwrap()
                    .to_f64()
                    .unwrap();
                let est = estimate_multi_z(q, &p, &c, 1.0, &cfg).unwrap();
                if !agreement(exact, &est, 3.0).passed {
                    failures += 1;
                }
            }
        }
    }
    assert!(failures <= 1, "{failures} of 8 outside 3 sigma");
}
