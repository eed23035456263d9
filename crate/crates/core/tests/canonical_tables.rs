//! Canonical partition functions against closed forms, brute-force digit
//! enumeration and a naive coset recursion written independently of the
//! library's composition-sum tables.

use num_traits::{One, ToPrimitive, Zero};
use ultragas::canonical::{
    abscissa_check, canonical_z, canonical_z_ball, energy_distribution, verify_coset_recursion, verify_quad_rec,
    zero_temperature_value, CanonicalTable,
};
use ultragas::exactnum::rational;
use ultragas::mcoracle::{agreement, estimate_z, McConfig};
use ultragas::{BigRational, RationalFunction};

fn c(n: i64) -> RationalFunction {
    RationalFunction::from_int(n)
}

/// `q^(a beta + b)` written with `q^beta = 1/u`.
fn qp(q: u64, a: i64, b: i64) -> RationalFunction {
    let base = RationalFunction::from_int(q as i64).pow(b as i32).unwrap();
    base * RationalFunction::u_pow(-a)
}

fn display_z2(q: u64) -> RationalFunction {
    let qi = q as i64;
    (c(qi - 1) * qp(q, 1, 0)).checked_div(&(qp(q, 1, 1) - c(1))).unwrap()
}

fn bracket(q: u64) -> RationalFunction {
    let qi = q as i64;
    c(-2) * qp(q, 1, 1) + qp(q, 1, 2) + c(2 * qi - 1)
}

fn display_z3(q: u64) -> RationalFunction {
    let qi = q as i64;
    let num = c(qi - 1) * qp(q, 3, 0) * bracket(q);
    let den = (qp(q, 1, 1) - c(1)) * (qp(q, 3, 2) - c(1));
    num.checked_div(&den).unwrap()
}

fn display_z4(q: u64) -> RationalFunction {
    let qi = q as i64;
    let d1 = qp(q, 1, 1) - c(1);
    let d3 = qp(q, 3, 2) - c(1);
    let t1 = (c((qi - 1) * (qi - 1) * (4 - 2 * (qi + 1))) * qp(q, 1, -2))
        .checked_div(&(c(4) * d1.pow(2).unwrap()))
        .unwrap();
    let t2 = (c((3 - qi) * (qi - 1)) * bracket(q) * qp(q, 3, -1))
        .checked_div(&(c(6) * d1.clone() * d3.clone()))
        .unwrap();
    let t3 = (c((qi - 1) * (4 - 3 * (qi + 1))) * bracket(q))
        .checked_div(&(c(6) * qp(q, 0, 3) * d1 * d3))
        .unwrap();
    let num = -t1 - t2 - t3;
    let den = (c(4 - 4 * (qi + 1)) * qp(q, -6, -4)).scale_by(&rational(1, 24)) + RationalFunction::from_ratio(1, 6);
    num.checked_div(&den).unwrap()
}

#[test]
fn trivial_entries_are_one() {
    for q in [2, 3, 4, 5, 7, 9] {
        assert!(canonical_z(q, 0).unwrap().is_one());
        assert!(canonical_z(q, 1).unwrap().is_one());
    }
}

#[test]
fn two_particles_match_display() {
    for q in [2, 3, 4, 5, 7, 9] {
        assert_eq!(canonical_z(q, 2).unwrap(), display_z2(q), "q = {q}");
    }
}

#[test]
fn three_particles_match_display() {
    for q in [2, 3, 5] {
        assert_eq!(canonical_z(q, 3).unwrap(), display_z3(q), "q = {q}");
    }
}

#[test]
fn four_particles_match_display() {
    for q in [2, 3, 5] {
        assert_eq!(canonical_z(q, 4).unwrap(), display_z4(q), "q = {q}");
    }
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn fact(n: usize) -> BigRational {
    (1..=n).fold(BigRational::one(), |a, k| a * rational(k as i64, 1))
}

/// Splitting points by their first digit: a coset holding `k` points
/// contributes `u^C(k,2) Z(k)`, and compositions with all points in one
/// coset feed back into `Z(N)` itself.
fn naive_table(q: u64, nmax: usize) -> Vec<RationalFunction> {
    let mut z = vec![RationalFunction::one(), RationalFunction::one()];
    let qn = q as usize;
    for n in 2..=nmax {
        let mut rhs = RationalFunction::zero();
        for comp in compositions(n, qn) {
            if comp.contains(&n) {
                continue;
            }
            let mut weight = fact(n);
            let mut term = RationalFunction::one();
            for &k in &comp {
                weight /= fact(k);
                term = term * z[k].mul_u_pow((k * k.saturating_sub(1) / 2) as i64);
            }
            rhs = rhs + term.scale_by(&weight);
        }
        let qn_pow = RationalFunction::from_int(q as i64).pow(n as i32).unwrap();
        let lhs = qn_pow - RationalFunction::u_pow((n * (n - 1) / 2) as i64).scale_by(&rational(q as i64, 1));
        z.push(rhs.checked_div(&lhs).unwrap());
    }
    z
}

#[test]
fn table_matches_naive_coset_recursion() {
    for (q, nmax) in [(2u64, 8usize), (3, 8), (4, 6), (5, 6)] {
        let oracle = naive_table(q, nmax);
        let table = CanonicalTable::with_max_n(q, nmax).unwrap();
        for n in 0..=nmax {
            assert_eq!(table.z(n), &oracle[n], "q = {q}, N = {n}");
            assert!(verify_coset_recursion(&table, n));
        }
    }
}

/// `P(|Vandermonde| = q^-k)` by listing every placement of `N` points at
/// `depth` digits. Exact for `k < depth`: a pair agreeing on all listed
/// digits already forces energy at least `depth`.
fn enumerate_energy(q: u64, n: usize, depth: usize) -> Vec<BigRational> {
    let cells = q.pow(depth as u32);
    let total = cells.pow(n as u32);
    let mut counts = vec![0u64; depth];
    let mut pts = vec![0u64; n];
    for idx in 0..total {
        let mut r = idx;
        for p in pts.iter_mut() {
            *p = r % cells;
            r /= cells;
        }
        let mut energy = 0usize;
        'pairs: for i in 0..n {
            for j in i + 1..n {
                let (mut a, mut b) = (pts[i], pts[j]);
                let mut v = 0;
                while v < depth && a % q == b % q {
                    a /= q;
                    b /= q;
                    v += 1;
                }
                energy += v;
                if energy >= depth {
                    break 'pairs;
                }
            }
        }
        if energy < depth {
            counts[energy] += 1;
        }
    }
    counts.iter().map(|&c| rational(c as i64, total as i64)).collect()
}

#[test]
fn energy_distribution_matches_digit_enumeration() {
    for (q, n, depth) in [(2u64, 2usize, 6usize), (2, 3, 4), (2, 4, 4), (3, 2, 4), (3, 3, 3), (5, 3, 2)] {
        let oracle = enumerate_energy(q, n, depth);
        let got = energy_distribution(q, n, depth - 1).unwrap();
        assert_eq!(got, oracle, "q = {q}, N = {n}");
    }
    assert_eq!(
        energy_distribution(3, 2, 2).unwrap(),
        vec![rational(2, 3), rational(2, 9), rational(2, 27)]
    );
}

#[test]
fn energy_distribution_is_a_subprobability() {
    for q in [2u64, 3, 5] {
        for n in 2..=8 {
            let p = energy_distribution(q, n, 30).unwrap();
            assert!(p.iter().all(|x| *x >= BigRational::zero()), "q = {q}, N = {n}");
            let mut partial = BigRational::zero();
            for x in &p {
                partial += x;
                assert!(partial <= BigRational::one());
            }
            let half: BigRational = p[..16].iter().sum();
            assert!(half < partial || partial.is_one(), "q = {q}, N = {n}");
        }
    }
    // Two particles: the missing mass after K terms is exactly (u/q)^(K+1)
    // at u = 1.
    let p = energy_distribution(3, 2, 30).unwrap();
    let partial: BigRational = p.iter().sum();
    assert_eq!(BigRational::one() - partial, num_traits::pow(rational(1, 3), 31));
}

#[test]
fn quadratic_identity_small() {
    for q in [2, 3, 4, 5, 7] {
        for n in 0..=8 {
            assert!(verify_quad_rec(q, n).unwrap(), "q = {q}, N = {n}");
        }
    }
}

#[test]
fn edge_temperatures() {
    for q in [2u64, 3, 5] {
        for n in 0..=10 {
            let z = canonical_z(q, n).unwrap();
            assert!(z.eval(&rational(1, 1)).unwrap().is_one());
            assert_eq!(z.eval(&BigRational::zero()).unwrap(), zero_temperature_value(q, n));
        }
    }
    assert_eq!(zero_temperature_value(3, 2), rational(2, 3));
    assert_eq!(zero_temperature_value(3, 4), BigRational::zero());
}

#[test]
fn poles_sit_on_the_abscissa() {
    for q in [2, 3, 5] {
        for n in 2..=6 {
            assert!(abscissa_check(q, n).unwrap(), "q = {q}, N = {n}");
        }
    }
}

#[test]
fn ball_scaling() {
    let z = canonical_z_ball(2, 2, 1).unwrap();
    assert_eq!(z, (RationalFunction::u() * canonical_z(2, 2).unwrap()).scale_by(&rational(1, 4)));
    assert_eq!(z.eval(&rational(1, 2)).unwrap(), rational(1, 12));
}

#[test]
fn monte_carlo_on_a_small_ball() {
    // Z(2, 2Z_2) = mu^2 E[|x - y|] over the ball; scale the whole-ring
    // estimate by mu^2 u.
    let cfg = McConfig::default();
    let est = estimate_z(2, 2, 1.0, &cfg).unwrap();
    let exact = canonical_z_ball(2, 2, 1).unwrap().eval(&rational(1, 2)).unwrap().to_f64().unwrap();
    let scale = 0.25 * 0.5;
    let scaled = ultragas::Estimate {
        mean: est.mean * scale,
        std_error: est.std_error * scale,
        ..est
    };
    assert!(agreement(exact, &scaled, 3.0).passed, "{scaled:?} vs {exact}");
}
