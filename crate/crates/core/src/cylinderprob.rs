//! Probabilities of cylinder events `{N_B = n}` in the canonical and grand
//! canonical ensembles.
//!
//! For disjoint balls `B_m = zeta_m + pi^(r_m) o` holding `n_m` particles
//! each, with every particle inside one of the balls,
//!
//! ```text
//! Z(N, A) = N! prod_{k<l} |zeta_k - zeta_l|^(beta n_k n_l)
//!              prod_m u^(r_m C(n_m,2)) q^(-r_m n_m) Z(n_m, o) / n_m!
//! ```
//!
//! where the distance between disjoint balls does not depend on the chosen
//! centers. Everything else reduces to sums of such weights.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::canonical::{ball_scaling, canonical_z_values_at, check_q, shared_table, CanonicalTable};
use crate::combinat::{factorial_q, weak_composition_count, WeakCompositions};
use crate::error::{Error, Result};
use crate::exactnum::RationalFunction;
use crate::grandcanonical::{gc_z_whole, required_truncation};
use crate::starring::StarSeries;
use crate::ultrametric::{ball_distance, complement, group_by_coset, Ball, BallDistance, BallFamily};

/// Upper limit on the number of occupancy assignments summed for one
/// probability.
pub const MAX_COMPOSITIONS: u64 = 10_000_000;

/// The event that ball `m` of a disjoint family holds exactly
/// `occupancy[m]` particles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylinderEvent {
    family: BallFamily,
    occupancy: Vec<usize>,
}

impl CylinderEvent {
    pub fn new(family: BallFamily, occupancy: Vec<usize>) -> Result<Self> {
        if family.len() != occupancy.len() {
            return Err(Error::InvalidEvent(format!(
                "{} balls but {} occupancy counts",
                family.len(),
                occupancy.len()
            )));
        }
        Ok(CylinderEvent { family, occupancy })
    }

    pub fn from_pairs(q: u64, pairs: Vec<(Ball, usize)>) -> Result<Self> {
        let (balls, counts): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Self::new(BallFamily::new(q, balls)?, counts)
    }

    /// No constraint at all.
    pub fn empty(q: u64) -> Self {
        CylinderEvent {
            family: BallFamily::empty(q),
            occupancy: Vec::new(),
        }
    }

    /// Parse `"5:1:1=6,5:2:2.3=4"`: comma-separated `ball=count` pairs.
    /// An empty string is the unconstrained event.
    pub fn parse(q: u64, s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (ball, count) = item
                .rsplit_once('=')
                .ok_or_else(|| Error::InvalidEvent(format!("{item:?}: expected ball=count")))?;
            let ball = Ball::from_str(ball)?;
            if ball.q() != q {
                return Err(Error::InvalidEvent(format!("{ball} does not have q = {q}")));
            }
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Error::InvalidEvent(format!("{item:?}: bad count")))?;
            pairs.push((ball, count));
        }
        Self::from_pairs(q, pairs)
    }

    pub fn q(&self) -> u64 {
        self.family.q()
    }

    pub fn family(&self) -> &BallFamily {
        &self.family
    }

    pub fn balls(&self) -> &[Ball] {
        self.family.balls()
    }

    pub fn occupancy(&self) -> &[usize] {
        &self.occupancy
    }

    pub fn total(&self) -> usize {
        self.occupancy.iter().sum()
    }

    pub fn pairs(&self) -> Vec<(Ball, usize)> {
        self.balls().iter().cloned().zip(self.occupancy.iter().copied()).collect()
    }

    /// True when the union of the balls is all of `o`.
    pub fn is_covering(&self) -> bool {
        self.family.measure().is_one()
    }

    /// Does a configuration of points (digit sequences) belong to the event?
    pub fn holds_for(&self, points: &[Vec<u64>]) -> bool {
        let mut counts = vec![0usize; self.occupancy.len()];
        for p in points {
            if let Some(i) = self.family.locate(p) {
                counts[i] += 1;
            }
        }
        counts == self.occupancy
    }

    /// The event transported into `outer` by `x -> center + pi^r x`.
    pub fn push_into(&self, outer: &Ball) -> Result<Self> {
        let balls = self.balls().iter().map(|b| b.push_into(outer)).collect();
        Self::new(BallFamily::new(self.q(), balls)?, self.occupancy.clone())
    }
}

/// Unnormalized weight `Z(N, A)` of the set of configurations with exactly
/// `counts[m]` particles in `balls[m]` and no particle elsewhere.
pub fn cylinder_weight_with(table: &CanonicalTable, balls: &[Ball], counts: &[usize]) -> RationalFunction {
    let q = table.q();
    let n: usize = counts.iter().sum();
    let mut u_exp: i64 = 0;
    for (i, a) in balls.iter().enumerate() {
        if counts[i] == 0 {
            continue;
        }
        for (j, b) in balls.iter().enumerate().skip(i + 1) {
            if counts[j] == 0 {
                continue;
            }
            if let BallDistance::Exponent(k) = ball_distance(a, b) {
                u_exp += (k * counts[i] * counts[j]) as i64;
            }
        }
    }
    let mut acc = RationalFunction::one().mul_u_pow(u_exp).scale_by(&factorial_q(n));
    for (b, &c) in balls.iter().zip(counts) {
        if c == 0 {
            continue;
        }
        let z = ball_scaling(q, c, b.radius_exp(), table.z(c)).scale_by(&factorial_q(c).recip());
        acc = acc * z;
    }
    acc
}

pub fn cylinder_weight(q: u64, balls: &[Ball], counts: &[usize]) -> Result<RationalFunction> {
    let n = counts.iter().copied().max().unwrap_or(0);
    Ok(cylinder_weight_with(&*shared_table(q, n)?, balls, counts))
}

/// Sum of cylinder weights over every way of distributing the given number
/// of particles inside each region (a list of disjoint balls), with the
/// `fixed` balls holding exactly their counts.
fn region_weight_sum(
    q: u64,
    fixed: &[(Ball, usize)],
    regions: &[(Vec<Ball>, usize)],
) -> Result<RationalFunction> {
    let mut combos = BigInt::one();
    for (balls, n) in regions {
        combos *= weak_composition_count(*n, balls.len());
    }
    if combos.is_zero() {
        return Ok(RationalFunction::zero());
    }
    if combos > BigInt::from(MAX_COMPOSITIONS) {
        return Err(Error::ResourceLimit(format!(
            "{combos} occupancy assignments exceed the limit of {MAX_COMPOSITIONS}"
        )));
    }
    let total: usize =
        fixed.iter().map(|(_, n)| n).sum::<usize>() + regions.iter().map(|(_, n)| n).sum::<usize>();
    let table = shared_table(q, total)?;
    let mut balls: Vec<Ball> = fixed.iter().map(|(b, _)| b.clone()).collect();
    let mut counts: Vec<usize> = fixed.iter().map(|(_, n)| *n).collect();
    for (rb, _) in regions {
        balls.extend(rb.iter().cloned());
    }
    let lists: Vec<Vec<Vec<usize>>> = regions
        .iter()
        .map(|(rb, n)| WeakCompositions::new(*n, rb.len()).collect())
        .collect();
    let base = counts.len();
    counts.resize(balls.len(), 0);
    let mut idx = vec![0usize; lists.len()];
    let mut acc = RationalFunction::zero();
    loop {
        let mut at = base;
        for (l, &i) in lists.iter().zip(&idx) {
            counts[at..at + l[i].len()].copy_from_slice(&l[i]);
            at += l[i].len();
        }
        acc = acc + cylinder_weight_with(&table, &balls, &counts);
        // Odometer over the composition lists.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(acc);
            }
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Canonical probability of an event whose balls cover `o` and whose counts
/// sum to `N`.
pub fn prob_canonical_full(q: u64, n: usize, event: &CylinderEvent) -> Result<RationalFunction> {
    check_q(q)?;
    if event.q() != q {
        return Err(Error::InvalidEvent(format!("event has q = {}, expected {q}", event.q())));
    }
    if !event.is_covering() {
        return Err(Error::InvalidEvent("balls do not cover the whole ring".into()));
    }
    if event.total() != n {
        return Err(Error::InvalidEvent(format!(
            "occupancy sums to {}, expected N = {n}",
            event.total()
        )));
    }
    let table = shared_table(q, n)?;
    let w = cylinder_weight_with(&table, event.balls(), event.occupancy());
    w.checked_div(table.z(n))
}

/// Canonical probability of an arbitrary cylinder event with at most `N`
/// prescribed particles: the remaining particles are distributed over the
/// complement of the family in every possible way.
pub fn prob_canonical(q: u64, n: usize, event: &CylinderEvent) -> Result<RationalFunction> {
    check_q(q)?;
    if event.q() != q {
        return Err(Error::InvalidEvent(format!("event has q = {}, expected {q}", event.q())));
    }
    if event.total() > n {
        return Err(Error::InvalidEvent(format!(
            "occupancy sums to {} > N = {n}",
            event.total()
        )));
    }
    let rest = complement(event.family(), &Ball::whole(q))?;
    let w = region_weight_sum(
        q,
        &event.pairs(),
        &[(rest.balls().to_vec(), n - event.total())],
    )?;
    w.checked_div(shared_table(q, n)?.z(n))
}

/// Conditional independence of what happens inside and outside a ball `B`
/// given `N_B = n`, and the restriction rule: conditioned on `N_B = n`, the
/// configuration inside `B` is distributed as `n` free particles in `B`.
///
/// `inner` must consist of balls inside `B`, `outer` of balls disjoint from
/// `B`.
pub fn conditional_factorization_check(
    q: u64,
    n_total: usize,
    b: &Ball,
    n: usize,
    inner: &CylinderEvent,
    outer: &CylinderEvent,
) -> Result<bool> {
    if n > n_total {
        return Err(Error::InvalidArgument(format!("n = {n} exceeds N = {n_total}")));
    }
    if let Some(x) = inner.balls().iter().find(|x| !b.contains(x)) {
        return Err(Error::NotContained(x.to_string(), b.to_string()));
    }
    if let Some(x) = outer.balls().iter().find(|x| !crate::ultrametric::disjoint(x, b)) {
        return Err(Error::Overlap(x.to_string(), b.to_string()));
    }
    let whole = Ball::whole(q);
    let outside_b = complement(&BallFamily::new(q, vec![b.clone()])?, &whole)?;
    let inside_rest = complement(inner.family(), b)?;
    let mut b_and_outer = outer.balls().to_vec();
    b_and_outer.push(b.clone());
    let outside_rest = complement(&BallFamily::new(q, b_and_outer)?, &whole)?;

    let region = |balls: &BallFamily, count: Option<usize>| count.map(|c| (balls.balls().to_vec(), c));
    let inner_left = n.checked_sub(inner.total());
    let outer_left = (n_total - n).checked_sub(outer.total());
    let just_b = BallFamily::new(q, vec![b.clone()])?;

    let sum = |fixed: Vec<(Ball, usize)>, regions: Vec<Option<(Vec<Ball>, usize)>>| -> Result<RationalFunction> {
        match regions.into_iter().collect::<Option<Vec<_>>>() {
            Some(r) => region_weight_sum(q, &fixed, &r),
            None => Ok(RationalFunction::zero()),
        }
    };

    let p_n = sum(vec![], vec![region(&just_b, Some(n)), region(&outside_b, Some(n_total - n))])?;
    let p_in = sum(
        inner.pairs(),
        vec![region(&inside_rest, inner_left), region(&outside_b, Some(n_total - n))],
    )?;
    let p_out = sum(
        outer.pairs(),
        vec![region(&just_b, Some(n)), region(&outside_rest, outer_left)],
    )?;
    let mut both = inner.pairs();
    both.extend(outer.pairs());
    let p_both = sum(both, vec![region(&inside_rest, inner_left), region(&outside_rest, outer_left)])?;

    let product_holds = &p_both * &p_n == &p_in * &p_out;

    let restriction_holds = match inner_left {
        None => p_in.is_zero(),
        Some(_) => {
            let pulled: Vec<(Ball, usize)> = inner
                .pairs()
                .into_iter()
                .map(|(x, c)| Ok((x.pull_out_of(b)?, c)))
                .collect::<Result<_>>()?;
            let pulled = CylinderEvent::from_pairs(q, pulled)?;
            p_in.checked_div(&p_n)? == prob_canonical(q, n, &pulled)?
        }
    };
    Ok(product_holds && restriction_holds)
}

/// Scaling of cylinder weights under `x -> center + pi^r x`:
/// `Z(n, zeta + pi^r E) = u^(r C(n,2)) q^(-rn) Z(n, E)`.
pub fn push_down_check(event: &CylinderEvent, outer: &Ball) -> Result<bool> {
    let q = event.q();
    let n = event.total();
    let pushed = event.push_into(outer)?;
    let lhs = cylinder_weight(q, pushed.balls(), pushed.occupancy())?;
    let rhs = ball_scaling(q, n, outer.radius_exp(), &cylinder_weight(q, event.balls(), event.occupancy())?);
    Ok(lhs == rhs)
}

/// Generating series `Z(t, {N_B = n}) = sum_N Z(N, A_N) t^N / N!`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylinderGF {
    series: StarSeries,
}

impl CylinderGF {
    pub fn series(&self) -> &StarSeries {
        &self.series
    }

    pub fn into_series(self) -> StarSeries {
        self.series
    }
}

/// Series operations needed by the coset recursion, so that the same
/// recursion runs on exact rational-function coefficients and on values at
/// a fixed temperature.
trait GfBackend {
    type Series: Clone;
    fn whole(&self) -> Self::Series;
    fn fixed(&self, n: usize) -> Self::Series;
    fn one(&self) -> Self::Series;
    fn mul(&self, a: &Self::Series, b: &Self::Series) -> Self::Series;
    /// `s -> overline(s(t/q))` at level 1: the series of the pre-image of a
    /// coset of the maximal ideal.
    fn push_to_coset(&self, s: &Self::Series) -> Self::Series;
}

fn gf_rec<B: GfBackend>(backend: &B, q: u64, pairs: &[(Ball, usize)]) -> Result<B::Series> {
    if pairs.is_empty() {
        return Ok(backend.whole());
    }
    if pairs.len() == 1 && pairs[0].0.radius_exp() == 0 {
        return Ok(backend.fixed(pairs[0].1));
    }
    let family = BallFamily::new(q, pairs.iter().map(|(b, _)| b.clone()).collect())?;
    let groups = group_by_coset(&family)?;
    let mut acc = backend.one();
    let mut free_cosets = 0;
    for group in &groups {
        if group.is_empty() {
            free_cosets += 1;
            continue;
        }
        let sub: Vec<(Ball, usize)> = group
            .balls()
            .iter()
            .map(|b| {
                let count = pairs.iter().find(|(x, _)| x == b).map(|(_, c)| *c).unwrap();
                Ok((b.descend()?, count))
            })
            .collect::<Result<_>>()?;
        let factor = backend.push_to_coset(&gf_rec(backend, q, &sub)?);
        acc = backend.mul(&acc, &factor);
    }
    if free_cosets > 0 {
        let free = backend.push_to_coset(&backend.whole());
        for _ in 0..free_cosets {
            acc = backend.mul(&acc, &free);
        }
    }
    Ok(acc)
}

struct ExactBackend {
    q: u64,
    dmax: usize,
    whole: StarSeries,
    table: std::sync::Arc<CanonicalTable>,
}

impl GfBackend for ExactBackend {
    type Series = StarSeries;

    fn whole(&self) -> StarSeries {
        self.whole.clone()
    }

    fn fixed(&self, n: usize) -> StarSeries {
        let c = if n <= self.dmax {
            self.table.z(n).scale_by(&factorial_q(n).recip())
        } else {
            RationalFunction::zero()
        };
        StarSeries::monomial(self.q, self.dmax, c, n)
    }

    fn one(&self) -> StarSeries {
        StarSeries::one(self.q, self.dmax)
    }

    fn mul(&self, a: &StarSeries, b: &StarSeries) -> StarSeries {
        a.mul(b).expect("series share q and dmax")
    }

    fn push_to_coset(&self, s: &StarSeries) -> StarSeries {
        s.substitute_t_scale(&BigRational::new(BigInt::one(), BigInt::from(self.q)))
            .overline(1)
    }
}

/// Exact generating series of a cylinder event, truncated at `dmax`.
pub fn gc_cylinder_gf(q: u64, event: &CylinderEvent, dmax: usize) -> Result<CylinderGF> {
    check_q(q)?;
    let backend = ExactBackend {
        q,
        dmax,
        whole: gc_z_whole(q, dmax)?,
        table: shared_table(q, dmax)?,
    };
    let series = gf_rec(&backend, q, &event.pairs())?;
    Ok(CylinderGF { series })
}

struct ValueBackend {
    q: u64,
    u0: BigRational,
    /// `Z(N)(u0) / N!`
    whole: Vec<BigRational>,
}

impl GfBackend for ValueBackend {
    type Series = Vec<BigRational>;

    fn whole(&self) -> Vec<BigRational> {
        self.whole.clone()
    }

    fn fixed(&self, n: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.whole.len()];
        if n < v.len() {
            v[n] = self.whole[n].clone();
        }
        v
    }

    fn one(&self) -> Vec<BigRational> {
        self.fixed(0).into_iter().enumerate().map(|(i, _)| if i == 0 { BigRational::one() } else { BigRational::zero() }).collect()
    }

    fn mul(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        let d = a.len();
        let mut out = vec![BigRational::zero(); d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[..d - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    fn push_to_coset(&self, s: &Vec<BigRational>) -> Vec<BigRational> {
        let inv_q = BigRational::new(BigInt::one(), BigInt::from(self.q));
        let mut tpow = BigRational::one();
        let mut upow = BigRational::one();
        let mut out = Vec::with_capacity(s.len());
        for (n, c) in s.iter().enumerate() {
            if n > 0 {
                tpow = &tpow * &inv_q;
                // u^C(n,2) = u^C(n-1,2) * u^(n-1)
                upow = &upow * num_traits::pow(self.u0.clone(), n - 1);
            }
            out.push(c * &tpow * &upow);
        }
        out
    }
}

/// Grand canonical probability with a certified truncation error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcProbability {
    #[serde(with = "crate::exactnum::rational_serde")]
    pub value: BigRational,
    #[serde(with = "crate::exactnum::rational_serde")]
    pub error_bound: BigRational,
    pub dmax: usize,
}

impl GcProbability {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// Largest truncation degree tried before giving up on a tolerance.
pub const MAX_GC_DMAX: usize = 80;

/// `P(A) = Z(t0, A) / Z(t0, o)` at `u = u0`, truncated at the smallest
/// degree whose tail bound is below `tolerance`.
///
/// Coefficients of both series lie in `[0, 1/N!]` for `u0` in `[0, 1]`, and
/// the truncated denominator is at least 1, so the Poisson tail of `t0`
/// bounds the error of the ratio.
pub fn gc_cylinder_prob(
    q: u64,
    event: &CylinderEvent,
    t0: &BigRational,
    u0: &BigRational,
    tolerance: &BigRational,
) -> Result<GcProbability> {
    check_q(q)?;
    if *u0 < BigRational::zero() || *u0 > BigRational::one() {
        return Err(Error::InvalidArgument("u0 must lie in [0, 1]".into()));
    }
    if *t0 <= BigRational::zero() {
        return Err(Error::InvalidArgument("fugacity t0 must be positive".into()));
    }
    let dmax = required_truncation(t0, tolerance, MAX_GC_DMAX).ok_or_else(|| Error::ToleranceUnattainable {
        tolerance: crate::exactnum::format_rational(tolerance),
        max_dmax: MAX_GC_DMAX,
    })?;
    let bound = crate::grandcanonical::poisson_tail_bound(t0, dmax).expect("found above");
    let z = canonical_z_values_at(q, u0, dmax)?;
    let whole: Vec<BigRational> = z.into_iter().enumerate().map(|(n, v)| v / factorial_q(n)).collect();
    let backend = ValueBackend {
        q,
        u0: u0.clone(),
        whole: whole.clone(),
    };
    let num = gf_rec(&backend, q, &event.pairs())?;
    let a = crate::grandcanonical::eval_series_at(&num, t0);
    let zt = crate::grandcanonical::eval_series_at(&whole, t0);
    Ok(GcProbability {
        value: a / zt,
        error_bound: bound,
        dmax,
    })
}

/// Coefficient `N` of the event's generating series equals
/// `Z(N, o) P_N(event) / N!` for every `N <= dmax`.
pub fn ensemble_consistency_check(q: u64, event: &CylinderEvent, dmax: usize) -> Result<bool> {
    let gf = gc_cylinder_gf(q, event, dmax)?;
    let table = shared_table(q, dmax)?;
    for n in 0..=dmax {
        let expected = if n < event.total() {
            RationalFunction::zero()
        } else {
            (table.z(n) * &prob_canonical(q, n, event)?).scale_by(&factorial_q(n).recip())
        };
        if gf.series().coeff(n) != &expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum of `prob_canonical_full` over every occupancy vector of a covering
/// family.
pub fn total_probability(q: u64, n: usize, family: &BallFamily) -> Result<RationalFunction> {
    let mut acc = RationalFunction::zero();
    for counts in WeakCompositions::new(n, family.len()) {
        acc = acc + prob_canonical_full(q, n, &CylinderEvent::new(family.clone(), counts)?)?;
    }
    Ok(acc)
}
