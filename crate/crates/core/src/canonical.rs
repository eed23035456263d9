//! Canonical partition functions `Z(N, o, beta)` as rational functions of
//! `u`, their ball versions, energy distributions and identity checks.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{factorial, factorial_q, pairs, WeakCompositions};
use crate::error::{Error, Result};
use crate::exactnum::{RationalFunction, UPoly};

pub(crate) fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidQ(q));
    }
    Ok(())
}

fn q_pow_inv(q: u64, k: usize) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(q), k))
}

/// Counts of particles per coset of the maximal ideal (or per ball of a
/// family).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OccupancyVector {
    counts: Vec<usize>,
}

impl OccupancyVector {
    pub fn new(counts: Vec<usize>) -> Self {
        OccupancyVector { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// All occupancy vectors of `n` particles over `q` cosets.
    pub fn all(q: usize, n: usize) -> impl Iterator<Item = OccupancyVector> {
        WeakCompositions::new(n, q).map(OccupancyVector::new)
    }
}

/// Memoized table of `Z(N, o, .)` for a fixed `q`, built bottom-up.
///
/// Alongside `Z` the table keeps, for every number of cosets `j <= q`, the
/// sum over weak compositions of `N` into `j` parts of
/// `prod_r u^C(n_r,2) Z(n_r) / n_r!`. Those sums make each new entry cost
/// `O(qN)` rational-function products instead of an enumeration of
/// occupancy vectors.
#[derive(Debug, Clone)]
pub struct CanonicalTable {
    q: u64,
    entries: Vec<RationalFunction>,
    // scaled[k] = u^C(k,2) Z(k) / k!
    scaled: Vec<RationalFunction>,
    // parts[j][m]: sum over compositions of m into j + 1 parts.
    parts: Vec<Vec<RationalFunction>>,
}

impl CanonicalTable {
    pub fn new(q: u64) -> Result<Self> {
        check_q(q)?;
        let mut t = CanonicalTable {
            q,
            entries: Vec::new(),
            scaled: Vec::new(),
            parts: vec![Vec::new(); q as usize],
        };
        t.push(RationalFunction::one(), None);
        Ok(t)
    }

    pub fn with_max_n(q: u64, n: usize) -> Result<Self> {
        let mut t = Self::new(q)?;
        t.extend_to(n);
        Ok(t)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Largest `N` with a stored entry.
    pub fn max_n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&RationalFunction> {
        self.entries.get(n)
    }

    /// `Z(n, o)`; panics if the table has not been extended to `n`.
    pub fn z(&self, n: usize) -> &RationalFunction {
        &self.entries[n]
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn extend_to(&mut self, n: usize) {
        while self.entries.len() <= n {
            let (z, restricted) = self.compute_next();
            self.push(z, Some(restricted));
        }
    }

    /// `restricted[j]` sums over compositions of the new `N` into `j + 1`
    /// parts that are all smaller than `N`; the remaining compositions put
    /// all `N` particles in one part.
    fn push(&mut self, z: RationalFunction, restricted: Option<Vec<RationalFunction>>) {
        let n = self.entries.len();
        let f = z
            .mul_u_pow(pairs(n) as i64)
            .scale_by(&factorial_q(n).recip());
        for j in 0..self.q as usize {
            let v = match &restricted {
                None => RationalFunction::one(),
                Some(r) => &r[j] + &f.scale_by(&BigRational::from_integer(BigInt::from(j + 1))),
            };
            self.parts[j].push(v);
        }
        self.scaled.push(f);
        self.entries.push(z);
    }

    /// Solve the coset recursion for the next entry:
    /// `Z(N) (q^N - q u^C(N,2)) = N! * S'` where `S'` sums over occupancy
    /// vectors with at least two occupied cosets.
    fn compute_next(&self) -> (RationalFunction, Vec<RationalFunction>) {
        let n = self.entries.len();
        let q = self.q as usize;
        let mut restricted = vec![RationalFunction::zero()];
        for j in 1..q {
            let mut acc = restricted[j - 1].clone();
            for k in 1..n {
                acc = acc + &self.scaled[k] * &self.parts[j - 1][n - k];
            }
            restricted.push(acc);
        }
        if n == 1 {
            return (RationalFunction::one(), restricted);
        }
        let mut c = vec![BigRational::zero(); pairs(n) + 1];
        c[0] = BigRational::from_integer(num_traits::pow(BigInt::from(self.q), n));
        c[pairs(n)] -= BigRational::from_integer(BigInt::from(self.q));
        let lhs = RationalFunction::from_upoly(&UPoly::from_coeffs(c));
        let z = restricted[q - 1]
            .scale_by(&factorial_q(n))
            .checked_div(&lhs)
            .expect("q^N - q u^C(N,2) is nonzero for N >= 2");
        (z, restricted)
    }

    /// Replace one entry with a perturbed value without recomputing
    /// anything else; used to confirm that identity checks detect errors.
    pub fn perturb_entry(&mut self, n: usize, delta: &RationalFunction) {
        self.entries[n] = &self.entries[n] + delta;
    }
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<CanonicalTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CanonicalTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Process-wide memoized table for `q` holding at least `Z(0..=n)`.
pub fn shared_table(q: u64, n: usize) -> Result<Arc<CanonicalTable>> {
    check_q(q)?;
    let existing = cache().lock().unwrap().get(&q).cloned();
    if let Some(t) = &existing {
        if t.max_n() >= n {
            return Ok(t.clone());
        }
    }
    // Build outside the lock; concurrent builders produce identical tables.
    let mut t = match existing {
        Some(t) => (*t).clone(),
        None => CanonicalTable::new(q)?,
    };
    t.extend_to(n);
    let t = Arc::new(t);
    let mut guard = cache().lock().unwrap();
    let slot = guard.entry(q).or_insert_with(|| t.clone());
    if slot.max_n() < t.max_n() {
        *slot = t.clone();
    }
    Ok(t)
}

/// `Z(N, o, beta)` as a rational function of `u`.
pub fn canonical_z(q: u64, n: usize) -> Result<RationalFunction> {
    Ok(shared_table(q, n)?.z(n).clone())
}

/// `Z(N, B, beta)` for a ball `B` of radius `q^-r`:
/// `u^(r C(N,2)) q^(-rN) Z(N, o)`.
pub fn canonical_z_ball(q: u64, n: usize, r: usize) -> Result<RationalFunction> {
    Ok(ball_scaling(q, n, r, &canonical_z(q, n)?))
}

pub(crate) fn ball_scaling(q: u64, n: usize, r: usize, z: &RationalFunction) -> RationalFunction {
    z.mul_u_pow((r * pairs(n)) as i64)
        .scale_by(&q_pow_inv(q, r * n))
}

/// `p_k` for `k = 0..=kmax`: probability under uniform placement of `N`
/// particles that `|Vandermonde| = q^-k`.
pub fn energy_distribution(q: u64, n: usize, kmax: usize) -> Result<Vec<BigRational>> {
    canonical_z(q, n)?.taylor(kmax)
}

/// Left-hand side of the quadratic identity
/// `sum_n (N - (q+1) n) / (n! (N-n)!) u^C(n,2) q^-n Z(n) Z(N-n)`,
/// which vanishes for a correct table.
pub fn quad_rec_residual(table: &CanonicalTable, n: usize) -> RationalFunction {
    let q = table.q();
    let mut acc = RationalFunction::zero();
    for k in 0..=n {
        let coeff = BigRational::new(
            BigInt::from(n as i64 - (q as i64 + 1) * k as i64),
            factorial(k) * factorial(n - k),
        ) * q_pow_inv(q, k);
        if coeff.is_zero() {
            continue;
        }
        let term = (table.z(k) * table.z(n - k))
            .mul_u_pow(pairs(k) as i64)
            .scale_by(&coeff);
        acc = acc + term;
    }
    acc
}

pub fn verify_quad_rec_table(table: &CanonicalTable, n: usize) -> bool {
    quad_rec_residual(table, n).is_zero()
}

pub fn verify_quad_rec(q: u64, n: usize) -> Result<bool> {
    Ok(verify_quad_rec_table(&*shared_table(q, n)?, n))
}

/// Checks the unsolved coset recursion
/// `Z(N) = N! sum_n prod_r Z(n_r, m) / n_r!` by explicit enumeration of all
/// occupancy vectors, using the ball scaling for `Z(n, m)`.
pub fn verify_coset_recursion(table: &CanonicalTable, n: usize) -> bool {
    let q = table.q();
    let mut rhs = RationalFunction::zero();
    for occ in OccupancyVector::all(q as usize, n) {
        let mut term = RationalFunction::one();
        for &k in occ.counts() {
            if k > 0 {
                term = term * ball_scaling(q, k, 1, table.z(k)).scale_by(&factorial_q(k).recip());
            }
        }
        rhs = rhs + term;
    }
    rhs.scale_by(&factorial_q(n)) == *table.z(n)
}

/// `Z(0..=nmax, o)` evaluated at a fixed `u0 >= 0`, running the coset
/// recursion directly on rationals. Much cheaper than building the rational
/// functions when only values at one temperature are needed.
pub fn canonical_z_values_at(q: u64, u0: &BigRational, nmax: usize) -> Result<Vec<BigRational>> {
    check_q(q)?;
    let qn = q as usize;
    let one = BigRational::one();
    let mut z = vec![one.clone()];
    let mut scaled = vec![one.clone()];
    let mut parts: Vec<Vec<BigRational>> = vec![vec![one.clone()]; qn];
    for n in 1..=nmax {
        let mut restricted = vec![BigRational::zero()];
        for j in 1..qn {
            let mut acc = restricted[j - 1].clone();
            for k in 1..n {
                acc += &scaled[k] * &parts[j - 1][n - k];
            }
            restricted.push(acc);
        }
        let u_pairs = num_traits::pow(u0.clone(), pairs(n));
        let zn = if n == 1 {
            one.clone()
        } else {
            let lhs = BigRational::from_integer(num_traits::pow(BigInt::from(q), n))
                - BigRational::from_integer(BigInt::from(q)) * &u_pairs;
            if lhs.is_zero() {
                return Err(Error::Pole(crate::exactnum::format_rational(u0)));
            }
            &restricted[qn - 1] * factorial_q(n) / lhs
        };
        let f = &zn * &u_pairs / factorial_q(n);
        for (j, r) in restricted.into_iter().enumerate() {
            parts[j].push(r + &f * BigRational::from_integer(BigInt::from(j + 1)));
        }
        scaled.push(f);
        z.push(zn);
    }
    Ok(z)
}

/// True when the denominator of `R_N` shares a root with `u^N - q^2`, the
/// pole at `beta = -2/N`.
pub fn abscissa_check(q: u64, n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("pole check needs N >= 2, got {n}")));
    }
    let z = canonical_z(q, n)?;
    let mut c = vec![BigRational::zero(); n + 1];
    c[0] = -BigRational::from_integer(BigInt::from(q * q));
    c[n] = BigRational::one();
    Ok(RationalFunction::has_root_in_common(&z.denominator(), &UPoly::from_coeffs(c)))
}

/// `R_N(0) = q! / ((q-N)! q^N)`, or 0 for `N > q`.
pub fn zero_temperature_value(q: u64, n: usize) -> BigRational {
    if n as u64 > q {
        return BigRational::zero();
    }
    let falling = (0..n).fold(BigInt::one(), |acc, i| acc * BigInt::from(q - i as u64));
    BigRational::new(falling, num_traits::pow(BigInt::from(q), n))
}
