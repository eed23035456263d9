//! Several species of particles with positive integer charges. A pair of
//! particles with charges `Q`, `Q'` at distance `q^-k` contributes
//! `u^(Q Q' k)` to the Boltzmann weight.
//!
//! Particles in different cosets of the maximal ideal are at distance 1, so
//! the energy is additive over cosets, and shrinking a configuration into
//! `pi o` multiplies its weight by `u^E(n) q^-|n|` with
//! `E(n) = sum_m Q_m^2 C(n_m,2) + sum_{l<m} Q_l Q_m n_l n_m`. The canonical
//! recursion below is assembled from those two facts exactly as in the
//! single-species case.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::canonical::check_q;
use crate::combinat::{factorial_q, pairs};
use crate::error::{Error, Result};
use crate::exactnum::{RationalFunction, UPoly};

/// Largest total particle number accepted by [`multi_canonical_z`].
pub const MAX_TOTAL_PARTICLES: usize = 12;

/// Charges `Q_1..Q_M` of the species.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ChargeProfile {
    charges: Vec<u64>,
}

impl ChargeProfile {
    /// Distinct positive charges.
    pub fn new(charges: Vec<u64>) -> Result<Self> {
        let p = Self::with_repeats(charges)?;
        let mut sorted = p.charges.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != p.charges.len() {
            return Err(Error::InvalidArgument("charges must be distinct".into()));
        }
        Ok(p)
    }

    /// Positive charges that may repeat, i.e. species carrying labels only.
    pub fn with_repeats(charges: Vec<u64>) -> Result<Self> {
        if charges.is_empty() {
            return Err(Error::InvalidArgument("need at least one species".into()));
        }
        if charges.contains(&0) {
            return Err(Error::InvalidArgument("charges must be positive".into()));
        }
        Ok(ChargeProfile { charges })
    }

    pub fn charges(&self) -> &[u64] {
        &self.charges
    }

    pub fn species(&self) -> usize {
        self.charges.len()
    }

    /// `E(n) = sum_m Q_m^2 C(n_m,2) + sum_{l<m} Q_l Q_m n_l n_m`.
    pub fn energy_exponent(&self, counts: &[usize]) -> u64 {
        let mut e = 0u64;
        for (m, (&qm, &nm)) in self.charges.iter().zip(counts).enumerate() {
            e += qm * qm * pairs(nm) as u64;
            for (&ql, &nl) in self.charges[m + 1..].iter().zip(&counts[m + 1..]) {
                e += qm * ql * (nm * nl) as u64;
            }
        }
        e
    }
}

/// Number of particles of each species.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpeciesCounts {
    counts: Vec<usize>,
}

impl SpeciesCounts {
    pub fn new(profile: &ChargeProfile, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != profile.species() {
            return Err(Error::InvalidArgument(format!(
                "{} counts for {} species",
                counts.len(),
                profile.species()
            )));
        }
        Ok(SpeciesCounts { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Leading digits shared by two points: the valuation of their difference,
/// or `None` if they agree on every available digit.
pub fn shared_digits(a: &[u64], b: &[u64]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// Exponent `k` such that the Boltzmann weight of the configuration is
/// `u^k`. Each particle is `(charge, digits)`; all digit strings have the
/// same length.
pub fn multi_energy_exponent(particles: &[(u64, &[u64])]) -> Result<u64> {
    let mut k = 0u64;
    for (i, (qa, a)) in particles.iter().enumerate() {
        for (qb, b) in &particles[i + 1..] {
            let v = shared_digits(a, b).ok_or(Error::PrecisionExhausted(a.len().min(b.len())))?;
            k += qa * qb * v as u64;
        }
    }
    Ok(k)
}

/// Multi-indices `k <= bound` componentwise with `|k| <= max_total`, sorted
/// by total.
fn index_set(bound: &[usize], max_total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        let mut next = Vec::new();
        for prefix in &out {
            let used: usize = prefix.iter().sum();
            for k in 0..=b.min(max_total.saturating_sub(used)) {
                let mut v = prefix.clone();
                v.push(k);
                next.push(v);
            }
        }
        out = next;
    }
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

fn sub_indices(m: &[usize]) -> Vec<Vec<usize>> {
    index_set(m, usize::MAX)
}

fn multi_factorial(n: &[usize]) -> BigRational {
    n.iter().fold(BigRational::one(), |acc, &k| acc * factorial_q(k))
}

/// `Z(N, o) / N!` for every multi-index `N` in the downward closed set
/// `{N <= bound, |N| <= max_total}`.
fn reduced_table(
    q: u64,
    profile: &ChargeProfile,
    bound: &[usize],
    max_total: usize,
) -> HashMap<Vec<usize>, RationalFunction> {
    let qn = q as usize;
    let inv_q = BigRational::new(BigInt::one(), BigInt::from(q));
    let mut a: HashMap<Vec<usize>, RationalFunction> = HashMap::new();
    // f = u^E q^-|n| a: contribution of one coset of the maximal ideal.
    let mut f: HashMap<Vec<usize>, RationalFunction> = HashMap::new();
    // parts[n][j]: sum over compositions of n into j + 1 cosets of prod f.
    let mut parts: HashMap<Vec<usize>, Vec<RationalFunction>> = HashMap::new();
    for n in index_set(bound, max_total) {
        let total: usize = n.iter().sum();
        let subs: Vec<Vec<usize>> = sub_indices(&n)
            .into_iter()
            .filter(|k| {
                let t: usize = k.iter().sum();
                t > 0 && t < total
            })
            .collect();
        let mut restricted = vec![RationalFunction::zero()];
        for j in 1..qn {
            let mut acc = restricted[j - 1].clone();
            for k in &subs {
                let rest: Vec<usize> = n.iter().zip(k).map(|(x, y)| x - y).collect();
                acc = acc + &f[k] * &parts[&rest][j - 1];
            }
            restricted.push(acc);
        }
        let e = profile.energy_exponent(&n) as i64;
        let qpow = num_traits::pow(inv_q.clone(), total);
        let an = if total <= 1 {
            RationalFunction::one()
        } else {
            // a (1 - q^(1-|n|) u^E) = restricted sum over q cosets
            let mut c = vec![BigRational::from_integer(0.into()); e as usize + 1];
            c[0] = BigRational::one();
            c[e as usize] -= &qpow * BigRational::from_integer(BigInt::from(q));
            let lhs = RationalFunction::from_upoly(&UPoly::from_coeffs(c));
            restricted[qn - 1].checked_div(&lhs).expect("nonzero for |n| >= 2")
        };
        let fn_ = an.mul_u_pow(e).scale_by(&qpow);
        let col: Vec<RationalFunction> = if total == 0 {
            vec![RationalFunction::one(); qn]
        } else {
            restricted
                .into_iter()
                .enumerate()
                .map(|(j, r)| r + fn_.scale_by(&BigRational::from_integer(BigInt::from(j + 1))))
                .collect()
        };
        parts.insert(n.clone(), col);
        f.insert(n.clone(), fn_);
        a.insert(n, an);
    }
    a
}

/// `Z(N, o, beta)` for species counts `N` with the given charges.
pub fn multi_canonical_z(q: u64, profile: &ChargeProfile, counts: &SpeciesCounts) -> Result<RationalFunction> {
    check_q(q)?;
    if counts.counts().len() != profile.species() {
        return Err(Error::InvalidArgument("counts do not match the charge profile".into()));
    }
    if counts.total() > MAX_TOTAL_PARTICLES {
        return Err(Error::ResourceLimit(format!(
            "{} particles exceed the limit of {MAX_TOTAL_PARTICLES}",
            counts.total()
        )));
    }
    let table = reduced_table(q, profile, counts.counts(), usize::MAX);
    Ok(table[counts.counts()].scale_by(&multi_factorial(counts.counts())))
}

/// Truncated series in `t_1..t_M` by total degree; the key is the exponent
/// vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    species: usize,
    dmax: usize,
    coeffs: BTreeMap<Vec<usize>, RationalFunction>,
}

impl MultiSeries {
    pub fn one(species: usize, dmax: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0; species], RationalFunction::one());
        MultiSeries { species, dmax, coeffs }
    }

    pub fn dmax(&self) -> usize {
        self.dmax
    }

    pub fn coeff(&self, n: &[usize]) -> RationalFunction {
        self.coeffs.get(n).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalFunction)> {
        self.coeffs.iter()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.species != other.species || self.dmax != other.dmax {
            return Err(Error::SeriesMismatch("multivariate series shapes differ".into()));
        }
        let mut coeffs: BTreeMap<Vec<usize>, RationalFunction> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            let ta: usize = a.iter().sum();
            for (b, cb) in &other.coeffs {
                let tb: usize = b.iter().sum();
                if ta + tb > self.dmax {
                    continue;
                }
                let k: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let term = ca * cb;
                let slot = coeffs.entry(k).or_insert_with(RationalFunction::zero);
                *slot = &*slot + &term;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(MultiSeries { coeffs, ..*self })
    }

    pub fn pow(&self, j: usize) -> Self {
        let mut acc = Self::one(self.species, self.dmax);
        for _ in 0..j {
            acc = acc.mul(self).expect("same shape");
        }
        acc
    }
}

/// `Z(t, pi^r o) = sum_N Z(N, pi^r o) t^N / N!` truncated at total degree
/// `dmax`.
pub fn multi_gc_z(q: u64, profile: &ChargeProfile, radius_exp: usize, dmax: usize) -> Result<MultiSeries> {
    check_q(q)?;
    let m = profile.species();
    let table = reduced_table(q, profile, &vec![dmax; m], dmax);
    let inv_q = BigRational::new(BigInt::one(), BigInt::from(q));
    let coeffs = table
        .into_iter()
        .map(|(n, a)| {
            let total: usize = n.iter().sum();
            let e = profile.energy_exponent(&n) as i64 * radius_exp as i64;
            let c = a.mul_u_pow(e).scale_by(&num_traits::pow(inv_q.clone(), radius_exp * total));
            (n, c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(MultiSeries { species: m, dmax, coeffs })
}

/// `Z(t, o) = Z(t, m)^q` for the multivariate series.
pub fn verify_multi_qpower(q: u64, profile: &ChargeProfile, dmax: usize) -> Result<bool> {
    let whole = multi_gc_z(q, profile, 0, dmax)?;
    let maximal = multi_gc_z(q, profile, 1, dmax)?;
    Ok(maximal.pow(q as usize) == whole)
}
