//! Grand canonical partition functions `Z(t, pi^l o, beta)` and their
//! functional equations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::canonical::{ball_scaling, canonical_z_values_at, check_q, shared_table};
use crate::combinat::factorial_q;
use crate::error::{Error, Result};
use crate::exactnum::format_rational;
use crate::starring::StarSeries;

/// Truncation tolerance for numeric grand canonical quantities.
pub fn default_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 12))
}

/// `Z(t, V, beta)` for `V = pi^l o`, with coefficient `N` equal to
/// `Z(N, V, beta) / N!`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrandCanonicalSeries {
    radius_exp: usize,
    series: StarSeries,
}

impl GrandCanonicalSeries {
    pub fn radius_exp(&self) -> usize {
        self.radius_exp
    }

    pub fn series(&self) -> &StarSeries {
        &self.series
    }

    pub fn into_series(self) -> StarSeries {
        self.series
    }
}

/// Grand canonical series of the ball `pi^l o` truncated at `dmax`.
pub fn gc_z(q: u64, radius_exp: usize, dmax: usize) -> Result<GrandCanonicalSeries> {
    let table = shared_table(q, dmax)?;
    let coeffs = (0..=dmax)
        .map(|n| ball_scaling(q, n, radius_exp, table.z(n)).scale_by(&factorial_q(n).recip()))
        .collect();
    Ok(GrandCanonicalSeries {
        radius_exp,
        series: StarSeries::new(q, dmax, coeffs),
    })
}

/// `Z(t, o) = Z(t, m)^q` under the ordinary product.
pub fn verify_gcz(q: u64, dmax: usize) -> Result<bool> {
    let whole = gc_z(q, 0, dmax)?.into_series();
    let maximal = gc_z(q, 1, dmax)?.into_series();
    Ok(maximal.pow(q as usize) == whole)
}

/// `Z(t, o) = overline(Z(t/q, o))^q`, the overline taken at level 1.
pub fn verify_functional_equation(q: u64, dmax: usize) -> Result<bool> {
    let whole = gc_z(q, 0, dmax)?.into_series();
    let inv_q = BigRational::new(BigInt::one(), BigInt::from(q));
    let rhs = whole.substitute_t_scale(&inv_q).overline(1).pow(q as usize);
    Ok(rhs == whole)
}

/// `Z(t, pi^l o) = Z(t, pi^(l+1) o)` raised to the `q`-th star power at
/// level `l`.
pub fn verify_thm4(q: u64, level: usize, dmax: usize) -> Result<bool> {
    let lhs = gc_z(q, level, dmax)?.into_series();
    let inner = gc_z(q, level + 1, dmax)?.into_series();
    Ok(inner.star_pow(q as usize, level as i64) == lhs)
}

/// Upper bound on `sum_{N > d} t0^N / N!`, or `None` when the geometric
/// estimate does not apply (`t0 >= d + 2`).
pub fn poisson_tail_bound(t0: &BigRational, d: usize) -> Option<BigRational> {
    if t0.is_zero() {
        return Some(BigRational::zero());
    }
    let d2 = BigRational::from_integer(BigInt::from(d + 2));
    if *t0 >= d2 {
        return None;
    }
    let lead = num_traits::pow(t0.clone(), d + 1) / factorial_q(d + 1);
    Some(lead * &d2 / (&d2 - t0))
}

/// Smallest truncation degree whose tail bound is below `tol`.
pub fn required_truncation(t0: &BigRational, tol: &BigRational, cap: usize) -> Option<usize> {
    (0..=cap).find(|&d| poisson_tail_bound(t0, d).is_some_and(|b| &b < tol))
}

fn check_u0(u0: &BigRational) -> Result<()> {
    if u0.is_negative() || *u0 > BigRational::one() {
        return Err(Error::InvalidArgument(format!(
            "u0 = {} must lie in [0, 1]",
            format_rational(u0)
        )));
    }
    Ok(())
}

fn check_t0(t0: &BigRational) -> Result<()> {
    if t0.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "fugacity t0 = {} must be non-negative",
            format_rational(t0)
        )));
    }
    Ok(())
}

/// Distribution of the total particle number in `o` at fugacity `t0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccupancyPmf {
    /// `Z(N)(u0) t0^N / N!` for `N = 0..=nmax`.
    #[serde(with = "crate::exactnum::rational_serde::vec")]
    pub weights: Vec<BigRational>,
    /// Sum of `weights`, the truncated grand canonical partition function.
    #[serde(with = "crate::exactnum::rational_serde")]
    pub normalization: BigRational,
    #[serde(with = "crate::exactnum::rational_serde::vec")]
    pub probabilities: Vec<BigRational>,
    /// Certified bound on `|probabilities[N] - P{N_o = N}|` for every `N`.
    #[serde(with = "crate::exactnum::rational_serde")]
    pub error_bound: BigRational,
}

/// `P{N_o = N} = Z(N)(u0) t0^N / (N! Z(t0, o))` for `N <= nmax`.
///
/// Coefficients `Z(N)/N!` are at most `1/N!` for `u0` in `[0, 1]`, so the
/// neglected tail is below the Poisson tail of `t0`; since the truncated
/// normalization is at least 1 that tail bounds the error of each
/// probability. Fails if the bound is not below `10^-12`.
pub fn occupancy_pmf(q: u64, t0: &BigRational, u0: &BigRational, nmax: usize) -> Result<OccupancyPmf> {
    check_q(q)?;
    check_u0(u0)?;
    check_t0(t0)?;
    let tol = default_tolerance();
    let bound = poisson_tail_bound(t0, nmax);
    let bound = match bound {
        Some(b) if b < tol => b,
        _ => {
            let required = required_truncation(t0, &tol, 100_000).unwrap_or(usize::MAX);
            return Err(Error::TruncationTooShort { nmax, required });
        }
    };
    let z = canonical_z_values_at(q, u0, nmax)?;
    let mut weights = Vec::with_capacity(nmax + 1);
    let mut tn = BigRational::one();
    for (n, zn) in z.iter().enumerate() {
        if n > 0 {
            tn = tn * t0 / BigRational::from_integer(BigInt::from(n));
        }
        weights.push(zn * &tn);
    }
    let normalization: BigRational = weights.iter().sum();
    let probabilities = weights.iter().map(|w| w / &normalization).collect();
    Ok(OccupancyPmf {
        weights,
        normalization,
        probabilities,
        error_bound: bound,
    })
}

/// Coefficients of the grand canonical series evaluated at `u = u0`.
pub fn gc_z_values_at(q: u64, u0: &BigRational, dmax: usize) -> Result<Vec<BigRational>> {
    let z = canonical_z_values_at(q, u0, dmax)?;
    Ok(z.into_iter()
        .enumerate()
        .map(|(n, v)| v / factorial_q(n))
        .collect())
}

/// Sum of `coeffs[N] * t0^N`.
pub fn eval_series_at(coeffs: &[BigRational], t0: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * t0 + c;
    }
    acc
}

/// `Z(t, o, beta)` at the zero temperature limit `u = 0` is `(1 + t/q)^q`;
/// returns its truncated coefficients.
pub fn zero_temperature_series(q: u64, radius_exp: usize, dmax: usize) -> Vec<BigRational> {
    // At level l >= 1 only one coset survives: 1 + t/q^l.
    if radius_exp > 0 {
        let mut v = vec![BigRational::zero(); dmax + 1];
        v[0] = BigRational::one();
        if dmax >= 1 {
            v[1] = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(q), radius_exp));
        }
        return v;
    }
    (0..=dmax)
        .map(|n| {
            BigRational::from_integer(crate::combinat::binomial(q as usize, n))
                / BigRational::from_integer(num_traits::pow(BigInt::from(q), n))
        })
        .collect()
}

/// Convenience: the series `Z(t, o)` as exact rational functions.
pub fn gc_z_whole(q: u64, dmax: usize) -> Result<StarSeries> {
    Ok(gc_z(q, 0, dmax)?.into_series())
}
