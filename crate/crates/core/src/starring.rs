//! Truncated power series in the fugacity `t` with rational-function
//! coefficients, the level-`l` star product and the overline/underline
//! twists.
//!
//! The level-`l` star product of `sum a_n t^n` and `sum b_m t^m` inserts the
//! factor `u^(l n m)` between the degree `n` and degree `m` terms. Level 0
//! is the ordinary product. `overline` multiplies coefficient `n` by
//! `u^(l C(n,2))`, turning ordinary products into star products:
//! `overline(a) * overline(b) = overline(a b)` with `*` the star product of
//! the same level.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combinat::pairs;
use crate::error::{Error, Result};
use crate::exactnum::RationalFunction;

/// Power series `sum_{N <= dmax} c_N t^N`, always holding `dmax + 1`
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarSeries {
    q: u64,
    dmax: usize,
    coeffs: Vec<RationalFunction>,
}

impl StarSeries {
    /// Pads with zeros up to `dmax`; terms above `dmax` are dropped.
    pub fn new(q: u64, dmax: usize, mut coeffs: Vec<RationalFunction>) -> Self {
        coeffs.resize(dmax + 1, RationalFunction::zero());
        StarSeries { q, dmax, coeffs }
    }

    pub fn zero(q: u64, dmax: usize) -> Self {
        Self::new(q, dmax, Vec::new())
    }

    pub fn one(q: u64, dmax: usize) -> Self {
        Self::new(q, dmax, vec![RationalFunction::one()])
    }

    /// `c t^k`, or the zero series if `k > dmax`.
    pub fn monomial(q: u64, dmax: usize, c: RationalFunction, k: usize) -> Self {
        let mut s = Self::zero(q, dmax);
        if k <= dmax {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn dmax(&self) -> usize {
        self.dmax
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &RationalFunction {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalFunction::is_zero)
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.q != other.q || self.dmax != other.dmax {
            return Err(Error::SeriesMismatch(format!(
                "(q = {}, dmax = {}) vs (q = {}, dmax = {})",
                self.q, self.dmax, other.q, other.dmax
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(StarSeries { coeffs, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|_, c| -c)
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        self.map(|_, x| x * c)
    }

    fn map(&self, f: impl Fn(usize, &RationalFunction) -> RationalFunction) -> Self {
        StarSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(n, c)| f(n, c)).collect(),
            ..*self
        }
    }

    /// Level-`level` star product; level 0 is the ordinary product.
    pub fn star_mul(&self, other: &Self, level: i64) -> Result<Self> {
        self.check_compatible(other)?;
        let d = self.dmax;
        let mut out = vec![RationalFunction::zero(); d + 1];
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m, b) in other.coeffs[..=d - n].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = (a * b).mul_u_pow(level * (n * m) as i64);
                out[n + m] = &out[n + m] + &term;
            }
        }
        Ok(StarSeries { coeffs: out, ..*self })
    }

    /// Ordinary product of power series.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.star_mul(other, 0)
    }

    /// `J`-fold star power at the given level; `J = 0` gives the unity.
    pub fn star_pow(&self, j: usize, level: i64) -> Self {
        let mut result = Self::one(self.q, self.dmax);
        let mut base = self.clone();
        let mut e = j;
        // The star product is commutative and associative, so square-and-multiply applies.
        while e > 0 {
            if e & 1 == 1 {
                result = result.star_mul(&base, level).expect("same shape");
            }
            e >>= 1;
            if e > 0 {
                base = base.star_mul(&base, level).expect("same shape");
            }
        }
        result
    }

    pub fn pow(&self, j: usize) -> Self {
        self.star_pow(j, 0)
    }

    /// Multiply coefficient `n` by `u^(level C(n,2))`.
    pub fn overline(&self, level: i64) -> Self {
        if level == 0 {
            return self.clone();
        }
        self.map(|n, c| c.mul_u_pow(level * pairs(n) as i64))
    }

    /// Inverse of [`overline`](Self::overline).
    pub fn underline(&self, level: i64) -> Self {
        self.overline(-level)
    }

    /// Substitute `t -> factor * t`.
    pub fn substitute_t_scale(&self, factor: &BigRational) -> Self {
        let mut power = BigRational::one();
        let mut coeffs = Vec::with_capacity(self.dmax + 1);
        for c in &self.coeffs {
            coeffs.push(c.scale_by(&power));
            power = &power * factor;
        }
        StarSeries { coeffs, ..*self }
    }

    /// Evaluate every coefficient at `u = u0`.
    pub fn eval_coeffs(&self, u0: &BigRational) -> Result<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.eval(u0)).collect()
    }
}

/// `overline(a) * overline(b) == overline(a b)` at the given level, where
/// `*` on the left is the star product and `a b` the ordinary product.
pub fn convolution_identity_check(a: &StarSeries, b: &StarSeries, level: i64) -> Result<bool> {
    let lhs = a.overline(level).star_mul(&b.overline(level), level)?;
    let rhs = a.mul(b)?.overline(level);
    Ok(lhs == rhs)
}

/// Truncation of `e^(c t)` with exact rational coefficients.
pub fn exp_series(q: u64, dmax: usize, c: &BigRational) -> StarSeries {
    let mut coeffs = Vec::with_capacity(dmax + 1);
    let mut term = BigRational::one();
    for n in 0..=dmax {
        if n > 0 {
            term = term * c / BigRational::from_integer(n.into());
        }
        coeffs.push(RationalFunction::constant(term.clone()));
    }
    StarSeries::new(q, dmax, coeffs)
}
