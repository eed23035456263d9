use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, parse_rational, ZPoly};

/// Polynomial in `u` with rational coefficients; index `k` holds the
/// coefficient of `u^k`. Never stores a zero leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::from_coeffs(vec![BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        UPoly::from_coeffs(
            cs.iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Clear denominators: `self = scale * p` with `p` primitive in `Z[u]`
    /// and positive leading coefficient.
    pub fn to_zpoly(&self) -> (BigRational, ZPoly) {
        if self.is_zero() {
            return (BigRational::zero(), ZPoly::zero());
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let (content, prim) = ZPoly::from_coeffs(ints).primitive_split();
        (BigRational::new(content, l), prim)
    }

    pub fn from_zpoly(scale: &BigRational, p: &ZPoly) -> Self {
        UPoly::from_coeffs(
            p.coeffs()
                .iter()
                .map(|c| scale * BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let a = c.abs();
            let unit = a.is_one();
            let coeff = if a.is_integer() { a.to_string() } else { format!("({a})") };
            match (k, unit) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "u")?,
                (1, false) => write!(f, "{coeff}*u")?,
                (_, true) => write!(f, "u^{k}")?,
                (_, false) => write!(f, "{coeff}*u^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UPoly::from_coeffs(coeffs))
    }
}
