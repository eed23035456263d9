//! Exact rational numbers, polynomials and rational functions in `u = q^(-beta)`.

mod ratfunc;
mod upoly;
mod zpoly;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use ratfunc::RationalFunction;
pub use upoly::UPoly;
pub use zpoly::ZPoly;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `"num/den"` in base 10; the denominator is always written.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"n"`, `"n/d"` and plain decimals such as `"0.25"` or `"-1.5"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// The value `u0 = q^(-beta)` used to evaluate rational functions, with a
/// flag telling whether it is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UValue {
    pub value: BigRational,
    pub exact: bool,
}

/// `q^(-beta)` as an exact rational when one exists (`q^a` a perfect
/// `b`-th power for `beta = a/b`), otherwise the nearest rational to the
/// double-precision value.
pub fn u_from_beta(q: u64, beta: &BigRational) -> UValue {
    if let Some(v) = exact_u_from_beta(q, beta) {
        return UValue {
            value: v,
            exact: true,
        };
    }
    let b = rational_to_f64(beta);
    let approx = (q as f64).powf(-b);
    UValue {
        value: BigRational::from_float(approx).unwrap_or_else(BigRational::zero),
        exact: false,
    }
}

fn exact_u_from_beta(q: u64, beta: &BigRational) -> Option<BigRational> {
    let a = beta.numer().abs().to_u32()?;
    let b = beta.denom().to_u32()?;
    // Keep the power small enough that the root extraction stays cheap.
    if (a as u64) * 64 > 1 << 16 {
        return None;
    }
    let qa = num_traits::pow(BigInt::from(q), a as usize);
    let root = qa.nth_root(b);
    if num_traits::pow(root.clone(), b as usize) != qa {
        return None;
    }
    let r = BigRational::from_integer(root);
    Some(if beta.is_negative() {
        r
    } else if r.is_zero() {
        BigRational::one()
    } else {
        r.recip()
    })
}

/// Serde adapters writing `BigRational` values as `"num/den"` strings; use
/// with `#[serde(with = "...")]`.
pub mod rational_serde {
    use super::{format_rational, parse_rational, BigRational};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            xs.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        assert_eq!(format_rational(&rational(3, 4)), "3/4");
        assert_eq!(format_rational(&rational(-6, 3)), "-2/1");
        assert_eq!(parse_rational("3/4").unwrap(), rational(3, 4));
        assert_eq!(parse_rational("7").unwrap(), rational(7, 1));
        assert_eq!(parse_rational("0.25").unwrap(), rational(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rational(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn u_values() {
        assert_eq!(u_from_beta(3, &rational(1, 1)), UValue { value: rational(1, 3), exact: true });
        assert_eq!(u_from_beta(4, &rational(1, 2)).value, rational(1, 2));
        assert_eq!(u_from_beta(2, &rational(0, 1)).value, rational(1, 1));
        assert_eq!(u_from_beta(2, &rational(-2, 1)).value, rational(4, 1));
        let irr = u_from_beta(2, &rational(1, 2));
        assert!(!irr.exact);
        assert!((rational_to_f64(&irr.value) - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
