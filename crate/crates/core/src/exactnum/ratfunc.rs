use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{UPoly, ZPoly};
use crate::error::{Error, Result};

/// A reduced quotient of polynomials in `u` over the rationals.
///
/// Stored as `scale * num / den` with `num` and `den` primitive integer
/// polynomials of positive leading coefficient and `gcd(num, den) = 1`.
/// That triple is unique for every value, so structural equality is value
/// equality. The public canonical form ([`numerator`](Self::numerator),
/// [`denominator`](Self::denominator)) moves all scalars into the numerator
/// and makes the denominator monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    scale: BigRational,
    num: ZPoly,
    den: ZPoly,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            scale: BigRational::zero(),
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            scale: c,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `u^k` for any integer `k`; negative powers land in the denominator.
    pub fn u_pow(k: i64) -> Self {
        let mono = ZPoly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            RationalFunction {
                scale: BigRational::one(),
                num: mono,
                den: ZPoly::one(),
            }
        } else {
            RationalFunction {
                scale: BigRational::one(),
                num: ZPoly::one(),
                den: mono,
            }
        }
    }

    pub fn u() -> Self {
        Self::u_pow(1)
    }

    pub fn from_upoly(p: &UPoly) -> Self {
        let (scale, prim) = p.to_zpoly();
        if scale.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            scale,
            num: prim,
            den: ZPoly::one(),
        }
    }

    /// Build `num / den`, reducing to canonical form.
    pub fn from_upolys(num: &UPoly, den: &UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (sn, pn) = num.to_zpoly();
        let (sd, pd) = den.to_zpoly();
        if sn.is_zero() {
            return Ok(Self::zero());
        }
        Ok(Self::reduce(sn / sd, pn, pd))
    }

    /// Normalize `scale * num / den` where `num`, `den` are primitive with
    /// positive leading coefficients but possibly share a factor.
    fn reduce(scale: BigRational, num: ZPoly, den: ZPoly) -> Self {
        if scale.is_zero() || num.is_zero() {
            return Self::zero();
        }
        let g = if den.is_one() { ZPoly::one() } else { num.gcd(&den) };
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        RationalFunction { scale, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && self.num.is_one() && self.den.is_one()
    }

    /// True when the value does not depend on `u`.
    pub fn is_constant(&self) -> bool {
        self.num.degree() == Some(0) && self.den.degree() == Some(0)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.scale.clone())
    }

    /// Numerator of the canonical form (denominator monic).
    pub fn numerator(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let lc = BigRational::from_integer(self.den.leading().unwrap().clone());
        UPoly::from_zpoly(&(&self.scale / lc), &self.num)
    }

    /// Monic denominator of the canonical form.
    pub fn denominator(&self) -> UPoly {
        let lc = BigRational::from_integer(self.den.leading().unwrap().clone());
        UPoly::from_zpoly(&(BigRational::one() / lc), &self.den)
    }

    /// Integer-polynomial parts: value is `scale * num / den`.
    pub fn parts(&self) -> (&BigRational, &ZPoly, &ZPoly) {
        (&self.scale, &self.num, &self.den)
    }

    pub fn scale_by(&self, c: &BigRational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            scale: &self.scale * c,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// Multiply by `u^k` (any sign of `k`).
    pub fn mul_u_pow(&self, k: i64) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let kk = k.unsigned_abs() as usize;
        let (num, den) = if k > 0 {
            let cancel = kk.min(self.den.order());
            (
                self.num.shift_up(kk - cancel),
                self.den.shift_down(cancel),
            )
        } else {
            let cancel = kk.min(self.num.order());
            (
                self.num.shift_down(cancel),
                self.den.shift_up(kk - cancel),
            )
        };
        RationalFunction {
            scale: self.scale.clone(),
            num,
            den,
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (g, d1, d2) = if self.den == other.den {
            (self.den.clone(), ZPoly::one(), ZPoly::one())
        } else {
            let g = self.den.gcd(&other.den);
            let d1 = self.den.div_exact(&g).expect("gcd divides");
            let d2 = other.den.div_exact(&g).expect("gcd divides");
            (g, d1, d2)
        };
        let b1 = self.scale.denom();
        let b2 = other.scale.denom();
        let l = b1.lcm(b2);
        let m1 = self.scale.numer() * (&l / b1);
        let m2 = other.scale.numer() * (&l / b2);
        let sum = self
            .num
            .mul(&d2)
            .scale(&m1)
            .add(&other.num.mul(&d1).scale(&m2));
        if sum.is_zero() {
            return Self::zero();
        }
        let (c, prim) = sum.primitive_split();
        // Only factors of the shared part `g` can cancel against the sum.
        let (num, g) = if g.is_one() {
            (prim, g)
        } else {
            let h = prim.gcd(&g);
            if h.is_one() {
                (prim, g)
            } else {
                (
                    prim.div_exact(&h).expect("gcd divides"),
                    g.div_exact(&h).expect("gcd divides"),
                )
            }
        };
        RationalFunction {
            scale: BigRational::new(c, l),
            num,
            den: g.mul(&d1).mul(&d2),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let cancel = |n: &ZPoly, d: &ZPoly| -> (ZPoly, ZPoly) {
            if n.degree() == Some(0) || d.degree() == Some(0) {
                return (n.clone(), d.clone());
            }
            let g = n.gcd(d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
            }
        };
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        RationalFunction {
            scale: &self.scale * &other.scale,
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction {
            scale: self.scale.recip(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.recip()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 { Self::one() } else { Self::zero() });
        }
        let e = e as u32;
        let scale = num_traits::pow::Pow::pow(&self.scale, e);
        Ok(RationalFunction {
            scale,
            num: self.num.pow(e),
            den: self.den.pow(e),
        })
    }

    /// Substitute `u -> u^k`, `k >= 1`.
    pub fn substitute_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        // Composition with u^k preserves primitivity and coprimality.
        RationalFunction {
            scale: self.scale.clone(),
            num: self.num.compose_power(k),
            den: self.den.compose_power(k),
        }
    }

    /// Exact value at `u = u0`.
    pub fn eval(&self, u0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(u0);
        if d.is_zero() {
            return Err(Error::Pole(super::format_rational(u0)));
        }
        Ok(&self.scale * self.num.eval(u0) / d)
    }

    /// First `k + 1` Taylor coefficients at `u = 0`.
    pub fn taylor(&self, k: usize) -> Result<Vec<BigRational>> {
        let dc = self.den.coeffs();
        if dc[0].is_zero() {
            return Err(Error::PoleAtOrigin);
        }
        if self.is_zero() {
            return Ok(vec![BigRational::zero(); k + 1]);
        }
        let d0 = BigRational::from_integer(dc[0].clone());
        let nc = self.num.coeffs();
        let mut out: Vec<BigRational> = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let mut acc = nc
                .get(i)
                .map(|c| BigRational::from_integer(c.clone()))
                .unwrap_or_else(BigRational::zero);
            for j in 1..=i.min(dc.len() - 1) {
                if !dc[j].is_zero() {
                    acc -= BigRational::from_integer(dc[j].clone()) * &out[i - j];
                }
            }
            out.push(acc / &d0);
        }
        for c in out.iter_mut() {
            *c *= &self.scale;
        }
        Ok(out)
    }

    /// Degrees of the canonical numerator and denominator.
    pub fn degrees(&self) -> (Option<usize>, usize) {
        (
            if self.is_zero() { None } else { self.num.degree() },
            self.den.degree().unwrap(),
        )
    }

    /// Polynomial gcd test: do `a` and `b` share a root over the algebraic
    /// closure?
    pub fn has_root_in_common(a: &UPoly, b: &UPoly) -> bool {
        let (_, pa) = a.to_zpoly();
        let (_, pb) = b.to_zpoly();
        pa.gcd(&pb).degree().is_some_and(|d| d > 0)
    }

    pub fn is_positive_constant(&self) -> bool {
        self.is_constant() && self.scale.is_positive()
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.denominator();
        if d.degree() == Some(0) {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "({}) / ({})", self.numerator(), d)
        }
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            num: UPoly,
            den: UPoly,
        }
        Repr {
            num: self.numerator(),
            den: self.denominator(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            num: UPoly,
            den: UPoly,
        }
        let r = Repr::deserialize(d)?;
        RationalFunction::from_upolys(&r.num, &r.den).map_err(D::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                self.$imp(rhs)
            }
        }
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$imp(rhs)
            }
        }
    };
}

impl RationalFunction {
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&-other)
    }
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            scale: -&self.scale,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_minus_u_over(q: i64) -> RationalFunction {
        // (q - 1) / (q - u)
        let num = UPoly::from_i64s(&[q - 1]);
        let den = UPoly::from_i64s(&[q, -1]);
        RationalFunction::from_upolys(&num, &den).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let x = q_minus_u_over(3);
        assert_eq!(&RationalFunction::zero() + &x, x);
        assert_eq!(&x + &RationalFunction::zero(), x);
        let one_minus_u = UPoly::from_i64s(&[1, -1]);
        let a = RationalFunction::from_upolys(&UPoly::one(), &one_minus_u).unwrap();
        let b = RationalFunction::from_upolys(&UPoly::from_i64s(&[0, -1]), &one_minus_u).unwrap();
        assert!((&a + &b).is_one());
    }

    #[test]
    fn product_cancels_and_division_by_zero_errors() {
        let x = q_minus_u_over(3);
        assert_eq!(&x * &RationalFunction::one(), x);
        let q_minus_u = RationalFunction::from_upoly(&UPoly::from_i64s(&[3, -1]));
        assert_eq!(&q_minus_u * &x, RationalFunction::from_int(2));
        assert_eq!(
            RationalFunction::one().checked_div(&RationalFunction::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn evaluation_values() {
        let x = q_minus_u_over(3);
        assert_eq!(x.eval(&r(1, 1)).unwrap(), r(1, 1));
        assert_eq!(x.eval(&r(1, 3)).unwrap(), r(3, 4));
        assert_eq!(x.eval(&r(0, 1)).unwrap(), r(2, 3));
        assert!(matches!(x.eval(&r(3, 1)), Err(Error::Pole(_))));
    }

    #[test]
    fn taylor_coefficients() {
        let geo = RationalFunction::from_upolys(&UPoly::one(), &UPoly::from_i64s(&[1, -1])).unwrap();
        assert_eq!(geo.taylor(3).unwrap(), vec![r(1, 1); 4]);
        assert_eq!(
            q_minus_u_over(3).taylor(2).unwrap(),
            vec![r(2, 3), r(2, 9), r(2, 27)]
        );
        let c = RationalFunction::from_ratio(5, 7);
        assert_eq!(c.taylor(2).unwrap(), vec![r(5, 7), r(0, 1), r(0, 1)]);
        assert_eq!(RationalFunction::u_pow(-1).taylor(2), Err(Error::PoleAtOrigin));
    }

    #[test]
    fn common_roots() {
        let den = UPoly::from_i64s(&[3, -1]);
        assert!(RationalFunction::has_root_in_common(&den, &UPoly::from_i64s(&[-9, 0, 1])));
        assert!(!RationalFunction::has_root_in_common(&den, &UPoly::from_i64s(&[-9, 0, 0, 1])));
        let f = UPoly::from_i64s(&[1, 2, 3]);
        assert!(RationalFunction::has_root_in_common(&f, &f));
    }

    #[test]
    fn canonical_form_is_monic_denominator() {
        // (6u + 4) / (2 - 4u) = (-3/2 u - 1) / (u - 1/2)
        let f = RationalFunction::from_upolys(
            &UPoly::from_i64s(&[4, 6]),
            &UPoly::from_i64s(&[2, -4]),
        )
        .unwrap();
        assert_eq!(f.denominator(), UPoly::from_coeffs(vec![r(-1, 2), r(1, 1)]));
        assert_eq!(f.numerator(), UPoly::from_coeffs(vec![r(-1, 1), r(-3, 2)]));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"num":["-1/1","-3/2"],"den":["-1/2","1/1"]}"#);
        let back: RationalFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn u_powers_cancel() {
        let f = RationalFunction::u_pow(-3).mul_u_pow(5);
        assert_eq!(f, RationalFunction::u_pow(2));
        let g = q_minus_u_over(2).mul_u_pow(-2).mul_u_pow(2);
        assert_eq!(g, q_minus_u_over(2));
    }
}
