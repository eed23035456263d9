//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! This is the working representation behind [`RationalFunction`]: all
//! heavy arithmetic (products, exact quotients, gcds) happens in `Z[u]`
//! so that no per-coefficient rational normalization is needed.
//!
//! [`RationalFunction`]: super::RationalFunction

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial in `u` with integer coefficients, lowest degree first.
///
/// Trailing zero coefficients are never stored; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        ZPoly::from_coeffs(vec![c])
    }

    /// `c * u^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        ZPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        ZPoly::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Largest `k` with `u^k` dividing `self` (0 for the zero polynomial).
    pub fn order(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// True when the polynomial is `c * u^k` for some `c, k`.
    pub fn is_monomial(&self) -> bool {
        !self.is_zero() && self.order() + 1 == self.coeffs.len()
    }

    /// Divide by `u^k`; the caller guarantees `k <= self.order()`.
    pub fn shift_down(&self, k: usize) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        debug_assert!(k <= self.order());
        ZPoly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Multiply by `u^k`.
    pub fn shift_up(&self, k: usize) -> ZPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            out.push(c);
        }
        ZPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        if k.is_zero() {
            return ZPoly::zero();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        // Monomial factors are common (powers of u); skip the full product.
        if self.is_monomial() {
            let k = self.order();
            return other.scale(&self.coeffs[k]).shift_up(k);
        }
        if other.is_monomial() {
            let k = other.order();
            return self.scale(&other.coeffs[k]).shift_up(k);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        ZPoly::from_coeffs(out)
    }

    pub fn pow(&self, mut e: u32) -> ZPoly {
        let mut base = self.clone();
        let mut acc = ZPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitute `u -> u^k`.
    pub fn compose_power(&self, k: usize) -> ZPoly {
        assert!(k >= 1, "compose_power needs k >= 1");
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        ZPoly { coeffs }
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Split into `(c, p)` with `self = c * p`, `p` primitive and `lc(p) > 0`.
    ///
    /// The zero polynomial maps to `(0, 0)`.
    pub fn primitive_split(&self) -> (BigInt, ZPoly) {
        if self.is_zero() {
            return (BigInt::zero(), ZPoly::zero());
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        if c.is_one() {
            return (c, self.clone());
        }
        let coeffs = self.coeffs.iter().map(|x| x / &c).collect();
        (c, ZPoly { coeffs })
    }

    pub fn primitive_part(&self) -> ZPoly {
        self.primitive_split().1
    }

    /// Exact quotient `self / d` in `Z[u]`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if d.is_one() {
            return Some(self.clone());
        }
        let dd = d.degree().unwrap();
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        if d.is_monomial() {
            let k = d.order();
            if self.order() < k {
                return None;
            }
            let c = &d.coeffs[k];
            let mut coeffs = Vec::with_capacity(self.coeffs.len() - k);
            for x in &self.coeffs[k..] {
                let (q, r) = x.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                coeffs.push(q);
            }
            return Some(ZPoly { coeffs });
        }
        let lc = d.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly::from_coeffs(quot))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Greatest common divisor in `Z[u]`, primitive with positive leading
    /// coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let ka = self.order();
        let kb = other.order();
        let kx = ka.min(kb);
        let a = self.shift_down(ka).primitive_part();
        let b = other.shift_down(kb).primitive_part();
        let rest = if a.degree() == Some(0) || b.degree() == Some(0) {
            ZPoly::one()
        } else if a == b {
            a
        } else {
            modular_gcd(&a, &b)
        };
        rest.shift_up(kx)
    }
}

// ---------------------------------------------------------------------------
// Modular gcd (Brown): images mod word-size primes, CRT lift, trial division.

const PRIME_CACHE: usize = 400;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_CACHE);
        let mut n = (1u64 << 62) - 1;
        while out.len() < PRIME_CACHE {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn reduce_mod(c: &BigInt, p: u64) -> u64 {
    let mut r: u128 = 0;
    for d in c.magnitude().iter_u64_digits().rev() {
        r = ((r << 64) | d as u128) % p as u128;
    }
    let r = r as u64;
    if c.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd of two polynomials over `F_p`.
fn gcd_mod_p(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a <- a mod b
        let db = b.len() - 1;
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() > db {
            let top = *a.last().unwrap();
            if top == 0 {
                a.pop();
                continue;
            }
            let f = mul_mod(top, inv, p);
            let shift = a.len() - 1 - db;
            for (j, &bc) in b.iter().enumerate() {
                let t = mul_mod(f, bc, p);
                let slot = &mut a[shift + j];
                *slot = if *slot >= t { *slot - t } else { *slot + p - t };
            }
            a.pop();
        }
        trim(&mut a);
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

fn symmetric_lift(c: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    if c > half {
        c - m
    } else {
        c.clone()
    }
}

/// Gcd of two primitive polynomials, both of positive degree.
fn modular_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let lca = a.leading().unwrap();
    let lcb = b.leading().unwrap();
    let gamma = lca.gcd(lcb);
    let max_deg = a.degree().unwrap().min(b.degree().unwrap());

    let mut best_deg = usize::MAX;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last_candidate: Option<ZPoly> = None;

    for &p in primes() {
        let lp_a = reduce_mod(lca, p);
        let lp_b = reduce_mod(lcb, p);
        if lp_a == 0 || lp_b == 0 {
            continue;
        }
        let ap: Vec<u64> = a.coeffs.iter().map(|c| reduce_mod(c, p)).collect();
        let bp: Vec<u64> = b.coeffs.iter().map(|c| reduce_mod(c, p)).collect();
        let mut g = gcd_mod_p(ap, bp, p);
        let dg = g.len() - 1;
        if dg == 0 {
            return ZPoly::one();
        }
        if dg > max_deg || dg > best_deg {
            continue;
        }
        let gp = reduce_mod(&gamma, p);
        for c in g.iter_mut() {
            *c = mul_mod(*c, gp, p);
        }
        if dg < best_deg {
            best_deg = dg;
            acc = g.iter().map(|&c| BigInt::from(c)).collect();
            modulus = BigInt::from(p);
        } else {
            let m_mod_p = reduce_mod(&modulus, p);
            let inv = inv_mod(m_mod_p, p);
            for (x, &r) in acc.iter_mut().zip(g.iter()) {
                let xr = reduce_mod(x, p);
                let t = mul_mod((r + p - xr) % p, inv, p);
                if t != 0 {
                    *x += &modulus * BigInt::from(t);
                }
            }
            modulus *= BigInt::from(p);
        }
        let half = &modulus >> 1;
        let lifted: Vec<BigInt> = acc
            .iter()
            .map(|c| symmetric_lift(c, &modulus, &half))
            .collect();
        let candidate = ZPoly::from_coeffs(lifted).primitive_part();
        if last_candidate.as_ref() == Some(&candidate)
            && a.div_exact(&candidate).is_some()
            && b.div_exact(&candidate).is_some()
        {
            return candidate;
        }
        last_candidate = Some(candidate);
    }
    // Prime supply exhausted; fall back to the primitive remainder sequence.
    primitive_prs_gcd(a, b)
}

fn pseudo_rem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let db = b.degree().unwrap();
    let lc = b.leading().unwrap().clone();
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let top = r.leading().unwrap().clone();
        r = r
            .scale(&lc)
            .sub(&b.scale(&top).shift_up(dr - db));
    }
    r
}

fn primitive_prs_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let (mut x, mut y) = if a.degree() >= b.degree() {
        (a.primitive_part(), b.primitive_part())
    } else {
        (b.primitive_part(), a.primitive_part())
    };
    while !y.is_zero() {
        let r = pseudo_rem(&x, &y).primitive_part();
        x = y;
        y = r;
    }
    x.primitive_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> ZPoly {
        ZPoly::from_i64s(cs)
    }

    #[test]
    fn primes_are_prime_and_distinct() {
        let ps = primes();
        assert_eq!(ps.len(), PRIME_CACHE);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(2_305_843_009_213_693_951));
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (u - 3)(u + 2) and (u - 3)(u^2 + 1)
        let a = p(&[-3, 1]).mul(&p(&[2, 1]));
        let b = p(&[-3, 1]).mul(&p(&[1, 0, 1]));
        assert_eq!(a.gcd(&b), p(&[-3, 1]));
    }

    #[test]
    fn gcd_coprime_and_powers_of_u() {
        assert_eq!(p(&[1, 1]).gcd(&p(&[-1, 1])), ZPoly::one());
        assert_eq!(p(&[0, 0, 2, 4]).gcd(&p(&[0, 6])), p(&[0, 1]));
        assert_eq!(p(&[0, 0, 3]).gcd(&p(&[0, 0, 0, 5])), p(&[0, 0, 1]));
    }

    #[test]
    fn gcd_with_large_coefficients() {
        let f = p(&[123_456_789, -987_654_321, 5]).pow(4);
        let g = p(&[7, 0, -11, 1]).pow(3);
        let h = p(&[-1_000_003, 17]).pow(2);
        let a = f.mul(&h);
        let b = g.mul(&h);
        assert_eq!(a.gcd(&b), h.primitive_part());
        assert_eq!(primitive_prs_gcd(&a, &b), h.primitive_part());
    }

    #[test]
    fn div_exact_detects_non_divisibility() {
        let a = p(&[-9, 0, 1]);
        assert_eq!(a.div_exact(&p(&[-3, 1])), Some(p(&[3, 1])));
        assert_eq!(a.div_exact(&p(&[-2, 1])), None);
        assert_eq!(p(&[2, 4]).div_exact(&p(&[0, 0, 2])), None);
    }

    #[test]
    fn reduce_mod_handles_sign() {
        let p = 1_000_000_007u64;
        assert_eq!(reduce_mod(&BigInt::from(-1), p), p - 1);
        let big = BigInt::from(p) * BigInt::from(p) + BigInt::from(5);
        assert_eq!(reduce_mod(&big, p), 5);
    }
}
