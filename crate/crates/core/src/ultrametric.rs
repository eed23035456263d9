//! Balls `zeta + pi^r o` encoded by the first `r` base-`q` digits of a
//! center, and the coset-tree operations on families of them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canonical::check_q;
use crate::error::{Error, Result};

/// The ball of radius `q^-r` whose centers start with `digits`
/// (`r = digits.len()`); `r = 0` is `o` itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    q: u64,
    digits: Vec<u64>,
}

impl Ball {
    pub fn new(q: u64, digits: Vec<u64>) -> Result<Self> {
        check_q(q)?;
        if let Some(d) = digits.iter().find(|&&d| d >= q) {
            return Err(Error::InvalidBall(format!("digit {d} out of range for q = {q}")));
        }
        Ok(Ball { q, digits })
    }

    /// The whole ring of integers.
    pub fn whole(q: u64) -> Self {
        Ball { q, digits: Vec::new() }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn radius_exp(&self) -> usize {
        self.digits.len()
    }

    /// Haar measure `q^-r`.
    pub fn measure(&self) -> BigRational {
        BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(self.q), self.radius_exp()))
    }

    /// True if `other` is a subset of `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        self.q == other.q && other.digits.starts_with(&self.digits)
    }

    /// True if `x` (given by at least `r` leading digits) lies in the ball.
    pub fn contains_point(&self, x: &[u64]) -> bool {
        x.starts_with(&self.digits)
    }

    pub fn child(&self, j: u64) -> Ball {
        let mut digits = self.digits.clone();
        digits.push(j);
        Ball { q: self.q, digits }
    }

    pub fn children(&self) -> impl Iterator<Item = Ball> + '_ {
        (0..self.q).map(move |j| self.child(j))
    }

    pub fn parent(&self) -> Option<Ball> {
        let (_, rest) = self.digits.split_last()?;
        Some(Ball {
            q: self.q,
            digits: rest.to_vec(),
        })
    }

    /// Pre-image under `x -> d0 + pi x`: drop the leading digit.
    pub fn descend(&self) -> Result<Ball> {
        if self.digits.is_empty() {
            return Err(Error::InvalidBall("cannot descend from the whole ring".into()));
        }
        Ok(Ball {
            q: self.q,
            digits: self.digits[1..].to_vec(),
        })
    }

    /// Image of the ball under `x -> outer.center + pi^r x`, with `r` the
    /// radius exponent of `outer`.
    pub fn push_into(&self, outer: &Ball) -> Ball {
        let mut digits = outer.digits.clone();
        digits.extend_from_slice(&self.digits);
        Ball { q: self.q, digits }
    }

    /// Inverse of [`push_into`](Self::push_into): the pre-image of a sub-ball
    /// of `outer`.
    pub fn pull_out_of(&self, outer: &Ball) -> Result<Ball> {
        if !outer.contains(self) {
            return Err(Error::NotContained(self.to_string(), outer.to_string()));
        }
        Ok(Ball {
            q: self.q,
            digits: self.digits[outer.radius_exp()..].to_vec(),
        })
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        write!(f, "{}:{}:{}", self.q, self.digits.len(), digits.join("."))
    }
}

impl FromStr for Ball {
    type Err = Error;

    /// `"q:r:d0.d1...d(r-1)"`; for `r = 0` the trailing part may be empty or
    /// omitted.
    fn from_str(s: &str) -> Result<Ball> {
        let bad = |why: &str| Error::InvalidBall(format!("{s:?}: {why}"));
        let mut parts = s.trim().splitn(3, ':');
        let q: u64 = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| bad("expected q:r:digits"))?;
        let r: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| bad("expected q:r:digits"))?;
        let digit_text = parts.next().unwrap_or("");
        let digits: Vec<u64> = if digit_text.is_empty() {
            Vec::new()
        } else {
            digit_text
                .split('.')
                .map(|d| d.parse().map_err(|_| bad("digits must be integers")))
                .collect::<Result<_>>()?
        };
        if digits.len() != r {
            return Err(bad("digit count does not match r"));
        }
        Ball::new(q, digits)
    }
}

impl Serialize for Ball {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ball {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Distance between two balls, constant over their points when disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallDistance {
    /// One ball contains the other.
    Same,
    /// Distance `q^-k`, `k` being the index of the first differing digit.
    Exponent(usize),
}

pub fn ball_distance(a: &Ball, b: &Ball) -> BallDistance {
    match a.digits.iter().zip(&b.digits).position(|(x, y)| x != y) {
        Some(k) => BallDistance::Exponent(k),
        None => BallDistance::Same,
    }
}

/// Balls are nested or disjoint; true when neither contains the other.
pub fn disjoint(a: &Ball, b: &Ball) -> bool {
    matches!(ball_distance(a, b), BallDistance::Exponent(_))
}

/// A list of pairwise disjoint balls with a common `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallFamily {
    q: u64,
    balls: Vec<Ball>,
}

impl BallFamily {
    pub fn new(q: u64, balls: Vec<Ball>) -> Result<Self> {
        check_q(q)?;
        if let Some(b) = balls.iter().find(|b| b.q != q) {
            return Err(Error::InvalidBall(format!("{b} does not have q = {q}")));
        }
        for (i, a) in balls.iter().enumerate() {
            for b in &balls[i + 1..] {
                if !disjoint(a, b) {
                    return Err(Error::Overlap(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(BallFamily { q, balls })
    }

    pub fn empty(q: u64) -> Self {
        BallFamily { q, balls: Vec::new() }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn measure(&self) -> BigRational {
        self.balls.iter().map(Ball::measure).sum()
    }

    /// Index of the ball containing the point, if any.
    pub fn locate(&self, x: &[u64]) -> Option<usize> {
        self.balls.iter().position(|b| b.contains_point(x))
    }
}

/// The minimal family of disjoint balls covering `within` minus the union of
/// `family`.
pub fn complement(family: &BallFamily, within: &Ball) -> Result<BallFamily> {
    if let Some(b) = family.balls.iter().find(|b| !within.contains(b)) {
        return Err(Error::NotContained(b.to_string(), within.to_string()));
    }
    let mut out = Vec::new();
    let refs: Vec<&Ball> = family.balls.iter().collect();
    complement_rec(within, &refs, &mut out);
    Ok(BallFamily {
        q: family.q,
        balls: out,
    })
}

fn complement_rec(node: &Ball, balls: &[&Ball], out: &mut Vec<Ball>) {
    let relevant: Vec<&Ball> = balls
        .iter()
        .copied()
        .filter(|b| !disjoint(node, b))
        .collect();
    if relevant.is_empty() {
        out.push(node.clone());
        return;
    }
    if relevant.iter().any(|b| b.contains(node)) {
        return;
    }
    for child in node.children() {
        complement_rec(&child, &relevant, out);
    }
}

/// Split a family by leading digit; entry `j` holds the balls inside
/// `j + m`.
pub fn group_by_coset(family: &BallFamily) -> Result<Vec<BallFamily>> {
    let mut groups: Vec<Vec<Ball>> = vec![Vec::new(); family.q as usize];
    for b in &family.balls {
        match b.digits.first() {
            Some(&j) => groups[j as usize].push(b.clone()),
            None => {
                return Err(Error::InvalidBall(
                    "the whole ring cannot be grouped by coset".into(),
                ))
            }
        }
    }
    Ok(groups
        .into_iter()
        .map(|balls| BallFamily { q: family.q, balls })
        .collect())
}

/// True when no `q` sibling balls of the family could be merged into their
/// parent.
pub fn is_minimal(family: &BallFamily) -> bool {
    family.balls.iter().all(|b| match b.parent() {
        None => true,
        Some(p) => !p.children().all(|c| family.balls.contains(&c)),
    })
}

pub fn total_measure(balls: &[Ball]) -> BigRational {
    balls.iter().fold(BigRational::zero(), |acc, b| acc + b.measure())
}
