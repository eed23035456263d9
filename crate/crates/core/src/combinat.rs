//! Small combinatorial helpers shared by the recursions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: usize) -> BigRational {
    BigRational::from_integer(factorial(n))
}

/// `n choose 2`.
pub fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of weak compositions of `n` into `parts` parts.
pub fn weak_composition_count(n: usize, parts: usize) -> BigInt {
    if parts == 0 {
        return BigInt::from(u8::from(n == 0));
    }
    binomial(n + parts - 1, parts - 1)
}

/// Iterates over all weak compositions of `n` into `parts` non-negative
/// parts in lexicographic order, first part largest first.
pub struct WeakCompositions {
    current: Option<Vec<usize>>,
}

impl WeakCompositions {
    pub fn new(n: usize, parts: usize) -> Self {
        let current = match parts {
            0 if n == 0 => Some(Vec::new()),
            0 => None,
            _ => {
                let mut v = vec![0; parts];
                v[0] = n;
                Some(v)
            }
        };
        WeakCompositions { current }
    }
}

impl Iterator for WeakCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        // Find the rightmost non-last position holding a positive value, move
        // one unit right and gather everything after it.
        if k > 1 {
            if let Some(i) = (0..k - 1).rev().find(|&i| out[i] > 0) {
                let mut next = out.clone();
                let tail: usize = next[i + 1..].iter().sum();
                next[i] -= 1;
                for x in next[i + 1..].iter_mut() {
                    *x = 0;
                }
                next[i + 1] = tail + 1;
                self.current = Some(next);
            }
        }
        Some(out)
    }
}
