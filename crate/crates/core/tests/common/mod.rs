//! Shared generators for integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ultragas::ultrametric::disjoint;
use ultragas::{Ball, BallFamily, CylinderEvent};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_ball(rng: &mut impl Rng, q: u64, max_depth: usize) -> Ball {
    let depth = rng.random_range(0..=max_depth);
    Ball::new(q, (0..depth).map(|_| rng.random_range(0..q)).collect()).unwrap()
}

/// Up to `max_balls` pairwise disjoint balls of depth between 1 and
/// `max_depth`.
pub fn random_family(rng: &mut impl Rng, q: u64, max_balls: usize, max_depth: usize) -> Vec<Ball> {
    let mut balls: Vec<Ball> = Vec::new();
    let want = rng.random_range(1..=max_balls);
    for _ in 0..8 * want {
        if balls.len() == want {
            break;
        }
        let depth = rng.random_range(1..=max_depth);
        let b = Ball::new(q, (0..depth).map(|_| rng.random_range(0..q)).collect()).unwrap();
        if balls.iter().all(|a| disjoint(a, &b)) {
            balls.push(b);
        }
    }
    balls
}

/// A random event `{N_B = n}` with total count at most `max_total`.
pub fn random_event(rng: &mut impl Rng, q: u64, max_balls: usize, max_depth: usize, max_total: usize) -> CylinderEvent {
    let balls = random_family(rng, q, max_balls, max_depth);
    let mut counts = Vec::with_capacity(balls.len());
    let mut left = max_total;
    for _ in &balls {
        let c = rng.random_range(0..=left.min(3));
        counts.push(c);
        left -= c;
    }
    CylinderEvent::new(BallFamily::new(q, balls).unwrap(), counts).unwrap()
}

/// Coverings of `o` with at most `max_balls` balls, grown by repeatedly
/// splitting one ball into its children.
pub fn coverings(q: u64, max_balls: usize, max_depth: usize) -> Vec<Vec<Ball>> {
    let mut seen = vec![vec![Ball::whole(q)]];
    let mut frontier = seen.clone();
    while let Some(cover) = frontier.pop() {
        for (i, b) in cover.iter().enumerate() {
            if b.radius_exp() >= max_depth || cover.len() - 1 + q as usize > max_balls {
                continue;
            }
            let mut next: Vec<Ball> = cover.clone();
            next.remove(i);
            next.extend(b.children());
            next.sort_by_key(|b| b.to_string());
            if !seen.contains(&next) {
                seen.push(next.clone());
                frontier.push(next);
            }
        }
    }
    seen
}
