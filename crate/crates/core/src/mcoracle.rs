//! Importance-sampling estimates of partition functions and event
//! probabilities from uniform Haar samples.
//!
//! Points of `o` are drawn as `L` independent uniform base-`q` digits. The
//! sample budget is split into [`CHUNKS`] chunks; chunk `c` draws from a
//! ChaCha8 generator seeded with the run seed and set to stream `c`. The
//! split does not depend on the number of threads and chunk results are
//! combined in chunk order, so estimates are bit-for-bit reproducible for a
//! fixed seed on any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cylinderprob::CylinderEvent;
use crate::error::{Error, Result};
use crate::multicomponent::{shared_digits, ChargeProfile, SpeciesCounts};

/// Number of independent generator streams per run.
pub const CHUNKS: u64 = 64;

/// Name of the pinned generator, recorded in reports.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.9), stream = chunk index";

/// Sampling parameters shared by all estimators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McConfig {
    /// Digits per sampled point.
    pub precision: usize,
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            precision: 30,
            samples: 100_000,
            seed: 1,
            threads: None,
        }
    }
}

/// A uniform element of `o` known to `L` digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PAdicSample {
    pub digits: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    /// Pairs whose points agreed on all `L` digits; their valuation was
    /// counted as `L`.
    pub capped_valuations: u64,
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn draw_point(rng: &mut ChaCha8Rng, q: u64, precision: usize, out: &mut Vec<u64>) {
    out.clear();
    out.extend((0..precision).map(|_| rng.random_range(0..q)));
}

/// `N` independent uniform points at `L` digits, reproducible from the seed.
pub fn sample_state(q: u64, n: usize, precision: usize, seed: u64) -> Result<Vec<PAdicSample>> {
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    crate::canonical::check_q(q)?;
    let mut rng = chunk_rng(seed, 0);
    let mut buf = Vec::new();
    Ok((0..n)
        .map(|_| {
            draw_point(&mut rng, q, precision, &mut buf);
            PAdicSample { digits: buf.clone() }
        })
        .collect())
}

/// Boltzmann weight of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weight {
    pub value: f64,
    /// `k` in `weight = q^(-beta k)`.
    pub exponent: u64,
    pub capped: u64,
}

/// `prod_{i<j} |x_i - x_j|^beta` with valuations capped at the precision.
pub fn boltzmann_weight(q: u64, points: &[Vec<u64>], beta: f64) -> Weight {
    let charged: Vec<(u64, &[u64])> = points.iter().map(|p| (1, p.as_slice())).collect();
    charged_weight(q, &charged, beta)
}

fn charged_weight(q: u64, particles: &[(u64, &[u64])], beta: f64) -> Weight {
    let mut k = 0u64;
    let mut capped = 0u64;
    for (i, (qa, a)) in particles.iter().enumerate() {
        for (qb, b) in &particles[i + 1..] {
            let v = match shared_digits(a, b) {
                Some(v) => v,
                None => {
                    capped += 1;
                    a.len().min(b.len())
                }
            };
            k += qa * qb * v as u64;
        }
    }
    let value = if beta == 0.0 {
        1.0
    } else {
        (q as f64).powf(-beta * k as f64)
    };
    Weight {
        value,
        exponent: k,
        capped,
    }
}

/// Running sums for one chunk: weights `w` and event-restricted weights.
#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    n: u64,
    w: f64,
    w2: f64,
    hit_w: f64,
    hit_w2: f64,
    capped: u64,
}

impl Sums {
    fn merge(mut self, o: &Sums) -> Sums {
        self.n += o.n;
        self.w += o.w;
        self.w2 += o.w2;
        self.hit_w += o.hit_w;
        self.hit_w2 += o.hit_w2;
        self.capped += o.capped;
        self
    }
}

/// Run `CHUNKS` chunks; `draw` produces `(weight, event indicator)` for one
/// sample.
fn run<F>(cfg: &McConfig, draw: F) -> Result<Sums>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<Vec<u64>>) -> (Weight, bool) + Sync,
{
    if cfg.precision == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let per = cfg.samples / CHUNKS;
    let extra = cfg.samples % CHUNKS;
    let chunk = |c: u64| -> Sums {
        let count = per + u64::from(c < extra);
        let mut rng = chunk_rng(cfg.seed, c);
        let mut scratch = Vec::new();
        let mut s = Sums::default();
        for _ in 0..count {
            let (w, hit) = draw(&mut rng, &mut scratch);
            s.n += 1;
            s.w += w.value;
            s.w2 += w.value * w.value;
            if hit {
                s.hit_w += w.value;
                s.hit_w2 += w.value * w.value;
            }
            s.capped += w.capped;
        }
        s
    };
    let parts: Vec<Sums> = match cfg.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            pool.install(|| (0..CHUNKS).into_par_iter().map(chunk).collect())
        }
        None => (0..CHUNKS).into_par_iter().map(chunk).collect(),
    };
    Ok(parts.iter().fold(Sums::default(), |acc, s| acc.merge(s)))
}

fn fill_points(rng: &mut ChaCha8Rng, q: u64, n: usize, precision: usize, points: &mut Vec<Vec<u64>>) {
    points.resize_with(n, Vec::new);
    for p in points.iter_mut() {
        draw_point(rng, q, precision, p);
    }
}

fn mean_estimate(s: &Sums) -> Estimate {
    let n = s.n as f64;
    let mean = s.w / n;
    let var = (s.w2 / n - mean * mean).max(0.0);
    let std_error = if s.n > 1 { (var * n / (n - 1.0) / n).sqrt() } else { 0.0 };
    Estimate {
        mean,
        std_error,
        n_samples: s.n,
        capped_valuations: s.capped,
    }
}

/// Ratio `E[1_A w] / E[w]` with a delta-method standard error.
fn ratio_estimate(s: &Sums) -> Estimate {
    let n = s.n as f64;
    let x = s.hit_w / n;
    let y = s.w / n;
    let r = x / y;
    let var_x = s.hit_w2 / n - x * x;
    let var_y = s.w2 / n - y * y;
    let cov = s.hit_w2 / n - x * y;
    let var = ((var_x - 2.0 * r * cov + r * r * var_y) / (y * y)).max(0.0);
    let std_error = if s.n > 1 { (var / (n - 1.0)).sqrt() } else { 0.0 };
    Estimate {
        mean: r,
        std_error,
        n_samples: s.n,
        capped_valuations: s.capped,
    }
}

/// Plain expectation of the Boltzmann weight of `N` uniform points.
pub fn estimate_z(q: u64, n: usize, beta: f64, cfg: &McConfig) -> Result<Estimate> {
    crate::canonical::check_q(q)?;
    check_beta(beta)?;
    let s = run(cfg, |rng, pts| {
        fill_points(rng, q, n, cfg.precision, pts);
        (boltzmann_weight(q, pts, beta), true)
    })?;
    Ok(mean_estimate(&s))
}

/// Probability of a cylinder event for `N` particles at inverse
/// temperature `beta`.
pub fn estimate_event_prob(q: u64, n: usize, beta: f64, event: &CylinderEvent, cfg: &McConfig) -> Result<Estimate> {
    crate::canonical::check_q(q)?;
    check_beta(beta)?;
    if event.q() != q {
        return Err(Error::InvalidEvent(format!("event has q = {}, expected {q}", event.q())));
    }
    if let Some(b) = event.balls().iter().find(|b| b.radius_exp() > cfg.precision) {
        return Err(Error::InvalidArgument(format!("ball {b} is finer than the sampling precision")));
    }
    let s = run(cfg, |rng, pts| {
        fill_points(rng, q, n, cfg.precision, pts);
        (boltzmann_weight(q, pts, beta), event.holds_for(pts))
    })?;
    Ok(ratio_estimate(&s))
}

/// Partition function of several charged species.
pub fn estimate_multi_z(
    q: u64,
    profile: &ChargeProfile,
    counts: &SpeciesCounts,
    beta: f64,
    cfg: &McConfig,
) -> Result<Estimate> {
    crate::canonical::check_q(q)?;
    check_beta(beta)?;
    let charges: Vec<u64> = profile
        .charges()
        .iter()
        .zip(counts.counts())
        .flat_map(|(&c, &k)| std::iter::repeat_n(c, k))
        .collect();
    let total = charges.len();
    let s = run(cfg, |rng, pts| {
        fill_points(rng, q, total, cfg.precision, pts);
        let particles: Vec<(u64, &[u64])> = charges.iter().copied().zip(pts.iter().map(Vec::as_slice)).collect();
        (charged_weight(q, &particles, beta), true)
    })?;
    Ok(mean_estimate(&s))
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be finite and non-negative")));
    }
    Ok(())
}

/// Comparison of an exact value with an estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Agreement {
    pub exact: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub z_score: f64,
    pub passed: bool,
}

/// Pass when the estimate lies within `sigmas` standard errors of the
/// exact value. A zero standard error demands agreement to rounding.
pub fn agreement(exact: f64, est: &Estimate, sigmas: f64) -> Agreement {
    let diff = est.mean - exact;
    let (z_score, passed) = if est.std_error > 0.0 {
        let z = diff / est.std_error;
        (z, z.abs() <= sigmas)
    } else {
        (0.0, diff.abs() <= 1e-12 * exact.abs().max(1.0))
    };
    Agreement {
        exact,
        estimate: est.mean,
        std_error: est.std_error,
        z_score,
        passed,
    }
}

/// Upper bound on the relative bias introduced by capping: each capped pair
/// has its true weight factor in `[0, q^(-beta L)]` instead of exactly
/// `q^(-beta L)`.
pub fn cap_bias_bound(q: u64, beta: f64, precision: usize, est: &Estimate) -> f64 {
    let per_sample = est.capped_valuations as f64 / est.n_samples.max(1) as f64;
    per_sample * (q as f64).powf(-beta * precision as f64)
}
