//! The acceptance suite: twelve criteria covering exact tables, identities,
//! cylinder probabilities and agreement with the sampling oracle.
//!
//! Randomized criteria draw from a ChaCha8 stream seeded by the suite seed,
//! so a run is reproducible. Wall-clock times are reported but are the only
//! fields that vary between identical runs.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use ultragas::canonical::{abscissa_check, canonical_z, verify_quad_rec_table, CanonicalTable};
use ultragas::cylinderprob::{
    ensemble_consistency_check, gc_cylinder_gf, prob_canonical, push_down_check, total_probability,
};
use ultragas::exactnum::{rational, rational_to_f64, u_from_beta};
use ultragas::grandcanonical::{gc_z_whole, verify_functional_equation, verify_gcz, verify_thm4};
use ultragas::mcoracle::{agreement, estimate_event_prob, estimate_multi_z, estimate_z, Agreement, McConfig};
use ultragas::multicomponent::{multi_canonical_z, verify_multi_qpower};
use ultragas::starring::convolution_identity_check;
use ultragas::ultrametric::disjoint;
use ultragas::{
    Ball, BallFamily, BigRational, ChargeProfile, CylinderEvent, RationalFunction, Result, SpeciesCounts, StarSeries,
    UPoly,
};

use crate::args::Suite;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub suite: Suite,
    /// Restrict to these criterion numbers; empty means no restriction.
    pub criteria: Vec<u32>,
    pub seed: u64,
    pub inject_perturbation: bool,
    pub threads: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            suite: Suite::All,
            criteria: Vec::new(),
            seed: 20240601,
            inject_perturbation: false,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub group: Group,
    pub passed: bool,
    pub checks: usize,
    /// Descriptions of failing checks, at most ten.
    pub failures: Vec<String>,
    pub values: Value,
    pub budget_seconds: f64,
    pub elapsed_seconds: f64,
    pub within_budget: bool,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<44} {}  ({} checks, {:.2} s of {:.0} s)",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.checks,
            self.elapsed_seconds,
            self.budget_seconds,
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

#[derive(Default)]
struct Outcome {
    checks: usize,
    failures: Vec<String>,
    values: serde_json::Map<String, Value>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn check_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {e}", what()));
            }
        }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.values.insert(key.to_string(), v);
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    group: Group,
    budget_seconds: f64,
    run: fn(&SuiteOptions) -> Outcome,
}

const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, name: "small canonical table", group: Group::Exact, budget_seconds: 1.0, run: small_table },
    Criterion { id: 2, name: "three particle closed form", group: Group::Exact, budget_seconds: 1.0, run: three_particles },
    Criterion { id: 3, name: "quadratic identity, N <= 12", group: Group::Exact, budget_seconds: 30.0, run: quadratic_identity },
    Criterion { id: 4, name: "normalization and edge temperatures", group: Group::Exact, budget_seconds: 5.0, run: edge_temperatures },
    Criterion { id: 5, name: "pole on the abscissa of convergence", group: Group::Exact, budget_seconds: 5.0, run: pole_location },
    Criterion { id: 6, name: "grand canonical identities", group: Group::Exact, budget_seconds: 60.0, run: grand_canonical },
    Criterion { id: 7, name: "star ring laws", group: Group::Exact, budget_seconds: 30.0, run: star_ring },
    Criterion { id: 8, name: "cylinder total probability and push-down", group: Group::Exact, budget_seconds: 60.0, run: cylinder_totals },
    Criterion { id: 9, name: "ensemble consistency", group: Group::Exact, budget_seconds: 60.0, run: ensemble_consistency },
    Criterion { id: 10, name: "worked 5-adic example", group: Group::Exact, budget_seconds: 120.0, run: five_adic_example },
    Criterion { id: 11, name: "Monte Carlo agreement", group: Group::Mc, budget_seconds: 300.0, run: monte_carlo },
    Criterion { id: 12, name: "multi-component identities and sampling", group: Group::Mc, budget_seconds: 120.0, run: multi_component },
];

fn selected(c: &Criterion, opts: &SuiteOptions) -> bool {
    let by_group = match opts.suite {
        Suite::All => true,
        Suite::Exact => c.group == Group::Exact,
        Suite::Mc => c.group == Group::Mc,
    };
    by_group && (opts.criteria.is_empty() || opts.criteria.contains(&c.id))
}

/// Run the selected criteria, calling `progress` after each one.
pub fn run_suite_with(opts: &SuiteOptions, mut progress: impl FnMut(&CriterionReport)) -> SuiteReport {
    let mut reports = Vec::new();
    for c in CRITERIA.iter().filter(|c| selected(c, opts)) {
        let start = Instant::now();
        let outcome = (c.run)(opts);
        let elapsed = start.elapsed().as_secs_f64();
        let within_budget = elapsed <= c.budget_seconds;
        let mut failures = outcome.failures;
        let failed = !failures.is_empty();
        failures.truncate(10);
        let report = CriterionReport {
            id: c.id,
            name: c.name,
            group: c.group,
            passed: !failed && within_budget && outcome.checks > 0,
            checks: outcome.checks,
            failures,
            values: Value::Object(outcome.values),
            budget_seconds: c.budget_seconds,
            elapsed_seconds: (elapsed * 1000.0).round() / 1000.0,
            within_budget,
        };
        progress(&report);
        reports.push(report);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    SuiteReport {
        seed: opts.seed,
        failed: reports.len() - passed,
        all_passed: passed == reports.len(),
        passed,
        criteria: reports,
    }
}

pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    run_suite_with(opts, |_| {})
}

// Closed forms, written in q^beta = 1/u.

fn c(n: i64) -> RationalFunction {
    RationalFunction::from_int(n)
}

/// `q^(a beta + b)`.
fn qp(q: u64, a: i64, b: i64) -> RationalFunction {
    let base = RationalFunction::from_ratio(q as i64, 1);
    let base = if b >= 0 {
        (0..b).fold(RationalFunction::one(), |acc, _| acc * &base)
    } else {
        (0..-b).fold(RationalFunction::one(), |acc, _| acc * &base).recip().expect("q > 0")
    };
    base.mul_u_pow(-a)
}

fn div(a: RationalFunction, b: RationalFunction) -> RationalFunction {
    a.checked_div(&b).expect("closed forms have nonzero denominators")
}

pub fn closed_form_z2(q: u64) -> RationalFunction {
    div(c(q as i64 - 1) * qp(q, 1, 0), qp(q, 1, 1) - c(1))
}

pub fn closed_form_z3(q: u64) -> RationalFunction {
    let qi = q as i64;
    let bracket = c(-2) * qp(q, 1, 1) + qp(q, 1, 2) + c(2 * qi - 1);
    div(
        c(qi - 1) * qp(q, 3, 0) * bracket,
        (qp(q, 1, 1) - c(1)) * (qp(q, 3, 2) - c(1)),
    )
}

fn small_table(_: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    for q in [2u64, 3, 4, 5, 7, 9] {
        for n in 0..=1 {
            out.check_result(canonical_z(q, n).map(|z| z.is_one()), || format!("Z({n}) != 1 for q = {q}"));
        }
        let expected = closed_form_z2(q);
        out.check_result(canonical_z(q, 2).map(|z| z == expected), || format!("Z(2) differs for q = {q}"));
    }
    out
}

fn three_particles(_: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    for q in [2u64, 3, 5] {
        let expected = closed_form_z3(q);
        out.check_result(canonical_z(q, 3).map(|z| z == expected), || format!("Z(3) differs for q = {q}"));
    }
    out
}

fn quadratic_identity(opts: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    let mut degrees = serde_json::Map::new();
    for q in [2u64, 3, 4, 5, 7] {
        let mut table = match CanonicalTable::with_max_n(q, 12) {
            Ok(t) => t,
            Err(e) => {
                out.check(false, || format!("q = {q}: {e}"));
                continue;
            }
        };
        if opts.inject_perturbation && q == 3 {
            table.perturb_entry(5, &RationalFunction::u());
        }
        for n in 0..=12 {
            out.check(verify_quad_rec_table(&table, n), || format!("q = {q}, N = {n}"));
        }
        let (num, den) = table.z(12).degrees();
        degrees.insert(format!("q{q}"), json!({ "num": num, "den": den }));
    }
    out.set("degrees_of_z12", Value::Object(degrees));
    out
}

fn edge_temperatures(_: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    for q in [2u64, 3, 5] {
        for n in 0..=12usize {
            let z = match canonical_z(q, n) {
                Ok(z) => z,
                Err(e) => {
                    out.check(false, || format!("q = {q}, N = {n}: {e}"));
                    continue;
                }
            };
            out.check_result(z.eval(&one).map(|v| v == one), || format!("Z({n})(1) != 1, q = {q}"));
            // q!/((q-N)! q^N): the chance that N uniform points occupy
            // distinct cosets.
            let mut expected = one.clone();
            for i in 0..n as u64 {
                expected *= rational(q as i64 - i as i64, q as i64).max(zero.clone());
            }
            out.check_result(z.eval(&zero).map(|v| v == expected), || format!("Z({n})(0) wrong, q = {q}"));
        }
    }
    out
}

fn pole_location(_: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    for q in [2u64, 3, 5] {
        for n in 2..=6 {
            out.check_result(abscissa_check(q, n), || format!("no pole on u^{n} = {} for q = {q}", q * q));
        }
    }
    out
}

fn grand_canonical(_: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    for (q, dmax) in [(2u64, 8usize), (3, 8), (5, 6)] {
        out.check_result(verify_gcz(q, dmax), || format!("q-th power identity, q = {q}"));
        out.check_result(verify_functional_equation(q, dmax), || format!("functional equation, q = {q}"));
        for level in 0..=2 {
            out.check_result(verify_thm4(q, level, dmax), || format!("level {level} star power, q = {q}"));
        }
    }
    out
}

fn random_coeff(rng: &mut impl Rng) -> RationalFunction {
    // (a + b u) u^e / (d - u)
    let num = UPoly::from_i64s(&[rng.random_range(-3..=3), rng.random_range(-2..=2)]);
    let den = UPoly::from_i64s(&[rng.random_range(2..=4), -1]);
    RationalFunction::from_upolys(&num, &den)
        .expect("nonzero denominator")
        .mul_u_pow(rng.random_range(0..=2))
}

fn random_series(rng: &mut impl Rng, q: u64, dmax: usize) -> StarSeries {
    StarSeries::new(q, dmax, (0..=dmax).map(|_| random_coeff(rng)).collect())
}

fn star_ring(opts: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 7);
    let (q, dmax) = (3, 6);
    for i in 0..100 {
        let level = rng.random_range(0..=2);
        let a = random_series(&mut rng, q, dmax);
        let b = random_series(&mut rng, q, dmax);
        let c = random_series(&mut rng, q, dmax);
        let assoc = (|| -> Result<bool> {
            let l = a.star_mul(&b, level)?.star_mul(&c, level)?;
            let r = a.star_mul(&b.star_mul(&c, level)?, level)?;
            Ok(l == r)
        })();
        out.check_result(assoc, || format!("associativity, triple {i}, level {level}"));
        let dist = (|| -> Result<bool> {
            let l = a.star_mul(&b.add(&c)?, level)?;
            let r = a.star_mul(&b, level)?.add(&a.star_mul(&c, level)?)?;
            Ok(l == r)
        })();
        out.check_result(dist, || format!("distributivity, triple {i}, level {level}"));
        out.check_result(convolution_identity_check(&a, &b, level), || {
            format!("convolution identity, triple {i}, level {level}")
        });
    }
    out
}

fn random_family(rng: &mut impl Rng, q: u64, max_balls: usize, max_depth: usize) -> Vec<Ball> {
    let want = rng.random_range(1..=max_balls);
    let mut balls: Vec<Ball> = Vec::new();
    for _ in 0..8 * want {
        if balls.len() == want {
            break;
        }
        let depth = rng.random_range(1..=max_depth);
        let digits = (0..depth).map(|_| rng.random_range(0..q)).collect();
        let b = Ball::new(q, digits).expect("digits below q");
        if balls.iter().all(|a| disjoint(a, &b)) {
            balls.push(b);
        }
    }
    balls
}

fn random_event(rng: &mut impl Rng, q: u64, max_balls: usize, max_depth: usize, max_total: usize) -> CylinderEvent {
    let balls = random_family(rng, q, max_balls, max_depth);
    let mut left = max_total;
    let counts = balls
        .iter()
        .map(|_| {
            let c = rng.random_range(0..=left.min(3));
            left -= c;
            c
        })
        .collect();
    CylinderEvent::new(BallFamily::new(q, balls).expect("disjoint by construction"), counts)
        .expect("counts match balls")
}

fn event_text(event: &CylinderEvent) -> String {
    let parts: Vec<String> = event.pairs().iter().map(|(b, n)| format!("{b}={n}")).collect();
    parts.join(",")
}

/// Coverings of `o` by at most `max_balls` balls, grown by splitting balls
/// into children.
fn coverings(q: u64, max_balls: usize, max_depth: usize) -> Vec<Vec<Ball>> {
    let mut seen = vec![vec![Ball::whole(q)]];
    let mut frontier = seen.clone();
    while let Some(cover) = frontier.pop() {
        for (i, b) in cover.iter().enumerate() {
            if b.radius_exp() >= max_depth || cover.len() - 1 + q as usize > max_balls {
                continue;
            }
            let mut next = cover.clone();
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

fn cylinder_totals(opts: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    let mut families = 0;
    for q in [2u64, 3] {
        for cover in coverings(q, 4, 3) {
            families += 1;
            let family = match BallFamily::new(q, cover) {
                Ok(f) => f,
                Err(e) => {
                    out.check(false, || e.to_string());
                    continue;
                }
            };
            for n in 0..=5 {
                out.check_result(total_probability(q, n, &family).map(|p| p.is_one()), || {
                    format!("total probability, q = {q}, N = {n}, {:?}", family.balls())
                });
            }
        }
    }
    out.set("covering_families", json!(families));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 8);
    for i in 0..20 {
        let q = [2u64, 3][i % 2];
        let event = random_event(&mut rng, q, 3, 2, 5);
        let depth = rng.random_range(0..=3);
        let outer = Ball::new(q, (0..depth).map(|_| rng.random_range(0..q)).collect()).expect("digits below q");
        out.check_result(push_down_check(&event, &outer), || format!("push-down of {} into {outer}", event_text(&event)));
    }
    out
}

fn ensemble_consistency(opts: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 9);
    for i in 0..10 {
        let q = [2u64, 3][i % 2];
        let event = random_event(&mut rng, q, 3, 2, 4);
        out.check_result(ensemble_consistency_check(q, &event, 6), || event_text(&event));
    }
    out
}

/// The generating series of six particles in `1 + m` and four in
/// `2 + 3*5 + 25 o`, assembled by hand: three free cosets, the fixed coset
/// with six particles, and the coset of 2 holding the small ball.
pub fn five_adic_closed_form(dmax: usize) -> Result<StarSeries> {
    let q = 5;
    let whole = gc_z_whole(q, dmax)?;
    let free = whole.overline(1).substitute_t_scale(&rational(1, 5)).pow(3);
    let six = StarSeries::monomial(
        q,
        dmax,
        canonical_z(q, 6)?.mul_u_pow(15).scale_by(&rational(1, 720 * 5i64.pow(6))),
        6,
    );
    let four = StarSeries::monomial(
        q,
        dmax,
        canonical_z(q, 4)?.mul_u_pow(12).scale_by(&rational(1, 24 * 25i64.pow(4))),
        4,
    );
    let small = whole.overline(1).substitute_t_scale(&rational(1, 25)).overline(1);
    let coset_two = four.star_mul(&small.star_pow(4, 1), 1)?;
    free.mul(&six)?.mul(&coset_two)
}

fn five_adic_example(_: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    let dmax = 14;
    let r = (|| -> Result<bool> {
        let event = CylinderEvent::parse(5, "5:1:1=6,5:2:2.3=4")?;
        let gf = gc_cylinder_gf(5, &event, dmax)?;
        Ok(gf.series() == &five_adic_closed_form(dmax)?)
    })();
    out.check_result(r, || format!("series differ at dmax = {dmax}"));
    out.set("dmax", json!(dmax));
    out
}

type McCheck = Box<dyn Fn(u64) -> Result<Agreement>>;

/// Runs every check once. A single failure is re-run with a fresh seed; the
/// criterion fails on two or more failures or a failed re-run.
fn mc_policy(out: &mut Outcome, checks: Vec<(String, McCheck)>, seed: u64) {
    let mut failed = Vec::new();
    let mut max_z: f64 = 0.0;
    for (i, (name, check)) in checks.iter().enumerate() {
        out.checks += 1;
        match check(seed) {
            Ok(a) => {
                max_z = max_z.max(a.z_score.abs());
                if !a.passed {
                    failed.push((i, format!("{name}: z = {:.2}", a.z_score)));
                }
            }
            Err(e) => out.failures.push(format!("{name}: {e}")),
        }
    }
    out.set("max_abs_z", json!((max_z * 1000.0).round() / 1000.0));
    out.set("first_pass_failures", json!(failed.len()));
    match failed.len() {
        0 => {}
        1 => {
            let (i, first) = failed.remove(0);
            let (name, check) = &checks[i];
            match check(seed.wrapping_add(1)) {
                Ok(a) if a.passed => out.set("rerun", json!(format!("{first}; passed with a fresh seed"))),
                Ok(a) => out.failures.push(format!("{first}; again z = {:.2} with a fresh seed", a.z_score)),
                Err(e) => out.failures.push(format!("{name}: {e}")),
            }
        }
        _ => out.failures.extend(failed.into_iter().map(|(_, f)| f)),
    }
}

fn mc_config(opts: &SuiteOptions, seed: u64) -> McConfig {
    McConfig {
        precision: 30,
        samples: 100_000,
        seed,
        threads: opts.threads,
    }
}

fn monte_carlo(opts: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    let mut checks: Vec<(String, McCheck)> = Vec::new();
    let betas = [rational(1, 2), rational(1, 1), rational(2, 1)];
    for q in [2u64, 3, 5] {
        for beta in &betas {
            for n in 2..=4usize {
                let o = opts.clone();
                let beta = beta.clone();
                checks.push((
                    format!("Z, q = {q}, beta = {beta}, N = {n}"),
                    Box::new(move |seed| {
                        let u = u_from_beta(q, &beta).value;
                        let exact = rational_to_f64(&canonical_z(q, n)?.eval(&u)?);
                        let est = estimate_z(q, n, rational_to_f64(&beta), &mc_config(&o, seed))?;
                        Ok(agreement(exact, &est, 3.0))
                    }),
                ));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 11);
    for i in 0..10 {
        let q = [2u64, 3, 5][i % 3];
        let event = random_event(&mut rng, q, 2, 2, 3);
        let n = (event.total() + rng.random_range(0..=1)).max(1);
        let beta = betas[i % 3].clone();
        let o = opts.clone();
        checks.push((
            format!("event {}, q = {q}, beta = {beta}, N = {n}", event_text(&event)),
            Box::new(move |seed| {
                let u = u_from_beta(q, &beta).value;
                let exact = rational_to_f64(&prob_canonical(q, n, &event)?.eval(&u)?);
                let est = estimate_event_prob(q, n, rational_to_f64(&beta), &event, &mc_config(&o, seed))?;
                Ok(agreement(exact, &est, 3.0))
            }),
        ));
    }
    mc_policy(&mut out, checks, opts.seed);
    out
}

fn multi_component(opts: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    for q in [2u64, 3] {
        for charges in [vec![1u64, 2], vec![2, 3]] {
            let r = ChargeProfile::new(charges.clone()).and_then(|p| verify_multi_qpower(q, &p, 4));
            out.check_result(r, || format!("q-th power identity, q = {q}, charges {charges:?}"));
        }
        for (a, b) in [(1usize, 1usize), (2, 1), (2, 2), (3, 2)] {
            let r = (|| -> Result<bool> {
                let p = ChargeProfile::with_repeats(vec![1, 1])?;
                let z = multi_canonical_z(q, &p, &SpeciesCounts::new(&p, vec![a, b])?)?;
                Ok(z == canonical_z(q, a + b)?)
            })();
            out.check_result(r, || format!("unit charges ({a}, {b}), q = {q}"));
        }
        for charge in [2u64, 3] {
            for n in 0..=5usize {
                let r = (|| -> Result<bool> {
                    let p = ChargeProfile::new(vec![charge])?;
                    let z = multi_canonical_z(q, &p, &SpeciesCounts::new(&p, vec![n])?)?;
                    Ok(z == canonical_z(q, n)?.substitute_power((charge * charge) as usize))
                })();
                out.check_result(r, || format!("single charge {charge}, N = {n}, q = {q}"));
            }
        }
    }
    let mut checks: Vec<(String, McCheck)> = Vec::new();
    for q in [2u64, 3] {
        for charges in [vec![1u64, 2], vec![2, 3]] {
            for counts in [vec![1usize, 1], vec![2, 1]] {
                let o = opts.clone();
                let charges = charges.clone();
                checks.push((
                    format!("q = {q}, charges {charges:?}, counts {counts:?}"),
                    Box::new(move |seed| {
                        let p = ChargeProfile::new(charges.clone())?;
                        let c = SpeciesCounts::new(&p, counts.clone())?;
                        let exact = rational_to_f64(&multi_canonical_z(q, &p, &c)?.eval(&rational(1, q as i64))?);
                        let est = estimate_multi_z(q, &p, &c, 1.0, &mc_config(&o, seed))?;
                        Ok(agreement(exact, &est, 3.0))
                    }),
                ));
            }
        }
    }
    mc_policy(&mut out, checks, opts.seed ^ 12);
    out
}
