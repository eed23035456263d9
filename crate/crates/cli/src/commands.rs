//! One handler per subcommand; each returns the `result` block of the
//! report.

use serde::Serialize;
use serde_json::Value;
use ultragas::canonical::{canonical_z, energy_distribution};
use ultragas::cylinderprob::{gc_cylinder_prob, prob_canonical};
use ultragas::exactnum::{parse_rational, u_from_beta, UValue};
use ultragas::grandcanonical::{
    eval_series_at, gc_z, gc_z_values_at, occupancy_pmf, poisson_tail_bound, verify_functional_equation, verify_gcz,
    verify_thm4,
};
use ultragas::mcoracle::{agreement, cap_bias_bound, estimate_event_prob, estimate_z, McConfig, RNG_NAME};
use ultragas::multicomponent::multi_canonical_z;
use ultragas::{BigRational, ChargeProfile, CylinderEvent, Error, RationalFunction, Result, SpeciesCounts};

use crate::args::{CylprobArgs, GcCheck, McVerifyArgs, ZcanArgs, ZgcArgs, ZmultiArgs};
use crate::report::Number;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn beta_u(q: u64, beta: &str) -> Result<(BigRational, UValue)> {
    let b = parse_rational(beta)?;
    Ok((b.clone(), u_from_beta(q, &b)))
}

/// `u0` for ensembles whose truncation bounds need `u0` in `[0, 1]`.
fn nonnegative_beta_u(q: u64, beta: &str) -> Result<UValue> {
    let (b, u) = beta_u(q, beta)?;
    if b < BigRational::from_integer(0.into()) {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be non-negative here")));
    }
    Ok(u)
}

#[derive(Serialize)]
struct Evaluation {
    beta: String,
    u: Number,
    value: Number,
}

fn evaluate(f: &RationalFunction, q: u64, beta: &str) -> Result<Evaluation> {
    let (_, u) = beta_u(q, beta)?;
    let v = f.eval(&u.value)?;
    Ok(Evaluation {
        beta: beta.to_string(),
        u: Number::new(&u.value, u.exact),
        value: Number::new(&v, u.exact),
    })
}

#[derive(Serialize)]
struct Degrees {
    num: Option<usize>,
    den: usize,
}

#[derive(Serialize)]
struct NumberList {
    rational: Option<Vec<String>>,
    float: Vec<f64>,
}

impl NumberList {
    fn new(xs: &[BigRational], exact: bool) -> Self {
        let numbers: Vec<Number> = xs.iter().map(|x| Number::new(x, exact)).collect();
        NumberList {
            rational: exact.then(|| numbers.iter().map(|n| n.rational.clone().unwrap()).collect()),
            float: numbers.iter().map(|n| n.float).collect(),
        }
    }
}

#[derive(Serialize)]
struct FunctionReport {
    z: RationalFunction,
    text: String,
    degrees: Degrees,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluation: Option<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_distribution: Option<NumberList>,
}

fn function_report(z: RationalFunction, q: u64, beta: Option<&str>) -> Result<FunctionReport> {
    let (num, den) = z.degrees();
    let evaluation = beta.map(|b| evaluate(&z, q, b)).transpose()?;
    Ok(FunctionReport {
        text: z.to_string(),
        degrees: Degrees { num, den },
        z,
        evaluation,
        energy_distribution: None,
    })
}

pub fn zcan(a: &ZcanArgs) -> Result<Value> {
    let z = canonical_z(a.q, a.n)?;
    let mut report = function_report(z, a.q, a.beta.as_deref())?;
    if let Some(k) = a.dist {
        report.energy_distribution = Some(NumberList::new(&energy_distribution(a.q, a.n, k)?, true));
    }
    Ok(to_value(&report))
}

#[derive(Serialize)]
struct CheckReport {
    check: GcCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<usize>,
    holds: bool,
}

#[derive(Serialize)]
struct SeriesReport {
    radius_exp: usize,
    coefficients: Vec<RationalFunction>,
}

#[derive(Serialize)]
struct GcEvaluation {
    t: Number,
    beta: String,
    u: Number,
    value: Number,
    /// Bound on the truncation error of `value`.
    error_bound: Number,
}

#[derive(Serialize)]
struct PmfReport {
    nmax: usize,
    normalization: Number,
    probabilities: NumberList,
    error_bound: Number,
}

#[derive(Serialize)]
struct ZgcReport {
    q: u64,
    dmax: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<SeriesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluation: Option<GcEvaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pmf: Option<PmfReport>,
}

pub fn zgc(a: &ZgcArgs) -> Result<Value> {
    let mut report = ZgcReport {
        q: a.q,
        dmax: a.dmax,
        series: None,
        check: None,
        holds: None,
        evaluation: None,
        pmf: None,
    };
    if let Some(check) = a.check {
        let holds = match check {
            GcCheck::Gcz => verify_gcz(a.q, a.dmax)?,
            GcCheck::Funceq => verify_functional_equation(a.q, a.dmax)?,
            GcCheck::Thm4 => verify_thm4(a.q, a.ell, a.dmax)?,
        };
        report.check = Some(CheckReport {
            check,
            ell: (check == GcCheck::Thm4).then_some(a.ell),
            holds,
        });
        report.holds = Some(holds);
    }
    if let Some(t) = &a.t {
        let beta = a.beta.as_deref().expect("clap requires beta with t");
        let t0 = parse_rational(t)?;
        if t0 < BigRational::from_integer(0.into()) {
            return Err(Error::InvalidArgument(format!("fugacity t = {t} must be non-negative")));
        }
        let u = nonnegative_beta_u(a.q, beta)?;
        let coeffs = scale_to_level(a.q, a.ell, &u.value, gc_z_values_at(a.q, &u.value, a.dmax)?);
        let value = eval_series_at(&coeffs, &t0);
        let bound = poisson_tail_bound(&t0, a.dmax).ok_or_else(|| {
            Error::InvalidArgument(format!("no tail bound for t = {t} at dmax = {}; increase dmax", a.dmax))
        })?;
        report.evaluation = Some(GcEvaluation {
            t: Number::exact(&t0),
            beta: beta.to_string(),
            u: Number::new(&u.value, u.exact),
            value: Number::new(&value, u.exact),
            error_bound: Number::exact(&bound),
        });
        if let Some(nmax) = a.pmf {
            let pmf = occupancy_pmf(a.q, &t0, &u.value, nmax)?;
            report.pmf = Some(PmfReport {
                nmax,
                normalization: Number::new(&pmf.normalization, u.exact),
                probabilities: NumberList::new(&pmf.probabilities, u.exact),
                error_bound: Number::exact(&pmf.error_bound),
            });
        }
    }
    if a.check.is_none() && a.t.is_none() {
        let s = gc_z(a.q, a.ell, a.dmax)?;
        report.series = Some(SeriesReport {
            radius_exp: a.ell,
            coefficients: s.series().coeffs().to_vec(),
        });
    }
    Ok(to_value(&report))
}

/// Coefficients for the ball `pi^l o` from those of `o`:
/// multiply coefficient `N` by `u^(l C(N,2)) q^(-l N)`.
fn scale_to_level(q: u64, level: usize, u0: &BigRational, coeffs: Vec<BigRational>) -> Vec<BigRational> {
    if level == 0 {
        return coeffs;
    }
    let inv_q = BigRational::new(1.into(), q.into());
    coeffs
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            let pairs = n * n.saturating_sub(1) / 2;
            c * pow(u0, level * pairs) * pow(&inv_q, level * n)
        })
        .collect()
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::from_integer(1.into()), |acc, _| acc * x)
}

pub fn zmulti(a: &ZmultiArgs) -> Result<Value> {
    let profile = ChargeProfile::new(a.charges.clone())?;
    let counts = SpeciesCounts::new(&profile, a.counts.clone())?;
    let z = multi_canonical_z(a.q, &profile, &counts)?;
    Ok(to_value(&function_report(z, a.q, a.beta.as_deref())?))
}

#[derive(Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum CylReport {
    Canonical {
        n: usize,
        probability: RationalFunction,
        text: String,
        beta: String,
        u: Number,
        value: Number,
        error_bound: Number,
    },
    GrandCanonical {
        t: Number,
        beta: String,
        u: Number,
        value: Number,
        error_bound: Number,
        dmax: usize,
    },
}

pub fn cylprob(a: &CylprobArgs) -> Result<Value> {
    let event = CylinderEvent::parse(a.q, &a.balls)?;
    let report = if let Some(n) = a.n {
        let p = prob_canonical(a.q, n, &event)?;
        let (_, u) = beta_u(a.q, &a.beta)?;
        let v = p.eval(&u.value)?;
        CylReport::Canonical {
            n,
            text: p.to_string(),
            probability: p,
            beta: a.beta.clone(),
            u: Number::new(&u.value, u.exact),
            value: Number::new(&v, u.exact),
            error_bound: Number::exact(&BigRational::from_integer(0.into())),
        }
    } else {
        let t = a.t.as_deref().expect("clap requires n or t");
        let t0 = parse_rational(t)?;
        let tol = parse_rational(&a.tol)?;
        let u = nonnegative_beta_u(a.q, &a.beta)?;
        let p = gc_cylinder_prob(a.q, &event, &t0, &u.value, &tol)?;
        CylReport::GrandCanonical {
            t: Number::exact(&t0),
            beta: a.beta.clone(),
            u: Number::new(&u.value, u.exact),
            value: Number::new(&p.value, u.exact),
            error_bound: Number::exact(&p.error_bound),
            dmax: p.dmax,
        }
    };
    Ok(to_value(&report))
}

#[derive(Serialize)]
struct McReport {
    target: &'static str,
    exact: Number,
    estimate: f64,
    std_error: f64,
    z_score: f64,
    passed: bool,
    sigmas: f64,
    capped: u64,
    cap_bias_bound: f64,
    n_samples: u64,
    rng: &'static str,
}

pub fn mc_verify(a: &McVerifyArgs, threads: Option<usize>) -> Result<Value> {
    let u = nonnegative_beta_u(a.q, &a.beta)?;
    let beta_f = ultragas::exactnum::rational_to_f64(&parse_rational(&a.beta)?);
    let cfg = McConfig {
        precision: a.precision,
        samples: a.samples,
        seed: a.seed,
        threads,
    };
    let (target, exact, est) = match &a.balls {
        Some(text) => {
            let event = CylinderEvent::parse(a.q, text)?;
            let exact = prob_canonical(a.q, a.n, &event)?.eval(&u.value)?;
            ("event_probability", exact, estimate_event_prob(a.q, a.n, beta_f, &event, &cfg)?)
        }
        None => {
            let exact = canonical_z(a.q, a.n)?.eval(&u.value)?;
            ("partition_function", exact, estimate_z(a.q, a.n, beta_f, &cfg)?)
        }
    };
    let exact = Number::new(&exact, u.exact);
    let agree = agreement(exact.float, &est, a.sigmas);
    Ok(to_value(&McReport {
        target,
        estimate: agree.estimate,
        std_error: agree.std_error,
        z_score: agree.z_score,
        passed: agree.passed,
        sigmas: a.sigmas,
        capped: est.capped_valuations,
        cap_bias_bound: cap_bias_bound(a.q, beta_f, a.precision, &est),
        n_samples: est.n_samples,
        rng: RNG_NAME,
        exact,
    }))
}
