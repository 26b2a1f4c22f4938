//! Derivative-free search over r-interval configurations minimizing the
//! escape threshold delta*.
//!
//! Configurations are encoded by stick breaking: 2r positive increments,
//! normalized to sum 1, pin the last endpoint to 1 (delta* is invariant
//! under scaling, so nothing is lost). The simplex moves in log-increment
//! space; the objective is the float mirror of the exact engine, and every
//! float improvement is re-certified exactly before it is accepted.

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::profile::{delta_star, delta_star_f64};
use crate::rational::{format_rational, from_f64_exact, to_f64, Rational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Floor applied to increments when a simplex move underflows; the vector
/// is renormalized afterwards.
const INCREMENT_FLOOR: f64 = 1e-9;
/// Allowed disagreement between the float objective and its exact
/// re-certification before a precision incident is logged.
const CERTIFY_TOLERANCE: f64 = 1e-6;
/// Certified values below this floor indicate an implementation bug.
const THEOREM_FLOOR: f64 = 0.2629;

/// Stick-breaking encoding: `coords` holds the 2r normalized increments
/// `a_1, b_1 - a_1, ..., b_r - a_r` with `b_r = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub intervals: usize,
    pub coords: Vec<f64>,
}

impl ParamVector {
    pub fn from_coords(intervals: usize, coords: Vec<f64>) -> Result<Self> {
        if intervals == 0 || coords.len() != 2 * intervals {
            return Err(Error::DecodeFailed(format!(
                "need {} coordinates, got {}",
                2 * intervals,
                coords.len()
            )));
        }
        if coords.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::DecodeFailed(
                "coordinates must be finite and positive".into(),
            ));
        }
        let sum: f64 = coords.iter().sum();
        Ok(Self {
            intervals,
            coords: coords.iter().map(|x| x / sum).collect(),
        })
    }

    /// Encodes a configuration, normalizing it to last endpoint 1 first.
    pub fn encode(c: &Configuration) -> Self {
        let cn = c.normalized();
        let values = cn.endpoint_values();
        let coords: Vec<f64> = values
            .windows(2)
            .map(|pair| to_f64(&(&pair[1] - &pair[0])))
            .collect();
        Self {
            intervals: c.interval_count(),
            coords,
        }
    }

    /// Endpoint values 0 = v_0 < v_1 < ... < v_2r = 1 after repair.
    pub fn decode_endpoints(&self) -> Vec<f64> {
        let repaired: Vec<f64> = self.coords.iter().map(|x| x.max(INCREMENT_FLOOR)).collect();
        let total: f64 = repaired.iter().sum();
        let mut values = Vec::with_capacity(self.coords.len() + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for x in &repaired {
            acc += x / total;
            values.push(acc);
        }
        let last = values.len() - 1;
        values[last] = 1.0;
        values
    }

    /// Exact configuration whose endpoints are the decoded floats.
    pub fn decode_exact(&self) -> Result<Configuration> {
        let values = self.decode_endpoints();
        let mut pairs = Vec::with_capacity(self.intervals);
        for k in 0..self.intervals {
            let lo = from_f64_exact(values[2 * k + 1])?;
            let hi = from_f64_exact(values[2 * k + 2])?;
            pairs.push((lo, hi));
        }
        Configuration::make(pairs)
    }
}

/// Float evaluation of delta* on the decoded configuration, through the
/// same breakpoint sweep as the exact engine.
pub fn objective(v: &ParamVector) -> f64 {
    delta_star_f64(&v.decode_endpoints())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionIncident {
    pub restart: u32,
    pub iteration: u32,
    pub float_value: String,
    pub exact_value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub intervals: usize,
    pub restarts: u32,
    pub iters: u32,
    pub seed: u64,
    #[serde(skip)]
    pub init: Option<Configuration>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_params: ParamVector,
    pub best_configuration: Configuration,
    pub float_objective: f64,
    #[serde(with = "crate::io::rat_str")]
    pub exact_objective: Rational,
    pub exact_objective_dec: f64,
    /// Certified incumbent objective after each iteration of the winning
    /// restart; non-increasing.
    pub trace: Vec<f64>,
    pub winning_restart: u32,
    pub incidents: Vec<PrecisionIncident>,
    pub seed: u64,
    pub iters: u32,
    pub restarts: u32,
    pub evaluations: u64,
    /// Set when a certified value lands below the theorem floor 0.2629;
    /// that is a bug indicator, never a discovery.
    pub fatal: Option<String>,
}

struct Incumbent {
    exact: Rational,
    float: f64,
    params: ParamVector,
}

struct RestartOutcome {
    incumbent: Incumbent,
    trace: Vec<f64>,
    incidents: Vec<PrecisionIncident>,
    evaluations: u64,
    restart: u32,
}

/// Multi-start simplex descent. Each restart owns the RNG stream
/// `seed + restart index`; restarts run in parallel and merge
/// deterministically by (exact objective, lexicographic coordinates).
pub fn search(opts: &SearchOptions) -> Result<SearchResult> {
    if opts.intervals == 0 {
        return Err(Error::ParamRange("need at least one interval".into()));
    }
    if opts.restarts == 0 {
        return Err(Error::ParamRange("need at least one restart".into()));
    }
    if let Some(init) = &opts.init {
        if init.interval_count() != opts.intervals {
            return Err(Error::ParamRange(format!(
                "init has {} intervals, search asked for {}",
                init.interval_count(),
                opts.intervals
            )));
        }
    }
    let outcomes: Vec<Result<RestartOutcome>> = (0..opts.restarts)
        .into_par_iter()
        .map(|ri| run_restart(opts, ri))
        .collect();
    let mut best: Option<RestartOutcome> = None;
    let mut incidents = Vec::new();
    let mut evaluations = 0u64;
    for outcome in outcomes {
        let outcome = outcome?;
        evaluations += outcome.evaluations;
        incidents.extend(outcome.incidents.iter().cloned());
        best = Some(match best {
            None => outcome,
            Some(cur) => {
                let replace = match outcome.incumbent.exact.cmp(&cur.incumbent.exact) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => lex_less(
                        &outcome.incumbent.params.coords,
                        &cur.incumbent.params.coords,
                    ),
                };
                if replace {
                    outcome
                } else {
                    cur
                }
            }
        });
    }
    let best = best.expect("at least one restart");
    let exact = best.incumbent.exact.clone();
    let fatal = if to_f64(&exact) < THEOREM_FLOOR {
        Some(format!(
            "certified objective {} under the theorem floor {THEOREM_FLOOR}",
            format_rational(&exact)
        ))
    } else {
        None
    };
    Ok(SearchResult {
        best_configuration: best.incumbent.params.decode_exact()?,
        best_params: best.incumbent.params,
        float_objective: best.incumbent.float,
        exact_objective_dec: to_f64(&exact),
        exact_objective: exact,
        trace: best.trace,
        winning_restart: best.restart,
        incidents,
        seed: opts.seed,
        iters: opts.iters,
        restarts: opts.restarts,
        evaluations,
        fatal,
    })
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

fn params_from_logs(intervals: usize, logs: &[f64]) -> ParamVector {
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let coords: Vec<f64> = logs.iter().map(|x| (x - max).exp()).collect();
    let sum: f64 = coords.iter().sum();
    ParamVector {
        intervals,
        coords: coords.iter().map(|x| x / sum).collect(),
    }
}

fn run_restart(opts: &SearchOptions, restart: u32) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(restart as u64));
    let dim = 2 * opts.intervals;
    let mut evaluations = 0u64;
    let mut incidents = Vec::new();

    let x0: Vec<f64> = match &opts.init {
        Some(init) => {
            let base = ParamVector::encode(init);
            let mut logs: Vec<f64> = base.coords.iter().map(|x| x.ln()).collect();
            if restart > 0 {
                for l in logs.iter_mut() {
                    *l += rng.random_range(-0.02..0.02);
                }
            }
            logs
        }
        None => (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect(),
    };

    let eval = |logs: &[f64], evals: &mut u64| -> (ParamVector, f64) {
        let pv = params_from_logs(opts.intervals, logs);
        *evals += 1;
        let f = objective(&pv);
        (pv, f)
    };

    // initial simplex: orthogonal steps in log space
    let step = 0.05;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    {
        let (_, f0) = eval(&x0, &mut evaluations);
        simplex.push((x0.clone(), f0));
        for i in 0..dim {
            let mut xi = x0.clone();
            xi[i] += step;
            let (_, fi) = eval(&xi, &mut evaluations);
            simplex.push((xi, fi));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

    // certify the starting point so the incumbent is exact from the start
    let mut incumbent = {
        let (pv, f) = eval(&simplex[0].0, &mut evaluations);
        let exact = delta_star(&pv.decode_exact()?);
        record_incident(&mut incidents, restart, 0, f, &exact);
        Incumbent {
            exact,
            float: f,
            params: pv,
        }
    };

    let mut trace = Vec::with_capacity(opts.iters as usize);
    let (alpha, gamma, beta, sigma) = (1.0, 2.0, 0.5, 0.5);
    for iteration in 0..opts.iters {
        let n = simplex.len() - 1;
        let worst = simplex[n].clone();
        let second_worst = simplex[n - 1].1;
        let best_f = simplex[0].1;
        let mut centroid = vec![0.0; dim];
        for (x, _) in simplex.iter().take(n) {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let shift = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| (c + t * (c - w)).clamp(-30.0, 30.0))
                .collect()
        };
        let xr = shift(alpha);
        let (_, fr) = eval(&xr, &mut evaluations);
        let replacement = if fr < best_f {
            let xe = shift(gamma);
            let (_, fe) = eval(&xe, &mut evaluations);
            if fe < fr {
                (xe, fe)
            } else {
                (xr, fr)
            }
        } else if fr < second_worst {
            (xr, fr)
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = shift(beta);
                let (_, fc) = eval(&xc, &mut evaluations);
                (xc, fc)
            } else {
                let xc = shift(-beta);
                let (_, fc) = eval(&xc, &mut evaluations);
                (xc, fc)
            };
            if fc < worst.1.min(fr) {
                (xc, fc)
            } else {
                // shrink toward the best point
                let best_x = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (x, b) in entry.0.iter_mut().zip(&best_x) {
                        *x = b + sigma * (*x - b);
                    }
                    let (_, f) = eval(&entry.0, &mut evaluations);
                    entry.1 = f;
                }
                simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
                trace.push(to_f64(&incumbent.exact));
                continue;
            }
        };
        simplex[n] = replacement;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

        // re-certify any float improvement over the certified incumbent
        if simplex[0].1 < incumbent.float {
            let pv = params_from_logs(opts.intervals, &simplex[0].0);
            let f = simplex[0].1;
            let exact = delta_star(&pv.decode_exact()?);
            record_incident(&mut incidents, restart, iteration + 1, f, &exact);
            if exact < incumbent.exact {
                incumbent = Incumbent {
                    exact,
                    float: f,
                    params: pv,
                };
            }
        }
        trace.push(to_f64(&incumbent.exact));
    }

    Ok(RestartOutcome {
        incumbent,
        trace,
        incidents,
        evaluations,
        restart,
    })
}

fn record_incident(
    incidents: &mut Vec<PrecisionIncident>,
    restart: u32,
    iteration: u32,
    float_value: f64,
    exact: &Rational,
) {
    if (float_value - to_f64(exact)).abs() > CERTIFY_TOLERANCE {
        incidents.push(PrecisionIncident {
            restart,
            iteration,
            float_value: format!("{float_value}"),
            exact_value: format_rational(exact),
        });
    }
}

/// Axis and ring samples of `min(1/m - s, s m, 1/s - 1)` around a center:
/// the equalizing parameters maximize this min, so every perturbation
/// should strictly lower it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodAudit {
    pub center_m: f64,
    pub center_s: f64,
    pub center_values: (f64, f64, f64),
    pub center_min: f64,
    pub best_perturbed_min: f64,
    pub center_is_strict_max: bool,
    pub axis_checks: Vec<AxisCheck>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisCheck {
    pub label: String,
    pub min_value: f64,
    pub decreased: bool,
}

fn triple_min(m: f64, s: f64) -> f64 {
    let a = 1.0 / m - s;
    let b = s * m;
    let c = 1.0 / s - 1.0;
    a.min(b).min(c)
}

pub fn neighborhood_audit(m: &Rational, s: &Rational, radius: f64) -> NeighborhoodAudit {
    let mf = to_f64(m);
    let sf = to_f64(s);
    let center_values = (1.0 / mf - sf, sf * mf, 1.0 / sf - 1.0);
    let center_min = triple_min(mf, sf);
    let mut best = f64::NEG_INFINITY;
    let mut samples = 0usize;
    for ring in [radius, radius / 2.0] {
        for k in 0..16 {
            let angle = std::f64::consts::TAU * (k as f64) / 16.0;
            let pm = mf + ring * angle.cos();
            let ps = sf + ring * angle.sin();
            if pm <= 0.0 || pm >= 1.0 || ps <= 0.0 || ps >= 1.0 {
                continue;
            }
            samples += 1;
            best = best.max(triple_min(pm, ps));
        }
    }
    let mut axis_checks = Vec::new();
    for (label, dm, ds) in [
        ("m + 0.01", 0.01, 0.0),
        ("m - 0.01", -0.01, 0.0),
        ("s + 0.01", 0.0, 0.01),
        ("s - 0.01", 0.0, -0.01),
    ] {
        let v = triple_min(mf + dm, sf + ds);
        axis_checks.push(AxisCheck {
            label: label.to_string(),
            min_value: v,
            decreased: v < center_min,
        });
    }
    NeighborhoodAudit {
        center_m: mf,
        center_s: sf,
        center_values,
        center_min,
        best_perturbed_min: best,
        center_is_strict_max: best < center_min,
        axis_checks,
        samples,
    }
}
