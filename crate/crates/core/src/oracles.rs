//! Mechanical checkers for the supporting lemmas: the overlapping-cover
//! density bound, the full proof inspection of a counterexample
//! configuration, the escape-radius dichotomy probe with its executable
//! truncation descent, and the final inequality chain.
//!
//! Checks come in two kinds. ASSERTED checks hold for every inspected
//! configuration given the definitions alone; a failure is a tool failure.
//! DIAGNOSTIC checks are only guaranteed for minimal counterexamples,
//! which cannot be instantiated, so their outcomes are data.

use crate::config::{Configuration, Endpoint, EndpointKind, Interval};
use crate::error::{Error, Result};
use crate::iset::{self, OpenUnion};
use crate::profile::{delta_star, is_counterexample, mu, omega_and_color, Color, ColoredEndpoint};
use crate::rational::{format_rational, rat, rat_int, to_f64, Rational};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A host interval, a covering family whose union is exactly the host, and
/// a measurable set B given as a finite union of intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSystem {
    pub host: Interval,
    pub cover: Vec<Interval>,
    pub b_set: Vec<Interval>,
}

impl CoverSystem {
    pub fn new(host: Interval, cover: Vec<Interval>, b_set: Vec<Interval>) -> Result<Self> {
        let union = iset::open_union(cover.clone());
        let exact = union.pieces.len() == 1 && union.pieces[0] == host && union.missing.is_empty();
        if !exact {
            return Err(Error::CoverNotExact(format!(
                "union has {} pieces and {} uncovered points",
                union.pieces.len(),
                union.missing.len()
            )));
        }
        Ok(Self {
            host,
            cover,
            b_set: iset::normalize(b_set, true),
        })
    }

    /// Reorders by left endpoint and drops intervals contained in the union
    /// of the rest, so no interval meets its next-but-one neighbor.
    pub fn canonicalize(&self) -> Vec<Interval> {
        canonicalize_cover(&self.cover)
    }
}

pub fn canonicalize_cover(cover: &[Interval]) -> Vec<Interval> {
    let mut v: Vec<Interval> = cover.to_vec();
    v.sort_by(|a, b| a.lo().cmp(b.lo()).then(b.hi().cmp(a.hi())));
    v.dedup();
    loop {
        let mut removed = false;
        for j in 0..v.len() {
            let rest: Vec<Interval> = v
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, iv)| iv.clone())
                .collect();
            if iset::open_union(rest).covers(&v[j]) {
                v.remove(j);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }
    v
}

/// Outcome of the overlapping-cover density bound: if every cover interval
/// holds B-density at least 1 - delta, the host holds at least
/// (1 - delta) / (1 + delta).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma1Report {
    #[serde(with = "crate::io::rat_str")]
    pub delta: Rational,
    #[serde(serialize_with = "crate::io::rat_vec::serialize")]
    #[serde(deserialize_with = "crate::io::rat_vec::deserialize")]
    pub per_interval_density: Vec<Rational>,
    #[serde(with = "crate::io::rat_str")]
    pub total_density: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub bound: Rational,
    pub holds: bool,
    pub cover_size: usize,
    pub canonical_size: usize,
}

pub fn lemma1_check(sys: &CoverSystem, delta: &Rational) -> Result<Lemma1Report> {
    if delta <= &Rational::zero() || delta >= &Rational::one() {
        return Err(Error::DeltaOutOfRange(format_rational(delta)));
    }
    let threshold = Rational::one() - delta;
    let mut per = Vec::with_capacity(sys.cover.len());
    for (index, iv) in sys.cover.iter().enumerate() {
        let density = iset::measure_in(&sys.b_set, iv) / iv.length();
        if density < threshold {
            return Err(Error::HypothesisViolated {
                index,
                density: format_rational(&density),
            });
        }
        per.push(density);
    }
    let total = iset::measure_in(&sys.b_set, &sys.host) / sys.host.length();
    let bound = (Rational::one() - delta) / (Rational::one() + delta);
    Ok(Lemma1Report {
        delta: delta.clone(),
        holds: total >= bound,
        total_density: total,
        bound,
        per_interval_density: per,
        cover_size: sys.cover.len(),
        canonical_size: sys.canonicalize().len(),
    })
}

/// The speculative strengthening of the cover bound to 1 / (1 + 2 delta).
/// Failures here are data, not bugs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Remark5Report {
    #[serde(with = "crate::io::rat_str")]
    pub total_density: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub speculative_bound: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub proven_bound: Rational,
    pub speculative_holds: bool,
}

pub fn remark5_experiment(sys: &CoverSystem, delta: &Rational) -> Result<Remark5Report> {
    let base = lemma1_check(sys, delta)?;
    let speculative = Rational::one() / (Rational::one() + rat_int(2) * delta);
    Ok(Remark5Report {
        speculative_holds: base.total_density >= speculative,
        total_density: base.total_density,
        speculative_bound: speculative,
        proven_bound: base.bound,
    })
}

/// Random cover system on (0,1) biased toward near-tight per-interval
/// densities: slack systems never stress the bound.
pub fn random_cover_system<R: Rng + ?Sized>(rng: &mut R, delta: &Rational) -> CoverSystem {
    const GRID: i64 = 1 << 12;
    let n = rng.random_range(2..=6usize);
    let mut cuts = std::collections::BTreeSet::new();
    while cuts.len() < n - 1 {
        cuts.insert(rng.random_range(1..GRID));
    }
    let mut ts = vec![Rational::zero()];
    ts.extend(cuts.iter().map(|&k| rat(k, GRID)));
    ts.push(Rational::one());

    // overlap widths at the internal cuts, below half the shorter side
    let mut widths = vec![Rational::zero()];
    for j in 1..n {
        let left = &ts[j] - &ts[j - 1];
        let right = &ts[j + 1] - &ts[j];
        let cap = if left < right { left } else { right };
        let u = rat(rng.random_range(1..=128), 512);
        widths.push(cap * u);
    }
    widths.push(Rational::zero());

    let mut cover = Vec::with_capacity(n);
    for j in 1..=n {
        let lo = if j == 1 {
            Rational::zero()
        } else {
            &ts[j - 1] - &widths[j - 1]
        };
        let hi = if j == n {
            Rational::one()
        } else {
            &ts[j] + &widths[j]
        };
        cover.push(Interval::new_unchecked(lo, hi));
    }

    // carve gaps out of B = (0,1) while respecting every covering
    // interval's density budget, taking most of the allowance each time
    let mut edges: Vec<Rational> = Vec::new();
    for iv in &cover {
        edges.push(iv.lo().clone());
        edges.push(iv.hi().clone());
    }
    edges.sort();
    edges.dedup();
    let mut slack: Vec<Rational> = cover.iter().map(|iv| delta * iv.length()).collect();
    let mut removals: Vec<Interval> = Vec::new();
    for seg in edges.windows(2) {
        let (lo, hi) = (&seg[0], &seg[1]);
        if lo >= hi {
            continue;
        }
        let covering: Vec<usize> = cover
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.lo() <= lo && hi <= iv.hi())
            .map(|(j, _)| j)
            .collect();
        if covering.is_empty() {
            continue;
        }
        let mut allow = (hi - lo).clone();
        for &j in &covering {
            if slack[j] < allow {
                allow = slack[j].clone();
            }
        }
        if allow <= Rational::zero() {
            continue;
        }
        let u = rat(rng.random_range(224..=256), 256);
        let take = allow * u;
        if take.is_zero() {
            continue;
        }
        let mid = (lo + hi) / rat_int(2);
        let half = &take / rat_int(2);
        removals.push(Interval::new_unchecked(&mid - &half, mid + half));
        for &j in &covering {
            slack[j] -= &take;
        }
    }
    let host = Interval::new_unchecked(Rational::zero(), Rational::one());
    let b = iset::subtract(std::slice::from_ref(&host), &removals);
    CoverSystem::new(host, cover, b).expect("generator produces exact covers")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckLabel {
    Asserted,
    Diagnostic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InspectionCheck {
    pub name: String,
    pub label: CheckLabel,
    /// `None` when the check is not applicable (partial inspection).
    pub holds: Option<bool>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub note: Option<String>,
}

/// Everything the counterexample machinery computes for one configuration
/// at one delta, normalized so that the last endpoint is 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofInspection {
    #[serde(with = "crate::io::rat_str")]
    pub delta: Rational,
    pub delta_dec: f64,
    /// Scale applied to normalize the input to last endpoint 1.
    #[serde(with = "crate::io::rat_str")]
    pub scale: Rational,
    pub configuration: Configuration,
    #[serde(with = "crate::io::rat_str")]
    pub delta_star: Rational,
    pub delta_star_dec: f64,
    /// lambda(C ∩ (0,1)).
    #[serde(with = "crate::io::rat_str")]
    pub rho: Rational,
    pub rho_dec: f64,
    #[serde(with = "crate::io::rat_str_opt")]
    pub v_black: Option<Rational>,
    #[serde(with = "crate::io::rat_str_opt")]
    pub v_white: Option<Rational>,
    pub central: Option<Interval>,
    #[serde(with = "crate::io::rat_str_opt")]
    pub central_length: Option<Rational>,
    pub colored: Vec<ColoredEndpoint>,
    /// Endpoints strictly inside the central interval.
    pub interior_endpoints: Vec<Endpoint>,
    pub mu_map: Vec<MuEntry>,
    pub phi_black: Vec<Interval>,
    pub phi_white: Vec<Interval>,
    pub checks: Vec<InspectionCheck>,
    pub partial_reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuEntry {
    pub endpoint: Endpoint,
    pub color: Color,
    #[serde(with = "crate::io::rat_str")]
    pub mu: Rational,
}

impl ProofInspection {
    pub fn asserted_all_pass(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.label == CheckLabel::Asserted)
            .all(|c| c.holds != Some(false))
    }

    pub fn check(&self, name: &str) -> Option<&InspectionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(
    name: &str,
    label: CheckLabel,
    holds: bool,
    lhs: &Rational,
    rhs: &Rational,
    note: Option<String>,
) -> InspectionCheck {
    InspectionCheck {
        name: name.to_string(),
        label,
        holds: Some(holds),
        lhs: Some(format_rational(lhs)),
        rhs: Some(format_rational(rhs)),
        note,
    }
}

fn skipped(name: &str, label: CheckLabel, why: &str) -> InspectionCheck {
    InspectionCheck {
        name: name.to_string(),
        label,
        holds: None,
        lhs: None,
        rhs: None,
        note: Some(why.to_string()),
    }
}

/// Runs the whole machinery on a counterexample configuration.
///
/// Requires `delta > delta*(C)`; the input is normalized internally so its
/// last endpoint is 1 (the scale is recorded). When one of the two pivotal
/// endpoints is undefined the inspection is partial: the dependent checks
/// are reported as skipped with the reason.
pub fn proof_inspect(c: &Configuration, delta: &Rational) -> Result<ProofInspection> {
    if delta <= &Rational::zero() || delta >= &rat(1, 2) {
        return Err(Error::DeltaOutOfRange(format_rational(delta)));
    }
    let scale = c.last_endpoint().recip();
    let cn = c.normalized();
    let ds = delta_star(&cn);
    if delta <= &ds {
        return Err(Error::NotACounterexample {
            delta: format_rational(delta),
            delta_star: format_rational(&ds),
        });
    }
    let one = Rational::one();
    let half = rat(1, 2);
    let unit = Interval::new_unchecked(Rational::zero(), one.clone());
    let rho = cn.measure_in(&unit);

    let mut colored = Vec::new();
    for p in cn.endpoints() {
        let entry = omega_and_color(&cn, &p, delta)?.ok_or_else(|| {
            Error::Internal(format!(
                "endpoint {} of a counterexample must escape",
                format_rational(&p.value)
            ))
        })?;
        colored.push(entry);
    }

    let mut checks = Vec::new();

    let first = &colored[0];
    let last = colored.last().expect("nonempty");
    checks.push(InspectionCheck {
        name: "colors_of_extremes".into(),
        label: CheckLabel::Asserted,
        holds: Some(first.color == Color::Black && last.color == Color::White),
        lhs: Some(format!("0 is {:?}", first.color)),
        rhs: Some(format!("{} is {:?}", last.endpoint, last.color)),
        note: None,
    });

    // pivotal endpoints: the last black below 1/2 whose window reaches the
    // right end, and the first white above 1/2 whose window reaches 0
    let v_black = colored
        .iter()
        .filter(|ce| {
            ce.color == Color::Black
                && ce.endpoint.value <= half
                && ce.omega >= &one - &ce.endpoint.value
        })
        .map(|ce| ce.endpoint.value.clone())
        .max();
    let v_white = colored
        .iter()
        .filter(|ce| {
            ce.color == Color::White && ce.endpoint.value >= half && ce.omega >= ce.endpoint.value
        })
        .map(|ce| ce.endpoint.value.clone())
        .min();

    match &v_black {
        Some(vb) => {
            let lhs = (&one - &rho) / (rat_int(2) * (&one - vb));
            checks.push(check(
                "lemma3_black",
                CheckLabel::Asserted,
                &lhs <= delta,
                &lhs,
                delta,
                None,
            ));
        }
        None => checks.push(skipped(
            "lemma3_black",
            CheckLabel::Asserted,
            "no black endpoint <= 1/2 has omega >= 1 - v",
        )),
    }
    match &v_white {
        Some(vw) => {
            let lhs = &rho / (rat_int(2) * vw);
            checks.push(check(
                "lemma3_white",
                CheckLabel::Asserted,
                &lhs <= delta,
                &lhs,
                delta,
                None,
            ));
        }
        None => checks.push(skipped(
            "lemma3_white",
            CheckLabel::Asserted,
            "no white endpoint >= 1/2 has omega >= v",
        )),
    }

    // escape-radius dichotomy, diagnostic: only minimality forces it
    {
        let mut violations = Vec::new();
        for ce in &colored {
            let v = &ce.endpoint.value;
            let ok = match ce.color {
                Color::Black if v <= &half => ce.omega < *v || ce.omega >= &one - v,
                Color::White if v >= &half => ce.omega < &one - v || ce.omega >= *v,
                _ => true,
            };
            if !ok {
                violations.push(format_rational(v));
            }
        }
        checks.push(InspectionCheck {
            name: "escape_radius_dichotomy".into(),
            label: CheckLabel::Diagnostic,
            holds: Some(violations.is_empty()),
            lhs: Some(format!("{} violations", violations.len())),
            rhs: Some("0".into()),
            note: if violations.is_empty() {
                None
            } else {
                Some(format!("violated at {}", violations.join(", ")))
            },
        });
    }

    let mut partial_reason = None;
    let (central, central_length) = match (&v_black, &v_white) {
        (Some(vb), Some(vw)) => {
            let iv = Interval::new_unchecked(vb.clone(), vw.clone());
            let len = iv.length();
            (Some(iv), Some(len))
        }
        _ => {
            partial_reason = Some(
                "pivotal endpoint undefined; central interval and its checks skipped".to_string(),
            );
            (None, None)
        }
    };

    let mut interior_endpoints = Vec::new();
    let mut mu_map = Vec::new();
    let mut phi_black = Vec::new();
    let mut phi_white = Vec::new();

    if let Some(central_iv) = &central {
        for ce in &colored {
            if central_iv.contains(&ce.endpoint.value) {
                interior_endpoints.push(ce.endpoint.clone());
                let radius = mu(&cn, &ce.endpoint, ce.color)?;
                mu_map.push(MuEntry {
                    endpoint: ce.endpoint.clone(),
                    color: ce.color,
                    mu: radius,
                });
            }
        }

        // windows inside (0,1)
        {
            let mut all_inside = true;
            let mut worst = String::new();
            for entry in &mu_map {
                let lo = &entry.endpoint.value - &entry.mu;
                let hi = &entry.endpoint.value + &entry.mu;
                if lo < Rational::zero() || hi > one {
                    all_inside = false;
                    worst = format!(
                        "window ({}, {}) at {}",
                        format_rational(&lo),
                        format_rational(&hi),
                        entry.endpoint
                    );
                    break;
                }
            }
            checks.push(InspectionCheck {
                name: "mu_windows_inside_unit".into(),
                label: CheckLabel::Asserted,
                holds: Some(all_inside),
                lhs: Some(format!("{} windows", mu_map.len())),
                rhs: Some("(0, 1)".into()),
                note: if all_inside { None } else { Some(worst) },
            });
        }

        // Phi sets: mu-windows of interior endpoints, plus the intervals
        // (black) or gaps (white) those windows touch
        let windows_of = |color: Color| -> Vec<Interval> {
            mu_map
                .iter()
                .filter(|e| e.color == color)
                .map(|e| {
                    Interval::new_unchecked(&e.endpoint.value - &e.mu, &e.endpoint.value + &e.mu)
                })
                .collect()
        };
        let black_windows = windows_of(Color::Black);
        let white_windows = windows_of(Color::White);
        let mut black_parts = black_windows.clone();
        for iv in cn.intervals() {
            if black_windows.iter().any(|w| w.overlap(iv).is_positive()) {
                black_parts.push(iv.clone());
            }
        }
        let mut white_parts = white_windows.clone();
        for gap in cn.gaps() {
            if white_windows.iter().any(|w| w.overlap(&gap).is_positive()) {
                white_parts.push(gap.clone());
            }
        }
        let black_union = iset::open_union(black_parts);
        let white_union = iset::open_union(white_parts);
        phi_black = black_union.pieces.clone();
        phi_white = white_union.pieces.clone();

        checks.push(phi_form_check(&cn, &black_union, &white_union));
        checks.push(icircin_check(central_iv, &black_union, &white_union));
        checks.push(mainlemma2_check(&phi_black, &phi_white));
        checks.push(corollary_check(central_iv, &phi_black, &phi_white));

        // density mass split, central length floor, mass ceiling
        let bound = (&one - delta) / (&one + delta);
        let len = central_length.as_ref().expect("set with central");
        let lower = &bound * len;
        let upper = (&one - &bound) * len;
        checks.push(check(
            "density_mass_split",
            CheckLabel::Diagnostic,
            rho >= lower || rho <= upper,
            &rho,
            &lower,
            Some(format!(
                "needs rho >= {} or rho <= {}",
                format_rational(&lower),
                format_rational(&upper)
            )),
        ));
        let floor = (rat_int(2) * delta).recip() - &one;
        checks.push(check(
            "central_length_floor",
            CheckLabel::Diagnostic,
            len >= &floor,
            len,
            &floor,
            None,
        ));
        let ceil = rat_int(2) * delta;
        checks.push(check(
            "mass_ceiling",
            CheckLabel::Diagnostic,
            rho <= ceil,
            &rho,
            &ceil,
            None,
        ));
    } else {
        for name in [
            "mu_windows_inside_unit",
            "phi_component_form",
            "central_covered_by_phi",
            "phi_components_nested_or_disjoint",
            "central_in_single_component",
            "density_mass_split",
            "central_length_floor",
            "mass_ceiling",
        ] {
            let label = match name {
                "mu_windows_inside_unit" | "phi_component_form" | "central_covered_by_phi" => {
                    CheckLabel::Asserted
                }
                _ => CheckLabel::Diagnostic,
            };
            checks.push(skipped(name, label, "partial inspection"));
        }
    }

    Ok(ProofInspection {
        delta: delta.clone(),
        delta_dec: to_f64(delta),
        scale,
        configuration: cn,
        delta_star_dec: to_f64(&ds),
        delta_star: ds,
        rho_dec: to_f64(&rho),
        rho,
        v_black,
        v_white,
        central,
        central_length,
        colored,
        interior_endpoints,
        mu_map,
        phi_black,
        phi_white,
        checks,
        partial_reason,
    })
}

/// Every black component must run from a left endpoint to a right endpoint
/// and every white component from a right endpoint (or 0) to a left one.
/// The index relation printed alongside is not checked; the structural
/// form is what the argument uses.
fn phi_form_check(cn: &Configuration, black: &OpenUnion, white: &OpenUnion) -> InspectionCheck {
    let kind_of = |v: &Rational| -> Option<EndpointKind> {
        cn.endpoint_index(v).map(|idx| cn.endpoint_at(idx).kind)
    };
    let mut ok = true;
    let mut note = None;
    if !black.missing.is_empty() || !white.missing.is_empty() {
        ok = false;
        note = Some("phi constituents merely touch; components are not clean intervals".into());
    }
    for piece in &black.pieces {
        let lo_ok = kind_of(piece.lo()) == Some(EndpointKind::Left);
        let hi_ok = kind_of(piece.hi()) == Some(EndpointKind::Right);
        let idx_ok = piece.lo() < piece.hi();
        if !(lo_ok && hi_ok && idx_ok) {
            ok = false;
            note = Some(format!(
                "black component {piece} is not of the form (a_i, b_j)"
            ));
            break;
        }
    }
    if ok {
        for piece in &white.pieces {
            let lo_ok = matches!(
                kind_of(piece.lo()),
                Some(EndpointKind::Right) | Some(EndpointKind::Zero)
            );
            let hi_ok = kind_of(piece.hi()) == Some(EndpointKind::Left);
            if !(lo_ok && hi_ok) {
                ok = false;
                note = Some(format!(
                    "white component {piece} is not of the form (b_i, a_j)"
                ));
                break;
            }
        }
    }
    InspectionCheck {
        name: "phi_component_form".into(),
        label: CheckLabel::Asserted,
        holds: Some(ok),
        lhs: Some(format!(
            "{} black, {} white components",
            black.pieces.len(),
            white.pieces.len()
        )),
        rhs: Some("(a_i, b_j) / (b_i, a_j)".into()),
        note,
    }
}

fn icircin_check(central: &Interval, black: &OpenUnion, white: &OpenUnion) -> InspectionCheck {
    let unit = Interval::new_unchecked(Rational::zero(), Rational::one());
    let inside_unit = black
        .pieces
        .iter()
        .chain(white.pieces.iter())
        .all(|p| p.lo() >= unit.lo() && p.hi() <= unit.hi());
    let mut all = black.pieces.clone();
    all.extend(white.pieces.iter().cloned());
    let mut joint = iset::open_union(all);
    // points missing from one family may be interior to the other
    joint.missing.retain(|t| {
        !black.pieces.iter().any(|p| p.contains(t)) && !white.pieces.iter().any(|p| p.contains(t))
    });
    let covered = joint.covers(central);
    InspectionCheck {
        name: "central_covered_by_phi".into(),
        label: CheckLabel::Asserted,
        holds: Some(covered && inside_unit),
        lhs: Some(format!("{central}")),
        rhs: Some("phi_black ∪ phi_white ⊂ (0,1)".into()),
        note: if covered && inside_unit {
            None
        } else if !covered {
            Some("central interval not covered".into())
        } else {
            Some("phi reaches outside (0,1)".into())
        },
    }
}

fn mainlemma2_check(phi_black: &[Interval], phi_white: &[Interval]) -> InspectionCheck {
    let mut violations = Vec::new();
    for jb in phi_black {
        for jw in phi_white {
            let disjoint = jb.hi() <= jw.lo() || jw.hi() <= jb.lo();
            let b_in_w = jw.lo() <= jb.lo() && jb.hi() <= jw.hi();
            let w_in_b = jb.lo() <= jw.lo() && jw.hi() <= jb.hi();
            if !(disjoint || b_in_w || w_in_b) {
                violations.push(format!("{jb} vs {jw}"));
            }
        }
    }
    InspectionCheck {
        name: "phi_components_nested_or_disjoint".into(),
        label: CheckLabel::Diagnostic,
        holds: Some(violations.is_empty()),
        lhs: Some(format!("{} crossing pairs", violations.len())),
        rhs: Some("0".into()),
        note: if violations.is_empty() {
            None
        } else {
            Some(violations.join("; "))
        },
    }
}

fn corollary_check(
    central: &Interval,
    phi_black: &[Interval],
    phi_white: &[Interval],
) -> InspectionCheck {
    let contains = |p: &Interval| p.lo() <= central.lo() && central.hi() <= p.hi();
    let in_black = phi_black.iter().any(contains);
    let in_white = phi_white.iter().any(contains);
    InspectionCheck {
        name: "central_in_single_component".into(),
        label: CheckLabel::Diagnostic,
        holds: Some(in_black || in_white),
        lhs: Some(format!("{central}")),
        rhs: Some("one component of phi_black or phi_white".into()),
        note: Some(
            match (in_black, in_white) {
                (true, _) => "contained in a black component",
                (_, true) => "contained in a white component",
                _ => "contained in neither",
            }
            .to_string(),
        ),
    }
}

/// Per-vertex outcome of the executable truncation descent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentVertexCheck {
    pub vertex: Endpoint,
    #[serde(with = "crate::io::rat_str")]
    pub radius: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub density_after: Rational,
    pub exceeds_threshold: bool,
    #[serde(with = "crate::io::rat_str")]
    pub bridge_density: Rational,
    pub bridge_below_band: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationReport {
    #[serde(with = "crate::io::rat_str")]
    pub point: Rational,
    pub gap_aligned: bool,
    pub truncated_intervals: usize,
    pub still_counterexample: bool,
    pub vertex_checks: Vec<DescentVertexCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub endpoint: Endpoint,
    pub color: Color,
    #[serde(with = "crate::io::rat_str")]
    pub omega: Rational,
    pub mirrored: bool,
    pub dichotomy_holds: bool,
    pub case: String,
    pub truncation: Option<TruncationReport>,
}

/// Probes the escape-radius dichotomy at one endpoint of a counterexample
/// (normalized internally): a black endpoint at or below 1/2 should have
/// omega(p) < p or omega(p) >= 1 - p. When the dichotomy fails, the proof's
/// descent is executed: the configuration is truncated at p + omega(p) and
/// the truncated configuration is re-checked as a counterexample, together
/// with the claimed per-vertex inequalities. White endpoints at or above
/// 1/2 run through the reflected complement.
pub fn lemma2_probe(c: &Configuration, delta: &Rational, p: &Endpoint) -> Result<Lemma2Report> {
    let cn = c.normalized();
    let scale = c.last_endpoint().recip();
    let pn_value = &p.value * &scale;
    let idx = cn
        .endpoint_index(&pn_value)
        .ok_or_else(|| Error::NotAnEndpoint(format_rational(&p.value)))?;
    let pn = cn.endpoint_at(idx);
    let colored = omega_and_color(&cn, &pn, delta)?.ok_or_else(|| Error::NotACounterexample {
        delta: format_rational(delta),
        delta_star: "endpoint does not escape".into(),
    })?;
    let half = rat(1, 2);
    match colored.color {
        Color::Black if colored.endpoint.value <= half => probe_black(&cn, delta, &colored, false),
        Color::White if colored.endpoint.value >= half => {
            // mirror: white endpoints of C are black endpoints of the
            // reflected complement
            let mirrored = cn.complement_reflect();
            let mv = Rational::one() - &colored.endpoint.value;
            let midx = mirrored
                .endpoint_index(&mv)
                .ok_or_else(|| Error::Internal("mirror endpoint missing".into()))?;
            let mp = mirrored.endpoint_at(midx);
            let mcolored = omega_and_color(&mirrored, &mp, delta)?
                .ok_or_else(|| Error::Internal("mirror endpoint does not escape".into()))?;
            probe_black(&mirrored, delta, &mcolored, true)
        }
        _ => Err(Error::ParamRange(format!(
            "endpoint {} is {:?} on the wrong side of 1/2 for the dichotomy",
            p, colored.color
        ))),
    }
}

fn probe_black(
    cn: &Configuration,
    delta: &Rational,
    colored: &ColoredEndpoint,
    mirrored: bool,
) -> Result<Lemma2Report> {
    let one = Rational::one();
    let p = &colored.endpoint.value;
    let omega = &colored.omega;
    let (dichotomy_holds, case) = if omega < p {
        (true, "omega < p".to_string())
    } else if omega >= &(&one - p) {
        (true, "omega >= 1 - p".to_string())
    } else {
        (false, "p <= omega < 1 - p".to_string())
    };
    let truncation = if dichotomy_holds {
        None
    } else {
        let t = p + omega;
        let gap_aligned = !cn.intervals().iter().any(|iv| iv.lo() < &t && &t < iv.hi());
        let truncated = cn.truncate_at(&t)?;
        let still = is_counterexample(&truncated, delta)?.is_counterexample;
        let threshold = &one - delta;
        let band_floor = &one - rat_int(2) * delta;
        let mut vertex_checks = Vec::new();
        for ce in cn
            .endpoints()
            .iter()
            .filter(|v| v.value < t)
            .filter_map(|v| omega_and_color(cn, v, delta).ok().flatten())
        {
            if ce.color != Color::Black {
                continue;
            }
            let reach = &ce.endpoint.value + &ce.omega;
            if reach <= t {
                continue;
            }
            let radius = &t - &ce.endpoint.value;
            let window = Interval::new_unchecked(&ce.endpoint.value - &radius, t.clone());
            let density_after = truncated.rel_measure(&window);
            let bridge = Interval::new_unchecked(t.clone(), reach);
            let bridge_density = cn.rel_measure(&bridge);
            vertex_checks.push(DescentVertexCheck {
                vertex: ce.endpoint.clone(),
                radius,
                exceeds_threshold: density_after > threshold,
                density_after,
                bridge_below_band: bridge_density < band_floor,
                bridge_density,
            });
        }
        Some(TruncationReport {
            point: t,
            gap_aligned,
            truncated_intervals: truncated.interval_count(),
            still_counterexample: still,
            vertex_checks,
        })
    };
    Ok(Lemma2Report {
        endpoint: colored.endpoint.clone(),
        color: if mirrored { Color::White } else { Color::Black },
        omega: colored.omega.clone(),
        mirrored,
        dichotomy_holds,
        case,
        truncation,
    })
}

/// One step of the closing computation, with its exact slack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub slack: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    /// `4 d^3 + 2 d^2 + 3 d` at the inspected delta.
    #[serde(with = "crate::io::rat_str")]
    pub polynomial_value: Rational,
    pub polynomial_below_one: bool,
}

/// Substitutes the inspected rho and central length into the closing chain
/// `2 delta >= (1-delta)/(1+delta) (1/(2 delta) - 1)` and evaluates the
/// cubic it expands to.
pub fn final_inequality_chain(insp: &ProofInspection) -> Result<ChainReport> {
    let len = insp
        .central_length
        .as_ref()
        .ok_or_else(|| Error::Internal("partial inspection has no central interval".into()))?;
    let one = Rational::one();
    let delta = &insp.delta;
    let rho = &insp.rho;
    let bound = (&one - delta) / (&one + delta);
    let two_delta = rat_int(2) * delta;
    let floor = two_delta.recip() - &one;

    let mut steps = Vec::new();
    let mut push = |name: &str, lhs: Rational, rhs: Rational, holds: bool| {
        steps.push(ChainStep {
            name: name.to_string(),
            lhs: format_rational(&lhs),
            rhs: format_rational(&rhs),
            holds,
            slack: format_rational(&(&lhs - &rhs)),
        });
    };
    push(
        "central_length_floor",
        len.clone(),
        floor.clone(),
        len >= &floor,
    );
    push(
        "mass_ceiling",
        two_delta.clone(),
        rho.clone(),
        rho <= &two_delta,
    );
    push(
        "mass_split_lower_branch",
        rho.clone(),
        &bound * len,
        rho >= &(&bound * len),
    );
    let rhs_combined = &bound * &floor;
    push(
        "combined",
        two_delta.clone(),
        rhs_combined.clone(),
        two_delta >= rhs_combined,
    );
    let polynomial_value =
        rat_int(4) * delta * delta * delta + rat_int(2) * delta * delta + rat_int(3) * delta;
    let polynomial_below_one = polynomial_value < one;
    Ok(ChainReport {
        steps,
        polynomial_value,
        polynomial_below_one,
    })
}

/// Cover systems harvested from the black components of an inspection:
/// host = component, cover = the mu-windows and configuration intervals
/// composing it, B = the configuration itself restricted to the component.
pub fn phi_cover_systems(insp: &ProofInspection) -> Vec<CoverSystem> {
    let cn = &insp.configuration;
    let mut out = Vec::new();
    for comp in &insp.phi_black {
        let mut cover = Vec::new();
        for entry in &insp.mu_map {
            if entry.color != Color::Black {
                continue;
            }
            let w = Interval::new_unchecked(
                &entry.endpoint.value - &entry.mu,
                &entry.endpoint.value + &entry.mu,
            );
            if comp.lo() <= w.lo() && w.hi() <= comp.hi() {
                cover.push(w);
            }
        }
        for iv in cn.intervals() {
            if comp.lo() <= iv.lo() && iv.hi() <= comp.hi() {
                cover.push(iv.clone());
            }
        }
        let b = iset::intersect(cn.intervals(), comp);
        if let Ok(sys) = CoverSystem::new(comp.clone(), cover, b) {
            out.push(sys);
        }
    }
    out
}
