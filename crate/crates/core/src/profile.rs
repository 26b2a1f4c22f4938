//! Exact analysis of the density function omega -> lambda(C | I_omega(p))
//! at an endpoint: piecewise closed form, extrema and escape scores, the
//! threshold delta*(C), escape radii with black/white coloring, and the
//! piecewise-linear quarter-point argument.

use crate::config::{Configuration, Endpoint};
use crate::error::{Error, Result};
use crate::rational::{format_rational, rat, Rational};
use crate::sweep::{sweep_extrema, Frac};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// One maximal radius range on which neither window edge crosses an
/// endpoint; there `lambda(omega) = slope_count/2 + offset/(2 omega)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfilePiece {
    #[serde(with = "crate::io::rat_str")]
    pub omega_lo: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub omega_hi: Rational,
    pub slope_count: u8,
    #[serde(with = "crate::io::rat_str")]
    pub offset: Rational,
}

impl ProfilePiece {
    pub fn eval(&self, omega: &Rational) -> Rational {
        rat(self.slope_count as i64, 2) + &self.offset / (omega + omega)
    }
}

/// Closed form for all radii beyond the farthest endpoint: slope 1, so
/// `lambda = 1/2 + offset/(2 omega)` with limit 1/2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileTail {
    #[serde(with = "crate::io::rat_str")]
    pub from: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub offset: Rational,
}

impl ProfileTail {
    pub fn eval(&self, omega: &Rational) -> Rational {
        rat(1, 2) + &self.offset / (omega + omega)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub endpoint: Endpoint,
    pub pieces: Vec<ProfilePiece>,
    pub tail: ProfileTail,
}

impl DensityProfile {
    pub fn eval(&self, omega: &Rational) -> Result<Rational> {
        if omega <= &Rational::zero() {
            return Err(Error::ParamRange(format!(
                "radius must be positive, got {}",
                format_rational(omega)
            )));
        }
        for piece in &self.pieces {
            if omega <= &piece.omega_hi {
                return Ok(piece.eval(omega));
            }
        }
        Ok(self.tail.eval(omega))
    }

    /// The breakpoint radii, ascending.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces.iter().map(|p| p.omega_hi.clone()).collect()
    }
}

/// Escape statistics of one endpoint. A `None` radius means the extremum
/// equals the two-sided limit 1/2 and is reported unattained; otherwise the
/// smallest attaining radius is stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointStats {
    pub endpoint: Endpoint,
    #[serde(with = "crate::io::rat_str")]
    pub sup_density: Rational,
    #[serde(with = "crate::io::rat_str_opt")]
    pub sup_radius: Option<Rational>,
    #[serde(with = "crate::io::rat_str")]
    pub inf_density: Rational,
    #[serde(with = "crate::io::rat_str_opt")]
    pub inf_radius: Option<Rational>,
    #[serde(with = "crate::io::rat_str")]
    pub escape: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

/// An endpoint together with `omega(p) = sup D_p`, where `D_p` collects the
/// radii whose density escapes the open band `(delta, 1-delta)`.
///
/// `omega_same_side` is the supremum over the endpoint's own color side
/// alone; it is recorded separately and `side_mismatch` flags the
/// configurations where the two suprema differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredEndpoint {
    pub endpoint: Endpoint,
    #[serde(with = "crate::io::rat_str")]
    pub omega: Rational,
    pub color: Color,
    #[serde(with = "crate::io::rat_str")]
    pub density_at_omega: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub omega_same_side: Rational,
    pub side_mismatch: bool,
}

/// Witness of an escape: the smallest breakpoint radius at which the
/// density leaves the closed band `[delta, 1-delta]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeWitness {
    pub endpoint: Endpoint,
    #[serde(with = "crate::io::rat_str")]
    pub radius: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub density: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleCheck {
    pub is_counterexample: bool,
    pub witnesses: Vec<EscapeWitness>,
    pub non_escaping: Vec<Endpoint>,
}

fn endpoint_index_checked(c: &Configuration, p: &Endpoint) -> Result<usize> {
    match c.endpoint_index(&p.value) {
        Some(idx) if c.endpoint_at(idx).kind == p.kind => Ok(idx),
        _ => Err(Error::NotAnEndpoint(format_rational(&p.value))),
    }
}

/// Exact piecewise description of `omega -> lambda(C | I_omega(p))`.
///
/// Breakpoints are the distances from p to every endpoint (0 included);
/// between consecutive breakpoints the closed form holds with a constant
/// slope count in {0, 1, 2}.
pub fn density_profile(c: &Configuration, p: &Endpoint) -> Result<DensityProfile> {
    let idx = endpoint_index_checked(c, p)?;
    let values = c.endpoint_values();
    let n = values.len();
    let pv = &values[idx];
    let seg_in = |j: usize| j % 2 == 1;

    let mut down = idx;
    let mut up = idx + 1;
    let mut in_down = if idx == 0 { true } else { seg_in(idx - 1) };
    let mut in_up = if idx + 1 < n { seg_in(idx) } else { false };
    let mut om_prev = Rational::zero();
    let mut g = Rational::zero();
    let mut pieces = Vec::new();

    loop {
        let d_down = if down > 0 {
            Some(pv - &values[down - 1])
        } else {
            None
        };
        let d_up = if up < n { Some(&values[up] - pv) } else { None };
        let om = match (&d_down, &d_up) {
            (None, None) => break,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (Some(a), Some(b)) => a.min(b).clone(),
        };
        let slope = (in_down as u8) + (in_up as u8);
        pieces.push(ProfilePiece {
            omega_lo: om_prev.clone(),
            omega_hi: om.clone(),
            slope_count: slope,
            offset: &g - rat(slope as i64, 1) * &om_prev,
        });
        g += rat(slope as i64, 1) * (&om - &om_prev);
        while down > 0 && (pv - &values[down - 1]) == om {
            down -= 1;
            in_down = if down == 0 { true } else { seg_in(down - 1) };
        }
        while up < n && (&values[up] - pv) == om {
            in_up = if up + 1 < n { seg_in(up) } else { false };
            up += 1;
        }
        om_prev = om;
    }

    // beyond the farthest endpoint only the ray keeps feeding the window
    let tail = ProfileTail {
        offset: &g - &om_prev,
        from: om_prev,
    };
    debug_assert_eq!(tail.offset, c.finite_measure() - pv);
    Ok(DensityProfile {
        endpoint: p.clone(),
        pieces,
        tail,
    })
}

fn stats_from_sweep(endpoint: Endpoint, st: &crate::sweep::SweepStats<Rational>) -> EndpointStats {
    let half = rat(1, 2);
    let sup = &st.sup.num / &st.sup.den;
    let inf = &st.inf.num / &st.inf.den;
    let (sup_density, sup_radius) = if sup > half {
        (sup, Some(st.sup_radius.clone()))
    } else {
        (half.clone(), None)
    };
    let (inf_density, inf_radius) = if inf < half {
        (inf, Some(st.inf_radius.clone()))
    } else {
        (half.clone(), None)
    };
    let escape = {
        let alt = Rational::one() - &inf_density;
        if sup_density >= alt {
            sup_density.clone()
        } else {
            alt
        }
    };
    EndpointStats {
        endpoint,
        sup_density,
        sup_radius,
        inf_density,
        inf_radius,
        escape,
    }
}

/// Sup and inf of the density over all radii, with the smallest witnessing
/// radii. Within each piece the density is monotone in omega, so extrema
/// land on breakpoints; the limits at 0+ and infinity both equal 1/2.
pub fn profile_extrema(c: &Configuration, p: &Endpoint) -> Result<EndpointStats> {
    let idx = endpoint_index_checked(c, p)?;
    let values = c.endpoint_values();
    let st = sweep_extrema(&values, idx);
    Ok(stats_from_sweep(p.clone(), &st))
}

/// Per-endpoint stats for every endpoint, in endpoint order.
pub fn all_endpoint_stats(c: &Configuration) -> Vec<EndpointStats> {
    let values = c.endpoint_values();
    let endpoints = c.endpoints();
    (0..values.len())
        .into_par_iter()
        .map(|idx| stats_from_sweep(endpoints[idx].clone(), &sweep_extrema(&values, idx)))
        .collect()
}

/// Scales all endpoints by the lcm of their denominators so the sweep runs
/// on plain big integers.
fn scaled_integer_values(values: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.denom());
    }
    values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

/// The counterexample threshold `delta*(C) = 1 - min_p e(p)`:
/// C refutes the closed-band statement at level delta exactly when
/// `delta > delta*(C)`.
pub fn delta_star(c: &Configuration) -> Rational {
    let values = scaled_integer_values(&c.endpoint_values());
    let escapes: Vec<Frac<BigInt>> = (0..values.len())
        .into_par_iter()
        .map(|idx| sweep_extrema(&values, idx).escape())
        .collect();
    let min = escapes
        .into_iter()
        .reduce(|a, b| if b.cmp2(&a) == Ordering::Less { b } else { a })
        .expect("configurations have endpoints");
    Rational::new(&min.den - &min.num, min.den)
}

/// Float mirror of [`delta_star`] over raw f64 endpoint values (leading 0
/// included); lives behind the optimizer's objective.
pub(crate) fn delta_star_f64(values: &[f64]) -> f64 {
    let mut min_escape = f64::INFINITY;
    for idx in 0..values.len() {
        let st = sweep_extrema(values, idx);
        let e = st.escape();
        let v = e.num / e.den;
        if v < min_escape {
            min_escape = v;
        }
    }
    1.0 - min_escape
}

/// Decides whether C escapes the closed band `[delta, 1-delta]` at every
/// endpoint, with the smallest escaping breakpoint radius per endpoint.
pub fn is_counterexample(c: &Configuration, delta: &Rational) -> Result<CounterexampleCheck> {
    if delta <= &Rational::zero() || delta > &rat(1, 2) {
        return Err(Error::DeltaOutOfRange(format_rational(delta)));
    }
    let upper = Rational::one() - delta;
    let mut witnesses = Vec::new();
    let mut non_escaping = Vec::new();
    for p in c.endpoints() {
        let prof = density_profile(c, &p)?;
        let mut found = None;
        for piece in &prof.pieces {
            let d = piece.eval(&piece.omega_hi);
            if &d < delta || d > upper {
                found = Some(EscapeWitness {
                    endpoint: p.clone(),
                    radius: piece.omega_hi.clone(),
                    density: d,
                });
                break;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => non_escaping.push(p),
        }
    }
    Ok(CounterexampleCheck {
        is_counterexample: non_escaping.is_empty(),
        witnesses,
        non_escaping,
    })
}

/// Largest omega in `[lo, hi]` (hi = None for the tail) with
/// `lambda(omega) >= theta` (above = true) or `<= theta` (above = false),
/// for the piece `lambda = s/2 + off/(2 omega)`.
fn piece_escape_sup(
    slope: u8,
    offset: &Rational,
    lo: &Rational,
    hi: Option<&Rational>,
    theta: &Rational,
    above: bool,
) -> Option<Rational> {
    let satisfies = |om: &Rational| {
        let val = rat(slope as i64, 2) + offset / (om + om);
        if above {
            &val >= theta
        } else {
            &val <= theta
        }
    };
    if let Some(hi) = hi {
        if satisfies(hi) {
            return Some(hi.clone());
        }
        if lo.is_zero() {
            // first piece: offset 0, density constant 1/2, nothing to solve
            return None;
        }
    } else {
        // tail: the limit 1/2 sits strictly inside the open band, so the
        // satisfying set is bounded; it reaches up from lo or is empty
        let k = (theta + theta) - rat(slope as i64, 1);
        if !satisfies(lo) {
            return None;
        }
        if k.is_zero() {
            return None;
        }
        let cross = offset / k;
        return Some(cross);
    }
    if satisfies(lo) {
        // crossing point where lambda == theta inside (lo, hi)
        let k = (theta + theta) - rat(slope as i64, 1);
        if k.is_zero() {
            // constant piece equal to theta would have satisfied at hi
            return None;
        }
        let cross = offset / k;
        return Some(cross);
    }
    None
}

/// `omega(p) = sup D_p` with the black/white color at that radius, or
/// `None` when `D_p` is empty (the density never leaves the open band).
///
/// The open band `(delta, 1-delta)` is used here, so boundary densities
/// equal to delta or 1-delta count as escaped. Requires `delta < 1/2`,
/// otherwise the escape set is unbounded.
pub fn omega_and_color(
    c: &Configuration,
    p: &Endpoint,
    delta: &Rational,
) -> Result<Option<ColoredEndpoint>> {
    if delta <= &Rational::zero() || delta >= &rat(1, 2) {
        return Err(Error::DeltaOutOfRange(format_rational(delta)));
    }
    let prof = density_profile(c, p)?;
    let upper = Rational::one() - delta;
    let mut best_black: Option<Rational> = None;
    let mut best_white: Option<Rational> = None;
    let consider = |slot: &mut Option<Rational>, cand: Option<Rational>| {
        if let Some(cand) = cand {
            if slot.as_ref().is_none_or(|cur| &cand > cur) {
                *slot = Some(cand);
            }
        }
    };
    for piece in &prof.pieces {
        consider(
            &mut best_black,
            piece_escape_sup(
                piece.slope_count,
                &piece.offset,
                &piece.omega_lo,
                Some(&piece.omega_hi),
                &upper,
                true,
            ),
        );
        consider(
            &mut best_white,
            piece_escape_sup(
                piece.slope_count,
                &piece.offset,
                &piece.omega_lo,
                Some(&piece.omega_hi),
                delta,
                false,
            ),
        );
    }
    consider(
        &mut best_black,
        piece_escape_sup(1, &prof.tail.offset, &prof.tail.from, None, &upper, true),
    );
    consider(
        &mut best_white,
        piece_escape_sup(1, &prof.tail.offset, &prof.tail.from, None, delta, false),
    );

    let (omega, color) = match (&best_black, &best_white) {
        (None, None) => return Ok(None),
        (Some(b), None) => (b.clone(), Color::Black),
        (None, Some(w)) => (w.clone(), Color::White),
        (Some(b), Some(w)) => {
            if b >= w {
                (b.clone(), Color::Black)
            } else {
                (w.clone(), Color::White)
            }
        }
    };
    let density_at_omega = prof.eval(&omega)?;
    let omega_same_side = match color {
        Color::Black => best_black.clone().expect("chosen side"),
        Color::White => best_white.clone().expect("chosen side"),
    };
    let side_mismatch = omega_same_side != omega;
    debug_assert!(!side_mismatch, "sup D_p always lands on the color side");
    Ok(Some(ColoredEndpoint {
        endpoint: p.clone(),
        omega,
        color,
        density_at_omega,
        omega_same_side,
        side_mismatch,
    }))
}

/// `mu(p)`: the smallest radius where the density attains its maximum
/// (black) or minimum (white). Errors when the requested extremum is the
/// unattained limit 1/2.
pub fn mu(c: &Configuration, p: &Endpoint, color: Color) -> Result<Rational> {
    let stats = profile_extrema(c, p)?;
    let radius = match color {
        Color::Black => stats.sup_radius,
        Color::White => stats.inf_radius,
    };
    radius.ok_or_else(|| Error::ExtremumUnattained(format_rational(&p.value)))
}

/// The endpoint minimizing `f(x) = lambda(C ∩ (x, inf)) + x/2`.
///
/// f is piecewise linear with slope +1/2 on gaps and -1/2 inside intervals,
/// so its global minimum over `[0, b_r]` lands on an endpoint; ties break
/// to the smallest endpoint. The winner's escape score never exceeds 3/4.
pub fn quarter_point(c: &Configuration) -> Endpoint {
    let (endpoint, _) = quarter_point_values(c)
        .into_iter()
        .min_by(|(ea, fa), (eb, fb)| fa.cmp(fb).then(ea.value.cmp(&eb.value)))
        .expect("configurations have endpoints");
    endpoint
}

/// `f(x) = lambda(C ∩ (x, inf)) + x/2` at every endpoint, in endpoint order.
pub fn quarter_point_values(c: &Configuration) -> Vec<(Endpoint, Rational)> {
    c.endpoints()
        .into_iter()
        .map(|p| {
            let f = c.measure_above(&p.value) + &p.value / rat(2, 1);
            (p, f)
        })
        .collect()
}
