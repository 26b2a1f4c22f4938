//! Shared test oracles, deliberately independent of the engine paths they
//! check: fresh per-radius measures instead of the incremental sweep, a
//! float grid instead of exact breakpoints, and the fractional-part
//! predicate instead of the direct comb arithmetic.
//!
//! Each test binary uses its own subset of these helpers.
#![allow(dead_code)]

use denslab_core::rational::{rat, to_f64, Rational};
use denslab_core::{Configuration, Endpoint, Interval};
use num_traits::{One, Zero};
use rand::Rng;

/// Random configuration with up to `max_r` intervals and endpoint
/// denominators up to `max_den`, values in (0, 4].
pub fn random_config<R: Rng + ?Sized>(rng: &mut R, max_r: usize, max_den: i64) -> Configuration {
    let r = rng.random_range(1..=max_r);
    let mut values = std::collections::BTreeSet::new();
    while values.len() < 2 * r {
        let den = rng.random_range(1..=max_den);
        let num = rng.random_range(1..=4 * den);
        values.insert(rat(num, den));
    }
    let values: Vec<Rational> = values.into_iter().collect();
    let pairs = values
        .chunks(2)
        .map(|pair| (pair[0].clone(), pair[1].clone()))
        .collect();
    Configuration::make(pairs).expect("sorted distinct positive values")
}

/// Brute-force extrema: evaluate the density with a fresh `rel_measure`
/// call at every breakpoint radius; sup/inf fold in the limit value 1/2,
/// reported unattained when it wins.
pub struct BruteExtrema {
    pub sup: Rational,
    pub sup_radius: Option<Rational>,
    pub inf: Rational,
    pub inf_radius: Option<Rational>,
    pub escape: Rational,
}

pub fn brute_extrema(c: &Configuration, p: &Endpoint) -> BruteExtrema {
    let half = rat(1, 2);
    let mut sup = half.clone();
    let mut sup_radius = None;
    let mut inf = half.clone();
    let mut inf_radius = None;
    let mut radii: Vec<Rational> = c
        .endpoint_values()
        .iter()
        .filter(|e| *e != &p.value)
        .map(|e| {
            if e > &p.value {
                e - &p.value
            } else {
                &p.value - e
            }
        })
        .collect();
    radii.sort();
    radii.dedup();
    for omega in &radii {
        let window = Interval::new(&p.value - omega, &p.value + omega).unwrap();
        let d = c.rel_measure(&window);
        if d > sup {
            sup = d.clone();
            sup_radius = Some(omega.clone());
        }
        if d < inf {
            inf = d;
            inf_radius = Some(omega.clone());
        }
    }
    let escape = {
        let alt = Rational::one() - &inf;
        if sup >= alt {
            sup.clone()
        } else {
            alt
        }
    };
    BruteExtrema {
        sup,
        sup_radius,
        inf,
        inf_radius,
        escape,
    }
}

pub fn brute_delta_star(c: &Configuration) -> Rational {
    let min_escape = c
        .endpoints()
        .iter()
        .map(|p| brute_extrema(c, p).escape)
        .min()
        .expect("endpoints exist");
    Rational::one() - min_escape
}

/// Float measure over raw interval pairs, written from scratch.
pub fn float_measure(intervals: &[(f64, f64)], lo: f64, hi: f64) -> f64 {
    let mut total = if lo < 0.0 { hi.min(0.0) - lo } else { 0.0 };
    for &(a, b) in intervals {
        let l = a.max(lo);
        let h = b.min(hi);
        if h > l {
            total += h - l;
        }
    }
    total
}

pub fn float_intervals(c: &Configuration) -> Vec<(f64, f64)> {
    c.intervals()
        .iter()
        .map(|iv| (to_f64(iv.lo()), to_f64(iv.hi())))
        .collect()
}

/// Log-spaced grid scan of the density around an endpoint. Returns
/// (grid max, grid min, resolution bound): between adjacent radii the
/// density moves by at most (step / omega), since |lambda'| <= 1/omega.
pub fn grid_scan(
    intervals: &[(f64, f64)],
    p: f64,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> (f64, f64, f64) {
    let ratio = (omega_max / omega_min).powf(1.0 / (points as f64 - 1.0));
    let mut max_d = f64::NEG_INFINITY;
    let mut min_d = f64::INFINITY;
    let mut omega = omega_min;
    for _ in 0..points {
        let d = float_measure(intervals, p - omega, p + omega) / (2.0 * omega);
        max_d = max_d.max(d);
        min_d = min_d.min(d);
        omega *= ratio;
    }
    (max_d, min_d, ratio - 1.0)
}

/// The comb's defining predicate: x is in a tooth iff
/// `0 < { N (x + m - 1) / m } < s`.
pub fn cmsn_predicate(m: &Rational, s: &Rational, n: u32, x: &Rational) -> bool {
    let one = Rational::one();
    if x <= &(&one - m) || x >= &one {
        return false;
    }
    let y = rat(n as i64, 1) * (x + m - &one) / m;
    let frac = &y - y.floor();
    frac > Rational::zero() && &frac < s
}
