//! Set operations on finite unions of open intervals (no implicit ray).
//!
//! Used by the H(eps) levels, the cover-system checkers and the Phi-set
//! assembly. Everything is exact.

use crate::config::Interval;
use crate::rational::Rational;
use num_traits::Zero;

/// Sorts and merges a list of open intervals into disjoint pieces.
/// With `merge_touching`, `(a,b) ∪ (b,c)` collapses to `(a,c)`; that is the
/// right semantics for measures, where single points never matter.
pub fn normalize(mut v: Vec<Interval>, merge_touching: bool) -> Vec<Interval> {
    v.sort_by(|a, b| a.lo().cmp(b.lo()).then(a.hi().cmp(b.hi())));
    let mut out: Vec<Interval> = Vec::with_capacity(v.len());
    for iv in v {
        match out.last_mut() {
            Some(last) if iv.lo() < last.hi() || (merge_touching && iv.lo() == last.hi()) => {
                if iv.hi() > last.hi() {
                    *last = Interval::new_unchecked(last.lo().clone(), iv.hi().clone());
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// Union of open intervals as an honest open set: maximal pieces plus the
/// interior points where two constituents merely touch (those points are
/// *not* in the union).
#[derive(Debug, Clone)]
pub struct OpenUnion {
    pub pieces: Vec<Interval>,
    pub missing: Vec<Rational>,
}

pub fn open_union(mut v: Vec<Interval>) -> OpenUnion {
    v.sort_by(|a, b| a.lo().cmp(b.lo()).then(a.hi().cmp(b.hi())));
    let mut pieces: Vec<Interval> = Vec::new();
    let mut missing: Vec<Rational> = Vec::new();
    for iv in v {
        match pieces.last_mut() {
            Some(last) if iv.lo() < last.hi() => {
                if iv.hi() > last.hi() {
                    *last = Interval::new_unchecked(last.lo().clone(), iv.hi().clone());
                }
            }
            Some(last) if iv.lo() == last.hi() => {
                // a touch point stays uncovered: later intervals start at or
                // beyond it and earlier ones end at or before it
                missing.push(iv.lo().clone());
                *last = Interval::new_unchecked(last.lo().clone(), iv.hi().clone());
            }
            _ => pieces.push(iv),
        }
    }
    OpenUnion { pieces, missing }
}

impl OpenUnion {
    /// Is the open interval `window` entirely contained in this union?
    pub fn covers(&self, window: &Interval) -> bool {
        let piece = self
            .pieces
            .iter()
            .find(|p| p.lo() <= window.lo() && window.hi() <= p.hi());
        match piece {
            None => false,
            Some(_) => !self
                .missing
                .iter()
                .any(|t| window.lo() < t && t < window.hi()),
        }
    }
}

pub fn measure(v: &[Interval]) -> Rational {
    normalize(v.to_vec(), true)
        .iter()
        .map(Interval::length)
        .fold(Rational::zero(), |acc, l| acc + l)
}

/// Exact measure of `(∪ v) ∩ window` for already-disjoint sorted `v`.
pub fn measure_in(v: &[Interval], window: &Interval) -> Rational {
    v.iter()
        .map(|iv| iv.overlap(window))
        .fold(Rational::zero(), |acc, l| acc + l)
}

pub fn intersect(v: &[Interval], window: &Interval) -> Vec<Interval> {
    v.iter().filter_map(|iv| iv.intersect(window)).collect()
}

/// Removes the open set `∪ cuts` from the open set `∪ v`.
pub fn subtract(v: &[Interval], cuts: &[Interval]) -> Vec<Interval> {
    let cuts = normalize(cuts.to_vec(), true);
    let mut out = Vec::new();
    for iv in normalize(v.to_vec(), true) {
        let mut lo = iv.lo().clone();
        for cut in &cuts {
            if cut.hi() <= &lo {
                continue;
            }
            if cut.lo() >= iv.hi() {
                break;
            }
            if cut.lo() > &lo {
                out.push(Interval::new_unchecked(lo.clone(), cut.lo().clone()));
            }
            if cut.hi() < iv.hi() {
                lo = cut.hi().clone();
            } else {
                lo = iv.hi().clone();
                break;
            }
        }
        if &lo < iv.hi() {
            out.push(Interval::new_unchecked(lo, iv.hi().clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn normalize_merges() {
        let v = vec![iv((1, 2), (3, 4)), iv((1, 4), (1, 2)), iv((3, 4), (1, 1))];
        let merged = normalize(v.clone(), true);
        assert_eq!(merged, vec![iv((1, 4), (1, 1))]);
        // strict mode leaves the three touching pieces alone
        let strict = normalize(v, false);
        assert_eq!(strict.len(), 3);
    }

    #[test]
    fn open_union_tracks_touch_points() {
        let u = open_union(vec![iv((0, 1), (1, 2)), iv((1, 2), (1, 1))]);
        assert_eq!(u.pieces, vec![iv((0, 1), (1, 1))]);
        assert_eq!(u.missing, vec![rat(1, 2)]);
        assert!(!u.covers(&iv((1, 4), (3, 4))));
        assert!(u.covers(&iv((1, 8), (3, 8))));

        let v = open_union(vec![iv((0, 1), (2, 3)), iv((1, 3), (1, 1))]);
        assert!(v.missing.is_empty());
        assert!(v.covers(&iv((1, 4), (3, 4))));
    }

    #[test]
    fn complement_and_subtract() {
        let v = vec![iv((1, 4), (1, 2))];
        let cut = vec![iv((1, 3), (3, 8))];
        assert_eq!(
            subtract(&v, &cut),
            vec![iv((1, 4), (1, 3)), iv((3, 8), (1, 2))]
        );
        assert_eq!(measure(&subtract(&v, &cut)), rat(1, 4) - rat(1, 24));
    }
}
