//! Interval configurations and their exact relative measures.
//!
//! A configuration is the ray `(-inf, 0)` together with finitely many
//! disjoint open intervals `0 < a_1 < b_1 < ... < a_r < b_r`. The ray is
//! implicit: it is never stored and contributes to every measure query that
//! reaches below zero.

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Open interval `(lo, hi)`, `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyInterval {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(Self { lo, hi })
    }

    /// Caller guarantees `lo < hi`.
    pub(crate) fn new_unchecked(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo < hi);
        Self { lo, hi }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    /// Length of the overlap with another open interval.
    pub fn overlap(&self, other: &Interval) -> Rational {
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        if lo < hi {
            hi - lo
        } else {
            Rational::zero()
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        if lo < hi {
            Some(Interval::new_unchecked(lo.clone(), hi.clone()))
        } else {
            None
        }
    }

    /// Symmetric window `(p - omega, p + omega)`.
    pub fn around(p: &Rational, omega: &Rational) -> Result<Interval> {
        if omega <= &Rational::zero() {
            return Err(Error::EmptyInterval {
                lo: format_rational(&(p - omega)),
                hi: format_rational(&(p + omega)),
            });
        }
        Ok(Interval::new_unchecked(p - omega, p + omega))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        (format_rational(&self.lo), format_rational(&self.hi)).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let (lo, hi) = <(String, String)>::deserialize(de)?;
        let lo = parse_rational(&lo).map_err(D::Error::custom)?;
        let hi = parse_rational(&hi).map_err(D::Error::custom)?;
        Interval::new(lo, hi).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointKind {
    Zero,
    Left,
    Right,
}

/// 0 or one of the interval boundaries of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoint {
    #[serde(with = "crate::io::rat_str")]
    pub value: Rational,
    pub kind: EndpointKind,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.value))
    }
}

/// Which way [`Configuration::reflect_truncate`] reads its window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectMode {
    /// `((-inf, lo) ∪ (C ∩ (lo, hi))) - lo`
    Forward,
    /// `hi - ((hi, inf) ∪ (C ∩ (lo, hi)))`
    Reflected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    intervals: Vec<Interval>,
}

impl Configuration {
    /// Validates raw pairs: sorts them, merges touching intervals, rejects
    /// non-positive endpoints and strict overlaps.
    pub fn make(raw: Vec<(Rational, Rational)>) -> Result<Self> {
        let mut ivs = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            if lo <= Rational::zero() {
                return Err(Error::NonPositiveEndpoint(format_rational(&lo)));
            }
            ivs.push(Interval::new(lo, hi)?);
        }
        if ivs.is_empty() {
            return Err(Error::NoIntervals);
        }
        ivs.sort_by(|a, b| a.lo().cmp(b.lo()).then(a.hi().cmp(b.hi())));
        let mut merged: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match merged.last_mut() {
                Some(last) if iv.lo() < last.hi() => {
                    return Err(Error::OverlappingIntervals(format_rational(iv.lo())));
                }
                Some(last) if iv.lo() == last.hi() => {
                    *last = Interval::new_unchecked(last.lo().clone(), iv.hi().clone());
                }
                _ => merged.push(iv),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn from_intervals(ivs: Vec<Interval>) -> Result<Self> {
        Self::make(ivs.into_iter().map(|iv| (iv.lo, iv.hi)).collect())
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    /// `b_r`, the largest finite endpoint.
    pub fn last_endpoint(&self) -> &Rational {
        self.intervals.last().expect("nonempty").hi()
    }

    /// Total length of the finite intervals.
    pub fn finite_measure(&self) -> Rational {
        self.intervals
            .iter()
            .map(Interval::length)
            .fold(Rational::zero(), |acc, l| acc + l)
    }

    /// All endpoint values in increasing order, starting with 0.
    pub fn endpoint_values(&self) -> Vec<Rational> {
        let mut v = Vec::with_capacity(2 * self.intervals.len() + 1);
        v.push(Rational::zero());
        for iv in &self.intervals {
            v.push(iv.lo().clone());
            v.push(iv.hi().clone());
        }
        v
    }

    pub fn endpoints(&self) -> Vec<Endpoint> {
        let mut v = Vec::with_capacity(2 * self.intervals.len() + 1);
        v.push(Endpoint {
            value: Rational::zero(),
            kind: EndpointKind::Zero,
        });
        for iv in &self.intervals {
            v.push(Endpoint {
                value: iv.lo().clone(),
                kind: EndpointKind::Left,
            });
            v.push(Endpoint {
                value: iv.hi().clone(),
                kind: EndpointKind::Right,
            });
        }
        v
    }

    /// Index into [`Self::endpoint_values`] for a given value.
    pub fn endpoint_index(&self, value: &Rational) -> Option<usize> {
        self.endpoint_values().iter().position(|v| v == value)
    }

    pub fn endpoint_at(&self, idx: usize) -> Endpoint {
        let kind = match idx {
            0 => EndpointKind::Zero,
            i if i % 2 == 1 => EndpointKind::Left,
            _ => EndpointKind::Right,
        };
        Endpoint {
            value: self.endpoint_values()[idx].clone(),
            kind,
        }
    }

    pub fn is_endpoint(&self, e: &Endpoint) -> bool {
        match self.endpoint_index(&e.value) {
            Some(idx) => self.endpoint_at(idx).kind == e.kind,
            None => false,
        }
    }

    /// Finite gaps: `(0, a_1)` and every `(b_i, a_{i+1})`.
    pub fn gaps(&self) -> Vec<Interval> {
        let mut out = Vec::with_capacity(self.intervals.len());
        let mut cursor = Rational::zero();
        for iv in &self.intervals {
            if iv.lo() > &cursor {
                out.push(Interval::new_unchecked(cursor, iv.lo().clone()));
            }
            cursor = iv.hi().clone();
        }
        out
    }

    /// Is `x` in the open set (ray or interval interior)?
    pub fn contains_point(&self, x: &Rational) -> bool {
        x < &Rational::zero() || self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// `λ(C ∩ window)`, including the ray's contribution below 0.
    pub fn measure_in(&self, window: &Interval) -> Rational {
        let zero = Rational::zero();
        let mut total = Rational::zero();
        if window.lo() < &zero {
            let hi = if window.hi() < &zero {
                window.hi()
            } else {
                &zero
            };
            total += hi - window.lo();
        }
        for iv in &self.intervals {
            if iv.lo() >= window.hi() {
                break;
            }
            total += iv.overlap(window);
        }
        total
    }

    /// `λ(C | window) = λ(C ∩ window) / |window|`, always in [0, 1].
    pub fn rel_measure(&self, window: &Interval) -> Rational {
        self.measure_in(window) / window.length()
    }

    /// `λ(C ∩ (x, inf))` for `x >= 0`.
    pub fn measure_above(&self, x: &Rational) -> Rational {
        let mut total = Rational::zero();
        for iv in &self.intervals {
            if iv.hi() <= x {
                continue;
            }
            let lo = if iv.lo() > x { iv.lo() } else { x };
            total += iv.hi() - lo;
        }
        total
    }

    /// Every finite endpoint scaled by a positive factor; 0 stays fixed.
    pub fn affine_image(&self, scale: &Rational) -> Result<Self> {
        if scale <= &Rational::zero() {
            return Err(Error::NonPositiveScale(format_rational(scale)));
        }
        Ok(Self {
            intervals: self
                .intervals
                .iter()
                .map(|iv| Interval::new_unchecked(iv.lo() * scale, iv.hi() * scale))
                .collect(),
        })
    }

    /// Scales so that `b_r = 1`.
    pub fn normalized(&self) -> Self {
        let scale = self.last_endpoint().recip();
        self.affine_image(&scale).expect("positive scale")
    }

    /// Removes `(x, inf)`, clipping an interval that straddles `x`.
    pub fn truncate_at(&self, x: &Rational) -> Result<Self> {
        let mut out = Vec::new();
        for iv in &self.intervals {
            if iv.lo() >= x {
                break;
            }
            let hi = if iv.hi() < x { iv.hi() } else { x };
            out.push(Interval::new_unchecked(iv.lo().clone(), hi.clone()));
        }
        if out.is_empty() {
            return Err(Error::TruncationEmpty(format_rational(x)));
        }
        Ok(Self { intervals: out })
    }

    /// Cuts the window `(lo, hi)` out of the configuration and re-roots it.
    ///
    /// Forward mode keeps orientation: the half-line below `lo` becomes the
    /// ray and `C ∩ (lo, hi)` is shifted down by `lo`. Reflected mode flips
    /// around `hi`: the half-line above `hi` becomes the ray and the window
    /// content is mirrored. Either way the result must again be a valid
    /// configuration, so the window content must not touch the new origin:
    /// forward mode needs a gap just above `lo`, reflected mode a gap just
    /// below `hi`.
    pub fn reflect_truncate(
        &self,
        lo: &Rational,
        hi: &Rational,
        mode: ReflectMode,
    ) -> Result<Self> {
        if self.endpoint_index(lo).is_none() {
            return Err(Error::NotAnEndpoint(format_rational(lo)));
        }
        if self.endpoint_index(hi).is_none() {
            return Err(Error::NotAnEndpoint(format_rational(hi)));
        }
        if lo >= hi {
            return Err(Error::DegenerateWindow(format!(
                "window ({}, {}) is empty",
                format_rational(lo),
                format_rational(hi)
            )));
        }
        let window = Interval::new_unchecked(lo.clone(), hi.clone());
        let clipped: Vec<Interval> = self
            .intervals
            .iter()
            .filter_map(|iv| iv.intersect(&window))
            .collect();
        if clipped.is_empty() {
            return Err(Error::DegenerateWindow(format!(
                "no interval content in ({}, {})",
                format_rational(lo),
                format_rational(hi)
            )));
        }
        let pairs: Vec<(Rational, Rational)> = match mode {
            ReflectMode::Forward => clipped
                .iter()
                .map(|iv| (iv.lo() - lo, iv.hi() - lo))
                .collect(),
            ReflectMode::Reflected => clipped
                .iter()
                .rev()
                .map(|iv| (hi - iv.hi(), hi - iv.lo()))
                .collect(),
        };
        if pairs[0].0.is_zero() {
            return Err(Error::DegenerateWindow(
                "window content touches the new origin".to_string(),
            ));
        }
        Self::make(pairs)
    }

    /// The reflected complement `b_r - (R \ C)` as a configuration.
    ///
    /// Swaps intervals and gaps, so densities flip: the density of the
    /// result in any window mirrored through `b_r / 2`... equals one minus
    /// the density of `self` in the original window. Black and white
    /// endpoints trade places; the escape threshold is unchanged.
    pub fn complement_reflect(&self) -> Self {
        let b_r = self.last_endpoint().clone();
        let mut pairs: Vec<(Rational, Rational)> = self
            .gaps()
            .iter()
            .map(|gap| (&b_r - gap.hi(), &b_r - gap.lo()))
            .collect();
        pairs.reverse();
        Self::make(pairs).expect("gap reflection preserves validity")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(-inf, 0)")?;
        for iv in &self.intervals {
            write!(f, " ∪ {iv}")?;
        }
        Ok(())
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            intervals: &'a [Interval],
        }
        Repr {
            intervals: &self.intervals,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            intervals: Vec<Interval>,
        }
        let repr = Repr::deserialize(de)?;
        Configuration::from_intervals(repr.intervals).map_err(D::Error::custom)
    }
}
