//! Breakpoint sweep for the symmetric-window density around one endpoint.
//!
//! For an endpoint p of a configuration, the density omega -> lambda(C |
//! I_omega(p)) is piecewise of the form s/2 + c/(2 omega) between
//! consecutive breakpoints |p - e| (e ranging over all endpoints including
//! 0), with s counting how many of the two window edges currently sweep
//! through C. Within each piece the density is monotone, so extrema over
//! all radii are attained at breakpoints or equal the two-sided limit 1/2.
//!
//! The walk is generic over the scalar: scaled big integers for the exact
//! engine, rationals for single-endpoint queries, floats for the
//! optimizer's objective.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;

pub(crate) trait Scalar: Clone {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn double(&self) -> Self;
    fn cmp2(&self, o: &Self) -> Ordering;
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn double(&self) -> Self {
        self << 1
    }
    fn cmp2(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn double(&self) -> Self {
        self + self
    }
    fn cmp2(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn double(&self) -> Self {
        2.0 * self
    }
    fn cmp2(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).expect("finite sweep values")
    }
}

/// Density as a fraction num/den with den = 2*omega > 0.
#[derive(Debug, Clone)]
pub(crate) struct Frac<T> {
    pub num: T,
    pub den: T,
}

impl<T: Scalar> Frac<T> {
    pub fn cmp2(&self, o: &Frac<T>) -> Ordering {
        self.num.mul(&o.den).cmp2(&o.num.mul(&self.den))
    }

    /// 1 - num/den.
    pub fn one_minus(&self) -> Frac<T> {
        Frac {
            num: self.den.sub(&self.num),
            den: self.den.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SweepStats<T> {
    pub sup: Frac<T>,
    pub sup_radius: T,
    pub inf: Frac<T>,
    pub inf_radius: T,
}

impl<T: Scalar> SweepStats<T> {
    /// Escape score e(p) = max(sup, 1 - inf).
    pub fn escape(&self) -> Frac<T> {
        let alt = self.inf.one_minus();
        if self.sup.cmp2(&alt) == Ordering::Less {
            alt
        } else {
            self.sup.clone()
        }
    }
}

/// Membership of the segment (values[j], values[j+1]); the list alternates
/// gap / interval starting with the gap (0, a_1).
#[inline]
fn seg_in(j: usize) -> bool {
    j % 2 == 1
}

/// Walks every breakpoint |p - e| outward from `values[idx]`, tracking the
/// exact density at each one. `values` must be ascending with a leading 0.
/// Ties on equal distances are processed together. The smallest radius
/// attaining the running max/min is kept.
pub(crate) fn sweep_extrema<T: Scalar>(values: &[T], idx: usize) -> SweepStats<T> {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    let p = &values[idx];
    let mut down = idx;
    let mut up = idx + 1;
    let mut in_down = if idx == 0 { true } else { seg_in(idx - 1) };
    let mut in_up = if idx + 1 < n { seg_in(idx) } else { false };
    let mut om_prev = T::zero();
    let mut g = T::zero();
    let mut stats: Option<SweepStats<T>> = None;

    loop {
        let d_down = if down > 0 {
            Some(p.sub(&values[down - 1]))
        } else {
            None
        };
        let d_up = if up < n {
            Some(values[up].sub(p))
        } else {
            None
        };
        let om = match (&d_down, &d_up) {
            (None, None) => break,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (Some(a), Some(b)) => {
                if a.cmp2(b) == Ordering::Greater {
                    b.clone()
                } else {
                    a.clone()
                }
            }
        };
        let step = om.sub(&om_prev);
        match (in_down as u8) + (in_up as u8) {
            0 => {}
            1 => g = g.add(&step),
            _ => g = g.add(&step).add(&step),
        }
        let cand = Frac {
            num: g.clone(),
            den: om.double(),
        };
        match &mut stats {
            None => {
                stats = Some(SweepStats {
                    sup: cand.clone(),
                    sup_radius: om.clone(),
                    inf: cand,
                    inf_radius: om.clone(),
                });
            }
            Some(st) => {
                if cand.cmp2(&st.sup) == Ordering::Greater {
                    st.sup = cand.clone();
                    st.sup_radius = om.clone();
                }
                if cand.cmp2(&st.inf) == Ordering::Less {
                    st.inf = cand;
                    st.inf_radius = om.clone();
                }
            }
        }
        while down > 0 && p.sub(&values[down - 1]).cmp2(&om) == Ordering::Equal {
            down -= 1;
            in_down = if down == 0 { true } else { seg_in(down - 1) };
        }
        while up < n && values[up].sub(p).cmp2(&om) == Ordering::Equal {
            in_up = if up + 1 < n { seg_in(up) } else { false };
            up += 1;
        }
        om_prev = om;
    }
    stats.expect("at least two breakpoints")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int, Rational};

    fn stats(values: &[Rational], idx: usize) -> SweepStats<Rational> {
        sweep_extrema(values, idx)
    }

    fn as_rat(f: &Frac<Rational>) -> Rational {
        &f.num / &f.den
    }

    #[test]
    fn single_interval_endpoint_one() {
        // C = (-inf,0) ∪ (1/2,1), p = 1: min 1/4 at omega 1, values at
        // breakpoints {1/2, 1} are 1/2 and 1/4
        let values = vec![rat_int(0), rat(1, 2), rat_int(1)];
        let st = stats(&values, 2);
        assert_eq!(as_rat(&st.inf), rat(1, 4));
        assert_eq!(st.inf_radius, rat_int(1));
        assert_eq!(as_rat(&st.sup), rat(1, 2));
        assert_eq!(st.sup_radius, rat(1, 2));
        assert_eq!(as_rat(&st.escape()), rat(3, 4));
    }

    #[test]
    fn single_interval_endpoint_zero() {
        let values = vec![rat_int(0), rat(1, 2), rat_int(1)];
        let st = stats(&values, 0);
        assert_eq!(as_rat(&st.sup), rat(3, 4));
        assert_eq!(st.sup_radius, rat_int(1));
        assert_eq!(as_rat(&st.inf), rat(1, 2));
        assert_eq!(as_rat(&st.escape()), rat(3, 4));
    }

    #[test]
    fn symmetric_midpoint_is_flat() {
        let values = vec![rat_int(0), rat(1, 2), rat_int(1)];
        let st = stats(&values, 1);
        assert_eq!(as_rat(&st.sup), rat(1, 2));
        assert_eq!(as_rat(&st.inf), rat(1, 2));
        assert_eq!(as_rat(&st.escape()), rat(1, 2));
    }

    #[test]
    fn matches_direct_measures_at_breakpoints() {
        use crate::config::{Configuration, Interval};
        let c = Configuration::make(vec![
            (rat(1, 4), rat(1, 2)),
            (rat(2, 3), rat(5, 6)),
            (rat(9, 8), rat(7, 4)),
        ])
        .unwrap();
        let values = c.endpoint_values();
        for idx in 0..values.len() {
            let st = sweep_extrema(&values, idx);
            let p = &values[idx];
            // every breakpoint density must lie within [inf, sup]
            for e in &values {
                if e == p {
                    continue;
                }
                let om = if e > p { e - p } else { p - e };
                let w = Interval::around(p, &om).unwrap();
                let d = c.rel_measure(&w);
                assert!(as_rat(&st.inf) <= d && d <= as_rat(&st.sup));
            }
            // sup/inf radii reproduce their densities exactly
            let wsup = Interval::around(p, &st.sup_radius).unwrap();
            assert_eq!(c.rel_measure(&wsup), as_rat(&st.sup));
            let winf = Interval::around(p, &st.inf_radius).unwrap();
            assert_eq!(c.rel_measure(&winf), as_rat(&st.inf));
        }
    }
}
