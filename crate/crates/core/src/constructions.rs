//! The explicit objects: the comb family C(m,s,N), its equalizing
//! parameters, the three cubic bound constants, and finite-depth
//! approximations of the self-similar set built by attaching scaled copies
//! at endpoints.

use crate::config::{Configuration, Interval};
use crate::error::{Error, Result};
use crate::iset;
use crate::rational::{format_rational, rat, rat_int, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Parameters of the comb: N teeth on (1-m, 1), each an initial fraction s
/// of its cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmsnParams {
    #[serde(with = "crate::io::rat_str")]
    pub m: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub s: Rational,
    pub n: u32,
}

impl CmsnParams {
    pub fn new(m: Rational, s: Rational, n: u32) -> Result<Self> {
        let one = Rational::one();
        if m <= Rational::zero() || m >= one {
            return Err(Error::ParamRange(format!(
                "m must lie in (0,1), got {}",
                format_rational(&m)
            )));
        }
        if s <= Rational::zero() || s >= one {
            return Err(Error::ParamRange(format!(
                "s must lie in (0,1), got {}",
                format_rational(&s)
            )));
        }
        if n == 0 {
            return Err(Error::ParamRange("N must be at least 1".into()));
        }
        Ok(Self { m, s, n })
    }
}

/// Builds the comb directly: tooth k is
/// `(1-m + k m/N, 1-m + (k+s) m/N)` for k = 0..N-1.
///
/// The fractional-part description `0 < {N(x+m-1)/m} < s` picks out exactly
/// these teeth; the direct arithmetic keeps construction exact and O(N).
pub fn build_cmsn(params: &CmsnParams) -> Configuration {
    let cell = &params.m / rat_int(params.n as i64);
    let base = Rational::one() - &params.m;
    let tooth = &params.s * &cell;
    let mut pairs = Vec::with_capacity(params.n as usize);
    for k in 0..params.n {
        let lo = &base + rat_int(k as i64) * &cell;
        let hi = &lo + &tooth;
        pairs.push((lo, hi));
    }
    Configuration::make(pairs).expect("comb construction is valid by design")
}

/// The equalizing parameters: with q the real root of q^3 + q^2 + q = 1,
/// `s = 1/(1+q)` and `m = q(1+q)`, which makes `1/m - s`, `s m` and
/// `1/s - 1` agree (the first two only up to the bisection residual).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmsnOptimal {
    #[serde(with = "crate::io::rat_str")]
    pub q: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub m: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub s: Rational,
}

impl CmsnOptimal {
    /// `(1/m - s, s m, 1/s - 1)`.
    pub fn triple(&self) -> (Rational, Rational, Rational) {
        (
            self.m.recip() - &self.s,
            &self.s * &self.m,
            self.s.recip() - Rational::one(),
        )
    }
}

pub fn optimal_params() -> CmsnOptimal {
    let q = bisect_sign_change(
        |x| x * x * x + x * x + x - Rational::one(),
        rat_int(0),
        rat_int(1),
        60,
    );
    let s = (Rational::one() + &q).recip();
    let m = &q * (Rational::one() + &q);
    let out = CmsnOptimal { q, m, s };
    let (a, b, c) = out.triple();
    let tol = Rational::new(1.into(), num_bigint::BigInt::from(10u64).pow(12));
    debug_assert!((&a - &out.q).abs() < tol);
    debug_assert!((&b - &out.q).abs() < tol);
    debug_assert!((&c - &out.q).abs() < tol);
    let _ = (a, b, c);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmsnRowKind {
    /// endpoint 0, radius 1
    Origin,
    /// endpoint 1-m, radius m
    FirstLeft,
    /// the last endpoint, radius 1; its closed form is the N -> infinity limit
    Last,
    /// any other endpoint, radius s m / N
    Interior,
}

/// One row family of the comb's density table: an endpoint, a chosen
/// radius, and twice the density there, exact next to the closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmsnTableRow {
    pub kind: CmsnRowKind,
    #[serde(with = "crate::io::rat_str")]
    pub endpoint: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub radius: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub twice_density: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub closed_form: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub abs_diff: Rational,
    pub family_size: usize,
}

/// The four row families. The interior row needs N >= 2 and is represented
/// by the first right endpoint; all interior endpoints share its exact
/// value. The last row's closed form is a limit, so its difference is
/// O(1/N); the other three are exact whenever m >= 1/2.
pub fn cmsn_table(params: &CmsnParams) -> Vec<CmsnTableRow> {
    let c = build_cmsn(params);
    let one = Rational::one();
    let two = rat_int(2);
    let m = &params.m;
    let s = &params.s;
    let n = rat_int(params.n as i64);
    let mut rows = Vec::with_capacity(4);

    let mut push = |kind, endpoint: Rational, radius: Rational, closed: Rational, family: usize| {
        let window = Interval::new_unchecked(&endpoint - &radius, &endpoint + &radius);
        let twice = two.clone() * c.rel_measure(&window);
        let diff = (&twice - &closed).abs();
        rows.push(CmsnTableRow {
            kind,
            endpoint,
            radius,
            twice_density: twice,
            closed_form: closed,
            abs_diff: diff,
            family_size: family,
        });
    };

    push(
        CmsnRowKind::Origin,
        Rational::zero(),
        one.clone(),
        s * m + &one,
        1,
    );
    push(
        CmsnRowKind::FirstLeft,
        &one - m,
        m.clone(),
        &two - (m.recip() - s),
        1,
    );
    let last = c.last_endpoint().clone();
    push(CmsnRowKind::Last, last, one.clone(), s * m, 1);
    if params.n >= 2 {
        let tooth = s * m / &n;
        let b0 = (&one - m) + &tooth;
        push(
            CmsnRowKind::Interior,
            b0,
            tooth,
            &two - (s.recip() - &one),
            2 * params.n as usize - 2,
        );
    }
    rows
}

/// High-precision values of the bound constants, each from its own
/// bisection: q with q^3+q^2+q = 1 and delta_upper = q/2; delta_lower with
/// 4d^3+2d^2+3d = 1; the closed-form (sqrt(17)-3)/4; and the conjectured
/// constant straight from 8d^3+4d^2+2d = 1 (algebraically the same number
/// as delta_upper, solved independently as a cross-check).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundConstants {
    #[serde(with = "crate::io::rat_str")]
    pub q_upper: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub delta_upper: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub delta_lower: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub kolyada_upper: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub conjecture: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub residual_upper: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub residual_lower: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub residual_kolyada: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub residual_conjecture: Rational,
    pub bits: u32,
}

/// Default bisection depth, about 64 decimal digits.
pub const DEFAULT_PRECISION_BITS: u32 = 213;

pub fn solve_bound_constants(bits: u32) -> BoundConstants {
    let one = Rational::one;
    let q_upper = bisect_sign_change(
        |x| x * x * x + x * x + x - one(),
        rat_int(0),
        rat_int(1),
        bits,
    );
    let delta_lower = bisect_sign_change(
        |x| rat_int(4) * x * x * x + rat_int(2) * x * x + rat_int(3) * x - one(),
        rat_int(0),
        rat(1, 2),
        bits,
    );
    let sqrt17 = bisect_sign_change(|x| x * x - rat_int(17), rat_int(4), rat_int(5), bits);
    let kolyada_upper = (sqrt17 - rat_int(3)) / rat_int(4);
    let conjecture = bisect_sign_change(
        |x| rat_int(8) * x * x * x + rat_int(4) * x * x + rat_int(2) * x - one(),
        rat_int(0),
        rat(1, 2),
        bits,
    );
    let delta_upper = &q_upper / rat_int(2);
    let residual_upper =
        (&q_upper * &q_upper * &q_upper + &q_upper * &q_upper + &q_upper - one()).abs();
    let residual_lower = (rat_int(4) * &delta_lower * &delta_lower * &delta_lower
        + rat_int(2) * &delta_lower * &delta_lower
        + rat_int(3) * &delta_lower
        - one())
    .abs();
    let residual_kolyada =
        (rat_int(2) * &kolyada_upper * &kolyada_upper + rat_int(3) * &kolyada_upper - one()).abs();
    let residual_conjecture = (rat_int(8) * &conjecture * &conjecture * &conjecture
        + rat_int(4) * &conjecture * &conjecture
        + rat_int(2) * &conjecture
        - one())
    .abs();
    debug_assert!(delta_lower < delta_upper && delta_upper < kolyada_upper);
    BoundConstants {
        q_upper,
        delta_upper,
        delta_lower,
        kolyada_upper,
        conjecture,
        residual_upper,
        residual_lower,
        residual_kolyada,
        residual_conjecture,
        bits,
    }
}

/// Bisection on a sign change: requires f(lo) < 0 < f(hi); halves the
/// bracket `iters` times and returns the midpoint.
pub fn bisect_sign_change<F: Fn(&Rational) -> Rational>(
    f: F,
    mut lo: Rational,
    mut hi: Rational,
    iters: u32,
) -> Rational {
    debug_assert!(f(&lo).is_negative() && f(&hi).is_positive());
    for _ in 0..iters {
        let mid = (&lo + &hi) / rat_int(2);
        if f(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / rat_int(2)
}

/// Finite-depth approximation of the self-similar set: level 1 is the
/// base's finite part, and each further level attaches an eps^n-scaled copy
/// of it, reflected to the left of every left endpoint and translated to
/// the right of every right endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HApprox {
    pub base: Configuration,
    #[serde(with = "crate::io::rat_str")]
    pub epsilon: Rational,
    pub depth: usize,
    /// `levels[k]` holds the intervals of level k+1; they are nested.
    pub levels: Vec<Vec<Interval>>,
}

pub fn build_h_approx(base: &Configuration, epsilon: &Rational, depth: usize) -> Result<HApprox> {
    if epsilon <= &Rational::zero() || epsilon >= &Rational::one() {
        return Err(Error::ParamRange(format!(
            "epsilon must lie in (0,1), got {}",
            format_rational(epsilon)
        )));
    }
    if depth == 0 {
        return Err(Error::ParamRange("depth must be at least 1".into()));
    }
    if base.last_endpoint() > &Rational::one() {
        return Err(Error::BaseBeyondUnit(format_rational(base.last_endpoint())));
    }
    let copy: Vec<Interval> = base.intervals().to_vec();
    let mut levels = vec![copy.clone()];
    let mut scale = Rational::one();
    for level in 1..depth {
        scale *= epsilon;
        let prev = levels.last().unwrap();
        let mut next = prev.clone();
        for iv in prev {
            for piece in &copy {
                // reflected copy left of the left endpoint
                next.push(Interval::new_unchecked(
                    iv.lo() - &scale * piece.hi(),
                    iv.lo() - &scale * piece.lo(),
                ));
                // translated copy right of the right endpoint
                next.push(Interval::new_unchecked(
                    iv.hi() + &scale * piece.lo(),
                    iv.hi() + &scale * piece.hi(),
                ));
            }
        }
        next.sort_by(|a, b| a.lo().cmp(b.lo()));
        for pair in next.windows(2) {
            if pair[1].lo() <= pair[0].hi() {
                return Err(Error::CopiesOverlap { level: level + 1 });
            }
        }
        levels.push(next);
    }
    Ok(HApprox {
        base: base.clone(),
        epsilon: epsilon.clone(),
        depth,
        levels,
    })
}

impl HApprox {
    pub fn level(&self, n: usize) -> &[Interval] {
        &self.levels[n - 1]
    }

    pub fn level_measure(&self, n: usize) -> Rational {
        iset::measure(self.level(n))
    }

    /// Endpoint count of the base including 0 (2r + 1) and without (2r).
    pub fn endpoint_counts(&self) -> (usize, usize) {
        let r = self.base.interval_count();
        (2 * r + 1, 2 * r)
    }
}

/// Tail estimate report around one endpoint of level n: the measured mass
/// of the deeper levels inside the window, the geometric bound for the
/// unbuilt remainder, and both sides of the two displayed inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailReport {
    pub level: usize,
    #[serde(with = "crate::io::rat_str")]
    pub window_radius: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub level_density: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub tail_measured: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub remainder_bound: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub tail_rhs_with_zero: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub tail_rhs_without_zero: Rational,
    pub tail_bound_holds: bool,
    #[serde(with = "crate::io::rat_str")]
    pub assembled_density: Rational,
    #[serde(with = "crate::io::rat_str")]
    pub assembled_rhs: Rational,
    pub assembled_holds: bool,
    pub endpoints_with_zero: usize,
    pub endpoints_without_zero: usize,
    #[serde(serialize_with = "crate::io::rat_vec::serialize")]
    #[serde(deserialize_with = "crate::io::rat_vec::deserialize")]
    pub level_masses: Vec<Rational>,
    #[serde(serialize_with = "crate::io::rat_vec::serialize")]
    #[serde(deserialize_with = "crate::io::rat_vec::deserialize")]
    pub level_ratios: Vec<Rational>,
    #[serde(with = "crate::io::rat_str")]
    pub ratio_bound: Rational,
}

/// Checks the tail bound at endpoint `v` of level `n` with window radius
/// `eps^(n-1) * omega`. The tail is the measured mass of the built deeper
/// levels inside the window plus a geometric bound on everything beyond
/// the built depth. The bound is checked with the larger endpoint count
/// (0 included); both counts are reported.
pub fn h_tail_check(h: &HApprox, n: usize, v: &Rational, omega: &Rational) -> Result<TailReport> {
    if n == 0 || n >= h.depth {
        return Err(Error::TailLevelOutOfRange(n));
    }
    if omega <= &Rational::zero() {
        return Err(Error::ParamRange("omega must be positive".into()));
    }
    let level_n = h.level(n);
    let is_endpoint = level_n.iter().any(|iv| iv.lo() == v || iv.hi() == v);
    if !is_endpoint {
        return Err(Error::NotAnEndpoint(format_rational(v)));
    }
    let (m_zero, m_plain) = h.endpoint_counts();
    let eps = &h.epsilon;
    let eps_pow = pow_rat(eps, n - 1);
    let radius = &eps_pow * omega;
    let window = Interval::new_unchecked(v - &radius, v + &radius);

    let in_level_n = iset::measure_in(level_n, &window);
    let in_deepest = iset::measure_in(h.level(h.depth), &window);
    let tail_measured = &in_deepest - &in_level_n;

    let base_measure = h.base.finite_measure();
    let r_tilde = rat_int(h.base.interval_count() as i64);
    let growth = (Rational::one() + rat_int(2) * &r_tilde) * eps;
    let remainder_bound = if growth < Rational::one() {
        let r_depth = rat_int(h.level(h.depth).len() as i64);
        rat_int(2) * &base_measure * r_depth * pow_rat(eps, h.depth) / (Rational::one() - &growth)
    } else {
        // no geometric control; dominate by the window itself
        window.length()
    };

    let rhs = |m: usize| -> Rational {
        let me = rat_int(m as i64) * eps;
        &eps_pow * &me / (Rational::one() - me)
    };
    let tail_rhs_with_zero = rhs(m_zero);
    let tail_rhs_without_zero = rhs(m_plain);
    let tail_total = &tail_measured + &remainder_bound;
    let tail_bound_holds = tail_total < tail_rhs_with_zero;

    let level_density = &in_level_n / window.length();
    let assembled_density = (&in_deepest + &remainder_bound) / window.length();
    let m_rat = rat_int(m_zero as i64);
    let assembled_rhs = &level_density
        + (eps / (rat_int(2) * omega))
            * (Rational::one() + &m_rat / (Rational::one() - &m_rat * eps));
    let assembled_holds = assembled_density < assembled_rhs;

    let mut level_masses = Vec::new();
    for k in 1..h.depth {
        level_masses.push(h.level_measure(k + 1) - h.level_measure(k));
    }
    let mut level_ratios = Vec::new();
    for pair in level_masses.windows(2) {
        level_ratios.push(&pair[1] / &pair[0]);
    }
    let me = &m_rat * eps;
    let ratio_bound = rat_int(2) * &me / (Rational::one() - &me);

    Ok(TailReport {
        level: n,
        window_radius: radius,
        level_density,
        tail_measured,
        remainder_bound,
        tail_rhs_with_zero,
        tail_rhs_without_zero,
        tail_bound_holds,
        assembled_density,
        assembled_rhs,
        assembled_holds,
        endpoints_with_zero: m_zero,
        endpoints_without_zero: m_plain,
        level_masses,
        level_ratios,
        ratio_bound,
    })
}

fn pow_rat(x: &Rational, k: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= x;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::to_f64;

    #[test]
    fn cmsn_small_cases() {
        let p = CmsnParams::new(rat(1, 2), rat(1, 2), 2).unwrap();
        let c = build_cmsn(&p);
        assert_eq!(
            c.intervals()
                .iter()
                .map(|iv| (iv.lo().clone(), iv.hi().clone()))
                .collect::<Vec<_>>(),
            vec![(rat(1, 2), rat(5, 8)), (rat(3, 4), rat(7, 8)),]
        );
        let p1 = CmsnParams::new(rat(1, 2), rat(1, 2), 1).unwrap();
        let c1 = build_cmsn(&p1);
        assert_eq!(c1.intervals().len(), 1);
        assert_eq!(c1.intervals()[0].lo(), &rat(1, 2));
        assert_eq!(c1.intervals()[0].hi(), &rat(3, 4));
    }

    #[test]
    fn cmsn_total_measure_is_sm() {
        let p = CmsnParams::new(rat(5, 6), rat(2, 3), 7).unwrap();
        let c = build_cmsn(&p);
        assert_eq!(c.finite_measure(), rat(5, 6) * rat(2, 3));
    }

    #[test]
    fn cmsn_param_validation() {
        assert!(CmsnParams::new(rat_int(1), rat(1, 2), 3).is_err());
        assert!(CmsnParams::new(rat(1, 2), rat_int(0), 3).is_err());
        assert!(CmsnParams::new(rat(1, 2), rat(1, 2), 0).is_err());
    }

    #[test]
    fn optimal_params_solve_the_triple() {
        let opt = optimal_params();
        let q = to_f64(&opt.q);
        assert!((q - 0.543689).abs() < 1e-5);
        assert!((to_f64(&opt.s) - 0.647799).abs() < 1e-5);
        assert!((to_f64(&opt.m) - 0.839287).abs() < 1e-5);
        let (a, b, c) = opt.triple();
        // s m and 1/s - 1 equal q exactly by construction
        assert_eq!(b, opt.q);
        assert_eq!(c, opt.q);
        let tol = rat(1, 1_000_000_000_000);
        assert!((a - &opt.q).abs() < tol);
        // (2d)^3 + (2d)^2 + 2d = 1 at d = q/2 up to the same residual
        let d = &opt.q / rat_int(2);
        let two_d = rat_int(2) * &d;
        let poly = &two_d * &two_d * &two_d + &two_d * &two_d + &two_d - rat_int(1);
        assert!(poly.abs() < tol);
    }

    #[test]
    fn table_rows_small_case() {
        // m = s = 1/2, N = 2: row 1 exact 5/4; row 4 closed form 1
        let p = CmsnParams::new(rat(1, 2), rat(1, 2), 2).unwrap();
        let rows = cmsn_table(&p);
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].kind, CmsnRowKind::Origin);
        assert_eq!(rows[0].twice_density, rat(5, 4));
        assert_eq!(rows[0].closed_form, rat(5, 4));
        assert_eq!(rows[1].closed_form, rat(1, 2));
        assert_eq!(rows[3].kind, CmsnRowKind::Interior);
        assert_eq!(rows[3].radius, rat(1, 8));
        assert_eq!(rows[3].closed_form, rat_int(1));
        assert_eq!(rows[3].twice_density, rat_int(1));
        assert_eq!(rows[3].family_size, 2);
    }

    #[test]
    fn table_radii_witness_escapes_at_029() {
        // each table row's (endpoint, radius) pair escapes the closed band
        // [0.29, 0.71] on the N=100 comb, and the comb is a counterexample
        use crate::config::Interval;
        use crate::profile::is_counterexample;
        let opt = optimal_params();
        let params = CmsnParams::new(opt.m.clone(), opt.s.clone(), 100).unwrap();
        let c = build_cmsn(&params);
        let delta = rat(29, 100);
        let upper = Rational::one() - &delta;
        for row in cmsn_table(&params) {
            let window =
                Interval::new(&row.endpoint - &row.radius, &row.endpoint + &row.radius).unwrap();
            let density = c.rel_measure(&window);
            assert!(
                density < delta || density > upper,
                "{:?} row density {} does not escape",
                row.kind,
                crate::rational::to_f64(&density)
            );
        }
        assert!(is_counterexample(&c, &delta).unwrap().is_counterexample);
    }

    #[test]
    fn interior_rows_share_one_exact_value() {
        let p = CmsnParams::new(rat(4, 5), rat(5, 8), 7).unwrap();
        let c = build_cmsn(&p);
        let tooth = rat(5, 8) * rat(4, 5) / rat_int(7);
        let values = c.endpoint_values();
        // skip 0, the first left endpoint and the last endpoint
        let mut seen = None;
        for v in values.iter().skip(2).take(values.len() - 3) {
            let window = crate::config::Interval::new(v - &tooth, v + &tooth).unwrap();
            let twice = rat_int(2) * c.rel_measure(&window);
            match &seen {
                None => seen = Some(twice),
                Some(first) => assert_eq!(&twice, first),
            }
        }
        assert_eq!(seen, Some(rat_int(2) - (rat(8, 5) - rat_int(1))));
    }

    #[test]
    fn tail_bound_tightens_with_smaller_epsilon() {
        let base = Configuration::make(vec![(rat(1, 2), rat_int(1))]).unwrap();
        let loose = build_h_approx(&base, &rat(1, 50), 3).unwrap();
        let tight = build_h_approx(&base, &rat(1, 200), 3).unwrap();
        let rl = h_tail_check(&loose, 1, &rat(1, 2), &rat(1, 2)).unwrap();
        let rt = h_tail_check(&tight, 1, &rat(1, 2), &rat(1, 2)).unwrap();
        let addend_loose = &rl.assembled_rhs - &rl.level_density;
        let addend_tight = &rt.assembled_rhs - &rt.level_density;
        assert!(addend_tight < addend_loose);
    }

    #[test]
    fn bound_constants_values() {
        let bc = solve_bound_constants(80);
        let du = to_f64(&bc.delta_upper);
        assert!(du > 0.2718 && du < 0.2719);
        let dl = to_f64(&bc.delta_lower);
        assert!(dl > 0.2629 && dl < 0.2630);
        assert!((to_f64(&bc.kolyada_upper) - 0.2807764).abs() < 5e-8);
        // independent bisections of the same cubic agree
        assert!((to_f64(&bc.conjecture) - du).abs() < 1e-15);
        let tol = rat(1, 1_000_000_000_000);
        assert!(bc.residual_upper < tol);
        assert!(bc.residual_lower < tol);
        assert!(bc.residual_kolyada < tol);
        assert!(bc.residual_conjecture < tol);
        assert!(bc.delta_lower < bc.delta_upper);
        assert!(bc.delta_upper < bc.kolyada_upper);
        assert!(bc.kolyada_upper < rat(281, 1000));
    }

    #[test]
    fn h_approx_depth_two_example() {
        let base = Configuration::make(vec![(rat(1, 2), rat_int(1))]).unwrap();
        let h = build_h_approx(&base, &rat(1, 10), 2).unwrap();
        let lvl2: Vec<(Rational, Rational)> = h
            .level(2)
            .iter()
            .map(|iv| (iv.lo().clone(), iv.hi().clone()))
            .collect();
        assert_eq!(
            lvl2,
            vec![
                (rat(2, 5), rat(9, 20)),
                (rat(1, 2), rat_int(1)),
                (rat(21, 20), rat(11, 10)),
            ]
        );
        assert_eq!(h.level(1), base.intervals());
    }

    #[test]
    fn h_approx_rejects_large_epsilon() {
        let base = Configuration::make(vec![(rat(1, 2), rat_int(1))]).unwrap();
        // copies of size ~1/2 glued at both ends of (1/2,1) collide with
        // the neighbors attached at the same endpoints
        assert!(matches!(
            build_h_approx(&base, &rat(3, 4), 3),
            Err(Error::CopiesOverlap { .. })
        ));
    }

    #[test]
    fn h_levels_nest() {
        let base =
            Configuration::make(vec![(rat(1, 4), rat(1, 2)), (rat(5, 8), rat(3, 4))]).unwrap();
        let h = build_h_approx(&base, &rat(1, 50), 3).unwrap();
        for k in 1..h.depth {
            let shallow = h.level(k);
            let deep = h.level(k + 1);
            for iv in shallow {
                assert!(deep.iter().any(|d| d.lo() == iv.lo() && d.hi() == iv.hi()));
            }
            assert!(h.level_measure(k) < h.level_measure(k + 1));
        }
    }

    #[test]
    fn tail_check_example() {
        let base = Configuration::make(vec![(rat(1, 2), rat_int(1))]).unwrap();
        let h = build_h_approx(&base, &rat(1, 100), 3).unwrap();
        let report = h_tail_check(&h, 1, &rat(1, 2), &rat(1, 2)).unwrap();
        assert!(report.tail_bound_holds);
        assert!(report.assembled_holds);
        assert_eq!(report.endpoints_with_zero, 3);
        assert_eq!(report.endpoints_without_zero, 2);
        // each deeper layer shrinks by eps times the interval growth: the
        // single-interval base adds 2 r_k eps^k / 2 per level, ratio 3 eps
        assert_eq!(report.level_masses.len(), 2);
        assert_eq!(report.level_masses[0], rat(1, 100));
        assert_eq!(report.level_ratios, vec![rat(3, 100)]);
        for ratio in &report.level_ratios {
            assert!(ratio < &report.ratio_bound);
        }
        assert!(h_tail_check(&h, 3, &rat(1, 2), &rat(1, 2)).is_err());
        assert!(h_tail_check(&h, 1, &rat(1, 3), &rat(1, 2)).is_err());
    }
}
