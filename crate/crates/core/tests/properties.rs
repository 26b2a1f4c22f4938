//! Property suite: the structural invariants that must hold for every
//! configuration, checked on randomized instances against independent
//! oracles.

mod common;

use common::{brute_delta_star, brute_extrema, random_config};
use denslab_core::constructions::{build_cmsn, build_h_approx, CmsnParams};
use denslab_core::oracles::{canonicalize_cover, lemma1_check, random_cover_system};
use denslab_core::rational::{rat, rat_int, to_f64, Rational};
use denslab_core::{
    all_endpoint_stats, delta_star, density_profile, is_counterexample, profile_extrema,
    quarter_point, Configuration, Interval,
};
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seed_strategy() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn small_rat(max_den: i64, lo_num: i64, hi_num: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den)
        .prop_flat_map(move |den| (lo_num * den..=hi_num * den).prop_map(move |num| rat(num, den)))
}

/// Rational strictly inside (0, 1).
fn unit_rat(max_den: i64) -> impl Strategy<Value = Rational> {
    (2..=max_den).prop_flat_map(|den| (1..den).prop_map(move |num| rat(num, den)))
}

fn delta_in_band() -> impl Strategy<Value = Rational> {
    (21i64..=50).prop_map(|num| rat(num, 100))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]

    #[test]
    fn rel_measure_in_unit_range_and_additive(seed in seed_strategy(),
                                              u in small_rat(16, -2, 4),
                                              v in small_rat(16, -2, 4),
                                              w in small_rat(16, -2, 4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 5, 32);
        let mut points = [u, v, w];
        points.sort();
        let [a, b, d] = points;
        prop_assume!(a < b && b < d);
        let full = Interval::new(a.clone(), d.clone()).unwrap();
        let left = Interval::new(a, b.clone()).unwrap();
        let right = Interval::new(b, d).unwrap();
        let rel = c.rel_measure(&full);
        prop_assert!(rel >= rat_int(0) && rel <= rat_int(1));
        prop_assert_eq!(
            c.measure_in(&full),
            c.measure_in(&left) + c.measure_in(&right)
        );
    }

    #[test]
    fn affine_invariance(seed in seed_strategy(), scale in small_rat(12, 1, 3)) {
        prop_assume!(scale > rat_int(0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 32);
        let scaled = c.affine_image(&scale).unwrap();
        let window = Interval::new(rat(-1, 2), rat(7, 4)).unwrap();
        let scaled_window =
            Interval::new(window.lo() * &scale, window.hi() * &scale).unwrap();
        prop_assert_eq!(c.rel_measure(&window), scaled.rel_measure(&scaled_window));
        prop_assert_eq!(delta_star(&c), delta_star(&scaled));
    }

    #[test]
    fn merging_touching_preserves_measures(seed in seed_strategy(), cut_num in 1i64..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 16);
        // split the first interval at an interior point into touching halves
        let first = &c.intervals()[0];
        let cut = first.lo() + (first.hi() - first.lo()) * rat(cut_num, 8);
        let mut pairs = vec![
            (first.lo().clone(), cut.clone()),
            (cut, first.hi().clone()),
        ];
        for iv in &c.intervals()[1..] {
            pairs.push((iv.lo().clone(), iv.hi().clone()));
        }
        let rebuilt = Configuration::make(pairs).unwrap();
        prop_assert_eq!(rebuilt.intervals(), c.intervals());
        let probe = Interval::new(rat(-1, 3), rat_int(4)).unwrap();
        prop_assert_eq!(rebuilt.measure_in(&probe), c.measure_in(&probe));
    }

    #[test]
    fn profile_pieces_match_rel_measure(seed in seed_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 24);
        for p in c.endpoints() {
            let prof = density_profile(&c, &p).unwrap();
            for piece in &prof.pieces {
                for k in [1i64, 2, 3] {
                    let om = &piece.omega_lo + (&piece.omega_hi - &piece.omega_lo) * rat(k, 4);
                    let w = Interval::new(&p.value - &om, &p.value + &om).unwrap();
                    prop_assert_eq!(piece.eval(&om), c.rel_measure(&w));
                }
            }
        }
    }

    #[test]
    fn extrema_bound_random_radii(seed in seed_strategy(), om in small_rat(24, 1, 3)) {
        prop_assume!(om > rat_int(0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 5, 32);
        for p in c.endpoints() {
            let st = profile_extrema(&c, &p).unwrap();
            let w = Interval::new(&p.value - &om, &p.value + &om).unwrap();
            let d = c.rel_measure(&w);
            prop_assert!(st.inf_density <= d && d <= st.sup_density);
        }
    }

    #[test]
    fn theorem_floors_hold(seed in seed_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 32);
        let ds = delta_star(&c);
        prop_assert!(ds >= rat(1, 4));
        prop_assert!(ds >= rat(2629, 10000));
    }

    #[test]
    fn escape_duality(seed in seed_strategy(), delta in delta_in_band()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 24);
        let check = is_counterexample(&c, &delta).unwrap();
        prop_assert_eq!(check.is_counterexample, delta > delta_star(&c));
    }

    #[test]
    fn quarter_point_escape_bounded(seed in seed_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 5, 32);
        let p = quarter_point(&c);
        let st = profile_extrema(&c, &p).unwrap();
        prop_assert!(st.escape <= rat(3, 4));
        prop_assert!(st.inf_density >= rat(1, 4));
        prop_assert!(st.sup_density <= rat(3, 4));
    }

    #[test]
    fn complement_reflection_preserves_threshold(seed in seed_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 24);
        let star = c.complement_reflect();
        prop_assert_eq!(delta_star(&star), delta_star(&c));
    }

    #[test]
    fn stats_route_agrees_with_fast_route(seed in seed_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 32);
        let via_stats = all_endpoint_stats(&c)
            .iter()
            .map(|s| s.escape.clone())
            .min()
            .unwrap();
        prop_assert_eq!(delta_star(&c), Rational::one() - via_stats);
    }

    #[test]
    fn brute_force_extrema_agree(seed in seed_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 24);
        for p in c.endpoints() {
            let st = profile_extrema(&c, &p).unwrap();
            let brute = brute_extrema(&c, &p);
            prop_assert_eq!(&st.sup_density, &brute.sup);
            prop_assert_eq!(&st.inf_density, &brute.inf);
            prop_assert_eq!(&st.sup_radius, &brute.sup_radius);
            prop_assert_eq!(&st.inf_radius, &brute.inf_radius);
            prop_assert_eq!(&st.escape, &brute.escape);
        }
        prop_assert_eq!(delta_star(&c), brute_delta_star(&c));
    }

    #[test]
    fn cover_canonicalization_preserves_union(seed in seed_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let delta = rat(27, 100);
        let sys = random_cover_system(&mut rng, &delta);
        let canon = canonicalize_cover(&sys.cover);
        prop_assert!(!canon.is_empty());
        prop_assert_eq!(canon[0].lo(), sys.host.lo());
        prop_assert_eq!(canon.last().unwrap().hi(), sys.host.hi());
        for k in 0..canon.len().saturating_sub(2) {
            prop_assert!(canon[k].overlap(&canon[k + 2]) == rat_int(0));
        }
        // the bound itself
        let report = lemma1_check(&sys, &delta).unwrap();
        prop_assert!(report.holds);
    }

    #[test]
    fn comb_matches_fractional_part_predicate(seed in seed_strategy(),
                                              m in unit_rat(24),
                                              s in unit_rat(24),
                                              n in 1u32..12) {
        let params = CmsnParams::new(m.clone(), s.clone(), n).unwrap();
        let c = build_cmsn(&params);
        prop_assert_eq!(c.finite_measure(), &m * &s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..40 {
            let x = rat(rng.random_range(1..4096), 4096);
            prop_assert_eq!(
                common::cmsn_predicate(&m, &s, n, &x),
                x > rat_int(0) && c.contains_point(&x)
            );
        }
    }

    #[test]
    fn h_levels_nest_and_stay_disjoint(seed in seed_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = random_config(&mut rng, 3, 16);
        let base = raw.normalized();
        if let Ok(h) = build_h_approx(&base, &rat(1, 64), 3) {
            for k in 1..h.depth {
                let deep = h.level(k + 1);
                for iv in h.level(k) {
                    prop_assert!(deep.iter().any(|d| d == iv));
                }
                for pair in deep.windows(2) {
                    prop_assert!(pair[0].hi() < pair[1].lo());
                }
            }
        }
    }

    #[test]
    fn optimizer_objective_close_to_exact(seed in seed_strategy()) {
        use denslab_core::optimizer::{objective, ParamVector};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_config(&mut rng, 4, 32).normalized();
        let pv = ParamVector::encode(&c);
        let float = objective(&pv);
        let exact = delta_star(&pv.decode_exact().unwrap());
        prop_assert!((float - to_f64(&exact)).abs() < 1e-6);
        prop_assert!(float >= 0.2629 - 1e-6);
    }
}
