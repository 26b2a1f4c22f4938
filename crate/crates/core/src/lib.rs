//! Exact rational analysis of interval configurations: relative measures,
//! density profiles around endpoints, escape thresholds, counterexample
//! constructions with their cubic bound constants, mechanical checkers for
//! the supporting lemmas, and a derivative-free search over configuration
//! space.
//!
//! The central object is a [`Configuration`]: the ray `(-inf, 0)` together
//! with finitely many disjoint open intervals with positive rational
//! endpoints. All engine arithmetic is exact; floats appear only in report
//! renderings and inside the optimizer's objective.

pub mod config;
pub mod constructions;
pub mod error;
pub mod io;
pub mod optimizer;
pub mod oracles;
pub mod profile;
pub mod rational;

mod iset;
mod sweep;

pub use config::{Configuration, Endpoint, EndpointKind, Interval, ReflectMode};
pub use error::{Error, Result};
pub use profile::{
    all_endpoint_stats, delta_star, density_profile, is_counterexample, mu, omega_and_color,
    profile_extrema, quarter_point, quarter_point_values, Color, ColoredEndpoint,
    CounterexampleCheck, DensityProfile, EndpointStats, ProfilePiece,
};
pub use rational::{format_rational, parse_rational, Rational};
