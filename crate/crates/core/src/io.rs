//! Serialization glue: rationals as canonical `p/q` strings in JSON, the
//! profile CSV export, and the input hash used by reports.

use crate::config::Configuration;
use crate::error::Result;
use crate::profile::DensityProfile;
use crate::rational::{format_rational, rat_int, Rational};

/// Serde adapter: `Rational` as a canonical `p/q` string.
pub mod rat_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        crate::rational::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod rat_str_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Option<Rational>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => ser.serialize_some(&format_rational(r)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        match s {
            None => Ok(None),
            Some(s) => crate::rational::parse_rational(&s)
                .map(Some)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rat_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &[Rational],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        strings
            .iter()
            .map(|s| crate::rational::parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Canonical configuration JSON (pretty, trailing newline): the format
/// every command reads and writes.
pub fn config_to_json(c: &Configuration) -> String {
    let mut s = serde_json::to_string_pretty(c).expect("configuration serializes");
    s.push('\n');
    s
}

pub fn config_from_json(text: &str) -> Result<Configuration> {
    Ok(serde_json::from_str(text)?)
}

/// CSV rendering of a density profile: exact `omega,density` rows at every
/// piece boundary plus `samples` interior points per piece, and a few tail
/// samples past the last breakpoint.
pub fn profile_csv(profile: &DensityProfile, samples: u32) -> String {
    let mut out = String::from("omega,density\n");
    let mut push = |om: &Rational, dens: &Rational| {
        out.push_str(&format_rational(om));
        out.push(',');
        out.push_str(&format_rational(dens));
        out.push('\n');
    };
    for piece in &profile.pieces {
        let width = &piece.omega_hi - &piece.omega_lo;
        for k in 1..=samples {
            let om = &piece.omega_lo
                + &width * Rational::new((k as i64).into(), (samples as i64 + 1).into());
            push(&om, &piece.eval(&om));
        }
        push(&piece.omega_hi, &piece.eval(&piece.omega_hi));
    }
    let mut om = profile.tail.from.clone();
    for _ in 0..samples.max(1) {
        om = &om * rat_int(2);
        push(&om, &profile.tail.eval(&om));
    }
    out
}

/// FNV-1a over the canonical compact JSON of a configuration; stable
/// across runs and platforms.
pub fn config_hash(c: &Configuration) -> String {
    let compact = serde_json::to_string(c).expect("configuration serializes");
    format!("{:016x}", fnv1a64(compact.as_bytes()))
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
