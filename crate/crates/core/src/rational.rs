//! Exact rational scalars: parsing, canonical rendering, decimal expansion.
//!
//! Every quantity the engines produce is carried as a [`Rational`]; floats
//! appear only as renderings (`*_dec` report fields) and inside the
//! optimizer's objective.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Small-integer constructor, mostly for tests and literals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, a plain integer, or a decimal literal into an exact value.
/// Decimals convert exactly: `0.29` becomes `29/100`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::BadRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let magnitude = int.magnitude().clone() * scale.magnitude().clone() + frac.magnitude();
        let mut numer = BigInt::from(magnitude);
        if negative {
            numer = -numer;
        }
        return Ok(Rational::new(numer, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical rendering: lowest terms, `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64, safe for numerators and denominators of any size; values
/// below the f64 range come back as 0.
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    // keep ~64 significant bits in the integer quotient
    let shift = (db - nb + 64).max(0);
    if shift > 1100 {
        return 0.0;
    }
    let scaled: BigInt = (r.numer() << (shift as u32)) / r.denom();
    match scaled.to_f64() {
        Some(x) => x * (-(shift as f64)).exp2(),
        None => {
            if r.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Exact rational equal to the given finite float.
pub fn from_f64_exact(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::BadRational(format!("{x}")))
}

/// Decimal expansion with `sig` significant digits, rounded to nearest.
pub fn to_decimal_string(r: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // decimal exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = 0;
    let one = Rational::one();
    let ten = rat_int(10);
    if a >= one {
        let mut t = a.clone();
        while t >= ten {
            t /= ten.clone();
            e += 1;
        }
    } else {
        let mut t = a.clone();
        while t < one {
            t *= ten.clone();
            e -= 1;
        }
    }
    let shift = sig as i64 - 1 - e;
    let scaled = if shift >= 0 {
        a.clone() * Rational::from_integer(BigInt::from(10u32).pow(shift as u32))
    } else {
        a.clone() / Rational::from_integer(BigInt::from(10u32).pow((-shift) as u32))
    };
    // round to nearest integer
    let mut digits = ((scaled * rat_int(2) + Rational::one()) / rat_int(2))
        .floor()
        .to_integer();
    let cap = BigInt::from(10u32).pow(sig as u32);
    if digits >= cap {
        digits /= BigInt::from(10u32);
        e += 1;
    }
    let ds = digits.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e >= 0 {
        let ipart = (e + 1) as usize;
        if ipart >= ds.len() {
            out.push_str(&ds);
            out.push_str(&"0".repeat(ipart - ds.len()));
        } else {
            out.push_str(&ds[..ipart]);
            out.push('.');
            out.push_str(&ds[ipart..]);
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(&ds);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" 3 / 6 ").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("2.").unwrap(), rat_int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&rat(8, 4)), "2");
        assert_eq!(format_rational(&rat(-1, 2)), "-1/2");
    }

    #[test]
    fn decimal_expansion() {
        assert_eq!(to_decimal_string(&rat(1, 2), 3), "0.500");
        assert_eq!(to_decimal_string(&rat(1, 3), 5), "0.33333");
        assert_eq!(to_decimal_string(&rat(2, 3), 4), "0.6667");
        assert_eq!(to_decimal_string(&rat_int(125), 2), "130");
        assert_eq!(to_decimal_string(&rat(-1, 8), 3), "-0.125");
        assert_eq!(to_decimal_string(&rat(1, 1000), 2), "0.0010");
    }

    #[test]
    fn f64_round_trips() {
        assert_eq!(to_f64(&rat(1, 2)), 0.5);
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        let back = from_f64_exact(0.5).unwrap();
        assert_eq!(back, rat(1, 2));
    }
}
