//! Scalar towers: exact rationals for algebra and group computations, `f64`
//! for norms, distances and the analysis probes.
//!
//! A vector or point carries exactly one scalar type, so mixing towers is a
//! type error rather than a silent coercion.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// A structure constant stored in both towers so that float evaluation does
/// not pay for a rational conversion on every bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeff {
    pub exact: Rational,
    pub approx: f64,
}

impl Coeff {
    pub fn new(exact: Rational) -> Self {
        let approx = ToPrimitive::to_f64(&exact).unwrap_or(f64::NAN);
        Self { exact, approx }
    }

    pub fn is_one(&self) -> bool {
        self.exact.is_one()
    }
}

/// Field operations shared by the exact and float towers.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Debug + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// `true` for the exact rational tower.
    const EXACT: bool;

    fn from_coeff(c: &Coeff) -> Self;
    fn from_int(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_coeff(c: &Coeff) -> Self {
        c.approx
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_coeff(c: &Coeff) -> Self {
        c.exact.clone()
    }

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Exact conversion of a finite double.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-1.25"` or
/// `"3e-2"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains('/') {
        return Rational::from_str(s).map_err(|e| Error::Parse(format!("bad rational `{s}`: {e}")));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(i));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("bad rational `{s}`")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let negative = mantissa.starts_with('-');
    let digits = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Some(if negative { -value } else { value })
}

/// `p/q` text form used in JSON output (integers print without a slash).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn is_negative<T: Scalar>(x: &T) -> bool {
    *x < T::zero()
}

pub fn abs_rational(r: &Rational) -> Rational {
    r.abs()
}

pub fn to_f64_vec<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

pub fn rationals_from_f64(v: &[f64]) -> Result<Vec<Rational>> {
    v.iter().map(|&x| rational_from_f64(x)).collect()
}
