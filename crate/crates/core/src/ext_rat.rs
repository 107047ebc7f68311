//! Extended rationals: exact `BigRational` values plus the two infinities.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Shorthand used across the crate for exact finite values.
pub type Rational = BigRational;

/// Builds the exact rational `n / d`. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the exact integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of ℚ ∪ {−∞, +∞}.
///
/// The ordering is total: `NegInf < Finite(_) < PosInf`. Finite values are
/// always stored in lowest terms with a positive denominator (this is what
/// `BigRational` maintains).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ExtRat::Finite(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        ExtRat::Finite(rat(n, d))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtRat::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Sum of two extended values. Mixing `+∞` with `−∞` has no meaning and
    /// is rejected.
    pub fn checked_add(&self, other: &ExtRat) -> Result<ExtRat> {
        use ExtRat::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::InfiniteArithmetic),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }

    pub fn checked_sub(&self, other: &ExtRat) -> Result<ExtRat> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> ExtRat {
        match self {
            ExtRat::NegInf => ExtRat::PosInf,
            ExtRat::PosInf => ExtRat::NegInf,
            ExtRat::Finite(r) => ExtRat::Finite(-r),
        }
    }

    /// Multiplication by a finite rational. `0 · ±∞` is rejected.
    pub fn checked_scale(&self, factor: &Rational) -> Result<ExtRat> {
        match self {
            ExtRat::Finite(r) => Ok(ExtRat::Finite(r * factor)),
            _ if factor.is_zero() => Err(Error::InfiniteArithmetic),
            ExtRat::PosInf if factor.is_positive() => Ok(ExtRat::PosInf),
            ExtRat::NegInf if factor.is_positive() => Ok(ExtRat::NegInf),
            inf => Ok(inf.neg()),
        }
    }

    /// `|self - other| <= eps`, with equal infinities counted as zero distance.
    pub fn within(&self, other: &ExtRat, eps: &Rational) -> bool {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => (a - b).abs() <= *eps,
            (a, b) => a == b,
        }
    }

    /// Bit size of the value: `1 + ⌈log2(|p|+1)⌉ + ⌈log2(|q|+1)⌉`, and 1 for
    /// the infinities.
    pub fn size(&self) -> u64 {
        fn bits(n: &BigInt) -> u64 {
            // ⌈log2(|n| + 1)⌉ is the bit length of |n|.
            n.abs().bits()
        }
        match self {
            ExtRat::Finite(r) => 1 + bits(r.numer()) + bits(r.denom()),
            _ => 1,
        }
    }
}

impl From<Rational> for ExtRat {
    fn from(r: Rational) -> Self {
        ExtRat::Finite(r)
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtRat::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => write!(f, "-inf"),
            ExtRat::PosInf => write!(f, "inf"),
            ExtRat::Finite(r) => write!(f, "{}", format_rational(r)),
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a plain decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::MalformedNumber(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p).map_err(|_| bad())?;
        let q = BigInt::from_str(q).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole_val = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(whole_digits).map_err(|_| bad())?
        };
        let frac_val = BigInt::from_str(frac).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut value = BigRational::new(whole_val * &scale + frac_val, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

impl FromStr for ExtRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtRat::PosInf),
            "-inf" => Ok(ExtRat::NegInf),
            other => parse_rational(other).map(ExtRat::Finite),
        }
    }
}
