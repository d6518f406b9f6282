//! Exact numbers: arbitrary precision rationals and the extended reals with `-∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Normalized arbitrary precision rational.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
}

/// Parses `p/q`, an integer, or a decimal literal (`-0.125`, `1e-3`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| malformed())?;
        let q: BigInt = q.trim().parse().map_err(|_| malformed())?;
        if q.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| malformed())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(malformed());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let all: BigInt = format!("{whole}{frac}").parse().map_err(|_| malformed())?;
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rationals extended with negative infinity. `+∞` is not representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(Rational),
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            ExtReal::NegInf => None,
        }
    }

    pub fn into_finite(self) -> Option<Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            ExtReal::NegInf => None,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Finite(r)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::NegInf, ExtReal::NegInf) => Ordering::Equal,
            (ExtReal::NegInf, _) => Ordering::Less,
            (_, ExtReal::NegInf) => Ordering::Greater,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        &self + &rhs
    }
}

impl Add<&ExtReal> for &ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: &ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::NegInf,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

/// Minimal field interface shared by the normalized and the unnormalized certificate arithmetic.
pub trait Field: Clone + fmt::Debug {
    fn from_rational(r: &Rational) -> Self;
    fn fzero() -> Self;
    fn fadd(&self, other: &Self) -> Self;
    fn fmul(&self, other: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// Sign as -1, 0 or 1.
    fn signum(&self) -> i8;
    fn fsub(&self, other: &Self) -> Self {
        self.fadd(&other.fneg())
    }
}

impl Field for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn fzero() -> Self {
        Zero::zero()
    }
    fn fadd(&self, other: &Self) -> Self {
        self + other
    }
    fn fmul(&self, other: &Self) -> Self {
        self * other
    }
    fn fneg(&self) -> Self {
        Neg::neg(self)
    }
    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Numerator/denominator pair that is never reduced. Denominators stay positive, so signs
/// and comparisons only need the numerator.
#[derive(Debug, Clone)]
pub struct RawPair {
    pub num: BigInt,
    pub den: BigInt,
}

impl PartialEq for RawPair {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Field for RawPair {
    fn from_rational(r: &Rational) -> Self {
        RawPair { num: r.numer().clone(), den: r.denom().clone() }
    }
    fn fzero() -> Self {
        RawPair { num: BigInt::zero(), den: BigInt::one() }
    }
    fn fadd(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RawPair { num: &self.num + &other.num, den: self.den.clone() };
        }
        RawPair { num: &self.num * &other.den + &other.num * &self.den, den: &self.den * &other.den }
    }
    fn fmul(&self, other: &Self) -> Self {
        RawPair { num: &self.num * &other.num, den: &self.den * &other.den }
    }
    fn fneg(&self) -> Self {
        RawPair { num: -&self.num, den: self.den.clone() }
    }
    fn signum(&self) -> i8 {
        if self.num.is_positive() {
            1
        } else if self.num.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl Sub for RawPair {
    type Output = RawPair;
    fn sub(self, rhs: RawPair) -> RawPair {
        self.fsub(&rhs)
    }
}

impl Mul for RawPair {
    type Output = RawPair;
    fn mul(self, rhs: RawPair) -> RawPair {
        self.fmul(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("9/10").unwrap(), ratio(9, 10));
        assert_eq!(parse_rational("-4/6").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("0.9").unwrap(), ratio(9, 10));
        assert_eq!(parse_rational("-.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(parse_rational("").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/2/3").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn format_round_trips() {
        for r in [ratio(9, 10), int(-3), ratio(-7, 3), int(0)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&ratio(4, 2)), "2");
    }

    #[test]
    fn neg_inf_is_absorbing_and_least() {
        let a = ExtReal::Finite(int(3));
        assert_eq!(&a + &ExtReal::NegInf, ExtReal::NegInf);
        assert!(ExtReal::NegInf < ExtReal::Finite(int(-1000)));
        assert_eq!(ExtReal::NegInf.max(a.clone()), a);
    }

    #[test]
    fn raw_pairs_compare_by_value() {
        let a = RawPair { num: BigInt::from(2), den: BigInt::from(4) };
        let b = RawPair::from_rational(&ratio(1, 2));
        assert_eq!(a, b);
        let s = a.fadd(&b);
        assert_eq!(s, RawPair::from_rational(&int(1)));
        assert_eq!(a.fsub(&b).signum(), 0);
    }
}
