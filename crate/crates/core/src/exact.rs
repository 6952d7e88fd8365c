//! Exact numbers used by bound evaluation: rationals, `k`-th roots of
//! rationals and `a - c*sqrt(r)` expressions, all compared without rounding.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn rpow(r: &BigRational, e: u32) -> BigRational {
    BigRational::new(Pow::pow(r.numer(), e), Pow::pow(r.denom(), e))
}

/// `q^e` for a possibly negative exponent.
pub fn qpow(q: u64, e: i64) -> BigRational {
    let b = BigInt::from(q);
    if e >= 0 {
        BigRational::from_integer(Pow::pow(&b, e as u64))
    } else {
        BigRational::new(BigInt::one(), Pow::pow(&b, e.unsigned_abs()))
    }
}

/// Ordinary binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let s = n.sqrt();
    if &s * &s == *n {
        s
    } else {
        s + 1u32
    }
}

/// Square root of a nonnegative rational when it is itself rational.
pub fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn.into(), sd.into()))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let sign = if r.is_negative() { -1.0 } else { 1.0 };
            let ln = big_ln(r.numer().magnitude()) - big_ln(r.denom().magnitude());
            sign * ln.exp()
        }
    }
}

fn big_ln(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `num/den` with the sign on the numerator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `a/b`, integers and plain decimals such as `0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::BadRange(format!("`{s}` is not a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((w, frac)) = s.split_once('.') {
        let digits = format!("{w}{frac}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        return Ok(BigRational::new(n, Pow::pow(&BigInt::from(10), frac.len() as u32)));
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

/// Exact right-hand side of a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundValue {
    #[serde(serialize_with = "ser_rational")]
    Rational(BigRational),
    /// `radicand^(1/index)`.
    Root {
        #[serde(serialize_with = "ser_rational")]
        radicand: BigRational,
        index: u32,
    },
    /// `rational - coeff * sqrt(radicand)` with `coeff, radicand >= 0`.
    SqrtDiff {
        #[serde(serialize_with = "ser_rational")]
        rational: BigRational,
        #[serde(serialize_with = "ser_rational")]
        coeff: BigRational,
        #[serde(serialize_with = "ser_rational")]
        radicand: BigRational,
    },
    /// The source states no explicit constant.
    Unspecified,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl BoundValue {
    /// `radicand^(1/index)`, collapsed to a rational when the root is exact.
    pub fn root(radicand: BigRational, index: u32) -> BoundValue {
        assert!(index >= 1);
        if index == 1 {
            return BoundValue::Rational(radicand);
        }
        let n = radicand.numer().magnitude();
        let d = radicand.denom().magnitude();
        let (rn, rd) = (n.nth_root(index), d.nth_root(index));
        if !radicand.is_negative() && Pow::pow(&rn, index) == *n && Pow::pow(&rd, index) == *d {
            BoundValue::Rational(BigRational::new(rn.into(), rd.into()))
        } else {
            BoundValue::Root { radicand, index }
        }
    }

    pub fn sqrt_diff(rational: BigRational, coeff: BigRational, radicand: BigRational) -> BoundValue {
        match exact_sqrt(&radicand) {
            Some(s) => BoundValue::Rational(rational - coeff * s),
            None => BoundValue::SqrtDiff {
                rational,
                coeff,
                radicand,
            },
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            BoundValue::Rational(r) => Some(rational_to_f64(r)),
            BoundValue::Root { radicand, index } => {
                Some(rational_to_f64(radicand).powf(1.0 / *index as f64))
            }
            BoundValue::SqrtDiff {
                rational,
                coeff,
                radicand,
            } => Some(rational_to_f64(rational) - rational_to_f64(coeff) * rational_to_f64(radicand).sqrt()),
            BoundValue::Unspecified => None,
        }
    }

    /// Exact test `self <= t`.
    pub fn le(&self, t: &BigRational) -> Option<bool> {
        Some(match self {
            BoundValue::Rational(r) => r <= t,
            BoundValue::Root { radicand, index } => !t.is_negative() && *radicand <= rpow(t, *index),
            BoundValue::SqrtDiff {
                rational,
                coeff,
                radicand,
            } => {
                let gap = rational - t;
                !gap.is_positive() || &gap * &gap <= coeff * coeff * radicand
            }
            BoundValue::Unspecified => return None,
        })
    }

    /// Exact test `self <= t` for an integer `t`.
    pub fn le_int(&self, t: &BigInt) -> Option<bool> {
        self.le(&BigRational::from_integer(t.clone()))
    }

    /// Smallest integer `t` with `self <= t`.
    pub fn ceil(&self) -> Option<BigInt> {
        if matches!(self, BoundValue::Unspecified) {
            return None;
        }
        let le = |t: &BigInt| self.le_int(t).unwrap();
        let mut hi = BigInt::zero();
        let mut lo;
        if le(&hi) {
            // walk down to a value that fails
            let mut step = BigInt::one();
            lo = -&step;
            while le(&lo) {
                step *= 2;
                lo = -&step;
            }
        } else {
            lo = hi.clone();
            let mut step = BigInt::one();
            hi = step.clone();
            while !le(&hi) {
                lo = hi.clone();
                step *= 2;
                hi = step.clone();
            }
        }
        // invariant: !le(lo), le(hi)
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            if le(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Numerator/denominator pair carried into machine-readable output.
    pub fn headline_rational(&self) -> Option<&BigRational> {
        match self {
            BoundValue::Rational(r) => Some(r),
            BoundValue::Root { radicand, .. } => Some(radicand),
            BoundValue::SqrtDiff { rational, .. } => Some(rational),
            BoundValue::Unspecified => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BoundValue::Rational(_) => "exact".into(),
            BoundValue::Root { index, .. } => format!("value = (numerator/denominator)^(1/{index})"),
            BoundValue::SqrtDiff { coeff, radicand, .. } => format!(
                "value = numerator/denominator - ({}) * sqrt({})",
                format_rational(coeff),
                format_rational(radicand)
            ),
            BoundValue::Unspecified => "constant not specified".into(),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Rational(r) => write!(f, "{}", format_rational(r)),
            BoundValue::Root { radicand, index } => write!(f, "({})^(1/{index})", format_rational(radicand)),
            BoundValue::SqrtDiff {
                rational,
                coeff,
                radicand,
            } => write!(
                f,
                "{} - {}*sqrt({})",
                format_rational(rational),
                format_rational(coeff),
                format_rational(radicand)
            ),
            BoundValue::Unspecified => write!(f, "unspecified"),
        }
    }
}

pub fn is_nonneg(r: &BigRational) -> bool {
    r.numer().sign() != Sign::Minus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_of_roots() {
        // (625/16)^1 and cube root of 10
        assert_eq!(BoundValue::root(rat(625, 16), 1).ceil().unwrap(), BigInt::from(40));
        assert_eq!(BoundValue::root(int(10), 3).ceil().unwrap(), BigInt::from(3));
        assert_eq!(BoundValue::root(int(27), 3), BoundValue::Rational(int(3)));
        assert_eq!(BoundValue::Rational(rat(-7, 2)).ceil().unwrap(), BigInt::from(-3));
    }

    #[test]
    fn sqrt_diff_comparisons() {
        // 27*(2/3) - 27*sqrt(1/3) ~= 2.4115
        let v = BoundValue::sqrt_diff(int(18), int(27), rat(1, 3));
        assert_eq!(v.ceil().unwrap(), BigInt::from(3));
        assert_eq!(v.le_int(&BigInt::from(2)), Some(false));
        assert!((v.to_f64().unwrap() - 2.41154).abs() < 1e-4);
        assert_eq!(BoundValue::sqrt_diff(int(5), int(1), int(4)), BoundValue::Rational(int(3)));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), BigUint::from(15u32));
        assert_eq!(binomial(2, 3), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(60, 30), BigUint::from(118264581564861424u64));
    }

    #[test]
    fn integer_square_roots() {
        assert_eq!(ceil_sqrt(&BigUint::from(16u32)), BigUint::from(4u32));
        assert_eq!(ceil_sqrt(&BigUint::from(17u32)), BigUint::from(5u32));
        assert_eq!(exact_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(exact_sqrt(&rat(1, 3)), None);
    }
}
