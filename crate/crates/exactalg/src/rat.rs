//! Helpers around `BigRational`.

use crate::error::{AlgError, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::integer::Order;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses `p`, `-p`, `p/q` (whitespace tolerated).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || AlgError::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(p, q))
    } else if s.contains(['.', 'e', 'E']) {
        // exact decimal: mantissa[.frac][e±k]
        let (mant, exp) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
        if fp.starts_with(['-', '+']) || (ip.is_empty() && fp.is_empty()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
        let shift = exp - fp.len() as i32;
        let ten = BigInt::from(10);
        Ok(if shift >= 0 {
            Rat::from_integer(digits * ten.pow(shift as u32))
        } else {
            Rat::new(digits, ten.pow((-shift) as u32))
        })
    } else {
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rat::from_integer(p))
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| to_float(r, 64).to_f64())
}

pub fn bigint_to_rug(n: &BigInt) -> rug::Integer {
    let (sign, bytes) = n.to_bytes_le();
    let mut out = rug::Integer::from_digits(&bytes, Order::Lsf);
    if sign == Sign::Minus {
        out = -out;
    }
    out
}

pub fn rug_to_bigint(n: &rug::Integer) -> BigInt {
    let bytes = n.to_digits::<u8>(Order::Lsf);
    let mag = BigInt::from_bytes_le(Sign::Plus, &bytes);
    if n.cmp0() == std::cmp::Ordering::Less {
        -mag
    } else {
        mag
    }
}

pub fn to_float(r: &Rat, prec: u32) -> rug::Float {
    let q = rug::Rational::from((bigint_to_rug(r.numer()), bigint_to_rug(r.denom())));
    rug::Float::with_val(prec, &q)
}

/// Exact rational value of a finite float.
pub fn from_float(f: &rug::Float) -> Rat {
    match f.to_integer_exp() {
        None => Rat::zero(),
        Some((m, e)) => {
            let m = rug_to_bigint(&m);
            if e >= 0 {
                Rat::from_integer(m << (e as usize))
            } else {
                Rat::new(m, BigInt::one() << ((-e) as usize))
            }
        }
    }
}

pub fn floor(r: &Rat) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rat) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Least common multiple of the denominators.
pub fn denom_lcm<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Gcd of the numerators (nonnegative).
pub fn numer_gcd<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, r| acc.gcd(r.numer()))
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("-6/4").unwrap(), rat_frac(-3, 2));
        assert_eq!(fmt_rat(&rat_frac(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&rat(7)), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(parse_rat("1e-14").unwrap(), Rat::new(1.into(), BigInt::from(10).pow(14)));
        assert_eq!(parse_rat("-2.5e1").unwrap(), rat(-25));
        assert_eq!(parse_rat("0.125").unwrap(), rat_frac(1, 8));
        assert!(parse_rat("1e").is_err());
    }

    #[test]
    fn float_conversion_is_exact_for_dyadics() {
        let r = rat_frac(-5, 8);
        let f = to_float(&r, 128);
        assert_eq!(from_float(&f), r);
        let big = Rat::from_integer(BigInt::from(3).pow(90)) / rat(7);
        let back = from_float(&to_float(&big, 512));
        assert!(to_f64(&((back - &big) / &big)).abs() < 1e-140);
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(floor(&rat_frac(-3, 2)), BigInt::from(-2));
        assert_eq!(ceil(&rat_frac(-3, 2)), BigInt::from(-1));
        assert_eq!(ceil(&rat(4)), BigInt::from(4));
    }
}
