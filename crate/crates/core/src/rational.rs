//! Exact rational arithmetic helpers.
//!
//! Everything exact in this crate runs on [`Rational`], an arbitrary-precision
//! fraction. Serialized form is `p/q`, with integers written without `/1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Gcd of the numerators of integer-valued rationals (0 when all are zero).
pub fn numerator_gcd<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v.numer()))
}

/// Scales `values` by a positive factor so they become coprime integers.
/// All-zero input is returned unchanged.
pub fn to_coprime_integers(values: &[Rational]) -> Vec<Rational> {
    let l = Rational::from_integer(denominator_lcm(values));
    let scaled: Vec<Rational> = values.iter().map(|v| v * &l).collect();
    let g = numerator_gcd(&scaled).abs();
    if g.is_zero() {
        return scaled;
    }
    let g = Rational::from_integer(g);
    scaled.into_iter().map(|v| v / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(format(&frac(6, 3)), "2");
        assert_eq!(format(&frac(-1, 3)), "-1/3");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn coprime_scaling() {
        let v = to_coprime_integers(&[frac(3, 2), frac(3, 2), int(0)]);
        assert_eq!(v, vec![int(1), int(1), int(0)]);
        let v = to_coprime_integers(&[frac(1, 2), frac(1, 3)]);
        assert_eq!(v, vec![int(3), int(2)]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(factorial(5), 120);
    }
}
