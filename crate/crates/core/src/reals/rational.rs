//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RealError;

/// Exact rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// 2^{-k}.
pub fn pow2_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// 2^k for signed k.
pub fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << k as usize)
    } else {
        pow2_neg((-k) as u32)
    }
}

/// num / 2^exp in lowest terms, without a gcd.
pub fn dyadic(num: BigInt, exp: u64) -> Rational {
    if num.is_zero() {
        return Rational::zero();
    }
    let shift = num.trailing_zeros().unwrap_or(0).min(exp);
    Rational::new_raw(num >> shift as usize, BigInt::one() << (exp - shift) as usize)
}

/// k with x = n / 2^k in lowest terms, if the denominator is a power of two.
pub fn dyadic_exponent(x: &Rational) -> Option<u64> {
    let d = x.denom().magnitude();
    let k = d.trailing_zeros().unwrap_or(0);
    (d.bits() == k + 1).then_some(k)
}

/// a + b, aligning exponents when both are dyadic.
pub fn add_fast(a: &Rational, b: &Rational) -> Rational {
    match (dyadic_exponent(a), dyadic_exponent(b)) {
        (Some(ea), Some(eb)) => {
            let e = ea.max(eb);
            dyadic((a.numer() << (e - ea) as usize) + (b.numer() << (e - eb) as usize), e)
        }
        _ => a + b,
    }
}

/// Nearest multiple of 2^{-k} (ties upward); error at most 2^{-k-1}.
pub fn round_dyadic(x: &Rational, k: u32) -> Rational {
    let scale = BigInt::one() << k as usize;
    let num: BigInt = x.numer() * &scale * 2 + x.denom();
    let den: BigInt = x.denom() * 2;
    dyadic(num.div_floor(&den), k as u64)
}

/// ⌊x⌋ as an integer.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// ⌈x⌉ as an integer.
pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Smallest e with |x| ≤ 2^e (e ≥ 0).
pub fn log2_bound(x: &Rational) -> u32 {
    let a = x.abs();
    let c = ceil(&a);
    if c <= BigInt::one() {
        0
    } else {
        let c = c.magnitude() - BigUint::one();
        c.bits() as u32
    }
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b { a.clone() } else { b.clone() }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// "num/den" (or "num" for integers).
pub fn format(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational, RealError> {
    let bad = || RealError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Serde adapter writing rationals as "num/den" strings.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&format(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect()
        }
    }
}
