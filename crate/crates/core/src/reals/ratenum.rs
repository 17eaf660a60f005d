//! The fixed enumeration a_ℚ: ℕ → ℚ.
//!
//! a_ℚ(0) = 0, a_ℚ(2m−1) = cw(m), a_ℚ(2m) = −cw(m), where cw is the
//! Calkin–Wilf order 1, 1/2, 2, 1/3, 3/2, 2/3, 3, …

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

pub struct RatEnum;

impl RatEnum {
    pub fn get(n: u64) -> Rational {
        Self::get_big(&BigUint::from(n))
    }

    pub fn get_big(n: &BigUint) -> Rational {
        if n.is_zero() {
            return Rational::zero();
        }
        let m: BigUint = (n + 1u32) >> 1;
        let v = calkin_wilf(&m);
        if n.bit(0) { v } else { -v }
    }

    /// Index of `r`, or `None` if it exceeds 64 bits.
    pub fn index(r: &Rational) -> Option<u64> {
        Self::index_big(r).to_u64()
    }

    pub fn index_big(r: &Rational) -> BigUint {
        if r.is_zero() {
            return BigUint::zero();
        }
        let m = calkin_wilf_index(&r.abs());
        let two_m = m << 1;
        if r.is_positive() { two_m - 1u32 } else { two_m }
    }
}

/// m-th Calkin–Wilf rational, m ≥ 1: binary digits after the leading 1 select
/// a/b ↦ a/(a+b) (digit 0) or (a+b)/b (digit 1).
fn calkin_wilf(m: &BigUint) -> Rational {
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    let bits = m.bits();
    for i in (0..bits.saturating_sub(1)).rev() {
        if m.bit(i) {
            a = &a + &b;
        } else {
            b = &a + &b;
        }
    }
    Rational::new(a, b)
}

/// Inverse of [`calkin_wilf`] for positive rationals.
fn calkin_wilf_index(r: &Rational) -> BigUint {
    let mut a = r.numer().magnitude().clone();
    let mut b = r.denom().magnitude().clone();
    // Walk to the root, collecting runs of equal digits from the leaf upward.
    let mut runs: Vec<(bool, BigUint)> = Vec::new();
    while !(a.is_one() && b.is_one()) {
        if a < b {
            // left moves: a/(b − t·a) until b' ≤ a (or reaching 1/1)
            let mut t = &b / &a;
            if (&b % &a).is_zero() {
                t -= 1u32;
            }
            b -= &t * &a;
            runs.push((false, t));
        } else {
            let mut t = &a / &b;
            if (&a % &b).is_zero() {
                t -= 1u32;
            }
            a -= &t * &b;
            runs.push((true, t));
        }
    }
    let mut m = BigUint::one();
    for (bit, count) in runs.iter().rev() {
        let c = count.to_u64().expect("Calkin-Wilf run too long");
        m <<= c as usize;
        if *bit {
            m += (BigUint::one() << c as usize) - 1u32;
        }
    }
    m
}
