//! Effective metric spaces: a dense sequence, a computable distance on its
//! indices, and rational balls B_n with centre a(c(n)) and radius a_ℚ(r(n)).

use num_traits::{Signed, Zero};

use super::creal::CReal;
use super::ratenum::RatEnum;
use super::rational::{int, pow2_neg, Rational};
use crate::kernel::{unpair, SeqCode};

pub trait MetricSpaceDesc: Send + Sync {
    fn name(&self) -> &str;
    /// Human-readable label of dense point n.
    fn dense_point_label(&self, n: u64) -> String;
    fn dist(&self, n: u64, m: u64) -> CReal;

    /// Centre index of ball n.
    fn ball_center(&self, n: u64) -> u64 {
        unpair(n).0
    }

    /// Radius of ball n.
    fn ball_radius(&self, n: u64) -> Rational {
        RatEnum::get(unpair(n).1).abs()
    }
}

/// ℝ with the dense sequence a_ℚ.
#[derive(Clone, Copy, Debug, Default)]
pub struct RealLine;

impl MetricSpaceDesc for RealLine {
    fn name(&self) -> &str {
        "R"
    }
    fn dense_point_label(&self, n: u64) -> String {
        super::rational::format(&RatEnum::get(n))
    }
    fn dist(&self, n: u64, m: u64) -> CReal {
        CReal::exact((RatEnum::get(n) - RatEnum::get(m)).abs())
    }
}

/// I = [0,1] with dense points a_ℚ folded into the interval.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnitInterval;

impl UnitInterval {
    pub fn point(n: u64) -> Rational {
        let r = RatEnum::get(n).abs();
        if r <= Rational::from_integer(1.into()) { r } else { Rational::from_integer(1.into()) / r }
    }
}

impl MetricSpaceDesc for UnitInterval {
    fn name(&self) -> &str {
        "I"
    }
    fn dense_point_label(&self, n: u64) -> String {
        super::rational::format(&Self::point(n))
    }
    fn dist(&self, n: u64, m: u64) -> CReal {
        CReal::exact((Self::point(n) - Self::point(m)).abs())
    }
}

/// 2^ℕ with d(p,q) = 2^{-i} for the least i with p(i) ≠ q(i); dense points
/// are t⌢0̄ for the binary string t coded by n (non-binary codes read entries mod 2).
#[derive(Clone, Copy, Debug, Default)]
pub struct CantorSpace;

impl CantorSpace {
    pub fn point(n: u64) -> Vec<u8> {
        let mut bits: Vec<u8> = SeqCode::decode(n).0.iter().map(|&v| (v % 2) as u8).collect();
        while bits.last() == Some(&0) {
            bits.pop();
        }
        bits
    }

    pub fn dist_bits(a: &[u8], b: &[u8]) -> Rational {
        let n = a.len().max(b.len());
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            if x != y {
                return pow2_neg(i as u32);
            }
        }
        Rational::zero()
    }
}

impl MetricSpaceDesc for CantorSpace {
    fn name(&self) -> &str {
        "2^N"
    }
    fn dense_point_label(&self, n: u64) -> String {
        let bits: String = Self::point(n).iter().map(|b| char::from(b'0' + b)).collect();
        format!("{bits}0̄")
    }
    fn dist(&self, n: u64, m: u64) -> CReal {
        CReal::exact(Self::dist_bits(&Self::point(n), &Self::point(m)))
    }
}

/// Checks symmetry, d(n,n) = 0 and the triangle inequality on indices < upto at precision k.
pub fn check_pseudometric(space: &dyn MetricSpaceDesc, upto: u64, k: u32) -> Result<(), String> {
    let tol = pow2_neg(k);
    let d = |a: u64, b: u64| space.dist(a, b).approx(k + 2);
    for a in 0..upto {
        if d(a, a).abs() > tol {
            return Err(format!("d({a},{a}) ≠ 0"));
        }
        for b in 0..upto {
            if (d(a, b) - d(b, a)).abs() > &tol * int(2) {
                return Err(format!("asymmetric at ({a},{b})"));
            }
            for c in 0..upto {
                if d(a, c) > d(a, b) + d(b, c) + &tol * int(3) {
                    return Err(format!("triangle fails at ({a},{b},{c})"));
                }
            }
        }
    }
    Ok(())
}
