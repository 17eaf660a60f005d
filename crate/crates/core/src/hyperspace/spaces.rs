//! Metric spaces used for selection, with their compact and closed names.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ClosedMinus, CompactName, Cover, Flavor};
use crate::kernel::Seq;
use crate::problems::TreeChar;
use crate::reals::rational::{ceil, round_dyadic};
use crate::reals::{int, pow2, pow2_neg, CantorSpace, CReal, RatEnum, RealLine, Rational};

/// A metric space whose points can be approximated and whose fast Cauchy
/// sequences have limits.
pub trait SelSpace: Clone + Send + Sync + 'static {
    type Point: Clone + Send + Sync + 'static;

    fn label() -> &'static str;

    fn dist(&self, a: &Self::Point, b: &Self::Point) -> CReal;

    /// A point x with d(x, xs(n)) ≤ 2^{-n+1}, given that the xs(n) are
    /// 2^{-n} away from a common point.
    fn limit(&self, xs: &Seq<Self::Point>) -> Self::Point;
}

impl SelSpace for RealLine {
    type Point = CReal;

    fn label() -> &'static str {
        "R"
    }

    fn dist(&self, a: &CReal, b: &CReal) -> CReal {
        a.sub(b).abs()
    }

    fn limit(&self, xs: &Seq<CReal>) -> CReal {
        let xs = xs.clone();
        CReal::from_approx(move |k| xs.get(k as u64 + 2).approx(k + 2))
    }
}

impl SelSpace for CantorSpace {
    type Point = Seq;

    fn label() -> &'static str {
        "2^N"
    }

    fn dist(&self, a: &Seq, b: &Seq) -> CReal {
        let (a, b) = (a.clone(), b.clone());
        CReal::from_approx(move |k| {
            (0..=k as u64 + 1).find(|&i| a.get(i) != b.get(i)).map_or_else(Rational::zero, |i| pow2_neg(i as u32))
        })
    }

    fn limit(&self, xs: &Seq<Seq>) -> Seq {
        let xs = xs.clone();
        Seq::from_fn(move |i| xs.get(i + 2).get(i))
    }
}

/// ℝ^ℕ with d(x, y) = sup_m 2^{-m} |x_m − y_m| / (1 + |x_m − y_m|).
#[derive(Clone, Copy, Debug, Default)]
pub struct ProductSpace;

/// t ↦ t / (1 + t) on approximations of |x_m − y_m|.
fn bounded_gap(d: &Rational) -> Rational {
    let d = d.abs();
    &d / (Rational::one() + &d)
}

impl SelSpace for ProductSpace {
    type Point = Seq<CReal>;

    fn label() -> &'static str {
        "R^N"
    }

    fn dist(&self, a: &Seq<CReal>, b: &Seq<CReal>) -> CReal {
        let (a, b) = (a.clone(), b.clone());
        // Coordinates beyond k+1 contribute at most 2^{-k-2}; each kept term
        // is 1-Lipschitz in its difference, read at precision k+2.
        CReal::from_approx(move |k| {
            (0..=k as u64 + 1)
                .map(|m| {
                    let d = a.get(m).sub(&b.get(m)).approx(k + 2);
                    bounded_gap(&d) * pow2_neg(m as u32)
                })
                .fold(Rational::zero(), |acc, t| if t > acc { t } else { acc })
        })
    }

    fn limit(&self, xs: &Seq<Seq<CReal>>) -> Seq<CReal> {
        // d(x, xs(n)) ≤ 2^{-n+1} bounds coordinate j by 2^{j-n+2}.
        let xs = xs.clone();
        Seq::from_fn(move |j| {
            let xs = xs.clone();
            CReal::from_approx(move |k| xs.get(j + k as u64 + 3).get(j).approx(k + 1))
        })
    }
}

/// Index i with |x − (lo + i·2^{-n})| < 2^{-n}, clamped to [0, count).
fn grid_index(x: &CReal, lo: &Rational, n: u32, count: &BigUint) -> BigUint {
    let t = (x.approx(n + 3) - lo) * pow2(n as i64);
    let i = round_dyadic(&t, 0).to_integer();
    let last = BigInt::from(count.clone()) - 1;
    i.max(BigInt::zero()).min(last).to_biguint().unwrap()
}

/// [lo, hi] ⊆ ℝ with level n listing centres lo + j·2^{-n} clamped to hi.
pub fn interval_compact(lo: Rational, hi: Rational) -> CompactName<RealLine> {
    assert!(lo <= hi);
    CompactName::by_level(Flavor::Kappa, move |n| {
        let step = pow2_neg(n as u32);
        let count = (ceil(&((&hi - &lo) / &step)) + BigInt::one()).to_biguint().unwrap();
        let (lo1, hi1, lo2) = (lo.clone(), hi.clone(), lo.clone());
        let c2 = count.clone();
        Cover::new(step.clone(), count, move |j| {
            let c = &lo1 + Rational::from_integer(BigInt::from(j.clone())) * &step;
            CReal::exact(if c > hi1 { hi1.clone() } else { c })
        })
        .with_locate(move |x| grid_index(x, &lo2, n as u32, &c2))
    })
}

pub fn unit_compact() -> CompactName<RealLine> {
    interval_compact(int(0), int(1))
}

/// [0,1] whose level-n centres are the dyadic grid jittered by up to
/// 2^{-n-2} and listed in an affine order j ↦ (a·j + b) mod (2^n + 1).
pub fn jittered_unit_compact(seed: u64) -> CompactName<RealLine> {
    CompactName::by_level(Flavor::Kappa, move |n| {
        let m = (BigUint::one() << n) + BigUint::one();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n << 32));
        // Powers of two are units modulo the odd m.
        let shift = rng.gen_range(0..=n);
        let a = BigUint::one() << shift;
        let b = BigUint::from(rng.gen::<u64>()) % &m;
        // 2^shift · 2^{2n - shift} = 4^n ≡ 1 (mod 2^n + 1).
        let a_inv = (BigUint::one() << (2 * n - shift)) % &m;
        let n32 = n as u32;
        let jitter = move |i: &BigUint| {
            let low = i.iter_u64_digits().next().unwrap_or(0);
            let mut r = ChaCha8Rng::seed_from_u64(seed ^ low.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ n);
            Rational::new(BigInt::from(r.gen_range(-64i64..=64)), BigInt::from(256)) * pow2_neg(n32)
        };
        let center = move |i: BigUint| {
            let c = Rational::from_integer(BigInt::from(i.clone())) * pow2_neg(n32) + jitter(&i);
            CReal::exact(c.max(int(0)).min(int(1)))
        };
        let (m2, a2, b2) = (m.clone(), a.clone(), b.clone());
        Cover::new(pow2_neg(n32), m.clone(), move |j| center((&a2 * j + &b2) % &m2))
            .with_locate(move |x| {
                let i = grid_index(x, &int(0), n32, &m);
                (&a_inv * ((i + &m - &b) % &m)) % &m
            })
    })
}

/// {c}: every level lists the single ball around c.
pub fn point_compact<S: SelSpace>(c: S::Point) -> CompactName<S> {
    CompactName::by_level(Flavor::Kappa, move |n| {
        let c = c.clone();
        Cover::new(pow2_neg(n as u32), BigUint::one(), move |_| c.clone()).with_locate(|_| BigUint::zero())
    })
}

/// [lo, hi] as the complement of (lo − 2, lo) ∪ (hi, hi + 2), enough
/// inside any K of diameter below 2.
pub fn interval_closed(lo: Rational, hi: Rational) -> ClosedMinus<RealLine> {
    let balls = vec![(CReal::exact(&lo - int(1)), int(1)), (CReal::exact(&hi + int(1)), int(1))];
    ClosedMinus::from_balls(balls, CReal::zero())
}

/// [lo, hi] as in [`interval_closed`], with further random balls that
/// stay clear of [lo, hi] listed after the first two.
pub fn interval_closed_noisy(lo: Rational, hi: Rational, seed: u64) -> ClosedMinus<RealLine> {
    let base = interval_closed(lo.clone(), hi.clone());
    ClosedMinus {
        balls: Seq::from_fn(move |i| {
            if i < 2 {
                return base.ball(i);
            }
            let mut r = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let c = RatEnum::get(r.gen_range(0..4096));
            let gap = if c < lo { &lo - &c } else if c > hi { &c - &hi } else { Rational::zero() };
            (CReal::exact(c), gap)
        })
        .cached(),
    }
}

/// 2^ℕ with level n listing t⌢0̄ for all t of length n+1.
pub fn cantor_compact() -> CompactName<CantorSpace> {
    CompactName::by_level(Flavor::Kappa, |n| {
        let len = n + 1;
        Cover::new(pow2_neg(n as u32), BigUint::one() << len, move |j| {
            let j = j.clone();
            Seq::from_fn(move |i| if i < len { j.bit(len - 1 - i) as u64 } else { 0 })
        })
        .with_locate(move |x: &Seq| (0..len).fold(BigUint::zero(), |v, i| (v << 1u32) + BigUint::from(x.get(i).min(1))))
    })
}

/// The binary string with code i in length-then-lexicographic order.
fn string_of(i: u64) -> Vec<u8> {
    let len = 63 - (i + 1).leading_zeros() as u64;
    let v = i + 1 - (1u64 << len);
    (0..len).map(|k| ((v >> (len - 1 - k)) & 1) as u8).collect()
}

/// 2^ℕ minus the cylinders of strings outside T: ball i is the cylinder of
/// the i-th binary string if it is not in T and empty otherwise.
pub fn cantor_complement_tree(t: &TreeChar) -> ClosedMinus<CantorSpace> {
    let t = t.clone();
    ClosedMinus {
        balls: Seq::from_fn(move |i| {
            let s = string_of(i);
            let r = if t.contains(&s) { Rational::zero() } else { pow2(1 - s.len() as i64) };
            let s = Arc::new(s);
            (Seq::from_fn(move |k| s.get(k as usize).copied().unwrap_or(0) as u64), r)
        })
        .cached(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rat;

    #[test]
    fn strings_in_shortlex_order() {
        let got: Vec<Vec<u8>> = (0..7).map(string_of).collect();
        assert_eq!(got, vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn interval_covers_cover() {
        let k = interval_compact(rat(1, 3), rat(2, 3));
        for n in 0..8 {
            let c = k.level(n, 16).unwrap();
            for p in 0..=60 {
                let x = CReal::exact(rat(1, 3) + rat(p, 180));
                let j = c.locate(&x).unwrap();
                assert!(j < c.count);
                assert!(RealLine.dist(&x, &c.center(&j)).lt_rat(&pow2_neg(n as u32), 40));
            }
        }
    }

    #[test]
    fn jittered_covers_locate_inside_radius() {
        for seed in 0..5 {
            let k = jittered_unit_compact(seed);
            for n in [0usize, 1, 3, 7, 12, 30] {
                let c = k.level(n, 64).unwrap();
                for p in 0..=50 {
                    let x = CReal::exact(rat(p, 50));
                    let j = c.locate(&x).unwrap();
                    assert!(j < c.count);
                    let y = c.center(&j);
                    assert!(RealLine.dist(&x, &y).lt_rat(&pow2_neg(n as u32), 80), "seed {seed} n {n} p {p}");
                    let v = y.as_exact().unwrap();
                    assert!(*v >= int(0) && *v <= int(1));
                }
            }
        }
    }

    #[test]
    fn cantor_distance_and_limit() {
        let a = Seq::from_fn(|i| (i == 3) as u64);
        let z = Seq::constant(0);
        assert_eq!(CantorSpace.dist(&a, &z).approx(10), pow2_neg(3));
        assert_eq!(CantorSpace.dist(&a, &z).approx(1), Rational::zero());
        let target = Seq::from_fn(|i| i % 3 % 2);
        let c = cantor_compact();
        let xs = Seq::from_fn(move |n| {
            let lvl = c.level(n as usize, 64).unwrap();
            lvl.center(&lvl.locate(&target).unwrap())
        });
        assert_eq!(CantorSpace.limit(&xs).prefix(20), Seq::from_fn(|i| i % 3 % 2).prefix(20));
    }

    #[test]
    fn product_distance_cylinders() {
        let x: Seq<CReal> = Seq::constant(CReal::zero());
        let y: Seq<CReal> = Seq::from_fn(|m| CReal::exact(if m == 1 { int(1) } else { Rational::zero() }));
        // 2^{-1}·(1/2) = 1/4.
        let d = ProductSpace.dist(&x, &y);
        for k in 0..12 {
            assert!((d.approx(k) - rat(1, 4)).abs() <= pow2_neg(k));
        }
        let far: Seq<CReal> = Seq::from_fn(|m| CReal::exact(int(m as i64 * 1000)));
        assert!(ProductSpace.dist(&x, &far).approx(20) < int(1));
    }

    #[test]
    fn product_limit_recovers_coordinates() {
        let target: Seq<CReal> = Seq::from_fn(|m| CReal::exact(rat(m as i64 + 1, 3)));
        // xs(n) within 2^{-n-1} in every coordinate.
        let xs = Seq::from_fn(move |n| Seq::from_fn(move |m| CReal::exact(rat(m as i64 + 1, 3) + pow2_neg(n as u32 + 1))));
        let x = ProductSpace.limit(&xs);
        for j in 0..5 {
            for k in 0..12 {
                assert!((x.get(j).approx(k) - target.get(j).approx(0)).abs() <= pow2_neg(k));
            }
        }
    }

    #[test]
    fn complement_of_full_tree_is_empty() {
        let a = cantor_complement_tree(&TreeChar::full());
        assert!((0..200).all(|i| a.ball(i).1.is_zero()));
    }

    #[test]
    fn first_bit_zero_excludes_ones() {
        let t = TreeChar::new(|s| s.first() != Some(&1));
        let a = cantor_complement_tree(&t);
        let (c, r) = a.ball(2);
        assert_eq!(r, int(1));
        assert_eq!(c.prefix(3), vec![1, 0, 0]);
        let live: Vec<u64> = (0..100).filter(|&i| !a.ball(i).1.is_zero()).collect();
        // Every string starting with 1 is excluded, each inside ball 2.
        assert!(live.iter().all(|&i| string_of(i)[0] == 1));
        let inside = Seq::from_fn(|i| (i % 2 == 1) as u64);
        let outside = Seq::from_fn(|i| (i % 2 == 0) as u64);
        for i in 0..100 {
            let (b, r) = a.ball(i);
            assert!(!CantorSpace.dist(&inside, &b).lt_rat(&r, 20));
        }
        assert!(CantorSpace.dist(&outside, &c).lt_rat(&r, 20));
    }
}
