//! Sup: sequences in I ↦ their least upper bound.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::Seq;
use crate::multivalued::{Oracle, Problem, ReduceError, Verdict};
use crate::reals::{pow2_neg, rat, CReal, Rational};

type AboveFn = Arc<dyn Fn(&Rational) -> Option<u64> + Send + Sync>;

/// Planting metadata: the sup, and optionally for α < sup an index n with x_n > α
/// (`None` iff α ≥ sup).
#[derive(Clone)]
pub struct SupPlanting {
    pub sup: CReal,
    pub above: Option<AboveFn>,
}

#[derive(Clone)]
pub struct SupInstance {
    pub xs: Seq<CReal>,
    pub planting: Option<SupPlanting>,
}

/// Precision cap for verifying a Sup answer.
pub const SUP_VERIFY_PRECISION: u32 = 28;

pub struct Sup;

impl Problem for Sup {
    type Instance = SupInstance;
    type Solution = CReal;

    fn id(&self) -> String {
        "sup".into()
    }

    fn domain_check(&self, x: &SupInstance, fuel: u64) -> Verdict {
        for n in 0..fuel.min(64) {
            let v = x.xs.get(n);
            if v.lt_rat(&Rational::zero(), 24) || v.gt_rat(&Rational::one(), 24) {
                return Verdict::reject(format!("x_{n} is outside [0,1]"));
            }
        }
        Verdict::Accept
    }

    fn verify(&self, x: &SupInstance, y: &CReal, depth: usize) -> Verdict {
        let k = (depth as u32).min(SUP_VERIFY_PRECISION);
        for n in 0..depth.min(64) as u64 {
            if y.lt(&x.xs.get(n), k) {
                return Verdict::reject(format!("answer is below x_{n}"));
            }
        }
        match &x.planting {
            Some(pl) => {
                if num_traits::Signed::abs(&(y.approx(k) - pl.sup.approx(k))) <= y.err(k) + pl.sup.err(k) {
                    Verdict::Accept
                } else {
                    Verdict::reject(format!("answer differs from the planted sup at precision {k}"))
                }
            }
            None => Verdict::Undetermined,
        }
    }
}

/// Returns the planted sup after spot-checking that no x_n exceeds it.
pub fn sup_oracle() -> Oracle<Sup> {
    Oracle::new(
        "planted",
        "sequences with planted sup metadata",
        |x: &SupInstance| x.planting.as_ref().map(|_| ()).ok_or_else(|| "no planted sup".to_string()),
        |x: &SupInstance| {
            let pl = x.planting.as_ref().unwrap();
            for n in 0..32 {
                if x.xs.get(n).gt(&pl.sup, 30) {
                    return Err(ReduceError::Invalid(format!("x_{n} exceeds the planted sup")));
                }
            }
            Ok(pl.sup.clone())
        },
    )
}

/// A rational given only through dyadic approximations.
pub fn approximated(v: Rational) -> CReal {
    CReal::from_approx(move |k| crate::reals::rational::round_dyadic(&v, k + 1))
}

/// x_n = values[pattern(n)] with pattern = head⌢period^ω covering every value.
pub fn finite_support(values: Vec<Rational>, head: Vec<usize>, period: Vec<usize>) -> SupInstance {
    assert!(!period.is_empty() && !values.is_empty());
    let pat = move |n: u64| {
        let n = n as usize;
        if n < head.len() { head[n] } else { period[(n - head.len()) % period.len()] }
    };
    let pat = Arc::new(pat);
    let vals = Arc::new(values);
    // First index of each value.
    let first: Vec<Option<u64>> = (0..vals.len()).map(|i| (0..4096u64).find(|&n| pat(n) == i)).collect();
    let sup = vals.iter().enumerate().filter(|(i, _)| first[*i].is_some()).map(|(_, v)| v.clone()).max().unwrap();
    let (v2, p2) = (Arc::clone(&vals), Arc::clone(&pat));
    let xs = Seq::from_fn(move |n| approximated(v2[p2(n)].clone()));
    let v3 = Arc::clone(&vals);
    let above = move |a: &Rational| {
        v3.iter().enumerate().filter(|(i, v)| *v > a && first[*i].is_some()).filter_map(|(i, _)| first[i]).min()
    };
    SupInstance { xs, planting: Some(SupPlanting { sup: CReal::exact(sup), above: Some(Arc::new(above)) }) }
}

pub fn constant(v: Rational) -> SupInstance {
    finite_support(vec![v], vec![], vec![0])
}

/// x_n = s·(1 − 2^{-n}), sup s.
pub fn increasing_to(s: Rational) -> SupInstance {
    let s2 = s.clone();
    let xs = Seq::from_fn(move |n| CReal::exact(&s2 * (Rational::one() - pow2_neg(n.min(u32::MAX as u64) as u32))));
    let s3 = s.clone();
    let above = move |a: &Rational| {
        if a >= &s3 {
            return None;
        }
        (0..).find(|&n: &u64| &s3 * (Rational::one() - pow2_neg(n as u32)) > *a)
    };
    SupInstance { xs, planting: Some(SupPlanting { sup: CReal::exact(s), above: Some(Arc::new(above)) }) }
}

/// Random planted instance: finite support or an increasing sequence.
pub fn random_planted(seed: u64) -> SupInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = |rng: &mut ChaCha8Rng| {
        let d = rng.gen_range(1..=64i64);
        rat(rng.gen_range(0..=d), d)
    };
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..5);
        let values: Vec<Rational> = (0..k).map(|_| r(&mut rng)).collect();
        let mut head: Vec<usize> = (0..k).collect();
        let extra = rng.gen_range(0..10);
        for _ in 0..extra {
            head.push(rng.gen_range(0..k));
        }
        for i in (1..head.len()).rev() {
            head.swap(i, rng.gen_range(0..=i));
        }
        let period = vec![rng.gen_range(0..k)];
        finite_support(values, head, period)
    } else {
        increasing_to(r(&mut rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_zero() {
        let x = constant(Rational::zero());
        let s = sup_oracle().realize(&x).unwrap();
        assert!(s.within(&Rational::zero(), 20));
        assert!(Sup.verify(&x, &s, 64).is_accept());
    }

    #[test]
    fn interleaved_third_half() {
        let x = finite_support(vec![rat(1, 3), rat(1, 2)], vec![], vec![0, 1]);
        let s = sup_oracle().realize(&x).unwrap();
        assert!(s.within(&rat(1, 2), 20));
        assert_eq!((x.planting.as_ref().unwrap().above.as_ref().unwrap())(&rat(2, 5)), Some(1));
        assert_eq!((x.planting.as_ref().unwrap().above.as_ref().unwrap())(&rat(1, 2)), None);
    }

    #[test]
    fn increasing_sup_one() {
        let x = increasing_to(Rational::one());
        let s = sup_oracle().realize(&x).unwrap();
        assert!(s.within(&Rational::one(), 20));
        let above = x.planting.as_ref().unwrap().above.clone().unwrap();
        let n = above(&rat(999, 1000)).unwrap();
        assert!(x.xs.get(n).gt_rat(&rat(999, 1000), 40));
    }

    #[test]
    fn wrong_answer_rejected() {
        let x = constant(rat(1, 2));
        assert!(Sup.verify(&x, &CReal::exact(rat(1, 3)), 20).is_reject());
        assert!(Sup.verify(&x, &CReal::exact(rat(3, 4)), 20).is_reject());
    }

    #[test]
    fn random_planted_metadata_is_sound() {
        for seed in 0..40 {
            let x = random_planted(seed);
            let pl = x.planting.clone().unwrap();
            for i in 0..16 {
                let a = rat(i, 16);
                match (pl.above.as_ref().unwrap())(&a) {
                    Some(n) => assert!(x.xs.get(n).gt_rat(&a, 60), "seed {seed}"),
                    None => assert!(a >= *pl.sup.as_exact().unwrap()),
                }
            }
        }
    }
}
