//! Reductions between Range, C₁, Sup and Sep.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::kernel::{pair, unpair, Seq};
use crate::multivalued::{chain_reductions, Reduction};
use crate::problems::{CharFn, Ck, CkInstance, Range, RangeInstance, Sep, SepInstance, Sup, SupInstance, SupPlanting};
use crate::reals::rational::add_fast;
use crate::reals::{pow2_neg, CReal, Rational};

/// Range ≤ C₁: H(p)(⟨n,m⟩) = 1 iff p(m) = n; K flips bits.
pub fn range_le_c1() -> Reduction<Range, Ck> {
    Reduction::new(
        "range_le_c1",
        Arc::new(Range),
        Arc::new(Ck { k: 1 }),
        |x: &RangeInstance| {
            let p = x.p.clone();
            let h = Seq::from_fn(move |z| {
                let (n, m) = unpair(z);
                (p.get(m) == n) as u64
            });
            Ok(CkInstance { p: h, k: 1, witness_bound: x.witness_bound.clone() })
        },
        |_, v: &Seq| {
            let v = v.clone();
            Ok(Seq::from_fn(move |n| 1 - v.get(n).min(1)))
        },
    )
}

/// H(p)(⟨n,m⟩) = ⟨n,0⟩ at the first m with p(⟨n,m⟩) ≠ 0, else ⟨n,m+1⟩.
pub fn c1_to_injective(p: &Seq) -> Seq {
    let p = p.clone();
    // Per row: (columns scanned, first nonzero column found).
    let scans: Mutex<HashMap<u64, (u64, Option<u64>)>> = Mutex::new(HashMap::new());
    Seq::from_fn(move |z| {
        let (n, m) = unpair(z);
        let mut scans = scans.lock().unwrap_or_else(|e| e.into_inner());
        let (scanned, found) = scans.entry(n).or_insert((0, None));
        while found.is_none() && *scanned <= m {
            if p.get(pair(n, *scanned).expect("pair fits")) != 0 {
                *found = Some(*scanned);
            }
            *scanned += 1;
        }
        if *found == Some(m) { pair(n, 0).unwrap() } else { pair(n, m + 1).expect("pair fits") }
    })
}

/// C₁ ≤ Range: C₁(p)(n) = 1 − Range(H(p))(⟨n,0⟩).
pub fn c1_le_range() -> Reduction<Ck, Range> {
    Reduction::new(
        "c1_le_range",
        Arc::new(Ck { k: 1 }),
        Arc::new(Range),
        |x: &CkInstance| {
            let mut inst = RangeInstance::new(c1_to_injective(&x.p));
            if let Some(w) = x.witness_bound.clone() {
                inst = inst.with_bound(move |v| {
                    let (n, j) = unpair(v);
                    match (j, w(n)) {
                        (0, 0) => 0,
                        (0, wn) => pair(n, wn - 1).map_or(u64::MAX, |z| z + 1),
                        (j, _) => pair(n, j - 1).map_or(u64::MAX, |z| z + 1),
                    }
                });
            }
            Ok(inst)
        },
        |_, v: &Seq| {
            let v = v.clone();
            Ok(Seq::from_fn(move |n| 1 - v.get(pair(n, 0).expect("pair fits")).min(1)))
        },
    )
}

/// Highest dyadic precision the C₁ query codes support with u64 indices.
pub const SUP_C1_MAX_PRECISION: u32 = 28;

/// Code of the dyadic i/2^k (−1 ≤ i ≤ 2^k) as a C₁ row index.
pub fn dyadic_code(k: u32, i: i64) -> u64 {
    assert!(k <= SUP_C1_MAX_PRECISION && i >= -1 && i <= 1i64 << k);
    (1u64 << (k + 2)) + (i + 1) as u64
}

pub fn dyadic_decode(a: u64) -> Option<Rational> {
    if a < 4 {
        return None;
    }
    let k = 63 - a.leading_zeros() - 2;
    let i = (a - (1u64 << (k + 2))) as i64 - 1;
    (i <= 1i64 << k).then(|| Rational::new(i.into(), (1i64 << k).into()))
}

/// Least precision at which x_n − 2^{-j} > α is visible, if x_n > α.
fn certifying_precision(x: &CReal, a: &Rational) -> Option<u32> {
    (0..=96).find(|&j| x.approx(j) - x.err(j) > *a)
}

/// Sup ≤ C₁: C₁ decides the rows α ∈ A = {α : ∃n α < x_n} for dyadic α coded as
/// 2^{k+2} + i + 1; K emits α_k = i/2^k with α_k ∈ A and α_k + 2^{-k} ∉ A.
pub fn sup_le_c1() -> Reduction<Sup, Ck> {
    Reduction::new(
        "sup_le_c1",
        Arc::new(Sup),
        Arc::new(Ck { k: 1 }),
        |x: &SupInstance| {
            let xs = x.xs.clone();
            let h = Seq::from_fn(move |z| {
                let (a, m) = unpair(z);
                let Some(alpha) = dyadic_decode(a) else { return 0 };
                let (n, j) = unpair(m);
                if j > 96 {
                    return 0;
                }
                let v = xs.get(n);
                (v.approx(j as u32) - v.err(j as u32) > alpha) as u64
            });
            let mut inst = CkInstance::new(h, 1);
            if let Some(above) = x.planting.as_ref().and_then(|p| p.above.clone()) {
                let xs = x.xs.clone();
                inst = inst.with_bound(move |a| {
                    let Some(alpha) = dyadic_decode(a) else { return 0 };
                    match above(&alpha) {
                        None => 0,
                        Some(n) => {
                            let j = certifying_precision(&xs.get(n), &alpha).expect("x_n > α is certified");
                            pair(n, j as u64).map_or(u64::MAX, |z| z + 1)
                        }
                    }
                });
            }
            Ok(inst)
        },
        |_, v: &Seq| {
            let v = v.clone();
            Ok(CReal::from_approx(move |k| {
                assert!(k <= SUP_C1_MAX_PRECISION, "sup via C₁ is available up to precision {SUP_C1_MAX_PRECISION}");
                let in_a = |i: i64| v.get(dyadic_code(k, i)) == 0;
                // Largest i in [−1, 2^k] with i/2^k ∈ A; A is downward closed and −1/2^k ∈ A.
                let (mut lo, mut hi) = (-1i64, (1i64 << k) + 1);
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if in_a(mid) { lo = mid } else { hi = mid }
                }
                Rational::new(lo.into(), (1i64 << k).into())
            }))
        },
    )
}

/// x_m = Σ_{k≤m} 2^{-(p(k)+1)}.
pub fn partial_sums(p: &Seq) -> Seq<CReal> {
    let p = p.clone();
    Seq::recursive(move |seen: &[CReal]| {
        let prev = seen.last().and_then(|x| x.as_exact().cloned()).unwrap_or_else(Rational::zero);
        CReal::exact(add_fast(&prev, &pow2_neg(p.get(seen.len() as u64) as u32 + 1)))
    })
}

/// Search cap for q(n) in range_le_sup.
pub const RANGE_SUP_SEARCH: u64 = 1 << 16;

/// Range ≤ Sup: with x = sup x_m, q(n) = least k with x − x_k < 2^{-(n+1)}, and
/// n ∈ ran(p) iff p(m) = n for some m ≤ q(n).
pub fn range_le_sup() -> Reduction<Range, Sup> {
    Reduction::new(
        "range_le_sup",
        Arc::new(Range),
        Arc::new(Sup),
        |x: &RangeInstance| {
            let xs = partial_sums(&x.p);
            let planting = x.witness_bound.clone().map(|w| {
                let p = x.p.clone();
                // One forward scan of p, recording where each value first appears.
                let scan: Mutex<(u64, HashMap<u64, u64>)> = Mutex::new((0, HashMap::new()));
                let member = Seq::from_fn(move |v| {
                    let bound = w(v);
                    let mut st = scan.lock().unwrap_or_else(|e| e.into_inner());
                    while st.0 < bound {
                        let m = st.0;
                        st.1.entry(p.get(m)).or_insert(m);
                        st.0 += 1;
                    }
                    st.1.get(&v).is_some_and(|&m| m < bound)
                })
                .cached();
                let sup = CReal::from_approx(move |k| {
                    let mut num = BigInt::zero();
                    for v in (0..=k as u64).filter(|&v| member.get(v)) {
                        num.set_bit(k as u64 - v, true);
                    }
                    Rational::new(num, BigInt::one() << (k as usize + 1))
                });
                SupPlanting { sup, above: None }
            });
            Ok(SupInstance { xs, planting })
        },
        |x: &RangeInstance, s: &CReal| {
            let (p, s) = (x.p.clone(), s.clone());
            let xs = partial_sums(&p);
            Ok(Seq::from_fn(move |n| {
                let tol = CReal::exact(pow2_neg(n as u32 + 1));
                // x − x_k decreases in k: gallop to a certified k, then bisect.
                let close = |k: u64| s.sub(&xs.get(k)).lt(&tol, n as u32 + 16);
                let mut hi = 1u64;
                while !close(hi - 1) {
                    hi *= 2;
                    assert!(hi <= RANGE_SUP_SEARCH, "sup name certifies x − x_k < 2^{{-(n+1)}}");
                }
                let mut lo = hi / 2;
                while lo < hi - 1 {
                    let mid = lo + (hi - lo) / 2;
                    if close(mid - 1) { hi = mid } else { lo = mid }
                }
                let q = hi - 1;
                (0..=q).any(|m| p.get(m) == n) as u64
            }))
        },
    )
}

/// C₁ ≤ Sup through Range.
pub fn c1_le_sup() -> Reduction<Ck, Sup> {
    let mut r = chain_reductions(&c1_le_range(), &range_le_sup());
    r.id = "c1_le_sup".into();
    r
}

/// Sep ≤ C₁: h(p,q)(⟨n,m⟩) = 1 iff p(m) = n; C₁ of it separates.
pub fn sep_le_c1() -> Reduction<Sep, Ck> {
    Reduction::new(
        "sep_le_c1",
        Arc::new(Sep::new()),
        Arc::new(Ck { k: 1 }),
        |x: &SepInstance| {
            let p = x.p.clone();
            let h = Seq::from_fn(move |z| {
                let (n, m) = unpair(z);
                (p.get(m) == n) as u64
            });
            let mut inst = CkInstance::new(h, 1);
            if let Some(b) = x.planting.p_bound.clone() {
                inst = inst.with_bound(move |n| b(&n));
            }
            Ok(inst)
        },
        |_, v: &Seq| Ok(CharFn::from_seq(v)),
    )
}

/// 1 − Σ 2^{-(p(k)+1)} over k ≤ m, exact; used by tests as an oracle.
pub fn tail_gap(p: &Seq, m: u64) -> Rational {
    Rational::one() - partial_sums(p).get(m).as_exact().unwrap().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multivalued::Problem;
    use crate::problems::ck::{bounded_ck_oracle, ck_value, planted_c1_spread};
    use crate::problems::range::{bounded_range_oracle, planted_injective};
    use crate::problems::sep::{evens_odds, planted_random};
    use crate::problems::sup::{constant, increasing_to, sup_oracle};
    use crate::problems::verify_separator;
    use crate::reals::rat;

    #[test]
    fn range_le_c1_cases() {
        let r = range_le_c1();
        let o = bounded_ck_oracle(1);
        let id = RangeInstance::dominating(Seq::from_fn(|m| m));
        assert_eq!(r.solve(&id, &o).unwrap().prefix(32), vec![1; 32]);
        let dbl = RangeInstance::dominating(Seq::from_fn(|m| 2 * m));
        let y = r.solve(&dbl, &o).unwrap();
        for n in 0..50 {
            assert_eq!(y.get(n), (n % 2 == 0) as u64);
        }
        let pl = planted_injective(&[3, 5, 8], 10, 3, 9);
        let y = r.solve(&pl, &o).unwrap();
        for n in 0..10 {
            assert_eq!(y.get(n), [3, 5, 8].contains(&n) as u64);
        }
    }

    #[test]
    fn c1_le_range_cases() {
        let r = c1_le_range();
        let o = bounded_range_oracle();
        let zero = CkInstance::new(Seq::constant(0), 1).with_bound(|_| 1);
        assert_eq!(r.solve(&zero, &o).unwrap().prefix(32), vec![1; 32]);
        let target = Seq::from_fn(|n| (n % 3 == 0) as u64);
        let x = planted_c1_spread(target.clone(), |n| n % 6);
        let y = r.solve(&x, &o).unwrap();
        for n in 0..20 {
            assert_eq!(y.get(n), ck_value(&x.p, n, 1, 6));
            assert_eq!(y.get(n), target.get(n));
        }
    }

    #[test]
    fn c1_image_is_injective() {
        use rand::{Rng, SeedableRng};
        for seed in 0..100 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let table: Vec<u64> = (0..512).map(|_| if rng.gen_bool(0.1) { rng.gen_range(1..4) } else { 0 }).collect();
            let p = Seq::from_fn(move |z| table[(z % 512) as usize]);
            let h = c1_to_injective(&p);
            let mut seen = std::collections::HashSet::new();
            for z in 0..2000 {
                assert!(seen.insert(h.get(z)), "seed {seed}");
            }
        }
    }

    #[test]
    fn sup_le_c1_cases() {
        let r = sup_le_c1();
        let o = bounded_ck_oracle(1);
        for (x, s) in [(constant(rat(1, 2)), rat(1, 2)), (increasing_to(rat(1, 1)), rat(1, 1)), (constant(rat(0, 1)), rat(0, 1))] {
            let y = r.solve(&x, &o).unwrap();
            assert!(y.within(&s, 16), "{s}");
            assert!(Sup.verify(&x, &y, 20).is_accept());
        }
    }

    #[test]
    fn dyadic_codes_roundtrip() {
        for k in 0..6u32 {
            for i in -1..=(1i64 << k) {
                assert_eq!(dyadic_decode(dyadic_code(k, i)), Some(Rational::new(i.into(), (1i64 << k).into())));
            }
        }
    }

    #[test]
    fn range_le_sup_cases() {
        let r = range_le_sup();
        let o = sup_oracle();
        let id = RangeInstance::dominating(Seq::from_fn(|m| m));
        assert_eq!(r.solve(&id, &o).unwrap().prefix(32), vec![1; 32]);
        let dbl = RangeInstance::dominating(Seq::from_fn(|m| 2 * m));
        let y = r.solve(&dbl, &o).unwrap();
        for n in 0..40 {
            assert_eq!(y.get(n), (n % 2 == 0) as u64);
        }
        // Exact oracle: sup of the doubling instance is 2/3.
        let exact: crate::multivalued::Oracle<Sup> = crate::multivalued::Oracle::total("exact", |_| Ok(CReal::exact(rat(2, 3))));
        let y = r.solve(&dbl, &exact).unwrap();
        for n in 0..40 {
            assert_eq!(y.get(n), (n % 2 == 0) as u64);
        }
        assert!(tail_gap(&Seq::from_fn(|m| m), 3) == pow2_neg(4));
    }

    #[test]
    fn range_with_two_values_has_small_q() {
        // p = 0, 7, then values ≥ 10.
        let p = Seq::from_fn(|m| match m {
            0 => 0,
            1 => 7,
            m => 10 + m,
        });
        let x = RangeInstance::new(p.clone()).with_bound(|n| if n < 10 { 2 } else { n });
        let y = range_le_sup().solve(&x, &sup_oracle()).unwrap();
        for n in 0..10 {
            assert_eq!(y.get(n), (n == 0 || n == 7) as u64);
        }
    }

    #[test]
    fn c1_le_sup_chain() {
        let r = c1_le_sup();
        assert_eq!(r.id, "c1_le_sup");
        let target = Seq::from_fn(|n| (n % 2) as u64);
        let x = planted_c1_spread(target.clone(), |n| n % 3);
        let y = r.solve(&x, &sup_oracle()).unwrap();
        for n in 0..12 {
            assert_eq!(y.get(n), target.get(n));
        }
    }

    #[test]
    fn sep_le_c1_cases() {
        let r = sep_le_c1();
        let o = bounded_ck_oracle(1);
        let inst = evens_odds();
        let s = r.solve(&inst, &o).unwrap();
        for i in 0..32 {
            assert_eq!(s.at(&(2 * i)), 0);
        }
        assert!(verify_separator(&inst, &s, 64).is_accept());
        for seed in 0..20 {
            let inst = planted_random(seed);
            assert!(r.check(&inst, &o, 64).unwrap().is_accept());
        }
    }
}
