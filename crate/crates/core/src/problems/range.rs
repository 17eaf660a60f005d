//! Range: injective p ↦ characteristic function of ran(p).

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::Seq;
use crate::multivalued::{Oracle, Problem, Verdict};

use super::ck::UNPLANTED_SEARCH;

type BoundFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// An injective sequence. `witness_bound(n)` is planting metadata:
/// n ∈ ran(p) iff p(m) = n for some m < witness_bound(n).
#[derive(Clone)]
pub struct RangeInstance {
    pub p: Seq,
    pub witness_bound: Option<BoundFn>,
}

impl RangeInstance {
    pub fn new(p: Seq) -> Self {
        RangeInstance { p, witness_bound: None }
    }

    pub fn with_bound(mut self, w: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        self.witness_bound = Some(Arc::new(w));
        self
    }

    /// p with p(m) ≥ m, so n can only be hit below n+1.
    pub fn dominating(p: Seq) -> Self {
        RangeInstance::new(p).with_bound(|n| n + 1)
    }

    /// Range(p)(n) by the planted bounded search.
    pub fn planted_value(&self, n: u64) -> Option<u64> {
        let w = self.witness_bound.as_ref()?;
        Some((0..w(n)).any(|m| self.p.get(m) == n) as u64)
    }
}

pub fn in_range_below(p: &Seq, n: u64, bound: u64) -> bool {
    (0..bound).any(|m| p.get(m) == n)
}

pub struct Range;

impl Problem for Range {
    type Instance = RangeInstance;
    type Solution = Seq;

    fn id(&self) -> String {
        "range".into()
    }

    fn domain_check(&self, x: &RangeInstance, fuel: u64) -> Verdict {
        let mut seen = HashSet::new();
        for (m, v) in x.p.prefix(fuel.min(4096) as usize).into_iter().enumerate() {
            if !seen.insert(v) {
                return Verdict::reject(format!("p is not injective: value {v} repeats at {m}"));
            }
        }
        Verdict::Accept
    }

    fn verify(&self, x: &RangeInstance, y: &Seq, depth: usize) -> Verdict {
        let mut out = Verdict::Accept;
        for n in 0..depth as u64 {
            let got = y.get(n);
            if got > 1 {
                return Verdict::reject(format!("value {got} at {n} is not binary"));
            }
            match x.planted_value(n) {
                Some(want) if want != got => return Verdict::reject(format!("Range(p)({n}) = {want}, got {got}")),
                Some(_) => {}
                None => {
                    let seen = in_range_below(&x.p, n, UNPLANTED_SEARCH);
                    match (seen, got) {
                        (true, 0) => return Verdict::reject(format!("{n} is in the range")),
                        (true, 1) => {}
                        _ => out = Verdict::Undetermined,
                    }
                }
            }
        }
        out
    }
}

pub fn bounded_range_oracle() -> Oracle<Range> {
    Oracle::new(
        "bounded",
        "instances with a planted witness bound",
        |x: &RangeInstance| x.witness_bound.as_ref().map(|_| ()).ok_or_else(|| "no witness bound".to_string()),
        |x: &RangeInstance| {
            let x = x.clone();
            Ok(Seq::from_fn(move |n| x.planted_value(n).unwrap()).cached())
        },
    )
}

/// Injective p whose range meets [0, bound) exactly in `small`; every other
/// value is bound + m at position m.
pub fn planted_injective(small: &[u64], bound: u64, extra_slots: usize, seed: u64) -> RangeInstance {
    assert!(small.iter().all(|&v| v < bound));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = small.len() + extra_slots;
    let mut slots: Vec<Option<u64>> = small.iter().map(|&v| Some(v)).chain(std::iter::repeat_n(None, extra_slots)).collect();
    slots.shuffle(&mut rng);
    let slots = Arc::new(slots);
    let s2 = Arc::clone(&slots);
    let p = Seq::from_fn(move |m| match s2.get(m as usize) {
        Some(Some(v)) => *v,
        _ => bound + m,
    });
    RangeInstance::new(p).with_bound(move |n| if n < bound { len as u64 } else { n - bound + 1 })
}

/// Random planted injective instance with range ∩ [0, bound) of random size.
pub fn random_planted_injective(seed: u64, bound: u64) -> RangeInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut vals: Vec<u64> = (0..bound).filter(|_| rng.gen_bool(0.4)).collect();
    vals.shuffle(&mut rng);
    let extra = rng.gen_range(0..8);
    planted_injective(&vals, bound, extra, seed)
}
