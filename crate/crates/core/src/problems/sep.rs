//! Sep: given p, q with disjoint ranges, find r ∈ 2^ℕ with r(p(n)) = 0 and r(q(n)) = 1.

use std::fmt::Debug;
use std::hash::Hash;
use std::marker::PhantomData;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Seq, StreamSpec};
use crate::multivalued::{Oracle, Problem, Verdict};

/// Values the two enumerations range over: ℕ, or big naturals for string codes.
pub trait SepValue: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static {}
impl SepValue for u64 {}
impl SepValue for BigUint {}

/// A characteristic function over values; entries other than 0/1 are invalid.
pub struct CharFn<V> {
    f: Arc<dyn Fn(&V) -> u64 + Send + Sync>,
}

impl<V> Clone for CharFn<V> {
    fn clone(&self) -> Self {
        CharFn { f: Arc::clone(&self.f) }
    }
}

impl<V: SepValue> CharFn<V> {
    pub fn new(f: impl Fn(&V) -> u64 + Send + Sync + 'static) -> Self {
        CharFn { f: Arc::new(f) }
    }

    pub fn at(&self, v: &V) -> u64 {
        (self.f)(v)
    }

    pub fn complement(&self) -> Self {
        let g = self.clone();
        CharFn::new(move |v| 1 - g.at(v).min(1))
    }
}

impl CharFn<u64> {
    pub fn from_seq(s: &Seq) -> Self {
        let s = s.clone();
        CharFn::new(move |v| s.get(*v))
    }

    pub fn to_seq(&self) -> Seq {
        let g = self.clone();
        Seq::from_fn(move |n| g.at(&n))
    }
}

/// Side information attached to generated instances.
pub struct SepPlanting<V> {
    pub separator: Option<CharFn<V>>,
    /// v ∈ ran(p) iff p(m) = v for some m < p_bound(v).
    pub p_bound: Option<Arc<dyn Fn(&V) -> u64 + Send + Sync>>,
    /// Finite descriptions of p and q, when the instance has one.
    pub spec: Option<(StreamSpec, StreamSpec)>,
}

impl<V> Clone for SepPlanting<V> {
    fn clone(&self) -> Self {
        SepPlanting { separator: self.separator.clone(), p_bound: self.p_bound.clone(), spec: self.spec.clone() }
    }
}

impl<V> Default for SepPlanting<V> {
    fn default() -> Self {
        SepPlanting { separator: None, p_bound: None, spec: None }
    }
}

pub struct SepInstance<V = u64> {
    pub p: Seq<V>,
    pub q: Seq<V>,
    pub planting: SepPlanting<V>,
}

impl<V> Clone for SepInstance<V> {
    fn clone(&self) -> Self {
        SepInstance { p: self.p.clone(), q: self.q.clone(), planting: self.planting.clone() }
    }
}

impl<V: SepValue> SepInstance<V> {
    pub fn new(p: Seq<V>, q: Seq<V>) -> Self {
        SepInstance { p, q, planting: SepPlanting::default() }
    }

    pub fn with_separator(mut self, r: CharFn<V>) -> Self {
        self.planting.separator = Some(r);
        self
    }
}

impl SepInstance<u64> {
    pub fn from_specs(p: StreamSpec, q: StreamSpec) -> Self {
        let ps = p.clone();
        let p_bound: Arc<dyn Fn(&u64) -> u64 + Send + Sync> = Arc::new(move |v| ps.first_index_of(*v).map_or(0, |m| m + 1));
        SepInstance {
            p: p.build(),
            q: q.build(),
            planting: SepPlanting { separator: None, p_bound: Some(p_bound), spec: Some((p, q)) },
        }
    }
}

/// r(p(n)) = 0 ∧ r(q(n)) = 1 for all n < depth.
pub fn verify_separator<V: SepValue>(inst: &SepInstance<V>, r: &CharFn<V>, depth: usize) -> Verdict {
    for n in 0..depth as u64 {
        let (a, b) = (inst.p.get(n), inst.q.get(n));
        let (ra, rb) = (r.at(&a), r.at(&b));
        if ra > 1 || rb > 1 {
            return Verdict::reject(format!("separator value not binary at n={n}"));
        }
        if ra != 0 {
            return Verdict::reject(format!("r(p({n})) = r({a:?}) ≠ 0"));
        }
        if rb != 1 {
            return Verdict::reject(format!("r(q({n})) = r({b:?}) ≠ 1"));
        }
    }
    Verdict::Accept
}

/// Disjointness of ranges on the first `n` values of each side.
pub fn check_disjoint<V: SepValue>(inst: &SepInstance<V>, n: usize) -> Verdict {
    let a: std::collections::BTreeSet<V> = inst.p.prefix(n).into_iter().collect();
    for (m, v) in inst.q.prefix(n).into_iter().enumerate() {
        if a.contains(&v) {
            return Verdict::reject(format!("q({m}) = {v:?} is also enumerated by p"));
        }
    }
    Verdict::Accept
}

pub struct Sep<V = u64>(PhantomData<fn() -> V>);

impl<V> Default for Sep<V> {
    fn default() -> Self {
        Sep(PhantomData)
    }
}

impl<V: SepValue> Sep<V> {
    pub fn new() -> Self {
        Self::default()
    }
}

impl<V: SepValue> Problem for Sep<V> {
    type Instance = SepInstance<V>;
    type Solution = CharFn<V>;

    fn id(&self) -> String {
        "sep".into()
    }

    fn domain_check(&self, x: &SepInstance<V>, fuel: u64) -> Verdict {
        check_disjoint(x, fuel.min(4096) as usize)
    }

    fn verify(&self, x: &SepInstance<V>, r: &CharFn<V>, depth: usize) -> Verdict {
        verify_separator(x, r, depth)
    }
}

/// Oracle answering with the planted separator.
pub fn planted_sep_oracle<V: SepValue>() -> Oracle<Sep<V>> {
    Oracle::new(
        "planted",
        "instances carrying a planted separator",
        |x: &SepInstance<V>| x.planting.separator.as_ref().map(|_| ()).ok_or_else(|| "no planted separator".to_string()),
        |x: &SepInstance<V>| Ok(x.planting.separator.clone().expect("checked by class")),
    )
}

/// Random-access pseudo-random bit r₀(n).
pub fn hashed_bit(seed: u64, n: u64) -> u64 {
    let mut z = seed ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31)) & 1
}

/// p enumerating r₀⁻¹(i) with repetition padding: p(2k) = k-th element, p(2k+1) = ⌊k/2⌋-th.
fn enumerate_class(r0: Arc<dyn Fn(u64) -> u64 + Send + Sync>, class: u64) -> Seq {
    let elems = {
        let r0 = Arc::clone(&r0);
        let mut next = 0u64;
        Seq::from_producer(move || loop {
            let v = next;
            next += 1;
            if r0(v) == class {
                return crate::kernel::Step::Emit(v);
            }
        })
    };
    Seq::from_fn(move |n| if n % 2 == 0 { elems.get(n / 2) } else { elems.get(n / 4) })
}

/// Planted instance from a pseudo-random r₀ with infinite classes.
pub fn planted_random(seed: u64) -> SepInstance {
    let r0: Arc<dyn Fn(u64) -> u64 + Send + Sync> = Arc::new(move |n| match n {
        0 => 0,
        1 => 1,
        _ => hashed_bit(seed, n),
    });
    let p = enumerate_class(Arc::clone(&r0), 0);
    let q = enumerate_class(Arc::clone(&r0), 1);
    let sep = CharFn::new(move |v: &u64| r0(*v));
    let mut inst = SepInstance::new(p, q).with_separator(sep);
    // The k-th element of a class is at least k, and sits at index 2k.
    inst.planting.p_bound = Some(Arc::new(|v: &u64| 2 * v + 1));
    inst
}

/// Planted instance with finite ranges inside [0, bound), both nonempty, as eventually periodic tables.
pub fn planted_finite(seed: u64, bound: u64) -> SepInstance {
    assert!(bound >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    let mut r0 = vec![0u64; bound as usize];
    for v in 0..bound {
        match rng.gen_range(0..3) {
            0 => zeros.push(v),
            1 => {
                ones.push(v);
                r0[v as usize] = 1;
            }
            _ => {
                r0[v as usize] = rng.gen_range(0..2);
            }
        }
    }
    if zeros.is_empty() {
        let v = ones.pop().unwrap_or(0);
        r0[v as usize] = 0;
        zeros.push(v);
    }
    if ones.is_empty() {
        let v = if zeros.len() > 1 { zeros.pop().unwrap() } else { (zeros[0] + 1) % bound };
        r0[v as usize] = 1;
        ones.push(v);
    }
    let table = |set: &Vec<u64>, rng: &mut ChaCha8Rng| {
        let len = set.len() + rng.gen_range(0..set.len() + 2);
        let mut head: Vec<u64> = set.clone();
        while head.len() < len {
            head.push(set[rng.gen_range(0..set.len())]);
        }
        for i in (1..head.len()).rev() {
            head.swap(i, rng.gen_range(0..=i));
        }
        StreamSpec::table(head, vec![set[rng.gen_range(0..set.len())]])
    };
    let (ps, qs) = (table(&zeros, &mut rng), table(&ones, &mut rng));
    let r = StreamSpec::table(r0, vec![0]).build();
    SepInstance::from_specs(ps, qs).with_separator(CharFn::from_seq(&r))
}

/// p = evens, q = odds.
pub fn evens_odds() -> SepInstance {
    SepInstance::from_specs(StreamSpec::Affine { mul: 2, add: 0 }, StreamSpec::Affine { mul: 2, add: 1 })
        .with_separator(CharFn::new(|v: &u64| v % 2))
}
