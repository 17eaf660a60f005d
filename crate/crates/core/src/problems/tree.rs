//! Trees over 2 and over bounded alphabets, with Path₂ and Path_B.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::automaton::Automaton;
use crate::kernel::{Seq, SeqCode, Step};
use crate::multivalued::{Oracle, Problem, ReduceError, Verdict};

type Pred<T> = Arc<dyn Fn(&[T]) -> bool + Send + Sync>;

/// A binary tree given by its membership predicate (the characteristic function
/// of its node codes), optionally with a decision procedure for "has an infinite
/// extension", an automaton, and a planted path.
#[derive(Clone)]
pub struct TreeChar {
    member: Pred<u8>,
    extendible: Option<Pred<u8>>,
    pub automaton: Option<Automaton>,
    pub planted: Option<Seq>,
}

impl TreeChar {
    pub fn new(member: impl Fn(&[u8]) -> bool + Send + Sync + 'static) -> Self {
        TreeChar { member: Arc::new(member), extendible: None, automaton: None, planted: None }
    }

    pub fn from_automaton(a: Automaton) -> Self {
        let live = a.live();
        let (m, e) = (a.clone(), a.clone());
        TreeChar {
            member: Arc::new(move |t| m.accepts_bits(t)),
            extendible: Some(Arc::new(move |t| {
                let v: Vec<u64> = t.iter().map(|&b| b as u64).collect();
                e.run(&v).is_some_and(|s| live[s])
            })),
            automaton: Some(a),
            planted: None,
        }
    }

    /// Tree read from a characteristic sequence over binary-string codes.
    pub fn from_chi(chi: Seq) -> Self {
        TreeChar::new(move |t| SeqCode::encode_bits_u64(t).map(|c| chi.get(c) == 1).unwrap_or(false))
    }

    pub fn full() -> Self {
        TreeChar::from_automaton(Automaton::full(2))
    }

    pub fn with_planted(mut self, path: Seq) -> Self {
        self.planted = Some(path);
        self
    }

    pub fn with_extendible(mut self, e: impl Fn(&[u8]) -> bool + Send + Sync + 'static) -> Self {
        self.extendible = Some(Arc::new(e));
        self
    }

    pub fn contains(&self, t: &[u8]) -> bool {
        (self.member)(t)
    }

    /// Decides whether t has an infinite extension, when the tree supports it.
    pub fn is_extendible(&self, t: &[u8]) -> Option<bool> {
        self.extendible.as_ref().map(|e| e(t))
    }

    pub fn has_extendible(&self) -> bool {
        self.extendible.is_some()
    }

    /// χ_T over binary-string codes (non-binary codes map to 0).
    pub fn chi(&self) -> Seq {
        let m = Arc::clone(&self.member);
        Seq::from_fn(move |n| SeqCode::decode_bits_u64(n).map(|t| m(&t) as u64).unwrap_or(0))
    }

    /// Members of length n, found by extending members level by level.
    pub fn level(&self, n: usize) -> Vec<Vec<u8>> {
        let mut cur: Vec<Vec<u8>> = if self.contains(&[]) { vec![vec![]] } else { vec![] };
        for _ in 0..n {
            let mut next = Vec::new();
            for t in &cur {
                for b in 0..2u8 {
                    let mut u = t.clone();
                    u.push(b);
                    if self.contains(&u) {
                        next.push(u);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Does t have an extension of length `len` inside the tree?
    pub fn extends_to(&self, t: &[u8], len: usize) -> bool {
        if !self.contains(t) {
            return false;
        }
        if t.len() >= len {
            return true;
        }
        let mut u = t.to_vec();
        for b in 0..2u8 {
            u.push(b);
            if self.extends_to(&u, len) {
                return true;
            }
            u.pop();
        }
        false
    }

    /// Downward closure on 2^{≤depth} (exhaustive) and nonempty levels up to depth.
    pub fn check(&self, depth: usize) -> Verdict {
        let brute = depth.min(12);
        for len in 1..=brute {
            for bits in 0..(1u32 << len) {
                let t: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
                if self.contains(&t) && !self.contains(&t[..len - 1]) {
                    return Verdict::reject(format!("not downward closed at {t:?}"));
                }
            }
        }
        if !self.extends_to(&[], depth) {
            return Verdict::reject(format!("level {depth} is empty"));
        }
        Verdict::Accept
    }
}

/// Checks that every prefix of `path` up to `depth` is a binary member.
pub fn verify_binary_path(t: &TreeChar, path: &Seq, depth: usize) -> Verdict {
    let bits = path.prefix(depth);
    if let Some(i) = bits.iter().position(|&b| b > 1) {
        return Verdict::reject(format!("path value {} at {i} is not binary", bits[i]));
    }
    let bits: Vec<u8> = bits.iter().map(|&b| b as u8).collect();
    for n in 0..=depth {
        if !t.contains(&bits[..n]) {
            return Verdict::reject(format!("prefix of length {n} is not in the tree"));
        }
    }
    Verdict::Accept
}

/// Path₂: infinite binary tree ↦ its infinite paths.
#[derive(Default)]
pub struct Path2;

impl Problem for Path2 {
    type Instance = TreeChar;
    type Solution = Seq;

    fn id(&self) -> String {
        "path2".into()
    }

    fn domain_check(&self, t: &TreeChar, fuel: u64) -> Verdict {
        t.check(fuel.min(16) as usize)
    }

    fn verify(&self, t: &TreeChar, p: &Seq, depth: usize) -> Verdict {
        verify_binary_path(t, p, depth)
    }
}

/// Leftmost path through a tree with decidable extendibility.
pub fn leftmost_decidable(t: &TreeChar) -> Result<Seq, ReduceError> {
    if t.is_extendible(&[]) != Some(true) {
        return Err(ReduceError::Invalid("tree is empty".into()));
    }
    let t = t.clone();
    let mut cur: Vec<u8> = Vec::new();
    Ok(Seq::from_producer(move || {
        cur.push(0);
        if t.is_extendible(&cur) != Some(true) {
            cur.pop();
            cur.push(1);
        }
        Step::Emit(*cur.last().unwrap() as u64)
    }))
}

/// Leftmost path via automaton liveness.
pub fn regular_path_oracle() -> Oracle<Path2> {
    Oracle::new(
        "regular",
        "trees presented by a finite automaton",
        |t: &TreeChar| t.automaton.as_ref().map(|_| ()).ok_or_else(|| "tree has no automaton".to_string()),
        |t: &TreeChar| t.automaton.as_ref().unwrap().leftmost_path().map_err(|e| ReduceError::Invalid(e.to_string())),
    )
}

/// Leftmost path via a decision procedure for extendibility.
pub fn decidable_path_oracle() -> Oracle<Path2> {
    Oracle::new(
        "decidable",
        "trees with decidable extendibility",
        |t: &TreeChar| if t.has_extendible() { Ok(()) } else { Err("extendibility not decidable".into()) },
        leftmost_decidable,
    )
}

pub fn planted_path_oracle() -> Oracle<Path2> {
    Oracle::new(
        "planted",
        "trees carrying a planted path",
        |t: &TreeChar| t.planted.as_ref().map(|_| ()).ok_or_else(|| "no planted path".to_string()),
        |t: &TreeChar| Ok(t.planted.clone().unwrap()),
    )
}

/// Prefers the planted path, then an automaton, then decidable extendibility.
pub fn auto_path_oracle() -> Oracle<Path2> {
    Oracle::new(
        "auto",
        "planted, regular, or decidable trees",
        |t: &TreeChar| {
            if t.planted.is_some() || t.automaton.is_some() || t.has_extendible() {
                Ok(())
            } else {
                Err("no path information attached to the tree".into())
            }
        },
        |t: &TreeChar| {
            if let Some(p) = &t.planted {
                Ok(p.clone())
            } else if let Some(a) = &t.automaton {
                a.leftmost_path().map_err(|e| ReduceError::Invalid(e.to_string()))
            } else {
                leftmost_decidable(t)
            }
        },
    )
}

type BoundFn = Arc<dyn Fn(usize) -> BigUint + Send + Sync>;
type ChildFn = Arc<dyn Fn(&[BigUint]) -> Vec<BigUint> + Send + Sync>;
type RangeChildFn = Arc<dyn Fn(&[BigUint], &BigUint, &BigUint) -> bool + Send + Sync>;

/// A tree over ℕ with t(i) < b(i) for every member t.
#[derive(Clone)]
pub struct BoundedTree {
    member: Pred<BigUint>,
    bound: BoundFn,
    children: Option<ChildFn>,
    range_child: Option<RangeChildFn>,
    extendible: Option<Pred<BigUint>>,
    pub planted: Option<Seq<BigUint>>,
}

/// Bounds above this are not enumerated by brute force.
pub const BRUTE_CHILD_LIMIT: u64 = 1 << 16;

impl BoundedTree {
    pub fn new(
        member: impl Fn(&[BigUint]) -> bool + Send + Sync + 'static,
        bound: impl Fn(usize) -> BigUint + Send + Sync + 'static,
    ) -> Self {
        BoundedTree {
            member: Arc::new(member),
            bound: Arc::new(bound),
            children: None,
            range_child: None,
            extendible: None,
            planted: None,
        }
    }

    /// Members are exactly the sequences with t(i) < b(i).
    pub fn full(bound: impl Fn(usize) -> BigUint + Send + Sync + 'static) -> Self {
        let bound: BoundFn = Arc::new(bound);
        let (b, b2) = (Arc::clone(&bound), Arc::clone(&bound));
        let member: Pred<BigUint> = Arc::new(move |t| t.iter().enumerate().all(|(i, v)| v < &b(i)));
        let m2 = Arc::clone(&member);
        BoundedTree {
            member,
            bound,
            children: None,
            range_child: Some(Arc::new(move |t, lo, _| m2(t) && lo < &b2(t.len()))),
            extendible: Some(Arc::new(|_| true)),
            planted: None,
        }
        .fix_extendible()
    }

    fn fix_extendible(mut self) -> Self {
        let m = Arc::clone(&self.member);
        let b = Arc::clone(&self.bound);
        self.extendible = Some(Arc::new(move |t| m(t) && (0..=t.len()).all(|i| !b(i).is_zero())));
        self
    }

    pub fn with_children(mut self, c: impl Fn(&[BigUint]) -> Vec<BigUint> + Send + Sync + 'static) -> Self {
        self.children = Some(Arc::new(c));
        self
    }

    pub fn with_extendible(mut self, e: impl Fn(&[BigUint]) -> bool + Send + Sync + 'static) -> Self {
        self.extendible = Some(Arc::new(e));
        self
    }

    /// Supplies "t has a child value in [lo, hi)" for levels too wide to enumerate.
    pub fn with_range_child(mut self, f: impl Fn(&[BigUint], &BigUint, &BigUint) -> bool + Send + Sync + 'static) -> Self {
        self.range_child = Some(Arc::new(f));
        self
    }

    pub fn with_planted(mut self, p: Seq<BigUint>) -> Self {
        self.planted = Some(p);
        self
    }

    pub fn contains(&self, t: &[BigUint]) -> bool {
        (self.member)(t)
    }

    pub fn bound(&self, i: usize) -> BigUint {
        (self.bound)(i)
    }

    pub fn is_extendible(&self, t: &[BigUint]) -> Option<bool> {
        self.extendible.as_ref().map(|e| e(t))
    }

    pub fn has_extendible(&self) -> bool {
        self.extendible.is_some()
    }

    /// Children values v with t*v a member, ascending. Brute force over
    /// [0, b(|t|)) unless a child function was supplied.
    pub fn children(&self, t: &[BigUint]) -> Result<Vec<BigUint>, ReduceError> {
        if let Some(c) = &self.children {
            return Ok(c(t));
        }
        let b = self.bound(t.len());
        let n = b.to_u64().filter(|&n| n <= BRUTE_CHILD_LIMIT).ok_or_else(|| {
            ReduceError::FuelExhausted(format!("level {} bound {b} too large to enumerate", t.len()))
        })?;
        let mut u = t.to_vec();
        u.push(BigUint::zero());
        let mut out = Vec::new();
        for v in 0..n {
            *u.last_mut().unwrap() = BigUint::from(v);
            if self.contains(&u) {
                out.push(BigUint::from(v));
            }
        }
        Ok(out)
    }

    /// Is there v ∈ [lo, hi) with t*v a member?
    pub fn has_child_in(&self, t: &[BigUint], lo: &BigUint, hi: &BigUint) -> Result<bool, ReduceError> {
        if let Some(f) = &self.range_child {
            return Ok(f(t, lo, hi));
        }
        let hi = hi.min(&self.bound(t.len())).clone();
        if lo >= &hi {
            return Ok(false);
        }
        if (&hi - lo) <= BigUint::from(BRUTE_CHILD_LIMIT) {
            let mut u = t.to_vec();
            u.push(lo.clone());
            let mut v = lo.clone();
            while v < hi {
                *u.last_mut().unwrap() = v.clone();
                if self.contains(&u) {
                    return Ok(true);
                }
                v += 1u32;
            }
            return Ok(false);
        }
        Ok(self.children(t)?.iter().any(|v| v >= lo && v < &hi))
    }

    pub fn extends_to(&self, t: &[BigUint], len: usize) -> Result<bool, ReduceError> {
        if !self.contains(t) {
            return Ok(false);
        }
        if t.len() >= len {
            return Ok(true);
        }
        let mut u = t.to_vec();
        for v in self.children(t)? {
            u.push(v);
            if self.extends_to(&u, len)? {
                return Ok(true);
            }
            u.pop();
        }
        Ok(false)
    }
}

pub fn verify_bounded_path(t: &BoundedTree, path: &Seq<BigUint>, depth: usize) -> Verdict {
    let vals = path.prefix(depth);
    for (i, v) in vals.iter().enumerate() {
        if v >= &t.bound(i) {
            return Verdict::reject(format!("path value at {i} violates the bound"));
        }
    }
    for n in 0..=depth {
        if !t.contains(&vals[..n]) {
            return Verdict::reject(format!("prefix of length {n} is not in the tree"));
        }
    }
    Verdict::Accept
}

/// Path_B: infinite bounded tree ↦ its infinite paths.
#[derive(Default)]
pub struct PathB;

impl Problem for PathB {
    type Instance = BoundedTree;
    type Solution = Seq<BigUint>;

    fn id(&self) -> String {
        "pathB".into()
    }

    fn domain_check(&self, t: &BoundedTree, fuel: u64) -> Verdict {
        match t.extends_to(&[], fuel.min(8) as usize) {
            Ok(true) => Verdict::Accept,
            Ok(false) => Verdict::reject("tree has an empty level"),
            Err(_) => Verdict::Undetermined,
        }
    }

    fn verify(&self, t: &BoundedTree, p: &Seq<BigUint>, depth: usize) -> Verdict {
        verify_bounded_path(t, p, depth)
    }
}

/// Leftmost path of a bounded tree with decidable extendibility.
pub fn leftmost_bounded(t: &BoundedTree) -> Result<Seq<BigUint>, ReduceError> {
    if t.is_extendible(&[]) != Some(true) {
        return Err(ReduceError::Invalid("bounded tree is empty".into()));
    }
    t.children(&[])?;
    let t = t.clone();
    let mut cur: Vec<BigUint> = Vec::new();
    Ok(Seq::from_producer(move || {
        let kids = t.children(&cur).expect("children enumerable");
        let v = kids
            .into_iter()
            .find(|v| {
                cur.push(v.clone());
                let ok = t.is_extendible(&cur) == Some(true);
                cur.pop();
                ok
            })
            .expect("extendible node has an extendible child");
        cur.push(v.clone());
        Step::Emit(v)
    }))
}

pub fn planted_bounded_oracle() -> Oracle<PathB> {
    Oracle::new(
        "planted",
        "bounded trees carrying a planted path",
        |t: &BoundedTree| t.planted.as_ref().map(|_| ()).ok_or_else(|| "no planted path".to_string()),
        |t: &BoundedTree| Ok(t.planted.clone().unwrap()),
    )
}

pub fn decidable_bounded_oracle() -> Oracle<PathB> {
    Oracle::new(
        "decidable",
        "bounded trees with decidable extendibility",
        |t: &BoundedTree| if t.has_extendible() { Ok(()) } else { Err("extendibility not decidable".into()) },
        leftmost_bounded,
    )
}

pub fn auto_bounded_oracle() -> Oracle<PathB> {
    Oracle::new(
        "auto",
        "planted or decidable bounded trees",
        |t: &BoundedTree| {
            if t.planted.is_some() || t.has_extendible() {
                Ok(())
            } else {
                Err("no path information attached to the tree".into())
            }
        },
        |t: &BoundedTree| match &t.planted {
            Some(p) => Ok(p.clone()),
            None => leftmost_bounded(t),
        },
    )
}

/// Bounded tree whose only infinite path is the given periodic sequence; members
/// are the prefixes of the path and their one-step deviations, which die at once.
pub fn planted_unique_path(period: Vec<u64>, bound: u64) -> BoundedTree {
    assert!(period.iter().all(|&v| v < bound) && !period.is_empty());
    let per: Vec<BigUint> = period.iter().map(|&v| BigUint::from(v)).collect();
    let per2 = per.clone();
    let b = BigUint::from(bound);
    let at = move |i: usize| per2[i % per2.len()].clone();
    let at2 = at.clone();
    BoundedTree::new(
        move |t| {
            let k = t.iter().enumerate().position(|(i, v)| v != &at(i));
            match k {
                None => true,
                Some(k) => k + 1 == t.len() && t[k] < b,
            }
        },
        move |_| BigUint::from(bound),
    )
    .with_extendible(move |t| t.iter().enumerate().all(|(i, v)| v == &at2(i)))
    .with_planted(Seq::from_fn(move |n| per[n as usize % per.len()].clone()))
}

pub fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// ⌈log₂ b⌉ with a minimum of one bit.
pub fn block_width(b: &BigUint) -> u64 {
    if b <= &BigUint::one() { 1 } else { (b - 1u32).bits().max(1) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_tree_levels() {
        let t = TreeChar::full();
        assert_eq!(t.level(3).len(), 8);
        assert!(t.check(10).is_accept());
        assert!(verify_binary_path(&t, &Seq::constant(1), 40).is_accept());
        assert!(verify_binary_path(&t, &Seq::constant(2), 40).is_reject());
    }

    #[test]
    fn chi_roundtrip() {
        let t = TreeChar::from_automaton(Automaton::no_consecutive_ones());
        let u = TreeChar::from_chi(t.chi());
        for len in 0..8 {
            for bits in 0..(1u32 << len) {
                let s: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
                assert_eq!(t.contains(&s), u.contains(&s));
            }
        }
    }

    #[test]
    fn oracles_give_paths() {
        let t = TreeChar::from_automaton(Automaton::forcing_periodic(&[Some(1), None]));
        for o in [regular_path_oracle(), decidable_path_oracle(), auto_path_oracle()] {
            let p = o.realize(&t).unwrap();
            assert!(Path2.verify(&t, &p, 64).is_accept());
        }
        assert!(planted_path_oracle().realize(&t).is_err());
    }

    #[test]
    fn non_downward_closed_rejected() {
        let t = TreeChar::new(|s: &[u8]| s.len() != 2);
        assert!(t.check(4).is_reject());
    }

    #[test]
    fn unique_path_tree() {
        let t = planted_unique_path(vec![1, 2], 3);
        let p = planted_bounded_oracle().realize(&t).unwrap();
        assert!(PathB.verify(&t, &p, 16).is_accept());
        let q = decidable_bounded_oracle().realize(&t).unwrap();
        assert_eq!(p.prefix(16), q.prefix(16));
        assert!(t.contains(&[big(1), big(0)]));
        assert!(!t.contains(&[big(1), big(0), big(0)]));
    }

    #[test]
    fn full_bounded_leftmost_is_zero() {
        let t = BoundedTree::full(|_| big(3));
        let p = leftmost_bounded(&t).unwrap();
        assert_eq!(p.prefix(10), vec![big(0); 10]);
        assert_eq!(t.children(&[big(2)]).unwrap().len(), 3);
    }

    #[test]
    fn widths() {
        assert_eq!(block_width(&big(1)), 1);
        assert_eq!(block_width(&big(2)), 1);
        assert_eq!(block_width(&big(3)), 2);
        assert_eq!(block_width(&big(4)), 2);
        assert_eq!(block_width(&big(5)), 3);
    }
}
