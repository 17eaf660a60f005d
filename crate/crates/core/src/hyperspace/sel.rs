//! Selection: a point of a nonempty closed A inside a compact K, through a
//! bounded tree of cover indices.

use std::collections::HashMap;
use std::marker::PhantomData;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;

use super::spaces::{cantor_compact, cantor_complement_tree};
use super::{ClosedMinus, CompactName, Cover, SelSpace, COVER_SCAN_FUEL};
use crate::kernel::Seq;
use crate::multivalued::{Oracle, Problem, ReduceError, Reduction, Verdict};
use crate::problems::{BoundedTree, Path2, PathB, TreeChar};
use crate::reals::{pow2_neg, CReal, CantorSpace, Rational};
use crate::reductions::compose::metadata_path;

/// K compact, A ⊆ K closed and nonempty. `planted` is a known point of A.
#[derive(Clone)]
pub struct SelInstance<S: SelSpace> {
    pub space: Arc<S>,
    pub k: CompactName<S>,
    pub a: ClosedMinus<S>,
    pub planted: Option<S::Point>,
}

impl<S: SelSpace> SelInstance<S> {
    pub fn new(space: S, k: CompactName<S>, a: ClosedMinus<S>) -> Self {
        SelInstance { space: Arc::new(space), k, a, planted: None }
    }

    pub fn with_planted(mut self, x: S::Point) -> Self {
        self.planted = Some(x);
        self
    }

    /// The 2^{-n} cover extracted from K's name.
    pub fn level(&self, n: usize) -> Result<Cover<S>, ReduceError> {
        self.k
            .level(n, COVER_SCAN_FUEL)
            .ok_or_else(|| ReduceError::FuelExhausted(format!("no 2^-{n} cover among the first {COVER_SCAN_FUEL} listed")))
    }
}

type PairKey = (usize, BigUint, usize, BigUint);

/// The tree of index sequences s with s(n) < q(n) whose centres x^n_{s(n)}
/// are pairwise close and avoid the excluded balls, each up to the slack
/// of the rational approximations.
pub struct SelTree<S: SelSpace> {
    inst: SelInstance<S>,
    levels: Seq<Cover<S>>,
    pair_dist: Mutex<HashMap<PairKey, CReal>>,
    ball_dist: Mutex<HashMap<(usize, BigUint, u64), CReal>>,
}

/// Levels checked when the tree is built; later levels are extracted lazily.
const EAGER_LEVELS: usize = 8;

impl<S: SelSpace> SelTree<S> {
    pub fn new(inst: &SelInstance<S>) -> Result<Arc<Self>, ReduceError> {
        for n in 0..EAGER_LEVELS {
            inst.level(n)?;
        }
        let i2 = inst.clone();
        let levels = Seq::from_fn(move |n| i2.level(n as usize).expect("cover level")).cached();
        Ok(Arc::new(SelTree {
            inst: inst.clone(),
            levels,
            pair_dist: Mutex::new(HashMap::new()),
            ball_dist: Mutex::new(HashMap::new()),
        }))
    }

    pub fn level(&self, n: usize) -> Cover<S> {
        self.levels.get(n as u64)
    }

    pub fn bound(&self, n: usize) -> BigUint {
        self.level(n).count
    }

    pub fn center(&self, n: usize, j: &BigUint) -> S::Point {
        self.level(n).center(j)
    }

    fn pair(&self, n: usize, a: &BigUint, i: usize, b: &BigUint) -> CReal {
        let key = (n, a.clone(), i, b.clone());
        if let Some(d) = self.pair_dist.lock().unwrap().get(&key) {
            return d.clone();
        }
        let d = self.inst.space.dist(&self.center(n, a), &self.center(i, b));
        self.pair_dist.lock().unwrap().insert(key, d.clone());
        d
    }

    fn to_ball(&self, n: usize, a: &BigUint, i: u64) -> (CReal, Rational) {
        let (b, r) = self.inst.a.ball(i);
        let key = (n, a.clone(), i);
        if let Some(d) = self.ball_dist.lock().unwrap().get(&key) {
            return (d.clone(), r);
        }
        let d = self.inst.space.dist(&self.center(n, a), &b);
        self.ball_dist.lock().unwrap().insert(key, d.clone());
        (d, r)
    }

    /// d(x^n_{s(n)}, x^i_{s(i)})_{[k]} ≤ 2^{-n} + 2^{-i} + 2^{-k} for n, i, k < |s|.
    pub fn proximate(&self, s: &[BigUint]) -> bool {
        let len = s.len();
        (0..len).all(|n| {
            (0..len).filter(|&i| i != n).all(|i| {
                let d = self.pair(n, &s[n], i, &s[i]);
                (0..len).all(|k| d.approx(k as u32) <= pow2_neg(n as u32) + pow2_neg(i as u32) + pow2_neg(k as u32))
            })
        })
    }

    /// d(x^n_j, b_i)_{[k]} ≥ α_i − 2^{-n} − 2^{-k} for i, k < len.
    pub fn avoids(&self, n: usize, j: &BigUint, len: usize) -> bool {
        (0..len as u64).all(|i| {
            let (d, r) = self.to_ball(n, j, i);
            if r <= pow2_neg(n as u32) {
                return true;
            }
            (0..len).all(|k| d.approx(k as u32) >= &r - pow2_neg(n as u32) - pow2_neg(k as u32))
        })
    }

    pub fn member(&self, s: &[BigUint]) -> bool {
        s.iter().enumerate().all(|(n, v)| v < &self.bound(n))
            && s.iter().enumerate().all(|(n, v)| self.avoids(n, v, s.len()))
            && self.proximate(s)
    }

    /// Indices of centres near the planted point, when there is one and
    /// every cover can locate it.
    pub fn planted_path(self: &Arc<Self>) -> Option<Seq<BigUint>> {
        let x = self.inst.planted.clone()?;
        self.level(0).locate(&x)?;
        let me = Arc::clone(self);
        Some(Seq::from_fn(move |n| me.level(n as usize).locate(&x).expect("cover locates K")).cached())
    }

    pub fn bounded(self: &Arc<Self>) -> BoundedTree {
        let (m, b) = (Arc::clone(self), Arc::clone(self));
        let t = BoundedTree::new(move |s| m.member(s), move |n| b.bound(n));
        match self.planted_path() {
            Some(p) => t.with_planted(p),
            None => t,
        }
    }

    /// lim x^n_{p(n)}.
    pub fn point(self: &Arc<Self>, path: &Seq<BigUint>) -> S::Point {
        let (me, path) = (Arc::clone(self), path.clone());
        let xs = Seq::from_fn(move |n| me.center(n as usize, &path.get(n))).cached();
        self.inst.space.limit(&xs)
    }
}

pub fn sel_tree<S: SelSpace>(x: &SelInstance<S>) -> Result<BoundedTree, ReduceError> {
    Ok(SelTree::new(x)?.bounded())
}

pub fn sel_point<S: SelSpace>(x: &SelInstance<S>, path: &Seq<BigUint>) -> Result<S::Point, ReduceError> {
    Ok(SelTree::new(x)?.point(path))
}

/// Sel_X: (K, A) ↦ A.
pub struct Sel<S>(PhantomData<S>);

impl<S> Default for Sel<S> {
    fn default() -> Self {
        Sel(PhantomData)
    }
}

/// Does x avoid the first `depth` excluded balls, up to certification fuel?
pub fn verify_in_closed<S: SelSpace>(space: &S, a: &ClosedMinus<S>, x: &S::Point, depth: usize) -> Verdict {
    for i in 0..depth as u64 {
        let (b, r) = a.ball(i);
        if r > Rational::from_integer(0.into()) && space.dist(x, &b).lt_rat(&r, depth as u32 + 8) {
            return Verdict::reject(format!("point lies in excluded ball {i}"));
        }
    }
    Verdict::Accept
}

impl<S: SelSpace> Problem for Sel<S> {
    type Instance = SelInstance<S>;
    type Solution = S::Point;

    fn id(&self) -> String {
        format!("sel[{}]", S::label())
    }

    fn domain_check(&self, x: &SelInstance<S>, fuel: u64) -> Verdict {
        match &x.planted {
            Some(p) => verify_in_closed(&*x.space, &x.a, p, fuel.min(64) as usize),
            None => Verdict::Undetermined,
        }
    }

    fn verify(&self, x: &SelInstance<S>, y: &S::Point, depth: usize) -> Verdict {
        verify_in_closed(&*x.space, &x.a, y, depth)
    }
}

pub fn planted_sel_oracle<S: SelSpace>() -> Oracle<Sel<S>> {
    Oracle::new(
        "planted",
        "instances with a planted point of A",
        |x: &SelInstance<S>| x.planted.as_ref().map(|_| ()).ok_or_else(|| "no planted point".to_string()),
        |x: &SelInstance<S>| Ok(x.planted.clone().unwrap()),
    )
}

pub fn sel_le_pathb<S: SelSpace>() -> Reduction<Sel<S>, PathB> {
    Reduction::new(
        "sel_le_pathB",
        Arc::new(Sel::<S>::default()),
        Arc::new(PathB),
        |x: &SelInstance<S>| sel_tree(x),
        |x: &SelInstance<S>, p: &Seq<BigUint>| sel_point(x, p),
    )
}

/// Sel over 2^ℕ for K = 2^ℕ and A = [T].
pub fn cantor_sel_instance(t: &TreeChar) -> SelInstance<CantorSpace> {
    let x = SelInstance::new(CantorSpace, cantor_compact(), cantor_complement_tree(t));
    match metadata_path(t) {
        Some(p) => x.with_planted(p),
        None => x,
    }
}

pub fn path2_le_sel() -> Reduction<Path2, Sel<CantorSpace>> {
    Reduction::new(
        "path2_le_sel",
        Arc::new(Path2),
        Arc::new(Sel::<CantorSpace>::default()),
        |t: &TreeChar| Ok(cantor_sel_instance(t)),
        |_, x: &Seq| Ok(x.clone()),
    )
}
