//! Closed and compact subsets of metric spaces, named by points, excluded
//! balls and per-level finite covers, and selection of a point from A ⊆ K.

pub mod sel;
pub mod spaces;

use std::sync::Arc;

use num_bigint::BigUint;

use crate::kernel::Seq;
use crate::reals::{pow2_neg, Rational};

pub use sel::{
    path2_le_sel, planted_sel_oracle, sel_le_pathb, sel_point, sel_tree, Sel, SelInstance, SelTree,
};
pub use spaces::{ProductSpace, SelSpace};

/// Positive information: A is the closure of the listed points.
#[derive(Clone)]
pub struct ClosedPlus<S: SelSpace> {
    pub points: Seq<S::Point>,
}

/// Negative information: X ∖ A is the union of the listed open balls.
/// A ball of radius 0 is empty and pads finite lists.
#[derive(Clone)]
pub struct ClosedMinus<S: SelSpace> {
    pub balls: Seq<(S::Point, Rational)>,
}

impl<S: SelSpace> ClosedMinus<S> {
    /// The complement of the union of finitely many balls.
    pub fn from_balls(balls: Vec<(S::Point, Rational)>, empty_center: S::Point) -> Self {
        let balls = Arc::new(balls);
        ClosedMinus {
            balls: Seq::from_fn(move |i| {
                balls.get(i as usize).cloned().unwrap_or_else(|| (empty_center.clone(), Rational::from_integer(0.into())))
            }),
        }
    }

    pub fn ball(&self, i: u64) -> (S::Point, Rational) {
        self.balls.get(i)
    }
}

type CenterFn<P> = Arc<dyn Fn(&BigUint) -> P + Send + Sync>;
type LocateFn<P> = Arc<dyn Fn(&P) -> BigUint + Send + Sync>;

/// A finite list of `count` open balls of common radius. `locate`, when
/// present, maps a point of K to the index of a ball containing it.
#[derive(Clone)]
pub struct Cover<S: SelSpace> {
    pub radius: Rational,
    pub count: BigUint,
    center: CenterFn<S::Point>,
    locate: Option<LocateFn<S::Point>>,
}

impl<S: SelSpace> Cover<S> {
    pub fn new(radius: Rational, count: BigUint, center: impl Fn(&BigUint) -> S::Point + Send + Sync + 'static) -> Self {
        Cover { radius, count, center: Arc::new(center), locate: None }
    }

    pub fn with_locate(mut self, f: impl Fn(&S::Point) -> BigUint + Send + Sync + 'static) -> Self {
        self.locate = Some(Arc::new(f));
        self
    }

    pub fn center(&self, j: &BigUint) -> S::Point {
        (self.center)(j)
    }

    pub fn locate(&self, x: &S::Point) -> Option<BigUint> {
        self.locate.as_ref().map(|f| f(x))
    }
}

/// κ lists covers whose balls all meet K; κ₋ lists covers only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Kappa,
    KappaMinus,
}

#[derive(Clone)]
pub struct CompactName<S: SelSpace> {
    pub covers: Seq<Cover<S>>,
    pub flavor: Flavor,
}

/// How far into a cover enumeration level extraction looks.
pub const COVER_SCAN_FUEL: u64 = 4096;

impl<S: SelSpace> CompactName<S> {
    /// Names listing a 2^{-n} cover at position n.
    pub fn by_level(flavor: Flavor, level: impl Fn(u64) -> Cover<S> + Send + Sync + 'static) -> Self {
        CompactName { covers: Seq::from_fn(level).cached(), flavor }
    }

    /// The first listed cover with radius ≤ 2^{-n}.
    pub fn level(&self, n: usize, fuel: u64) -> Option<Cover<S>> {
        let r = pow2_neg(n as u32);
        (0..fuel).map(|i| self.covers.get(i)).find(|c| c.radius <= r)
    }
}
