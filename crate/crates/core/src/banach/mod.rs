//! Noted pseudo-normed spaces over formal rational combinations of ℕ and
//! their constructive Banach completions.

pub mod functional;
pub mod norms;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::hyperspace::SelSpace;
use crate::kernel::{untuple, Seq, SeqCode, Step};
use crate::reals::rational::log2_bound;
use crate::reals::{CReal, Cmp, RatEnum, Rational};

pub use functional::{Functional, PFName};
pub use norms::{two_generator_max, FactNorm, FiniteNorm, NormKind, Opaque};

/// A formal combination ∑ coeffs[i]·i, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Combo(Vec<Rational>);

impl fmt::Debug for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::reals::rational::format).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Combo {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Combo(coeffs)
    }

    pub fn zero() -> Self {
        Combo(Vec::new())
    }

    /// The generator n.
    pub fn unit(n: usize) -> Self {
        let mut v = vec![Rational::zero(); n + 1];
        v[n] = Rational::from_integer(1.into());
        Combo(v)
    }

    /// c_s = ∑ a_ℚ(s(i))·i.
    pub fn from_code(s: &[u64]) -> Self {
        Combo::new(s.iter().map(|&k| RatEnum::get(k)).collect())
    }

    /// The combination coded by the sequence number n.
    pub fn from_seq_code(n: u64) -> Self {
        Combo::from_code(SeqCode::decode(n).items())
    }

    /// RatEnum indices of the coefficients, when they fit in u64.
    pub fn to_code(&self) -> Option<Vec<u64>> {
        self.0.iter().map(RatEnum::index).collect()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Generators below this index carry the combination.
    pub fn support(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Combo) -> Combo {
        let n = self.support().max(o.support());
        Combo::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Combo) -> Combo {
        self.add(&o.scale(&Rational::from_integer((-1).into())))
    }

    pub fn scale(&self, a: &Rational) -> Combo {
        Combo::new(self.0.iter().map(|c| c * a).collect())
    }

    /// ∑ γ_i·vs[i].
    pub fn combine(gammas: &[Rational], vs: &[Combo]) -> Combo {
        gammas.iter().zip(vs).fold(Combo::zero(), |acc, (g, v)| acc.add(&v.scale(g)))
    }
}

/// A pseudo-norm on combinations. Structured norms also expose linear
/// coordinates: ‖c‖ = 0 exactly when coords(c) = 0, and
/// ‖c‖ ≥ coord_lower(support)·|coords(c)|_∞.
pub trait PseudoNorm: Send + Sync {
    fn name(&self) -> String;

    fn eval(&self, c: &Combo) -> CReal;

    fn coords(&self, _c: &Combo) -> Option<Vec<Rational>> {
        None
    }

    fn coord_lower(&self, _support: usize) -> Option<Rational> {
        None
    }
}

/// A Cauchy sequence of combinations with ‖c_i − c_j‖ < 2^{-i} for i < j.
#[derive(Clone)]
pub struct CPoint {
    pub reps: Seq<Combo>,
}

impl CPoint {
    pub fn constant(c: Combo) -> Self {
        CPoint { reps: Seq::constant(c) }
    }

    pub fn zero() -> Self {
        CPoint::constant(Combo::zero())
    }

    pub fn rep(&self, i: u64) -> Combo {
        self.reps.get(i)
    }

    pub fn neg(&self) -> CPoint {
        let r = self.reps.clone();
        CPoint { reps: Seq::from_fn(move |i| r.get(i).scale(&Rational::from_integer((-1).into()))) }
    }
}

/// [c_{s_i}] + [c_{t_i}] = [c_{s_{i+1}} + c_{t_{i+1}}].
pub fn point_add(x: &CPoint, y: &CPoint) -> CPoint {
    let (a, b) = (x.reps.clone(), y.reps.clone());
    CPoint { reps: Seq::from_fn(move |i| a.get(i + 1).add(&b.get(i + 1))).cached() }
}

pub fn point_sub(x: &CPoint, y: &CPoint) -> CPoint {
    point_add(x, &y.neg())
}

/// ‖[c_{s_i}]‖ = lim ‖c_{s_i}‖.
pub fn point_norm(space: &BanachName, x: &CPoint) -> CReal {
    let (norm, reps) = (Arc::clone(&space.norm), x.reps.clone());
    CReal::from_approx(move |k| norm.eval(&reps.get(k as u64 + 1)).approx(k + 1))
}

/// a·[c_{s_i}] = [a_i·c_{s_{k+i}}] for a Cauchy name (a_i) of a, with
/// |a_0| + ‖c_{s_0}‖ + 2 < 2^k.
pub fn point_scale(space: &BanachName, a: &CReal, x: &CPoint) -> CPoint {
    if let Some(r) = a.as_exact() {
        let (r, reps) = (r.clone(), x.reps.clone());
        return CPoint { reps: Seq::from_fn(move |i| reps.get(i).scale(&r)) };
    }
    let name = a.name();
    let n0 = space.norm.eval(&x.rep(0));
    let bound = name.get(0).abs() + n0.approx(0) + n0.err(0) + Rational::from_integer(2.into());
    // 2^{log2_bound} ≥ bound, one more doubling makes it strict.
    let k = log2_bound(&bound) as u64 + 1;
    let reps = x.reps.clone();
    CPoint { reps: Seq::from_fn(move |i| reps.get(k + i).scale(&name.get(k + i))).cached() }
}

/// A constructive Banach completion, named by its pseudo-norm.
#[derive(Clone)]
pub struct BanachName {
    pub norm: Arc<dyn PseudoNorm>,
}

impl BanachName {
    pub fn new(norm: impl PseudoNorm + 'static) -> Self {
        BanachName { norm: Arc::new(norm) }
    }

    /// e(n) = [c_{0̄[n]*1}].
    pub fn e(&self, n: usize) -> CPoint {
        CPoint::constant(Combo::unit(n))
    }

    /// a_e(s) = ∑ a_ℚ(s(i))·e(i).
    pub fn a_e(&self, s: &[u64]) -> CPoint {
        CPoint::constant(Combo::from_code(s))
    }

    pub fn norm_of(&self, c: &Combo) -> CReal {
        self.norm.eval(c)
    }

    pub fn dist_combos(&self, a: &Combo, b: &Combo) -> CReal {
        self.norm.eval(&a.sub(b))
    }

    /// Is ⟨i,s,t,j⟩ a sub-basic fact, a_ℚ(i) < d(a_e(s), a_e(t)) < a_ℚ(j),
    /// certified within `fuel`? None when undecided.
    pub fn u_fact(&self, code: u64, fuel: u32) -> Option<bool> {
        let f = untuple(code, 4);
        let d = self.dist_combos(&Combo::from_seq_code(f[1]), &Combo::from_seq_code(f[2]));
        if let Some(d) = d.as_exact() {
            return Some(&RatEnum::get(f[0]) < d && d < &RatEnum::get(f[3]));
        }
        let lo = d.cmp(&CReal::exact(RatEnum::get(f[0])), fuel);
        let hi = d.cmp(&CReal::exact(RatEnum::get(f[3])), fuel);
        match (lo, hi) {
            (Cmp::Gt, Cmp::Lt) => Some(true),
            (Cmp::Lt, _) | (_, Cmp::Gt) => Some(false),
            _ => None,
        }
    }

    /// The enumeration of all sub-basic facts. Stage t examines code t and
    /// retries undecided codes, all at comparison fuel t.
    pub fn facts(&self) -> Seq {
        let me = self.clone();
        let mut stage = 0u64;
        let mut pending: Vec<u64> = Vec::new();
        let mut ready: VecDeque<u64> = VecDeque::new();
        Seq::from_producer(move || {
            if let Some(c) = ready.pop_front() {
                return Step::Emit(c);
            }
            let fuel = (stage + 1).min(u32::MAX as u64) as u32;
            pending.push(stage);
            stage += 1;
            pending.retain(|&c| match me.u_fact(c, fuel) {
                Some(true) => {
                    ready.push_back(c);
                    false
                }
                Some(false) => false,
                None => true,
            });
            match ready.pop_front() {
                Some(c) => Step::Emit(c),
                None => Step::Stall,
            }
        })
    }
}

impl SelSpace for BanachName {
    type Point = CPoint;

    fn label() -> &'static str {
        "X"
    }

    fn dist(&self, a: &CPoint, b: &CPoint) -> CReal {
        point_norm(self, &point_sub(a, b))
    }

    fn limit(&self, xs: &Seq<CPoint>) -> CPoint {
        let xs = xs.clone();
        CPoint { reps: Seq::from_fn(move |i| xs.get(i + 3).rep(i + 3)).cached() }
    }
}
