//! Multi-valued problems, their composition, and computable reductions.
//!
//! A reduction f ≤ g is a pair (H, K): H translates an f-instance x to a
//! g-instance, and K turns any g-solution of H(x) into an f-solution of x.
//! Oracles stand in for realizers of incomputable problems on restricted
//! instance classes.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

/// Tri-state outcome of a depth-bounded check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(String),
    /// No violation found but the check could not conclude at this depth.
    Undetermined,
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn is_reject(&self) -> bool {
        matches!(self, Verdict::Reject(_))
    }

    /// Conjunction: any rejection wins, then any undetermined part.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Reject(r), _) | (_, Verdict::Reject(r)) => Verdict::Reject(r),
            (Verdict::Undetermined, _) | (_, Verdict::Undetermined) => Verdict::Undetermined,
            _ => Verdict::Accept,
        }
    }

    pub fn reject(msg: impl Into<String>) -> Verdict {
        Verdict::Reject(msg.into())
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::Reject(_) => "reject",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Reject(r) => write!(f, "reject ({r})"),
            v => write!(f, "{}", v.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("oracle {oracle} does not cover this instance: {reason}")]
    ClassMismatch { oracle: String, reason: String },
    #[error("fuel exhausted: {0}")]
    FuelExhausted(String),
    #[error("problem mismatch: {0}")]
    Mismatch(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// A multi-valued problem f: ⊆X ⇉ Y given by a solution checker.
pub trait Problem: Send + Sync + 'static {
    type Instance: Clone + Send + Sync + 'static;
    type Solution: Clone + Send + Sync + 'static;

    fn id(&self) -> String;

    /// Checks x ∈ dom(f) as far as `fuel` allows.
    fn domain_check(&self, _x: &Self::Instance, _fuel: u64) -> Verdict {
        Verdict::Accept
    }

    /// Checks y ∈ f(x) against the first `depth` constraints.
    fn verify(&self, x: &Self::Instance, y: &Self::Solution, depth: usize) -> Verdict;
}

type ClassFn<I> = Arc<dyn Fn(&I) -> Result<(), String> + Send + Sync>;
type RealizeFn<I, S> = Arc<dyn Fn(&I) -> Result<S, ReduceError> + Send + Sync>;

/// A realizer of a problem on a restricted instance class.
pub struct Oracle<P: Problem> {
    pub id: String,
    pub class: String,
    accepts: ClassFn<P::Instance>,
    realize: RealizeFn<P::Instance, P::Solution>,
    calls: Arc<AtomicUsize>,
}

impl<P: Problem> Clone for Oracle<P> {
    fn clone(&self) -> Self {
        Oracle {
            id: self.id.clone(),
            class: self.class.clone(),
            accepts: Arc::clone(&self.accepts),
            realize: Arc::clone(&self.realize),
            calls: Arc::clone(&self.calls),
        }
    }
}

impl<P: Problem> Oracle<P> {
    pub fn new(
        id: impl Into<String>,
        class: impl Into<String>,
        accepts: impl Fn(&P::Instance) -> Result<(), String> + Send + Sync + 'static,
        realize: impl Fn(&P::Instance) -> Result<P::Solution, ReduceError> + Send + Sync + 'static,
    ) -> Self {
        Oracle {
            id: id.into(),
            class: class.into(),
            accepts: Arc::new(accepts),
            realize: Arc::new(realize),
            calls: Arc::new(AtomicUsize::new(0)),
        }
    }

    /// Oracle that accepts every instance.
    pub fn total(id: impl Into<String>, realize: impl Fn(&P::Instance) -> Result<P::Solution, ReduceError> + Send + Sync + 'static) -> Self {
        Self::new(id, "all instances", |_| Ok(()), realize)
    }

    pub fn accepts(&self, x: &P::Instance) -> Result<(), String> {
        (self.accepts)(x)
    }

    pub fn realize(&self, x: &P::Instance) -> Result<P::Solution, ReduceError> {
        self.accepts(x).map_err(|reason| ReduceError::ClassMismatch { oracle: self.id.clone(), reason })?;
        self.calls.fetch_add(1, Ordering::SeqCst);
        (self.realize)(x)
    }

    /// Number of `realize` calls so far (shared by clones).
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

type HFn<X, Y> = Arc<dyn Fn(&X) -> Result<Y, ReduceError> + Send + Sync>;
type KFn<X, V, Y> = Arc<dyn Fn(&X, &V) -> Result<Y, ReduceError> + Send + Sync>;

/// A computable reduction f ≤ g as an executable (H, K) pair.
pub struct Reduction<F: Problem, G: Problem> {
    pub id: String,
    pub source: Arc<F>,
    pub target: Arc<G>,
    h: HFn<F::Instance, G::Instance>,
    k: KFn<F::Instance, G::Solution, F::Solution>,
}

impl<F: Problem, G: Problem> Clone for Reduction<F, G> {
    fn clone(&self) -> Self {
        Reduction {
            id: self.id.clone(),
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            h: Arc::clone(&self.h),
            k: Arc::clone(&self.k),
        }
    }
}

impl<F: Problem, G: Problem> Reduction<F, G> {
    pub fn new(
        id: impl Into<String>,
        source: Arc<F>,
        target: Arc<G>,
        h: impl Fn(&F::Instance) -> Result<G::Instance, ReduceError> + Send + Sync + 'static,
        k: impl Fn(&F::Instance, &G::Solution) -> Result<F::Solution, ReduceError> + Send + Sync + 'static,
    ) -> Self {
        Reduction { id: id.into(), source, target, h: Arc::new(h), k: Arc::new(k) }
    }

    pub fn h(&self, x: &F::Instance) -> Result<G::Instance, ReduceError> {
        (self.h)(x)
    }

    pub fn k(&self, x: &F::Instance, v: &G::Solution) -> Result<F::Solution, ReduceError> {
        (self.k)(x, v)
    }

    /// K(x, G(H(x))).
    pub fn solve(&self, x: &F::Instance, oracle: &Oracle<G>) -> Result<F::Solution, ReduceError> {
        let y = self.h(x)?;
        let v = oracle.realize(&y)?;
        self.k(x, &v)
    }

    /// The soundness check: K(x, G(H(x))) verified at `depth`.
    pub fn check(&self, x: &F::Instance, oracle: &Oracle<G>, depth: usize) -> Result<Verdict, ReduceError> {
        let sol = self.solve(x, oracle)?;
        Ok(self.source.verify(x, &sol, depth))
    }
}

/// Realizer for f from a realizer for g.
pub fn apply_reduction<F: Problem, G: Problem>(red: &Reduction<F, G>, oracle: &Oracle<G>) -> Oracle<F> {
    let r = red.clone();
    let o = oracle.clone();
    let r2 = red.clone();
    let o2 = oracle.clone();
    Oracle::new(
        format!("{}∘{}", red.id, oracle.id),
        format!("instances whose {} image is in class: {}", red.id, oracle.class),
        move |x| {
            let y = r2.h(x).map_err(|e| e.to_string())?;
            o2.accepts(&y)
        },
        move |x| r.solve(x, &o),
    )
}

pub fn identity_reduction<P: Problem>(p: Arc<P>) -> Reduction<P, P> {
    Reduction::new(format!("id_{}", p.id()), Arc::clone(&p), p, |x| Ok(x.clone()), |_, v| Ok(v.clone()))
}

/// Transitivity: (h' ∘ h, (x,v) ↦ k(x, k'(h(x), v))).
pub fn chain_reductions<F: Problem, G: Problem, L: Problem>(r1: &Reduction<F, G>, r2: &Reduction<G, L>) -> Reduction<F, L> {
    let (a, b) = (r1.clone(), r2.clone());
    let (c, d) = (r1.clone(), r2.clone());
    Reduction::new(
        format!("{}+{}", r1.id, r2.id),
        Arc::clone(&r1.source),
        Arc::clone(&r2.target),
        move |x| b.h(&a.h(x)?),
        move |x, v| {
            let hx = c.h(x)?;
            let u = d.k(&hx, v)?;
            c.k(x, &u)
        },
    )
}

/// f ≤ g when g(x) ⊆ f(x) on dom(f): H = identity, K = second projection.
pub fn superset_reduction<F, G>(f: Arc<F>, g: Arc<G>) -> Reduction<F, G>
where
    F: Problem,
    G: Problem<Instance = F::Instance, Solution = F::Solution>,
{
    let id = format!("{}_le_{}", f.id(), g.id());
    Reduction::new(id, f, g, |x| Ok(x.clone()), |_, v| Ok(v.clone()))
}

/// Composition g ∘ f of problems with f's solutions typed as g's instances.
/// Solutions carry the intermediate witness y ∈ f(x).
pub struct Composite<F, G> {
    pub f: Arc<F>,
    pub g: Arc<G>,
}

impl<F, G> Problem for Composite<F, G>
where
    F: Problem,
    G: Problem<Instance = F::Solution>,
{
    type Instance = F::Instance;
    type Solution = (F::Solution, G::Solution);

    fn id(&self) -> String {
        format!("{}∘{}", self.g.id(), self.f.id())
    }

    fn domain_check(&self, x: &F::Instance, fuel: u64) -> Verdict {
        self.f.domain_check(x, fuel)
    }

    fn verify(&self, x: &F::Instance, (y, z): &Self::Solution, depth: usize) -> Verdict {
        let vf = self.f.verify(x, y, depth);
        if vf.is_reject() {
            return vf;
        }
        match self.g.domain_check(y, depth as u64) {
            Verdict::Reject(r) => return Verdict::Reject(format!("domain violation: f-output outside dom(g): {r}")),
            other => vf.and(other).and(self.g.verify(y, z, depth)),
        }
    }
}

pub fn compose_problems<F, G>(f: Arc<F>, g: Arc<G>) -> Composite<F, G>
where
    F: Problem,
    G: Problem<Instance = F::Solution>,
{
    Composite { f, g }
}

/// Oracle for g ∘ f from oracles for f and g.
pub fn compose_oracles<F, G>(of: &Oracle<F>, og: &Oracle<G>) -> Oracle<Composite<F, G>>
where
    F: Problem,
    G: Problem<Instance = F::Solution>,
{
    let (a, b) = (of.clone(), og.clone());
    let a2 = of.clone();
    Oracle::new(
        format!("{}∘{}", og.id, of.id),
        format!("{} then {}", of.class, og.class),
        move |x| a2.accepts(x),
        move |x| {
            let y = a.realize(x)?;
            let z = b.realize(&y)?;
            Ok((y, z))
        },
    )
}

/// The problem g ∘ f ∘ h for computable h (on instances) and g (on solutions).
/// Solutions carry the f-witness they were computed from.
pub struct Wrapped<F: Problem, X, Y> {
    pub inner: Arc<F>,
    pub name: String,
    pre: Arc<dyn Fn(&X) -> F::Instance + Send + Sync>,
    post: Arc<dyn Fn(&F::Solution) -> Y + Send + Sync>,
    same: Arc<dyn Fn(&Y, &Y, usize) -> bool + Send + Sync>,
}

impl<F, X, Y> Problem for Wrapped<F, X, Y>
where
    F: Problem,
    X: Clone + Send + Sync + 'static,
    Y: Clone + Send + Sync + 'static,
{
    type Instance = X;
    type Solution = (F::Solution, Y);

    fn id(&self) -> String {
        self.name.clone()
    }

    fn verify(&self, x: &X, (w, y): &Self::Solution, depth: usize) -> Verdict {
        let v = self.inner.verify(&(self.pre)(x), w, depth);
        if !(self.same)(&(self.post)(w), y, depth) {
            return Verdict::reject("output is not g applied to the witness");
        }
        v
    }
}

/// (g ∘ f ∘ h) ≤ f, witnessed by h and (x, z) ↦ g(z).
pub fn compose_with_computable<F, X, Y>(
    f: Arc<F>,
    name: impl Into<String>,
    h: impl Fn(&X) -> F::Instance + Send + Sync + 'static,
    g: impl Fn(&F::Solution) -> Y + Send + Sync + 'static,
    same: impl Fn(&Y, &Y, usize) -> bool + Send + Sync + 'static,
) -> Reduction<Wrapped<F, X, Y>, F>
where
    F: Problem,
    X: Clone + Send + Sync + 'static,
    Y: Clone + Send + Sync + 'static,
{
    let pre: Arc<dyn Fn(&X) -> F::Instance + Send + Sync> = Arc::new(h);
    let post: Arc<dyn Fn(&F::Solution) -> Y + Send + Sync> = Arc::new(g);
    let wrapped = Arc::new(Wrapped { inner: Arc::clone(&f), name: name.into(), pre: Arc::clone(&pre), post: Arc::clone(&post), same: Arc::new(same) });
    let id = format!("{}_le_{}", wrapped.name, f.id());
    Reduction::new(id, wrapped, f, move |x| Ok(pre(x)), move |_, z| Ok((z.clone(), post(z))))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Toy problem: instance n, solutions are multiples of n.
    struct Multiple;
    impl Problem for Multiple {
        type Instance = u64;
        type Solution = u64;
        fn id(&self) -> String {
            "multiple".into()
        }
        fn domain_check(&self, x: &u64, _fuel: u64) -> Verdict {
            if *x == 0 { Verdict::reject("zero") } else { Verdict::Accept }
        }
        fn verify(&self, x: &u64, y: &u64, _d: usize) -> Verdict {
            if y % x == 0 { Verdict::Accept } else { Verdict::reject("not a multiple") }
        }
    }

    /// Solutions are multiples of 2n.
    struct EvenMultiple;
    impl Problem for EvenMultiple {
        type Instance = u64;
        type Solution = u64;
        fn id(&self) -> String {
            "even_multiple".into()
        }
        fn verify(&self, x: &u64, y: &u64, _d: usize) -> Verdict {
            if y % (2 * x) == 0 { Verdict::Accept } else { Verdict::reject("bad") }
        }
    }

    #[test]
    fn identity_and_superset() {
        let p = Arc::new(Multiple);
        let o: Oracle<Multiple> = Oracle::total("times3", |x| Ok(3 * x));
        let id = identity_reduction(Arc::clone(&p));
        assert_eq!(id.solve(&5, &o).unwrap(), 15);
        let sup = superset_reduction(Arc::clone(&p), Arc::new(EvenMultiple));
        let oe: Oracle<EvenMultiple> = Oracle::total("times2", |x| Ok(2 * x));
        assert!(sup.check(&7, &oe, 1).unwrap().is_accept());
    }

    #[test]
    fn chain_with_identity() {
        let p = Arc::new(Multiple);
        let r = Reduction::new("double", Arc::clone(&p), Arc::clone(&p), |x: &u64| Ok(2 * x), |_, v: &u64| Ok(*v));
        let c1 = chain_reductions(&identity_reduction(Arc::clone(&p)), &r);
        let c2 = chain_reductions(&r, &identity_reduction(Arc::clone(&p)));
        let o: Oracle<Multiple> = Oracle::total("times5", |x| Ok(5 * x));
        for x in 1..50 {
            let want = r.solve(&x, &o).unwrap();
            assert_eq!(c1.solve(&x, &o).unwrap(), want);
            assert_eq!(c2.solve(&x, &o).unwrap(), want);
        }
    }

    #[test]
    fn class_mismatch_is_reported() {
        let o: Oracle<Multiple> = Oracle::new("small", "x < 10", |x: &u64| if *x < 10 { Ok(()) } else { Err("too big".into()) }, |x| Ok(*x));
        let r = Reduction::new("sq", Arc::new(Multiple), Arc::new(Multiple), |x: &u64| Ok(x * x), |_, v: &u64| Ok(*v));
        assert!(matches!(r.solve(&5, &o), Err(ReduceError::ClassMismatch { .. })));
        let lifted = apply_reduction(&r, &o);
        assert!(lifted.accepts(&3).is_ok());
        assert!(lifted.accepts(&4).is_err());
    }

    #[test]
    fn composite_flags_domain_violation() {
        let c = compose_problems(Arc::new(Multiple), Arc::new(Multiple));
        // y = 0 is a multiple of 4 but 0 ∉ dom(Multiple).
        let v = c.verify(&4, &(0, 0), 1);
        assert!(matches!(v, Verdict::Reject(ref r) if r.contains("domain violation")));
        assert!(c.verify(&4, &(8, 16), 1).is_accept());
        let o = compose_oracles::<Multiple, Multiple>(&Oracle::total("x2", |x| Ok(2 * x)), &Oracle::total("x3", |x| Ok(3 * x)));
        assert_eq!(o.realize(&2).unwrap(), (4, 12));
    }

    #[test]
    fn computable_wrapping() {
        // g ∘ Multiple ∘ h with h(x) = x + 1, g(y) = y / 2
        let r = compose_with_computable(Arc::new(Multiple), "half_multiple_of_succ", |x: &u64| x + 1, |y: &u64| y / 2, |a: &u64, b: &u64, _| a == b);
        let o: Oracle<Multiple> = Oracle::total("x4", |x| Ok(4 * x));
        for x in 0..20 {
            assert!(r.check(&x, &o, 1).unwrap().is_accept());
            assert_eq!(o.calls() as u64, x + 1);
        }
    }

    #[test]
    fn verdict_conjunction() {
        assert_eq!(Verdict::Accept.and(Verdict::Undetermined), Verdict::Undetermined);
        assert!(Verdict::Undetermined.and(Verdict::reject("x")).is_reject());
    }
}
