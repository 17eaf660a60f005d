//! The arithmetic-hierarchy problems C_k and the omniscience principle Ω.

use std::sync::Arc;

use crate::kernel::{tuple, Seq};
use crate::multivalued::{Oracle, Problem, Verdict};

/// Search bound used by verifiers on instances without a witness bound.
pub const UNPLANTED_SEARCH: u64 = 4096;

type BoundFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// A C_k instance. `witness_bound(n)` is planting metadata: evaluating all
/// quantifiers over [0, witness_bound(n)) gives the true value C_k(p)(n).
#[derive(Clone)]
pub struct CkInstance {
    pub p: Seq,
    pub k: usize,
    pub witness_bound: Option<BoundFn>,
}

impl CkInstance {
    pub fn new(p: Seq, k: usize) -> Self {
        CkInstance { p, k, witness_bound: None }
    }

    pub fn with_bound(mut self, w: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        self.witness_bound = Some(Arc::new(w));
        self
    }
}

/// C_k(p)(n) with every quantifier ranging over [0, bound).
/// Value 0 iff ∃n_k ∀n_{k−1} … Q n_1 p(⟨n, n_k, …, n_1⟩) ≠ 0.
pub fn ck_value(p: &Seq, n: u64, k: usize, bound: u64) -> u64 {
    fn holds(p: &Seq, vars: &mut Vec<u64>, j: usize, k: usize, bound: u64) -> bool {
        if j == 0 {
            let z = tuple(vars).expect("tuple code fits in u64");
            return p.get(z) != 0;
        }
        let exists = (k - j) % 2 == 0;
        for v in 0..bound {
            vars.push(v);
            let h = holds(p, vars, j - 1, k, bound);
            vars.pop();
            if h == exists {
                return exists;
            }
        }
        !exists
    }
    let mut vars = vec![n];
    if holds(p, &mut vars, k, k, bound) { 0 } else { 1 }
}

/// C_k as a problem on ℕ^ℕ.
pub struct Ck {
    pub k: usize,
}

impl Problem for Ck {
    type Instance = CkInstance;
    type Solution = Seq;

    fn id(&self) -> String {
        format!("c{}", self.k)
    }

    fn domain_check(&self, x: &CkInstance, _fuel: u64) -> Verdict {
        if x.k == self.k { Verdict::Accept } else { Verdict::reject(format!("instance is for C_{}", x.k)) }
    }

    fn verify(&self, x: &CkInstance, y: &Seq, depth: usize) -> Verdict {
        let mut out = Verdict::Accept;
        for n in 0..depth as u64 {
            let got = y.get(n);
            if got > 1 {
                return Verdict::reject(format!("value {got} at {n} is not binary"));
            }
            match &x.witness_bound {
                Some(w) => {
                    let want = ck_value(&x.p, n, x.k, w(n));
                    if got != want {
                        return Verdict::reject(format!("C_{}(p)({n}) = {want}, got {got}", x.k));
                    }
                }
                None if x.k == 1 => {
                    // Only a found ∃-witness is conclusive.
                    let seen = ck_value(&x.p, n, 1, UNPLANTED_SEARCH) == 0;
                    match (seen, got) {
                        (true, 1) => return Verdict::reject(format!("witness found below {UNPLANTED_SEARCH} at n={n}")),
                        (true, 0) => {}
                        _ => out = Verdict::Undetermined,
                    }
                }
                None => out = Verdict::Undetermined,
            }
        }
        out
    }
}

/// Evaluates C_k by bounded search on instances carrying a witness bound.
pub fn bounded_ck_oracle(k: usize) -> Oracle<Ck> {
    Oracle::new(
        "bounded",
        "instances with a planted witness bound",
        move |x: &CkInstance| match (&x.witness_bound, x.k == k) {
            (Some(_), true) => Ok(()),
            (None, _) => Err("no witness bound".into()),
            (_, false) => Err(format!("instance is for C_{}", x.k)),
        },
        |x: &CkInstance| {
            let x = x.clone();
            let w = x.witness_bound.clone().unwrap();
            Ok(Seq::from_fn(move |n| ck_value(&x.p, n, x.k, w(n))).cached())
        },
    )
}

/// C₁ instance with C₁(p)(n) = r(n): p(⟨n,0⟩) = 1 iff r(n) = 0.
pub fn planted_c1(r: Seq) -> CkInstance {
    let rr = r.clone();
    let p = Seq::from_fn(move |z| {
        let (n, m) = crate::kernel::unpair(z);
        (m == 0 && rr.get(n) == 0) as u64
    });
    CkInstance::new(p, 1).with_bound(|_| 1)
}

/// C₁ instance whose witness for n (when r(n) = 0) sits at m = w(n)
/// and p takes arbitrary nonzero values there.
pub fn planted_c1_spread(r: Seq, w: impl Fn(u64) -> u64 + Send + Sync + 'static) -> CkInstance {
    let w = Arc::new(w);
    let w2 = Arc::clone(&w);
    let rr = r.clone();
    let p = Seq::from_fn(move |z| {
        let (n, m) = crate::kernel::unpair(z);
        if rr.get(n) == 0 && m == w(n) { 1 + (n + m) % 5 } else { 0 }
    });
    CkInstance::new(p, 1).with_bound(move |n| w2(n) + 1)
}

/// Ω instance with the answer attached when known.
#[derive(Clone)]
pub struct OmegaInstance {
    pub p: Seq,
    pub answer: Option<u64>,
}

pub struct Omega;

impl Problem for Omega {
    type Instance = OmegaInstance;
    type Solution = u64;

    fn id(&self) -> String {
        "omega".into()
    }

    fn verify(&self, x: &OmegaInstance, i: &u64, depth: usize) -> Verdict {
        let nonzero = x.p.prefix(depth).iter().any(|&v| v != 0);
        match (*i, nonzero) {
            (0, false) | (1, true) => Verdict::Accept,
            (0, true) => Verdict::reject("a nonzero entry exists"),
            (1, false) => Verdict::Undetermined,
            _ => Verdict::reject("answer is not 0 or 1"),
        }
    }
}

pub fn planted_omega_oracle() -> Oracle<Omega> {
    Oracle::new(
        "planted",
        "instances carrying the answer",
        |x: &OmegaInstance| x.answer.map(|_| ()).ok_or_else(|| "no planted answer".to_string()),
        |x: &OmegaInstance| Ok(x.answer.unwrap()),
    )
}
