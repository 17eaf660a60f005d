//! Trees for Path₂ ∘ f ∘ Path₂ and single-call composition of Path₂-reductions.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::kernel::{deinterleave, fueled_run, interleave, Machine, Seq, SeqCode};
use crate::multivalued::{compose_problems, Composite, Problem, Reduction, Verdict};
use crate::problems::tree::leftmost_decidable;
use crate::problems::{CharFn, Path2, SepInstance, TreeChar};

use super::sep_path::sep_tree;

/// Even and odd positions of t.
pub fn halves(t: &[u8]) -> (Vec<u8>, Vec<u8>) {
    (t.iter().step_by(2).copied().collect(), t.iter().skip(1).step_by(2).copied().collect())
}

/// s ∈ f̂(t): after |t| steps of f on t⌢0̄, no v ⊑ s has output bit 0 at its code.
pub fn hat_contains(f: &Machine, t: &[u8], s: &[u8]) -> bool {
    let t2 = t.to_vec();
    let input = Seq::from_fn(move |i| t2.get(i as usize).copied().unwrap_or(0) as u64);
    let out = fueled_run(f, &input, t.len() as u64);
    (0..=s.len()).all(|k| match SeqCode::encode_bits_u64(&s[..k]) {
        Ok(c) => out.get(c as usize).is_none_or(|b| b != 0),
        Err(_) => true,
    })
}

/// T̃ = {t : t₀ ∈ T ∧ t₁ ∈ f̂(t₀)} for f mapping paths to characteristic
/// functions of trees.
pub fn tilde_tree(t: &TreeChar, f: &Machine) -> TreeChar {
    let (t, f) = (t.clone(), f.clone());
    TreeChar::new(move |u| {
        let (u0, u1) = halves(u);
        t.contains(&u0) && hat_contains(&f, &u0, &u1)
    })
}

/// A path of t from its attached information, without any oracle.
pub fn metadata_path(t: &TreeChar) -> Option<Seq> {
    if let Some(p) = &t.planted {
        return Some(p.clone());
    }
    if let Some(a) = &t.automaton {
        return a.leftmost_path().ok();
    }
    leftmost_decidable(t).ok()
}

/// Is v excluded from the inner tree using only the first |t₀| input bits?
fn inner_excludes<F, G>(rf: &Reduction<F, Path2>, rg: &Reduction<G, Path2>, x: &F::Instance, t0: &[u8], v: &[u8]) -> bool
where
    F: Problem,
    G: Problem<Instance = F::Solution>,
{
    let used = Arc::new(AtomicU64::new(0));
    let (u, bits) = (Arc::clone(&used), t0.to_vec());
    let input = Seq::from_fn(move |i| {
        u.fetch_max(i + 1, Ordering::SeqCst);
        bits.get(i as usize).copied().unwrap_or(0) as u64
    });
    let Ok(y) = rf.k(x, &input) else { return false };
    let Ok(tree) = rg.h(&y) else { return false };
    let inside = tree.contains(v);
    !inside && used.load(Ordering::SeqCst) <= t0.len() as u64
}

/// Path₂-reduction of g ∘ f from Path₂-reductions of f and g with one oracle
/// call: paths of T̃ interleave a path p of h_f(x) with a path of h_g(k_f(x, p)).
pub fn sep_compose<F, G>(rf: &Reduction<F, Path2>, rg: &Reduction<G, Path2>) -> Reduction<Composite<F, G>, Path2>
where
    F: Problem,
    G: Problem<Instance = F::Solution>,
{
    let problem = Arc::new(compose_problems(Arc::clone(&rf.source), Arc::clone(&rg.source)));
    let (hf, hg) = (rf.clone(), rg.clone());
    let (kf, kg) = (rf.clone(), rg.clone());
    Reduction::new(
        format!("sep_compose({},{})", rf.id, rg.id),
        problem,
        Arc::new(Path2),
        move |x: &F::Instance| {
            let outer = hf.h(x)?;
            let (o2, x2, f2, g2) = (outer.clone(), x.clone(), hf.clone(), hg.clone());
            let mut tree = TreeChar::new(move |t| {
                let (t0, t1) = halves(t);
                o2.contains(&t0) && (0..=t1.len()).all(|k| !inner_excludes(&f2, &g2, &x2, &t0, &t1[..k]))
            });
            if let Some(p0) = metadata_path(&outer) {
                let inner = hf.k(x, &p0).and_then(|y| hg.h(&y));
                if let Some(p1) = inner.ok().as_ref().and_then(metadata_path) {
                    tree = tree.with_planted(interleave(&p0, &p1));
                }
            }
            Ok(tree)
        },
        move |x: &F::Instance, p: &Seq| {
            let (p0, p1) = deinterleave(p);
            let y = kf.k(x, &p0)?;
            let z = kg.k(&y, &p1)?;
            Ok((y, z))
        },
    )
}

/// The Sep instance read off a separator r: p'(n) = 2n + r(n), q'(n) = 2n + 1 − r(n).
pub fn resplit_instance(r: &CharFn<u64>) -> SepInstance {
    let (a, b, c) = (r.clone(), r.clone(), r.clone());
    let p = Seq::from_fn(move |n| 2 * n + a.at(&n).min(1));
    let q = Seq::from_fn(move |n| 2 * n + 1 - b.at(&n).min(1));
    let mut inst = SepInstance::new(p, q).with_separator(CharFn::new(move |v: &u64| ((v % 2) != c.at(&(v / 2)).min(1)) as u64));
    inst.planting.p_bound = Some(Arc::new(|v: &u64| v / 2 + 1));
    inst
}

/// Separators of the instance read off a given separator.
pub struct Resplit;

impl Problem for Resplit {
    type Instance = CharFn<u64>;
    type Solution = CharFn<u64>;

    fn id(&self) -> String {
        "resplit".into()
    }

    fn domain_check(&self, r: &CharFn<u64>, fuel: u64) -> Verdict {
        match (0..fuel.min(4096)).find(|n| r.at(n) > 1) {
            Some(n) => Verdict::reject(format!("input value at {n} is not binary")),
            None => Verdict::Accept,
        }
    }

    fn verify(&self, r: &CharFn<u64>, z: &CharFn<u64>, depth: usize) -> Verdict {
        crate::problems::verify_separator(&resplit_instance(r), z, depth)
    }
}

pub fn resplit_le_path2() -> Reduction<Resplit, Path2> {
    Reduction::new(
        "resplit_le_path2",
        Arc::new(Resplit),
        Arc::new(Path2),
        |r: &CharFn<u64>| sep_tree(&resplit_instance(r)),
        |_, path: &Seq| Ok(CharFn::from_seq(path)),
    )
}

/// sep_compose of sep_le_path2 and resplit_le_path2.
pub fn sep_compose_default() -> Reduction<Composite<crate::problems::Sep, Resplit>, Path2> {
    let mut r = sep_compose(&super::sep_path::sep_le_path2(), &resplit_le_path2());
    r.id = "sep_compose".into();
    r
}
