//! Sep ≤ Path₂ and Path₂ ≤ Sep.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::kernel::{unpair, Seq, SeqCode, Step, StreamSpec};
use crate::multivalued::{ReduceError, Reduction};
use crate::problems::{Automaton, CharFn, Path2, Sep, SepInstance, TreeChar};

/// Binary strings consistent with p ↦ 0 and q ↦ 1 on every index below |t|.
pub fn sep_tree_member(p: &Seq, q: &Seq, t: &[u8]) -> bool {
    let n = t.len() as u64;
    (0..n).all(|j| {
        let (v, w) = (p.get(j), q.get(j));
        (v >= n || t[v as usize] == 0) && (w >= n || t[w as usize] == 1)
    })
}

/// Bit forced at position i by one side, with the tree length at which a
/// violation is first visible.
fn side_constraint(spec: &StreamSpec, i: u64) -> Option<u64> {
    spec.first_index_of(i).map(|f| i.max(f) + 1)
}

/// The tree {t : ∀j < |t|, (p(j) < |t| → t(p(j)) = 0) ∧ (q(j) < |t| → t(q(j)) = 1)}
/// as an automaton, for p and q given by finite descriptions.
///
/// Head states track (length, least pending violation deadline) up to the
/// length D after which only arithmetic progressions constrain positions;
/// from there the state is the length modulo the lcm of their steps.
pub fn sep_tree_automaton(p: &StreamSpec, q: &StreamSpec) -> Result<Automaton, ReduceError> {
    let mut d = 0u64;
    let mut period = 1u64;
    for s in [p, q] {
        match s {
            StreamSpec::Affine { mul, add } if *mul >= 1 => {
                d = d.max(*add);
                period = period.lcm(mul);
            }
            _ => {
                for v in s.finite_range().unwrap_or_default() {
                    d = d.max(side_constraint(s, v).unwrap());
                }
            }
        }
    }
    if d > 4096 || period > 4096 {
        return Err(ReduceError::Invalid(format!("automaton too large: head {d}, period {period}")));
    }
    let constraint = |i: u64| -> Result<Option<(u8, u64)>, ReduceError> {
        match (side_constraint(p, i), side_constraint(q, i)) {
            (Some(_), Some(_)) => Err(ReduceError::Domain(format!("{i} is in both ranges"))),
            (Some(dl), None) => Ok(Some((0, dl))),
            (None, Some(dl)) => Ok(Some((1, dl))),
            (None, None) => Ok(None),
        }
    };
    let cons: Vec<Option<(u8, u64)>> = (0..d + period).map(constraint).collect::<Result<_, _>>()?;
    // State ids: 0 = dead, 1..=period = cycle phases, then head states.
    let cycle = |phase: u64| 1 + phase as usize;
    let mut trans: Vec<Vec<usize>> = vec![vec![0, 0]];
    for phase in 0..period {
        let rep = d + (phase + period - d % period) % period;
        let row = (0..2u8)
            .map(|b| match cons[rep as usize] {
                Some((bit, _)) if bit != b => 0,
                _ => cycle((phase + 1) % period),
            })
            .collect();
        trans.push(row);
    }
    let mut ids: HashMap<(u64, Option<u64>), usize> = HashMap::new();
    let mut todo = Vec::new();
    let initial = if d == 0 {
        cycle(0)
    } else {
        ids.insert((0, None), trans.len());
        trans.push(vec![0, 0]);
        todo.push((0u64, None::<u64>));
        1 + period as usize
    };
    while let Some((len, pend)) = todo.pop() {
        let id = ids[&(len, pend)];
        for b in 0..2u8 {
            let mut np = pend;
            if let Some((bit, dl)) = cons[len as usize] {
                if bit != b {
                    np = Some(np.map_or(dl, |x| x.min(dl)));
                }
            }
            let next = if np.is_some_and(|x| x <= len + 1) {
                0
            } else if len + 1 == d {
                cycle(d % period)
            } else {
                let key = (len + 1, np);
                *ids.entry(key).or_insert_with(|| {
                    trans.push(vec![0, 0]);
                    todo.push(key);
                    trans.len() - 1
                })
            };
            trans[id][b as usize] = next;
        }
    }
    let mut dead = vec![false; trans.len()];
    dead[0] = true;
    Ok(Automaton { alphabet: 2, trans, initial, dead })
}

/// The tree whose paths are the separators of (p, q).
pub fn sep_tree(x: &SepInstance) -> Result<TreeChar, ReduceError> {
    let mut t = match &x.planting.spec {
        Some((ps, qs)) => TreeChar::from_automaton(sep_tree_automaton(ps, qs)?),
        None => {
            let (p, q) = (x.p.clone(), x.q.clone());
            TreeChar::new(move |t| sep_tree_member(&p, &q, t))
        }
    };
    if let Some(r) = &x.planting.separator {
        t = t.with_planted(r.to_seq());
    }
    Ok(t)
}

/// Sep ≤ Path₂: a path through the consistency tree is a separator.
pub fn sep_le_path2() -> Reduction<Sep, Path2> {
    Reduction::new("sep_le_path2", Arc::new(Sep::new()), Arc::new(Path2), sep_tree, |_, path: &Seq| Ok(CharFn::from_seq(path)))
}

/// θ(n, s): n ≥ |s| and s has an extension of length n in T.
pub fn theta(t: &TreeChar, n: u64, s: &[u8]) -> bool {
    n >= s.len() as u64 && t.extends_to(s, n as usize)
}

fn with_bit(s: &[u8], b: u8) -> Vec<u8> {
    let mut u = s.to_vec();
    u.push(b);
    u
}

/// Codes s+2 where s*(1−i) dies by level n while s*i survives, padded with i.
fn dying_side(t: &TreeChar, i: u8) -> Seq<BigUint> {
    let t = t.clone();
    Seq::from_fn(move |z| {
        let (c, n) = unpair(z);
        match SeqCode::decode_bits_u64(c) {
            Some(s) if theta(&t, n, &with_bit(&s, i)) && !theta(&t, n, &with_bit(&s, 1 - i)) => SeqCode::encode_bits(&s) + 2u32,
            _ => BigUint::from(i),
        }
    })
}

/// Largest level reachable from u in T (None if unbounded below `cap`).
fn height(t: &TreeChar, u: &[u8], cap: Option<usize>) -> Option<usize> {
    if !t.contains(u) {
        return Some(u.len().saturating_sub(1));
    }
    if cap.is_some_and(|c| u.len() >= c) {
        return None;
    }
    let mut best = u.len();
    for b in 0..2u8 {
        best = best.max(height(t, &with_bit(u, b), cap)?);
    }
    Some(best)
}

/// A separator of (p_T, q_T) from the information attached to T.
fn tree_separator(t: &TreeChar) -> CharFn<BigUint> {
    let t = t.clone();
    CharFn::new(move |v: &BigUint| {
        if v < &BigUint::from(2u32) {
            return v.to_u64().unwrap();
        }
        let Some(s) = SeqCode::decode_bits(&(v - 2u32)) else { return 0 };
        let ht = |b: u8| -> Option<usize> {
            let u = with_bit(&s, b);
            match t.is_extendible(&u) {
                Some(true) => None,
                Some(false) => height(&t, &u, None),
                None => unreachable!(),
            }
        };
        if t.has_extendible() {
            let (h0, h1) = (ht(0), ht(1));
            return match (h0, h1) {
                (_, None) if h0.is_some() => 1,
                (Some(a), Some(b)) if b > a => 1,
                _ => 0,
            };
        }
        if let Some(path) = &t.planted {
            if s.iter().enumerate().all(|(i, &b)| path.get(i as u64) == b as u64) {
                return path.get(s.len() as u64);
            }
        }
        let cap = Some(s.len() + 16);
        let (h0, h1) = (height(&t, &with_bit(&s, 0), cap), height(&t, &with_bit(&s, 1), cap));
        match (h0, h1) {
            (Some(_), None) => 1,
            (Some(a), Some(b)) if b > a => 1,
            _ => 0,
        }
    })
}

/// Path₂ ≤ Sep: separate "s*1 dies first" from "s*0 dies first"; the path
/// follows r(code(prefix)+2).
pub fn path2_le_sep() -> Reduction<Path2, Sep<BigUint>> {
    Reduction::new(
        "path2_le_sep",
        Arc::new(Path2),
        Arc::new(Sep::<BigUint>::new()),
        |t: &TreeChar| {
            let inst = SepInstance::new(dying_side(t, 0), dying_side(t, 1));
            let informed = t.has_extendible() || t.planted.is_some();
            Ok(if informed { inst.with_separator(tree_separator(t)) } else { inst })
        },
        |_, r: &CharFn<BigUint>| {
            let r = r.clone();
            let mut code = BigUint::from(0u32);
            Ok(Seq::from_producer(move || {
                let b = r.at(&(&code + 2u32)).min(1) as u8;
                code = SeqCode::push_bit(&code, b);
                Step::Emit(b as u64)
            }))
        },
    )
}
