//! Path_B ≤ Path₂ by fixed-width binary blocks, and Path₂ ≤ Path_B.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::kernel::{Seq, Step};
use crate::multivalued::Reduction;
use crate::problems::tree::{block_width, BRUTE_CHILD_LIMIT};
use crate::problems::{BoundedTree, Path2, PathB, TreeChar};

/// A binary string split into full blocks (decoded values) and a trailing
/// partial block (its bits as a number, and their count).
pub struct Blocks {
    pub values: Vec<BigUint>,
    pub partial: BigUint,
    pub partial_len: u64,
}

pub fn split_blocks(b: &BoundedTree, t: &[u8]) -> Blocks {
    let mut values = Vec::new();
    let mut pos = 0usize;
    loop {
        let w = block_width(&b.bound(values.len())) as usize;
        let take = w.min(t.len() - pos);
        let mut v = BigUint::zero();
        for &bit in &t[pos..pos + take] {
            v = (v << 1u32) + BigUint::from(bit);
        }
        pos += take;
        if take < w {
            return Blocks { values, partial: v, partial_len: take as u64 };
        }
        values.push(v);
    }
}

/// The block values w-bit completions of a partial block may take.
fn completion_range(b: &BoundedTree, bl: &Blocks) -> (BigUint, BigUint) {
    let w = block_width(&b.bound(bl.values.len()));
    let shift = w - bl.partial_len;
    (&bl.partial << shift, (&bl.partial + 1u32) << shift)
}

pub fn block_member(b: &BoundedTree, t: &[u8]) -> bool {
    let bl = split_blocks(b, t);
    if bl.values.iter().enumerate().any(|(i, v)| v >= &b.bound(i)) || !b.contains(&bl.values) {
        return false;
    }
    if bl.partial_len == 0 {
        return true;
    }
    // Levels too wide to query admit the partial block; full blocks are
    // checked exactly, so infinite paths are unchanged.
    let (lo, hi) = completion_range(b, &bl);
    b.has_child_in(&bl.values, &lo, &hi).unwrap_or(true)
}

fn block_extendible(b: &BoundedTree, t: &[u8]) -> bool {
    if !block_member(b, t) {
        return false;
    }
    let bl = split_blocks(b, t);
    if bl.partial_len == 0 {
        return b.is_extendible(&bl.values) == Some(true);
    }
    let (lo, hi) = completion_range(b, &bl);
    let hi = hi.min(b.bound(bl.values.len()));
    let mut u = bl.values.clone();
    u.push(BigUint::zero());
    let mut check = |v: &BigUint| {
        *u.last_mut().unwrap() = v.clone();
        b.contains(&u) && b.is_extendible(&u) == Some(true)
    };
    if hi > lo && &hi - &lo <= BigUint::from(BRUTE_CHILD_LIMIT) {
        let mut v = lo.clone();
        while v < hi {
            if check(&v) {
                return true;
            }
            v += 1u32;
        }
        return false;
    }
    let kids = b.children(&bl.values).expect("partial block over an enumerable level");
    kids.iter().filter(|v| **v >= lo && **v < hi).any(check)
}

/// Bits of the block coding of a bounded sequence.
pub fn encode_blocks(b: &BoundedTree, path: &Seq<BigUint>) -> Seq {
    let (b, path) = (b.clone(), path.clone());
    let mut i = 0u64;
    let mut buf: Vec<u8> = Vec::new();
    Seq::from_producer(move || {
        while buf.is_empty() {
            let w = block_width(&b.bound(i as usize));
            let v = path.get(i);
            buf = (0..w).map(|k| v.bit(k) as u8).collect();
            i += 1;
        }
        Step::Emit(buf.pop().unwrap() as u64)
    })
}

/// Block values read from a binary path.
pub fn decode_blocks(b: &BoundedTree, path: &Seq) -> Seq<BigUint> {
    let (b, path) = (b.clone(), path.clone());
    let mut i = 0usize;
    let mut pos = 0u64;
    Seq::from_producer(move || {
        let w = block_width(&b.bound(i));
        let mut v = BigUint::zero();
        for _ in 0..w {
            v = (v << 1u32) + BigUint::from(path.get(pos).min(1));
            pos += 1;
        }
        i += 1;
        Step::Emit(v)
    })
}

pub fn block_tree(b: &BoundedTree) -> TreeChar {
    let b1 = b.clone();
    let mut t = TreeChar::new(move |t| block_member(&b1, t));
    if b.has_extendible() {
        let b2 = b.clone();
        t = t.with_extendible(move |t| block_extendible(&b2, t));
    }
    if let Some(p) = &b.planted {
        t = t.with_planted(encode_blocks(b, p));
    }
    t
}

pub fn pathb_le_path2() -> Reduction<PathB, Path2> {
    Reduction::new(
        "pathB_le_path2",
        Arc::new(PathB),
        Arc::new(Path2),
        |b: &BoundedTree| Ok(block_tree(b)),
        |b: &BoundedTree, p: &Seq| Ok(decode_blocks(b, p)),
    )
}

/// A binary tree as a bounded tree with b ≡ 2.
pub fn as_bounded(t: &TreeChar) -> BoundedTree {
    let t1 = t.clone();
    let bits = |s: &[BigUint]| -> Option<Vec<u8>> { s.iter().map(|v| v.to_u8().filter(|&x| x <= 1)).collect() };
    let mut b = BoundedTree::new(move |s| bits(s).is_some_and(|u| t1.contains(&u)), |_| BigUint::from(2u32));
    if t.has_extendible() {
        let t2 = t.clone();
        b = b.with_extendible(move |s| bits(s).is_some_and(|u| t2.is_extendible(&u) == Some(true)));
    }
    let planted = t.planted.clone().or_else(|| t.automaton.as_ref().and_then(|a| a.leftmost_path().ok()));
    if let Some(p) = planted {
        b = b.with_planted(p.map(BigUint::from));
    }
    b
}

pub fn path2_le_pathb() -> Reduction<Path2, PathB> {
    Reduction::new(
        "path2_le_pathB",
        Arc::new(Path2),
        Arc::new(PathB),
        |t: &TreeChar| Ok(as_bounded(t)),
        |_, p: &Seq<BigUint>| {
            let p = p.clone();
            Ok(Seq::from_fn(move |n| if p.get(n).is_one() { 1 } else { 0 }))
        },
    )
}
