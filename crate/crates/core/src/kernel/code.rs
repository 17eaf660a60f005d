//! Codings of finite sequences and tuples by naturals.
//!
//! `SeqCode` is the binary-gap bijection ℕ^{<ℕ} ↔ ℕ: the sequence
//! ⟨a₀,…,a_{k−1}⟩ has set bits exactly at positions a₀+…+a_i+i. So λ ↦ 0,
//! length is the popcount, and concatenation is a shifted sum.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt;

use super::KernelError;

/// A finite sequence of naturals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, serde::Serialize, serde::Deserialize)]
pub struct FinSeq(pub Vec<u64>);

impl FinSeq {
    pub fn empty() -> Self {
        FinSeq(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.0.get(i).copied()
    }

    pub fn items(&self) -> &[u64] {
        &self.0
    }

    pub fn push(&mut self, v: u64) {
        self.0.push(v);
    }

    /// s⌢t.
    pub fn concat(&self, other: &FinSeq) -> FinSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FinSeq(v)
    }

    /// s ⊑ t.
    pub fn is_prefix_of(&self, other: &FinSeq) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl From<Vec<u64>> for FinSeq {
    fn from(v: Vec<u64>) -> Self {
        FinSeq(v)
    }
}

impl From<&[u64]> for FinSeq {
    fn from(v: &[u64]) -> Self {
        FinSeq(v.to_vec())
    }
}

impl fmt::Debug for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "⟩")
    }
}

impl fmt::Display for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The fixed bijection between finite sequences and naturals.
pub struct SeqCode;

impl SeqCode {
    pub fn encode(s: &[u64]) -> Result<u64, KernelError> {
        let mut code = 0u64;
        let mut pos: u64 = 0;
        for (i, &a) in s.iter().enumerate() {
            pos = if i == 0 { a } else { pos.checked_add(a).and_then(|p| p.checked_add(1)).ok_or(KernelError::CodeOverflow)? };
            if pos >= 64 {
                return Err(KernelError::CodeOverflow);
            }
            code |= 1u64 << pos;
        }
        Ok(code)
    }

    pub fn decode(n: u64) -> FinSeq {
        let mut out = Vec::with_capacity(n.count_ones() as usize);
        let mut m = n;
        let mut prev: Option<u32> = None;
        while m != 0 {
            let p = m.trailing_zeros();
            out.push(match prev {
                None => p as u64,
                Some(q) => (p - q - 1) as u64,
            });
            prev = Some(p);
            m &= m - 1;
        }
        FinSeq(out)
    }

    pub fn len(n: u64) -> usize {
        n.count_ones() as usize
    }

    /// s(i) read off the code, or `None` when i ≥ |s|.
    pub fn index(n: u64, i: usize) -> Option<u64> {
        Self::decode(n).get(i)
    }

    /// Code of the one-element sequence ⟨k⟩.
    pub fn singleton(k: u64) -> Result<u64, KernelError> {
        Self::encode(&[k])
    }

    /// encode(s⌢t) from encode(s) and encode(t) alone.
    pub fn concat(a: u64, b: u64) -> Result<u64, KernelError> {
        let shift = 64 - a.leading_zeros();
        if b == 0 {
            return Ok(a);
        }
        if shift + (64 - b.leading_zeros()) > 64 {
            return Err(KernelError::CodeOverflow);
        }
        Ok(a | (b << shift))
    }

    pub fn encode_big(s: &[u64]) -> BigUint {
        let mut code = BigUint::zero();
        let mut pos: u64 = 0;
        for (i, &a) in s.iter().enumerate() {
            pos = if i == 0 { a } else { pos + a + 1 };
            code.set_bit(pos, true);
        }
        code
    }

    pub fn decode_big(n: &BigUint) -> FinSeq {
        let mut out = Vec::new();
        let mut prev: Option<u64> = None;
        for p in 0..n.bits() {
            if n.bit(p) {
                out.push(match prev {
                    None => p,
                    Some(q) => p - q - 1,
                });
                prev = Some(p);
            }
        }
        FinSeq(out)
    }

    pub fn concat_big(a: &BigUint, b: &BigUint) -> BigUint {
        a + (b << a.bits())
    }

    /// Code of a binary string, as used for tree nodes.
    pub fn encode_bits(bits: &[u8]) -> BigUint {
        let mut code = BigUint::zero();
        let mut pos: u64 = 0;
        for (i, &b) in bits.iter().enumerate() {
            pos = if i == 0 { b as u64 } else { pos + b as u64 + 1 };
            code.set_bit(pos, true);
        }
        code
    }

    /// Extends a binary-string code by one bit: code(s*b).
    pub fn push_bit(code: &BigUint, bit: u8) -> BigUint {
        let pos = if code.is_zero() { bit as u64 } else { code.bits() + bit as u64 };
        let mut c = code.clone();
        c.set_bit(pos, true);
        c
    }

    /// The binary string coded by `n`, or `None` if some entry exceeds 1.
    pub fn decode_bits(n: &BigUint) -> Option<Vec<u8>> {
        let s = Self::decode_big(n);
        s.0.iter().map(|&v| if v <= 1 { Some(v as u8) } else { None }).collect()
    }

    pub fn decode_bits_u64(n: u64) -> Option<Vec<u8>> {
        Self::decode(n).0.iter().map(|&v| if v <= 1 { Some(v as u8) } else { None }).collect()
    }

    pub fn encode_bits_u64(bits: &[u8]) -> Result<u64, KernelError> {
        let v: Vec<u64> = bits.iter().map(|&b| b as u64).collect();
        Self::encode(&v)
    }
}

/// Cantor pairing ⟨n,m⟩ = (n+m)(n+m+1)/2 + m.
pub fn pair(n: u64, m: u64) -> Option<u64> {
    let s = n.checked_add(m)?;
    let t = (s as u128) * (s as u128 + 1) / 2 + m as u128;
    u64::try_from(t).ok()
}

pub fn unpair(z: u64) -> (u64, u64) {
    let z128 = z as u128;
    // w = floor((sqrt(8z+1)-1)/2)
    let mut w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u128;
    while w * (w + 1) / 2 > z128 {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z128 {
        w += 1;
    }
    let t = w * (w + 1) / 2;
    let m = (z128 - t) as u64;
    let n = (w as u64) - m;
    (n, m)
}

/// ⟨a₀, a₁, …, a_k⟩ for fixed arity, nested to the right.
pub fn tuple(items: &[u64]) -> Option<u64> {
    match items {
        [] => Some(0),
        [a] => Some(*a),
        [a, rest @ ..] => pair(*a, tuple(rest)?),
    }
}

pub fn untuple(z: u64, arity: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(arity);
    let mut cur = z;
    for i in 0..arity {
        if i + 1 == arity {
            out.push(cur);
        } else {
            let (a, b) = unpair(cur);
            out.push(a);
            cur = b;
        }
    }
    out
}

/// 2^k as a big natural.
pub fn pow2(k: u64) -> BigUint {
    BigUint::one() << k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_codes() {
        assert_eq!(SeqCode::encode(&[]).unwrap(), 0);
        assert_eq!(SeqCode::encode(&[3, 1]).unwrap(), 40);
        assert_eq!(SeqCode::decode(40), FinSeq(vec![3, 1]));
        assert_eq!(SeqCode::encode(&[1]).unwrap(), 2);
        assert_eq!(SeqCode::encode(&[0, 1]).unwrap(), 5);
        assert_eq!(SeqCode::encode(&[1, 1]).unwrap(), 10);
    }

    #[test]
    fn exhaustive_bijection() {
        for n in 0..10_000u64 {
            assert_eq!(SeqCode::encode(SeqCode::decode(n).items()).unwrap(), n);
        }
        fn all(len: usize, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
            out.push(cur.clone());
            if cur.len() == len {
                return;
            }
            for v in 0..6 {
                cur.push(v);
                all(len, out, cur);
                cur.pop();
            }
        }
        let mut seqs = Vec::new();
        all(4, &mut seqs, &mut Vec::new());
        for s in seqs {
            let c = SeqCode::encode(&s).unwrap();
            assert_eq!(SeqCode::decode(c).0, s);
            assert_eq!(SeqCode::len(c), s.len());
        }
    }

    #[test]
    fn big_and_small_agree() {
        for n in 0..5000u64 {
            let s = SeqCode::decode(n);
            assert_eq!(SeqCode::encode_big(s.items()), BigUint::from(n));
            assert_eq!(SeqCode::decode_big(&BigUint::from(n)), s);
        }
    }

    #[test]
    fn push_bit_matches_encode() {
        let bits = [1u8, 0, 0, 1, 1, 0, 1];
        let mut c = BigUint::zero();
        for i in 0..bits.len() {
            c = SeqCode::push_bit(&c, bits[i]);
            assert_eq!(c, SeqCode::encode_bits(&bits[..=i]));
        }
        assert_eq!(SeqCode::decode_bits(&c).unwrap(), bits.to_vec());
    }

    #[test]
    fn pairing_roundtrip() {
        for z in 0..20_000u64 {
            let (n, m) = unpair(z);
            assert_eq!(pair(n, m), Some(z));
        }
        assert_eq!(untuple(tuple(&[4, 9, 2]).unwrap(), 3), vec![4, 9, 2]);
        let big = u64::MAX - 5;
        let (n, m) = unpair(big);
        assert_eq!(pair(n, m), Some(big));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(SeqCode::encode(&[70]).is_err());
        assert!(SeqCode::encode(&[40, 40]).is_err());
    }
}
