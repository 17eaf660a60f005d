//! Finite, serializable descriptions of sequences.

use serde::{Deserialize, Serialize};

use super::Seq;

/// An eventually periodic table or an arithmetic progression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamSpec {
    /// head⌢period^ω; `period` must be nonempty.
    Table { head: Vec<u64>, period: Vec<u64> },
    /// n ↦ mul·n + add.
    Affine { mul: u64, add: u64 },
}

impl StreamSpec {
    pub fn table(head: Vec<u64>, period: Vec<u64>) -> Self {
        StreamSpec::Table { head, period }
    }

    pub fn constant(v: u64) -> Self {
        StreamSpec::Table { head: vec![], period: vec![v] }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            StreamSpec::Table { period, .. } if period.is_empty() => Err("table period must be nonempty".into()),
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Seq {
        match self.clone() {
            StreamSpec::Table { head, period } => Seq::eventually_periodic(head, period),
            StreamSpec::Affine { mul, add } => Seq::from_fn(move |n| mul.wrapping_mul(n).wrapping_add(add)),
        }
    }

    pub fn at(&self, n: u64) -> u64 {
        match self {
            StreamSpec::Table { head, period } => {
                let n = n as usize;
                if n < head.len() { head[n] } else { period[(n - head.len()) % period.len()] }
            }
            StreamSpec::Affine { mul, add } => mul.wrapping_mul(n).wrapping_add(*add),
        }
    }

    /// The set of values, when finite.
    pub fn finite_range(&self) -> Option<Vec<u64>> {
        match self {
            StreamSpec::Table { head, period } => {
                let mut v: Vec<u64> = head.iter().chain(period.iter()).copied().collect();
                v.sort_unstable();
                v.dedup();
                Some(v)
            }
            StreamSpec::Affine { mul: 0, add } => Some(vec![*add]),
            StreamSpec::Affine { .. } => None,
        }
    }

    /// Least index m with self(m) = v, if any.
    pub fn first_index_of(&self, v: u64) -> Option<u64> {
        match self {
            StreamSpec::Table { head, period } => {
                if let Some(i) = head.iter().position(|&x| x == v) {
                    return Some(i as u64);
                }
                period.iter().position(|&x| x == v).map(|i| (head.len() + i) as u64)
            }
            StreamSpec::Affine { mul, add } => {
                if v < *add {
                    None
                } else if *mul == 0 {
                    (v == *add).then_some(0)
                } else {
                    ((v - add) % mul == 0).then(|| (v - add) / mul)
                }
            }
        }
    }
}
