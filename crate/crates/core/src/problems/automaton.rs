//! Finite automata presenting trees: t is in the tree iff the run on t never
//! enters a dead state.

use serde::{Deserialize, Serialize};

use crate::kernel::{Seq, Step};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automaton {
    pub alphabet: usize,
    /// trans[state][symbol]
    pub trans: Vec<Vec<usize>>,
    pub initial: usize,
    pub dead: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("no live state is reachable: the tree has no infinite path")]
    EmptyTree,
}

impl Automaton {
    pub fn validate(&self) -> Result<(), AutomatonError> {
        let n = self.trans.len();
        let bad = |m: String| Err(AutomatonError::Malformed(m));
        if n == 0 || self.alphabet == 0 {
            return bad("no states or empty alphabet".into());
        }
        if self.dead.len() != n || self.initial >= n {
            return bad("state table sizes disagree".into());
        }
        for (s, row) in self.trans.iter().enumerate() {
            if row.len() != self.alphabet {
                return bad(format!("state {s} has {} transitions", row.len()));
            }
            if row.iter().any(|&t| t >= n) {
                return bad(format!("state {s} has a transition out of range"));
            }
        }
        Ok(())
    }

    /// Live states: not dead and the start of an infinite run avoiding dead states.
    pub fn live(&self) -> Vec<bool> {
        let mut alive: Vec<bool> = self.dead.iter().map(|d| !d).collect();
        loop {
            let mut changed = false;
            for s in 0..self.trans.len() {
                if alive[s] && !self.trans[s].iter().any(|&t| alive[t]) {
                    alive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    /// State after reading `t`, or `None` if the run hits a dead state.
    pub fn run(&self, t: &[u64]) -> Option<usize> {
        let mut s = self.initial;
        if self.dead[s] {
            return None;
        }
        for &a in t {
            if a as usize >= self.alphabet {
                return None;
            }
            s = self.trans[s][a as usize];
            if self.dead[s] {
                return None;
            }
        }
        Some(s)
    }

    pub fn accepts(&self, t: &[u64]) -> bool {
        self.run(t).is_some()
    }

    pub fn accepts_bits(&self, t: &[u8]) -> bool {
        let v: Vec<u64> = t.iter().map(|&b| b as u64).collect();
        self.accepts(&v)
    }

    /// Leftmost infinite path: at each node the least symbol leading to a live state.
    pub fn leftmost_path(&self) -> Result<Seq, AutomatonError> {
        self.validate()?;
        let live = self.live();
        if !live[self.initial] {
            return Err(AutomatonError::EmptyTree);
        }
        let a = self.clone();
        let mut s = self.initial;
        Ok(Seq::from_producer(move || {
            let sym = (0..a.alphabet).find(|&c| live[a.trans[s][c]]).expect("live state has a live successor");
            s = a.trans[s][sym];
            Step::Emit(sym as u64)
        }))
    }

    /// Full binary tree.
    pub fn full(alphabet: usize) -> Self {
        Automaton { alphabet, trans: vec![vec![0; alphabet]], initial: 0, dead: vec![false] }
    }

    /// Binary automaton on states (pos mod period) forcing given bits.
    /// `forced[i]` is the required bit at positions ≡ i (mod forced.len()), or None.
    pub fn forcing_periodic(forced: &[Option<u8>]) -> Self {
        let p = forced.len();
        let dead = p;
        let mut trans = vec![vec![dead; 2]; p + 1];
        for i in 0..p {
            for b in 0..2u8 {
                if forced[i].is_none_or(|f| f == b) {
                    trans[i][b as usize] = (i + 1) % p;
                }
            }
        }
        trans[dead] = vec![dead, dead];
        let mut deadv = vec![false; p + 1];
        deadv[dead] = true;
        Automaton { alphabet: 2, trans, initial: 0, dead: deadv }
    }

    /// Binary strings with no two consecutive 1s.
    pub fn no_consecutive_ones() -> Self {
        // 0: last bit 0 (or start), 1: last bit 1, 2: dead
        Automaton { alphabet: 2, trans: vec![vec![0, 1], vec![0, 2], vec![2, 2]], initial: 0, dead: vec![false, false, true] }
    }
}
