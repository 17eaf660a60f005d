//! Finite subcovers of I from enumerations of open rational intervals.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::Seq;
use crate::multivalued::ReduceError;
use crate::reals::{rat, Rational};

/// Open interval (lo, hi).
pub type OpenInterval = (Rational, Rational);

/// Greedy endpoint chain: returns indices of intervals whose union contains
/// [0,1], or `None` if the given intervals do not cover it.
pub fn endpoint_chain(intervals: &[(u64, OpenInterval)]) -> Option<Vec<u64>> {
    let mut cur = Rational::zero();
    let mut chosen = Vec::new();
    loop {
        // An interval containing cur that reaches furthest right.
        let best = intervals.iter().filter(|(_, (lo, hi))| lo < &cur && hi > &cur).max_by(|a, b| a.1 .1.cmp(&b.1 .1))?;
        chosen.push(best.0);
        if best.1 .1 > Rational::one() {
            return Some(chosen);
        }
        cur = best.1 .1.clone();
    }
}

/// Checks that the union of the given open intervals contains [0,1].
pub fn covers_unit(intervals: &[OpenInterval]) -> bool {
    let idx: Vec<(u64, OpenInterval)> = intervals.iter().cloned().enumerate().map(|(i, v)| (i as u64, v)).collect();
    endpoint_chain(&idx).is_some()
}

/// Outcome of the subcover search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcover {
    pub indices: Vec<u64>,
    /// Intervals read from the enumeration.
    pub steps: u64,
}

/// Reads the enumeration until its first j+1 intervals cover I, then returns a
/// chain drawn from them. Fuel bounds the number of intervals read.
pub fn finite_subcover(cover: &Seq<OpenInterval>, fuel: u64) -> Result<Subcover, ReduceError> {
    let mut seen: Vec<(u64, OpenInterval)> = Vec::new();
    for j in 0..fuel {
        seen.push((j, cover.get(j)));
        if let Some(mut indices) = endpoint_chain(&seen) {
            indices.sort_unstable();
            return Ok(Subcover { indices, steps: j + 1 });
        }
    }
    Err(ReduceError::FuelExhausted(format!("no finite subcover among the first {fuel} intervals")))
}

/// A cover with `k` planted intervals that cover I, placed at random positions
/// below `spread` among junk intervals of width at most 1/100.
pub fn planted_cover(seed: u64, k: usize, spread: u64) -> Seq<OpenInterval> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts: Vec<Rational> = (0..k - 1).map(|_| rat(rng.gen_range(1..1000), 1000)).collect();
    cuts.sort();
    cuts.insert(0, Rational::zero());
    cuts.push(Rational::one());
    let eps = rat(1, 2000);
    let planted: Vec<OpenInterval> = (0..k).map(|i| (&cuts[i] - &eps, &cuts[i + 1] + &eps)).collect();
    let mut positions: Vec<u64> = Vec::new();
    while positions.len() < k {
        let p = rng.gen_range(0..spread);
        if !positions.contains(&p) {
            positions.push(p);
        }
    }
    Seq::from_fn(move |n| {
        if let Some(i) = positions.iter().position(|&p| p == n) {
            return planted[i].clone();
        }
        let mut r = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(n));
        let c = rat(r.gen_range(0..1000), 1000);
        let w = rat(r.gen_range(1..10), 1000);
        (&c - &w, &c + &w)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_wide_interval() {
        let c = Seq::constant((rat(-1, 4), rat(5, 4)));
        assert_eq!(finite_subcover(&c, 10).unwrap().indices, vec![0]);
    }

    #[test]
    fn two_overlapping_intervals() {
        let c = Seq::from_fn(|n| match n {
            0 => (rat(-1, 8), rat(6, 10)),
            1 => (rat(4, 10), rat(9, 8)),
            _ => (rat(0, 1), rat(1, 100)),
        });
        assert_eq!(finite_subcover(&c, 10).unwrap().indices, vec![0, 1]);
    }

    #[test]
    fn open_endpoints_matter() {
        // (−1, 1/2) ∪ (1/2, 2) misses 1/2.
        assert!(!covers_unit(&[(rat(-1, 1), rat(1, 2)), (rat(1, 2), rat(2, 1))]));
        assert!(covers_unit(&[(rat(-1, 1), rat(1, 2)), (rat(1, 3), rat(2, 1))]));
        // (0, 2) misses 0.
        assert!(!covers_unit(&[(rat(0, 1), rat(2, 1))]));
    }

    #[test]
    fn planted_covers_found() {
        for seed in 0..20 {
            let c = planted_cover(seed, 5, 200);
            let s = finite_subcover(&c, 10_000).unwrap();
            assert!(s.steps <= 200);
            let chosen: Vec<OpenInterval> = s.indices.iter().map(|&i| c.get(i)).collect();
            assert!(covers_unit(&chosen));
        }
    }

    #[test]
    fn fuel_exhaustion() {
        let c = Seq::constant((rat(0, 1), rat(1, 2)));
        assert!(matches!(finite_subcover(&c, 50), Err(ReduceError::FuelExhausted(_))));
    }
}
