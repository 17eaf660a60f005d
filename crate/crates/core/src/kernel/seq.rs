//! Demand-driven infinite sequences.

use std::sync::{Arc, Mutex};

use super::KernelError;

/// Stall budget used by [`Seq::get`] before it gives up on a producer.
pub const DEFAULT_DEMAND_FUEL: u64 = 1 << 26;

/// One production step of a stateful producer.
pub enum Step<T> {
    Emit(T),
    /// A step that consumed work but produced nothing yet.
    Stall,
}

type Producer<T> = Box<dyn FnMut() -> Step<T> + Send>;

struct Stream<T> {
    cache: Vec<T>,
    producer: Producer<T>,
}

enum Repr<T> {
    Func(Box<dyn Fn(u64) -> T + Send + Sync>),
    Stream(Mutex<Stream<T>>),
}

/// An infinite sequence, a point of Baire space when `T = u64`.
///
/// Clones share the underlying cache; produced values never change.
pub struct Seq<T = u64> {
    inner: Arc<Repr<T>>,
}

impl<T> Clone for Seq<T> {
    fn clone(&self) -> Self {
        Seq { inner: Arc::clone(&self.inner) }
    }
}

impl<T: Clone + Send + Sync + 'static> Seq<T> {
    /// Random-access sequence n ↦ f(n). `f` must be pure.
    pub fn from_fn(f: impl Fn(u64) -> T + Send + Sync + 'static) -> Self {
        Seq { inner: Arc::new(Repr::Func(Box::new(f))) }
    }

    /// Sequence produced in order by a stateful producer; values are cached.
    pub fn from_producer(producer: impl FnMut() -> Step<T> + Send + 'static) -> Self {
        Seq {
            inner: Arc::new(Repr::Stream(Mutex::new(Stream { cache: Vec::new(), producer: Box::new(producer) }))),
        }
    }

    /// Sequence whose n-th value is computed from the earlier values.
    pub fn recursive(f: impl Fn(&[T]) -> T + Send + 'static) -> Self {
        let mut seen: Vec<T> = Vec::new();
        Self::from_producer(move || {
            let v = f(&seen);
            seen.push(v.clone());
            Step::Emit(v)
        })
    }

    pub fn constant(v: T) -> Self {
        Self::from_fn(move |_| v.clone())
    }

    /// head⌢period⌢period⌢…; an empty period repeats the last head value.
    pub fn eventually_periodic(head: Vec<T>, period: Vec<T>) -> Self {
        assert!(!head.is_empty() || !period.is_empty(), "eventually periodic sequence needs a value");
        Self::from_fn(move |n| {
            let n = n as usize;
            if n < head.len() {
                head[n].clone()
            } else if period.is_empty() {
                head[head.len() - 1].clone()
            } else {
                period[(n - head.len()) % period.len()].clone()
            }
        })
    }

    /// Value at index n, spending at most `fuel` stalled producer steps.
    pub fn try_get(&self, n: u64, fuel: u64) -> Result<T, KernelError> {
        match &*self.inner {
            Repr::Func(f) => Ok(f(n)),
            Repr::Stream(m) => {
                let mut st = m.lock().unwrap_or_else(|e| e.into_inner());
                let mut stalls = 0u64;
                while st.cache.len() as u64 <= n {
                    match (st.producer)() {
                        Step::Emit(v) => st.cache.push(v),
                        Step::Stall => {
                            stalls += 1;
                            if stalls > fuel {
                                return Err(KernelError::Exhausted { index: n, fuel });
                            }
                        }
                    }
                }
                Ok(st.cache[n as usize].clone())
            }
        }
    }

    /// Value at index n. Panics if the producer stalls beyond [`DEFAULT_DEMAND_FUEL`].
    pub fn get(&self, n: u64) -> T {
        match self.try_get(n, DEFAULT_DEMAND_FUEL) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<T> {
        (0..n as u64).map(|i| self.get(i)).collect()
    }

    pub fn try_prefix(&self, n: usize, fuel: u64) -> Result<Vec<T>, KernelError> {
        (0..n as u64).map(|i| self.try_get(i, fuel)).collect()
    }

    pub fn map<U: Clone + Send + Sync + 'static>(&self, f: impl Fn(T) -> U + Send + Sync + 'static) -> Seq<U> {
        let s = self.clone();
        Seq::from_fn(move |n| f(s.get(n)))
    }

    /// n ↦ self(n + k).
    pub fn shift(&self, k: u64) -> Seq<T> {
        let s = self.clone();
        Seq::from_fn(move |n| s.get(n + k))
    }

    /// Same values, computed once and cached.
    pub fn memoized(&self) -> Seq<T> {
        let s = self.clone();
        let mut i = 0u64;
        Seq::from_producer(move || {
            let v = s.get(i);
            i += 1;
            Step::Emit(v)
        })
    }

    /// Same values with a random-access cache.
    pub fn cached(&self) -> Seq<T> {
        let s = self.clone();
        let cache: Mutex<std::collections::HashMap<u64, T>> = Mutex::new(std::collections::HashMap::new());
        Seq::from_fn(move |n| {
            if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
                return v.clone();
            }
            let v = s.get(n);
            cache.lock().unwrap_or_else(|e| e.into_inner()).insert(n, v.clone());
            v
        })
    }

    /// Independent in-order cursor; shares the cache.
    pub fn iter(&self) -> SeqIter<T> {
        SeqIter { seq: self.clone(), pos: 0 }
    }

    /// Number of values produced so far (0 for random-access sequences).
    pub fn produced(&self) -> usize {
        match &*self.inner {
            Repr::Func(_) => 0,
            Repr::Stream(m) => m.lock().unwrap_or_else(|e| e.into_inner()).cache.len(),
        }
    }
}

impl<T: std::fmt::Debug + Clone + Send + Sync + 'static> std::fmt::Debug for Seq<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Seq{:?}…", self.prefix(8))
    }
}

pub struct SeqIter<T> {
    seq: Seq<T>,
    pos: u64,
}

impl<T: Clone + Send + Sync + 'static> Iterator for SeqIter<T> {
    type Item = T;
    fn next(&mut self) -> Option<T> {
        let v = self.seq.get(self.pos);
        self.pos += 1;
        Some(v)
    }
}

/// (p ⊕ q)(2i) = p(i), (p ⊕ q)(2i+1) = q(i).
pub fn interleave<T: Clone + Send + Sync + 'static>(p: &Seq<T>, q: &Seq<T>) -> Seq<T> {
    let (p, q) = (p.clone(), q.clone());
    Seq::from_fn(move |n| if n % 2 == 0 { p.get(n / 2) } else { q.get(n / 2) })
}

pub fn deinterleave<T: Clone + Send + Sync + 'static>(r: &Seq<T>) -> (Seq<T>, Seq<T>) {
    let (a, b) = (r.clone(), r.clone());
    (Seq::from_fn(move |n| a.get(2 * n)), Seq::from_fn(move |n| b.get(2 * n + 1)))
}
