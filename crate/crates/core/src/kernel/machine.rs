//! Fueled monotone machines on Baire space.
//!
//! A machine is started into a run; each step consumes exactly one input item
//! and appends zero or more output items. Output is never retracted, so the
//! output after f steps is a prefix of the output after f+1 steps and depends
//! only on the first f input items.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::code::FinSeq;
use super::seq::{interleave, Seq, Step};

pub trait Run: Send {
    fn step(&mut self, input: u64, out: &mut Vec<u64>);
}

pub trait Transducer: Send + Sync {
    fn start(&self) -> Box<dyn Run>;
}

#[derive(Clone)]
pub struct Machine {
    inner: Arc<dyn Transducer>,
    desc: Option<MachineDesc>,
}

struct FnTransducer<S, F> {
    init: S,
    step: Arc<F>,
}

struct FnRun<S, F> {
    state: S,
    step: Arc<F>,
}

impl<S, F> Run for FnRun<S, F>
where
    S: Send,
    F: Fn(&mut S, u64, &mut Vec<u64>) + Send + Sync,
{
    fn step(&mut self, input: u64, out: &mut Vec<u64>) {
        (self.step)(&mut self.state, input, out)
    }
}

impl<S, F> Transducer for FnTransducer<S, F>
where
    S: Clone + Send + Sync + 'static,
    F: Fn(&mut S, u64, &mut Vec<u64>) + Send + Sync + 'static,
{
    fn start(&self) -> Box<dyn Run> {
        Box::new(FnRun { state: self.init.clone(), step: Arc::clone(&self.step) })
    }
}

struct ComposeT(Machine, Machine);

struct ComposeRun {
    first: Box<dyn Run>,
    second: Box<dyn Run>,
    queue: VecDeque<u64>,
    scratch: Vec<u64>,
}

impl Run for ComposeRun {
    fn step(&mut self, input: u64, out: &mut Vec<u64>) {
        self.scratch.clear();
        self.first.step(input, &mut self.scratch);
        self.queue.extend(self.scratch.drain(..));
        // The second machine may consume everything the first has emitted so far.
        while let Some(v) = self.queue.pop_front() {
            self.second.step(v, out);
        }
    }
}

impl Transducer for ComposeT {
    fn start(&self) -> Box<dyn Run> {
        Box::new(ComposeRun { first: self.0.inner.start(), second: self.1.inner.start(), queue: VecDeque::new(), scratch: Vec::new() })
    }
}

impl Machine {
    pub fn new(t: impl Transducer + 'static) -> Self {
        Machine { inner: Arc::new(t), desc: None }
    }

    /// Machine from an initial state and a step function.
    pub fn from_step<S, F>(init: S, step: F) -> Self
    where
        S: Clone + Send + Sync + 'static,
        F: Fn(&mut S, u64, &mut Vec<u64>) + Send + Sync + 'static,
    {
        Machine::new(FnTransducer { init, step: Arc::new(step) })
    }

    pub fn identity() -> Self {
        MachineDesc::Identity.build()
    }

    /// Pointwise map, one output per step.
    pub fn pointwise(f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        Machine::from_step((), move |_, x, out| out.push(f(x)))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Machine) -> Machine {
        let desc = match (&self.desc, &next.desc) {
            (Some(a), Some(b)) => Some(MachineDesc::Compose { parts: vec![a.clone(), b.clone()] }),
            _ => None,
        };
        Machine { inner: Arc::new(ComposeT(self.clone(), next.clone())), desc }
    }

    pub fn desc(&self) -> Option<&MachineDesc> {
        self.desc.as_ref()
    }

    pub fn start(&self) -> Box<dyn Run> {
        self.inner.start()
    }

    /// The output stream on `input`; reading index n runs as many steps as needed.
    pub fn apply(&self, input: &Seq) -> Seq {
        let mut run = self.inner.start();
        let input = input.clone();
        let mut pos = 0u64;
        let mut buf: VecDeque<u64> = VecDeque::new();
        let mut scratch = Vec::new();
        Seq::from_producer(move || {
            if let Some(v) = buf.pop_front() {
                return Step::Emit(v);
            }
            scratch.clear();
            run.step(input.get(pos), &mut scratch);
            pos += 1;
            buf.extend(scratch.drain(..));
            match buf.pop_front() {
                Some(v) => Step::Emit(v),
                None => Step::Stall,
            }
        })
    }
}

/// Output prefix emitted within `fuel` steps.
pub fn fueled_run(m: &Machine, input: &Seq, fuel: u64) -> FinSeq {
    let mut run = m.start();
    let mut out = Vec::new();
    for i in 0..fuel {
        run.step(input.get(i), &mut out);
    }
    FinSeq(out)
}

/// Serializable machine descriptions, the finite part of a function name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MachineDesc {
    Identity,
    AddConst { c: u64 },
    MulConst { c: u64 },
    /// Emits nothing for the first `k` steps, then echoes with lag k.
    Delay { k: u64 },
    PrefixSum,
    /// On interleaved input z ⊕ x, emits z(i) + x(i).
    PairSum,
    /// On interleaved input z ⊕ x, emits the `side` component (0 = z, 1 = x).
    Project { side: u8 },
    /// Emits each input value `times` times.
    Repeat { times: u64 },
    Compose { parts: Vec<MachineDesc> },
}

impl MachineDesc {
    pub fn build(&self) -> Machine {
        let inner = match self {
            MachineDesc::Identity => Machine::from_step((), |_, x, out| out.push(x)),
            MachineDesc::AddConst { c } => {
                let c = *c;
                Machine::from_step((), move |_, x, out| out.push(x.wrapping_add(c)))
            }
            MachineDesc::MulConst { c } => {
                let c = *c;
                Machine::from_step((), move |_, x, out| out.push(x.wrapping_mul(c)))
            }
            MachineDesc::Delay { k } => {
                let k = *k as usize;
                Machine::from_step(VecDeque::<u64>::new(), move |q, x, out| {
                    q.push_back(x);
                    if q.len() > k {
                        out.push(q.pop_front().unwrap());
                    }
                })
            }
            MachineDesc::PrefixSum => Machine::from_step(0u64, |acc, x, out| {
                *acc = acc.wrapping_add(x);
                out.push(*acc);
            }),
            MachineDesc::PairSum => Machine::from_step(None::<u64>, |pending, x, out| match pending.take() {
                None => *pending = Some(x),
                Some(z) => out.push(z.wrapping_add(x)),
            }),
            MachineDesc::Project { side } => {
                let side = *side as u64;
                Machine::from_step(0u64, move |i, x, out| {
                    if *i % 2 == side {
                        out.push(x);
                    }
                    *i += 1;
                })
            }
            MachineDesc::Repeat { times } => {
                let t = *times;
                Machine::from_step((), move |_, x, out| out.extend(std::iter::repeat(x).take(t as usize)))
            }
            MachineDesc::Compose { parts } => {
                let mut m = Machine::identity();
                for p in parts {
                    m = m.then(&p.build());
                }
                m
            }
        };
        Machine { inner: inner.inner, desc: Some(self.clone()) }
    }
}

/// A function name: a machine plus advice z, naming x ↦ m(z ⊕ x).
#[derive(Clone)]
pub struct FunctionName {
    pub machine: Machine,
    pub advice: Seq,
}

/// Type conversion: a machine on pairs becomes a machine producing function names.
#[derive(Clone)]
pub struct Curried {
    machine: Machine,
}

pub fn curry(m: &Machine) -> Curried {
    Curried { machine: m.clone() }
}

impl Curried {
    pub fn name_for(&self, z: &Seq) -> FunctionName {
        FunctionName { machine: self.machine.clone(), advice: z.clone() }
    }
}

pub fn uncurry(c: &Curried) -> Machine {
    let c = c.clone();
    Machine::new(UncurryT(c))
}

struct UncurryT(Curried);

impl Transducer for UncurryT {
    fn start(&self) -> Box<dyn Run> {
        self.0.machine.start()
    }
}

/// Evaluation (f, x) ↦ f(x).
pub fn evaluate(f: &FunctionName, x: &Seq) -> Seq {
    f.machine.apply(&interleave(&f.advice, x))
}
