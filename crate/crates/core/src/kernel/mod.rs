//! Infinite sequences, finite-sequence coding, and fueled monotone machines.

pub mod code;
pub mod machine;
pub mod seq;
pub mod spec;

pub use code::{pair, tuple, unpair, untuple, FinSeq, SeqCode};
pub use machine::{curry, evaluate, fueled_run, uncurry, Curried, FunctionName, Machine, MachineDesc, Run, Transducer};
pub use spec::StreamSpec;
pub use seq::{deinterleave, interleave, Seq, SeqIter, Step, DEFAULT_DEMAND_FUEL};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("sequence code does not fit in 64 bits")]
    CodeOverflow,
    #[error("demand fuel {fuel} exhausted while producing index {index}")]
    Exhausted { index: u64, fuel: u64 },
}
