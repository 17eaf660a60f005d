//! Type-2 realizers for multi-valued problems at the level of Weak König's Lemma.
//!
//! The crate provides a demand-driven kernel ([`kernel`]), exact reals and
//! metric spaces ([`reals`]), problems and computable reductions
//! ([`multivalued`], [`problems`], [`reductions`]), hyperspaces and selection
//! ([`hyperspace`]), constructive Banach completions ([`banach`]) and both
//! reductions between the Hahn–Banach extension problem and Sep ([`hb`]).
//! [`registry`] exposes everything by string id for the command line.

pub mod kernel;
pub mod multivalued;
pub mod problems;
pub mod reals;
pub mod hyperspace;
pub mod banach;
pub mod hb;
pub mod reductions;
pub mod registry;

pub use kernel::{FinSeq, Machine, Seq, SeqCode};
