//! Canonical problems: C_k, Ω, Range, Sup, Sep, Path₂, Path_B, and the
//! Heine–Borel subcover search, with verifiers and planted-instance oracles.

pub mod automaton;
pub mod ck;
pub mod cover;
pub mod range;
pub mod sep;
pub mod sup;
pub mod tree;

pub use automaton::{Automaton, AutomatonError};
pub use ck::{bounded_ck_oracle, ck_value, Ck, CkInstance, Omega, OmegaInstance};
pub use cover::{covers_unit, finite_subcover, OpenInterval, Subcover};
pub use range::{bounded_range_oracle, Range, RangeInstance};
pub use sep::{planted_sep_oracle, verify_separator, CharFn, Sep, SepInstance, SepPlanting, SepValue};
pub use sup::{sup_oracle, Sup, SupInstance, SupPlanting};
pub use tree::{
    auto_bounded_oracle, auto_path_oracle, decidable_bounded_oracle, decidable_path_oracle, planted_bounded_oracle,
    planted_path_oracle, regular_path_oracle, BoundedTree, Path2, PathB, TreeChar,
};
