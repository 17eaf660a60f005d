//! Executable reductions between the canonical problems.

pub mod basic;
pub mod bounded;
pub mod compose;
pub mod sep_path;

pub use basic::{c1_le_range, c1_le_sup, range_le_c1, range_le_sup, sep_le_c1, sup_le_c1};
pub use sep_path::{path2_le_sep, sep_le_path2, sep_tree, sep_tree_automaton};
pub use bounded::{block_tree, path2_le_pathb, pathb_le_path2};
pub use compose::{resplit_le_path2, sep_compose, sep_compose_default, tilde_tree, Resplit};
