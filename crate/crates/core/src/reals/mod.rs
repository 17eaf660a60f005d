//! Exact rationals, computable reals and effective metric spaces.

pub mod creal;
pub mod metric;
pub mod ratenum;
pub mod rational;

pub use creal::{CReal, Cmp};
pub use metric::{CantorSpace, MetricSpaceDesc, RealLine, UnitInterval};
pub use ratenum::RatEnum;
pub use rational::{int, pow2, pow2_neg, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealError {
    #[error("invalid Cauchy name: modulus violated between indices {i} and {j}")]
    InvalidName { i: u32, j: u32 },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
