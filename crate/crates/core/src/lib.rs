//! Exact computer algebra for first-order differential operators and
//! compositional inversion of formal power series.
//!
//! * [`poly`]: sparse multivariate polynomials over the rationals.
//! * [`diffop`]: differential operators with the composition ⋄, the white
//!   product ∘ and the black product •, plus the subset/partition operators
//!   that expand `L_m ⋄ ... ⋄ L_1` as a sum over set partitions.
//! * [`combinatorics`]: set and integer partitions, Bell polynomials,
//!   Stirling numbers of the second kind.
//! * [`series`]: truncated exponential generating functions and four ways of
//!   computing a compositional inverse, including the logarithmic form
//!   `f^{-1}(x) = ln sum_m ((1/f') d/dx)^m (e^x)|_{x=0} x^m/m!`.
//! * [`suite`]: seeded, self-checking verification of the operator
//!   identities and the inversion formulas.

pub mod combinatorics;
pub mod diffop;
pub mod error;
pub mod poly;
pub mod random;
pub mod rational;
pub mod series;
pub mod suite;

pub use combinatorics::{
    bell_eval_bullet, bell_number, bell_polynomial, integer_partitions, partition_count_coeff,
    set_partitions, stirling2, BellPoly, IntPartition, SetPartition,
};
pub use diffop::{DiffOp, OpList, Order};
pub use error::{Error, Result};
pub use poly::{MultiIndex, MultiPoly};
pub use random::RandomSpec;
pub use rational::Rational;
pub use series::{Convention, EgfSeries, InvertibleSeries, LogFormInverse, SeriesJson};
pub use suite::{run_theorem, InverseSet, TheoremId, VerifyReport};
