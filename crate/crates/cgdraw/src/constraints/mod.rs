//! Constraint engines used by the embedding search: consecutivity of
//! subsets in a linear order, and 2-SAT.

mod pq;
mod twosat;

pub use pq::{pq_reduce, pq_tree, satisfies, ConsecutivityProblem, PqNode, PqTree};
pub use twosat::{two_sat_solve, Lit, TwoSatProblem};
