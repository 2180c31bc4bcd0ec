//! Exact-arithmetic workbench for differential graded operads in mixed
//! complexes: graph and tree operads, cyclic-chain functors, polyvector and
//! multidifferential calculus, and brute-force homology over the rationals.

pub mod exactla;
pub mod mixed;
pub mod operad;
pub mod graphops;
pub mod treeops;
pub mod poly;
pub mod twist;
pub mod cli;

pub use exactla::{q, FormalSum, GradedBasis, Rational, SparseMatrix};
