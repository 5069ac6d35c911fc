//! Exact solver for huge n-fold integer programs over totally unimodular
//! matrices.
//!
//! A huge n-fold program has `n = n_1 + ... + n_t` bricks split into `t`
//! types, with every count `n_k` given as a big integer. Solutions are never
//! written out brick by brick; instead each type gets a *compact
//! presentation*: a short list of distinct bricks with multiplicities.
//!
//! The pipeline is:
//!
//! 1. [`huge::build_aggregate_tfold`] collapses each type to one aggregated
//!    brick `y^k`, giving a small `t`-fold program solved exactly by
//!    [`ilp::ilp_solve`].
//! 2. [`symmetric::decompose_symmetric`] splits each `y^k` into `n_k` valid
//!    bricks using a Carathéodory step followed by a bounded number of
//!    peeling steps, each of which is an exact LP vertex (integral because
//!    the matrix is totally unimodular).
//!
//! [`tables`] maps 3-way tables with line sums onto this machinery and
//! [`oracle`] provides brute-force ground truth for small instances.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod huge;
pub mod ilp;
pub mod model;
pub mod oracle;
pub mod simplex;
pub mod symmetric;
pub mod tables;

mod rational;

pub use error::{Error, Result};
pub use huge::{
    build_aggregate_tfold, expand_compact, huge_feasible, huge_optimize, verify_compact,
    verify_explicit, HugeResult, HugeSolution, SolutionViolation,
};
pub use ilp::{ilp_solve, ilp_solve_with, IlpConfig, IlpReport, IlpResult};
pub use model::{
    build_bipartite_incidence, build_nfold_matrix, check_total_unimodularity,
    validate_huge_instance, BrickCount, BrickType, CompactPresentation, ExtInt, HugeInstance,
    InstanceViolation, IntMatrix, SymmetricAggregate, TypePresentation,
};
pub use simplex::{
    caratheodory_decompose, find_vertex, is_vertex, lp_solve, ExactLp, LpResult, LpSolution,
};
pub use symmetric::{decompose_symmetric, peel_one_brick, symmetric_feasible};
pub use tables::{
    build_table_instance, solve_huge_table, verify_table, TableResult, TableSolution, TableSpec,
    TableType, TableViolation,
};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
