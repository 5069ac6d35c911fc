//! Huge programs with `t` brick types.
//!
//! Summing the bricks of each type gives `y^k`; the typed program has a
//! solution exactly when the aggregated `t`-fold program
//!
//! ```text
//! sum_k y^k = b0,   A y^k = n_k b^k,   n_k l^k <= y^k <= n_k u^k
//! ```
//!
//! has an integer solution, and every such `y^k` splits back into `n_k`
//! bricks. The cost `sum_k w^k y^k` does not depend on how the split is
//! done, so an optimal `y` yields an optimal huge solution.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ilp::{ilp_solve_with, IlpConfig, IlpResult};
use crate::model::{
    build_nfold_matrix, validate_huge_instance, CompactPresentation, HugeInstance, IntMatrix,
    SymmetricAggregate,
};
use crate::rational::int_dot;
use crate::simplex::ExactLp;
use crate::symmetric::decompose_symmetric;

fn ensure_valid(inst: &HugeInstance) -> Result<()> {
    let violations = validate_huge_instance(inst);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInstance(violations))
    }
}

/// The aggregated `t`-fold program in variables `(y^1, ..., y^t)`. With
/// `with_objective` the cost is `sum_k w^k y^k`, otherwise zero.
pub fn build_aggregate_tfold(inst: &HugeInstance, with_objective: bool) -> Result<ExactLp> {
    ensure_valid(inst)?;
    let a = &inst.matrix;
    let (s, d, t) = (a.rows(), a.cols(), inst.types.len());
    let mut entries = vec![BigInt::zero(); (d + s * t) * (d * t)];
    let width = d * t;
    for k in 0..t {
        for j in 0..d {
            entries[j * width + k * d + j] = BigInt::from(1);
        }
        for i in 0..s {
            for j in 0..d {
                entries[(d + k * s + i) * width + k * d + j] = a.get(i, j).clone();
            }
        }
    }
    let matrix = IntMatrix::new(d + s * t, width, entries)?;
    let mut rhs = inst.b0.clone();
    let mut lower = Vec::with_capacity(width);
    let mut upper = Vec::with_capacity(width);
    let mut objective = Vec::with_capacity(width);
    for ty in &inst.types {
        rhs.extend(ty.rhs.iter().map(|b| b * &ty.count));
        lower.extend(ty.lower.iter().map(|l| l.scale(&ty.count)));
        upper.extend(ty.upper.iter().map(|u| u.scale(&ty.count)));
        objective.extend(ty.cost.iter().map(|w| {
            if with_objective {
                BigRational::from_integer(w.clone())
            } else {
                BigRational::zero()
            }
        }));
    }
    ExactLp::new(matrix, rhs, lower, upper, objective)
}

pub fn huge_feasible(inst: &HugeInstance) -> Result<bool> {
    huge_feasible_with(inst, &IlpConfig::default())
}

pub fn huge_feasible_with(inst: &HugeInstance, config: &IlpConfig) -> Result<bool> {
    let lp = build_aggregate_tfold(inst, false)?;
    Ok(matches!(
        ilp_solve_with(&lp, config)?.result,
        IlpResult::Optimal { .. }
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HugeSolution {
    pub presentation: CompactPresentation,
    pub objective: BigInt,
    /// Per-type brick sums `y^k` from the aggregated program.
    pub aggregates: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HugeResult {
    Infeasible,
    Optimal(HugeSolution),
}

pub fn huge_optimize(inst: &HugeInstance) -> Result<HugeResult> {
    huge_optimize_with(inst, &IlpConfig::default())
}

/// Solves the aggregated program once, then decomposes each `y^k` into a
/// compact presentation of `n_k` bricks.
pub fn huge_optimize_with(inst: &HugeInstance, config: &IlpConfig) -> Result<HugeResult> {
    let lp = build_aggregate_tfold(inst, true)?;
    let (point, value) = match ilp_solve_with(&lp, config)?.result {
        IlpResult::Infeasible => return Ok(HugeResult::Infeasible),
        IlpResult::Optimal { point, value } => (point, value),
    };
    let d = inst.dim();
    let aggregates: Vec<Vec<BigInt>> = point.chunks(d).map(<[BigInt]>::to_vec).collect();
    let mut presentation = CompactPresentation::default();
    let mut objective = BigInt::zero();
    for (ty, y) in inst.types.iter().zip(&aggregates) {
        objective += int_dot(&ty.cost, y);
        let agg = SymmetricAggregate::for_type(&inst.matrix, ty, y.clone());
        presentation.types.push(decompose_symmetric(&agg)?);
    }
    debug_assert_eq!(BigRational::from_integer(objective.clone()), value);
    Ok(HugeResult::Optimal(HugeSolution {
        presentation,
        objective,
        aggregates,
    }))
}

/// Objective `sum_k sum_z mult * (w^k . z)` of a presentation.
pub fn presentation_cost(inst: &HugeInstance, sol: &CompactPresentation) -> BigInt {
    inst.types
        .iter()
        .zip(&sol.types)
        .map(|(ty, p)| {
            p.bricks
                .iter()
                .map(|b| int_dot(&ty.cost, &b.brick) * &b.multiplicity)
                .sum::<BigInt>()
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionViolation {
    /// The instance itself fails validation, nothing else was checked.
    InvalidInstance,
    TypeCountMismatch {
        expected: usize,
        found: usize,
    },
    DimensionMismatch {
        type_index: usize,
        brick: usize,
    },
    NonPositiveMultiplicity {
        type_index: usize,
        brick: usize,
    },
    /// Bricks within a type are not in strictly increasing lexicographic order.
    NotSorted {
        type_index: usize,
    },
    DuplicateBrick {
        type_index: usize,
        brick: usize,
    },
    /// `A z != b^k`
    EquationViolation {
        type_index: usize,
        brick: usize,
    },
    BoundViolation {
        type_index: usize,
        brick: usize,
        coord: usize,
    },
    /// Multiplicities of a type do not add up to `n_k`.
    CountMismatch {
        type_index: usize,
    },
    /// Bricks do not add up to `b0`.
    TopSumMismatch,
    /// An explicit brick list has the wrong length.
    LengthMismatch {
        expected: String,
        found: usize,
    },
}

impl fmt::Display for SolutionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SolutionViolation::*;
        match self {
            InvalidInstance => f.write_str("instance is invalid"),
            TypeCountMismatch { expected, found } => {
                write!(f, "expected {expected} types, found {found}")
            }
            DimensionMismatch { type_index, brick } => {
                write!(f, "type {type_index} brick {brick}: wrong length")
            }
            NonPositiveMultiplicity { type_index, brick } => {
                write!(
                    f,
                    "type {type_index} brick {brick}: multiplicity not positive"
                )
            }
            NotSorted { type_index } => write!(f, "type {type_index}: bricks not sorted"),
            DuplicateBrick { type_index, brick } => {
                write!(f, "type {type_index} brick {brick}: duplicate")
            }
            EquationViolation { type_index, brick } => {
                write!(f, "type {type_index} brick {brick}: equations violated")
            }
            BoundViolation {
                type_index,
                brick,
                coord,
            } => write!(
                f,
                "type {type_index} brick {brick}: coordinate {coord} out of bounds"
            ),
            CountMismatch { type_index } => {
                write!(
                    f,
                    "type {type_index}: multiplicities do not sum to the count"
                )
            }
            TopSumMismatch => f.write_str("bricks do not sum to b0"),
            LengthMismatch { expected, found } => {
                write!(f, "expected {expected} bricks, found {found}")
            }
        }
    }
}

fn check_brick(
    inst: &HugeInstance,
    type_index: usize,
    brick: usize,
    z: &[BigInt],
    out: &mut Vec<SolutionViolation>,
) -> bool {
    let ty = &inst.types[type_index];
    if z.len() != inst.dim() {
        out.push(SolutionViolation::DimensionMismatch { type_index, brick });
        return false;
    }
    if inst.matrix.mul_vec(z) != ty.rhs {
        out.push(SolutionViolation::EquationViolation { type_index, brick });
    }
    for (coord, v) in z.iter().enumerate() {
        if !ty.lower[coord].le_value(v) || !ty.upper[coord].ge_value(v) {
            out.push(SolutionViolation::BoundViolation {
                type_index,
                brick,
                coord,
            });
        }
    }
    true
}

/// Checks a compact presentation against the instance in exact arithmetic,
/// without expanding it. Empty result means the presentation is a feasible
/// solution.
pub fn verify_compact(inst: &HugeInstance, sol: &CompactPresentation) -> Vec<SolutionViolation> {
    let mut out = Vec::new();
    if !validate_huge_instance(inst).is_empty() {
        out.push(SolutionViolation::InvalidInstance);
        return out;
    }
    if sol.types.len() != inst.types.len() {
        out.push(SolutionViolation::TypeCountMismatch {
            expected: inst.types.len(),
            found: sol.types.len(),
        });
        return out;
    }
    let d = inst.dim();
    let mut top = vec![BigInt::zero(); d];
    for (k, (ty, p)) in inst.types.iter().zip(&sol.types).enumerate() {
        let mut total = BigInt::zero();
        for (idx, entry) in p.bricks.iter().enumerate() {
            if !entry.multiplicity.is_positive() {
                out.push(SolutionViolation::NonPositiveMultiplicity {
                    type_index: k,
                    brick: idx,
                });
            }
            if idx > 0 {
                let prev = &p.bricks[idx - 1].brick;
                if *prev == entry.brick {
                    out.push(SolutionViolation::DuplicateBrick {
                        type_index: k,
                        brick: idx,
                    });
                } else if *prev > entry.brick {
                    out.push(SolutionViolation::NotSorted { type_index: k });
                }
            }
            if check_brick(inst, k, idx, &entry.brick, &mut out) {
                for (s, z) in top.iter_mut().zip(&entry.brick) {
                    *s += z * &entry.multiplicity;
                }
            }
            total += &entry.multiplicity;
        }
        if total != ty.count {
            out.push(SolutionViolation::CountMismatch { type_index: k });
        }
    }
    if top != inst.b0 {
        out.push(SolutionViolation::TopSumMismatch);
    }
    out
}

/// Lists all `n` bricks, type by type, each type in lexicographic order.
pub fn expand_compact(sol: &CompactPresentation, limit: u64) -> Result<Vec<Vec<BigInt>>> {
    if sol
        .types
        .iter()
        .flat_map(|p| &p.bricks)
        .any(|b| b.multiplicity.is_negative())
    {
        return Err(Error::DimensionMismatch("negative multiplicity".into()));
    }
    let n = sol.total_count();
    let too_large = || Error::ExpansionTooLarge {
        requested: format!("{n} bricks"),
        limit: format!("{limit}"),
    };
    let count = n.to_u64().ok_or_else(too_large)?;
    if count > limit {
        return Err(too_large());
    }
    let mut out = Vec::with_capacity(count as usize);
    for p in &sol.types {
        let mut sorted: BTreeMap<&[BigInt], BigInt> = BTreeMap::new();
        for entry in &p.bricks {
            *sorted.entry(&entry.brick).or_insert_with(BigInt::zero) += &entry.multiplicity;
        }
        for (brick, mult) in sorted {
            let reps = mult.to_u64().unwrap_or(0);
            out.extend((0..reps).map(|_| brick.to_vec()));
        }
    }
    Ok(out)
}

/// Checks an explicit brick list `x = (x^1, ..., x^n)` by multiplying it
/// with the materialized n-fold matrix. Bricks are assigned to types in
/// order: the first `n_1` to type 0, and so on.
pub fn verify_explicit(
    inst: &HugeInstance,
    bricks: &[Vec<BigInt>],
) -> Result<Vec<SolutionViolation>> {
    ensure_valid(inst)?;
    let n = inst.total_count();
    if BigInt::from(bricks.len()) != n {
        return Ok(vec![SolutionViolation::LengthMismatch {
            expected: format!("{n}"),
            found: bricks.len(),
        }]);
    }
    let d = inst.dim();
    let s = inst.matrix.rows();
    let mut out = Vec::new();
    let mut type_of = Vec::with_capacity(bricks.len());
    for (k, ty) in inst.types.iter().enumerate() {
        let c = ty
            .count
            .to_usize()
            .expect("count bounded by brick list length");
        type_of.extend(core::iter::repeat_n(k, c));
    }
    let mut x = Vec::with_capacity(d * bricks.len());
    for (i, z) in bricks.iter().enumerate() {
        let k = type_of[i];
        if z.len() != d {
            out.push(SolutionViolation::DimensionMismatch {
                type_index: k,
                brick: i,
            });
            return Ok(out);
        }
        for (coord, v) in z.iter().enumerate() {
            let ty = &inst.types[k];
            if !ty.lower[coord].le_value(v) || !ty.upper[coord].ge_value(v) {
                out.push(SolutionViolation::BoundViolation {
                    type_index: k,
                    brick: i,
                    coord,
                });
            }
        }
        x.extend(z.iter().cloned());
    }
    let product = build_nfold_matrix(&inst.matrix, bricks.len())?.mul_vec(&x);
    if product[..d] != inst.b0[..] {
        out.push(SolutionViolation::TopSumMismatch);
    }
    for (i, &k) in type_of.iter().enumerate() {
        let start = d + i * s;
        if product[start..start + s] != inst.types[k].rhs[..] {
            out.push(SolutionViolation::EquationViolation {
                type_index: k,
                brick: i,
            });
        }
    }
    Ok(out)
}
