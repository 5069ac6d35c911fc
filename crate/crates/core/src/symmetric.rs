//! One brick type: feasibility test and decomposition of an aggregate into
//! `n` bricks.
//!
//! For a totally unimodular `A`, an integer `a` is the sum of `n` integer
//! bricks in `{z : A z = b, l <= z <= u}` exactly when `A a = n b` and
//! `n l <= a <= n u`. Decomposition never iterates over all `n` bricks.
//! When `n` divides `a` the answer is `n` copies of `a / n`; otherwise a
//! Carathéodory step writes `a / n` as a convex combination of at most
//! `d + 1` integral vertices, the floors of `n * weight` become
//! multiplicities, and the at most `d` leftover bricks are peeled one LP
//! vertex at a time.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{ExtInt, SymmetricAggregate, TypePresentation};
use crate::rational::to_integers;
use crate::simplex::{caratheodory_decompose, find_vertex, lp_solve, ExactLp, LpResult};

/// `A a = n b` and `n l <= a <= n u`, in exact arithmetic.
pub fn symmetric_feasible(agg: &SymmetricAggregate) -> bool {
    let d = agg.matrix.cols();
    if agg.aggregate.len() != d
        || agg.lower.len() != d
        || agg.upper.len() != d
        || agg.rhs.len() != agg.matrix.rows()
        || !agg.count.is_positive()
    {
        return false;
    }
    let n = &agg.count;
    let sums_match = agg
        .matrix
        .mul_vec(&agg.aggregate)
        .iter()
        .zip(&agg.rhs)
        .all(|(lhs, b)| *lhs == b * n);
    sums_match
        && agg
            .aggregate
            .iter()
            .enumerate()
            .all(|(j, a)| agg.lower[j].scale(n).le_value(a) && agg.upper[j].scale(n).ge_value(a))
}

/// Bounds every brick of every decomposition of `agg` must respect:
/// `max(l, a - (n-1) u) <= z <= min(u, a - (n-1) l)`.
fn tightened_bounds(agg: &SymmetricAggregate) -> (Vec<ExtInt>, Vec<ExtInt>) {
    let others = &agg.count - BigInt::one();
    let lower = agg
        .aggregate
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let from_rest = agg.upper[j].scale(&others).subtract_from(a);
            agg.lower[j].clone().max(from_rest)
        })
        .collect();
    let upper = agg
        .aggregate
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let from_rest = agg.lower[j].scale(&others).subtract_from(a);
            agg.upper[j].clone().min(from_rest)
        })
        .collect();
    (lower, upper)
}

fn brick_lp(agg: &SymmetricAggregate, lower: Vec<ExtInt>, upper: Vec<ExtInt>) -> Result<ExactLp> {
    ExactLp::feasibility(agg.matrix.clone(), agg.rhs.clone(), lower, upper)
}

/// Splits off one brick `z` such that the remaining `n - 1` bricks can still
/// be completed. `z` is an LP vertex of
/// `{A z = b, l <= z <= u, (n-1) l <= a - z <= (n-1) u}`.
///
/// Requires `n >= 2` and a feasible aggregate; otherwise `NotFeasible`.
pub fn peel_one_brick(agg: &SymmetricAggregate) -> Result<(Vec<BigInt>, SymmetricAggregate)> {
    if agg.count < BigInt::from(2) || !symmetric_feasible(agg) {
        return Err(Error::NotFeasible);
    }
    let (lower, upper) = tightened_bounds(agg);
    let lp = brick_lp(agg, lower, upper)?;
    let vertex = find_vertex(&lp).into_optimal().ok_or(Error::NotFeasible)?;
    let brick = to_integers(&vertex.point).ok_or(Error::NonIntegralVertex)?;
    let rest = SymmetricAggregate {
        aggregate: agg
            .aggregate
            .iter()
            .zip(&brick)
            .map(|(a, z)| a - z)
            .collect(),
        count: &agg.count - BigInt::one(),
        ..agg.clone()
    };
    assert!(symmetric_feasible(&rest), "peeling preserves feasibility");
    Ok((brick, rest))
}

/// Replaces infinite bounds by the LP range of that coordinate over the
/// brick polytope. Fails if the polytope is unbounded in some coordinate.
fn close_bounds(lp: &ExactLp) -> Result<ExactLp> {
    let n = lp.num_vars();
    let mut lower = lp.lower.clone();
    let mut upper = lp.upper.clone();
    for j in 0..n {
        for minimize in [true, false] {
            let bound = if minimize { &lower[j] } else { &upper[j] };
            if bound.is_finite() {
                continue;
            }
            let mut objective = alloc::vec![BigRational::zero(); n];
            objective[j] = if minimize {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            let value = match lp_solve(&lp.with_objective(objective)) {
                LpResult::Optimal(sol) => sol.point[j].clone(),
                LpResult::Unbounded => return Err(Error::UnboundedBrickSpace),
                LpResult::Infeasible => return Err(Error::NotFeasible),
            };
            if !value.is_integer() {
                return Err(Error::NonIntegralVertex);
            }
            let value = ExtInt::Finite(value.to_integer());
            if minimize {
                lower[j] = value;
            } else {
                upper[j] = value;
            }
        }
    }
    Ok(lp.with_bounds(lower, upper))
}

/// Compact presentation of `n` bricks summing to the aggregate, with support
/// at most `2d + 1`.
pub fn decompose_symmetric(agg: &SymmetricAggregate) -> Result<TypePresentation> {
    if !symmetric_feasible(agg) {
        return Err(Error::NotFeasible);
    }
    let d = agg.matrix.cols();
    let mut counts: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
    if agg.count.is_one() {
        counts.insert(agg.aggregate.clone(), BigInt::one());
        return Ok(TypePresentation::from_map(counts));
    }

    let (lower, upper) = tightened_bounds(agg);
    let polytope = close_bounds(&brick_lp(agg, lower, upper)?)?;
    // Integral mean: n copies of a/n, which lies in the brick polytope.
    if agg.aggregate.iter().all(|a| a.is_multiple_of(&agg.count)) {
        let mean = agg.aggregate.iter().map(|a| a / &agg.count).collect();
        counts.insert(mean, agg.count.clone());
        return Ok(TypePresentation::from_map(counts));
    }

    let n = BigRational::from_integer(agg.count.clone());
    let mean: Vec<BigRational> = agg
        .aggregate
        .iter()
        .map(|a| BigRational::from_integer(a.clone()) / &n)
        .collect();
    let terms = caratheodory_decompose(&polytope, &mean).map_err(|e| match e {
        Error::UnboundedRegion => Error::UnboundedBrickSpace,
        other => other,
    })?;

    let mut remainder = agg.aggregate.clone();
    let mut left = agg.count.clone();
    for (vertex, weight) in &terms {
        let vertex = to_integers(vertex).ok_or(Error::NonIntegralVertex)?;
        let mult = (&n * weight).floor().to_integer();
        if mult.is_zero() {
            continue;
        }
        for (r, z) in remainder.iter_mut().zip(&vertex) {
            *r -= z * &mult;
        }
        left -= &mult;
        *counts.entry(vertex).or_insert_with(BigInt::zero) += mult;
    }
    // Each term loses less than one brick to flooring.
    assert!(
        left < BigInt::from(terms.len()),
        "remainder has fewer bricks than terms"
    );

    if left.is_positive() {
        let mut rest = SymmetricAggregate {
            aggregate: remainder,
            count: left,
            ..agg.clone()
        };
        assert!(symmetric_feasible(&rest), "floor remainder stays feasible");
        while rest.count > BigInt::one() {
            let (brick, next) = peel_one_brick(&rest)?;
            *counts.entry(brick).or_insert_with(BigInt::zero) += 1;
            rest = next;
        }
        *counts.entry(rest.aggregate).or_insert_with(BigInt::zero) += 1;
    }

    let presentation = TypePresentation::from_map(counts);
    assert!(presentation.support_size() <= 2 * d + 2);
    Ok(presentation)
}
