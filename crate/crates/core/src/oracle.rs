//! Brute-force ground truth for small instances.
//!
//! Nothing here touches the LP or integer programming code: bricks are
//! enumerated coordinate by coordinate inside their box, and typed solutions
//! are found by listing every multiset of bricks per type.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{
    validate_huge_instance, CompactPresentation, ExtInt, HugeInstance, IntMatrix, TypePresentation,
};
use crate::rational::int_dot;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Cap on `|S^k|` for any type.
    pub max_bricks: usize,
    /// Cap on any `n_k`.
    pub max_count: u64,
    /// Cap on multisets listed for a single type.
    pub max_multisets: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_bricks: 10_000,
            max_count: 8,
            max_multisets: 2_000_000,
        }
    }
}

/// All integer `z` with `A z = b` and `lower <= z <= upper`, sorted
/// lexicographically. Every bound must be finite.
pub fn enumerate_bricks(
    a: &IntMatrix,
    b: &[BigInt],
    lower: &[ExtInt],
    upper: &[ExtInt],
    max_bricks: usize,
) -> Result<Vec<Vec<BigInt>>> {
    let d = a.cols();
    if lower.len() != d || upper.len() != d || b.len() != a.rows() {
        return Err(Error::DimensionMismatch("brick enumeration".into()));
    }
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for j in 0..d {
        match (lower[j].finite(), upper[j].finite()) {
            (Some(l), Some(u)) => {
                lo.push(l.clone());
                hi.push(u.clone());
            }
            _ => return Err(Error::UnboundedBrickSpace),
        }
    }
    if lo.iter().zip(&hi).any(|(l, u)| l > u) {
        return Ok(Vec::new());
    }
    // suffix[j][i]: range of row i's contribution from coordinates j..d.
    let mut suffix = vec![vec![(BigInt::zero(), BigInt::zero()); a.rows()]; d + 1];
    for j in (0..d).rev() {
        for i in 0..a.rows() {
            let x = a.get(i, j) * &lo[j];
            let y = a.get(i, j) * &hi[j];
            let (mn, mx) = if x <= y { (x, y) } else { (y, x) };
            suffix[j][i] = (&suffix[j + 1][i].0 + mn, &suffix[j + 1][i].1 + mx);
        }
    }
    let mut out = Vec::new();
    let mut z = Vec::with_capacity(d);
    let partial = vec![BigInt::zero(); a.rows()];
    let ctx = Enumeration {
        a,
        b,
        lo: &lo,
        hi: &hi,
        suffix: &suffix,
        max_bricks,
    };
    ctx.recurse(0, &mut z, &partial, &mut out)?;
    Ok(out)
}

struct Enumeration<'a> {
    a: &'a IntMatrix,
    b: &'a [BigInt],
    lo: &'a [BigInt],
    hi: &'a [BigInt],
    suffix: &'a [Vec<(BigInt, BigInt)>],
    max_bricks: usize,
}

impl Enumeration<'_> {
    fn recurse(
        &self,
        j: usize,
        z: &mut Vec<BigInt>,
        partial: &[BigInt],
        out: &mut Vec<Vec<BigInt>>,
    ) -> Result<()> {
        let reachable = partial.iter().zip(self.b).enumerate().all(|(i, (p, b))| {
            let (mn, mx) = &self.suffix[j][i];
            p + mn <= *b && *b <= p + mx
        });
        if !reachable {
            return Ok(());
        }
        if j == self.lo.len() {
            if out.len() == self.max_bricks {
                return Err(Error::TooManyBricks {
                    limit: self.max_bricks,
                });
            }
            out.push(z.clone());
            return Ok(());
        }
        let mut v = self.lo[j].clone();
        while v <= self.hi[j] {
            let next: Vec<BigInt> = partial
                .iter()
                .enumerate()
                .map(|(i, p)| p + self.a.get(i, j) * &v)
                .collect();
            z.push(v.clone());
            self.recurse(j + 1, z, &next, out)?;
            z.pop();
            v += 1;
        }
        Ok(())
    }
}

fn multiset_count(bricks: usize, n: u64) -> Option<u64> {
    // C(bricks + n - 1, n)
    if bricks == 0 {
        return Some(0);
    }
    let top = bricks as u64 + n - 1;
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc * u128::from(top - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    acc.to_u64()
}

/// Visits every multiset of size `n` drawn from `0..bricks`, as a
/// non-decreasing index sequence, in lexicographic order.
fn for_each_multiset(bricks: usize, n: usize, mut visit: impl FnMut(&[usize])) {
    if bricks == 0 {
        if n == 0 {
            visit(&[]);
        }
        return;
    }
    let mut idx = vec![0usize; n];
    loop {
        visit(&idx);
        let Some(pos) = (0..n).rev().find(|&p| idx[p] + 1 < bricks) else {
            return;
        };
        let v = idx[pos] + 1;
        for slot in idx.iter_mut().skip(pos) {
            *slot = v;
        }
    }
}

/// Every sum of exactly `n` bricks (with repetition).
pub fn reachable_sums(bricks: &[Vec<BigInt>], n: usize, dim: usize) -> BTreeSet<Vec<BigInt>> {
    let mut out = BTreeSet::new();
    for_each_multiset(bricks.len(), n, |idx| {
        let mut sum = vec![BigInt::zero(); dim];
        for &i in idx {
            for (s, z) in sum.iter_mut().zip(&bricks[i]) {
                *s += z;
            }
        }
        out.insert(sum);
    });
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Infeasible,
    Optimal {
        objective: BigInt,
        witness: CompactPresentation,
    },
}

/// Partial top sum mapped to its cheapest cost and the bricks chosen per type.
type States = BTreeMap<Vec<BigInt>, (BigInt, Vec<Vec<Vec<BigInt>>>)>;

/// Exhaustive optimum over all choices of `n_k` bricks from each `S^k`.
pub fn brute_force_optimize(inst: &HugeInstance, limits: &OracleLimits) -> Result<OracleResult> {
    let violations = validate_huge_instance(inst);
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations));
    }
    let d = inst.dim();
    // partial sum -> (cost, chosen bricks per type so far)
    let mut states: States = BTreeMap::new();
    states.insert(vec![BigInt::zero(); d], (BigInt::zero(), Vec::new()));
    for (k, ty) in inst.types.iter().enumerate() {
        let n = ty
            .count
            .to_u64()
            .filter(|&n| n <= limits.max_count)
            .ok_or_else(|| Error::ScaleTooLarge(format!("type {k} count {}", ty.count)))?;
        let bricks = enumerate_bricks(
            &inst.matrix,
            &ty.rhs,
            &ty.lower,
            &ty.upper,
            limits.max_bricks,
        )?;
        match multiset_count(bricks.len(), n) {
            Some(c) if c <= limits.max_multisets => {}
            _ => {
                return Err(Error::ScaleTooLarge(format!(
                    "type {k}: {} bricks choose {n} with repetition",
                    bricks.len()
                )))
            }
        }
        // sum of this type's bricks -> cheapest multiset
        let mut per_type: BTreeMap<Vec<BigInt>, (BigInt, Vec<usize>)> = BTreeMap::new();
        let costs: Vec<BigInt> = bricks.iter().map(|z| int_dot(&ty.cost, z)).collect();
        for_each_multiset(bricks.len(), n as usize, |idx| {
            let mut sum = vec![BigInt::zero(); d];
            let mut cost = BigInt::zero();
            for &i in idx {
                cost += &costs[i];
                for (s, z) in sum.iter_mut().zip(&bricks[i]) {
                    *s += z;
                }
            }
            let better = per_type.get(&sum).is_none_or(|(best, _)| cost < *best);
            if better {
                per_type.insert(sum, (cost, idx.to_vec()));
            }
        });
        let mut next: States = BTreeMap::new();
        for (partial, (cost, chosen)) in &states {
            for (sum, (type_cost, idx)) in &per_type {
                let total: Vec<BigInt> = partial.iter().zip(sum).map(|(a, b)| a + b).collect();
                let total_cost = cost + type_cost;
                if next.get(&total).is_none_or(|(best, _)| total_cost < *best) {
                    let mut chosen = chosen.clone();
                    chosen.push(idx.iter().map(|&i| bricks[i].clone()).collect());
                    next.insert(total, (total_cost, chosen));
                }
            }
        }
        states = next;
    }
    Ok(match states.remove(&inst.b0) {
        None => OracleResult::Infeasible,
        Some((objective, chosen)) => {
            let types = chosen
                .into_iter()
                .map(|bricks| {
                    let mut counts: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
                    for z in bricks {
                        *counts.entry(z).or_insert_with(BigInt::zero) += BigInt::one();
                    }
                    TypePresentation::from_map(counts)
                })
                .collect();
            OracleResult::Optimal {
                objective,
                witness: CompactPresentation { types },
            }
        }
    })
}
