//! Exact integer programming by depth-first branch-and-bound over the exact
//! LP relaxation.
//!
//! Branching is on the lowest-index fractional coordinate, floor side first.
//! Nodes whose relaxation bound is no better than the incumbent are pruned.
//! On totally unimodular systems with integer data the root relaxation is
//! already integral, so no branching happens.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::model::ExtInt;
use crate::rational::to_integers;
use crate::simplex::{lp_solve, ExactLp, LpResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IlpConfig {
    /// Maximum number of branch nodes (the root is not counted).
    pub node_limit: u64,
}

impl Default for IlpConfig {
    fn default() -> Self {
        IlpConfig {
            node_limit: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IlpResult {
    Infeasible,
    Optimal {
        point: Vec<BigInt>,
        value: BigRational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpReport {
    pub result: IlpResult,
    /// Branch nodes explored beyond the root relaxation.
    pub nodes: u64,
}

pub fn ilp_solve(lp: &ExactLp) -> Result<IlpReport> {
    ilp_solve_with(lp, &IlpConfig::default())
}

pub fn ilp_solve_with(lp: &ExactLp, config: &IlpConfig) -> Result<IlpReport> {
    let mut stack: Vec<(Vec<ExtInt>, Vec<ExtInt>)> = vec![(lp.lower.clone(), lp.upper.clone())];
    let mut incumbent: Option<(Vec<BigInt>, BigRational)> = None;
    let mut nodes = 0u64;
    let mut root = true;
    while let Some((lower, upper)) = stack.pop() {
        if !root {
            nodes += 1;
            if nodes > config.node_limit {
                return Err(Error::NodeLimitExceeded {
                    limit: config.node_limit,
                });
            }
        }
        root = false;
        let node = lp.with_bounds(lower, upper);
        let sol = match lp_solve(&node) {
            LpResult::Infeasible => continue,
            LpResult::Unbounded => return Err(Error::UnboundedInteger),
            LpResult::Optimal(sol) => sol,
        };
        if incumbent
            .as_ref()
            .is_some_and(|(_, best)| sol.value >= *best)
        {
            continue;
        }
        let Some(j) = sol.point.iter().position(|v| !v.is_integer()) else {
            let point = to_integers(&sol.point).expect("all coordinates integral");
            incumbent = Some((point, sol.value));
            continue;
        };
        let floor = sol.point[j].floor().to_integer();
        let ceil = &floor + 1;
        let mut up_lower = node.lower.clone();
        up_lower[j] = ExtInt::Finite(ceil);
        let mut down_upper = node.upper.clone();
        down_upper[j] = ExtInt::Finite(floor);
        // Pushed last, popped first.
        stack.push((up_lower, node.upper.clone()));
        stack.push((node.lower.clone(), down_upper));
    }
    let result = match incumbent {
        Some((point, value)) => IlpResult::Optimal { point, value },
        None => IlpResult::Infeasible,
    };
    Ok(IlpReport { result, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::IntMatrix;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn problem(rows: &[Vec<i64>], rhs: &[i64], lo: i64, hi: Option<i64>, obj: &[i64]) -> ExactLp {
        let a = IntMatrix::from_rows(rows).unwrap();
        let n = a.cols();
        let upper = match hi {
            Some(h) => vec![ExtInt::from(h); n],
            None => vec![ExtInt::PosInf; n],
        };
        ExactLp::new(
            a,
            rhs.iter().map(|&b| b.into()).collect(),
            vec![ExtInt::from(lo); n],
            upper,
            obj.iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
        .unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn knapsack_equality() {
        let report = ilp_solve(&problem(&[vec![2, 3]], &[7], 0, None, &[1, 0])).unwrap();
        assert_eq!(
            report.result,
            IlpResult::Optimal {
                point: ints(&[2, 1]),
                value: BigRational::from_integer(2.into())
            }
        );
    }

    #[test]
    fn parity_infeasible() {
        let report = ilp_solve(&problem(&[vec![2, 2]], &[3], 0, None, &[0, 0])).unwrap();
        assert_eq!(report.result, IlpResult::Infeasible);
        assert!(report.nodes > 0);
    }

    #[test]
    fn tu_root_is_integral() {
        let report = ilp_solve(&problem(&[vec![1, 1]], &[2], 0, Some(2), &[1, 0])).unwrap();
        assert_eq!(report.nodes, 0);
        assert_eq!(
            report.result,
            IlpResult::Optimal {
                point: ints(&[0, 2]),
                value: BigRational::zero()
            }
        );
    }

    #[test]
    fn unbounded_and_node_limit() {
        let ray = problem(&[vec![1, -1]], &[0], 0, None, &[-1, 0]);
        assert_eq!(ilp_solve(&ray), Err(Error::UnboundedInteger));
        // 2x - 2y = 1 has no integer points but infinitely many branches.
        let parity = problem(&[vec![2, -2]], &[1], 0, None, &[0, 0]);
        assert_eq!(
            ilp_solve_with(&parity, &IlpConfig { node_limit: 50 }),
            Err(Error::NodeLimitExceeded { limit: 50 })
        );
    }

    /// Exhaustive search over the box `[0, 5]^n`.
    fn enumerate(rows: &[Vec<i64>], rhs: &[i64], obj: &[i64]) -> Option<i64> {
        let n = obj.len();
        let mut best: Option<i64> = None;
        let mut x = vec![0i64; n];
        loop {
            let feasible = rows
                .iter()
                .zip(rhs)
                .all(|(r, b)| r.iter().zip(&x).map(|(a, v)| a * v).sum::<i64>() == *b);
            if feasible {
                let v: i64 = obj.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(v, |b| b.min(v)));
            }
            let mut k = 0;
            while k < n && x[k] == 5 {
                x[k] = 0;
                k += 1;
            }
            if k == n {
                return best;
            }
            x[k] += 1;
        }
    }

    proptest! {
        #[test]
        fn matches_enumeration(
            n in 1usize..=3,
            coeffs in proptest::collection::vec(-3i64..=3, 6),
            rhs in proptest::collection::vec(-6i64..=10, 2),
            obj in proptest::collection::vec(-4i64..=4, 3),
            two_rows in any::<bool>(),
        ) {
            let mut rows = vec![coeffs[..n].to_vec()];
            if two_rows {
                rows.push(coeffs[3..3 + n].to_vec());
            }
            let rhs = &rhs[..rows.len()];
            let obj = &obj[..n];
            let report = ilp_solve(&problem(&rows, rhs, 0, Some(5), obj)).unwrap();
            match (report.result, enumerate(&rows, rhs, obj)) {
                (IlpResult::Infeasible, None) => {}
                (IlpResult::Optimal { point, value }, Some(best)) => {
                    prop_assert_eq!(value, BigRational::from_integer(best.into()));
                    for (r, b) in rows.iter().zip(rhs) {
                        let lhs: BigInt = r.iter().zip(&point).map(|(a, v)| BigInt::from(*a) * v).sum();
                        prop_assert_eq!(lhs, BigInt::from(*b));
                    }
                }
                (got, want) => prop_assert!(false, "ilp {:?} vs enumeration {:?}", got, want),
            }
        }
    }
}
