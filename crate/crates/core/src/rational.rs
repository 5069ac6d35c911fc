//! Small helpers shared by the exact LP code.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

#[cfg(test)]
pub(crate) fn is_integral(xs: &[BigRational]) -> bool {
    xs.iter().all(|x| x.is_integer())
}

/// Converts an integral rational vector, `None` if any entry is fractional.
pub(crate) fn to_integers(xs: &[BigRational]) -> Option<Vec<BigInt>> {
    xs.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Rank of a dense rational matrix by Gaussian elimination.
pub(crate) fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for c in col..ncols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub(crate) fn abs_le_one(x: &BigInt) -> bool {
    x.abs() <= BigInt::one()
}
