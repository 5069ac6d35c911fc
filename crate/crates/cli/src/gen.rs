//! Seeded instance generators. Every generated instance is feasible because
//! the right-hand sides are computed from a hidden solution.

use nfold_core::oracle::enumerate_bricks;
use nfold_core::{
    build_bipartite_incidence, BrickType, ExtInt, HugeInstance, IntMatrix, TableSpec, TableType,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOptions {
    pub seed: u64,
    pub types: usize,
    pub count: BigInt,
    pub rows: usize,
    pub cols: usize,
}

fn catalog() -> Vec<IntMatrix> {
    let rows = |r: &[&[i64]]| {
        IntMatrix::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    };
    vec![
        rows(&[&[1, 1]]),
        rows(&[&[1, 1, 1]]),
        rows(&[&[1, 1, 0], &[0, 1, 1]]),
        rows(&[&[1, -1, 0], &[0, 1, -1]]),
        build_bipartite_incidence(2, 2),
    ]
}

/// Splits `n` into up to `parts` nonnegative pieces.
fn split(rng: &mut ChaCha8Rng, n: &BigInt, parts: usize) -> Vec<BigInt> {
    let mut rest = n.clone();
    let mut out = Vec::with_capacity(parts);
    for _ in 1..parts {
        let share = &rest * BigInt::from(rng.gen_range(0..=1000u32)) / BigInt::from(1000u32);
        rest -= &share;
        out.push(share);
    }
    out.push(rest);
    out
}

/// Picks up to three bricks from `bricks` and spreads `n` over them.
fn hidden_sum(rng: &mut ChaCha8Rng, bricks: &[Vec<BigInt>], n: &BigInt) -> Vec<BigInt> {
    let chosen: Vec<&Vec<BigInt>> = bricks.choose_multiple(rng, 3.min(bricks.len())).collect();
    let shares = split(rng, n, chosen.len());
    let mut sum = vec![BigInt::zero(); bricks[0].len()];
    for (brick, share) in chosen.iter().zip(&shares) {
        for (s, z) in sum.iter_mut().zip(brick.iter()) {
            *s += share * z;
        }
    }
    sum
}

fn check(opts: &GenOptions) -> Result<(), CliError> {
    if opts.types == 0 {
        return Err(CliError::Usage("--types must be positive".into()));
    }
    if opts.count <= BigInt::zero() {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    Ok(())
}

pub fn gen_huge(opts: &GenOptions) -> Result<HugeInstance, CliError> {
    check(opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let matrix = catalog().swap_remove(rng.gen_range(0..5));
    let d = matrix.cols();
    let mut b0 = vec![BigInt::zero(); d];
    let mut types = Vec::with_capacity(opts.types);
    for k in 0..opts.types {
        let upper: Vec<ExtInt> = (0..d)
            .map(|_| ExtInt::from(rng.gen_range(1..=3i64)))
            .collect();
        let lower = vec![ExtInt::from(0); d];
        let seed_brick: Vec<BigInt> = upper
            .iter()
            .map(|u| {
                BigInt::from(
                    rng.gen_range(
                        0..=u
                            .finite()
                            .and_then(num_traits::ToPrimitive::to_i64)
                            .unwrap_or(0),
                    ),
                )
            })
            .collect();
        let rhs = matrix.mul_vec(&seed_brick);
        let bricks = enumerate_bricks(&matrix, &rhs, &lower, &upper, 10_000)?;
        let count = &opts.count + BigInt::from(k);
        for (s, y) in b0.iter_mut().zip(hidden_sum(&mut rng, &bricks, &count)) {
            *s += y;
        }
        types.push(BrickType {
            cost: (0..d)
                .map(|_| BigInt::from(rng.gen_range(-5..=5i64)))
                .collect(),
            lower,
            upper,
            rhs,
            count,
        });
    }
    Ok(HugeInstance { matrix, b0, types })
}

pub fn gen_table(opts: &GenOptions) -> Result<TableSpec, CliError> {
    check(opts)?;
    if opts.rows == 0 || opts.cols == 0 || opts.rows * opts.cols > 12 {
        return Err(CliError::Usage(
            "--rows x --cols must be between 1 and 12 cells".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (l, m) = (opts.rows, opts.cols);
    let mut spec = TableSpec {
        rows: l,
        cols: m,
        line_sums: vec![vec![BigInt::zero(); m]; l],
        types: Vec::with_capacity(opts.types),
    };
    let matrix = build_bipartite_incidence(l, m);
    for k in 0..opts.types {
        let layer: Vec<Vec<BigInt>> = (0..l)
            .map(|_| {
                (0..m)
                    .map(|_| BigInt::from(rng.gen_range(0..=2i64)))
                    .collect()
            })
            .collect();
        let col_sums: Vec<BigInt> = (0..m).map(|j| layer.iter().map(|r| &r[j]).sum()).collect();
        let row_sums: Vec<BigInt> = layer.iter().map(|r| r.iter().sum()).collect();
        let ty = TableType {
            cost: (0..l)
                .map(|_| {
                    (0..m)
                        .map(|_| BigInt::from(rng.gen_range(-5..=5i64)))
                        .collect()
                })
                .collect(),
            col_sums,
            row_sums,
            count: &opts.count + BigInt::from(k),
        };
        let rhs: Vec<BigInt> = ty.col_sums.iter().chain(&ty.row_sums).cloned().collect();
        let upper: Vec<ExtInt> = (0..l)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| ExtInt::Finite((&ty.row_sums[i]).min(&ty.col_sums[j]).clone()))
            .collect();
        let lower = vec![ExtInt::from(0); l * m];
        let bricks = enumerate_bricks(&matrix, &rhs, &lower, &upper, 100_000)?;
        let sum = hidden_sum(&mut rng, &bricks, &ty.count);
        for (idx, v) in sum.into_iter().enumerate() {
            spec.line_sums[idx / m][idx % m] += v;
        }
        spec.types.push(ty);
    }
    Ok(spec)
}
