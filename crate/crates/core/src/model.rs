//! Instance data and structural matrix builders.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::abs_le_one;

/// Largest number of entries [`build_nfold_matrix`] will materialize.
pub const MAX_EXPANDED_ENTRIES: usize = 50_000_000;

/// Exhaustive minor enumeration is only attempted up to this many columns.
pub const MAX_TU_CHECK_COLS: usize = 16;

/// Cap on the number of square submatrices [`check_total_unimodularity`]
/// will visit.
pub const MAX_TU_CHECK_MINORS: u64 = 5_000_000;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(entries.len()) {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows.saturating_mul(cols),
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows of anything convertible to `BigInt`. Ragged
    /// input is rejected.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self>
    where
        T: Clone + Into<BigInt>,
    {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix-vector product. Panics if `x.len() != self.cols()`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

/// An integer extended by the two infinities, used for variable bounds.
///
/// The derived ordering places `NegInf` below every finite value and
/// `PosInf` above.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Finite(BigInt),
    PosInf,
}

impl ExtInt {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            ExtInt::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    /// Multiplies by a nonnegative integer. Infinities are preserved for
    /// positive factors; a zero factor gives zero, since an empty sum of
    /// bounded terms is zero.
    pub fn scale(&self, factor: &BigInt) -> ExtInt {
        debug_assert!(!factor.is_negative());
        if factor.is_zero() {
            return ExtInt::Finite(BigInt::zero());
        }
        match self {
            ExtInt::Finite(v) => ExtInt::Finite(v * factor),
            other => other.clone(),
        }
    }

    /// Computes `value - self`.
    pub fn subtract_from(&self, value: &BigInt) -> ExtInt {
        match self {
            ExtInt::NegInf => ExtInt::PosInf,
            ExtInt::PosInf => ExtInt::NegInf,
            ExtInt::Finite(v) => ExtInt::Finite(value - v),
        }
    }

    pub fn cmp_value(&self, value: &BigInt) -> Ordering {
        match self {
            ExtInt::NegInf => Ordering::Less,
            ExtInt::PosInf => Ordering::Greater,
            ExtInt::Finite(v) => v.cmp(value),
        }
    }

    /// `self <= value`
    pub fn le_value(&self, value: &BigInt) -> bool {
        self.cmp_value(value) != Ordering::Greater
    }

    /// `self >= value`
    pub fn ge_value(&self, value: &BigInt) -> bool {
        self.cmp_value(value) != Ordering::Less
    }
}

impl From<BigInt> for ExtInt {
    fn from(v: BigInt) -> Self {
        ExtInt::Finite(v)
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Finite(BigInt::from(v))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::PosInf => f.write_str("+inf"),
            ExtInt::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// One class of bricks: cost, bounds, right-hand side and how many bricks
/// of this type the solution has.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickType {
    pub cost: Vec<BigInt>,
    pub lower: Vec<ExtInt>,
    pub upper: Vec<ExtInt>,
    pub rhs: Vec<BigInt>,
    pub count: BigInt,
}

/// A huge n-fold program: `sum_i x^i = b0`, and for each brick `i` of type
/// `k`, `A x^i = b^k`, `l^k <= x^i <= u^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HugeInstance {
    pub matrix: IntMatrix,
    pub b0: Vec<BigInt>,
    pub types: Vec<BrickType>,
}

impl HugeInstance {
    /// Brick dimension `d`.
    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    /// Total brick count `n`.
    pub fn total_count(&self) -> BigInt {
        self.types.iter().map(|t| &t.count).sum()
    }
}

/// The one-type problem: split `aggregate` into `count` bricks `z` with
/// `A z = rhs` and `lower <= z <= upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricAggregate {
    pub matrix: IntMatrix,
    pub aggregate: Vec<BigInt>,
    pub count: BigInt,
    pub rhs: Vec<BigInt>,
    pub lower: Vec<ExtInt>,
    pub upper: Vec<ExtInt>,
}

impl SymmetricAggregate {
    pub fn for_type(matrix: &IntMatrix, brick: &BrickType, aggregate: Vec<BigInt>) -> Self {
        SymmetricAggregate {
            matrix: matrix.clone(),
            aggregate,
            count: brick.count.clone(),
            rhs: brick.rhs.clone(),
            lower: brick.lower.clone(),
            upper: brick.upper.clone(),
        }
    }
}

/// A brick together with how often it occurs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BrickCount {
    pub brick: Vec<BigInt>,
    pub multiplicity: BigInt,
}

/// The multiset of bricks of one type, bricks sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct TypePresentation {
    pub bricks: Vec<BrickCount>,
}

impl TypePresentation {
    /// Builds a presentation from a multiplicity map, dropping zero entries.
    /// `BTreeMap` iteration gives the lexicographic order.
    pub fn from_map(map: BTreeMap<Vec<BigInt>, BigInt>) -> Self {
        TypePresentation {
            bricks: map
                .into_iter()
                .filter(|(_, m)| !m.is_zero())
                .map(|(brick, multiplicity)| BrickCount {
                    brick,
                    multiplicity,
                })
                .collect(),
        }
    }

    pub fn total(&self) -> BigInt {
        self.bricks.iter().map(|b| &b.multiplicity).sum()
    }

    pub fn support_size(&self) -> usize {
        self.bricks.len()
    }

    /// `sum multiplicity * brick`, or `None` if brick lengths are ragged.
    pub fn weighted_sum(&self, dim: usize) -> Option<Vec<BigInt>> {
        let mut sum = vec![BigInt::zero(); dim];
        for entry in &self.bricks {
            if entry.brick.len() != dim {
                return None;
            }
            for (s, z) in sum.iter_mut().zip(&entry.brick) {
                *s += z * &entry.multiplicity;
            }
        }
        Some(sum)
    }
}

/// Compact presentation of a huge solution: one multiset per type.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct CompactPresentation {
    pub types: Vec<TypePresentation>,
}

impl CompactPresentation {
    pub fn total_count(&self) -> BigInt {
        self.types.iter().map(TypePresentation::total).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceViolation {
    NoTypes,
    /// A vector or matrix has the wrong shape; the payload names the field.
    DimensionMismatch(String),
    /// `lower > upper` at a coordinate (0-based indices).
    BoundOrderViolation {
        type_index: usize,
        coord: usize,
    },
    NonPositiveCount {
        type_index: usize,
    },
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceViolation::NoTypes => f.write_str("instance has no brick types"),
            InstanceViolation::DimensionMismatch(field) => {
                write!(f, "dimension mismatch in {field}")
            }
            InstanceViolation::BoundOrderViolation { type_index, coord } => {
                write!(
                    f,
                    "type {type_index}: lower bound exceeds upper bound at coordinate {coord}"
                )
            }
            InstanceViolation::NonPositiveCount { type_index } => {
                write!(f, "type {type_index}: count must be positive")
            }
        }
    }
}

/// Checks shapes, counts and bound order. Says nothing about feasibility.
pub fn validate_huge_instance(inst: &HugeInstance) -> Vec<InstanceViolation> {
    let mut out = Vec::new();
    let d = inst.matrix.cols();
    let s = inst.matrix.rows();
    if inst.types.is_empty() {
        out.push(InstanceViolation::NoTypes);
    }
    if inst.b0.len() != d {
        out.push(InstanceViolation::DimensionMismatch("b0".into()));
    }
    for (k, ty) in inst.types.iter().enumerate() {
        for (field, len, want) in [
            ("w", ty.cost.len(), d),
            ("l", ty.lower.len(), d),
            ("u", ty.upper.len(), d),
            ("b", ty.rhs.len(), s),
        ] {
            if len != want {
                out.push(InstanceViolation::DimensionMismatch(format!(
                    "types[{k}].{field}"
                )));
            }
        }
        if !ty.count.is_positive() {
            out.push(InstanceViolation::NonPositiveCount { type_index: k });
        }
        for (j, (lo, hi)) in ty.lower.iter().zip(&ty.upper).enumerate() {
            if lo > hi || *lo == ExtInt::PosInf || *hi == ExtInt::NegInf {
                out.push(InstanceViolation::BoundOrderViolation {
                    type_index: k,
                    coord: j,
                });
            }
        }
    }
    out
}

/// The `(d + s n) x (d n)` n-fold product: `n` identity blocks across the
/// top, `A` repeated along the diagonal below.
pub fn build_nfold_matrix(a: &IntMatrix, n: usize) -> Result<IntMatrix> {
    let d = a.cols();
    let s = a.rows();
    let too_large = || Error::ExpansionTooLarge {
        requested: format!("{n}-fold product of a {s}x{d} matrix"),
        limit: format!("{MAX_EXPANDED_ENTRIES} entries, n >= 1"),
    };
    if n == 0 {
        return Err(too_large());
    }
    let rows = s
        .checked_mul(n)
        .and_then(|sn| sn.checked_add(d))
        .ok_or_else(too_large)?;
    let cols = d.checked_mul(n).ok_or_else(too_large)?;
    match rows.checked_mul(cols) {
        Some(size) if size <= MAX_EXPANDED_ENTRIES => {}
        _ => return Err(too_large()),
    }
    let mut out = IntMatrix::zeros(rows, cols);
    for block in 0..n {
        for j in 0..d {
            out.set(j, block * d + j, BigInt::one());
        }
        for i in 0..s {
            for j in 0..d {
                out.set(d + block * s + i, block * d + j, a.get(i, j).clone());
            }
        }
    }
    Ok(out)
}

/// Vertex-edge incidence matrix of `K_{l,m}`.
///
/// Column `i * m + j` is table cell `(i, j)` (0-based, row-major). Rows
/// `0..m` are the column-sum equations and rows `m..m+l` the row-sum
/// equations, so a layer's right-hand side reads `(e, f)`.
pub fn build_bipartite_incidence(l: usize, m: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(m + l, l * m);
    for i in 0..l {
        for j in 0..m {
            let cell = i * m + j;
            out.set(j, cell, BigInt::one());
            out.set(m + i, cell, BigInt::one());
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Exhaustive check that every square submatrix has determinant in
/// `{-1, 0, 1}`.
///
/// Refuses matrices with more than [`MAX_TU_CHECK_COLS`] columns or more than
/// [`MAX_TU_CHECK_MINORS`] square submatrices.
pub fn check_total_unimodularity(a: &IntMatrix) -> Result<bool> {
    let (rows, cols) = (a.rows(), a.cols());
    // sum_k C(r,k) C(c,k) = C(r+c, r), including the empty minor.
    let minors = binomial((rows + cols) as u64, rows as u64);
    if cols > MAX_TU_CHECK_COLS || minors > MAX_TU_CHECK_MINORS {
        return Err(Error::MatrixTooLargeForTuCheck { rows, cols });
    }
    if !a.entries().iter().all(abs_le_one) {
        return Ok(false);
    }
    let small: Vec<i128> = a
        .entries()
        .iter()
        .map(|v| {
            v.to_i128()
                .expect("entries already checked to be in {-1,0,1}")
        })
        .collect();
    for k in 2..=rows.min(cols) {
        let mut row_sel: Vec<usize> = (0..k).collect();
        loop {
            let mut col_sel: Vec<usize> = (0..k).collect();
            loop {
                let mut sub: Vec<i128> = Vec::with_capacity(k * k);
                for &r in &row_sel {
                    for &c in &col_sel {
                        sub.push(small[r * cols + c]);
                    }
                }
                if bareiss_det(&mut sub, k).abs() > 1 {
                    return Ok(false);
                }
                if !next_combination(&mut col_sel, cols) {
                    break;
                }
            }
            if !next_combination(&mut row_sel, rows) {
                break;
            }
        }
    }
    Ok(true)
}

/// Advances `sel` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(sel: &mut [usize], n: usize) -> bool {
    let k = sel.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if sel[i] < n - k + i {
            sel[i] += 1;
            for j in i + 1..k {
                sel[j] = sel[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Fraction-free Gaussian elimination; exact for integer input as long as
/// the minors fit in `i128`.
fn bareiss_det(m: &mut [i128], n: usize) -> i128 {
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n {
        if m[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                return 0;
            };
            for c in 0..n {
                m.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
            }
        }
        prev = m[k * n + k];
    }
    sign * m[n * n - 1]
}
