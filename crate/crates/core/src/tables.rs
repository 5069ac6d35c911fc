//! Huge 3-way `l x m x n` tables with given line sums.
//!
//! Each layer is an `l x m` nonnegative integer matrix. A layer of type `k`
//! has column sums `e^k` and row sums `f^k`; summing all layers gives the
//! vertical line sums `g`. Vectorizing layers row-major turns this into a
//! huge n-fold program over the incidence matrix of `K_{l,m}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::huge::{huge_optimize_with, HugeResult};
use crate::ilp::IlpConfig;
use crate::model::{
    build_bipartite_incidence, BrickCount, BrickType, CompactPresentation, ExtInt, HugeInstance,
    TypePresentation,
};

pub type Layer = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableType {
    /// `l x m` cost matrix.
    pub cost: Layer,
    /// Column sums `e`, length `m`.
    pub col_sums: Vec<BigInt>,
    /// Row sums `f`, length `l`.
    pub row_sums: Vec<BigInt>,
    pub count: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub rows: usize,
    pub cols: usize,
    /// Vertical line sums `g`, `rows x cols`.
    pub line_sums: Layer,
    pub types: Vec<TableType>,
}

impl TableSpec {
    pub fn total_count(&self) -> BigInt {
        self.types.iter().map(|t| &t.count).sum()
    }

    fn check_shape(&self, layer: &Layer, what: &str) -> Result<()> {
        if layer.len() != self.rows || layer.iter().any(|r| r.len() != self.cols) {
            return Err(Error::InvalidTable(format!(
                "{what} must be {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidTable("dimensions must be positive".into()));
        }
        if self.types.is_empty() {
            return Err(Error::InvalidTable("no layer types".into()));
        }
        self.check_shape(&self.line_sums, "g")?;
        if self.line_sums.iter().flatten().any(Signed::is_negative) {
            return Err(Error::InvalidTable("line sums must be nonnegative".into()));
        }
        for (k, ty) in self.types.iter().enumerate() {
            self.check_shape(&ty.cost, &format!("types[{k}].w"))?;
            if ty.col_sums.len() != self.cols || ty.row_sums.len() != self.rows {
                return Err(Error::InvalidTable(format!(
                    "types[{k}]: e needs {} entries and f needs {}",
                    self.cols, self.rows
                )));
            }
            if ty
                .col_sums
                .iter()
                .chain(&ty.row_sums)
                .any(Signed::is_negative)
            {
                return Err(Error::InvalidTable(format!(
                    "types[{k}]: margins must be nonnegative"
                )));
            }
            if !ty.count.is_positive() {
                return Err(Error::InvalidTable(format!(
                    "types[{k}]: count must be positive"
                )));
            }
            let e: BigInt = ty.col_sums.iter().sum();
            let f: BigInt = ty.row_sums.iter().sum();
            if e != f {
                return Err(Error::InconsistentMargins { type_index: k });
            }
        }
        Ok(())
    }

    pub fn layer_to_brick(&self, layer: &Layer) -> Vec<BigInt> {
        layer.iter().flatten().cloned().collect()
    }

    pub fn brick_to_layer(&self, brick: &[BigInt]) -> Layer {
        brick.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }
}

/// The huge n-fold instance of a table problem. Cell bounds are
/// `0 <= z_ij <= min(f_i, e_j)`, which every layer with these margins
/// satisfies.
pub fn build_table_instance(spec: &TableSpec) -> Result<HugeInstance> {
    spec.validate()?;
    let matrix = build_bipartite_incidence(spec.rows, spec.cols);
    let types = spec
        .types
        .iter()
        .map(|ty| {
            let mut upper = Vec::with_capacity(spec.rows * spec.cols);
            for f in &ty.row_sums {
                for e in &ty.col_sums {
                    upper.push(ExtInt::Finite(f.min(e).clone()));
                }
            }
            BrickType {
                cost: spec.layer_to_brick(&ty.cost),
                lower: vec![ExtInt::Finite(BigInt::zero()); spec.rows * spec.cols],
                upper,
                rhs: ty.col_sums.iter().chain(&ty.row_sums).cloned().collect(),
                count: ty.count.clone(),
            }
        })
        .collect();
    Ok(HugeInstance {
        matrix,
        b0: spec.layer_to_brick(&spec.line_sums),
        types,
    })
}

/// Necessary conditions: row `i` of `g` sums to `sum_k n_k f^k_i` and column
/// `j` to `sum_k n_k e^k_j`.
pub fn margins_consistent(spec: &TableSpec) -> bool {
    let row_ok = (0..spec.rows).all(|i| {
        let got: BigInt = spec.line_sums[i].iter().sum();
        let want: BigInt = spec.types.iter().map(|t| &t.count * &t.row_sums[i]).sum();
        got == want
    });
    let col_ok = (0..spec.cols).all(|j| {
        let got: BigInt = spec.line_sums.iter().map(|r| &r[j]).sum();
        let want: BigInt = spec.types.iter().map(|t| &t.count * &t.col_sums[j]).sum();
        got == want
    });
    row_ok && col_ok
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSolution {
    pub objective: BigInt,
    /// Per type, distinct layers with multiplicities.
    pub layers: Vec<Vec<(Layer, BigInt)>>,
}

impl TableSolution {
    pub fn from_presentation(
        spec: &TableSpec,
        presentation: &CompactPresentation,
        objective: BigInt,
    ) -> Self {
        let layers = presentation
            .types
            .iter()
            .map(|p| {
                p.bricks
                    .iter()
                    .map(|b| (spec.brick_to_layer(&b.brick), b.multiplicity.clone()))
                    .collect()
            })
            .collect();
        TableSolution { objective, layers }
    }

    pub fn to_presentation(&self, spec: &TableSpec) -> CompactPresentation {
        CompactPresentation {
            types: self
                .layers
                .iter()
                .map(|layers| TypePresentation {
                    bricks: layers
                        .iter()
                        .map(|(layer, mult)| BrickCount {
                            brick: spec.layer_to_brick(layer),
                            multiplicity: mult.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableResult {
    Infeasible,
    Optimal(TableSolution),
}

pub fn solve_huge_table(spec: &TableSpec) -> Result<TableResult> {
    solve_huge_table_with(spec, &IlpConfig::default())
}

pub fn solve_huge_table_with(spec: &TableSpec, config: &IlpConfig) -> Result<TableResult> {
    let inst = build_table_instance(spec)?;
    if !margins_consistent(spec) {
        return Ok(TableResult::Infeasible);
    }
    Ok(match huge_optimize_with(&inst, config)? {
        HugeResult::Infeasible => TableResult::Infeasible,
        HugeResult::Optimal(sol) => TableResult::Optimal(TableSolution::from_presentation(
            spec,
            &sol.presentation,
            sol.objective,
        )),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableViolation {
    InvalidSpec,
    TypeCountMismatch {
        expected: usize,
        found: usize,
    },
    LayerShape {
        type_index: usize,
        layer: usize,
    },
    NegativeCell {
        type_index: usize,
        layer: usize,
    },
    NonPositiveMultiplicity {
        type_index: usize,
        layer: usize,
    },
    /// A layer's row or column sums differ from `(f^k, e^k)`.
    LayerMarginViolation {
        type_index: usize,
        layer: usize,
    },
    CountMismatch {
        type_index: usize,
    },
    /// Layers do not add up to `g` at a cell.
    LineSumMismatch {
        row: usize,
        col: usize,
    },
    ObjectiveMismatch,
    /// Explicit array: column sums of layer `layer` are wrong.
    ExplicitColumnSums {
        layer: usize,
    },
    ExplicitRowSums {
        layer: usize,
    },
    ExplicitVerticalSum {
        row: usize,
        col: usize,
    },
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TableViolation::*;
        match self {
            InvalidSpec => f.write_str("table description is invalid"),
            TypeCountMismatch { expected, found } => {
                write!(f, "expected {expected} types, found {found}")
            }
            LayerShape { type_index, layer } => {
                write!(f, "type {type_index} layer {layer}: wrong shape")
            }
            NegativeCell { type_index, layer } => {
                write!(f, "type {type_index} layer {layer}: negative entry")
            }
            NonPositiveMultiplicity { type_index, layer } => {
                write!(
                    f,
                    "type {type_index} layer {layer}: multiplicity not positive"
                )
            }
            LayerMarginViolation { type_index, layer } => {
                write!(
                    f,
                    "type {type_index} layer {layer}: margins differ from e and f"
                )
            }
            CountMismatch { type_index } => {
                write!(
                    f,
                    "type {type_index}: multiplicities do not sum to the count"
                )
            }
            LineSumMismatch { row, col } => {
                write!(f, "vertical sum at ({row}, {col}) differs from g")
            }
            ObjectiveMismatch => f.write_str("reported objective differs from the layer costs"),
            ExplicitColumnSums { layer } => write!(f, "expanded layer {layer}: column sums wrong"),
            ExplicitRowSums { layer } => write!(f, "expanded layer {layer}: row sums wrong"),
            ExplicitVerticalSum { row, col } => {
                write!(f, "expanded table: vertical sum at ({row}, {col}) wrong")
            }
        }
    }
}

fn row_sums(layer: &Layer) -> Vec<BigInt> {
    layer.iter().map(|r| r.iter().sum()).collect()
}

fn col_sums(layer: &Layer, cols: usize) -> Vec<BigInt> {
    (0..cols)
        .map(|j| layer.iter().map(|r| &r[j]).sum())
        .collect()
}

/// Checks a table solution. The compact checks always run; when the total
/// layer count is at most `limit`, the full `l x m x n` array is also built
/// and all three line-sum families are recomputed from it.
pub fn verify_table(spec: &TableSpec, sol: &TableSolution, limit: u64) -> Vec<TableViolation> {
    use TableViolation::*;
    let mut out = Vec::new();
    if spec.validate().is_err() {
        out.push(InvalidSpec);
        return out;
    }
    if sol.layers.len() != spec.types.len() {
        out.push(TypeCountMismatch {
            expected: spec.types.len(),
            found: sol.layers.len(),
        });
        return out;
    }
    let (l, m) = (spec.rows, spec.cols);
    let mut vertical = vec![vec![BigInt::zero(); m]; l];
    let mut cost = BigInt::zero();
    let mut shapes_ok = true;
    for (k, (ty, layers)) in spec.types.iter().zip(&sol.layers).enumerate() {
        let mut total = BigInt::zero();
        for (idx, (layer, mult)) in layers.iter().enumerate() {
            total += mult;
            if !mult.is_positive() {
                out.push(NonPositiveMultiplicity {
                    type_index: k,
                    layer: idx,
                });
            }
            if layer.len() != l || layer.iter().any(|r| r.len() != m) {
                out.push(LayerShape {
                    type_index: k,
                    layer: idx,
                });
                shapes_ok = false;
                continue;
            }
            if layer.iter().flatten().any(Signed::is_negative) {
                out.push(NegativeCell {
                    type_index: k,
                    layer: idx,
                });
            }
            if row_sums(layer) != ty.row_sums || col_sums(layer, m) != ty.col_sums {
                out.push(LayerMarginViolation {
                    type_index: k,
                    layer: idx,
                });
            }
            for i in 0..l {
                for j in 0..m {
                    vertical[i][j] += &layer[i][j] * mult;
                    cost += &layer[i][j] * &ty.cost[i][j] * mult;
                }
            }
        }
        if total != ty.count {
            out.push(CountMismatch { type_index: k });
        }
    }
    for i in 0..l {
        for j in 0..m {
            if vertical[i][j] != spec.line_sums[i][j] {
                out.push(LineSumMismatch { row: i, col: j });
            }
        }
    }
    if cost != sol.objective {
        out.push(ObjectiveMismatch);
    }

    let n = spec.total_count();
    let listed: BigInt = sol.layers.iter().flatten().map(|(_, m)| m).sum();
    let within = |v: &BigInt| v.to_u64().is_some_and(|v| v <= limit);
    let expand = shapes_ok && within(&n) && within(&listed);
    if expand {
        // x[k] is layer k of the explicit l x m x n array.
        let mut x: Vec<(&Layer, usize)> = Vec::new();
        for (k, layers) in sol.layers.iter().enumerate() {
            for (layer, mult) in layers {
                let reps = mult.to_usize().unwrap_or(0);
                x.extend(core::iter::repeat_n((layer, k), reps));
            }
        }
        for (idx, (layer, k)) in x.iter().enumerate() {
            let ty = &spec.types[*k];
            for j in 0..m {
                let s: BigInt = (0..l).map(|i| &layer[i][j]).sum();
                if s != ty.col_sums[j] {
                    out.push(ExplicitColumnSums { layer: idx });
                    break;
                }
            }
            for i in 0..l {
                let s: BigInt = (0..m).map(|j| &layer[i][j]).sum();
                if s != ty.row_sums[i] {
                    out.push(ExplicitRowSums { layer: idx });
                    break;
                }
            }
        }
        for i in 0..l {
            for j in 0..m {
                let s: BigInt = x.iter().map(|(layer, _)| &layer[i][j]).sum();
                if s != spec.line_sums[i][j] {
                    out.push(ExplicitVerticalSum { row: i, col: j });
                }
            }
        }
    }
    out
}
