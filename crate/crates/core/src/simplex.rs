//! Exact rational simplex over `{x : A x = b, lower <= x <= upper}`.
//!
//! Bounds are moved into a standard-form tableau (`x' >= 0`, finite boxes
//! become explicit rows with a slack) and solved with a two-phase dense
//! tableau method using Bland's rule. Every quantity is a reduced
//! `BigRational`, so there are no tolerances anywhere.
//!
//! A basic feasible solution of the standard form maps back to a vertex of
//! the original region whenever that region has vertices (always the case for
//! bounded regions). If the constraint matrix is totally unimodular and the
//! data are integers, that vertex is integral.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{ExtInt, IntMatrix};
use crate::rational::{dot, rank, rat};

/// Equality system with box bounds and a rational objective to minimize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactLp {
    pub matrix: IntMatrix,
    pub rhs: Vec<BigInt>,
    pub lower: Vec<ExtInt>,
    pub upper: Vec<ExtInt>,
    pub objective: Vec<BigRational>,
}

impl ExactLp {
    pub fn new(
        matrix: IntMatrix,
        rhs: Vec<BigInt>,
        lower: Vec<ExtInt>,
        upper: Vec<ExtInt>,
        objective: Vec<BigRational>,
    ) -> Result<Self> {
        let n = matrix.cols();
        if rhs.len() != matrix.rows()
            || lower.len() != n
            || upper.len() != n
            || objective.len() != n
        {
            return Err(Error::DimensionMismatch(format!(
                "LP with {}x{} matrix: rhs {}, lower {}, upper {}, objective {}",
                matrix.rows(),
                n,
                rhs.len(),
                lower.len(),
                upper.len(),
                objective.len()
            )));
        }
        if let Some(j) = (0..n).find(|&j| {
            lower[j] > upper[j] || lower[j] == ExtInt::PosInf || upper[j] == ExtInt::NegInf
        }) {
            return Err(Error::DimensionMismatch(format!(
                "bounds of variable {j} are out of order"
            )));
        }
        Ok(ExactLp {
            matrix,
            rhs,
            lower,
            upper,
            objective,
        })
    }

    /// Same constraints with a zero objective.
    pub fn feasibility(
        matrix: IntMatrix,
        rhs: Vec<BigInt>,
        lower: Vec<ExtInt>,
        upper: Vec<ExtInt>,
    ) -> Result<Self> {
        let n = matrix.cols();
        ExactLp::new(matrix, rhs, lower, upper, vec![BigRational::zero(); n])
    }

    pub fn num_vars(&self) -> usize {
        self.matrix.cols()
    }

    pub fn with_objective(&self, objective: Vec<BigRational>) -> ExactLp {
        assert_eq!(objective.len(), self.num_vars());
        ExactLp {
            objective,
            ..self.clone()
        }
    }

    pub fn with_bounds(&self, lower: Vec<ExtInt>, upper: Vec<ExtInt>) -> ExactLp {
        assert_eq!(lower.len(), self.num_vars());
        assert_eq!(upper.len(), self.num_vars());
        ExactLp {
            lower,
            upper,
            ..self.clone()
        }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[BigRational]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let in_box = x
            .iter()
            .enumerate()
            .all(|(j, v)| lower_ok(&self.lower[j], v) && upper_ok(&self.upper[j], v));
        in_box
            && (0..self.matrix.rows()).all(|i| {
                let lhs = self
                    .matrix
                    .row(i)
                    .iter()
                    .zip(x)
                    .fold(BigRational::zero(), |acc, (a, v)| acc + rat(a) * v);
                lhs == rat(&self.rhs[i])
            })
    }

    pub fn value_at(&self, x: &[BigRational]) -> BigRational {
        dot(&self.objective, x)
    }
}

fn lower_ok(bound: &ExtInt, v: &BigRational) -> bool {
    match bound {
        ExtInt::NegInf => true,
        ExtInt::PosInf => false,
        ExtInt::Finite(b) => rat(b) <= *v,
    }
}

fn upper_ok(bound: &ExtInt, v: &BigRational) -> bool {
    match bound {
        ExtInt::PosInf => true,
        ExtInt::NegInf => false,
        ExtInt::Finite(b) => *v <= rat(b),
    }
}

fn at_bound(lower: &ExtInt, upper: &ExtInt, v: &BigRational) -> bool {
    let hits = |b: &ExtInt| b.finite().is_some_and(|b| rat(b) == *v);
    hits(lower) || hits(upper)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub point: Vec<BigRational>,
    pub value: BigRational,
    /// Original variables whose standard-form column is basic, ascending.
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal(LpSolution),
}

impl LpResult {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpResult::Optimal(sol) => Some(sol),
            _ => None,
        }
    }

    pub fn into_optimal(self) -> Option<LpSolution> {
        match self {
            LpResult::Optimal(sol) => Some(sol),
            _ => None,
        }
    }
}

/// How an original variable is expressed through standard-form columns.
#[derive(Debug, Clone)]
enum VarMap {
    Fixed(BigInt),
    /// `x = offset + x'`
    Shifted {
        col: usize,
        offset: BigInt,
    },
    /// `x = offset - x'`
    Flipped {
        col: usize,
        offset: BigInt,
    },
    /// `x = x+ - x-`
    Split {
        pos: usize,
        neg: usize,
    },
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    /// Reduced costs of the current phase.
    costs: Vec<BigRational>,
    /// Negated objective value of the current phase.
    neg_value: BigRational,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
    maps: Vec<VarMap>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &ExactLp) -> Tableau {
        let n = lp.num_vars();
        let mut maps = Vec::with_capacity(n);
        let mut boxes: Vec<(usize, BigInt)> = Vec::new();
        let mut ncols = 0;
        for j in 0..n {
            let map = match (&lp.lower[j], &lp.upper[j]) {
                (ExtInt::Finite(l), ExtInt::Finite(u)) if l == u => VarMap::Fixed(l.clone()),
                (ExtInt::Finite(l), upper) => {
                    if let ExtInt::Finite(u) = upper {
                        boxes.push((ncols, u - l));
                    }
                    ncols += 1;
                    VarMap::Shifted {
                        col: ncols - 1,
                        offset: l.clone(),
                    }
                }
                (ExtInt::NegInf, ExtInt::Finite(u)) => {
                    ncols += 1;
                    VarMap::Flipped {
                        col: ncols - 1,
                        offset: u.clone(),
                    }
                }
                _ => {
                    ncols += 2;
                    VarMap::Split {
                        pos: ncols - 2,
                        neg: ncols - 1,
                    }
                }
            };
            maps.push(map);
        }
        let n_struct = ncols;
        let n_slack = boxes.len();
        let m_orig = lp.matrix.rows();
        let first_artificial = n_struct + n_slack;
        let width = first_artificial + m_orig;

        let mut rows = Vec::with_capacity(m_orig + n_slack);
        let mut rhs = Vec::with_capacity(m_orig + n_slack);
        let mut basis = Vec::with_capacity(m_orig + n_slack);
        for i in 0..m_orig {
            let mut row = vec![BigRational::zero(); width];
            let mut b = lp.rhs[i].clone();
            for (j, a) in lp.matrix.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                match &maps[j] {
                    VarMap::Fixed(v) => b -= a * v,
                    VarMap::Shifted { col, offset } => {
                        b -= a * offset;
                        row[*col] = rat(a);
                    }
                    VarMap::Flipped { col, offset } => {
                        b -= a * offset;
                        row[*col] = -rat(a);
                    }
                    VarMap::Split { pos, neg } => {
                        row[*pos] = rat(a);
                        row[*neg] = -rat(a);
                    }
                }
            }
            if b.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                b = -b;
            }
            row[first_artificial + i] = BigRational::one();
            rows.push(row);
            rhs.push(rat(&b));
            basis.push(first_artificial + i);
        }
        for (k, (col, width_of_box)) in boxes.into_iter().enumerate() {
            let mut row = vec![BigRational::zero(); width];
            row[col] = BigRational::one();
            row[n_struct + k] = BigRational::one();
            rows.push(row);
            rhs.push(rat(&width_of_box));
            basis.push(n_struct + k);
        }

        // Phase one: minimize the sum of artificials.
        let mut costs = vec![BigRational::zero(); width];
        let mut neg_value = BigRational::zero();
        for c in costs.iter_mut().skip(first_artificial) {
            *c = BigRational::one();
        }
        for i in 0..m_orig {
            for (c, a) in costs.iter_mut().zip(&rows[i]) {
                if !a.is_zero() {
                    *c -= a;
                }
            }
            neg_value -= &rhs[i];
        }

        Tableau {
            rows,
            rhs,
            basis,
            costs,
            neg_value,
            first_artificial,
            maps,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = BigRational::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = core::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.costs[c].is_zero() {
            let factor = self.costs[c].clone();
            for (v, p) in self.costs.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.neg_value -= &factor * &pivot_rhs;
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, ratio ties broken by the
    /// lowest-index basic variable.
    fn run(&mut self, allowed: usize) -> Phase {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.costs[j].is_negative()) else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Phase::Unbounded,
            }
        }
    }

    /// Runs phase one and removes the artificial columns. `false` if the
    /// system is infeasible.
    fn phase_one(&mut self) -> bool {
        let width = self.costs.len();
        match self.run(width) {
            Phase::Optimal => {}
            Phase::Unbounded => unreachable!("phase one objective is bounded below by zero"),
        }
        if !self.neg_value.is_zero() {
            return false;
        }
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                Some(c) => {
                    self.pivot(r, c);
                    r += 1;
                }
                None => {
                    // Redundant equality.
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
        for row in self.rows.iter_mut() {
            row.truncate(self.first_artificial);
        }
        self.costs.truncate(self.first_artificial);
        true
    }

    fn set_objective(&mut self, objective: &[BigRational]) {
        let mut costs = vec![BigRational::zero(); self.first_artificial];
        for (j, c) in objective.iter().enumerate() {
            match &self.maps[j] {
                VarMap::Fixed(_) => {}
                VarMap::Shifted { col, .. } => costs[*col] = c.clone(),
                VarMap::Flipped { col, .. } => costs[*col] = -c.clone(),
                VarMap::Split { pos, neg } => {
                    costs[*pos] = c.clone();
                    costs[*neg] = -c.clone();
                }
            }
        }
        let mut neg_value = BigRational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = costs[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (c, a) in costs.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *c -= &cb * a;
                }
            }
            neg_value -= &cb * &self.rhs[i];
        }
        self.costs = costs;
        self.neg_value = neg_value;
    }

    fn extract(&self, lp: &ExactLp) -> LpSolution {
        let mut values = vec![BigRational::zero(); self.first_artificial];
        let mut is_basic = vec![false; self.first_artificial];
        for (i, &b) in self.basis.iter().enumerate() {
            values[b] = self.rhs[i].clone();
            is_basic[b] = true;
        }
        let mut point = Vec::with_capacity(self.maps.len());
        let mut basis = Vec::new();
        for (j, map) in self.maps.iter().enumerate() {
            let (value, basic) = match map {
                VarMap::Fixed(v) => (rat(v), false),
                VarMap::Shifted { col, offset } => (rat(offset) + &values[*col], is_basic[*col]),
                VarMap::Flipped { col, offset } => (rat(offset) - &values[*col], is_basic[*col]),
                VarMap::Split { pos, neg } => (
                    &values[*pos] - &values[*neg],
                    is_basic[*pos] || is_basic[*neg],
                ),
            };
            if basic {
                basis.push(j);
            }
            point.push(value);
        }
        let value = lp.value_at(&point);
        LpSolution {
            point,
            value,
            basis,
        }
    }
}

/// Minimizes the objective exactly. Deterministic for a given instance.
pub fn lp_solve(lp: &ExactLp) -> LpResult {
    let mut tab = Tableau::build(lp);
    if !tab.phase_one() {
        return LpResult::Infeasible;
    }
    tab.set_objective(&lp.objective);
    match tab.run(tab.first_artificial) {
        Phase::Optimal => LpResult::Optimal(tab.extract(lp)),
        Phase::Unbounded => LpResult::Unbounded,
    }
}

/// Some vertex of the feasible region, found by phase one alone. The
/// reported value is the objective evaluated at that vertex.
pub fn find_vertex(lp: &ExactLp) -> LpResult {
    let mut tab = Tableau::build(lp);
    if !tab.phase_one() {
        return LpResult::Infeasible;
    }
    LpResult::Optimal(tab.extract(lp))
}

/// A feasible point is a vertex iff the columns of the variables strictly
/// inside their bounds are linearly independent.
pub fn is_vertex(lp: &ExactLp, x: &[BigRational]) -> bool {
    if !lp.contains(x) {
        return false;
    }
    let free: Vec<usize> = (0..lp.num_vars())
        .filter(|&j| !at_bound(&lp.lower[j], &lp.upper[j], &x[j]))
        .collect();
    if free.is_empty() {
        return true;
    }
    let columns: Vec<Vec<BigRational>> = free
        .iter()
        .map(|&j| {
            (0..lp.matrix.rows())
                .map(|i| rat(lp.matrix.get(i, j)))
                .collect()
        })
        .collect();
    rank(columns) == free.len()
}

fn ensure_bounded(lp: &ExactLp) -> Result<()> {
    for j in 0..lp.num_vars() {
        for (bound, sign) in [(&lp.lower[j], 1), (&lp.upper[j], -1)] {
            if bound.is_finite() {
                continue;
            }
            let mut objective = vec![BigRational::zero(); lp.num_vars()];
            objective[j] = BigRational::from_integer(BigInt::from(sign));
            if let LpResult::Unbounded = lp_solve(&lp.with_objective(objective)) {
                return Err(Error::UnboundedRegion);
            }
        }
    }
    Ok(())
}

/// Writes `x` as a convex combination of at most `cols + 1` vertices of a
/// bounded region.
///
/// Each round finds a vertex `v` of the smallest face containing the current
/// point (coordinates already at a bound are pinned), then moves from `v`
/// through the point until another bound becomes tight. The new point lies on
/// a strictly smaller face, so the loop runs at most `dim + 1` times. The
/// objective of `lp` is ignored.
pub fn caratheodory_decompose(
    lp: &ExactLp,
    x: &[BigRational],
) -> Result<Vec<(Vec<BigRational>, BigRational)>> {
    if !lp.contains(x) {
        return Err(Error::PointNotInPolytope);
    }
    ensure_bounded(lp)?;
    let n = lp.num_vars();
    let mut terms: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    let mut current = x.to_vec();
    let mut remaining = BigRational::one();
    for _ in 0..=n {
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        for j in 0..n {
            if at_bound(&lp.lower[j], &lp.upper[j], &current[j]) {
                let pinned = ExtInt::Finite(current[j].to_integer());
                lower[j] = pinned.clone();
                upper[j] = pinned;
            }
        }
        let face = lp.with_bounds(lower, upper);
        let vertex = find_vertex(&face)
            .into_optimal()
            .expect("face contains the current point")
            .point;
        if vertex == current {
            terms.push((vertex, remaining));
            return Ok(terms);
        }
        let direction: Vec<BigRational> = current.iter().zip(&vertex).map(|(c, v)| c - v).collect();
        let mut step: Option<BigRational> = None;
        for j in 0..n {
            let bound = if direction[j].is_positive() {
                &lp.upper[j]
            } else if direction[j].is_negative() {
                &lp.lower[j]
            } else {
                continue;
            };
            if let ExtInt::Finite(b) = bound {
                let t = (rat(b) - &current[j]) / &direction[j];
                if step.as_ref().is_none_or(|s| t < *s) {
                    step = Some(t);
                }
            }
        }
        let step = step.ok_or(Error::UnboundedRegion)?;
        // current = (1/(1+step)) * next + (step/(1+step)) * vertex
        let denom = BigRational::one() + &step;
        terms.push((vertex, &remaining * &step / &denom));
        remaining /= denom;
        current = current
            .iter()
            .zip(&direction)
            .map(|(c, dir)| c + &step * dir)
            .collect();
    }
    unreachable!("each round pins at least one more coordinate")
}
