//! Exact rational linear programming.
//!
//! Problems have the shape `minimize c.x` subject to sparse `>=` / `<=` rows
//! and implicit `x >= 0`. [`solve`] runs a dense two-phase tableau simplex
//! with Bland's rule, so it terminates on every input and returns the same
//! basic solution for the same problem. There is no tolerance anywhere: a
//! value is zero only if it is exactly zero.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::instance::{Cut, EdgeId, VertexId};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Ge,
    Le,
}

/// Where a row came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowTag {
    /// `x(delta(S)) >= R'(S)`
    Cut(Cut),
    /// `x(delta(v)) <= b'(v)`
    Degree(VertexId),
    /// `x_e <= 1`
    Bound(EdgeId),
    /// Hand-built row with no network meaning.
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: BTreeMap<usize, Rational>,
    pub sense: Sense,
    pub rhs: Rational,
    pub tag: RowTag,
}

impl Row {
    pub fn new(coeffs: impl IntoIterator<Item = (usize, Rational)>, sense: Sense, rhs: Rational, tag: RowTag) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Row { coeffs, sense, rhs, tag }
    }

    pub fn activity(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(&j, c)| c * &x[j]).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Ge => lhs >= self.rhs,
            Sense::Le => lhs <= self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.activity(x) == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("row {row} references variable {var} but the problem has {num_vars}")]
    VariableOutOfRange { row: usize, var: usize, num_vars: usize },
    #[error("row {row} has no nonzero coefficient")]
    EmptyRow { row: usize },
    #[error("solution is not optimal")]
    NotOptimal,
    #[error("point has {got} values but the problem has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    num_vars: usize,
    objective: Vec<Rational>,
    rows: Vec<Row>,
}

impl LpProblem {
    pub fn new(objective: Vec<Rational>) -> Self {
        LpProblem { num_vars: objective.len(), objective, rows: Vec::new() }
    }

    pub fn add_row(&mut self, row: Row) -> Result<usize, LpError> {
        let index = self.rows.len();
        if row.coeffs.is_empty() {
            return Err(LpError::EmptyRow { row: index });
        }
        if let Some((&var, _)) = row.coeffs.iter().find(|(&j, _)| j >= self.num_vars) {
            return Err(LpError::VariableOutOfRange { row: index, var, num_vars: self.num_vars });
        }
        self.rows.push(row);
        Ok(index)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Exact feasibility of `x`, including `x >= 0`.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars && x.iter().all(|v| !v.is_negative()) && self.rows.iter().all(|r| r.is_satisfied(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// A constraint that holds with equality at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TightConstraint {
    Row(usize),
    NonNegative(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicSolution {
    pub status: Status,
    /// Variable values; all zero unless `status` is `Optimal`.
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// Rows satisfied with equality at `values`.
    pub tight_rows: Vec<usize>,
    /// Constraints whose slack is nonbasic in the final tableau. Fixing them
    /// at equality determines `values` uniquely.
    pub basis: Vec<TightConstraint>,
    pub pivots: usize,
}

impl BasicSolution {
    fn without_point(status: Status, num_vars: usize, pivots: usize) -> Self {
        BasicSolution {
            status,
            values: vec![Rational::zero(); num_vars],
            objective: Rational::zero(),
            tight_rows: Vec::new(),
            basis: Vec::new(),
            pivots,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    z: Vec<Rational>,
    z_rhs: Rational,
    basis: Vec<usize>,
    pivots: usize,
}

#[derive(Debug)]
struct Unbounded;

impl Tableau {
    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.a[r][q].clone();
        if !piv.is_one() {
            for v in self.a[r].iter_mut().filter(|v| !v.is_zero()) {
                *v /= &piv;
            }
            self.rhs[r] /= &piv;
        }
        let support: Vec<usize> = (0..self.a[r].len()).filter(|&j| !self.a[r][j].is_zero()).collect();
        let (pivot_row, pivot_rhs) = (self.a[r].clone(), self.rhs[r].clone());
        for i in 0..self.a.len() {
            if i == r || self.a[i][q].is_zero() {
                continue;
            }
            let f = self.a[i][q].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                self.a[i][j] -= delta;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.z[q].is_zero() {
            let f = self.z[q].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                self.z[j] -= delta;
            }
            self.z_rhs -= &f * &pivot_rhs;
        }
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Bland's rule: lowest-index improving column enters; among ratio ties the
    /// row whose basic variable has the lowest index leaves.
    fn optimize(&mut self, allowed: usize) -> Result<(), Unbounded> {
        loop {
            let Some(q) = (0..allowed).find(|&j| self.z[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][q].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.a[i][q];
                let better = match &best {
                    None => true,
                    Some((b, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(Unbounded);
            };
            self.pivot(r, q);
        }
    }

    fn remove_row(&mut self, r: usize) {
        self.a.remove(r);
        self.rhs.remove(r);
        self.basis.remove(r);
    }
}

/// Solves `p` to an optimal basic feasible solution.
pub fn solve(p: &LpProblem) -> BasicSolution {
    let n = p.num_vars;
    let m = p.rows.len();
    let slack_end = n + m;

    let mut a = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut needs_artificial = Vec::new();
    for (i, row) in p.rows.iter().enumerate() {
        let mut line = vec![Rational::zero(); slack_end];
        for (&j, c) in &row.coeffs {
            line[j] = c.clone();
        }
        line[n + i] = match row.sense {
            Sense::Le => Rational::one(),
            Sense::Ge => -Rational::one(),
        };
        let mut b = row.rhs.clone();
        if b.is_negative() {
            line.iter_mut().for_each(|v| *v = -v.clone());
            b = -b;
        }
        if !line[n + i].is_positive() {
            needs_artificial.push(i);
        }
        a.push(line);
        rhs.push(b);
    }
    let total = slack_end + needs_artificial.len();
    let mut basis: Vec<usize> = (0..m).map(|i| n + i).collect();
    for line in &mut a {
        line.resize(total, Rational::zero());
    }
    for (k, &i) in needs_artificial.iter().enumerate() {
        a[i][slack_end + k] = Rational::one();
        basis[i] = slack_end + k;
    }

    // phase one: minimize the sum of artificials
    let mut z = vec![Rational::zero(); total];
    let mut z_rhs = Rational::zero();
    for &i in &needs_artificial {
        for j in 0..slack_end {
            if !a[i][j].is_zero() {
                z[j] -= &a[i][j];
            }
        }
        z_rhs -= &rhs[i];
    }
    let mut t = Tableau { a, rhs, z, z_rhs, basis, pivots: 0 };
    // the artificial sum is bounded below by zero
    t.optimize(total).expect("phase one is bounded");
    if !t.z_rhs.is_zero() {
        return BasicSolution::without_point(Status::Infeasible, n, t.pivots);
    }

    // drive zero-valued artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < t.a.len() {
        if t.basis[r] >= slack_end {
            match (0..slack_end).find(|&j| !t.a[r][j].is_zero()) {
                Some(q) => t.pivot(r, q),
                None => {
                    t.remove_row(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let cost = |j: usize| if j < n { p.objective[j].clone() } else { Rational::zero() };
    t.z = (0..total).map(cost).collect();
    t.z_rhs = Rational::zero();
    for r in 0..t.a.len() {
        let cb = cost(t.basis[r]);
        if cb.is_zero() {
            continue;
        }
        for j in 0..slack_end {
            if !t.a[r][j].is_zero() {
                let delta = &cb * &t.a[r][j];
                t.z[j] -= delta;
            }
        }
        t.z_rhs -= &cb * &t.rhs[r];
    }
    if t.optimize(slack_end).is_err() {
        return BasicSolution::without_point(Status::Unbounded, n, t.pivots);
    }

    let mut values = vec![Rational::zero(); n];
    let mut is_basic = vec![false; slack_end];
    for (r, &j) in t.basis.iter().enumerate() {
        is_basic[j] = true;
        if j < n {
            values[j] = t.rhs[r].clone();
        }
    }
    let basis = (0..slack_end)
        .filter(|&j| !is_basic[j])
        .map(|j| if j < n { TightConstraint::NonNegative(j) } else { TightConstraint::Row(j - n) })
        .collect();
    let tight_rows = p.rows.iter().enumerate().filter(|(_, row)| row.is_tight(&values)).map(|(i, _)| i).collect();
    BasicSolution {
        status: Status::Optimal,
        objective: p.objective_value(&values),
        values,
        tight_rows,
        basis,
        pivots: t.pivots,
    }
}

/// Rank certificate for a claimed vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexReport {
    pub num_vars: usize,
    pub rank: usize,
    pub feasible: bool,
    /// Every constraint tight at the point, recomputed from the values.
    pub tight: Vec<TightConstraint>,
    /// A nonzero `d` with every tight constraint's normal orthogonal to it,
    /// present when `rank < num_vars`. The point is then the midpoint of
    /// `x + eps*d` and `x - eps*d` for small `eps`.
    pub null_direction: Option<Vec<Rational>>,
}

impl VertexReport {
    pub fn passes(&self) -> bool {
        self.feasible && self.rank == self.num_vars
    }
}

/// Recomputes the tight constraint set at `values` from scratch and checks
/// that it has full rank.
pub fn verify_point(p: &LpProblem, values: &[Rational]) -> Result<VertexReport, LpError> {
    let n = p.num_vars;
    if values.len() != n {
        return Err(LpError::DimensionMismatch { expected: n, got: values.len() });
    }
    let mut tight = Vec::new();
    let mut matrix = Vec::new();
    for (i, row) in p.rows.iter().enumerate() {
        if row.is_tight(values) {
            tight.push(TightConstraint::Row(i));
            let mut line = vec![Rational::zero(); n];
            for (&j, c) in &row.coeffs {
                line[j] = c.clone();
            }
            matrix.push(line);
        }
    }
    for (j, v) in values.iter().enumerate() {
        if v.is_zero() {
            tight.push(TightConstraint::NonNegative(j));
            let mut line = vec![Rational::zero(); n];
            line[j] = Rational::one();
            matrix.push(line);
        }
    }
    let (rank, null_direction) = rank_and_kernel(matrix, n);
    Ok(VertexReport { num_vars: n, rank, feasible: p.is_feasible_point(values), tight, null_direction })
}

/// [`verify_point`] on an optimal solution returned by [`solve`].
pub fn verify_vertex(p: &LpProblem, s: &BasicSolution) -> Result<VertexReport, LpError> {
    if s.status != Status::Optimal {
        return Err(LpError::NotOptimal);
    }
    verify_point(p, &s.values)
}

/// Row-reduces `matrix` (rows of length `cols`) and returns its rank plus one
/// kernel vector when the kernel is nontrivial.
pub fn rank_and_kernel(mut matrix: Vec<Vec<Rational>>, cols: usize) -> (usize, Option<Vec<Rational>>) {
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(src) = (rank..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(rank, src);
        let piv = matrix[rank][col].clone();
        for v in matrix[rank].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = matrix[rank].clone();
        for (r, line) in matrix.iter_mut().enumerate() {
            if r == rank || line[col].is_zero() {
                continue;
            }
            let f = line[col].clone();
            for (v, p) in line.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    let free = (0..cols).find(|c| !pivot_cols.contains(c));
    let kernel = free.map(|f| {
        let mut d = vec![Rational::zero(); cols];
        d[f] = Rational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            d[pc] = -matrix[r][f].clone();
        }
        d
    });
    (rank, kernel)
}
