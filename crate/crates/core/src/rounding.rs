//! The iterative rounding loop.
//!
//! Each iteration solves the residual cut LP to a vertex optimum by row
//! generation, classifies the vertex into one of four cases, applies exactly
//! one action and re-solves:
//!
//! | case            | condition                                         | action                          |
//! |-----------------|---------------------------------------------------|---------------------------------|
//! | `ZeroEdge(e)`   | `x_e = 0`                                         | drop `e`                        |
//! | `OneEdge(e)`    | `x_e = 1`                                         | pick `e`, `b' -= 1` (3/2 -> 1)  |
//! | `HeavyPickable` | `1/2 <= x_e < 1`, constrained endpoints `b' > 1`  | pick `e`, `b' -= 1/2`           |
//! | `RelaxVertex(v)`| `v` in `W'`, support degree `<= 2 b'(v) + 2`       | remove `v` from `W'`            |
//!
//! Picked edges leave the LP; their contribution is credited through the
//! residual requirement `R'(S) = max(0, R(S) - |delta_F(S)|)`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cuts::{find_violated_cut, is_feasible, residual_requirement};
use crate::instance::{Cut, EdgeId, Instance, VertexId};
use crate::lp::{self, BasicSolution, LpProblem, Row, RowTag, Sense, Status, VertexReport};
use crate::rational::{frac, half, int, is_half_integral, Rational};

/// Edge-indexed LP values; edges outside the LP carry 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracSolution {
    values: Vec<Rational>,
}

impl FracSolution {
    pub fn new(values: Vec<Rational>) -> Self {
        FracSolution { values }
    }

    pub fn zeros(num_edges: usize) -> Self {
        FracSolution { values: vec![Rational::zero(); num_edges] }
    }

    pub fn get(&self, e: EdgeId) -> &Rational {
        &self.values[e]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Mutable state of the rounding loop over an immutable instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingState<'a> {
    inst: &'a Instance,
    active: BTreeSet<EdgeId>,
    picked: Vec<(EdgeId, Rational)>,
    constrained: BTreeSet<VertexId>,
    bounds: BTreeMap<VertexId, Rational>,
    iteration: usize,
}

impl<'a> RoundingState<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        RoundingState {
            inst,
            active: (0..inst.num_edges()).collect(),
            picked: Vec::new(),
            constrained: inst.bounds().keys().copied().collect(),
            bounds: inst.bounds().iter().map(|(&v, &b)| (v, int(i64::from(b)))).collect(),
            iteration: 0,
        }
    }

    /// Builds an intermediate state directly. Picked edges are given as
    /// `(edge, value at pick)`. Fails if the sets overlap or a bound is not
    /// a nonnegative half-integer.
    pub fn from_parts(
        inst: &'a Instance,
        active: BTreeSet<EdgeId>,
        picked: Vec<(EdgeId, Rational)>,
        constrained: BTreeSet<VertexId>,
        bounds: BTreeMap<VertexId, Rational>,
    ) -> Result<Self, SolveError> {
        let st = RoundingState { inst, active, picked, constrained, bounds, iteration: 0 };
        st.check_invariants()?;
        Ok(st)
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// `E'`: edges still in the LP.
    pub fn active(&self) -> &BTreeSet<EdgeId> {
        &self.active
    }

    /// `F` in pick order, with the LP value each edge had when picked.
    pub fn picked(&self) -> &[(EdgeId, Rational)] {
        &self.picked
    }

    pub fn picked_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.picked.iter().map(|(e, _)| *e)
    }

    pub fn picked_degree(&self, v: VertexId) -> usize {
        self.picked_ids().filter(|&e| self.inst.edge(e).is_incident(v)).count()
    }

    /// `W'`: vertices whose degree row is still enforced.
    pub fn constrained(&self) -> &BTreeSet<VertexId> {
        &self.constrained
    }

    /// `b'(v)`; kept for relaxed vertices too so trajectories stay visible.
    pub fn bound(&self, v: VertexId) -> Option<&Rational> {
        self.bounds.get(&v)
    }

    pub fn bounds(&self) -> &BTreeMap<VertexId, Rational> {
        &self.bounds
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    fn check_invariants(&self) -> Result<(), SolveError> {
        let m = self.inst.num_edges();
        if let Some(e) = self.active.iter().chain(self.picked_ids().collect::<Vec<_>>().iter()).find(|&&e| e >= m) {
            return Err(breach(format!("edge {e} does not exist")));
        }
        let picked: BTreeSet<EdgeId> = self.picked_ids().collect();
        if picked.len() != self.picked.len() {
            return Err(breach(String::from("an edge was picked twice")));
        }
        if let Some(e) = self.active.intersection(&picked).next() {
            return Err(breach(format!("edge {e} is both active and picked")));
        }
        if let Some(v) =
            self.constrained.iter().find(|&&v| self.inst.bound(v).is_none() || !self.bounds.contains_key(&v))
        {
            return Err(breach(format!("vertex {v} is constrained without an original bound")));
        }
        if let Some((v, b)) = self.bounds.iter().find(|(_, b)| !is_half_integral(b)) {
            return Err(breach(format!("b'({v}) = {b} is not a nonnegative half-integer")));
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn pick_for_test(&mut self, e: EdgeId) {
        self.active.remove(&e);
        self.picked.push((e, Rational::one()));
    }
}

fn breach(msg: String) -> SolveError {
    SolveError::InvariantBreach(msg)
}

/// Which of the four vertex-solution cases applies, with its witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LemmaCase {
    ZeroEdge(EdgeId),
    OneEdge(EdgeId),
    HeavyPickable(EdgeId),
    RelaxVertex(VertexId),
    NoneFound,
}

impl LemmaCase {
    pub fn kind(&self) -> &'static str {
        match self {
            LemmaCase::ZeroEdge(_) => "zero_edge",
            LemmaCase::OneEdge(_) => "one_edge",
            LemmaCase::HeavyPickable(_) => "heavy_edge",
            LemmaCase::RelaxVertex(_) => "relax_vertex",
            LemmaCase::NoneFound => "none_found",
        }
    }

    pub fn witness(&self) -> Option<usize> {
        match *self {
            LemmaCase::ZeroEdge(e) | LemmaCase::OneEdge(e) | LemmaCase::HeavyPickable(e) => Some(e),
            LemmaCase::RelaxVertex(v) => Some(v),
            LemmaCase::NoneFound => None,
        }
    }
}

impl fmt::Display for LemmaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness() {
            Some(w) => write!(f, "{}:{}", self.kind(), w),
            None => f.write_str(self.kind()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundChange {
    pub vertex: VertexId,
    pub before: Rational,
    pub after: Rational,
}

/// One applied case and the `b'` values it changed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub case: LemmaCase,
    pub changes: Vec<BoundChange>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub lp_value: Rational,
    pub support_size: usize,
    pub actions: Vec<Action>,
    /// `|E'|` after the actions.
    pub active: usize,
    /// `|W'|` after the actions.
    pub constrained: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub vertex: VertexId,
    pub degree: usize,
    pub bound: u32,
    /// `2 b(v) + 2 - deg_F(v)`
    pub slack: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Picked edge ids, ascending.
    pub picked: Vec<EdgeId>,
    /// Picked edges in pick order with their LP value at the time.
    pub picked_values: Vec<(EdgeId, Rational)>,
    pub cost: Rational,
    pub root_lp_value: Rational,
    pub degrees: Vec<DegreeReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveRun {
    pub solution: Solution,
    pub records: Vec<IterationRecord>,
    /// Restricted LPs solved across all row-generation rounds.
    pub lp_solves: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("LP infeasible")]
    LpInfeasible,
    #[error("residual LP became infeasible at iteration {iteration} after {} recorded iterations", history.len())]
    ResidualInfeasible { iteration: usize, history: Vec<IterationRecord> },
    #[error("Main Lemma violated at iteration {iteration}: no case applies to x = {x:?} (tight rank {} of {})", report.rank, report.num_vars)]
    LemmaViolated {
        iteration: usize,
        x: Vec<Rational>,
        bounds: BTreeMap<VertexId, Rational>,
        report: Box<VertexReport>,
    },
    #[error("LP solution is not a vertex at iteration {iteration}: tight rank {} of {}", report.rank, report.num_vars)]
    NotVertex { iteration: usize, report: Box<VertexReport> },
    #[error("iteration cap {cap} exceeded")]
    IterationCap { cap: usize },
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

impl SolveError {
    /// Everything except an infeasible root LP indicates a bug.
    pub fn is_internal(&self) -> bool {
        !matches!(self, SolveError::LpInfeasible)
    }
}

/// A vertex optimum of the residual cut LP, with the restricted problem it
/// was found on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutLp {
    pub x: FracSolution,
    pub value: Rational,
    pub problem: LpProblem,
    pub basic: BasicSolution,
    /// LP variable `j` is edge `variables[j]`.
    pub variables: Vec<EdgeId>,
    /// Restricted LPs solved to reach this point.
    pub rounds: usize,
}

impl CutLp {
    pub fn support_size(&self) -> usize {
        self.variables.iter().filter(|&&e| self.x.get(e).is_positive()).count()
    }
}

struct LpBuilder<'s, 'a> {
    st: &'s RoundingState<'a>,
    variables: Vec<EdgeId>,
    index: BTreeMap<EdgeId, usize>,
    problem: LpProblem,
}

impl<'s, 'a> LpBuilder<'s, 'a> {
    /// Bound rows `x_e <= 1` and degree rows `x(delta(v)) <= b'(v)`.
    fn new(st: &'s RoundingState<'a>, with_costs: bool) -> Result<Self, SolveError> {
        let inst = st.inst;
        let variables: Vec<EdgeId> = st.active.iter().copied().collect();
        let index = variables.iter().enumerate().map(|(j, &e)| (e, j)).collect();
        let objective =
            variables.iter().map(|&e| if with_costs { inst.edge(e).cost.clone() } else { Rational::zero() }).collect();
        let mut b = LpBuilder { st, variables, index, problem: LpProblem::new(objective) };
        for j in 0..b.variables.len() {
            b.push(Row::new([(j, Rational::one())], Sense::Le, Rational::one(), RowTag::Bound(b.variables[j])))?;
        }
        for &v in &st.constrained {
            let bound = st.bounds[&v].clone();
            let coeffs: Vec<_> = b
                .variables
                .iter()
                .enumerate()
                .filter(|(_, &e)| inst.edge(e).is_incident(v))
                .map(|(j, _)| (j, Rational::one()))
                .collect();
            if coeffs.is_empty() {
                continue;
            }
            b.push(Row::new(coeffs, Sense::Le, bound, RowTag::Degree(v)))?;
        }
        Ok(b)
    }

    fn push(&mut self, row: Row) -> Result<(), SolveError> {
        self.problem.add_row(row).map(|_| ()).map_err(|e| breach(format!("malformed LP row: {e}")))
    }

    /// Adds `x(delta_{E'}(S)) >= R'(S)`. Returns `Err(LpInfeasible)` when the
    /// requirement is positive but no active edge crosses the cut.
    fn add_cut(&mut self, cut: Cut) -> Result<(), SolveError> {
        let rhs = residual_requirement(self.st, &cut);
        if rhs == 0 {
            return Ok(());
        }
        let inst = self.st.inst;
        let coeffs: Vec<_> = self
            .st
            .active
            .iter()
            .filter(|&&e| inst.edge(e).crosses(&cut))
            .map(|e| (self.index[e], Rational::one()))
            .collect();
        if coeffs.is_empty() {
            return Err(SolveError::LpInfeasible);
        }
        self.push(Row::new(coeffs, Sense::Ge, int(i64::from(rhs)), RowTag::Cut(cut)))
    }

    fn solve(&self) -> Result<(FracSolution, BasicSolution), SolveError> {
        let basic = lp::solve(&self.problem);
        match basic.status {
            Status::Optimal => {}
            Status::Infeasible => return Err(SolveError::LpInfeasible),
            Status::Unbounded => return Err(breach(String::from("cut LP reported unbounded"))),
        }
        let mut values = vec![Rational::zero(); self.st.inst.num_edges()];
        for (j, &e) in self.variables.iter().enumerate() {
            values[e] = basic.values[j].clone();
        }
        Ok((FracSolution::new(values), basic))
    }

    fn finish(self, x: FracSolution, basic: BasicSolution, rounds: usize) -> CutLp {
        CutLp { x, value: basic.objective.clone(), problem: self.problem, basic, variables: self.variables, rounds }
    }
}

fn row_generation(st: &RoundingState<'_>, with_costs: bool) -> Result<CutLp, SolveError> {
    let mut b = LpBuilder::new(st, with_costs)?;
    let n = st.inst.n();
    if n >= 2 {
        for v in 0..n {
            b.add_cut(Cut::singleton(n, v).expect("n >= 2"))?;
        }
    }
    let mut rounds = 0;
    loop {
        let (x, basic) = b.solve()?;
        rounds += 1;
        match find_violated_cut(&x, st) {
            Some(violation) => b.add_cut(violation.cut)?,
            None => return Ok(b.finish(x, basic, rounds)),
        }
    }
}

/// Vertex optimum of the full residual cut LP by row generation.
///
/// Starts from bound rows, degree rows on `W'` and all singleton cut rows,
/// then adds one violated cut per round until the separation oracle finds
/// none. The final point is a vertex of a relaxation that is feasible for the
/// full LP, hence a vertex optimum of the full LP.
pub fn solve_cut_lp(st: &RoundingState<'_>) -> Result<CutLp, SolveError> {
    row_generation(st, true)
}

/// Feasibility-only row generation (zero objective).
pub(crate) fn phase_one(st: &RoundingState<'_>) -> Result<CutLp, SolveError> {
    row_generation(st, false)
}

/// Largest vertex count accepted by [`solve_cut_lp_enumerated`].
pub const ENUMERATION_LIMIT: usize = 16;

/// The same LP with every cut row written out explicitly (`2^(n-1) - 1` of
/// them, rows with `R'(S) = 0` omitted). Reference route for the row
/// generation loop.
pub fn solve_cut_lp_enumerated(st: &RoundingState<'_>) -> Result<CutLp, SolveError> {
    let n = st.inst.n();
    if n > ENUMERATION_LIMIT {
        return Err(breach(format!("cut enumeration refused for n = {n} > {ENUMERATION_LIMIT}")));
    }
    let mut b = LpBuilder::new(st, true)?;
    for cut in Cut::enumerate(n) {
        b.add_cut(cut)?;
    }
    let (x, basic) = b.solve()?;
    Ok(b.finish(x, basic, 1))
}

/// Root LP value of an instance.
pub fn lp_value(inst: &Instance) -> Result<Rational, SolveError> {
    solve_cut_lp(&RoundingState::new(inst)).map(|lp| lp.value)
}

/// Picks the applicable case, scanning `ZeroEdge`, `OneEdge`,
/// `HeavyPickable`, `RelaxVertex` in that order and taking the lowest index
/// witness within a class.
pub fn classify(x: &FracSolution, st: &RoundingState<'_>) -> LemmaCase {
    let inst = st.inst;
    let one = Rational::one();
    if let Some(&e) = st.active.iter().find(|&&e| x.get(e).is_zero()) {
        return LemmaCase::ZeroEdge(e);
    }
    if let Some(&e) = st.active.iter().find(|&&e| *x.get(e) == one) {
        return LemmaCase::OneEdge(e);
    }
    let endpoint_ok = |w: VertexId| !st.constrained.contains(&w) || st.bounds[&w] > one;
    let h = half();
    if let Some(&e) = st.active.iter().find(|&&e| {
        let value = x.get(e);
        let edge = inst.edge(e);
        *value >= h && *value < one && endpoint_ok(edge.u) && endpoint_ok(edge.v)
    }) {
        return LemmaCase::HeavyPickable(e);
    }
    for &v in &st.constrained {
        let degree = st.active.iter().filter(|&&e| x.get(e).is_positive() && inst.edge(e).is_incident(v)).count();
        if int(degree as i64) <= int(2) * &st.bounds[&v] + int(2) {
            return LemmaCase::RelaxVertex(v);
        }
    }
    LemmaCase::NoneFound
}

/// Applies one case to the state.
pub fn apply(case: LemmaCase, x: &FracSolution, st: &mut RoundingState<'_>) -> Result<Action, SolveError> {
    let inst = st.inst;
    let mut changes = Vec::new();
    match case {
        LemmaCase::ZeroEdge(e) => {
            if !st.active.remove(&e) {
                return Err(breach(format!("zero edge {e} is not active")));
            }
        }
        LemmaCase::OneEdge(e) | LemmaCase::HeavyPickable(e) => {
            if !st.active.remove(&e) {
                return Err(breach(format!("picked edge {e} is not active")));
            }
            st.picked.push((e, x.get(e).clone()));
            let edge = inst.edge(e);
            for w in [edge.u, edge.v] {
                if !st.constrained.contains(&w) {
                    continue;
                }
                let before = st.bounds[&w].clone();
                let after = match case {
                    LemmaCase::OneEdge(_) if before == frac(3, 2) => Rational::one(),
                    LemmaCase::OneEdge(_) => &before - Rational::one(),
                    _ => &before - half(),
                };
                if after.is_negative() {
                    return Err(breach(format!("b'({w}) would drop to {after} after picking edge {e}")));
                }
                if matches!(case, LemmaCase::HeavyPickable(_)) && after < Rational::one() {
                    return Err(breach(format!("heavy pick of edge {e} left b'({w}) = {after} below 1")));
                }
                st.bounds.insert(w, after.clone());
                changes.push(BoundChange { vertex: w, before, after });
            }
        }
        LemmaCase::RelaxVertex(v) => {
            if !st.constrained.remove(&v) {
                return Err(breach(format!("vertex {v} is not constrained")));
            }
        }
        LemmaCase::NoneFound => return Err(breach(String::from("cannot apply NoneFound"))),
    }
    Ok(Action { case, changes })
}

/// Runs the rounding loop to completion.
pub fn solve(inst: &Instance) -> Result<SolveRun, SolveError> {
    solve_observed(inst, |_, _, _| {})
}

/// [`solve`] with a callback invoked on every vertex optimum, before its case
/// is applied.
pub fn solve_observed(
    inst: &Instance,
    mut observe: impl FnMut(&RoundingState<'_>, &CutLp, &LemmaCase),
) -> Result<SolveRun, SolveError> {
    let mut st = RoundingState::new(inst);
    let root = solve_cut_lp(&st)?;
    let root_lp_value = root.value.clone();
    let mut lp_solves = root.rounds;
    let mut pending = Some(root);
    let mut records: Vec<IterationRecord> = Vec::new();
    let cap = inst.num_edges() + inst.bounds().len();

    while !is_feasible(&st) {
        if records.len() > cap {
            return Err(SolveError::IterationCap { cap: cap + 1 });
        }
        let lp = match pending.take() {
            Some(lp) => lp,
            None => match solve_cut_lp(&st) {
                Ok(lp) => {
                    lp_solves += lp.rounds;
                    lp
                }
                Err(SolveError::LpInfeasible) => {
                    return Err(SolveError::ResidualInfeasible { iteration: st.iteration, history: records })
                }
                Err(e) => return Err(e),
            },
        };
        let report = lp::verify_vertex(&lp.problem, &lp.basic).map_err(|e| breach(format!("{e}")))?;
        if !report.passes() {
            return Err(SolveError::NotVertex { iteration: st.iteration, report: Box::new(report) });
        }
        let case = classify(&lp.x, &st);
        observe(&st, &lp, &case);
        if case == LemmaCase::NoneFound {
            return Err(SolveError::LemmaViolated {
                iteration: st.iteration,
                x: lp.x.values().to_vec(),
                bounds: st.bounds.clone(),
                report: Box::new(report),
            });
        }
        let before = st.active.len() + st.constrained.len();
        let action = apply(case, &lp.x, &mut st)?;
        st.check_invariants()?;
        if st.active.len() + st.constrained.len() >= before {
            return Err(breach(format!("iteration {} made no progress", st.iteration)));
        }
        records.push(IterationRecord {
            iteration: st.iteration,
            lp_value: lp.value.clone(),
            support_size: lp.support_size(),
            actions: vec![action],
            active: st.active.len(),
            constrained: st.constrained.len(),
        });
        st.iteration += 1;
    }

    let mut picked: Vec<EdgeId> = st.picked_ids().collect();
    picked.sort_unstable();
    let cost = inst.cost_of(&picked);
    let degrees = inst
        .bounds()
        .iter()
        .map(|(&v, &b)| {
            let degree = inst.degree_in(v, &picked);
            DegreeReport { vertex: v, degree, bound: b, slack: 2 * i64::from(b) + 2 - degree as i64 }
        })
        .collect();
    let solution = Solution { picked, picked_values: st.picked.clone(), cost, root_lp_value, degrees };

    let audit = crate::verify::audit(inst, &solution.picked, Some(&solution.root_lp_value))
        .map_err(|e| breach(format!("audit failed to run: {e}")))?;
    if !audit.overall() {
        return Err(breach(format!("final audit failed: {audit:?}")));
    }
    Ok(SolveRun { solution, records, lp_solves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_fixture, Fixture, FixtureParams};
    use crate::rational::{frac, zero};

    fn k4(bound: Option<u32>) -> Instance {
        gen_fixture(Fixture::K4, &FixtureParams { rho: 1, bound, ..FixtureParams::default() }).unwrap()
    }

    #[test]
    fn k4_root_value() {
        let inst = k4(Some(1));
        let st = RoundingState::new(&inst);
        let lp = solve_cut_lp(&st).unwrap();
        assert_eq!(lp.value, int(2));
        assert_eq!(solve_cut_lp_enumerated(&st).unwrap().value, int(2));
        assert!(lp::verify_vertex(&lp.problem, &lp.basic).unwrap().passes());
    }

    #[test]
    fn satisfied_state_gives_zero() {
        let inst = k4(None);
        let mut st = RoundingState::new(&inst);
        for e in [0, 1, 2] {
            st.pick_for_test(e);
        }
        let lp = solve_cut_lp(&st).unwrap();
        assert_eq!(lp.value, zero());
        assert!(lp.x.values().iter().all(Zero::is_zero));
    }

    fn state_with<'a>(inst: &'a Instance, bounds: &[(VertexId, Rational)]) -> RoundingState<'a> {
        let constrained = bounds.iter().map(|(v, _)| *v).collect();
        let bounds = bounds.iter().cloned().collect();
        RoundingState::from_parts(inst, (0..inst.num_edges()).collect(), Vec::new(), constrained, bounds).unwrap()
    }

    #[test]
    fn classify_priorities() {
        let inst = k4(Some(2));
        let st = RoundingState::new(&inst);
        let x = FracSolution::new(vec![frac(1, 2), int(1), frac(1, 3), int(0), int(1), frac(1, 2)]);
        assert_eq!(classify(&x, &st), LemmaCase::ZeroEdge(3));
        let x = FracSolution::new(vec![frac(1, 2), frac(1, 3), int(1), frac(1, 3), int(1), frac(1, 2)]);
        assert_eq!(classify(&x, &st), LemmaCase::OneEdge(2));
        let x = FracSolution::new(vec![frac(1, 3), frac(1, 3), frac(1, 3), frac(2, 3), frac(1, 3), frac(1, 2)]);
        assert_eq!(classify(&x, &st), LemmaCase::HeavyPickable(3));
    }

    #[test]
    fn heavy_edge_blocked_by_unit_bound() {
        let inst = Instance::builder(3)
            .unit_edge(0, 1)
            .unit_edge(1, 2)
            .unit_edge(0, 2)
            .bound(0, 1)
            .bound(1, 2)
            .build()
            .unwrap();
        let st = state_with(&inst, &[(0, int(1)), (1, frac(3, 2))]);
        let x = FracSolution::new(vec![frac(1, 2), frac(1, 3), frac(1, 2)]);
        // edge 0 touches vertex 0 with b' = 1; edge 2 as well; edge 1 is light
        let case = classify(&x, &st);
        assert_eq!(case, LemmaCase::RelaxVertex(0));
    }

    #[test]
    fn relax_threshold() {
        // vertex 0 of K5 has support degree 4 at x = 1/3, b' = 1: 4 <= 2*1 + 2
        let mut b = Instance::builder(5);
        for u in 0..5 {
            for v in u + 1..5 {
                b = b.unit_edge(u, v);
            }
        }
        let inst = b.bound(0, 1).build().unwrap();
        let st = RoundingState::new(&inst);
        let x = FracSolution::new(vec![frac(1, 3); 10]);
        assert_eq!(classify(&x, &st), LemmaCase::RelaxVertex(0));
        let tight = state_with(&inst, &[(0, frac(1, 2))]);
        // 4 > 2*(1/2) + 2
        assert_eq!(classify(&x, &tight), LemmaCase::NoneFound);
    }

    #[test]
    fn apply_updates() {
        let inst = Instance::builder(3)
            .unit_edge(0, 1)
            .unit_edge(1, 2)
            .unit_edge(0, 2)
            .bound(0, 2)
            .bound(1, 2)
            .build()
            .unwrap();
        let mut st = state_with(&inst, &[(0, frac(3, 2)), (1, int(2))]);
        let x = FracSolution::new(vec![int(1), frac(1, 2), int(0)]);

        let act = apply(LemmaCase::ZeroEdge(2), &x, &mut st).unwrap();
        assert!(act.changes.is_empty());
        assert_eq!(st.active().len(), 2);
        assert_eq!(st.picked().len(), 0);

        let act = apply(LemmaCase::OneEdge(0), &x, &mut st).unwrap();
        assert_eq!(st.bound(0), Some(&int(1)));
        assert_eq!(st.bound(1), Some(&int(1)));
        assert_eq!(act.changes.len(), 2);
        assert_eq!(st.picked(), &[(0, int(1))]);

        let mut st = state_with(&inst, &[(1, frac(3, 2))]);
        apply(LemmaCase::HeavyPickable(1), &x, &mut st).unwrap();
        assert_eq!(st.bound(1), Some(&int(1)));
        assert_eq!(st.picked(), &[(1, frac(1, 2))]);

        assert!(matches!(apply(LemmaCase::RelaxVertex(2), &x, &mut st), Err(SolveError::InvariantBreach(_))));
        apply(LemmaCase::RelaxVertex(1), &x, &mut st).unwrap();
        assert!(st.constrained().is_empty());
    }

    #[test]
    fn apply_rejects_negative_bound() {
        let inst = Instance::builder(2).unit_edge(0, 1).bound(0, 0).build().unwrap();
        let mut st = RoundingState::new(&inst);
        let x = FracSolution::new(vec![int(1)]);
        assert!(matches!(apply(LemmaCase::OneEdge(0), &x, &mut st), Err(SolveError::InvariantBreach(_))));
    }

    #[test]
    fn k4_end_to_end() {
        let inst = k4(Some(1));
        let run = solve(&inst).unwrap();
        assert_eq!(run.solution.root_lp_value, int(2));
        assert!(run.solution.cost <= int(4));
        assert!(run.solution.degrees.iter().all(|d| d.degree <= 4));
        assert!(run.records.len() <= inst.num_edges() + inst.bounds().len());
    }

    #[test]
    fn no_requirements_picks_nothing() {
        let inst = Instance::builder(3).unit_edge(0, 1).unit_edge(1, 2).bound(1, 1).build().unwrap();
        let run = solve(&inst).unwrap();
        assert!(run.solution.picked.is_empty());
        assert_eq!(run.solution.cost, zero());
        assert!(run.records.is_empty());
    }

    #[test]
    fn two_connected_cycle() {
        let inst = gen_fixture(Fixture::Cycle(5), &FixtureParams { rho: 2, ..Default::default() }).unwrap();
        let run = solve(&inst).unwrap();
        assert_eq!(run.solution.root_lp_value, int(5));
        assert_eq!(run.solution.picked, [0, 1, 2, 3, 4]);
        assert_eq!(run.solution.cost, int(5));
    }

    #[test]
    fn infeasible_root() {
        let inst = Instance::builder(2).unit_edge(0, 1).req(0, 1, 2).build().unwrap();
        assert_eq!(solve(&inst), Err(SolveError::LpInfeasible));
    }

    #[test]
    fn from_parts_validation() {
        let inst = k4(Some(1));
        let bad = RoundingState::from_parts(
            &inst,
            [0, 1].into_iter().collect(),
            vec![(1, int(1))],
            BTreeSet::new(),
            BTreeMap::new(),
        );
        assert!(matches!(bad, Err(SolveError::InvariantBreach(_))));
        let bad = RoundingState::from_parts(
            &inst,
            BTreeSet::new(),
            Vec::new(),
            [0].into_iter().collect(),
            [(0, frac(1, 3))].into_iter().collect(),
        );
        assert!(matches!(bad, Err(SolveError::InvariantBreach(_))));
    }
}
