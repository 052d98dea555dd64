//! Independent auditing of solutions and a brute-force optimum for tiny
//! instances.
//!
//! Nothing here trusts the rounding engine: connectivity is recounted with a
//! separate unit-capacity max-flow, degrees and costs are recomputed from the
//! instance and the picked edge list.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::instance::{EdgeId, Instance, VertexId};
use crate::rational::{int, Rational};
use crate::rounding::{self, Solution, SolveError};

/// Number of edge-disjoint `s`-`t` paths in the multigraph `edges`.
pub fn edge_disjoint_paths(n: usize, edges: &[(VertexId, VertexId)], s: VertexId, t: VertexId) -> u32 {
    if s == t {
        return 0;
    }
    let mut cap = vec![vec![0i64; n]; n];
    for &(u, v) in edges {
        cap[u][v] += 1;
        cap[v][u] += 1;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in 0..n {
                if prev[w] == usize::MAX && cap[u][w] > 0 {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut w = t;
        while w != s {
            let u = prev[w];
            cap[u][w] -= 1;
            cap[w][u] += 1;
            w = u;
        }
        flow += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub u: VertexId,
    pub v: VertexId,
    pub required: u32,
    pub achieved: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub vertex: VertexId,
    pub degree: usize,
    /// `2 b(v) + 2`
    pub limit: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCheck {
    pub vertex: VertexId,
    pub degree: usize,
    pub lower: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostCheck {
    pub cost: Rational,
    pub lp_value: Rational,
    /// `cost / lp_value`; `None` when the LP value is zero.
    pub ratio: Option<Rational>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub connectivity: Vec<PairCheck>,
    pub degrees: Vec<DegreeCheck>,
    pub lower_bounds: Vec<LowerCheck>,
    pub cost: CostCheck,
}

impl AuditReport {
    pub fn overall(&self) -> bool {
        self.connectivity.iter().all(|c| c.pass)
            && self.degrees.iter().all(|c| c.pass)
            && self.lower_bounds.iter().all(|c| c.pass)
            && self.cost.pass
    }

    pub fn failing_pairs(&self) -> impl Iterator<Item = &PairCheck> {
        self.connectivity.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("could not compute the LP value: {0}")]
    Lp(SolveError),
}

/// Checks `picked` against every requirement, the relaxed degree bounds
/// `2 b(v) + 2`, the lower bounds, and `cost <= 2 lp`. When `lp_value` is
/// `None` the root LP is solved afresh.
pub fn audit(inst: &Instance, picked: &[EdgeId], lp_value: Option<&Rational>) -> Result<AuditReport, AuditError> {
    let ids: BTreeSet<EdgeId> = picked.iter().copied().collect();
    if let Some(&e) = ids.iter().find(|&&e| e >= inst.num_edges()) {
        return Err(AuditError::UnknownEdge(e));
    }
    let edges: Vec<(VertexId, VertexId)> = ids.iter().map(|&e| (inst.edge(e).u, inst.edge(e).v)).collect();
    let degree = |v: VertexId| edges.iter().filter(|&&(a, b)| a == v || b == v).count();

    let connectivity = inst
        .requirements()
        .map(|((u, v), required)| {
            let achieved = edge_disjoint_paths(inst.n(), &edges, u, v);
            PairCheck { u, v, required, achieved, pass: achieved >= required }
        })
        .collect();
    let degrees = inst
        .bounds()
        .iter()
        .map(|(&v, &b)| {
            let d = degree(v);
            let limit = 2 * b + 2;
            DegreeCheck { vertex: v, degree: d, limit, pass: d <= limit as usize }
        })
        .collect();
    let lower_bounds = inst
        .lower_bounds()
        .iter()
        .map(|(&v, &l)| {
            let d = degree(v);
            LowerCheck { vertex: v, degree: d, lower: l, pass: d >= l as usize }
        })
        .collect();

    let lp_value = match lp_value {
        Some(v) => v.clone(),
        None => rounding::lp_value(inst).map_err(AuditError::Lp)?,
    };
    let cost: Rational = ids.iter().map(|&e| inst.edge(e).cost.clone()).sum();
    let ratio = (!lp_value.is_zero()).then(|| &cost / &lp_value);
    let pass = cost <= int(2) * &lp_value;
    Ok(AuditReport { connectivity, degrees, lower_bounds, cost: CostCheck { cost, lp_value, ratio, pass } })
}

/// Hard limit on `|E|` for [`brute_force_opt`].
pub const BRUTE_FORCE_LIMIT: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("instance has {edges} edges; brute force is limited to {limit}")]
    TooManyEdges { edges: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteSolution {
    pub edges: Vec<EdgeId>,
    pub cost: Rational,
}

/// Minimum-cost edge set meeting every requirement and lower bound with
/// `deg(v) <= b(v) + relax` on `W0`, by exhaustive enumeration.
///
/// Subsets are visited by cardinality, then lexicographically. With uniform
/// costs the first feasible cardinality level is optimal and the search stops
/// there. Ties go to the lexicographically smallest edge-id sequence.
pub fn brute_force_opt(inst: &Instance, relax: u32) -> Result<Option<BruteSolution>, BruteForceError> {
    let m = inst.num_edges();
    if m > BRUTE_FORCE_LIMIT {
        return Err(BruteForceError::TooManyEdges { edges: m, limit: BRUTE_FORCE_LIMIT });
    }
    let uniform = inst.edges().windows(2).all(|w| w[0].cost == w[1].cost);
    let mut best: Option<BruteSolution> = None;
    for k in 0..=m {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            if qualifies(inst, &combo, relax) {
                let cost = inst.cost_of(&combo);
                let better = match &best {
                    None => true,
                    Some(b) => cost < b.cost || (cost == b.cost && combo < b.edges),
                };
                if better {
                    best = Some(BruteSolution { edges: combo.clone(), cost });
                }
                if uniform {
                    return Ok(best);
                }
            }
            if !next_combination(&mut combo, m) {
                break;
            }
        }
    }
    Ok(best)
}

fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let k = combo.len();
    let Some(i) = (0..k).rev().find(|&i| combo[i] < m - k + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..k {
        combo[j] = combo[j - 1] + 1;
    }
    true
}

fn qualifies(inst: &Instance, subset: &[EdgeId], relax: u32) -> bool {
    let n = inst.n();
    let mut deg = vec![0u32; n];
    for &e in subset {
        deg[inst.edge(e).u] += 1;
        deg[inst.edge(e).v] += 1;
    }
    if inst.bounds().iter().any(|(&v, &b)| deg[v] > b + relax) {
        return false;
    }
    if inst.lower_bounds().iter().any(|(&v, &l)| deg[v] < l) {
        return false;
    }
    if inst.requirements().any(|((u, v), r)| deg[u] < r || deg[v] < r) {
        return false;
    }
    let edges: Vec<(VertexId, VertexId)> = subset.iter().map(|&e| (inst.edge(e).u, inst.edge(e).v)).collect();
    inst.requirements().all(|((u, v), r)| edge_disjoint_paths(n, &edges, u, v) >= r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuaranteeReport {
    pub cost: Rational,
    pub lp_value: Rational,
    /// `2 lp - cost`
    pub lp_margin: Rational,
    pub lp_pass: bool,
    /// `(opt, 2 opt - cost, pass)` when the exact optimum exists.
    pub opt: Option<(Rational, Rational, bool)>,
}

impl GuaranteeReport {
    pub fn pass(&self) -> bool {
        self.lp_pass && self.opt.as_ref().is_none_or(|(_, _, p)| *p)
    }
}

/// Compares a solver run against the LP bound and, when known, the exact
/// optimum from [`brute_force_opt`] with `relax = 0`.
pub fn check_guarantee(solution: &Solution, oracle: Option<&BruteSolution>) -> GuaranteeReport {
    let two = int(2);
    let lp_margin = &two * &solution.root_lp_value - &solution.cost;
    let opt = oracle.map(|o| {
        let margin = &two * &o.cost - &solution.cost;
        let pass = !margin.is_negative();
        (o.cost.clone(), margin, pass)
    });
    GuaranteeReport {
        cost: solution.cost.clone(),
        lp_value: solution.root_lp_value.clone(),
        lp_pass: !lp_margin.is_negative(),
        lp_margin,
        opt,
    }
}
