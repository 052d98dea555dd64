//! Instance data model: multigraph, costs, requirements and degree bounds.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::rational::Rational;

pub type VertexId = usize;
/// Edges are identified by their position in input order, so parallel edges
/// stay distinguishable.
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub cost: Rational,
}

impl Edge {
    pub fn is_incident(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }

    pub fn crosses(&self, cut: &Cut) -> bool {
        cut.contains(self.u) != cut.contains(self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("vertex id out of range: {vertex} (instance has {n} vertices)")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} has negative cost")]
    NegativeCost { edge: EdgeId },
    #[error("requirement between a vertex and itself ({vertex})")]
    SelfRequirement { vertex: VertexId },
    #[error("conflicting requirement values for pair ({u}, {v}): {first} vs {second}")]
    ConflictingRequirement { u: VertexId, v: VertexId, first: u32, second: u32 },
    #[error("conflicting {kind} values for vertex {vertex}: {first} vs {second}")]
    ConflictingVertexValue { kind: &'static str, vertex: VertexId, first: u32, second: u32 },
    #[error("lower bound on vertex {vertex} of a single-vertex instance")]
    LoneLowerBound { vertex: VertexId },
}

/// A degree-bounded survivable network design instance.
///
/// Requirements are stored sparsely keyed by `(min, max)` with zero default;
/// the key set of `bounds` is the set `W0` of degree-constrained vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    edges: Vec<Edge>,
    req: BTreeMap<(VertexId, VertexId), u32>,
    bounds: BTreeMap<VertexId, u32>,
    lower: BTreeMap<VertexId, u32>,
}

impl Instance {
    pub fn builder(n: usize) -> InstanceBuilder {
        InstanceBuilder { n, edges: Vec::new(), req: Vec::new(), bounds: Vec::new(), lower: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn rho(&self, u: VertexId, v: VertexId) -> u32 {
        if u == v {
            return 0;
        }
        self.req.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    /// Nonzero requirements as `((u, v), rho)` with `u < v`, lexicographic.
    pub fn requirements(&self) -> impl Iterator<Item = ((VertexId, VertexId), u32)> + '_ {
        self.req.iter().map(|(&k, &r)| (k, r))
    }

    pub fn bound(&self, v: VertexId) -> Option<u32> {
        self.bounds.get(&v).copied()
    }

    /// Degree bounds keyed by vertex; the keys form `W0`.
    pub fn bounds(&self) -> &BTreeMap<VertexId, u32> {
        &self.bounds
    }

    pub fn lower(&self, v: VertexId) -> u32 {
        self.lower.get(&v).copied().unwrap_or(0)
    }

    pub fn lower_bounds(&self) -> &BTreeMap<VertexId, u32> {
        &self.lower
    }

    pub fn cost_of<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Rational {
        ids.into_iter().map(|&e| self.edges[e].cost.clone()).sum()
    }

    /// Number of edges in `ids` incident to `v`.
    pub fn degree_in<'a>(&self, v: VertexId, ids: impl IntoIterator<Item = &'a EdgeId>) -> usize {
        ids.into_iter().filter(|&&e| self.edges[e].is_incident(v)).count()
    }

    pub fn has_requirements(&self) -> bool {
        !self.req.is_empty() || !self.lower.is_empty()
    }
}

/// Collects edges and requirements, validating on [`InstanceBuilder::build`].
#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    n: usize,
    edges: Vec<Edge>,
    req: Vec<(VertexId, VertexId, u32)>,
    bounds: Vec<(VertexId, u32)>,
    lower: Vec<(VertexId, u32)>,
}

impl InstanceBuilder {
    pub fn edge(mut self, u: VertexId, v: VertexId, cost: Rational) -> Self {
        self.edges.push(Edge { u, v, cost });
        self
    }

    pub fn unit_edge(self, u: VertexId, v: VertexId) -> Self {
        self.edge(u, v, crate::rational::one())
    }

    pub fn req(mut self, u: VertexId, v: VertexId, rho: u32) -> Self {
        self.req.push((u, v, rho));
        self
    }

    pub fn bound(mut self, v: VertexId, b: u32) -> Self {
        self.bounds.push((v, b));
        self
    }

    pub fn lower(mut self, v: VertexId, l: u32) -> Self {
        self.lower.push((v, l));
        self
    }

    pub fn build(self) -> Result<Instance, InstanceError> {
        let n = self.n;
        let check = |vertex: VertexId| {
            if vertex < n {
                Ok(())
            } else {
                Err(InstanceError::VertexOutOfRange { vertex, n })
            }
        };
        for (id, e) in self.edges.iter().enumerate() {
            check(e.u)?;
            check(e.v)?;
            if e.u == e.v {
                return Err(InstanceError::SelfLoop { edge: id, vertex: e.u });
            }
            if e.cost.is_negative() {
                return Err(InstanceError::NegativeCost { edge: id });
            }
        }
        let mut req = BTreeMap::new();
        for (u, v, rho) in self.req {
            check(u)?;
            check(v)?;
            if u == v {
                return Err(InstanceError::SelfRequirement { vertex: u });
            }
            let key = (u.min(v), u.max(v));
            match req.get(&key) {
                Some(&first) if first != rho => {
                    return Err(InstanceError::ConflictingRequirement { u: key.0, v: key.1, first, second: rho })
                }
                _ => {
                    req.insert(key, rho);
                }
            }
        }
        req.retain(|_, r| *r > 0);
        let collect = |kind: &'static str, items: Vec<(VertexId, u32)>| {
            let mut map = BTreeMap::new();
            for (v, value) in items {
                check(v)?;
                match map.get(&v) {
                    Some(&first) if first != value => {
                        return Err(InstanceError::ConflictingVertexValue { kind, vertex: v, first, second: value })
                    }
                    _ => {
                        map.insert(v, value);
                    }
                }
            }
            Ok(map)
        };
        let bounds = collect("bound", self.bounds)?;
        let mut lower = collect("lower", self.lower)?;
        lower.retain(|_, l| *l > 0);
        if let (1, Some(&vertex)) = (n, lower.keys().next()) {
            return Err(InstanceError::LoneLowerBound { vertex });
        }
        Ok(Instance { n, edges: self.edges, req, bounds, lower })
    }
}

/// A proper nonempty vertex subset `S`, stored by its canonical side (the side
/// not containing vertex 0). `S` and `V \ S` give the same `Cut`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cut {
    inside: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("cut side must be a proper nonempty subset")]
    NotProper,
    #[error("vertex id out of range: {0}")]
    OutOfRange(VertexId),
}

impl Cut {
    pub fn new(n: usize, members: impl IntoIterator<Item = VertexId>) -> Result<Self, CutError> {
        let mut inside = alloc::vec![false; n];
        for v in members {
            if v >= n {
                return Err(CutError::OutOfRange(v));
            }
            inside[v] = true;
        }
        Self::from_mask(inside)
    }

    /// Membership mask of one side; canonicalized on construction.
    pub fn from_mask(mut inside: Vec<bool>) -> Result<Self, CutError> {
        let count = inside.iter().filter(|&&b| b).count();
        if count == 0 || count == inside.len() {
            return Err(CutError::NotProper);
        }
        if inside[0] {
            inside.iter_mut().for_each(|b| *b = !*b);
        }
        Ok(Cut { inside })
    }

    pub fn singleton(n: usize, v: VertexId) -> Result<Self, CutError> {
        Self::new(n, [v])
    }

    pub fn n(&self) -> usize {
        self.inside.len()
    }

    /// Whether `v` lies on the canonical side.
    pub fn contains(&self, v: VertexId) -> bool {
        self.inside[v]
    }

    pub fn separates(&self, u: VertexId, v: VertexId) -> bool {
        self.inside[u] != self.inside[v]
    }

    pub fn members(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.inside.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }

    pub fn len(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Some(w)` when one side of the cut is exactly `{w}`.
    pub fn singleton_vertex(&self) -> Option<VertexId> {
        let n = self.n();
        let size = self.len();
        if size == 1 {
            self.members().next()
        } else if size + 1 == n {
            self.inside.iter().position(|&b| !b)
        } else {
            None
        }
    }

    /// Every proper cut on `n` vertices, once each (`2^(n-1) - 1` of them).
    pub fn enumerate(n: usize) -> impl Iterator<Item = Cut> {
        let count: u64 = if n >= 2 { (1u64 << (n - 1)) - 1 } else { 0 };
        (1..=count).map(move |mask| {
            let mut inside = alloc::vec![false; n];
            for (i, slot) in inside.iter_mut().enumerate().skip(1) {
                *slot = mask >> (i - 1) & 1 == 1;
            }
            Cut { inside }
        })
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// `R(S)`: the largest requirement between a vertex inside and a vertex
/// outside `S`, raised to `l(w)` when one side of the cut is `{w}`.
pub fn cut_requirement(inst: &Instance, cut: &Cut) -> u32 {
    let pairs = inst.requirements().filter(|&((u, v), _)| cut.separates(u, v)).map(|(_, r)| r).max().unwrap_or(0);
    let n = cut.n();
    let size = cut.len();
    let mut singleton = 0;
    if size == 1 {
        singleton = cut.members().map(|w| inst.lower(w)).max().unwrap_or(0);
    }
    if size + 1 == n {
        singleton = singleton.max((0..n).filter(|&w| !cut.contains(w)).map(|w| inst.lower(w)).max().unwrap_or(0));
    }
    pairs.max(singleton)
}
