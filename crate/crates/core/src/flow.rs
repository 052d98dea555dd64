//! Exact max-flow / min-cut on undirected rational capacities.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::instance::{Cut, VertexId};
use crate::rational::Rational;

/// Undirected graph with nonnegative rational capacities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CapGraph {
    n: usize,
    arcs: Vec<(VertexId, VertexId, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("source and sink coincide ({0})")]
    SameTerminal(VertexId),
    #[error("vertex id out of range: {0}")]
    OutOfRange(VertexId),
    #[error("negative capacity on arc {0}")]
    NegativeCapacity(usize),
}

impl CapGraph {
    pub fn new(n: usize) -> Self {
        CapGraph { n, arcs: Vec::new() }
    }

    pub fn add(&mut self, u: VertexId, v: VertexId, capacity: Rational) -> Result<(), FlowError> {
        if u >= self.n || v >= self.n {
            return Err(FlowError::OutOfRange(u.max(v)));
        }
        if capacity.is_negative() {
            return Err(FlowError::NegativeCapacity(self.arcs.len()));
        }
        self.arcs.push((u, v, capacity));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId, Rational)] {
        &self.arcs
    }

    /// Total capacity of arcs with exactly one endpoint inside `side`.
    pub fn crossing(&self, side: &[bool]) -> Rational {
        self.arcs.iter().filter(|(u, v, _)| side[*u] != side[*v]).map(|(_, _, c)| c.clone()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: Rational,
    /// Vertices reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
}

impl FlowResult {
    pub fn cut(&self) -> Cut {
        Cut::from_mask(self.source_side.clone()).expect("source side is proper")
    }
}

/// Shortest-augmenting-path max flow from `s` to `t`.
///
/// The returned value always equals the capacity crossing `source_side`;
/// this is asserted before returning.
pub fn max_flow(g: &CapGraph, s: VertexId, t: VertexId) -> Result<FlowResult, FlowError> {
    if s >= g.n || t >= g.n {
        return Err(FlowError::OutOfRange(s.max(t)));
    }
    if s == t {
        return Err(FlowError::SameTerminal(s));
    }
    // arc 2k is u->v, arc 2k+1 is v->u; each starts with the full undirected capacity
    let mut head = Vec::with_capacity(2 * g.arcs.len());
    let mut residual = Vec::with_capacity(2 * g.arcs.len());
    let mut adj = vec![Vec::new(); g.n];
    for (u, v, c) in &g.arcs {
        adj[*u].push(head.len());
        head.push(*v);
        residual.push(c.clone());
        adj[*v].push(head.len());
        head.push(*u);
        residual.push(c.clone());
    }

    let mut value = Rational::zero();
    loop {
        let mut via: Vec<Option<usize>> = vec![None; g.n];
        let mut seen = vec![false; g.n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &arc in &adj[u] {
                let w = head[arc];
                if !seen[w] && residual[arc].is_positive() {
                    seen[w] = true;
                    via[w] = Some(arc);
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            let cut_value = g.crossing(&seen);
            assert_eq!(cut_value, value, "max-flow value differs from min-cut capacity");
            return Ok(FlowResult { value, source_side: seen });
        }
        let mut path = Vec::new();
        let mut w = t;
        while let Some(arc) = via[w] {
            path.push(arc);
            w = head[arc ^ 1];
        }
        let bottleneck = path.iter().map(|&a| residual[a].clone()).min().expect("nonempty path");
        for &a in &path {
            residual[a] -= &bottleneck;
            residual[a ^ 1] += &bottleneck;
        }
        value += bottleneck;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn triangle() {
        let mut g = CapGraph::new(3);
        g.add(0, 1, int(1)).unwrap();
        g.add(1, 2, int(1)).unwrap();
        g.add(0, 2, int(1)).unwrap();
        for (s, t) in [(0, 1), (1, 2), (2, 0)] {
            assert_eq!(max_flow(&g, s, t).unwrap().value, int(2));
        }
    }

    #[test]
    fn path_bottleneck() {
        let mut g = CapGraph::new(3);
        g.add(0, 1, frac(1, 3)).unwrap();
        g.add(1, 2, frac(1, 3)).unwrap();
        let r = max_flow(&g, 0, 2).unwrap();
        assert_eq!(r.value, frac(1, 3));
        assert_eq!(g.crossing(&r.source_side), frac(1, 3));
    }

    #[test]
    fn disconnected_is_zero() {
        let mut g = CapGraph::new(4);
        g.add(0, 1, int(5)).unwrap();
        g.add(2, 3, int(5)).unwrap();
        let r = max_flow(&g, 0, 3).unwrap();
        assert_eq!(r.value, int(0));
        assert_eq!(r.cut().members().collect::<Vec<_>>(), [2, 3]);
    }

    #[test]
    fn flow_uses_both_directions() {
        // capacity on 1-2 must be usable from either side
        let mut g = CapGraph::new(4);
        g.add(0, 2, int(1)).unwrap();
        g.add(2, 1, int(1)).unwrap();
        g.add(0, 1, int(1)).unwrap();
        g.add(1, 3, int(2)).unwrap();
        assert_eq!(max_flow(&g, 0, 3).unwrap().value, int(2));
        assert_eq!(max_flow(&g, 3, 0).unwrap().value, int(2));
    }

    #[test]
    fn invalid_terminals() {
        let g = CapGraph::new(2);
        assert_eq!(max_flow(&g, 1, 1), Err(FlowError::SameTerminal(1)));
        assert_eq!(max_flow(&g, 0, 5), Err(FlowError::OutOfRange(5)));
        assert_eq!(CapGraph::new(2).add(0, 1, int(-1)), Err(FlowError::NegativeCapacity(0)));
    }
}
