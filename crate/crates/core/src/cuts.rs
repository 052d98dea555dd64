//! Separation oracle for the cut rows, residual requirements, and integral
//! feasibility of the picked edge set.

use num_traits::Signed;

use crate::flow::{max_flow, CapGraph};
use crate::instance::{cut_requirement, Cut};
use crate::rational::{int, one, Rational};
use crate::rounding::{FracSolution, RoundingState};

/// A cut row `x(delta_{E'}(S)) >= R'(S)` that the current point violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub cut: Cut,
    /// Residual requirement `R'(S)`.
    pub required: Rational,
    /// `x(delta_{E'}(S))` over the active edges.
    pub actual: Rational,
}

impl Violation {
    pub fn deficit(&self) -> Rational {
        &self.required - &self.actual
    }
}

/// `max(0, R(S) - |delta_F(S)|)`, computed on demand from the instance and
/// the picked edges.
pub fn residual_requirement(st: &RoundingState<'_>, cut: &Cut) -> u32 {
    let inst = st.instance();
    let crossing = st.picked_ids().filter(|&e| inst.edge(e).crosses(cut)).count();
    cut_requirement(inst, cut).saturating_sub(u32::try_from(crossing).unwrap_or(u32::MAX))
}

/// Fractional mass of active edges crossing `cut`.
pub fn active_crossing(x: &FracSolution, st: &RoundingState<'_>, cut: &Cut) -> Rational {
    let inst = st.instance();
    st.active().iter().filter(|&&e| inst.edge(e).crosses(cut)).map(|&e| x.get(e).clone()).sum()
}

fn violation_at(x: &FracSolution, st: &RoundingState<'_>, cut: Cut) -> Violation {
    let required = int(i64::from(residual_requirement(st, &cut)));
    let actual = active_crossing(x, st, &cut);
    debug_assert!(actual < required);
    Violation { cut, required, actual }
}

/// Returns the first violated cut row of the full residual LP, or `None` if
/// `x` satisfies all of them.
///
/// Pairs with `rho > 0` are scanned in lexicographic order, each with one
/// max-flow on capacities `x_e` (active edges) plus 1 (picked edges); then
/// every vertex with a degree lower bound is checked at its singleton cut.
pub fn find_violated_cut(x: &FracSolution, st: &RoundingState<'_>) -> Option<Violation> {
    let inst = st.instance();
    let n = inst.n();
    let mut g = CapGraph::new(n);
    for &e in st.active() {
        let value = x.get(e);
        if value.is_positive() {
            let edge = inst.edge(e);
            g.add(edge.u, edge.v, value.clone()).expect("edge endpoints are valid");
        }
    }
    for e in st.picked_ids() {
        let edge = inst.edge(e);
        g.add(edge.u, edge.v, one()).expect("edge endpoints are valid");
    }
    for ((u, v), rho) in inst.requirements() {
        let flow = max_flow(&g, u, v).expect("distinct valid terminals");
        if flow.value < int(i64::from(rho)) {
            return Some(violation_at(x, st, flow.cut()));
        }
    }
    if n >= 2 {
        for &w in inst.lower_bounds().keys() {
            let cut = Cut::singleton(n, w).expect("n >= 2");
            if active_crossing(x, st, &cut) < int(i64::from(residual_requirement(st, &cut))) {
                return Some(violation_at(x, st, cut));
            }
        }
    }
    None
}

/// Whether the picked edges alone meet every pairwise requirement and every
/// degree lower bound.
pub fn is_feasible(st: &RoundingState<'_>) -> bool {
    let inst = st.instance();
    let mut g = CapGraph::new(inst.n());
    for e in st.picked_ids() {
        let edge = inst.edge(e);
        g.add(edge.u, edge.v, one()).expect("edge endpoints are valid");
    }
    let pairs_ok = inst
        .requirements()
        .all(|((u, v), rho)| max_flow(&g, u, v).expect("distinct valid terminals").value >= int(i64::from(rho)));
    pairs_ok && inst.lower_bounds().iter().all(|(&v, &l)| st.picked_degree(v) >= l as usize)
}

/// Whether the cut LP of the instance has any feasible point.
pub fn lp_feasible(inst: &crate::instance::Instance) -> bool {
    crate::rounding::phase_one(&RoundingState::new(inst)).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_fixture, Fixture, FixtureParams};
    use crate::instance::Instance;
    use crate::rational::{frac, zero};
    use alloc::vec;

    fn k4(bound: Option<u32>) -> Instance {
        gen_fixture(Fixture::K4, &FixtureParams { rho: 1, bound, ..FixtureParams::default() }).unwrap()
    }

    #[test]
    fn empty_support_violates() {
        let inst = Instance::builder(3).unit_edge(0, 1).unit_edge(1, 2).req(0, 1, 1).build().unwrap();
        let st = RoundingState::new(&inst);
        let x = FracSolution::zeros(2);
        let v = find_violated_cut(&x, &st).unwrap();
        assert!(v.cut.separates(0, 1));
        assert_eq!(v.deficit(), int(1));
        assert_eq!(v.actual, zero());
    }

    #[test]
    fn petersen_third_is_feasible() {
        let inst =
            gen_fixture(Fixture::Petersen, &FixtureParams { rho: 1, bound: Some(1), ..Default::default() }).unwrap();
        let st = RoundingState::new(&inst);
        let x = FracSolution::new(vec![frac(1, 3); 15]);
        assert_eq!(find_violated_cut(&x, &st), None);
    }

    #[test]
    fn spanning_tree_support_is_feasible() {
        let inst = k4(None);
        let st = RoundingState::new(&inst);
        // edges in generation order: 01 02 03 12 13 23; star at 0
        let x = FracSolution::new(vec![int(1), int(1), int(1), zero(), zero(), zero()]);
        assert_eq!(find_violated_cut(&x, &st), None);
    }

    #[test]
    fn residual_clamps_at_zero() {
        let inst = Instance::builder(3)
            .unit_edge(0, 1)
            .unit_edge(0, 1)
            .unit_edge(1, 2)
            .req(0, 1, 1)
            .req(1, 2, 2)
            .build()
            .unwrap();
        let mut st = RoundingState::new(&inst);
        let s0 = Cut::singleton(3, 0).unwrap();
        let s2 = Cut::singleton(3, 2).unwrap();
        assert_eq!(residual_requirement(&st, &s0), 1);
        assert_eq!(residual_requirement(&st, &s2), 2);
        st.pick_for_test(0);
        st.pick_for_test(1);
        assert_eq!(residual_requirement(&st, &s0), 0);
        st.pick_for_test(2);
        assert_eq!(residual_requirement(&st, &s2), 1);
    }

    #[test]
    fn feasibility_of_picked_sets() {
        let inst = k4(None);
        let mut st = RoundingState::new(&inst);
        assert!(!is_feasible(&st));
        for e in [0, 1, 2] {
            st.pick_for_test(e);
        }
        assert!(is_feasible(&st));

        let cycle = gen_fixture(Fixture::Cycle(5), &FixtureParams { rho: 2, ..Default::default() }).unwrap();
        let mut st = RoundingState::new(&cycle);
        for e in 0..5 {
            st.pick_for_test(e);
        }
        assert!(is_feasible(&st));
    }

    #[test]
    fn lower_bound_feasibility() {
        let inst = Instance::builder(3).unit_edge(0, 1).unit_edge(0, 2).lower(0, 2).build().unwrap();
        let mut st = RoundingState::new(&inst);
        st.pick_for_test(0);
        assert!(!is_feasible(&st));
        let v = find_violated_cut(&FracSolution::zeros(2), &st).unwrap();
        assert_eq!(v.cut.singleton_vertex(), Some(0));
        assert_eq!(v.required, int(1));
        st.pick_for_test(1);
        assert!(is_feasible(&st));
    }

    #[test]
    fn lp_feasibility_examples() {
        assert!(lp_feasible(&k4(Some(1))));
        let single = Instance::builder(2).unit_edge(0, 1).req(0, 1, 2).build().unwrap();
        assert!(!lp_feasible(&single));
        let none = Instance::builder(4).unit_edge(0, 1).bound(2, 0).build().unwrap();
        assert!(lp_feasible(&none));
    }
}
