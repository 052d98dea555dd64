//! Fixture graphs and seeded random instances.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cuts::lp_feasible;
use crate::instance::{Instance, InstanceError, VertexId};
use crate::rational::{int, one, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    K4,
    Petersen,
    Path(usize),
    Cycle(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown fixture {0:?} (expected k4, petersen, path or cycle)")]
    UnknownFixture(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no LP-feasible instance after {attempts} attempts")]
    RetriesExhausted { attempts: u32 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

impl Fixture {
    /// `n` is required for `path` and `cycle` and ignored otherwise.
    pub fn parse(name: &str, n: Option<usize>) -> Result<Self, GenError> {
        let sized = |ctor: fn(usize) -> Fixture| {
            n.map(ctor).ok_or_else(|| GenError::InvalidParameters(alloc::format!("{name} needs a vertex count")))
        };
        match name {
            "k4" => Ok(Fixture::K4),
            "petersen" => Ok(Fixture::Petersen),
            "path" => sized(Fixture::Path),
            "cycle" => sized(Fixture::Cycle),
            other => Err(GenError::UnknownFixture(other.to_string())),
        }
    }

    pub fn edges(&self) -> Result<(usize, Vec<(VertexId, VertexId)>), GenError> {
        Ok(match *self {
            Fixture::K4 => (4, (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect()),
            Fixture::Petersen => {
                let outer = (0..5).map(|i| (i, (i + 1) % 5));
                let spokes = (0..5).map(|i| (i, i + 5));
                let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
                (10, outer.chain(spokes).chain(inner).collect())
            }
            Fixture::Path(n) if n >= 2 => (n, (0..n - 1).map(|i| (i, i + 1)).collect()),
            Fixture::Cycle(n) if n >= 3 => (n, (0..n).map(|i| (i, (i + 1) % n)).collect()),
            Fixture::Path(_) => return Err(GenError::InvalidParameters("path needs n >= 2".to_string())),
            Fixture::Cycle(_) => return Err(GenError::InvalidParameters("cycle needs n >= 3".to_string())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureParams {
    /// Requirement put on every vertex pair; 0 for none.
    pub rho: u32,
    /// Degree bound put on every vertex; `None` leaves `W0` empty.
    pub bound: Option<u32>,
    pub cost: Rational,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams { rho: 1, bound: None, cost: one() }
    }
}

pub fn gen_fixture(fixture: Fixture, params: &FixtureParams) -> Result<Instance, GenError> {
    let (n, edges) = fixture.edges()?;
    let mut b = Instance::builder(n);
    for (u, v) in edges {
        b = b.edge(u, v, params.cost.clone());
    }
    if params.rho > 0 {
        for u in 0..n {
            for v in u + 1..n {
                b = b.req(u, v, params.rho);
            }
        }
    }
    if let Some(bound) = params.bound {
        for v in 0..n {
            b = b.bound(v, bound);
        }
    }
    Ok(b.build()?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub m: usize,
    pub max_rho: u32,
    /// Probability that a vertex gets a degree bound.
    pub bound_fraction: f64,
    /// Probability that a vertex pair gets a nonzero requirement.
    pub req_density: f64,
    pub max_bound: u32,
    pub max_cost: u32,
    pub retries: u32,
}

impl RandomParams {
    pub fn new(n: usize, m: usize, max_rho: u32, bound_fraction: f64) -> Self {
        RandomParams { n, m, max_rho, bound_fraction, req_density: 0.3, max_bound: 3, max_cost: 5, retries: 1000 }
    }
}

/// Draws instances from `seed` until one has a feasible cut LP.
pub fn gen_random(params: &RandomParams, seed: u64) -> Result<Instance, GenError> {
    let invalid = |msg: &str| Err(GenError::InvalidParameters(msg.to_string()));
    if params.n < 2 {
        return invalid("n must be at least 2");
    }
    if params.m < 1 {
        return invalid("m must be at least 1");
    }
    if !(0.0..=1.0).contains(&params.bound_fraction) || !(0.0..=1.0).contains(&params.req_density) {
        return invalid("probabilities must lie in [0, 1]");
    }
    if params.max_cost < 1 || params.max_bound < 1 {
        return invalid("max_cost and max_bound must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..params.retries {
        let inst = draw(params, &mut rng)?;
        if lp_feasible(&inst) {
            return Ok(inst);
        }
    }
    Err(GenError::RetriesExhausted { attempts: params.retries })
}

fn draw(p: &RandomParams, rng: &mut ChaCha8Rng) -> Result<Instance, GenError> {
    let mut b = Instance::builder(p.n);
    for _ in 0..p.m {
        let u = rng.random_range(0..p.n);
        let mut v = rng.random_range(0..p.n - 1);
        if v >= u {
            v += 1;
        }
        b = b.edge(u, v, int(i64::from(rng.random_range(1..=p.max_cost))));
    }
    if p.max_rho > 0 {
        for u in 0..p.n {
            for v in u + 1..p.n {
                if rng.random_bool(p.req_density) {
                    b = b.req(u, v, rng.random_range(1..=p.max_rho));
                }
            }
        }
    }
    for v in 0..p.n {
        if rng.random_bool(p.bound_fraction) {
            b = b.bound(v, rng.random_range(1..=p.max_bound));
        }
    }
    Ok(b.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(inst: &Instance) -> Vec<usize> {
        let all: Vec<usize> = (0..inst.num_edges()).collect();
        (0..inst.n()).map(|v| inst.degree_in(v, &all)).collect()
    }

    #[test]
    fn fixture_shapes() {
        let p = FixtureParams::default();
        let k4 = gen_fixture(Fixture::K4, &p).unwrap();
        assert_eq!((k4.n(), k4.num_edges()), (4, 6));
        assert!(degrees(&k4).iter().all(|&d| d == 3));

        let pet = gen_fixture(Fixture::Petersen, &p).unwrap();
        assert_eq!((pet.n(), pet.num_edges()), (10, 15));
        assert!(degrees(&pet).iter().all(|&d| d == 3));

        let c5 = gen_fixture(Fixture::Cycle(5), &p).unwrap();
        assert_eq!(c5.num_edges(), 5);
        assert!(degrees(&c5).iter().all(|&d| d == 2));

        let p4 = gen_fixture(Fixture::Path(4), &p).unwrap();
        assert_eq!(degrees(&p4), [1, 2, 2, 1]);
    }

    #[test]
    fn petersen_has_girth_five() {
        // no triangles or 4-cycles: adjacent vertices share no neighbour,
        // non-adjacent vertices share exactly one
        let pet = gen_fixture(Fixture::Petersen, &FixtureParams::default()).unwrap();
        let mut adj = [[false; 10]; 10];
        for e in pet.edges() {
            adj[e.u][e.v] = true;
            adj[e.v][e.u] = true;
        }
        for u in 0..10 {
            for v in u + 1..10 {
                let common = (0..10).filter(|&w| adj[u][w] && adj[v][w]).count();
                assert_eq!(common, if adj[u][v] { 0 } else { 1 });
            }
        }
    }

    #[test]
    fn fixture_params_apply() {
        let inst = gen_fixture(Fixture::K4, &FixtureParams { rho: 2, bound: Some(3), cost: int(7) }).unwrap();
        assert_eq!(inst.rho(1, 3), 2);
        assert_eq!(inst.bound(2), Some(3));
        assert_eq!(inst.edge(0).cost, int(7));
        let bare = gen_fixture(Fixture::K4, &FixtureParams { rho: 0, ..Default::default() }).unwrap();
        assert!(!bare.has_requirements());
    }

    #[test]
    fn parse_names() {
        assert_eq!(Fixture::parse("k4", None), Ok(Fixture::K4));
        assert_eq!(Fixture::parse("cycle", Some(5)), Ok(Fixture::Cycle(5)));
        assert!(matches!(Fixture::parse("cube", None), Err(GenError::UnknownFixture(_))));
        assert!(matches!(Fixture::parse("path", None), Err(GenError::InvalidParameters(_))));
        assert!(Fixture::Cycle(2).edges().is_err());
    }

    #[test]
    fn random_is_deterministic_and_feasible() {
        let p = RandomParams::new(6, 10, 2, 0.5);
        let a = gen_random(&p, 42).unwrap();
        let b = gen_random(&p, 42).unwrap();
        assert_eq!(a, b);
        assert!(lp_feasible(&a));
        assert_eq!(a.num_edges(), 10);
    }

    #[test]
    fn random_rejects_bad_parameters() {
        assert!(matches!(gen_random(&RandomParams::new(1, 3, 1, 0.5), 0), Err(GenError::InvalidParameters(_))));
        assert!(matches!(gen_random(&RandomParams::new(4, 0, 1, 0.5), 0), Err(GenError::InvalidParameters(_))));
    }

    #[test]
    fn random_gives_up() {
        // one edge on three vertices with every pair required: never feasible
        let p = RandomParams { req_density: 1.0, retries: 5, ..RandomParams::new(3, 1, 2, 0.0) };
        assert_eq!(gen_random(&p, 7), Err(GenError::RetriesExhausted { attempts: 5 }));
    }
}
