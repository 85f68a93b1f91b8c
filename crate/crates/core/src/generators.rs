//! Named and seeded instance families.
//!
//! Every family yields an admissible instance; the generator checks this before returning.
//! Random families draw from a ChaCha stream seeded with `FamilySpec::seed`, so equal
//! `FamilySpec`s always produce the same instance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypothesis::{check_instance, Instance};
use crate::multigraph::{bridges, Multigraph, Vertex};
use crate::oracle::{boundary_pairs, enumerate_small_graphs};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Cycle {
        n: usize,
    },
    /// Two poles joined by three internally disjoint paths with `a`, `b`, `c` edges.
    Theta {
        a: usize,
        b: usize,
        c: usize,
    },
    /// Hub 0 joined to every vertex of the rim cycle `1..=n`.
    Wheel {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Petersen,
    /// 2-edge-connected graph grown from a cycle by attaching ears.
    Random2ec {
        n: usize,
        m: usize,
    },
    /// `k` cycle blocks (some with one chord) linked in a row by single bridges; U meets
    /// both end blocks away from the bridges.
    BridgedChain {
        k: usize,
    },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cycle { n } => write!(f, "cycle({n})"),
            Family::Theta { a, b, c } => write!(f, "theta({a},{b},{c})"),
            Family::Wheel { n } => write!(f, "wheel({n})"),
            Family::Complete { n } => write!(f, "complete({n})"),
            Family::Petersen => write!(f, "petersen"),
            Family::Random2ec { n, m } => write!(f, "random-2ec({n},{m})"),
            Family::BridgedChain { k } => write!(f, "bridged-chain({k})"),
        }
    }
}

/// How T and U are drawn on top of whatever a family forces into U.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Only the forced U vertices, T empty.
    #[default]
    Empty,
    /// Uniform admissible sizes, then uniform placement.
    Random,
    /// Exact sizes, uniform placement.
    Sized { u: usize, t: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub seed: u64,
    pub boundary: BoundaryPolicy,
}

impl FamilySpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self { family, seed, boundary: BoundaryPolicy::Empty }
    }

    pub fn with_boundary(mut self, boundary: BoundaryPolicy) -> Self {
        self.boundary = boundary;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("generated instance is not admissible: {0}")]
    NotAdmissible(String),
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::InvalidParameters(msg.into())
}

pub fn make(spec: &FamilySpec) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (graph, forced) = match spec.family {
        Family::Cycle { n } => (cycle(n)?, Vec::new()),
        Family::Theta { a, b, c } => (theta(a, b, c)?, Vec::new()),
        Family::Wheel { n } => (wheel(n)?, Vec::new()),
        Family::Complete { n } => (complete(n)?, Vec::new()),
        Family::Petersen => (petersen(), Vec::new()),
        Family::Random2ec { n, m } => (random_2ec(n, m, &mut rng)?, Vec::new()),
        Family::BridgedChain { k } => bridged_chain(k, &mut rng)?,
    };
    let (t, u) = draw_boundary(graph.vertex_count(), &forced, spec.boundary, &mut rng)?;
    let inst = Instance::new(graph, t, u);
    let report = check_instance(&inst);
    if !report.is_valid() {
        return Err(GenError::NotAdmissible(report.to_string()));
    }
    if let Family::BridgedChain { k } = spec.family {
        let found = bridges(&inst.graph).len();
        if found != k - 1 {
            return Err(GenError::NotAdmissible(format!("expected {} bridges, found {found}", k - 1)));
        }
    }
    Ok(inst)
}

pub fn cycle(n: usize) -> Result<Multigraph, GenError> {
    if n < 2 {
        return Err(invalid("cycle needs at least 2 vertices"));
    }
    Ok(Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("in range"))
}

pub fn theta(a: usize, b: usize, c: usize) -> Result<Multigraph, GenError> {
    if a == 0 || b == 0 || c == 0 {
        return Err(invalid("theta path lengths must be positive"));
    }
    let mut n = 2;
    let mut edges = Vec::new();
    for len in [a, b, c] {
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, 1));
    }
    Ok(Multigraph::new(n, edges).expect("in range"))
}

pub fn wheel(n: usize) -> Result<Multigraph, GenError> {
    if n < 3 {
        return Err(invalid("wheel rim needs at least 3 vertices"));
    }
    let mut edges: Vec<_> = (1..=n).map(|i| (0, i)).collect();
    edges.extend((1..=n).map(|i| (i, i % n + 1)));
    Ok(Multigraph::new(n + 1, edges).expect("in range"))
}

pub fn complete(n: usize) -> Result<Multigraph, GenError> {
    if n < 3 {
        return Err(invalid("complete graph needs at least 3 vertices to be 2-edge-connected"));
    }
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Ok(Multigraph::new(n, edges).expect("in range"))
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i -- i + 5`.
pub fn petersen() -> Multigraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        edges.push((i, i + 5));
    }
    for i in 0..5 {
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Multigraph::new(10, edges).expect("in range")
}

/// Random vertex relabelling, edge order, and orientations.
fn scramble(n: usize, edges: Vec<(Vertex, Vertex)>, rng: &mut ChaCha8Rng) -> (Multigraph, Vec<Vertex>) {
    let mut relabel: Vec<Vertex> = (0..n).collect();
    relabel.shuffle(rng);
    let mut edges: Vec<_> = edges
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (relabel[a], relabel[b]);
            if rng.gen_bool(0.5) {
                (b, a)
            } else {
                (a, b)
            }
        })
        .collect();
    edges.shuffle(rng);
    (Multigraph::new(n, edges).expect("in range"), relabel)
}

/// Ear decomposition: a cycle, then `m - n` ears sharing the remaining new vertices.
/// Ears without new vertices are chords between distinct vertices.
pub fn random_2ec(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Multigraph, GenError> {
    if n < 3 || m < n {
        return Err(invalid(format!("random 2-edge-connected graph needs n >= 3 and m >= n (n={n}, m={m})")));
    }
    let ears = m - n;
    let start = if ears == 0 { n } else { rng.gen_range(3..=n) };
    let mut edges: Vec<(Vertex, Vertex)> = (0..start).map(|i| (i, (i + 1) % start)).collect();
    let mut sizes = vec![0usize; ears];
    for _ in start..n {
        sizes[rng.gen_range(0..ears)] += 1;
    }
    let mut next = start;
    for inner in sizes {
        let a = rng.gen_range(0..next);
        let mut b = rng.gen_range(0..next);
        while inner == 0 && b == a {
            b = rng.gen_range(0..next);
        }
        let mut prev = a;
        for _ in 0..inner {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, b));
    }
    debug_assert_eq!((next, edges.len()), (n, m));
    let (g, _) = scramble(n, edges, rng);
    if !bridges(&g).is_empty() {
        return Err(GenError::NotAdmissible("ear construction produced a bridge".into()));
    }
    Ok(g)
}

/// Returns the graph and the vertices forced into U.
fn bridged_chain(k: usize, rng: &mut ChaCha8Rng) -> Result<(Multigraph, Vec<Vertex>), GenError> {
    if k == 0 {
        return Err(invalid("bridged chain needs at least one block"));
    }
    let mut edges = Vec::new();
    let mut blocks: Vec<Vec<Vertex>> = Vec::with_capacity(k);
    let mut n = 0;
    for _ in 0..k {
        let len = rng.gen_range(3..=7);
        let block: Vec<Vertex> = (n..n + len).collect();
        for i in 0..len {
            edges.push((block[i], block[(i + 1) % len]));
        }
        if len >= 4 && rng.gen_bool(0.5) {
            let i = rng.gen_range(0..len);
            let j = (i + rng.gen_range(2..len - 1)) % len;
            edges.push((block[i], block[j]));
        }
        n += len;
        blocks.push(block);
    }
    // Bridge i joins block i at `right[i]` to block i + 1 at `left[i + 1]`.
    let mut left = vec![None; k];
    let mut right = vec![None; k];
    for i in 0..k - 1 {
        let a = *blocks[i].choose(rng).unwrap();
        let b = *blocks[i + 1].choose(rng).unwrap();
        right[i] = Some(a);
        left[i + 1] = Some(b);
        edges.push((a, b));
    }
    let mut forced = Vec::new();
    if k > 1 {
        let pick = |block: &[Vertex], avoid: Option<Vertex>, rng: &mut ChaCha8Rng| {
            let choices: Vec<_> = block.iter().copied().filter(|&v| Some(v) != avoid).collect();
            *choices.choose(rng).unwrap()
        };
        forced.push(pick(&blocks[0], right[0], rng));
        forced.push(pick(&blocks[k - 1], left[k - 1], rng));
    }
    let (g, relabel) = scramble(n, edges, rng);
    Ok((g, forced.into_iter().map(|v| relabel[v]).collect()))
}

fn draw_boundary(
    n: usize,
    forced: &[Vertex],
    policy: BoundaryPolicy,
    rng: &mut ChaCha8Rng,
) -> Result<(BTreeSet<Vertex>, BTreeSet<Vertex>), GenError> {
    let mut u: BTreeSet<Vertex> = forced.iter().copied().collect();
    let (u_size, t_size) = match policy {
        BoundaryPolicy::Empty => return Ok((BTreeSet::new(), u)),
        BoundaryPolicy::Sized { u: us, t: ts } => {
            if us == 1 || us > n || us < u.len() || ts % 2 == 1 || ts > us {
                return Err(invalid(format!("cannot place |U| = {us}, |T| = {ts} on {n} vertices")));
            }
            (us, ts)
        }
        BoundaryPolicy::Random => {
            let sizes: Vec<usize> = (u.len()..=n).filter(|&s| s != 1).collect();
            let us = *sizes.choose(rng).expect("n itself is always available");
            let ts = 2 * rng.gen_range(0..=us / 2);
            (us, ts)
        }
    };
    let mut rest: Vec<Vertex> = (0..n).filter(|v| !u.contains(v)).collect();
    rest.shuffle(rng);
    u.extend(rest.into_iter().take(u_size - u.len()));
    let mut pool: Vec<Vertex> = u.iter().copied().collect();
    pool.shuffle(rng);
    let t = pool.into_iter().take(t_size).collect();
    Ok((t, u))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensusRow {
    pub graphs: usize,
    pub instances: usize,
    pub valid: usize,
}

/// Instance counts per `(vertices, edges)` over the small-instance enumeration.
pub fn census(max_v: usize, max_e: usize) -> BTreeMap<(usize, usize), CensusRow> {
    let mut table: BTreeMap<(usize, usize), CensusRow> = BTreeMap::new();
    for g in enumerate_small_graphs(max_v, max_e) {
        let row = table.entry((g.vertex_count(), g.edge_count())).or_default();
        row.graphs += 1;
        for (t, u) in boundary_pairs(g.vertex_count()) {
            row.instances += 1;
            if check_instance(&Instance::new(g.clone(), t, u)).is_valid() {
                row.valid += 1;
            }
        }
    }
    table
}

pub fn render_census(table: &BTreeMap<(usize, usize), CensusRow>) -> String {
    let mut out = String::from("n m graphs instances valid\n");
    for (&(n, m), row) in table {
        out.push_str(&format!("{n} {m} {} {} {}\n", row.graphs, row.instances, row.valid));
    }
    out
}
