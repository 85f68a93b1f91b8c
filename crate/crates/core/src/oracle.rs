//! Exhaustive reference search and the small-instance census it runs against.

use thiserror::Error;

use crate::groupflow::{verify_solution, Solution, Z2, Z3};
use crate::hypothesis::{check_instance, Instance};
use crate::multigraph::{Multigraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_edges: usize,
    pub max_nodes_expanded: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_edges: 8, max_nodes_expanded: 50_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {edges} edges, budget allows {max}")]
    TooManyEdges { edges: usize, max: usize },
    #[error("search expanded more than {0} nodes")]
    NodeBudgetExceeded(u64),
    #[error("oracle produced a labeling its own checker rejects")]
    SelfCheckFailed,
}

/// Nonzero pairs in search order.
const PAIRS: [(u8, u8); 5] = [(0, 1), (0, 2), (1, 0), (1, 1), (1, 2)];

struct Search<'a> {
    g: &'a Multigraph,
    t: Vec<bool>,
    u: Vec<bool>,
    /// Highest edge id at each vertex; `None` for isolated vertices.
    last: Vec<Option<usize>>,
    b2: Vec<Z2>,
    b3: Vec<Z3>,
    values: Vec<(u8, u8)>,
    expanded: u64,
    limit: u64,
}

impl Search<'_> {
    fn settled(&self, v: Vertex) -> bool {
        self.b2[v].is_zero() != self.t[v] && self.b3[v].is_zero() != self.u[v]
    }

    fn apply(&mut self, e: usize, (a, b): (u8, u8), sign: i64) {
        let (tail, head) = self.g.edge(e);
        let a = Z2::new(sign * i64::from(a));
        let b = Z3::new(sign * i64::from(b));
        self.b2[tail] += a;
        self.b2[head] -= a;
        self.b3[tail] += b;
        self.b3[head] -= b;
    }

    fn run(&mut self, e: usize) -> Result<bool, OracleError> {
        if e == self.g.edge_count() {
            return Ok(true);
        }
        let (tail, head) = self.g.edge(e);
        for pair in PAIRS {
            self.expanded += 1;
            if self.expanded > self.limit {
                return Err(OracleError::NodeBudgetExceeded(self.limit));
            }
            self.apply(e, pair, 1);
            let ok = [tail, head].into_iter().all(|v| self.last[v] != Some(e) || self.settled(v));
            if ok {
                self.values.push(pair);
                if self.run(e + 1)? {
                    return Ok(true);
                }
                self.values.pop();
            }
            self.apply(e, pair, -1);
        }
        Ok(false)
    }
}

/// Depth-first search over the five nonzero pairs per edge, in edge order. A vertex is
/// checked against T and U as soon as its last incident edge is assigned. Returns the
/// lexicographically first solution, or `None` when there is none.
pub fn brute_force_solve(inst: &Instance, budget: SearchBudget) -> Result<Option<Solution>, OracleError> {
    let g = &inst.graph;
    if g.edge_count() > budget.max_edges {
        return Err(OracleError::TooManyEdges { edges: g.edge_count(), max: budget.max_edges });
    }
    let n = g.vertex_count();
    let (t, u) = inst.masks();
    let mut last = vec![None; n];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        last[a] = Some(e);
        last[b] = Some(e);
    }
    // Isolated vertices have zero boundary no matter what.
    if (0..n).any(|v| last[v].is_none() && (t[v] || u[v])) {
        return Ok(None);
    }
    let mut search = Search {
        g,
        t,
        u,
        last,
        b2: vec![Z2::ZERO; n],
        b3: vec![Z3::ZERO; n],
        values: Vec::with_capacity(g.edge_count()),
        expanded: 0,
        limit: budget.max_nodes_expanded,
    };
    if !search.run(0)? {
        return Ok(None);
    }
    let s = Solution::new(
        search.values.iter().map(|&(a, _)| Z2::new(a.into())).collect(),
        search.values.iter().map(|&(_, b)| Z3::new(b.into())).collect(),
    );
    if !verify_solution(g, &inst.t, &inst.u, &s).is_empty() {
        return Err(OracleError::SelfCheckFailed);
    }
    Ok(Some(s))
}

#[derive(Debug, Clone)]
pub struct SmallInstance {
    pub instance: Instance,
    pub valid: bool,
}

/// Every connected multigraph on `1..=max_v` labelled vertices with at most `max_e`
/// edges, one per multiset of undirected edges (each stored as `(min, max)`, sorted).
pub fn enumerate_small_graphs(max_v: usize, max_e: usize) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 1..=max_v {
        let slots: Vec<(Vertex, Vertex)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let mut chosen = Vec::new();
        multisets(&slots, 0, max_e, &mut chosen, &mut |edges| {
            let g = Multigraph::new(n, edges.to_vec()).expect("slots are in range");
            if g.is_connected() {
                out.push(g);
            }
        });
    }
    out
}

fn multisets(
    slots: &[(Vertex, Vertex)],
    from: usize,
    left: usize,
    chosen: &mut Vec<(Vertex, Vertex)>,
    visit: &mut impl FnMut(&[(Vertex, Vertex)]),
) {
    visit(chosen);
    if left == 0 {
        return;
    }
    for i in from..slots.len() {
        chosen.push(slots[i]);
        multisets(slots, i, left - 1, chosen, visit);
        chosen.pop();
    }
}

/// All `(T, U)` with `T ⊆ U ⊆ V`, in increasing bitmask order of `U` then `T`.
pub fn boundary_pairs(n: usize) -> Vec<(Vec<Vertex>, Vec<Vertex>)> {
    let members = |mask: u32| (0..n).filter(move |&v| (mask >> v) & 1 == 1).collect::<Vec<_>>();
    let mut out = Vec::new();
    for u in 0u32..(1 << n) {
        // submasks of u in increasing order
        let mut subs: Vec<u32> = Vec::new();
        let mut t = u;
        loop {
            subs.push(t);
            if t == 0 {
                break;
            }
            t = (t - 1) & u;
        }
        subs.sort_unstable();
        for t in subs {
            out.push((members(t), members(u)));
        }
    }
    out
}

/// Every small graph crossed with every `(T, U)` with `T ⊆ U`, each tagged with its
/// hypothesis verdict.
pub fn enumerate_small_instances(max_v: usize, max_e: usize) -> impl Iterator<Item = SmallInstance> {
    enumerate_small_graphs(max_v, max_e).into_iter().flat_map(|g| {
        boundary_pairs(g.vertex_count()).into_iter().map(move |(t, u)| {
            let instance = Instance::new(g.clone(), t, u);
            let valid = check_instance(&instance).is_valid();
            SmallInstance { instance, valid }
        })
    })
}
