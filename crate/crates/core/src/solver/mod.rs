//! Recursive construction of `(phi2, phi3)` by induction on the number of edges.
//!
//! Every call strips loops, then handles at most two vertices directly, and otherwise
//! reduces to strictly smaller instances: contracting past a degree-two vertex outside U,
//! splitting at a cut vertex, deleting an edge when U is empty, or removing an anchored path
//! whose ends lie in U and re-labelling it. Every fact the reduction relies on is
//! checked at runtime; a failure surfaces as [`SolveError::InternalInvariantBroken`].

mod base;
mod path;

pub use path::{find_anchored_path, PathWitness};

use std::fmt;

use thiserror::Error;

use crate::groupflow::{boundary, verify_solution, Solution, Z2, Z3};
use crate::hypothesis::{check_instance, masks_valid, HypothesisReport, Instance};
use crate::multigraph::{EdgeId, Multigraph, Separation, Subgraph, Vertex};

#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("instance violates the hypotheses: {0}")]
    HypothesisViolated(HypothesisReport),
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
}

pub(crate) fn broken(msg: impl Into<String>) -> SolveError {
    SolveError::InternalInvariantBroken(msg.into())
}

/// The reduction applied at one recursion node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Loop,
    Base,
    Deg2,
    SepA,
    SepB,
    EmptyU,
    Path,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Loop => "loop",
            Rule::Base => "base",
            Rule::Deg2 => "deg2",
            Rule::SepA => "sep-a",
            Rule::SepB => "sep-b",
            Rule::EmptyU => "empty-u",
            Rule::Path => "path",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub parent: Option<usize>,
    pub depth: usize,
    pub rule: Rule,
    pub vertices: usize,
    pub edges: usize,
    pub t_size: usize,
    pub u_size: usize,
}

/// How many times each runtime check ran. Every check that fails aborts the solve, so on a
/// successful run these are counts of checks that passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InvariantStats {
    /// Child edge count below parent edge count.
    pub measure: usize,
    /// Child instance satisfies the hypotheses.
    pub subinstance: usize,
    /// Node output verified against its own T and U.
    pub node_output: usize,
    pub witness: usize,
    pub parity: usize,
    pub sign: usize,
    pub t_shift: usize,
    pub empty_u: usize,
}

impl InvariantStats {
    pub fn absorb(&mut self, other: &InvariantStats) {
        self.measure += other.measure;
        self.subinstance += other.subinstance;
        self.node_output += other.node_output;
        self.witness += other.witness;
        self.parity += other.parity;
        self.sign += other.sign;
        self.t_shift += other.t_shift;
        self.empty_u += other.empty_u;
    }
}

#[derive(Debug, Clone, Default)]
pub struct RecursionTrace {
    /// Preorder: a parent always precedes its children.
    pub entries: Vec<TraceEntry>,
    pub stats: InvariantStats,
}

impl RecursionTrace {
    pub fn root_rule(&self) -> Option<Rule> {
        self.entries.first().map(|e| e.rule)
    }

    pub fn max_depth(&self) -> usize {
        self.entries.iter().map(|e| e.depth).max().unwrap_or(0)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{:indent$}#{i} {} n={} m={} |T|={} |U|={}\n",
                "",
                e.rule,
                e.vertices,
                e.edges,
                e.t_size,
                e.u_size,
                indent = 2 * e.depth
            ));
        }
        out
    }
}

pub fn solve(inst: &Instance) -> Result<Solution, SolveError> {
    solve_with_trace(inst).map(|(s, _)| s)
}

pub fn solve_with_trace(inst: &Instance) -> Result<(Solution, RecursionTrace), SolveError> {
    let report = check_instance(inst);
    if !report.is_valid() {
        return Err(SolveError::HypothesisViolated(report));
    }
    let (t, u) = inst.masks();
    let mut ctx = Ctx::default();
    let s = ctx.solve_node(&inst.graph, &t, &u, None)?;
    let violations = verify_solution(&inst.graph, &inst.t, &inst.u, &s);
    if let Some(v) = violations.first() {
        return Err(broken(format!("final labeling rejected: {v}")));
    }
    Ok((s, RecursionTrace { entries: ctx.trace, stats: ctx.stats }))
}

/// Loops get `(1, 1)`; the rest of the graph is returned as a loopless residual.
pub fn assign_loops(g: &Multigraph) -> (Solution, Subgraph) {
    let loops: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| g.is_loop(e)).collect();
    let mut partial = Solution::with_len(g.edge_count());
    for &e in &loops {
        partial.set(e, (Z2::ONE, Z3::ONE));
    }
    (partial, g.delete_edges(&loops))
}

fn count(mask: &[bool]) -> usize {
    mask.iter().filter(|&&x| x).count()
}

/// Copy child values onto their parent edges, negating phi3 when `negate` is set.
fn lift(target: &mut Solution, child: &Solution, edge_map: &[EdgeId], negate: bool) {
    for (i, &e) in edge_map.iter().enumerate() {
        target.phi2[e] = child.phi2[i];
        target.phi3[e] = if negate { -child.phi3[i] } else { child.phi3[i] };
    }
}

#[derive(Default)]
struct Ctx {
    trace: Vec<TraceEntry>,
    stats: InvariantStats,
}

impl Ctx {
    fn solve_node(
        &mut self,
        g: &Multigraph,
        t: &[bool],
        u: &[bool],
        parent: Option<usize>,
    ) -> Result<Solution, SolveError> {
        let depth = match parent {
            Some(p) => {
                let parent_edges = self.trace[p].edges;
                self.stats.measure += 1;
                if g.edge_count() >= parent_edges {
                    return Err(broken(format!("child has {} edges, parent {}", g.edge_count(), parent_edges)));
                }
                masks_valid(g, t, u)
                    .map_err(|m| broken(format!("sub-instance below {} is not admissible: {m}", self.trace[p].rule)))?;
                self.stats.subinstance += 1;
                self.trace[p].depth + 1
            }
            None => 0,
        };
        let id = self.trace.len();
        self.trace.push(TraceEntry {
            parent,
            depth,
            rule: Rule::Base,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            t_size: count(t),
            u_size: count(u),
        });

        let s = self.dispatch(g, t, u, id)?;
        self.check_node_output(g, t, u, &s, id)?;
        Ok(s)
    }

    fn dispatch(&mut self, g: &Multigraph, t: &[bool], u: &[bool], id: usize) -> Result<Solution, SolveError> {
        let n = g.vertex_count();
        if g.has_loops() {
            self.trace[id].rule = Rule::Loop;
            let (mut s, rest) = assign_loops(g);
            let sub = self.solve_node(&rest.graph, t, u, Some(id))?;
            lift(&mut s, &sub, &rest.edges, false);
            return Ok(s);
        }
        if n <= 2 {
            self.trace[id].rule = Rule::Base;
            return base::solve_base(g, t, u);
        }
        let degrees = g.degrees();
        if let Some(v) = (0..n).find(|&v| !u[v] && degrees[v] == 2) {
            self.trace[id].rule = Rule::Deg2;
            return self.reduce_degree_two(g, t, u, id, v);
        }
        if let Some(sep) = g.proper_one_separation() {
            return self.split_at_cut_vertex(g, t, u, id, sep);
        }
        if !u.iter().any(|&x| x) {
            self.trace[id].rule = Rule::EmptyU;
            return self.solve_empty_u(g, u, id);
        }
        self.trace[id].rule = Rule::Path;
        self.solve_by_path(g, t, u, id)
    }

    fn check_node_output(
        &mut self,
        g: &Multigraph,
        t: &[bool],
        u: &[bool],
        s: &Solution,
        id: usize,
    ) -> Result<(), SolveError> {
        let rule = self.trace[id].rule;
        if s.len() != g.edge_count() {
            return Err(broken(format!("{rule}: labeling length {} for {} edges", s.len(), g.edge_count())));
        }
        if let Some(e) = (0..s.len()).find(|&e| s.phi2[e].is_zero() && s.phi3[e].is_zero()) {
            return Err(broken(format!("{rule}: edge {e} received (0, 0)")));
        }
        let b2 = boundary(g, &s.phi2).map_err(|e| broken(e.to_string()))?;
        let b3 = boundary(g, &s.phi3).map_err(|e| broken(e.to_string()))?;
        for v in 0..g.vertex_count() {
            if b2.at(v).is_zero() == t[v] || b3.at(v).is_zero() == u[v] {
                return Err(broken(format!("{rule}: wrong boundary at vertex {v}")));
            }
        }
        self.stats.node_output += 1;
        Ok(())
    }

    /// `v` lies outside U and meets exactly two edges `e < f`. Contract `e`, solve, then
    /// give `e` whatever cancels `f` at `v`.
    fn reduce_degree_two(
        &mut self,
        g: &Multigraph,
        t: &[bool],
        u: &[bool],
        id: usize,
        v: Vertex,
    ) -> Result<Solution, SolveError> {
        let incident: Vec<EdgeId> = (0..g.edge_count())
            .filter(|&e| {
                let (a, b) = g.edge(e);
                a == v || b == v
            })
            .collect();
        let &[e, f] = incident.as_slice() else {
            return Err(broken(format!("deg2: vertex {v} has {} incident edges", incident.len())));
        };
        let c = g.contract_edge(e).map_err(|err| broken(err.to_string()))?;
        let mut child_t = vec![false; c.graph.vertex_count()];
        let mut child_u = vec![false; c.graph.vertex_count()];
        for x in 0..g.vertex_count() {
            child_t[c.vertex_map[x]] |= t[x];
            child_u[c.vertex_map[x]] |= u[x];
        }
        let sub = self.solve_node(&c.graph, &child_t, &child_u, Some(id))?;
        let mut s = Solution::with_len(g.edge_count());
        lift(&mut s, &sub, &c.edge_map, false);

        let (phi2_f, phi3_f) = s.pair(f);
        let f_at_v = phi3_f.signed(g.edge(f).0 == v);
        s.set(e, (phi2_f, (-f_at_v).signed(g.edge(e).0 == v)));
        Ok(s)
    }

    fn split_at_cut_vertex(
        &mut self,
        g: &Multigraph,
        t: &[bool],
        u: &[bool],
        id: usize,
        sep: Separation,
    ) -> Result<Solution, SolveError> {
        let v = sep.cut_vertex;
        let meets_u_off_v = |edges: &[EdgeId]| g.spanned_vertices(edges).iter().any(|&x| x != v && u[x]);
        let (in1, in2) = (meets_u_off_v(&sep.side1), meets_u_off_v(&sep.side2));
        if in1 && in2 {
            self.trace[id].rule = Rule::SepB;
            return self.split_both_sides(g, t, u, id, &sep);
        }
        self.trace[id].rule = Rule::SepA;
        // U lies within one side; that side keeps T and U, the other gets a flow.
        let sep = if in2 { sep.swapped() } else { sep };
        let side1 = g.subgraph(&g.spanned_vertices(&sep.side1), &sep.side1);
        let side2 = g.subgraph(&g.spanned_vertices(&sep.side2), &sep.side2);
        let mut s = Solution::with_len(g.edge_count());
        let sub1 = self.solve_node(&side1.graph, &side1.restrict_mask(t), &side1.restrict_mask(u), Some(id))?;
        lift(&mut s, &sub1, &side1.edges, false);
        let empty = vec![false; side2.graph.vertex_count()];
        let sub2 = self.solve_node(&side2.graph, &empty, &empty, Some(id))?;
        lift(&mut s, &sub2, &side2.edges, false);
        Ok(s)
    }

    /// U meets both sides away from the cut vertex `v`: both sides are solved with `v`
    /// added to U and `v` added to T exactly when needed for even parity, and the second
    /// side is negated if that is what puts the phi3 boundary at `v` right.
    fn split_both_sides(
        &mut self,
        g: &Multigraph,
        t: &[bool],
        u: &[bool],
        id: usize,
        sep: &Separation,
    ) -> Result<Solution, SolveError> {
        let v = sep.cut_vertex;
        let sides = [&sep.side1, &sep.side2].map(|edges| g.subgraph(&g.spanned_vertices(edges), edges));
        let mut children = Vec::with_capacity(2);
        let mut v_in_t = [false; 2];
        for (i, side) in sides.iter().enumerate() {
            let local_v = side.vertices.binary_search(&v).map_err(|_| broken("sep-b: cut vertex missing"))?;
            let mut side_t = side.restrict_mask(t);
            let mut side_u = side.restrict_mask(u);
            let others = side.vertices.iter().filter(|&&x| x != v && t[x]).count();
            side_t[local_v] = others % 2 == 1;
            side_u[local_v] = true;
            v_in_t[i] = side_t[local_v];
            if count(&side_t) % 2 == 1 {
                return Err(broken("sep-b: side T has odd size"));
            }
            children.push((side_t, side_u, local_v));
        }
        if (v_in_t[0] ^ v_in_t[1]) != t[v] {
            return Err(broken("sep-b: parity identity at the cut vertex fails"));
        }
        self.stats.parity += 1;

        let mut solved = Vec::with_capacity(2);
        for (side, (side_t, side_u, local_v)) in sides.iter().zip(&children) {
            let sub = self.solve_node(&side.graph, side_t, side_u, Some(id))?;
            let at_v = boundary(&side.graph, &sub.phi3).map_err(|e| broken(e.to_string()))?.at(*local_v);
            if at_v.is_zero() {
                return Err(broken("sep-b: side boundary at the cut vertex is zero"));
            }
            solved.push((sub, at_v));
        }
        let (d1, d2) = (solved[0].1, solved[1].1);
        let (plus, minus) = (d1 + d2, d1 - d2);
        if plus.is_zero() == minus.is_zero() {
            return Err(broken("sep-b: not exactly one sign cancels at the cut vertex"));
        }
        self.stats.sign += 1;
        let keep_sign = if u[v] { !plus.is_zero() } else { plus.is_zero() };

        let mut s = Solution::with_len(g.edge_count());
        lift(&mut s, &solved[0].0, &sides[0].edges, false);
        lift(&mut s, &solved[1].0, &sides[1].edges, !keep_sign);
        Ok(s)
    }

    /// U is empty and the graph is 2-connected: drop the first edge `(a, b)`, solve with
    /// U = {a, b}, and close the flow with the unique phi3 value on that edge.
    fn solve_empty_u(&mut self, g: &Multigraph, u: &[bool], id: usize) -> Result<Solution, SolveError> {
        let e = (0..g.edge_count()).find(|&e| !g.is_loop(e)).ok_or_else(|| broken("empty-u: no edge to delete"))?;
        let (a, b) = g.edge(e);
        let rest = g.delete_edges(&[e]);
        let child_t = vec![false; g.vertex_count()];
        let mut child_u = u.to_vec();
        child_u[a] = true;
        child_u[b] = true;
        let sub = self.solve_node(&rest.graph, &child_t, &child_u, Some(id))?;
        let mut s = Solution::with_len(g.edge_count());
        lift(&mut s, &sub, &rest.edges, false);

        let b3 = boundary(&rest.graph, &sub.phi3).map_err(|e| broken(e.to_string()))?;
        let (da, db) = (b3.at(a), b3.at(b));
        if da.is_zero() || db != -da {
            return Err(broken("empty-u: end boundaries are not opposite nonzero values"));
        }
        let closing: Vec<Z3> = Z3::all().filter(|&x| (da + x).is_zero() && (db - x).is_zero()).collect();
        let &[value] = closing.as_slice() else {
            return Err(broken("empty-u: closing value is not unique"));
        };
        self.stats.empty_u += 1;
        s.set(e, (Z2::ZERO, value));
        Ok(s)
    }

    /// Remove an anchored path `P`, solve every component of `G - E(P)` with
    /// `T' = T xor {ends}` and `U' = U + V(P)`, then label `P`.
    fn solve_by_path(&mut self, g: &Multigraph, t: &[bool], u: &[bool], id: usize) -> Result<Solution, SolveError> {
        let witness = find_anchored_path(g, u)?;
        self.stats.witness += 1;
        let p = &witness.path;
        let (end1, end2) = (p.start(), p.end());
        let n = g.vertex_count();

        let mut removed = vec![false; g.edge_count()];
        for &e in &p.edges {
            removed[e] = true;
        }
        let comps = g.components_avoiding(&removed);
        let mut t2 = t.to_vec();
        t2[end1] ^= true;
        t2[end2] ^= true;
        let mut u2 = u.to_vec();
        for &x in &p.vertices {
            u2[x] = true;
        }
        let h = comps.id[end1];
        if (0..n).any(|x| t2[x] && comps.id[x] != h) {
            return Err(broken("path: T' leaves the component of the path ends"));
        }
        if count(&t2) % 2 == 1 {
            return Err(broken("path: |T'| is odd"));
        }
        let mut component_edges = vec![Vec::new(); comps.count];
        for e in (0..g.edge_count()).filter(|&e| !removed[e]) {
            component_edges[comps.id[g.edge(e).0]].push(e);
        }

        let mut partial = Solution::with_len(g.edge_count());
        for (c, members) in comps.groups().into_iter().enumerate() {
            let on_path = members.iter().filter(|&&x| p.position(x).is_some()).count();
            if c != h && on_path < 2 {
                return Err(broken("path: a side component meets the path only once"));
            }
            let sub_g = g.subgraph(&members, &component_edges[c]);
            let sub = self.solve_node(&sub_g.graph, &sub_g.restrict_mask(&t2), &sub_g.restrict_mask(&u2), Some(id))?;
            lift(&mut partial, &sub, &sub_g.edges, false);
        }
        let (s, _) = path::extend_over_path(g, &partial, p)?;
        self.stats.t_shift += 1;
        Ok(s)
    }
}
