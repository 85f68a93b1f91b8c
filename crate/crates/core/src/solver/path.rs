//! Anchored paths: a path `P` with both ends in U such that the ends stay together in one
//! component `H` of `G - E(P)`, every other component avoids U, and no interior vertex of
//! `P` is in U.

use super::{broken, SolveError};
use crate::groupflow::{boundary, Solution, Z2, Z3};
use crate::multigraph::{two_disjoint_paths, two_paths_to_set, EdgeId, Multigraph, Path, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    pub path: Path,
    /// Vertices of the component of `G - E(P)` holding both ends, ascending.
    pub h_component: Vec<Vertex>,
}

impl PathWitness {
    /// Recomputes every property of the witness from scratch.
    pub fn check(&self, g: &Multigraph, u: &[bool]) -> Result<(), String> {
        let p = &self.path;
        if !p.is_valid_in(g) {
            return Err("not a path of the graph".into());
        }
        if p.is_empty() {
            return Err("path is trivial".into());
        }
        let (a, b) = (p.start(), p.end());
        if !u[a] || !u[b] {
            return Err(format!("path end outside U: {a}, {b}"));
        }
        if let Some(x) = p.interior().iter().find(|&&x| u[x]) {
            return Err(format!("interior vertex {x} is in U"));
        }
        let mut removed = vec![false; g.edge_count()];
        for &e in &p.edges {
            removed[e] = true;
        }
        let comps = g.components_avoiding(&removed);
        let h = comps.id[a];
        if comps.id[b] != h {
            return Err("ends lie in different components of G - E(P)".into());
        }
        if comps.members(h) != self.h_component {
            return Err("h_component is not the component of the ends".into());
        }
        if let Some(x) = (0..g.vertex_count()).find(|&x| u[x] && comps.id[x] != h) {
            return Err(format!("U vertex {x} lies outside H"));
        }
        Ok(())
    }
}

/// Start from one of two disjoint paths between the two lowest U vertices and improve
/// until the path is anchored. Each improvement strictly grows the edge set of `H`:
///
/// * a U vertex `x` off the path in another component `H'` reaches the path by two fan
///   paths inside `H'`; the path is rerouted along the first fan path, and the second one
///   plus the abandoned path segment join `H`;
/// * a U vertex inside the path truncates the path there, and the cut-off segment joins
///   `H`.
pub fn find_anchored_path(g: &Multigraph, u: &[bool]) -> Result<PathWitness, SolveError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut in_u = (0..n).filter(|&v| u[v]);
    let (Some(u1), Some(u2)) = (in_u.next(), in_u.next()) else {
        return Err(broken("anchored path: fewer than two U vertices"));
    };
    let (mut p, _) = two_disjoint_paths(g, u1, u2).map_err(|e| broken(format!("anchored path: {e}")))?;
    let mut h_edges_before: Option<usize> = None;

    for _ in 0..=m {
        let mut removed = vec![false; m];
        for &e in &p.edges {
            removed[e] = true;
        }
        let comps = g.components_avoiding(&removed);
        let h = comps.id[p.start()];
        if comps.id[p.end()] != h {
            return Err(broken("anchored path: ends separated"));
        }
        let h_edges = (0..m).filter(|&e| !removed[e] && comps.id[g.edge(e).0] == h).count();
        if h_edges_before.is_some_and(|before| h_edges <= before) {
            return Err(broken("anchored path: improvement did not grow H"));
        }
        h_edges_before = Some(h_edges);
        let mut on_path = vec![false; n];
        for &x in &p.vertices {
            on_path[x] = true;
        }

        if let Some(x) = (0..n).find(|&x| u[x] && comps.id[x] != h && !on_path[x]) {
            let c = comps.id[x];
            let members = comps.members(c);
            let edges: Vec<EdgeId> = (0..m).filter(|&e| !removed[e] && comps.id[g.edge(e).0] == c).collect();
            let side = g.subgraph(&members, &edges);
            let targets: Vec<Vertex> = (0..members.len()).filter(|&i| on_path[members[i]]).collect();
            let local_x = members.binary_search(&x).expect("x is a member");
            let (q1, q2) =
                two_paths_to_set(&side.graph, local_x, &targets).map_err(|e| broken(format!("anchored path: {e}")))?;
            let q1 = q1.map(&side.vertices, &side.edges);
            let q2 = q2.map(&side.vertices, &side.edges);
            let i1 = p.position(q1.end()).expect("fan ends on the path");
            let i2 = p.position(q2.end()).expect("fan ends on the path");
            let rest = if i1 < i2 { p.segment(i1, 0) } else { p.segment(i1, p.len()) };
            p = q1.concat(&rest);
            continue;
        }

        if p.interior().iter().any(|&x| u[x]) {
            let q = if p.start() <= p.end() { p.clone() } else { p.reversed() };
            let j = (1..q.len()).find(|&j| u[q.vertices[j]]).expect("interior U vertex exists");
            p = q.segment(0, j);
            continue;
        }

        let witness = PathWitness { path: p, h_component: comps.members(h) };
        witness.check(g, u).map_err(|e| broken(format!("anchored path: {e}")))?;
        return Ok(witness);
    }
    Err(broken("anchored path: improvement loop did not terminate"))
}

/// Label the path edges of `partial`, which already solves every component of
/// `G - E(P)` with the adjusted sets and holds zeros on `P`.
///
/// `phi2` is 1 along the path. `phi3` is fixed greedily from the first edge (seeded at 0)
/// so that every interior vertex ends with zero boundary, then shifted by the lowest
/// constant that leaves both ends nonzero. Returns the labeling and the shift used.
pub(super) fn extend_over_path(g: &Multigraph, partial: &Solution, p: &Path) -> Result<(Solution, Z3), SolveError> {
    let k = p.len();
    if k == 0 {
        return Err(broken("extend: trivial path"));
    }
    let b3 = boundary(g, &partial.phi3).map_err(|e| broken(e.to_string()))?;
    let mut along = vec![Z3::ZERO; k];
    for i in 1..k {
        along[i] = along[i - 1] - b3.at(p.vertices[i]);
    }
    let start = b3.at(p.start()) + along[0];
    let end = b3.at(p.end()) - along[k - 1];
    let good: Vec<Z3> = Z3::all().filter(|&shift| !(start + shift).is_zero() && !(end - shift).is_zero()).collect();
    let Some(&shift) = good.first() else {
        return Err(broken("extend: no shift leaves both ends nonzero"));
    };
    let mut s = partial.clone();
    for (i, &e) in p.edges.iter().enumerate() {
        let forward = g.edge(e).0 == p.vertices[i];
        s.set(e, (Z2::ONE, (along[i] + shift).signed(forward)));
    }
    Ok((s, shift))
}
