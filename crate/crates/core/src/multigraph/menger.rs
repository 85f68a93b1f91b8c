//! Two internally vertex-disjoint paths via unit-capacity maximum flow on the
//! vertex-split network.

use std::collections::VecDeque;

use super::{EdgeId, GraphError, Multigraph, Path, Vertex};

struct Arc {
    to: usize,
    cap: u32,
    /// Original edge and direction `(edge, from, to)` for edge arcs.
    origin: Option<(EdgeId, Vertex, Vertex)>,
}

struct Network {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self { arcs: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cap: u32, origin: Option<(EdgeId, Vertex, Vertex)>) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap, origin });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0, origin: None });
    }

    /// One breadth-first augmentation of a single unit; `false` when no path remains.
    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let mut via = vec![usize::MAX; self.out.len()];
        let mut queue = VecDeque::from([source]);
        let mut reached = vec![false; self.out.len()];
        reached[source] = true;
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for &a in &self.out[x] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && !reached[arc.to] {
                    reached[arc.to] = true;
                    via[arc.to] = a;
                    queue.push_back(arc.to);
                }
            }
        }
        if !reached[sink] {
            return false;
        }
        let mut x = sink;
        while x != source {
            let a = via[x];
            self.arcs[a].cap -= 1;
            self.arcs[a ^ 1].cap += 1;
            x = self.arcs[a ^ 1].to;
        }
        true
    }

    /// Flow carried by an arc (only meaningful for forward arcs).
    fn flow(&self, a: usize) -> u32 {
        self.arcs[a ^ 1].cap
    }
}

/// Up to two paths from `source` to vertices marked in `targets`, sharing only `source`
/// and with no internal vertex in `targets`. Each target absorbs at most `target_cap`
/// paths.
fn fan(g: &Multigraph, source: Vertex, targets: &[bool], target_cap: u32) -> Vec<Path> {
    let n = g.vertex_count();
    let v_in = |v: Vertex| 2 * v;
    let v_out = |v: Vertex| 2 * v + 1;
    let sink = 2 * n;
    let mut net = Network::new(2 * n + 1);
    for v in 0..n {
        if targets[v] {
            net.add(v_in(v), sink, target_cap, None);
        } else if v != source {
            net.add(v_in(v), v_out(v), 1, None);
        }
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if a != b {
            net.add(v_out(a), v_in(b), 1, Some((e, a, b)));
            net.add(v_out(b), v_in(a), 1, Some((e, b, a)));
        }
    }
    let mut value = 0;
    while value < 2 && net.augment(v_out(source), sink) {
        value += 1;
    }

    // Net flow per edge, then read the paths off from the source.
    let mut forward = vec![0i32; g.edge_count()];
    for (a, arc) in net.arcs.iter().enumerate() {
        if let Some((e, from, _)) = arc.origin {
            let f = net.flow(a) as i32;
            if from == g.edge(e).0 {
                forward[e] += f;
            } else {
                forward[e] -= f;
            }
        }
    }
    let mut leaving: Vec<Vec<(EdgeId, Vertex)>> = vec![Vec::new(); n];
    for (e, &f) in forward.iter().enumerate() {
        let (a, b) = g.edge(e);
        match f.signum() {
            1 => leaving[a].push((e, b)),
            -1 => leaving[b].push((e, a)),
            _ => {}
        }
    }
    let starts = std::mem::take(&mut leaving[source]);
    starts
        .into_iter()
        .map(|(e, w)| {
            let mut path = Path { vertices: vec![source, w], edges: vec![e] };
            let mut x = w;
            while !targets[x] {
                let (e, y) = leaving[x][0];
                path.vertices.push(y);
                path.edges.push(e);
                x = y;
            }
            path
        })
        .collect()
}

/// Two `s`-`t` paths that share only their ends.
pub fn two_disjoint_paths(g: &Multigraph, s: Vertex, t: Vertex) -> Result<(Path, Path), GraphError> {
    let n = g.vertex_count();
    if s >= n || t >= n || s == t {
        return Err(GraphError::Structural(format!("invalid terminals {s}, {t}")));
    }
    let mut targets = vec![false; n];
    targets[t] = true;
    let mut paths = fan(g, s, &targets, 2);
    if paths.len() < 2 {
        return Err(GraphError::Structural(format!("no two internally disjoint paths between {s} and {t}")));
    }
    let second = paths.pop().unwrap();
    let first = paths.pop().unwrap();
    Ok((first, second))
}

/// Two paths from `u` to distinct vertices of `set`, sharing only `u`, with no internal
/// vertex in `set`.
pub fn two_paths_to_set(g: &Multigraph, u: Vertex, set: &[Vertex]) -> Result<(Path, Path), GraphError> {
    let n = g.vertex_count();
    let mut targets = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(GraphError::Structural(format!("target {v} outside graph")));
        }
        targets[v] = true;
    }
    if u >= n || targets[u] {
        return Err(GraphError::Structural(format!("source {u} must lie outside the target set")));
    }
    let mut paths = fan(g, u, &targets, 1);
    if paths.len() < 2 {
        return Err(GraphError::Structural(format!("no two disjoint paths from {u} to the target set")));
    }
    let second = paths.pop().unwrap();
    let first = paths.pop().unwrap();
    Ok((first, second))
}
