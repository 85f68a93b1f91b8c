use super::{EdgeId, Multigraph};

const UNSEEN: usize = usize::MAX;

struct LowLink {
    bridges: Vec<EdgeId>,
    cut: Vec<bool>,
}

struct Frame {
    vertex: usize,
    parent_edge: Option<EdgeId>,
    next: usize,
}

/// One iterative depth-first search computing discovery times and low links. The parent
/// is skipped by edge id rather than by vertex, so parallel edges are handled correctly.
fn lowlink(g: &Multigraph) -> LowLink {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![UNSEEN; n];
    let mut cut = vec![false; n];
    let mut bridges = Vec::new();
    let mut clock = 0;
    let mut stack: Vec<Frame> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        let mut root_children = 0;
        stack.push(Frame { vertex: root, parent_edge: None, next: 0 });

        while let Some(frame) = stack.last_mut() {
            let v = frame.vertex;
            if let Some(&(e, w)) = adj[v].get(frame.next) {
                frame.next += 1;
                if Some(e) == frame.parent_edge {
                    continue;
                }
                if disc[w] == UNSEEN {
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push(Frame { vertex: w, parent_edge: Some(e), next: 0 });
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                let done = stack.pop().expect("frame exists");
                if let Some(parent) = stack.last() {
                    let u = parent.vertex;
                    low[u] = low[u].min(low[v]);
                    if low[v] > disc[u] {
                        bridges.push(done.parent_edge.expect("non-root frame has a parent edge"));
                    }
                    if u != root && low[v] >= disc[u] {
                        cut[u] = true;
                    }
                }
            }
        }
        if root_children >= 2 {
            cut[root] = true;
        }
    }
    bridges.sort_unstable();
    LowLink { bridges, cut }
}

/// Edges whose deletion increases the number of components, in ascending id order.
pub fn bridges(g: &Multigraph) -> Vec<EdgeId> {
    lowlink(g).bridges
}

/// Per-vertex flag: deleting the vertex increases the number of components.
pub fn cut_vertices(g: &Multigraph) -> Vec<bool> {
    lowlink(g).cut
}
