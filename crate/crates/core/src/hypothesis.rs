//! Admissibility of an instance `(G, T, U)`.
//!
//! The instance must be connected, with `T ⊆ U ⊆ V`, `|T|` even and `|U| != 1`, and every
//! nonempty proper vertex set avoiding `U` must have at least two edges leaving it. On a
//! connected graph the last condition fails exactly when some bridge has a side with no
//! vertex of `U`, so it is decided from the bridges.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::multigraph::{bridges, EdgeId, Multigraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Multigraph,
    /// Prescribed support of the `Z2` boundary.
    pub t: BTreeSet<Vertex>,
    /// Prescribed support of the `Z3` boundary.
    pub u: BTreeSet<Vertex>,
}

impl Instance {
    pub fn new(graph: Multigraph, t: impl IntoIterator<Item = Vertex>, u: impl IntoIterator<Item = Vertex>) -> Self {
        Self { graph, t: t.into_iter().collect(), u: u.into_iter().collect() }
    }

    /// T and U as vertex masks; out-of-range entries are dropped.
    pub fn masks(&self) -> (Vec<bool>, Vec<bool>) {
        (to_mask(&self.t, self.graph.vertex_count()), to_mask(&self.u, self.graph.vertex_count()))
    }
}

pub(crate) fn to_mask(set: &BTreeSet<Vertex>, n: usize) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set.iter().filter(|&&v| v < n) {
        mask[v] = true;
    }
    mask
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A component not containing vertex 0.
    Disconnected {
        component: Vec<Vertex>,
    },
    OutOfRange {
        vertex: Vertex,
    },
    NotInU {
        vertex: Vertex,
    },
    OddT {
        size: usize,
    },
    SingletonU {
        vertex: Vertex,
    },
    /// A component of a disconnected graph without any vertex of U.
    UFreeComponent {
        component: Vec<Vertex>,
    },
    /// A bridge and the side of it that contains no vertex of U.
    Bridge {
        edge: EdgeId,
        side: Vec<Vertex>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Disconnected { component } => write!(f, "component {component:?} is unreachable from vertex 0"),
            Witness::OutOfRange { vertex } => write!(f, "vertex {vertex} is not in the graph"),
            Witness::NotInU { vertex } => write!(f, "vertex {vertex} is in T but not in U"),
            Witness::OddT { size } => write!(f, "|T| = {size} is odd"),
            Witness::SingletonU { vertex } => write!(f, "U = {{{vertex}}} has exactly one vertex"),
            Witness::UFreeComponent { component } => write!(f, "component {component:?} has no vertex of U"),
            Witness::Bridge { edge, side } => write!(f, "bridge {edge} has side {side:?} with no vertex of U"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub connected: bool,
    pub containment_ok: bool,
    pub parity_ok: bool,
    pub u_size_ok: bool,
    pub cut_ok: bool,
    /// The first failure found, checked in field order.
    pub witness: Option<Witness>,
}

impl HypothesisReport {
    pub fn is_valid(&self) -> bool {
        self.connected && self.containment_ok && self.parity_ok && self.u_size_ok && self.cut_ok
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None if self.is_valid() => write!(f, "valid"),
            None => write!(f, "invalid"),
            Some(w) => write!(f, "invalid: {w}"),
        }
    }
}

pub fn check_instance(inst: &Instance) -> HypothesisReport {
    let n = inst.graph.vertex_count();
    let mut witness = None;
    let mut note = |w: Witness| {
        if witness.is_none() {
            witness = Some(w);
        }
    };

    let comps = inst.graph.components();
    let connected = comps.count <= 1;
    if !connected {
        note(Witness::Disconnected { component: comps.members(1) });
    }

    let mut containment_ok = true;
    if let Some(&vertex) = inst.t.union(&inst.u).find(|&&v| v >= n) {
        containment_ok = false;
        note(Witness::OutOfRange { vertex });
    }
    if let Some(&vertex) = inst.t.difference(&inst.u).next() {
        containment_ok = false;
        note(Witness::NotInU { vertex });
    }

    let parity_ok = inst.t.len().is_multiple_of(2);
    if !parity_ok {
        note(Witness::OddT { size: inst.t.len() });
    }
    let u_size_ok = inst.u.len() != 1;
    if !u_size_ok {
        note(Witness::SingletonU { vertex: *inst.u.first().unwrap() });
    }

    let u_mask = to_mask(&inst.u, n);
    let cut = cut_condition(&inst.graph, &u_mask);
    let cut_ok = cut.is_none();
    if let Some(w) = cut {
        note(w);
    }

    HypothesisReport { connected, containment_ok, parity_ok, u_size_ok, cut_ok, witness }
}

/// Mask-based form of the full hypothesis test, used on every recursive sub-instance.
pub(crate) fn masks_valid(g: &Multigraph, t: &[bool], u: &[bool]) -> Result<(), String> {
    if !g.is_connected() {
        return Err("sub-instance is disconnected".into());
    }
    if let Some(v) = (0..t.len()).find(|&v| t[v] && !u[v]) {
        return Err(format!("vertex {v} is in T but not in U"));
    }
    if t.iter().filter(|&&x| x).count() % 2 == 1 {
        return Err("|T| is odd".into());
    }
    if u.iter().filter(|&&x| x).count() == 1 {
        return Err("|U| = 1".into());
    }
    match cut_condition(g, u) {
        None => Ok(()),
        Some(w) => Err(w.to_string()),
    }
}

/// `None` when every nonempty proper U-free vertex set has at least two boundary edges;
/// otherwise a witness.
fn cut_condition(g: &Multigraph, u: &[bool]) -> Option<Witness> {
    let n = g.vertex_count();
    let comps = g.components();
    if comps.count > 1 {
        // Any U-free component is itself a violating set with no boundary edges.
        if let Some(c) = (0..comps.count).find(|&c| !(0..n).any(|v| comps.id[v] == c && u[v])) {
            return Some(Witness::UFreeComponent { component: comps.members(c) });
        }
    }

    let bridge_list = bridges(g);
    if bridge_list.is_empty() {
        return None;
    }
    let mut is_bridge = vec![false; g.edge_count()];
    for &e in &bridge_list {
        is_bridge[e] = true;
    }
    // Two-edge-connected pieces, then the forest they form with the bridges.
    let pieces = g.components_avoiding(&is_bridge);
    let mut u_count = vec![0usize; pieces.count];
    for v in (0..n).filter(|&v| u[v]) {
        u_count[pieces.id[v]] += 1;
    }
    let mut tree = vec![Vec::new(); pieces.count];
    for &e in &bridge_list {
        let (a, b) = g.edge(e);
        let (pa, pb) = (pieces.id[a], pieces.id[b]);
        tree[pa].push((e, pb));
        tree[pb].push((e, pa));
    }
    // Root each tree at its lowest piece and accumulate U counts over subtrees.
    let mut parent_edge = vec![None; pieces.count];
    let mut seen = vec![false; pieces.count];
    let mut order = Vec::with_capacity(pieces.count);
    let mut tree_total = vec![0usize; pieces.count];
    let mut root_of = vec![0usize; pieces.count];
    for root in 0..pieces.count {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut i = start;
        while i < order.len() {
            let p = order[i];
            root_of[p] = root;
            for &(e, q) in &tree[p] {
                if !seen[q] {
                    seen[q] = true;
                    parent_edge[q] = Some((e, p));
                    order.push(q);
                }
            }
            i += 1;
        }
        tree_total[root] = order[start..].iter().map(|&p| u_count[p]).sum();
    }
    let mut subtree = u_count;
    let mut below_edge = vec![None; g.edge_count()];
    for &p in order.iter().rev() {
        if let Some((e, parent)) = parent_edge[p] {
            below_edge[e] = Some(p);
            subtree[parent] += subtree[p];
        }
    }
    for &e in &bridge_list {
        let child = below_edge[e].expect("every bridge is a tree edge");
        let inside = subtree[child];
        let outside = tree_total[root_of[child]] - inside;
        if inside > 0 && outside > 0 {
            continue;
        }
        // Report the U-free side; if both are, the side holding the tail.
        let (tail, head) = g.edge(e);
        let mut removed = vec![false; g.edge_count()];
        removed[e] = true;
        let split = g.components_avoiding(&removed);
        let tail_free = !(0..n).any(|v| split.id[v] == split.id[tail] && u[v]);
        let anchor = if tail_free { tail } else { head };
        return Some(Witness::Bridge { edge: e, side: split.members(split.id[anchor]) });
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("exhaustive cut enumeration supports at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
}

pub const BRUTE_FORCE_MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCheck {
    pub holds: bool,
    /// First failing set in increasing bitmask order.
    pub witness: Option<Vec<Vertex>>,
}

/// Enumerate every nonempty proper vertex set avoiding `u` and count its boundary edges.
pub fn cut_condition_bruteforce(g: &Multigraph, u: &BTreeSet<Vertex>) -> Result<CutCheck, BruteForceError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(BruteForceError::TooLarge { n, max: BRUTE_FORCE_MAX_VERTICES });
    }
    let u_bits: u32 = u.iter().filter(|&&v| v < n).fold(0, |acc, &v| acc | 1 << v);
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    for set in 1..full {
        if set & u_bits != 0 {
            continue;
        }
        let crossing = g.edges().iter().filter(|&&(a, b)| ((set >> a) & 1) != ((set >> b) & 1)).count();
        if crossing < 2 {
            let witness = (0..n).filter(|&v| (set >> v) & 1 == 1).collect();
            return Ok(CutCheck { holds: false, witness: Some(witness) });
        }
    }
    Ok(CutCheck { holds: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Multigraph {
        Multigraph::new(n, edges.to_vec()).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    fn petersen() -> Multigraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        g(10, &e)
    }

    fn joined_triangles() -> Multigraph {
        g(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
    }

    #[test]
    fn petersen_is_admissible_with_empty_sets() {
        let r = check_instance(&Instance::new(petersen(), [], []));
        assert!(r.is_valid(), "{r:?}");
        assert_eq!(r.witness, None);
    }

    #[test]
    fn bridge_with_u_free_side() {
        let r = check_instance(&Instance::new(joined_triangles(), [], []));
        assert!(!r.cut_ok);
        assert!(r.connected && r.parity_ok && r.u_size_ok && r.containment_ok);
        match r.witness {
            Some(Witness::Bridge { edge: 3, side }) => assert_eq!(side, vec![0, 1, 2]),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn bridge_straddled_by_u() {
        let inst = Instance::new(joined_triangles(), [], [0, 5]);
        assert!(check_instance(&inst).is_valid());
        assert!(cut_condition_bruteforce(&inst.graph, &inst.u).unwrap().holds);
    }

    #[test]
    fn other_hypotheses() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let r = check_instance(&Instance::new(c4.clone(), [0], [0, 1]));
        assert!(!r.parity_ok);
        assert_eq!(r.witness, Some(Witness::OddT { size: 1 }));
        let r = check_instance(&Instance::new(c4.clone(), [], [2]));
        assert!(!r.u_size_ok);
        let r = check_instance(&Instance::new(c4.clone(), [0, 3], [0, 1]));
        assert_eq!(r.witness, Some(Witness::NotInU { vertex: 3 }));
        let r = check_instance(&Instance::new(c4, [], [0, 9]));
        assert!(!r.containment_ok);
        let split = g(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]);
        let r = check_instance(&Instance::new(split, [], []));
        assert!(!r.connected && !r.cut_ok);
    }

    #[test]
    fn brute_force_examples() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(cut_condition_bruteforce(&c4, &set(&[])).unwrap().holds);

        let p3 = g(3, &[(0, 1), (1, 2)]);
        let r = cut_condition_bruteforce(&p3, &set(&[])).unwrap();
        assert_eq!(r.witness, Some(vec![0]));

        let bowtie = g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert!(cut_condition_bruteforce(&bowtie, &set(&[0])).unwrap().holds);

        assert!(matches!(
            cut_condition_bruteforce(&Multigraph::empty(21), &set(&[])),
            Err(BruteForceError::TooLarge { .. })
        ));
    }

    #[test]
    fn orientation_does_not_matter() {
        let inst = Instance::new(joined_triangles(), [0, 5], [0, 5]);
        let flipped = Instance::new(inst.graph.reverse_edge(3).reverse_edge(0), [0, 5], [0, 5]);
        assert_eq!(check_instance(&inst), check_instance(&flipped));
    }
}
