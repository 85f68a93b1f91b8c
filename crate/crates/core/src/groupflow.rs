//! Cyclic-group edge labelings: residues, boundaries, supports, and the solution checker.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::multigraph::{EdgeId, Multigraph, Vertex};

/// An element of `Z/MZ`, stored as its least nonnegative residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Residue<const M: u8>(u8);

pub type Z2 = Residue<2>;
pub type Z3 = Residue<3>;
pub type Z6 = Residue<6>;

impl<const M: u8> Residue<M> {
    pub const ZERO: Self = Residue(0);
    pub const ONE: Self = Residue(1 % M);

    pub fn new(value: i64) -> Self {
        Residue(value.rem_euclid(i64::from(M)) as u8)
    }

    /// `None` unless `0 <= value < M`.
    pub fn from_canonical(value: u8) -> Option<Self> {
        (value < M).then_some(Residue(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..M).map(Residue)
    }

    /// Multiply by a `±1` orientation sign.
    pub fn signed(self, forward: bool) -> Self {
        if forward {
            self
        } else {
            -self
        }
    }
}

impl<const M: u8> Add for Residue<M> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Residue((self.0 + rhs.0) % M)
    }
}

impl<const M: u8> Sub for Residue<M> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Residue((self.0 + M - rhs.0) % M)
    }
}

impl<const M: u8> Neg for Residue<M> {
    type Output = Self;
    fn neg(self) -> Self {
        Residue((M - self.0) % M)
    }
}

impl<const M: u8> AddAssign for Residue<M> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const M: u8> SubAssign for Residue<M> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const M: u8> fmt::Display for Residue<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("labeling has {got} values but the graph has {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
}

/// Per-vertex boundary values of a labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMap<const M: u8>(pub Vec<Residue<M>>);

impl<const M: u8> BoundaryMap<M> {
    pub fn at(&self, v: Vertex) -> Residue<M> {
        self.0[v]
    }

    /// Vertices with a nonzero value.
    pub fn support(&self) -> BTreeSet<Vertex> {
        self.0.iter().enumerate().filter(|(_, b)| !b.is_zero()).map(|(v, _)| v).collect()
    }

    pub fn total(&self) -> Residue<M> {
        self.0.iter().fold(Residue::ZERO, |acc, &b| acc + b)
    }
}

/// Outgoing minus incoming value at every vertex; loops contribute nothing.
pub fn boundary<const M: u8>(g: &Multigraph, values: &[Residue<M>]) -> Result<BoundaryMap<M>, FlowError> {
    if values.len() != g.edge_count() {
        return Err(FlowError::LengthMismatch { expected: g.edge_count(), got: values.len() });
    }
    let mut b = vec![Residue::ZERO; g.vertex_count()];
    for (&(tail, head), &x) in g.edges().iter().zip(values) {
        b[tail] += x;
        b[head] -= x;
    }
    let map = BoundaryMap(b);
    debug_assert!(map.total().is_zero());
    Ok(map)
}

/// A pair of labelings `(phi2, phi3)` with values in `Z2` and `Z3`, relative to the stored
/// orientation of one specific graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Solution {
    pub phi2: Vec<Z2>,
    pub phi3: Vec<Z3>,
}

impl Solution {
    pub fn new(phi2: Vec<Z2>, phi3: Vec<Z3>) -> Self {
        Self { phi2, phi3 }
    }

    pub fn with_len(m: usize) -> Self {
        Self { phi2: vec![Z2::ZERO; m], phi3: vec![Z3::ZERO; m] }
    }

    pub fn len(&self) -> usize {
        self.phi2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi2.is_empty()
    }

    pub fn pair(&self, e: EdgeId) -> (Z2, Z3) {
        (self.phi2[e], self.phi3[e])
    }

    pub fn set(&mut self, e: EdgeId, (a, b): (Z2, Z3)) {
        self.phi2[e] = a;
        self.phi3[e] = b;
    }

    /// The labeling seen after reversing edge `e`: `phi2` is self-inverse and stays, `phi3`
    /// is negated.
    pub fn negate_edge(&self, e: EdgeId) -> Solution {
        let mut s = self.clone();
        s.phi3[e] = -s.phi3[e];
        s
    }
}

/// Reverse every edge in `edges` and transport the labeling along, leaving boundaries and
/// the nowhere-zero property untouched.
pub fn reorient(g: &Multigraph, s: &Solution, edges: &[EdgeId]) -> (Multigraph, Solution) {
    let mut g = g.clone();
    let mut s = s.clone();
    for &e in edges {
        g = g.reverse_edge(e);
        s = s.negate_edge(e);
    }
    (g, s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LengthMismatch {
        edges: usize,
        phi2: usize,
        phi3: usize,
    },
    VertexOutOfRange {
        vertex: Vertex,
    },
    ZeroPair {
        edge: EdgeId,
    },
    /// `in_t` records whether the vertex belongs to T; the phi2 boundary disagrees.
    Phi2Support {
        vertex: Vertex,
        in_t: bool,
    },
    Phi3Support {
        vertex: Vertex,
        in_u: bool,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::LengthMismatch { edges, phi2, phi3 } => {
                write!(f, "graph has {edges} edges but phi2 has {phi2} and phi3 has {phi3} values")
            }
            Violation::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} is not in the graph"),
            Violation::ZeroPair { edge } => write!(f, "edge {edge}: (phi2, phi3) = (0, 0)"),
            Violation::Phi2Support { vertex, in_t } => {
                let (want, got) = if in_t { ("nonzero", "zero") } else { ("zero", "nonzero") };
                write!(f, "vertex {vertex}: phi2 boundary should be {want} but is {got}")
            }
            Violation::Phi3Support { vertex, in_u } => {
                let (want, got) = if in_u { ("nonzero", "zero") } else { ("zero", "nonzero") };
                write!(f, "vertex {vertex}: phi3 boundary should be {want} but is {got}")
            }
        }
    }
}

/// Checks that `s` is nowhere-zero, that the phi2 boundary is supported exactly on `t` and
/// the phi3 boundary exactly on `u`. An empty list means the solution is valid.
pub fn verify_solution(g: &Multigraph, t: &BTreeSet<Vertex>, u: &BTreeSet<Vertex>, s: &Solution) -> Vec<Violation> {
    let m = g.edge_count();
    if s.phi2.len() != m || s.phi3.len() != m {
        return vec![Violation::LengthMismatch { edges: m, phi2: s.phi2.len(), phi3: s.phi3.len() }];
    }
    let n = g.vertex_count();
    let mut out: Vec<Violation> =
        t.union(u).filter(|&&v| v >= n).map(|&vertex| Violation::VertexOutOfRange { vertex }).collect();
    out.extend((0..m).filter(|&e| s.phi2[e].is_zero() && s.phi3[e].is_zero()).map(|edge| Violation::ZeroPair { edge }));
    let b2 = boundary(g, &s.phi2).expect("length checked");
    let b3 = boundary(g, &s.phi3).expect("length checked");
    for vertex in 0..n {
        let in_t = t.contains(&vertex);
        if b2.at(vertex).is_zero() == in_t {
            out.push(Violation::Phi2Support { vertex, in_t });
        }
    }
    for vertex in 0..n {
        let in_u = u.contains(&vertex);
        if b3.at(vertex).is_zero() == in_u {
            out.push(Violation::Phi3Support { vertex, in_u });
        }
    }
    out
}

/// `Z2 x Z3 -> Z6`, `(a, b) -> 3a + 4b`.
pub fn crt(a: Z2, b: Z3) -> Z6 {
    Z6::new(3 * i64::from(a.value()) + 4 * i64::from(b.value()))
}

/// Inverse of [`crt`]: the residues mod 2 and mod 3.
pub fn crt_split(x: Z6) -> (Z2, Z3) {
    (Z2::new(i64::from(x.value())), Z3::new(i64::from(x.value())))
}

pub fn crt_pair(s: &Solution) -> Vec<Z6> {
    s.phi2.iter().zip(&s.phi3).map(|(&a, &b)| crt(a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2(v: &[u8]) -> Vec<Z2> {
        v.iter().map(|&x| Z2::from_canonical(x).unwrap()).collect()
    }

    fn z3(v: &[u8]) -> Vec<Z3> {
        v.iter().map(|&x| Z3::from_canonical(x).unwrap()).collect()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn residue_arithmetic() {
        assert_eq!(Z3::new(-1).value(), 2);
        assert_eq!((-Z3::new(1)).value(), 2);
        assert_eq!((Z3::new(2) + Z3::new(2)).value(), 1);
        assert_eq!((Z2::new(1) - Z2::new(1)), Z2::ZERO);
        assert!(Z6::from_canonical(6).is_none());
    }

    #[test]
    fn boundary_examples() {
        let tri = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(boundary(&tri, &z3(&[1, 1, 1])).unwrap().support().is_empty());

        let edge = Multigraph::new(2, vec![(0, 1)]).unwrap();
        let b = boundary(&edge, &z3(&[1])).unwrap();
        assert_eq!((b.at(0).value(), b.at(1).value()), (1, 2));
        assert_eq!(b.support(), set(&[0, 1]));

        let lp = Multigraph::new(1, vec![(0, 0)]).unwrap();
        for x in Z3::all() {
            assert!(boundary(&lp, &[x]).unwrap().at(0).is_zero());
        }

        assert!(matches!(boundary(&tri, &z3(&[1])), Err(FlowError::LengthMismatch { expected: 3, got: 1 })));
    }

    #[test]
    fn support_of_maps() {
        assert!(BoundaryMap::<3>(vec![Z3::ZERO; 4]).support().is_empty());
        assert_eq!(BoundaryMap(z3(&[1, 2, 0])).support(), set(&[0, 1]));
    }

    #[test]
    fn verifier_examples() {
        let c4 = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let ok = Solution::new(z2(&[0, 0, 0, 0]), z3(&[1, 1, 1, 1]));
        assert!(verify_solution(&c4, &set(&[]), &set(&[]), &ok).is_empty());

        let bad = Solution::new(z2(&[0, 0, 0, 0]), z3(&[1, 1, 0, 1]));
        let v = verify_solution(&c4, &set(&[]), &set(&[]), &bad);
        assert!(v.contains(&Violation::ZeroPair { edge: 2 }));
        assert!(v.iter().any(|x| matches!(x, Violation::Phi3Support { in_u: false, .. })));

        let edge = Multigraph::new(2, vec![(0, 1)]).unwrap();
        let s = Solution::new(z2(&[0]), z3(&[1]));
        assert!(verify_solution(&edge, &set(&[]), &set(&[0, 1]), &s).is_empty());

        let short = Solution::new(z2(&[0]), z3(&[1, 1]));
        assert!(matches!(verify_solution(&c4, &set(&[]), &set(&[]), &short)[..], [Violation::LengthMismatch { .. }]));
        assert!(verify_solution(&edge, &set(&[]), &set(&[0, 1, 7]), &s)
            .contains(&Violation::VertexOutOfRange { vertex: 7 }));
    }

    #[test]
    fn reversing_an_edge_keeps_the_boundary() {
        let edge = Multigraph::new(2, vec![(0, 1)]).unwrap();
        let s = Solution::new(z2(&[1]), z3(&[1]));
        let (h, r) = reorient(&edge, &s, &[0]);
        assert_eq!(h.edge(0), (1, 0));
        assert_eq!(r.phi3[0].value(), 2);
        assert_eq!(r.phi2[0], s.phi2[0]);
        assert_eq!(boundary(&h, &r.phi3).unwrap(), boundary(&edge, &s.phi3).unwrap());

        let zero = Solution::new(z2(&[1]), z3(&[0]));
        assert_eq!(zero.negate_edge(0).phi3[0], Z3::ZERO);
    }

    #[test]
    fn crt_table_is_a_bijection() {
        let mut seen = BTreeSet::new();
        for a in Z2::all() {
            for b in Z3::all() {
                let x = crt(a, b);
                assert_eq!(crt_split(x), (a, b));
                assert_eq!(x.is_zero(), a.is_zero() && b.is_zero());
                seen.insert(x);
            }
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(crt(Z2::ONE, Z3::ZERO).value(), 3);
        assert_eq!(crt(Z2::ZERO, Z3::ONE).value(), 4);
        assert_eq!(crt(Z2::ONE, Z3::new(2)).value(), 5);
    }
}
