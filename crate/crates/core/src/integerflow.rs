//! Lifting a nowhere-zero `Z6`-flow to an integer flow with values in `±{1, ..., 5}`.
//!
//! This is the classical constructive argument that a nowhere-zero `Z_k`-flow yields an
//! integer nowhere-zero `k`-flow, specialised to `k = 6`: start from representatives in
//! `1..=5`, so every vertex boundary is a multiple of 6, and repeatedly move 6 units along a
//! path of edges that can absorb the change without leaving the allowed range.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::groupflow::{boundary, Z6};
use crate::multigraph::{EdgeId, Multigraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerFlow(pub Vec<i32>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegerFlowError {
    #[error("input is not a nowhere-zero Z6-flow: {0}")]
    InvalidInput(String),
    #[error("no pushable path from vertex {0}; the input cannot have been a Z6-flow")]
    Stuck(Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntViolation {
    LengthMismatch { edges: usize, values: usize },
    Zero { edge: EdgeId },
    OutOfRange { edge: EdgeId, value: i32 },
    Boundary { vertex: Vertex, value: i64 },
}

impl fmt::Display for IntViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IntViolation::LengthMismatch { edges, values } => write!(f, "{values} values for {edges} edges"),
            IntViolation::Zero { edge } => write!(f, "edge {edge} carries 0"),
            IntViolation::OutOfRange { edge, value } => write!(f, "edge {edge} carries {value}, outside ±1..5"),
            IntViolation::Boundary { vertex, value } => write!(f, "vertex {vertex} has boundary {value}"),
        }
    }
}

fn integer_boundary(g: &Multigraph, f: &[i32]) -> Vec<i64> {
    let mut b = vec![0i64; g.vertex_count()];
    for (&(tail, head), &x) in g.edges().iter().zip(f) {
        b[tail] += i64::from(x);
        b[head] -= i64::from(x);
    }
    b
}

pub fn verify_integer_flow(g: &Multigraph, f: &IntegerFlow) -> Vec<IntViolation> {
    let f = &f.0;
    if f.len() != g.edge_count() {
        return vec![IntViolation::LengthMismatch { edges: g.edge_count(), values: f.len() }];
    }
    let mut out = Vec::new();
    for (edge, &value) in f.iter().enumerate() {
        if value == 0 {
            out.push(IntViolation::Zero { edge });
        } else if !(-5..=5).contains(&value) {
            out.push(IntViolation::OutOfRange { edge, value });
        }
    }
    for (vertex, value) in integer_boundary(g, f).into_iter().enumerate() {
        if value != 0 {
            out.push(IntViolation::Boundary { vertex, value });
        }
    }
    out
}

/// The flow together with how much work the correction phase did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    pub flow: IntegerFlow,
    /// Sum over vertices of `|boundary|` right after choosing representatives.
    pub initial_imbalance: i64,
    pub pushes: usize,
}

pub fn to_integer_flow(g: &Multigraph, z6: &[Z6]) -> Result<IntegerFlow, IntegerFlowError> {
    to_integer_flow_detailed(g, z6).map(|l| l.flow)
}

pub fn to_integer_flow_detailed(g: &Multigraph, z6: &[Z6]) -> Result<Lifting, IntegerFlowError> {
    let b = boundary(g, z6).map_err(|e| IntegerFlowError::InvalidInput(e.to_string()))?;
    if let Some(e) = z6.iter().position(|x| x.is_zero()) {
        return Err(IntegerFlowError::InvalidInput(format!("edge {e} is zero")));
    }
    if let Some(v) = b.support().first() {
        return Err(IntegerFlowError::InvalidInput(format!("boundary at vertex {v} is nonzero")));
    }

    let mut f: Vec<i32> = z6.iter().map(|x| i32::from(x.value())).collect();
    let mut bd = integer_boundary(g, &f);
    debug_assert!(bd.iter().all(|x| x % 6 == 0));
    let initial_imbalance: i64 = bd.iter().map(|x| x.abs()).sum();
    let adj = g.adjacency();
    let mut pushes = 0;

    while let Some(source) = (0..g.vertex_count()).find(|&v| bd[v] > 0) {
        // Breadth-first over pushable steps x -> y: forward edges carrying a positive
        // value (it drops by 6) or backward edges carrying a negative one (it rises by 6).
        let mut via: Vec<Option<(EdgeId, Vertex)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        let mut sink = None;
        while let Some(x) = queue.pop_front() {
            if bd[x] < 0 {
                sink = Some(x);
                break;
            }
            for &(e, y) in &adj[x] {
                let pushable = if g.edge(e).0 == x { f[e] > 0 } else { f[e] < 0 };
                if pushable && !seen[y] {
                    seen[y] = true;
                    via[y] = Some((e, x));
                    queue.push_back(y);
                }
            }
        }
        let sink = sink.ok_or(IntegerFlowError::Stuck(source))?;
        let mut y = sink;
        while let Some((e, x)) = via[y] {
            f[e] += if g.edge(e).0 == x { -6 } else { 6 };
            y = x;
        }
        bd[source] -= 6;
        bd[sink] += 6;
        pushes += 1;
    }
    debug_assert_eq!(integer_boundary(g, &f), bd);
    Ok(Lifting { flow: IntegerFlow(f), initial_imbalance, pushes })
}
