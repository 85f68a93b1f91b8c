//! Text formats.
//!
//! An instance document is line oriented:
//!
//! ```text
//! n 4
//! e 0 1
//! e 1 2
//! e 2 3
//! e 3 0
//! T
//! U 0 2
//! ```
//!
//! `n` comes first, then one `e tail head` line per edge in edge-id order, then the `T`
//! and `U` vertex lists (possibly empty). Blank lines and lines starting with `#` are
//! ignored. A solution document names the instance it answers by digest:
//!
//! ```text
//! instance_digest sha256:<hex of the canonical instance document>
//! phi2 0 0 0 0
//! phi3 1 1 1 1
//! z6 4 4 4 4
//! integer_flow 4 4 4 4
//! ```
//!
//! `z6` and `integer_flow` are optional.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::groupflow::{Residue, Solution, Z6};
use crate::hypothesis::Instance;
use crate::integerflow::IntegerFlow;
use crate::multigraph::{Multigraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("line {line}: vertex {vertex} out of range 0..{n}")]
    OutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: vertex {vertex} listed twice")]
    Duplicate { line: usize, vertex: usize },
    #[error("solution has {got} `{field}` values, instance has {expected} edges")]
    Length { field: &'static str, expected: usize, got: usize },
    #[error("solution answers instance {found}, not {expected}")]
    DigestMismatch { expected: String, found: String },
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed { line, msg: msg.into() }
}

/// `(line number, keyword, rest)` for every meaningful line.
fn records(doc: &str) -> impl Iterator<Item = (usize, &str, Vec<&str>)> {
    doc.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        let mut words = line.split_whitespace();
        let key = words.next()?;
        Some((i + 1, key, words.collect()))
    })
}

fn numbers<T: std::str::FromStr>(line: usize, words: &[&str]) -> Result<Vec<T>, ParseError> {
    words.iter().map(|w| w.parse().map_err(|_| malformed(line, format!("`{w}` is not a valid number")))).collect()
}

fn vertex_set(line: usize, words: &[&str], n: usize) -> Result<BTreeSet<Vertex>, ParseError> {
    let mut set = BTreeSet::new();
    for vertex in numbers::<usize>(line, words)? {
        if vertex >= n {
            return Err(ParseError::OutOfRange { line, vertex, n });
        }
        if !set.insert(vertex) {
            return Err(ParseError::Duplicate { line, vertex });
        }
    }
    Ok(set)
}

pub fn parse_instance(doc: &str) -> Result<Instance, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut t = None;
    let mut u = None;
    for (line, key, words) in records(doc) {
        match key {
            "n" => {
                if n.is_some() {
                    return Err(malformed(line, "`n` given twice"));
                }
                let [count] = numbers::<usize>(line, &words)?[..] else {
                    return Err(malformed(line, "`n` takes one number"));
                };
                n = Some(count);
            }
            "e" | "T" | "U" => {
                let n = n.ok_or_else(|| malformed(line, "`n` must come first"))?;
                match key {
                    "e" => {
                        if t.is_some() || u.is_some() {
                            return Err(malformed(line, "edges must precede T and U"));
                        }
                        let [a, b] = numbers::<usize>(line, &words)?[..] else {
                            return Err(malformed(line, "an edge has two endpoints"));
                        };
                        for vertex in [a, b] {
                            if vertex >= n {
                                return Err(ParseError::OutOfRange { line, vertex, n });
                            }
                        }
                        edges.push((a, b));
                    }
                    "T" if t.is_none() => t = Some(vertex_set(line, &words, n)?),
                    "U" if u.is_none() => u = Some(vertex_set(line, &words, n)?),
                    _ => return Err(malformed(line, format!("`{key}` given twice"))),
                }
            }
            other => return Err(malformed(line, format!("unknown keyword `{other}`"))),
        }
    }
    let n = n.ok_or(ParseError::Missing("n"))?;
    let graph = Multigraph::new(n, edges).expect("endpoints checked while parsing");
    Ok(Instance { graph, t: t.ok_or(ParseError::Missing("T"))?, u: u.ok_or(ParseError::Missing("U"))? })
}

fn push_list<T: std::fmt::Display>(out: &mut String, key: &str, items: impl IntoIterator<Item = T>) {
    out.push_str(key);
    for x in items {
        write!(out, " {x}").unwrap();
    }
    out.push('\n');
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = format!("n {}\n", inst.graph.vertex_count());
    for &(a, b) in inst.graph.edges() {
        writeln!(out, "e {a} {b}").unwrap();
    }
    push_list(&mut out, "T", &inst.t);
    push_list(&mut out, "U", &inst.u);
    out
}

/// `sha256:<hex>` of the canonical instance document.
pub fn instance_digest(inst: &Instance) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(emit_instance(inst).as_bytes())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub instance_digest: String,
    pub solution: Solution,
    pub z6: Option<Vec<Z6>>,
    pub integer_flow: Option<IntegerFlow>,
}

impl SolutionFile {
    pub fn new(inst: &Instance, solution: Solution) -> Self {
        Self { instance_digest: instance_digest(inst), solution, z6: None, integer_flow: None }
    }

    /// Lengths and digest against the instance this file claims to answer.
    pub fn check_against(&self, inst: &Instance) -> Result<(), ParseError> {
        let expected = instance_digest(inst);
        if self.instance_digest != expected {
            return Err(ParseError::DigestMismatch { expected, found: self.instance_digest.clone() });
        }
        let m = inst.graph.edge_count();
        let lens = [
            ("phi2", Some(self.solution.phi2.len())),
            ("phi3", Some(self.solution.phi3.len())),
            ("z6", self.z6.as_ref().map(Vec::len)),
            ("integer_flow", self.integer_flow.as_ref().map(|f| f.0.len())),
        ];
        for (field, got) in lens {
            if let Some(got) = got.filter(|&g| g != m) {
                return Err(ParseError::Length { field, expected: m, got });
            }
        }
        Ok(())
    }
}

fn residues<const M: u8>(line: usize, words: &[&str]) -> Result<Vec<Residue<M>>, ParseError> {
    numbers::<u8>(line, words)?
        .into_iter()
        .map(|x| Residue::from_canonical(x).ok_or_else(|| malformed(line, format!("{x} is not a residue mod {M}"))))
        .collect()
}

pub fn parse_solution(doc: &str) -> Result<SolutionFile, ParseError> {
    let mut digest = None;
    let mut phi2 = None;
    let mut phi3 = None;
    let mut z6 = None;
    let mut flow = None;
    for (line, key, words) in records(doc) {
        let twice = || malformed(line, format!("`{key}` given twice"));
        match key {
            "instance_digest" => {
                let [d] = words[..] else {
                    return Err(malformed(line, "`instance_digest` takes one digest"));
                };
                if digest.replace(d.to_string()).is_some() {
                    return Err(twice());
                }
            }
            "phi2" if phi2.is_none() => phi2 = Some(residues::<2>(line, &words)?),
            "phi3" if phi3.is_none() => phi3 = Some(residues::<3>(line, &words)?),
            "z6" if z6.is_none() => z6 = Some(residues::<6>(line, &words)?),
            "integer_flow" if flow.is_none() => flow = Some(IntegerFlow(numbers::<i32>(line, &words)?)),
            "phi2" | "phi3" | "z6" | "integer_flow" => return Err(twice()),
            other => return Err(malformed(line, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(SolutionFile {
        instance_digest: digest.ok_or(ParseError::Missing("instance_digest"))?,
        solution: Solution::new(phi2.ok_or(ParseError::Missing("phi2"))?, phi3.ok_or(ParseError::Missing("phi3"))?),
        z6,
        integer_flow: flow,
    })
}

pub fn emit_solution(file: &SolutionFile) -> String {
    let mut out = format!("instance_digest {}\n", file.instance_digest);
    push_list(&mut out, "phi2", &file.solution.phi2);
    push_list(&mut out, "phi3", &file.solution.phi3);
    if let Some(z6) = &file.z6 {
        push_list(&mut out, "z6", z6);
    }
    if let Some(f) = &file.integer_flow {
        push_list(&mut out, "integer_flow", &f.0);
    }
    out
}

/// Graphviz text. U vertices are double circles, T vertices are filled, and with a
/// solution each edge is labelled `(phi2,phi3)`.
pub fn to_dot(inst: &Instance, solution: Option<&Solution>) -> String {
    let mut out = String::from("digraph G {\n");
    for v in 0..inst.graph.vertex_count() {
        let mut attrs = Vec::new();
        if inst.u.contains(&v) {
            attrs.push("shape=doublecircle");
        }
        if inst.t.contains(&v) {
            attrs.push("style=filled");
        }
        if attrs.is_empty() {
            writeln!(out, "  {v};").unwrap();
        } else {
            writeln!(out, "  {v} [{}];", attrs.join(" ")).unwrap();
        }
    }
    for (e, &(a, b)) in inst.graph.edges().iter().enumerate() {
        match solution {
            Some(s) => writeln!(out, "  {a} -> {b} [label=\"({},{})\"];", s.phi2[e], s.phi3[e]).unwrap(),
            None => writeln!(out, "  {a} -> {b};").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}
