//! Independent brute-force combinatorial counters.
//!
//! These are ground-truth oracles for the classical problems that Holant
//! instances encode — vertex covers, Eulerian orientations, matchings. They
//! are deliberately written against plain graphs with direct subset
//! enumeration and integer bookkeeping, without touching the signature-grid
//! machinery, so that agreement between the two code paths is meaningful
//! evidence rather than a tautology. Weighted variants promote to [`Cyclo`]
//! only at the final histogram-to-polynomial step.
//!
//! Conventions for self-loops (the source problems are loop-free, so these
//! are ours): a loop adds 2 to its vertex's degree; for Eulerian
//! orientations a loop is simultaneously in and out, hence balance-neutral
//! (each loop doubles the count); a loop can never belong to a matching.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::cyclo::Cyclo;

/// Cap on subset enumeration over vertices.
pub const MAX_VERTICES: usize = 20;
/// Cap on subset enumeration over edges.
pub const MAX_EDGES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooManyVertices { vertices: usize },
    TooManyEdges { edges: usize },
    /// Eulerian orientations need every degree even.
    OddDegree { vertex: usize, degree: usize },
    BadEdge { u: usize, v: usize },
    Parse { line: usize, message: String },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyVertices { vertices } => {
                write!(f, "{} vertices exceed the bound {}", vertices, MAX_VERTICES)
            }
            OracleError::TooManyEdges { edges } => {
                write!(f, "{} edges exceed the bound {}", edges, MAX_EDGES)
            }
            OracleError::OddDegree { vertex, degree } => {
                write!(f, "vertex {} has odd degree {}", vertex, degree)
            }
            OracleError::BadEdge { u, v } => write!(f, "edge {}–{} out of range", u, v),
            OracleError::Parse { line, message } => {
                write!(f, "graph parse error on line {}: {}", line, message)
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// An undirected multigraph, possibly with loops. Vertices are `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl PlainGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<PlainGraph, OracleError> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(OracleError::BadEdge { u, v });
        }
        Ok(PlainGraph { n, edges })
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> PlainGraph {
        let edges = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        PlainGraph { n, edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degrees, with each loop contributing 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Parse the line-oriented text format: `n <count>` once, then one
    /// `e <u> <v>` line per edge (0-indexed). Blank lines and `#` comments
    /// are skipped.
    pub fn parse(text: &str) -> Result<PlainGraph, OracleError> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| OracleError::Parse { line: idx + 1, message };
            let mut words = line.split_whitespace();
            match words.next() {
                Some("n") => {
                    let count = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| err("expected `n <count>`".to_string()))?;
                    if n.replace(count).is_some() {
                        return Err(err("duplicate `n` line".to_string()));
                    }
                }
                Some("e") => {
                    let mut num = || {
                        words
                            .next()
                            .and_then(|w| w.parse().ok())
                            .ok_or_else(|| err("expected `e <u> <v>`".to_string()))
                    };
                    edges.push((num()?, num()?));
                }
                Some(other) => return Err(err(format!("unknown directive `{}`", other))),
                None => unreachable!("blank lines are skipped"),
            }
            if words.next().is_some() {
                return Err(err("trailing tokens".to_string()));
            }
        }
        let n = n.ok_or(OracleError::Parse {
            line: 0,
            message: "missing `n <count>` line".to_string(),
        })?;
        PlainGraph::new(n, edges)
    }

    /// Inverse of [`PlainGraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {} {}\n", u, v));
        }
        out
    }
}

/// Evaluate a count histogram `hist[k]` as `Σ hist[k]·λ^k`.
fn histogram_poly(hist: &[u64], lambda: &Cyclo) -> Cyclo {
    let mut acc = Cyclo::zero();
    for (k, &count) in hist.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let term = &Cyclo::from_int(count as i64) * &lambda.pow(k as u64);
        acc = &acc + &term;
    }
    acc
}

/// Weighted vertex-cover count: Σ over vertex covers `C` of `λ^{e(C)}`,
/// where `e(C)` is the number of edges with both endpoints in `C` (a loop at
/// a covered vertex counts). λ = 1 gives the plain count.
pub fn count_vertex_covers(g: &PlainGraph, lambda: &Cyclo) -> Result<Cyclo, OracleError> {
    if g.n > MAX_VERTICES {
        return Err(OracleError::TooManyVertices { vertices: g.n });
    }
    let mut hist = vec![0u64; g.edges.len() + 1];
    for subset in 0u32..(1u32 << g.n) {
        let covered = |v: usize| (subset >> v) & 1 == 1;
        let mut both = 0usize;
        let mut is_cover = true;
        for &(u, v) in &g.edges {
            match (covered(u), covered(v)) {
                (true, true) => both += 1,
                (false, false) => {
                    is_cover = false;
                    break;
                }
                _ => {}
            }
        }
        if is_cover {
            hist[both] += 1;
        }
    }
    Ok(histogram_poly(&hist, lambda))
}

/// The number of orientations with in-degree = out-degree everywhere.
pub fn count_eulerian_orientations(g: &PlainGraph) -> Result<u64, OracleError> {
    for (v, d) in g.degrees().into_iter().enumerate() {
        if d % 2 != 0 {
            return Err(OracleError::OddDegree { vertex: v, degree: d });
        }
    }
    let m = g.edges.len();
    if m > MAX_EDGES {
        return Err(OracleError::TooManyEdges { edges: m });
    }
    let mut count = 0u64;
    let mut net = vec![0i32; g.n];
    for mask in 0u64..(1u64 << m) {
        net.iter_mut().for_each(|x| *x = 0);
        for (i, &(u, v)) in g.edges.iter().enumerate() {
            // Loops add +1 and −1 to the same vertex: balance-neutral.
            if (mask >> i) & 1 == 0 {
                net[u] += 1;
                net[v] -= 1;
            } else {
                net[u] -= 1;
                net[v] += 1;
            }
        }
        if net.iter().all(|&x| x == 0) {
            count += 1;
        }
    }
    Ok(count)
}

/// Weighted matching count: Σ over matchings `M` of `λ^{v(M)}`, where
/// `v(M)` is the number of unmatched vertices. λ = 0 counts perfect
/// matchings; λ = 1 counts all matchings.
pub fn count_matchings(g: &PlainGraph, lambda: &Cyclo) -> Result<Cyclo, OracleError> {
    let m = g.edges.len();
    if m > MAX_EDGES {
        return Err(OracleError::TooManyEdges { edges: m });
    }
    let mut hist = vec![0u64; g.n + 1];
    'subset: for mask in 0u64..(1u64 << m) {
        let mut used = vec![false; g.n];
        let mut matched = 0usize;
        for (i, &(u, v)) in g.edges.iter().enumerate() {
            if (mask >> i) & 1 == 0 {
                continue;
            }
            if u == v || used[u] || used[v] {
                continue 'subset;
            }
            used[u] = true;
            used[v] = true;
            matched += 2;
        }
        hist[g.n - matched] += 1;
    }
    Ok(histogram_poly(&hist, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_cover_examples() {
        let one = Cyclo::one();
        let k3 = PlainGraph::complete(3);
        assert_eq!(count_vertex_covers(&k3, &one).unwrap(), Cyclo::from_int(4));
        let edge = PlainGraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(count_vertex_covers(&edge, &one).unwrap(), Cyclo::from_int(3));
        // Weighted: the both-endpoint cover contributes t.
        let t = Cyclo::from_int(7);
        assert_eq!(
            count_vertex_covers(&edge, &t).unwrap(),
            &Cyclo::from_int(2) + &t
        );
        // A loop forces its vertex into every cover.
        let loopy = PlainGraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(count_vertex_covers(&loopy, &t).unwrap(), t);
    }

    #[test]
    fn eulerian_orientation_examples() {
        let banana = PlainGraph::new(2, vec![(0, 1); 4]).unwrap();
        assert_eq!(count_eulerian_orientations(&banana).unwrap(), 6);
        let loops = PlainGraph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(count_eulerian_orientations(&loops).unwrap(), 4);
        // K₅: every degree 4; fixed by enumeration over 2¹⁰ orientations.
        let k5 = PlainGraph::complete(5);
        let eo = count_eulerian_orientations(&k5).unwrap();
        assert!(eo > 0 && eo % 2 == 0);
        // Recomputing is deterministic.
        assert_eq!(count_eulerian_orientations(&k5).unwrap(), eo);
        // Odd degree rejected.
        let path = PlainGraph::new(2, vec![(0, 1)]).unwrap();
        assert!(matches!(
            count_eulerian_orientations(&path).unwrap_err(),
            OracleError::OddDegree { vertex: 0, degree: 1 }
        ));
    }

    #[test]
    fn matching_examples() {
        let k3 = PlainGraph::complete(3);
        assert_eq!(count_matchings(&k3, &Cyclo::one()).unwrap(), Cyclo::from_int(4));
        assert!(count_matchings(&k3, &Cyclo::zero()).unwrap().is_zero());
        let edge = PlainGraph::new(2, vec![(0, 1)]).unwrap();
        let lambda = Cyclo::i();
        // λ² + 1 = 0 at λ = i.
        assert!(count_matchings(&edge, &lambda).unwrap().is_zero());
        assert_eq!(
            count_matchings(&edge, &Cyclo::from_int(3)).unwrap(),
            Cyclo::from_int(10)
        );
        // Loops never participate in matchings.
        let loopy = PlainGraph::new(2, vec![(0, 1), (0, 0)]).unwrap();
        assert_eq!(
            count_matchings(&loopy, &Cyclo::from_int(3)).unwrap(),
            Cyclo::from_int(10)
        );
    }

    #[test]
    fn graph_text_round_trip() {
        let g = PlainGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (1, 1)]).unwrap();
        assert_eq!(PlainGraph::parse(&g.to_text()).unwrap(), g);
        let parsed = PlainGraph::parse("# comment\nn 3\n\ne 0 1\ne 1 2\n").unwrap();
        assert_eq!(parsed, PlainGraph::new(3, vec![(0, 1), (1, 2)]).unwrap());
        assert!(PlainGraph::parse("e 0 1\n").is_err());
        assert!(PlainGraph::parse("n 2\ne 0 5\n").is_err());
        assert!(PlainGraph::parse("n 2\nq\n").is_err());
        assert!(PlainGraph::parse("n 2 2\n").is_err());
    }

    // The Holant bridges live in the integration suite; here we pin one
    // small instance of each correspondence against hand counts.
    #[test]
    fn hand_counted_bridge_instances() {
        // Path on 3 vertices: covers {1}, {0,1}, {1,2}, {0,2}, {0,1,2} → 5.
        let path = PlainGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            count_vertex_covers(&path, &Cyclo::one()).unwrap(),
            Cyclo::from_int(5)
        );
        // Its matchings: ∅, {01}, {12} → weights λ³ + 2λ.
        let lam = Cyclo::from_int(2);
        assert_eq!(
            count_matchings(&path, &lam).unwrap(),
            Cyclo::from_int(12)
        );
    }
}
