//! Signature grids, ℱ-gates, and the arity-4 signature-matrix calculus.
//!
//! A [`SigGrid`] is a multigraph whose vertices carry symmetric signatures;
//! every vertex port is consumed exactly once, by an edge endpoint or by a
//! dangling slot. [`SigGrid::holant_brute`] computes the Holant value — the
//! sum over all 0/1 edge assignments of the product of vertex signature
//! values — by exhaustive bitmask enumeration, and
//! [`SigGrid::fgate_signature`] computes the function an ℱ-gate induces on
//! its dangling edges. Holographic transformations act on bipartite grids
//! through [`SigGrid::transform_grid`] (covariantly on the row side,
//! contravariantly by the inverse on the column side, preserving the Holant)
//! and on plain grids through [`SigGrid::transform_all`] (value-preserving
//! for orthogonal matrices).
//!
//! The second half of the module is the arity-4 toolkit: signature matrices
//! with the row-bits-AB / column-bits-DC-reversed convention, the redundancy
//! predicate (equal middle rows and columns), the compression φ(M) = A·M·B
//! and its section ψ, the quarter-turn rotation of planar gadgets, chain
//! composition (optionally through disequality junctions, which reverse
//! rows), the averaging-gadget sequence with its exact closed form
//! `a_k = 1/3 − (1/3)(−1/2)^k`, and block-Vandermonde matrices with exact
//! determinants.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::cyclo::{rat, Cyclo, Rat};
use crate::sigalg::SymSig;
use crate::xform::{apply_co, apply_contra, Mat2};

/// A vertex port: (vertex index, port index < arity).
pub type Port = (usize, usize);

/// Default cap on brute-force edge enumeration (2^24 assignments).
pub const DEFAULT_BRUTE_BOUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridError {
    /// A port references a missing vertex or an index ≥ arity.
    BadPort { port: Port },
    /// A port is used by two edge/dangling slots, or not at all.
    PortUsage { port: Port, uses: usize },
    /// Operation requires a closed grid but dangling edges are present.
    DanglingPresent,
    /// Edge count exceeds the enumeration bound.
    BoundExceeded { edges: usize, bound: usize },
    /// The grid is not two-colorable.
    NotBipartite,
    /// The transformation matrix is singular.
    SingularTransform,
    /// Mismatched dimensions (block sizes, tables).
    Shape(String),
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::BadPort { port } => {
                write!(f, "port {}:{} does not exist", port.0, port.1)
            }
            GridError::PortUsage { port, uses } => write!(
                f,
                "port {}:{} used {} times (each port must be used exactly once)",
                port.0, port.1, uses
            ),
            GridError::DanglingPresent => write!(f, "grid has dangling edges"),
            GridError::BoundExceeded { edges, bound } => {
                write!(f, "{} edges exceed the enumeration bound {}", edges, bound)
            }
            GridError::NotBipartite => write!(f, "grid is not bipartite"),
            GridError::SingularTransform => write!(f, "transformation matrix is singular"),
            GridError::Shape(msg) => write!(f, "shape mismatch: {}", msg),
        }
    }
}

impl core::error::Error for GridError {}

/// A signature grid / ℱ-gate.
#[derive(Clone, Debug)]
pub struct SigGrid {
    sigs: Vec<SymSig>,
    /// Vertex → index into `sigs`.
    vertex_sigs: Vec<usize>,
    edges: Vec<(Port, Port)>,
    /// External variable order of the ℱ-gate is declaration order.
    dangling: Vec<Port>,
}

impl SigGrid {
    /// Validate and build. Every port `(v, p)` with `p < arity(sig(v))` must
    /// appear exactly once among edge endpoints and dangling slots.
    pub fn new(
        sigs: Vec<SymSig>,
        vertex_sigs: Vec<usize>,
        edges: Vec<(Port, Port)>,
        dangling: Vec<Port>,
    ) -> Result<SigGrid, GridError> {
        let arity = |v: usize| -> Option<usize> {
            vertex_sigs.get(v).and_then(|&s| sigs.get(s)).map(SymSig::arity)
        };
        let mut usage: Vec<Vec<usize>> = vertex_sigs
            .iter()
            .map(|&s| vec![0; sigs.get(s).map(SymSig::arity).unwrap_or(0)])
            .collect();
        let all_ports = edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(dangling.iter().copied());
        for port in all_ports {
            match arity(port.0) {
                Some(a) if port.1 < a => usage[port.0][port.1] += 1,
                _ => return Err(GridError::BadPort { port }),
            }
        }
        for (v, ports) in usage.iter().enumerate() {
            for (p, &uses) in ports.iter().enumerate() {
                if uses != 1 {
                    return Err(GridError::PortUsage { port: (v, p), uses });
                }
            }
        }
        Ok(SigGrid { sigs, vertex_sigs, edges, dangling })
    }

    /// Convenience: one signature entry per vertex.
    pub fn from_vertex_sigs(
        sigs: Vec<SymSig>,
        edges: Vec<(Port, Port)>,
        dangling: Vec<Port>,
    ) -> Result<SigGrid, GridError> {
        let ids = (0..sigs.len()).collect();
        SigGrid::new(sigs, ids, edges, dangling)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_sigs.len()
    }

    pub fn sig_of(&self, v: usize) -> &SymSig {
        &self.sigs[self.vertex_sigs[v]]
    }

    pub fn sig_index_of(&self, v: usize) -> usize {
        self.vertex_sigs[v]
    }

    pub fn sig_table(&self) -> &[SymSig] {
        &self.sigs
    }

    pub fn edges(&self) -> &[(Port, Port)] {
        &self.edges
    }

    pub fn dangling(&self) -> &[Port] {
        &self.dangling
    }

    /// Exact Holant value by enumeration over all 2^{|E|} edge assignments.
    pub fn holant_brute(&self) -> Result<Cyclo, GridError> {
        self.holant_brute_bounded(DEFAULT_BRUTE_BOUND)
    }

    /// [`SigGrid::holant_brute`] with an explicit edge bound.
    pub fn holant_brute_bounded(&self, bound: usize) -> Result<Cyclo, GridError> {
        if !self.dangling.is_empty() {
            return Err(GridError::DanglingPresent);
        }
        let m = self.edges.len();
        if m > bound {
            return Err(GridError::BoundExceeded { edges: m, bound });
        }
        let mut total = Cyclo::zero();
        let mut weights = vec![0usize; self.num_vertices()];
        for mask in 0u64..(1u64 << m) {
            weights.iter_mut().for_each(|w| *w = 0);
            for (i, &((v1, _), (v2, _))) in self.edges.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    weights[v1] += 1;
                    weights[v2] += 1;
                }
            }
            let mut term = Cyclo::one();
            for (v, &w) in weights.iter().enumerate() {
                let val = self.sig_of(v).get(w);
                if val.is_zero() {
                    term = Cyclo::zero();
                    break;
                }
                term = &term * val;
            }
            total = &total + &term;
        }
        Ok(total)
    }

    /// The function induced on the dangling edges: a full table of 2^k
    /// values (bit j of the index is the value of dangling edge j), plus the
    /// symmetric form when the table is symmetric.
    pub fn fgate_signature(
        &self,
        bound: usize,
    ) -> Result<(Vec<Cyclo>, Option<SymSig>), GridError> {
        let m = self.edges.len();
        if m > bound {
            return Err(GridError::BoundExceeded { edges: m, bound });
        }
        let k = self.dangling.len();
        let mut table = Vec::with_capacity(1 << k);
        let mut weights = vec![0usize; self.num_vertices()];
        for y in 0u64..(1u64 << k) {
            let mut acc = Cyclo::zero();
            for mask in 0u64..(1u64 << m) {
                weights.iter_mut().for_each(|w| *w = 0);
                for (i, &((v1, _), (v2, _))) in self.edges.iter().enumerate() {
                    if (mask >> i) & 1 == 1 {
                        weights[v1] += 1;
                        weights[v2] += 1;
                    }
                }
                for (j, &(v, _)) in self.dangling.iter().enumerate() {
                    if (y >> j) & 1 == 1 {
                        weights[v] += 1;
                    }
                }
                let mut term = Cyclo::one();
                for (v, &w) in weights.iter().enumerate() {
                    let val = self.sig_of(v).get(w);
                    if val.is_zero() {
                        term = Cyclo::zero();
                        break;
                    }
                    term = &term * val;
                }
                acc = &acc + &term;
            }
            table.push(acc);
        }
        let sym = symmetric_projection(&table, k);
        Ok((table, sym))
    }

    /// A deterministic two-coloring (`true` = row side, assigned to the
    /// lowest-indexed vertex of each component), or `None`.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.num_vertices();
        let mut adj = vec![Vec::new(); n];
        for &((a, _), (b, _)) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut color: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(true);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let cv = color[v].unwrap();
                for &w in &adj[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            stack.push(w);
                        }
                        Some(cw) if cw == cv => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    /// Holographic transformation of a bipartite grid: row-side signatures
    /// become `f T^⊗n` and column-side signatures `(T⁻¹)^⊗n f`, which keeps
    /// the Holant value unchanged for every nonsingular `T`.
    pub fn transform_grid(&self, t: &Mat2) -> Result<SigGrid, GridError> {
        let rows = self.bipartition().ok_or(GridError::NotBipartite)?;
        let t_inv = t.inverse().ok_or(GridError::SingularTransform)?;
        self.transform_sides(t, &t_inv, &rows)
    }

    /// As [`SigGrid::transform_grid`] with an explicit row-side assignment
    /// (each edge must cross sides).
    pub fn transform_sides(
        &self,
        t: &Mat2,
        t_inv: &Mat2,
        rows: &[bool],
    ) -> Result<SigGrid, GridError> {
        if rows.len() != self.num_vertices()
            || self.edges.iter().any(|&((a, _), (b, _))| rows[a] == rows[b])
        {
            return Err(GridError::NotBipartite);
        }
        let sigs = (0..self.num_vertices())
            .map(|v| {
                if rows[v] {
                    apply_co(self.sig_of(v), t)
                } else {
                    apply_contra(t_inv, self.sig_of(v))
                }
            })
            .collect();
        SigGrid::from_vertex_sigs(sigs, self.edges.clone(), self.dangling.clone())
    }

    /// Apply `T^⊗n` to every vertex signature (plain-grid transformation;
    /// preserves the Holant exactly when `T·Tᵀ = I`).
    pub fn transform_all(&self, t: &Mat2) -> SigGrid {
        let sigs = (0..self.num_vertices())
            .map(|v| apply_contra(t, self.sig_of(v)))
            .collect();
        SigGrid::from_vertex_sigs(sigs, self.edges.clone(), self.dangling.clone())
            .expect("port structure unchanged")
    }
}

/// Collapse a full 2^k table to a weight table if it is symmetric.
fn symmetric_projection(table: &[Cyclo], k: usize) -> Option<SymSig> {
    let mut weights: Vec<Option<Cyclo>> = vec![None; k + 1];
    for (y, val) in table.iter().enumerate() {
        let w = y.count_ones() as usize;
        match &weights[w] {
            None => weights[w] = Some(val.clone()),
            Some(prev) if prev == val => {}
            Some(_) => return None,
        }
    }
    Some(SymSig::new(weights.into_iter().map(Option::unwrap).collect()))
}

// --- named gadget constructions ---------------------------------------------

/// The tetrahedron gadget: K₄ with one dangling edge per vertex, every
/// vertex labeled `[t, 1, 0, 0, 0]` (arity 4). Its ℱ-gate signature is
/// `[t⁴+6t²+3, t³+3t, t²+1, t, 1]`.
pub fn tetrahedron_grid(t: &Cyclo) -> SigGrid {
    let sig = SymSig::new(vec![
        t.clone(),
        Cyclo::one(),
        Cyclo::zero(),
        Cyclo::zero(),
        Cyclo::zero(),
    ]);
    // Ports 0..2 of each vertex join the other three vertices; port 3 dangles.
    let mut edges = Vec::new();
    let mut next_port = [0usize; 4];
    for a in 0..4usize {
        for b in (a + 1)..4 {
            edges.push(((a, next_port[a]), (b, next_port[b])));
            next_port[a] += 1;
            next_port[b] += 1;
        }
    }
    let dangling = (0..4).map(|v| (v, 3)).collect();
    SigGrid::new(vec![sig], vec![0; 4], edges, dangling).expect("valid by construction")
}

/// The closed form of the tetrahedron gadget signature.
pub fn tetrahedron_closed_form(t: &Cyclo) -> SymSig {
    let t2 = t * t;
    let t3 = &t2 * t;
    let t4 = &t2 * &t2;
    let c = |v: i64| Cyclo::from_int(v);
    SymSig::new(vec![
        &(&t4 + &(&c(6) * &t2)) + &c(3),
        &t3 + &(&c(3) * t),
        &t2 + &c(1),
        t.clone(),
        c(1),
    ])
}

/// The s-fold chain of `[x, 1, 0]` vertices joined through disequalities,
/// with the two end ports dangling; its signature is `[s·x, 1, 0]`.
pub fn chain_grid(x: &Cyclo, s: usize) -> SigGrid {
    assert!(s >= 1);
    let node = SymSig::new(vec![x.clone(), Cyclo::one(), Cyclo::zero()]);
    let neq = SymSig::from_ints(&[0, 1, 0]);
    // Vertices 2j are [x,1,0] nodes (j = 0..s), odd ones are ≠₂.
    let mut sigs = Vec::new();
    let mut edges = Vec::new();
    for j in 0..(2 * s - 1) {
        sigs.push(if j % 2 == 0 { node.clone() } else { neq.clone() });
        if j > 0 {
            edges.push(((j - 1, 1), (j, 0)));
        }
    }
    let dangling = vec![(0, 0), (2 * s - 2, 1)];
    SigGrid::from_vertex_sigs(sigs, edges, dangling).expect("valid by construction")
}

/// The decorated-edge chain circle–square–triangle–square–circle:
/// `[v,1,0] — ≠₂ — [a,b,1] — ≠₂ — [v,1,0]` with the outer circle ports
/// dangling; its signature is `[a + 2bv + v², b + v, 1]`.
pub fn long_edge_grid(v: &Cyclo, a: &Cyclo, b: &Cyclo) -> SigGrid {
    let circle = SymSig::new(vec![v.clone(), Cyclo::one(), Cyclo::zero()]);
    let neq = SymSig::from_ints(&[0, 1, 0]);
    let middle = SymSig::new(vec![a.clone(), b.clone(), Cyclo::one()]);
    let sigs = vec![circle.clone(), neq.clone(), middle, neq, circle];
    let edges = (0..4).map(|j| ((j, 1), (j + 1, 0))).collect();
    let dangling = vec![(0, 0), (4, 1)];
    SigGrid::from_vertex_sigs(sigs, edges, dangling).expect("valid by construction")
}

// --- arity-4 signature matrices ----------------------------------------------

/// The 4×4 signature matrix of an arity-4 function: rows indexed by the
/// first two inputs (bits AB), columns by the last two in reverse order
/// (bits DC).
#[derive(Clone, PartialEq, Eq)]
pub struct Arity4Mat {
    pub m: [[Cyclo; 4]; 4],
}

impl fmt::Debug for Arity4Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.m {
            writeln!(f, "[{}, {}, {}, {}]", row[0], row[1], row[2], row[3])?;
        }
        Ok(())
    }
}

fn zero_row4() -> [Cyclo; 4] {
    [Cyclo::zero(), Cyclo::zero(), Cyclo::zero(), Cyclo::zero()]
}

impl Arity4Mat {
    pub fn new(m: [[Cyclo; 4]; 4]) -> Self {
        Arity4Mat { m }
    }

    /// Signature matrix of a symmetric arity-4 signature:
    /// `M[(ab)][(dc)] = f_{a+b+c+d}`.
    pub fn from_symmetric(f: &SymSig) -> Result<Arity4Mat, GridError> {
        if f.arity() != 4 {
            return Err(GridError::Shape(format!(
                "signature matrix needs arity 4, got {}",
                f.arity()
            )));
        }
        let mut m = [zero_row4(), zero_row4(), zero_row4(), zero_row4()];
        for (row, mrow) in m.iter_mut().enumerate() {
            for (col, cell) in mrow.iter_mut().enumerate() {
                let w = (row as u32).count_ones() + (col as u32).count_ones();
                *cell = f.get(w as usize).clone();
            }
        }
        Ok(Arity4Mat::new(m))
    }

    /// Signature matrix of an explicit 16-entry table indexed by the bits
    /// x₁x₂x₃x₄ (x₁ most significant): row = x₁x₂, column = x₄x₃.
    pub fn from_table(table: &[Cyclo]) -> Result<Arity4Mat, GridError> {
        if table.len() != 16 {
            return Err(GridError::Shape(String::from("need 16 table entries")));
        }
        let mut m = [zero_row4(), zero_row4(), zero_row4(), zero_row4()];
        for x in 0..16usize {
            let (x1, x2, x3, x4) = ((x >> 3) & 1, (x >> 2) & 1, (x >> 1) & 1, x & 1);
            m[(x1 << 1) | x2][(x4 << 1) | x3] = table[x].clone();
        }
        Ok(Arity4Mat::new(m))
    }

    /// Redundancy: the middle two rows agree and the middle two columns agree.
    pub fn is_redundant(&self) -> bool {
        (0..4).all(|c| self.m[1][c] == self.m[2][c]) && (0..4).all(|r| self.m[r][1] == self.m[r][2])
    }

    pub fn mul(&self, rhs: &Arity4Mat) -> Arity4Mat {
        let mut out = [zero_row4(), zero_row4(), zero_row4(), zero_row4()];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let mut acc = Cyclo::zero();
                for k in 0..4 {
                    acc = &acc + &(&self.m[r][k] * &rhs.m[k][c]);
                }
                *cell = acc;
            }
        }
        Arity4Mat::new(out)
    }

    /// Row reversal J·M (the effect of a disequality pair on the left ports).
    pub fn reversed_rows(&self) -> Arity4Mat {
        let mut m = self.m.clone();
        m.reverse();
        Arity4Mat::new(m)
    }

    /// Conjugation by a holographic transformation: `T^⊗2 · M · (Tᵀ)^⊗2`.
    pub fn conjugate(&self, t: &Mat2) -> Arity4Mat {
        let t2 = tensor_square(t);
        let tt2 = tensor_square(&t.transpose());
        let mut left = [zero_row4(), zero_row4(), zero_row4(), zero_row4()];
        for (r, row) in left.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let mut acc = Cyclo::zero();
                for k in 0..4 {
                    acc = &acc + &(&t2[r][k] * &self.m[k][c]);
                }
                *cell = acc;
            }
        }
        let mut out = [zero_row4(), zero_row4(), zero_row4(), zero_row4()];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let mut acc = Cyclo::zero();
                for k in 0..4 {
                    acc = &acc + &(&left[r][k] * &tt2[k][c]);
                }
                *cell = acc;
            }
        }
        Arity4Mat::new(out)
    }

    /// Quarter-turn (counterclockwise) rotation of the underlying planar
    /// gadget: entries are permuted along three 4-cycles (one per Hamming
    /// weight class), the central off-diagonal pair swaps, and the two
    /// extreme corners stay fixed. Applying it four times is the identity,
    /// and matrices of symmetric signatures are fixed points.
    pub fn rotate90(&self) -> Arity4Mat {
        let mut out = self.m.clone();
        // receive-from cycles, 0-indexed (row, col) positions.
        let cycles: [[(usize, usize); 4]; 3] = [
            [(0, 2), (0, 1), (1, 0), (2, 0)],
            [(3, 1), (3, 2), (2, 3), (1, 3)],
            [(0, 3), (1, 1), (3, 0), (2, 2)],
        ];
        for cycle in &cycles {
            for w in 0..4 {
                let (tr, tc) = cycle[w];
                let (sr, sc) = cycle[(w + 1) % 4];
                out[tr][tc] = self.m[sr][sc].clone();
            }
        }
        out[1][2] = self.m[2][1].clone();
        out[2][1] = self.m[1][2].clone();
        Arity4Mat::new(out)
    }
}

/// `T ⊗ T` as an explicit 4×4 matrix (row/column index bits in order).
fn tensor_square(t: &Mat2) -> [[Cyclo; 4]; 4] {
    let mut out = [zero_row4(), zero_row4(), zero_row4(), zero_row4()];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = &t.m[r >> 1][c >> 1] * &t.m[r & 1][c & 1];
        }
    }
    out
}

/// A 3×3 matrix over the cyclotomics (the compressed side of φ).
#[derive(Clone, PartialEq, Eq)]
pub struct Mat3 {
    pub m: [[Cyclo; 3]; 3],
}

impl fmt::Debug for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.m {
            writeln!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

impl Mat3 {
    pub fn from_ints(m: [[i64; 3]; 3]) -> Self {
        Mat3 { m: m.map(|row| row.map(Cyclo::from_int)) }
    }

    pub fn identity() -> Self {
        Mat3::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn mul(&self, rhs: &Mat3) -> Mat3 {
        let mut out = Mat3::identity();
        for (r, row) in out.m.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let mut acc = Cyclo::zero();
                for k in 0..3 {
                    acc = &acc + &(&self.m[r][k] * &rhs.m[k][c]);
                }
                *cell = acc;
            }
        }
        out
    }

    pub fn det(&self) -> Cyclo {
        let m = &self.m;
        let t1 = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
        let t2 = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
        let t3 = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
        &(&t1 - &t2) + &t3
    }
}

/// The compression φ(M) = A·M·B, where A averages the middle rows and B sums
/// the middle columns. On redundant matrices φ is a semigroup isomorphism
/// onto 3×3 matrices (ψ is its inverse section).
pub fn phi(m: &Arity4Mat) -> Mat3 {
    let half = Cyclo::from_rat(rat(1, 2));
    let rows: [Vec<Cyclo>; 3] = [
        m.m[0].to_vec(),
        (0..4).map(|c| &(&m.m[1][c] + &m.m[2][c]) * &half).collect(),
        m.m[3].to_vec(),
    ];
    let mut out = Mat3::identity();
    for (r, row) in rows.iter().enumerate() {
        out.m[r] = [
            row[0].clone(),
            &row[1] + &row[2],
            row[3].clone(),
        ];
    }
    out
}

/// The section ψ(N) = B·N·A: a redundant 4×4 matrix with φ(ψ(N)) = N.
pub fn psi(n: &Mat3) -> Arity4Mat {
    let half = Cyclo::from_rat(rat(1, 2));
    let expand = |r: usize| -> [Cyclo; 4] {
        [
            n.m[r][0].clone(),
            &n.m[r][1] * &half,
            &n.m[r][1] * &half,
            n.m[r][2].clone(),
        ]
    };
    Arity4Mat::new([expand(0), expand(1), expand(1), expand(2)])
}

/// Compressed signature matrix of a symmetric arity-4 signature.
pub fn compressed(f: &SymSig) -> Result<Mat3, GridError> {
    Ok(phi(&Arity4Mat::from_symmetric(f)?))
}

/// Chain composition of arity-4 gadgets: the matrix product of the factors,
/// with a row reversal at each junction when the connecting edge pair goes
/// through disequalities.
pub fn gadget_chain(ms: &[Arity4Mat], flip_between: bool) -> Result<Arity4Mat, GridError> {
    let mut iter = ms.iter();
    let Some(first) = iter.next() else {
        return Err(GridError::Shape(String::from("empty gadget chain")));
    };
    let mut acc = first.clone();
    for next in iter {
        let rhs = if flip_between { next.reversed_rows() } else { next.clone() };
        acc = acc.mul(&rhs);
    }
    Ok(acc)
}

/// The k-th matrix of the averaging gadget sequence together with the exact
/// value `a_k = 1/3 − (1/3)(−1/2)^k`.
///
/// The base matrix is the redundant identity `M_g` (corner ones, middle
/// block of halves) and each step composes a quarter-turned copy with `M_g`;
/// the quarter-turned `M_{N_k}` takes the form with `a_k` on the middle
/// diagonal and `a_{k+1}` on the anti-diagonal positions.
pub fn approx_sequence(k: u32) -> (Arity4Mat, Rat) {
    let mut m = redundant_identity();
    for _ in 0..k {
        m = m.rotate90().mul(&redundant_identity());
    }
    // a_k = 1/3 − (1/3)(−1/2)^k.
    let third = rat(1, 3);
    let a = &third - &(&third * &rat(-1, 2).pow(k as i32));
    (m, a)
}

/// `M_g`: the identity of the redundant-matrix semigroup under φ.
pub fn redundant_identity() -> Arity4Mat {
    psi(&Mat3::identity())
}

/// Block-Vandermonde matrix: n×n, block k of width c_k has entries
/// `r^{c−1}·λ^{k·r}` (rows r = 1..n, in-block columns c = 1..c_k). Returns
/// the matrix and its exact determinant (nonzero whenever λ is neither zero
/// nor a root of unity).
pub fn block_vandermonde(
    n: usize,
    blocks: &[usize],
    lambda: &Cyclo,
) -> Result<(Vec<Vec<Cyclo>>, Cyclo), GridError> {
    if blocks.iter().sum::<usize>() != n {
        return Err(GridError::Shape(String::from("block sizes must sum to n")));
    }
    let mut mat: Vec<Vec<Cyclo>> = vec![Vec::with_capacity(n); n];
    for (k, &width) in blocks.iter().enumerate() {
        for c in 1..=width {
            for (row, r) in (1..=n as u64).enumerate() {
                let entry = &Cyclo::from_int(r as i64).pow(c as u64 - 1)
                    * &lambda.pow(k as u64 * r);
                mat[row].push(entry);
            }
        }
    }
    let det = determinant(mat.clone());
    Ok((mat, det))
}

/// Exact determinant by Gaussian elimination with division.
pub fn determinant(mut m: Vec<Vec<Cyclo>>) -> Cyclo {
    let n = m.len();
    let mut det = Cyclo::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Cyclo::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = &det * &pivot;
        let inv = pivot.inv().expect("nonzero pivot");
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &sub;
            }
        }
    }
    det
}
