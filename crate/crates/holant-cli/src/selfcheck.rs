//! The `selfcheck` verb: a deterministic, seeded sweep over the library's
//! invariants. Each suite draws its inputs from a seeded generator, so a run
//! is fully reproducible from the seed alone, and reports one line.

use holant_core::classify::{classify_set, classify_single, verify_verdict};
use holant_core::cyclo::{rat, sqrt_rational, Cyclo};
use holant_core::grid::{
    approx_sequence, chain_grid, compressed, tetrahedron_closed_form, tetrahedron_grid, Port,
    SigGrid,
};
use holant_core::oracles::{count_eulerian_orientations, count_matchings, count_vertex_covers, PlainGraph};
use holant_core::sigalg::{sym, Sign, SymSig};
use holant_core::tracteval::eval_auto;
use holant_core::xform::{apply_contra, Mat2};

use crate::formats::{parse_grid_file, parse_mat, parse_sig_file, print_grid_file, print_mat, print_sig_file, NamedGrid};

/// xorshift64*, small and dependency-free; quality is ample for test inputs.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed | 1)
    }

    pub fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

type Check = Result<(), String>;

fn fail(msg: impl Into<String>) -> Check {
    Err(msg.into())
}

fn small_cyclo(rng: &mut Rng) -> Cyclo {
    // One conductor per element; mixing conductors across terms would put
    // sums in fields of lcm-sized degree, where inversion is unaffordable.
    let n = 1 + rng.below(24);
    let mut acc = Cyclo::zero();
    for _ in 0..rng.below(4) {
        let k = rng.below(n);
        let coeff = rat(rng.int(-5, 5), rng.int(1, 4));
        acc = &acc + &(&Cyclo::zeta(n, k) * &Cyclo::from_rat(coeff));
    }
    acc
}

fn int_sig(rng: &mut Rng, arity: usize) -> SymSig {
    SymSig::from_ints(&(0..=arity).map(|_| rng.int(-2, 2)).collect::<Vec<_>>())
}

fn gaussian_unary(rng: &mut Rng) -> [Cyclo; 2] {
    let g = |r: &mut Rng| &Cyclo::from_int(r.int(-2, 2)) + &(&Cyclo::from_int(r.int(-2, 2)) * &Cyclo::i());
    [g(rng), g(rng)]
}

fn nonsingular_mat(rng: &mut Rng) -> Mat2 {
    loop {
        let t = Mat2::from_ints([
            [rng.int(-3, 3), rng.int(-3, 3)],
            [rng.int(-3, 3), rng.int(-3, 3)],
        ]);
        if !t.det().is_zero() {
            return t;
        }
    }
}

fn orthogonal_mat(rng: &mut Rng) -> Mat2 {
    let (p, q) = (rng.int(1, 4), rng.int(0, 4));
    let h = p * p + q * q;
    let c = Cyclo::from_rat(rat(p * p - q * q, h));
    let s = Cyclo::from_rat(rat(2 * p * q, h));
    let rot = Mat2::new([[c.clone(), s.clone()], [-s, c]]);
    if rng.below(2) == 0 {
        rot
    } else {
        rot.mul(&Mat2::new([
            [Cyclo::one(), Cyclo::zero()],
            [Cyclo::zero(), -Cyclo::one()],
        ]))
    }
}

/// Pair up all ports of the given vertex signatures into a closed grid.
fn random_closed_grid(rng: &mut Rng, sigs: Vec<SymSig>) -> Option<SigGrid> {
    let mut ports: Vec<Port> = sigs
        .iter()
        .enumerate()
        .flat_map(|(v, f)| (0..f.arity()).map(move |p| (v, p)))
        .collect();
    if ports.len() % 2 != 0 {
        return None;
    }
    for i in (1..ports.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        ports.swap(i, j);
    }
    let edges = ports.chunks(2).map(|c| (c[0], c[1])).collect();
    SigGrid::from_vertex_sigs(sigs, edges, Vec::new()).ok()
}

fn random_graph(rng: &mut Rng, max_n: usize) -> PlainGraph {
    let n = 2 + rng.below(max_n as u64 - 1) as usize;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.below(3) == 0 {
                edges.push((u, v));
            }
        }
    }
    PlainGraph::new(n, edges).expect("endpoints in range")
}

/// Plain grid with `f(deg)` on every vertex of a graph.
fn graph_grid(g: &PlainGraph, f: impl Fn(usize) -> SymSig) -> SigGrid {
    let sigs: Vec<SymSig> = g.degrees().iter().map(|&d| f(d)).collect();
    let mut next_port = vec![0usize; g.num_vertices()];
    let mut edges = Vec::new();
    for &(u, v) in g.edges() {
        let pu = (u, next_port[u]);
        next_port[u] += 1;
        let pv = (v, next_port[v]);
        next_port[v] += 1;
        edges.push((pu, pv));
    }
    SigGrid::from_vertex_sigs(sigs, edges, Vec::new()).expect("ports used once")
}

fn check_cyclo_ring(rng: &mut Rng) -> Check {
    for _ in 0..40 {
        let (a, b, c) = (small_cyclo(rng), small_cyclo(rng), small_cyclo(rng));
        if &(&a + &b) + &c != &a + &(&b + &c) {
            return fail("addition not associative");
        }
        if &a * &(&b + &c) != &(&a * &b) + &(&a * &c) {
            return fail("multiplication not distributive");
        }
        if (&a * &b).conj() != &a.conj() * &b.conj() {
            return fail("conjugation not multiplicative");
        }
        if !a.is_zero() {
            match a.inv() {
                Some(inv) if (&a * &inv).is_one() => {}
                _ => return fail(format!("inverse failed for {a}")),
            }
        }
    }
    Ok(())
}

fn check_sqrt_rational(_rng: &mut Rng) -> Check {
    for num in -20..=20i64 {
        for den in 1..=6i64 {
            let q = rat(num, den);
            let s = sqrt_rational(&q).ok_or("sqrt_rational out of range")?;
            if &s * &s != Cyclo::from_rat(q.clone()) {
                return fail(format!("(√({num}/{den}))² mismatch"));
            }
        }
    }
    Ok(())
}

fn check_holographic_invariance(rng: &mut Rng) -> Check {
    for _ in 0..15 {
        // Two arity-2 vertices per side, left ports wired to right ports.
        let sigs: Vec<SymSig> = (0..4).map(|_| int_sig(rng, 2)).collect();
        let mut right: Vec<Port> = vec![(2, 0), (2, 1), (3, 0), (3, 1)];
        for i in (1..right.len()).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            right.swap(i, j);
        }
        let left = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let edges = left.iter().zip(right).map(|(&l, r)| (l, r)).collect();
        let g = SigGrid::from_vertex_sigs(sigs, edges, Vec::new()).expect("bipartite 2+2");
        let t = nonsingular_mat(rng);
        let h = g.transform_grid(&t).expect("t is nonsingular");
        if g.holant_brute() != h.holant_brute() {
            return fail("holographic transformation changed the Holant");
        }
    }
    Ok(())
}

fn check_orthogonal_invariance(rng: &mut Rng) -> Check {
    let mut done = 0;
    while done < 15 {
        let f = int_sig(rng, 3);
        let sigs = vec![f.clone(), f.clone(), f.clone(), f];
        if let Some(g) = random_closed_grid(rng, sigs) {
            let t = orthogonal_mat(rng);
            if g.holant_brute() != g.transform_all(&t).holant_brute() {
                return fail("orthogonal transformation changed the Holant");
            }
            done += 1;
        }
    }
    Ok(())
}

fn check_vanishing(rng: &mut Rng) -> Check {
    let mut done = 0;
    while done < 15 {
        let sigma = if rng.below(2) == 0 { Sign::Plus } else { Sign::Minus };
        let f = sym(&sigma.unary(), 2, &[gaussian_unary(rng)]);
        if f.is_zero() {
            continue;
        }
        let copies = 2 + rng.below(2) as usize;
        if let Some(g) = random_closed_grid(rng, vec![f; copies * 2]) {
            if !g.holant_brute().expect("in bound").is_zero() {
                return fail("vanishing grid with nonzero Holant");
            }
            done += 1;
        }
    }
    Ok(())
}

fn check_oracle_bridges(rng: &mut Rng) -> Check {
    for _ in 0..8 {
        let g = random_graph(rng, 5);
        // Vertex cover: [0,1,1] per edge against equalities per vertex.
        let degrees = g.degrees();
        let mut sigs: Vec<SymSig> = degrees
            .iter()
            .map(|&d| {
                let mut e = vec![0i64; d + 1];
                if d == 0 {
                    e[0] = 2;
                } else {
                    e[0] = 1;
                    e[d] = 1;
                }
                SymSig::from_ints(&e)
            })
            .collect();
        let n = g.num_vertices();
        let mut next_port = vec![0usize; n];
        let mut edges = Vec::new();
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            sigs.push(SymSig::from_ints(&[0, 1, 1]));
            edges.push(((u, next_port[u]), (n + i, 0)));
            next_port[u] += 1;
            edges.push(((v, next_port[v]), (n + i, 1)));
            next_port[v] += 1;
        }
        let grid = SigGrid::from_vertex_sigs(sigs, edges, Vec::new()).expect("ports used once");
        if grid.holant_brute().expect("in bound") != count_vertex_covers(&g, &Cyclo::one()).expect("in bound") {
            return fail("vertex-cover bridge mismatch");
        }
        // Matchings: [λ, 1, 0, …, 0] of the right arity on every vertex.
        let lam = Cyclo::from_int(rng.int(-2, 2));
        let grid = graph_grid(&g, |d| {
            let mut e = vec![Cyclo::zero(); d + 1];
            e[0] = lam.clone();
            if d >= 1 {
                e[1] = Cyclo::one();
            }
            SymSig::new(e)
        });
        if grid.holant_brute().expect("in bound") != count_matchings(&g, &lam).expect("in bound") {
            return fail("matching bridge mismatch");
        }
    }
    // Eulerian orientations on a fixed 4-regular instance.
    let banana = PlainGraph::new(2, vec![(0, 1); 4]).expect("endpoints in range");
    let grid = graph_grid(&banana, |_| SymSig::from_ints(&[3, 0, 1, 0, 3]));
    let eo = count_eulerian_orientations(&banana).expect("even degrees");
    if grid.holant_brute().expect("in bound") != Cyclo::from_int(4 * eo as i64) {
        return fail("Eulerian-orientation bridge mismatch");
    }
    Ok(())
}

fn check_dispatcher(rng: &mut Rng) -> Check {
    let pools: Vec<Vec<SymSig>> = vec![
        vec![
            SymSig::from_ints(&[1, 0, 0, 1]),
            SymSig::from_ints(&[1, 0, -1]),
            SymSig::from_ints(&[1, 1]),
        ],
        vec![
            SymSig::from_ints(&[2, 0, 0, 3]),
            SymSig::from_ints(&[0, 1, 0]),
            SymSig::from_ints(&[1, 2]),
        ],
        vec![
            sym(&Sign::Plus.unary(), 2, &[[Cyclo::one(), Cyclo::from_int(2)]]),
            SymSig::new(vec![Cyclo::one(), Cyclo::i()]),
        ],
    ];
    for pool in &pools {
        let mut done = 0;
        while done < 5 {
            let sigs: Vec<SymSig> = (0..4)
                .map(|_| pool[rng.below(pool.len() as u64) as usize].clone())
                .collect();
            let Some(g) = random_closed_grid(rng, sigs) else { continue };
            if g.edges().len() > 8 {
                continue;
            }
            let (value, method) = eval_auto(&g, 24).map_err(|e| format!("eval_auto: {e}"))?;
            if value != g.holant_brute().expect("in bound") {
                return fail(format!("dispatcher ({method}) disagrees with brute force"));
            }
            done += 1;
        }
    }
    Ok(())
}

fn check_gadget_forms(rng: &mut Rng) -> Check {
    for _ in 0..6 {
        let t = Cyclo::from_int(rng.int(-4, 4));
        let grid = tetrahedron_grid(&t);
        let (_, sig) = grid.fgate_signature(24).expect("in bound");
        let sig = sig.ok_or("tetrahedron gate is not symmetric")?;
        if sig != tetrahedron_closed_form(&t) {
            return fail("tetrahedron closed form mismatch");
        }
        let m = compressed(&sig).map_err(|e| format!("compressed: {e}"))?;
        if m.det() != Cyclo::from_int(4) {
            return fail("tetrahedron compressed determinant is not 4");
        }
    }
    for _ in 0..6 {
        let x = Cyclo::from_int(rng.int(-3, 3));
        let s = 1 + rng.below(4) as usize;
        let (_, sig) = chain_grid(&x, s).fgate_signature(24).expect("in bound");
        let expect = SymSig::new(vec![
            &Cyclo::from_int(s as i64) * &x,
            Cyclo::one(),
            Cyclo::zero(),
        ]);
        if sig != Some(expect) {
            return fail("chain closed form mismatch");
        }
    }
    let third = rat(1, 3);
    for k in 0..=12u32 {
        let (_, ak) = approx_sequence(k);
        let step = rat(-1, 2).pow(k as i32);
        if ak != &third - &(&third * &step) {
            return fail(format!("a_{k} mismatch"));
        }
    }
    Ok(())
}

fn check_classifier(rng: &mut Rng) -> Check {
    if classify_single(&SymSig::from_ints(&[3, 0, 1, 0, 3])).is_tractable() {
        return fail("[3,0,1,0,3] not recognized as hard");
    }
    let tractable = [
        SymSig::from_ints(&[1, 0, 0, 1]),
        SymSig::from_ints(&[2, 0, 0, 3]),
        SymSig::new(vec![Cyclo::one(), Cyclo::i(), -Cyclo::one()]),
    ];
    for f in &tractable {
        let scale = Cyclo::from_int(rng.int(1, 3));
        let sigs = vec![f.scale(&scale)];
        let verdict = classify_set(&sigs);
        if !verdict.is_tractable() {
            return fail("tractable sample misclassified");
        }
        if !verify_verdict(&sigs, &verdict) {
            return fail("tractable verdict failed re-verification");
        }
    }
    Ok(())
}

fn check_round_trips(rng: &mut Rng) -> Check {
    let sigs: Vec<(String, SymSig)> = (0..4)
        .map(|i| {
            let arity = 1 + rng.below(4) as usize;
            (format!("f{i}"), int_sig(rng, arity))
        })
        .collect();
    let parsed =
        parse_sig_file(&print_sig_file(&sigs)).map_err(|e| format!("sig reparse: {e}"))?;
    if parsed != sigs {
        return fail("signature file did not round-trip");
    }

    let binary = int_sig(rng, 2);
    let grid = random_closed_grid(rng, vec![binary; 4]).ok_or("even port count")?;
    let named = NamedGrid {
        sig_names: (0..grid.sig_table().len()).map(|i| format!("s{i}")).collect(),
        vertex_names: (0..grid.num_vertices()).map(|i| format!("v{i}")).collect(),
        grid,
    };
    let reparsed =
        parse_grid_file(&print_grid_file(&named)).map_err(|e| format!("grid reparse: {e}"))?;
    if reparsed.grid.sig_table() != named.grid.sig_table()
        || reparsed.grid.edges() != named.grid.edges()
        || reparsed.grid.dangling() != named.grid.dangling()
    {
        return fail("grid file did not round-trip");
    }

    for t in [Mat2::z(), Mat2::h2(), nonsingular_mat(rng), orthogonal_mat(rng)] {
        let back = parse_mat(&print_mat(&t)).map_err(|e| format!("matrix reparse: {e}"))?;
        if back.m != t.m {
            return fail("matrix did not round-trip");
        }
    }
    Ok(())
}

fn check_z_identities(_rng: &mut Rng) -> Check {
    let eo = SymSig::from_ints(&[3, 0, 1, 0, 3]);
    let expect = SymSig::from_ints(&[0, 0, 2, 0, 0]);
    if apply_contra(&Mat2::z_inv(), &eo) != expect {
        return fail("Z⁻¹ image of [3,0,1,0,3] is not 2·[0,0,1,0,0]");
    }
    let eq2 = SymSig::from_ints(&[1, 0, 1]);
    if holant_core::xform::apply_co(&eq2, &Mat2::z()) != SymSig::from_ints(&[0, 1, 0]) {
        return fail("Z image of binary equality is not [0,1,0]");
    }
    Ok(())
}

pub const SUITES: &[(&str, fn(&mut Rng) -> Check)] = &[
    ("cyclo-ring", check_cyclo_ring),
    ("sqrt-rational", check_sqrt_rational),
    ("z-identities", check_z_identities),
    ("holographic-invariance", check_holographic_invariance),
    ("orthogonal-invariance", check_orthogonal_invariance),
    ("vanishing", check_vanishing),
    ("oracle-bridges", check_oracle_bridges),
    ("dispatcher", check_dispatcher),
    ("gadget-forms", check_gadget_forms),
    ("classifier", check_classifier),
    ("format-round-trips", check_round_trips),
];

/// Run every suite; returns the number of failures.
pub fn run(seed: u64) -> usize {
    println!("seed: {seed}");
    let mut failures = 0;
    for (name, suite) in SUITES {
        // Each suite gets its own stream so failures reproduce in isolation.
        let mut rng = Rng::new(seed ^ fxhash(name));
        match suite(&mut rng) {
            Ok(()) => println!("check {name}: ok"),
            Err(msg) => {
                failures += 1;
                println!("check {name}: FAIL ({msg})");
            }
        }
    }
    if failures == 0 {
        println!("selfcheck: pass");
    } else {
        println!("selfcheck: fail ({failures} suites)");
    }
    failures
}

fn fxhash(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}
