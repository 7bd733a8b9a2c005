//! Acceptance suite: one test per release criterion, each printing a
//! `criterion N: PASS` line (visible with `--nocapture`); a failed assertion
//! marks the criterion red.

use holant_core::classify::{classify_set, classify_single, verify_verdict, TractableCase, Verdict};
use holant_core::cyclo::{rat, Cyclo, Rat};
use holant_core::grid::{
    approx_sequence, block_vandermonde, compressed, phi, psi, tetrahedron_closed_form,
    tetrahedron_grid, Arity4Mat, Mat3, Port, SigGrid,
};
use holant_core::oracles::{
    count_eulerian_orientations, count_matchings, count_vertex_covers, PlainGraph,
};
use holant_core::sigalg::{sym, Sign, SymSig, Unary};
use holant_core::tracteval::eval_auto;
use holant_core::xform::{apply_co, apply_contra, Mat2};

// --- deterministic input generators -------------------------------------------

struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Rng {
        Rng(seed | 1)
    }
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0.wrapping_mul(0x2545F4914F6CDD1D)
    }
    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// A small element of ℚ(ζ₈).
fn zeta8_elem(rng: &mut Rng) -> Cyclo {
    let mut acc = Cyclo::from_int(rng.int(-2, 2));
    for _ in 0..rng.below(3) {
        let term = &Cyclo::zeta(8, rng.below(8)) * &Cyclo::from_int(rng.int(-2, 2));
        acc = &acc + &term;
    }
    acc
}

fn zeta8_sig(rng: &mut Rng, arity: usize) -> SymSig {
    SymSig::new((0..=arity).map(|_| zeta8_elem(rng)).collect())
}

fn int_sig(rng: &mut Rng, arity: usize) -> SymSig {
    SymSig::from_ints(&(0..=arity).map(|_| rng.int(-2, 2)).collect::<Vec<_>>())
}

fn gaussian_unary(rng: &mut Rng) -> Unary {
    let g = |r: &mut Rng| {
        &Cyclo::from_int(r.int(-2, 2)) + &(&Cyclo::from_int(r.int(-2, 2)) * &Cyclo::i())
    };
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

/// Bipartite grid: two left and two right vertices, all left ports wired to
/// right ports in a random matching.
fn random_bipartite_grid(rng: &mut Rng) -> SigGrid {
    let (a1, a2) = (2 + rng.below(3) as usize, 2 + rng.below(3) as usize);
    let e = a1 + a2;
    let b1 = 1 + rng.below(e as u64 - 1) as usize;
    let b2 = e - b1;
    let sigs = vec![
        zeta8_sig(rng, a1),
        zeta8_sig(rng, a2),
        zeta8_sig(rng, b1),
        zeta8_sig(rng, b2),
    ];
    let left: Vec<Port> = (0..a1).map(|p| (0, p)).chain((0..a2).map(|p| (1, p))).collect();
    let mut right: Vec<Port> = (0..b1).map(|p| (2, p)).chain((0..b2).map(|p| (3, p))).collect();
    for i in (1..right.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        right.swap(i, j);
    }
    let edges = left.into_iter().zip(right).collect();
    SigGrid::from_vertex_sigs(sigs, edges, Vec::new()).expect("ports used once")
}

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

/// `λ·v1^⊗n + µ·v2^⊗n` as a symmetric signature.
fn tensor_sum(v1: &Unary, v2: &Unary, mu: &Cyclo, n: usize) -> SymSig {
    let t1 = SymSig::tensor_power(v1, n);
    let t2 = SymSig::tensor_power(v2, n).scale(mu);
    SymSig::new((0..=n).map(|k| t1.get(k) + t2.get(k)).collect())
}

// --- criteria ------------------------------------------------------------------

#[test]
fn criterion_01_z_transform_identities() {
    let eo = SymSig::from_ints(&[3, 0, 1, 0, 3]);
    assert_eq!(
        apply_contra(&Mat2::z_inv(), &eo),
        SymSig::from_ints(&[0, 0, 2, 0, 0])
    );
    assert_eq!(
        apply_co(&SymSig::from_ints(&[1, 0, 1]), &Mat2::z()),
        SymSig::from_ints(&[0, 1, 0])
    );
    println!("criterion 1: PASS (Z-transform identities)");
}

#[test]
fn criterion_02_holographic_invariance() {
    let mut rng = Rng::new(0x2222);
    for _ in 0..200 {
        let g = random_bipartite_grid(&mut rng);
        assert!(g.edges().len() <= 10);
        let base = g.holant_brute().expect("in bound");
        for _ in 0..10 {
            let t = nonsingular_mat(&mut rng);
            let h = g.transform_grid(&t).expect("t nonsingular");
            assert_eq!(h.holant_brute().expect("in bound"), base);
        }
    }
    println!("criterion 2: PASS (holographic invariance, 200 grids x 10 transforms)");
}

#[test]
fn criterion_03_orthogonal_invariance() {
    let mut rng = Rng::new(0x3333);
    let mut done = 0;
    while done < 200 {
        let sigs: Vec<SymSig> = (0..4)
            .map(|_| {
                let arity = 2 + rng.below(3) as usize;
                zeta8_sig(&mut rng, arity)
            })
            .collect();
        let Some(g) = random_closed_grid(&mut rng, sigs) else { continue };
        let base = g.holant_brute().expect("in bound");
        for _ in 0..2 {
            let t = orthogonal_mat(&mut rng);
            assert_eq!(g.transform_all(&t).holant_brute().expect("in bound"), base);
        }
        done += 1;
    }
    println!("criterion 3: PASS (orthogonal invariance, 200 grids)");
}

#[test]
fn criterion_04_eulerian_orientation_bridge() {
    // Five loop-free 4-regular multigraphs on at most 6 vertices.
    let doubled_cycle = |n: usize| {
        let mut e = Vec::new();
        for v in 0..n {
            e.push((v, (v + 1) % n));
            e.push((v, (v + 1) % n));
        }
        PlainGraph::new(n, e).expect("endpoints in range")
    };
    let instances = vec![
        PlainGraph::new(2, vec![(0, 1); 4]).expect("endpoints in range"),
        doubled_cycle(3),
        doubled_cycle(4),
        doubled_cycle(5),
        PlainGraph::complete(5),
    ];
    let eo_sig = SymSig::from_ints(&[3, 0, 1, 0, 3]);
    for g in &instances {
        let grid = graph_grid(g, |_| eo_sig.clone());
        let eo = count_eulerian_orientations(g).expect("even degrees");
        let scale = Cyclo::from_int(1i64 << g.num_vertices());
        assert_eq!(
            grid.holant_brute().expect("in bound"),
            &scale * &Cyclo::from_int(eo as i64)
        );
    }
    println!("criterion 4: PASS (Eulerian-orientation bridge, 5 instances)");
}

#[test]
fn criterion_05_vertex_cover_and_matching_bridges() {
    let mut rng = Rng::new(0x5555);
    let mut done = 0;
    while done < 10 {
        let n = 2 + rng.below(7) as usize;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.below(3) == 0 {
                    edges.push((u, v));
                }
            }
        }
        if edges.len() > 8 {
            continue; // keep the vertex-cover grid (2|E| edges) brute-forceable
        }
        let g = PlainGraph::new(n, edges).expect("endpoints in range");

        // Vertex cover: equalities on graph vertices, [0,1,1] per edge.
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
        let mut next_port = vec![0usize; n];
        let mut gedges = Vec::new();
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            sigs.push(SymSig::from_ints(&[0, 1, 1]));
            gedges.push(((u, next_port[u]), (n + i, 0)));
            next_port[u] += 1;
            gedges.push(((v, next_port[v]), (n + i, 1)));
            next_port[v] += 1;
        }
        let grid = SigGrid::from_vertex_sigs(sigs, gedges, Vec::new()).expect("ports used once");
        assert_eq!(
            grid.holant_brute().expect("in bound"),
            count_vertex_covers(&g, &Cyclo::one()).expect("in bound")
        );

        // Matchings with a random weight.
        let lam = Cyclo::from_int(rng.int(-2, 2));
        let grid = graph_grid(&g, |d| {
            let mut e = vec![Cyclo::zero(); d + 1];
            e[0] = lam.clone();
            if d >= 1 {
                e[1] = Cyclo::one();
            }
            SymSig::new(e)
        });
        assert_eq!(
            grid.holant_brute().expect("in bound"),
            count_matchings(&g, &lam).expect("in bound")
        );
        done += 1;
    }
    println!("criterion 5: PASS (vertex-cover and matching bridges, 10 graphs)");
}

#[test]
fn criterion_06_vanishing_suite() {
    let mut rng = Rng::new(0x6666);
    let mut built = 0;
    while built < 100 {
        let sigma = if rng.below(2) == 0 { Sign::Plus } else { Sign::Minus };
        let t = rng.below(2) as usize; // copies of non-pivot unaries
        let others: Vec<Unary> = (0..t).map(|_| gaussian_unary(&mut rng)).collect();
        let extra = t + 1 + rng.below(2) as usize; // ensures 2·vd > arity
        let f = sym(&sigma.unary(), extra, &others);
        if f.is_zero() {
            continue;
        }
        assert!(2 * f.vd(sigma) > f.arity());
        let mut grids = 0;
        while grids < 5 {
            let copies = 2 * (1 + rng.below(2) as usize);
            let Some(g) = random_closed_grid(&mut rng, vec![f.clone(); copies]) else { continue };
            if g.edges().len() > 8 {
                continue;
            }
            assert!(g.holant_brute().expect("in bound").is_zero());
            grids += 1;
        }
        built += 1;
    }
    // Degree bookkeeping on 500 random nonzero signatures.
    let mut checked = 0;
    while checked < 500 {
        let arity = 1 + rng.below(5) as usize;
        let f = int_sig(&mut rng, arity);
        if f.is_zero() {
            continue;
        }
        for sigma in [Sign::Plus, Sign::Minus] {
            assert_eq!(f.vd(sigma) as i64 + f.rd(sigma), f.arity() as i64);
        }
        checked += 1;
    }
    println!("criterion 6: PASS (vanishing grids and vd+rd bookkeeping)");
}

#[test]
fn criterion_07_structural_lemmas() {
    let mut rng = Rng::new(0x7777);

    // Symmetrization bounds the recurrence degree by the non-pivot count.
    for _ in 0..100 {
        let sigma = if rng.below(2) == 0 { Sign::Plus } else { Sign::Minus };
        let t = rng.below(4) as usize;
        let others: Vec<Unary> = (0..t).map(|_| gaussian_unary(&mut rng)).collect();
        let extra = 1 + rng.below(4) as usize;
        let f = sym(&sigma.unary(), extra, &others);
        assert!(f.rd(sigma) <= t as i64);
    }

    // A self loop on a vanishing signature drops both degrees by one.
    let mut done = 0;
    while done < 100 {
        let sigma = if rng.below(2) == 0 { Sign::Plus } else { Sign::Minus };
        let t = rng.below(3) as usize;
        let others: Vec<Unary> = (0..t).map(|_| gaussian_unary(&mut rng)).collect();
        let f = sym(&sigma.unary(), 2 + rng.below(3) as usize, &others);
        if f.is_zero() || f.vd(sigma) == 0 || f.arity() < 2 {
            continue;
        }
        let g = f.self_loop();
        assert_eq!(g.rd(sigma), f.rd(sigma) - 1);
        assert_eq!(g.vd(sigma), f.vd(sigma) - 1);
        done += 1;
    }

    // Connecting a non-vanishing unary preserves the recurrence degree.
    let mut done = 0;
    while done < 100 {
        let sigma = if rng.below(2) == 0 { Sign::Plus } else { Sign::Minus };
        let t = rng.below(3) as usize;
        let others: Vec<Unary> = (0..t).map(|_| gaussian_unary(&mut rng)).collect();
        let f = sym(&sigma.unary(), 2 + rng.below(3) as usize, &others);
        let g = SymSig::new(gaussian_unary(&mut rng).to_vec());
        if f.is_zero() || g.is_zero() || g.vd(sigma) != 0 {
            continue;
        }
        if (f.arity() as i64) - 1 < f.rd(sigma) {
            continue;
        }
        assert_eq!(f.connect(&g).rd(sigma), f.rd(sigma));
        done += 1;
    }

    // Z-basis shape law: support is exactly 0..=rd⁺ after Z⁻¹.
    let mut done = 0;
    while done < 100 {
        let t = rng.below(4) as usize;
        let others: Vec<Unary> = (0..t).map(|_| gaussian_unary(&mut rng)).collect();
        let f = sym(&Sign::Plus.unary(), 1 + rng.below(4) as usize, &others);
        if f.is_zero() {
            continue;
        }
        let d = f.rd(Sign::Plus);
        if d < 0 || d as usize >= f.arity() {
            continue;
        }
        let fhat = apply_contra(&Mat2::z_inv(), &f);
        for k in 0..=f.arity() {
            if k as i64 > d {
                assert!(fhat.get(k).is_zero());
            }
        }
        assert!(!fhat.get(d as usize).is_zero());
        done += 1;
    }
    println!("criterion 7: PASS (structural lemmas, 100 instances each)");
}

#[test]
fn criterion_08_arity4_calculus() {
    let mut rng = Rng::new(0x8888);
    let rand_mat3 = |rng: &mut Rng| {
        Mat3::from_ints([
            [rng.int(-2, 2), rng.int(-2, 2), rng.int(-2, 2)],
            [rng.int(-2, 2), rng.int(-2, 2), rng.int(-2, 2)],
            [rng.int(-2, 2), rng.int(-2, 2), rng.int(-2, 2)],
        ])
    };
    for _ in 0..100 {
        let (a, b) = (psi(&rand_mat3(&mut rng)), psi(&rand_mat3(&mut rng)));
        assert_eq!(phi(&a.mul(&b)).m, phi(&a).mul(&phi(&b)).m);
    }
    for _ in 0..100 {
        let f = int_sig(&mut rng, 4);
        let m = Arity4Mat::from_symmetric(&f).expect("arity 4");
        let t = nonsingular_mat(&mut rng);
        assert_eq!(
            phi(&m.conjugate(&t)).det(),
            &phi(&m).det() * &t.det().pow(6)
        );
    }
    for k in 0..10i64 {
        let t = Cyclo::from_int(k - 4);
        let grid = tetrahedron_grid(&t);
        let (_, sig) = grid.fgate_signature(24).expect("in bound");
        let sig = sig.expect("symmetric gate");
        assert_eq!(sig, tetrahedron_closed_form(&t));
        assert_eq!(compressed(&sig).expect("arity 4").det(), Cyclo::from_int(4));
    }
    // Edge-decorated tetrahedron: ĥ = [3c²+6ct²+t⁴, 3ct+t³, c+t², t, 1],
    // compressed determinant 4c³.
    for _ in 0..10 {
        let c = Cyclo::from_int(rng.int(1, 5));
        let t = Cyclo::from_int(rng.int(-4, 4));
        let (c2, t2) = (&c * &c, &t * &t);
        let h = SymSig::new(vec![
            &(&(&Cyclo::from_int(3) * &c2) + &(&(&Cyclo::from_int(6) * &c) * &t2))
                + &(&t2 * &t2),
            &(&(&Cyclo::from_int(3) * &c) * &t) + &(&t2 * &t),
            &c + &t2,
            t.clone(),
            Cyclo::one(),
        ]);
        let want = &Cyclo::from_int(4) * &(&(&c * &c) * &c);
        assert_eq!(compressed(&h).expect("arity 4").det(), want);
    }
    let third = rat(1, 3);
    for k in 0..=12u32 {
        let (_, ak) = approx_sequence(k);
        assert_eq!(ak, &third - &(&third * &rat(-1, 2).pow(k as i32)));
        let gap: Rat = (&ak - &third) * if k % 2 == 0 { rat(-1, 1) } else { rat(1, 1) };
        assert_eq!(gap, &third * &rat(1, 2).pow(k as i32));
    }
    let lambdas = [
        Cyclo::from_int(2),
        Cyclo::from_int(3),
        &Cyclo::one() + &Cyclo::i(),
    ];
    let mut checked = 0;
    'outer: for n in 2..=7usize {
        for lambda in &lambdas {
            // One single-block and one split-block shape per (n, λ).
            for blocks in [vec![n], vec![n / 2, n - n / 2]] {
                let (_, det) = block_vandermonde(n, &blocks, lambda).expect("blocks sum to n");
                assert!(!det.is_zero());
                checked += 1;
                if checked >= 20 {
                    break 'outer;
                }
            }
        }
    }
    assert!(checked >= 20);
    println!("criterion 8: PASS (arity-4 calculus: phi, det law, gadget closed forms)");
}

/// The classifier corpus shared by criteria 9–11: named signature sets with
/// the expected verdict polarity.
fn corpus() -> Vec<(&'static str, Vec<SymSig>, bool)> {
    let i = Cyclo::i();
    let one = Cyclo::one();
    let mut out: Vec<(&'static str, Vec<SymSig>, bool)> = Vec::new();

    out.push(("eulerian", vec![SymSig::from_ints(&[3, 0, 1, 0, 3])], false));
    for lam in [Cyclo::zero(), one.clone(), Cyclo::from_int(2), i.clone()] {
        for arity in [3usize, 4] {
            let mut e = vec![Cyclo::zero(); arity + 1];
            e[0] = lam.clone();
            e[1] = one.clone();
            out.push(("matchings", vec![SymSig::new(e)], false));
        }
    }
    for b in [one.clone(), Cyclo::from_int(2), i.clone(), &one + &i] {
        for arity in [3usize, 4] {
            let mut e = vec![Cyclo::zero(); arity + 1];
            e[0] = one.clone();
            e[arity] = b.clone();
            out.push(("generalized-equality", vec![SymSig::new(e)], true));
        }
    }
    // The three affine families as tensor sums.
    out.push((
        "f1",
        vec![tensor_sum(&[one.clone(), Cyclo::zero()], &[Cyclo::zero(), one.clone()], &i, 3)],
        true,
    ));
    out.push((
        "f2",
        vec![tensor_sum(&[one.clone(), one.clone()], &[one.clone(), -one.clone()], &i, 4)],
        true,
    ));
    out.push((
        "f3",
        vec![tensor_sum(&[one.clone(), i.clone()], &[one.clone(), -i.clone()], &i, 3)],
        true,
    ));
    // P2-form samples: Z-images of generalized equalities.
    for beta in [Cyclo::from_int(2), i.clone(), &one + &i] {
        out.push((
            "p2",
            vec![tensor_sum(&[one.clone(), i.clone()], &[one.clone(), -i.clone()], &beta, 4)],
            true,
        ));
    }
    // A3 canonical sample: α = ζ₈.
    let alpha = Cyclo::zeta(8, 1);
    out.push((
        "a3",
        vec![tensor_sum(&[one.clone(), alpha.clone()], &[one.clone(), -alpha], &i, 3)],
        true,
    ));
    // Vanishing samples.
    let v_plus = sym(&Sign::Plus.unary(), 3, &[[one.clone(), Cyclo::from_int(2)]]);
    let v_minus = sym(&Sign::Minus.unary(), 3, &[[one.clone(), Cyclo::from_int(2)]]);
    out.push(("vanishing", vec![v_plus.clone()], true));
    // Mixed-sign vanishing pair is hard.
    out.push(("mixed-vanishing", vec![v_plus.clone(), v_minus], false));
    // Vanishing pivot with an incompatible unary is hard.
    let pivot = sym(
        &Sign::Plus.unary(),
        3,
        &[[one.clone(), Cyclo::from_int(2)], [one.clone(), Cyclo::from_int(3)]],
    );
    assert!(pivot.rd(Sign::Plus) >= 2);
    out.push((
        "vanishing-plus-degenerate-unary",
        vec![pivot.clone(), SymSig::new(vec![one.clone(), Cyclo::zero()])],
        false,
    ));
    // Vanishing pivots with binaries in 𝓡₂⁺ stay tractable (case 4).
    out.push((
        "vanishing-plus-binary",
        vec![pivot, SymSig::new(vec![one.clone(), i.clone(), -one.clone()])],
        true,
    ));
    out
}

#[test]
fn criterion_09_classifier_corpus() {
    for (name, sigs, tractable) in corpus() {
        let verdict = if sigs.len() == 1 {
            classify_single(&sigs[0])
        } else {
            classify_set(&sigs)
        };
        assert_eq!(
            verdict.is_tractable(),
            tractable,
            "corpus entry `{name}` misclassified"
        );
        if name == "vanishing-plus-binary" {
            assert!(matches!(
                verdict,
                Verdict::Tractable {
                    case: TractableCase::VanishingPlusBinary | TractableCase::R2Fibonacci,
                    ..
                }
            ));
        }
    }
    println!("criterion 9: PASS (classifier corpus)");
}

#[test]
fn criterion_10_dispatcher_equivalence() {
    let mut rng = Rng::new(0xAAAA);
    for (name, sigs, tractable) in corpus() {
        if !tractable {
            continue;
        }
        let mut done = 0;
        while done < 5 {
            let picks: Vec<SymSig> = (0..4)
                .map(|_| sigs[rng.below(sigs.len() as u64) as usize].clone())
                .collect();
            let Some(g) = random_closed_grid(&mut rng, picks) else { continue };
            if g.edges().len() > 10 {
                continue;
            }
            let (value, method) =
                eval_auto(&g, 24).unwrap_or_else(|e| panic!("eval_auto on `{name}`: {e}"));
            assert_eq!(
                value,
                g.holant_brute().expect("in bound"),
                "dispatcher ({method}) disagrees with brute force on `{name}`"
            );
            done += 1;
        }
    }
    println!("criterion 10: PASS (dispatcher equals brute force on the tractable corpus)");
}

#[test]
fn criterion_11_witness_reverification() {
    let mut total = 0;
    for (name, sigs, tractable) in corpus() {
        if !tractable {
            continue;
        }
        let verdict = classify_set(&sigs);
        assert!(verdict.is_tractable(), "corpus entry `{name}` misclassified");
        assert!(
            verify_verdict(&sigs, &verdict),
            "verdict for `{name}` failed re-verification"
        );
        total += 1;
    }
    assert!(total > 0);
    println!("criterion 11: PASS (witness re-verification, {total}/{total} verdicts)");
}
