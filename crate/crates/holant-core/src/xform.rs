//! 2×2 holographic transformations and their action on symmetric signatures.
//!
//! A transformation `T` acts contravariantly on a signature regarded as a
//! column tensor (`f ↦ T^⊗n f`, generator side) and covariantly on a row
//! tensor (`f ↦ f T^⊗n`, recognizer side). Both actions are computed
//! directly on weight tables, never through the full 2^n tensor (the unit
//! tests validate against that expansion).
//!
//! The module also carries the named matrices used throughout the dichotomy
//! — most importantly `Z`, which maps the vanishing basis `{[1,i], [1,−i]}`
//! to `{[1,0], [0,1]}` scaled — orthogonality detection up to a scalar, and
//! membership tests for the projective stabilizers of the affine signature
//! set (a 24-element group generated by `diag(1, i)` and the Hadamard
//! matrix) and of the product-type set (scaled diagonal and antidiagonal
//! matrices).

use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;

use crate::cyclo::{rat, sqrt_rational, Cyclo};
use crate::sigalg::{binom, SymSig, Unary};

/// A 2×2 matrix over the cyclotomics, `m[row][col]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub m: [[Cyclo; 2]; 2],
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

fn half_sqrt2() -> Cyclo {
    // 1/√2, exactly.
    sqrt_rational(&rat(1, 2)).expect("small rational")
}

impl Mat2 {
    pub fn new(m: [[Cyclo; 2]; 2]) -> Self {
        Mat2 { m }
    }

    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        Mat2::new(m.map(|row| row.map(Cyclo::from_int)))
    }

    /// Identity.
    pub fn identity() -> Self {
        Mat2::from_ints([[1, 0], [0, 1]])
    }

    /// Bit flip `[[0,1],[1,0]]`.
    pub fn x() -> Self {
        Mat2::from_ints([[0, 1], [1, 0]])
    }

    /// `diag(1, i)`.
    pub fn d() -> Self {
        Mat2::new([
            [Cyclo::one(), Cyclo::zero()],
            [Cyclo::zero(), Cyclo::i()],
        ])
    }

    /// Normalized Hadamard matrix `(1/√2)·[[1,1],[1,−1]]`.
    pub fn h2() -> Self {
        let s = half_sqrt2();
        Mat2::new([
            [s.clone(), s.clone()],
            [s.clone(), -s],
        ])
    }

    /// `Z = (1/√2)·[[1,1],[i,−i]]`, the change of basis sending the
    /// vanishing directions to coordinate directions; satisfies
    /// `Z·Zᵀ = diag(1,−1)` and `Z = D·H₂`.
    pub fn z() -> Self {
        let s = half_sqrt2();
        let i = Cyclo::i();
        Mat2::new([
            [s.clone(), s.clone()],
            [&i * &s, -(&i * &s)],
        ])
    }

    /// Exact inverse of [`Mat2::z`].
    pub fn z_inv() -> Self {
        Mat2::z().inverse().expect("Z is invertible")
    }

    /// `diag(1, α^k)` with α = ζ₈ (so α² = i).
    pub fn alpha_diag(k: u64) -> Self {
        Mat2::omega_diag(8, k)
    }

    /// `diag(1, ζ_N^k)`.
    pub fn omega_diag(n: u64, k: u64) -> Self {
        Mat2::new([
            [Cyclo::one(), Cyclo::zero()],
            [Cyclo::zero(), Cyclo::zeta(n, k)],
        ])
    }

    /// `diag(a, b)`.
    pub fn diag(a: Cyclo, b: Cyclo) -> Self {
        Mat2::new([[a, Cyclo::zero()], [Cyclo::zero(), b]])
    }

    /// Matrix whose columns are the given unaries.
    pub fn from_columns(c0: &Unary, c1: &Unary) -> Self {
        Mat2::new([
            [c0[0].clone(), c1[0].clone()],
            [c0[1].clone(), c1[1].clone()],
        ])
    }

    pub fn col(&self, j: usize) -> Unary {
        [self.m[0][j].clone(), self.m[1][j].clone()]
    }

    pub fn det(&self) -> Cyclo {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new([
            [self.m[0][0].clone(), self.m[1][0].clone()],
            [self.m[0][1].clone(), self.m[1][1].clone()],
        ])
    }

    pub fn scale(&self, s: &Cyclo) -> Mat2 {
        Mat2::new([
            [&self.m[0][0] * s, &self.m[0][1] * s],
            [&self.m[1][0] * s, &self.m[1][1] * s],
        ])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = [[Cyclo::zero(), Cyclo::zero()], [Cyclo::zero(), Cyclo::zero()]];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = &(&self.m[r][0] * &rhs.m[0][c]) + &(&self.m[r][1] * &rhs.m[1][c]);
            }
        }
        Mat2::new(out)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let inv_det = self.det().inv()?;
        Some(Mat2::new([
            [&self.m[1][1] * &inv_det, -(&self.m[0][1] * &inv_det)],
            [-(&self.m[1][0] * &inv_det), &self.m[0][0] * &inv_det],
        ]))
    }

    /// Apply to a unary: `T·u`.
    pub fn apply_unary(&self, u: &Unary) -> Unary {
        [
            &(&self.m[0][0] * &u[0]) + &(&self.m[0][1] * &u[1]),
            &(&self.m[1][0] * &u[0]) + &(&self.m[1][1] * &u[1]),
        ]
    }

    /// `Some(λ)` when `T·Tᵀ = λ·I` with λ ≠ 0 (an orthogonal matrix up to
    /// scale), `None` otherwise.
    pub fn is_orthogonal(&self) -> Option<Cyclo> {
        let p = self.mul(&self.transpose());
        if p.m[0][1].is_zero() && p.m[1][0].is_zero() && p.m[0][0] == p.m[1][1] && !p.m[0][0].is_zero()
        {
            Some(p.m[0][0].clone())
        } else {
            None
        }
    }

    /// Projective normalization: scale so the first nonzero entry (row-major)
    /// is 1. `None` for the zero matrix.
    fn projective(&self) -> Option<Mat2> {
        let lead = [&self.m[0][0], &self.m[0][1], &self.m[1][0], &self.m[1][1]]
            .into_iter()
            .find(|v| !v.is_zero())?;
        Some(self.scale(&lead.inv().expect("nonzero")))
    }

    /// Membership of the projective stabilizer of the affine signature set:
    /// the 24-element group generated (projectively) by `diag(1,i)` and the
    /// Hadamard matrix, scalars ignored.
    pub fn in_stab_a(&self) -> bool {
        if self.det().is_zero() {
            return false;
        }
        let target = self.projective().expect("invertible");
        stab_a_projective().contains(&target)
    }

    /// Membership of the stabilizer of the product-type set: nonzero scalar
    /// multiples of diagonal or antidiagonal matrices.
    pub fn in_stab_p(&self) -> bool {
        if self.det().is_zero() {
            return false;
        }
        (self.m[0][1].is_zero() && self.m[1][0].is_zero())
            || (self.m[0][0].is_zero() && self.m[1][1].is_zero())
    }
}

/// The projective closure of ⟨D, H₂⟩, computed once per call (24 elements).
fn stab_a_projective() -> Vec<Mat2> {
    let gens = [Mat2::d(), Mat2::h2()];
    let mut elems: Vec<Mat2> = Vec::new();
    elems.push(Mat2::identity());
    let mut frontier = elems.clone();
    while let Some(t) = frontier.pop() {
        for g in &gens {
            let next = t.mul(g).projective().expect("products of units");
            if !elems.contains(&next) {
                elems.push(next.clone());
                frontier.push(next);
            }
        }
    }
    debug_assert_eq!(elems.len(), 24);
    elems
}

/// Contravariant action `T^⊗n f` on a symmetric signature, computed on
/// weight tables:
/// `f'_j = Σ_k f_k Σ_a C(j,a) C(n−j,k−a) t₁₁^a t₁₀^{j−a} t₀₁^{k−a} t₀₀^{n−j−k+a}`.
pub fn apply_contra(t: &Mat2, f: &SymSig) -> SymSig {
    let n = f.arity();
    // Power tables avoid recomputing big exponents in the inner loop.
    let pows = |v: &Cyclo| -> Vec<Cyclo> { (0..=n as u64).map(|e| v.pow(e)).collect() };
    let (p00, p01, p10, p11) = (
        pows(&t.m[0][0]),
        pows(&t.m[0][1]),
        pows(&t.m[1][0]),
        pows(&t.m[1][1]),
    );
    let out = (0..=n)
        .map(|j| {
            let mut acc = Cyclo::zero();
            for (k, fk) in f.entries().iter().enumerate() {
                if fk.is_zero() {
                    continue;
                }
                let mut inner = Cyclo::zero();
                let lo = k.saturating_sub(n - j);
                for a in lo..=j.min(k) {
                    let count = BigRational::from_integer(binom(j, a) * binom(n - j, k - a));
                    let term = &(&p11[a] * &p10[j - a]) * &(&p01[k - a] * &p00[(n - j) - (k - a)]);
                    inner = &inner + &(&term * &Cyclo::from_rat(count));
                }
                acc = &acc + &(fk * &inner);
            }
            acc
        })
        .collect();
    SymSig::new(out)
}

/// Covariant action `f T^⊗n` (row side); equals the contravariant action of
/// the transpose.
pub fn apply_co(f: &SymSig, t: &Mat2) -> SymSig {
    apply_contra(&t.transpose(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigalg::Sign;
    use alloc::vec;

    /// Oracle: expand to the full 2^n table, apply T^⊗n entrywise, and read
    /// the weights back (valid because the result of a symmetric input is
    /// symmetric).
    fn apply_contra_oracle(t: &Mat2, f: &SymSig) -> SymSig {
        let n = f.arity();
        let full: Vec<Cyclo> = (0..1usize << n)
            .map(|x| f.get(x.count_ones() as usize).clone())
            .collect();
        let mut out = vec![Cyclo::zero(); n + 1];
        for x in 0..1usize << n {
            if (x as u32).count_ones() != x.count_ones() {
                unreachable!()
            }
            let mut acc = Cyclo::zero();
            for (y, fy) in full.iter().enumerate() {
                let mut term = fy.clone();
                for bit in 0..n {
                    let xb = (x >> bit) & 1;
                    let yb = (y >> bit) & 1;
                    term = &term * &t.m[xb][yb];
                }
                acc = &acc + &term;
            }
            // Every weight class is hit multiple times; just overwrite (all
            // members agree) — and check agreement for the test's benefit.
            let w = x.count_ones() as usize;
            if x == (1usize << w) - 1 {
                out[w] = acc;
            } else {
                assert_eq!(out[w], acc, "result not symmetric");
            }
        }
        SymSig::new(out)
    }

    #[test]
    fn z_identities() {
        let z = Mat2::z();
        // Z·Zᵀ = diag(1, −1).
        assert_eq!(
            z.mul(&z.transpose()),
            Mat2::from_ints([[1, 0], [0, -1]])
        );
        assert_eq!(z, Mat2::d().mul(&Mat2::h2()));
        // Z⁻¹ maps [3,0,1,0,3] to 2·[0,0,1,0,0].
        let f = SymSig::from_ints(&[3, 0, 1, 0, 3]);
        assert_eq!(
            apply_contra(&Mat2::z_inv(), &f),
            SymSig::from_ints(&[0, 0, 2, 0, 0])
        );
        // Equality =₂ transported by Z on the recognizer side becomes ≠₂.
        assert_eq!(
            apply_co(&SymSig::from_ints(&[1, 0, 1]), &z),
            SymSig::from_ints(&[0, 1, 0])
        );
        // Z sends the coordinate directions to the vanishing directions
        // (up to the 1/√2 normalization).
        let zu = z.apply_unary(&[Cyclo::one(), Cyclo::zero()]);
        let expected = Sign::Plus.unary();
        assert_eq!(&zu[1] * &expected[0], &zu[0] * &expected[1]);
    }

    #[test]
    fn contra_action_matches_tensor_oracle() {
        let mats = [
            Mat2::z(),
            Mat2::h2(),
            Mat2::from_ints([[1, 2], [3, 4]]),
            Mat2::new([
                [Cyclo::i(), Cyclo::one()],
                [Cyclo::zeta(3, 1), Cyclo::from_int(-2)],
            ]),
        ];
        let sigs = [
            SymSig::from_ints(&[1]),
            SymSig::from_ints(&[5, -3]),
            SymSig::from_ints(&[3, 0, 1, 0, 3]),
            SymSig::from_ints(&[0, 1, 2, 0, -1, 7]),
            SymSig::new(vec![
                Cyclo::i(),
                Cyclo::zero(),
                Cyclo::zeta(5, 2),
                Cyclo::from_int(2),
            ]),
        ];
        for t in &mats {
            for f in &sigs {
                assert_eq!(apply_contra(t, f), apply_contra_oracle(t, f));
            }
        }
    }

    #[test]
    fn co_action_is_transposed_contra() {
        let t = Mat2::from_ints([[1, 2], [3, 4]]);
        let f = SymSig::from_ints(&[1, 0, -2, 5]);
        assert_eq!(apply_co(&f, &t), apply_contra(&t.transpose(), &f));
        // Composition: (ST)^⊗n f = S^⊗n (T^⊗n f).
        let s = Mat2::from_ints([[0, 1], [1, 1]]);
        assert_eq!(
            apply_contra(&s.mul(&t), &f),
            apply_contra(&s, &apply_contra(&t, &f))
        );
    }

    #[test]
    fn orthogonality_detection() {
        assert_eq!(Mat2::h2().is_orthogonal(), Some(Cyclo::one()));
        assert_eq!(
            Mat2::from_ints([[1, 1], [1, -1]]).is_orthogonal(),
            Some(Cyclo::from_int(2))
        );
        assert_eq!(
            Mat2::from_ints([[3, 0], [0, 3]]).is_orthogonal(),
            Some(Cyclo::from_int(9))
        );
        assert!(Mat2::z().is_orthogonal().is_none());
        assert!(Mat2::from_ints([[1, 2], [3, 4]]).is_orthogonal().is_none());
        assert!(Mat2::from_ints([[0, 0], [0, 0]]).is_orthogonal().is_none());
    }

    #[test]
    fn affine_stabilizer_membership() {
        assert!(Mat2::identity().in_stab_a());
        assert!(Mat2::d().in_stab_a());
        assert!(Mat2::h2().in_stab_a());
        assert!(Mat2::z().in_stab_a());
        assert!(Mat2::x().in_stab_a());
        // Scalar multiples do not matter.
        assert!(Mat2::h2().scale(&Cyclo::from_int(5)).in_stab_a());
        assert!(Mat2::d().scale(&Cyclo::zeta(3, 1)).in_stab_a());
        assert!(!Mat2::from_ints([[1, 0], [0, 2]]).in_stab_a());
        assert!(!Mat2::from_ints([[1, 2], [3, 4]]).in_stab_a());
        assert!(!Mat2::from_ints([[1, 0], [0, 0]]).in_stab_a());
        // α = ζ₈ on the diagonal is *not* in the stabilizer (it moves the
        // affine set), while i = α² is.
        assert!(!Mat2::alpha_diag(1).in_stab_a());
        assert!(Mat2::alpha_diag(2).in_stab_a());
    }

    #[test]
    fn product_stabilizer_membership() {
        assert!(Mat2::identity().in_stab_p());
        assert!(Mat2::x().in_stab_p());
        assert!(Mat2::diag(Cyclo::from_int(3), Cyclo::i()).in_stab_p());
        assert!(Mat2::new([
            [Cyclo::zero(), Cyclo::from_int(2)],
            [Cyclo::i(), Cyclo::zero()],
        ])
        .in_stab_p());
        assert!(!Mat2::h2().in_stab_p());
        assert!(!Mat2::diag(Cyclo::one(), Cyclo::zero()).in_stab_p());
    }
}
