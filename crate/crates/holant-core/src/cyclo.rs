//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! A [`Cyclo`] value is a rational linear combination of roots of unity, held
//! in a fixed canonical basis so that equality of field elements is exactly
//! equality of representations. The basis is the tensor-product power basis:
//! the conductor `n` (always 1 or ≢ 2 mod 4) is factored into prime powers
//! `q = p^a`, each factor contributes the power basis `{ζ_q^e : 0 ≤ e < φ(q)}`
//! cut out by the cyclotomic polynomial Φ_q, and a monomial ζ_n^k is a basis
//! element exactly when every Chinese-remainder component of `k` is in range.
//! The conductor is minimised after every operation, so a value that happens
//! to lie in a smaller field is always stored there (rationals always have
//! conductor 1, `i` has conductor 4, and so on).
//!
//! On top of the ring operations the module provides conjugation and Galois
//! action, exact inversion (via the product of conjugates), root-of-unity
//! detection with exact order, square roots of rationals (quadratic Gauss
//! sums) and of the cyclotomic elements whose square roots are again
//! cyclotomic, parsing, display (round-trips through [`parse_cyclo`]), and a
//! floating-point embedding for diagnostics.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used for all coefficients.
pub type Rat = BigRational;

/// Convenience constructor for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// An element of a cyclotomic field, in canonical form.
///
/// Invariants: `n` is 1 or ≢ 2 (mod 4) and is the exact conductor of the
/// element; every exponent in `c` is a canonical basis monomial of ℚ(ζ_n);
/// no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    n: u64,
    c: BTreeMap<u64, Rat>,
}

/// One prime-power factor `q = p^a` of a conductor, with the data needed to
/// split exponents into Chinese-remainder components and put them back.
#[derive(Clone, Copy)]
struct Factor {
    p: u64,
    a: u32,
    q: u64,
    /// n / q
    m: u64,
    /// m⁻¹ mod q
    minv: u64,
}

impl Factor {
    fn phi(&self) -> u64 {
        (self.p - 1) * self.q / self.p
    }

    /// Component of the exponent `k` at this factor: ζ_n^k contributes
    /// ζ_q^{component}.
    fn component(&self, k: u64) -> u64 {
        ((k as u128 % self.q as u128) * self.minv as u128 % self.q as u128) as u64
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(x: u64, modulus: u64) -> u64 {
    // Extended Euclid; the caller guarantees gcd(x, modulus) = 1.
    let (mut r0, mut r1) = (modulus as i128, (x % modulus) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(modulus as i128) as u64
}

fn factors_of(n: u64) -> Vec<Factor> {
    factorize(n)
        .into_iter()
        .map(|(p, a)| {
            let q = p.pow(a);
            let m = n / q;
            Factor { p, a, q, m, minv: mod_inverse(m % q, q) }
        })
        .collect()
}

/// Recombine CRT components into an exponent mod n.
fn recombine(n: u64, factors: &[Factor], comps: &[u64]) -> u64 {
    let mut k: u128 = 0;
    for (f, &d) in factors.iter().zip(comps) {
        k += d as u128 * f.m as u128;
    }
    (k % n as u128) as u64
}

/// Rewrite a single monomial ζ_n^k as a ±1 combination of canonical basis
/// monomials, by expanding out-of-range components through Φ_q.
fn reduce_monomial(n: u64, factors: &[Factor], k: u64) -> Vec<(u64, i64)> {
    let comps: Vec<u64> = factors.iter().map(|f| f.component(k)).collect();
    let mut terms: Vec<(Vec<u64>, i64)> = vec![(comps, 1)];
    for (idx, f) in factors.iter().enumerate() {
        let phi = f.phi();
        if terms.iter().all(|(d, _)| d[idx] < phi) {
            continue;
        }
        let step = f.q / f.p; // p^{a-1}
        let mut next = Vec::with_capacity(terms.len());
        for (d, s) in terms {
            let e = d[idx];
            if e < phi {
                next.push((d, s));
            } else {
                // ζ_q^e = -Σ_{j=0}^{p-2} ζ_q^{e-φ(q)+j·p^{a-1}}, all in range.
                let base = e - phi;
                for j in 0..(f.p - 1) {
                    let mut d2 = d.clone();
                    d2[idx] = base + j * step;
                    next.push((d2, -s));
                }
            }
        }
        terms = next;
    }
    terms
        .into_iter()
        .map(|(d, s)| (recombine(n, factors, &d), s))
        .collect()
}

impl Cyclo {
    /// The zero element (conductor 1).
    pub fn zero() -> Self {
        Cyclo { n: 1, c: BTreeMap::new() }
    }

    /// The unit element.
    pub fn one() -> Self {
        Cyclo::from_int(1)
    }

    /// The imaginary unit i = ζ₄.
    pub fn i() -> Self {
        Cyclo::zeta(4, 1)
    }

    /// A rational integer as a field element.
    pub fn from_int(v: i64) -> Self {
        Cyclo::from_rat(Rat::from_integer(BigInt::from(v)))
    }

    /// A rational number as a field element.
    pub fn from_rat(v: Rat) -> Self {
        if v.is_zero() {
            Cyclo::zero()
        } else {
            Cyclo { n: 1, c: BTreeMap::from([(0, v)]) }
        }
    }

    /// The root of unity ζ_n^k (e^{2πik/n}). Panics if `n` is zero.
    pub fn zeta(n: u64, k: u64) -> Self {
        assert!(n > 0, "zeta: order must be positive");
        let one = Rat::one();
        Cyclo::from_raw(n, [(k % n, one)])
    }

    /// Build and canonicalise an element from arbitrary (exponent mod n,
    /// coefficient) monomials over ℚ(ζ_n).
    fn from_raw(n: u64, monomials: impl IntoIterator<Item = (u64, Rat)>) -> Self {
        let factors = factors_of(n);
        let mut c: BTreeMap<u64, Rat> = BTreeMap::new();
        for (k, coeff) in monomials {
            if coeff.is_zero() {
                continue;
            }
            for (exp, sign) in reduce_monomial(n, &factors, k % n) {
                let entry = c.entry(exp).or_insert_with(Rat::zero);
                if sign > 0 {
                    *entry += &coeff;
                } else {
                    *entry -= &coeff;
                }
            }
        }
        c.retain(|_, v| !v.is_zero());
        let mut out = Cyclo { n, c };
        out.minimize_conductor();
        out
    }

    /// Shrink the conductor to the exact conductor of the element.
    fn minimize_conductor(&mut self) {
        if self.c.is_empty() {
            self.n = 1;
            return;
        }
        'retry: loop {
            if self.n == 1 {
                return;
            }
            let factors = factors_of(self.n);
            for f in &factors {
                let comps: Vec<u64> =
                    self.c.keys().map(|&k| f.component(k)).collect();
                // Descend one level in this factor when the element lies in
                // the subfield: all components divisible by p (a ≥ 2), or all
                // zero (a = 1, and the q = 4 case, since conductor 2 is not
                // allowed).
                let droppable = comps.iter().all(|&d| d == 0);
                let divisible = comps.iter().all(|&d| d % f.p == 0);
                let (new_n, divide) = if droppable {
                    (self.n / f.q, false)
                } else if divisible && f.a >= 2 && !(f.p == 2 && f.a == 2) {
                    (self.n / f.p, true)
                } else {
                    continue;
                };
                let new_factors = factors_of(new_n);
                let mut new_c = BTreeMap::new();
                for (&k, coeff) in &self.c {
                    let comps: Vec<u64> = new_factors
                        .iter()
                        .map(|nf| {
                            let old = factors
                                .iter()
                                .find(|of| of.p == nf.p)
                                .expect("factor survives");
                            let d = old.component(k);
                            if divide && nf.p == f.p { d / f.p } else { d }
                        })
                        .collect();
                    new_c.insert(recombine(new_n, &new_factors, &comps), coeff.clone());
                }
                self.n = new_n;
                self.c = new_c;
                continue 'retry;
            }
            return;
        }
    }

    /// Re-express the element over the larger conductor `n2` (which `n`
    /// must divide). Basis monomials stay basis monomials.
    fn promote(&self, n2: u64) -> Cyclo {
        debug_assert_eq!(n2 % self.n, 0);
        if n2 == self.n {
            return self.clone();
        }
        let ratio = n2 / self.n;
        let c = self
            .c
            .iter()
            .map(|(&k, v)| (((k as u128 * ratio as u128) % n2 as u128) as u64, v.clone()))
            .collect();
        Cyclo { n: n2, c }
    }

    /// The conductor: the least N with the element in ℚ(ζ_N) (never ≡ 2 mod 4).
    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Coefficient of the basis monomial ζ_n^k (zero when absent or not a
    /// basis exponent).
    pub fn coeff(&self, k: u64) -> Rat {
        self.c.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Iterate over (exponent, coefficient) pairs of the canonical form.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.c.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.c.len() == 1 && self.c.get(&0).is_some_and(|v| v.is_one())
    }

    /// `Some(q)` when the element is the rational number q.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.n == 1 {
            self.c.get(&0).cloned()
        } else {
            None
        }
    }

    /// Complex conjugate (ζ ↦ ζ⁻¹).
    pub fn conj(&self) -> Cyclo {
        if self.n == 1 {
            return self.clone();
        }
        self.galois(self.n - 1).expect("n-1 is coprime to n")
    }

    /// Galois action ζ_n ↦ ζ_n^t; defined when gcd(t, n) = 1.
    pub fn galois(&self, t: u64) -> Option<Cyclo> {
        if self.n.gcd(&t) != 1 {
            return None;
        }
        Some(Cyclo::from_raw(
            self.n,
            self.c
                .iter()
                .map(|(&k, v)| (((k as u128 * t as u128) % self.n as u128) as u64, v.clone())),
        ))
    }

    /// Multiplicative inverse; `None` for zero.
    ///
    /// Computed exactly as the product of the nontrivial Galois conjugates
    /// divided by the (rational) field norm.
    pub fn inv(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Cyclo::from_rat(q.recip()));
        }
        let mut prod = Cyclo::one();
        for t in 2..self.n {
            if self.n.gcd(&t) == 1 {
                prod = &prod * &self.galois(t).expect("unit");
            }
        }
        let norm = (self * &prod)
            .as_rational()
            .expect("product over the full Galois orbit is rational");
        debug_assert!(!norm.is_zero());
        Some(&prod * &Cyclo::from_rat(norm.recip()))
    }

    /// Integer power (negative exponents through [`Cyclo::inv`]; `None` only
    /// for a negative power of zero).
    pub fn powi(&self, e: i64) -> Option<Cyclo> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            Some(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Cyclo {
        let mut base = self.clone();
        let mut acc = Cyclo::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Cyclo) -> Option<Cyclo> {
        Some(self * &rhs.inv()?)
    }

    /// If the element is a root of unity, its exact multiplicative order.
    ///
    /// Every root of unity in ℚ(ζ_n) has order dividing 2n (n the conductor),
    /// so the test is `z^{2n} = 1` followed by order minimisation.
    pub fn is_root_of_unity(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let bound = 2 * self.n;
        if !self.pow(bound).is_one() {
            return None;
        }
        let mut order = bound;
        for (p, _) in factorize(bound) {
            while order % p == 0 && self.pow(order / p).is_one() {
                order /= p;
            }
        }
        Some(order)
    }

    /// Floating-point image (re, im) under ζ_n ↦ e^{2πi/n}.
    pub fn to_float(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&k, v) in &self.c {
            let coeff = v.to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * core::f64::consts::PI * (k as f64) / (self.n as f64);
            re += coeff * libm::cos(theta);
            im += coeff * libm::sin(theta);
        }
        (re, im)
    }

    /// Squared absolute value |z|², exact; rational whenever the element is
    /// a rational multiple of a root of unity.
    pub fn norm_sq(&self) -> Cyclo {
        self * &self.conj()
    }

    /// Exact square root, when one exists in a cyclotomic field and this
    /// implementation can find it. Covers rationals, rational multiples of
    /// roots of unity, and elements of ℚ(i) whose norm is a perfect square
    /// (e.g. √(3+4i) = 2+i). Returns one of the two roots.
    pub fn sqrt(&self) -> Option<Cyclo> {
        self.sqrt_bounded(u64::MAX)
    }

    /// Like [`Cyclo::sqrt`], but refuses roots whose conductor would exceed
    /// `max_conductor`, without constructing them. A square root of a small
    /// element can land in an enormous field (√109 needs ζ₁₀₉), where every
    /// later multiplication or inversion is prohibitively expensive; callers
    /// that can fall back to treating the root symbolically use this to stay
    /// in cheap territory.
    pub fn sqrt_within(&self, max_conductor: u64) -> Option<Cyclo> {
        self.sqrt_bounded(max_conductor)
    }

    fn sqrt_bounded(&self, max_conductor: u64) -> Option<Cyclo> {
        if self.is_zero() {
            return Some(Cyclo::zero());
        }
        // Branch 1: |z|² a perfect rational square, z/|z| a root of unity.
        if let Some(nsq) = self.norm_sq().as_rational() {
            if let Some(r) = rational_exact_sqrt(&nsq) {
                let u = self
                    .checked_div(&Cyclo::from_rat(r.clone()))
                    .expect("r > 0 since z != 0");
                if let Some(m) = u.is_root_of_unity() {
                    let root_cond = sqrt_rational_conductor(&r)?;
                    if root_cond.lcm(&(2 * m)) > max_conductor {
                        return None;
                    }
                    // u = ζ_m^j for exactly one j; halve the angle.
                    for j in 0..m {
                        if u == Cyclo::zeta(m, j) {
                            let root = &Cyclo::zeta(2 * m, j) * &sqrt_rational(&r)?;
                            debug_assert_eq!(&root * &root, *self);
                            return Some(root);
                        }
                    }
                    unreachable!("a root of unity of order m is some power of ζ_m");
                }
            }
        }
        // Branch 2: Gaussian rationals a+bi with a²+b² a perfect square.
        if self.n == 4 || self.n == 1 {
            let a = self.coeff(0);
            let b = if self.n == 4 { self.coeff(1) } else { Rat::zero() };
            let t = &a * &a + &b * &b;
            if let Some(s) = rational_exact_sqrt(&t) {
                let half = rat(1, 2);
                let qx = &(&s + &a) * &half;
                let qy = &(&s - &a) * &half;
                let cond = sqrt_rational_conductor(&qx)?.lcm(&sqrt_rational_conductor(&qy)?);
                if cond.lcm(&4) > max_conductor {
                    return None;
                }
                let x = sqrt_rational(&qx)?;
                let y = sqrt_rational(&qy)?;
                for (sx, sy) in [(1, 1), (1, -1)] {
                    let cand = &(&x * &Cyclo::from_int(sx))
                        + &(&(&y * &Cyclo::from_int(sy)) * &Cyclo::i());
                    if &cand * &cand == *self {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

/// Upper bound on the conductor of `sqrt_rational(q)`, computed from the
/// factorization alone (no Gauss sums are built). `None` when the squarefree
/// part cannot be factored, mirroring [`sqrt_rational`].
fn sqrt_rational_conductor(q: &Rat) -> Option<u64> {
    if q.is_zero() {
        return Some(1);
    }
    let qa = q.abs();
    let m = (qa.numer() * qa.denom()).to_u64()?;
    let mut cond: u64 = if q.is_negative() { 4 } else { 1 };
    for (p, a) in factorize(m) {
        if a % 2 == 1 {
            let part = match p {
                2 => 8,
                p if p % 4 == 1 => p,
                p => 4 * p,
            };
            cond = cond.lcm(&part);
        }
    }
    Some(cond)
}

/// Exact square root of a nonnegative rational when it is a perfect square.
fn rational_exact_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Exact square root of any rational number.
///
/// Sign convention: the nonnegative real root for q ≥ 0, and i·√|q| for
/// q < 0. Built from quadratic Gauss sums: √2 = ζ₈ − ζ₈³ and, for an odd
/// prime p, Σ_a (a|p) ζ_p^a equals √p (p ≡ 1 mod 4) or i√p (p ≡ 3 mod 4).
///
/// Returns `None` only when the squarefree part cannot be factored because
/// numerator·denominator exceeds the machine-word factoring range.
pub fn sqrt_rational(q: &Rat) -> Option<Cyclo> {
    if q.is_zero() {
        return Some(Cyclo::zero());
    }
    let negative = q.is_negative();
    let qa = q.abs();
    // √(a/b) = √(ab)/b.
    let m = qa.numer() * qa.denom();
    let m: u64 = m.to_u64()?;
    let mut square_part = BigInt::one();
    let mut root = Cyclo::one();
    for (p, a) in factorize(m) {
        square_part *= BigInt::from(p).pow(a / 2);
        if a % 2 == 1 {
            root = &root * &sqrt_prime(p);
        }
    }
    let scale = Rat::new(square_part, qa.denom().clone());
    let mut out = &root * &Cyclo::from_rat(scale);
    if negative {
        out = &out * &Cyclo::i();
    }
    Some(out)
}

fn sqrt_prime(p: u64) -> Cyclo {
    if p == 2 {
        return &Cyclo::zeta(8, 1) - &Cyclo::zeta(8, 3);
    }
    // Quadratic Gauss sum over ℤ/p.
    let mut is_square = vec![false; p as usize];
    for a in 1..p {
        is_square[((a as u128 * a as u128) % p as u128) as usize] = true;
    }
    let one = Rat::one();
    let g = Cyclo::from_raw(
        p,
        (1..p).map(|a| {
            let c = if is_square[a as usize] { one.clone() } else { -one.clone() };
            (a, c)
        }),
    );
    if p % 4 == 1 {
        g
    } else {
        // g = i√p here, so divide by i.
        &g * &Cyclo::zeta(4, 3)
    }
}

// --- ring operations -------------------------------------------------------

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        let n = self.n.lcm(&rhs.n);
        let a = self.promote(n);
        let b = rhs.promote(n);
        let mut c = a.c;
        for (k, v) in b.c {
            let entry = c.entry(k).or_insert_with(Rat::zero);
            *entry += v;
        }
        c.retain(|_, v| !v.is_zero());
        let mut out = Cyclo { n, c };
        out.minimize_conductor();
        out
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self + &(-rhs)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            c: self.c.iter().map(|(&k, v)| (k, -v.clone())).collect(),
        }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if self.is_zero() || rhs.is_zero() {
            return Cyclo::zero();
        }
        let n = self.n.lcm(&rhs.n);
        let a = self.promote(n);
        let b = rhs.promote(n);
        let mut raw: BTreeMap<u64, Rat> = BTreeMap::new();
        for (&k1, v1) in &a.c {
            for (&k2, v2) in &b.c {
                let k = ((k1 as u128 + k2 as u128) % n as u128) as u64;
                let entry = raw.entry(k).or_insert_with(Rat::zero);
                *entry += v1 * v2;
            }
        }
        Cyclo::from_raw(n, raw)
    }
}

impl Div for &Cyclo {
    type Output = Cyclo;
    fn div(self, rhs: &Cyclo) -> Cyclo {
        self.checked_div(rhs).expect("division by zero cyclotomic")
    }
}

macro_rules! forward_owned_binop {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo { $trait::$method(&self, &rhs) }
        }
        impl $trait<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo { $trait::$method(&self, rhs) }
        }
        impl $trait<Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo { $trait::$method(self, &rhs) }
        }
    )*};
}
forward_owned_binop!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

// --- display ----------------------------------------------------------------

fn fmt_rat(v: &Rat) -> String {
    if v.denom().is_one() {
        format!("{}", v.numer())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl fmt::Display for Cyclo {
    /// Prints a form accepted by [`parse_cyclo`], e.g. `1 + 2*z(5) + 2*z(5)^4`
    /// in raw-monomial style over the canonical basis.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&k, v) in &self.c {
            let mag = v.abs();
            if first {
                if v.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if v.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let monomial = match k {
                0 => None,
                1 if self.n > 1 => Some(format!("z({})", self.n)),
                _ => Some(format!("z({})^{}", self.n, k)),
            };
            match monomial {
                None => f.write_str(&fmt_rat(&mag))?,
                Some(m) if mag.is_one() => f.write_str(&m)?,
                Some(m) => write!(f, "{}*{}", fmt_rat(&mag), m)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo({})", self)
    }
}

// --- parsing ----------------------------------------------------------------

/// Error from [`parse_cyclo`], with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseCycloError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseCycloError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl core::error::Error for ParseCycloError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: &str) -> Result<T, ParseCycloError> {
        Err(ParseCycloError { pos: self.pos, message: String::from(message) })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseCycloError> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(&format!("expected '{}'", b as char))
        }
    }

    fn uint(&mut self) -> Result<u64, ParseCycloError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| self.err("number out of range"), Ok)
    }

    fn int(&mut self) -> Result<i64, ParseCycloError> {
        let neg = self.eat(b'-');
        let v = self.uint()? as i64;
        Ok(if neg { -v } else { v })
    }

    /// number := uint ['/' uint]
    fn number(&mut self) -> Result<Cyclo, ParseCycloError> {
        let num = self.uint()?;
        if self.eat(b'/') {
            let den = self.uint()?;
            if den == 0 {
                return self.err("zero denominator");
            }
            Ok(Cyclo::from_rat(rat(num as i64, den as i64)))
        } else {
            Ok(Cyclo::from_int(num as i64))
        }
    }

    /// rational argument of sqrt: ['-'] uint ['/' uint]
    fn signed_rational(&mut self) -> Result<Rat, ParseCycloError> {
        let neg = self.eat(b'-');
        let num = self.uint()? as i64;
        let den = if self.eat(b'/') {
            let d = self.uint()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            d as i64
        } else {
            1
        };
        let v = rat(num, den);
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Cyclo, ParseCycloError> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                v
            }
            Some(b'i') if !self.starts_with_keyword() => {
                self.pos += 1;
                Cyclo::i()
            }
            Some(b'z') => {
                self.pos += 1;
                self.expect(b'(')?;
                let n = self.uint()?;
                if n == 0 {
                    return self.err("z(0) is undefined");
                }
                self.expect(b')')?;
                Cyclo::zeta(n, 1)
            }
            Some(b's') => {
                for ch in b"sqrt" {
                    if self.src.get(self.pos) != Some(ch) {
                        return self.err("expected 'sqrt'");
                    }
                    self.pos += 1;
                }
                self.expect(b'(')?;
                let q = self.signed_rational()?;
                self.expect(b')')?;
                match sqrt_rational(&q) {
                    Some(v) => v,
                    None => return self.err("sqrt argument too large to factor"),
                }
            }
            Some(b) if b.is_ascii_digit() => self.number()?,
            _ => return self.err("expected a value"),
        };
        if self.eat(b'^') {
            let e = self.int()?;
            match base.powi(e) {
                Some(v) => Ok(v),
                None => self.err("negative power of zero"),
            }
        } else {
            Ok(base)
        }
    }

    fn starts_with_keyword(&self) -> bool {
        // Only 'i' is a bare identifier; nothing else starts with it.
        false
    }

    /// term := atom ('*' atom)*
    fn term(&mut self) -> Result<Cyclo, ParseCycloError> {
        let mut acc = self.atom()?;
        while self.eat(b'*') {
            acc = &acc * &self.atom()?;
        }
        Ok(acc)
    }

    /// expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Cyclo, ParseCycloError> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Parse a cyclotomic expression.
///
/// Grammar: sums/differences of products of atoms, where an atom is a
/// rational literal `p/q`, the imaginary unit `i`, a root of unity `z(N)`
/// (optionally `z(N)^k`, k possibly negative), `sqrt(q)` with rational `q`,
/// or a parenthesised expression. Whitespace is insignificant.
pub fn parse_cyclo(s: &str) -> Result<Cyclo, ParseCycloError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(v)
}
