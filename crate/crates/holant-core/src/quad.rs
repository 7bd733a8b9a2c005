//! Arithmetic in a quadratic extension ℚ(ζ_m)(√d).
//!
//! Second-order recurrences whose discriminant has no cyclotomic square root
//! still need their root pair analyzed (class membership conditions, the β
//! ratio). Elements are kept as `re + im·√d` with cyclotomic components;
//! only ring operations and the conjugation `√d ↦ −√d` are provided, so
//! every predicate downstream must be phrased division-free
//! (cross-multiplied). A condition that is invariant under conjugation can
//! then be tested as "imaginary part zero" or as plain equality in this
//! representation.

use core::fmt;

use crate::cyclo::Cyclo;

/// `re + im·√d`. Values only combine when they share the same `d`.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Ext {
    pub re: Cyclo,
    pub im: Cyclo,
    pub d: Cyclo,
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.re, self.im, self.d)
    }
}

impl Ext {
    pub fn new(re: Cyclo, im: Cyclo, d: Cyclo) -> Ext {
        Ext { re, im, d }
    }

    pub fn rational(re: Cyclo, d: &Cyclo) -> Ext {
        Ext::new(re, Cyclo::zero(), d.clone())
    }

    /// The square root itself: `0 + 1·√d`.
    pub fn root(d: &Cyclo) -> Ext {
        Ext::new(Cyclo::zero(), Cyclo::one(), d.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `√d ↦ −√d`.
    pub fn conj(&self) -> Ext {
        Ext::new(self.re.clone(), -self.im.clone(), self.d.clone())
    }

    pub fn add(&self, rhs: &Ext) -> Ext {
        debug_assert_eq!(self.d, rhs.d);
        Ext::new(&self.re + &rhs.re, &self.im + &rhs.im, self.d.clone())
    }

    pub fn sub(&self, rhs: &Ext) -> Ext {
        debug_assert_eq!(self.d, rhs.d);
        Ext::new(&self.re - &rhs.re, &self.im - &rhs.im, self.d.clone())
    }

    pub fn mul(&self, rhs: &Ext) -> Ext {
        debug_assert_eq!(self.d, rhs.d);
        let re = &(&self.re * &rhs.re) + &(&(&self.im * &rhs.im) * &self.d);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        Ext::new(re, im, self.d.clone())
    }

    pub fn scale(&self, c: &Cyclo) -> Ext {
        Ext::new(&self.re * c, &self.im * c, self.d.clone())
    }

    pub fn pow(&self, e: u64) -> Ext {
        let mut acc = Ext::rational(Cyclo::one(), &self.d);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_ring_identities() {
        let d = Cyclo::from_int(2);
        let r = Ext::root(&d);
        // (√2)² = 2, (√2)⁴ = 4.
        assert_eq!(r.mul(&r), Ext::rational(Cyclo::from_int(2), &d));
        assert_eq!(r.pow(4), Ext::rational(Cyclo::from_int(4), &d));
        // (x + y√d)(x − y√d) = x² − d·y².
        let x = Ext::new(Cyclo::from_int(3), Cyclo::i(), d.clone());
        let norm = x.mul(&x.conj());
        assert!(norm.im.is_zero());
        assert_eq!(norm.re, Cyclo::from_int(11)); // 9 − 2·(−1)
        // Conjugation is a ring homomorphism.
        let y = Ext::new(Cyclo::i(), Cyclo::from_int(-1), d);
        assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
        assert_eq!(x.add(&y).conj(), x.conj().add(&y.conj()));
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.scale(&Cyclo::from_int(2)).re, Cyclo::from_int(6));
    }
}
