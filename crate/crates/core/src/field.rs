//! Small finite fields: prime fields and `GF(2^k)` for `k <= 16`.
//!
//! Elements are `u32` values: residues for prime fields, bit vectors of
//! polynomial coefficients (bit `i` = coefficient of `x^i`) for binary fields.

use crate::error::{Error, Result};
use crate::perm::is_prime;

/// Irreducible (in fact primitive) polynomials for `GF(2^k)`, indexed by `k`.
const BINARY_MODULI: [u32; 17] = [
    0, 0, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10000011, 0x11D, 0x211, 0x409, 0x805, 0x1053,
    0x201B, 0x4443, 0x8003, 0x1100B,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Prime(u32),
    Binary { k: u32, modulus: u32 },
}

pub type FieldElement = u32;

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        if q >= 2 && q < (1 << 31) && is_prime(q) {
            return Ok(Self::Prime(q as u32));
        }
        if q.is_power_of_two() {
            let k = q.trailing_zeros();
            if (2..=16).contains(&k) {
                return Ok(Self::Binary {
                    k,
                    modulus: BINARY_MODULI[k as usize],
                });
            }
        }
        Err(Error::UnsupportedOrder(q))
    }

    pub fn order(&self) -> u32 {
        match *self {
            Self::Prime(p) => p,
            Self::Binary { k, .. } => 1 << k,
        }
    }

    pub fn characteristic(&self) -> u32 {
        match *self {
            Self::Prime(p) => p,
            Self::Binary { .. } => 2,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        0..self.order()
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match *self {
            Self::Prime(p) => ((a as u64 + b as u64) % p as u64) as u32,
            Self::Binary { .. } => a ^ b,
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match *self {
            Self::Prime(p) => (p - a % p) % p,
            Self::Binary { .. } => a,
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match *self {
            Self::Prime(p) => ((a as u64 * b as u64) % p as u64) as u32,
            Self::Binary { k, modulus } => {
                let (mut a, mut b, mut acc) = (a, b, 0u32);
                while b != 0 {
                    if b & 1 == 1 {
                        acc ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                    if a >> k & 1 == 1 {
                        a ^= modulus;
                    }
                }
                acc
            }
        }
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (a != 0).then(|| self.pow(a, self.order() as u64 - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> u64 {
        assert_ne!(a, 0, "zero has no multiplicative order");
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Smallest element (as an integer) generating the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        let target = self.order() as u64 - 1;
        (1..self.order())
            .find(|&a| self.element_order(a) == target)
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// The Frobenius map `x -> x^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.characteristic() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial division by every polynomial of degree at most k/2.
    fn irreducible(poly: u32, k: u32) -> bool {
        let modulo = |mut a: u32, b: u32| {
            let db = 31 - b.leading_zeros();
            while a != 0 && 31 - a.leading_zeros() >= db {
                a ^= b << (31 - a.leading_zeros() - db);
            }
            a
        };
        (2u32..1 << (k / 2 + 1)).all(|d| modulo(poly, d) != 0)
    }

    #[test]
    fn shipped_moduli_are_irreducible() {
        for k in 2..=16 {
            let m = BINARY_MODULI[k as usize];
            assert_eq!(31 - m.leading_zeros(), k);
            assert!(irreducible(m, k), "k = {k}");
        }
        assert!(!irreducible(0b101, 2));
    }

    #[test]
    fn gf7_primitive_root() {
        let f = Field::new(7).unwrap();
        assert_eq!(f.element_order(3), 6);
        assert_eq!(f.primitive_element(), 3);
    }

    #[test]
    fn gf64_generator_has_full_order() {
        let f = Field::new(64).unwrap();
        assert_eq!(f, Field::Binary { k: 6, modulus: 0b1000011 });
        assert_eq!(f.element_order(0b10), 63);
        assert_eq!(f.primitive_element(), 2);
    }

    #[test]
    fn inverse_law_exhaustive() {
        for q in [2, 3, 4, 5, 7, 8, 11, 13, 16, 32, 64] {
            let f = Field::new(q).unwrap();
            for a in 1..f.order() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q = {q}, a = {a}");
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn distributive_spot_check() {
        let f = Field::new(256).unwrap();
        for a in (0..256).step_by(7) {
            for b in (0..256).step_by(11) {
                for c in (0..256).step_by(13) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn unsupported_orders() {
        assert_eq!(Field::new(9), Err(Error::UnsupportedOrder(9)));
        assert_eq!(Field::new(1 << 17), Err(Error::UnsupportedOrder(1 << 17)));
        assert_eq!(Field::new(1), Err(Error::UnsupportedOrder(1)));
        assert_eq!(Field::new(2), Ok(Field::Prime(2)));
    }
}
