//! GF(k^n) arithmetic on coefficient vectors.
//!
//! Elements are polynomials of degree < n over GF(k), stored as length-n
//! coefficient vectors, reduced modulo a fixed monic irreducible modulus.
//! The modulus comes from a deterministic search: monic degree-n candidates
//! are enumerated in lexicographic coefficient order (constant term fastest)
//! and the first irreducible one wins, so the same q always yields the same
//! field. Irreducibility is decided exhaustively: root checks settle degree
//! 2 and 3, and trial division by every lower-degree monic polynomial
//! settles the rest. That is quadratic-ish in q but the construction scale
//! here is single-digit degrees.

use crate::error::Result;
use crate::primes::prime_power_decompose;

/// A field element: coefficient vector of length `degree`, entries in [0, k).
pub type FieldElement = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    characteristic: u64,
    degree: u32,
    q: u64,
    /// Monic modulus, length degree+1, leading coefficient 1. For degree 1
    /// the search yields x, giving the plain prime field.
    modulus: Vec<u64>,
}

impl FiniteField {
    /// Builds GF(q), factoring q and searching for the modulus.
    pub fn new(q: u64) -> Result<Self> {
        let (k, n) = prime_power_decompose(q as u128)?;
        let k = k as u64;
        let modulus = find_irreducible(k, n);
        Ok(FiniteField {
            characteristic: k,
            degree: n,
            q,
            modulus,
        })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        vec![0; self.degree as usize]
    }

    pub fn one(&self) -> FieldElement {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Element from its canonical integer code: digits of `code` base k.
    pub fn element(&self, code: u64) -> FieldElement {
        let mut c = code;
        let mut e = self.zero();
        for slot in e.iter_mut() {
            *slot = c % self.characteristic;
            c /= self.characteristic;
        }
        debug_assert_eq!(c, 0, "code out of range");
        e
    }

    /// Canonical integer code of an element (inverse of [`Self::element`]).
    pub fn code(&self, a: &FieldElement) -> u64 {
        a.iter()
            .rev()
            .fold(0, |acc, &c| acc * self.characteristic + c)
    }

    /// All q elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|c| self.element(c))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let k = self.characteristic;
        a.iter().zip(b).map(|(&x, &y)| (x + y) % k).collect()
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let k = self.characteristic;
        a.iter().map(|&x| (k - x) % k).collect()
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let k = self.characteristic;
        let n = self.degree as usize;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % k;
            }
        }
        poly_rem(&mut prod, &self.modulus, k);
        prod.truncate(n);
        prod.resize(n, 0);
        prod
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element, via a^(q-2).
    pub fn inv(&self, a: &FieldElement) -> FieldElement {
        debug_assert!(!self.is_zero(a), "inverse of zero");
        self.pow(a, self.q - 2)
    }
}

/// In-place remainder of `poly` modulo the monic `modulus`, coefficients
/// in GF(k). `poly` keeps physical length; high entries are zeroed.
fn poly_rem(poly: &mut [u64], modulus: &[u64], k: u64) {
    let m = modulus.len() - 1;
    for i in (m..poly.len()).rev() {
        let lead = poly[i];
        if lead == 0 {
            continue;
        }
        poly[i] = 0;
        for (j, &c) in modulus[..m].iter().enumerate() {
            let idx = i - m + j;
            poly[idx] = (poly[idx] + (k - (lead * c) % k)) % k;
        }
    }
}

/// First irreducible monic degree-n polynomial over GF(k), by coefficient
/// code (constant term is the least-significant digit).
fn find_irreducible(k: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    if n == 1 {
        return vec![0, 1]; // x, the first monic linear polynomial.
    }
    let total = (k as u128).pow(n as u32);
    for code in 0..total {
        let mut cand = Vec::with_capacity(n + 1);
        let mut c = code;
        for _ in 0..n {
            cand.push((c % k as u128) as u64);
            c /= k as u128;
        }
        cand.push(1);
        if is_irreducible(&cand, k) {
            return cand;
        }
    }
    unreachable!("GF({k}^{n}) has irreducible polynomials of every degree");
}

fn poly_eval(poly: &[u64], x: u64, k: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % k)
}

fn is_irreducible(poly: &[u64], k: u64) -> bool {
    let n = poly.len() - 1;
    // Linear factors: a root in GF(k).
    for x in 0..k {
        if poly_eval(poly, x, k) == 0 {
            return false;
        }
    }
    if n <= 3 {
        return true; // degree 2 or 3 reducible only via a linear factor
    }
    // Trial division by every monic divisor candidate of degree 2..=n/2.
    for d in 2..=(n / 2) {
        let total = (k as u128).pow(d as u32);
        for code in 0..total {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push((c % k as u128) as u64);
                c /= k as u128;
            }
            div.push(1);
            let mut rem = poly.to_vec();
            poly_rem(&mut rem, &div, k);
            if rem[..d].iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn prime_field_is_plain_modular_arithmetic() {
        let f = FiniteField::new(7).unwrap();
        assert_eq!((f.characteristic(), f.degree()), (7, 1));
        let a = f.element(3);
        let b = f.element(5);
        assert_eq!(f.code(&f.add(&a, &b)), 1);
        assert_eq!(f.code(&f.mul(&a, &b)), 1);
        assert_eq!(f.code(&f.inv(&a)), 5); // 3 * 5 = 15 = 1 mod 7
    }

    #[test]
    fn gf4_uses_the_classic_modulus() {
        let f = FiniteField::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]); // x^2 + x + 1
                                             // Multiplicative group has order 3: every nonzero a has a^3 = 1.
        for code in 1..4 {
            let a = f.element(code);
            assert_eq!(f.pow(&a, 3), f.one());
        }
    }

    #[test]
    fn gf8_and_gf9_moduli_are_deterministic() {
        assert_eq!(FiniteField::new(8).unwrap().modulus(), &[1, 1, 0, 1]); // x^3+x+1
        assert_eq!(FiniteField::new(9).unwrap().modulus(), &[1, 0, 1]); // x^2+1
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(matches!(
            FiniteField::new(6),
            Err(Error::NotPrimePower { .. })
        ));
        assert!(matches!(FiniteField::new(1), Err(Error::QTooSmall { .. })));
    }

    #[test]
    fn field_axioms_spot_checks() {
        for q in [4u64, 5, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            // x^q = x for every element; inverses multiply to one.
            for a in f.elements() {
                assert_eq!(f.pow(&a, q), a, "x^q != x in GF({q})");
                if !f.is_zero(&a) {
                    assert_eq!(f.mul(&a, &f.inv(&a)), f.one(), "a * a^-1 != 1 in GF({q})");
                }
            }
            // Distributivity on a deterministic sample.
            for ca in 0..q.min(9) {
                for cb in 0..q.min(9) {
                    for cc in 0..q.min(9) {
                        let (a, b, c) = (f.element(ca), f.element(cb), f.element(cc));
                        let lhs = f.mul(&a, &f.add(&b, &c));
                        let rhs = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                        assert_eq!(lhs, rhs, "distributivity fails in GF({q})");
                    }
                }
            }
        }
    }
}
