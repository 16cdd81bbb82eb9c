//! Finite fields F_q with q = p^e, e <= 3.
//!
//! Elements are stored as codes `0..q`: the code of a0 + a1*x + a2*x^2 is
//! a0 + a1*p + a2*p^2. For e = 1 the code is the residue itself and
//! arithmetic is plain modular arithmetic; for e > 1 elements are decoded
//! into coefficient arrays, multiplied as polynomials, and reduced by the
//! stored monic irreducible modulus.

use crate::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Field {
    /// Characteristic p (prime).
    pub p: u32,
    /// Extension degree e, 1..=3.
    pub e: u32,
    /// q = p^e.
    pub q: u32,
    /// Coefficients of the monic modulus, constant first, length e + 1.
    /// For e = 1 this is [0, 1] (the polynomial x), unused by arithmetic.
    pub modulus: Vec<u32>,
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Field {
            p,
            e: 1,
            q: p,
            modulus: vec![0, 1],
        })
    }

    /// Extension of degree e with an explicit monic modulus (constant first).
    /// Irreducibility over F_p is checked by exhaustive root search, which is
    /// complete for degrees 2 and 3.
    pub fn extension(p: u32, e: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if !(2..=3).contains(&e) {
            return Err(Error::InvalidParameter(format!(
                "extension degree must be 2 or 3, got {e}"
            )));
        }
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 {
            return Err(Error::InvalidParameter(
                "modulus must be monic of degree e, constant coefficient first".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter(
                "modulus coefficients must be reduced mod p".into(),
            ));
        }
        for r in 0..p {
            let mut v = 0u64;
            for &c in modulus.iter().rev() {
                v = (v * r as u64 + c as u64) % p as u64;
            }
            if v == 0 {
                return Err(Error::ReducibleModulus);
            }
        }
        let q = p.checked_pow(e).ok_or_else(|| {
            Error::InvalidParameter("field size overflows u32".into())
        })?;
        Ok(Field { p, e, q, modulus })
    }

    /// Degree-e extension with the first monic irreducible in code order.
    pub fn extension_default(p: u32, e: u32) -> Result<Field> {
        if e == 1 {
            return Field::prime(p);
        }
        if !(2..=3).contains(&e) {
            return Err(Error::InvalidParameter(format!(
                "extension degree must be 1, 2 or 3, got {e}"
            )));
        }
        let lower = (p as u64).pow(e); // skip non-monic-degree codes
        let _ = lower;
        // Enumerate lower coefficients in code order; x^e + (decoded tail).
        let tail_count = (p as u64).pow(e);
        for code in 0..tail_count {
            let mut m = vec![0u32; e as usize + 1];
            let mut c = code;
            for slot in m.iter_mut().take(e as usize) {
                *slot = (c % p as u64) as u32;
                c /= p as u64;
            }
            m[e as usize] = 1;
            if let Ok(f) = Field::extension(p, e, m) {
                return Ok(f);
            }
        }
        unreachable!("an irreducible monic of degree {} over F_{} exists", e, p)
    }

    #[inline]
    fn decode(&self, a: u32) -> [u32; 3] {
        let p = self.p;
        [a % p, (a / p) % p, (a / p / p) % p]
    }

    #[inline]
    fn encode(&self, d: &[u32; 3]) -> u32 {
        d[0] + self.p * (d[1] + self.p * d[2])
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (x, y) = (self.decode(a), self.decode(b));
            let mut z = [0u32; 3];
            for i in 0..3 {
                let s = x[i] + y[i];
                z[i] = if s >= self.p { s - self.p } else { s };
            }
            self.encode(&z)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let x = self.decode(a);
            let mut z = [0u32; 3];
            for i in 0..3 {
                z[i] = if x[i] == 0 { 0 } else { self.p - x[i] };
            }
            self.encode(&z)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            ((a as u64 * b as u64) % self.p as u64) as u32
        } else {
            let (x, y) = (self.decode(a), self.decode(b));
            let e = self.e as usize;
            let p = self.p as u64;
            let mut prod = [0u64; 5];
            for i in 0..e {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..e {
                    prod[i + j] += x[i] as u64 * y[j] as u64;
                }
            }
            for v in prod.iter_mut() {
                *v %= p;
            }
            // reduce x^d for d >= e using x^e = -(tail)
            for d in (e..=2 * e - 2).rev() {
                let c = prod[d];
                if c == 0 {
                    continue;
                }
                prod[d] = 0;
                for j in 0..e {
                    let sub = c * self.modulus[j] as u64 % p;
                    prod[d - e + j] = (prod[d - e + j] + p - sub) % p;
                }
            }
            let z = [prod[0] as u32, prod[1] as u32, prod[2] as u32];
            self.encode(&z)
        }
    }

    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::NotAUnit);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// Image of an integer under Z -> F_q (lands in the prime subfield).
    #[inline]
    pub fn from_int(&self, n: i64) -> u32 {
        let p = self.p as i64;
        (((n % p) + p) % p) as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Smallest generator of the cyclic group F_q^x, in code order.
    pub fn primitive_root(&self) -> u32 {
        let order = (self.q - 1) as u64;
        'cand: for g in 2..self.q {
            // g generates iff g^(order/r) != 1 for every prime r | order
            let mut m = order;
            let mut r = 2;
            while r * r <= m {
                if m % r == 0 {
                    if self.pow(g, order / r) == 1 {
                        continue 'cand;
                    }
                    while m % r == 0 {
                        m /= r;
                    }
                }
                r += 1;
            }
            if m > 1 && self.pow(g, order / m) == 1 {
                continue 'cand;
            }
            return g;
        }
        // q = 2: the unit group is trivial
        1
    }

    /// Discrete log table with respect to `primitive_root`: dlog[a] for a != 0.
    pub fn dlog_table(&self) -> Vec<Option<u32>> {
        let g = self.primitive_root();
        let mut table = vec![None; self.q as usize];
        let mut acc = 1u32;
        for k in 0..(self.q - 1) {
            table[acc as usize] = Some(k);
            acc = self.mul(acc, g);
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.q, 7);
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.mul(5, 4), 6);
        assert_eq!(f.sub(2, 5), 4);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn rejects_composites_and_bad_moduli() {
        assert!(Field::prime(6).is_err());
        assert!(Field::extension(3, 2, vec![0, 0, 1]).is_err()); // x^2, root 0
        assert!(Field::extension(3, 2, vec![2, 0, 1]).is_err()); // x^2 + 2 = (x-1)(x+1)
        assert!(Field::extension(3, 2, vec![1, 0, 1]).is_ok()); // x^2 + 1
    }

    #[test]
    fn f9_has_eight_units_cyclic() {
        let f = Field::extension_default(3, 2).unwrap();
        assert_eq!(f.q, 9);
        let g = f.primitive_root();
        let mut seen = std::collections::HashSet::new();
        let mut acc = 1;
        for _ in 0..8 {
            seen.insert(acc);
            acc = f.mul(acc, g);
        }
        assert_eq!(acc, 1);
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn f27_frobenius_fixes_prime_subfield() {
        let f = Field::extension_default(3, 3).unwrap();
        assert_eq!(f.q, 27);
        for a in f.elements() {
            let cubed_thrice = f.pow(a, 27);
            assert_eq!(cubed_thrice, a); // x^q = x
        }
        for a in 0..3 {
            assert_eq!(f.pow(a, 3), a); // Frobenius fixes F_3
        }
    }

    #[test]
    fn field_axioms_exhaustive_f9() {
        let f = Field::extension(3, 2, vec![1, 0, 1]).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
        for a in 1..f.q {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn dlog_table_consistent() {
        let f = Field::prime(13).unwrap();
        let g = f.primitive_root();
        assert_eq!(g, 2);
        let table = f.dlog_table();
        assert!(table[0].is_none());
        for a in 1..13u32 {
            let k = table[a as usize].unwrap();
            assert_eq!(f.pow(g, k as u64), a);
        }
    }
}
