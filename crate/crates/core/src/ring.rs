//! Truncated local rings A = F_q[t_1, ..., t_m] / m^l where m is the ideal
//! generated by the variables. Elements are coefficient vectors over the
//! monomial basis (all monomials of total degree < l).
//!
//! Canonical orders used everywhere:
//! - monomials: by total degree, then lexicographically descending within a
//!   degree (t1 before t2; for m = 2, degree 2 reads t1^2, t1*t2, t2^2);
//! - ring elements: lexicographically by coefficient vector with the constant
//!   coefficient most significant.
//!
//! An element remembers the descriptor hash of its ring; operations reject
//! elements from a different ring instead of silently mixing bases.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::field::Field;
use crate::{Error, Result};

/// Number of monomials of total degree < l in m variables: C(l-1+m, m).
pub fn monomial_count(num_vars: usize, trunc: usize) -> usize {
    let mut c: u128 = 1;
    for i in 0..num_vars {
        c = c * (trunc - 1 + num_vars - i) as u128 / (i as u128 + 1);
    }
    c as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    pub ring: u64,
    /// Field codes per monomial, in monomial order.
    pub c: Vec<u16>,
}

#[derive(Debug, Clone)]
pub struct Ring {
    pub field: Field,
    pub num_vars: usize,
    pub trunc: usize,
    /// Exponent tuples in canonical monomial order; monomials[0] is constant.
    pub monomials: Vec<Vec<u8>>,
    /// First monomial index of each total degree d, plus a final sentinel.
    pub degree_starts: Vec<usize>,
    mono_index: HashMap<Vec<u8>, u16>,
    /// mul_tab[i * M + j] = index of monomial i+j, or u16::MAX if degree >= l.
    mul_tab: Vec<u16>,
    /// FNV-1a over the descriptor (p, e, modulus, m, l).
    pub hash: u64,
}

const MAX_MONOMIALS: usize = 10_000;

fn fnv1a(data: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &word in data {
        for byte in word.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

impl Ring {
    pub fn new(field: Field, num_vars: usize, trunc: usize) -> Result<Ring> {
        if trunc < 1 {
            return Err(Error::InvalidParameter("truncation order must be >= 1".into()));
        }
        if monomial_count(num_vars, trunc) > MAX_MONOMIALS {
            return Err(Error::GuardExceeded {
                what: "monomial basis",
                size: monomial_count(num_vars, trunc) as u128,
                limit: MAX_MONOMIALS as u128,
            });
        }

        let mut monomials: Vec<Vec<u8>> = Vec::new();
        // all exponent tuples with total degree < trunc
        fn gen(num_vars: usize, cur: &mut Vec<u8>, pos: usize, left: usize, out: &mut Vec<Vec<u8>>) {
            if pos == num_vars {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[pos] = e as u8;
                gen(num_vars, cur, pos + 1, left - e, out);
            }
            cur[pos] = 0;
        }
        let mut cur = vec![0u8; num_vars];
        gen(num_vars, &mut cur, 0, trunc - 1, &mut monomials);
        monomials.sort_by(|a, b| {
            let (da, db): (usize, usize) = (
                a.iter().map(|&x| x as usize).sum(),
                b.iter().map(|&x| x as usize).sum(),
            );
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        debug_assert_eq!(monomials.len(), monomial_count(num_vars, trunc));

        let m_count = monomials.len();
        let mut mono_index = HashMap::with_capacity(m_count);
        for (i, t) in monomials.iter().enumerate() {
            mono_index.insert(t.clone(), i as u16);
        }
        let mut degree_starts = vec![0usize; trunc + 1];
        for d in 0..=trunc {
            degree_starts[d] = monomials
                .iter()
                .position(|t| t.iter().map(|&x| x as usize).sum::<usize>() >= d)
                .unwrap_or(m_count);
        }

        let mut mul_tab = vec![u16::MAX; m_count * m_count];
        for i in 0..m_count {
            for j in 0..m_count {
                let sum: Vec<u8> = monomials[i]
                    .iter()
                    .zip(&monomials[j])
                    .map(|(&a, &b)| a + b)
                    .collect();
                if sum.iter().map(|&x| x as usize).sum::<usize>() < trunc {
                    mul_tab[i * m_count + j] = mono_index[&sum];
                }
            }
        }

        let mut desc: Vec<u64> = vec![field.p as u64, field.e as u64];
        desc.extend(field.modulus.iter().map(|&c| c as u64));
        desc.push(num_vars as u64);
        desc.push(trunc as u64);
        let hash = fnv1a(&desc);

        Ok(Ring {
            field,
            num_vars,
            trunc,
            monomials,
            degree_starts,
            mono_index,
            mul_tab,
            hash,
        })
    }

    /// The residue field k = A/m as a ring (same field, truncation 1).
    pub fn residue_ring(&self) -> Ring {
        Ring::new(self.field.clone(), self.num_vars, 1).unwrap()
    }

    #[inline]
    pub fn basis_len(&self) -> usize {
        self.monomials.len()
    }

    pub fn check(&self, e: &Elem) -> Result<()> {
        if e.ring != self.hash || e.c.len() != self.basis_len() {
            return Err(Error::MismatchedRings);
        }
        Ok(())
    }

    pub fn zero(&self) -> Elem {
        Elem {
            ring: self.hash,
            c: vec![0; self.basis_len()],
        }
    }

    pub fn one(&self) -> Elem {
        self.constant(1)
    }

    pub fn constant(&self, code: u32) -> Elem {
        debug_assert!(code < self.field.q);
        let mut c = vec![0u16; self.basis_len()];
        c[0] = code as u16;
        Elem { ring: self.hash, c }
    }

    /// Image of an integer under Z -> A.
    pub fn int(&self, n: i64) -> Elem {
        self.constant(self.field.from_int(n))
    }

    /// The variable t_{i+1} (zero-indexed). Requires l >= 2.
    pub fn var(&self, i: usize) -> Result<Elem> {
        if i >= self.num_vars || self.trunc < 2 {
            return Err(Error::InvalidParameter(format!(
                "no variable t{} in this ring",
                i + 1
            )));
        }
        let mut t = vec![0u8; self.num_vars];
        t[i] = 1;
        let idx = self.mono_index[&t] as usize;
        let mut c = vec![0u16; self.basis_len()];
        c[idx] = 1;
        Ok(Elem { ring: self.hash, c })
    }

    pub fn from_coeffs(&self, coeffs: Vec<u16>) -> Result<Elem> {
        if coeffs.len() != self.basis_len() || coeffs.iter().any(|&c| c as u32 >= self.field.q) {
            return Err(Error::InvalidParameter("bad coefficient vector".into()));
        }
        Ok(Elem {
            ring: self.hash,
            c: coeffs,
        })
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let c = a
            .c
            .iter()
            .zip(&b.c)
            .map(|(&x, &y)| self.field.add(x as u32, y as u32) as u16)
            .collect();
        Elem { ring: self.hash, c }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let c = a
            .c
            .iter()
            .zip(&b.c)
            .map(|(&x, &y)| self.field.sub(x as u32, y as u32) as u16)
            .collect();
        Elem { ring: self.hash, c }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let c = a.c.iter().map(|&x| self.field.neg(x as u32) as u16).collect();
        Elem { ring: self.hash, c }
    }

    pub fn scale(&self, a: &Elem, code: u32) -> Elem {
        let c = a
            .c
            .iter()
            .map(|&x| self.field.mul(x as u32, code) as u16)
            .collect();
        Elem { ring: self.hash, c }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let m = self.basis_len();
        let mut c = vec![0u16; m];
        for i in 0..m {
            let ai = a.c[i];
            if ai == 0 {
                continue;
            }
            let row = i * m;
            for j in 0..m {
                let bj = b.c[j];
                if bj == 0 {
                    continue;
                }
                let k = self.mul_tab[row + j];
                if k == u16::MAX {
                    continue;
                }
                let prod = self.field.mul(ai as u32, bj as u32);
                c[k as usize] = self.field.add(c[k as usize] as u32, prod) as u16;
            }
        }
        Elem { ring: self.hash, c }
    }

    /// Index of the product of two basis monomials, or None when the degree
    /// reaches the truncation.
    pub fn monomial_product(&self, i: usize, j: usize) -> Option<usize> {
        let v = self.mul_tab[i * self.basis_len() + j];
        (v != u16::MAX).then_some(v as usize)
    }

    pub fn pow(&self, a: &Elem, mut n: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Units are exactly the elements with nonzero constant coefficient.
    #[inline]
    pub fn is_unit(&self, a: &Elem) -> bool {
        a.c[0] != 0
    }

    /// Residue in k = F_q (the constant coefficient).
    #[inline]
    pub fn residue(&self, a: &Elem) -> u32 {
        a.c[0] as u32
    }

    /// Inverse of a unit: write a = c0 (1 + u) with u nilpotent and sum the
    /// geometric series for (1 + u)^{-1}, which terminates since u^l = 0.
    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        self.check(a)?;
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let c0_inv = self.field.inv(self.residue(a))?;
        let b = self.scale(a, c0_inv); // 1 + u
        let neg_u = self.sub(&self.one(), &b);
        let mut acc = self.one();
        let mut term = self.one();
        for _ in 1..self.trunc {
            term = self.mul(&term, &neg_u);
            acc = self.add(&acc, &term);
        }
        let res = self.scale(&acc, c0_inv);
        debug_assert_eq!(self.mul(&res, a), self.one());
        Ok(res)
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    // ---- enumeration in canonical order ----

    /// |A| = q^M, if it fits in u128.
    pub fn total_count(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..self.basis_len() {
            acc = acc.checked_mul(self.field.q as u128)?;
        }
        Some(acc)
    }

    pub fn unit_count(&self) -> Option<u128> {
        let q = self.field.q as u128;
        Some(self.total_count()? / q * (q - 1))
    }

    /// |m| = q^(M-1), also the size of 1 + m.
    pub fn maximal_ideal_count(&self) -> Option<u128> {
        Some(self.total_count()? / self.field.q as u128)
    }

    /// Canonical key: coefficient vector read as a base-q number, constant
    /// coefficient most significant. Ascending keys = canonical element order.
    pub fn elem_key(&self, a: &Elem) -> u128 {
        let mut k: u128 = 0;
        for &c in &a.c {
            k = k * self.field.q as u128 + c as u128;
        }
        k
    }

    pub fn elem_from_key(&self, mut key: u128) -> Elem {
        let m = self.basis_len();
        let q = self.field.q as u128;
        let mut c = vec![0u16; m];
        for i in (0..m).rev() {
            c[i] = (key % q) as u16;
            key /= q;
        }
        debug_assert_eq!(key, 0);
        Elem { ring: self.hash, c }
    }

    /// All elements in canonical order. Caller is responsible for guards.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let total = self
            .total_count()
            .expect("element enumeration requires q^M to fit in u128");
        (0..total).map(move |k| self.elem_from_key(k))
    }

    /// Elements of the maximal ideal (constant coefficient 0), canonical order.
    pub fn maximal_ideal_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let count = self
            .maximal_ideal_count()
            .expect("ideal enumeration requires q^M to fit in u128");
        (0..count).map(move |k| self.elem_from_key(k))
    }

    /// Elements of 1 + m, canonical order.
    pub fn one_plus_m_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let count = self
            .maximal_ideal_count()
            .expect("ideal enumeration requires q^M to fit in u128");
        let shift = count; // keys of elements with constant coefficient 1
        (0..count).map(move |k| self.elem_from_key(shift + k))
    }

    /// Units in canonical order (constant coefficient nonzero).
    pub fn units(&self) -> impl Iterator<Item = Elem> + '_ {
        let ideal = self
            .maximal_ideal_count()
            .expect("unit enumeration requires q^M to fit in u128");
        let q = self.field.q as u128;
        (ideal..ideal * q).map(move |k| self.elem_from_key(k))
    }

    // ---- Hensel ----

    /// p-th root of a unit x for a prime p different from the characteristic.
    /// Searches the residue field for a root of the residue, then lifts it by
    /// Newton iteration; returns None when the residue has no p-th root.
    pub fn hensel_pth_root(&self, x: &Elem, p: u32) -> Result<Option<Elem>> {
        self.check(x)?;
        if p == self.field.p {
            return Err(Error::PEqualsCharacteristic);
        }
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        let xr = self.residue(x);
        let mut start = None;
        for y in 1..self.field.q {
            if self.field.pow(y, p as u64) == xr {
                start = Some(y);
                break;
            }
        }
        let Some(y0) = start else {
            return Ok(None);
        };
        let p_in_k = self.field.from_int(p as i64);
        debug_assert_ne!(p_in_k, 0);
        let mut y = self.constant(y0);
        for _ in 0..self.trunc + 2 {
            if self.pow(&y, p as u64) == *x {
                return Ok(Some(y));
            }
            // y <- y - (y^p - x) / (p y^(p-1))
            let err = self.sub(&self.pow(&y, p as u64), x);
            let deriv = self.scale(&self.pow(&y, p as u64 - 1), p_in_k);
            y = self.sub(&y, &self.mul(&err, &self.inv(&deriv)?));
        }
        unreachable!("Newton iteration must converge within l steps");
    }

    // ---- formatting ----

    pub fn var_name(&self, i: usize) -> String {
        if self.num_vars == 1 {
            "t".to_string()
        } else {
            format!("t{}", i + 1)
        }
    }

    pub fn fmt_elem(&self, a: &Elem) -> String {
        let mut out = String::new();
        for (idx, &coef) in a.c.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let expo = &self.monomials[idx];
            let is_const = expo.iter().all(|&e| e == 0);
            if is_const || coef != 1 {
                let _ = write!(out, "{coef}");
                if !is_const {
                    out.push('*');
                }
            }
            let mut first = true;
            for (v, &e) in expo.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    out.push('*');
                }
                first = false;
                out.push_str(&self.var_name(v));
                if e > 1 {
                    let _ = write!(out, "^{e}");
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}
