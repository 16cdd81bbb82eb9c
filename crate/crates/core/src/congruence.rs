//! Congruence filtration of SL_n over a truncated local ring.
//!
//! C^i is the kernel of reduction modulo the i-th power of the maximal
//! ideal: matrices X = I + N with every entry of N of valuation at least i.
//! The degree-i coefficients of N, one trace-zero matrix per degree-i
//! monomial, give the layer map rho_i onto copies of sl_n(k); the filtration
//! is checked to be central enough (commutators add levels, rho turns
//! products into sums and commutators into convolved brackets), layers are
//! matched against their predicted sizes, and small cases are pushed through
//! the black-box abelian machinery for the abelianization.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng;

use crate::ring::{Elem, Ring};
use crate::structure::{abelian_structure, GroupStructure};
use crate::{Error, Result};

/// A square matrix over the ring with determinant 1, row-major entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlMat {
    pub n: usize,
    pub e: Vec<Elem>,
}

pub fn mat_identity(ring: &Ring, n: usize) -> SlMat {
    let mut e = vec![ring.zero(); n * n];
    for i in 0..n {
        e[i * n + i] = ring.one();
    }
    SlMat { n, e }
}

pub fn mat_mul(ring: &Ring, a: &SlMat, b: &SlMat) -> SlMat {
    let n = a.n;
    assert_eq!(n, b.n);
    let mut e = vec![ring.zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a.e[i * n + k];
            if aik.c.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..n {
                let prod = ring.mul(aik, &b.e[k * n + j]);
                e[i * n + j] = ring.add(&e[i * n + j], &prod);
            }
        }
    }
    SlMat { n, e }
}

/// Determinant by the Leibniz expansion; n stays small here.
pub fn mat_det(ring: &Ring, m: &SlMat) -> Elem {
    let n = m.n;
    let mut det = ring.zero();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut sign = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    sign += 1;
                }
            }
        }
        let mut term = ring.one();
        for (i, &j) in perm.iter().enumerate() {
            term = ring.mul(&term, &m.e[i * n + j]);
        }
        if sign % 2 == 1 {
            term = ring.neg(&term);
        }
        det = ring.add(&det, &term);
        // next permutation in lexicographic order
        let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| perm[k] < perm[k + 1]) else {
            break;
        };
        let l = (k + 1..n).rev().find(|&l| perm[l] > perm[k]).unwrap();
        perm.swap(k, l);
        perm[k + 1..].reverse();
    }
    det
}

pub fn sl_mat(ring: &Ring, n: usize, entries: Vec<Elem>) -> Result<SlMat> {
    assert_eq!(entries.len(), n * n);
    for e in &entries {
        ring.check(e)?;
    }
    let m = SlMat { n, e: entries };
    if mat_det(ring, &m) != ring.one() {
        return Err(Error::NotSpecialLinear);
    }
    Ok(m)
}

/// Inverse by Gauss-Jordan; over a local ring an invertible matrix always
/// offers a unit pivot in every column.
pub fn mat_inv(ring: &Ring, m: &SlMat) -> Result<SlMat> {
    let n = m.n;
    let mut a = m.e.clone();
    let mut b = mat_identity(ring, n).e;
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| ring.is_unit(&a[r * n + col]))
            .ok_or(Error::NotInvertible)?;
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
                b.swap(col * n + j, pivot_row * n + j);
            }
        }
        let inv = ring.inv(&a[col * n + col])?;
        for j in 0..n {
            a[col * n + j] = ring.mul(&a[col * n + j], &inv);
            b[col * n + j] = ring.mul(&b[col * n + j], &inv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r * n + col].clone();
            if factor.c.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..n {
                let sa = ring.mul(&factor, &a[col * n + j]);
                a[r * n + j] = ring.sub(&a[r * n + j], &sa);
                let sb = ring.mul(&factor, &b[col * n + j]);
                b[r * n + j] = ring.sub(&b[r * n + j], &sb);
            }
        }
    }
    Ok(SlMat { n, e: b })
}

/// Smallest monomial degree appearing in X - I, or the truncation order when
/// X = I. A matrix lies in C^i exactly when this is at least i.
pub fn congruence_level(ring: &Ring, m: &SlMat) -> usize {
    let n = m.n;
    let mut level = ring.trunc;
    for i in 0..n {
        for j in 0..n {
            let mut entry = m.e[i * n + j].clone();
            if i == j {
                entry = ring.sub(&entry, &ring.one());
            }
            for (idx, &c) in entry.c.iter().enumerate() {
                if c != 0 {
                    let deg: usize = ring.monomials[idx].iter().map(|&d| d as usize).sum();
                    level = level.min(deg);
                }
            }
        }
    }
    level
}

/// The degree-i slice of X - I: one n x n matrix of residue-field codes per
/// degree-i monomial, canonical monomial order. Each slice has trace zero;
/// that is checked, not assumed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieVector {
    pub n: usize,
    pub degree: usize,
    /// mats[k][i * n + j]: coefficient of the k-th degree-i monomial.
    pub mats: Vec<Vec<u32>>,
}

pub fn rho(ring: &Ring, i: usize, m: &SlMat) -> Result<LieVector> {
    if i == 0 || i >= ring.trunc {
        return Err(Error::InvalidParameter(format!(
            "rho wants 0 < degree < {}, got {i}",
            ring.trunc
        )));
    }
    if congruence_level(ring, m) < i {
        return Err(Error::InvalidParameter(
            "matrix is not in the congruence subgroup of that level".into(),
        ));
    }
    let n = m.n;
    let field = &ring.field;
    let start = ring.degree_starts[i];
    let stop = ring.degree_starts[i + 1];
    let mut mats = Vec::with_capacity(stop - start);
    for idx in start..stop {
        let mut mat = vec![0u32; n * n];
        for r in 0..n {
            for c in 0..n {
                mat[r * n + c] = m.e[r * n + c].c[idx] as u32;
            }
        }
        let mut trace = 0u32;
        for r in 0..n {
            trace = field.add(trace, mat[r * n + r]);
        }
        if trace != 0 {
            return Err(Error::InvalidParameter(
                "degree slice of a determinant-one matrix must be traceless".into(),
            ));
        }
        mats.push(mat);
    }
    Ok(LieVector { n, degree: i, mats })
}

impl LieVector {
    pub fn add(&self, ring: &Ring, other: &LieVector) -> LieVector {
        assert_eq!(self.degree, other.degree);
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| ring.field.add(x, y))
                    .collect()
            })
            .collect();
        LieVector {
            n: self.n,
            degree: self.degree,
            mats,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.iter().all(|&c| c == 0))
    }
}

/// The convolved bracket: the degree-(i + j) slice predicted for a commutator
/// of level-i and level-j matrices, sum over monomial splittings of the
/// matrix brackets of the slices.
pub fn bracket_convolution(ring: &Ring, a: &LieVector, b: &LieVector) -> Result<LieVector> {
    let n = a.n;
    assert_eq!(n, b.n);
    let degree = a.degree + b.degree;
    if degree >= ring.trunc {
        return Err(Error::InvalidParameter(
            "bracket degree reaches the truncation".into(),
        ));
    }
    let field = &ring.field;
    let start = ring.degree_starts[degree];
    let stop = ring.degree_starts[degree + 1];
    let mut mats = vec![vec![0u32; n * n]; stop - start];
    let a_start = ring.degree_starts[a.degree];
    let b_start = ring.degree_starts[b.degree];
    for (ka, am) in a.mats.iter().enumerate() {
        for (kb, bm) in b.mats.iter().enumerate() {
            let Some(target) =
                ring.monomial_product(a_start + ka, b_start + kb)
            else {
                continue;
            };
            let slot = &mut mats[target - start];
            for r in 0..n {
                for c in 0..n {
                    let mut acc = slot[r * n + c];
                    for k in 0..n {
                        let ab = field.mul(am[r * n + k], bm[k * n + c]);
                        let ba = field.mul(bm[r * n + k], am[k * n + c]);
                        acc = field.add(acc, field.sub(ab, ba));
                    }
                    slot[r * n + c] = acc;
                }
            }
        }
    }
    Ok(LieVector { n, degree, mats })
}

/// A uniform element of C^i: random coefficients in all degrees >= i, then
/// the first column is scaled by the inverse determinant. The correction
/// changes nothing below degree 2i, so the level and the rho_i slice of the
/// random data survive.
pub fn sample_congruence<R: Rng>(ring: &Ring, n: usize, i: usize, rng: &mut R) -> SlMat {
    assert!(i >= 1 && i <= ring.trunc);
    let q = ring.field.q;
    let start = ring.degree_starts[i.min(ring.trunc)];
    let mut entries = mat_identity(ring, n).e;
    for e in entries.iter_mut() {
        for idx in start..ring.monomials.len() {
            e.c[idx] = rng.gen_range(0..q) as u16;
        }
    }
    let m = SlMat { n, e: entries };
    let det = mat_det(ring, &m);
    debug_assert!(ring.is_unit(&det));
    let inv = ring.inv(&det).unwrap();
    let mut e = m.e;
    for r in 0..n {
        e[r * n] = ring.mul(&e[r * n], &inv);
    }
    let out = SlMat { n, e };
    debug_assert_eq!(mat_det(ring, &out), ring.one());
    debug_assert!(congruence_level(ring, &out) >= i);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityCheck {
    pub trials: u64,
    pub failures: u64,
}

/// rho_i(XY) = rho_i(X) + rho_i(Y) on random pairs from C^i.
pub fn rho_additivity_check<R: Rng>(
    ring: &Ring,
    n: usize,
    i: usize,
    trials: u64,
    rng: &mut R,
) -> Result<AdditivityCheck> {
    let mut failures = 0;
    for _ in 0..trials {
        let x = sample_congruence(ring, n, i, rng);
        let y = sample_congruence(ring, n, i, rng);
        let lhs = rho(ring, i, &mat_mul(ring, &x, &y))?;
        let rhs = rho(ring, i, &x)?.add(ring, &rho(ring, i, &y)?);
        if lhs != rhs {
            failures += 1;
        }
    }
    Ok(AdditivityCheck { trials, failures })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorCheck {
    pub trials: u64,
    pub level_failures: u64,
    pub bracket_failures: u64,
}

/// Commutators of C^i and C^j land in C^(i+j), with the predicted bracket
/// slice when i + j stays below the truncation.
pub fn commutator_check<R: Rng>(
    ring: &Ring,
    n: usize,
    i: usize,
    j: usize,
    trials: u64,
    rng: &mut R,
) -> Result<CommutatorCheck> {
    let mut level_failures = 0;
    let mut bracket_failures = 0;
    for _ in 0..trials {
        let x = sample_congruence(ring, n, i, rng);
        let y = sample_congruence(ring, n, j, rng);
        let comm = mat_mul(
            ring,
            &mat_mul(ring, &x, &y),
            &mat_inv(ring, &mat_mul(ring, &y, &x))?,
        );
        let level = congruence_level(ring, &comm);
        if level < (i + j).min(ring.trunc) {
            level_failures += 1;
            continue;
        }
        if i + j < ring.trunc {
            let predicted =
                bracket_convolution(ring, &rho(ring, i, &x)?, &rho(ring, j, &y)?)?;
            if rho(ring, i + j, &comm)? != predicted {
                bracket_failures += 1;
            }
        }
    }
    Ok(CommutatorCheck {
        trials,
        level_failures,
        bracket_failures,
    })
}

/// |C^i| = q^((n^2 - 1) * #monomials of degree in [i, l)).
pub fn congruence_size(ring: &Ring, n: usize, i: usize) -> Option<u128> {
    let free = ring.monomials.len() - ring.degree_starts[i.min(ring.trunc)];
    let exponent = (n * n - 1) as u32 * free as u32;
    (ring.field.q as u128).checked_pow(exponent)
}

pub const CONGRUENCE_ENUMERATION_LIMIT: u128 = 4_000_000;

/// Every matrix of C^i, by running over coefficient patterns in degrees >= i
/// and keeping determinant one.
pub fn enumerate_congruence(ring: &Ring, n: usize, i: usize) -> Result<Vec<SlMat>> {
    let q = ring.field.q as u128;
    let free = ring.monomials.len() - ring.degree_starts[i.min(ring.trunc)];
    let patterns = q
        .checked_pow((n * n * free) as u32)
        .ok_or(Error::GuardExceeded {
            what: "congruence subgroup enumeration",
            size: u128::MAX,
            limit: CONGRUENCE_ENUMERATION_LIMIT,
        })?;
    if patterns > CONGRUENCE_ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            what: "congruence subgroup enumeration",
            size: patterns,
            limit: CONGRUENCE_ENUMERATION_LIMIT,
        });
    }
    let start = ring.degree_starts[i.min(ring.trunc)];
    let slots: Vec<(usize, usize)> = (0..n * n)
        .flat_map(|entry| (start..ring.monomials.len()).map(move |idx| (entry, idx)))
        .collect();
    let mut out = Vec::new();
    let mut pattern = vec![0u16; slots.len()];
    loop {
        let mut e = mat_identity(ring, n).e;
        for (&(entry, idx), &c) in slots.iter().zip(&pattern) {
            e[entry].c[idx] = c;
        }
        let m = SlMat { n, e };
        if mat_det(ring, &m) == ring.one() {
            out.push(m);
        }
        // odometer over coefficient patterns
        let mut pos = 0;
        loop {
            if pos == pattern.len() {
                return Ok(out);
            }
            pattern[pos] += 1;
            if (pattern[pos] as u32) < ring.field.q {
                break;
            }
            pattern[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerCheck {
    pub i: usize,
    pub subgroup_size: u64,
    pub size_matches_formula: bool,
    pub image_size: u64,
    /// rho_i surjects onto the traceless slices: the image count equals
    /// q^((n^2 - 1) * #degree-i monomials).
    pub surjective: bool,
    pub kernel_size: u64,
    pub kernel_is_next_level: bool,
}

/// Exhaustive check that rho_i maps C^i onto sl_n slices with kernel
/// C^(i+1).
pub fn layer_check_exhaustive(ring: &Ring, n: usize, i: usize) -> Result<LayerCheck> {
    let elems = enumerate_congruence(ring, n, i)?;
    let expected = congruence_size(ring, n, i).unwrap();
    let size_matches_formula = elems.len() as u128 == expected;

    let mut images: HashSet<LieVector> = HashSet::new();
    let mut kernel_size = 0u64;
    let mut kernel_is_next_level = true;
    for m in &elems {
        let v = rho(ring, i, m)?;
        let in_kernel = v.is_zero();
        images.insert(v);
        if in_kernel {
            kernel_size += 1;
            if congruence_level(ring, m) < i + 1 {
                kernel_is_next_level = false;
            }
        }
    }
    let next = congruence_size(ring, n, i + 1).unwrap();
    kernel_is_next_level = kernel_is_next_level && kernel_size as u128 == next;

    let mono_count = (ring.degree_starts[i + 1] - ring.degree_starts[i]) as u32;
    let target = (ring.field.q as u128).pow((n * n - 1) as u32 * mono_count);
    let surjective = images.len() as u128 == target;

    Ok(LayerCheck {
        i,
        subgroup_size: elems.len() as u64,
        size_matches_formula,
        image_size: images.len() as u64,
        surjective,
        kernel_size,
        kernel_is_next_level,
    })
}

fn mat_key(m: &SlMat) -> Vec<u16> {
    m.e.iter().flat_map(|e| e.c.iter().copied()).collect()
}

/// Elementary generators of C^1: off-diagonal I + c mu E_rc and diagonal
/// diag(1 + c mu, 1, .., (1 + c mu)^-1) over nonconstant monomials mu and
/// prime-field multiples c.
fn congruence_generators(ring: &Ring, n: usize) -> Result<Vec<SlMat>> {
    let mut gens = Vec::new();
    let p0 = ring.field.p;
    for idx in 1..ring.monomials.len() {
        for pow in 0..ring.field.e {
            let code = p0.pow(pow);
            let mut mu = ring.zero();
            mu.c[idx] = code as u16;
            for r in 0..n {
                for c in 0..n {
                    if r == c {
                        continue;
                    }
                    let mut e = mat_identity(ring, n).e;
                    e[r * n + c] = mu.clone();
                    gens.push(sl_mat(ring, n, e)?);
                }
            }
            for r in 0..n - 1 {
                let unit = ring.add(&ring.one(), &mu);
                let mut e = mat_identity(ring, n).e;
                e[r * n + r] = unit.clone();
                e[(n - 1) * n + (n - 1)] = ring.inv(&unit)?;
                gens.push(sl_mat(ring, n, e)?);
            }
        }
    }
    Ok(gens)
}

#[derive(Debug)]
pub struct AbelianizationReport {
    pub group_order: u64,
    pub commutator_order: u64,
    /// [C, C] coincides with C^2 as a set.
    pub commutator_is_second_level: bool,
    pub quotient_factors: Vec<u64>,
}

/// Commutator subgroup and abelianization of C = C^1, fully enumerated.
///
/// The commutator subgroup is computed as the closure of the pairwise
/// generator commutators under multiplication and conjugation by generators;
/// that set is normal with abelian quotient by construction, hence contains
/// [C, C], and sits inside it because it is generated by commutators and
/// their conjugates.
pub fn abelianization_small(ring: &Ring, n: usize) -> Result<AbelianizationReport> {
    let elems = enumerate_congruence(ring, n, 1)?;
    let index: HashMap<Vec<u16>, usize> = elems
        .iter()
        .enumerate()
        .map(|(i, m)| (mat_key(m), i))
        .collect();

    let mut gens = congruence_generators(ring, n)?;
    // the elementary set is expected to generate; top up from the
    // enumeration if closure comes up short, so nothing rests on that
    let closure_of = |gens: &[SlMat]| -> Vec<usize> {
        let mut seen = vec![false; elems.len()];
        let id = index[&mat_key(&mat_identity(ring, n))];
        seen[id] = true;
        let mut queue = VecDeque::from([id]);
        while let Some(cur) = queue.pop_front() {
            for g in gens {
                let next = index[&mat_key(&mat_mul(ring, &elems[cur], g))];
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        (0..elems.len()).filter(|&i| seen[i]).collect()
    };
    loop {
        let closed = closure_of(&gens);
        if closed.len() == elems.len() {
            break;
        }
        let covered: HashSet<usize> = closed.into_iter().collect();
        let missing = (0..elems.len()).find(|i| !covered.contains(i)).unwrap();
        gens.push(elems[missing].clone());
    }

    // normal closure of the generator commutators: grow to a fixpoint under
    // pairwise products and conjugation by generators; inverses follow from
    // finiteness
    let mut in_h = vec![false; elems.len()];
    in_h[index[&mat_key(&mat_identity(ring, n))]] = true;
    for a in &gens {
        for b in &gens {
            let ab = mat_mul(ring, a, b);
            let ba_inv = mat_inv(ring, &mat_mul(ring, b, a))?;
            in_h[index[&mat_key(&mat_mul(ring, &ab, &ba_inv))]] = true;
        }
    }
    let gen_invs: Vec<SlMat> = gens
        .iter()
        .map(|g| mat_inv(ring, g))
        .collect::<Result<_>>()?;
    loop {
        let members: Vec<usize> = (0..elems.len()).filter(|&i| in_h[i]).collect();
        let mut grew = false;
        for &a in &members {
            for &b in &members {
                let prod = index[&mat_key(&mat_mul(ring, &elems[a], &elems[b]))];
                if !in_h[prod] {
                    in_h[prod] = true;
                    grew = true;
                }
            }
            for (g, gi) in gens.iter().zip(&gen_invs) {
                let conj =
                    index[&mat_key(&mat_mul(ring, &mat_mul(ring, g, &elems[a]), gi))];
                if !in_h[conj] {
                    in_h[conj] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let commutator: HashSet<usize> = (0..elems.len()).filter(|&i| in_h[i]).collect();

    let second: HashSet<usize> = (0..elems.len())
        .filter(|&i| congruence_level(ring, &elems[i]) >= 2)
        .collect();
    let commutator_is_second_level = commutator == second;

    // quotient as a black-box abelian group on coset representatives
    let mut coset_of: Vec<Option<usize>> = vec![None; elems.len()];
    let mut reps: Vec<usize> = Vec::new();
    let comm_list: Vec<usize> = {
        let mut v: Vec<usize> = commutator.iter().copied().collect();
        v.sort_unstable();
        v
    };
    for i in 0..elems.len() {
        if coset_of[i].is_some() {
            continue;
        }
        let rep_id = reps.len();
        reps.push(i);
        for &h in &comm_list {
            let member = index[&mat_key(&mat_mul(ring, &elems[i], &elems[h]))];
            assert!(coset_of[member].is_none());
            coset_of[member] = Some(rep_id);
        }
    }
    let gen_cosets: Vec<usize> = gens
        .iter()
        .map(|g| coset_of[index[&mat_key(g)]].unwrap())
        .collect();
    let mul = |a: &usize, b: &usize| -> usize {
        let prod = mat_mul(ring, &elems[reps[*a]], &elems[reps[*b]]);
        coset_of[index[&mat_key(&prod)]].unwrap()
    };
    let structure: GroupStructure<usize> = abelian_structure(
        coset_of[index[&mat_key(&mat_identity(ring, n))]].unwrap(),
        &gen_cosets,
        mul,
        reps.len() + 1,
    )?;
    let quotient_factors = structure
        .group
        .factors_u64()
        .expect("finite quotient has finite factors");

    Ok(AbelianizationReport {
        group_order: elems.len() as u64,
        commutator_order: commutator.len() as u64,
        commutator_is_second_level,
        quotient_factors,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerStructure {
    pub i: usize,
    pub layer_order: u64,
    pub factors: Vec<u64>,
}

/// The layer C^i / C^(i+1) as an abelian group, by coset enumeration.
pub fn layer_structure_small(ring: &Ring, n: usize, i: usize) -> Result<LayerStructure> {
    let elems = enumerate_congruence(ring, n, i)?;
    let index: HashMap<Vec<u16>, usize> = elems
        .iter()
        .enumerate()
        .map(|(k, m)| (mat_key(m), k))
        .collect();
    let next: Vec<usize> = (0..elems.len())
        .filter(|&k| congruence_level(ring, &elems[k]) >= i + 1)
        .collect();
    let mut coset_of: Vec<Option<usize>> = vec![None; elems.len()];
    let mut reps: Vec<usize> = Vec::new();
    for k in 0..elems.len() {
        if coset_of[k].is_some() {
            continue;
        }
        let rep_id = reps.len();
        reps.push(k);
        for &h in &next {
            let member = index[&mat_key(&mat_mul(ring, &elems[k], &elems[h]))];
            coset_of[member] = Some(rep_id);
        }
    }
    let mul = |a: &usize, b: &usize| -> usize {
        let prod = mat_mul(ring, &elems[reps[*a]], &elems[reps[*b]]);
        coset_of[index[&mat_key(&prod)]].unwrap()
    };
    let gen_cosets: Vec<usize> = (0..reps.len()).collect();
    let structure = abelian_structure(
        coset_of[index[&mat_key(&mat_identity(ring, n))]].unwrap(),
        &gen_cosets,
        mul,
        reps.len() + 1,
    )?;
    Ok(LayerStructure {
        i,
        layer_order: reps.len() as u64,
        factors: structure.group.factors_u64().unwrap(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerAcyclicity {
    pub i: usize,
    pub p: u32,
    pub layer_order: u64,
    /// Every invariant factor is a power of the ring characteristic.
    pub char_power_layer: bool,
    /// H_d(layer; Z/p) for 0 <= d <= 4 from the invariant factors.
    pub homology_dims: Vec<u64>,
    pub acyclic: bool,
}

/// At a prime away from the characteristic the layer contributes nothing:
/// its order is a power of char, so r = s = 0 in the homology formula.
pub fn layer_acyclicity(ring: &Ring, n: usize, i: usize, p: u32) -> Result<LayerAcyclicity> {
    if p as u64 == ring.field.p as u64 {
        return Err(Error::PEqualsCharacteristic);
    }
    let layer = layer_structure_small(ring, n, i)?;
    let p0 = ring.field.p as u64;
    let char_power_layer = layer.factors.iter().all(|&d| {
        let mut d = d;
        while d % p0 == 0 {
            d /= p0;
        }
        d == 1
    });
    let fin = crate::homology::FiniteAbelian::new(layer.factors.clone())?;
    let homology_dims = fin.homology_dims(p as u64, 4);
    let acyclic = homology_dims[0] == 1 && homology_dims[1..].iter().all(|&d| d == 0);
    Ok(LayerAcyclicity {
        i,
        p,
        layer_order: layer.layer_order,
        char_power_layer,
        homology_dims,
        acyclic,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PthRootCheck {
    pub trials: u64,
    pub exponent: u64,
    pub order_failures: u64,
    pub root_failures: u64,
}

/// C is a group of exponent dividing char^ceil(log_char l); away from the
/// characteristic, p-th roots exist inside C and are p-th powers on the
/// nose: Y = X^s with s p = 1 mod exponent satisfies Y^p = X.
pub fn pth_root_check<R: Rng>(
    ring: &Ring,
    n: usize,
    p: u32,
    trials: u64,
    rng: &mut R,
) -> Result<PthRootCheck> {
    if p as u64 == ring.field.p as u64 {
        return Err(Error::PEqualsCharacteristic);
    }
    let p0 = ring.field.p as u64;
    // smallest power of the characteristic at or above the truncation order
    let mut exponent = 1u64;
    while exponent < ring.trunc as u64 {
        exponent *= p0;
    }
    let s = (0..exponent)
        .find(|&cand| (cand as u128 * p as u128) % exponent as u128 == 1 % exponent as u128)
        .expect("p is invertible modulo a power of a different prime");
    let mut order_failures = 0;
    let mut root_failures = 0;
    let id = mat_identity(ring, n);
    for _ in 0..trials {
        let x = sample_congruence(ring, n, 1, rng);
        let mut xe = id.clone();
        for _ in 0..exponent {
            xe = mat_mul(ring, &xe, &x);
        }
        if xe != id {
            order_failures += 1;
            continue;
        }
        let mut y = id.clone();
        for _ in 0..s {
            y = mat_mul(ring, &y, &x);
        }
        let mut yp = id.clone();
        for _ in 0..p {
            yp = mat_mul(ring, &yp, &y);
        }
        if yp != x {
            root_failures += 1;
        }
    }
    Ok(PthRootCheck {
        trials,
        exponent,
        order_failures,
        root_failures,
    })
}
