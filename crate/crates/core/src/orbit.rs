//! PGL_2(A) acting on general-position tuples: canonical frames, the orbit
//! complex D_* whose degree-d basis is the (d+1)-tuples of cross-ratio
//! coordinates, the quotient complex for a residue-field inclusion, the E^1
//! row these feed, and stabilizer checks.
//!
//! Conventions, fixed once: a projective matrix acts on normal-form columns
//! (u : w); the frame of a general-position triple (x0, x1, x2) is the unique
//! class g with g x0 = 0, g x1 = infinity, g x2 = 1; further points y pick up
//! the coordinate alpha = second/first of g y. A degree-d orbit simplex is
//! the alpha-tuple of a general-position (d+4)-tuple (0, inf, 1, v_0..v_d);
//! its faces delete one slot of the underlying tuple and re-frame, with sign
//! (-1)^i on slot i.

use std::collections::HashMap;

use crate::gf::GfMat;
use crate::pcomplex::{is_general_position, ProjPoint, TUPLE_BASIS_LIMIT};
use crate::ring::{Elem, Ring};
use crate::{Error, Result};

/// An element of PGL_2(A): entries (a b / c d), det a unit, scaled so the
/// first unit entry in reading order is 1. Equality of structs is equality in
/// PGL_2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PMat {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl PMat {
    pub fn new(ring: &Ring, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<PMat> {
        for e in [&a, &b, &c, &d] {
            ring.check(e)?;
        }
        let det = ring.sub(&ring.mul(&a, &d), &ring.mul(&b, &c));
        if !ring.is_unit(&det) {
            return Err(Error::NotInvertible);
        }
        let scale = [&a, &b, &c, &d]
            .into_iter()
            .find(|e| ring.is_unit(e))
            .expect("a matrix with unit determinant has a unit entry")
            .clone();
        let s = ring.inv(&scale)?;
        Ok(PMat {
            a: ring.mul(&a, &s),
            b: ring.mul(&b, &s),
            c: ring.mul(&c, &s),
            d: ring.mul(&d, &s),
        })
    }

    pub fn identity(ring: &Ring) -> PMat {
        PMat {
            a: ring.one(),
            b: ring.zero(),
            c: ring.zero(),
            d: ring.one(),
        }
    }

    pub fn apply(&self, ring: &Ring, pt: &ProjPoint) -> ProjPoint {
        let (u, w) = pt.pair(ring);
        let nu = ring.add(&ring.mul(&self.a, &u), &ring.mul(&self.b, &w));
        let nw = ring.add(&ring.mul(&self.c, &u), &ring.mul(&self.d, &w));
        ProjPoint::from_pair(ring, &nu, &nw)
            .expect("projective matrices preserve unimodularity")
    }

    pub fn compose(&self, ring: &Ring, other: &PMat) -> PMat {
        PMat::new(
            ring,
            ring.add(&ring.mul(&self.a, &other.a), &ring.mul(&self.b, &other.c)),
            ring.add(&ring.mul(&self.a, &other.b), &ring.mul(&self.b, &other.d)),
            ring.add(&ring.mul(&self.c, &other.a), &ring.mul(&self.d, &other.c)),
            ring.add(&ring.mul(&self.c, &other.b), &ring.mul(&self.d, &other.d)),
        )
        .expect("product of invertible matrices is invertible")
    }

    /// Inverse in PGL_2: the adjugate.
    pub fn inverse(&self, ring: &Ring) -> PMat {
        PMat::new(
            ring,
            self.d.clone(),
            ring.neg(&self.b),
            ring.neg(&self.c),
            self.a.clone(),
        )
        .expect("adjugate of an invertible matrix is invertible")
    }
}

/// The frame of a general-position tuple: the unique projective class g
/// sending the first three points to (0, infinity, 1), together with the
/// coordinates alpha_i = g(points[3 + i]) of the remaining points.
///
/// Fails with `TupleNotGeneralPosition` unless all points are pairwise in
/// general position.
pub fn canonical_frame(ring: &Ring, points: &[ProjPoint]) -> Result<(PMat, Vec<Elem>)> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(
            "a frame needs at least three points".into(),
        ));
    }
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            if !is_general_position(ring, x, y) {
                return Err(Error::TupleNotGeneralPosition);
            }
        }
    }
    let (u0, w0) = points[0].pair(ring);
    let (u1, w1) = points[1].pair(ring);
    let (u2, w2) = points[2].pair(ring);
    // [v0 | v1] (lambda, mu)^T = v2 by Cramer; both coefficients are units
    let d01 = ring.sub(&ring.mul(&u0, &w1), &ring.mul(&w0, &u1));
    let d01_inv = ring.inv(&d01)?;
    let lambda = ring.mul(
        &ring.sub(&ring.mul(&u2, &w1), &ring.mul(&w2, &u1)),
        &d01_inv,
    );
    let mu = ring.mul(
        &ring.sub(&ring.mul(&u0, &w2), &ring.mul(&w0, &u2)),
        &d01_inv,
    );
    debug_assert!(ring.is_unit(&lambda) && ring.is_unit(&mu));
    // h sends (0, inf, 1) to (v0, v1, v2); the frame is its inverse
    let h = PMat::new(
        ring,
        ring.mul(&lambda, &u0),
        ring.mul(&mu, &u1),
        ring.mul(&lambda, &w0),
        ring.mul(&mu, &w1),
    )?;
    let g = h.inverse(ring);
    let mut alphas = Vec::with_capacity(points.len() - 3);
    for y in &points[3..] {
        let (uy, wy) = y.pair(ring);
        let nu = ring.add(&ring.mul(&g.a, &uy), &ring.mul(&g.b, &wy));
        let nw = ring.add(&ring.mul(&g.c, &uy), &ring.mul(&g.d, &wy));
        // nu is a unit: g y stays in general position with infinity
        alphas.push(ring.div(&nw, &nu)?);
    }
    Ok((g, alphas))
}

/// Cross-ratio coordinates are admissible: alpha and 1 - alpha are units.
pub fn is_admissible(ring: &Ring, alpha: &Elem) -> bool {
    ring.is_unit(alpha) && ring.is_unit(&ring.sub(&ring.one(), alpha))
}

/// Admissible elements in canonical order; there are (q - 2) q^(M-1).
pub fn admissible_elements(ring: &Ring) -> Result<Vec<Elem>> {
    let count = ring.unit_count().ok_or(Error::GuardExceeded {
        what: "admissible enumeration",
        size: u128::MAX,
        limit: TUPLE_BASIS_LIMIT as u128,
    })?;
    if count > TUPLE_BASIS_LIMIT as u128 {
        return Err(Error::GuardExceeded {
            what: "admissible enumeration",
            size: count,
            limit: TUPLE_BASIS_LIMIT as u128,
        });
    }
    Ok(ring
        .units()
        .filter(|x| is_admissible(ring, x))
        .collect())
}

/// The underlying general-position tuple (0, inf, 1, v_0, ..., v_d) of an
/// orbit simplex given by its alphas.
fn simplex_points(ring: &Ring, alphas: &[Elem]) -> Vec<ProjPoint> {
    let mut pts = vec![
        ProjPoint::zero(ring),
        ProjPoint::infinity(ring),
        ProjPoint::one(ring),
    ];
    pts.extend(alphas.iter().cloned().map(ProjPoint::Affine));
    pts
}

/// Face i of an orbit simplex: delete slot i of the underlying tuple and
/// re-frame what remains. Returns the sign (-1)^i and the new alphas.
pub fn orbit_face(ring: &Ring, alphas: &[Elem], i: usize) -> Result<(i64, Vec<Elem>)> {
    let mut pts = simplex_points(ring, alphas);
    if i >= pts.len() {
        return Err(Error::InvalidParameter(format!(
            "face index {i} out of range for a tuple of {}",
            pts.len()
        )));
    }
    pts.remove(i);
    let (_, face) = canonical_frame(ring, &pts)?;
    let sign = if i % 2 == 0 { 1 } else { -1 };
    Ok((sign, face))
}

#[derive(Debug)]
pub struct OrbitComplex {
    pub p: u64,
    /// Admissible cross-ratio values, canonical order.
    pub admissibles: Vec<Elem>,
    /// bases[d]: degree-d simplices as tuples of indices into `admissibles`,
    /// lexicographic; entries pairwise differ by units.
    pub bases: Vec<Vec<Vec<u32>>>,
    /// rational[d][j]: all coordinates of the simplex are constants.
    pub rational: Vec<Vec<bool>>,
    boundaries: Vec<GfMat>,
}

fn enumerate_orbit_bases(
    ring: &Ring,
    admissibles: &[Elem],
    dmax: usize,
) -> Result<Vec<Vec<Vec<u32>>>> {
    let n = admissibles.len();
    let mut diff_unit = vec![false; n * n];
    for i in 0..n {
        for j in i + 1..n {
            if ring.is_unit(&ring.sub(&admissibles[i], &admissibles[j])) {
                diff_unit[i * n + j] = true;
                diff_unit[j * n + i] = true;
            }
        }
    }
    let mut bases: Vec<Vec<Vec<u32>>> = Vec::with_capacity(dmax + 1);
    bases.push((0..n as u32).map(|i| vec![i]).collect());
    for d in 1..=dmax {
        let mut next: Vec<Vec<u32>> = Vec::new();
        for tuple in &bases[d - 1] {
            'extend: for cand in 0..n as u32 {
                for &t in tuple {
                    if !diff_unit[t as usize * n + cand as usize] {
                        continue 'extend;
                    }
                }
                let mut ext = tuple.clone();
                ext.push(cand);
                next.push(ext);
                if next.len() > TUPLE_BASIS_LIMIT {
                    return Err(Error::GuardExceeded {
                        what: "orbit tuple basis",
                        size: next.len() as u128,
                        limit: TUPLE_BASIS_LIMIT as u128,
                    });
                }
            }
        }
        next.sort_unstable();
        bases.push(next);
    }
    Ok(bases)
}

/// Basis sizes |D_d| for d <= dmax, without boundary matrices.
pub fn orbit_basis_sizes(ring: &Ring, dmax: usize) -> Result<Vec<u64>> {
    let admissibles = admissible_elements(ring)?;
    let bases = enumerate_orbit_bases(ring, &admissibles, dmax)?;
    Ok(bases.iter().map(|b| b.len() as u64).collect())
}

pub fn build_orbit_complex(ring: &Ring, p: u64, dmax: usize) -> Result<OrbitComplex> {
    let admissibles = admissible_elements(ring)?;
    let index_of: HashMap<u128, u32> = admissibles
        .iter()
        .enumerate()
        .map(|(i, x)| (ring.elem_key(x), i as u32))
        .collect();
    let bases = enumerate_orbit_bases(ring, &admissibles, dmax)?;

    let rational: Vec<Vec<bool>> = bases
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|tuple| {
                    tuple.iter().all(|&i| {
                        admissibles[i as usize].c[1..].iter().all(|&c| c == 0)
                    })
                })
                .collect()
        })
        .collect();

    let mut boundaries = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let face_index: HashMap<&[u32], u32> = bases[d - 1]
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i as u32))
            .collect();
        let mut triplets = Vec::with_capacity(bases[d].len() * (d + 4));
        for (col, tuple) in bases[d].iter().enumerate() {
            let alphas: Vec<Elem> = tuple
                .iter()
                .map(|&i| admissibles[i as usize].clone())
                .collect();
            for i in 0..=d + 3 {
                let (sign, face) = orbit_face(ring, &alphas, i)?;
                let face_tuple: Vec<u32> = face
                    .iter()
                    .map(|x| {
                        *index_of
                            .get(&ring.elem_key(x))
                            .expect("faces of admissible simplices are admissible")
                    })
                    .collect();
                let row = *face_index
                    .get(face_tuple.as_slice())
                    .expect("face tuple must be in the lower basis");
                triplets.push((row, col as u32, sign));
            }
        }
        boundaries.push(GfMat::from_triplets(
            p,
            bases[d - 1].len(),
            bases[d].len(),
            triplets,
        ));
    }

    Ok(OrbitComplex {
        p,
        admissibles,
        bases,
        rational,
        boundaries,
    })
}

impl OrbitComplex {
    pub fn dmax(&self) -> usize {
        self.bases.len() - 1
    }

    /// Boundary D_d -> D_{d-1}, d >= 1.
    pub fn boundary(&self, d: usize) -> &GfMat {
        &self.boundaries[d - 1]
    }

    pub fn boundary_squares_to_zero(&self) -> bool {
        for d in 2..=self.dmax() {
            if !self.boundary(d - 1).mul(self.boundary(d)).is_zero() {
                return false;
            }
        }
        true
    }

    /// The rational part is a subcomplex: every face of a rational simplex
    /// lands on rational simplices only.
    pub fn rational_part_face_closed(&self) -> bool {
        for d in 1..=self.dmax() {
            let b = self.boundary(d);
            for &(row, col, _) in &b.triplets {
                if self.rational[d][col as usize] && !self.rational[d - 1][row as usize] {
                    return false;
                }
            }
        }
        true
    }
}

/// The quotient complex Q_* = D_*(A) / D_*(k) for the residue inclusion.
#[derive(Debug)]
pub struct QuotientComplex {
    pub p: u64,
    pub basis_sizes: Vec<u64>,
    pub rational_sizes: Vec<u64>,
    /// The rational simplices match the residue-field complex degreewise,
    /// with identical boundary coefficients.
    pub subcomplex_verified: bool,
    boundaries: Vec<GfMat>,
}

pub fn build_quotient_complex(
    residue_ring: &Ring,
    ring: &Ring,
    residue_complex: &OrbitComplex,
    complex: &OrbitComplex,
) -> Result<QuotientComplex> {
    if ring.trunc < 2 {
        return Err(Error::InvalidParameter(
            "the quotient explorer needs a proper truncation (l >= 2)".into(),
        ));
    }
    if residue_complex.dmax() != complex.dmax() || residue_complex.p != complex.p {
        return Err(Error::InvalidParameter(
            "complexes must share degree range and prime".into(),
        ));
    }
    let dmax = complex.dmax();

    // positionally match rational simplices with the residue complex: both
    // enumerations are lexicographic over canonically ordered admissibles
    let mut verified = true;
    let mut rational_pos: Vec<Vec<u32>> = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let rat: Vec<u32> = (0..complex.bases[d].len() as u32)
            .filter(|&j| complex.rational[d][j as usize])
            .collect();
        if rat.len() != residue_complex.bases[d].len() {
            verified = false;
        } else {
            for (kj, &rj) in rat.iter().enumerate() {
                let k_tuple = &residue_complex.bases[d][kj];
                let r_tuple = &complex.bases[d][rj as usize];
                let lifts_match = k_tuple.iter().zip(r_tuple).all(|(&ki, &ri)| {
                    let kc = residue_ring.residue(&residue_complex.admissibles[ki as usize]);
                    let lifted = ring.constant(kc);
                    complex.admissibles[ri as usize] == lifted
                });
                if !lifts_match {
                    verified = false;
                }
            }
        }
        rational_pos.push(rat);
    }
    // boundary coefficients agree on the rational part
    if verified {
        for d in 1..=dmax {
            let restricted = complex
                .boundary(d)
                .submatrix(&rational_pos[d - 1], &rational_pos[d]);
            if &restricted != residue_complex.boundary(d) {
                verified = false;
                break;
            }
        }
    }
    verified = verified && complex.rational_part_face_closed();

    let mut boundaries = Vec::with_capacity(dmax);
    let nonrational: Vec<Vec<u32>> = (0..=dmax)
        .map(|d| {
            (0..complex.bases[d].len() as u32)
                .filter(|&j| !complex.rational[d][j as usize])
                .collect()
        })
        .collect();
    for d in 1..=dmax {
        boundaries.push(
            complex
                .boundary(d)
                .submatrix(&nonrational[d - 1], &nonrational[d]),
        );
    }

    Ok(QuotientComplex {
        p: complex.p,
        basis_sizes: nonrational.iter().map(|v| v.len() as u64).collect(),
        rational_sizes: rational_pos.iter().map(|v| v.len() as u64).collect(),
        subcomplex_verified: verified,
        boundaries,
    })
}

impl QuotientComplex {
    pub fn boundary(&self, d: usize) -> &GfMat {
        &self.boundaries[d - 1]
    }

    pub fn boundary_squares_to_zero(&self) -> bool {
        for d in 2..self.basis_sizes.len() {
            if !self.boundary(d - 1).mul(self.boundary(d)).is_zero() {
                return false;
            }
        }
        true
    }

    /// (H_0, H_1) of the quotient; observational values.
    pub fn low_homology(&self) -> (u64, u64) {
        let r1 = self.boundary(1).rank();
        let h0 = self.basis_sizes[0] - r1 as u64;
        let h1 = if self.basis_sizes.len() > 2 {
            let ker1 = self.basis_sizes[1] as usize - r1;
            (ker1 - self.boundary(2).rank()) as u64
        } else {
            0
        };
        (h0, h1)
    }
}

/// One row block of the E^1 page: dims[col][row] for 0 <= col <= max_col,
/// 0 <= row <= max_row. Columns 0 and 1 carry H_row(A^x); column 2 is the
/// class of the base triple; columns >= 3 are concentrated in row 0 with the
/// orbit basis counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Page {
    pub p: u32,
    pub dims: Vec<Vec<u64>>,
}

pub fn e1_page(ring: &Ring, p: u32, max_col: usize, max_row: usize) -> Result<E1Page> {
    let (r, s) = crate::units::unit_rs(ring, p)?;
    let unit_dims = crate::homology::unit_homology_dims(r, s, max_row);
    let orbit_sizes = if max_col >= 3 {
        orbit_basis_sizes(ring, max_col - 3)?
    } else {
        Vec::new()
    };
    let mut dims = Vec::with_capacity(max_col + 1);
    for col in 0..=max_col {
        let column: Vec<u64> = match col {
            0 | 1 => unit_dims.clone(),
            2 => std::iter::once(1)
                .chain(std::iter::repeat(0).take(max_row))
                .collect(),
            c => std::iter::once(orbit_sizes[c - 3])
                .chain(std::iter::repeat(0).take(max_row))
                .collect(),
        };
        dims.push(column);
    }
    Ok(E1Page { p, dims })
}

pub const PGL_ENUMERATION_LIMIT: u128 = 2_000_000;

/// All of PGL_2(A), by enumerating canonical representatives directly: every
/// class has exactly one member whose first unit entry is 1.
pub fn enumerate_pgl2(ring: &Ring) -> Result<Vec<PMat>> {
    let total = ring
        .total_count()
        .and_then(|t| t.checked_pow(4))
        .ok_or(Error::GuardExceeded {
            what: "PGL_2 enumeration",
            size: u128::MAX,
            limit: PGL_ENUMERATION_LIMIT,
        })?;
    if total > PGL_ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            what: "PGL_2 enumeration",
            size: total,
            limit: PGL_ENUMERATION_LIMIT,
        });
    }
    let elems: Vec<Elem> = ring.elements().collect();
    let mut out = Vec::new();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    let det = ring.sub(&ring.mul(a, d), &ring.mul(b, c));
                    if !ring.is_unit(&det) {
                        continue;
                    }
                    let first_unit = [a, b, c, d]
                        .into_iter()
                        .find(|e| ring.is_unit(e))
                        .unwrap();
                    if *first_unit != ring.one() {
                        continue;
                    }
                    out.push(PMat {
                        a: (*a).clone(),
                        b: (*b).clone(),
                        c: (*c).clone(),
                        d: (*d).clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct StabilizerReport {
    /// |Stab| of (0), (0, inf), (0, inf, 1) by the unit/ring counts.
    pub theoretic: [u128; 3],
    pub group_order: Option<u64>,
    pub exhaustive: Option<[u64; 3]>,
    /// Orbit sizes match the general-position tuple counts (orbit-stabilizer).
    pub transitive: Option<[bool; 3]>,
    pub sharply_three_transitive: Option<bool>,
}

pub fn stabilizer_report(ring: &Ring) -> Result<StabilizerReport> {
    let units = ring.unit_count().unwrap_or(u128::MAX);
    let total = ring.total_count().unwrap_or(u128::MAX);
    let theoretic = [units * total, units, 1];

    let enumerated = enumerate_pgl2(ring).ok();
    let Some(group) = enumerated else {
        return Ok(StabilizerReport {
            theoretic,
            group_order: None,
            exhaustive: None,
            transitive: None,
            sharply_three_transitive: None,
        });
    };

    let zero = ProjPoint::zero(ring);
    let inf = ProjPoint::infinity(ring);
    let one = ProjPoint::one(ring);
    let tuples: [&[ProjPoint]; 3] = [
        &[zero.clone()],
        &[zero.clone(), inf.clone()],
        &[zero.clone(), inf.clone(), one.clone()],
    ];

    let mut exhaustive = [0u64; 3];
    let mut transitive = [false; 3];
    let fiber = ring.maximal_ideal_count().unwrap();
    let n = crate::pcomplex::p1_count(ring).unwrap();
    let expected_orbit = [n, n * (n - fiber), n * (n - fiber) * (n - 2 * fiber)];
    for (t, tuple) in tuples.iter().enumerate() {
        let mut stab = 0u64;
        let mut orbit: std::collections::HashSet<Vec<(u8, u128)>> =
            std::collections::HashSet::new();
        for g in &group {
            let image: Vec<ProjPoint> = tuple.iter().map(|x| g.apply(ring, x)).collect();
            if image.iter().zip(tuple.iter()).all(|(a, b)| a == b) {
                stab += 1;
            }
            orbit.insert(image.iter().map(|x| x.key(ring)).collect());
        }
        exhaustive[t] = stab;
        transitive[t] = orbit.len() as u128 == expected_orbit[t];
    }
    let sharp = group.len() as u128 == expected_orbit[2];

    Ok(StabilizerReport {
        theoretic,
        group_order: Some(group.len() as u64),
        exhaustive: Some(exhaustive),
        transitive: Some(transitive),
        sharply_three_transitive: Some(sharp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::{Rng, SeedableRng};

    fn ring(p: u32, m: usize, l: usize) -> Ring {
        Ring::new(Field::prime(p).unwrap(), m, l).unwrap()
    }

    fn affine(r: &Ring, c: u32) -> ProjPoint {
        ProjPoint::Affine(r.constant(c))
    }

    #[test]
    fn frame_of_base_triple_is_identity() {
        let r = ring(7, 1, 2);
        let pts = [
            ProjPoint::zero(&r),
            ProjPoint::infinity(&r),
            ProjPoint::one(&r),
        ];
        let (g, alphas) = canonical_frame(&r, &pts).unwrap();
        assert_eq!(g, PMat::identity(&r));
        assert!(alphas.is_empty());
    }

    #[test]
    fn frame_of_swapped_triple() {
        // (inf, 0, 1) frames to z -> 1/z, the class of (0 1 / 1 0)
        let r = ring(7, 1, 1);
        let pts = [
            ProjPoint::infinity(&r),
            ProjPoint::zero(&r),
            ProjPoint::one(&r),
        ];
        let (g, _) = canonical_frame(&r, &pts).unwrap();
        let swap = PMat::new(&r, r.zero(), r.one(), r.one(), r.zero()).unwrap();
        assert_eq!(g, swap);
    }

    #[test]
    fn frame_sends_tuple_to_normal_form() {
        let r = ring(5, 1, 2);
        let t = r.var(0).unwrap();
        let pts = [
            affine(&r, 2),
            ProjPoint::Affine(r.add(&r.constant(3), &t)),
            ProjPoint::Infinite(r.scale(&t, 2)),
            ProjPoint::Affine(r.add(&r.constant(4), &r.scale(&t, 3))),
        ];
        let (g, alphas) = canonical_frame(&r, &pts).unwrap();
        assert_eq!(g.apply(&r, &pts[0]), ProjPoint::zero(&r));
        assert_eq!(g.apply(&r, &pts[1]), ProjPoint::infinity(&r));
        assert_eq!(g.apply(&r, &pts[2]), ProjPoint::one(&r));
        assert_eq!(alphas.len(), 1);
        assert_eq!(g.apply(&r, &pts[3]), ProjPoint::Affine(alphas[0].clone()));
        assert!(is_admissible(&r, &alphas[0]));
    }

    #[test]
    fn degenerate_tuple_rejected() {
        let r = ring(5, 1, 2);
        let t = r.var(0).unwrap();
        // 2 and 2 + t share a residue: not general position
        let pts = [
            affine(&r, 2),
            ProjPoint::Affine(r.add(&r.constant(2), &t)),
            ProjPoint::one(&r),
        ];
        assert!(matches!(
            canonical_frame(&r, &pts),
            Err(Error::TupleNotGeneralPosition)
        ));
    }

    #[test]
    fn faces_of_2_3_over_f7() {
        // the five faces of (0, inf, 1, 2, 3): alphas 4, 6, 5, 3, 2 with
        // alternating signs
        let r = ring(7, 1, 1);
        let alphas = vec![r.constant(2), r.constant(3)];
        let expect: [(i64, u32); 5] = [(1, 4), (-1, 6), (1, 5), (-1, 3), (1, 2)];
        for (i, &(sign, val)) in expect.iter().enumerate() {
            let (s, face) = orbit_face(&r, &alphas, i).unwrap();
            assert_eq!(s, sign, "sign of face {i}");
            assert_eq!(face.len(), 1);
            assert_eq!(face[0], r.constant(val), "value of face {i}");
        }
    }

    #[test]
    fn admissible_counts() {
        assert_eq!(admissible_elements(&ring(5, 1, 1)).unwrap().len(), 3);
        assert_eq!(admissible_elements(&ring(5, 1, 2)).unwrap().len(), 15);
        assert_eq!(admissible_elements(&ring(7, 1, 2)).unwrap().len(), 35);
    }

    #[test]
    fn orbit_complex_d0_sizes_and_d2() {
        let c = build_orbit_complex(&ring(5, 1, 1), 3, 2).unwrap();
        assert_eq!(c.bases[0].len(), 3);
        assert!(c.boundary_squares_to_zero());
        let c2 = build_orbit_complex(&ring(5, 1, 2), 3, 2).unwrap();
        assert_eq!(c2.bases[0].len(), 15);
        assert!(c2.boundary_squares_to_zero());
        assert!(c2.rational_part_face_closed());
    }

    #[test]
    fn f7_boundary_squares_through_degree_3() {
        let c = build_orbit_complex(&ring(7, 1, 1), 3, 3).unwrap();
        assert_eq!(c.bases[0].len(), 5);
        assert_eq!(c.bases[1].len(), 20);
        assert_eq!(c.bases[2].len(), 60);
        assert_eq!(c.bases[3].len(), 120);
        assert!(c.boundary_squares_to_zero());
    }

    #[test]
    fn frame_equivariance_under_random_pgl() {
        let r = ring(5, 1, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let points = crate::pcomplex::enumerate_p1(&r).unwrap();
        let total = r.total_count().unwrap() as u128;
        for _ in 0..200 {
            // random projective matrix
            let g = loop {
                let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                    r.elem_from_key(rng.gen_range(0..total))
                };
                let (a, b, c, d) = (
                    pick(&mut rng),
                    pick(&mut rng),
                    pick(&mut rng),
                    pick(&mut rng),
                );
                if let Ok(m) = PMat::new(&r, a, b, c, d) {
                    break m;
                }
            };
            // random general-position 4-tuple
            let tuple = loop {
                let mut idx: Vec<usize> = (0..4)
                    .map(|_| rng.gen_range(0..points.len()))
                    .collect();
                idx.dedup();
                let pts: Vec<ProjPoint> =
                    idx.iter().map(|&i| points[i].clone()).collect();
                if pts.len() == 4
                    && canonical_frame(&r, &pts).is_ok()
                {
                    break pts;
                }
            };
            let (_, alphas) = canonical_frame(&r, &tuple).unwrap();
            let moved: Vec<ProjPoint> =
                tuple.iter().map(|x| g.apply(&r, x)).collect();
            let (_, alphas_moved) = canonical_frame(&r, &moved).unwrap();
            assert_eq!(alphas, alphas_moved, "alphas are PGL invariants");
        }
    }

    #[test]
    fn quotient_f5_sizes() {
        let k = ring(5, 1, 1);
        let a = ring(5, 1, 2);
        let kc = build_orbit_complex(&k, 3, 2).unwrap();
        let ac = build_orbit_complex(&a, 3, 2).unwrap();
        let q = build_quotient_complex(&k, &a, &kc, &ac).unwrap();
        assert!(q.subcomplex_verified);
        assert_eq!(q.rational_sizes[0], 3);
        assert_eq!(q.basis_sizes[0], 12); // 15 - 3
        assert!(q.boundary_squares_to_zero());
    }

    #[test]
    fn e1_page_shapes() {
        let r = ring(5, 1, 2);
        let page = e1_page(&r, 2, 5, 4).unwrap();
        assert_eq!(page.dims.len(), 6);
        // columns 0, 1 carry H_*(A^x; Z/2); A^x is cyclic of order 20
        assert_eq!(page.dims[0], vec![1, 1, 1, 1, 1]);
        assert_eq!(page.dims[1], page.dims[0]);
        assert_eq!(page.dims[2], vec![1, 0, 0, 0, 0]);
        assert_eq!(page.dims[3][0], 15);
        assert!(page.dims[3][1..].iter().all(|&x| x == 0));
        assert_eq!(page.dims[4][0], 150); // (q-2)(q-3) q^2 ordered pairs
    }

    #[test]
    fn pgl2_f3_order_24_and_stabilizers() {
        let r = ring(3, 1, 1);
        let report = stabilizer_report(&r).unwrap();
        assert_eq!(report.group_order, Some(24));
        assert_eq!(report.theoretic, [6, 2, 1]);
        assert_eq!(report.exhaustive, Some([6, 2, 1]));
        assert_eq!(report.transitive, Some([true, true, true]));
        assert_eq!(report.sharply_three_transitive, Some(true));
    }

    #[test]
    fn pgl2_f5_stabilizers() {
        let r = ring(5, 1, 1);
        let report = stabilizer_report(&r).unwrap();
        assert_eq!(report.group_order, Some(120));
        assert_eq!(report.exhaustive, Some([20, 4, 1]));
        assert_eq!(report.sharply_three_transitive, Some(true));
    }
}
