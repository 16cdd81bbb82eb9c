//! The projective line P^1(A) over a truncated local ring and its
//! general-position complex: chains are generated by ordered tuples of
//! pairwise general-position points (2x2 determinant a unit, equivalently
//! distinct residue points), with the simplicial boundary.

use std::collections::HashMap;

use crate::gf::{dense_rank, GfMat};
use crate::ring::{Elem, Ring};
use crate::{Error, Result};

pub const P1_ENUMERATION_LIMIT: u128 = 100_000;
pub const TUPLE_BASIS_LIMIT: usize = 1_000_000;

/// A point of P^1(A) in its unique normal form: (1 : b) with b arbitrary, or
/// (a : 1) with a in the maximal ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Affine(Elem),
    Infinite(Elem),
}

impl ProjPoint {
    /// Normalize a unimodular pair (u : w). Fails when neither coordinate is
    /// a unit.
    pub fn from_pair(ring: &Ring, u: &Elem, w: &Elem) -> Result<ProjPoint> {
        ring.check(u)?;
        ring.check(w)?;
        if ring.is_unit(u) {
            Ok(ProjPoint::Affine(ring.div(w, u)?))
        } else if ring.is_unit(w) {
            Ok(ProjPoint::Infinite(ring.div(u, w)?))
        } else {
            Err(Error::NotUnimodular)
        }
    }

    pub fn zero(ring: &Ring) -> ProjPoint {
        ProjPoint::Affine(ring.zero())
    }

    pub fn one(ring: &Ring) -> ProjPoint {
        ProjPoint::Affine(ring.one())
    }

    pub fn infinity(ring: &Ring) -> ProjPoint {
        ProjPoint::Infinite(ring.zero())
    }

    /// Homogeneous coordinates of the normal form.
    pub fn pair(&self, ring: &Ring) -> (Elem, Elem) {
        match self {
            ProjPoint::Affine(b) => (ring.one(), b.clone()),
            ProjPoint::Infinite(a) => (a.clone(), ring.one()),
        }
    }

    /// Reduction to P^1(k), as a normalized residue pair.
    pub fn residue_class(&self, ring: &Ring) -> (u32, u32) {
        match self {
            ProjPoint::Affine(b) => (1, ring.residue(b)),
            ProjPoint::Infinite(_) => (0, 1),
        }
    }

    /// Canonical sort key within the global point enumeration.
    pub fn key(&self, ring: &Ring) -> (u8, u128) {
        match self {
            ProjPoint::Affine(b) => (0, ring.elem_key(b)),
            ProjPoint::Infinite(a) => (1, ring.elem_key(a)),
        }
    }
}

pub fn p1_count(ring: &Ring) -> Option<u128> {
    let q = ring.field.q as u128;
    ring.maximal_ideal_count().map(|m| m * (q + 1))
}

/// All points of P^1(A): the affine family (1 : b) in canonical element
/// order, then (a : 1) for a in the maximal ideal.
pub fn enumerate_p1(ring: &Ring) -> Result<Vec<ProjPoint>> {
    let count = p1_count(ring).ok_or(Error::GuardExceeded {
        what: "P^1 enumeration",
        size: u128::MAX,
        limit: P1_ENUMERATION_LIMIT,
    })?;
    if count > P1_ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            what: "P^1 enumeration",
            size: count,
            limit: P1_ENUMERATION_LIMIT,
        });
    }
    let mut points: Vec<ProjPoint> = Vec::with_capacity(count as usize);
    points.extend(ring.elements().map(ProjPoint::Affine));
    points.extend(ring.maximal_ideal_elements().map(ProjPoint::Infinite));
    Ok(points)
}

/// det [x | y] for the normal-form coordinate pairs.
pub fn point_det(ring: &Ring, x: &ProjPoint, y: &ProjPoint) -> Elem {
    let (ux, wx) = x.pair(ring);
    let (uy, wy) = y.pair(ring);
    ring.sub(&ring.mul(&ux, &wy), &ring.mul(&wx, &uy))
}

/// Two points are in general position when det [x | y] is a unit.
pub fn is_general_position(ring: &Ring, x: &ProjPoint, y: &ProjPoint) -> bool {
    ring.is_unit(&point_det(ring, x, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankBackend {
    Sparse,
    Dense,
}

#[derive(Debug)]
pub struct GpComplex {
    pub p: u64,
    pub points: Vec<ProjPoint>,
    /// bases[d] lists the degree-d basis: ordered (d+1)-tuples of point
    /// indices, pairwise general position, lexicographic order.
    pub bases: Vec<Vec<Vec<u32>>>,
    /// boundary(d) for 1 <= d <= dmax is stored at index d - 1.
    boundaries: Vec<GfMat>,
    pub augmentation: GfMat,
}

/// Degrees where vanishing may be asserted rather than just reported.
pub fn assertable_degree_window(q: u32) -> usize {
    (q as usize).saturating_sub(2)
}

pub fn build_gp_complex(ring: &Ring, p: u64, dmax: usize) -> Result<GpComplex> {
    let points = enumerate_p1(ring)?;
    let n = points.len();

    let mut bases: Vec<Vec<Vec<u32>>> = Vec::with_capacity(dmax + 1);
    bases.push((0..n as u32).map(|i| vec![i]).collect());

    if dmax >= 1 {
        // degree-1 size is n * (n - q^(M-1)): each point is in general
        // position with everything outside its residue fiber
        let fiber = ring.maximal_ideal_count().unwrap() as usize;
        let pairs = n as u128 * (n - fiber) as u128;
        if pairs > TUPLE_BASIS_LIMIT as u128 {
            return Err(Error::GuardExceeded {
                what: "tuple basis",
                size: pairs,
                limit: TUPLE_BASIS_LIMIT as u128,
            });
        }
        let mut adj = vec![false; n * n];
        for i in 0..n {
            for j in i + 1..n {
                if is_general_position(ring, &points[i], &points[j]) {
                    adj[i * n + j] = true;
                    adj[j * n + i] = true;
                }
            }
        }
        for d in 1..=dmax {
            let prev = &bases[d - 1];
            let mut next: Vec<Vec<u32>> = Vec::new();
            for tuple in prev {
                'extend: for cand in 0..n as u32 {
                    for &t in tuple {
                        if !adj[t as usize * n + cand as usize] {
                            continue 'extend;
                        }
                    }
                    let mut ext = tuple.clone();
                    ext.push(cand);
                    next.push(ext);
                    if next.len() > TUPLE_BASIS_LIMIT {
                        return Err(Error::GuardExceeded {
                            what: "tuple basis",
                            size: next.len() as u128,
                            limit: TUPLE_BASIS_LIMIT as u128,
                        });
                    }
                }
            }
            next.sort_unstable();
            bases.push(next);
        }
    }

    let mut boundaries = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let index: HashMap<&[u32], u32> = bases[d - 1]
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i as u32))
            .collect();
        let mut triplets = Vec::with_capacity(bases[d].len() * (d + 1));
        for (col, tuple) in bases[d].iter().enumerate() {
            for skip in 0..=d {
                let mut face: Vec<u32> = Vec::with_capacity(d);
                for (i, &t) in tuple.iter().enumerate() {
                    if i != skip {
                        face.push(t);
                    }
                }
                let row = *index
                    .get(face.as_slice())
                    .expect("faces of general-position tuples are in the basis");
                let sign: i64 = if skip % 2 == 0 { 1 } else { -1 };
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

    let augmentation = GfMat::from_triplets(p, 1, n, (0..n as u32).map(|i| (0, i, 1)));

    Ok(GpComplex {
        p,
        points,
        bases,
        boundaries,
        augmentation,
    })
}

impl GpComplex {
    pub fn dmax(&self) -> usize {
        self.bases.len() - 1
    }

    /// The boundary map C_d -> C_{d-1}, d >= 1.
    pub fn boundary(&self, d: usize) -> &GfMat {
        &self.boundaries[d - 1]
    }

    /// Checks that all composable pairs of boundaries vanish (including the
    /// augmentation against the first boundary).
    pub fn boundary_squares_to_zero(&self) -> bool {
        if self.dmax() >= 1 && !self.augmentation.mul(self.boundary(1)).is_zero() {
            return false;
        }
        for d in 2..=self.dmax() {
            if !self.boundary(d - 1).mul(self.boundary(d)).is_zero() {
                return false;
            }
        }
        true
    }

    fn rank_of(&self, m: &GfMat, backend: RankBackend) -> usize {
        match backend {
            RankBackend::Sparse => m.rank(),
            RankBackend::Dense => dense_rank(self.p, &m.to_dense()),
        }
    }

    /// Reduced homology dimensions for degrees 0..=through; requires
    /// through < dmax so that the outgoing boundary exists.
    pub fn reduced_homology_dims(&self, through: usize, backend: RankBackend) -> Vec<u64> {
        assert!(
            through < self.dmax(),
            "need the boundary out of degree through + 1"
        );
        let mut dims = Vec::with_capacity(through + 1);
        for d in 0..=through {
            let incoming = if d == 0 {
                &self.augmentation
            } else {
                self.boundary(d)
            };
            let ker = self.bases[d].len() - self.rank_of(incoming, backend);
            let im = self.rank_of(self.boundary(d + 1), backend);
            dims.push((ker - im) as u64);
        }
        dims
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn ring(p: u32, m: usize, l: usize) -> Ring {
        Ring::new(Field::prime(p).unwrap(), m, l).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(p1_count(&ring(3, 1, 1)), Some(4));
        assert_eq!(p1_count(&ring(3, 1, 2)), Some(12));
        assert_eq!(p1_count(&ring(5, 1, 2)), Some(30));
        assert_eq!(p1_count(&ring(7, 1, 2)), Some(56));
        let pts = enumerate_p1(&ring(3, 1, 2)).unwrap();
        assert_eq!(pts.len(), 12);
    }

    #[test]
    fn normal_form_unique() {
        let r = ring(5, 1, 2);
        let pts = enumerate_p1(&r).unwrap();
        // every unimodular pair normalizes onto the enumeration, uniquely
        let mut seen = std::collections::HashSet::new();
        for pt in &pts {
            assert!(seen.insert(pt.clone()));
        }
        let t = r.var(0).unwrap();
        let two = r.constant(2);
        let p = ProjPoint::from_pair(&r, &two, &t).unwrap(); // (2 : t) = (1 : 3t)
        match &p {
            ProjPoint::Affine(b) => assert_eq!(r.fmt_elem(b), "3*t"),
            _ => panic!("expected affine"),
        }
        assert!(ProjPoint::from_pair(&r, &t, &r.scale(&t, 2)).is_err());
    }

    #[test]
    fn gp_iff_distinct_residues() {
        let r = ring(3, 1, 2);
        let pts = enumerate_p1(&r).unwrap();
        for x in &pts {
            for y in &pts {
                let gp = is_general_position(&r, x, y);
                let residues_differ = x.residue_class(&r) != y.residue_class(&r);
                assert_eq!(gp, residues_differ);
            }
        }
    }

    #[test]
    fn pair_counts_match_pinned_values() {
        // F_3: 4 points, 12 ordered pairs; F_3[t]/t^2: 12 points, 108 pairs
        let c = build_gp_complex(&ring(3, 1, 1), 2, 1).unwrap();
        assert_eq!(c.bases[0].len(), 4);
        assert_eq!(c.bases[1].len(), 12);
        let c = build_gp_complex(&ring(3, 1, 2), 2, 1).unwrap();
        assert_eq!(c.bases[0].len(), 12);
        assert_eq!(c.bases[1].len(), 108);
    }

    #[test]
    fn boundary_squares_to_zero_f5() {
        let c = build_gp_complex(&ring(5, 1, 1), 3, 3).unwrap();
        assert!(c.boundary_squares_to_zero());
        let c2 = build_gp_complex(&ring(3, 1, 2), 2, 3).unwrap();
        assert!(c2.boundary_squares_to_zero());
    }

    #[test]
    fn acyclic_in_window_f5() {
        // q = 5: degrees <= 3 assertable; through degree 2 here
        let c = build_gp_complex(&ring(5, 1, 1), 3, 3).unwrap();
        let dims = c.reduced_homology_dims(2, RankBackend::Sparse);
        assert_eq!(dims, vec![0, 0, 0]);
        let dense = c.reduced_homology_dims(2, RankBackend::Dense);
        assert_eq!(dense, dims);
    }

    #[test]
    fn window_helper() {
        assert_eq!(assertable_degree_window(5), 3);
        assert_eq!(assertable_degree_window(2), 0);
    }

    #[test]
    fn guard_on_huge_p1() {
        let r = ring(13, 2, 3);
        assert!(matches!(
            enumerate_p1(&r),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn ordered_tuples_not_just_sorted() {
        // the degree-1 basis contains both (i, j) and (j, i)
        let c = build_gp_complex(&ring(3, 1, 1), 2, 1).unwrap();
        let has = |a: u32, b: u32| c.bases[1].iter().any(|t| t == &vec![a, b]);
        assert!(has(0, 1) && has(1, 0));
    }
}
