//! Pre-Bloch and Bloch groups of a truncated local ring.
//!
//! The pre-Bloch group is presented by a generator [x] for each admissible x
//! (x and 1 - x units) and one five-term relation per admissible pair; the
//! Bloch group is the kernel of x -> x tensor (1 - x) into the sign-twisted
//! coinvariants of the tensor square of the unit group. All maps are written
//! against the discrete-log coordinates of the unit group, so every step is
//! exact integer linear algebra.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abelian::{abelian_kernel, AbelianGroup};
use crate::orbit::{admissible_elements, is_admissible, orbit_face};
use crate::ring::{Elem, Ring};
use crate::snf::IntMat;
use crate::units::{unit_group_structure, UnitGroup};
use crate::{Error, Result};

/// An ordered pair feeds the five-term relation when both entries and their
/// difference stay away from the branch locus.
pub fn pair_admissible(ring: &Ring, x: &Elem, y: &Elem) -> bool {
    is_admissible(ring, x) && is_admissible(ring, y) && ring.is_unit(&ring.sub(x, y))
}

/// The five arguments (x, y, y/x, (1 - 1/x)/(1 - 1/y), (1 - x)/(1 - y)).
pub fn five_term_args(ring: &Ring, x: &Elem, y: &Elem) -> Result<[Elem; 5]> {
    if !pair_admissible(ring, x, y) {
        return Err(Error::NotAdmissible);
    }
    let one = ring.one();
    let xi = ring.inv(x)?;
    let yi = ring.inv(y)?;
    let args = [
        x.clone(),
        y.clone(),
        ring.div(y, x)?,
        ring.div(&ring.sub(&one, &xi), &ring.sub(&one, &yi))?,
        ring.div(&ring.sub(&one, x), &ring.sub(&one, y))?,
    ];
    for a in &args {
        debug_assert!(is_admissible(ring, a));
    }
    Ok(args)
}

/// The five-term relation of (x, y) as a signed formal sum, signs
/// (+, -, +, -, +) on the arguments in order.
pub fn five_term_relation(ring: &Ring, x: &Elem, y: &Elem) -> Result<Vec<(i64, Elem)>> {
    let args = five_term_args(ring, x, y)?;
    Ok(args
        .into_iter()
        .zip([1i64, -1, 1, -1, 1])
        .map(|(a, s)| (s, a))
        .collect())
}

#[derive(Debug)]
pub struct PreBloch {
    /// Admissible elements, canonical order; generator i is [admissibles[i]].
    pub admissibles: Vec<Elem>,
    /// One column per admissible ordered pair, in lexicographic pair order.
    pub relations: IntMat,
    pub group: AbelianGroup,
}

/// Cap on the number of five-term relation columns held at once.
pub const RELATION_COLUMN_LIMIT: u128 = 20_000;

pub fn pre_bloch(ring: &Ring) -> Result<PreBloch> {
    let admissibles = admissible_elements(ring)?;
    let mut pairs: u128 = 0;
    for x in &admissibles {
        for y in &admissibles {
            if ring.is_unit(&ring.sub(x, y)) {
                pairs += 1;
            }
        }
    }
    if pairs > RELATION_COLUMN_LIMIT {
        return Err(Error::GuardExceeded {
            what: "five-term relation columns",
            size: pairs,
            limit: RELATION_COLUMN_LIMIT,
        });
    }
    let index: HashMap<u128, usize> = admissibles
        .iter()
        .enumerate()
        .map(|(i, a)| (ring.elem_key(a), i))
        .collect();
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for x in &admissibles {
        for y in &admissibles {
            if !ring.is_unit(&ring.sub(x, y)) {
                continue;
            }
            let mut col = vec![BigInt::zero(); admissibles.len()];
            for (s, a) in five_term_relation(ring, x, y)? {
                let i = index[&ring.elem_key(&a)];
                col[i] += BigInt::from(s);
            }
            columns.push(col);
        }
    }
    let relations = IntMat::from_columns(admissibles.len(), &columns);
    let group = AbelianGroup::new(admissibles.len(), relations.clone());
    Ok(PreBloch {
        admissibles,
        relations,
        group,
    })
}

/// The sign-twisted coinvariants of the tensor square of the unit group,
/// presented on e_ij over the invariant-factor generators t_1..t_g of A^x:
/// gcd(d_i, d_j) e_ij = 0 and e_ij + e_ji = 0.
#[derive(Debug)]
pub struct SigmaTensorSquare {
    pub g: usize,
    pub group: AbelianGroup,
}

pub fn sigma_tensor_square(units: &UnitGroup) -> SigmaTensorSquare {
    let d = units.structure.group.factors.clone();
    let g = d.len();
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..g {
        for j in 0..g {
            let mut col = vec![BigInt::zero(); g * g];
            col[i * g + j] = d[i].gcd(&d[j]);
            columns.push(col);
            let mut sym = vec![BigInt::zero(); g * g];
            sym[i * g + j] += BigInt::one();
            sym[j * g + i] += BigInt::one();
            columns.push(sym);
        }
    }
    let relations = IntMat::from_columns(g * g, &columns);
    SigmaTensorSquare {
        g,
        group: AbelianGroup::new(g * g, relations),
    }
}

#[derive(Debug)]
pub struct BlochData {
    pub units: UnitGroup,
    pub pre: PreBloch,
    pub tensor: SigmaTensorSquare,
    /// Matrix of [x] -> x tensor (1 - x) in discrete-log coordinates.
    pub phi: IntMat,
    pub bloch: AbelianGroup,
    /// Columns express Bloch generators as words in the pre-Bloch generators.
    pub inclusion: IntMat,
}

pub fn bloch_data(ring: &Ring) -> Result<BlochData> {
    let units = unit_group_structure(ring)?;
    let pre = pre_bloch(ring)?;
    let tensor = sigma_tensor_square(&units);
    let g = tensor.g;

    let mut columns: Vec<Vec<BigInt>> = Vec::with_capacity(pre.admissibles.len());
    for x in &pre.admissibles {
        let a = units.dlog(x).ok_or(Error::NotAUnit)?.to_vec();
        let b = units
            .dlog(&ring.sub(&ring.one(), x))
            .ok_or(Error::NotAUnit)?
            .to_vec();
        let mut col = vec![BigInt::zero(); g * g];
        for i in 0..g {
            for j in 0..g {
                col[i * g + j] = &a[i] * &b[j];
            }
        }
        columns.push(col);
    }
    let phi = IntMat::from_columns(g * g, &columns);

    for idx in 0..pre.relations.cols {
        let image = phi.mul_vec(&pre.relations.column(idx));
        if !tensor.group.is_zero_class(&image) {
            return Err(Error::PhiNotWellDefined { index: idx });
        }
    }

    let (bloch, inclusion) = abelian_kernel(&phi, &pre.group, &tensor.group)?;
    Ok(BlochData {
        units,
        pre,
        tensor,
        phi,
        bloch,
        inclusion,
    })
}

/// The boundary of the degree-1 orbit simplex (x, y) is exactly the
/// five-term relation of (x, y), checked over every admissible pair.
pub fn five_term_matches_faces(ring: &Ring) -> Result<bool> {
    let admissibles = admissible_elements(ring)?;
    for x in &admissibles {
        for y in &admissibles {
            if !ring.is_unit(&ring.sub(x, y)) {
                continue;
            }
            let mut from_faces: HashMap<u128, i64> = HashMap::new();
            let alphas = [x.clone(), y.clone()];
            for i in 0..5 {
                let (sign, face) = orbit_face(ring, &alphas, i)?;
                debug_assert_eq!(face.len(), 1);
                *from_faces.entry(ring.elem_key(&face[0])).or_insert(0) += sign;
            }
            let mut from_relation: HashMap<u128, i64> = HashMap::new();
            for (sign, a) in five_term_relation(ring, x, y)? {
                *from_relation.entry(ring.elem_key(&a)).or_insert(0) += sign;
            }
            from_faces.retain(|_, v| *v != 0);
            from_relation.retain(|_, v| *v != 0);
            if from_faces != from_relation {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug)]
pub struct ComparisonReport {
    /// Lifted residue-field relations die in the big pre-Bloch group.
    pub naturality_ok: bool,
    /// Lifts of Bloch generators of the residue field map into B(A).
    pub bloch_maps_into_bloch: bool,
    pub residue_bloch_mod_p: u64,
    pub ring_bloch_mod_p: u64,
    pub dims_equal: bool,
}

/// The residue inclusion k -> A on Bloch data, observed at the prime p.
pub fn comparison(
    residue_ring: &Ring,
    ring: &Ring,
    residue_data: &BlochData,
    data: &BlochData,
    p: u32,
) -> Result<ComparisonReport> {
    // generator i of the residue pre-Bloch group lifts to the constant with
    // the same residue code
    let index: HashMap<u128, usize> = data
        .pre
        .admissibles
        .iter()
        .enumerate()
        .map(|(i, a)| (ring.elem_key(a), i))
        .collect();
    let lift: Vec<usize> = residue_data
        .pre
        .admissibles
        .iter()
        .map(|a| {
            let code = residue_ring.residue(a);
            index[&ring.elem_key(&ring.constant(code))]
        })
        .collect();

    let lift_word = |word: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); data.pre.admissibles.len()];
        for (i, c) in word.iter().enumerate() {
            out[lift[i]] += c;
        }
        out
    };

    let mut naturality_ok = true;
    for idx in 0..residue_data.pre.relations.cols {
        let lifted = lift_word(&residue_data.pre.relations.column(idx));
        if !data.pre.group.is_zero_class(&lifted) {
            naturality_ok = false;
        }
    }

    let mut bloch_maps_into_bloch = true;
    for j in 0..residue_data.inclusion.cols {
        let lifted = lift_word(&residue_data.inclusion.column(j));
        let image = data.phi.mul_vec(&lifted);
        if !data.tensor.group.is_zero_class(&image) {
            bloch_maps_into_bloch = false;
        }
    }

    let residue_dim = residue_data.bloch.tensor_mod_p_dim(p as u64) as u64;
    let ring_dim = data.bloch.tensor_mod_p_dim(p as u64) as u64;
    Ok(ComparisonReport {
        naturality_ok,
        bloch_maps_into_bloch,
        residue_bloch_mod_p: residue_dim,
        ring_bloch_mod_p: ring_dim,
        dims_equal: residue_dim == ring_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn ring(p: u32, m: usize, l: usize) -> Ring {
        Ring::new(Field::prime(p).unwrap(), m, l).unwrap()
    }

    #[test]
    fn five_term_golden_f7() {
        let r = ring(7, 1, 1);
        let rel = five_term_relation(&r, &r.constant(2), &r.constant(3)).unwrap();
        let expect: Vec<(i64, u32)> = vec![(1, 2), (-1, 3), (1, 5), (-1, 6), (1, 4)];
        let got: Vec<(i64, u32)> = rel.iter().map(|(s, a)| (*s, r.residue(a))).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn five_term_golden_f5() {
        let r = ring(5, 1, 1);
        let rel = five_term_relation(&r, &r.constant(2), &r.constant(3)).unwrap();
        let got: Vec<(i64, u32)> = rel.iter().map(|(s, a)| (*s, r.residue(a))).collect();
        assert_eq!(got, vec![(1, 2), (-1, 3), (1, 4), (-1, 2), (1, 3)]);
    }

    #[test]
    fn inadmissible_pairs_rejected() {
        let r = ring(5, 1, 2);
        let t = r.var(0).unwrap();
        let x = r.constant(2);
        let y = r.add(&x, &t); // same residue: x - y not a unit
        assert!(matches!(
            five_term_args(&r, &x, &y),
            Err(Error::NotAdmissible)
        ));
        assert!(five_term_args(&r, &x, &r.constant(3)).is_ok());
    }

    #[test]
    fn args_admissible_for_every_pair() {
        for r in [ring(7, 1, 1), ring(5, 1, 2)] {
            let adm = admissible_elements(&r).unwrap();
            for x in &adm {
                for y in &adm {
                    if ring_pair(&r, x, y) {
                        let args = five_term_args(&r, x, y).unwrap();
                        assert!(args.iter().all(|a| is_admissible(&r, a)));
                    }
                }
            }
        }
    }

    fn ring_pair(r: &Ring, x: &Elem, y: &Elem) -> bool {
        pair_admissible(r, x, y)
    }

    #[test]
    fn pre_bloch_f5_is_z6() {
        let data = pre_bloch(&ring(5, 1, 1)).unwrap();
        assert_eq!(data.admissibles.len(), 3);
        assert_eq!(data.relations.cols, 6);
        assert_eq!(data.group.factors_u64(), Some(vec![6]));
    }

    #[test]
    fn pre_bloch_f3_is_free_of_rank_one() {
        let data = pre_bloch(&ring(3, 1, 1)).unwrap();
        assert_eq!(data.admissibles.len(), 1);
        assert_eq!(data.relations.cols, 0);
        assert_eq!(data.group.free_rank(), 1);
        assert!(data.group.order().is_none());
    }

    #[test]
    fn sigma_tensor_of_cyclic_4() {
        let r = ring(5, 1, 1);
        let units = unit_group_structure(&r).unwrap();
        assert_eq!(units.invariant_factors(), vec![4]);
        let tensor = sigma_tensor_square(&units);
        assert_eq!(tensor.group.factors_u64(), Some(vec![2]));
    }

    #[test]
    fn bloch_f5_is_z3() {
        let data = bloch_data(&ring(5, 1, 1)).unwrap();
        assert_eq!(data.pre.group.factors_u64(), Some(vec![6]));
        assert_eq!(data.bloch.factors_u64(), Some(vec![3]));
    }

    #[test]
    fn bloch_f3_is_free_of_rank_one() {
        let data = bloch_data(&ring(3, 1, 1)).unwrap();
        assert_eq!(data.bloch.free_rank(), 1);
        assert!(data.bloch.order().is_none());
        // the generator is an even multiple of [2]
        let word = data.inclusion.column(0);
        assert!(word[0].is_even());
    }

    #[test]
    fn phi_well_defined_on_truncated_rings() {
        for r in [ring(5, 1, 2), ring(7, 1, 2)] {
            let data = bloch_data(&r).unwrap();
            assert_eq!(data.pre.admissibles.len(), data.phi.cols);
        }
    }

    #[test]
    fn faces_reproduce_five_term() {
        for r in [ring(5, 1, 1), ring(7, 1, 1), ring(5, 1, 2)] {
            assert!(five_term_matches_faces(&r).unwrap());
        }
    }

    #[test]
    fn comparison_f5_reported() {
        let k = ring(5, 1, 1);
        let a = ring(5, 1, 2);
        let kd = bloch_data(&k).unwrap();
        let ad = bloch_data(&a).unwrap();
        let report = comparison(&k, &a, &kd, &ad, 3).unwrap();
        assert!(report.naturality_ok);
        assert!(report.bloch_maps_into_bloch);
        assert_eq!(report.residue_bloch_mod_p, 1); // B(F_5) = Z/3
    }
}
