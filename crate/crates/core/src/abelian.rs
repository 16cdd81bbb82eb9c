//! Finitely presented abelian groups Z^g / L where L is the column lattice of
//! a relation matrix, with canonical invariant factors, coordinates, kernels
//! of maps between presentations, and tensoring with Z/p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::snf::{self, IntMat, Snf};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct AbelianGroup {
    pub num_gens: usize,
    /// Columns are relations among the generators.
    pub relations: IntMat,
    snf: Snf,
    /// Invariant factors with units dropped: d_1 | d_2 | ..., zeros last
    /// (each zero contributes a free Z summand).
    pub factors: Vec<BigInt>,
    /// Diagonal indices (rows of U * word) kept after dropping unit factors.
    kept: Vec<usize>,
}

impl AbelianGroup {
    pub fn new(num_gens: usize, relations: IntMat) -> AbelianGroup {
        assert_eq!(relations.rows, num_gens);
        // a wide matrix spans the same column lattice as its HNF basis, and
        // reducing first keeps the smith transforms at generator size
        let s = if relations.cols > relations.rows {
            snf::smith(&snf::hnf_column_basis(&relations))
        } else {
            snf::smith(&relations)
        };
        let mut factors = Vec::new();
        let mut kept = Vec::new();
        for i in 0..num_gens {
            let d = if i < s.d.len() {
                s.d[i].clone()
            } else {
                BigInt::zero()
            };
            if !d.is_one() {
                factors.push(d);
                kept.push(i);
            }
        }
        // canonical order: nonzero ascending chain, then zeros
        let zeros = factors.iter().filter(|d| d.is_zero()).count();
        let mut nonzero: Vec<BigInt> = factors.iter().filter(|d| !d.is_zero()).cloned().collect();
        nonzero.extend(std::iter::repeat(BigInt::zero()).take(zeros));
        // kept indices follow SNF order, which already lists nonzero first
        debug_assert_eq!(nonzero, factors);
        AbelianGroup {
            num_gens,
            relations,
            snf: s,
            factors,
            kept,
        }
    }

    pub fn trivial() -> AbelianGroup {
        AbelianGroup::new(0, IntMat::zero(0, 0))
    }

    /// Z^n (no relations).
    pub fn free(n: usize) -> AbelianGroup {
        AbelianGroup::new(n, IntMat::zero(n, 0))
    }

    pub fn from_invariant_factors(factors: &[u64]) -> AbelianGroup {
        let n = factors.len();
        let mut rel = IntMat::zero(n, n);
        for (i, &d) in factors.iter().enumerate() {
            rel.a[i][i] = BigInt::from(d);
        }
        AbelianGroup::new(n, rel)
    }

    pub fn order(&self) -> Option<BigInt> {
        let mut acc = BigInt::one();
        for d in &self.factors {
            if d.is_zero() {
                return None;
            }
            acc *= d;
        }
        Some(acc)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    /// Coordinates of a word in the invariant-factor decomposition: entry j is
    /// defined mod factors[j] (an actual integer when the factor is 0).
    pub fn coords(&self, word: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(word.len(), self.num_gens);
        let y = self.snf.u.mul_vec(word);
        self.kept
            .iter()
            .zip(&self.factors)
            .map(|(&i, d)| {
                if d.is_zero() {
                    y[i].clone()
                } else {
                    y[i].mod_floor(d)
                }
            })
            .collect()
    }

    pub fn is_zero_class(&self, word: &[BigInt]) -> bool {
        self.coords(word).iter().all(|c| c.is_zero())
    }

    /// Inverse of the U transform; column j (kept indices) expresses the j-th
    /// invariant-factor generator as a word in the original generators.
    pub fn u_inverse(&self) -> IntMat {
        snf::inverse_unimodular(&self.snf.u).expect("U is unimodular by construction")
    }

    pub fn kept_indices(&self) -> &[usize] {
        &self.kept
    }

    /// dim_{F_p} (G tensor Z/p): the number of invariant factors divisible by
    /// p, where 0 counts as divisible (free summands survive tensoring).
    pub fn tensor_mod_p_dim(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.factors
            .iter()
            .filter(|d| d.is_zero() || (*d % &p).is_zero())
            .count()
    }

    pub fn factors_u64(&self) -> Option<Vec<u64>> {
        self.factors
            .iter()
            .map(|d| u64::try_from(d.clone()).ok())
            .collect()
    }
}

/// Kernel of the map src -> dst induced by the integer matrix f on generators
/// (columns of f are images of src generators). Returns the kernel as a
/// presented group together with the inclusion matrix expressing its
/// generators as words in the src generators.
///
/// Fails with `IncompatibleMap` when f does not send the src relation lattice
/// into the dst relation lattice.
pub fn abelian_kernel(
    f: &IntMat,
    src: &AbelianGroup,
    dst: &AbelianGroup,
) -> Result<(AbelianGroup, IntMat)> {
    assert_eq!(f.cols, src.num_gens);
    assert_eq!(f.rows, dst.num_gens);
    for col in src.relations.columns() {
        let img = f.mul_vec(&col);
        if !snf::in_column_span(&dst.relations, &img) {
            return Err(Error::IncompatibleMap);
        }
    }

    // preimage lattice of the dst relation lattice: project ker [f | R_dst]
    let big = f.hstack(&dst.relations);
    let mut pre_cols: Vec<Vec<BigInt>> = snf::kernel_basis(&big)
        .into_iter()
        .map(|z| z[..src.num_gens].to_vec())
        .collect();
    pre_cols.extend(src.relations.columns());
    let b = snf::hnf_column_basis(&IntMat::from_columns(src.num_gens, &pre_cols));

    // relations among the kernel generators: words sent into the src lattice
    let big2 = b.hstack(&src.relations);
    let rel_cols: Vec<Vec<BigInt>> = snf::kernel_basis(&big2)
        .into_iter()
        .map(|z| z[..b.cols].to_vec())
        .collect();
    let rel = snf::hnf_column_basis(&IntMat::from_columns(b.cols, &rel_cols));
    let group = AbelianGroup::new(b.cols, rel);

    // each kernel generator really does map to zero
    debug_assert!(b
        .columns()
        .iter()
        .all(|col| dst.is_zero_class(&f.mul_vec(col))));
    Ok((group, b))
}

/// Cokernel dst / im(f), used for order bookkeeping around kernels.
pub fn abelian_cokernel(f: &IntMat, dst: &AbelianGroup) -> AbelianGroup {
    AbelianGroup::new(dst.num_gens, f.hstack(&dst.relations))
}
