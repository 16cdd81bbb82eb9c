//! Mod-p group homology of finite abelian groups.
//!
//! For G with r invariant factors divisible by p and s = dim_Fp G/pG (equal
//! numbers, computed by independent routes and cross-checked), the Poincare
//! series of H_*(G, Z/p) is (1 + x)^r / (1 - x^2)^s: an exterior factor per
//! divisible invariant and a divided-power factor per p-torsion dimension.
//! The formula is validated against a literal resolution: for cyclic groups
//! the 2-periodic complex with alternating maps 0 and m mod p, run through
//! the GF(p) rank code, and Kunneth convolution for products.

use crate::abelian::AbelianGroup;
use crate::gf::GfMat;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelian {
    /// Invariant factors d_1 | d_2 | ..., all > 1.
    pub factors: Vec<u64>,
}

impl FiniteAbelian {
    pub fn new(factors: Vec<u64>) -> Result<FiniteAbelian> {
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidParameter(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::InvalidParameter(
                "invariant factors must be at least 2".into(),
            ));
        }
        Ok(FiniteAbelian { factors })
    }

    /// Canonicalize an arbitrary product of cyclic groups.
    pub fn from_cyclic_orders(orders: &[u64]) -> FiniteAbelian {
        let nontrivial: Vec<u64> = orders.iter().copied().filter(|&d| d > 1).collect();
        let g = AbelianGroup::from_invariant_factors(&nontrivial);
        FiniteAbelian {
            factors: g
                .factors
                .iter()
                .map(|d| u64::try_from(d.clone()).unwrap())
                .collect(),
        }
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    /// Number of invariant factors divisible by p.
    pub fn r(&self, p: u64) -> usize {
        self.factors.iter().filter(|&&d| d % p == 0).count()
    }

    /// dim_Fp of the p-torsion subgroup, via its order.
    pub fn s(&self, p: u64) -> usize {
        let torsion: u128 = self
            .factors
            .iter()
            .map(|&d| num_integer::gcd(d, p) as u128)
            .product();
        let mut n = torsion;
        let mut s = 0;
        while n > 1 {
            assert_eq!(n % p as u128, 0);
            n /= p as u128;
            s += 1;
        }
        s
    }

    pub fn homology_dims(&self, p: u64, nmax: usize) -> Vec<u64> {
        let (r, s) = (self.r(p), self.s(p));
        assert_eq!(r, s, "p-rank routes disagree for prime {p}");
        unit_homology_dims(r, s, nmax)
    }
}

/// Coefficients of (1 + x)^r / (1 - x^2)^s through degree nmax.
pub fn unit_homology_dims(r: usize, s: usize, nmax: usize) -> Vec<u64> {
    let mut coef = vec![0u64; nmax + 1];
    coef[0] = 1;
    for _ in 0..r {
        for n in (1..=nmax).rev() {
            coef[n] += coef[n - 1];
        }
    }
    for _ in 0..s {
        for n in 2..=nmax {
            coef[n] += coef[n - 2];
        }
    }
    coef
}

/// H_*(Z/m, Z/p) from the literal 2-periodic resolution: boundary matrices
/// alternate between [0] and [m mod p], and ranks go through the GF(p) code.
pub fn cyclic_homology_oracle(m: u64, p: u64, nmax: usize) -> Vec<u64> {
    let boundary = |n: usize| -> GfMat {
        // d_n for n >= 1; odd differentials vanish after tensoring
        if n % 2 == 1 {
            GfMat::zero(p, 1, 1)
        } else {
            GfMat::from_triplets(p, 1, 1, vec![(0, 0, (m % p) as i64)])
        }
    };
    (0..=nmax)
        .map(|n| {
            let ker = if n == 0 {
                1
            } else {
                1 - boundary(n).rank()
            };
            let im = boundary(n + 1).rank();
            (ker - im) as u64
        })
        .collect()
}

/// Kunneth convolution of mod-p Betti numbers (field coefficients).
pub fn kunneth_convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    let nmax = a.len().min(b.len());
    (0..nmax)
        .map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum())
        .collect()
}

#[derive(Debug, Clone)]
pub struct UnitHomologyComparison {
    pub p: u32,
    pub r_residue: usize,
    pub s_residue: usize,
    pub r_ring: usize,
    pub s_ring: usize,
    pub dims_residue: Vec<u64>,
    pub dims_ring: Vec<u64>,
    pub equal: bool,
}

/// dim H_n(k^x, Z/p) vs dim H_n(A^x, Z/p) through degree nmax.
pub fn compare_unit_homology(
    residue_ring: &crate::ring::Ring,
    ring: &crate::ring::Ring,
    p: u32,
    nmax: usize,
) -> Result<UnitHomologyComparison> {
    let (rk, sk) = crate::units::unit_rs(residue_ring, p)?;
    let (rr, sr) = crate::units::unit_rs(ring, p)?;
    let dims_residue = unit_homology_dims(rk, sk, nmax);
    let dims_ring = unit_homology_dims(rr, sr, nmax);
    let equal = dims_residue == dims_ring;
    Ok(UnitHomologyComparison {
        p,
        r_residue: rk,
        s_residue: sk,
        r_ring: rr,
        s_ring: sr,
        dims_residue,
        dims_ring,
        equal,
    })
}
