//! The unit group A^x of a truncated local ring: full invariant-factor
//! structure with discrete logs (for enumerable groups), p-torsion mu_p, the
//! class map pi: A^x -> k^x/(k^x)^p, and the counts r, s that drive the unit
//! homology formula.
//!
//! Units split as an internal direct product A^x = k^x x (1 + m): constants
//! with nonzero residue times principal units. For rings whose unit group is
//! too large to enumerate, mu_p and (r, s) are still computable by working in
//! the two factors separately; the p-power map's injectivity on 1 + m is
//! checked by counting images, not assumed.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::ring::{Elem, Ring};
use crate::structure::{abelian_structure, GroupStructure};
use crate::{Error, Result};

pub const UNIT_ENUMERATION_LIMIT: u128 = 1_000_000;

#[derive(Debug)]
pub struct UnitGroup {
    pub structure: GroupStructure<Elem>,
    pub order: u64,
}

/// Polycyclic generating set: a primitive root of k^x as a constant, then
/// 1 + c*mu for each non-constant monomial mu and each F_p-basis element c of
/// F_q. This generates A^x (checked: the enumeration is completed against the
/// canonical unit list if it ever falls short).
fn unit_generators(ring: &Ring) -> Vec<Elem> {
    let mut gens = Vec::new();
    if ring.field.q > 2 {
        gens.push(ring.constant(ring.field.primitive_root()));
    }
    let m_count = ring.basis_len();
    for mono in 1..m_count {
        for j in 0..ring.field.e {
            let c = ring.field.p.pow(j); // code of x^j, an F_p-basis element
            let mut coeffs = vec![0u16; m_count];
            coeffs[0] = 1;
            coeffs[mono] = c as u16;
            gens.push(Elem {
                ring: ring.hash,
                c: coeffs,
            });
        }
    }
    gens
}

pub fn unit_group_structure(ring: &Ring) -> Result<UnitGroup> {
    let count = ring.unit_count().ok_or(Error::GuardExceeded {
        what: "unit group",
        size: u128::MAX,
        limit: UNIT_ENUMERATION_LIMIT,
    })?;
    if count > UNIT_ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            what: "unit group",
            size: count,
            limit: UNIT_ENUMERATION_LIMIT,
        });
    }

    let mut gens = unit_generators(ring);
    let mul = |a: &Elem, b: &Elem| ring.mul(a, b);
    loop {
        let structure = abelian_structure(ring.one(), &gens, mul, count as usize)?;
        if structure.elements.len() as u128 == count {
            return Ok(UnitGroup {
                order: count as u64,
                structure,
            });
        }
        // complete the generating set from the canonical unit enumeration
        let missing = ring
            .units()
            .find(|u| !structure.index.contains_key(u))
            .expect("generated subgroup is proper, so some unit is missing");
        gens.push(missing);
    }
}

impl UnitGroup {
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.structure
            .group
            .factors
            .iter()
            .map(|d| u64::try_from(d.clone()).expect("unit group factors fit u64"))
            .collect()
    }

    pub fn dlog(&self, x: &Elem) -> Option<&[BigInt]> {
        self.structure
            .index
            .get(x)
            .map(|&i| self.structure.dlog[i].as_slice())
    }
}

#[derive(Debug, Clone)]
pub struct UnitPrimeReport {
    pub p: u32,
    /// Elements of order dividing p, in canonical element order.
    pub mu_p: Vec<Elem>,
    /// Invariant factors divisible by p.
    pub r: usize,
    /// log_p |mu_p|.
    pub s: usize,
    pub ker_pi_size: u64,
    pub pth_power_count: u64,
    /// ker(pi) = (A^x)^p, checked exhaustively.
    pub ker_pi_equals_pth_powers: bool,
}

/// p-torsion, the class map pi to k^x/(k^x)^p, and the r/s counts, all from
/// the full unit-group structure.
pub fn unit_prime_report(ring: &Ring, units: &UnitGroup, p: u32) -> Result<UnitPrimeReport> {
    if !crate::field::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let factors = units.invariant_factors();
    let r = factors.iter().filter(|&&d| d % p as u64 == 0).count();

    let mut mu_keys: Vec<(u128, Elem)> = Vec::new();
    for (i, x) in units.structure.elements.iter().enumerate() {
        let coords = &units.structure.dlog[i];
        let is_torsion = coords.iter().zip(&factors).all(|(y, &d)| {
            let step = d / num_integer::gcd(d, p as u64);
            (y % BigInt::from(step)).is_zero()
        });
        if is_torsion {
            mu_keys.push((ring.elem_key(x), x.clone()));
        }
    }
    mu_keys.sort_by_key(|&(k, _)| k);
    let mu_p: Vec<Elem> = mu_keys.into_iter().map(|(_, x)| x).collect();
    let s = {
        let mut n = mu_p.len();
        let mut s = 0;
        while n > 1 {
            assert_eq!(n % p as usize, 0, "mu_p size must be a p-power");
            n /= p as usize;
            s += 1;
        }
        s
    };
    assert_eq!(r, s, "independent routes to the p-rank disagree");

    // class map pi: x |-> residue class in k^x/(k^x)^p
    let dlog_k = ring.field.dlog_table();
    let d = num_integer::gcd(p as u64, ring.field.q as u64 - 1);
    let mut ker_pi: HashSet<u128> = HashSet::new();
    for x in &units.structure.elements {
        let res = ring.residue(x);
        let t = dlog_k[res as usize].expect("unit residues are nonzero") as u64;
        if t % d == 0 {
            ker_pi.insert(ring.elem_key(x));
        }
    }
    let mut pth_powers: HashSet<u128> = HashSet::new();
    for x in &units.structure.elements {
        pth_powers.insert(ring.elem_key(&ring.pow(x, p as u64)));
    }

    Ok(UnitPrimeReport {
        p,
        mu_p,
        r,
        s,
        ker_pi_size: ker_pi.len() as u64,
        pth_power_count: pth_powers.len() as u64,
        ker_pi_equals_pth_powers: ker_pi == pth_powers,
    })
}

#[derive(Debug, Clone)]
pub struct MuDecomposition {
    pub p: u32,
    /// Field codes c with c^p = 1.
    pub mu_field: Vec<u32>,
    /// Principal units u with u^p = 1, canonical order.
    pub one_plus_m_torsion: Vec<Elem>,
    /// mu_p(A) = { c * u }, canonical order.
    pub mu_p: Vec<Elem>,
    /// Whether x -> x^p is injective on 1 + m (counted, not assumed).
    pub p_injective_on_principal_units: bool,
    /// r and s are only defined when the principal-unit part contributes no
    /// p-torsion, i.e. when the p-power map is injective there.
    pub r: Option<usize>,
    pub s: Option<usize>,
}

/// mu_p and (r, s) via the splitting A^x = k^x x (1 + m), enumerating only
/// the principal units. Works for rings whose full unit group is beyond the
/// enumeration guard.
pub fn mu_p_via_decomposition(ring: &Ring, p: u32) -> Result<MuDecomposition> {
    if !crate::field::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let principal = ring.maximal_ideal_count().ok_or(Error::GuardExceeded {
        what: "principal units",
        size: u128::MAX,
        limit: UNIT_ENUMERATION_LIMIT,
    })?;
    if principal > UNIT_ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            what: "principal units",
            size: principal,
            limit: UNIT_ENUMERATION_LIMIT,
        });
    }

    let mu_field: Vec<u32> = (1..ring.field.q)
        .filter(|&c| ring.field.pow(c, p as u64) == 1)
        .collect();

    let mut torsion: Vec<Elem> = Vec::new();
    let mut images: HashSet<u128> = HashSet::new();
    let mut total = 0u128;
    for u in ring.one_plus_m_elements() {
        total += 1;
        let up = ring.pow(&u, p as u64);
        images.insert(ring.elem_key(&up));
        if up == ring.one() {
            torsion.push(u);
        }
    }
    let injective = images.len() as u128 == total;
    if injective {
        debug_assert_eq!(torsion.len(), 1);
    }

    let mut mu_keys: Vec<(u128, Elem)> = Vec::new();
    for &c in &mu_field {
        for u in &torsion {
            let z = ring.scale(u, c);
            mu_keys.push((ring.elem_key(&z), z));
        }
    }
    mu_keys.sort_by_key(|&(k, _)| k);
    let mu_p: Vec<Elem> = mu_keys.into_iter().map(|(_, x)| x).collect();

    let (r, s) = if injective {
        // k^x is cyclic of order q - 1: it contributes one p-divisible factor
        // iff p | q - 1; the principal part contributes none.
        let rk = usize::from((ring.field.q as u64 - 1) % p as u64 == 0);
        let mut n = mu_p.len();
        let mut s = 0;
        while n > 1 {
            assert_eq!(n % p as usize, 0);
            n /= p as usize;
            s += 1;
        }
        assert_eq!(rk, s, "independent routes to the p-rank disagree");
        (Some(rk), Some(s))
    } else {
        (None, None)
    };

    Ok(MuDecomposition {
        p,
        mu_field,
        one_plus_m_torsion: torsion,
        mu_p,
        p_injective_on_principal_units: injective,
        r,
        s,
    })
}

/// (r, s) for the unit group, routed through the cheapest valid path.
pub fn unit_rs(ring: &Ring, p: u32) -> Result<(usize, usize)> {
    if ring.unit_count().map_or(false, |c| c <= UNIT_ENUMERATION_LIMIT) {
        let ug = unit_group_structure(ring)?;
        let rep = unit_prime_report(ring, &ug, p)?;
        Ok((rep.r, rep.s))
    } else {
        let dec = mu_p_via_decomposition(ring, p)?;
        match (dec.r, dec.s) {
            (Some(r), Some(s)) => Ok((r, s)),
            _ => Err(Error::InvalidParameter(
                "p-power map not injective on principal units; r undefined by this route".into(),
            )),
        }
    }
}
