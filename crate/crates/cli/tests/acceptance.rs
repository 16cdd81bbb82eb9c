//! Acceptance battery. Each test covers one criterion, prints a single
//! pass/fail line and then asserts, so a failing criterion is visible in the
//! output as well as in the test result. Oracles living in this file are
//! written from scratch against plain integer arithmetic and do not reuse
//! the library's linear algebra.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hensel_core::bloch;
use hensel_core::congruence;
use hensel_core::field::Field;
use hensel_core::homology;
use hensel_core::orbit::{self, PMat};
use hensel_core::pcomplex::{self, ProjPoint, RankBackend};
use hensel_core::ring::Ring;
use hensel_core::units;

fn ring(p: u32, e: u32, m: usize, l: usize) -> Ring {
    let field = if e == 1 {
        Field::prime(p).unwrap()
    } else {
        Field::extension_default(p, e).unwrap()
    };
    Ring::new(field, m, l).unwrap()
}

fn conclude(num: u32, slug: &str, failures: Vec<String>) {
    let verdict = if failures.is_empty() { "pass" } else { "fail" };
    println!("criterion {num:02} {slug}: {verdict}");
    assert!(failures.is_empty(), "{slug}: {failures:?}");
}

#[test]
fn criterion_01_hensel_pth_roots() {
    let mut bad = Vec::new();
    let r = ring(7, 1, 1, 2);
    let p = 3u32;
    let dlog = r.field.dlog_table();
    let mut roots = 0u64;
    let mut total = 0u64;
    for x in r.units() {
        total += 1;
        let root = r.hensel_pth_root(&x, p).unwrap();
        let in_ker = dlog[r.residue(&x) as usize].unwrap() % p == 0;
        match root {
            Some(root) => {
                roots += 1;
                if !in_ker {
                    bad.push(format!("{} has a root outside ker pi", r.fmt_elem(&x)));
                }
                if r.pow(&root, p as u64) != x {
                    bad.push(format!("cube of the root of {} is wrong", r.fmt_elem(&x)));
                }
            }
            None => {
                if in_ker {
                    bad.push(format!("{} lies in ker pi but has no root", r.fmt_elem(&x)));
                }
            }
        }
    }
    if total != 42 {
        bad.push(format!("expected 42 units, saw {total}"));
    }
    if roots != 14 {
        bad.push(format!("expected 14 cubes among the units, saw {roots}"));
    }
    conclude(1, "hensel-pth-roots", bad);
}

#[test]
fn criterion_02_mu_p_descends_to_residue() {
    let mut bad = Vec::new();
    for q in [5u32, 7, 13] {
        for l in [2usize, 3] {
            for m in [1usize, 2] {
                for p in [2u32, 3] {
                    let r = ring(q, 1, m, l);
                    let dec = units::mu_p_via_decomposition(&r, p).unwrap();
                    let tag = format!("q={q} m={m} l={l} p={p}");
                    if !dec.p_injective_on_principal_units {
                        bad.push(format!("{tag}: p-power map not injective on 1+m"));
                    }
                    if dec.one_plus_m_torsion.len() != 1 {
                        bad.push(format!("{tag}: principal units carry p-torsion"));
                    }
                    let expected = if (q - 1) % p == 0 { p as usize } else { 1 };
                    if dec.mu_field.len() != expected || dec.mu_p.len() != expected {
                        bad.push(format!(
                            "{tag}: mu_p sizes {}/{} instead of {expected}",
                            dec.mu_field.len(),
                            dec.mu_p.len()
                        ));
                    }
                    for z in &dec.mu_p {
                        if *z != r.constant(r.residue(z)) {
                            bad.push(format!("{tag}: non-constant p-th root of unity"));
                        }
                    }
                    let expected_rank = if (q - 1) % p == 0 { 1 } else { 0 };
                    if dec.r != Some(expected_rank) || dec.s != Some(expected_rank) {
                        bad.push(format!("{tag}: (r, s) = {:?}, {:?}", dec.r, dec.s));
                    }
                }
            }
        }
    }
    conclude(2, "mu-p-matches-residue-field", bad);
}

#[test]
fn criterion_03_unit_homology_stability() {
    let mut bad = Vec::new();
    for q in [5u32, 7, 13] {
        for l in [2usize, 3] {
            for m in [1usize, 2] {
                for p in [2u32, 3] {
                    let r = ring(q, 1, m, l);
                    let k = r.residue_ring();
                    let (rr, rs) = units::unit_rs(&r, p).unwrap();
                    let (kr, ks) = units::unit_rs(&k, p).unwrap();
                    let ring_dims = homology::unit_homology_dims(rr, rs, 6);
                    let res_dims = homology::unit_homology_dims(kr, ks, 6);
                    if ring_dims != res_dims {
                        bad.push(format!(
                            "q={q} m={m} l={l} p={p}: dims {ring_dims:?} vs {res_dims:?}"
                        ));
                    }
                }
            }
        }
    }
    for m in 2u64..=24 {
        for p in [2u64, 3, 5] {
            let module = homology::FiniteAbelian::from_cyclic_orders(&[m]);
            if module.homology_dims(p, 6) != homology::cyclic_homology_oracle(m, p, 6) {
                bad.push(format!("cyclic order {m} at p={p} disagrees with the oracle"));
            }
        }
    }
    conclude(3, "unit-homology-stability", bad);
}

fn pow_mod(mut a: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1i64;
    a = a.rem_euclid(p);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn oracle_rank(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][col].rem_euclid(p) != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for c in col..cols {
            m[rank][c] = m[rank][c].rem_euclid(p) * inv % p;
        }
        for r in 0..rows {
            let f = m[r][col].rem_euclid(p);
            if r != rank && f != 0 {
                for c in col..cols {
                    m[r][c] = (m[r][c] - f * m[rank][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Reduced homology of the injective-words complex on `n` letters, built
/// from scratch: tuples, signed boundaries and ranks all local to the test.
fn injective_words_reduced_dims(n: usize, p: i64, through: usize) -> Vec<usize> {
    let mut words: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|i| vec![i]).collect()];
    for _ in 1..=through + 1 {
        let mut next = Vec::new();
        for w in words.last().unwrap() {
            for cand in 0..n {
                if !w.contains(&cand) {
                    let mut ext = w.clone();
                    ext.push(cand);
                    next.push(ext);
                }
            }
        }
        next.sort();
        words.push(next);
    }
    let mut ranks = vec![1usize]; // the augmentation row has rank 1
    for d in 1..=through + 1 {
        let index: std::collections::HashMap<&[usize], usize> = words[d - 1]
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let mut mat = vec![vec![0i64; words[d].len()]; words[d - 1].len()];
        for (col, w) in words[d].iter().enumerate() {
            for skip in 0..=d {
                let face: Vec<usize> = w
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &x)| x)
                    .collect();
                let sign = if skip % 2 == 0 { 1 } else { -1 };
                mat[index[face.as_slice()]][col] += sign;
            }
        }
        ranks.push(oracle_rank(mat, p));
    }
    (0..=through)
        .map(|d| words[d].len() - ranks[d] - ranks[d + 1])
        .collect()
}

#[test]
fn criterion_04_general_position_acyclicity() {
    let mut bad = Vec::new();

    for (r, dmax, through, p, label) in [
        (ring(7, 1, 1, 1), 3, 2, 3u64, "q7"),
        (ring(11, 1, 1, 1), 3, 2, 3, "q11"),
        (ring(5, 1, 1, 2), 2, 1, 3, "q5-trunc2"),
    ] {
        let c = pcomplex::build_gp_complex(&r, p, dmax).unwrap();
        if !c.boundary_squares_to_zero() {
            bad.push(format!("{label}: boundary does not square to zero"));
        }
        let dims = c.reduced_homology_dims(through, RankBackend::Sparse);
        if dims[..=through].iter().any(|&d| d != 0) {
            bad.push(format!("{label}: reduced homology {dims:?}"));
        }
    }

    // rank backends against each other on the field instance
    let c7 = pcomplex::build_gp_complex(&ring(7, 1, 1, 1), 3, 3).unwrap();
    for d in 1..=3 {
        let b = c7.boundary(d);
        if b.rank() != hensel_core::gf::dense_rank(3, &b.to_dense()) {
            bad.push(format!("q7: sparse and dense rank disagree in degree {d}"));
        }
    }

    // the field complex is the injective-words complex on q + 1 letters
    for p in [2i64, 3] {
        let oracle = injective_words_reduced_dims(8, p, 2);
        let main = pcomplex::build_gp_complex(&ring(7, 1, 1, 1), p as u64, 3)
            .unwrap()
            .reduced_homology_dims(2, RankBackend::Sparse);
        let main_usize: Vec<usize> = main.iter().map(|&d| d as usize).collect();
        if oracle != main_usize {
            bad.push(format!("q7 p={p}: oracle {oracle:?} vs {main_usize:?}"));
        }
        if oracle.iter().any(|&d| d != 0) {
            bad.push(format!("q7 p={p}: oracle itself sees homology {oracle:?}"));
        }
    }
    conclude(4, "general-position-acyclicity", bad);
}

fn frame_invariance_trials(r: &Ring, trials: u64, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = r.total_count().unwrap();
    let ideal = r.maximal_ideal_count().unwrap();
    let random_point = |rng: &mut ChaCha8Rng| {
        let pick = rng.gen_range(0..total + ideal);
        if pick < total {
            ProjPoint::Affine(r.elem_from_key(pick))
        } else {
            ProjPoint::Infinite(r.elem_from_key(pick - total))
        }
    };
    for trial in 0..trials {
        let g = loop {
            let e = |rng: &mut ChaCha8Rng| r.elem_from_key(rng.gen_range(0..total));
            let (a, b, c, d) = (e(&mut rng), e(&mut rng), e(&mut rng), e(&mut rng));
            if let Ok(mat) = PMat::new(r, a, b, c, d) {
                break mat;
            }
        };
        let tuple = loop {
            let pts: Vec<_> = (0..4).map(|_| random_point(&mut rng)).collect();
            if orbit::canonical_frame(r, &pts).is_ok() {
                break pts;
            }
        };
        let (_, alphas) = orbit::canonical_frame(r, &tuple).unwrap();
        let moved: Vec<_> = tuple.iter().map(|x| g.apply(r, x)).collect();
        let (_, alphas_moved) = orbit::canonical_frame(r, &moved).unwrap();
        if alphas != alphas_moved {
            return Err(format!("coordinates moved in trial {trial}"));
        }
    }
    Ok(())
}

#[test]
fn criterion_05_projective_action() {
    let mut bad = Vec::new();
    let report = orbit::stabilizer_report(&ring(3, 1, 1, 1)).unwrap();
    if report.group_order != Some(24) {
        bad.push(format!("pgl2(f3) order {:?}", report.group_order));
    }
    if report.exhaustive != Some([6, 2, 1]) {
        bad.push(format!("pgl2(f3) stabilizers {:?}", report.exhaustive));
    }
    if report.sharply_three_transitive != Some(true) {
        bad.push("pgl2(f3) is not sharply 3-transitive".into());
    }
    for (r, seed, label) in [(ring(5, 1, 1, 1), 11, "f5"), (ring(5, 1, 1, 2), 12, "f5-trunc2")]
    {
        if let Err(e) = frame_invariance_trials(&r, 1000, seed) {
            bad.push(format!("{label}: {e}"));
        }
    }
    conclude(5, "projective-action", bad);
}

#[test]
fn criterion_06_orbit_complex() {
    let mut bad = Vec::new();
    let sizes: &[(Ring, usize)] = &[(ring(5, 1, 1, 1), 3), (ring(5, 1, 1, 2), 15)];
    for (r, want) in sizes {
        let c = orbit::build_orbit_complex(r, 3, 1).unwrap();
        if c.bases[0].len() != *want {
            bad.push(format!("degree-0 size {} instead of {want}", c.bases[0].len()));
        }
    }
    for (r, label) in [
        (ring(5, 1, 1, 1), "f5"),
        (ring(7, 1, 1, 1), "f7"),
        (ring(5, 1, 1, 2), "f5-trunc2"),
    ] {
        let c = orbit::build_orbit_complex(&r, 3, 3).unwrap();
        if !c.boundary_squares_to_zero() {
            bad.push(format!("{label}: boundary square nonzero through degree 3"));
        }
        match bloch::five_term_matches_faces(&r) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("{label}: faces disagree with the five-term relation")),
            Err(e) => bad.push(format!("{label}: {e}")),
        }
    }
    conclude(6, "orbit-complex", bad);
}

#[test]
fn criterion_07_e1_low_columns() {
    let mut bad = Vec::new();
    for q in [5u32, 7] {
        for l in [2usize, 3] {
            for m in [1usize, 2] {
                for p in [2u32, 3] {
                    let r = ring(q, 1, m, l);
                    let page = orbit::e1_page(&r, p, 2, 4).unwrap();
                    let rpage = orbit::e1_page(&r.residue_ring(), p, 2, 4).unwrap();
                    if page.dims != rpage.dims {
                        bad.push(format!(
                            "q={q} m={m} l={l} p={p}: {:?} vs {:?}",
                            page.dims, rpage.dims
                        ));
                    }
                }
            }
        }
    }
    conclude(7, "e1-low-columns", bad);
}

#[test]
fn criterion_08_quotient_explorer() {
    let mut bad = Vec::new();
    let start = Instant::now();
    for (q, want_q0) in [(5u32, 12u64), (7, 30)] {
        let big = ring(q, 1, 1, 2);
        let small = big.residue_ring();
        let kc = orbit::build_orbit_complex(&small, 3, 2).unwrap();
        let ac = orbit::build_orbit_complex(&big, 3, 2).unwrap();
        let quot = orbit::build_quotient_complex(&small, &big, &kc, &ac).unwrap();
        if !quot.subcomplex_verified {
            bad.push(format!("q={q}: residue complex is not a verified subcomplex"));
        }
        if !quot.boundary_squares_to_zero() {
            bad.push(format!("q={q}: quotient boundary square nonzero"));
        }
        if quot.basis_sizes[0] != want_q0 {
            bad.push(format!("q={q}: Q_0 = {} not {want_q0}", quot.basis_sizes[0]));
        }
        let (h0, h1) = quot.low_homology();
        println!("quotient q={q}: sizes {:?}, h0={h0} h1={h1}", quot.basis_sizes);
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 60 {
        bad.push(format!("explorer took {elapsed:?}"));
    }
    conclude(8, "quotient-explorer", bad);
}

/// Diagonal of the Smith form, computed densely over i128 with naive row
/// and column operations.
fn oracle_snf(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        let mut best: Option<(usize, usize)> = None;
        for r in k..rows {
            for c in k..cols {
                if a[r][c] != 0
                    && best.map_or(true, |(br, bc): (usize, usize)| {
                        a[r][c].abs() < a[br][bc].abs()
                    })
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap(k, br);
        for row in a.iter_mut() {
            row.swap(k, bc);
        }
        let mut dirty = true;
        while dirty {
            dirty = false;
            for r in k + 1..rows {
                if a[r][k] != 0 {
                    let q = a[r][k].div_euclid(a[k][k]);
                    for c in k..cols {
                        a[r][c] -= q * a[k][c];
                    }
                    if a[r][k] != 0 {
                        a.swap(k, r);
                        dirty = true;
                    }
                }
            }
            for c in k + 1..cols {
                if a[k][c] != 0 {
                    let q = a[k][c].div_euclid(a[k][k]);
                    for r in k..rows {
                        a[r][c] -= q * a[r][k];
                    }
                    if a[k][c] != 0 {
                        for row in a.iter_mut() {
                            row.swap(k, c);
                        }
                        dirty = true;
                    }
                }
            }
        }
        let mut fold = None;
        'scan: for r in k + 1..rows {
            for c in k + 1..cols {
                if a[r][c] % a[k][k] != 0 {
                    fold = Some(r);
                    break 'scan;
                }
            }
        }
        if let Some(r) = fold {
            for c in k..cols {
                let v = a[r][c];
                a[k][c] += v;
            }
            continue;
        }
        if a[k][k] < 0 {
            a[k][k] = -a[k][k];
        }
        k += 1;
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[test]
fn criterion_09_bloch_groups() {
    let mut bad = Vec::new();

    // main path
    let data5 = bloch::bloch_data(&ring(5, 1, 1, 1)).unwrap();
    if data5.pre.group.factors_u64() != Some(vec![6]) {
        bad.push(format!("pre-bloch of f5: {:?}", data5.pre.group.factors_u64()));
    }
    if data5.bloch.factors_u64() != Some(vec![3]) {
        bad.push(format!("bloch of f5: {:?}", data5.bloch.factors_u64()));
    }

    // oracle: five-term columns over f5 with plain integer arithmetic
    let inv = [0i64, 1, 3, 2, 4];
    let idx = |x: i64| (x - 2) as usize; // generators [2], [3], [4]
    let mut columns: Vec<Vec<i128>> = Vec::new();
    for x in 2i64..=4 {
        for y in 2i64..=4 {
            if x == y {
                continue;
            }
            let args = [
                x,
                y,
                y * inv[x as usize] % 5,
                (1 - inv[x as usize]).rem_euclid(5) * inv[(1 - inv[y as usize]).rem_euclid(5) as usize] % 5,
                (1 - x).rem_euclid(5) * inv[(1 - y).rem_euclid(5) as usize] % 5,
            ];
            let signs = [1i128, -1, 1, -1, 1];
            let mut col = vec![0i128; 3];
            for (a, s) in args.iter().zip(signs) {
                col[idx(*a)] += s;
            }
            columns.push(col);
        }
    }
    let relations: Vec<Vec<i128>> = (0..3)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect();
    let diag = oracle_snf(relations.clone());
    let nontrivial: Vec<i128> = diag.iter().copied().filter(|&d| d != 1).collect();
    if nontrivial != vec![6] {
        bad.push(format!("oracle pre-bloch diagonal {diag:?}"));
    }

    // oracle bloch group: phi sends [x] to dlog(x) dlog(1-x) in the sign
    // twisted tensor square of Z/4, which collapses to Z/2
    let dlog = [0i64, 0, 1, 3, 2]; // powers of 2 mod 5
    let phi: Vec<i128> = (2i64..=4)
        .map(|x| (dlog[x as usize] * dlog[(1 - x).rem_euclid(5) as usize]) as i128)
        .collect();
    // lattice K of integer vectors with even phi pairing, in a basis whose
    // change matrix has determinant 2
    let j = match phi.iter().position(|f| f % 2 != 0) {
        Some(j) => j,
        None => usize::MAX,
    };
    let mut basis = vec![vec![0i128; 3]; 3]; // columns are basis vectors
    for i in 0..3 {
        if i == j {
            basis[i][i] = 2;
        } else {
            basis[i][i] = 1;
            if j < 3 && phi[i] % 2 != 0 {
                basis[j][i] = -1;
            }
        }
    }
    let det3 = |m: &Vec<Vec<i128>>| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let adj = |m: &Vec<Vec<i128>>| {
        let c = |r: usize, s: usize| {
            let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
            let cs: Vec<usize> = (0..3).filter(|&i| i != s).collect();
            let minor = m[rs[0]][cs[0]] * m[rs[1]][cs[1]] - m[rs[0]][cs[1]] * m[rs[1]][cs[0]];
            if (r + s) % 2 == 0 {
                minor
            } else {
                -minor
            }
        };
        vec![
            vec![c(0, 0), c(1, 0), c(2, 0)],
            vec![c(0, 1), c(1, 1), c(2, 1)],
            vec![c(0, 2), c(1, 2), c(2, 2)],
        ]
    };
    let det = det3(&basis);
    let adjugate = adj(&basis);
    let mut coords: Vec<Vec<i128>> = vec![Vec::new(); 3];
    for col in &columns {
        for r in 0..3 {
            let num: i128 = (0..3).map(|c| adjugate[r][c] * col[c]).sum();
            if num % det != 0 {
                bad.push("oracle: relation escapes the kernel lattice".into());
            }
            coords[r].push(num / det);
        }
    }
    let kernel_diag = oracle_snf(coords);
    let kernel_nontrivial: Vec<i128> = kernel_diag.iter().copied().filter(|&d| d != 1).collect();
    if kernel_nontrivial != vec![3] {
        bad.push(format!("oracle bloch diagonal {kernel_diag:?}"));
    }

    // phi is well defined on every relation, checked inside the constructor
    for (r, label) in [
        (ring(5, 1, 1, 1), "f5"),
        (ring(7, 1, 1, 1), "f7"),
        (ring(5, 1, 1, 2), "f5-trunc2"),
    ] {
        if let Err(e) = bloch::bloch_data(&r) {
            bad.push(format!("{label}: {e}"));
        }
    }

    // the residue comparison is natural and lands inside the bloch group
    let big = ring(5, 1, 1, 2);
    let small = big.residue_ring();
    let sdata = bloch::bloch_data(&small).unwrap();
    let bdata = bloch::bloch_data(&big).unwrap();
    let cmp = bloch::comparison(&small, &big, &sdata, &bdata, 3).unwrap();
    if !cmp.naturality_ok {
        bad.push("comparison map is not natural".into());
    }
    if !cmp.bloch_maps_into_bloch {
        bad.push("lifted bloch generators leave the bloch group".into());
    }
    println!(
        "bloch mod 3 dims: residue {} ring {} equal {}",
        cmp.residue_bloch_mod_p, cmp.ring_bloch_mod_p, cmp.dims_equal
    );
    conclude(9, "bloch-groups", bad);
}

#[test]
fn criterion_10_congruence_filtration() {
    let mut bad = Vec::new();

    let wide = ring(3, 1, 2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut trials = 0;
    for i in 1..4 {
        let check = congruence::rho_additivity_check(&wide, 3, i, 3334, &mut rng).unwrap();
        trials += check.trials;
        if check.failures != 0 {
            bad.push(format!("rho additivity failed {} times at level {i}", check.failures));
        }
    }
    if trials < 10_000 {
        bad.push(format!("only {trials} additivity trials ran"));
    }

    let small = ring(3, 1, 1, 2);
    let layer = congruence::layer_check_exhaustive(&small, 2, 1).unwrap();
    if layer.subgroup_size != 27 || !layer.size_matches_formula {
        bad.push(format!("sl2(f3[t]/t^2) first level has size {}", layer.subgroup_size));
    }
    if !layer.surjective || !layer.kernel_is_next_level || layer.kernel_size != 1 {
        bad.push("rho_1 is not onto with kernel C^2".into());
    }

    let deep = ring(5, 1, 1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (i, j) in [(1usize, 1usize), (1, 2)] {
        let check = congruence::commutator_check(&deep, 2, i, j, 5000, &mut rng).unwrap();
        if check.level_failures != 0 || check.bracket_failures != 0 {
            bad.push(format!(
                "commutators of levels {i},{j}: {} level and {} bracket failures",
                check.level_failures, check.bracket_failures
            ));
        }
    }

    let ab2 = congruence::abelianization_small(&ring(5, 1, 1, 2), 2).unwrap();
    if ab2.quotient_factors != vec![5, 5, 5] || ab2.commutator_order != 1 {
        bad.push(format!(
            "sl2(f5[t]/t^2) abelianization {:?} with commutator order {}",
            ab2.quotient_factors, ab2.commutator_order
        ));
    }
    let ab3 = congruence::abelianization_small(&deep, 2).unwrap();
    if ab3.group_order != 15625 || ab3.commutator_order != 125 {
        bad.push(format!(
            "sl2(f5[t]/t^3) sizes {} / {}",
            ab3.group_order, ab3.commutator_order
        ));
    }
    if !ab3.commutator_is_second_level || ab3.quotient_factors != vec![5, 5, 5] {
        bad.push(format!(
            "sl2(f5[t]/t^3) commutator level or quotient {:?}",
            ab3.quotient_factors
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let roots = congruence::pth_root_check(&deep, 2, 3, 1000, &mut rng).unwrap();
    if roots.exponent != 5 || roots.order_failures != 0 || roots.root_failures != 0 {
        bad.push(format!(
            "pth roots: exponent {} with {}+{} failures",
            roots.exponent, roots.order_failures, roots.root_failures
        ));
    }

    let acyc = congruence::layer_acyclicity(&ring(3, 1, 1, 3), 2, 1, 2).unwrap();
    if !acyc.char_power_layer || !acyc.acyclic {
        bad.push(format!("layer homology at p=2: {:?}", acyc.homology_dims));
    }
    conclude(10, "congruence-filtration", bad);
}

#[test]
fn criterion_11_deterministic_reports() {
    let mut bad = Vec::new();
    let bin = env!("CARGO_BIN_EXE_hensel");
    let base = std::env::temp_dir().join(format!("hensel-acceptance-{}", std::process::id()));
    let dir_a = base.join("a");
    let dir_b = base.join("b");
    std::fs::create_dir_all(&dir_a).unwrap();
    std::fs::create_dir_all(&dir_b).unwrap();

    let run = |cache: &std::path::Path| {
        let out = Command::new(bin)
            .args(["--seed", "9", "--second-prime", "7", "--cache-dir"])
            .arg(cache)
            .output()
            .expect("binary runs");
        (out.status.success(), out.stdout)
    };
    let (ok1, cold) = run(&dir_a);
    let (ok2, warm) = run(&dir_a);
    let (ok3, other) = run(&dir_b);
    if !(ok1 && ok2 && ok3) {
        bad.push("a run exited nonzero".into());
    }
    if cold != warm {
        bad.push("cache state changed the report bytes".into());
    }
    if cold != other {
        bad.push("reports differ across cache directories".into());
    }
    std::fs::remove_dir_all(&base).ok();
    conclude(11, "deterministic-reports", bad);
}
