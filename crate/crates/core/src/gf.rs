//! Sparse matrices over GF(p) and exact rank computation.
//!
//! `rank` runs sparse Gaussian elimination with Markowitz-style pivoting
//! (minimize (row_nnz - 1) * (col_nnz - 1), ties by position); `dense_rank`
//! is an independent dense elimination used to cross-check it.

pub fn modinv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime throughout this crate
    let mut base = a % p;
    let mut n = p - 2;
    let mut acc = 1u64;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        n >>= 1;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    /// Sorted by (row, col); values reduced to 1..p.
    pub triplets: Vec<(u32, u32, u64)>,
}

impl GfMat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> GfMat {
        GfMat {
            p,
            rows,
            cols,
            triplets: Vec::new(),
        }
    }

    pub fn identity(p: u64, n: usize) -> GfMat {
        GfMat {
            p,
            rows: n,
            cols: n,
            triplets: (0..n as u32).map(|i| (i, i, 1)).collect(),
        }
    }

    /// Accumulates duplicate positions mod p and drops zeros.
    pub fn from_triplets(
        p: u64,
        rows: usize,
        cols: usize,
        raw: impl IntoIterator<Item = (u32, u32, i64)>,
    ) -> GfMat {
        let mut acc: std::collections::HashMap<(u32, u32), u64> = std::collections::HashMap::new();
        for (r, c, v) in raw {
            assert!((r as usize) < rows && (c as usize) < cols);
            let v = v.rem_euclid(p as i64) as u64;
            let slot = acc.entry((r, c)).or_insert(0);
            *slot = (*slot + v) % p;
        }
        let mut triplets: Vec<(u32, u32, u64)> = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        triplets.sort_unstable();
        GfMat {
            p,
            rows,
            cols,
            triplets,
        }
    }

    pub fn from_dense(p: u64, dense: &[Vec<u64>]) -> GfMat {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        GfMat::from_triplets(
            p,
            rows,
            cols,
            dense.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, &v)| (i as u32, j as u32, v as i64))
            }),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut d = vec![vec![0u64; self.cols]; self.rows];
        for &(r, c, v) in &self.triplets {
            d[r as usize][c as usize] = v;
        }
        d
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_zero(&self) -> bool {
        self.triplets.is_empty()
    }

    pub fn transpose(&self) -> GfMat {
        let mut triplets: Vec<(u32, u32, u64)> =
            self.triplets.iter().map(|&(r, c, v)| (c, r, v)).collect();
        triplets.sort_unstable();
        GfMat {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            triplets,
        }
    }

    pub fn mul(&self, other: &GfMat) -> GfMat {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let mut b_rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); other.rows];
        for &(r, c, v) in &other.triplets {
            b_rows[r as usize].push((c, v));
        }
        let mut acc: std::collections::HashMap<(u32, u32), u64> = std::collections::HashMap::new();
        for &(i, k, v) in &self.triplets {
            for &(j, w) in &b_rows[k as usize] {
                let slot = acc.entry((i, j)).or_insert(0);
                *slot = (*slot + v * w) % self.p;
            }
        }
        let mut triplets: Vec<(u32, u32, u64)> = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        triplets.sort_unstable();
        GfMat {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            triplets,
        }
    }

    /// Restrict to the given rows and columns (indices keep their order).
    pub fn submatrix(&self, keep_rows: &[u32], keep_cols: &[u32]) -> GfMat {
        let row_map: std::collections::HashMap<u32, u32> = keep_rows
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as u32))
            .collect();
        let col_map: std::collections::HashMap<u32, u32> = keep_cols
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as u32))
            .collect();
        let mut triplets: Vec<(u32, u32, u64)> = self
            .triplets
            .iter()
            .filter_map(|&(r, c, v)| {
                match (row_map.get(&r), col_map.get(&c)) {
                    (Some(&nr), Some(&nc)) => Some((nr, nc, v)),
                    _ => None,
                }
            })
            .collect();
        triplets.sort_unstable();
        GfMat {
            p: self.p,
            rows: keep_rows.len(),
            cols: keep_cols.len(),
            triplets,
        }
    }

    /// Sparse Gaussian elimination; returns the rank.
    pub fn rank(&self) -> usize {
        let p = self.p;
        let mut rows: Vec<Option<Vec<(u32, u64)>>> = vec![None; self.rows];
        for &(r, c, v) in &self.triplets {
            rows[r as usize].get_or_insert_with(Vec::new).push((c, v));
        }
        let mut col_count = vec![0u32; self.cols];
        let mut col_rows: Vec<std::collections::HashSet<u32>> =
            vec![std::collections::HashSet::new(); self.cols];
        let mut active: Vec<u32> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if let Some(entries) = row {
                active.push(i as u32);
                for &(c, _) in entries {
                    col_count[c as usize] += 1;
                    col_rows[c as usize].insert(i as u32);
                }
            }
        }

        let mut rank = 0usize;
        loop {
            // Markowitz-style pivot: minimize (row_nnz-1)(col_nnz-1)
            let mut best: Option<(u64, u32, u32)> = None;
            for &ri in &active {
                let row = rows[ri as usize].as_ref().unwrap();
                let rlen = row.len() as u64;
                for &(c, _) in row {
                    let score = (rlen - 1) * (col_count[c as usize] as u64 - 1);
                    let cand = (score, ri, c);
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            let Some((_, pr, pc)) = best else {
                break;
            };
            rank += 1;

            let pivot_row = rows[pr as usize].take().unwrap();
            active.retain(|&r| r != pr);
            for &(c, _) in &pivot_row {
                col_count[c as usize] -= 1;
                col_rows[c as usize].remove(&pr);
            }
            let pv = pivot_row.iter().find(|&&(c, _)| c == pc).unwrap().1;
            let pv_inv = modinv(pv, p);

            let mut targets: Vec<u32> = col_rows[pc as usize].iter().copied().collect();
            targets.sort_unstable();
            for ti in targets {
                let target = rows[ti as usize].take().unwrap();
                for &(c, _) in &target {
                    col_count[c as usize] -= 1;
                    col_rows[c as usize].remove(&ti);
                }
                let tv = target.iter().find(|&&(c, _)| c == pc).unwrap().1;
                let factor = tv * pv_inv % p; // target - factor * pivot_row
                let mut merged: Vec<(u32, u64)> =
                    Vec::with_capacity(target.len() + pivot_row.len());
                let (mut a, mut b) = (0usize, 0usize);
                while a < target.len() || b < pivot_row.len() {
                    let ca = target.get(a).map(|&(c, _)| c);
                    let cb = pivot_row.get(b).map(|&(c, _)| c);
                    match (ca, cb) {
                        (Some(x), Some(y)) if x == y => {
                            let v = (target[a].1 + (p - factor * pivot_row[b].1 % p)) % p;
                            if v != 0 {
                                merged.push((x, v));
                            }
                            a += 1;
                            b += 1;
                        }
                        (Some(x), Some(y)) if x < y => {
                            merged.push(target[a]);
                            a += 1;
                        }
                        (Some(_), Some(_)) | (None, Some(_)) => {
                            let v = (p - factor * pivot_row[b].1 % p) % p;
                            if v != 0 {
                                merged.push((pivot_row[b].0, v));
                            }
                            b += 1;
                        }
                        (Some(_), None) => {
                            merged.push(target[a]);
                            a += 1;
                        }
                        (None, None) => unreachable!(),
                    }
                }
                if merged.is_empty() {
                    active.retain(|&r| r != ti);
                } else {
                    for &(c, _) in &merged {
                        col_count[c as usize] += 1;
                        col_rows[c as usize].insert(ti);
                    }
                    rows[ti as usize] = Some(merged);
                }
            }
        }
        rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

/// Plain dense row reduction; an independent route to the same rank.
pub fn dense_rank(p: u64, dense: &[Vec<u64>]) -> usize {
    let rows = dense.len();
    if rows == 0 {
        return 0;
    }
    let cols = dense[0].len();
    let mut a: Vec<Vec<u64>> = dense.iter().map(|r| r.iter().map(|&v| v % p).collect()).collect();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = modinv(a[rank][c], p);
        for v in a[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in c..cols {
                    let sub = f * a[rank][j] % p;
                    a[r][j] = (a[r][j] + p - sub) % p;
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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        let m = GfMat::from_dense(5, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
        let m = GfMat::from_dense(5, &[vec![1, 2], vec![2, 3]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(GfMat::zero(3, 4, 7).rank(), 0);
        assert_eq!(GfMat::identity(3, 6).rank(), 6);
    }

    #[test]
    fn rank_depends_on_p() {
        // determinant 6: singular mod 2 and 3, regular mod 5
        let rows = vec![vec![1, 2], vec![4, 2]];
        assert_eq!(GfMat::from_dense(2, &rows).rank(), 1);
        assert_eq!(GfMat::from_dense(3, &rows).rank(), 1);
        assert_eq!(GfMat::from_dense(5, &rows).rank(), 2);
    }

    #[test]
    fn duplicate_triplets_accumulate() {
        let m = GfMat::from_triplets(3, 1, 1, vec![(0, 0, 1), (0, 0, 2)]);
        assert!(m.is_zero());
    }

    #[test]
    fn mul_and_submatrix() {
        let a = GfMat::from_dense(7, &[vec![1, 2, 0], vec![0, 1, 3]]);
        let b = GfMat::from_dense(7, &[vec![1, 0], vec![2, 1], vec![0, 5]]);
        let ab = a.mul(&b);
        assert_eq!(ab.to_dense(), vec![vec![5, 2], vec![2, 2]]);
        let sub = a.submatrix(&[1], &[0, 2]);
        assert_eq!(sub.to_dense(), vec![vec![0, 3]]);
    }

    proptest! {
        #[test]
        fn sparse_matches_dense(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = [2u64, 3, 5, 13][rng.gen_range(0..4)];
            let rows = rng.gen_range(1..12);
            let cols = rng.gen_range(1..12);
            let mut dense = vec![vec![0u64; cols]; rows];
            for row in dense.iter_mut() {
                for v in row.iter_mut() {
                    if rng.gen_bool(0.4) {
                        *v = rng.gen_range(0..p);
                    }
                }
            }
            let m = GfMat::from_dense(p, &dense);
            prop_assert_eq!(m.rank(), dense_rank(p, &dense));
            prop_assert_eq!(m.transpose().rank(), m.rank());
        }
    }
}
