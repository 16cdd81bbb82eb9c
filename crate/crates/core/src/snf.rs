//! Integer matrices over arbitrary-precision integers: Smith normal form with
//! unimodular transforms, column Hermite form, kernels, and linear solving.
//!
//! U and V are built purely from elementary operations (swaps, transvections,
//! negations), so they are unimodular by construction; `Snf::verify` checks
//! the product identity U * M * V = D, and the tests additionally confirm
//! det U, det V = +-1 by fraction-free elimination.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<BigInt>>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> IntMat {
        IntMat {
            rows,
            cols,
            a: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.a[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> IntMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        IntMat {
            rows: r,
            cols: c,
            a: rows
                .iter()
                .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> IntMat {
        let mut m = IntMat::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                m.a[i][j] = col[i].clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.a[i][j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows);
        let mut a = self.a.clone();
        for (row, extra) in a.iter_mut().zip(&other.a) {
            row.extend(extra.iter().cloned());
        }
        IntMat {
            rows: self.rows,
            cols: self.cols + other.cols,
            a,
        }
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.a[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other.a[k][j].is_zero() {
                        continue;
                    }
                    let prod = &self.a[i][k] * &other.a[k][j];
                    out.a[i][j] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        self.a
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.a[j][i] = self.a[i][j].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|row| row.iter().all(|v| v.is_zero()))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.a[i][j].is_one()
                    } else {
                        self.a[i][j].is_zero()
                    }
                })
            })
    }
}

/// Fraction-free (Bareiss) determinant; used by tests to certify transforms.
pub fn det_bareiss(m: &IntMat) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal entries d_1 | d_2 | ..., nonnegative, zeros trailing.
    pub d: Vec<BigInt>,
    pub u: IntMat,
    pub v: IntMat,
    pub rank: usize,
}

impl Snf {
    /// Rebuilds U * M * V and compares with diag(d).
    pub fn verify(&self, m: &IntMat) -> bool {
        let prod = self.u.mul(m).mul(&self.v);
        if prod.rows != m.rows || prod.cols != m.cols {
            return false;
        }
        for i in 0..prod.rows {
            for j in 0..prod.cols {
                let want = if i == j && i < self.d.len() {
                    self.d[i].clone()
                } else {
                    BigInt::zero()
                };
                if prod.a[i][j] != want {
                    return false;
                }
            }
        }
        true
    }
}

fn row_sub(a: &mut Vec<Vec<BigInt>>, i: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let taken: Vec<BigInt> = a[k].iter().map(|v| v * q).collect();
    for (x, t) in a[i].iter_mut().zip(taken) {
        *x -= t;
    }
}

fn col_sub(a: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let t = &row[k] * q;
        row[j] -= t;
    }
}

fn col_swap(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Smith normal form with transforms: U * M * V = diag(d).
pub fn smith(m: &IntMat) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.a.clone();
    let mut u = IntMat::identity(rows).a;
    let mut v = IntMat::identity(cols).a;
    let limit = rows.min(cols);

    for k in 0..limit {
        // choose the entry of smallest absolute value in the remaining block
        let mut pivot: Option<(BigInt, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                let mag = a[i][j].abs();
                if pivot.as_ref().map_or(true, |(m, _, _)| mag < *m) {
                    pivot = Some((mag, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = pivot else {
            break;
        };
        a.swap(k, pi);
        u.swap(k, pi);
        col_swap(&mut a, k, pj);
        col_swap(&mut v, k, pj);

        'reduce: loop {
            // clear column k below the pivot
            let mut i = k + 1;
            while i < rows {
                if !a[i][k].is_zero() {
                    let q = &a[i][k] / &a[k][k];
                    row_sub(&mut a, i, k, &q);
                    row_sub(&mut u, i, k, &q);
                    if !a[i][k].is_zero() {
                        a.swap(i, k);
                        u.swap(i, k);
                        continue 'reduce;
                    }
                }
                i += 1;
            }
            // clear row k right of the pivot
            let mut j = k + 1;
            while j < cols {
                if !a[k][j].is_zero() {
                    let q = &a[k][j] / &a[k][k];
                    col_sub(&mut a, j, k, &q);
                    col_sub(&mut v, j, k, &q);
                    if !a[k][j].is_zero() {
                        col_swap(&mut a, j, k);
                        col_swap(&mut v, j, k);
                        continue 'reduce;
                    }
                }
                j += 1;
            }
            // column swaps during row clearing can dirty the column again
            if (k + 1..rows).any(|i| !a[i][k].is_zero()) {
                continue 'reduce;
            }
            // divisibility: the pivot must divide the rest of the block
            let mut offender = None;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // fold row i into row k and restart the reduction
                    let taken = a[i].clone();
                    for (x, t) in a[k].iter_mut().zip(&taken) {
                        *x += t;
                    }
                    let taken_u = u[i].clone();
                    for (x, t) in u[k].iter_mut().zip(&taken_u) {
                        *x += t;
                    }
                }
                None => break 'reduce,
            }
        }

        if a[k][k].is_negative() {
            for x in a[k].iter_mut() {
                *x = -x.clone();
            }
            for x in u[k].iter_mut() {
                *x = -x.clone();
            }
        }
    }

    let d: Vec<BigInt> = (0..limit).map(|i| a[i][i].clone()).collect();
    let rank = d.iter().filter(|x| !x.is_zero()).count();
    let snf = Snf {
        d,
        u: IntMat {
            rows,
            cols: rows,
            a: u,
        },
        v: IntMat {
            rows: cols,
            cols,
            a: v,
        },
        rank,
    };
    debug_assert!(snf.verify(m));
    snf
}

/// Basis of the integer kernel {z : M z = 0}, as columns of V for indices
/// past the rank.
pub fn kernel_basis(m: &IntMat) -> Vec<Vec<BigInt>> {
    let snf = smith(m);
    (0..m.cols)
        .filter(|&j| j >= snf.rank)
        .map(|j| snf.v.column(j))
        .collect()
}

/// One solution of M x = b over the integers, if any.
pub fn solve(m: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows);
    let snf = smith(m);
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols];
    for (j, cj) in c.iter().enumerate() {
        if j < snf.d.len() && !snf.d[j].is_zero() {
            let (q, r) = num_integer::Integer::div_rem(cj, &snf.d[j]);
            if !r.is_zero() {
                return None;
            }
            y[j] = q;
        } else if !cj.is_zero() {
            return None;
        }
    }
    let x = snf.v.mul_vec(&y);
    debug_assert_eq!(m.mul_vec(&x), b.to_vec());
    Some(x)
}

pub fn in_column_span(m: &IntMat, b: &[BigInt]) -> bool {
    solve(m, b).is_some()
}

/// Inverse of a unimodular matrix: from U M V = I, M^{-1} = V U.
pub fn inverse_unimodular(m: &IntMat) -> Option<IntMat> {
    if m.rows != m.cols {
        return None;
    }
    let snf = smith(m);
    if !snf.d.iter().all(|d| d.is_one()) {
        return None;
    }
    let inv = snf.v.mul(&snf.u);
    debug_assert!(inv.mul(m).is_identity());
    Some(inv)
}

/// Column-style Hermite normal form of the lattice spanned by the columns:
/// returns a canonical basis. Pivot rows strictly increase, pivots are
/// positive, and entries of earlier columns in a pivot row are reduced into
/// [0, pivot).
pub fn hnf_column_basis(m: &IntMat) -> IntMat {
    let mut cols: Vec<Vec<BigInt>> = m.columns();
    let rows = m.rows;
    let mut placed = 0usize;
    for r in 0..rows {
        // Euclid among active columns until one nonzero entry remains in row r
        loop {
            let mut best: Option<(BigInt, usize)> = None;
            let mut count = 0;
            for (j, col) in cols.iter().enumerate().skip(placed) {
                if !col[r].is_zero() {
                    count += 1;
                    let mag = col[r].abs();
                    if best.as_ref().map_or(true, |(m, _)| mag < *m) {
                        best = Some((mag, j));
                    }
                }
            }
            let Some((_, jmin)) = best else {
                break;
            };
            if count == 1 {
                cols.swap(placed, jmin);
                if cols[placed][r].is_negative() {
                    for x in cols[placed].iter_mut() {
                        *x = -x.clone();
                    }
                }
                // reduce the pivot-row entries of already placed columns
                let pivot = cols[placed][r].clone();
                for j in 0..placed {
                    let q = num_integer::Integer::div_floor(&cols[j][r], &pivot);
                    if !q.is_zero() {
                        for i in 0..rows {
                            let t = &cols[placed][i] * &q;
                            cols[j][i] -= t;
                        }
                    }
                }
                placed += 1;
                break;
            }
            let pivot_val = cols[jmin][r].clone();
            for j in placed..cols.len() {
                if j != jmin && !cols[j][r].is_zero() {
                    let q = num_integer::Integer::div_floor(&cols[j][r], &pivot_val);
                    for i in 0..rows {
                        let t = &cols[jmin][i] * &q;
                        cols[j][i] -= t;
                    }
                }
            }
        }
        if placed == cols.len() {
            break;
        }
    }
    let basis: Vec<Vec<BigInt>> = cols
        .into_iter()
        .filter(|c| c.iter().any(|v| !v.is_zero()))
        .collect();
    IntMat::from_columns(rows, &basis)
}
