//! Dense Smith normal form with unimodular transforms, plus the lattice
//! queries built on it (kernel bases and image membership).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type DenseMatrix = Vec<Vec<BigInt>>;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: DenseMatrix,
    pub d: DenseMatrix,
    pub v: DenseMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn identity(n: usize) -> DenseMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn matmul(a: &DenseMatrix, b: &DenseMatrix, inner: usize, ncols: usize) -> DenseMatrix {
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn swap_cols(m: &mut DenseMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn row_sub(m: &mut DenseMatrix, i: usize, p: usize, q: &BigInt) {
    let (src, dst) = if p < i {
        let (lo, hi) = m.split_at_mut(i);
        (&lo[p], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(p);
        (&hi[0], &mut lo[i])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// `row_i -= q * row_p` in the matrix and, when tracked, the left transform.
fn row_op(a: &mut DenseMatrix, u: &mut DenseMatrix, i: usize, p: usize, q: &BigInt) {
    row_sub(a, i, p, q);
    if !u.is_empty() {
        row_sub(u, i, p, q);
    }
}

/// `col_j -= q * col_p` in the matrix and, when tracked, the right transform.
fn col_op(a: &mut DenseMatrix, v: &mut DenseMatrix, j: usize, p: usize, q: &BigInt) {
    for m in [a, v] {
        for row in m.iter_mut() {
            if !row[p].is_zero() {
                let t = q * &row[p];
                row[j] -= t;
            }
        }
    }
}

fn swap_rows(a: &mut DenseMatrix, u: &mut DenseMatrix, i: usize, j: usize) {
    a.swap(i, j);
    if !u.is_empty() {
        u.swap(i, j);
    }
}

/// Smith normal form of an `nrows x ncols` matrix with transforms.
pub fn smith_normal_form(a: &DenseMatrix, nrows: usize, ncols: usize) -> SmithDecomposition {
    let mut a = a.clone();
    let mut u = identity(nrows);
    let mut v = identity(ncols);
    let rank = reduce(&mut a, &mut u, &mut v, nrows, ncols);
    SmithDecomposition { u, d: a, v, rank }
}

/// Nonzero Smith diagonal without building transforms.
pub fn smith_diagonal(a: &DenseMatrix, nrows: usize, ncols: usize) -> Vec<BigInt> {
    let mut a = a.clone();
    let rank = reduce(&mut a, &mut Vec::new(), &mut Vec::new(), nrows, ncols);
    (0..rank).map(|i| a[i][i].clone()).collect()
}

/// Diagonalizes `a` in place and returns the rank. Empty `u`, `v` are not
/// tracked.
fn reduce(
    a: &mut DenseMatrix,
    u: &mut DenseMatrix,
    v: &mut DenseMatrix,
    nrows: usize,
    ncols: usize,
) -> usize {
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Smallest nonzero entry of the trailing block moves to (t, t).
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows(a, u, t, bi);
        swap_cols(a, t, bj);
        swap_cols(v, t, bj);
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..nrows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    row_op(a, u, i, t, &q);
                    if !a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..ncols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    col_op(a, v, j, t, &q);
                    if !a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // A remainder smaller than the pivot appeared; move it in.
                let mut m = (t, t);
                for i in t..nrows {
                    if !a[i][t].is_zero() && a[i][t].magnitude() < a[m.0][m.1].magnitude() {
                        m = (i, t);
                    }
                }
                for j in t..ncols {
                    if !a[t][j].is_zero() && a[t][j].magnitude() < a[m.0][m.1].magnitude() {
                        m = (t, j);
                    }
                }
                if m.0 != t {
                    swap_rows(a, u, t, m.0);
                }
                if m.1 != t {
                    swap_cols(a, t, m.1);
                    swap_cols(v, t, m.1);
                }
                continue;
            }
            // Row and column are clear; the pivot must divide the rest.
            let bad = (t + 1..nrows)
                .find(|&i| (t + 1..ncols).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_op(a, u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u.get_mut(t).into_iter().flatten() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    t
}

/// A basis of the integer kernel `{x : A x = 0}` as column vectors.
pub fn kernel_basis(a: &DenseMatrix, nrows: usize, ncols: usize) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a, nrows, ncols);
    (s.rank..ncols).map(|j| (0..ncols).map(|i| s.v[i][j].clone()).collect()).collect()
}

/// Membership of `x` in the column lattice `A Z^n`, given `A`'s decomposition.
pub fn in_image(s: &SmithDecomposition, x: &[BigInt]) -> bool {
    let ux: Vec<BigInt> = s
        .u
        .iter()
        .map(|row| row.iter().zip(x).fold(BigInt::zero(), |acc, (a, b)| acc + a * b))
        .collect();
    ux.iter().enumerate().all(|(i, y)| {
        if i < s.rank {
            (y % &s.d[i][i]).is_zero()
        } else {
            y.is_zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[Vec<i64>]) -> DenseMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn check(rows: &[Vec<i64>]) -> SmithDecomposition {
        let a = big(rows);
        let (m, n) = (rows.len(), rows[0].len());
        let s = smith_normal_form(&a, m, n);
        let prod = matmul(&matmul(&s.u, &a, m, n), &s.v, n, n);
        assert_eq!(prod, s.d);
        for i in 0..m {
            for j in 0..n {
                if i != j {
                    assert!(s.d[i][j].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn textbook_example() {
        let s = check(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn needs_divisibility_fix() {
        let s = check(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn kernel_and_image() {
        let a = big(&[vec![1, 1, 0], vec![0, 2, 2]]);
        let k = kernel_basis(&a, 2, 3);
        assert_eq!(k.len(), 1);
        let x = &k[0];
        assert!((&x[0] + &x[1]).is_zero() && (&x[1] + &x[2]).is_zero());
        let s = smith_normal_form(&a, 2, 3);
        assert!(in_image(&s, &[BigInt::from(1), BigInt::from(2)]));
        assert!(!in_image(&s, &[BigInt::from(0), BigInt::from(1)]));
    }
}
