//! Elementary divisors of a sparse integer matrix by pivoted elimination.
//!
//! Unit pivots are taken first, cheapest column first. When no unit is left
//! the entry of least magnitude is used and reduced against its row and
//! column until it divides them. Arithmetic is checked `i64`. Overflow means
//! entries are exploding, which unit pivots on dense blocks do (roughly
//! squaring per step), so the fallback is the dense smallest-pivot reduction
//! over `BigInt` rather than the same elimination with wider integers.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::dense_smith::smith_diagonal;
use super::matrix::IntMatrix;

/// Rank and the invariant factors greater than one, in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmithInvariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl SmithInvariants {
    /// The full nonzero diagonal: `rank - torsion.len()` ones, then torsion.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let mut d = vec![BigInt::one(); self.rank - self.torsion.len()];
        d.extend(self.torsion.iter().cloned());
        d
    }
}

trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn mag_cmp(&self, o: &Self) -> Ordering;
    /// `self - q * p`.
    fn sub_mul(&self, q: &Self, p: &Self) -> Option<Self>;
    /// `q` with `|self - q p| <= |p| / 2`.
    fn div_round(&self, p: &Self) -> Option<Self>;
    /// `q` with `self - q p = 0` for a unit `p`.
    fn div_unit(&self, p: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mag_cmp(&self, o: &Self) -> Ordering {
        self.unsigned_abs().cmp(&o.unsigned_abs())
    }
    fn sub_mul(&self, q: &Self, p: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*p)?)
    }
    fn div_round(&self, p: &Self) -> Option<Self> {
        let (a, b) = (*self as i128, *p as i128);
        let mut q = a.div_euclid(b);
        let r = a - q * b;
        if 2 * r > b.abs() {
            q += b.signum();
        }
        i64::try_from(q).ok()
    }
    fn div_unit(&self, p: &Self) -> Option<Self> {
        self.checked_mul(*p)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

struct Elim<T: Scalar> {
    rows: Vec<Vec<(u32, T)>>,
    col_rows: Vec<BTreeSet<u32>>,
    order: BTreeSet<(u32, u32)>,
    rank: usize,
    nonunits: Vec<BigInt>,
}

impl<T: Scalar> Elim<T> {
    fn new(m: &IntMatrix) -> Self {
        let mut col_rows = vec![BTreeSet::new(); m.ncols()];
        let mut rows = Vec::with_capacity(m.nrows());
        for i in 0..m.nrows() {
            let r: Vec<(u32, T)> = m.row(i).iter().map(|&(c, v)| (c, T::from_i64(v))).collect();
            for &(c, _) in &r {
                col_rows[c as usize].insert(i as u32);
            }
            rows.push(r);
        }
        let order = col_rows
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(c, s)| (s.len() as u32, c as u32))
            .collect();
        Elim { rows, col_rows, order, rank: 0, nonunits: Vec::new() }
    }

    fn col_insert(&mut self, c: u32, i: u32) {
        let set = &mut self.col_rows[c as usize];
        let n = set.len() as u32;
        if set.insert(i) {
            if n > 0 {
                self.order.remove(&(n, c));
            }
            self.order.insert((n + 1, c));
        }
    }

    fn col_remove(&mut self, c: u32, i: u32) {
        let set = &mut self.col_rows[c as usize];
        let n = set.len() as u32;
        if set.remove(&i) {
            self.order.remove(&(n, c));
            if n > 1 {
                self.order.insert((n - 1, c));
            }
        }
    }

    fn get(&self, i: u32, c: u32) -> Option<&T> {
        let r = &self.rows[i as usize];
        r.binary_search_by_key(&c, |e| e.0).ok().map(|k| &r[k].1)
    }

    /// `row_i -= q * row_r`.
    fn row_sub(&mut self, i: u32, r: u32, q: &T) -> Option<()> {
        let a = std::mem::take(&mut self.rows[i as usize]);
        let b = &self.rows[r as usize];
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut added = Vec::new();
        let mut removed = Vec::new();
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            let ca = a.get(x).map(|e| e.0).unwrap_or(u32::MAX);
            let cb = b.get(y).map(|e| e.0).unwrap_or(u32::MAX);
            match ca.cmp(&cb) {
                Ordering::Less => {
                    out.push(a[x].clone());
                    x += 1;
                }
                Ordering::Greater => {
                    let v = T::from_i64(0).sub_mul(q, &b[y].1)?;
                    if !v.is_zero() {
                        out.push((cb, v));
                        added.push(cb);
                    }
                    y += 1;
                }
                Ordering::Equal => {
                    let v = a[x].1.sub_mul(q, &b[y].1)?;
                    if v.is_zero() {
                        removed.push(ca);
                    } else {
                        out.push((ca, v));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        self.rows[i as usize] = out;
        for c in added {
            self.col_insert(c, i);
        }
        for c in removed {
            self.col_remove(c, i);
        }
        Some(())
    }

    fn drop_row(&mut self, r: u32) {
        let row = std::mem::take(&mut self.rows[r as usize]);
        for (c, _) in row {
            self.col_remove(c, r);
        }
    }

    fn find_unit(&self) -> Option<(u32, u32)> {
        for &(_, c) in &self.order {
            let mut best: Option<(usize, u32)> = None;
            for &i in &self.col_rows[c as usize] {
                if self.get(i, c).is_some_and(|v| v.is_unit()) {
                    let len = self.rows[i as usize].len();
                    if best.map_or(true, |(l, _)| len < l) {
                        best = Some((len, i));
                    }
                }
            }
            if let Some((_, i)) = best {
                return Some((i, c));
            }
        }
        None
    }

    fn find_smallest(&self) -> Option<(u32, u32)> {
        let mut best: Option<(T, usize, u32, u32)> = None;
        for &(clen, c) in &self.order {
            for &i in &self.col_rows[c as usize] {
                let v = self.get(i, c).expect("column index in sync").clone();
                let cost = (clen as usize - 1) * (self.rows[i as usize].len() - 1);
                let better = match &best {
                    None => true,
                    Some((bv, bc, _, _)) => match v.mag_cmp(bv) {
                        Ordering::Less => true,
                        Ordering::Equal => cost < *bc,
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((v, cost, i, c));
                }
            }
        }
        best.map(|(_, _, i, c)| (i, c))
    }

    fn run(mut self) -> Option<SmithInvariants> {
        loop {
            if let Some((r, c)) = self.find_unit() {
                let u = self.get(r, c).expect("pivot present").clone();
                let others: Vec<u32> =
                    self.col_rows[c as usize].iter().copied().filter(|&i| i != r).collect();
                for i in others {
                    let q = self.get(i, c).expect("column index in sync").div_unit(&u)?;
                    self.row_sub(i, r, &q)?;
                }
                self.drop_row(r);
                self.rank += 1;
                continue;
            }
            let Some((r, c)) = self.find_smallest() else { break };
            let p = self.get(r, c).expect("pivot present").clone();
            let others: Vec<u32> =
                self.col_rows[c as usize].iter().copied().filter(|&i| i != r).collect();
            for i in others {
                let q = self.get(i, c).expect("column index in sync").div_round(&p)?;
                if !q.is_zero() {
                    self.row_sub(i, r, &q)?;
                }
            }
            if self.col_rows[c as usize].len() > 1 {
                continue;
            }
            // Column c now holds only the pivot, so column operations against
            // it touch row r alone: reduce the row modulo p.
            let row = std::mem::take(&mut self.rows[r as usize]);
            let mut kept = Vec::with_capacity(row.len());
            let mut cleared = Vec::new();
            for (k, b) in row {
                if k == c {
                    kept.push((k, b));
                    continue;
                }
                let q = b.div_round(&p)?;
                let v = b.sub_mul(&q, &p)?;
                if v.is_zero() {
                    cleared.push(k);
                } else {
                    kept.push((k, v));
                }
            }
            let done = kept.len() == 1;
            self.rows[r as usize] = kept;
            for k in cleared {
                self.col_remove(k, r);
            }
            if done {
                self.nonunits.push(p.to_big().abs());
                self.drop_row(r);
                self.rank += 1;
            }
        }
        Some(SmithInvariants { rank: self.rank, torsion: invariant_factors(self.nonunits) })
    }
}

/// Turns any list of nonzero diagonal entries into invariant factors (>1).
pub fn invariant_factors(mut diag: Vec<BigInt>) -> Vec<BigInt> {
    for x in diag.iter_mut() {
        *x = x.abs();
    }
    let n = diag.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = diag[i].gcd(&diag[j]);
            if g != diag[i] {
                let l = diag[i].lcm(&diag[j]);
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag.retain(|x| !x.is_one());
    diag.sort();
    diag
}

/// Rank and invariant factors of `m`.
pub fn smith_invariants(m: &IntMatrix) -> SmithInvariants {
    // Eliminate along the shorter side.
    let owned;
    let m = if m.nrows() > m.ncols() {
        owned = m.transpose();
        &owned
    } else {
        m
    };
    if let Some(s) = Elim::<i64>::new(m).run() {
        return s;
    }
    smith_invariants_dense(m)
}

/// Same as [`smith_invariants`] but skips the machine-integer path.
pub fn smith_invariants_dense(m: &IntMatrix) -> SmithInvariants {
    let diag = smith_diagonal(&m.to_big_dense(), m.nrows(), m.ncols());
    SmithInvariants { rank: diag.len(), torsion: invariant_factors(diag) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(rows: &[Vec<i64>]) -> SmithInvariants {
        smith_invariants(&IntMatrix::from_dense(rows))
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cases() {
        let s = inv(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(s.rank, 2);
        assert_eq!(s.torsion, big(&[6]));
        let s = inv(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.rank, 3);
        assert_eq!(s.torsion, big(&[2, 6, 12]));
        let s = inv(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(s, SmithInvariants::default());
        let s = inv(&[vec![-2]]);
        assert_eq!(s.torsion, big(&[2]));
    }

    #[test]
    fn invariant_factor_normalization() {
        assert_eq!(invariant_factors(big(&[4, 6, 1, 1])), big(&[2, 12]));
        assert_eq!(invariant_factors(big(&[2, 2, 3])), big(&[2, 6]));
        assert!(invariant_factors(big(&[1, -1])).is_empty());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let rows = vec![vec![1, 2], vec![i64::MAX, 0]];
        let m = IntMatrix::from_dense(&rows);
        assert!(Elim::<i64>::new(&m).run().is_none());
        let s = smith_invariants(&m);
        assert_eq!(s.rank, 2);
        assert_eq!(s.torsion, vec![BigInt::from(i64::MAX) * 2]);
        assert_eq!(smith_invariants_dense(&m), s);
    }
}
