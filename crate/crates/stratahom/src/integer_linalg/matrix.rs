use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Sparse integer matrix stored by rows, each row sorted by column.
///
/// Entries are machine integers; anything derived from them that can grow
/// (eliminations, transforms) is handled in arbitrary precision elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(u32, i64)>>,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, i64)]) -> Result<Self> {
        let mut m = IntMatrix::zeros(nrows, ncols);
        for &(r, c, v) in triplets {
            m.add_to(r, c, v)?;
        }
        Ok(m)
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = IntMatrix::zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols, "ragged dense matrix");
            m.rows[i] = r
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(|(j, v)| (j as u32, *v))
                .collect();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn row(&self, i: usize) -> &[(u32, i64)] {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        match self.rows[r].binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(k) => self.rows[r][k].1,
            Err(_) => 0,
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: i64) -> Result<()> {
        if r >= self.nrows || c >= self.ncols {
            return Err(Error::Argument(format!(
                "entry ({r},{c}) outside {}x{} matrix",
                self.nrows, self.ncols
            )));
        }
        if v == 0 {
            return Ok(());
        }
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(k) => {
                let s = row[k]
                    .1
                    .checked_add(v)
                    .ok_or_else(|| Error::Invariant("matrix entry overflow".into()))?;
                if s == 0 {
                    row.remove(k);
                } else {
                    row[k].1 = s;
                }
            }
            Err(k) => row.insert(k, (c as u32, v)),
        }
        Ok(())
    }

    /// `(row, col, value)` over nonzero entries, row-major.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(c, v)| (i, c as usize, v)))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (i, c, v) in self.triplets() {
            rows[c].push((i as u32, v));
        }
        IntMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    /// Product `self * other`, failing on dimension mismatch or overflow.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::Argument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut out = IntMatrix::zeros(self.nrows, other.ncols);
        let mut acc: Vec<i128> = vec![0; other.ncols];
        let mut seen = vec![false; other.ncols];
        let mut touched: Vec<u32> = Vec::new();
        for i in 0..self.nrows {
            for &(k, a) in &self.rows[i] {
                for &(j, b) in &other.rows[k as usize] {
                    if !seen[j as usize] {
                        seen[j as usize] = true;
                        touched.push(j);
                    }
                    acc[j as usize] += a as i128 * b as i128;
                }
            }
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for &j in &touched {
                let v = std::mem::take(&mut acc[j as usize]);
                seen[j as usize] = false;
                if v != 0 {
                    let v = i64::try_from(v)
                        .map_err(|_| Error::Invariant("matrix product overflow".into()))?;
                    row.push((j, v));
                }
            }
            touched.clear();
            out.rows[i] = row;
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0i64; self.ncols]; self.nrows];
        for (i, c, v) in self.triplets() {
            d[i][c] = v;
        }
        d
    }

    pub fn to_big_dense(&self) -> Vec<Vec<BigInt>> {
        self.to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_and_transpose() {
        let m = IntMatrix::from_triplets(2, 3, &[(0, 1, 2), (1, 2, -1), (0, 1, 3), (1, 0, 4)]).unwrap();
        assert_eq!(m.get(0, 1), 5);
        assert_eq!(m.nnz(), 3);
        let t = m.transpose();
        assert_eq!(t.nrows(), 3);
        assert_eq!(t.get(1, 0), 5);
        assert_eq!(t.get(2, 1), -1);
        assert!(IntMatrix::from_triplets(1, 1, &[(1, 0, 1)]).is_err());
    }

    #[test]
    fn cancellation_removes_entry() {
        let mut m = IntMatrix::zeros(1, 1);
        m.add_to(0, 0, 3).unwrap();
        m.add_to(0, 0, -3).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn product_matches_dense() {
        let a = IntMatrix::from_dense(&[vec![1, 2, 0], vec![0, -1, 3]]);
        let b = IntMatrix::from_dense(&[vec![2, 0], vec![1, 1], vec![0, 5]]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.to_dense(), vec![vec![4, 2], vec![-1, 14]]);
        let z = IntMatrix::from_dense(&[vec![1, -1]]).mul(&IntMatrix::from_dense(&[vec![1], vec![1]])).unwrap();
        assert!(z.is_zero());
        assert!(a.mul(&a).is_err());
    }
}
