use super::matrix::IntMatrix;

/// Rank over `Z/p` by dense Gaussian elimination. `p` must be prime.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    assert!(p >= 2 && p < (1 << 31), "modulus out of range");
    let pi = p as i64;
    let mut a: Vec<Vec<u64>> = m
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.rem_euclid(pi) as u64).collect())
        .collect();
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut rank = 0;
    for c in 0..nc {
        let Some(piv) = (rank..nr).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..nr {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                let (lo, hi) = if i < rank {
                    let (l, h) = a.split_at_mut(rank);
                    (&mut l[i], &h[0])
                } else {
                    let (l, h) = a.split_at_mut(i);
                    (&mut h[0], &l[rank])
                };
                for (x, y) in lo.iter_mut().zip(hi.iter()) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        let m = IntMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(rank_mod_p(&m, 3), 1);
        assert_eq!(rank_mod_p(&m, 5), 2);
        let m = IntMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, -1]]);
        assert_eq!(rank_mod_p(&m, 7), 2);
    }
}
