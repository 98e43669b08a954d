//! The truncation chain map from degree `d+2` to degree `d` and checks of
//! the resulting homological stabilization.
//!
//! `trunc` is the identity on cells of norm at most `d` and kills the cells
//! of norm `d+2`; it lowers cell dimension by two. Its kernel is the span
//! of the norm-`(d+2)` cells, on which the boundary only merges.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chain_complex::{ChainComplex, Variant};
use crate::combinatorics::{Kind, MarkedComposition};
use crate::error::{Error, Result};
use crate::integer_linalg::{in_image, kernel_basis, smith_normal_form, smith_with_transforms, HomologyGroup, IntMatrix};
use crate::posets::{PosetFamily, PosetRealization};

fn kind_of(variant: Variant) -> Result<Kind> {
    match variant {
        Variant::Poly => Ok(Kind::Polynomial),
        Variant::Proj => Ok(Kind::Projective),
        Variant::Quotient => Err(Error::Argument("stabilization is defined for Poly and Proj".into())),
    }
}

/// The chain map `C_{j+2}(d+2) -> C_j(d)`.
#[derive(Debug, Clone)]
pub struct TruncMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    /// `maps[j]: C_{j+2}(source) -> C_j(target)` for `j` in `0..=d`.
    pub maps: Vec<IntMatrix>,
}

impl TruncMap {
    pub fn degree(&self) -> u32 {
        self.target.degree()
    }

    /// Norm-`(d+2)` cells of the source in dimension `n`: the kernel basis.
    pub fn kernel_cells(&self, n: usize) -> Vec<MarkedComposition> {
        let top = self.source.degree();
        self.source.basis(n).iter().filter(|c| c.norm() == top).cloned().collect()
    }
}

pub fn build_trunc(family: &PosetFamily, d: u32, variant: Variant) -> Result<TruncMap> {
    let kind = kind_of(variant)?;
    let upper = family.realize(d + 2, kind)?;
    let lower = family.realize(d, kind)?;
    build_trunc_of(&upper, &lower, variant)
}

pub fn build_trunc_of(upper: &PosetRealization, lower: &PosetRealization, variant: Variant) -> Result<TruncMap> {
    let d = lower.degree();
    if upper.degree() != d + 2 {
        return Err(Error::Argument("trunc needs realizations in degrees d+2 and d".into()));
    }
    let restricted: Vec<&MarkedComposition> = upper.cells().iter().filter(|c| c.norm() <= d).collect();
    let lower_cells: Vec<&MarkedComposition> = lower.cells().iter().collect();
    if restricted != lower_cells {
        return Err(Error::Argument(format!(
            "family in degree {} restricted to norm <= {d} differs from its degree-{d} realization",
            d + 2
        )));
    }
    let source = ChainComplex::build(upper, variant)?;
    let target = ChainComplex::build(lower, variant)?;
    let mut maps = Vec::with_capacity(d as usize + 1);
    for j in 0..=d as usize {
        let tb = target.basis(j);
        let mut trip = Vec::new();
        for (col, c) in source.basis(j + 2).iter().enumerate() {
            if c.norm() <= d {
                let row = tb
                    .binary_search(c)
                    .map_err(|_| Error::Invariant(format!("cell {c} missing from target grade {j}")))?;
                trip.push((row, col, 1));
            }
        }
        maps.push(IntMatrix::from_triplets(tb.len(), source.rank(j + 2), &trip)?);
    }
    let t = TruncMap { source, target, maps };
    verify_chain_map(&t)?;
    verify_kernel(&t)?;
    Ok(t)
}

fn verify_chain_map(t: &TruncMap) -> Result<()> {
    let d = t.degree() as usize;
    for j in 1..=d {
        let left = t.maps[j - 1].mul(t.source.map(j + 2))?;
        let right = t.target.map(j).mul(&t.maps[j])?;
        if left != right {
            return Err(Error::Invariant(format!("trunc does not commute with the boundary at grade {j}")));
        }
    }
    // Grades 0 and 1 of the source hold only norm-(d+2) cells.
    for n in 0..2usize.min(t.source.top() + 1) {
        if t.kernel_cells(n).len() != t.source.rank(n) {
            return Err(Error::Invariant(format!("source grade {n} has a cell surviving trunc")));
        }
    }
    Ok(())
}

fn verify_kernel(t: &TruncMap) -> Result<()> {
    let top = t.source.degree();
    for n in 1..=t.source.top() {
        let basis = t.source.basis(n);
        let lower = t.source.basis(n - 1);
        for (r, c, _) in t.source.map(n).triplets() {
            let (x, y) = (&basis[c], &lower[r]);
            if x.norm() == top && y.norm() != top {
                return Err(Error::Invariant(format!("kernel cell {x} has boundary term {y} outside the kernel")));
            }
        }
    }
    // Ranks add up: C_{j+2}(d+2) = C_j(d) ⊕ K_{j+2}.
    for j in 0..=t.degree() as usize {
        if t.source.rank(j + 2) != t.target.rank(j) + t.kernel_cells(j + 2).len() {
            return Err(Error::Invariant(format!("trunc is not surjective with the expected kernel at grade {j}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationRow {
    pub j: usize,
    /// `H_{j+2}` in degree `d+2`.
    pub upper: HomologyGroup,
    /// `H_j` in degree `d`.
    pub lower: HomologyGroup,
    pub isomorphic: bool,
    pub guaranteed: bool,
    /// Whether `trunc_*` itself is bijective; only filled in slow mode.
    pub induced_iso: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct StabilizationReport {
    pub family: String,
    pub d: u32,
    pub variant: Variant,
    /// `ψ_Θ(d+2)`.
    pub psi: i64,
    pub rows: Vec<StabilizationRow>,
}

impl StabilizationReport {
    /// Rows inside the guaranteed zone where the groups differ.
    pub fn violations(&self) -> Vec<&StabilizationRow> {
        self.rows
            .iter()
            .filter(|r| r.guaranteed && (!r.isomorphic || r.induced_iso == Some(false)))
            .collect()
    }

    pub fn zone_start(&self) -> i64 {
        self.psi - 1
    }
}

/// Compares `H_{j+2}(d+2)` with `H_j(d)` for `j` in `0..=d`. P-side groups
/// are reduced, B-side groups unreduced.
pub fn stability_report(family: &PosetFamily, d: u32, variant: Variant, induced: bool) -> Result<StabilizationReport> {
    let t = build_trunc(family, d, variant)?;
    let kind = kind_of(variant)?;
    let upper = family.realize(d + 2, kind)?;
    let psi = upper.psi()?;
    let hu = t.source.homology_all()?;
    let hl = t.target.homology_all()?;
    let mut rows = Vec::with_capacity(d as usize + 1);
    for j in 0..=d as usize {
        let isomorphic = hu[j + 2] == hl[j];
        let guaranteed = j as i64 >= psi - 1;
        let induced_iso = if induced { Some(trunc_is_iso(&t, j + 2)?) } else { None };
        rows.push(StabilizationRow { j, upper: hu[j + 2].clone(), lower: hl[j].clone(), isomorphic, guaranteed, induced_iso });
    }
    Ok(StabilizationReport { family: family.to_string(), d, variant, psi, rows })
}

fn dense_columns(m: &IntMatrix, cols: &[usize], rows: Option<&[usize]>) -> (Vec<Vec<BigInt>>, usize) {
    let row_ids: Vec<usize> = match rows {
        Some(r) => r.to_vec(),
        None => (0..m.nrows()).collect(),
    };
    let mut cpos = vec![usize::MAX; m.ncols()];
    for (k, &c) in cols.iter().enumerate() {
        cpos[c] = k;
    }
    let mut out = vec![vec![BigInt::zero(); cols.len()]; row_ids.len()];
    for (k, &r) in row_ids.iter().enumerate() {
        for &(c, v) in m.row(r) {
            if cpos[c as usize] != usize::MAX {
                out[k][cpos[c as usize]] = BigInt::from(v);
            }
        }
    }
    (out, row_ids.len())
}

/// Exact test that `trunc_*: H_n(d+2) -> H_{n-2}(d)` is bijective, using the
/// long exact sequence of `0 -> K -> C(d+2) -> C(d) -> 0`:
/// injective iff `Z_n(K) ⊆ B_n(C(d+2))`, surjective iff
/// `Z_{n-1}(K) ∩ B_{n-1}(C(d+2)) ⊆ B_{n-1}(K)`.
pub fn trunc_is_iso(t: &TruncMap, n: usize) -> Result<bool> {
    let src = &t.source;
    let top = src.degree();
    let kidx = |g: usize| -> Vec<usize> {
        src.basis(g).iter().enumerate().filter(|(_, c)| c.norm() == top).map(|(i, _)| i).collect()
    };
    let empty = IntMatrix::zeros(0, 0);
    let bd = |g: usize| -> &IntMatrix { if g >= 1 && g <= src.top() { src.map(g) } else { &empty } };

    // Injectivity.
    let kn = kidx(n);
    let kn1 = if n >= 1 { kidx(n - 1) } else { Vec::new() };
    let cycles = if kn.is_empty() {
        Vec::new()
    } else if n == 0 || bd(n).nrows() == 0 {
        (0..kn.len()).map(|i| (0..kn.len()).map(|k| BigInt::from((i == k) as i64)).collect()).collect()
    } else {
        let (a, r) = dense_columns(bd(n), &kn, None);
        kernel_basis(&a, r, kn.len())
    };
    if !cycles.is_empty() {
        let up = bd(n + 1);
        let s = if up.nrows() == 0 {
            smith_with_transforms(&IntMatrix::zeros(src.rank(n), 0))
        } else {
            smith_with_transforms(up)
        };
        for z in &cycles {
            let mut v = vec![BigInt::zero(); src.rank(n)];
            for (k, &i) in kn.iter().enumerate() {
                v[i] = z[k].clone();
            }
            if !in_image(&s, &v) {
                return Ok(false);
            }
        }
    }

    // Surjectivity.
    if n == 0 || src.rank(n) == 0 || kn1.is_empty() {
        return Ok(true);
    }
    let m = bd(n);
    let keep: Vec<usize> = (0..src.rank(n - 1)).filter(|r| kn1.binary_search(r).is_err()).collect();
    let all_cols: Vec<usize> = (0..src.rank(n)).collect();
    let (proj, pr) = dense_columns(m, &all_cols, Some(&keep));
    let lifts = if pr == 0 {
        (0..all_cols.len()).map(|i| (0..all_cols.len()).map(|k| BigInt::from((i == k) as i64)).collect()).collect()
    } else {
        kernel_basis(&proj, pr, all_cols.len())
    };
    let (kmat, kr) = dense_columns(m, &kn, Some(&kn1));
    let ks = smith_normal_form(&kmat, kr, kn.len());
    for y in lifts {
        let z: Vec<BigInt> = kn1
            .iter()
            .map(|&r| {
                m.row(r).iter().fold(BigInt::zero(), |acc, &(c, v)| acc + &y[c as usize] * BigInt::from(v))
            })
            .collect();
        if z.iter().all(|x| x.is_zero()) {
            continue;
        }
        if !in_image(&ks, &z) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ψ_Θ(d)`, cross-checked against the largest `(d + |x| - 2|x|')/2` over
/// all members.
pub fn dim_k(family: &PosetFamily, d: u32, kind: Kind) -> Result<i64> {
    let r = family.realize(d, kind)?;
    let psi = r.psi()?;
    let direct = r
        .cells()
        .iter()
        .map(|x| (d as i64 + x.norm() as i64 - 2 * x.reduced_norm() as i64) / 2)
        .max()
        .ok_or_else(|| Error::Argument("empty family".into()))?;
    if psi != direct {
        return Err(Error::Invariant(format!("psi {psi} disagrees with direct maximum {direct}")));
    }
    Ok(psi)
}

/// For `j + 1 >= ψ_Θ(d+2)`, the degree-`(d+2)` realization has no
/// norm-`(d+2)` cell of dimension `j+2`.
pub fn kernel_vanishes_above_psi(family: &PosetFamily, d: u32, kind: Kind) -> Result<bool> {
    let r = family.realize(d + 2, kind)?;
    let psi = r.psi()?;
    Ok(r.cells()
        .iter()
        .filter(|c| c.norm() == d + 2)
        .all(|c| (c.dimension(d + 2) as i64) <= psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::parse_marked;

    #[test]
    fn trunc_full_degree_three() {
        let t = build_trunc(&PosetFamily::Full, 3, Variant::Proj).unwrap();
        assert_eq!(t.maps.len(), 4);
        // Identity on a surviving cell.
        let c = parse_marked("1,2").unwrap();
        let j = c.dimension(3) as usize;
        let col = t.source.basis(j + 2).binary_search(&c).unwrap();
        let row = t.target.basis(j).binary_search(&c).unwrap();
        assert_eq!(t.maps[j].get(row, col), 1);
    }

    #[test]
    fn kernel_is_top_norm() {
        let t = build_trunc(&PosetFamily::Full, 2, Variant::Poly).unwrap();
        let total: usize = (0..=4).map(|n| t.kernel_cells(n).len()).sum();
        assert_eq!(total, crate::combinatorics::compositions_of(4).len());
    }

    #[test]
    fn dim_k_values() {
        for d in 3..9 {
            assert_eq!(dim_k(&PosetFamily::MaxGe(3), d, Kind::Projective).unwrap(), d as i64 - 2);
            assert_eq!(dim_k(&PosetFamily::Full, d, Kind::Projective).unwrap(), d as i64);
        }
        let s = PosetFamily::Single(parse_marked("3,3").unwrap());
        assert_eq!(dim_k(&s, 8, Kind::Projective).unwrap(), 3);
    }

    #[test]
    fn triple_root_report() {
        let r = stability_report(&PosetFamily::MaxGe(3), 6, Variant::Proj, true).unwrap();
        assert_eq!(r.zone_start(), 5);
        assert!(r.violations().is_empty());
        for row in r.rows.iter().filter(|r| r.guaranteed) {
            assert_eq!(row.induced_iso, Some(true));
        }
    }

    #[test]
    fn skeleton_fails_below_zone() {
        let r = stability_report(&PosetFamily::Skeleton(2), 6, Variant::Proj, false).unwrap();
        assert!(r.violations().is_empty());
        assert!(!r.rows[4].isomorphic);
        assert!(!r.rows[4].guaranteed);
    }
}
