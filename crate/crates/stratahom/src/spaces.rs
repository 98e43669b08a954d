//! Homology of the realized spaces and of their complements.
//!
//! `B` is the projective space of binary forms of degree `d`, `B^Θ` the
//! closed union of cells in `Θ`. `P̄` is the one-point compactification of
//! monic real polynomials, a `d`-sphere; `P̄^Θ` includes the point at
//! infinity. Complements are handled by duality: Alexander duality in the
//! sphere, and Poincaré–Lefschetz duality in `RP^d`, whose orientation
//! sheaf is nontrivial for even `d`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::chain_complex::{ChainComplex, Coefficients, Variant};
use crate::combinatorics::{enumerate_cells, Kind};
use crate::error::{Error, Result};
use crate::integer_linalg::HomologyGroup;
use crate::posets::{PosetFamily, PosetRealization};

/// What a [`HomologyProfile`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    /// `H_*(B^Θ; Z)`.
    Projective,
    /// `H̃_*(P̄^Θ; Z)`.
    PolynomialCompactified,
    /// `H^*(P^{cΘ}; Z)`, the complement of the family among polynomials.
    PolynomialComplement,
    /// `H^*(B^{cΘ}; Z)`.
    ProjectiveComplement,
    /// `H_*(B^{cΘ}; Z^t)` with the orientation sheaf of `RP^d`.
    ProjectiveComplementTwisted,
    /// `H_*(B, B^Θ; Z)`.
    Relative,
    /// `H^*(B, B^Θ; Z)`.
    RelativeCohomology,
}

impl Space {
    pub fn tag(&self) -> &'static str {
        match self {
            Space::Projective => "B",
            Space::PolynomialCompactified => "P",
            Space::PolynomialComplement => "cP",
            Space::ProjectiveComplement => "cB",
            Space::ProjectiveComplementTwisted => "cB-twisted",
            Space::Relative => "B,B^T",
            Space::RelativeCohomology => "B,B^T-cohomology",
        }
    }

    pub fn is_cohomology(&self) -> bool {
        matches!(
            self,
            Space::PolynomialComplement | Space::ProjectiveComplement | Space::RelativeCohomology
        )
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Groups in degrees `0..=d` for one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    pub space: Space,
    pub degree: u32,
    pub family: String,
    pub reduced: bool,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyProfile {
    pub fn get(&self, j: usize) -> HomologyGroup {
        self.groups.get(j).cloned().unwrap_or_default()
    }

    /// Drops one free summand from degree 0 of a nonempty space.
    pub fn to_reduced(&self) -> HomologyProfile {
        let mut out = self.clone();
        if !self.reduced {
            if let Some(g) = out.groups.first_mut() {
                if g.rank > 0 {
                    g.rank -= 1;
                }
            }
            out.reduced = true;
        }
        out
    }

    /// Degrees with a nonzero group.
    pub fn support(&self) -> Vec<usize> {
        (0..self.groups.len()).filter(|&j| !self.groups[j].is_zero()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.iter().all(|g| g.is_zero())
    }

    /// `{"space", "d", "family", "reduced", "groups": [{"degree", "rank", "torsion"}]}`.
    /// Torsion coefficients that do not fit in `u64` are written as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let groups: Vec<serde_json::Value> = self
            .groups
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let torsion: Vec<serde_json::Value> = g
                    .torsion
                    .iter()
                    .map(|t| match u64::try_from(t) {
                        Ok(v) => serde_json::Value::from(v),
                        Err(_) => serde_json::Value::from(t.to_string()),
                    })
                    .collect();
                serde_json::json!({ "degree": j, "rank": g.rank, "torsion": torsion })
            })
            .collect();
        serde_json::json!({
            "space": self.space.tag(),
            "d": self.degree,
            "family": self.family,
            "reduced": self.reduced,
            "groups": groups,
        })
    }
}

fn profile(space: Space, d: u32, family: &PosetFamily, reduced: bool, groups: Vec<HomologyGroup>) -> HomologyProfile {
    HomologyProfile { space, degree: d, family: family.to_string(), reduced, groups }
}

/// Unreduced `H_*(B_d^Θ; Z)`.
pub fn homology_b(d: u32, family: &PosetFamily) -> Result<HomologyProfile> {
    let r = family.realize(d, Kind::Projective)?;
    homology_b_of(&r, family)
}

pub fn homology_b_of(r: &PosetRealization, family: &PosetFamily) -> Result<HomologyProfile> {
    let cx = ChainComplex::build(r, Variant::Proj)?;
    Ok(profile(Space::Projective, r.degree(), family, false, cx.homology_all()?))
}

/// Reduced `H̃_*(B_d^Θ; Z)`.
pub fn reduced_homology_b(d: u32, family: &PosetFamily) -> Result<HomologyProfile> {
    Ok(homology_b(d, family)?.to_reduced())
}

/// `H̃_*(P̄_d^Θ; Z)`; the point at infinity is the basepoint.
pub fn reduced_homology_p(d: u32, family: &PosetFamily) -> Result<HomologyProfile> {
    let r = family.realize(d, Kind::Polynomial)?;
    reduced_homology_p_of(&r, family)
}

pub fn reduced_homology_p_of(r: &PosetRealization, family: &PosetFamily) -> Result<HomologyProfile> {
    let cx = ChainComplex::build(r, Variant::Poly)?;
    Ok(profile(Space::PolynomialCompactified, r.degree(), family, true, cx.homology_all()?))
}

/// `H^*(P_d^{cΘ}; Z)` by Alexander duality in the sphere `P̄_d`.
///
/// `H̃^j` of the complement is `H̃_{d-j-1}(P̄^Θ)`; the free summand in degree
/// 0 is added back unless the complement is empty.
pub fn cohomology_p_complement(d: u32, family: &PosetFamily) -> Result<HomologyProfile> {
    let r = family.realize(d, Kind::Polynomial)?;
    let h = reduced_homology_p_of(&r, family)?;
    let mut groups = vec![HomologyGroup::zero(); d as usize + 1];
    if r.is_full() {
        return Ok(profile(Space::PolynomialComplement, d, family, false, groups));
    }
    for (j, g) in groups.iter_mut().enumerate().take(d as usize) {
        *g = h.get(d as usize - j - 1);
    }
    groups[0].rank += 1;
    Ok(profile(Space::PolynomialComplement, d, family, false, groups))
}

/// `H_*(B, B^Θ; Z)` from the quotient complex.
pub fn relative_homology_b(d: u32, family: &PosetFamily) -> Result<HomologyProfile> {
    let r = family.realize(d, Kind::Projective)?;
    let cx = ChainComplex::build(&r, Variant::Quotient)?;
    Ok(profile(Space::Relative, d, family, false, cx.homology_all()?))
}

/// `H^*(B, B^Θ; Z)` from the dual of the quotient complex.
///
/// This is what a duality statement without the orientation twist would
/// give for the complement; kept as a diagnostic.
pub fn relative_cohomology_b(d: u32, family: &PosetFamily) -> Result<HomologyProfile> {
    let r = family.realize(d, Kind::Projective)?;
    let cx = ChainComplex::build(&r, Variant::Quotient)?.dualize();
    Ok(profile(Space::RelativeCohomology, d, family, false, cx.homology_all()?))
}

/// `H^*(B_d^{cΘ}; Z)`: `H^j` is `H_{d-j}(B, B^Θ; Z^t)`.
pub fn cohomology_b_complement(d: u32, family: &PosetFamily) -> Result<HomologyProfile> {
    let r = family.realize(d, Kind::Projective)?;
    let cx = ChainComplex::build_with(&r, Variant::Quotient, Coefficients::Orientation)?;
    let h = cx.homology_all()?;
    let groups = (0..=d as usize).map(|j| h[d as usize - j].clone()).collect();
    Ok(profile(Space::ProjectiveComplement, d, family, false, groups))
}

/// `H_*(B_d^{cΘ}; Z^t)`: `H_j` is `H^{d-j}(B, B^Θ; Z)`.
pub fn twisted_homology_b_complement(d: u32, family: &PosetFamily) -> Result<HomologyProfile> {
    let h = relative_cohomology_b(d, family)?;
    let groups = (0..=d as usize).map(|j| h.get(d as usize - j)).collect();
    Ok(profile(Space::ProjectiveComplementTwisted, d, family, false, groups))
}

/// Closed form for `H̃_*(B_d^{DISC}; Z)`, `d >= 2`.
pub fn discriminant_oracle(d: u32) -> Result<HomologyProfile> {
    if d < 2 {
        return Err(Error::Argument(format!("discriminant closed form needs d >= 2, got {d}")));
    }
    let du = d as usize;
    let mut g = vec![HomologyGroup::zero(); du + 1];
    let z2 = |n: usize| HomologyGroup::new(0, vec![BigInt::from(2); n]);
    if d % 2 == 1 {
        g[du - 1] = HomologyGroup::free((du - 1) / 2);
        g[du - 2] = HomologyGroup::free((du + 1) / 2);
        let mut j = du as i64 - 4;
        while j >= 1 {
            g[j as usize] = z2(1);
            j -= 2;
        }
    } else {
        g[du - 1] = HomologyGroup::free(1);
        g[du - 2] = z2(du / 2 - 1);
        let mut j = du as i64 - 3;
        while j >= 1 {
            g[j as usize] = z2(1);
            j -= 2;
        }
    }
    Ok(HomologyProfile {
        space: Space::Projective,
        degree: d,
        family: PosetFamily::Disc.to_string(),
        reduced: true,
        groups: g,
    })
}

/// Cell counts by dimension: `coefficients[j]` is the number of `j`-cells.
///
/// For the polynomial kind the point at infinity is counted in dimension 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountPolynomial {
    pub coefficients: Vec<u64>,
}

impl CountPolynomial {
    pub fn eval(&self, t: i64) -> i64 {
        self.coefficients.iter().rev().fold(0i64, |acc, &c| acc * t + c as i64)
    }

    pub fn coefficient(&self, j: usize) -> u64 {
        self.coefficients.get(j).copied().unwrap_or(0)
    }
}

impl fmt::Display for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 if *c == 1 => "t".to_string(),
                1 => format!("{c}t"),
                _ if *c == 1 => format!("t^{j}"),
                _ => format!("{c}t^{j}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

pub fn cell_counts(d: u32, kind: Kind) -> CountPolynomial {
    let mut c = vec![0u64; d as usize + 1];
    for x in enumerate_cells(d, kind) {
        c[x.dimension(d) as usize] += 1;
    }
    if kind == Kind::Polynomial {
        c[0] += 1;
    }
    CountPolynomial { coefficients: c }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(p: &HomologyProfile) -> Vec<String> {
        p.groups.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn projective_spaces() {
        for d in 1..8u32 {
            let h = homology_b(d, &PosetFamily::Full).unwrap();
            for j in 0..=d as usize {
                let want = if j == 0 {
                    HomologyGroup::free(1)
                } else if j == d as usize && d % 2 == 1 {
                    HomologyGroup::free(1)
                } else if j % 2 == 1 {
                    HomologyGroup::with_torsion(0, &[2])
                } else {
                    HomologyGroup::zero()
                };
                assert_eq!(h.get(j), want, "RP^{d} H_{j}");
            }
        }
    }

    #[test]
    fn complement_of_nothing_is_projective_space() {
        for d in 1..7u32 {
            let c = cohomology_b_complement(d, &PosetFamily::Empty).unwrap();
            let h = homology_b(d, &PosetFamily::Full).unwrap();
            // Universal coefficients: H^j = free(H_j) ⊕ torsion(H_{j-1}).
            for j in 0..=d as usize {
                let tors = if j > 0 { h.get(j - 1).torsion } else { vec![] };
                assert_eq!(c.get(j), HomologyGroup::new(h.get(j).rank, tors), "d={d} j={j}");
            }
        }
    }

    #[test]
    fn triple_root_small_degrees() {
        let h = reduced_homology_b(3, &PosetFamily::MaxGe(3)).unwrap();
        assert_eq!(render(&h), vec!["0", "Z", "0", "0"]);
        let h = reduced_homology_b(5, &PosetFamily::MaxGe(3)).unwrap();
        assert_eq!(render(&h)[1..4], ["Z ⊕ Z/2", "Z/2", "0"]);
    }

    #[test]
    fn polynomial_complement_of_nothing() {
        let c = cohomology_p_complement(4, &PosetFamily::Empty).unwrap();
        assert_eq!(render(&c), vec!["Z", "0", "0", "0", "0"]);
        let c = cohomology_p_complement(4, &PosetFamily::Full).unwrap();
        assert!(c.is_trivial());
    }

    #[test]
    fn oracle_shape() {
        let o = discriminant_oracle(3).unwrap();
        assert_eq!(render(&o), vec!["0", "Z^2", "Z", "0"]);
        let o = discriminant_oracle(4).unwrap();
        assert_eq!(render(&o), vec!["0", "Z/2", "Z/2", "Z", "0"]);
    }

    #[test]
    fn count_polynomials() {
        assert_eq!(cell_counts(2, Kind::Projective).coefficients, vec![1, 2, 2]);
        assert_eq!(cell_counts(3, Kind::Polynomial).coefficients, vec![1, 1, 2, 2]);
        assert_eq!(cell_counts(3, Kind::Polynomial).to_string(), "1 + t + 2t^2 + 2t^3");
        assert_eq!(cell_counts(4, Kind::Projective).eval(-1), 1);
    }
}
