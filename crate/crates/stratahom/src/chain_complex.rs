//! Cellular chain complexes of closed families, their quotients and duals.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::combinatorics::{enumerate_cells, Kind, MarkedComposition};
use crate::error::{Error, Result};
use crate::integer_linalg::{
    homology_from_invariants, smith_invariants, HomologyGroup, IntMatrix, SmithInvariants,
};
use crate::posets::PosetRealization;

/// A finite integer combination of patterns with no zero coefficients.
pub type FormalSum = BTreeMap<MarkedComposition, i64>;

fn add_term(sum: &mut FormalSum, key: MarkedComposition, coeff: i64) {
    use std::collections::btree_map::Entry;
    match sum.entry(key) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += coeff;
            if *e.get() == 0 {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            if coeff != 0 {
                e.insert(coeff);
            }
        }
    }
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check(x: &MarkedComposition, d: u32, kind: Kind) -> Result<()> {
    if kind == Kind::Polynomial && x.kappa != 0 {
        return Err(Error::Argument(format!("polynomial pattern {x} cannot carry a mark")));
    }
    if !x.is_realizable(d) {
        return Err(Error::Argument(format!("pattern {x} has no cell in degree {d}")));
    }
    Ok(())
}

/// Cellular boundary in the one-point compactified polynomial space.
///
/// Merges of adjacent roots, plus insertion of a new double root when the
/// norm leaves room for it. The point at infinity is not a cell, so the
/// complex computes reduced homology.
pub fn boundary_polynomial(w: &MarkedComposition, d: u32) -> Result<FormalSum> {
    check(w, d, Kind::Polynomial)?;
    let mut out = merges(w, Kind::Polynomial, false)?;
    for (k, c) in inserts(w, d, Kind::Polynomial)? {
        add_term(&mut out, k, c);
    }
    Ok(out)
}

/// Cellular boundary in the projectivized space of binary forms.
pub fn boundary_projective(x: &MarkedComposition, d: u32) -> Result<FormalSum> {
    check(x, d, Kind::Projective)?;
    projective_terms(x, d, false)
}

/// Boundary with coefficients in the orientation sheaf of `RP^d`.
///
/// For odd `d` the sheaf is trivial. For even `d` the term sending the
/// largest root to infinity picks up `(-1)^{ω_s}`: the cell's two lifts to
/// the sphere are swapped when an odd number of roots crosses infinity.
pub fn boundary_projective_twisted(x: &MarkedComposition, d: u32) -> Result<FormalSum> {
    check(x, d, Kind::Projective)?;
    projective_terms(x, d, d % 2 == 0)
}

fn projective_terms(x: &MarkedComposition, d: u32, twist: bool) -> Result<FormalSum> {
    let mut out = merges(x, Kind::Projective, twist)?;
    for (k, c) in inserts(x, d, Kind::Projective)? {
        add_term(&mut out, k, c);
    }
    Ok(out)
}

fn merges(x: &MarkedComposition, kind: Kind, twist: bool) -> Result<FormalSum> {
    let s = x.len();
    let mut out = FormalSum::new();
    match kind {
        Kind::Polynomial => {
            for k in 1..s {
                add_term(&mut out, x.merge(k)?, -sign(k));
            }
        }
        Kind::Projective if s > 0 => {
            for k in 0..=s {
                let mut c = -sign(k);
                if twist && k == s && x.parts()[s - 1] % 2 == 1 {
                    c = -c;
                }
                add_term(&mut out, x.merge_inf(k)?, c);
            }
        }
        Kind::Projective => {}
    }
    Ok(out)
}

fn inserts(x: &MarkedComposition, d: u32, kind: Kind) -> Result<FormalSum> {
    let mut out = FormalSum::new();
    if x.norm() < d {
        for k in 0..=x.len() {
            let y = match kind {
                Kind::Polynomial => x.insert(k)?,
                Kind::Projective => x.insert_inf(k)?,
            };
            add_term(&mut out, y, sign(k));
        }
    }
    Ok(out)
}

/// The merge part `∂_M` of the untwisted boundary.
pub fn merge_part(x: &MarkedComposition, d: u32, kind: Kind) -> Result<FormalSum> {
    check(x, d, kind)?;
    merges(x, kind, false)
}

/// The insert part `∂_I` of the boundary; zero on cells of norm `d`.
pub fn insert_part(x: &MarkedComposition, d: u32, kind: Kind) -> Result<FormalSum> {
    check(x, d, kind)?;
    inserts(x, d, kind)
}

/// Extends a map on patterns linearly to formal sums.
pub fn apply<F>(f: F, sum: &FormalSum) -> Result<FormalSum>
where
    F: Fn(&MarkedComposition) -> Result<FormalSum>,
{
    let mut out = FormalSum::new();
    for (x, &c) in sum {
        for (y, e) in f(x)? {
            add_term(&mut out, y, c * e);
        }
    }
    Ok(out)
}

/// Which complex to build from a closed family `Θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Cells of `Θ` in the polynomial space.
    Poly,
    /// Cells of `Θ` in the projective space.
    Proj,
    /// Cells of the projective space outside `Θ`, modulo `Θ`.
    Quotient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Integer,
    /// The orientation sheaf of the projective space; integral for
    /// polynomial complexes.
    Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `maps[j]: C_j -> C_{j-1}`.
    Chain,
    /// `maps[j]: C^j -> C^{j+1}`.
    Cochain,
}

/// A graded free complex indexed by cell dimension `0..=d`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    degree: u32,
    variant: Variant,
    coefficients: Coefficients,
    direction: Direction,
    bases: Vec<Vec<MarkedComposition>>,
    maps: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn build(p: &PosetRealization, variant: Variant) -> Result<Self> {
        Self::build_with(p, variant, Coefficients::Integer)
    }

    pub fn build_with(p: &PosetRealization, variant: Variant, coefficients: Coefficients) -> Result<Self> {
        let d = p.degree();
        let expected = match variant {
            Variant::Poly => Kind::Polynomial,
            Variant::Proj | Variant::Quotient => Kind::Projective,
        };
        if p.kind() != expected {
            return Err(Error::Argument(format!(
                "variant {variant:?} needs a {expected:?} family, got {:?}",
                p.kind()
            )));
        }
        let cells: Vec<MarkedComposition> = match variant {
            Variant::Quotient => enumerate_cells(d, expected)
                .into_iter()
                .filter(|c| !p.contains(c))
                .collect(),
            _ => p.cells().to_vec(),
        };
        let twist = coefficients == Coefficients::Orientation && expected == Kind::Projective;
        let mut bases: Vec<Vec<MarkedComposition>> = vec![Vec::new(); d as usize + 1];
        for c in cells {
            bases[c.dimension(d) as usize].push(c);
        }
        let index: HashMap<&MarkedComposition, (usize, usize)> = bases
            .iter()
            .enumerate()
            .flat_map(|(j, b)| b.iter().enumerate().map(move |(i, c)| (c, (j, i))))
            .collect();
        let boundary = |c: &MarkedComposition| -> Result<FormalSum> {
            match expected {
                Kind::Polynomial => boundary_polynomial(c, d),
                Kind::Projective => projective_terms(c, d, twist && d % 2 == 0),
            }
        };
        let mut maps = Vec::with_capacity(d as usize + 1);
        maps.push(IntMatrix::zeros(0, bases[0].len()));
        for j in 1..=d as usize {
            let mut triplets = Vec::new();
            for (col, c) in bases[j].iter().enumerate() {
                for (t, v) in boundary(c)? {
                    match index.get(&t) {
                        Some(&(tj, row)) if tj == j - 1 => triplets.push((row, col, v)),
                        Some(_) => {
                            return Err(Error::Invariant(format!(
                                "boundary of {c} hits {t} outside the adjacent grade"
                            )))
                        }
                        None if variant == Variant::Quotient && p.contains(&t) => {}
                        None => {
                            return Err(Error::Invariant(format!(
                                "boundary of {c} leaves the family at {t}"
                            )))
                        }
                    }
                }
            }
            maps.push(IntMatrix::from_triplets(bases[j - 1].len(), bases[j].len(), &triplets)?);
        }
        let cx = ChainComplex {
            degree: d,
            variant,
            coefficients,
            direction: Direction::Chain,
            bases,
            maps,
        };
        cx.verify_square_zero()?;
        Ok(cx)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn basis(&self, j: usize) -> &[MarkedComposition] {
        self.bases.get(j).map_or(&[], |b| b.as_slice())
    }

    pub fn rank(&self, j: usize) -> usize {
        self.basis(j).len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.len()).collect()
    }

    /// The map leaving grade `j`.
    pub fn map(&self, j: usize) -> &IntMatrix {
        &self.maps[j]
    }

    pub fn top(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.bases.iter().enumerate().map(|(j, b)| sign(j) * b.len() as i64).sum()
    }

    fn incoming_index(&self, j: usize) -> Option<usize> {
        match self.direction {
            Direction::Chain => (j < self.top()).then_some(j + 1),
            Direction::Cochain => j.checked_sub(1),
        }
    }

    /// Every composite of consecutive maps vanishes.
    pub fn verify_square_zero(&self) -> Result<()> {
        for j in 0..=self.top() {
            if let Some(i) = self.incoming_index(j) {
                let prod = self.maps[j].mul(&self.maps[i])?;
                if !prod.is_zero() {
                    return Err(Error::Invariant(format!("composite of maps into and out of grade {j} is nonzero")));
                }
            }
        }
        Ok(())
    }

    /// The cochain complex `Hom(C, Z)`, or back again.
    pub fn dualize(&self) -> ChainComplex {
        let top = self.top();
        let n = |j: usize| self.bases[j].len();
        let maps: Vec<IntMatrix> = match self.direction {
            Direction::Chain => (0..=top)
                .map(|j| if j < top { self.maps[j + 1].transpose() } else { IntMatrix::zeros(0, n(top)) })
                .collect(),
            Direction::Cochain => (0..=top)
                .map(|j| if j > 0 { self.maps[j - 1].transpose() } else { IntMatrix::zeros(0, n(0)) })
                .collect(),
        };
        ChainComplex {
            degree: self.degree,
            variant: self.variant,
            coefficients: self.coefficients,
            direction: match self.direction {
                Direction::Chain => Direction::Cochain,
                Direction::Cochain => Direction::Chain,
            },
            bases: self.bases.clone(),
            maps,
        }
    }

    /// Smith invariants of every map, computed in parallel.
    pub fn invariants(&self) -> Vec<SmithInvariants> {
        self.maps.par_iter().map(smith_invariants).collect()
    }

    pub fn homology(&self, j: usize) -> Result<HomologyGroup> {
        if j > self.top() {
            return Ok(HomologyGroup::zero());
        }
        let out = smith_invariants(&self.maps[j]);
        let inc = match self.incoming_index(j) {
            Some(i) => smith_invariants(&self.maps[i]),
            None => SmithInvariants::default(),
        };
        homology_from_invariants(self.rank(j), &out, &inc)
    }

    /// Homology (or cohomology, for a cochain complex) in every grade.
    pub fn homology_all(&self) -> Result<Vec<HomologyGroup>> {
        let inv = self.invariants();
        let empty = SmithInvariants::default();
        (0..=self.top())
            .map(|j| {
                let inc = self.incoming_index(j).map_or(&empty, |i| &inv[i]);
                homology_from_invariants(self.rank(j), &inv[j], inc)
            })
            .collect()
    }

    /// Text dump: one line `j: <target> <- <source> : coeff` per entry.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for j in 0..=self.top() {
            let target = match self.direction {
                Direction::Chain if j == 0 => continue,
                Direction::Chain => j - 1,
                Direction::Cochain if j == self.top() => continue,
                Direction::Cochain => j + 1,
            };
            for (r, c, v) in self.maps[j].triplets() {
                s.push_str(&format!("{j}: {} <- {} : {v}\n", self.bases[target][r], self.bases[j][c]));
            }
        }
        s
    }
}

impl PartialEq for ChainComplex {
    fn eq(&self, o: &Self) -> bool {
        self.degree == o.degree
            && self.variant == o.variant
            && self.coefficients == o.coefficients
            && self.direction == o.direction
            && self.bases == o.bases
            && self.maps == o.maps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::parse_marked;
    use crate::posets::PosetFamily;

    fn p(s: &str) -> MarkedComposition {
        parse_marked(s).unwrap()
    }

    fn sum(terms: &[(&str, i64)]) -> FormalSum {
        terms.iter().map(|(s, v)| (p(s), *v)).collect()
    }

    #[test]
    fn merge_and_insert_anticommute() {
        for kind in [Kind::Polynomial, Kind::Projective] {
            for d in 1..8 {
                for x in enumerate_cells(d, kind) {
                    let one: FormalSum = [(x.clone(), 1)].into_iter().collect();
                    let m = |y: &MarkedComposition| merge_part(y, d, kind);
                    let i = |y: &MarkedComposition| insert_part(y, d, kind);
                    assert!(apply(m, &apply(m, &one).unwrap()).unwrap().is_empty(), "dM^2 {x}");
                    assert!(apply(i, &apply(i, &one).unwrap()).unwrap().is_empty(), "dI^2 {x}");
                    let mut mix = apply(m, &apply(i, &one).unwrap()).unwrap();
                    for (y, c) in apply(i, &apply(m, &one).unwrap()).unwrap() {
                        add_term(&mut mix, y, c);
                    }
                    assert!(mix.is_empty(), "dM dI + dI dM at {x}, d = {d}");
                }
            }
        }
    }

    #[test]
    fn projective_boundary_rp2() {
        assert_eq!(boundary_projective(&p("()"), 2).unwrap(), sum(&[("2", 1)]));
        assert_eq!(boundary_projective(&p("1,1"), 2).unwrap(), sum(&[("1|1", -2), ("2", 1)]));
        assert_eq!(boundary_projective(&p("1|1"), 2).unwrap(), sum(&[]));
        assert_eq!(boundary_projective(&p("2"), 2).unwrap(), sum(&[]));
    }

    #[test]
    fn projective_boundary_cancels_single_part() {
        // Both ends of a lone double root go to the same point at infinity.
        assert_eq!(boundary_projective(&p("2|1"), 3).unwrap(), sum(&[]));
        assert_eq!(boundary_projective(&p("3"), 3).unwrap(), sum(&[]));
    }

    #[test]
    fn projective_boundary_general_case() {
        // The inserts after the first and second root coincide and cancel.
        let b = boundary_projective(&p("1,2|1"), 6).unwrap();
        assert_eq!(b, sum(&[("2|2", -1), ("3|1", 1), ("1|3", -1), ("2,1,2|1", 1)]));
    }

    #[test]
    fn polynomial_boundary_small() {
        assert_eq!(boundary_polynomial(&p("()"), 2).unwrap(), sum(&[("2", 1)]));
        assert_eq!(boundary_polynomial(&p("1,1"), 2).unwrap(), sum(&[("2", 1)]));
        assert_eq!(boundary_polynomial(&p("2"), 2).unwrap(), sum(&[]));
        assert!(boundary_polynomial(&p("1|1"), 2).is_err());
        assert!(boundary_polynomial(&p("1"), 2).is_err());
    }

    #[test]
    fn twisted_rp2() {
        assert_eq!(boundary_projective_twisted(&p("1,1"), 2).unwrap(), sum(&[("2", 1)]));
        assert_eq!(boundary_projective_twisted(&p("1|1"), 2).unwrap(), sum(&[("()|2", -2)]));
        assert_eq!(boundary_projective_twisted(&p("1,1|1"), 3).unwrap(), boundary_projective(&p("1,1|1"), 3).unwrap());
    }

    fn groups(cx: &ChainComplex) -> Vec<String> {
        cx.homology_all().unwrap().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn real_projective_plane() {
        let full = PosetFamily::Full.realize(2, Kind::Projective).unwrap();
        let cx = ChainComplex::build(&full, Variant::Proj).unwrap();
        assert_eq!(groups(&cx), vec!["Z", "Z/2", "0"]);
        let tw = ChainComplex::build_with(&full, Variant::Proj, Coefficients::Orientation).unwrap();
        assert_eq!(groups(&tw), vec!["Z/2", "0", "Z"]);
        assert_eq!(groups(&cx.dualize()), vec!["Z", "0", "Z/2"]);
    }

    #[test]
    fn sphere_from_polynomials() {
        for d in 1..7 {
            let full = PosetFamily::Full.realize(d, Kind::Polynomial).unwrap();
            let g = ChainComplex::build(&full, Variant::Poly).unwrap().homology_all().unwrap();
            for (j, h) in g.iter().enumerate() {
                let want = if j == d as usize { HomologyGroup::free(1) } else { HomologyGroup::zero() };
                assert_eq!(*h, want, "d={d} j={j}");
            }
        }
    }

    #[test]
    fn family_must_be_closed() {
        let r = PosetRealization::from_cells(Kind::Projective, 2, vec![p("1,1")]).unwrap();
        assert!(matches!(ChainComplex::build(&r, Variant::Proj), Err(Error::Invariant(_))));
        let q = PosetFamily::Full.realize(2, Kind::Polynomial).unwrap();
        assert!(ChainComplex::build(&q, Variant::Proj).is_err());
    }

    #[test]
    fn double_dual_and_dump() {
        let f = PosetFamily::MaxGe(3).realize(5, Kind::Projective).unwrap();
        let cx = ChainComplex::build(&f, Variant::Proj).unwrap();
        assert_eq!(cx.dualize().dualize(), cx);
        cx.dualize().verify_square_zero().unwrap();
        let d = ChainComplex::build(&PosetFamily::Full.realize(2, Kind::Projective).unwrap(), Variant::Proj)
            .unwrap()
            .dump();
        assert!(d.contains("2: 1|1 <- 1,1 : -2"));
        assert!(d.contains("2: 2 <- () : 1"));
    }
}
