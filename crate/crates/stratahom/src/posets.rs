//! Closed families of patterns, their realizations in a fixed degree, and
//! the numeric invariants used by the stabilization bound.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_cells, parse_marked, Kind, MarkedComposition};
use crate::error::{Error, Result};

/// A degree-independent description of a closed family of patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PosetFamily {
    /// Every cell; the whole space.
    Full,
    /// No cells.
    Empty,
    /// Patterns of full norm: all roots real (or at infinity).
    AllReal,
    /// Patterns with a real multiple root: a part or mark at least 2.
    Disc,
    /// Patterns with a part (or mark) at least `k`.
    MaxGe(u32),
    /// Cells of codimension at least `q`.
    Skeleton(u32),
    /// Closure of a single pattern.
    Single(MarkedComposition),
    /// Closure of a set of patterns.
    Generated(Vec<MarkedComposition>),
}

impl PosetFamily {
    /// Parses `full`, `empty`, `all-real`, `disc`, `max-ge:3`, `skeleton:2`,
    /// `single:1,2,1` or `gen:(2,2);(4)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let (head, arg) = match t.split_once(':') {
            Some((h, a)) => (h.trim().to_ascii_lowercase(), Some(a.trim())),
            None => (t.to_ascii_lowercase(), None),
        };
        let int_arg = |name: &str| -> Result<u32> {
            arg.ok_or_else(|| Error::Parse(format!("{name} needs an integer argument")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer in family {text:?}")))
        };
        match head.as_str() {
            "full" => Ok(PosetFamily::Full),
            "empty" => Ok(PosetFamily::Empty),
            "all-real" | "allreal" => Ok(PosetFamily::AllReal),
            "disc" => Ok(PosetFamily::Disc),
            "max-ge" | "maxge" => Ok(PosetFamily::MaxGe(int_arg("max-ge")?)),
            "skeleton" => Ok(PosetFamily::Skeleton(int_arg("skeleton")?)),
            "single" => {
                let a = arg.ok_or_else(|| Error::Parse("single needs a pattern".into()))?;
                Ok(PosetFamily::Single(parse_marked(a)?))
            }
            "gen" => {
                let a = arg.ok_or_else(|| Error::Parse("gen needs patterns".into()))?;
                let gens = a
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(parse_marked)
                    .collect::<Result<Vec<_>>>()?;
                Ok(PosetFamily::Generated(gens))
            }
            _ => Err(Error::Parse(format!("unknown family {text:?}"))),
        }
    }

    /// The finite realization in degree `d`.
    pub fn realize(&self, d: u32, kind: Kind) -> Result<PosetRealization> {
        let all = || enumerate_cells(d, kind);
        let cells: Vec<MarkedComposition> = match self {
            PosetFamily::Full => all(),
            PosetFamily::Empty => Vec::new(),
            PosetFamily::AllReal => all().into_iter().filter(|c| c.norm() == d).collect(),
            PosetFamily::Disc => return PosetFamily::MaxGe(2).realize(d, kind),
            PosetFamily::MaxGe(k) => all()
                .into_iter()
                .filter(|c| c.parts().iter().any(|p| p >= k) || c.kappa >= *k)
                .collect(),
            PosetFamily::Skeleton(q) => {
                all().into_iter().filter(|c| c.reduced_norm() >= *q).collect()
            }
            PosetFamily::Single(g) => return close(std::slice::from_ref(g), d, kind),
            PosetFamily::Generated(gs) => return close(gs, d, kind),
        };
        PosetRealization::from_sorted(kind, d, cells)
    }

    /// Like [`realize`](Self::realize), but reads and writes a JSON cache
    /// under `dir` when given. Cache entries that fail validation are rebuilt.
    pub fn realize_cached(&self, d: u32, kind: Kind, dir: Option<&Path>) -> Result<PosetRealization> {
        let Some(dir) = dir else {
            return self.realize(d, kind);
        };
        let file = dir.join(cache_file_name(&self.to_string(), d, kind));
        if let Ok(bytes) = std::fs::read(&file) {
            if let Ok(entry) = serde_json::from_slice::<CacheEntry>(&bytes) {
                if entry.family == self.to_string() && entry.degree == d && entry.kind == kind {
                    if let Ok(r) = PosetRealization::from_cells(kind, d, entry.cells) {
                        if r.is_closed() {
                            return Ok(r);
                        }
                    }
                }
            }
        }
        let r = self.realize(d, kind)?;
        std::fs::create_dir_all(dir)?;
        let entry = CacheEntry { family: self.to_string(), degree: d, kind, cells: r.cells.clone() };
        let json = serde_json::to_vec(&entry).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(&file, json)?;
        Ok(r)
    }
}

impl fmt::Display for PosetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetFamily::Full => f.write_str("full"),
            PosetFamily::Empty => f.write_str("empty"),
            PosetFamily::AllReal => f.write_str("all-real"),
            PosetFamily::Disc => f.write_str("disc"),
            PosetFamily::MaxGe(k) => write!(f, "max-ge:{k}"),
            PosetFamily::Skeleton(q) => write!(f, "skeleton:{q}"),
            PosetFamily::Single(g) => write!(f, "single:{g}"),
            PosetFamily::Generated(gs) => {
                let s: Vec<String> = gs.iter().map(|g| format!("({g})")).collect();
                write!(f, "gen:{}", s.join(";"))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    family: String,
    degree: u32,
    kind: Kind,
    cells: Vec<MarkedComposition>,
}

fn cache_file_name(family: &str, d: u32, kind: Kind) -> String {
    let safe: String = family
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    let k = match kind {
        Kind::Polynomial => "P",
        Kind::Projective => "B",
    };
    format!("{safe}-{k}-{d}.json")
}

/// A closed set of cells in a fixed degree, sorted in canonical order.
#[derive(Debug, Clone)]
pub struct PosetRealization {
    kind: Kind,
    degree: u32,
    cells: Vec<MarkedComposition>,
    index: HashMap<MarkedComposition, usize>,
}

impl PosetRealization {
    fn from_sorted(kind: Kind, degree: u32, cells: Vec<MarkedComposition>) -> Result<Self> {
        let index = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(PosetRealization { kind, degree, cells, index })
    }

    /// Builds a realization from arbitrary cells; checks realizability but
    /// not closedness.
    pub fn from_cells(kind: Kind, degree: u32, mut cells: Vec<MarkedComposition>) -> Result<Self> {
        for c in &cells {
            check_pattern(c, degree, kind)?;
        }
        cells.sort();
        cells.dedup();
        Self::from_sorted(kind, degree, cells)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn cells(&self) -> &[MarkedComposition] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &MarkedComposition) -> bool {
        self.index.contains_key(c)
    }

    pub fn is_closed(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.successors(self.kind, self.degree).iter().all(|s| self.contains(s)))
    }

    /// Every cell of the ambient space not in this family, sorted.
    pub fn complement(&self) -> Vec<MarkedComposition> {
        enumerate_cells(self.degree, self.kind)
            .into_iter()
            .filter(|c| !self.contains(c))
            .collect()
    }

    /// True iff the family is every cell of the ambient space.
    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    /// Members that are not a one-step image of another member.
    pub fn maximal_elements(&self) -> Vec<MarkedComposition> {
        let mut covered = HashSet::new();
        for c in &self.cells {
            for s in c.successors(self.kind, self.degree) {
                covered.insert(s);
            }
        }
        self.cells.iter().filter(|c| !covered.contains(*c)).cloned().collect()
    }

    /// `max(|x| - 2|x|')` over maximal elements.
    pub fn eta(&self) -> Result<i64> {
        self.maximal_elements()
            .iter()
            .map(|c| c.norm() as i64 - 2 * c.reduced_norm() as i64)
            .max()
            .ok_or_else(|| Error::Argument("eta of an empty family".into()))
    }

    /// `(d + η)/2`, i.e. the largest `d - |x|' - (d - |x|)/2` over maximal elements.
    pub fn psi(&self) -> Result<i64> {
        let e = self.eta()?;
        Ok((self.degree as i64 + e) / 2)
    }
}

fn check_pattern(c: &MarkedComposition, d: u32, kind: Kind) -> Result<()> {
    if kind == Kind::Polynomial && c.kappa != 0 {
        return Err(Error::Argument(format!("polynomial pattern {c} cannot carry a mark")));
    }
    if !c.is_realizable(d) {
        return Err(Error::Argument(format!(
            "pattern {c} (norm {}) has no cell in degree {d}",
            c.norm()
        )));
    }
    Ok(())
}

/// Smallest closed family in degree `d` containing the generators.
pub fn close(generators: &[MarkedComposition], d: u32, kind: Kind) -> Result<PosetRealization> {
    let mut seen: HashSet<MarkedComposition> = HashSet::new();
    let mut queue = VecDeque::new();
    for g in generators {
        check_pattern(g, d, kind)?;
        if seen.insert(g.clone()) {
            queue.push_back(g.clone());
        }
    }
    while let Some(c) = queue.pop_front() {
        for s in c.successors(kind, d) {
            if !seen.contains(&s) {
                seen.insert(s.clone());
                queue.push_back(s);
            }
        }
    }
    let mut cells: Vec<_> = seen.into_iter().collect();
    cells.sort();
    PosetRealization::from_sorted(kind, d, cells)
}

pub fn is_closed(cells: &[MarkedComposition], d: u32, kind: Kind) -> bool {
    match PosetRealization::from_cells(kind, d, cells.to_vec()) {
        Ok(r) => r.is_closed(),
        Err(_) => false,
    }
}

/// `a ≼ b`: `a` is reachable from `b` by merges and inserts within degree `d`.
pub fn precedes(a: &MarkedComposition, b: &MarkedComposition, d: u32, kind: Kind) -> bool {
    if !a.is_realizable(d) || !b.is_realizable(d) {
        return false;
    }
    // Every move raises the reduced norm by exactly one and never lowers the norm.
    if a.reduced_norm() < b.reduced_norm() || a.norm() < b.norm() {
        return false;
    }
    let steps = a.reduced_norm() - b.reduced_norm();
    let mut frontier: HashSet<MarkedComposition> = HashSet::from([b.clone()]);
    for _ in 0..steps {
        let mut next = HashSet::new();
        for c in &frontier {
            for s in c.successors(kind, d) {
                if s.norm() <= a.norm() {
                    next.insert(s);
                }
            }
        }
        frontier = next;
    }
    frontier.contains(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::parse_marked;

    fn p(s: &str) -> MarkedComposition {
        parse_marked(s).unwrap()
    }

    #[test]
    fn parse_families() {
        assert_eq!(PosetFamily::parse("max-ge:3").unwrap(), PosetFamily::MaxGe(3));
        assert_eq!(PosetFamily::parse("skeleton:2").unwrap(), PosetFamily::Skeleton(2));
        assert_eq!(PosetFamily::parse("single:1,2,1").unwrap(), PosetFamily::Single(p("1,2,1")));
        assert_eq!(
            PosetFamily::parse("gen:(2,2);(4)").unwrap(),
            PosetFamily::Generated(vec![p("2,2"), p("4")])
        );
        assert!(PosetFamily::parse("bogus").is_err());
        assert!(PosetFamily::parse("max-ge").is_err());
        for s in ["full", "disc", "max-ge:3", "single:1,2|1", "gen:(2,2);(4)"] {
            let f = PosetFamily::parse(s).unwrap();
            assert_eq!(PosetFamily::parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn closure_of_triple_root_in_degree_four() {
        let r = PosetFamily::MaxGe(3).realize(4, Kind::Projective).unwrap();
        let expected: Vec<_> =
            ["()|4", "1|3", "3|1", "1,3", "3,1", "4"].iter().map(|s| p(s)).collect();
        let mut e = expected.clone();
        e.sort();
        assert_eq!(r.cells(), &e[..]);
        assert!(r.is_closed());
    }

    #[test]
    fn single_closure_matches_generated() {
        let a = PosetFamily::Single(p("1,2,1")).realize(6, Kind::Polynomial).unwrap();
        let b = close(&[p("1,2,1")], 6, Kind::Polynomial).unwrap();
        assert_eq!(a.cells(), b.cells());
        assert!(a.contains(&p("3,1")));
        assert!(a.contains(&p("1,2,1,2")));
        assert!(a.contains(&p("4")));
        assert!(!a.contains(&p("1,1")));
    }

    #[test]
    fn parity_and_mark_errors() {
        assert!(PosetFamily::Single(p("1,2")).realize(4, Kind::Polynomial).is_err());
        assert!(PosetFamily::Single(p("1|1")).realize(4, Kind::Polynomial).is_err());
        assert!(PosetFamily::Single(p("1|1")).realize(4, Kind::Projective).is_ok());
    }

    #[test]
    fn precedence() {
        assert!(precedes(&p("4"), &p("1,2,1"), 4, Kind::Polynomial));
        assert!(precedes(&p("2,2"), &p("1,1"), 4, Kind::Polynomial));
        assert!(!precedes(&p("1,1"), &p("2,2"), 4, Kind::Polynomial));
        assert!(precedes(&p("()|3"), &p("1,1,1"), 3, Kind::Projective));
        assert!(!precedes(&p("()|3"), &p("1,1,1"), 3, Kind::Polynomial));
    }

    #[test]
    fn psi_values() {
        for d in 3..10u32 {
            let r = PosetFamily::MaxGe(3).realize(d, Kind::Projective).unwrap();
            assert_eq!(r.psi().unwrap(), d as i64 - 2);
            let r = PosetFamily::Skeleton(2).realize(d, Kind::Projective).unwrap();
            assert_eq!(r.psi().unwrap(), d as i64 - 2);
            let r = PosetFamily::Disc.realize(d, Kind::Projective).unwrap();
            assert_eq!(r.psi().unwrap(), d as i64 - 1);
            let r = PosetFamily::Full.realize(d, Kind::Projective).unwrap();
            assert_eq!(r.psi().unwrap(), d as i64);
        }
        let r = PosetFamily::Single(p("3,3")).realize(8, Kind::Projective).unwrap();
        assert_eq!(r.psi().unwrap(), 3);
        assert!(PosetFamily::Empty.realize(4, Kind::Projective).unwrap().psi().is_err());
    }

    #[test]
    fn maximal_elements_of_disc() {
        let r = PosetFamily::Disc.realize(3, Kind::Polynomial).unwrap();
        let mut m = r.maximal_elements();
        m.sort();
        assert_eq!(m, vec![p("1,2"), p("2,1")]);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("stratahom-cache-{}", std::process::id()));
        let f = PosetFamily::parse("gen:(2,2);(4)").unwrap();
        let a = f.realize_cached(8, Kind::Projective, Some(&dir)).unwrap();
        let b = f.realize_cached(8, Kind::Projective, Some(&dir)).unwrap();
        assert_eq!(a.cells(), b.cells());
        assert_eq!(a.cells(), f.realize(8, Kind::Projective).unwrap().cells());
        std::fs::remove_dir_all(&dir).ok();
    }
}
