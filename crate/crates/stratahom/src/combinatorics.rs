//! Compositions, marked compositions and the elementary merge/insert moves.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which family of cells a pattern lives in.
///
/// `Polynomial` patterns index cells of the one-point compactification of the
/// monic polynomials of degree `d`; their mark is always zero. `Projective`
/// patterns index cells of the projectivized binary forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Polynomial,
    Projective,
}

/// An ordered tuple of positive root multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Argument(format!("composition parts must be positive: {parts:?}")));
        }
        Ok(Composition(parts))
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `|ω| - ℓ`: the codimension contributed by the real roots.
    pub fn reduced_norm(&self) -> u32 {
        self.norm() - self.0.len() as u32
    }

    pub fn reversed(&self) -> Self {
        Composition(self.0.iter().rev().copied().collect())
    }

    /// Sum of parts `j` and `j+1` (1-based, `1 <= j <= len-1`).
    pub fn merge(&self, j: usize) -> Result<Self> {
        let l = self.len();
        if j == 0 || j >= l {
            return Err(Error::Argument(format!("merge index {j} out of range for length {l}")));
        }
        let mut parts = Vec::with_capacity(l - 1);
        parts.extend_from_slice(&self.0[..j - 1]);
        parts.push(self.0[j - 1] + self.0[j]);
        parts.extend_from_slice(&self.0[j + 1..]);
        Ok(Composition(parts))
    }

    /// Insert a part 2 after the first `j` parts (`0 <= j <= len`).
    pub fn insert(&self, j: usize) -> Result<Self> {
        let l = self.len();
        if j > l {
            return Err(Error::Argument(format!("insert index {j} out of range for length {l}")));
        }
        let mut parts = Vec::with_capacity(l + 1);
        parts.extend_from_slice(&self.0[..j]);
        parts.push(2);
        parts.extend_from_slice(&self.0[j..]);
        Ok(Composition(parts))
    }

    /// Paper-style compact form with exponents, e.g. `(1^2,2,1)`.
    pub fn compact(&self) -> String {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == p {
                run += 1;
            }
            if run > 1 {
                out.push(format!("{p}^{run}"));
            } else {
                out.push(p.to_string());
            }
            i += run;
        }
        format!("({})", out.join(","))
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm().cmp(&other.norm()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

/// A composition together with a count `κ` of roots at infinity.
///
/// Polynomial patterns are marked compositions with `κ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MarkedComposition {
    pub omega: Composition,
    pub kappa: u32,
}

impl MarkedComposition {
    pub fn new(omega: Composition, kappa: u32) -> Self {
        MarkedComposition { omega, kappa }
    }

    pub fn unmarked(omega: Composition) -> Self {
        MarkedComposition { omega, kappa: 0 }
    }

    pub fn from_parts(parts: &[u32], kappa: u32) -> Result<Self> {
        Ok(MarkedComposition::new(Composition::new(parts.to_vec())?, kappa))
    }

    pub fn parts(&self) -> &[u32] {
        self.omega.parts()
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn norm(&self) -> u32 {
        self.omega.norm() + self.kappa
    }

    pub fn reduced_norm(&self) -> u32 {
        self.omega.reduced_norm() + self.kappa
    }

    /// True iff the pattern indexes a nonempty cell in degree `d`.
    pub fn is_realizable(&self, d: u32) -> bool {
        let n = self.norm();
        n <= d && (d - n) % 2 == 0
    }

    /// Cell dimension in degree `d`; callers must check realizability.
    pub fn dimension(&self, d: u32) -> u32 {
        d - self.reduced_norm()
    }

    /// Polynomial merge of parts `j` and `j+1`; the mark is kept.
    pub fn merge(&self, j: usize) -> Result<Self> {
        Ok(MarkedComposition::new(self.omega.merge(j)?, self.kappa))
    }

    pub fn insert(&self, j: usize) -> Result<Self> {
        Ok(MarkedComposition::new(self.omega.insert(j)?, self.kappa))
    }

    /// Projective merge `M_j^∞`, `0 <= j <= len`.
    ///
    /// `j = 0` and `j = len` push the outermost part to infinity; the two
    /// coincide on a single part.
    pub fn merge_inf(&self, j: usize) -> Result<Self> {
        let l = self.len();
        if l == 0 || j > l {
            return Err(Error::Argument(format!(
                "projective merge index {j} out of range for length {l}"
            )));
        }
        let p = self.omega.parts();
        if j == 0 {
            Ok(MarkedComposition::new(Composition(p[1..].to_vec()), self.kappa + p[0]))
        } else if j == l {
            Ok(MarkedComposition::new(Composition(p[..l - 1].to_vec()), self.kappa + p[l - 1]))
        } else {
            self.merge(j)
        }
    }

    /// Projective insert `I_j^∞`; identical to the polynomial insert.
    pub fn insert_inf(&self, j: usize) -> Result<Self> {
        self.insert(j)
    }

    /// All one-step images inside degree `d`: merges, plus inserts when the
    /// result still fits.
    pub fn successors(&self, kind: Kind, d: u32) -> Vec<MarkedComposition> {
        let l = self.len();
        let mut out = Vec::with_capacity(2 * l + 2);
        match kind {
            Kind::Polynomial => {
                for j in 1..l {
                    out.push(self.merge(j).expect("index in range"));
                }
            }
            Kind::Projective => {
                if l > 0 {
                    for j in 0..=l {
                        out.push(self.merge_inf(j).expect("index in range"));
                    }
                }
            }
        }
        if self.norm() + 2 <= d {
            for j in 0..=l {
                out.push(self.insert(j).expect("index in range"));
            }
        }
        out
    }

    pub fn compact(&self) -> String {
        if self.kappa == 0 {
            self.omega.compact()
        } else {
            format!("{}|{}", self.omega.compact(), self.kappa)
        }
    }
}

impl Ord for MarkedComposition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.omega.parts().cmp(other.omega.parts()))
            .then_with(|| self.kappa.cmp(&other.kappa))
    }
}

impl PartialOrd for MarkedComposition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MarkedComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kappa == 0 {
            write!(f, "{}", self.omega)
        } else {
            write!(f, "{}|{}", self.omega, self.kappa)
        }
    }
}

impl From<Composition> for MarkedComposition {
    fn from(omega: Composition) -> Self {
        MarkedComposition::unmarked(omega)
    }
}

/// Parses `1,2,2,4,3`, `(1^2,2)` or `()`. Exponents expand runs.
pub fn parse_composition(text: &str) -> Result<Composition> {
    let t = text.trim();
    let t = t.strip_prefix('(').map(|s| s.strip_suffix(')').unwrap_or(s)).unwrap_or(t);
    let t = t.trim();
    if t.is_empty() {
        return Ok(Composition::empty());
    }
    let mut parts = Vec::new();
    for tok in t.split(',') {
        let tok = tok.trim();
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (b.trim(), e.trim()),
            None => (tok, "1"),
        };
        let p: u32 = base
            .parse()
            .map_err(|_| Error::Parse(format!("bad composition part {tok:?} in {text:?}")))?;
        let e: usize = exp
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
        if p == 0 {
            return Err(Error::Parse(format!("zero part in {text:?}")));
        }
        parts.extend(std::iter::repeat(p).take(e));
    }
    Ok(Composition(parts))
}

/// Parses `1,2,2,4,3|2`, `()|3`, `|3` or a bare composition (mark 0).
pub fn parse_marked(text: &str) -> Result<MarkedComposition> {
    match text.split_once('|') {
        Some((w, k)) => {
            let kappa = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad mark in {text:?}")))?;
            Ok(MarkedComposition::new(parse_composition(w)?, kappa))
        }
        None => Ok(MarkedComposition::unmarked(parse_composition(text)?)),
    }
}

/// A pattern paired with the ambient degree; always realizable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pattern: MarkedComposition,
    degree: u32,
}

impl Cell {
    pub fn new(pattern: MarkedComposition, degree: u32) -> Result<Self> {
        if !pattern.is_realizable(degree) {
            return Err(Error::Argument(format!(
                "pattern {pattern} has no cell in degree {degree}"
            )));
        }
        Ok(Cell { pattern, degree })
    }

    pub fn pattern(&self) -> &MarkedComposition {
        &self.pattern
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dimension(&self) -> u32 {
        self.pattern.dimension(self.degree)
    }
}

/// All compositions of `n`, in lexicographic order of parts.
pub fn compositions_of(n: u32) -> Vec<Composition> {
    if n == 0 {
        return vec![Composition::empty()];
    }
    let mut out = Vec::with_capacity(1usize << (n - 1).min(30));
    let mut cur = Vec::new();
    fn rec(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if rem == 0 {
            out.push(Composition(cur.clone()));
            return;
        }
        for p in 1..=rem {
            cur.push(p);
            rec(rem - p, cur, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

/// Compositions of `n` with exactly `k` parts.
pub fn compositions_with_parts(n: u32, k: usize) -> Vec<Composition> {
    compositions_of(n).into_iter().filter(|c| c.len() == k).collect()
}

/// All patterns indexing cells in degree `d`, sorted by the canonical order.
pub fn enumerate_cells(d: u32, kind: Kind) -> Vec<MarkedComposition> {
    let mut out = Vec::new();
    let mut n = d % 2;
    while n <= d {
        match kind {
            Kind::Polynomial => {
                out.extend(compositions_of(n).into_iter().map(MarkedComposition::unmarked));
            }
            Kind::Projective => {
                for w in 0..=n {
                    for c in compositions_of(w) {
                        out.push(MarkedComposition::new(c, n - w));
                    }
                }
            }
        }
        n += 2;
    }
    out.sort();
    out
}
