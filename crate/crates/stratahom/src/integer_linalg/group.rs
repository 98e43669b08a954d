use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::sparse_smith::SmithInvariants;
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with
/// `1 < t_1 | t_2 | ... | t_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup { rank, torsion: Vec::new() }
    }

    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Self {
        HomologyGroup { rank, torsion: super::sparse_smith::invariant_factors(torsion) }
    }

    pub fn with_torsion(rank: usize, torsion: &[u64]) -> Self {
        Self::new(rank, torsion.iter().map(|&t| BigInt::from(t)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Paper-style rendering: `Z^2 ⊕ Z/2Z`, `(Z/2Z)^3`.
    pub fn paper_style(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            if run > 1 {
                parts.push(format!("(Z/{t}Z)^{run}"));
            } else {
                parts.push(format!("Z/{t}Z"));
            }
            i += run;
        }
        parts.join(" ⊕ ")
    }

    /// Parses `0`, `Z`, `Z^3`, `Z ⊕ Z/2`, `Z^2 + Z/2Z`, `(Z/2Z)^3`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "0" || t.is_empty() {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(format!("bad group {text:?}"));
        let mut rank = 0usize;
        let mut torsion = Vec::new();
        for term in t.split(['⊕', '+']) {
            let term = term.trim();
            let (base, exp) = match term.rsplit_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (term, 1),
            };
            let base = base.trim_start_matches('(').trim_end_matches(')');
            if base == "Z" {
                rank += exp;
            } else if let Some(rest) = base.strip_prefix("Z/") {
                let n = rest.trim_end_matches('Z');
                let n: BigInt = n.parse().map_err(|_| bad())?;
                for _ in 0..exp {
                    torsion.push(n.clone());
                }
            } else {
                return Err(bad());
            }
        }
        Ok(Self::new(rank, torsion))
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// Homology at a grade of dimension `dim`, given the invariants of the map
/// leaving the grade and of the map entering it.
pub fn homology_from_invariants(
    dim: usize,
    outgoing: &SmithInvariants,
    incoming: &SmithInvariants,
) -> Result<HomologyGroup> {
    let used = outgoing.rank + incoming.rank;
    if used > dim {
        return Err(Error::Invariant(format!(
            "ranks {} + {} exceed chain group rank {dim}",
            outgoing.rank, incoming.rank
        )));
    }
    debug_assert!(incoming.torsion.iter().all(|t| t > &BigInt::one()));
    Ok(HomologyGroup { rank: dim - used, torsion: incoming.torsion.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        assert_eq!(HomologyGroup::zero().to_string(), "0");
        assert_eq!(HomologyGroup::free(1).to_string(), "Z");
        assert_eq!(HomologyGroup::free(3).to_string(), "Z^3");
        assert_eq!(HomologyGroup::with_torsion(1, &[2, 4]).to_string(), "Z ⊕ Z/2 ⊕ Z/4");
        assert_eq!(HomologyGroup::with_torsion(2, &[2]).paper_style(), "Z^2 ⊕ Z/2Z");
        assert_eq!(HomologyGroup::with_torsion(0, &[2, 2, 2]).paper_style(), "(Z/2Z)^3");
    }

    #[test]
    fn parsing() {
        for s in ["0", "Z", "Z^3", "Z ⊕ Z/2 ⊕ Z/4", "Z^2 ⊕ Z/2Z", "(Z/2Z)^3", "Z/4Z", "Z+Z/2"] {
            let g = HomologyGroup::parse(s).unwrap();
            assert_eq!(HomologyGroup::parse(&g.to_string()).unwrap(), g);
            assert_eq!(HomologyGroup::parse(&g.paper_style()).unwrap(), g);
        }
        assert_eq!(HomologyGroup::parse("(Z/2Z)^3").unwrap(), HomologyGroup::with_torsion(0, &[2, 2, 2]));
        assert_eq!(HomologyGroup::parse("Z^2 ⊕ Z/2Z").unwrap(), HomologyGroup::with_torsion(2, &[2]));
        assert!(HomologyGroup::parse("Q").is_err());
    }

    #[test]
    fn torsion_is_normalized() {
        assert_eq!(HomologyGroup::with_torsion(0, &[6, 4]).torsion, vec![BigInt::from(2), BigInt::from(12)]);
    }
}
