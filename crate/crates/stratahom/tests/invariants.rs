use stratahom::chain_complex::Variant;
use stratahom::combinatorics::Kind;
use stratahom::posets::PosetFamily;
use stratahom::spaces::{cohomology_p_complement, reduced_homology_p};
use stratahom::stabilization::{build_trunc, dim_k, kernel_vanishes_above_psi};

fn built_in() -> Vec<PosetFamily> {
    ["full", "disc", "max-ge:2", "max-ge:3", "max-ge:4", "skeleton:1", "skeleton:2", "skeleton:3", "all-real", "empty"]
        .iter()
        .map(|s| PosetFamily::parse(s).unwrap())
        .collect()
}

fn total(p: &stratahom::spaces::HomologyProfile) -> (usize, Vec<String>) {
    let rank = p.groups.iter().map(|g| g.rank).sum();
    let mut torsion: Vec<String> = p.groups.iter().flat_map(|g| g.torsion.iter().map(|t| t.to_string())).collect();
    torsion.sort();
    (rank, torsion)
}

#[test]
fn alexander_rank_symmetry() {
    for f in built_in() {
        for d in 1..=10 {
            let Ok(h) = reduced_homology_p(d, &f) else { continue };
            let c = cohomology_p_complement(d, &f).unwrap();
            // H̃^j of the complement sits against H̃_{d-j-1}; degree 0 of the
            // complement carries one extra Z unless the family is everything.
            if f.realize(d, Kind::Polynomial).unwrap().is_full() {
                // Empty complement: the only class is H̃^{-1}(∅) = Z, against H̃_d(S^d).
                assert!(c.is_trivial());
                assert_eq!(h.support(), vec![d as usize]);
                continue;
            }
            let mut cr = c.clone();
            cr.groups[0].rank -= 1;
            assert_eq!(total(&h), total(&cr), "{f} d={d}");
            for j in 0..d as usize {
                assert_eq!(cr.get(j), h.get(d as usize - j - 1), "{f} d={d} j={j}");
            }
        }
    }
}

#[test]
fn skeleton_complements_are_bouquets() {
    for k in 1..=4u32 {
        for d in k + 1..=10 {
            let f = PosetFamily::Skeleton(k);
            let h = reduced_homology_p(d, &f).unwrap();
            let chi: i64 = h.groups.iter().enumerate().map(|(j, g)| if j % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum();
            let c = cohomology_p_complement(d, &f).unwrap();
            for (j, g) in c.groups.iter().enumerate() {
                assert!(g.torsion.is_empty(), "torsion at k={k} d={d} j={j}");
                if j == k as usize - 1 {
                    // Degree 0 holds the unreduced Z as well when k = 1.
                    let extra = usize::from(k == 1);
                    assert_eq!(g.rank, chi.unsigned_abs() as usize + extra, "k={k} d={d}");
                } else if j != 0 {
                    assert_eq!(g.rank, 0, "k={k} d={d} j={j}");
                }
            }
        }
    }
}

#[test]
fn trunc_is_a_chain_map_everywhere() {
    for (variant, kind) in [(Variant::Proj, Kind::Projective), (Variant::Poly, Kind::Polynomial)] {
        for f in built_in().into_iter().filter(|f| *f != PosetFamily::AllReal) {
            for d in 1..=10 {
                if f.realize(d, kind).is_err() {
                    continue;
                }
                build_trunc(&f, d, variant).unwrap_or_else(|e| panic!("{f} d={d} {variant:?}: {e}"));
            }
        }
    }
}

#[test]
fn all_real_is_rejected_by_trunc() {
    assert!(build_trunc(&PosetFamily::AllReal, 4, Variant::Proj).unwrap_err().to_string().contains("differs"));
}

#[test]
fn kernel_vanishes_above_psi_everywhere() {
    for kind in [Kind::Projective, Kind::Polynomial] {
        for f in built_in().into_iter().filter(|f| !matches!(f, PosetFamily::Empty | PosetFamily::AllReal)) {
            for d in 1..=10 {
                if f.realize(d + 2, kind).map_or(true, |r| r.is_empty()) {
                    continue;
                }
                assert!(kernel_vanishes_above_psi(&f, d, kind).unwrap(), "{f} d={d}");
            }
        }
    }
}

#[test]
fn dim_k_closed_forms() {
    for d in 3..=12 {
        for k in 2..=d {
            assert_eq!(dim_k(&PosetFamily::MaxGe(k), d, Kind::Projective).unwrap(), (d - k + 1) as i64);
        }
        // The full family contains the top cell of norm d.
        assert_eq!(dim_k(&PosetFamily::Full, d, Kind::Projective).unwrap(), d as i64);
        assert_eq!(dim_k(&PosetFamily::Full, d, Kind::Polynomial).unwrap(), d as i64);
    }
}
