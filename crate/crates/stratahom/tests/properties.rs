use proptest::prelude::*;
use stratahom::chain_complex::{apply, insert_part, merge_part, ChainComplex, FormalSum, Variant};
use stratahom::combinatorics::{enumerate_cells, parse_marked, Kind, MarkedComposition};
use stratahom::integer_linalg::{
    matmul, rank_mod_p, smith_invariants, smith_normal_form, HomologyGroup, IntMatrix,
};
use stratahom::posets::{close, PosetFamily};
use stratahom::spaces::reduced_homology_p;

fn kind_variant(poly: bool) -> (Kind, Variant) {
    if poly {
        (Kind::Polynomial, Variant::Poly)
    } else {
        (Kind::Projective, Variant::Proj)
    }
}

fn generators(d: u32, kind: Kind, picks: &[usize]) -> Vec<MarkedComposition> {
    let cells = enumerate_cells(d, kind);
    picks.iter().map(|i| cells[i % cells.len()].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(d in 1u32..=9, poly: bool, picks in prop::collection::vec(0usize..10_000, 1..4)) {
        let (kind, variant) = kind_variant(poly);
        let r = close(&generators(d, kind, &picks), d, kind).unwrap();
        prop_assert!(r.is_closed());
        let cx = ChainComplex::build(&r, variant).unwrap();
        for j in 2..=cx.top() {
            prop_assert!(cx.map(j - 1).mul(cx.map(j)).unwrap().is_zero());
        }
    }

    #[test]
    fn merge_insert_anticommute_on_closed_families(d in 1u32..=9, poly: bool, picks in prop::collection::vec(0usize..10_000, 1..4)) {
        let (kind, _) = kind_variant(poly);
        let r = close(&generators(d, kind, &picks), d, kind).unwrap();
        for x in r.cells() {
            let one: FormalSum = [(x.clone(), 1)].into_iter().collect();
            let m = |y: &MarkedComposition| merge_part(y, d, kind);
            let i = |y: &MarkedComposition| insert_part(y, d, kind);
            let dm = apply(m, &one).unwrap();
            let di = apply(i, &one).unwrap();
            prop_assert!(dm.keys().chain(di.keys()).all(|y| r.contains(y)));
            let mi = apply(m, &di).unwrap();
            let im = apply(i, &dm).unwrap();
            for k in mi.keys().chain(im.keys()) {
                prop_assert_eq!(mi.get(k).copied().unwrap_or(0) + im.get(k).copied().unwrap_or(0), 0);
            }
        }
    }

    #[test]
    fn euler_characteristic_from_homology(d in 1u32..=8, poly: bool, picks in prop::collection::vec(0usize..10_000, 1..4)) {
        let (kind, variant) = kind_variant(poly);
        let r = close(&generators(d, kind, &picks), d, kind).unwrap();
        let cx = ChainComplex::build(&r, variant).unwrap();
        let alt: i64 = cx.homology_all().unwrap().iter().enumerate()
            .map(|(j, g)| if j % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum();
        prop_assert_eq!(alt, cx.euler_characteristic());
    }

    #[test]
    fn reversal_is_a_symmetry(d in 2u32..=9, pick in 0usize..10_000) {
        let w = generators(d, Kind::Polynomial, &[pick]).remove(0);
        let rev = MarkedComposition::unmarked(w.omega.reversed());
        let a = reduced_homology_p(d, &PosetFamily::Single(w)).unwrap();
        let b = reduced_homology_p(d, &PosetFamily::Single(rev)).unwrap();
        prop_assert_eq!(a.groups, b.groups);
    }

    #[test]
    fn smith_transforms(rows in 1usize..10, cols in 1usize..10, seed in prop::collection::vec(-9i64..=9, 100)) {
        let dense: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 10 + j]).collect()).collect();
        let a = IntMatrix::from_dense(&dense);
        let s = smith_normal_form(&a.to_big_dense(), rows, cols);
        let prod = matmul(&matmul(&s.u, &a.to_big_dense(), rows, cols), &s.v, cols, cols);
        prop_assert_eq!(&prod, &s.d);
        let inv = smith_invariants(&a);
        let diag = s.diagonal();
        prop_assert_eq!(inv.rank, diag.len());
        prop_assert_eq!(inv.diagonal(), diag.clone());
        for p in [2u64, 3, 5, 7] {
            let expected = diag.iter().filter(|x| (*x % p) != 0u32.into()).count();
            prop_assert_eq!(rank_mod_p(&a, p), expected);
        }
    }

    #[test]
    fn group_notation_round_trips(rank in 0usize..4, torsion in prop::collection::vec(2u64..30, 0..4)) {
        let g = HomologyGroup::with_torsion(rank, &torsion);
        prop_assert_eq!(HomologyGroup::parse(&g.paper_style()).unwrap(), g.clone());
        prop_assert_eq!(HomologyGroup::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn pattern_notation_round_trips(parts in prop::collection::vec(1u32..5, 0..6), kappa in 0u32..4) {
        let x = MarkedComposition::from_parts(&parts, kappa).unwrap();
        prop_assert_eq!(parse_marked(&x.to_string()).unwrap(), x.clone());
        let f = PosetFamily::Single(x);
        prop_assert_eq!(PosetFamily::parse(&f.to_string()).unwrap(), f);
    }
}
