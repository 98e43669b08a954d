//! Quick internal consistency suites behind `--selftest`.

use stratahom::chain_complex::{apply, insert_part, merge_part, ChainComplex, FormalSum, Variant};
use stratahom::combinatorics::{enumerate_cells, Kind};
use stratahom::posets::PosetFamily;
use stratahom::spaces::cell_counts;
use stratahom::stabilization::build_trunc;

const DMAX: u32 = 7;

fn families() -> Vec<PosetFamily> {
    ["full", "disc", "max-ge:3", "skeleton:2", "all-real", "single:1,2,1"]
        .iter()
        .map(|s| PosetFamily::parse(s).expect("built-in family"))
        .collect()
}

fn variants() -> [(Variant, Kind); 2] {
    [(Variant::Poly, Kind::Polynomial), (Variant::Proj, Kind::Projective)]
}

fn square_zero() -> Result<(), String> {
    for (v, k) in variants() {
        for f in families() {
            for d in 1..=DMAX {
                let Ok(r) = f.realize(d, k) else { continue };
                let cx = ChainComplex::build(&r, v).map_err(|e| format!("{f} d={d}: {e}"))?;
                cx.verify_square_zero().map_err(|e| format!("{f} d={d}: {e}"))?;
            }
        }
    }
    Ok(())
}

fn anticommute() -> Result<(), String> {
    for (_, kind) in variants() {
        for d in 1..=DMAX {
            for x in enumerate_cells(d, kind) {
                let one: FormalSum = [(x.clone(), 1)].into_iter().collect();
                let m = |y: &_| merge_part(y, d, kind);
                let i = |y: &_| insert_part(y, d, kind);
                let run = || -> stratahom::Result<bool> {
                    let mi = apply(m, &apply(i, &one)?)?;
                    let im = apply(i, &apply(m, &one)?)?;
                    let sum_zero = mi.keys().chain(im.keys()).all(|k| mi.get(k).copied().unwrap_or(0) + im.get(k).copied().unwrap_or(0) == 0);
                    Ok(sum_zero && apply(m, &apply(m, &one)?)?.is_empty() && apply(i, &apply(i, &one)?)?.is_empty())
                };
                if !run().map_err(|e| e.to_string())? {
                    return Err(format!("{x} in degree {d}"));
                }
            }
        }
    }
    Ok(())
}

fn euler() -> Result<(), String> {
    for (v, k) in variants() {
        for f in families() {
            for d in 1..=DMAX {
                let Ok(r) = f.realize(d, k) else { continue };
                let cx = ChainComplex::build(&r, v).map_err(|e| e.to_string())?;
                let h = cx.homology_all().map_err(|e| e.to_string())?;
                let alt: i64 = h.iter().enumerate().map(|(j, g)| if j % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum();
                if alt != cx.euler_characteristic() {
                    return Err(format!("{f} d={d}: cells give {}, homology gives {alt}", cx.euler_characteristic()));
                }
            }
        }
    }
    for d in 1..=14u32 {
        let even = d % 2 == 0;
        if cell_counts(d, Kind::Polynomial).eval(-1) != if even { 2 } else { 0 } {
            return Err(format!("sphere count at d={d}"));
        }
        if cell_counts(d, Kind::Projective).eval(-1) != even as i64 {
            return Err(format!("projective count at d={d}"));
        }
    }
    Ok(())
}

fn trunc() -> Result<(), String> {
    // The all-real family is not compatible across degrees.
    for (v, k) in variants() {
        for f in families().into_iter().filter(|f| *f != PosetFamily::AllReal) {
            for d in 1..=DMAX - 1 {
                if f.realize(d, k).is_err() || f.realize(d + 2, k).is_err() {
                    continue;
                }
                build_trunc(&f, d, v).map_err(|e| format!("{f} d={d}: {e}"))?;
            }
        }
    }
    Ok(())
}

/// Runs every suite; returns the rendered report and whether all passed.
pub fn run() -> (String, bool) {
    let suites: [(&str, fn() -> Result<(), String>); 4] = [
        ("boundary squares to zero", square_zero),
        ("merge and insert parts anticommute", anticommute),
        ("Euler characteristics", euler),
        ("trunc is a chain map", trunc),
    ];
    let mut out = String::new();
    let mut ok = true;
    for (name, f) in suites {
        match f() {
            Ok(()) => out += &format!("PASS {name}\n"),
            Err(e) => {
                ok = false;
                out += &format!("FAIL {name}: {e}\n");
            }
        }
    }
    (out, ok)
}
