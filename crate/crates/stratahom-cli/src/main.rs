use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stratahom::chain_complex::Variant;
use stratahom::combinatorics::Kind;
use stratahom::posets::{PosetFamily, PosetRealization};
use stratahom::spaces::{self, HomologyProfile};
use stratahom::stabilization::{stability_report, StabilizationReport};
use stratahom::{tables, Error};

mod render;
mod selftest;

use render::{render_profile, table_grid, Format, Grid};

#[derive(Parser)]
#[command(name = "stratahom", version, about = "Integer homology of real polynomial spaces stratified by root multiplicities")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Degree of the forms or polynomials.
    #[arg(long, global = true)]
    d: Option<u32>,
    /// Largest degree for tables.
    #[arg(long, global = true)]
    dmax: Option<u32>,
    /// full, empty, all-real, disc, max-ge:K, skeleton:Q, single:W, gen:(W);(W)
    #[arg(long, global = true)]
    family: Option<String>,
    /// B, P, cB, cP or D.
    #[arg(long, global = true)]
    space: Option<String>,
    /// proj (B side) or poly (P side).
    #[arg(long, global = true)]
    variant: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Codimension for the skeleton table.
    #[arg(long, global = true, default_value_t = 2)]
    q: u32,
    /// Also decide whether trunc itself induces each isomorphism.
    #[arg(long, global = true)]
    slow_induced_map: bool,
    /// Reduced groups for --space B.
    #[arg(long, global = true)]
    reduced: bool,
    /// Twisted homology of the complement instead of its cohomology (cB).
    #[arg(long, global = true)]
    twisted: bool,
    /// Run the internal consistency suites and exit.
    #[arg(long, global = true)]
    selftest: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the cells of a family with their dimensions.
    Cells,
    /// Cell counts by dimension for B_d and the compactified P_d.
    Counts,
    /// Realize a family: members, maximal elements, psi.
    Poset,
    /// Homology of a family (--space B, P or D).
    Homology,
    /// Cohomology of a complement (--space cB or cP).
    Complement,
    /// The discriminant: computed groups, closed form, relative groups.
    Discriminant,
    /// Compare degree d+2 against degree d.
    Stabilize,
    /// Reproduce a reference table: triple-root, skeleton, discriminant, single-omega.
    Table { name: String },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Argument(_) => 2,
        Error::Invariant(_) => 3,
        Error::Io(_) => 1,
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> stratahom::Result<T> {
    v.ok_or_else(|| Error::Argument(format!("--{flag} is required")))
}

fn family(cli: &Cli) -> stratahom::Result<PosetFamily> {
    PosetFamily::parse(cli.family.as_deref().unwrap_or("full"))
}

fn variant(cli: &Cli) -> stratahom::Result<(Variant, Kind)> {
    match cli.variant.as_deref().unwrap_or("proj").to_ascii_lowercase().as_str() {
        "proj" | "projective" | "b" => Ok((Variant::Proj, Kind::Projective)),
        "poly" | "polynomial" | "p" => Ok((Variant::Poly, Kind::Polynomial)),
        other => Err(Error::Argument(format!("unknown variant {other:?}; expected proj or poly"))),
    }
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("STRATAHOM_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn realize(f: &PosetFamily, d: u32, kind: Kind) -> stratahom::Result<PosetRealization> {
    f.realize_cached(d, kind, cache_dir().as_deref())
}

fn cells(cli: &Cli) -> stratahom::Result<String> {
    let d = need(cli.d, "d")?;
    let (_, kind) = variant(cli)?;
    let r = realize(&family(cli)?, d, kind)?;
    let mut g = Grid::new(&["pattern", "norm", "reduced norm", "dim"]);
    g.title.push(format!("{} cells in degree {d}", r.len()));
    for c in r.cells() {
        g.rows.push(vec![c.compact(), c.norm().to_string(), c.reduced_norm().to_string(), c.dimension(d).to_string()]);
    }
    Ok(g.render(cli.format))
}

fn counts(cli: &Cli) -> stratahom::Result<String> {
    let d = need(cli.d, "d")?;
    let b = spaces::cell_counts(d, Kind::Projective);
    let p = spaces::cell_counts(d, Kind::Polynomial);
    let mut g = Grid::new(&["dim", "B", "P"]);
    g.title.push(format!("G(B_{d};t) = {b}"));
    g.title.push(format!("G(P_{d};t) = {p}  (compactified, the point at infinity in dimension 0)"));
    for j in 0..=d as usize {
        g.rows.push(vec![j.to_string(), b.coefficient(j).to_string(), p.coefficient(j).to_string()]);
    }
    Ok(g.render(cli.format))
}

fn poset(cli: &Cli) -> stratahom::Result<String> {
    let d = need(cli.d, "d")?;
    let (_, kind) = variant(cli)?;
    let f = family(cli)?;
    let r = realize(&f, d, kind)?;
    let mut g = Grid::new(&["pattern", "dim", "maximal"]);
    let max = r.maximal_elements();
    g.title.push(format!("family {f} in degree {d}: {} cells, closed = {}", r.len(), r.is_closed()));
    if !r.is_empty() {
        g.title.push(format!("eta = {}  psi = {}", r.eta()?, r.psi()?));
    }
    for c in r.cells() {
        let m = if max.contains(c) { "yes" } else { "" };
        g.rows.push(vec![c.compact(), c.dimension(d).to_string(), m.to_string()]);
    }
    Ok(g.render(cli.format))
}

fn homology(cli: &Cli) -> stratahom::Result<String> {
    let d = need(cli.d, "d")?;
    let space = cli.space.as_deref().unwrap_or("B");
    let f = family(cli)?;
    let p: HomologyProfile = match space {
        "B" => {
            let h = spaces::homology_b_of(&realize(&f, d, Kind::Projective)?, &f)?;
            if cli.reduced {
                h.to_reduced()
            } else {
                h
            }
        }
        "P" => spaces::reduced_homology_p_of(&realize(&f, d, Kind::Polynomial)?, &f)?,
        "D" => {
            if cli.family.is_some() && f != PosetFamily::Disc {
                return Err(Error::Argument("--space D is the discriminant; drop --family".into()));
            }
            spaces::reduced_homology_b(d, &PosetFamily::Disc)?
        }
        "cB" | "cP" => return complement(cli),
        other => return Err(Error::Argument(format!("unknown space {other:?}; expected B, P, cB, cP or D"))),
    };
    Ok(render_profile(&p, cli.format))
}

fn complement(cli: &Cli) -> stratahom::Result<String> {
    let d = need(cli.d, "d")?;
    let f = family(cli)?;
    let p = match cli.space.as_deref().unwrap_or("cB") {
        "cB" | "B" if cli.twisted => spaces::twisted_homology_b_complement(d, &f)?,
        "cB" | "B" => spaces::cohomology_b_complement(d, &f)?,
        "cP" | "P" => spaces::cohomology_p_complement(d, &f)?,
        other => return Err(Error::Argument(format!("unknown complement space {other:?}; expected cB or cP"))),
    };
    Ok(render_profile(&p, cli.format))
}

fn discriminant(cli: &Cli) -> stratahom::Result<String> {
    let d = need(cli.d, "d")?;
    let computed = spaces::reduced_homology_b(d, &PosetFamily::Disc)?;
    let oracle = spaces::discriminant_oracle(d)?;
    let relative = spaces::relative_homology_b(d, &PosetFamily::Disc)?;
    if cli.format == Format::Json {
        let v = serde_json::json!({
            "computed": computed.to_json(),
            "closed_form": oracle.to_json(),
            "relative": relative.to_json(),
            "match": computed.groups == oracle.groups,
        });
        return Ok(v.to_string() + "\n");
    }
    let mut g = Grid::new(&["j", "reduced H_j(D)", "closed form", "H_j(B, D)"]);
    g.title.push(format!("discriminant in degree {d}"));
    for j in 0..=d as usize {
        g.rows.push(vec![
            j.to_string(),
            computed.get(j).paper_style(),
            oracle.get(j).paper_style(),
            relative.get(j).paper_style(),
        ]);
    }
    let verdict = if computed.groups == oracle.groups { tables::MATCH } else { tables::MISMATCH };
    g.footer.push(format!("closed form: {verdict}"));
    Ok(g.render(cli.format))
}

fn report_grid(r: &StabilizationReport) -> Grid {
    let induced = r.rows.iter().any(|x| x.induced_iso.is_some());
    let mut header = vec!["j", "H_{j+2}(d+2)", "H_j(d)", "iso?", "guaranteed?"];
    if induced {
        header.push("trunc_* iso?");
    }
    let mut g = Grid::new(&header);
    g.title.push(format!(
        "family {}  variant {:?}  d = {}  psi(d+2) = {}  guaranteed for j >= {}",
        r.family, r.variant, r.d, r.psi, r.zone_start()
    ));
    let yn = |b: bool| if b { "yes" } else { "no" }.to_string();
    for x in &r.rows {
        let mut row = vec![x.j.to_string(), x.upper.paper_style(), x.lower.paper_style(), yn(x.isomorphic), yn(x.guaranteed)];
        if let Some(i) = x.induced_iso {
            row.push(yn(i));
        }
        g.rows.push(row);
    }
    g.footer.push(format!("violations in the guaranteed zone: {}", r.violations().len()));
    g
}

fn run(cli: &Cli) -> stratahom::Result<(String, u8)> {
    let Some(cmd) = &cli.command else {
        return Err(Error::Argument("no command given; see --help".into()));
    };
    let out = match cmd {
        Command::Cells => cells(cli)?,
        Command::Counts => counts(cli)?,
        Command::Poset => poset(cli)?,
        Command::Homology => homology(cli)?,
        Command::Complement => complement(cli)?,
        Command::Discriminant => discriminant(cli)?,
        Command::Stabilize => {
            let d = need(cli.d, "d")?;
            let (v, _) = variant(cli)?;
            let r = stability_report(&family(cli)?, d, v, cli.slow_induced_map)?;
            let code = if r.violations().is_empty() { 0 } else { 3 };
            return Ok((report_grid(&r).render(cli.format), code));
        }
        Command::Table { name } => {
            let dmax = need(cli.dmax, "dmax")?;
            table_grid(&tables::table_by_name(name, dmax, cli.q)?).render(cli.format)
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if cli.selftest {
        let (out, ok) = selftest::run();
        print!("{out}");
        return ExitCode::from(if ok { 0 } else { 3 });
    }
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
