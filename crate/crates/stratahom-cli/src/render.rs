//! Output formats. Everything is rendered from a [`Grid`] except profile
//! JSON, which follows the fixed result schema.

use serde_json::{json, Value};
use stratahom::spaces::HomologyProfile;
use stratahom::tables::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Markdown,
}

/// Title lines, then a table.
pub struct Grid {
    pub title: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<String>,
}

impl Grid {
    pub fn new(header: &[&str]) -> Self {
        Grid {
            title: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Markdown => self.markdown(),
            Format::Csv => self.csv(),
            Format::Json => self.json().to_string() + "\n",
        }
    }

    fn text(&self) -> String {
        let mut width: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (k, c) in r.iter().enumerate() {
                width[k] = width[k].max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(k, c)| format!("{c}{}", " ".repeat(width[k] - c.chars().count())))
                .collect();
            padded.join(" | ").trim_end().to_string()
        };
        let mut out = String::new();
        for t in &self.title {
            out += t;
            out.push('\n');
        }
        out += &line(&self.header);
        out.push('\n');
        out += &width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-");
        out.push('\n');
        for r in &self.rows {
            out += &line(r);
            out.push('\n');
        }
        for f in &self.footer {
            out += f;
            out.push('\n');
        }
        out
    }

    fn markdown(&self) -> String {
        let esc = |s: &str| s.replace('|', "\\|");
        let mut out = String::new();
        for t in &self.title {
            out += &format!("{}\n\n", esc(t));
        }
        out += &format!("| {} |\n", self.header.iter().map(|h| esc(h)).collect::<Vec<_>>().join(" | "));
        out += &format!("|{}\n", "---|".repeat(self.header.len()));
        for r in &self.rows {
            out += &format!("| {} |\n", r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | "));
        }
        for f in &self.footer {
            out += &format!("\n{}\n", esc(f));
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
    }

    fn json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: serde_json::Map<String, Value> =
                    self.header.iter().cloned().zip(r.iter().map(|c| Value::from(c.as_str()))).collect();
                Value::Object(m)
            })
            .collect();
        json!({ "title": self.title, "rows": rows, "notes": self.footer })
    }
}

pub fn profile_grid(p: &HomologyProfile) -> Grid {
    let h = if p.space.is_cohomology() { "H^j" } else { "H_j" };
    let mut g = Grid::new(&["j", h]);
    g.title.push(format!(
        "space {}  d = {}  family {}  {}",
        p.space.tag(),
        p.degree,
        p.family,
        if p.reduced { "reduced" } else { "unreduced" }
    ));
    for (j, grp) in p.groups.iter().enumerate() {
        g.rows.push(vec![j.to_string(), grp.paper_style()]);
    }
    g
}

pub fn render_profile(p: &HomologyProfile, format: Format) -> String {
    match format {
        Format::Json => p.to_json().to_string() + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["degree", "rank", "torsion", "group"]).expect("in-memory write");
            for (j, g) in p.groups.iter().enumerate() {
                let t: Vec<String> = g.torsion.iter().map(|x| x.to_string()).collect();
                w.write_record([j.to_string(), g.rank.to_string(), t.join(";"), g.paper_style()])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
        }
        _ => profile_grid(p).render(format),
    }
}

pub fn table_grid(t: &Table) -> Grid {
    let header: Vec<&str> = t.header.iter().map(String::as_str).collect();
    let mut g = Grid::new(&header);
    g.title.push(format!("table {}", t.name));
    g.rows = t.rows.clone();
    g.footer.push(format!("{} of {} checked rows match", t.checked - t.mismatches, t.checked));
    g
}
