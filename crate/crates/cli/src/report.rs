use std::collections::BTreeMap;
use std::fmt::Write as _;

use kmss::holim::{DegreeCohomology, PrimePower};
use kmss::sseq::CollapseCertificate;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub matrix: Vec<Vec<i64>>,
    pub prime: Option<u64>,
    pub truncations: BTreeMap<String, usize>,
    pub entries: Vec<Entry>,
    pub certificate: Option<Certificate>,
    pub verdicts: Vec<Verdict>,
    pub series: Vec<Series>,
    pub details: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, matrix: Vec<Vec<i64>>) -> Self {
        Report {
            command: command.to_string(),
            matrix,
            prime: None,
            truncations: BTreeMap::new(),
            entries: Vec::new(),
            certificate: None,
            verdicts: Vec::new(),
            series: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn verdict(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { name: name.into(), passed, detail: detail.into() });
    }
}

#[derive(Debug, Serialize)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl Entry {
    pub fn new(i: usize, j: usize, h: &DegreeCohomology) -> Self {
        Entry { i, j, free_rank: h.free_rank, torsion: torsion_tokens(&h.torsion) }
    }
}

#[derive(Debug, Serialize)]
pub struct Certificate {
    pub collapsed: bool,
    pub reason: String,
    pub size: usize,
    pub column_bound: usize,
    pub admissible_differentials: Vec<usize>,
    pub torsion_bounds: BTreeMap<String, String>,
}

impl From<&CollapseCertificate> for Certificate {
    fn from(c: &CollapseCertificate) -> Self {
        Certificate {
            collapsed: c.collapsed,
            reason: c.reason.to_string(),
            size: c.size,
            column_bound: c.column_bound,
            admissible_differentials: c.admissible_differentials.clone(),
            torsion_bounds: c
                .torsion_bounds
                .iter()
                .map(|(r, e)| (format!("d{}", 2 * r - 1), format!("{}^{e}", c.prime)))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Series {
    pub label: String,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Debug, Serialize)]
pub struct SeriesTerm {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl Series {
    pub fn counts(label: impl Into<String>, values: impl IntoIterator<Item = usize>) -> Self {
        let terms = values.into_iter().enumerate().map(|(degree, rank)| SeriesTerm { degree, rank, torsion: Vec::new() }).collect();
        Series { label: label.into(), terms }
    }

    pub fn cohomology(label: impl Into<String>, degrees: &[DegreeCohomology]) -> Self {
        let terms = degrees
            .iter()
            .enumerate()
            .map(|(degree, h)| SeriesTerm { degree, rank: h.free_rank, torsion: torsion_tokens(&h.torsion) })
            .collect();
        Series { label: label.into(), terms }
    }
}

/// `q^e` tokens, ascending.
pub fn torsion_tokens(torsion: &[PrimePower]) -> Vec<String> {
    let mut sorted = torsion.to_vec();
    sorted.sort();
    sorted.iter().map(PrimePower::to_string).collect()
}

fn torsion_text(tokens: &[String]) -> String {
    if tokens.is_empty() {
        "-".to_string()
    } else {
        tokens.join(" ")
    }
}

fn matrix_text(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(","))
}

pub fn structured(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("serializable");
    out.push('\n');
    out
}

pub fn text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", report.command);
    let _ = writeln!(out, "matrix: {}", matrix_text(&report.matrix));
    if let Some(q) = report.prime {
        let _ = writeln!(out, "prime: {q}");
    }
    if !report.truncations.is_empty() {
        let items: Vec<String> = report.truncations.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "truncations: {}", items.join(" "));
    }
    if !report.entries.is_empty() {
        let _ = writeln!(out, "entries:");
        for e in &report.entries {
            let _ = writeln!(out, "  E2[{},{}] rank={} torsion={}", e.i, e.j, e.free_rank, torsion_text(&e.torsion));
        }
    }
    if let Some(c) = &report.certificate {
        let _ = writeln!(out, "certificate: collapsed={} reason={}", c.collapsed, c.reason);
        let _ = writeln!(out, "  size={} column_bound={}", c.size, c.column_bound);
        let admissible: Vec<String> = c.admissible_differentials.iter().map(|r| format!("d{}", 2 * r - 1)).collect();
        let _ = writeln!(out, "  admissible differentials: {}", if admissible.is_empty() { "none".into() } else { admissible.join(" ") });
        for (d, b) in &c.torsion_bounds {
            let _ = writeln!(out, "  bound {d}: {b}");
        }
    }
    if !report.verdicts.is_empty() {
        let _ = writeln!(out, "verdicts:");
        for v in &report.verdicts {
            let status = if v.passed { "pass" } else { "FAIL" };
            if v.detail.is_empty() {
                let _ = writeln!(out, "  {}: {status}", v.name);
            } else {
                let _ = writeln!(out, "  {}: {status} ({})", v.name, v.detail);
            }
        }
    }
    for s in &report.series {
        let _ = writeln!(out, "series {}:", s.label);
        for t in &s.terms {
            if t.torsion.is_empty() {
                let _ = writeln!(out, "  {}: {}", t.degree, t.rank);
            } else {
                let _ = writeln!(out, "  {}: {} + {}", t.degree, t.rank, torsion_text(&t.torsion));
            }
        }
    }
    for (k, v) in &report.details {
        let _ = writeln!(out, "{k}: {}", compact(v));
    }
    out
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
