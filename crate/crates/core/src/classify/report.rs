//! Machine results next to the encoded claims for each table and theorem.

use super::claims::{expected_class, table5_row, triple_file};
use super::group::{classify_doubles, sample_nodes, ClassificationReport, ClassifyOptions};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::iso::ExhaustReason;
use crate::iso::IsoCertificate;
use crate::scalar::Bindings;
use crate::triple::{build_double, check_compatibility};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Table2,
    Table4,
    Table5,
    Table7,
    Thm1,
    Thm2,
    Thm3,
}

impl Target {
    pub const ALL: [Target; 7] =
        [Target::Table2, Target::Table4, Target::Table5, Target::Table7, Target::Thm1, Target::Thm2, Target::Thm3];

    pub fn name(self) -> &'static str {
        match self {
            Target::Table2 => "table2",
            Target::Table4 => "table4",
            Target::Table5 => "table5",
            Target::Table7 => "table7",
            Target::Thm1 => "thm1",
            Target::Thm2 => "thm2",
            Target::Thm3 => "thm3",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Target> {
        Target::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| Error::UnknownName(format!("report target {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportLine {
    pub key: String,
    pub fields: Vec<(String, String)>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub target: Target,
    pub lines: Vec<ReportLine>,
    pub summary: Vec<(String, String)>,
    pub pass: bool,
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut s = format!("report {}: {}\n", self.target, status(self.pass));
        for l in &self.lines {
            let f: Vec<String> = l.fields.iter().map(|(k, v)| format!("{k}: {v}")).collect();
            s += &format!("  [{}] {}  {}\n", status(l.ok), l.key, f.join("; "));
        }
        let f: Vec<String> = self.summary.iter().map(|(k, v)| format!("{k} {v}")).collect();
        s += &format!("  {}\n", f.join(", "));
        s
    }

    /// Stable `key=value` lines; values never contain spaces.
    pub fn render_machine(&self) -> String {
        let clean = |v: &str| v.replace(' ', "");
        let mut s = format!("target={}\n", self.target);
        for l in &self.lines {
            s += &format!("line={}", clean(&l.key));
            for (k, v) in &l.fields {
                s += &format!(" {k}={}", clean(v));
            }
            s += &format!(" status={}\n", status(l.ok));
        }
        for (k, v) in &self.summary {
            s += &format!("{k}={}\n", clean(v));
        }
        s += &format!("pass={}\n", self.pass);
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    /// Replace the default sample values of the named parameters.
    pub bindings: Bindings,
    pub budget: Option<usize>,
}

pub fn report(catalog: &Catalog, target: Target, opts: &ReportOptions) -> Result<Report> {
    match target {
        Target::Table2 => triple_report(catalog, target, (2, 2), opts),
        Target::Table4 => triple_report(catalog, target, (4, 2), opts),
        Target::Table7 => triple_report(catalog, target, (2, 4), opts),
        Target::Table5 => commutant_report(catalog, opts),
        Target::Thm1 => theorem_report(catalog, target, (2, 2), opts),
        Target::Thm2 => theorem_report(catalog, target, (4, 2), opts),
        Target::Thm3 => theorem_report(catalog, target, (2, 4), opts),
    }
}

fn file_for(dims: (usize, usize)) -> &'static str {
    triple_file(dims).unwrap_or_default()
}

/// Compatibility and ad-invariance of every triple, symbolically in the
/// parameters that are not overridden.
fn triple_report(catalog: &Catalog, target: Target, dims: (usize, usize), opts: &ReportOptions) -> Result<Report> {
    let mut lines = Vec::new();
    for e in catalog.triples_in(file_for(dims)) {
        let b = opts.bindings.restricted(e.value.ctx.names());
        let t = e.value.substitute(&b)?;
        let compat = check_compatibility(&t)?.len();
        let adinv = build_double(&t)?.ad_invariance()?.len();
        let mut fields = vec![("triple".to_string(), format!("({}|{})", t.left.label(), t.right.label()))];
        if !b.is_empty() {
            fields.push(("at".into(), b.to_string()));
        }
        fields.push(("compatibility".into(), compat.to_string()));
        fields.push(("ad-invariance".into(), adinv.to_string()));
        lines.push(ReportLine { key: e.name.clone(), fields, ok: compat == 0 && adinv == 0 });
    }
    let passed = lines.iter().filter(|l| l.ok).count();
    let pass = !lines.is_empty() && passed == lines.len();
    Ok(Report { target, summary: vec![("triples".into(), format!("{passed}/{}", lines.len()))], lines, pass })
}

fn commutant_report(catalog: &Catalog, opts: &ReportOptions) -> Result<Report> {
    let nodes = sample_nodes(catalog, file_for((4, 2)), &opts.bindings)?;
    let mut lines = Vec::new();
    let mut rows: BTreeMap<String, bool> = BTreeMap::new();
    for n in &nodes {
        let claim = table5_row(&n.id, &n.bindings);
        let d = n.fingerprint.dims();
        let ok = claim.as_ref().is_some_and(|c| c.dims == d && c.c1.is_none_or(|s| s == n.fingerprint.series[0]));
        let want = claim.map_or("none".to_string(), |c| {
            let mut s = format!("{} {},{},{}", c.class, c.dims[0], c.dims[1], c.dims[2]);
            if let Some((m, k)) = c.c1 {
                s += &format!(" C1=({m},{k})");
            }
            s
        });
        let (m, k) = n.fingerprint.series[0];
        let got = format!("{},{},{} C1=({m},{k})", d[0], d[1], d[2]);
        *rows.entry(n.id.clone()).or_insert(true) &= ok;
        lines.push(ReportLine { key: n.label(), fields: vec![("claim".into(), want), ("computed".into(), got)], ok });
    }
    let matched = rows.values().filter(|&&v| v).count();
    let pass = !rows.is_empty() && matched == rows.len();
    Ok(Report {
        target: Target::Table5,
        summary: vec![
            ("rows".into(), format!("{matched}/{}", rows.len())),
            ("bindings".into(), lines.len().to_string()),
        ],
        lines,
        pass,
    })
}

/// Classification of the sampled triples whose doubles have superdimension `dims`.
pub fn classify_dims(catalog: &Catalog, dims: (usize, usize), opts: &ReportOptions) -> Result<ClassificationReport> {
    let nodes = sample_nodes(catalog, file_for(dims), &opts.bindings)?;
    let half = (dims.0 / 2, dims.1 / 2);
    let certs: Vec<&IsoCertificate> =
        catalog.certificates().iter().map(|e| &e.value).filter(|c| c.source.super_dim() == half).collect();
    classify_doubles(nodes, &certs, &ClassifyOptions { budget: opts.budget })
}

/// Agreement of a classification with the encoded class labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCheck {
    /// Class index to its distinct expected labels.
    pub labels: Vec<Vec<String>>,
    /// Labels spread over more than one class.
    pub split: Vec<String>,
    pub edges_verified: bool,
    /// Pairs of classes with no separation record.
    pub unseparated: Vec<(usize, usize)>,
}

impl ClassCheck {
    pub fn passed(&self) -> bool {
        self.labels.iter().all(|l| l.len() == 1)
            && self.split.is_empty()
            && self.edges_verified
            && self.unseparated.is_empty()
    }
}

pub fn check_classes(rep: &ClassificationReport) -> ClassCheck {
    let mut labels = Vec::new();
    let mut owner: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (ci, c) in rep.classes.iter().enumerate() {
        let mut l: Vec<String> = c
            .iter()
            .map(|&i| expected_class(&rep.nodes[i].id, &rep.nodes[i].bindings).unwrap_or_else(|| "?".into()))
            .collect();
        l.sort();
        l.dedup();
        for x in &l {
            owner.entry(x.clone()).or_default().push(ci);
        }
        labels.push(l);
    }
    let split = owner.into_iter().filter(|(_, v)| v.len() > 1).map(|(k, _)| k).collect();
    let k = rep.classes.len();
    let unseparated =
        (0..k).flat_map(|x| (x + 1..k).map(move |y| (x, y))).filter(|&(x, y)| rep.separation(x, y).is_none()).collect();
    ClassCheck { labels, split, edges_verified: rep.edges_verified(), unseparated }
}

fn theorem_report(catalog: &Catalog, target: Target, dims: (usize, usize), opts: &ReportOptions) -> Result<Report> {
    let rep = classify_dims(catalog, dims, opts)?;
    let check = check_classes(&rep);
    let mut lines = Vec::new();
    for (ci, c) in rep.classes.iter().enumerate() {
        let members: Vec<String> = c.iter().map(|&i| rep.nodes[i].label()).collect();
        let evidence: Vec<String> = rep
            .edges
            .iter()
            .filter(|e| c.contains(&e.source))
            .map(|e| format!("{}->{}@{}", rep.nodes[e.source].label(), rep.nodes[e.target].label(), e.evidence))
            .collect();
        let mut fields = vec![
            ("claim".to_string(), check.labels[ci].join("|")),
            ("fingerprint".into(), rep.nodes[c[0]].fingerprint.to_string()),
            ("representative".into(), rep.nodes[c[0]].label()),
            ("members".into(), members.len().to_string()),
            ("nodes".into(), members.join(";")),
        ];
        if !evidence.is_empty() {
            fields.push(("edges".into(), evidence.join(";")));
        }
        let ok = check.labels[ci].len() == 1 && !check.labels[ci].iter().any(|l| check.split.contains(l));
        lines.push(ReportLine { key: format!("class{}", ci + 1), fields, ok });
    }
    for s in &rep.separations {
        if let ExhaustReason::Fingerprint(..) = s.reason {
            continue;
        }
        let reason = match s.reason {
            ExhaustReason::Budget => "budget",
            _ => "space",
        };
        lines.push(ReportLine {
            key: format!("sep[{};{}]", rep.nodes[s.a].label(), rep.nodes[s.b].label()),
            fields: vec![("exhausted".into(), reason.into()), ("nodes".into(), format!("{}/{}", s.nodes, s.budget))],
            ok: true,
        });
    }
    let expected: std::collections::BTreeSet<&String> = check.labels.iter().flatten().collect();
    let fp = rep.separations.iter().filter(|s| matches!(s.reason, ExhaustReason::Fingerprint(..))).count();
    let summary = vec![
        ("classes".into(), rep.classes.len().to_string()),
        ("claimed".into(), expected.len().to_string()),
        ("triples".into(), rep.nodes.len().to_string()),
        ("certificates".into(), rep.edges.len().to_string()),
        ("certificates-verified".into(), check.edges_verified.to_string()),
        ("fingerprint-separations".into(), fp.to_string()),
        ("search-separations".into(), (rep.separations.len() - fp).to_string()),
        ("unseparated".into(), check.unseparated.len().to_string()),
    ];
    Ok(Report { target, lines, summary, pass: check.passed() })
}
