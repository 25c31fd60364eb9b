use std::fs;
use std::path::Path;

use serde::Serialize;

use gauge_core::connection::{connection_count, curvature as curvature_form, enumerate_connections, find_flat, Connection};
use gauge_core::doc::{parse_document, to_json, Document, FormDoc, LoadedForm, Model};
use gauge_core::forms::is_gauge_valued;
use gauge_core::neighbourhood::{trivial_model, twisted_model};
use gauge_core::verify::{self, Options, Theorem};
use gauge_core::{Error, FiniteGroup, Report, Violation};

use crate::params::{parse_base, parse_connection, parse_twist};
use crate::{Format, ModelKind, Space, What};

/// Why a command stopped; each maps to one exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse(String),
    Property(String),
    Ceiling(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Property(_) => 1,
            Failure::Ceiling(_) => 2,
            Failure::Usage(_) => 64,
            Failure::Parse(_) => 65,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Property(m) | Failure::Ceiling(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse(_) | Error::UnknownName { .. } | Error::DuplicateName(_) | Error::Shape(_) => {
                Failure::Parse(msg)
            }
            Error::CeilingExceeded { .. } => Failure::Ceiling(msg),
            _ => Failure::Property(msg),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read_document(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn kind(doc: &Document) -> &'static str {
    match doc {
        Document::Groupoid(_) => "groupoid",
        Document::Bundle(_) => "bundle",
        Document::Model(_) => "model",
        Document::Form(_) => "form",
    }
}

fn read_model(path: &Path) -> Result<Model, Failure> {
    match read_document(path)? {
        Document::Model(doc) => Ok(doc.to_model()?),
        other => Err(Failure::Parse(format!(
            "{}: expected a model document, found a {} document",
            path.display(),
            kind(&other)
        ))),
    }
}

fn write_output(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    kind: &'a str,
    valid: bool,
    summary: String,
    violations: &'a [Violation],
}

pub fn validate(path: &Path, model_path: Option<&Path>, json: bool) -> Outcome {
    let doc = read_document(path)?;
    let kind = kind(&doc);
    let (summary, report) = match doc {
        Document::Groupoid(d) => {
            let g = d.to_groupoid()?;
            let transitive = if g.is_transitive() { "transitive" } else { "not transitive" };
            (
                format!("{} objects, {} arrows, {transitive}", g.object_count(), g.arrow_count()),
                g.validate(),
            )
        }
        Document::Bundle(d) => {
            let b = d.to_bundle()?;
            (
                format!("{} base points, {} points, group of order {}", b.base_size(), b.total_size(), b.group().order()),
                b.validate(),
            )
        }
        Document::Model(d) => {
            let m = d.to_model()?;
            let b = m.bn.bundle();
            (
                format!(
                    "{} base points, {} points, group of order {}{}, {} connections, {} forms",
                    b.base_size(),
                    b.total_size(),
                    b.group().order(),
                    if b.group().is_commutative() { " (commutative)" } else { "" },
                    m.connections.len(),
                    m.forms.len()
                ),
                m.validate(),
            )
        }
        Document::Form(d) => {
            let mp = model_path.ok_or_else(|| Failure::Usage("form documents need --model".into()))?;
            let m = read_model(mp)?;
            let mut report = Report::new();
            let summary = match d.load(&m.bn)? {
                LoadedForm::Group(_, f) => format!("group-valued {}-form, {} values", f.degree(), f.len()),
                LoadedForm::Gauge(f) => {
                    if !is_gauge_valued(&m.bn, &f) {
                        report.push(Violation::new("gauge-values", vec![], "some value is not an arrow between the fibres of its endpoints"));
                    }
                    format!("gauge {}-form, {} values", f.degree(), f.len())
                }
            };
            (summary, report)
        }
    };
    let valid = report.is_empty();
    if json {
        print!("{}", to_json(&ValidationReport { kind, valid, summary, violations: &report.violations }));
    } else {
        println!("{kind}: {summary}");
        if valid {
            println!("valid");
        } else {
            println!("{} violations:", report.len());
            for v in report.iter() {
                println!("  {v}");
            }
        }
    }
    Ok(valid)
}

fn require_valid(m: &Model) -> Result<(), Failure> {
    let report = m.validate();
    if report.is_empty() {
        return Ok(());
    }
    Err(Failure::Property(format!("model does not validate:\n  {}", report.to_string().replace('\n', "\n  "))))
}

pub fn verify(path: &Path, theorem: Theorem, json: bool, seed: u64) -> Outcome {
    let m = read_model(path)?;
    require_valid(&m)?;
    let outcome = verify::run(&m, theorem, Options { seed })?;
    if json {
        print!("{}", to_json(&outcome));
    } else {
        println!("{}", outcome.summary());
        println!("  {}", theorem.statement());
        for n in &outcome.notes {
            println!("  note: {n}");
        }
        for r in outcome.records.iter().filter(|r| !r.ok).take(20) {
            println!("  FAIL {}: {}", r.instance, r.detail);
        }
    }
    Ok(outcome.passed)
}

pub fn curvature(path: &Path, name: &str, format: Format, output: Option<&Path>) -> Outcome {
    let m = read_model(path)?;
    require_valid(&m)?;
    let nabla = m.connection(name)?;
    let bn = &m.bn;
    let b = bn.bundle();
    let r = curvature_form(bn, nabla)?;
    let text = match format {
        Format::File => to_json(&Document::Form(FormDoc::from_gauge_form(bn, &r))),
        Format::Table => {
            let commutative = b.group().is_commutative();
            let mut rows = vec![vec!["simplex".to_string(), "curvature".to_string()]];
            if commutative {
                rows[0].push("value".into());
            }
            for (s, f) in r.iter() {
                let mut row = vec![bn.base_names(&s).join(","), b.arrow_name(f)];
                if commutative {
                    row.push(b.group().name(b.gauge_to_group(f)?).to_string());
                }
                rows.push(row);
            }
            render_table(&rows)
        }
    };
    write_output(&text, output)?;
    Ok(true)
}

fn render_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn generate(
    kind: ModelKind,
    base: &str,
    group: &str,
    twist: Option<&str>,
    max_lift: usize,
    connections: &[String],
    output: Option<&Path>,
) -> Outcome {
    let base = parse_base(base).map_err(Failure::Usage)?;
    let group = FiniteGroup::by_name(group).map_err(|e| Failure::Usage(e.to_string()))?;
    let (bn, report) = match kind {
        ModelKind::Trivial => {
            if twist.is_some() {
                return Err(Failure::Usage("--twist applies to twisted models only".into()));
            }
            let bn = trivial_model(base.names.clone(), base.relation.clone(), group)?;
            (bn, Report::new())
        }
        ModelKind::Twisted => {
            let t = parse_twist(twist.unwrap_or("flat"), &base, &group).map_err(Failure::Usage)?;
            twisted_model(base.names.clone(), base.relation.clone(), group, &t)?
        }
    };
    let bn = bn.with_max_lift(max_lift).map_err(|e| Failure::Usage(e.to_string()))?;
    // the lifting check depends on max_lift, so rerun it
    let report = if max_lift == bn.max_lift() && report.is_empty() { bn.validate() } else { report };
    let mut model = Model::new(bn);
    for text in connections {
        let (name, shifts) = parse_connection(text, &model.bn).map_err(Failure::Usage)?;
        let nabla = Connection::shifted(&model.bn, &shifts).map_err(|e| Failure::Usage(e.to_string()))?;
        if model.connections.insert(name.clone(), nabla).is_some() {
            return Err(Failure::Usage(format!("connection {name} given twice")));
        }
    }
    write_output(&to_json(&Document::Model(model.to_doc())), output)?;
    if !report.is_empty() {
        eprintln!("warning: generated model does not validate:");
        for v in report.iter() {
            eprintln!("  {v}");
        }
    }
    Ok(report.is_empty())
}

pub fn enumerate(path: &Path, what: What, space: Space, degree: usize, ceiling: u128) -> Outcome {
    let m = read_model(path)?;
    let bn = &m.bn;
    match what {
        What::Simplices => {
            let (list, names, label) = match space {
                Space::Base => (bn.base_simplices(degree), bn.bundle().base_names(), "base"),
                Space::Total => (bn.total_simplices(degree), bn.bundle().point_names(), "total space"),
            };
            if list.len() as u128 > ceiling {
                return Err(Failure::Ceiling(format!(
                    "enumeration of {} items exceeds ceiling {ceiling}",
                    list.len()
                )));
            }
            for s in list.iter() {
                let parts: Vec<&str> = s.iter().map(|&i| names[i].as_str()).collect();
                println!("({})", parts.join(","));
            }
            println!("{} simplices of degree {degree} on the {label}", list.len());
        }
        What::Connections => {
            require_valid(&m)?;
            let all = enumerate_connections(bn, ceiling)?;
            for (i, c) in all.iter().enumerate() {
                println!("#{i} {}", c.describe(bn));
            }
            println!("{} connections", all.len());
        }
        What::Flat => {
            require_valid(&m)?;
            let flat = find_flat(bn, ceiling)?;
            for c in &flat {
                println!("{}", c.describe(bn));
            }
            println!("{} of {} connections are flat", flat.len(), connection_count(bn));
        }
    }
    Ok(true)
}
