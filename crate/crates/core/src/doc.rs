//! JSON documents for groupoids, bundles, models and forms.
//!
//! Every document carries a `"kind"` tag. All references are by name and
//! are resolved on load; emitted documents list everything in canonical
//! (sorted) order so that output is byte-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::forms::{Form, GaugeForm, GroupForm};
use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;
use crate::neighbourhood::{BundleWithNeighbours, Neighbourhood, DEFAULT_MAX_LIFT};
use crate::report::{Report, Violation};
use crate::torsor::{FractionArrow, Point, PrincipalBundle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Groupoid(GroupoidDoc),
    Bundle(BundleDoc),
    Model(ModelDoc),
    Form(FormDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub elements: Vec<String>,
    /// `mul[i][j]` names the product `elements[i] * elements[j]`.
    pub mul: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    /// `[left, right, left∘right]`.
    pub compose: Vec<[String; 3]>,
    pub identities: BTreeMap<String, String>,
    pub inverses: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub base: Vec<String>,
    pub group: GroupDoc,
    pub total: Vec<String>,
    pub proj: BTreeMap<String, String>,
    /// `action[x][i]` names `x · group.elements[i]`.
    pub action: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub edge: [String; 2],
    /// `[num, den]`, an arrow from the fibre over `edge[1]` to the fibre over `edge[0]`.
    pub arrow: [String; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Base,
    Total,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueDoc {
    Element(String),
    Arrow([String; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntryDoc {
    pub simplex: Vec<String>,
    pub value: ValueDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub carrier: Carrier,
    pub degree: usize,
    pub values: Vec<FormEntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub bundle: BundleDoc,
    /// Unordered neighbour pairs; reflexive and symmetric closure is implied.
    pub base_relation: Vec<[String; 2]>,
    pub total_relation: Vec<[String; 2]>,
    #[serde(default = "default_max_lift")]
    pub max_lift: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub connections: BTreeMap<String, Vec<EdgeDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub forms: BTreeMap<String, FormDoc>,
}

fn default_max_lift() -> usize {
    DEFAULT_MAX_LIFT
}

/// Parses a document, reporting the line and column of syntax errors.
pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        Error::Parse(format!("line {}, column {}: {msg}", e.line(), e.column()))
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

// ---- groups ----

impl GroupDoc {
    pub fn from_group(g: &FiniteGroup) -> Self {
        Self {
            elements: g.names().to_vec(),
            mul: g
                .elements()
                .map(|x| g.elements().map(|y| g.name(g.mul(x, y)).to_string()).collect())
                .collect(),
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        let index: BTreeMap<&str, usize> =
            self.elements.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let table = self
            .mul
            .iter()
            .map(|row| {
                row.iter()
                    .map(|n| {
                        index.get(n.as_str()).copied().ok_or_else(|| Error::UnknownName {
                            name: n.clone(),
                            context: "group multiplication table".into(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(self.elements.clone(), table)
    }
}

// ---- groupoids ----

impl GroupoidDoc {
    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        let name = |f| g.arrow_name(f).to_string();
        let mut compose = Vec::new();
        for l in g.arrows() {
            for r in g.arrows() {
                if let Some(k) = g.table_entry(l, r) {
                    compose.push([name(l), name(r), name(k)]);
                }
            }
        }
        Self {
            objects: g.objects().map(|o| g.object_name(o).to_string()).collect(),
            arrows: g
                .arrows()
                .map(|f| ArrowDoc {
                    name: name(f),
                    dom: g.object_name(g.dom(f)).into(),
                    cod: g.object_name(g.cod(f)).into(),
                })
                .collect(),
            compose,
            identities: g
                .objects()
                .map(|o| (g.object_name(o).to_string(), name(g.identity(o))))
                .collect(),
            inverses: g.arrows().map(|f| (name(f), name(g.inverse(f)))).collect(),
        }
    }

    pub fn to_groupoid(&self) -> Result<FiniteGroupoid> {
        FiniteGroupoid::from_named(
            self.objects.clone(),
            self.arrows
                .iter()
                .map(|a| (a.name.clone(), a.dom.clone(), a.cod.clone()))
                .collect(),
            self.compose
                .iter()
                .map(|[l, r, k]| (l.clone(), r.clone(), k.clone()))
                .collect(),
            self.identities.clone().into_iter().collect(),
            self.inverses.clone().into_iter().collect(),
        )
    }
}

// ---- bundles ----

fn lookup(index: &BTreeMap<&str, usize>, name: &str, context: &str) -> Result<usize> {
    index.get(name).copied().ok_or_else(|| Error::UnknownName {
        name: name.to_string(),
        context: context.to_string(),
    })
}

impl BundleDoc {
    pub fn from_bundle(b: &PrincipalBundle) -> Self {
        let g = b.group();
        Self {
            base: b.base_names().to_vec(),
            group: GroupDoc::from_group(g),
            total: b.point_names().to_vec(),
            proj: b
                .points()
                .map(|x| (b.point_name(x).to_string(), b.base_name(b.proj(x)).to_string()))
                .collect(),
            action: b
                .points()
                .map(|x| {
                    let row = g.elements().map(|h| b.point_name(b.act(x, h)).to_string()).collect();
                    (b.point_name(x).to_string(), row)
                })
                .collect(),
        }
    }

    pub fn to_bundle(&self) -> Result<PrincipalBundle> {
        let group = self.group.to_group()?;
        let base_ix: BTreeMap<&str, usize> =
            self.base.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let total_ix: BTreeMap<&str, usize> =
            self.total.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        for key in self.proj.keys().chain(self.action.keys()) {
            lookup(&total_ix, key, "total space")?;
        }
        // rows follow the document's element order; the group sorts its elements
        let element_order = self
            .group
            .elements
            .iter()
            .map(|n| group.elem(n))
            .collect::<Result<Vec<_>>>()?;
        let mut proj = Vec::with_capacity(self.total.len());
        let mut act = Vec::with_capacity(self.total.len());
        for x in &self.total {
            let a = self
                .proj
                .get(x)
                .ok_or_else(|| Error::Shape(format!("no projection for point {x}")))?;
            proj.push(lookup(&base_ix, a, "base")?);
            let row = self
                .action
                .get(x)
                .ok_or_else(|| Error::Shape(format!("no action row for point {x}")))?;
            if row.len() != group.order() {
                return Err(Error::Shape(format!(
                    "action row for {x} has {} entries, group has {} elements",
                    row.len(),
                    group.order()
                )));
            }
            let mut sorted_row = vec![0; group.order()];
            for (i, y) in row.iter().enumerate() {
                sorted_row[element_order[i].0] = lookup(&total_ix, y, "total space")?;
            }
            act.push(sorted_row);
        }
        PrincipalBundle::new(self.base.clone(), self.total.clone(), proj, group, act)
    }
}

// ---- relations ----

fn relation_doc(n: &Neighbourhood, name: impl Fn(usize) -> String) -> Vec<[String; 2]> {
    n.edges().into_iter().map(|(a, b)| [name(a), name(b)]).collect()
}

fn relation_from_doc(
    size: usize,
    pairs: &[[String; 2]],
    resolve: impl Fn(&str) -> Result<usize>,
) -> Result<Neighbourhood> {
    let pairs = pairs
        .iter()
        .map(|[a, b]| Ok((resolve(a)?, resolve(b)?)))
        .collect::<Result<Vec<_>>>()?;
    Neighbourhood::from_pairs(size, pairs)
}

// ---- forms ----

type Resolver<'a> = Box<dyn Fn(&str) -> Result<usize> + 'a>;

/// A form read from a document, by value type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadedForm {
    Group(Carrier, GroupForm),
    Gauge(GaugeForm),
}

impl FormDoc {
    pub fn from_group_form(bn: &BundleWithNeighbours, carrier: Carrier, form: &GroupForm) -> Self {
        let g = bn.group();
        Self {
            carrier,
            degree: form.degree(),
            values: form
                .iter()
                .map(|(s, v)| FormEntryDoc {
                    simplex: simplex_names(bn, carrier, &s),
                    value: ValueDoc::Element(g.name(v).into()),
                })
                .collect(),
        }
    }

    pub fn from_gauge_form(bn: &BundleWithNeighbours, form: &GaugeForm) -> Self {
        let b = bn.bundle();
        Self {
            carrier: Carrier::Base,
            degree: form.degree(),
            values: form
                .iter()
                .map(|(s, f)| FormEntryDoc {
                    simplex: bn.base_names(&s),
                    value: ValueDoc::Arrow([
                        b.point_name(f.num).to_string(),
                        b.point_name(f.den).to_string(),
                    ]),
                })
                .collect(),
        }
    }

    /// Resolves names against `bn`. The form must be defined on exactly the
    /// simplices of its carrier, with one value type throughout.
    pub fn load(&self, bn: &BundleWithNeighbours) -> Result<LoadedForm> {
        let b = bn.bundle();
        let (rel, resolve): (&Neighbourhood, Resolver<'_>) = match self.carrier {
            Carrier::Base => (bn.base(), Box::new(|n: &str| b.base_point(n))),
            Carrier::Total => (bn.total(), Box::new(|n: &str| b.point(n).map(|p| p.0))),
        };
        let mut entries = BTreeMap::new();
        for e in &self.values {
            if e.simplex.len() != self.degree + 1 {
                return Err(Error::Shape(format!(
                    "simplex ({}) has the wrong length for degree {}",
                    e.simplex.join(","),
                    self.degree
                )));
            }
            let s = e.simplex.iter().map(|n| resolve(n)).collect::<Result<Vec<_>>>()?;
            if !rel.is_simplex(&s) {
                return Err(Error::Precondition(format!("({}) is not a simplex", e.simplex.join(","))));
            }
            if entries.insert(s, &e.value).is_some() {
                return Err(Error::Shape(format!("simplex ({}) listed twice", e.simplex.join(","))));
            }
        }
        let all_arrows = entries.values().all(|v| matches!(v, ValueDoc::Arrow(_)));
        let all_elements = entries.values().all(|v| matches!(v, ValueDoc::Element(_)));
        let missing = |s: &[usize]| Error::Shape(format!("form has no value on {s:?}"));
        if all_elements {
            let g = bn.group();
            let form: GroupForm = Form::try_from_fn(rel, self.degree, |s| match entries.get(s) {
                Some(ValueDoc::Element(n)) => g.elem(n),
                _ => Err(missing(s)),
            })?;
            return Ok(LoadedForm::Group(self.carrier, form));
        }
        if all_arrows && self.carrier == Carrier::Base {
            let form: GaugeForm = Form::try_from_fn(rel, self.degree, |s| match entries.get(s) {
                Some(ValueDoc::Arrow([num, den])) => {
                    let f = b.make_arrow(b.point(num)?, b.point(den)?)?;
                    if b.arrow_dom(f) != s[0] || b.arrow_cod(f) != s[0] {
                        return Err(Error::BookKeeping(format!(
                            "value [{num},{den}] is not an endo-arrow at {}",
                            b.base_name(s[0])
                        )));
                    }
                    Ok(f)
                }
                _ => Err(missing(s)),
            })?;
            return Ok(LoadedForm::Gauge(form));
        }
        Err(Error::Shape(
            "form values must be all group elements, or all arrows on the base".into(),
        ))
    }
}

fn simplex_names(bn: &BundleWithNeighbours, carrier: Carrier, s: &[usize]) -> Vec<String> {
    match carrier {
        Carrier::Base => bn.base_names(s),
        Carrier::Total => bn.point_names(s),
    }
}

// ---- models ----

/// A loaded model: the bundle with its relations plus named extras.
#[derive(Debug, Clone)]
pub struct Model {
    pub bn: BundleWithNeighbours,
    pub connections: BTreeMap<String, Connection>,
    pub forms: BTreeMap<String, LoadedForm>,
}

impl Model {
    pub fn new(bn: BundleWithNeighbours) -> Self {
        Self {
            bn,
            connections: BTreeMap::new(),
            forms: BTreeMap::new(),
        }
    }

    /// Every validator: bundle axioms, neighbour axioms, connection laws and
    /// form domains.
    pub fn validate(&self) -> Report {
        let mut report = self.bn.validate();
        for (name, nabla) in &self.connections {
            for mut v in nabla.validate(&self.bn).violations {
                v.detail = format!("connection {name}: {}", v.detail);
                report.push(v);
            }
        }
        for (name, form) in &self.forms {
            if let LoadedForm::Gauge(alpha) = form {
                if !crate::forms::is_gauge_valued(&self.bn, alpha) {
                    report.push(Violation::new("gauge form values", vec![name.clone()], ""));
                }
            }
        }
        report
    }

    pub fn connection(&self, name: &str) -> Result<&Connection> {
        self.connections.get(name).ok_or_else(|| Error::UnknownName {
            name: name.into(),
            context: "connections".into(),
        })
    }

    pub fn to_doc(&self) -> ModelDoc {
        let b = self.bn.bundle();
        let base_name = |a: usize| b.base_name(a).to_string();
        let point_name = |x: usize| b.point_name(Point(x)).to_string();
        ModelDoc {
            bundle: BundleDoc::from_bundle(b),
            base_relation: relation_doc(self.bn.base(), base_name),
            total_relation: relation_doc(self.bn.total(), point_name),
            max_lift: self.bn.max_lift(),
            connections: self
                .connections
                .iter()
                .map(|(name, nabla)| (name.clone(), connection_doc(&self.bn, nabla)))
                .collect(),
            forms: self
                .forms
                .iter()
                .map(|(name, f)| {
                    let doc = match f {
                        LoadedForm::Group(c, form) => FormDoc::from_group_form(&self.bn, *c, form),
                        LoadedForm::Gauge(form) => FormDoc::from_gauge_form(&self.bn, form),
                    };
                    (name.clone(), doc)
                })
                .collect(),
        }
    }
}

pub fn connection_doc(bn: &BundleWithNeighbours, nabla: &Connection) -> Vec<EdgeDoc> {
    let b = bn.bundle();
    nabla
        .edges(bn)
        .into_iter()
        .map(|((x, y), f)| EdgeDoc {
            edge: [b.base_name(x).into(), b.base_name(y).into()],
            arrow: [b.point_name(f.num).into(), b.point_name(f.den).into()],
        })
        .collect()
}

pub fn connection_from_doc(bn: &BundleWithNeighbours, edges: &[EdgeDoc]) -> Result<Connection> {
    let b = bn.bundle();
    let edges = edges
        .iter()
        .map(|e| {
            let x = b.base_point(&e.edge[0])?;
            let y = b.base_point(&e.edge[1])?;
            let f = FractionArrow {
                num: b.point(&e.arrow[0])?,
                den: b.point(&e.arrow[1])?,
            };
            Ok(((x, y), f))
        })
        .collect::<Result<Vec<_>>>()?;
    Connection::from_edges(bn, edges)
}

impl ModelDoc {
    pub fn to_model(&self) -> Result<Model> {
        if self.max_lift == 0 {
            return Err(Error::Shape("max_lift must be positive".into()));
        }
        let bundle = self.bundle.to_bundle()?;
        let base = relation_from_doc(bundle.base_size(), &self.base_relation, |n| bundle.base_point(n))?;
        let total = relation_from_doc(bundle.total_size(), &self.total_relation, |n| {
            bundle.point(n).map(|p| p.0)
        })?;
        let bn = BundleWithNeighbours::new(bundle, base, total, self.max_lift)?;
        let mut model = Model::new(bn);
        for (name, edges) in &self.connections {
            let nabla = connection_from_doc(&model.bn, edges)
                .map_err(|e| Error::Precondition(format!("connection {name}: {e}")))?;
            model.connections.insert(name.clone(), nabla);
        }
        for (name, doc) in &self.forms {
            let form = doc
                .load(&model.bn)
                .map_err(|e| Error::Precondition(format!("form {name}: {e}")))?;
            model.forms.insert(name.clone(), form);
        }
        Ok(model)
    }
}
