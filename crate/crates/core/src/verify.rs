//! Exhaustive (or seeded random) checks of the correspondences between
//! connections, forms and curvature on a single model.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::connection::{
    check_conjugation_law, check_curvature_rotation, check_normalization, check_shift_law,
    connection_count, connection_difference, connection_to_form, curvature, descend_curvature,
    enumerate_connection_forms, enumerate_connections, form_to_connection, random_connection,
    verify_curvature_identity, Connection,
};
use crate::doc::Model;
use crate::error::{Error, Result};
use crate::forms::{
    check_hat_relation, check_transform, coboundary1, descend_invariant, hat_transform,
    inverse_form, is_equivariant, is_horizontal, product_form, pullback, random_gauge_form,
    random_group_form, GroupForm,
};
use crate::group::{Elem, FiniteGroup};
use crate::neighbourhood::{BundleWithNeighbours, Neighbourhood};

pub const DEFAULT_SEED: u64 = 20_240_601;
/// Connections are enumerated up to this many; beyond it, a random sample is used.
pub const EXHAUSTIVE_CONNECTIONS: u128 = 10_000;
pub const RANDOM_CONNECTIONS: usize = 100;
/// Base forms are enumerated when there are at most this many.
pub const EXHAUSTIVE_FORMS: u128 = 4096;
pub const RANDOM_FORMS: usize = 100;
pub const RANDOM_PAIRS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Curvature,
    Corollary,
    Eq1Failure,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::Prop1,
        Theorem::Prop2,
        Theorem::Prop3,
        Theorem::Prop4,
        Theorem::Curvature,
        Theorem::Corollary,
        Theorem::Eq1Failure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Prop1 => "prop1",
            Theorem::Prop2 => "prop2",
            Theorem::Prop3 => "prop3",
            Theorem::Prop4 => "prop4",
            Theorem::Curvature => "curvature",
            Theorem::Corollary => "corollary",
            Theorem::Eq1Failure => "eq1-failure",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Theorem::Prop1 => "connections and connection forms correspond bijectively",
            Theorem::Prop2 => "for commutative G, horizontal equivariant forms are exactly pullbacks",
            Theorem::Prop3 => "hat and check are inverse bijections between gauge forms and horizontal equivariant forms",
            Theorem::Prop4 => "the hat of a connection difference is the quotient of connection forms",
            Theorem::Curvature => "the hat of the curvature is the coboundary of the connection form",
            Theorem::Corollary => "for commutative G, curvature descends to a G-valued 2-form on the base",
            Theorem::Eq1Failure => "gauge arrows are group elements exactly when G is commutative",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theorem `{s}`")))
    }
}

/// One checked instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub instance: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub theorem: Theorem,
    pub passed: bool,
    pub checked: usize,
    pub failures: usize,
    pub notes: Vec<String>,
    pub records: Vec<Record>,
}

impl Outcome {
    fn new(theorem: Theorem) -> Self {
        Self {
            theorem,
            passed: true,
            checked: 0,
            failures: 0,
            notes: Vec::new(),
            records: Vec::new(),
        }
    }

    fn record(&mut self, instance: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.passed = false;
        }
        self.records.push(Record {
            instance: instance.into(),
            ok,
            detail: detail.into(),
        });
    }

    fn check(&mut self, instance: impl Into<String>, result: Result<(), String>) {
        match result {
            Ok(()) => self.record(instance, true, ""),
            Err(e) => self.record(instance, false, e),
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} instances, {} failures)",
            self.theorem,
            if self.passed { "holds" } else { "FAILS" },
            self.checked,
            self.failures
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED }
    }
}

pub fn run(model: &Model, theorem: Theorem, opts: Options) -> Result<Outcome> {
    let mut out = Outcome::new(theorem);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match theorem {
        Theorem::Prop1 => prop1(model, &mut out, &mut rng)?,
        Theorem::Prop2 => prop2(&model.bn, &mut out, &mut rng)?,
        Theorem::Prop3 => prop3(model, &mut out, &mut rng)?,
        Theorem::Prop4 => prop4(model, &mut out, &mut rng)?,
        Theorem::Curvature => curvature_identity(model, &mut out, &mut rng)?,
        Theorem::Corollary => corollary(model, &mut out, &mut rng)?,
        Theorem::Eq1Failure => eq1_failure(&model.bn, &mut out)?,
    }
    Ok(out)
}

/// All connections when there are at most [`EXHAUSTIVE_CONNECTIONS`],
/// otherwise [`RANDOM_CONNECTIONS`] seeded random ones; named connections of
/// the model come first.
pub fn sample_connections(model: &Model, rng: &mut ChaCha8Rng) -> Result<(Vec<(String, Connection)>, bool)> {
    let bn = &model.bn;
    let mut out: Vec<(String, Connection)> =
        model.connections.iter().map(|(n, c)| (n.clone(), c.clone())).collect();
    let exhaustive = connection_count(bn) <= EXHAUSTIVE_CONNECTIONS;
    if exhaustive {
        for (i, c) in enumerate_connections(bn, EXHAUSTIVE_CONNECTIONS)?.into_iter().enumerate() {
            out.push((format!("#{i}"), c));
        }
    } else {
        for i in 0..RANDOM_CONNECTIONS {
            out.push((format!("random #{i}"), random_connection(bn, rng)?));
        }
    }
    Ok((out, exhaustive))
}

fn label(bn: &BundleWithNeighbours, name: &str, c: &Connection) -> String {
    format!("connection {name} ({})", c.describe(bn))
}

fn prop1(model: &Model, out: &mut Outcome, rng: &mut ChaCha8Rng) -> Result<()> {
    let bn = &model.bn;
    let (sample, exhaustive) = sample_connections(model, rng)?;
    if !exhaustive {
        out.note(format!("{} connections; checked a seeded random sample", connection_count(bn)));
    }
    for (name, nabla) in &sample {
        let omega = connection_to_form(bn, nabla)?;
        let laws = [check_normalization, check_shift_law, check_conjugation_law]
            .iter()
            .find_map(|c| c(bn, &omega).err().map(|v| v.describe(bn)));
        let result = match (laws, form_to_connection(bn, &omega)) {
            (Some(v), _) => Err(v),
            (None, Ok(back)) if &back == nabla => Ok(()),
            (None, Ok(back)) => Err(format!("round trip gave {}", back.describe(bn))),
            (None, Err(e)) => Err(e.to_string()),
        };
        out.check(label(bn, name, nabla), result);
    }
    if exhaustive {
        let forms = enumerate_connection_forms(bn, EXHAUSTIVE_CONNECTIONS)?;
        let count = connection_count(bn);
        out.check(
            "admissible 1-forms are as many as connections",
            if forms.len() as u128 == count {
                Ok(())
            } else {
                Err(format!("{} admissible forms, {count} connections", forms.len()))
            },
        );
        for (i, omega) in forms.iter().enumerate() {
            let result = form_to_connection(bn, omega)
                .and_then(|nabla| connection_to_form(bn, &nabla))
                .map_err(|e| e.to_string())
                .and_then(|back| if &back == omega { Ok(()) } else { Err("round trip changed the form".into()) });
            out.check(format!("admissible form #{i}"), result);
        }
    }
    Ok(())
}

/// Every G-valued k-form on `n` if there are at most `limit`, else `None`.
pub fn all_group_forms(n: &Neighbourhood, g: &FiniteGroup, degree: usize, limit: u128) -> Option<Vec<GroupForm>> {
    let simplices = n.enumerate_simplices(degree);
    let count = (g.order() as u128).checked_pow(simplices.len() as u32)?;
    if count > limit {
        return None;
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; simplices.len()];
    loop {
        let mut it = digits.iter();
        out.push(
            GroupForm::try_from_simplices(n.size(), degree, &simplices, |_| Ok(Elem(*it.next().expect("one digit per simplex"))))
                .expect("in range"),
        );
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < g.order() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn base_form_sample(bn: &BundleWithNeighbours, degree: usize, rng: &mut ChaCha8Rng) -> (Vec<GroupForm>, bool) {
    match all_group_forms(bn.base(), bn.group(), degree, EXHAUSTIVE_FORMS) {
        Some(all) => (all, true),
        None => (
            (0..RANDOM_FORMS)
                .map(|_| random_group_form(bn.base(), bn.group(), degree, rng))
                .collect(),
            false,
        ),
    }
}

fn prop2(bn: &BundleWithNeighbours, out: &mut Outcome, rng: &mut ChaCha8Rng) -> Result<()> {
    if !bn.group().is_commutative() {
        let unit = GroupForm::constant(bn.total(), 1, bn.group().unit());
        let refused = matches!(descend_invariant(bn, &unit), Err(Error::NonCommutative(_)));
        out.note("group is not commutative: descent does not apply and must be refused");
        out.check(
            "descent refused for a non-commutative group",
            if refused { Ok(()) } else { Err("descent was not refused".into()) },
        );
        return Ok(());
    }
    for degree in 0..=2 {
        let (sample, exhaustive) = base_form_sample(bn, degree, rng);
        if !exhaustive {
            out.note(format!("degree {degree}: random sample of base forms"));
        }
        for (i, theta) in sample.iter().enumerate() {
            let pulled = pullback(bn, theta)?;
            let result = if let Err(c) = is_horizontal(bn, &pulled) {
                Err(format!("pullback not horizontal: {}", c.describe(bn)))
            } else if let Err(c) = is_equivariant(bn, &pulled) {
                Err(format!("pullback not equivariant: {}", c.describe(bn)))
            } else {
                match descend_invariant(bn, &pulled) {
                    Ok(back) if &back == theta => Ok(()),
                    Ok(_) => Err("descent of the pullback differs".into()),
                    Err(e) => Err(e.to_string()),
                }
            };
            out.check(format!("degree {degree} base form #{i}"), result);
        }
        // the other inclusion: every horizontal equivariant form descends
        let candidates: Vec<GroupForm> = match all_group_forms(bn.total(), bn.group(), degree, 1 << 16) {
            Some(all) => all
                .into_iter()
                .filter(|t| is_horizontal(bn, t).is_ok() && is_equivariant(bn, t).is_ok())
                .collect(),
            None => {
                out.note(format!(
                    "degree {degree}: horizontal equivariant forms built as hats of random gauge forms"
                ));
                (0..RANDOM_FORMS)
                    .map(|_| hat_transform(bn, &random_gauge_form(bn, degree, rng)?))
                    .collect::<Result<_>>()?
            }
        };
        for (i, theta) in candidates.iter().enumerate() {
            let result = descend_invariant(bn, theta)
                .and_then(|base| pullback(bn, &base))
                .map_err(|e| e.to_string())
                .and_then(|p| if &p == theta { Ok(()) } else { Err("not the pullback of its descent".into()) });
            out.check(format!("degree {degree} horizontal equivariant form #{i}"), result);
        }
    }
    Ok(())
}

fn prop3(model: &Model, out: &mut Outcome, rng: &mut ChaCha8Rng) -> Result<()> {
    let bn = &model.bn;
    let check_theta = |out: &mut Outcome, name: String, theta: &GroupForm| -> Result<()> {
        let he = is_horizontal(bn, theta).is_ok() && is_equivariant(bn, theta).is_ok();
        let result = match (he, check_transform(bn, theta)) {
            (true, Ok(alpha)) => match (hat_transform(bn, &alpha), check_hat_relation(bn, &alpha, theta)?) {
                (Ok(back), None) if &back == theta => Ok(()),
                (Ok(_), Some(s)) => Err(format!("hat relation fails at ({})", bn.point_names(&s).join(","))),
                (Ok(_), None) => Err("hat of check differs".into()),
                (Err(e), _) => Err(e.to_string()),
            },
            (true, Err(e)) => Err(e.to_string()),
            (false, Err(Error::Precondition(_))) => Ok(()),
            (false, Err(e)) => Err(format!("refused for the wrong reason: {e}")),
            (false, Ok(_)) => Err("check accepted a form that is not horizontal and equivariant".into()),
        };
        out.check(name, result);
        Ok(())
    };
    for degree in 0..=2 {
        let (sample, exhaustive) = base_form_sample(bn, degree, rng);
        if !exhaustive {
            out.note(format!("degree {degree}: random sample of pullbacks"));
        }
        for (i, theta) in sample.iter().enumerate() {
            check_theta(out, format!("degree {degree} pullback #{i}"), &pullback(bn, theta)?)?;
        }
        for i in 0..RANDOM_FORMS {
            let alpha = random_gauge_form(bn, degree, rng)?;
            let hat = hat_transform(bn, &alpha)?;
            let result = match (check_hat_relation(bn, &alpha, &hat)?, check_transform(bn, &hat)) {
                (Some(s), _) => Err(format!("hat relation fails at ({})", bn.point_names(&s).join(","))),
                (None, Ok(back)) if back == alpha => Ok(()),
                (None, Ok(_)) => Err("check of hat differs".into()),
                (None, Err(e)) => Err(e.to_string()),
            };
            out.check(format!("degree {degree} random gauge form #{i}"), result);
        }
    }
    let (sample, _) = sample_connections(model, rng)?;
    for (name, nabla) in &sample {
        let omega = connection_to_form(bn, nabla)?;
        check_theta(out, format!("form of {}", label(bn, name, nabla)), &omega)?;
        let d = coboundary1(bn.total(), bn.group(), &omega)?;
        check_theta(out, format!("coboundary of the form of {}", label(bn, name, nabla)), &d)?;
    }
    Ok(())
}

fn prop4(model: &Model, out: &mut Outcome, rng: &mut ChaCha8Rng) -> Result<()> {
    let bn = &model.bn;
    let g = bn.group();
    let (sample, _) = sample_connections(model, rng)?;
    let pairs: Vec<(usize, usize)> = if sample.len() * sample.len() <= 2500 {
        (0..sample.len()).flat_map(|i| (0..sample.len()).map(move |j| (i, j))).collect()
    } else {
        out.note(format!("{RANDOM_PAIRS} seeded random pairs of connections"));
        let idx: Vec<usize> = (0..sample.len()).collect();
        (0..RANDOM_PAIRS)
            .map(|_| (*idx.choose(rng).expect("nonempty"), *idx.choose(rng).expect("nonempty")))
            .collect()
    };
    let forms = sample
        .iter()
        .map(|(_, c)| connection_to_form(bn, c))
        .collect::<Result<Vec<_>>>()?;
    for (i, j) in pairs {
        let diff = connection_difference(bn, &sample[i].1, &sample[j].1)?;
        let lhs = hat_transform(bn, &diff)?;
        let rhs = product_form(g, &forms[i], &inverse_form(g, &forms[j]))?;
        let result = match lhs.iter().zip(rhs.iter()).find(|(l, r)| l != r) {
            None => Ok(()),
            Some(((s, l), (_, r))) => Err(format!(
                "at ({}): {} vs {}",
                bn.point_names(&s).join(","),
                g.name(l),
                g.name(r)
            )),
        };
        out.check(format!("pair ({}, {})", sample[i].0, sample[j].0), result);
    }
    Ok(())
}

fn curvature_identity(model: &Model, out: &mut Outcome, rng: &mut ChaCha8Rng) -> Result<()> {
    let bn = &model.bn;
    let (sample, exhaustive) = sample_connections(model, rng)?;
    if !exhaustive {
        out.note(format!("{} connections; checked a seeded random sample", connection_count(bn)));
    }
    for (name, nabla) in &sample {
        let report = verify_curvature_identity(bn, nabla)?;
        let rotation = check_curvature_rotation(bn, nabla)?;
        let result = match (report.is_empty(), rotation) {
            (true, None) => Ok(()),
            (false, _) => Err(report.to_string()),
            (true, Some(s)) => Err(format!(
                "curvature at ({}) is not conjugate to its rotation",
                bn.base_names(&s).join(",")
            )),
        };
        out.check(label(bn, name, nabla), result);
    }
    Ok(())
}

fn corollary(model: &Model, out: &mut Outcome, rng: &mut ChaCha8Rng) -> Result<()> {
    let bn = &model.bn;
    let (sample, _) = sample_connections(model, rng)?;
    if !bn.group().is_commutative() {
        out.note("group is not commutative: curvature descent must be refused");
        for (name, nabla) in &sample {
            let result = match descend_curvature(bn, nabla) {
                Err(Error::NonCommutative(_)) => Ok(()),
                Err(e) => Err(format!("refused for the wrong reason: {e}")),
                Ok(_) => Err("descent was not refused".into()),
            };
            out.check(label(bn, name, nabla), result);
        }
        return Ok(());
    }
    let b = bn.bundle();
    for (name, nabla) in &sample {
        let result = descend_curvature(bn, nabla).map_err(|e| e.to_string()).and_then(|omega| {
            let r = curvature(bn, nabla).map_err(|e| e.to_string())?;
            for (s, f) in r.iter() {
                let v = b.gauge_to_group(f).map_err(|e| e.to_string())?;
                if omega.get(&s) != Some(v) {
                    return Err(format!("mismatch at ({})", bn.base_names(&s).join(",")));
                }
            }
            Ok(())
        });
        out.check(label(bn, name, nabla), result);
    }
    Ok(())
}

fn eq1_failure(bn: &BundleWithNeighbours, out: &mut Outcome) -> Result<()> {
    let b = bn.bundle();
    let g = b.group();
    let found = b.fraction_identification_counterexample()?;
    let commutative = g.is_commutative();
    let detail = match &found {
        Some(c) => format!(
            "[{},{}] shifted by {}: {} becomes {}",
            b.point_name(c.num),
            b.point_name(c.den),
            g.name(c.shift),
            g.name(c.value),
            g.name(c.shifted_value)
        ),
        None => "no representative changes its value".to_string(),
    };
    out.note(detail.clone());
    let result = match (commutative, found.is_some()) {
        (false, true) | (true, false) => Ok(()),
        (false, false) => Err("non-commutative group but no counterexample".into()),
        (true, true) => Err(format!("commutative group with a counterexample: {detail}")),
    };
    out.check(
        if commutative { "commutative group: identification well defined" } else { "non-commutative group: identification fails" },
        result,
    );
    Ok(())
}
