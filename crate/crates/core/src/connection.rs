//! Connections, connection forms and curvature.
//!
//! A connection assigns to each neighbour pair `a ~ b` an arrow
//! `∇(a,b) : b → a` of the gauge groupoid, so `∇(a,b)` carries the fibre
//! over `b` into the fibre over `a`. Connections are reflexive and
//! symmetric by construction.

use rand::Rng;

use crate::error::{Error, Result};
use crate::forms::{
    coboundary1, descend_invariant, hat_transform, is_equivariant, is_horizontal, pullback,
    GaugeForm, GroupForm,
};
use crate::group::Elem;
use crate::neighbourhood::{BundleWithNeighbours, Simplex};
use crate::report::{Report, Violation};
use crate::torsor::{FractionArrow, Point};

/// Default bound on the number of connections an enumeration may produce.
pub const DEFAULT_CEILING: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Connection {
    size: usize,
    values: Vec<Option<FractionArrow>>,
}

impl Connection {
    /// Builds a connection from one arrow per unordered edge `a < b`, given
    /// as `∇(a,b)`. The diagonal is filled with identities and the reverse
    /// orientation with inverses.
    pub fn from_edges(
        bn: &BundleWithNeighbours,
        edges: impl IntoIterator<Item = ((usize, usize), FractionArrow)>,
    ) -> Result<Self> {
        let b = bn.bundle();
        let n = bn.base().size();
        let mut values = vec![None; n * n];
        for a in 0..n {
            values[a * n + a] = Some(b.identity_arrow(a)?);
        }
        for ((x, y), f) in edges {
            let (x, y, f) = if x < y { (x, y, f) } else { (y, x, b.arrow_inverse(f)?) };
            if x == y || y >= n || !bn.base().related(x, y) {
                return Err(Error::Precondition(format!(
                    "({},{}) is not an edge of the base relation",
                    b.base_name(x),
                    b.base_name(y.min(n - 1))
                )));
            }
            if b.arrow_dom(f) != y || b.arrow_cod(f) != x {
                return Err(Error::BookKeeping(format!(
                    "arrow {} does not go from {} to {}",
                    b.arrow_name(f),
                    b.base_name(y),
                    b.base_name(x)
                )));
            }
            let f = b.make_arrow(f.num, f.den)?;
            if values[x * n + y].replace(f).is_some() {
                return Err(Error::Precondition(format!(
                    "edge ({},{}) given twice",
                    b.base_name(x),
                    b.base_name(y)
                )));
            }
            values[y * n + x] = Some(b.arrow_inverse(f)?);
        }
        for (x, y) in bn.base().edges() {
            if values[x * n + y].is_none() {
                return Err(Error::Precondition(format!(
                    "no arrow for edge ({},{})",
                    b.base_name(x),
                    b.base_name(y)
                )));
            }
        }
        Ok(Self { size: n, values })
    }

    /// `∇(a,b) = s(a) s(b)⁻¹` for a section `s`; always flat.
    pub fn from_section(bn: &BundleWithNeighbours, section: &[Point]) -> Result<Self> {
        let b = bn.bundle();
        if section.len() != bn.base().size()
            || section.iter().enumerate().any(|(a, &x)| b.proj(x) != a)
        {
            return Err(Error::Shape("section must pick one point over every base point".into()));
        }
        let edges = bn
            .base()
            .edges()
            .into_iter()
            .map(|(x, y)| Ok(((x, y), b.make_arrow(section[x], section[y])?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(bn, edges)
    }

    /// The connection induced by the section of least points.
    pub fn flat(bn: &BundleWithNeighbours) -> Result<Self> {
        Self::from_section(bn, &canonical_section(bn)?)
    }

    /// The flat connection with `∇(a,b)` replaced by `(s(a)·g) s(b)⁻¹` on the
    /// listed edges, where `s` is the section of least points.
    pub fn shifted(bn: &BundleWithNeighbours, shifts: &[(usize, usize, Elem)]) -> Result<Self> {
        let b = bn.bundle();
        let s = canonical_section(bn)?;
        let mut edges: Vec<((usize, usize), FractionArrow)> = Vec::new();
        for (x, y) in bn.base().edges() {
            let mut f = b.make_arrow(s[x], s[y])?;
            for &(p, q, g) in shifts {
                if (p, q) == (x, y) {
                    f = b.make_arrow(b.act(s[x], g), s[y])?;
                } else if (q, p) == (x, y) {
                    f = b.arrow_inverse(b.make_arrow(b.act(s[p], g), s[q])?)?;
                }
            }
            edges.push(((x, y), f));
        }
        for &(p, q, _) in shifts {
            if p == q || p >= s.len() || q >= s.len() || !bn.base().related(p, q) {
                return Err(Error::Precondition(format!("shift on ({p},{q}) is not on an edge")));
            }
        }
        Self::from_edges(bn, edges)
    }

    pub fn get(&self, a: usize, b: usize) -> Option<FractionArrow> {
        if a >= self.size || b >= self.size {
            return None;
        }
        self.values[a * self.size + b]
    }

    pub fn value(&self, a: usize, b: usize) -> Result<FractionArrow> {
        self.get(a, b)
            .ok_or_else(|| Error::Shape(format!("connection undefined on ({a},{b})")))
    }

    /// `∇(a,b)` for every edge `a < b`, in order.
    pub fn edges(&self, bn: &BundleWithNeighbours) -> Vec<((usize, usize), FractionArrow)> {
        bn.base()
            .edges()
            .into_iter()
            .filter_map(|(a, b)| self.get(a, b).map(|f| ((a, b), f)))
            .collect()
    }

    /// Checks reflexivity, symmetry, endpoints and domain against `bn`.
    pub fn validate(&self, bn: &BundleWithNeighbours) -> Report {
        let b = bn.bundle();
        let mut report = Report::new();
        let names = |x: usize, y: usize| vec![b.base_name(x).to_string(), b.base_name(y).to_string()];
        if self.size != bn.base().size() {
            report.push(Violation::new("connection domain", vec![], "wrong number of base points"));
            return report;
        }
        for x in 0..self.size {
            for y in 0..self.size {
                let v = self.get(x, y);
                match (bn.base().related(x, y), v) {
                    (false, None) => {}
                    (false, Some(_)) => report.push(Violation::new("connection domain", names(x, y), "not neighbours")),
                    (true, None) => report.push(Violation::new("connection domain", names(x, y), "missing arrow")),
                    (true, Some(f)) => {
                        if b.arrow_dom(f) != y || b.arrow_cod(f) != x {
                            report.push(Violation::new("connection endpoints", names(x, y), b.arrow_name(f)));
                            continue;
                        }
                        if x == y && b.identity_arrow(x).ok() != Some(f) {
                            report.push(Violation::new("reflexivity", names(x, y), b.arrow_name(f)));
                        }
                        let back = self.get(y, x).and_then(|g| b.arrow_inverse(g).ok());
                        if back != Some(f) {
                            report.push(Violation::new("symmetry", names(x, y), b.arrow_name(f)));
                        }
                    }
                }
            }
        }
        report
    }

    pub fn describe(&self, bn: &BundleWithNeighbours) -> String {
        let b = bn.bundle();
        self.edges(bn)
            .into_iter()
            .map(|((x, y), f)| format!("{}-{}={}", b.base_name(x), b.base_name(y), b.arrow_name(f)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn canonical_section(bn: &BundleWithNeighbours) -> Result<Vec<Point>> {
    let b = bn.bundle();
    (0..bn.base().size()).map(|a| b.fibre_min(a)).collect()
}

/// `ω(u,v) = u⁻¹ (∇(πu,πv)·v)`.
pub fn connection_to_form(bn: &BundleWithNeighbours, nabla: &Connection) -> Result<GroupForm> {
    let b = bn.bundle();
    GroupForm::try_from_fn(bn.total(), 1, |s| {
        let (u, v) = (Point(s[0]), Point(s[1]));
        let f = nabla.value(b.proj(u), b.proj(v))?;
        b.div(u, b.act_left(f, v)?)
    })
}

/// A failed instance of one of the laws a connection form obeys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub pair: (usize, usize),
    pub shift: Elem,
    pub expected: Elem,
    pub found: Elem,
}

impl LawViolation {
    pub fn describe(&self, bn: &BundleWithNeighbours) -> String {
        let g = bn.group();
        format!(
            "{} fails at ({}) with g = {}: expected {}, found {}",
            self.law,
            bn.point_names(&[self.pair.0, self.pair.1]).join(","),
            g.name(self.shift),
            g.name(self.expected),
            g.name(self.found)
        )
    }

    fn into_violation(self, bn: &BundleWithNeighbours) -> Violation {
        let g = bn.group();
        let mut witness = bn.point_names(&[self.pair.0, self.pair.1]);
        witness.push(g.name(self.shift).into());
        Violation::new(
            self.law,
            witness,
            format!("expected {}, found {}", g.name(self.expected), g.name(self.found)),
        )
    }
}

fn check_one_form(bn: &BundleWithNeighbours, omega: &GroupForm) -> Result<()> {
    if omega.degree() != 1 || !omega.is_valid_on(bn.total()) {
        return Err(Error::Shape("expected a 1-form defined on every neighbour pair of the total space".into()));
    }
    Ok(())
}

/// `ω(xg, y) = g⁻¹ ω(x,y)` for every neighbour pair `x ~ y` and every `g`
/// with `xg ~ y`.
pub fn check_shift_law(bn: &BundleWithNeighbours, omega: &GroupForm) -> Result<(), LawViolation> {
    let b = bn.bundle();
    let g = b.group();
    for (s, w) in omega.iter() {
        for h in g.elements() {
            let xg = b.act(Point(s[0]), h).0;
            if let Some(found) = omega.get(&[xg, s[1]]) {
                let expected = g.mul(g.inv(h), w);
                if found != expected {
                    return Err(LawViolation { law: "shift law", pair: (s[0], s[1]), shift: h, expected, found });
                }
            }
        }
    }
    Ok(())
}

/// `ω(xg, yg) = g⁻¹ ω(x,y) g` for every neighbour pair and every `g`.
pub fn check_conjugation_law(bn: &BundleWithNeighbours, omega: &GroupForm) -> Result<(), LawViolation> {
    let b = bn.bundle();
    let g = b.group();
    for (s, w) in omega.iter() {
        for h in g.elements() {
            let expected = g.conj(w, h);
            let shifted = [b.act(Point(s[0]), h).0, b.act(Point(s[1]), h).0];
            let found = omega.get(&shifted).unwrap_or(expected);
            if found != expected || omega.get(&shifted).is_none() {
                return Err(LawViolation { law: "conjugation law", pair: (s[0], s[1]), shift: h, expected, found });
            }
        }
    }
    Ok(())
}

/// `ω(u,u) = e` and `ω(u,v) ω(v,u) = e`.
pub fn check_normalization(bn: &BundleWithNeighbours, omega: &GroupForm) -> Result<(), LawViolation> {
    let g = bn.group();
    for (s, w) in omega.iter() {
        let back = omega.get(&[s[1], s[0]]).unwrap_or(g.unit());
        let product = g.mul(w, back);
        if s[0] == s[1] && w != g.unit() {
            return Err(LawViolation { law: "reflexivity", pair: (s[0], s[1]), shift: g.unit(), expected: g.unit(), found: w });
        }
        if product != g.unit() {
            return Err(LawViolation { law: "symmetry", pair: (s[0], s[1]), shift: g.unit(), expected: g.unit(), found: product });
        }
    }
    Ok(())
}

/// Every law a connection form must satisfy, as a report.
pub fn connection_form_report(bn: &BundleWithNeighbours, omega: &GroupForm) -> Result<Report> {
    check_one_form(bn, omega)?;
    let mut report = Report::new();
    for check in [check_normalization, check_shift_law, check_conjugation_law] {
        if let Err(v) = check(bn, omega) {
            report.push(v.into_violation(bn));
        }
    }
    Ok(report)
}

/// `∇(a,b) = u (v·ω(v,u))⁻¹` for any neighbours `u ~ v` over `(a,b)`.
///
/// The form laws are checked first; the result is checked to be the same
/// for every choice of lift.
pub fn form_to_connection(bn: &BundleWithNeighbours, omega: &GroupForm) -> Result<Connection> {
    check_one_form(bn, omega)?;
    for check in [check_normalization, check_shift_law, check_conjugation_law] {
        check(bn, omega).map_err(|v| Error::Precondition(v.describe(bn)))?;
    }
    let b = bn.bundle();
    let n = bn.base().size();
    let mut values: Vec<Option<FractionArrow>> = vec![None; n * n];
    for (s, _) in omega.iter() {
        let (u, v) = (Point(s[0]), Point(s[1]));
        let f = b.make_arrow(u, b.act(v, omega.value(&[s[1], s[0]])?))?;
        let slot = &mut values[b.proj(u) * n + b.proj(v)];
        match *slot {
            None => *slot = Some(f),
            Some(prev) if prev == f => {}
            Some(prev) => {
                return Err(Error::Inconsistent(format!(
                    "lift ({}) gives {} but an earlier lift gave {}",
                    bn.point_names(&s).join(","),
                    b.arrow_name(f),
                    b.arrow_name(prev)
                )))
            }
        }
    }
    let nabla = Connection { size: n, values };
    let report = nabla.validate(bn);
    if !report.is_empty() {
        return Err(Error::Invalid { what: "connection", report });
    }
    Ok(nabla)
}

/// `(∇₁∇⁻¹)(a,b) = ∇₁(a,b) ∘ ∇(b,a)`, an endo-arrow at `a`.
pub fn connection_difference(
    bn: &BundleWithNeighbours,
    nabla1: &Connection,
    nabla: &Connection,
) -> Result<GaugeForm> {
    let b = bn.bundle();
    GaugeForm::try_from_simplices(bn.base().size(), 1, &bn.base_simplices(1), |s| {
        b.arrow_compose(nabla1.value(s[0], s[1])?, nabla.value(s[1], s[0])?)
    })
}

/// `R(a₀,a₁,a₂) = ∇(a₀,a₁) ∘ ∇(a₁,a₂) ∘ ∇(a₂,a₀)`.
pub fn curvature(bn: &BundleWithNeighbours, nabla: &Connection) -> Result<GaugeForm> {
    let b = bn.bundle();
    GaugeForm::try_from_simplices(bn.base().size(), 2, &bn.base_simplices(2), |s| {
        let tail = b.arrow_compose(nabla.value(s[1], s[2])?, nabla.value(s[2], s[0])?)?;
        b.arrow_compose(nabla.value(s[0], s[1])?, tail)
    })
}

pub fn is_flat(bn: &BundleWithNeighbours, nabla: &Connection) -> Result<bool> {
    let b = bn.bundle();
    let r = curvature(bn, nabla)?;
    let flat = r.iter().all(|(s, f)| b.identity_arrow(s[0]).ok() == Some(f));
    Ok(flat)
}

/// Compares `R̂` with `dω` on every 2-simplex of the total space, and checks
/// that `dω` is horizontal and equivariant.
pub fn verify_curvature_identity(bn: &BundleWithNeighbours, nabla: &Connection) -> Result<Report> {
    let g = bn.group();
    let omega = connection_to_form(bn, nabla)?;
    let d_omega = coboundary1(bn.total(), g, &omega)?;
    let r_hat = hat_transform(bn, &curvature(bn, nabla)?)?;
    let mut report = Report::new();
    for (s, lhs) in r_hat.iter() {
        let rhs = d_omega.value(&s)?;
        if lhs != rhs {
            report.push(Violation::new(
                "curvature identity",
                bn.point_names(&s),
                format!("curvature gives {}, coboundary gives {}", g.name(lhs), g.name(rhs)),
            ));
        }
    }
    if let Err(c) = is_horizontal(bn, &d_omega) {
        report.push(Violation::new("coboundary horizontal", bn.point_names(&c.simplex), c.describe(bn)));
    }
    if let Err(c) = is_equivariant(bn, &d_omega) {
        report.push(Violation::new("coboundary equivariant", bn.point_names(&c.simplex), c.describe(bn)));
    }
    Ok(report)
}

/// The base 2-form `Ω` with `π*Ω = dω`, for a commutative group. Checks
/// that it agrees with the curvature read through the identification of
/// gauge arrows with group elements.
pub fn descend_curvature(bn: &BundleWithNeighbours, nabla: &Connection) -> Result<GroupForm> {
    if !bn.group().is_commutative() {
        return Err(Error::NonCommutative("descending curvature to the base"));
    }
    let b = bn.bundle();
    let omega = connection_to_form(bn, nabla)?;
    let d_omega = coboundary1(bn.total(), bn.group(), &omega)?;
    let big_omega = descend_invariant(bn, &d_omega)?;
    if pullback(bn, &big_omega)? != d_omega {
        return Err(Error::Inconsistent("pullback of the descended form differs from the coboundary".into()));
    }
    for (s, f) in curvature(bn, nabla)?.iter() {
        let as_group = b.gauge_to_group(f)?;
        if big_omega.value(&s)? != as_group {
            return Err(Error::Inconsistent(format!(
                "descended curvature at ({}) differs from the curvature arrow {}",
                bn.base_names(&s).join(","),
                b.arrow_name(f)
            )));
        }
    }
    Ok(big_omega)
}

/// Checks `R(a₁,a₂,a₀) = ∇(a₁,a₀) R(a₀,a₁,a₂) ∇(a₁,a₀)⁻¹` on every 2-simplex;
/// returns the first failing simplex.
pub fn check_curvature_rotation(bn: &BundleWithNeighbours, nabla: &Connection) -> Result<Option<Simplex>> {
    let b = bn.bundle();
    let r = curvature(bn, nabla)?;
    for (s, f) in r.iter() {
        let t = nabla.value(s[1], s[0])?;
        let conj = b.arrow_compose(t, b.arrow_compose(f, b.arrow_inverse(t)?)?)?;
        if r.get(&[s[1], s[2], s[0]]) != Some(conj) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// `|G|` choices per edge of the base.
pub fn connection_count(bn: &BundleWithNeighbours) -> u128 {
    let order = bn.group().order() as u128;
    let edges = bn.base().edges().len() as u32;
    order.checked_pow(edges).unwrap_or(u128::MAX)
}

/// Every connection, with the first edge varying slowest and arrows per edge
/// in canonical order.
pub fn enumerate_connections(bn: &BundleWithNeighbours, ceiling: u128) -> Result<Vec<Connection>> {
    let count = connection_count(bn);
    if count > ceiling {
        return Err(Error::CeilingExceeded { count, ceiling });
    }
    let b = bn.bundle();
    let edges = bn.base().edges();
    let choices = edges
        .iter()
        .map(|&(x, y)| b.arrows_between(y, x))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; edges.len()];
    loop {
        out.push(Connection::from_edges(
            bn,
            edges.iter().zip(&choices).zip(&digits).map(|((&e, c), &d)| (e, c[d])),
        )?);
        let mut i = edges.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < choices[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

pub fn find_flat(bn: &BundleWithNeighbours, ceiling: u128) -> Result<Vec<Connection>> {
    let mut out = Vec::new();
    for nabla in enumerate_connections(bn, ceiling)? {
        if is_flat(bn, &nabla)? {
            out.push(nabla);
        }
    }
    Ok(out)
}

/// A uniformly random connection.
pub fn random_connection(bn: &BundleWithNeighbours, rng: &mut impl Rng) -> Result<Connection> {
    let b = bn.bundle();
    let edges = bn
        .base()
        .edges()
        .into_iter()
        .map(|(x, y)| {
            let choices = b.arrows_between(y, x)?;
            Ok(((x, y), choices[rng.random_range(0..choices.len())]))
        })
        .collect::<Result<Vec<_>>>()?;
    Connection::from_edges(bn, edges)
}

/// Every 1-form on the total space obeying normalization, the shift law and
/// the conjugation law, found by propagating each choice through the laws.
/// Results are in canonical order of their value tables.
pub fn enumerate_connection_forms(bn: &BundleWithNeighbours, ceiling: u128) -> Result<Vec<GroupForm>> {
    let b = bn.bundle();
    let g = b.group();
    let n = b.total_size();
    let pairs = bn.total_simplices(1).into_owned();
    let mut values: Vec<Option<Elem>> = vec![None; n * n];
    for x in 0..n {
        if !propagate(bn, &mut values, (x, x), g.unit()) {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::new();
    search_forms(bn, &pairs, 0, values, &mut out, ceiling)?;
    out.sort_by(|x, y| {
        let key = |f: &GroupForm| f.iter().map(|(_, v)| v).collect::<Vec<_>>();
        key(x).cmp(&key(y))
    });
    Ok(out)
}

fn search_forms(
    bn: &BundleWithNeighbours,
    pairs: &[Simplex],
    start: usize,
    values: Vec<Option<Elem>>,
    out: &mut Vec<GroupForm>,
    ceiling: u128,
) -> Result<()> {
    let n = bn.total().size();
    let Some(next) = (start..pairs.len()).find(|&i| values[pairs[i][0] * n + pairs[i][1]].is_none()) else {
        if out.len() as u128 >= ceiling {
            return Err(Error::CeilingExceeded { count: out.len() as u128 + 1, ceiling });
        }
        let form = GroupForm::try_from_simplices(n, 1, pairs, |s| {
            values[s[0] * n + s[1]].ok_or_else(|| Error::Inconsistent("unassigned pair".into()))
        })?;
        out.push(form);
        return Ok(());
    };
    let (u, v) = (pairs[next][0], pairs[next][1]);
    for w in bn.group().elements() {
        let mut trial = values.clone();
        if propagate(bn, &mut trial, (u, v), w) {
            search_forms(bn, pairs, next + 1, trial, out, ceiling)?;
        }
    }
    Ok(())
}

/// Assigns `ω(u,v) = w` and everything the laws force from it; false on conflict.
fn propagate(bn: &BundleWithNeighbours, values: &mut [Option<Elem>], pair: (usize, usize), w: Elem) -> bool {
    let b = bn.bundle();
    let g = b.group();
    let rel = bn.total();
    let n = rel.size();
    let mut queue = vec![(pair, w)];
    while let Some(((u, v), w)) = queue.pop() {
        match values[u * n + v] {
            Some(old) if old == w => continue,
            Some(_) => return false,
            None => values[u * n + v] = Some(w),
        }
        if u == v && w != g.unit() {
            return false;
        }
        queue.push(((v, u), g.inv(w)));
        for h in g.elements() {
            let (uh, vh) = (b.act(Point(u), h).0, b.act(Point(v), h).0);
            queue.push(((uh, vh), g.conj(w, h)));
            if rel.related(uh, v) {
                queue.push(((uh, v), g.mul(g.inv(h), w)));
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{inverse_form, product_form};
    use crate::group::FiniteGroup;
    use crate::neighbourhood::{trivial_model, twisted_model, Neighbourhood, Twist};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn names(n: usize) -> Vec<String> {
        ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn trivial(n: usize, g: FiniteGroup) -> BundleWithNeighbours {
        trivial_model(names(n), Neighbourhood::codiscrete(n), g).unwrap()
    }

    fn pt(bn: &BundleWithNeighbours, name: &str) -> Point {
        bn.bundle().point(name).unwrap()
    }

    /// ∇(c,a) = [(c,1),(a,0)], the other edges flat.
    fn holonomy_example() -> (BundleWithNeighbours, Connection) {
        let bn = trivial(3, FiniteGroup::cyclic(2));
        let nabla = Connection::shifted(&bn, &[(2, 0, Elem(1))]).unwrap();
        (bn, nabla)
    }

    #[test]
    fn holonomy_example_arrow() {
        let (bn, nabla) = holonomy_example();
        let b = bn.bundle();
        assert_eq!(nabla.value(2, 0).unwrap(), b.make_arrow(pt(&bn, "(c,1)"), pt(&bn, "(a,0)")).unwrap());
        assert_eq!(nabla.value(0, 1).unwrap(), b.make_arrow(pt(&bn, "(a,0)"), pt(&bn, "(b,0)")).unwrap());
        assert!(nabla.validate(&bn).is_empty());
    }

    #[test]
    fn holonomy_example_curvature() {
        let (bn, nabla) = holonomy_example();
        let b = bn.bundle();
        let r = curvature(&bn, &nabla).unwrap();
        let expected = b.make_arrow(pt(&bn, "(a,1)"), pt(&bn, "(a,0)")).unwrap();
        assert_eq!(r.value(&[0, 1, 2]).unwrap(), expected);
        // (a,0) → (c,1) → (b,1) → (a,1)
        let mut u = pt(&bn, "(a,0)");
        for (x, y) in [(2, 0), (1, 2), (0, 1)] {
            u = b.act_left(nabla.value(x, y).unwrap(), u).unwrap();
        }
        assert_eq!(u, pt(&bn, "(a,1)"));
        let r_aac = r.value(&[0, 0, 2]).unwrap();
        assert_eq!(r_aac, b.identity_arrow(0).unwrap());
        let omega = descend_curvature(&bn, &nabla).unwrap();
        assert_eq!(omega.value(&[0, 1, 2]).unwrap(), Elem(1));
        assert!(verify_curvature_identity(&bn, &nabla).unwrap().is_empty());
        let d = coboundary1(bn.total(), bn.group(), &connection_to_form(&bn, &nabla).unwrap()).unwrap();
        assert_eq!(d.value(&[pt(&bn, "(a,0)").0, pt(&bn, "(b,0)").0, pt(&bn, "(c,1)").0]).unwrap(), Elem(1));
    }

    #[test]
    fn trivial_connection_form() {
        let bn = trivial(2, FiniteGroup::cyclic(2));
        let nabla = Connection::flat(&bn).unwrap();
        let omega = connection_to_form(&bn, &nabla).unwrap();
        assert_eq!(omega.value(&[pt(&bn, "(a,0)").0, pt(&bn, "(b,1)").0]).unwrap(), Elem(1));
        // ω(u, u·g) = g
        for x in bn.bundle().points() {
            for g in bn.group().elements() {
                assert_eq!(omega.value(&[x.0, bn.bundle().act(x, g).0]).unwrap(), g);
            }
        }
        assert!(crate::forms::is_normalized(bn.group(), &omega));
    }

    #[test]
    fn connection_form_not_horizontal() {
        let (bn, nabla) = holonomy_example();
        let omega = connection_to_form(&bn, &nabla).unwrap();
        assert!(is_horizontal(&bn, &omega).is_err());
        assert!(is_equivariant(&bn, &omega).is_ok());
    }

    #[test]
    fn round_trip_all_connections_s3() {
        let bn = trivial(2, FiniteGroup::symmetric(3));
        let all = enumerate_connections(&bn, DEFAULT_CEILING).unwrap();
        assert_eq!(all.len(), 6);
        for nabla in &all {
            let omega = connection_to_form(&bn, nabla).unwrap();
            assert!(connection_form_report(&bn, &omega).unwrap().is_empty());
            assert_eq!(&form_to_connection(&bn, &omega).unwrap(), nabla);
            assert!(verify_curvature_identity(&bn, nabla).unwrap().is_empty());
            assert!(matches!(descend_curvature(&bn, nabla), Err(Error::NonCommutative(_))));
        }
    }

    #[test]
    fn flat_twisted_unit_form() {
        let base = Neighbourhood::codiscrete(3);
        let g = FiniteGroup::symmetric(3);
        let (bn, report) = twisted_model(names(3), base.clone(), g.clone(), &Twist::flat(&base, &g)).unwrap();
        assert!(report.is_empty());
        let unit = GroupForm::constant(bn.total(), 1, g.unit());
        let nabla = form_to_connection(&bn, &unit).unwrap();
        let e = g.unit();
        for (x, y) in base.pairs() {
            let expected = bn
                .bundle()
                .make_arrow(pt(&bn, &format!("({},{})", names(3)[x], g.name(e))), pt(&bn, &format!("({},{})", names(3)[y], g.name(e))))
                .unwrap();
            assert_eq!(nabla.value(x, y).unwrap(), expected);
        }
        assert!(is_flat(&bn, &nabla).unwrap());
    }

    #[test]
    fn conjugation_violation_refused() {
        let bn = trivial(2, FiniteGroup::symmetric(3));
        let g = bn.group();
        let nabla = Connection::flat(&bn).unwrap();
        let mut omega = connection_to_form(&bn, &nabla).unwrap();
        let u = pt(&bn, "(a,e)").0;
        let v = pt(&bn, "(b,e)").0;
        let t = g.elem("(12)").unwrap();
        omega.set(&[u, v], t).unwrap();
        omega.set(&[v, u], g.inv(t)).unwrap();
        let err = form_to_connection(&bn, &omega).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(!connection_form_report(&bn, &omega).unwrap().is_empty());
    }

    #[test]
    fn counts_and_flatness() {
        let bn = trivial(2, FiniteGroup::cyclic(2));
        assert_eq!(connection_count(&bn), 2);
        assert_eq!(enumerate_connections(&bn, DEFAULT_CEILING).unwrap().len(), 2);
        let tri = trivial(3, FiniteGroup::cyclic(2));
        assert_eq!(enumerate_connections(&tri, DEFAULT_CEILING).unwrap().len(), 8);
        assert_eq!(find_flat(&tri, DEFAULT_CEILING).unwrap().len(), 4);
        assert!(matches!(
            enumerate_connections(&tri, 7),
            Err(Error::CeilingExceeded { count: 8, ceiling: 7 })
        ));
    }

    #[test]
    fn difference_and_prop4() {
        let bn = trivial(2, FiniteGroup::cyclic(2));
        let b = bn.bundle();
        let nabla = Connection::flat(&bn).unwrap();
        let twisted = Connection::shifted(&bn, &[(0, 1, Elem(1))]).unwrap();
        let same = connection_difference(&bn, &nabla, &nabla).unwrap();
        assert_eq!(same, crate::forms::identity_gauge_form(&bn, 1).unwrap());
        let diff = connection_difference(&bn, &twisted, &nabla).unwrap();
        for (s, f) in diff.iter() {
            assert_eq!(f == b.identity_arrow(s[0]).unwrap(), s[0] == s[1]);
        }
        let g = bn.group();
        let w1 = connection_to_form(&bn, &twisted).unwrap();
        let w = connection_to_form(&bn, &nabla).unwrap();
        assert_eq!(
            hat_transform(&bn, &diff).unwrap(),
            product_form(g, &w1, &inverse_form(g, &w)).unwrap()
        );
    }

    #[test]
    fn curvature_rotation_and_random_s3() {
        let bn = trivial(3, FiniteGroup::symmetric(3));
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let nabla = random_connection(&bn, &mut rng).unwrap();
            assert!(nabla.validate(&bn).is_empty());
            assert_eq!(check_curvature_rotation(&bn, &nabla).unwrap(), None);
            assert!(verify_curvature_identity(&bn, &nabla).unwrap().is_empty());
        }
    }

    #[test]
    fn admissible_forms_are_connection_forms() {
        for bn in [trivial(2, FiniteGroup::symmetric(3)), trivial(3, FiniteGroup::cyclic(2))] {
            let forms = enumerate_connection_forms(&bn, DEFAULT_CEILING).unwrap();
            assert_eq!(forms.len() as u128, connection_count(&bn));
            for omega in &forms {
                let nabla = form_to_connection(&bn, omega).unwrap();
                assert_eq!(&connection_to_form(&bn, &nabla).unwrap(), omega);
            }
        }
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        let bn = trivial(3, FiniteGroup::cyclic(2));
        let b = bn.bundle();
        assert!(Connection::from_edges(&bn, []).is_err());
        let wrong = b.identity_arrow(0).unwrap();
        let edges = [((0, 1), wrong), ((0, 2), wrong), ((1, 2), wrong)];
        assert!(matches!(Connection::from_edges(&bn, edges), Err(Error::BookKeeping(_))));
    }
}
