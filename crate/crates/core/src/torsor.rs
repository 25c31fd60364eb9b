//! Principal bundles as finite free, fibre-transitive right G-sets.
//!
//! Points of the total space are divided by points of the same fibre to give
//! group elements (`x⁻¹z`), and paired across fibres to give arrows of the
//! gauge groupoid (`y x⁻¹`). Arrows are stored as [`FractionArrow`]s with a
//! canonical denominator, so equal arrows are equal values.

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::groupoid::{FiniteGroupoid, GaugeBundle};
use crate::names::NameTable;
use crate::report::{Report, Violation};

/// A point of the total space, by position in the sorted point list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub usize);

/// An arrow `num · den⁻¹` of the gauge groupoid, from the fibre over
/// `proj(den)` to the fibre over `proj(num)`.
///
/// Values produced by [`PrincipalBundle`] methods are canonical: `den` is the
/// least point of its fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FractionArrow {
    pub num: Point,
    pub den: Point,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalBundle {
    base: NameTable,
    total: NameTable,
    proj: Vec<usize>,
    group: FiniteGroup,
    act: Vec<Point>,
    fibres: Vec<Vec<Point>>,
    // div[x * |P| + z] = the first g with x·g = z
    div: Vec<Option<Elem>>,
}

impl PrincipalBundle {
    /// Assembles a bundle from index tables in the caller's own orderings:
    /// `proj[i]` indexes `base`, `act[i][g]` indexes `total`, with `g`
    /// running over the group's (sorted) elements.
    ///
    /// Only shapes and references are checked here; use [`validate`](Self::validate)
    /// for the bundle axioms.
    pub fn new(
        base: Vec<String>,
        total: Vec<String>,
        proj: Vec<usize>,
        group: FiniteGroup,
        act: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let np = total.len();
        let nm = base.len();
        let ng = group.order();
        if proj.len() != np || act.len() != np {
            return Err(Error::Shape(format!(
                "projection and action tables must have one row per point ({np})"
            )));
        }
        if let Some(&bad) = proj.iter().find(|&&a| a >= nm) {
            return Err(Error::Shape(format!("projection target {bad} out of range")));
        }
        if act.iter().any(|row| row.len() != ng || row.iter().any(|&y| y >= np)) {
            return Err(Error::Shape(format!(
                "action table rows must list {ng} points of the total space"
            )));
        }
        let (base, base_relabel) = NameTable::sorted(base)?;
        let (total, relabel) = NameTable::sorted(total)?;
        let mut new_proj = vec![0; np];
        let mut new_act = vec![Point(0); np * ng];
        for old in 0..np {
            let x = relabel[old];
            new_proj[x] = base_relabel[proj[old]];
            for g in 0..ng {
                new_act[x * ng + g] = Point(relabel[act[old][g]]);
            }
        }
        let mut fibres = vec![Vec::new(); nm];
        for (x, &a) in new_proj.iter().enumerate() {
            fibres[a].push(Point(x));
        }
        let mut div = vec![None; np * np];
        for x in 0..np {
            for g in group.elements() {
                let z = new_act[x * ng + g.0];
                div[x * np + z.0].get_or_insert(g);
            }
        }
        Ok(Self {
            base,
            total,
            proj: new_proj,
            group,
            act: new_act,
            fibres,
            div,
        })
    }

    /// The trivial bundle `M × G`, points named `(a,g)`, acting on the second factor.
    pub fn trivial(base: Vec<String>, group: FiniteGroup) -> Result<Self> {
        let ng = group.order();
        let mut total = Vec::new();
        let mut proj = Vec::new();
        let mut act = Vec::new();
        for (a, name) in base.iter().enumerate() {
            for g in group.elements() {
                total.push(format!("({},{})", name, group.name(g)));
                proj.push(a);
                act.push(
                    group
                        .elements()
                        .map(|h| a * ng + group.mul(g, h).0)
                        .collect(),
                );
            }
        }
        Self::new(base, total, proj, group, act)
    }

    /// Checks the principal bundle axioms exhaustively.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let g = &self.group;
        let e = g.unit();
        for x in self.points() {
            if self.act(x, e) != x {
                report.push(Violation::new(
                    "action unit",
                    vec![self.point_name(x).into()],
                    "x·e ≠ x",
                ));
            }
            'compat: for a in g.elements() {
                for b in g.elements() {
                    if self.act(self.act(x, a), b) != self.act(x, g.mul(a, b)) {
                        report.push(Violation::new(
                            "action compatibility",
                            vec![self.point_name(x).into(), g.name(a).into(), g.name(b).into()],
                            "(x·g)·h ≠ x·(gh)",
                        ));
                        break 'compat;
                    }
                }
            }
            for a in g.elements() {
                let y = self.act(x, a);
                if self.proj(y) != self.proj(x) {
                    report.push(Violation::new(
                        "fibrewise action",
                        vec![self.point_name(x).into(), g.name(a).into()],
                        "π(x·g) ≠ π(x)",
                    ));
                }
                if y == x && a != e {
                    report.push(Violation::new(
                        "freeness",
                        vec![self.point_name(x).into(), g.name(a).into()],
                        "x·g = x with g ≠ e",
                    ));
                }
            }
        }
        for (a, fibre) in self.fibres.iter().enumerate() {
            if fibre.is_empty() {
                report.push(Violation::new(
                    "surjectivity",
                    vec![self.base_name(a).into()],
                    "empty fibre",
                ));
                continue;
            }
            'fibre: for &x in fibre {
                for &z in fibre {
                    if !g.elements().any(|h| self.act(x, h) == z) {
                        report.push(Violation::new(
                            "fibre-transitivity",
                            vec![self.point_name(x).into(), self.point_name(z).into()],
                            format!("no group element moves x to z in fibre {}", self.base_name(a)),
                        ));
                        break 'fibre;
                    }
                }
            }
        }
        report
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn base_size(&self) -> usize {
        self.base.len()
    }

    pub fn total_size(&self) -> usize {
        self.total.len()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + Clone {
        (0..self.total.len()).map(Point)
    }

    pub fn proj(&self, x: Point) -> usize {
        self.proj[x.0]
    }

    pub fn act(&self, x: Point, g: Elem) -> Point {
        self.act[x.0 * self.group.order() + g.0]
    }

    /// Points over `a`, in canonical order.
    pub fn fibre(&self, a: usize) -> &[Point] {
        &self.fibres[a]
    }

    /// The least point over `a`; the canonical denominator of arrows out of `a`.
    pub fn fibre_min(&self, a: usize) -> Result<Point> {
        self.fibres
            .get(a)
            .and_then(|f| f.first().copied())
            .ok_or_else(|| Error::EmptyFibre(self.base.names().get(a).cloned().unwrap_or_default()))
    }

    pub fn base_name(&self, a: usize) -> &str {
        self.base.name(a)
    }

    pub fn base_names(&self) -> &[String] {
        self.base.names()
    }

    pub fn point_name(&self, x: Point) -> &str {
        self.total.name(x.0)
    }

    pub fn point_names(&self) -> &[String] {
        self.total.names()
    }

    pub fn point(&self, name: &str) -> Result<Point> {
        self.total.lookup(name, "total space").map(Point)
    }

    pub fn base_point(&self, name: &str) -> Result<usize> {
        self.base.lookup(name, "base")
    }

    /// The fraction `x⁻¹z`: the unique `g` with `x·g = z`.
    pub fn div(&self, x: Point, z: Point) -> Result<Elem> {
        if self.proj(x) != self.proj(z) {
            return Err(Error::BookKeeping(format!(
                "cannot divide {} by {}: different fibres",
                self.point_name(z),
                self.point_name(x)
            )));
        }
        self.div[x.0 * self.total.len() + z.0].ok_or_else(|| {
            Error::BookKeeping(format!(
                "{} and {} lie in different orbits",
                self.point_name(x),
                self.point_name(z)
            ))
        })
    }

    /// The pregroupoid operation `y x⁻¹ z`, defined when `π(x) = π(z)`.
    pub fn tern(&self, y: Point, x: Point, z: Point) -> Result<Point> {
        Ok(self.act(y, self.div(x, z)?))
    }

    /// The arrow `y x⁻¹`, in canonical form.
    pub fn make_arrow(&self, y: Point, x: Point) -> Result<FractionArrow> {
        let den = self.fibre_min(self.proj(x))?;
        let g = self.div(x, den)?;
        Ok(FractionArrow {
            num: self.act(y, g),
            den,
        })
    }

    pub fn arrow_dom(&self, f: FractionArrow) -> usize {
        self.proj(f.den)
    }

    pub fn arrow_cod(&self, f: FractionArrow) -> usize {
        self.proj(f.num)
    }

    pub fn is_endo(&self, f: FractionArrow) -> bool {
        self.arrow_dom(f) == self.arrow_cod(f)
    }

    pub fn identity_arrow(&self, a: usize) -> Result<FractionArrow> {
        let x = self.fibre_min(a)?;
        Ok(FractionArrow { num: x, den: x })
    }

    /// `after ∘ before`: `[z,w] ∘ [y,x] = [z · w⁻¹y, x]`.
    pub fn arrow_compose(&self, after: FractionArrow, before: FractionArrow) -> Result<FractionArrow> {
        if self.arrow_cod(before) != self.arrow_dom(after) {
            return Err(Error::BookKeeping(format!(
                "cannot compose {} after {}: codomain {} ≠ domain {}",
                self.arrow_name(after),
                self.arrow_name(before),
                self.base_name(self.arrow_cod(before)),
                self.base_name(self.arrow_dom(after)),
            )));
        }
        let g = self.div(after.den, before.num)?;
        self.make_arrow(self.act(after.num, g), before.den)
    }

    pub fn arrow_inverse(&self, f: FractionArrow) -> Result<FractionArrow> {
        self.make_arrow(f.den, f.num)
    }

    /// Left action of an arrow on a point of its domain fibre: `[y,x]·u = y · x⁻¹u`.
    pub fn act_left(&self, f: FractionArrow, u: Point) -> Result<Point> {
        if self.proj(u) != self.arrow_dom(f) {
            return Err(Error::BookKeeping(format!(
                "arrow {} cannot act on {}: wrong fibre",
                self.arrow_name(f),
                self.point_name(u)
            )));
        }
        Ok(self.act(f.num, self.div(f.den, u)?))
    }

    /// Same-fibre arrows with the given ends, in canonical order.
    pub fn arrows_between(&self, from: usize, to: usize) -> Result<Vec<FractionArrow>> {
        let den = self.fibre_min(from)?;
        Ok(self.fibre(to).iter().map(|&num| FractionArrow { num, den }).collect())
    }

    /// The vertex groups of the gauge groupoid `PP⁻¹`.
    pub fn gauge_of_bundle(&self) -> Result<GaugeBundle<FractionArrow>> {
        let fibres = (0..self.base_size())
            .map(|a| self.arrows_between(a, a))
            .collect::<Result<_>>()?;
        Ok(GaugeBundle { fibres })
    }

    /// Sends an endo-arrow `y x⁻¹` to `x⁻¹ y`. Only well defined for a
    /// commutative group.
    pub fn gauge_to_group(&self, h: FractionArrow) -> Result<Elem> {
        if !self.group.is_commutative() {
            return Err(Error::NonCommutative("identifying gauge arrows with group elements"));
        }
        if !self.is_endo(h) {
            return Err(Error::BookKeeping(format!(
                "{} is not an endo-arrow",
                self.arrow_name(h)
            )));
        }
        self.div(h.den, h.num)
    }

    /// `[x₀·g, x₀]` with `x₀` the least point over `a`.
    pub fn group_to_gauge(&self, a: usize, g: Elem) -> Result<FractionArrow> {
        if a >= self.base_size() {
            return Err(Error::BookKeeping(format!("base index {a} out of range")));
        }
        let x0 = self.fibre_min(a)?;
        Ok(FractionArrow {
            num: self.act(x0, g),
            den: x0,
        })
    }

    /// Searches every representative `(y·g, x·g)` of every endo-arrow `y x⁻¹`
    /// for one where `(xg)⁻¹(yg) ≠ x⁻¹y`. Returns the first such instance in
    /// canonical order; `None` exactly when the group is commutative.
    pub fn fraction_identification_counterexample(&self) -> Result<Option<FractionCounterexample>> {
        for a in 0..self.base_size() {
            for &y in self.fibre(a) {
                for &x in self.fibre(a) {
                    let value = self.div(x, y)?;
                    for g in self.group.elements() {
                        let shifted = self.div(self.act(x, g), self.act(y, g))?;
                        if shifted != value {
                            return Ok(Some(FractionCounterexample {
                                num: y,
                                den: x,
                                shift: g,
                                value,
                                shifted_value: shifted,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn arrow_name(&self, f: FractionArrow) -> String {
        format!("[{},{}]", self.point_name(f.num), self.point_name(f.den))
    }

    /// The transitive groupoid on `M + {*}` that contains `P` as the arrows
    /// out of `*` and `G` as the vertex group at `*`.
    ///
    /// Every arrow is a class `[y, x]` with `x` over the domain and `y` over
    /// the codomain, where the fibre over `*` is `G` itself acting on the right.
    /// Arrow names: `*→a` is the point name, `a→*` is `x^-1`, `a→b` is `y/x`,
    /// `*→*` is `<g>`.
    pub fn envelope(&self) -> Result<FiniteGroupoid> {
        let ext = Extended { b: self };
        let star = self.base_size();
        let n_obj = star + 1;
        let mut objects: Vec<String> = self.base.names().to_vec();
        objects.push(STAR.to_string());

        let mut arrows: Vec<ExtArrow> = Vec::new();
        for c in 0..n_obj {
            for d in 0..n_obj {
                let den = ext.canonical_den(c)?;
                for num in ext.fibre(d) {
                    arrows.push(ExtArrow { num, den });
                }
            }
        }
        let index = |f: ExtArrow| arrows.iter().position(|&g| g == f);
        let names: Vec<String> = arrows.iter().map(|&f| ext.name(f)).collect();
        let specs = arrows
            .iter()
            .zip(&names)
            .map(|(&f, name)| (name.clone(), ext.proj(f.den), ext.proj(f.num)))
            .collect();
        let mut compose = Vec::new();
        for (i, &f2) in arrows.iter().enumerate() {
            for (j, &f1) in arrows.iter().enumerate() {
                if ext.proj(f1.num) == ext.proj(f2.den) {
                    let h = ext.compose(f2, f1)?;
                    let k = index(h).ok_or_else(|| Error::Inconsistent("composite not canonical".into()))?;
                    compose.push((i, j, k));
                }
            }
        }
        let identity = (0..n_obj)
            .map(|c| {
                let x = ext.canonical_den(c)?;
                index(ExtArrow { num: x, den: x })
                    .ok_or_else(|| Error::Inconsistent("identity not canonical".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let inverse = arrows
            .iter()
            .map(|&f| {
                let g = ext.make(f.den, f.num)?;
                index(g).ok_or_else(|| Error::Inconsistent("inverse not canonical".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroupoid::from_indexed(objects, specs, compose, identity, inverse)
    }

    /// Looks for an isomorphism of bundles `self → other`: a group isomorphism
    /// together with base and total-space bijections compatible with the
    /// projection and the action.
    pub fn find_isomorphism(&self, other: &PrincipalBundle) -> Option<BundleIsomorphism> {
        if self.base_size() != other.base_size()
            || self.total_size() != other.total_size()
            || self.group.order() != other.group.order()
        {
            return None;
        }
        for group in group_isomorphisms(&self.group, &other.group) {
            // Prefer matching base points by name, then fall back to order.
            let by_name: Option<Vec<usize>> = (0..self.base_size())
                .map(|a| other.base.get(self.base_name(a)))
                .collect();
            let candidates = by_name.into_iter().chain(std::iter::once((0..self.base_size()).collect()));
            for base in candidates {
                if let Some(iso) = self.extend_isomorphism(other, &group, &base) {
                    return Some(iso);
                }
            }
        }
        None
    }

    fn extend_isomorphism(
        &self,
        other: &PrincipalBundle,
        group: &[Elem],
        base: &[usize],
    ) -> Option<BundleIsomorphism> {
        let mut total = vec![Point(usize::MAX); self.total_size()];
        for (a, &b) in base.iter().enumerate() {
            let x0 = *self.fibre(a).first()?;
            let y0 = *other.fibre(b).first()?;
            for g in self.group.elements() {
                let x = self.act(x0, g);
                let y = other.act(y0, group[g.0]);
                if total[x.0] != Point(usize::MAX) && total[x.0] != y {
                    return None;
                }
                total[x.0] = y;
            }
        }
        let iso = BundleIsomorphism {
            group: group.to_vec(),
            base: base.to_vec(),
            total,
        };
        iso.verify(self, other).then_some(iso)
    }
}

/// A witness that `x⁻¹y` depends on the representative of `y x⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FractionCounterexample {
    pub num: Point,
    pub den: Point,
    pub shift: Elem,
    /// `den⁻¹ num`
    pub value: Elem,
    /// `(den·shift)⁻¹ (num·shift)`, which equals `shift⁻¹ · value · shift`
    pub shifted_value: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleIsomorphism {
    pub group: Vec<Elem>,
    pub base: Vec<usize>,
    pub total: Vec<Point>,
}

impl BundleIsomorphism {
    /// Checks bijectivity and compatibility with multiplication, projection
    /// and action, exhaustively.
    pub fn verify(&self, from: &PrincipalBundle, to: &PrincipalBundle) -> bool {
        fn bijective(map: &[usize], n: usize) -> bool {
            let mut seen = vec![false; n];
            map.len() == n && map.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
        }
        let g = &from.group;
        let group_ok = bijective(&self.group.iter().map(|e| e.0).collect::<Vec<_>>(), to.group.order())
            && g.elements().all(|a| {
                g.elements()
                    .all(|b| self.group[g.mul(a, b).0] == to.group.mul(self.group[a.0], self.group[b.0]))
            });
        group_ok
            && bijective(&self.base, to.base_size())
            && bijective(&self.total.iter().map(|p| p.0).collect::<Vec<_>>(), to.total_size())
            && from.points().all(|x| {
                to.proj(self.total[x.0]) == self.base[from.proj(x)]
                    && g.elements()
                        .all(|h| self.total[from.act(x, h).0] == to.act(self.total[x.0], self.group[h.0]))
            })
    }
}

/// All group isomorphisms `a → b`, found by backtracking with the
/// multiplication table as the pruning constraint.
pub fn group_isomorphisms(a: &FiniteGroup, b: &FiniteGroup) -> Vec<Vec<Elem>> {
    fn go(
        a: &FiniteGroup,
        b: &FiniteGroup,
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        let i = map.len();
        if i == a.order() {
            out.push(map.clone());
            return;
        }
        for t in b.elements() {
            if used[t.0] {
                continue;
            }
            map.push(t);
            let ok = (0..=i).all(|j| {
                let (gi, gj) = (Elem(i), Elem(j));
                let check = |x: Elem, y: Elem| {
                    let p = a.mul(x, y);
                    p.0 > i || map[p.0] == b.mul(map[x.0], map[y.0])
                };
                check(gi, gj) && check(gj, gi)
            });
            if ok {
                used[t.0] = true;
                go(a, b, map, used, out);
                used[t.0] = false;
            }
            map.pop();
        }
    }
    let mut out = Vec::new();
    if a.order() == b.order() {
        go(a, b, &mut Vec::new(), &mut vec![false; b.order()], &mut out);
    }
    out
}

/// Name of the adjoined object of an enveloping groupoid.
pub const STAR: &str = "*";

/// A point of `P + G`, where `G` is the fibre over the adjoined object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ExtPoint {
    Total(Point),
    Group(Elem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ExtArrow {
    num: ExtPoint,
    den: ExtPoint,
}

struct Extended<'a> {
    b: &'a PrincipalBundle,
}

impl Extended<'_> {
    fn star(&self) -> usize {
        self.b.base_size()
    }

    fn proj(&self, x: ExtPoint) -> usize {
        match x {
            ExtPoint::Total(p) => self.b.proj(p),
            ExtPoint::Group(_) => self.star(),
        }
    }

    fn fibre(&self, c: usize) -> Vec<ExtPoint> {
        if c == self.star() {
            self.b.group.elements().map(ExtPoint::Group).collect()
        } else {
            self.b.fibre(c).iter().map(|&p| ExtPoint::Total(p)).collect()
        }
    }

    fn canonical_den(&self, c: usize) -> Result<ExtPoint> {
        if c == self.star() {
            Ok(ExtPoint::Group(self.b.group.unit()))
        } else {
            self.b.fibre_min(c).map(ExtPoint::Total)
        }
    }

    fn act(&self, x: ExtPoint, g: Elem) -> ExtPoint {
        match x {
            ExtPoint::Total(p) => ExtPoint::Total(self.b.act(p, g)),
            ExtPoint::Group(h) => ExtPoint::Group(self.b.group.mul(h, g)),
        }
    }

    fn div(&self, x: ExtPoint, z: ExtPoint) -> Result<Elem> {
        match (x, z) {
            (ExtPoint::Total(x), ExtPoint::Total(z)) => self.b.div(x, z),
            (ExtPoint::Group(x), ExtPoint::Group(z)) => {
                let g = &self.b.group;
                Ok(g.mul(g.inv(x), z))
            }
            _ => Err(Error::BookKeeping("division across the adjoined object".into())),
        }
    }

    fn make(&self, y: ExtPoint, x: ExtPoint) -> Result<ExtArrow> {
        let den = self.canonical_den(self.proj(x))?;
        let g = self.div(x, den)?;
        Ok(ExtArrow {
            num: self.act(y, g),
            den,
        })
    }

    fn compose(&self, after: ExtArrow, before: ExtArrow) -> Result<ExtArrow> {
        let g = self.div(after.den, before.num)?;
        self.make(self.act(after.num, g), before.den)
    }

    fn name(&self, f: ExtArrow) -> String {
        let b = self.b;
        match (f.num, f.den) {
            (ExtPoint::Group(g), ExtPoint::Group(_)) => format!("<{}>", b.group.name(g)),
            (ExtPoint::Total(y), ExtPoint::Group(_)) => b.point_name(y).to_string(),
            // [h, x] = (x·h⁻¹)⁻¹
            (ExtPoint::Group(h), ExtPoint::Total(x)) => {
                format!("{}^-1", b.point_name(b.act(x, b.group.inv(h))))
            }
            (ExtPoint::Total(y), ExtPoint::Total(x)) => {
                format!("{}/{}", b.point_name(y), b.point_name(x))
            }
        }
    }
}
