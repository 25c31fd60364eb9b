//! Finite groupoids as explicit composition tables.
//!
//! Composition reads right to left: `compose(f, g)` is "f after g" and is
//! defined exactly when `cod g = dom f`. The table stores partiality as
//! explicit absence, so a validator can see entries that should not exist.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::names::NameTable;
use crate::report::{Report, Violation};
use crate::torsor::PrincipalBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Object(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: NameTable,
    arrows: NameTable,
    dom: Vec<Object>,
    cod: Vec<Object>,
    compose: Vec<Option<Arrow>>,
    identity: Vec<Arrow>,
    inverse: Vec<Arrow>,
}

/// The bundle of vertex groups of a groupoid, one fibre per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeBundle<A> {
    pub fibres: Vec<Vec<A>>,
}

impl FiniteGroupoid {
    /// Builds a groupoid from tables indexed in the caller's order.
    ///
    /// `arrows` holds `(name, dom, cod)`, `compose` holds `(left, right, result)`
    /// triples. Only references and duplicates are checked here; the axioms are
    /// left to [`validate`](Self::validate).
    pub fn from_indexed(
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        compose: Vec<(usize, usize, usize)>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
    ) -> Result<Self> {
        let no = objects.len();
        let na = arrows.len();
        if identity.len() != no {
            return Err(Error::Shape(format!("expected {no} identities, got {}", identity.len())));
        }
        if inverse.len() != na {
            return Err(Error::Shape(format!("expected {na} inverses, got {}", inverse.len())));
        }
        let oob = |i: usize, n: usize| -> Result<()> {
            if i >= n {
                Err(Error::Shape(format!("index {i} out of range")))
            } else {
                Ok(())
            }
        };
        for &(_, d, c) in &arrows {
            oob(d, no)?;
            oob(c, no)?;
        }
        for &(l, r, k) in &compose {
            oob(l, na)?;
            oob(r, na)?;
            oob(k, na)?;
        }
        for &i in identity.iter().chain(&inverse) {
            oob(i, na)?;
        }

        let (objects, orel) = NameTable::sorted(objects)?;
        let (names, specs): (Vec<String>, Vec<(usize, usize)>) =
            arrows.into_iter().map(|(n, d, c)| (n, (d, c))).unzip();
        let (arrow_names, arel) = NameTable::sorted(names)?;
        let mut dom = vec![Object(0); na];
        let mut cod = vec![Object(0); na];
        for (old, &(d, c)) in specs.iter().enumerate() {
            dom[arel[old]] = Object(orel[d]);
            cod[arel[old]] = Object(orel[c]);
        }
        let mut table = vec![None; na * na];
        for (l, r, k) in compose {
            let slot = &mut table[arel[l] * na + arel[r]];
            if slot.is_some() {
                return Err(Error::Shape(format!(
                    "composite of {} after {} given twice",
                    arrow_names.name(arel[l]),
                    arrow_names.name(arel[r])
                )));
            }
            *slot = Some(Arrow(arel[k]));
        }
        let mut new_identity = vec![Arrow(0); no];
        for (old, &i) in identity.iter().enumerate() {
            new_identity[orel[old]] = Arrow(arel[i]);
        }
        let mut new_inverse = vec![Arrow(0); na];
        for (old, &i) in inverse.iter().enumerate() {
            new_inverse[arel[old]] = Arrow(arel[i]);
        }
        Ok(Self {
            objects,
            arrows: arrow_names,
            dom,
            cod,
            compose: table,
            identity: new_identity,
            inverse: new_inverse,
        })
    }

    /// Builds a groupoid from names. `identities` and `inverses` are
    /// `(object, arrow)` and `(arrow, inverse)` pairs and must be total.
    pub fn from_named(
        objects: Vec<String>,
        arrows: Vec<(String, String, String)>,
        compose: Vec<(String, String, String)>,
        identities: Vec<(String, String)>,
        inverses: Vec<(String, String)>,
    ) -> Result<Self> {
        let (otab, _) = NameTable::sorted(objects.clone())?;
        let (atab, _) = NameTable::sorted(arrows.iter().map(|a| a.0.clone()).collect())?;
        let obj = |n: &str| otab.lookup(n, "objects");
        let arr = |n: &str| atab.lookup(n, "arrows");
        // Work in sorted order throughout so that from_indexed's relabel is the identity.
        let specs = {
            let mut v = arrows
                .iter()
                .map(|(n, d, c)| Ok((n.clone(), obj(d)?, obj(c)?)))
                .collect::<Result<Vec<_>>>()?;
            v.sort();
            v
        };
        let triples = compose
            .iter()
            .map(|(l, r, k)| Ok((arr(l)?, arr(r)?, arr(k)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut identity = vec![None; otab.len()];
        for (o, a) in &identities {
            let slot = &mut identity[obj(o)?];
            if slot.replace(arr(a)?).is_some() {
                return Err(Error::Shape(format!("identity of {o} given twice")));
            }
        }
        let identity = identity
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| Error::Shape(format!("missing identity for {}", otab.name(i)))))
            .collect::<Result<Vec<_>>>()?;
        let mut inverse = vec![None; atab.len()];
        for (f, g) in &inverses {
            let slot = &mut inverse[arr(f)?];
            if slot.replace(arr(g)?).is_some() {
                return Err(Error::Shape(format!("inverse of {f} given twice")));
            }
        }
        let inverse = inverse
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| Error::Shape(format!("missing inverse for {}", atab.name(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indexed(otab.names().to_vec(), specs, triples, identity, inverse)
    }

    /// A group presented as a one-object groupoid.
    pub fn from_group(object: &str, g: &FiniteGroup) -> Self {
        let arrows = g.names().iter().map(|n| (n.clone(), 0, 0)).collect();
        let compose = g
            .elements()
            .flat_map(|a| g.elements().map(move |b| (a.0, b.0, g.mul(a, b).0)))
            .collect();
        let inverse = g.elements().map(|a| g.inv(a).0).collect();
        Self::from_indexed(vec![object.to_string()], arrows, compose, vec![g.unit().0], inverse)
            .expect("group tables are well formed")
    }

    /// The groupoid with exactly one arrow between each ordered pair of objects.
    /// Arrows are named `a>b`.
    pub fn codiscrete(objects: &[&str]) -> Self {
        let n = objects.len();
        let idx = |a: usize, b: usize| a * n + b;
        let arrows = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| (format!("{}>{}", objects[a], objects[b]), a, b))
            .collect();
        let mut compose = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // (b>c) after (a>b) = a>c
                    compose.push((idx(b, c), idx(a, b), idx(a, c)));
                }
            }
        }
        let identity = (0..n).map(|a| idx(a, a)).collect();
        let inverse = (0..n).flat_map(|a| (0..n).map(move |b| idx(b, a))).collect();
        Self::from_indexed(objects.iter().map(|s| s.to_string()).collect(), arrows, compose, identity, inverse)
            .expect("codiscrete tables are well formed")
    }

    /// Disjoint union. Object and arrow names must not clash.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> Result<Self> {
        let no = self.object_count();
        let na = self.arrow_count();
        let mut objects = self.objects.names().to_vec();
        objects.extend(other.objects.names().iter().cloned());
        let mut arrows: Vec<(String, usize, usize)> = self
            .arrows()
            .map(|f| (self.arrow_name(f).to_string(), self.dom(f).0, self.cod(f).0))
            .collect();
        arrows.extend(
            other
                .arrows()
                .map(|f| (other.arrow_name(f).to_string(), no + other.dom(f).0, no + other.cod(f).0)),
        );
        let mut compose = Vec::new();
        for (g, shift) in [(self, 0), (other, na)] {
            for l in g.arrows() {
                for r in g.arrows() {
                    if let Some(k) = g.compose[l.0 * g.arrow_count() + r.0] {
                        compose.push((shift + l.0, shift + r.0, shift + k.0));
                    }
                }
            }
        }
        let mut identity: Vec<usize> = self.identity.iter().map(|a| a.0).collect();
        identity.extend(other.identity.iter().map(|a| na + a.0));
        let mut inverse: Vec<usize> = self.inverse.iter().map(|a| a.0).collect();
        inverse.extend(other.inverse.iter().map(|a| na + a.0));
        Self::from_indexed(objects, arrows, compose, identity, inverse)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Object> {
        (0..self.object_count()).map(Object)
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> {
        (0..self.arrow_count()).map(Arrow)
    }

    pub fn object(&self, name: &str) -> Result<Object> {
        self.objects.lookup(name, "objects").map(Object)
    }

    pub fn arrow(&self, name: &str) -> Result<Arrow> {
        self.arrows.lookup(name, "arrows").map(Arrow)
    }

    pub fn object_name(&self, o: Object) -> &str {
        self.objects.name(o.0)
    }

    pub fn arrow_name(&self, f: Arrow) -> &str {
        self.arrows.name(f.0)
    }

    pub fn dom(&self, f: Arrow) -> Object {
        self.dom[f.0]
    }

    pub fn cod(&self, f: Arrow) -> Object {
        self.cod[f.0]
    }

    pub fn identity(&self, o: Object) -> Arrow {
        self.identity[o.0]
    }

    pub fn inverse(&self, f: Arrow) -> Arrow {
        self.inverse[f.0]
    }

    /// The raw table entry, defined or not, without book-keeping checks.
    pub fn table_entry(&self, left: Arrow, right: Arrow) -> Option<Arrow> {
        self.compose[left.0 * self.arrow_count() + right.0]
    }

    /// `left ∘ right`. Calling it with `cod right ≠ dom left` is an input error.
    pub fn compose(&self, left: Arrow, right: Arrow) -> Result<Arrow> {
        if self.cod(right) != self.dom(left) {
            return Err(Error::BookKeeping(format!(
                "cannot compose {} after {}: {} ≠ {}",
                self.arrow_name(left),
                self.arrow_name(right),
                self.object_name(self.cod(right)),
                self.object_name(self.dom(left)),
            )));
        }
        self.table_entry(left, right).ok_or_else(|| {
            Error::BookKeeping(format!(
                "composite of {} after {} missing from table",
                self.arrow_name(left),
                self.arrow_name(right)
            ))
        })
    }

    /// Checks every groupoid axiom exhaustively and reports each failure with
    /// the arrows that witness it.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let name = |f: Arrow| self.arrow_name(f).to_string();
        for l in self.arrows() {
            for r in self.arrows() {
                let composable = self.cod(r) == self.dom(l);
                match (self.table_entry(l, r), composable) {
                    (Some(_), false) => report.push(Violation::new(
                        "composition domain mismatch",
                        vec![name(l), name(r)],
                        "composite defined although cod of the right arrow ≠ dom of the left",
                    )),
                    (None, true) => report.push(Violation::new(
                        "missing composite",
                        vec![name(l), name(r)],
                        "",
                    )),
                    (Some(k), true) if self.dom(k) != self.dom(r) || self.cod(k) != self.cod(l) => {
                        report.push(Violation::new(
                            "composite endpoints",
                            vec![name(l), name(r), name(k)],
                            "",
                        ))
                    }
                    _ => {}
                }
            }
        }
        // Associativity over every composable triple whose composites exist.
        'assoc: for f in self.arrows() {
            for g in self.arrows().filter(|&g| self.cod(g) == self.dom(f)) {
                let Ok(fg) = self.compose(f, g) else { continue };
                for h in self.arrows().filter(|&h| self.cod(h) == self.dom(g)) {
                    let lhs = self.compose(fg, h);
                    let rhs = self.compose(g, h).and_then(|gh| self.compose(f, gh));
                    if let (Ok(lhs), Ok(rhs)) = (lhs, rhs) {
                        if lhs != rhs {
                            report.push(Violation::new(
                                "associativity",
                                vec![name(f), name(g), name(h)],
                                "",
                            ));
                            if report.len() > 64 {
                                break 'assoc;
                            }
                        }
                    }
                }
            }
        }
        for o in self.objects() {
            let id = self.identity(o);
            if self.dom(id) != o || self.cod(id) != o {
                report.push(Violation::new(
                    "identity endpoints",
                    vec![self.object_name(o).into(), name(id)],
                    "",
                ));
            }
        }
        for f in self.arrows() {
            let left_unit = self.compose(f, self.identity(self.dom(f)));
            let right_unit = self.compose(self.identity(self.cod(f)), f);
            if left_unit != Ok(f) || right_unit != Ok(f) {
                report.push(Violation::new("identity", vec![name(f)], "identity is not a two-sided unit"));
            }
            let inv = self.inverse(f);
            let ok = self.compose(inv, f) == Ok(self.identity(self.dom(f)))
                && self.compose(f, inv) == Ok(self.identity(self.cod(f)));
            if !ok {
                report.push(Violation::new("inverse", vec![name(f), name(inv)], ""));
            }
        }
        report
    }

    /// Whether every ordered pair of objects is joined by an arrow.
    pub fn is_transitive(&self) -> bool {
        let n = self.object_count();
        let mut hit = vec![false; n * n];
        for f in self.arrows() {
            hit[self.dom(f).0 * n + self.cod(f).0] = true;
        }
        hit.into_iter().all(|b| b)
    }

    /// Endo-arrows at `o`, in canonical order.
    pub fn endo_arrows(&self, o: Object) -> Vec<Arrow> {
        self.arrows()
            .filter(|&f| self.dom(f) == o && self.cod(f) == o)
            .collect()
    }

    pub fn gauge_bundle(&self) -> GaugeBundle<Arrow> {
        GaugeBundle {
            fibres: self.objects().map(|o| self.endo_arrows(o)).collect(),
        }
    }

    /// `f h f⁻¹`, moving an endo-arrow at `dom f` to one at `cod f`.
    pub fn conjugate(&self, f: Arrow, h: Arrow) -> Result<Arrow> {
        if self.dom(h) != self.cod(h) || self.dom(h) != self.dom(f) {
            return Err(Error::BookKeeping(format!(
                "cannot conjugate {} by {}: need an endo-arrow at the domain of the conjugator",
                self.arrow_name(h),
                self.arrow_name(f)
            )));
        }
        let h_finv = self.compose(h, self.inverse(f))?;
        self.compose(f, h_finv)
    }

    /// The vertex group at `o`, elements named by their arrows.
    pub fn vertex_group(&self, o: Object) -> Result<FiniteGroup> {
        let fibre = self.endo_arrows(o);
        let pos = |a: Arrow| fibre.iter().position(|&b| b == a);
        let mut table = Vec::with_capacity(fibre.len());
        for &f in &fibre {
            let row = fibre
                .iter()
                .map(|&g| {
                    let k = self.compose(f, g)?;
                    pos(k).ok_or_else(|| Error::Inconsistent("vertex group not closed".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        let names = fibre.iter().map(|&f| self.arrow_name(f).to_string()).collect();
        FiniteGroup::from_table(names, table)
    }

    /// The bundle of arrows out of `basepoint` into `base`, projected by
    /// codomain, with the vertex group at `basepoint` acting by precomposition.
    pub fn extract_bundle(&self, basepoint: &str, base: &[&str]) -> Result<PrincipalBundle> {
        let star = self.object(basepoint)?;
        let base_objs = base
            .iter()
            .map(|n| self.object(n))
            .collect::<Result<Vec<_>>>()?;
        if base_objs.contains(&star) {
            return Err(Error::Precondition(format!(
                "basepoint {basepoint} must not belong to the base"
            )));
        }
        let group = self.vertex_group(star)?;
        let group_arrows: Vec<Arrow> = group
            .names()
            .iter()
            .map(|n| self.arrow(n))
            .collect::<Result<_>>()?;
        let mut total = Vec::new();
        let mut proj = Vec::new();
        let mut points = Vec::new();
        for (i, &o) in base_objs.iter().enumerate() {
            let fibre: Vec<Arrow> = self
                .arrows()
                .filter(|&f| self.dom(f) == star && self.cod(f) == o)
                .collect();
            if fibre.is_empty() {
                return Err(Error::EmptyFibre(self.object_name(o).to_string()));
            }
            for f in fibre {
                total.push(self.arrow_name(f).to_string());
                proj.push(i);
                points.push(f);
            }
        }
        let act = points
            .iter()
            .map(|&x| {
                group_arrows
                    .iter()
                    .map(|&g| {
                        let y = self.compose(x, g)?;
                        points
                            .iter()
                            .position(|&p| p == y)
                            .ok_or_else(|| Error::Inconsistent("precomposition left the fibre".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let base_names = base.iter().map(|s| s.to_string()).collect();
        PrincipalBundle::new(base_names, total, proj, group, act)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteGroupoid {
        FiniteGroupoid::from_group("o", &FiniteGroup::cyclic(2))
    }

    #[test]
    fn group_is_a_groupoid() {
        assert!(z2().validate().is_empty());
        assert!(z2().is_transitive());
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let g = FiniteGroupoid::from_named(
            vec!["a".into(), "b".into()],
            vec![
                ("1a".into(), "a".into(), "a".into()),
                ("1b".into(), "b".into(), "b".into()),
            ],
            vec![
                ("1a".into(), "1a".into(), "1a".into()),
                ("1b".into(), "1b".into(), "1b".into()),
                // dom 1a = a ≠ b = cod 1b
                ("1a".into(), "1b".into(), "1a".into()),
            ],
            vec![("a".into(), "1a".into()), ("b".into(), "1b".into())],
            vec![("1a".into(), "1a".into()), ("1b".into(), "1b".into())],
        )
        .unwrap();
        let report = g.validate();
        assert!(report.has("composition domain mismatch"));
        let v = report.iter().find(|v| v.axiom == "composition domain mismatch").unwrap();
        assert_eq!(v.witness, ["1a", "1b"]);
        // the call itself is refused
        let (a, b) = (g.arrow("1a").unwrap(), g.arrow("1b").unwrap());
        assert!(matches!(g.compose(a, b), Err(Error::BookKeeping(_))));
    }

    #[test]
    fn codiscrete_three_objects() {
        let g = FiniteGroupoid::codiscrete(&["a", "b", "c"]);
        assert!(g.validate().is_empty());
        assert!(g.is_transitive());
        assert_eq!(g.arrow_count(), 9);
        for fibre in g.gauge_bundle().fibres {
            assert_eq!(fibre.len(), 1);
        }
    }

    #[test]
    fn disjoint_union_not_transitive() {
        let a = FiniteGroupoid::from_group("o", &FiniteGroup::cyclic(2));
        let b = FiniteGroupoid::from_group("p", &FiniteGroup::cyclic(3));
        // arrow names clash ("0", "1"), so rename via the codiscrete helper instead
        assert!(a.disjoint_union(&b).is_err());
        let c = FiniteGroupoid::codiscrete(&["x"]);
        let u = a.disjoint_union(&c).unwrap();
        assert!(u.validate().is_empty());
        assert!(!u.is_transitive());
    }

    #[test]
    fn gauge_bundle_of_group() {
        let g = FiniteGroupoid::from_group("o", &FiniteGroup::symmetric(3));
        let gb = g.gauge_bundle();
        assert_eq!(gb.fibres.len(), 1);
        assert_eq!(gb.fibres[0].len(), 6);
    }

    #[test]
    fn conjugation_in_s3() {
        let g = FiniteGroupoid::from_group("o", &FiniteGroup::symmetric(3));
        let a = |n: &str| g.arrow(n).unwrap();
        assert_eq!(g.conjugate(a("(13)"), a("(12)")).unwrap(), a("(23)"));
        assert_eq!(g.conjugate(a("(13)"), a("e")).unwrap(), a("e"));
        // homomorphism spot check
        let f = a("(123)");
        let (h1, h2) = (a("(12)"), a("(23)"));
        let lhs = g.conjugate(f, g.compose(h1, h2).unwrap()).unwrap();
        let rhs = g
            .compose(g.conjugate(f, h1).unwrap(), g.conjugate(f, h2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_bookkeeping() {
        let g = FiniteGroupoid::codiscrete(&["a", "b"]);
        let ab = g.arrow("a>b").unwrap();
        let bb = g.arrow("b>b").unwrap();
        let aa = g.arrow("a>a").unwrap();
        assert_eq!(g.conjugate(ab, aa).unwrap(), bb);
        assert!(matches!(g.conjugate(ab, bb), Err(Error::BookKeeping(_))));
    }

    #[test]
    fn extract_from_codiscrete() {
        let g = FiniteGroupoid::codiscrete(&["*", "a", "b"]);
        let b = g.extract_bundle("*", &["a", "b"]).unwrap();
        assert_eq!(b.total_size(), 2);
        assert_eq!(b.group().order(), 1);
        assert!(b.validate().is_empty());
    }

    #[test]
    fn extract_from_group_is_torsor() {
        // one-object base: P = Φ(*,a) is a G-torsor
        let s3 = FiniteGroup::symmetric(3);
        let bundle = PrincipalBundle::trivial(vec!["a".into()], s3).unwrap();
        let env = bundle.envelope().unwrap();
        let b = env.extract_bundle("*", &["a"]).unwrap();
        assert!(b.validate().is_empty());
        assert_eq!(b.fibre(0).len(), 6);
    }

    #[test]
    fn extract_rejects_empty_fibre() {
        let a = FiniteGroupoid::codiscrete(&["*", "a"]);
        let c = FiniteGroupoid::from_group("z", &FiniteGroup::cyclic(1));
        let u = a.disjoint_union(&c).unwrap();
        assert_eq!(u.extract_bundle("*", &["a", "z"]), Err(Error::EmptyFibre("z".into())));
        assert!(matches!(u.extract_bundle("*", &["*"]), Err(Error::Precondition(_))));
    }
}
