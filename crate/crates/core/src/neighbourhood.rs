//! Reflexive symmetric neighbour relations, infinitesimal simplices, and
//! bundles whose total space and base both carry such a relation.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::report::{Report, Violation};
use crate::torsor::{Point, PrincipalBundle};

/// A tuple of carrier indices. An infinitesimal k-simplex has k+1 entries.
pub type Simplex = Vec<usize>;

/// A reflexive symmetric relation on `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbourhood {
    size: usize,
    adj: Vec<bool>,
}

impl Neighbourhood {
    /// Only the diagonal.
    pub fn discrete(size: usize) -> Self {
        Self::from_pairs(size, []).expect("no pairs")
    }

    /// Everything related to everything.
    pub fn codiscrete(size: usize) -> Self {
        Self {
            size,
            adj: vec![true; size * size],
        }
    }

    /// The reflexive symmetric closure of `pairs`.
    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![false; size * size];
        for i in 0..size {
            adj[i * size + i] = true;
        }
        for (a, b) in pairs {
            if a >= size || b >= size {
                return Err(Error::Shape(format!("pair ({a},{b}) outside carrier of size {size}")));
            }
            adj[a * size + b] = true;
            adj[b * size + a] = true;
        }
        Ok(Self { size, adj })
    }

    /// The relation on `0..size` given by a predicate, closed up reflexively
    /// and symmetrically.
    pub fn from_fn(size: usize, related: impl Fn(usize, usize) -> bool) -> Self {
        let pairs = (0..size)
            .flat_map(|a| (0..size).map(move |b| (a, b)))
            .filter(|&(a, b)| related(a, b));
        Self::from_pairs(size, pairs.collect::<Vec<_>>()).expect("in range")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.size + b]
    }

    pub fn neighbours(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&b| self.related(a, b))
    }

    /// The first neighbourhood of the diagonal: all ordered related pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|a| self.neighbours(a).map(move |b| (a, b)))
            .collect()
    }

    /// Off-diagonal related pairs with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.pairs().into_iter().filter(|&(a, b)| a < b).collect()
    }

    pub fn is_simplex(&self, s: &[usize]) -> bool {
        s.iter().all(|&x| x < self.size)
            && s.iter()
                .enumerate()
                .all(|(i, &x)| s[..i].iter().all(|&y| self.related(x, y)))
    }

    /// All (k+1)-tuples of mutual neighbours, degenerate ones included, in
    /// lexicographic order.
    pub fn enumerate_simplices(&self, k: usize) -> Vec<Simplex> {
        fn go(n: &Neighbourhood, len: usize, current: &mut Simplex, out: &mut Vec<Simplex>) {
            if current.len() == len {
                out.push(current.clone());
                return;
            }
            for x in 0..n.size {
                if current.iter().all(|&y| n.related(x, y)) {
                    current.push(x);
                    go(n, len, current, out);
                    current.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, k + 1, &mut Vec::with_capacity(k + 1), &mut out);
        out
    }

    /// The same relation with carrier indices renamed by `relabel[old] = new`.
    pub fn relabel(&self, relabel: &[usize]) -> Self {
        let n = self.size;
        let mut adj = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                adj[relabel[a] * n + relabel[b]] = self.adj[a * n + b];
            }
        }
        Self { size: n, adj }
    }
}

const CACHED_DEGREES: usize = 4;

/// A principal bundle with neighbour relations on base and total space,
/// plus the largest simplex degree for which lifting is demanded.
#[derive(Debug, Clone)]
pub struct BundleWithNeighbours {
    bundle: PrincipalBundle,
    base: Neighbourhood,
    total: Neighbourhood,
    max_lift: usize,
    base_cache: [OnceLock<Vec<Simplex>>; CACHED_DEGREES],
    total_cache: [OnceLock<Vec<Simplex>>; CACHED_DEGREES],
}

impl PartialEq for BundleWithNeighbours {
    fn eq(&self, other: &Self) -> bool {
        self.bundle == other.bundle
            && self.base == other.base
            && self.total == other.total
            && self.max_lift == other.max_lift
    }
}

impl Eq for BundleWithNeighbours {}

pub const DEFAULT_MAX_LIFT: usize = 2;

impl BundleWithNeighbours {
    pub fn new(
        bundle: PrincipalBundle,
        base: Neighbourhood,
        total: Neighbourhood,
        max_lift: usize,
    ) -> Result<Self> {
        if base.size() != bundle.base_size() {
            return Err(Error::Shape(format!(
                "base relation has {} points, bundle base has {}",
                base.size(),
                bundle.base_size()
            )));
        }
        if total.size() != bundle.total_size() {
            return Err(Error::Shape(format!(
                "total relation has {} points, total space has {}",
                total.size(),
                bundle.total_size()
            )));
        }
        if max_lift == 0 {
            return Err(Error::Shape("max_lift must be positive".into()));
        }
        Ok(Self {
            bundle,
            base,
            total,
            max_lift,
            base_cache: Default::default(),
            total_cache: Default::default(),
        })
    }

    pub fn bundle(&self) -> &PrincipalBundle {
        &self.bundle
    }

    pub fn group(&self) -> &FiniteGroup {
        self.bundle.group()
    }

    pub fn base(&self) -> &Neighbourhood {
        &self.base
    }

    pub fn total(&self) -> &Neighbourhood {
        &self.total
    }

    pub fn max_lift(&self) -> usize {
        self.max_lift
    }

    pub fn with_max_lift(&self, max_lift: usize) -> Result<Self> {
        Self::new(self.bundle.clone(), self.base.clone(), self.total.clone(), max_lift)
    }

    pub fn base_simplices(&self, k: usize) -> Cow<'_, [Simplex]> {
        cached(&self.base_cache, &self.base, k)
    }

    pub fn total_simplices(&self, k: usize) -> Cow<'_, [Simplex]> {
        cached(&self.total_cache, &self.total, k)
    }

    pub fn project(&self, s: &[usize]) -> Simplex {
        s.iter().map(|&x| self.bundle.proj(Point(x))).collect()
    }

    /// Total-space simplices over the base simplex `a`, in order.
    pub fn lifts(&self, a: &[usize]) -> Vec<Simplex> {
        let Some(k) = a.len().checked_sub(1) else { return Vec::new() };
        self.total_simplices(k)
            .iter()
            .filter(|u| u.iter().zip(a).all(|(&x, &b)| self.bundle.proj(Point(x)) == b))
            .cloned()
            .collect()
    }

    pub fn base_names(&self, s: &[usize]) -> Vec<String> {
        s.iter().map(|&a| self.bundle.base_name(a).to_string()).collect()
    }

    pub fn point_names(&self, s: &[usize]) -> Vec<String> {
        s.iter().map(|&x| self.bundle.point_name(Point(x)).to_string()).collect()
    }

    /// Checks the bundle axioms and every neighbour axiom up to `max_lift`.
    pub fn validate(&self) -> Report {
        let mut report = self.bundle.validate();
        let b = &self.bundle;
        let g = b.group();
        for (x, y) in self.total.pairs() {
            let (px, py) = (Point(x), Point(y));
            if !self.base.related(b.proj(px), b.proj(py)) {
                report.push(Violation::new(
                    "projection preserves neighbours",
                    self.point_names(&[x, y]),
                    "",
                ));
            }
            for h in g.elements() {
                if !self.total.related(b.act(px, h).0, b.act(py, h).0) {
                    report.push(Violation::new(
                        "group preserves neighbours",
                        vec![b.point_name(px).into(), b.point_name(py).into(), g.name(h).into()],
                        "",
                    ));
                    break;
                }
            }
        }
        for k in 1..=self.max_lift {
            let axiom = if k == 1 { "submersion" } else { "simplex lifting" };
            let lifted: HashSet<(usize, Simplex)> = self
                .total_simplices(k)
                .iter()
                .map(|u| (u[0], self.project(&u[1..])))
                .collect();
            for a in self.base_simplices(k).iter() {
                for &x0 in b.fibre(a[0]) {
                    if !lifted.contains(&(x0.0, a[1..].to_vec())) {
                        let mut witness = self.base_names(a);
                        witness.push(b.point_name(x0).into());
                        report.push(Violation::new(
                            axiom,
                            witness,
                            format!("no {k}-simplex over the base simplex starts at the given point"),
                        ));
                    }
                }
            }
        }
        report
    }
}

fn cached<'a>(cache: &'a [OnceLock<Vec<Simplex>>], n: &Neighbourhood, k: usize) -> Cow<'a, [Simplex]> {
    match cache.get(k) {
        Some(cell) => Cow::Borrowed(cell.get_or_init(|| n.enumerate_simplices(k))),
        None => Cow::Owned(n.enumerate_simplices(k)),
    }
}

fn check_sorted(names: &[String]) -> Result<()> {
    if names.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::Shape("base names must be distinct and sorted".into()))
    }
}

/// The point `(a,g)` of a trivial bundle.
fn product_point(b: &PrincipalBundle, a: usize, g: Elem) -> Point {
    b.point(&format!("({},{})", b.base_name(a), b.group().name(g)))
        .expect("trivial bundle names its points (a,g)")
}

/// `P = M × G` with `(a,g) ~ (b,h)` iff `a ~ b`.
pub fn trivial_model(
    base_names: Vec<String>,
    base: Neighbourhood,
    group: FiniteGroup,
) -> Result<BundleWithNeighbours> {
    check_sorted(&base_names)?;
    let bundle = PrincipalBundle::trivial(base_names, group)?;
    let total = Neighbourhood::from_fn(bundle.total_size(), |x, y| {
        base.related(bundle.proj(Point(x)), bundle.proj(Point(y)))
    });
    BundleWithNeighbours::new(bundle, base, total, DEFAULT_MAX_LIFT)
}

/// Allowed differences `h g⁻¹` between neighbouring points `(a,g) ~ (b,h)`,
/// one subset of the group per related base pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twist {
    pub sets: BTreeMap<(usize, usize), BTreeSet<Elem>>,
}

impl Twist {
    pub fn from_fn(base: &Neighbourhood, f: impl Fn(usize, usize) -> BTreeSet<Elem>) -> Self {
        Self {
            sets: base.pairs().into_iter().map(|(a, b)| ((a, b), f(a, b))).collect(),
        }
    }

    /// Every set is `{e}`: neighbours share their group coordinate.
    pub fn flat(base: &Neighbourhood, group: &FiniteGroup) -> Self {
        Self::from_fn(base, |_, _| BTreeSet::from([group.unit()]))
    }

    /// Every set is `G`, which reproduces the trivial model.
    pub fn full(base: &Neighbourhood, group: &FiniteGroup) -> Self {
        Self::from_fn(base, |_, _| group.elements().collect())
    }
}

/// `P = M × G` with `(a,g) ~ (b,h)` iff `a ~ b` and `h g⁻¹ ∈ S(a,b)`.
///
/// The relation is G-invariant and a submersion by construction; simplex
/// lifting is not, so the returned report says whether the model validates.
pub fn twisted_model(
    base_names: Vec<String>,
    base: Neighbourhood,
    group: FiniteGroup,
    twist: &Twist,
) -> Result<(BundleWithNeighbours, Report)> {
    check_sorted(&base_names)?;
    let pair_name = |a: usize, b: usize| format!("({},{})", base_names[a], base_names[b]);
    for (a, b) in base.pairs() {
        let s = twist
            .sets
            .get(&(a, b))
            .ok_or_else(|| Error::Precondition(format!("no twist set for {}", pair_name(a, b))))?;
        if s.is_empty() {
            return Err(Error::Precondition(format!("empty twist set for {}", pair_name(a, b))));
        }
        if a == b && !s.contains(&group.unit()) {
            return Err(Error::Precondition(format!(
                "twist set for {} must contain the unit",
                pair_name(a, b)
            )));
        }
        let inverted: BTreeSet<Elem> = s.iter().map(|&g| group.inv(g)).collect();
        if twist.sets.get(&(b, a)) != Some(&inverted) {
            return Err(Error::Precondition(format!(
                "twist set for {} must be the inverse of the set for {}",
                pair_name(b, a),
                pair_name(a, b)
            )));
        }
    }
    let bundle = PrincipalBundle::trivial(base_names, group)?;
    let g = bundle.group();
    let n = bundle.total_size();
    let mut coords = vec![(0, g.unit()); n];
    for a in 0..bundle.base_size() {
        for h in g.elements() {
            coords[product_point(&bundle, a, h).0] = (a, h);
        }
    }
    let total = Neighbourhood::from_fn(n, |x, y| {
        let ((a, gx), (b, gy)) = (coords[x], coords[y]);
        base.related(a, b) && twist.sets[&(a, b)].contains(&g.mul(gy, g.inv(gx)))
    });
    let model = BundleWithNeighbours::new(bundle, base, total, DEFAULT_MAX_LIFT)?;
    let report = model.validate();
    Ok((model, report))
}
