//! Differential forms on finite neighbour relations.
//!
//! A k-form assigns a value to every infinitesimal k-simplex. [`GroupForm`]s
//! take values in the structure group (on the total space, or on the base);
//! [`GaugeForm`]s live on the base and take values in the vertex group of
//! the gauge groupoid at the first vertex.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::neighbourhood::{BundleWithNeighbours, Neighbourhood, Simplex};
use crate::torsor::{FractionArrow, Point};

/// A form stored extensionally: one slot per (k+1)-tuple of the carrier,
/// filled exactly on the infinitesimal simplices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form<V> {
    degree: usize,
    carrier: usize,
    values: Vec<Option<V>>,
}

pub type GroupForm = Form<Elem>;
pub type GaugeForm = Form<FractionArrow>;

impl<V: Copy> Form<V> {
    /// Evaluates `f` on every k-simplex of `n`, in canonical order.
    pub fn try_from_fn(
        n: &Neighbourhood,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Result<V>,
    ) -> Result<Self> {
        let mut form = Self::empty(n.size(), degree)?;
        for s in n.enumerate_simplices(degree) {
            let v = f(&s)?;
            let i = form.encode(&s);
            form.values[i] = Some(v);
        }
        Ok(form)
    }

    /// Like [`try_from_fn`](Self::try_from_fn) but over a precomputed simplex list.
    pub(crate) fn try_from_simplices(
        carrier: usize,
        degree: usize,
        simplices: &[Simplex],
        mut f: impl FnMut(&[usize]) -> Result<V>,
    ) -> Result<Self> {
        let mut form = Self::empty(carrier, degree)?;
        for s in simplices {
            let v = f(s)?;
            let i = form.encode(s);
            form.values[i] = Some(v);
        }
        Ok(form)
    }

    pub fn constant(n: &Neighbourhood, degree: usize, value: V) -> Self {
        Self::try_from_fn(n, degree, |_| Ok(value)).expect("infallible")
    }

    fn empty(carrier: usize, degree: usize) -> Result<Self> {
        let slots = carrier
            .checked_pow(degree as u32 + 1)
            .filter(|&s| s <= 1 << 26)
            .ok_or_else(|| Error::Shape(format!("{degree}-forms on {carrier} points are too large")))?;
        Ok(Self {
            degree,
            carrier,
            values: vec![None; slots],
        })
    }

    fn encode(&self, s: &[usize]) -> usize {
        s.iter().fold(0, |acc, &x| acc * self.carrier + x)
    }

    fn decode(&self, mut code: usize) -> Simplex {
        let mut s = vec![0; self.degree + 1];
        for slot in s.iter_mut().rev() {
            *slot = code % self.carrier;
            code /= self.carrier;
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn get(&self, s: &[usize]) -> Option<V> {
        if s.len() != self.degree + 1 || s.iter().any(|&x| x >= self.carrier) {
            return None;
        }
        self.values[self.encode(s)]
    }

    pub fn value(&self, s: &[usize]) -> Result<V> {
        self.get(s)
            .ok_or_else(|| Error::Shape(format!("form of degree {} undefined on {s:?}", self.degree)))
    }

    /// Overwrites the value on an existing simplex.
    pub fn set(&mut self, s: &[usize], v: V) -> Result<()> {
        if self.get(s).is_none() {
            return Err(Error::Shape(format!("cannot set form outside its domain at {s:?}")));
        }
        let i = self.encode(s);
        self.values[i] = Some(v);
        Ok(())
    }

    /// `(simplex, value)` pairs in canonical (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (Simplex, V)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (self.decode(i), v)))
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True if the form is defined on exactly the k-simplices of `n`.
    pub fn is_valid_on(&self, n: &Neighbourhood) -> bool {
        self.carrier == n.size()
            && self
                .values
                .iter()
                .enumerate()
                .all(|(i, v)| v.is_some() == n.is_simplex(&self.decode(i)))
    }

    pub fn map<W: Copy>(&self, mut f: impl FnMut(&[usize], V) -> Result<W>) -> Result<Form<W>> {
        let mut out = Form::<W>::empty(self.carrier, self.degree)?;
        for (i, v) in self.values.iter().enumerate() {
            if let Some(v) = v {
                out.values[i] = Some(f(&self.decode(i), *v)?);
            }
        }
        Ok(out)
    }

    fn same_domain<W>(&self, other: &Form<W>) -> bool {
        self.degree == other.degree
            && self.carrier == other.carrier
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.is_some() == b.is_some())
    }
}

/// A failed instance of horizontality or equivariance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub simplex: Simplex,
    /// One element per perturbed vertex (horizontality), or the single
    /// diagonal shift (equivariance).
    pub shifts: Vec<Elem>,
    pub expected: Elem,
    pub found: Elem,
}

impl Counterexample {
    pub fn describe(&self, bn: &BundleWithNeighbours) -> String {
        let g = bn.group();
        format!(
            "simplex ({}) shifted by ({}): expected {}, found {}",
            bn.point_names(&self.simplex).join(","),
            self.shifts.iter().map(|&h| g.name(h)).collect::<Vec<_>>().join(","),
            g.name(self.expected),
            g.name(self.found)
        )
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "simplex {:?} shifted by {:?}", self.simplex, self.shifts)
    }
}

fn check_total_form(bn: &BundleWithNeighbours, theta: &GroupForm) -> Result<()> {
    if theta.carrier() != bn.total().size() {
        return Err(Error::Shape("form does not live on the total space".into()));
    }
    Ok(())
}

/// Whether `θ(u₀,u₁,…,u_k) = θ(u₀,u₁g₁,…,u_kg_k)` whenever the perturbed
/// tuple is still an infinitesimal simplex.
pub fn is_horizontal(bn: &BundleWithNeighbours, theta: &GroupForm) -> Result<(), Counterexample> {
    let b = bn.bundle();
    let g = b.group();
    let rel = bn.total();
    let mut perturbed = Vec::with_capacity(theta.degree() + 1);
    let mut shifts = Vec::with_capacity(theta.degree());
    for (u, value) in theta.iter() {
        perturbed.clear();
        perturbed.push(u[0]);
        shifts.clear();
        search_perturbations(b, g, rel, &u, theta, value, &mut perturbed, &mut shifts)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn search_perturbations(
    b: &crate::torsor::PrincipalBundle,
    g: &FiniteGroup,
    rel: &Neighbourhood,
    u: &[usize],
    theta: &GroupForm,
    value: Elem,
    perturbed: &mut Vec<usize>,
    shifts: &mut Vec<Elem>,
) -> Result<(), Counterexample> {
    let i = perturbed.len();
    if i == u.len() {
        let found = theta.get(perturbed).expect("perturbed tuple is a simplex");
        if found != value {
            return Err(Counterexample {
                simplex: u.to_vec(),
                shifts: shifts.clone(),
                expected: value,
                found,
            });
        }
        return Ok(());
    }
    for h in g.elements() {
        let y = b.act(Point(u[i]), h).0;
        if perturbed.iter().all(|&x| rel.related(x, y)) {
            perturbed.push(y);
            shifts.push(h);
            let r = search_perturbations(b, g, rel, u, theta, value, perturbed, shifts);
            perturbed.pop();
            shifts.pop();
            r?;
        }
    }
    Ok(())
}

/// Whether `θ(u₀g,…,u_kg) = g⁻¹ θ(u₀,…,u_k) g` for every simplex and every `g`.
pub fn is_equivariant(bn: &BundleWithNeighbours, theta: &GroupForm) -> Result<(), Counterexample> {
    let b = bn.bundle();
    let g = b.group();
    let mut shifted = Vec::with_capacity(theta.degree() + 1);
    for (u, value) in theta.iter() {
        for h in g.elements() {
            shifted.clear();
            shifted.extend(u.iter().map(|&x| b.act(Point(x), h).0));
            let expected = g.conj(value, h);
            let found = theta.get(&shifted);
            if found != Some(expected) {
                return Err(Counterexample {
                    simplex: u,
                    shifts: vec![h],
                    expected,
                    // an undefined value means the action broke the relation
                    found: found.unwrap_or(expected),
                });
            }
        }
    }
    Ok(())
}

/// `(π*Θ)(u₀,…,u_k) = Θ(πu₀,…,πu_k)`.
pub fn pullback(bn: &BundleWithNeighbours, base_form: &GroupForm) -> Result<GroupForm> {
    if !base_form.is_valid_on(bn.base()) {
        return Err(Error::Shape("form is not total on the base simplices".into()));
    }
    let k = base_form.degree();
    GroupForm::try_from_simplices(bn.total().size(), k, &bn.total_simplices(k), |u| {
        base_form.value(&bn.project(u))
    })
}

/// The unique base form whose pullback is `θ`, for a commutative group and a
/// horizontal, equivariant `θ`. Lift-independence is checked on every lift.
pub fn descend_invariant(bn: &BundleWithNeighbours, theta: &GroupForm) -> Result<GroupForm> {
    if !bn.group().is_commutative() {
        return Err(Error::NonCommutative("descending a form to the base"));
    }
    check_total_form(bn, theta)?;
    is_horizontal(bn, theta)
        .map_err(|c| Error::Precondition(format!("form is not horizontal: {}", c.describe(bn))))?;
    is_equivariant(bn, theta)
        .map_err(|c| Error::Precondition(format!("form is not equivariant: {}", c.describe(bn))))?;
    descend_by_lifts(bn, theta.degree(), |u| theta.value(u), |x, y| x == y, "descended value")
}

/// Builds a base form from values computed on total-space simplices, taking
/// the first lift in canonical order and insisting every other lift agrees.
fn descend_by_lifts<V: Copy>(
    bn: &BundleWithNeighbours,
    degree: usize,
    mut value: impl FnMut(&[usize]) -> Result<V>,
    same: impl Fn(V, V) -> bool,
    what: &str,
) -> Result<Form<V>> {
    let mut out = Form::<V>::empty(bn.base().size(), degree)?;
    for u in bn.total_simplices(degree).iter() {
        let a = bn.project(u);
        if !bn.base().is_simplex(&a) {
            return Err(Error::Precondition(format!(
                "projection of ({}) is not a base simplex",
                bn.point_names(u).join(",")
            )));
        }
        let v = value(u)?;
        let i = out.encode(&a);
        match out.values[i] {
            None => out.values[i] = Some(v),
            Some(w) if same(v, w) => {}
            Some(_) => {
                return Err(Error::Inconsistent(format!(
                    "{what} over ({}) depends on the lift ({})",
                    bn.base_names(&a).join(","),
                    bn.point_names(u).join(",")
                )))
            }
        }
    }
    for a in bn.base_simplices(degree).iter() {
        if out.get(a).is_none() {
            return Err(Error::Precondition(format!(
                "base simplex ({}) has no lift",
                bn.base_names(a).join(",")
            )));
        }
    }
    Ok(out)
}

/// `θ ↦ θ̌` with `θ̌(a₀,…,a_k) = (u₀·θ(u₀,…,u_k)) u₀⁻¹` for any lift `u`.
///
/// Refuses non-horizontal or non-equivariant input with a witness, and checks
/// that every lift gives the same arrow.
pub fn check_transform(bn: &BundleWithNeighbours, theta: &GroupForm) -> Result<GaugeForm> {
    check_total_form(bn, theta)?;
    is_horizontal(bn, theta)
        .map_err(|c| Error::Precondition(format!("form is not horizontal: {}", c.describe(bn))))?;
    is_equivariant(bn, theta)
        .map_err(|c| Error::Precondition(format!("form is not equivariant: {}", c.describe(bn))))?;
    let b = bn.bundle();
    descend_by_lifts(
        bn,
        theta.degree(),
        |u| {
            let u0 = Point(u[0]);
            b.make_arrow(b.act(u0, theta.value(u)?), u0)
        },
        |x, y| x == y,
        "gauge value",
    )
}

/// `α ↦ α̂` with `α̂(u₀,…,u_k) = u₀⁻¹ (α(πu₀,…,πu_k) · u₀)`.
pub fn hat_transform(bn: &BundleWithNeighbours, alpha: &GaugeForm) -> Result<GroupForm> {
    if alpha.carrier() != bn.base().size() {
        return Err(Error::Shape("gauge form does not live on the base".into()));
    }
    let b = bn.bundle();
    let k = alpha.degree();
    GroupForm::try_from_simplices(bn.total().size(), k, &bn.total_simplices(k), |u| {
        let h = alpha.value(&bn.project(u))?;
        let u0 = Point(u[0]);
        b.div(u0, b.act_left(h, u0)?)
    })
}

/// Checks `u₀ · α̂(u) = α(πu) · u₀` on every simplex; returns the first failure.
pub fn check_hat_relation(
    bn: &BundleWithNeighbours,
    alpha: &GaugeForm,
    alpha_hat: &GroupForm,
) -> Result<Option<Simplex>> {
    let b = bn.bundle();
    for (u, v) in alpha_hat.iter() {
        let u0 = Point(u[0]);
        let lhs = b.act(u0, v);
        let rhs = b.act_left(alpha.value(&bn.project(&u))?, u0)?;
        if lhs != rhs {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Whether `α` sends each base simplex to an endo-arrow at its first vertex.
pub fn is_gauge_valued(bn: &BundleWithNeighbours, alpha: &GaugeForm) -> bool {
    let b = bn.bundle();
    alpha.is_valid_on(bn.base())
        && alpha
            .iter()
            .all(|(a, h)| b.arrow_dom(h) == a[0] && b.arrow_cod(h) == a[0] && b.make_arrow(h.num, h.den) == Ok(h))
}

/// `dω(x₀,x₁,x₂) = ω(x₀,x₁) ω(x₁,x₂) ω(x₂,x₀)` on every 2-simplex of `n`.
pub fn coboundary1(n: &Neighbourhood, group: &FiniteGroup, omega: &GroupForm) -> Result<GroupForm> {
    if omega.degree() != 1 {
        return Err(Error::Shape(format!(
            "coboundary is defined on 1-forms, got degree {}",
            omega.degree()
        )));
    }
    if omega.carrier() != n.size() {
        return Err(Error::Shape("form and relation have different carriers".into()));
    }
    GroupForm::try_from_fn(n, 2, |x| {
        let w01 = omega.value(&[x[0], x[1]])?;
        let w12 = omega.value(&[x[1], x[2]])?;
        let w20 = omega.value(&[x[2], x[0]])?;
        Ok(group.mul(w01, group.mul(w12, w20)))
    })
}

/// Pointwise product `θ₁ · θ₂`.
pub fn product_form(group: &FiniteGroup, a: &GroupForm, b: &GroupForm) -> Result<GroupForm> {
    if !a.same_domain(b) {
        return Err(Error::Shape(format!(
            "cannot multiply forms of degrees {} and {} on different domains",
            a.degree(),
            b.degree()
        )));
    }
    a.map(|s, x| Ok(group.mul(x, b.value(s)?)))
}

/// Pointwise inverse `θ⁻¹`.
pub fn inverse_form(group: &FiniteGroup, a: &GroupForm) -> GroupForm {
    a.map(|_, x| Ok(group.inv(x))).expect("infallible")
}

/// `ω(u,u) = e` and `ω(u,v) ω(v,u) = e` for a 1-form.
pub fn is_normalized(group: &FiniteGroup, omega: &GroupForm) -> bool {
    omega.degree() == 1
        && omega.iter().all(|(s, w)| {
            let back = omega.get(&[s[1], s[0]]);
            (s[0] != s[1] || w == group.unit()) && back.map(|v| group.mul(w, v)) == Some(group.unit())
        })
}

/// A uniformly random group-valued k-form on `n`.
pub fn random_group_form(n: &Neighbourhood, group: &FiniteGroup, degree: usize, rng: &mut impl Rng) -> GroupForm {
    let order = group.order();
    GroupForm::try_from_fn(n, degree, |_| Ok(Elem(rng.random_range(0..order)))).expect("infallible")
}

/// A uniformly random gauge form of degree k on the base.
pub fn random_gauge_form(bn: &BundleWithNeighbours, degree: usize, rng: &mut impl Rng) -> Result<GaugeForm> {
    let b = bn.bundle();
    let order = b.group().order();
    GaugeForm::try_from_simplices(bn.base().size(), degree, &bn.base_simplices(degree), |a| {
        b.group_to_gauge(a[0], Elem(rng.random_range(0..order)))
    })
}

/// The gauge form whose value at every simplex is the identity arrow.
pub fn identity_gauge_form(bn: &BundleWithNeighbours, degree: usize) -> Result<GaugeForm> {
    let b = bn.bundle();
    GaugeForm::try_from_simplices(bn.base().size(), degree, &bn.base_simplices(degree), |a| {
        b.identity_arrow(a[0])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbourhood::{trivial_model, twisted_model, Twist};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn names(n: usize) -> Vec<String> {
        ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn trivial(n: usize, g: FiniteGroup) -> BundleWithNeighbours {
        trivial_model(names(n), Neighbourhood::codiscrete(n), g).unwrap()
    }

    #[test]
    fn form_storage_roundtrip() {
        let n = Neighbourhood::from_pairs(3, [(0, 1)]).unwrap();
        let f = GroupForm::try_from_fn(&n, 1, |s| Ok(Elem(s[0] + s[1]))).unwrap();
        assert!(f.is_valid_on(&n));
        assert_eq!(f.len(), n.pairs().len());
        let listed: Vec<Simplex> = f.iter().map(|(s, _)| s).collect();
        assert_eq!(listed, n.enumerate_simplices(1));
        assert_eq!(f.get(&[0, 2]), None);
        assert_eq!(f.get(&[1, 0]), Some(Elem(1)));
    }

    #[test]
    fn constant_unit_is_horizontal_and_equivariant() {
        for bn in [trivial(2, FiniteGroup::cyclic(2)), trivial(2, FiniteGroup::symmetric(3))] {
            for k in 0..=2 {
                let unit = GroupForm::constant(bn.total(), k, bn.group().unit());
                assert!(is_horizontal(&bn, &unit).is_ok());
                assert!(is_equivariant(&bn, &unit).is_ok());
            }
        }
    }

    #[test]
    fn pullbacks_are_horizontal_and_invariant() {
        let bn = trivial(2, FiniteGroup::cyclic(2));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..=2 {
            for _ in 0..20 {
                let theta = random_group_form(bn.base(), bn.group(), k, &mut rng);
                let pulled = pullback(&bn, &theta).unwrap();
                assert!(pulled.is_valid_on(bn.total()));
                assert!(is_horizontal(&bn, &pulled).is_ok());
                assert!(is_equivariant(&bn, &pulled).is_ok());
                assert_eq!(descend_invariant(&bn, &pulled).unwrap(), theta);
            }
        }
    }

    #[test]
    fn degree_zero_pullback() {
        let bn = trivial(3, FiniteGroup::cyclic(3));
        let theta = GroupForm::try_from_fn(bn.base(), 0, |s| Ok(Elem(s[0]))).unwrap();
        let pulled = pullback(&bn, &theta).unwrap();
        for x in bn.bundle().points() {
            assert_eq!(pulled.get(&[x.0]), theta.get(&[bn.bundle().proj(x)]));
        }
    }

    #[test]
    fn descend_refuses_noncommutative() {
        let bn = trivial(2, FiniteGroup::symmetric(3));
        let unit = GroupForm::constant(bn.total(), 1, bn.group().unit());
        assert!(matches!(descend_invariant(&bn, &unit), Err(Error::NonCommutative(_))));
    }

    #[test]
    fn non_horizontal_form_is_refused() {
        let bn = trivial(2, FiniteGroup::cyclic(2));
        let b = bn.bundle();
        // θ(u,v) = group coordinate of v, which moves when v does
        let x0 = |x: usize| b.fibre(b.proj(Point(x)))[0];
        let theta = GroupForm::try_from_fn(bn.total(), 1, |s| b.div(x0(s[1]), Point(s[1]))).unwrap();
        let witness = is_horizontal(&bn, &theta).unwrap_err();
        assert_ne!(witness.expected, witness.found);
        assert!(matches!(check_transform(&bn, &theta), Err(Error::Precondition(_))));
    }

    #[test]
    fn check_of_unit_is_identity() {
        let bn = trivial(3, FiniteGroup::symmetric(3));
        for k in 0..=2 {
            let unit = GroupForm::constant(bn.total(), k, bn.group().unit());
            let checked = check_transform(&bn, &unit).unwrap();
            assert_eq!(checked, identity_gauge_form(&bn, k).unwrap());
            assert_eq!(hat_transform(&bn, &checked).unwrap(), unit);
        }
    }

    #[test]
    fn check_of_pullback_on_z2() {
        // degree 1: θ̌(a,b) = group_to_gauge(a, Θ(a,b))
        let bn = trivial(2, FiniteGroup::cyclic(2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let theta = random_group_form(bn.base(), bn.group(), 1, &mut rng);
            let checked = check_transform(&bn, &pullback(&bn, &theta).unwrap()).unwrap();
            for (a, h) in checked.iter() {
                let expected = bn.bundle().group_to_gauge(a[0], theta.value(&a).unwrap()).unwrap();
                assert_eq!(h, expected);
            }
        }
    }

    #[test]
    fn hat_of_random_gauge_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for bn in [trivial(2, FiniteGroup::symmetric(3)), trivial(3, FiniteGroup::cyclic(3))] {
            for k in 0..=2 {
                let alpha = random_gauge_form(&bn, k, &mut rng).unwrap();
                assert!(is_gauge_valued(&bn, &alpha));
                let hat = hat_transform(&bn, &alpha).unwrap();
                assert!(is_horizontal(&bn, &hat).is_ok());
                assert!(is_equivariant(&bn, &hat).is_ok());
                assert_eq!(check_hat_relation(&bn, &alpha, &hat).unwrap(), None);
                assert_eq!(check_transform(&bn, &hat).unwrap(), alpha);
            }
        }
    }

    #[test]
    fn commutative_hat_is_pullback() {
        let bn = trivial(3, FiniteGroup::cyclic(3));
        let b = bn.bundle();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alpha = random_gauge_form(&bn, 2, &mut rng).unwrap();
        let as_group = alpha.map(|_, h| b.gauge_to_group(h)).unwrap();
        assert_eq!(hat_transform(&bn, &alpha).unwrap(), pullback(&bn, &as_group).unwrap());
    }

    #[test]
    fn coboundary_basics() {
        let bn = trivial(2, FiniteGroup::symmetric(3));
        let g = bn.group();
        let unit = GroupForm::constant(bn.total(), 1, g.unit());
        assert_eq!(
            coboundary1(bn.total(), g, &unit).unwrap(),
            GroupForm::constant(bn.total(), 2, g.unit())
        );
        let two = GroupForm::constant(bn.total(), 2, g.unit());
        assert!(matches!(coboundary1(bn.total(), g, &two), Err(Error::Shape(_))));
    }

    #[test]
    fn coboundary_of_normalized_on_degenerate() {
        // ω(u,v) = c(u)⁻¹ c(v) for an arbitrary labelling c is normalized;
        // on (x,x,z) dω = ω(x,x) ω(x,z) ω(z,x) = e.
        let bn = trivial(2, FiniteGroup::symmetric(3));
        let g = bn.group();
        let label = |x: usize| Elem((x * 5 + 1) % g.order());
        let omega =
            GroupForm::try_from_fn(bn.total(), 1, |s| Ok(g.mul(g.inv(label(s[0])), label(s[1])))).unwrap();
        assert!(is_normalized(g, &omega));
        let d = coboundary1(bn.total(), g, &omega).unwrap();
        for (s, v) in d.iter() {
            if s[0] == s[1] {
                assert_eq!(v, g.unit());
            }
        }
    }

    #[test]
    fn product_and_inverse() {
        let bn = trivial(2, FiniteGroup::symmetric(3));
        let g = bn.group();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = random_group_form(bn.total(), g, 1, &mut rng);
        let unit = GroupForm::constant(bn.total(), 1, g.unit());
        assert_eq!(product_form(g, &unit, &w).unwrap(), w);
        assert_eq!(product_form(g, &w, &inverse_form(g, &w)).unwrap(), unit);
        let two = GroupForm::constant(bn.total(), 2, g.unit());
        assert!(product_form(g, &w, &two).is_err());
    }

    #[test]
    fn coboundary_commutes_with_pullback() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for bn in [trivial(3, FiniteGroup::cyclic(2)), trivial(2, FiniteGroup::symmetric(3))] {
            for _ in 0..10 {
                let theta = random_group_form(bn.base(), bn.group(), 1, &mut rng);
                let lhs = coboundary1(bn.total(), bn.group(), &pullback(&bn, &theta).unwrap()).unwrap();
                let rhs = pullback(&bn, &coboundary1(bn.base(), bn.group(), &theta).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    /// Commutative, degree 1, tiny model: every form on P is enumerated and
    /// the horizontal equivariant ones are exactly the pullbacks.
    #[test]
    fn horizontal_equivariant_equals_pullbacks_exhaustively() {
        let bn = trivial(2, FiniteGroup::cyclic(2));
        let simplices = bn.total_simplices(1).into_owned();
        assert_eq!(simplices.len(), 16);
        let mut pulled: std::collections::HashSet<GroupForm> = std::collections::HashSet::new();
        for bits in 0u32..(1 << bn.base_simplices(1).len()) {
            let mut i = 0;
            let theta = GroupForm::try_from_fn(bn.base(), 1, |_| {
                i += 1;
                Ok(Elem(((bits >> (i - 1)) & 1) as usize))
            })
            .unwrap();
            pulled.insert(pullback(&bn, &theta).unwrap());
        }
        assert_eq!(pulled.len(), 16);
        let mut count = 0;
        for bits in 0u32..(1 << 16) {
            let mut i = 0;
            let theta = GroupForm::try_from_simplices(4, 1, &simplices, |_| {
                i += 1;
                Ok(Elem(((bits >> (i - 1)) & 1) as usize))
            })
            .unwrap();
            let he = is_horizontal(&bn, &theta).is_ok() && is_equivariant(&bn, &theta).is_ok();
            assert_eq!(he, pulled.contains(&theta));
            count += he as usize;
        }
        assert_eq!(count, 16);
    }

    #[test]
    fn flat_twisted_forms() {
        let base = Neighbourhood::codiscrete(2);
        let g = FiniteGroup::cyclic(3);
        let (bn, report) = twisted_model(names(2), base.clone(), g.clone(), &Twist::flat(&base, &g)).unwrap();
        assert!(report.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let alpha = random_gauge_form(&bn, 1, &mut rng).unwrap();
        let hat = hat_transform(&bn, &alpha).unwrap();
        assert_eq!(check_transform(&bn, &hat).unwrap(), alpha);
    }
}
