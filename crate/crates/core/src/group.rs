//! Finite groups given by multiplication tables.

use std::fmt;

use crate::error::{Error, Result};
use crate::names::NameTable;
use crate::report::{Report, Violation};

/// An element of a [`FiniteGroup`], by position in the sorted element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: NameTable,
    table: Vec<Elem>,
    unit: Elem,
    inverses: Vec<Elem>,
    commutative: bool,
}

impl FiniteGroup {
    /// Builds a group from element names and a multiplication table indexed
    /// by the caller's ordering: `table[i][j]` is the position of `names[i] * names[j]`.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Shape("a group needs at least one element".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("multiplication table must be {n}x{n}")));
        }
        if let Some(&bad) = table.iter().flatten().find(|&&k| k >= n) {
            return Err(Error::Shape(format!("table entry {bad} out of range")));
        }
        let (names, relabel) = NameTable::sorted(names)?;
        let mut dense = vec![Elem(0); n * n];
        for (i, row) in table.iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                dense[relabel[i] * n + relabel[j]] = Elem(relabel[k]);
            }
        }
        let report = check_axioms(&names, &dense);
        if !report.is_empty() {
            return Err(Error::Invalid {
                what: "group",
                report,
            });
        }
        let unit = (0..n)
            .map(Elem)
            .find(|&e| (0..n).all(|g| dense[e.0 * n + g] == Elem(g)))
            .expect("checked by check_axioms");
        let inverses = (0..n)
            .map(|g| {
                (0..n)
                    .map(Elem)
                    .find(|&h| dense[g * n + h.0] == unit)
                    .expect("checked by check_axioms")
            })
            .collect();
        let commutative = (0..n).all(|g| (0..n).all(|h| dense[g * n + h] == dense[h * n + g]));
        Ok(Self {
            names,
            table: dense,
            unit,
            inverses,
            commutative,
        })
    }

    pub fn from_fn(names: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = names.len();
        let table = (0..n).map(|i| (0..n).map(|j| mul(i, j)).collect()).collect();
        Self::from_table(names, table)
    }

    /// The cyclic group of order `n`, elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::from_fn(names, |i, j| (i + j) % n).expect("cyclic group")
    }

    /// The symmetric group on `n` letters, elements named in cycle notation
    /// (`e`, `(12)`, `(123)`, ...). Products compose right to left:
    /// `(p * q)(i) = p(q(i))`.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=5).contains(&n), "symmetric group supported for 1..=5 letters");
        let perms = permutations(n);
        let names = perms.iter().map(|p| cycle_name(p)).collect();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        Self::from_fn(names, |i, j| {
            let composite: Vec<usize> = (0..n).map(|k| perms[i][perms[j][k]]).collect();
            index(&composite)
        })
        .expect("symmetric group")
    }

    /// Parses a short group designation: `Zn` or `Sn`.
    pub fn by_name(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown group `{text}` (expected Zn or Sn)"));
        let (kind, order) = text.split_at(text.len().min(1));
        let n: usize = order.parse().map_err(|_| bad())?;
        match kind {
            "Z" if n >= 1 => Ok(Self::cyclic(n)),
            "S" if (1..=5).contains(&n) => Ok(Self::symmetric(n)),
            _ => Err(bad()),
        }
    }

    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order()).map(Elem)
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    pub fn mul(&self, g: Elem, h: Elem) -> Elem {
        self.table[g.0 * self.order() + h.0]
    }

    pub fn inv(&self, g: Elem) -> Elem {
        self.inverses[g.0]
    }

    /// `g⁻¹ h g`, the right conjugation action.
    pub fn conj(&self, h: Elem, g: Elem) -> Elem {
        self.mul(self.inv(g), self.mul(h, g))
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn name(&self, g: Elem) -> &str {
        self.names.name(g.0)
    }

    pub fn names(&self) -> &[String] {
        self.names.names()
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.names.lookup(name, "group").map(Elem)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {} {{{}}}", self.order(), self.names().join(", "))
    }
}

fn check_axioms(names: &NameTable, table: &[Elem]) -> Report {
    let n = names.len();
    let mul = |a: usize, b: usize| table[a * n + b].0;
    let mut report = Report::new();
    'assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    report.push(Violation::new(
                        "associativity",
                        vec![names.name(a).into(), names.name(b).into(), names.name(c).into()],
                        "",
                    ));
                    break 'assoc;
                }
            }
        }
    }
    let unit = (0..n).find(|&e| (0..n).all(|g| mul(e, g) == g && mul(g, e) == g));
    match unit {
        None => report.push(Violation::new("unit", vec![], "no two-sided unit")),
        Some(e) => {
            for g in 0..n {
                if !(0..n).any(|h| mul(g, h) == e && mul(h, g) == e) {
                    report.push(Violation::new("inverse", vec![names.name(g).into()], ""));
                }
            }
        }
    }
    report
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..n {
            if !prefix.contains(&k) {
                prefix.push(k);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

fn cycle_name(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        out.push('(');
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            out.push_str(&(k + 1).to_string());
            k = perm[k];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_orders() {
        for n in 1..=6 {
            let g = FiniteGroup::cyclic(n);
            assert_eq!(g.order(), n);
            assert!(g.is_commutative());
            assert_eq!(g.name(g.unit()), "0");
        }
    }

    #[test]
    fn s3_table() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_commutative());
        assert_eq!(s3.names(), ["(12)", "(123)", "(13)", "(132)", "(23)", "e"]);
        let e = |n: &str| s3.elem(n).unwrap();
        // (13)(12)(13) = (23)
        assert_eq!(s3.conj(e("(12)"), e("(13)")), e("(23)"));
        // right-to-left: (12)(23) sends 3 -> 2 -> 1, 1 -> 2, 2 -> 3
        assert_eq!(s3.mul(e("(12)"), e("(23)")), e("(123)"));
        assert_eq!(s3.inv(e("(123)")), e("(132)"));
    }

    #[test]
    fn rejects_non_group() {
        let err = FiniteGroup::from_table(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![0, 0]])
            .unwrap_err();
        assert!(matches!(err, Error::Invalid { what: "group", .. }));
    }

    #[test]
    fn by_name() {
        assert_eq!(FiniteGroup::by_name("Z4").unwrap().order(), 4);
        assert_eq!(FiniteGroup::by_name("S3").unwrap().order(), 6);
        assert!(FiniteGroup::by_name("Q8").is_err());
        assert!(FiniteGroup::by_name("").is_err());
    }
}
