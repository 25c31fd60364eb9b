//! Parsers for the short textual parameters of `gauge generate`.

use std::collections::BTreeSet;

use gauge_core::neighbourhood::Twist;
use gauge_core::{BundleWithNeighbours, Elem, FiniteGroup, Neighbourhood};

/// A base: sorted point names and their neighbour relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSpec {
    pub names: Vec<String>,
    pub relation: Neighbourhood,
}

fn letters(n: usize) -> Result<Vec<String>, String> {
    if !(1..=26).contains(&n) {
        return Err(format!("named bases have 1 to 26 points, got {n}"));
    }
    Ok((0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect())
}

/// `Kn` (complete), `Pn` (path), `Cn` (cycle), `Dn` (discrete), or an
/// explicit `a,b,c;a-b,b-c`.
pub fn parse_base(text: &str) -> Result<BaseSpec, String> {
    if let Some((points, edges)) = text.split_once(';') {
        let mut names: Vec<String> = points.split(',').map(|s| s.trim().to_string()).collect();
        names.sort();
        if names.iter().any(|n| n.is_empty()) || names.windows(2).any(|w| w[0] == w[1]) {
            return Err(format!("bad point list `{points}`"));
        }
        let index = |n: &str| {
            names
                .iter()
                .position(|m| m == n.trim())
                .ok_or_else(|| format!("unknown base point `{n}`"))
        };
        let mut pairs = Vec::new();
        for e in edges.split(',').filter(|e| !e.trim().is_empty()) {
            let (a, b) = e.split_once('-').ok_or_else(|| format!("bad edge `{e}`"))?;
            pairs.push((index(a)?, index(b)?));
        }
        let relation = Neighbourhood::from_pairs(names.len(), pairs).map_err(|e| e.to_string())?;
        return Ok(BaseSpec { names, relation });
    }
    let bad = || format!("unknown base `{text}` (expected Kn, Pn, Cn, Dn or `a,b;a-b`)");
    let kind = text.chars().next().ok_or_else(bad)?;
    let n: usize = text[1..].parse().map_err(|_| bad())?;
    let names = letters(n)?;
    let relation = match kind {
        'K' => Neighbourhood::codiscrete(n),
        'D' => Neighbourhood::discrete(n),
        'P' => Neighbourhood::from_fn(n, |a, b| a.abs_diff(b) <= 1),
        'C' if n >= 3 => Neighbourhood::from_fn(n, |a, b| a.abs_diff(b) <= 1 || a.abs_diff(b) == n - 1),
        _ => return Err(bad()),
    };
    Ok(BaseSpec { names, relation })
}

fn index_of(names: &[String], n: &str) -> Result<usize, String> {
    names
        .iter()
        .position(|m| m == n.trim())
        .ok_or_else(|| format!("unknown base point `{n}`"))
}

/// `flat`, `full`, or `a-b=g|h,b-c=k`: explicit sets on the listed edges,
/// `{e}` elsewhere. The set for `b-a` is the inverse of the set for `a-b`.
pub fn parse_twist(text: &str, base: &BaseSpec, group: &FiniteGroup) -> Result<Twist, String> {
    match text {
        "flat" => return Ok(Twist::flat(&base.relation, group)),
        "full" => return Ok(Twist::full(&base.relation, group)),
        _ => {}
    }
    let mut twist = Twist::flat(&base.relation, group);
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (edge, set) = item.split_once('=').ok_or_else(|| format!("bad twist entry `{item}`"))?;
        let (a, b) = edge.split_once('-').ok_or_else(|| format!("bad edge `{edge}`"))?;
        let (a, b) = (index_of(&base.names, a)?, index_of(&base.names, b)?);
        if a == b || !base.relation.related(a, b) {
            return Err(format!("`{edge}` is not an edge of the base"));
        }
        let set = set
            .split('|')
            .map(|g| group.elem(g.trim()).map_err(|e| e.to_string()))
            .collect::<Result<BTreeSet<Elem>, _>>()?;
        let inverse = set.iter().map(|&g| group.inv(g)).collect();
        twist.sets.insert((a, b), set);
        twist.sets.insert((b, a), inverse);
    }
    Ok(twist)
}

/// `(p, q, g)`: set ∇(p,q) to `[s(p)·g, s(q)]`.
pub type Shift = (usize, usize, Elem);

/// `NAME` (the flat connection) or `NAME:a-b=g,c-a=h` (flat, with the
/// listed edges shifted by group elements).
pub fn parse_connection(text: &str, bn: &BundleWithNeighbours) -> Result<(String, Vec<Shift>), String> {
    let (name, shifts) = text.split_once(':').unwrap_or((text, ""));
    if name.is_empty() {
        return Err(format!("connection `{text}` has no name"));
    }
    let b = bn.bundle();
    let mut out = Vec::new();
    for item in shifts.split(',').filter(|s| !s.trim().is_empty()) {
        let (edge, g) = item.split_once('=').ok_or_else(|| format!("bad shift `{item}`"))?;
        let (x, y) = edge.split_once('-').ok_or_else(|| format!("bad edge `{edge}`"))?;
        let x = b.base_point(x.trim()).map_err(|e| e.to_string())?;
        let y = b.base_point(y.trim()).map_err(|e| e.to_string())?;
        let g = bn.group().elem(g.trim()).map_err(|e| e.to_string())?;
        out.push((x, y, g));
    }
    Ok((name.to_string(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_bases() {
        let k3 = parse_base("K3").unwrap();
        assert_eq!(k3.names, ["a", "b", "c"]);
        assert_eq!(k3.relation.edges().len(), 3);
        assert_eq!(parse_base("P4").unwrap().relation.edges().len(), 3);
        assert_eq!(parse_base("C4").unwrap().relation.edges().len(), 4);
        assert_eq!(parse_base("D2").unwrap().relation.edges().len(), 0);
        assert!(parse_base("C2").is_err());
        assert!(parse_base("X3").is_err());
        assert!(parse_base("K0").is_err());
    }

    #[test]
    fn explicit_base() {
        let b = parse_base("y,x,z;x-y").unwrap();
        assert_eq!(b.names, ["x", "y", "z"]);
        assert_eq!(b.relation.edges(), vec![(0, 1)]);
        assert!(parse_base("x,y;x-q").is_err());
    }

    #[test]
    fn twists() {
        let base = parse_base("K3").unwrap();
        let g = FiniteGroup::cyclic(4);
        let t = parse_twist("a-b=1|3", &base, &g).unwrap();
        assert_eq!(t.sets[&(0, 1)], [Elem(1), Elem(3)].into());
        assert_eq!(t.sets[&(1, 0)], [Elem(3), Elem(1)].into());
        assert_eq!(t.sets[&(1, 2)], [Elem(0)].into());
        assert!(parse_twist("a-a=1", &base, &g).is_err());
        assert!(parse_twist("a-b=9", &base, &g).is_err());
    }
}
