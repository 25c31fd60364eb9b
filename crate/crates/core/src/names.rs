//! Sorted name tables. Every carrier in the crate orders its members by
//! name, so "least element" means lexicographically least.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NameTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl NameTable {
    /// Sorts `names` and returns the table together with the map from the
    /// caller's original positions to sorted positions.
    pub fn sorted(names: Vec<String>) -> Result<(Self, Vec<usize>)> {
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut relabel = vec![0; names.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let mut sorted: Vec<String> = Vec::with_capacity(names.len());
        for &old in &order {
            if sorted.last() == Some(&names[old]) {
                return Err(Error::DuplicateName(names[old].clone()));
            }
            sorted.push(names[old].clone());
        }
        let index = sorted
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok((Self { names: sorted, index }, relabel))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str, context: &str) -> Result<usize> {
        self.get(name).ok_or_else(|| Error::UnknownName {
            name: name.to_string(),
            context: context.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_relabels() {
        let (t, relabel) =
            NameTable::sorted(vec!["b".into(), "c".into(), "a".into()]).unwrap();
        assert_eq!(t.names(), ["a", "b", "c"]);
        assert_eq!(relabel, vec![1, 2, 0]);
        assert_eq!(t.get("c"), Some(2));
    }

    #[test]
    fn rejects_duplicates() {
        let err = NameTable::sorted(vec!["x".into(), "x".into()]).unwrap_err();
        assert_eq!(err, Error::DuplicateName("x".into()));
    }
}
