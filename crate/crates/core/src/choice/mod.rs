//! Choice functions over explicit domain families, and layerings.

mod conditions;

pub use conditions::{check_domain_closure, check_mu, require_conditions, Closure, MuCondition};

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::points::{PointSet, MAX_POINTS};

/// Base set `Z` with a family of distinct subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    names: Vec<String>,
    family: Vec<PointSet>,
    position: HashMap<PointSet, usize>,
}

impl Domain {
    pub fn new(names: Vec<String>, family: Vec<PointSet>) -> Result<Self> {
        if names.len() > MAX_POINTS {
            return Err(Error::TooManyPoints(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Domain("empty point name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Domain(format!("point `{n}` declared twice")));
            }
        }
        let base = PointSet::full(names.len());
        let mut position = HashMap::with_capacity(family.len());
        for (i, &y) in family.iter().enumerate() {
            if !y.is_subset(base) {
                return Err(Error::Domain(format!("family member {i} leaves the base set")));
            }
            if position.insert(y, i).is_some() {
                return Err(Error::Domain(format!(
                    "family member {} listed twice",
                    y.show(&names)
                )));
            }
        }
        Ok(Domain {
            names,
            family,
            position,
        })
    }

    /// All subsets of the base, in increasing mask order.
    pub fn powerset(names: Vec<String>, include_empty: bool) -> Result<Self> {
        if names.len() > 16 {
            return Err(Error::Budget(format!("powerset of {} points", names.len())));
        }
        let family = PointSet::full(names.len())
            .subsets()
            .filter(|s| include_empty || !s.is_empty())
            .collect();
        Domain::new(names, family)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn point_count(&self) -> usize {
        self.names.len()
    }

    pub fn base(&self) -> PointSet {
        PointSet::full(self.names.len())
    }

    pub fn family(&self) -> &[PointSet] {
        &self.family
    }

    pub fn position(&self, set: PointSet) -> Option<usize> {
        self.position.get(&set).copied()
    }

    pub fn contains(&self, set: PointSet) -> bool {
        self.position.contains_key(&set)
    }

    pub fn has_empty(&self) -> bool {
        self.contains(PointSet::EMPTY)
    }

    pub fn point(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet> {
        names.iter().map(|n| self.point(n.as_ref())).collect()
    }

    pub fn show(&self, set: PointSet) -> String {
        set.show(&self.names)
    }

    pub fn name(&self, point: usize) -> &str {
        &self.names[point]
    }
}

/// A total table `Y -> mu(Y)` over the family of a [`Domain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceFunction {
    domain: Arc<Domain>,
    table: Vec<PointSet>,
}

impl ChoiceFunction {
    pub fn new(domain: Arc<Domain>, table: Vec<PointSet>) -> Result<Self> {
        if table.len() != domain.family.len() {
            return Err(Error::Domain(format!(
                "table has {} entries for a family of {}",
                table.len(),
                domain.family.len()
            )));
        }
        let base = domain.base();
        if let Some(bad) = table.iter().find(|t| !t.is_subset(base)) {
            return Err(Error::Domain(format!("table value {bad:?} leaves the base set")));
        }
        Ok(ChoiceFunction { domain, table })
    }

    pub fn from_fn(domain: Arc<Domain>, f: impl Fn(PointSet) -> PointSet) -> Result<Self> {
        let table = domain.family.iter().map(|&y| f(y)).collect();
        Self::new(domain, table)
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn table(&self) -> &[PointSet] {
        &self.table
    }

    /// Value at family position `i`.
    pub fn at(&self, i: usize) -> PointSet {
        self.table[i]
    }

    pub fn get(&self, set: PointSet) -> Option<PointSet> {
        self.domain.position(set).map(|i| self.table[i])
    }

    /// `(Y, mu(Y))` pairs in family order.
    pub fn entries(&self) -> impl Iterator<Item = (PointSet, PointSet)> + '_ {
        self.domain.family.iter().copied().zip(self.table.iter().copied())
    }

    pub fn family(&self) -> &[PointSet] {
        &self.domain.family
    }

    pub fn show(&self, set: PointSet) -> String {
        self.domain.show(set)
    }
}

/// Ordered disjoint blocks `A_1 < .. < A_n`; ranks are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layering {
    names: Vec<String>,
    blocks: Vec<PointSet>,
    rank: Vec<Option<usize>>,
}

impl Layering {
    pub fn new(names: &[String], blocks: Vec<PointSet>) -> Result<Self> {
        let base = PointSet::full(names.len());
        let mut rank = vec![None; names.len()];
        for (k, &b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::Layering(format!("block {} is empty", k + 1)));
            }
            if !b.is_subset(base) {
                return Err(Error::Layering(format!("block {} leaves the base set", k + 1)));
            }
            for x in b {
                if let Some(r) = rank[x] {
                    return Err(Error::Layering(format!(
                        "point `{}` is in blocks {r} and {}",
                        names[x],
                        k + 1
                    )));
                }
                rank[x] = Some(k + 1);
            }
        }
        Ok(Layering {
            names: names.to_vec(),
            blocks,
            rank,
        })
    }

    /// One block holding the whole base.
    pub fn single(names: &[String]) -> Result<Self> {
        Self::new(names, vec![PointSet::full(names.len())])
    }

    pub fn blocks(&self) -> &[PointSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block `i`, 1-based.
    pub fn block(&self, i: usize) -> PointSet {
        self.blocks[i - 1]
    }

    pub fn covered(&self) -> PointSet {
        self.blocks.iter().fold(PointSet::EMPTY, |a, &b| a | b)
    }

    pub fn covers(&self, s: PointSet) -> bool {
        s.is_subset(self.covered())
    }

    pub fn rank(&self, x: usize) -> Option<usize> {
        self.rank.get(x).copied().flatten()
    }

    pub fn rank_of(&self, x: usize) -> Result<usize> {
        self.rank(x).ok_or_else(|| {
            Error::Unranked(self.names.get(x).cloned().unwrap_or_else(|| format!("#{x}")))
        })
    }

    /// Points whose rank is strictly below `r`.
    pub fn below(&self, r: usize) -> PointSet {
        self.blocks[..r.saturating_sub(1).min(self.blocks.len())]
            .iter()
            .fold(PointSet::EMPTY, |a, &b| a | b)
    }

    /// Points whose rank is at most `r`.
    pub fn up_to(&self, r: usize) -> PointSet {
        self.blocks[..r.min(self.blocks.len())]
            .iter()
            .fold(PointSet::EMPTY, |a, &b| a | b)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Fails unless the layering ranks every point of `s` over the same names.
    pub fn require_compatible(&self, names: &[String], s: PointSet) -> Result<()> {
        if self.names != names {
            return Err(Error::Layering("layering is over a different point list".into()));
        }
        self.require_cover(s)
    }

    pub fn require_cover(&self, s: PointSet) -> Result<()> {
        match (s - self.covered()).first() {
            Some(x) => Err(Error::Unranked(self.names[x].clone())),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn domain_rejects_duplicates() {
        let n = names(&["a", "b"]);
        let fam = vec![PointSet::from_bits(1), PointSet::from_bits(1)];
        assert!(Domain::new(n.clone(), fam).is_err());
        assert!(Domain::new(names(&["a", "a"]), vec![]).is_err());
        assert!(Domain::new(n, vec![PointSet::from_bits(4)]).is_err());
    }

    #[test]
    fn powerset_sizes() {
        let d = Domain::powerset(names(&["a", "b", "c"]), false).unwrap();
        assert_eq!(d.family().len(), 7);
        assert!(!d.has_empty());
        let e = Domain::powerset(names(&["a", "b"]), true).unwrap();
        assert_eq!(e.family().len(), 4);
        assert!(e.has_empty());
    }

    #[test]
    fn ranks_are_one_based() {
        let n = names(&["a", "b", "c"]);
        let l = Layering::new(&n, vec![PointSet::from_bits(0b011), PointSet::from_bits(0b100)])
            .unwrap();
        assert_eq!(l.rank_of(0).unwrap(), 1);
        assert_eq!(l.rank_of(2).unwrap(), 2);
        assert!(l.rank_of(3).is_err());
        assert_eq!(l.below(2), PointSet::from_bits(0b011));
        assert_eq!(l.below(1), PointSet::EMPTY);
        assert_eq!(l.up_to(2), PointSet::from_bits(0b111));
    }

    #[test]
    fn layering_rejects_overlap_and_empty_blocks() {
        let n = names(&["a", "b"]);
        assert!(Layering::new(&n, vec![PointSet::from_bits(1), PointSet::from_bits(3)]).is_err());
        assert!(Layering::new(&n, vec![PointSet::EMPTY]).is_err());
    }

    #[test]
    fn uncovered_point_is_reported() {
        let n = names(&["a", "b"]);
        let l = Layering::new(&n, vec![PointSet::from_bits(1)]).unwrap();
        match l.require_cover(PointSet::from_bits(3)) {
            Err(Error::Unranked(p)) => assert_eq!(p, "b"),
            other => panic!("{other:?}"),
        }
    }
}
