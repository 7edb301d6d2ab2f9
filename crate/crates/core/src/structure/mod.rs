//! Preferential structures with copies.
//!
//! A structure is a list of copies `<x,i>` of points plus an attack relation
//! between copies. `a ≺ b` reads "a attacks b": b is not minimal in any set
//! that also contains a's point.

mod enumerate;

pub use enumerate::{enumerate_structures, StructureStream};

use std::collections::VecDeque;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::choice::{ChoiceFunction, Domain, Layering};
use crate::error::{Error, Result};
use crate::points::{PointSet, MAX_POINTS};
use crate::report::{ConditionReport, Value, Witness};

/// One copy `<point, index>`; `label` records where a construction got it from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCopy {
    pub point: usize,
    pub index: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferentialStructure {
    names: Vec<String>,
    copies: Vec<PointCopy>,
    /// `attackers[c]` holds every copy attacking `c`.
    attackers: Vec<FixedBitSet>,
    /// Points of `attackers[c]`, cached for minimization.
    attacker_points: Vec<PointSet>,
    copies_of: Vec<Vec<usize>>,
}

/// Levels of a ranked, cycle-free relation: `a ≺ b` iff `level[a] < level[b]`
/// when the relation is also transitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankWitness {
    pub levels: Vec<usize>,
}

impl PreferentialStructure {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() > MAX_POINTS {
            return Err(Error::TooManyPoints(names.len()));
        }
        let n = names.len();
        Ok(PreferentialStructure {
            names,
            copies: Vec::new(),
            attackers: Vec::new(),
            attacker_points: Vec::new(),
            copies_of: vec![Vec::new(); n],
        })
    }

    /// One unlabeled copy of every point, no attacks.
    pub fn injective(names: Vec<String>) -> Result<Self> {
        let n = names.len();
        let mut s = Self::new(names)?;
        for x in 0..n {
            s.add_copy(x, "");
        }
        Ok(s)
    }

    /// Build from point-level edges on an injective structure, `(attacker, attacked)`.
    pub fn from_point_edges(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut s = Self::injective(names)?;
        for &(a, b) in edges {
            s.add_attack(a, b)?;
        }
        Ok(s)
    }

    pub fn add_copy(&mut self, point: usize, label: impl Into<String>) -> usize {
        assert!(point < self.names.len(), "point index out of range");
        let id = self.copies.len();
        let index = self.copies_of[point].len();
        self.copies.push(PointCopy {
            point,
            index,
            label: label.into(),
        });
        self.copies_of[point].push(id);
        for row in &mut self.attackers {
            row.grow(id + 1);
        }
        self.attackers.push(FixedBitSet::with_capacity(id + 1));
        self.attacker_points.push(PointSet::EMPTY);
        id
    }

    /// Record `attacker ≺ attacked`. Self-attacks are refused.
    pub fn add_attack(&mut self, attacker: usize, attacked: usize) -> Result<()> {
        if attacker == attacked {
            return Err(Error::SelfAttack(self.copy_name(attacker)));
        }
        self.insert_edge(attacker, attacked);
        Ok(())
    }

    /// Like [`add_attack`](Self::add_attack) without the self-attack guard.
    /// Constructions use it where the underlying definition allows a copy to
    /// attack itself; such copies are listed by [`self_attacking`](Self::self_attacking).
    pub(crate) fn insert_edge(&mut self, attacker: usize, attacked: usize) {
        assert!(attacker < self.copies.len() && attacked < self.copies.len());
        self.attackers[attacked].insert(attacker);
        let p = self.copies[attacker].point;
        self.attacker_points[attacked].insert(p);
    }

    /// Every copy of every point in `pts` attacks `attacked`; self-attacks included.
    pub(crate) fn insert_point_attackers(&mut self, pts: PointSet, attacked: usize) {
        for p in pts {
            for k in 0..self.copies_of[p].len() {
                let a = self.copies_of[p][k];
                self.attackers[attacked].insert(a);
            }
        }
        let have: PointSet = pts.iter().filter(|&p| !self.copies_of[p].is_empty()).collect();
        self.attacker_points[attacked] |= have;
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn point_count(&self) -> usize {
        self.names.len()
    }

    pub fn copies(&self) -> &[PointCopy] {
        &self.copies
    }

    pub fn copy(&self, c: usize) -> &PointCopy {
        &self.copies[c]
    }

    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    pub fn copies_of(&self, point: usize) -> &[usize] {
        &self.copies_of[point]
    }

    /// Points that have at least one copy.
    pub fn points(&self) -> PointSet {
        self.copies.iter().map(|c| c.point).collect()
    }

    /// `a ≺ b`
    pub fn attacks(&self, a: usize, b: usize) -> bool {
        self.attackers[b].contains(a)
    }

    pub fn attackers_of(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.attackers[c].ones()
    }

    pub fn attacker_points(&self, c: usize) -> PointSet {
        self.attacker_points[c]
    }

    /// All edges `(attacker, attacked)`, ordered by attacked then attacker.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.attackers
            .iter()
            .enumerate()
            .flat_map(|(b, row)| row.ones().map(move |a| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.attackers.iter().map(|r| r.count_ones(..)).sum()
    }

    /// `x#i`, the externally visible copy name.
    pub fn copy_name(&self, c: usize) -> String {
        let cp = &self.copies[c];
        format!("{}#{}", self.names[cp.point], cp.index)
    }

    fn copy_part(&self, w: Witness, role: &'static str, c: usize) -> Witness {
        w.with(role, Value::Copy(c), self.copy_name(c))
    }

    /// Is copy `c` unattacked from inside `x`?
    pub fn copy_minimal_in(&self, c: usize, x: PointSet) -> bool {
        x.contains(self.copies[c].point) && !self.attacker_points[c].intersects(x)
    }

    /// Points of `x` with at least one copy not attacked from inside `x`.
    pub fn minimize(&self, x: PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for p in x {
            if self.copies_of.get(p).is_some_and(|cs| {
                cs.iter().any(|&c| !self.attacker_points[c].intersects(x))
            }) {
                out.insert(p);
            }
        }
        out
    }

    /// The choice function `Y -> minimize(Y)` over the domain family.
    pub fn induced_choice(&self, d: &Arc<Domain>) -> Result<ChoiceFunction> {
        ChoiceFunction::from_fn(d.clone(), |y| self.minimize(y))
    }

    /// Smoothness, copies version: in every family set, every copy is either
    /// unattacked from inside, or attacked by a copy that is.
    pub fn is_smooth(&self, d: &Domain) -> ConditionReport {
        for &x in d.family() {
            for p in x {
                for &c in self.copies_of.get(p).map(Vec::as_slice).unwrap_or(&[]) {
                    if !self.attacker_points[c].intersects(x) {
                        continue;
                    }
                    let rescued = self.attackers[c].ones().any(|a| self.copy_minimal_in(a, x));
                    if !rescued {
                        let w = Witness::new().with("X", Value::Set(x), d.show(x));
                        return ConditionReport::fail("smooth", self.copy_part(w, "copy", c));
                    }
                }
            }
        }
        ConditionReport::pass("smooth")
    }

    /// Modularity over copies: incomparable copies have the same attackers
    /// and attack the same copies. Levels are emitted when the check holds and
    /// the relation has no cycle.
    pub fn is_ranked(&self) -> (ConditionReport, Option<RankWitness>) {
        let n = self.copies.len();
        for x in 0..n {
            for y in 0..n {
                if x == y || self.attacks(x, y) || self.attacks(y, x) {
                    continue;
                }
                for z in 0..n {
                    let below = self.attacks(z, x) && !self.attacks(z, y);
                    let above = self.attacks(x, z) && !self.attacks(y, z);
                    if below || above {
                        let w = self.copy_part(Witness::new(), "x", x);
                        let w = self.copy_part(w, "y", y);
                        let w = self.copy_part(w, "z", z);
                        return (ConditionReport::fail("ranked", w), None);
                    }
                }
            }
        }
        (ConditionReport::pass("ranked"), self.levels().map(|levels| RankWitness { levels }))
    }

    /// Longest attacker chain below each copy, or `None` on a cycle.
    fn levels(&self) -> Option<Vec<usize>> {
        let n = self.copies.len();
        let mut indeg: Vec<usize> = (0..n).map(|c| self.attackers[c].count_ones(..)).collect();
        let mut attacked: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in self.edges() {
            attacked[a].push(b);
        }
        let mut level = vec![0; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&c| indeg[c] == 0).collect();
        let mut seen = 0;
        while let Some(c) = queue.pop_front() {
            seen += 1;
            for &b in &attacked[c] {
                level[b] = level[b].max(level[c] + 1);
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    queue.push_back(b);
                }
            }
        }
        (seen == n).then_some(level)
    }

    /// Every copy of a lower-rank point attacks every copy of a higher-rank point.
    pub fn is_a_ranked(&self, layering: &Layering) -> Result<ConditionReport> {
        let ranks = self
            .copies
            .iter()
            .map(|c| layering.rank_of(c.point))
            .collect::<Result<Vec<_>>>()?;
        for lo in 0..self.copies.len() {
            for hi in 0..self.copies.len() {
                if ranks[lo] < ranks[hi] && !self.attacks(lo, hi) {
                    let w = self.copy_part(Witness::new(), "lower", lo);
                    return Ok(ConditionReport::fail("a-ranked", self.copy_part(w, "higher", hi)));
                }
            }
        }
        Ok(ConditionReport::pass("a-ranked"))
    }

    /// Warshall closure over copies. Cycles produce self-attacks.
    pub fn transitive_closure(&self) -> PreferentialStructure {
        let mut out = self.clone();
        let n = out.copies.len();
        for k in 0..n {
            let via = out.attackers[k].clone();
            for c in 0..n {
                if out.attackers[c].contains(k) {
                    out.attackers[c].union_with(&via);
                }
            }
        }
        for c in 0..n {
            out.attacker_points[c] = out.attackers[c].ones().map(|a| out.copies[a].point).collect();
        }
        out
    }

    pub fn is_transitive(&self) -> ConditionReport {
        for (b, c) in self.edges() {
            for a in self.attackers[b].ones() {
                if !self.attacks(a, c) {
                    let w = self.copy_part(Witness::new(), "a", a);
                    let w = self.copy_part(w, "b", b);
                    return ConditionReport::fail("transitive", self.copy_part(w, "c", c));
                }
            }
        }
        ConditionReport::pass("transitive")
    }

    /// Copies that attack themselves.
    pub fn self_attacking(&self) -> Vec<usize> {
        (0..self.copies.len()).filter(|&c| self.attacks(c, c)).collect()
    }

    /// No copy reaches itself through the relation.
    pub fn is_cycle_free(&self) -> ConditionReport {
        let closed = self.transitive_closure();
        match closed.self_attacking().first() {
            Some(&c) => {
                ConditionReport::fail("cycle-free", self.copy_part(Witness::new(), "copy", c))
            }
            None => ConditionReport::pass("cycle-free"),
        }
    }
}

/// Set-by-set comparison of the structure's minimization with the table.
/// The witness is the first family set where they differ.
pub fn verify_representation(s: &PreferentialStructure, f: &ChoiceFunction) -> ConditionReport {
    for (y, fy) in f.entries() {
        let got = s.minimize(y);
        if got != fy {
            let w = Witness::new()
                .with("U", Value::Set(y), f.show(y))
                .with("table", Value::Set(fy), f.show(fy))
                .with("structure", Value::Set(got), f.show(got));
            return ConditionReport::fail("represents", w);
        }
    }
    ConditionReport::pass("represents")
}

impl Serialize for PreferentialStructure {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct CopyOut<'a> {
            name: String,
            point: &'a str,
            index: usize,
            #[serde(skip_serializing_if = "str::is_empty")]
            label: &'a str,
        }
        let copies: Vec<CopyOut<'_>> = self
            .copies
            .iter()
            .enumerate()
            .map(|(i, c)| CopyOut {
                name: self.copy_name(i),
                point: &self.names[c.point],
                index: c.index,
                label: &c.label,
            })
            .collect();
        let attacks: Vec<[String; 2]> = self
            .edges()
            .map(|(a, b)| [self.copy_name(a), self.copy_name(b)])
            .collect();
        let mut st = ser.serialize_struct("PreferentialStructure", 3)?;
        st.serialize_field("points", &self.names)?;
        st.serialize_field("copies", &copies)?;
        st.serialize_field("attacks", &attacks)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    fn ps(bits: u64) -> PointSet {
        PointSet::from_bits(bits)
    }

    /// a ≺ c, c ≺ a, b ≺ c
    fn example_cycle() -> PreferentialStructure {
        PreferentialStructure::from_point_edges(names(&["a", "b", "c"]), &[(0, 2), (2, 0), (1, 2)])
            .unwrap()
    }

    #[test]
    fn minimize_on_cycle() {
        let s = example_cycle();
        assert_eq!(s.minimize(ps(0b111)), ps(0b010));
        assert_eq!(s.minimize(ps(0b011)), ps(0b011));
        assert_eq!(s.minimize(ps(0b101)), PointSet::EMPTY);
        let free = PreferentialStructure::injective(names(&["a", "b"])).unwrap();
        assert_eq!(free.minimize(ps(0b11)), ps(0b11));
    }

    #[test]
    fn self_attack_refused() {
        let mut s = PreferentialStructure::injective(names(&["a"])).unwrap();
        assert!(matches!(s.add_attack(0, 0), Err(Error::SelfAttack(_))));
    }

    #[test]
    fn no_copies_means_empty_choice() {
        let s = PreferentialStructure::new(names(&["a", "b"])).unwrap();
        let d = Arc::new(Domain::powerset(names(&["a", "b"]), false).unwrap());
        let f = s.induced_choice(&d).unwrap();
        assert!(f.table().iter().all(|t| t.is_empty()));
    }

    #[test]
    fn smoothness() {
        let s = example_cycle();
        let d = Domain::new(
            names(&["a", "b", "c"]),
            vec![ps(0b111), ps(0b011), ps(0b101), ps(0b110)],
        )
        .unwrap();
        let r = s.is_smooth(&d);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.to_string(), "X={a,b,c} copy=a#0");
        let ac = Domain::new(names(&["a", "b", "c"]), vec![ps(0b101)]).unwrap();
        assert!(!s.is_smooth(&ac).holds);

        let chain = PreferentialStructure::from_point_edges(
            names(&["a", "b", "c"]),
            &[(0, 1), (1, 2), (0, 2)],
        )
        .unwrap();
        let full = Domain::powerset(names(&["a", "b", "c"]), false).unwrap();
        assert!(chain.is_smooth(&full).holds);
        assert!(PreferentialStructure::injective(names(&["a", "b"]))
            .unwrap()
            .is_smooth(&full_two())
            .holds);
    }

    fn full_two() -> Domain {
        Domain::powerset(names(&["a", "b"]), false).unwrap()
    }

    #[test]
    fn rankedness() {
        let s = example_cycle();
        let (_, levels) = s.is_ranked();
        assert!(levels.is_none());

        let partial = PreferentialStructure::from_point_edges(names(&["a", "b", "c"]), &[(0, 1)])
            .unwrap();
        let (r, levels) = partial.is_ranked();
        assert!(!r.holds);
        assert!(levels.is_none());

        let chain = PreferentialStructure::from_point_edges(
            names(&["a", "b", "c"]),
            &[(0, 1), (1, 2), (0, 2)],
        )
        .unwrap();
        let (r, levels) = chain.is_ranked();
        assert!(r.holds);
        assert_eq!(levels.unwrap().levels, vec![0, 1, 2]);
    }

    #[test]
    fn a_rankedness() {
        let s = example_cycle();
        let n = names(&["a", "b", "c"]);
        let ab_c = Layering::new(&n, vec![ps(0b011), ps(0b100)]).unwrap();
        assert!(s.is_a_ranked(&ab_c).unwrap().holds);
        let c_ab = Layering::new(&n, vec![ps(0b100), ps(0b011)]).unwrap();
        let r = s.is_a_ranked(&c_ab).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().to_string(), "lower=c#0 higher=b#0");
        let one = Layering::single(&n).unwrap();
        assert!(s.is_a_ranked(&one).unwrap().holds);
        let short = Layering::new(&n, vec![ps(0b011)]).unwrap();
        assert!(s.is_a_ranked(&short).is_err());
    }

    #[test]
    fn closure() {
        let s = PreferentialStructure::from_point_edges(names(&["a", "b", "c"]), &[(0, 1), (1, 2)])
            .unwrap();
        assert!(!s.is_transitive().holds);
        let t = s.transitive_closure();
        assert!(t.attacks(0, 2));
        assert!(t.is_transitive().holds);
        assert_eq!(t.transitive_closure(), t);

        let cyc = example_cycle().transitive_closure();
        assert_eq!(cyc.self_attacking(), vec![0, 2]);
        assert!(!example_cycle().is_cycle_free().holds);
        assert!(s.is_cycle_free().holds);
    }

    #[test]
    fn verification_witness() {
        let s = example_cycle();
        let d = Arc::new(full_three());
        let f = s.induced_choice(&d).unwrap();
        assert!(verify_representation(&s, &f).holds);
        let empty = PreferentialStructure::injective(names(&["a", "b", "c"])).unwrap();
        let r = verify_representation(&empty, &f);
        assert!(!r.holds);
    }

    fn full_three() -> Domain {
        Domain::powerset(names(&["a", "b", "c"]), false).unwrap()
    }

    #[test]
    fn json_shape() {
        let s = PreferentialStructure::from_point_edges(names(&["a", "b"]), &[(0, 1)]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"points":["a","b"],"copies":[{"name":"a#0","point":"a","index":0},{"name":"b#0","point":"b","index":0}],"attacks":[["a#0","b#0"]]}"#
        );
    }
}
