//! Layered contrary-to-duty obligations evaluated along an accessibility relation.
//!
//! A conditional is a layered set `A = A_1 < .. < A_n` with a ranked
//! preference over it, plus the good part `B`. A world sees some points of
//! `A`; the best of the layer-minima it sees decide whether the obligation
//! holds there.

mod extend;

pub use extend::{extend_access, max_alternations, Alternations};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::choice::Layering;
use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::points::PointSet;
use crate::report::{ConditionReport, Value, Witness};
use crate::structure::PreferentialStructure;

/// `C = <A, B>` with the preference that supplies the layer minima.
#[derive(Clone, Debug)]
pub struct HierarchicalConditional {
    structure: PreferentialStructure,
    layering: Layering,
    good: PointSet,
    minima: Vec<PointSet>,
}

impl HierarchicalConditional {
    /// The structure must rank every lower layer below every higher one.
    pub fn new(structure: PreferentialStructure, layering: Layering, good: PointSet) -> Result<Self> {
        let base = PointSet::full(structure.point_count());
        layering.require_compatible(structure.names(), base)?;
        if !good.is_subset(base) {
            return Err(Error::Domain("good set leaves the layered set".into()));
        }
        let ranked = structure.is_a_ranked(&layering)?;
        if let Some(w) = ranked.witness {
            return Err(Error::Precondition {
                condition: ranked.condition,
                witness: w.to_string(),
            });
        }
        let minima = layering.blocks().iter().map(|&b| structure.minimize(b)).collect();
        Ok(HierarchicalConditional {
            structure,
            layering,
            good,
            minima,
        })
    }

    pub fn structure(&self) -> &PreferentialStructure {
        &self.structure
    }

    pub fn layering(&self) -> &Layering {
        &self.layering
    }

    pub fn good(&self) -> PointSet {
        self.good
    }

    pub fn layer_count(&self) -> usize {
        self.minima.len()
    }

    /// `mu(A_i)`, 1-based.
    pub fn layer_minima(&self, i: usize) -> PointSet {
        self.minima[i - 1]
    }

    /// Union of all layer minima.
    pub fn all_minima(&self) -> PointSet {
        self.minima.iter().fold(PointSet::EMPTY, |a, &b| a | b)
    }

    pub fn names(&self) -> &[String] {
        self.structure.names()
    }

    pub fn show(&self, s: PointSet) -> String {
        s.show(self.structure.names())
    }
}

/// Worlds, the base accessibility relation between them, the points of `A`
/// each world reaches directly, and optional decision edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessGraph {
    worlds: Vec<String>,
    edges: Vec<(usize, usize)>,
    cross: Vec<PointSet>,
    decision: Option<Vec<(usize, usize)>>,
    /// Worlds reachable in one or more steps.
    below: Vec<FixedBitSet>,
    /// Predecessors-first order.
    order: Vec<usize>,
}

impl AccessGraph {
    /// Fails on duplicate names, bad indices or a cycle, and when a chain is
    /// longer than `depth_bound` worlds.
    pub fn new(worlds: Vec<String>, edges: Vec<(usize, usize)>, depth_bound: Option<usize>) -> Result<Self> {
        let n = worlds.len();
        for (i, w) in worlds.iter().enumerate() {
            if worlds[..i].contains(w) {
                return Err(Error::Access(format!("world `{w}` declared twice")));
            }
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::Access(format!("edge ({a},{b}) leaves the world list")));
        }
        // Kahn on the base relation
        let mut indeg = vec![0usize; n];
        for &(_, b) in &edges {
            indeg[b] += 1;
        }
        let mut order: Vec<usize> = (0..n).filter(|&w| indeg[w] == 0).collect();
        let mut depth = vec![1usize; n];
        let mut k = 0;
        while k < order.len() {
            let a = order[k];
            for &(x, b) in &edges {
                if x == a {
                    depth[b] = depth[b].max(depth[a] + 1);
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        order.push(b);
                    }
                }
            }
            k += 1;
        }
        if order.len() < n {
            let w = (0..n).find(|w| !order.contains(w)).expect("missing world");
            return Err(Error::Access(format!("world `{}` lies on a cycle", worlds[w])));
        }
        if let Some(bound) = depth_bound {
            if let Some(w) = (0..n).find(|&w| depth[w] > bound) {
                return Err(Error::Access(format!(
                    "chain to `{}` has {} worlds, above the bound {bound}",
                    worlds[w], depth[w]
                )));
            }
        }
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for &a in order.iter().rev() {
            for &(x, b) in &edges {
                if x == a {
                    let sub = below[b].clone();
                    below[a].union_with(&sub);
                    below[a].insert(b);
                }
            }
        }
        Ok(AccessGraph {
            cross: vec![PointSet::EMPTY; n],
            worlds,
            edges,
            decision: None,
            below,
            order,
        })
    }

    pub fn with_cross(mut self, cross: Vec<PointSet>) -> Result<Self> {
        if cross.len() != self.worlds.len() {
            return Err(Error::Access(format!(
                "{} cross sets for {} worlds",
                cross.len(),
                self.worlds.len()
            )));
        }
        self.cross = cross;
        Ok(self)
    }

    pub fn with_decision(mut self, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = self.worlds.len();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::Access(format!("decision edge ({a},{b}) leaves the world list")));
        }
        self.decision = Some(edges);
        Ok(self)
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world(&self, name: &str) -> Result<usize> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Points of `A` world `m` reaches directly.
    pub fn cross(&self, m: usize) -> PointSet {
        self.cross[m]
    }

    pub fn cross_sets(&self) -> &[PointSet] {
        &self.cross
    }

    pub fn has_cross_edges(&self) -> bool {
        self.cross.iter().any(|c| !c.is_empty())
    }

    pub fn decision(&self) -> Option<&[(usize, usize)]> {
        self.decision.as_deref()
    }

    /// Base predecessors of `m`.
    pub fn predecessors(&self, m: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |&&(_, b)| b == m).map(|&(a, _)| a)
    }

    pub fn successors(&self, m: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |&&(a, _)| a == m).map(|&(_, b)| b)
    }

    /// `m R+ m'`.
    pub fn reaches(&self, m: usize, m2: usize) -> bool {
        self.below[m].contains(m2)
    }

    /// Worlds in an order where every world follows its predecessors.
    pub fn topological(&self) -> &[usize] {
        &self.order
    }

    fn world_part(&self, w: Witness, role: &'static str, m: usize) -> Witness {
        w.with(role, Value::World(m), self.worlds[m].clone())
    }
}

/// Everything a world reaches through the transitive relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reach {
    pub worlds: Vec<usize>,
    /// Its own cross set and those of every reachable world.
    pub points: PointSet,
}

pub fn reachable(g: &AccessGraph, m: usize) -> Result<Reach> {
    if m >= g.worlds.len() {
        return Err(Error::UnknownWorld(format!("#{m}")));
    }
    let worlds: Vec<usize> = g.below[m].ones().collect();
    let points = worlds.iter().fold(g.cross[m], |acc, &w| acc | g.cross[w]);
    Ok(Reach { worlds, points })
}

fn seen(g: &AccessGraph, m: usize) -> PointSet {
    g.below[m].ones().fold(g.cross[m], |acc, w| acc | g.cross[w])
}

/// Layer minima visible from `m`.
pub fn visible_minima(c: &HierarchicalConditional, g: &AccessGraph, m: usize) -> PointSet {
    c.all_minima() & seen(g, m)
}

/// The best visible layer minima: `mu` applied to what [`visible_minima`] returns.
pub fn nu(c: &HierarchicalConditional, g: &AccessGraph, m: usize) -> PointSet {
    c.structure.minimize(visible_minima(c, g, m))
}

/// `nu` lies inside `B`. True when nothing is visible; see [`is_vacuous`].
pub fn satisfies(c: &HierarchicalConditional, g: &AccessGraph, m: usize) -> bool {
    nu(c, g, m).is_subset(c.good)
}

/// Satisfaction that holds only because `m` sees no layer minimum.
pub fn is_vacuous(c: &HierarchicalConditional, g: &AccessGraph, m: usize) -> bool {
    nu(c, g, m).is_empty()
}

/// Least layer with a visible minimum; `n + 1` when none is visible.
pub fn gamma(c: &HierarchicalConditional, g: &AccessGraph, m: usize) -> usize {
    let s = seen(g, m);
    (1..=c.layer_count())
        .find(|&i| c.layer_minima(i).intersects(s))
        .unwrap_or(c.layer_count() + 1)
}

/// Satisfaction decided at the first triggered layer alone.
pub fn satisfies_by_trigger(c: &HierarchicalConditional, g: &AccessGraph, m: usize) -> bool {
    let i = gamma(c, g, m);
    i > c.layer_count() || (c.layer_minima(i) & seen(g, m)).is_subset(c.good)
}

/// `alpha_i > beta` at `t`: the visible minima of layer `i` are good.
pub fn conditional_at(c: &HierarchicalConditional, g: &AccessGraph, t: usize, i: usize) -> Result<bool> {
    if i == 0 || i > c.layer_count() {
        return Err(Error::Layering(format!("layer {i} of {}", c.layer_count())));
    }
    Ok((c.layer_minima(i) & seen(g, t)).is_subset(c.good))
}

/// Layers (1-based) meeting `s`.
fn layers_meeting(c: &HierarchicalConditional, s: PointSet) -> Vec<usize> {
    (1..=c.layer_count())
        .filter(|&i| c.layering.block(i).intersects(s))
        .collect()
}

/// Sanity facts along `R+`, read off the declared cross sets (not their
/// closure, which would make the first two hold trivially): reaching nothing
/// of `A` persists; the layers holding best visible points never go down; a
/// switch from satisfied to violated goes strictly up. Also the cross sets
/// shrink along every edge.
pub fn check_access_facts(c: &HierarchicalConditional, g: &AccessGraph) -> Vec<ConditionReport> {
    let n = g.worlds.len();
    let pairs = || (0..n).flat_map(move |m| g.below[m].ones().map(move |m2| (m, m2)));
    let a = PointSet::full(c.structure.point_count());
    let nus: Vec<PointSet> = (0..n)
        .map(|m| c.structure.minimize(c.all_minima() & g.cross[m]))
        .collect();
    let sat: Vec<bool> = (0..n).map(|m| nus[m].is_subset(c.good)).collect();
    let pair_w = |m: usize, m2: usize| g.world_part(g.world_part(Witness::new(), "m", m), "m'", m2);

    let w1 = pairs()
        .find(|&(m, m2)| !g.cross[m].intersects(a) && g.cross[m2].intersects(a))
        .map(|(m, m2)| pair_w(m, m2));

    let layer_clash = |strict: bool| {
        for (m, m2) in pairs() {
            if strict && !(sat[m] && !sat[m2]) {
                continue;
            }
            for &i in &layers_meeting(c, nus[m]) {
                for &j in &layers_meeting(c, nus[m2]) {
                    if i > j || (strict && i == j) {
                        return Some(
                            pair_w(m, m2)
                                .with("A", Value::Layer(i), i.to_string())
                                .with("A'", Value::Layer(j), j.to_string()),
                        );
                    }
                }
            }
        }
        None
    };

    let w4 = g
        .edges
        .iter()
        .find(|&&(m, m2)| !g.cross[m2].is_subset(g.cross[m]))
        .map(|&(m, m2)| pair_w(m, m2));

    vec![
        ConditionReport::from_witness("box-persistence", w1),
        ConditionReport::from_witness("layer-monotone", layer_clash(false)),
        ConditionReport::from_witness("flip-ascends", layer_clash(true)),
        ConditionReport::from_witness("reach-shrinks", w4),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    /// `m` is strictly better than `m'`.
    pub better: bool,
    /// Both worlds satisfy the conditional, as the comparison presupposes.
    pub hypothesis: bool,
}

/// `m < m'`: once both worlds' visible minima compete, none of the minima of
/// `m'` survive.
pub fn degree_compare(c: &HierarchicalConditional, g: &AccessGraph, m: usize, m2: usize) -> DegreeComparison {
    let vm = visible_minima(c, g, m);
    let vm2 = visible_minima(c, g, m2);
    DegreeComparison {
        better: !c.structure.minimize(vm | vm2).intersects(vm2),
        hypothesis: satisfies(c, g, m) && satisfies(c, g, m2),
    }
}

/// `m |= !phi`: among the decision successors of `m`, the phi-worlds compare
/// below the non-phi worlds, each side measured by its largest `gamma`.
/// `valuations[w]` is the valuation world `w` carries.
pub fn bang(
    c: &HierarchicalConditional,
    g: &AccessGraph,
    m: usize,
    phi: &Formula,
    valuations: &[u32],
) -> Result<bool> {
    let d = g.decision.as_ref().ok_or(Error::MissingDecisionEdges)?;
    if valuations.len() != g.worlds.len() {
        return Err(Error::Access(format!(
            "{} valuations for {} worlds",
            valuations.len(),
            g.worlds.len()
        )));
    }
    let mut yes: Option<usize> = None;
    let mut no: Option<usize> = None;
    for &(_, w) in d.iter().filter(|&&(a, _)| a == m) {
        let side = if phi.eval(valuations[w]) { &mut yes } else { &mut no };
        let k = gamma(c, g, w);
        *side = Some(side.map_or(k, |s| s.max(k)));
    }
    Ok(match (yes, no) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(a), Some(b)) => a < b,
    })
}
