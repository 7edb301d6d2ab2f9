//! Assign cross edges so that exactly the target worlds satisfy the conditional.
//!
//! Every layer offers a good representative `b_i` (first of `mu(A_i) & B`)
//! and a bad one `c_i` (first of `mu(A_i) - B`). Worlds are handled
//! predecessors first. A world gets a layer `gamma` and sees one
//! representative set per layer from `gamma` up, so reachable sets only
//! shrink along the relation and each switch from satisfied to violated has
//! to climb a layer.

use super::{satisfies, AccessGraph, HierarchicalConditional};
use crate::error::{Error, Result};
use crate::points::PointSet;

struct Witnesses {
    good: Vec<Option<usize>>,
    bad: Vec<Option<usize>>,
}

impl Witnesses {
    fn new(c: &HierarchicalConditional) -> Self {
        let n = c.layer_count();
        Witnesses {
            good: (1..=n).map(|i| (c.layer_minima(i) & c.good()).first()).collect(),
            bad: (1..=n).map(|i| (c.layer_minima(i) - c.good()).first()).collect(),
        }
    }

    /// `X_i`, 1-based.
    fn layer(&self, i: usize) -> PointSet {
        self.good[i - 1].into_iter().chain(self.bad[i - 1]).collect()
    }

    /// Union of `X_k` for `k >= from`.
    fn from(&self, from: usize) -> PointSet {
        (from..=self.good.len()).fold(PointSet::EMPTY, |acc, k| acc | self.layer(k))
    }

    fn first_good(&self, from: usize) -> Option<usize> {
        (from..=self.good.len()).find(|&k| self.good[k - 1].is_some())
    }

    fn first_bad(&self, from: usize) -> Option<usize> {
        (from..=self.bad.len()).find(|&k| self.bad[k - 1].is_some())
    }
}

/// Cross sets for a graph that has none yet, making `target` exactly the
/// satisfying worlds. Fails with the blocking world and its chain when no
/// layer is left for a required switch.
pub fn extend_access(c: &HierarchicalConditional, g: &AccessGraph, target: &[usize]) -> Result<AccessGraph> {
    if g.has_cross_edges() {
        return Err(Error::Access("extension starts from a graph without cross edges".into()));
    }
    let n = g.worlds().len();
    if let Some(&m) = target.iter().find(|&&m| m >= n) {
        return Err(Error::UnknownWorld(format!("#{m}")));
    }
    let want: Vec<bool> = (0..n).map(|m| target.contains(&m)).collect();
    let x = Witnesses::new(c);
    let mut cross = vec![PointSet::EMPTY; n];
    let mut gamma = vec![0usize; n];
    // predecessor that fixed each world's layer, for error chains
    let mut via: Vec<Option<usize>> = vec![None; n];

    let chain = |via: &[Option<usize>], m: usize| {
        let mut out = vec![g.worlds()[m].clone()];
        let mut cur = m;
        while let Some(p) = via[cur] {
            out.push(g.worlds()[p].clone());
            cur = p;
        }
        out.reverse();
        out
    };

    for &m in g.topological() {
        let preds: Vec<usize> = g.predecessors(m).collect();
        let exhausted = |via: &[Option<usize>]| Error::LayersExhausted {
            world: g.worlds()[m].clone(),
            chain: chain(via, m),
        };
        if preds.is_empty() {
            if want[m] {
                let i0 = x.first_good(1).ok_or_else(|| exhausted(&via))?;
                cross[m] = PointSet::singleton(x.good[i0 - 1].expect("good")) | x.from(i0 + 1);
                gamma[m] = i0;
            } else {
                let i0 = x.first_bad(1).ok_or_else(|| exhausted(&via))?;
                cross[m] = x.from(i0);
                gamma[m] = i0;
            }
            continue;
        }
        let i = preds.iter().map(|&p| gamma[p]).max().expect("has predecessors");
        let top: Vec<usize> = preds.iter().copied().filter(|&p| gamma[p] == i).collect();
        if want[m] {
            via[m] = Some(top[0]);
            let j = x.first_good(i).ok_or_else(|| exhausted(&via))?;
            cross[m] = PointSet::singleton(x.good[j - 1].expect("good")) | x.from(j + 1);
            gamma[m] = j;
        } else if let Some(&p) = top.iter().find(|&&p| want[p]) {
            via[m] = Some(p);
            let j = x.first_bad(i + 1).ok_or_else(|| exhausted(&via))?;
            cross[m] = x.from(j);
            gamma[m] = j;
        } else {
            via[m] = Some(top[0]);
            cross[m] = cross[top[0]];
            gamma[m] = i;
        }
    }

    let out = g.clone().with_cross(cross)?;
    for m in 0..n {
        if satisfies(c, &out, m) != want[m] {
            return Err(Error::Invariant(format!("world `{}` came out wrong", g.worlds()[m])));
        }
    }
    for &(a, b) in out.edges() {
        if !out.cross(b).is_subset(out.cross(a)) {
            return Err(Error::Invariant(format!(
                "cross set grows from `{}` to `{}`",
                g.worlds()[a],
                g.worlds()[b]
            )));
        }
    }
    Ok(out)
}

/// The most switches from satisfied to violated along one chain of base edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alternations {
    pub count: usize,
    /// A chain attaining the count, as world indices.
    pub chain: Vec<usize>,
}

pub fn max_alternations(c: &HierarchicalConditional, g: &AccessGraph) -> Alternations {
    let n = g.worlds().len();
    let sat: Vec<bool> = (0..n).map(|m| satisfies(c, g, m)).collect();
    let mut best = vec![0usize; n];
    let mut prev: Vec<Option<usize>> = vec![None; n];
    for &m in g.topological() {
        for p in g.predecessors(m) {
            let k = best[p] + usize::from(sat[p] && !sat[m]);
            if prev[m].is_none() || k > best[m] {
                best[m] = k;
                prev[m] = Some(p);
            }
        }
    }
    let Some(end) = (0..n).max_by_key(|&m| (best[m], std::cmp::Reverse(m))) else {
        return Alternations { count: 0, chain: Vec::new() };
    };
    let mut chain = vec![end];
    let mut cur = end;
    while let Some(p) = prev[cur] {
        chain.push(p);
        cur = p;
    }
    chain.reverse();
    Alternations { count: best[end], chain }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{e2_conditional, e2_graph, E2_WORLDS};
    use super::super::{check_access_facts, AccessGraph};
    use super::*;
    use crate::general::tests::names;

    fn idx(ns: &[&str]) -> Vec<usize> {
        ns.iter().map(|n| E2_WORLDS.iter().position(|w| w == n).unwrap()).collect()
    }

    #[test]
    fn e2_extension() {
        let c = e2_conditional();
        let target = idx(&["a1", "a2", "b2", "c1", "d2"]);
        let g = extend_access(&c, &e2_graph(), &target).unwrap();
        for m in 0..E2_WORLDS.len() {
            assert_eq!(satisfies(&c, &g, m), target.contains(&m), "{}", E2_WORLDS[m]);
        }
        assert!(check_access_facts(&c, &g).iter().all(|r| r.holds));
        assert!(max_alternations(&c, &g).count <= c.layer_count());
    }

    #[test]
    fn single_world() {
        let c = e2_conditional();
        let g = AccessGraph::new(names(&["m"]), vec![], None).unwrap();
        let out = extend_access(&c, &g, &[0]).unwrap();
        assert!(satisfies(&c, &out, 0));
        let out = extend_access(&c, &g, &[]).unwrap();
        assert!(!satisfies(&c, &out, 0));
    }

    #[test]
    fn too_many_switches() {
        let c = e2_conditional();
        // 12 worlds alternating good, bad along one chain: 6 switches over 5 layers
        let ws: Vec<String> = (0..12).map(|i| format!("w{i}")).collect();
        let edges = (0..11).map(|i| (i, i + 1)).collect();
        let g = AccessGraph::new(ws, edges, None).unwrap();
        let target: Vec<usize> = (0..12).step_by(2).collect();
        match extend_access(&c, &g, &target) {
            Err(Error::LayersExhausted { world, chain }) => {
                assert!(chain.len() > 1);
                assert_eq!(chain.last(), Some(&world));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn refuses_existing_cross_edges() {
        let c = e2_conditional();
        let g = super::super::tests::e2_worked();
        assert!(extend_access(&c, &g, &[]).is_err());
    }
}
