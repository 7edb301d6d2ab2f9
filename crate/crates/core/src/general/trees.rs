//! Transitive layered representation through index trees.
//!
//! Copies are indexed by trees of points. A node `y` has as children the range
//! of one selection for `y`, plus (in ranked mode) every point ranked below
//! `y`. Child subtrees attack their parent, and the relation is the transitive
//! closure of that step, so the points attacking a copy are exactly the
//! non-root nodes of its tree.
//!
//! Two tree families suffice. `tc(y)` always selects `y` itself, and `tf(x,g)`
//! hangs `tc` subtrees under the range of `g`. Trees are infinite but regular.
//! A tree is identified by its truncation to the configured depth; equal
//! truncations are the same copy, which is how `tc(y)` ends up below itself.
//!
//! Ranked mode restricts selections to points of no higher rank and then adds
//! every lower-rank-to-higher-rank attack. That only represents the table when
//! the `mu-a-transitive` condition holds. Otherwise the trees are built
//! without rank successors: the result is transitive and represents the table
//! but is not layered, and the failing condition is reported.

use std::collections::HashMap;

use super::{general_preconditions, lower, range_of, selection_context, selection_label, COPY_LIMIT};
use crate::choice::{check_mu, ChoiceFunction, Layering, MuCondition};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::report::ConditionReport;
use crate::structure::PreferentialStructure;

#[derive(Clone, Debug)]
pub struct TransitiveOutcome {
    pub structure: PreferentialStructure,
    /// Whether rank successors and rank attacks were used.
    pub a_ranked_mode: bool,
    /// The failed `mu-a-transitive` report when ranked mode was impossible.
    pub obstruction: Option<ConditionReport>,
}

/// A regular tree node: a point and child nodes.
struct Node {
    point: usize,
    children: Vec<usize>,
    label: String,
}

struct Forest {
    nodes: Vec<Node>,
}

impl Forest {
    /// Interned key of each node's truncation at every depth up to `depth`.
    fn truncated_keys(&self, depth: usize) -> Vec<u32> {
        let mut intern: HashMap<(usize, Vec<u32>), u32> = HashMap::new();
        let mut level: Vec<u32> = self
            .nodes
            .iter()
            .map(|n| {
                let next = intern.len() as u32;
                *intern.entry((n.point, Vec::new())).or_insert(next)
            })
            .collect();
        for _ in 0..depth {
            level = self
                .nodes
                .iter()
                .map(|n| {
                    let mut kids: Vec<u32> = n.children.iter().map(|&c| level[c]).collect();
                    kids.sort_unstable();
                    kids.dedup();
                    let next = intern.len() as u32;
                    *intern.entry((n.point, kids)).or_insert(next)
                })
                .collect();
        }
        level
    }

    /// Nested-list rendering of a node's truncation, children sorted.
    fn render(&self, node: usize, depth: usize, names: &[String]) -> String {
        let n = &self.nodes[node];
        let name = &names[n.point];
        if depth == 0 || n.children.is_empty() {
            return name.clone();
        }
        let mut kids: Vec<String> = n.children.iter().map(|&c| self.render(c, depth - 1, names)).collect();
        kids.sort();
        kids.dedup();
        format!("{name}[{}]", kids.join(","))
    }
}

/// Transitive representation. `depth` must be at least `|Z| + 1`.
pub fn construct_transitive(
    f: &ChoiceFunction,
    layering: &Layering,
    depth: usize,
) -> Result<TransitiveOutcome> {
    general_preconditions(f, layering)?;
    let d = f.domain();
    let n = d.point_count();
    let bound = n + 1;
    if depth < bound {
        return Err(Error::DepthBelowBound { depth, bound });
    }
    let gate = check_mu(MuCondition::ATransitive, f, Some(layering))?;
    let ranked = gate.holds;

    let rank = |x: usize| layering.rank(x).unwrap_or(0);
    let succ_lower = |x: usize| if ranked { lower(layering, x) } else { PointSet::EMPTY };
    let contexts: Vec<_> = (0..n).map(|x| selection_context(f, x)).collect();

    // tc(y) for every y occupies node y.
    let mut forest = Forest {
        nodes: (0..n)
            .map(|y| Node {
                point: y,
                children: Vec::new(),
                label: String::new(),
            })
            .collect(),
    };
    for y in 0..n {
        let own = if contexts[y].demoting.is_empty() {
            PointSet::EMPTY
        } else {
            PointSet::singleton(y)
        };
        forest.nodes[y].children = (own | succ_lower(y)).iter().collect();
        forest.nodes[y].label = format!("tc:{}", d.name(y));
    }

    let mut total: u128 = 0;
    for x in 0..n {
        let ctx = &contexts[x];
        let selections = if ranked {
            let rx = rank(x);
            ctx.selections_within(|y| y.iter().filter(|&z| rank(z) <= rx).collect())
        } else {
            ctx.selections()
        };
        for picks in selections {
            total += 1;
            if total > COPY_LIMIT {
                return Err(Error::Budget(format!("more than {COPY_LIMIT} trees")));
            }
            let children = (range_of(&picks) | succ_lower(x)).iter().collect();
            forest.nodes.push(Node {
                point: x,
                children,
                label: selection_label(f, &ctx.demoting, &picks),
            });
        }
    }

    // One copy per distinct truncation; tf trees first so their labels win.
    let keys = forest.truncated_keys(depth);
    let mut copy_of_key: HashMap<u32, usize> = HashMap::new();
    let mut s = PreferentialStructure::new(d.names().to_vec())?;
    let mut order: Vec<usize> = (n..forest.nodes.len()).chain(0..n).collect();
    order.sort_by_key(|&i| forest.nodes[i].point);
    for &i in &order {
        if copy_of_key.contains_key(&keys[i]) {
            continue;
        }
        let node = &forest.nodes[i];
        let shape = forest.render(i, depth, d.names());
        let label = if node.label.is_empty() {
            shape
        } else {
            format!("{shape} = {}", node.label)
        };
        let c = s.add_copy(node.point, label);
        copy_of_key.insert(keys[i], c);
    }
    for (i, node) in forest.nodes.iter().enumerate() {
        let parent = copy_of_key[&keys[i]];
        for &child in &node.children {
            s.insert_edge(copy_of_key[&keys[child]], parent);
        }
    }
    if ranked {
        let ranks: Vec<usize> = s.copies().iter().map(|c| rank(c.point)).collect();
        for lo in 0..ranks.len() {
            for hi in 0..ranks.len() {
                if ranks[lo] < ranks[hi] {
                    s.insert_edge(lo, hi);
                }
            }
        }
    }
    let structure = s.transitive_closure();
    Ok(TransitiveOutcome {
        structure,
        a_ranked_mode: ranked,
        obstruction: (!ranked).then_some(gate),
    })
}
