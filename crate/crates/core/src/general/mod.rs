//! Layered representation without smoothness.
//!
//! For a point `x`, the sets that demote it are `Y_x = {Y : x in Y - f(Y)}`.
//! A selection picks one element from each; its range is what must attack a
//! copy of `x` for the copy to be non-minimal exactly where the table says so.

mod trees;

pub use trees::{construct_transitive, TransitiveOutcome};

use crate::choice::{require_conditions, ChoiceFunction, Layering, MuCondition};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::structure::PreferentialStructure;

/// Default cap on the number of copies a construction may create.
pub const COPY_LIMIT: u128 = 1_000_000;

/// The demoting sets of one point and the product of their members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionContext {
    pub point: usize,
    /// `Y_x` in family order.
    pub demoting: Vec<PointSet>,
}

impl SelectionContext {
    /// Number of selection functions, `prod |Y|` (1 for the empty product).
    pub fn size(&self) -> u128 {
        self.demoting
            .iter()
            .fold(1u128, |acc, y| acc.saturating_mul(y.len() as u128))
    }

    /// All selections as lists of picks, one per demoting set, last set varying fastest.
    pub fn selections(&self) -> Selections {
        Selections::new(self.demoting.clone())
    }

    /// Selections drawing from `restrict(Y)` instead of `Y`.
    pub fn selections_within(&self, restrict: impl Fn(PointSet) -> PointSet) -> Selections {
        Selections::new(self.demoting.iter().map(|&y| restrict(y)).collect())
    }
}

/// Odometer over the product of a list of point sets.
#[derive(Clone, Debug)]
pub struct Selections {
    pools: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Selections {
    /// Product of `sets`, one pick from each.
    pub fn over(sets: Vec<PointSet>) -> Self {
        Self::new(sets)
    }

    fn new(sets: Vec<PointSet>) -> Self {
        let pools: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().collect()).collect();
        let done = pools.iter().any(|p| p.is_empty());
        Selections {
            cursor: vec![0; pools.len()],
            pools,
            done,
        }
    }
}

impl Iterator for Selections {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cursor.iter().zip(&self.pools).map(|(&i, p)| p[i]).collect();
        self.done = true;
        for k in (0..self.pools.len()).rev() {
            if self.cursor[k] + 1 < self.pools[k].len() {
                self.cursor[k] += 1;
                for c in &mut self.cursor[k + 1..] {
                    *c = 0;
                }
                self.done = false;
                break;
            }
        }
        Some(out)
    }
}

pub fn range_of(picks: &[usize]) -> PointSet {
    picks.iter().copied().collect()
}

pub fn selection_context(f: &ChoiceFunction, x: usize) -> SelectionContext {
    let demoting = f
        .entries()
        .filter(|&(y, fy)| y.contains(x) && !fy.contains(x))
        .map(|(y, _)| y)
        .collect();
    SelectionContext { point: x, demoting }
}

/// `x in U` and some selection for `x` misses `U` entirely.
pub fn characterize_minimal(f: &ChoiceFunction, x: usize, u: PointSet) -> Result<bool> {
    if !f.domain().contains(u) {
        return Err(Error::NotInFamily(f.show(u)));
    }
    if !u.contains(x) {
        return Ok(false);
    }
    let ctx = selection_context(f, x);
    // Some selection misses U iff every demoting set has a member outside U.
    let scan = ctx.selections().any(|p| !range_of(&p).intersects(u));
    Ok(scan)
}

/// Points ranked strictly below `x`.
pub(crate) fn lower(layering: &Layering, x: usize) -> PointSet {
    layering.below(layering.rank(x).unwrap_or(0))
}

/// `Y:y` pairs, e.g. `{a,b,c}:c {a,c}:c`.
pub(crate) fn selection_label(f: &ChoiceFunction, demoting: &[PointSet], picks: &[usize]) -> String {
    demoting
        .iter()
        .zip(picks)
        .map(|(&y, &p)| format!("{}:{}", f.show(y), f.domain().name(p)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub(crate) fn general_preconditions(f: &ChoiceFunction, layering: &Layering) -> Result<()> {
    layering.require_compatible(f.domain().names(), f.domain().base())?;
    require_conditions(
        f,
        Some(layering),
        &[MuCondition::Subset, MuCondition::Pr, MuCondition::A],
    )
}

/// One copy `<x,g>` per point and selection; `<x',g'>` attacks `<x,g>` when
/// `x'` is in the range of `g` or ranks strictly below `x`.
///
/// A copy whose own point is in its selection's range attacks itself; such a
/// copy is never minimal, which is what the table needs.
pub fn construct_general(f: &ChoiceFunction, layering: &Layering) -> Result<PreferentialStructure> {
    general_preconditions(f, layering)?;
    let d = f.domain();
    let contexts: Vec<SelectionContext> = (0..d.point_count()).map(|x| selection_context(f, x)).collect();
    let total = contexts.iter().fold(0u128, |a, c| a.saturating_add(c.size()));
    if total > COPY_LIMIT {
        return Err(Error::Budget(format!("{total} copies exceed the limit of {COPY_LIMIT}")));
    }
    let mut s = PreferentialStructure::new(d.names().to_vec())?;
    let mut attackers = Vec::new();
    for ctx in &contexts {
        for picks in ctx.selections() {
            let c = s.add_copy(ctx.point, selection_label(f, &ctx.demoting, &picks));
            attackers.push((c, range_of(&picks) | lower(layering, ctx.point)));
        }
    }
    for (c, pts) in attackers {
        s.insert_point_attackers(pts, c);
    }
    Ok(s)
}
