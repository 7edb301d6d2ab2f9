//! Smooth repair through admissible sequences.
//!
//! A sequence for `x` starts with a pick from every choice that demotes `x`.
//! Each later stage answers the previous one: every family set `X` with
//! `x in f(X)` that the previous range touches gets a pick from `f(X)`. A copy
//! of `x` is attacked by every copy of every point in the accumulated range.
//!
//! Picks depend only on the set being answered, so once the accumulated range
//! stops growing no later stage can add to it.

use super::{hull, kernel, smooth_preconditions};
use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::structure::PreferentialStructure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSequence {
    pub point: usize,
    /// The set whose minimality this sequence protects; `None` for the canonical one.
    pub target: Option<PointSet>,
    /// Stage `i` as `(set, pick)` pairs.
    pub stages: Vec<Vec<(PointSet, usize)>>,
    /// Accumulated range after each stage.
    pub ranges: Vec<PointSet>,
    /// The last stage added nothing new.
    pub fixpoint: bool,
}

impl AdmissibleSequence {
    pub fn range(&self) -> PointSet {
        self.ranges.last().copied().unwrap_or(PointSet::EMPTY)
    }
}

/// Run stages until the accumulated range is stable. `start` is stage 0 and
/// `answer(X)` picks for a later stage.
fn unfold(
    f: &ChoiceFunction,
    x: usize,
    target: Option<PointSet>,
    start: Vec<(PointSet, usize)>,
    answer: impl Fn(PointSet) -> Result<usize>,
    cap: usize,
) -> Result<AdmissibleSequence> {
    let range_of = |st: &[(PointSet, usize)]| st.iter().map(|&(_, p)| p).collect::<PointSet>();
    let mut acc = range_of(&start);
    let mut seq = AdmissibleSequence {
        point: x,
        target,
        ranges: vec![acc],
        stages: vec![start],
        fixpoint: false,
    };
    while seq.stages.len() <= cap {
        let last = range_of(seq.stages.last().expect("stage 0"));
        let mut next = Vec::new();
        for (xs, fx) in f.entries() {
            if fx.contains(x) && last.intersects(xs) {
                next.push((xs, answer(xs)?));
            }
        }
        let grown = acc | range_of(&next);
        seq.stages.push(next);
        seq.ranges.push(grown);
        if grown == acc {
            seq.fixpoint = true;
            return Ok(seq);
        }
        acc = grown;
    }
    Err(Error::Budget(format!(
        "admissible sequence for `{}` did not settle within {cap} stages",
        f.domain().name(x)
    )))
}

/// Distinct demoting sets' choices for `x`, paired with the set each came from.
fn demoting(f: &ChoiceFunction, x: usize) -> Vec<(PointSet, PointSet)> {
    let mut seen: Vec<PointSet> = Vec::new();
    let mut out = Vec::new();
    for (y, fy) in f.entries() {
        if y.contains(x) && !fy.contains(x) && !seen.contains(&fy) {
            seen.push(fy);
            out.push((y, fy));
        }
    }
    out
}

fn first(s: PointSet, what: impl FnOnce() -> String) -> Result<usize> {
    s.first()
        .ok_or_else(|| Error::Invariant(format!("{} has nothing to pick", what())))
}

/// The canonical sequence for every kernel point, then one per kernel point
/// and family set choosing it.
pub fn admissible_sequences(f: &ChoiceFunction) -> Result<Vec<AdmissibleSequence>> {
    smooth_preconditions(f)?;
    let d = f.domain();
    let k = kernel(f);
    let cap = k.len() + 1;
    let mut out = Vec::new();
    for x in k {
        let dem = demoting(f, x);
        let start = dem
            .iter()
            .map(|&(y, fy)| Ok((y, first(fy, || format!("choice of {}", d.show(y)))?)))
            .collect::<Result<Vec<_>>>()?;
        let canonical = unfold(
            f,
            x,
            None,
            start,
            |xs| {
                // fx holds x, so the fallback always exists
                let fx = f.get(xs).expect("family member");
                Ok(fx.without(x).first().unwrap_or(x))
            },
            cap,
        )?;
        out.push(canonical);

        for (u, fu) in f.entries() {
            if !fu.contains(x) {
                continue;
            }
            let h = hull(f, u);
            let start = dem
                .iter()
                .map(|&(y, fy)| {
                    Ok((y, first(fy - h, || format!("choice of {} outside H({})", d.show(y), d.show(u)))?))
                })
                .collect::<Result<Vec<_>>>()?;
            let answer = |xs: PointSet| {
                let fux = f
                    .get(u | xs)
                    .ok_or_else(|| Error::Invariant(format!("{} is not in the family", d.show(u | xs))))?;
                first(fux - h, || format!("choice of {} outside H({})", d.show(u | xs), d.show(u)))
            };
            out.push(unfold(f, x, Some(u), start, answer, cap)?);
        }
    }
    Ok(out)
}

/// Smooth representation: one copy per kernel point and distinct accumulated
/// range, attacked by every copy of every point in that range.
pub fn repair_smooth(f: &ChoiceFunction) -> Result<PreferentialStructure> {
    let d = f.domain();
    let seqs = admissible_sequences(f)?;
    let mut s = PreferentialStructure::new(d.names().to_vec())?;
    let mut made: Vec<(usize, PointSet)> = Vec::new();
    for q in &seqs {
        let key = (q.point, q.range());
        if made.contains(&key) {
            continue;
        }
        made.push(key);
        let label = match q.target {
            Some(u) => format!("U={} range={}", d.show(u), d.show(q.range())),
            None => format!("canonical range={}", d.show(q.range())),
        };
        s.add_copy(q.point, label);
    }
    for (c, &(_, r)) in made.iter().enumerate() {
        s.insert_point_attackers(r, c);
    }
    Ok(s)
}
