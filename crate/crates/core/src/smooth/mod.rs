//! Smooth representation: hull, kernel, the hull lemmas, and three
//! constructions (base, admissible-sequence repair, U,x-trees) plus the rank
//! augmentation that turns a smooth structure into a layered one.

mod admissible;
mod trees;

pub use admissible::{admissible_sequences, repair_smooth, AdmissibleSequence};
pub use trees::construct_smooth_transitive;

use crate::choice::{check_domain_closure, require_conditions, ChoiceFunction, Closure, Layering, MuCondition};
use crate::error::{Error, Result};
use crate::general::{range_of, Selections, COPY_LIMIT};
use crate::points::PointSet;
use crate::report::{ConditionReport, Value, Witness};
use crate::structure::PreferentialStructure;

/// `H(U)`: union of the family sets whose choice lands inside `u`.
pub fn hull(f: &ChoiceFunction, u: PointSet) -> PointSet {
    f.entries()
        .filter(|&(_, fx)| fx.is_subset(u))
        .fold(PointSet::EMPTY, |acc, (x, _)| acc | x)
}

/// `K`: every point chosen somewhere.
pub fn kernel(f: &ChoiceFunction) -> PointSet {
    f.table().iter().fold(PointSet::EMPTY, |a, &b| a | b)
}

/// The distinct choices `f(Y)` over sets `Y` that demote `x`, in family order.
pub fn smooth_selection_context(f: &ChoiceFunction, x: usize) -> Vec<PointSet> {
    let mut out: Vec<PointSet> = Vec::new();
    for (y, fy) in f.entries() {
        if y.contains(x) && !fy.contains(x) && !out.contains(&fy) {
            out.push(fy);
        }
    }
    out
}

/// Some member of `Gamma_x` has a range missing `s`: every choice demoting
/// `x` has an element outside `s`.
fn gamma_avoids(ws: &[PointSet], s: PointSet) -> bool {
    ws.iter().all(|&w| !(w - s).is_empty())
}

/// Preconditions shared by the smooth constructions.
pub(crate) fn smooth_preconditions(f: &ChoiceFunction) -> Result<()> {
    let closure = check_domain_closure(f.domain(), Closure::FiniteUnion);
    if let Some(w) = closure.witness {
        return Err(Error::Precondition {
            condition: closure.condition,
            witness: w.to_string(),
        });
    }
    require_conditions(f, None, &[MuCondition::Subset, MuCondition::Pr, MuCondition::Cum])
}

struct Lemmas<'a> {
    f: &'a ChoiceFunction,
    hulls: Vec<PointSet>,
}

impl Lemmas<'_> {
    fn mu(&self, y: PointSet) -> Option<PointSet> {
        self.f.get(y)
    }

    fn h(&self, i: usize) -> PointSet {
        self.hulls[i]
    }

    fn part(&self, w: Witness, role: &'static str, s: PointSet) -> Witness {
        w.with(role, Value::Set(s), self.f.show(s))
    }

    fn two(&self, r1: &'static str, a: PointSet, r2: &'static str, b: PointSet) -> Witness {
        let w = self.part(Witness::new(), r1, a);
        self.part(w, r2, b)
    }

    fn entries(&self) -> impl Iterator<Item = (usize, PointSet, PointSet)> + '_ {
        self.f.entries().enumerate().map(|(i, (y, fy))| (i, y, fy))
    }
}

/// Evaluate every hull lemma instance-wise. Meant for functions satisfying
/// inclusion, preferential and cumulativity conditions over a union-closed
/// family, but runs on anything and reports what fails.
pub fn check_hull_lemmas(f: &ChoiceFunction) -> Vec<ConditionReport> {
    let l = Lemmas {
        f,
        hulls: f.family().iter().map(|&u| hull(f, u)).collect(),
    };
    let k = kernel(f);
    let mut out = Vec::new();

    // hu1-1: f(A) <= B => f(A | B) = f(B)
    let mut w = None;
    'a: for (_, a, fa) in l.entries() {
        for (_, b, fb) in l.entries() {
            if let Some(fab) = l.mu(a | b) {
                if fa.is_subset(b) && fab != fb {
                    w = Some(l.two("A", a, "B", b));
                    break 'a;
                }
            }
        }
    }
    out.push(ConditionReport::from_witness("hu1-1", w));

    // hu1-2, hu1-3: f(X) <= U <= Y => f(Y | X) = f(Y), and f(Y) & X <= f(U)
    let (mut w2, mut w3) = (None, None);
    for (_, x, fx) in l.entries() {
        for (_, u, fu) in l.entries() {
            if !fx.is_subset(u) {
                continue;
            }
            for (_, y, fy) in l.entries() {
                if !u.is_subset(y) {
                    continue;
                }
                let xuy = || l.part(l.two("X", x, "U", u), "Y", y);
                if w2.is_none() && l.mu(y | x).is_some_and(|fyx| fyx != fy) {
                    w2 = Some(xuy());
                }
                if w3.is_none() && !(fy & x).is_subset(fu) {
                    w3 = Some(xuy());
                }
            }
        }
    }
    out.push(ConditionReport::from_witness("hu1-2", w2));
    out.push(ConditionReport::from_witness("hu1-3", w3));

    // hu1-4: f(X) <= U => f(U) & X <= f(X)
    let mut w = None;
    'b: for (_, x, fx) in l.entries() {
        for (_, u, fu) in l.entries() {
            if fx.is_subset(u) && !(fu & x).is_subset(fx) {
                w = Some(l.two("X", x, "U", u));
                break 'b;
            }
        }
    }
    out.push(ConditionReport::from_witness("hu1-4", w));

    // hu1-5 (repeated as hu2-4): U <= A, f(A) <= H(U) => f(A) <= U
    let mut w = None;
    'c: for (i, u, _) in l.entries() {
        for (_, a, fa) in l.entries() {
            if u.is_subset(a) && fa.is_subset(l.h(i)) && !fa.is_subset(u) {
                w = Some(l.two("U", u, "A", a));
                break 'c;
            }
        }
    }
    let hu15 = w;
    out.push(ConditionReport::from_witness("hu1-5", hu15.clone()));

    // hu1-6: x in K, x in Y - f(Y) => f(Y) nonempty
    let mut w = None;
    'd: for (_, y, fy) in l.entries() {
        for x in (y - fy) & k {
            if fy.is_empty() {
                let wy = l.part(Witness::new(), "Y", y);
                w = Some(wy.with("x", Value::Point(x), f.domain().name(x)));
                break 'd;
            }
        }
    }
    out.push(ConditionReport::from_witness("hu1-6", w));

    // hu2-1: A the union of a cover => f(A) inside the union of the cover's choices.
    // Exact for every cover: x in f(A) escapes some cover iff the family sets
    // below A that do not choose x already cover A.
    let mut w = None;
    'e: for (_, a, fa) in l.entries() {
        for x in fa {
            let cover = l
                .entries()
                .filter(|&(_, b, fb)| b.is_subset(a) && !fb.contains(x))
                .fold(PointSet::EMPTY, |acc, (_, b, _)| acc | b);
            if cover == a {
                let wa = l.part(Witness::new(), "A", a);
                w = Some(wa.with("x", Value::Point(x), f.domain().name(x)));
                break 'e;
            }
        }
    }
    out.push(ConditionReport::from_witness("hu2-1", w));

    // hu2-2: U <= H(U), U <= U' => H(U) <= H(U')
    let mut w = None;
    'g: for (i, u, _) in l.entries() {
        if !u.is_subset(l.h(i)) {
            w = Some(l.part(Witness::new(), "U", u));
            break;
        }
        for (j, v, _) in l.entries() {
            if u.is_subset(v) && !l.h(i).is_subset(l.h(j)) {
                w = Some(l.two("U", u, "U'", v));
                break 'g;
            }
        }
    }
    out.push(ConditionReport::from_witness("hu2-2", w));

    // hu2-3: f(U | Y) - H(U) <= f(Y)
    let mut w = None;
    'h: for (i, u, _) in l.entries() {
        for (_, y, fy) in l.entries() {
            if let Some(fuy) = l.mu(u | y) {
                if !(fuy - l.h(i)).is_subset(fy) {
                    w = Some(l.two("U", u, "Y", y));
                    break 'h;
                }
            }
        }
    }
    out.push(ConditionReport::from_witness("hu2-3", w));
    out.push(ConditionReport::from_witness("hu2-4", hu15));

    // hu2-5: f(Y) <= H(U) => Y <= H(U) and f(U | Y) = f(U)
    let mut w = None;
    'i: for (i, u, fu) in l.entries() {
        for (_, y, fy) in l.entries() {
            if fy.is_subset(l.h(i)) {
                let bad_hull = !y.is_subset(l.h(i));
                let bad_mu = l.mu(u | y).is_some_and(|fuy| fuy != fu);
                if bad_hull || bad_mu {
                    w = Some(l.two("U", u, "Y", y));
                    break 'i;
                }
            }
        }
    }
    out.push(ConditionReport::from_witness("hu2-5", w));

    // hu2-6: x in f(U), x in Y - f(Y) => Y not inside H(U)
    let mut w = None;
    'j: for (i, u, fu) in l.entries() {
        for (_, y, fy) in l.entries() {
            if fu.intersects(y - fy) && y.is_subset(l.h(i)) {
                let x = (fu & (y - fy)).first().expect("nonempty");
                let wy = l.two("U", u, "Y", y);
                w = Some(wy.with("x", Value::Point(x), f.domain().name(x)));
                break 'j;
            }
        }
    }
    out.push(ConditionReport::from_witness("hu2-6", w));

    // hu2-7: Y not inside H(U) => f(U | Y) not inside H(U)
    let mut w = None;
    'k: for (i, u, _) in l.entries() {
        for (_, y, _) in l.entries() {
            if y.is_subset(l.h(i)) {
                continue;
            }
            if l.mu(u | y).is_some_and(|fuy| fuy.is_subset(l.h(i))) {
                w = Some(l.two("U", u, "Y", y));
                break 'k;
            }
        }
    }
    out.push(ConditionReport::from_witness("hu2-7", w));
    out
}

/// Both selection characterizations of minimality, for every kernel point
/// and family set: `x in f(U)` iff `x in U` and some `g in Gamma_x` has range
/// missing `U` (form 1) or missing `H(U)` (form 2).
pub fn check_cum_mu_f(f: &ChoiceFunction) -> Vec<ConditionReport> {
    let k = kernel(f);
    let ws: Vec<Vec<PointSet>> = (0..f.domain().point_count())
        .map(|x| smooth_selection_context(f, x))
        .collect();
    let mut w1 = None;
    let mut w2 = None;
    for (u, fu) in f.entries() {
        let h = hull(f, u);
        for x in k {
            let lhs = fu.contains(x);
            let mk = || {
                Witness::new()
                    .with("U", Value::Set(u), f.show(u))
                    .with("x", Value::Point(x), f.domain().name(x))
            };
            if w1.is_none() && lhs != (u.contains(x) && gamma_avoids(&ws[x], u)) {
                w1 = Some(mk());
            }
            if w2.is_none() && lhs != (u.contains(x) && gamma_avoids(&ws[x], h)) {
                w2 = Some(mk());
            }
        }
    }
    vec![
        ConditionReport::from_witness("cum-mu-f-1", w1),
        ConditionReport::from_witness("cum-mu-f-2", w2),
    ]
}

/// Copies `<x,g>` for kernel points `x` and `g in Gamma_x`; `<x',g'>` attacks
/// `<x,g>` when `x'` is in the range of `g`. Represents but need not be smooth.
pub fn construct_smooth_base(f: &ChoiceFunction) -> Result<PreferentialStructure> {
    smooth_preconditions(f)?;
    let d = f.domain();
    let k = kernel(f);
    let contexts: Vec<(usize, Vec<PointSet>)> =
        k.iter().map(|x| (x, smooth_selection_context(f, x))).collect();
    let total = contexts.iter().fold(0u128, |acc, (_, ws)| {
        acc.saturating_add(ws.iter().fold(1u128, |p, w| p.saturating_mul(w.len() as u128)))
    });
    if total > COPY_LIMIT {
        return Err(Error::Budget(format!("{total} copies exceed the limit of {COPY_LIMIT}")));
    }
    let mut s = PreferentialStructure::new(d.names().to_vec())?;
    let mut pending = Vec::new();
    for (x, ws) in &contexts {
        for picks in Selections::over(ws.clone()) {
            let label = ws
                .iter()
                .zip(&picks)
                .map(|(&w, &p)| format!("{}:{}", f.show(w), d.name(p)))
                .collect::<Vec<_>>()
                .join(" ");
            let c = s.add_copy(*x, label);
            pending.push((c, range_of(&picks)));
        }
    }
    for (c, r) in pending {
        s.insert_point_attackers(r, c);
    }
    Ok(s)
}

/// Add every lower-rank-to-higher-rank attack. Refuses structures with an
/// attack from a higher rank down to a lower one.
pub fn rank_augment(s: &PreferentialStructure, layering: &Layering) -> Result<PreferentialStructure> {
    if layering.names() != s.names() {
        return Err(Error::Layering("layering is over a different point list".into()));
    }
    let ranks = s
        .copies()
        .iter()
        .map(|c| layering.rank_of(c.point))
        .collect::<Result<Vec<_>>>()?;
    if let Some((a, b)) = s.edges().find(|&(a, b)| ranks[a] > ranks[b]) {
        return Err(Error::Precondition {
            condition: "rank-respecting".into(),
            witness: format!("{} attacks {}", s.copy_name(a), s.copy_name(b)),
        });
    }
    let mut out = s.clone();
    for lo in 0..ranks.len() {
        for hi in 0..ranks.len() {
            if ranks[lo] < ranks[hi] {
                out.insert_edge(lo, hi);
            }
        }
    }
    Ok(out)
}
