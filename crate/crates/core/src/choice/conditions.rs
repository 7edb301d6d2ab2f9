//! Algebraic conditions on choice functions.
//!
//! Every check scans the family in declaration order, outer variable first,
//! and stops at the first violating tuple. Tuples that mention a set outside
//! the family (a union, an intersection) are skipped.

use std::fmt;
use std::str::FromStr;

use super::{ChoiceFunction, Domain, Layering};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::report::{ConditionReport, Value, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MuCondition {
    Subset,
    Pr,
    PrPrime,
    Cut,
    Cm,
    ResM,
    Cum,
    SubsetSupset,
    Or,
    WOr,
    DisjOr,
    Empty,
    EmptyFin,
    RatM,
    Eq,
    EqPrime,
    Par,
    Union,
    UnionPrime,
    In,
    /// Lower layers silence higher ones.
    A,
    /// A demoted minimum needs a demoting point of no higher rank outside the set.
    /// Necessary for transitive layered representation.
    ATransitive,
}

impl MuCondition {
    pub const ALL: [MuCondition; 22] = [
        MuCondition::Subset,
        MuCondition::Pr,
        MuCondition::PrPrime,
        MuCondition::Cut,
        MuCondition::Cm,
        MuCondition::ResM,
        MuCondition::Cum,
        MuCondition::SubsetSupset,
        MuCondition::Or,
        MuCondition::WOr,
        MuCondition::DisjOr,
        MuCondition::Empty,
        MuCondition::EmptyFin,
        MuCondition::RatM,
        MuCondition::Eq,
        MuCondition::EqPrime,
        MuCondition::Par,
        MuCondition::Union,
        MuCondition::UnionPrime,
        MuCondition::In,
        MuCondition::A,
        MuCondition::ATransitive,
    ];

    pub fn id(self) -> &'static str {
        match self {
            MuCondition::Subset => "mu-subset",
            MuCondition::Pr => "mu-pr",
            MuCondition::PrPrime => "mu-pr-prime",
            MuCondition::Cut => "mu-cut",
            MuCondition::Cm => "mu-cm",
            MuCondition::ResM => "mu-resm",
            MuCondition::Cum => "mu-cum",
            MuCondition::SubsetSupset => "mu-subset-supset",
            MuCondition::Or => "mu-or",
            MuCondition::WOr => "mu-wor",
            MuCondition::DisjOr => "mu-disjor",
            MuCondition::Empty => "mu-empty",
            MuCondition::EmptyFin => "mu-empty-fin",
            MuCondition::RatM => "mu-ratm",
            MuCondition::Eq => "mu-eq",
            MuCondition::EqPrime => "mu-eq-prime",
            MuCondition::Par => "mu-par",
            MuCondition::Union => "mu-union",
            MuCondition::UnionPrime => "mu-union-prime",
            MuCondition::In => "mu-in",
            MuCondition::A => "mu-a",
            MuCondition::ATransitive => "mu-a-transitive",
        }
    }

    /// The defining implication, for help output.
    pub fn statement(self) -> &'static str {
        match self {
            MuCondition::Subset => "f(X) <= X",
            MuCondition::Pr => "X <= Y => f(Y) & X <= f(X)",
            MuCondition::PrPrime => "f(X) & Y <= f(X & Y)",
            MuCondition::Cut => "f(X) <= Y <= X => f(X) <= f(Y)",
            MuCondition::Cm => "f(X) <= Y <= X => f(Y) <= f(X)",
            MuCondition::ResM => "f(X) <= A & B => f(X & A) <= B",
            MuCondition::Cum => "f(X) <= Y <= X => f(Y) = f(X)",
            MuCondition::SubsetSupset => "f(X) <= Y, f(Y) <= X => f(X) = f(Y)",
            MuCondition::Or => "f(X | Y) <= f(X) | f(Y)",
            MuCondition::WOr => "f(X | Y) <= f(X) | Y",
            MuCondition::DisjOr => "X & Y = {} => f(X | Y) <= f(X) | f(Y)",
            MuCondition::Empty => "f(X) = {} => X = {}",
            MuCondition::EmptyFin => "X != {} => f(X) != {}",
            MuCondition::RatM => "X <= Y, X & f(Y) != {} => f(X) <= f(Y) & X",
            MuCondition::Eq => "X <= Y, X & f(Y) != {} => f(X) = f(Y) & X",
            MuCondition::EqPrime => "f(Y) & X != {} => f(Y & X) = f(Y) & X",
            MuCondition::Par => "f(X | Y) is f(X), f(Y) or f(X) | f(Y)",
            MuCondition::Union => "f(Y) & (X - f(X)) != {} => f(X | Y) & Y = {}",
            MuCondition::UnionPrime => "f(Y) & (X - f(X)) != {} => f(X | Y) = f(X)",
            MuCondition::In => "a in X - f(X) => some b in X has a not in f({a,b})",
            MuCondition::A => "X meets A < A' => f(X) & A' = {}",
            MuCondition::ATransitive => {
                "x in f(U), x in Y - f(Y) => some z in Y - U has rg(z) <= rg(x)"
            }
        }
    }

    pub fn needs_layering(self) -> bool {
        matches!(self, MuCondition::A | MuCondition::ATransitive)
    }
}

impl fmt::Display for MuCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for MuCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MuCondition::ALL
            .iter()
            .copied()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::UnknownCondition(s.to_string()))
    }
}

struct Scan<'a> {
    f: &'a ChoiceFunction,
}

impl Scan<'_> {
    fn mu(&self, y: PointSet) -> Option<PointSet> {
        self.f.get(y)
    }

    fn set(&self, w: Witness, role: &'static str, s: PointSet) -> Witness {
        w.with(role, Value::Set(s), self.f.show(s))
    }

    fn xy(&self, x: PointSet, y: PointSet) -> Witness {
        let w = self.set(Witness::new(), "X", x);
        self.set(w, "Y", y)
    }

    /// First `(X, Y)` over family pairs with `bad(X, f(X), Y, f(Y))`.
    fn pairs(&self, bad: impl Fn(PointSet, PointSet, PointSet, PointSet) -> bool) -> Option<Witness> {
        for (x, fx) in self.f.entries() {
            for (y, fy) in self.f.entries() {
                if bad(x, fx, y, fy) {
                    return Some(self.xy(x, y));
                }
            }
        }
        None
    }

    fn singles(&self, bad: impl Fn(PointSet, PointSet) -> bool) -> Option<Witness> {
        self.f
            .entries()
            .find(|&(x, fx)| bad(x, fx))
            .map(|(x, _)| self.set(Witness::new(), "X", x))
    }
}

/// Evaluate one condition on `f`. `layering` is required for the layered conditions.
pub fn check_mu(
    cond: MuCondition,
    f: &ChoiceFunction,
    layering: Option<&Layering>,
) -> Result<ConditionReport> {
    let s = Scan { f };
    let id = cond.id();
    let w = match cond {
        MuCondition::Subset => s.singles(|x, fx| !fx.is_subset(x)),
        MuCondition::Pr => s.pairs(|x, fx, y, fy| x.is_subset(y) && !(fy & x).is_subset(fx)),
        MuCondition::PrPrime => s.pairs(|x, fx, y, _| match s.mu(x & y) {
            Some(fxy) => !(fx & y).is_subset(fxy),
            None => false,
        }),
        MuCondition::Cut => s.pairs(|x, fx, y, fy| {
            fx.is_subset(y) && y.is_subset(x) && !fx.is_subset(fy)
        }),
        MuCondition::Cm => s.pairs(|x, fx, y, fy| {
            fx.is_subset(y) && y.is_subset(x) && !fy.is_subset(fx)
        }),
        MuCondition::Cum => {
            s.pairs(|x, fx, y, fy| fx.is_subset(y) && y.is_subset(x) && fy != fx)
        }
        MuCondition::SubsetSupset => {
            s.pairs(|x, fx, y, fy| fx.is_subset(y) && fy.is_subset(x) && fx != fy)
        }
        MuCondition::ResM => resm(&s),
        MuCondition::Or => s.pairs(|x, fx, y, fy| match s.mu(x | y) {
            Some(fu) => !fu.is_subset(fx | fy),
            None => false,
        }),
        MuCondition::WOr => s.pairs(|x, fx, y, _| match s.mu(x | y) {
            Some(fu) => !fu.is_subset(fx | y),
            None => false,
        }),
        MuCondition::DisjOr => s.pairs(|x, fx, y, fy| {
            !x.intersects(y)
                && match s.mu(x | y) {
                    Some(fu) => !fu.is_subset(fx | fy),
                    None => false,
                }
        }),
        MuCondition::Empty => s.singles(|x, fx| fx.is_empty() && !x.is_empty()),
        MuCondition::EmptyFin => s.singles(|x, fx| !x.is_empty() && fx.is_empty()),
        MuCondition::RatM => s.pairs(|x, fx, y, fy| {
            x.is_subset(y) && x.intersects(fy) && !fx.is_subset(fy & x)
        }),
        MuCondition::Eq => {
            s.pairs(|x, fx, y, fy| x.is_subset(y) && x.intersects(fy) && fx != fy & x)
        }
        MuCondition::EqPrime => s.pairs(|x, _, y, fy| {
            fy.intersects(x)
                && match s.mu(y & x) {
                    Some(fyx) => fyx != fy & x,
                    None => false,
                }
        }),
        MuCondition::Par => s.pairs(|x, fx, y, fy| match s.mu(x | y) {
            Some(fu) => fu != fx && fu != fy && fu != fx | fy,
            None => false,
        }),
        MuCondition::Union => s.pairs(|x, fx, y, fy| {
            fy.intersects(x - fx)
                && match s.mu(x | y) {
                    Some(fu) => fu.intersects(y),
                    None => false,
                }
        }),
        MuCondition::UnionPrime => s.pairs(|x, fx, y, fy| {
            fy.intersects(x - fx)
                && match s.mu(x | y) {
                    Some(fu) => fu != fx,
                    None => false,
                }
        }),
        MuCondition::In => mu_in(&s),
        MuCondition::A => {
            let l = layering.ok_or_else(|| Error::MissingLayering(id.into()))?;
            mu_a(&s, l)
        }
        MuCondition::ATransitive => {
            let l = layering.ok_or_else(|| Error::MissingLayering(id.into()))?;
            mu_a_transitive(&s, l)
        }
    };
    Ok(ConditionReport::from_witness(id, w))
}

/// Run each check and turn the first failure into a precondition error.
pub fn require_conditions(
    f: &ChoiceFunction,
    layering: Option<&Layering>,
    conds: &[MuCondition],
) -> Result<()> {
    for &c in conds {
        let r = check_mu(c, f, layering)?;
        if let Some(w) = r.witness {
            return Err(Error::Precondition {
                condition: c.id().into(),
                witness: w.to_string(),
            });
        }
    }
    Ok(())
}

fn resm(s: &Scan<'_>) -> Option<Witness> {
    for (x, fx) in s.f.entries() {
        for &a in s.f.family() {
            let Some(fxa) = s.mu(x & a) else { continue };
            for &b in s.f.family() {
                if fx.is_subset(a & b) && !fxa.is_subset(b) {
                    let w = s.set(Witness::new(), "X", x);
                    let w = s.set(w, "A", a);
                    return Some(s.set(w, "B", b));
                }
            }
        }
    }
    None
}

fn mu_in(s: &Scan<'_>) -> Option<Witness> {
    for (x, fx) in s.f.entries() {
        for a in x - fx {
            let rescued = x.iter().any(|b| {
                let pair = PointSet::singleton(a).with(b);
                matches!(s.mu(pair), Some(fp) if !fp.contains(a))
            });
            if !rescued {
                let w = s.set(Witness::new(), "X", x);
                return Some(w.with("a", Value::Point(a), s.f.domain().name(a)));
            }
        }
    }
    None
}

fn mu_a(s: &Scan<'_>, l: &Layering) -> Option<Witness> {
    for (x, fx) in s.f.entries() {
        for i in 1..=l.len() {
            if !x.intersects(l.block(i)) {
                continue;
            }
            for j in i + 1..=l.len() {
                let hi = l.block(j);
                if x.intersects(hi) && fx.intersects(hi) {
                    let w = s.set(Witness::new(), "X", x);
                    let w = w.with("A", Value::Layer(i), format!("A{i}"));
                    return Some(w.with("A'", Value::Layer(j), format!("A{j}")));
                }
            }
        }
    }
    None
}

fn mu_a_transitive(s: &Scan<'_>, l: &Layering) -> Option<Witness> {
    for (u, fu) in s.f.entries() {
        for (y, fy) in s.f.entries() {
            for x in fu & (y - fy) {
                let ok = match l.rank(x) {
                    Some(rx) => (y - u).iter().any(|z| l.rank(z).is_some_and(|rz| rz <= rx)),
                    None => false,
                };
                if !ok {
                    let w = s.set(Witness::new(), "U", u);
                    let w = s.set(w, "Y", y);
                    return Some(w.with("x", Value::Point(x), s.f.domain().name(x)));
                }
            }
        }
    }
    None
}

/// Which closure property of the family to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    FiniteUnion,
    FiniteIntersection,
}

impl Closure {
    pub fn id(self) -> &'static str {
        match self {
            Closure::FiniteUnion => "union-closed",
            Closure::FiniteIntersection => "intersection-closed",
        }
    }
}

/// Closure of the family under binary union or intersection; the witness is
/// the first offending pair.
pub fn check_domain_closure(d: &Domain, which: Closure) -> ConditionReport {
    let fam = d.family();
    for (i, &x) in fam.iter().enumerate() {
        for &y in &fam[i + 1..] {
            let z = match which {
                Closure::FiniteUnion => x | y,
                Closure::FiniteIntersection => x & y,
            };
            if !d.contains(z) {
                let w = Witness::new()
                    .with("X", Value::Set(x), d.show(x))
                    .with("Y", Value::Set(y), d.show(y));
                return ConditionReport::fail(which.id(), w);
            }
        }
    }
    ConditionReport::pass(which.id())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    /// Z={a,b,c}; {a,b,c}->{b}, {a,b}->{a,b}, {a,c}->{}, {b,c}->{b}.
    fn e1() -> (ChoiceFunction, Layering) {
        let n = names(&["a", "b", "c"]);
        let fam = vec![0b111, 0b011, 0b101, 0b110].into_iter().map(PointSet::from_bits).collect();
        let d = Arc::new(Domain::new(n.clone(), fam).unwrap());
        let table = vec![0b010, 0b011, 0b000, 0b010].into_iter().map(PointSet::from_bits).collect();
        let f = ChoiceFunction::new(d, table).unwrap();
        let l = Layering::new(&n, vec![PointSet::from_bits(0b011), PointSet::from_bits(0b100)])
            .unwrap();
        (f, l)
    }

    #[test]
    fn e1_core_conditions() {
        let (f, l) = e1();
        for c in [MuCondition::Subset, MuCondition::Pr, MuCondition::A] {
            assert!(check_mu(c, &f, Some(&l)).unwrap().holds, "{c}");
        }
        let r = check_mu(MuCondition::Cum, &f, None).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.to_string(), "X={a,b,c} Y={a,b}");
    }

    #[test]
    fn e1_fails_transitive_layer_condition() {
        let (f, l) = e1();
        let r = check_mu(MuCondition::ATransitive, &f, Some(&l)).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().to_string(), "U={a,b} Y={a,b,c} x=a");
    }

    #[test]
    fn identity_passes_basics() {
        let d = Arc::new(Domain::powerset(names(&["a", "b", "c"]), false).unwrap());
        let f = ChoiceFunction::from_fn(d, |y| y).unwrap();
        for c in MuCondition::ALL.iter().filter(|c| !c.needs_layering()) {
            let r = check_mu(*c, &f, None).unwrap();
            assert!(r.holds, "{c}: {r}");
        }
    }

    #[test]
    fn layering_is_required() {
        let (f, _) = e1();
        assert!(matches!(
            check_mu(MuCondition::A, &f, None),
            Err(Error::MissingLayering(_))
        ));
    }

    #[test]
    fn ids_round_trip() {
        for c in MuCondition::ALL {
            assert_eq!(c.id().parse::<MuCondition>().unwrap(), c);
        }
        assert!("mu-nope".parse::<MuCondition>().is_err());
    }

    #[test]
    fn reversed_layers_break_mu_a() {
        let (f, _) = e1();
        let n = names(&["a", "b", "c"]);
        let l = Layering::new(&n, vec![PointSet::from_bits(0b100), PointSet::from_bits(0b011)])
            .unwrap();
        let r = check_mu(MuCondition::A, &f, Some(&l)).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().set("X"), Some(PointSet::from_bits(0b111)));
    }

    #[test]
    fn closure_checks() {
        let (f, _) = e1();
        assert!(check_domain_closure(f.domain(), Closure::FiniteUnion).holds);
        let d = Domain::powerset(names(&["a", "b"]), false).unwrap();
        assert!(check_domain_closure(&d, Closure::FiniteUnion).holds);
        let d = Domain::new(names(&["a", "b"]), vec![PointSet::from_bits(1), PointSet::from_bits(2)])
            .unwrap();
        let r = check_domain_closure(&d, Closure::FiniteUnion);
        assert_eq!(r.witness.unwrap().to_string(), "X={a} Y={b}");
        let r = check_domain_closure(&d, Closure::FiniteIntersection);
        assert!(!r.holds);
    }

    #[test]
    fn mu_in_needs_a_demoting_pair() {
        let n = names(&["a", "b"]);
        let d = Arc::new(
            Domain::new(n, vec![PointSet::from_bits(0b11), PointSet::from_bits(0b01)]).unwrap(),
        );
        let f = ChoiceFunction::new(d.clone(), vec![PointSet::from_bits(0b10), PointSet::from_bits(0b01)])
            .unwrap();
        assert!(check_mu(MuCondition::In, &f, None).unwrap().holds);
        let g = ChoiceFunction::new(d, vec![PointSet::from_bits(0b00), PointSet::from_bits(0b01)])
            .unwrap();
        // both points are dropped from {a,b}, which itself rescues them
        assert!(check_mu(MuCondition::In, &g, None).unwrap().holds);
    }
}
