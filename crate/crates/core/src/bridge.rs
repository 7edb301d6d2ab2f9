//! From structures over valuations to consequence relations and back.
//!
//! Theories are identified with their model sets, so a consequence relation
//! over a finite vocabulary is a table from model sets to model sets: the
//! models of `T` map to the models of everything `T` defeasibly entails.
//! Left logical equivalence, closure under conjunction, right weakening and
//! classical closure are then built into the representation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::choice::{ChoiceFunction, Domain};
use crate::error::{Error, Result};
use crate::logic::{
    defining_formula, models_of, valuation_name, Formula, ModelSet, Theory, Vocabulary,
};
use crate::points::PointSet;
use crate::report::{ConditionReport, Value, Witness};
use crate::structure::PreferentialStructure;

/// Largest vocabulary a table is built for: `2^(2^3)` theories.
pub const MAX_TABLE_VARS: usize = 3;

/// The closure of every theory, keyed by model-set bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequenceTable {
    vocab: Vocabulary,
    closure: Vec<PointSet>,
}

fn guard(v: &Vocabulary) -> Result<()> {
    if v.len() > MAX_TABLE_VARS {
        return Err(Error::Vocabulary(format!(
            "{} variables; consequence tables need at most {MAX_TABLE_VARS}",
            v.len()
        )));
    }
    Ok(())
}

fn all_sets(v: &Vocabulary) -> impl Iterator<Item = PointSet> + Clone {
    (0..1u64 << v.valuation_count()).map(PointSet::from_bits)
}

fn to_models(v: &Vocabulary, s: PointSet) -> ModelSet {
    ModelSet::from_points(v.len(), s).expect("guarded vocabulary")
}

fn to_points(m: &ModelSet) -> PointSet {
    m.to_points().expect("guarded vocabulary")
}

/// A model set as its shortest canonical formula: `T`, `F` or a DNF.
pub fn show_models(v: &Vocabulary, s: PointSet) -> String {
    if s == PointSet::full(v.valuation_count()) {
        "T".into()
    } else {
        defining_formula(&to_models(v, s), v).display(v).to_string()
    }
}

impl ConsequenceTable {
    /// Table from a closure function on model sets.
    pub fn from_fn(v: &Vocabulary, closure: impl Fn(PointSet) -> PointSet) -> Result<Self> {
        guard(v)?;
        let full = PointSet::full(v.valuation_count());
        Ok(ConsequenceTable {
            vocab: v.clone(),
            closure: all_sets(v).map(|x| closure(x) & full).collect(),
        })
    }

    /// Classical consequence: every theory closes to itself.
    pub fn classical(v: &Vocabulary) -> Result<Self> {
        Self::from_fn(v, |x| x)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    /// Model set of the closure of the theory whose model set is `x`.
    pub fn closure(&self, x: PointSet) -> PointSet {
        self.closure[x.bits() as usize]
    }

    pub fn closure_of(&self, t: &Theory) -> ModelSet {
        to_models(&self.vocab, self.closure(to_points(&models_of(t, &self.vocab))))
    }

    /// `T |~ phi`.
    pub fn entails(&self, t: &Theory, phi: &Formula) -> bool {
        self.closure_of(t)
            .is_subset(&ModelSet::of_formula(self.vocab.len(), phi))
    }

    /// `(theory, closure)` bitmask pairs in theory order.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.closure
            .iter()
            .enumerate()
            .map(|(x, c)| (x as u64, c.bits()))
            .collect()
    }

    fn sets(&self) -> impl Iterator<Item = PointSet> + Clone {
        all_sets(&self.vocab)
    }

    fn show(&self, s: PointSet) -> String {
        show_models(&self.vocab, s)
    }
}

impl Serialize for ConsequenceTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

fn require_valuations(s: &PreferentialStructure, v: &Vocabulary) -> Result<()> {
    if s.point_count() != v.valuation_count() {
        return Err(Error::ValuationMismatch {
            points: s.point_count(),
            valuations: v.valuation_count(),
        });
    }
    Ok(())
}

/// `T |~ phi` in a structure whose point `i` is valuation `i`.
pub fn entail(s: &PreferentialStructure, v: &Vocabulary, t: &Theory, phi: &Formula) -> Result<bool> {
    require_valuations(s, v)?;
    if v.len() > 6 {
        return Err(Error::Vocabulary("structures over valuations need at most 6 variables".into()));
    }
    let m = s.minimize(to_points(&models_of(t, v)));
    Ok(to_models(v, m).is_subset(&ModelSet::of_formula(v.len(), phi)))
}

/// Point names for a structure over the valuations of `v`.
pub fn valuation_names(v: &Vocabulary) -> Vec<String> {
    (0..v.valuation_count() as u32).map(|i| valuation_name(v, i)).collect()
}

/// The consequence relation a structure induces on every theory.
pub fn closure_table(s: &PreferentialStructure, v: &Vocabulary) -> Result<ConsequenceTable> {
    guard(v)?;
    require_valuations(s, v)?;
    ConsequenceTable::from_fn(v, |x| s.minimize(x))
}

/// Rules on consequence relations, stated over model sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicCondition {
    And,
    Or,
    WOr,
    DisjOr,
    Lle,
    Rw,
    Ccl,
    Sc,
    Ref,
    Cp,
    Pr,
    Cut,
    Cm,
    ResM,
    Cum,
    SubsetSupset,
    RatM,
    RatMEq,
    LogEqPrime,
    LogPar,
    LogUnion,
    LogUnionPrime,
    AMin,
}

impl LogicCondition {
    pub const ALL: [LogicCondition; 23] = [
        LogicCondition::And,
        LogicCondition::Or,
        LogicCondition::WOr,
        LogicCondition::DisjOr,
        LogicCondition::Lle,
        LogicCondition::Rw,
        LogicCondition::Ccl,
        LogicCondition::Sc,
        LogicCondition::Ref,
        LogicCondition::Cp,
        LogicCondition::Pr,
        LogicCondition::Cut,
        LogicCondition::Cm,
        LogicCondition::ResM,
        LogicCondition::Cum,
        LogicCondition::SubsetSupset,
        LogicCondition::RatM,
        LogicCondition::RatMEq,
        LogicCondition::LogEqPrime,
        LogicCondition::LogPar,
        LogicCondition::LogUnion,
        LogicCondition::LogUnionPrime,
        LogicCondition::AMin,
    ];

    pub fn id(self) -> &'static str {
        use LogicCondition::*;
        match self {
            And => "and",
            Or => "or",
            WOr => "wor",
            DisjOr => "disjor",
            Lle => "lle",
            Rw => "rw",
            Ccl => "ccl",
            Sc => "sc",
            Ref => "ref",
            Cp => "cp",
            Pr => "pr",
            Cut => "cut",
            Cm => "cm",
            ResM => "resm",
            Cum => "cum",
            SubsetSupset => "subset-supset",
            RatM => "ratm",
            RatMEq => "ratm-eq",
            LogEqPrime => "log-eq-prime",
            LogPar => "log-par",
            LogUnion => "log-union",
            LogUnionPrime => "log-union-prime",
            AMin => "a-min",
        }
    }

    /// Rules that hold for every table because of how tables are stored.
    pub fn structural(self) -> bool {
        use LogicCondition::*;
        matches!(self, And | Lle | Rw | Ccl)
    }
}

impl fmt::Display for LogicCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LogicCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase();
        LogicCondition::ALL
            .into_iter()
            .find(|c| c.id() == key)
            .ok_or_else(|| Error::UnknownCondition(s.to_string()))
    }
}

/// Check one rule over every theory (and pair, or triple) of the table.
/// `a-min` needs the layer formulas `alphas`, lowest layer first.
pub fn check_logic(
    cond: LogicCondition,
    ct: &ConsequenceTable,
    alphas: Option<&[Formula]>,
) -> Result<ConditionReport> {
    use LogicCondition::*;
    let c = |x: PointSet| ct.closure(x);
    let one = |r: &'static str, x: PointSet| Witness::new().with(r, Value::Set(x), ct.show(x));
    let two = |x: PointSet, y: PointSet| one("T", x).with("T'", Value::Set(y), ct.show(y));

    let singles = |p: &dyn Fn(PointSet) -> bool| ct.sets().find(|&x| !p(x)).map(|x| one("T", x));
    let pairs = |p: &dyn Fn(PointSet, PointSet) -> bool| {
        for x in ct.sets() {
            for y in ct.sets() {
                if !p(x, y) {
                    return Some(two(x, y));
                }
            }
        }
        None
    };

    let witness = match cond {
        And | Lle | Rw | Ccl => None,
        Or => pairs(&|x, y| c(x | y).is_subset(c(x) | c(y))),
        WOr => pairs(&|x, y| c(x | y).is_subset(c(x) | y)),
        DisjOr => pairs(&|x, y| x.intersects(y) || c(x | y).is_subset(c(x) | c(y))),
        Sc | Ref => singles(&|x| c(x).is_subset(x)),
        Cp => singles(&|x| !c(x).is_empty() || x.is_empty()),
        Pr => pairs(&|x, y| (c(x) & y).is_subset(c(x & y))),
        // T <= Cn(T') <= closure(T): T' has fewer models than T and at least those of the closure.
        Cut => pairs(&|x, y| !(c(x).is_subset(y) && y.is_subset(x)) || c(x).is_subset(c(y))),
        Cm => pairs(&|x, y| !(c(x).is_subset(y) && y.is_subset(x)) || c(y).is_subset(c(x))),
        Cum => pairs(&|x, y| !(c(x).is_subset(y) && y.is_subset(x)) || c(y) == c(x)),
        SubsetSupset => pairs(&|x, y| !(c(y).is_subset(x) && c(x).is_subset(y)) || c(x) == c(y)),
        RatM => pairs(&|x, y| !(x.intersects(c(y)) && x.is_subset(y)) || c(x).is_subset(c(y) & x)),
        RatMEq => pairs(&|x, y| !(x.intersects(c(y)) && x.is_subset(y)) || c(x) == c(y) & x),
        LogEqPrime => pairs(&|x, y| !c(y).intersects(x) || c(x & y) == c(y) & x),
        LogPar => pairs(&|x, y| {
            let u = c(x | y);
            u == c(x) || u == c(y) || u == c(x) | c(y)
        }),
        LogUnion => pairs(&|x, y| {
            !(c(y).intersects(x) && !c(y).intersects(c(x))) || !c(x | y).intersects(y)
        }),
        LogUnionPrime => pairs(&|x, y| {
            !(c(y).intersects(x) && !c(y).intersects(c(x))) || c(x | y) == c(x)
        }),
        ResM => {
            let mut w = None;
            'x: for x in ct.sets() {
                for a in ct.sets() {
                    for b in ct.sets() {
                        if c(x).is_subset(a & b) && !c(x & a).is_subset(b) {
                            w = Some(
                                one("T", x)
                                    .with("A", Value::Set(a), ct.show(a))
                                    .with("B", Value::Set(b), ct.show(b)),
                            );
                            break 'x;
                        }
                    }
                }
            }
            w
        }
        AMin => {
            let alphas = alphas.ok_or_else(|| Error::MissingLayering(cond.id().into()))?;
            let layers: Vec<PointSet> = alphas
                .iter()
                .map(|a| to_points(&ModelSet::of_formula(ct.vocab.len(), a)))
                .collect();
            let mut w = None;
            'm: for x in ct.sets() {
                for (i, &ai) in layers.iter().enumerate() {
                    for (j, &aj) in layers.iter().enumerate().skip(i + 1) {
                        if x.intersects(ai) && x.intersects(aj) && c(x).intersects(aj) {
                            w = Some(
                                one("T", x)
                                    .with("i", Value::Layer(i + 1), (i + 1).to_string())
                                    .with("j", Value::Layer(j + 1), (j + 1).to_string()),
                            );
                            break 'm;
                        }
                    }
                }
            }
            w
        }
    };
    Ok(ConditionReport::from_witness(cond.id(), witness))
}

/// The choice function `M(T) -> M(closure(T))` over every model set.
pub fn mu_from_logic(ct: &ConsequenceTable) -> ChoiceFunction {
    let v = &ct.vocab;
    let d = Domain::powerset(valuation_names(v), true).expect("guarded vocabulary");
    ChoiceFunction::from_fn(Arc::new(d), |x| ct.closure(x)).expect("closures are inside the base")
}

/// The consequence relation `closure(T) = Th(f(M(T)))`. The family must be
/// every model set, with points named and ordered as the valuations of `v`.
pub fn logic_from_mu(f: &ChoiceFunction, v: &Vocabulary) -> Result<ConsequenceTable> {
    guard(v)?;
    let d = f.domain();
    if d.point_count() != v.valuation_count() {
        return Err(Error::ValuationMismatch {
            points: d.point_count(),
            valuations: v.valuation_count(),
        });
    }
    if d.names() != valuation_names(v).as_slice() {
        return Err(Error::Domain("points must be the valuations in order".into()));
    }
    if d.family().len() != 1 << v.valuation_count() {
        return Err(Error::Domain("family must hold every model set".into()));
    }
    ConsequenceTable::from_fn(v, |x| f.get(x).expect("every set is a member"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::{check_mu, MuCondition};
    use crate::logic::parse_formula;

    fn pq() -> Vocabulary {
        Vocabulary::new(&["p", "q"]).unwrap()
    }

    /// p-worlds attack the not-p worlds.
    fn p_layers(v: &Vocabulary) -> PreferentialStructure {
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .filter(|&(a, b)| a & 1 == 1 && b & 1 == 0)
            .collect();
        PreferentialStructure::from_point_edges(valuation_names(v), &edges).unwrap()
    }

    #[test]
    fn empty_relation_is_classical() {
        let v = pq();
        let s = PreferentialStructure::injective(valuation_names(&v)).unwrap();
        let ct = closure_table(&s, &v).unwrap();
        assert_eq!(ct, ConsequenceTable::classical(&v).unwrap());
        let t = Theory::parse(&["p | q"], &v).unwrap();
        let phi = parse_formula("p", &v).unwrap();
        assert!(!entail(&s, &v, &t, &phi).unwrap());
        for c in LogicCondition::ALL {
            let alphas = [parse_formula("p", &v).unwrap(), parse_formula("~p", &v).unwrap()];
            let r = check_logic(c, &ct, Some(&alphas)).unwrap();
            // a-min demands the higher layer vanish; classical logic keeps it
            assert_eq!(r.holds, c != LogicCondition::AMin, "{r}");
        }
    }

    #[test]
    fn p_preferred() {
        let v = pq();
        let s = p_layers(&v);
        let top = Theory::new(vec![]);
        assert!(entail(&s, &v, &top, &parse_formula("p", &v).unwrap()).unwrap());
        let ct = closure_table(&s, &v).unwrap();
        assert_eq!(ct.closure(PointSet::full(4)), PointSet::from_bits(0b1010));
        assert_eq!(show_models(&v, ct.closure(PointSet::full(4))), "p & ~q | p & q");
        for c in [LogicCondition::Or, LogicCondition::Sc, LogicCondition::Pr, LogicCondition::Cum, LogicCondition::RatM] {
            assert!(check_logic(c, &ct, None).unwrap().holds, "{c}");
        }
        let alphas = [parse_formula("p", &v).unwrap(), parse_formula("~p", &v).unwrap()];
        assert!(check_logic(LogicCondition::AMin, &ct, Some(&alphas)).unwrap().holds);
    }

    #[test]
    fn inconsistent_closure_breaks_cp() {
        let v = pq();
        let n = valuation_names(&v);
        // valuation 0 and 2 attack each other
        let s = PreferentialStructure::from_point_edges(n, &[(0, 2), (2, 0)]).unwrap();
        let ct = closure_table(&s, &v).unwrap();
        let r = check_logic(LogicCondition::Cp, &ct, None).unwrap();
        assert!(!r.holds);
        assert!(check_logic(LogicCondition::Sc, &ct, None).unwrap().holds);
    }

    #[test]
    fn sc_violation_witness() {
        let v = pq();
        let ct = ConsequenceTable::from_fn(&v, |x| if x.len() == 4 { PointSet::from_bits(1) } else { x }).unwrap();
        assert!(check_logic(LogicCondition::Sc, &ct, None).unwrap().holds);
        let bad = ConsequenceTable::from_fn(&v, |x| if x.is_empty() { PointSet::from_bits(1) } else { x }).unwrap();
        let r = check_logic(LogicCondition::Sc, &bad, None).unwrap();
        assert_eq!(r.witness.unwrap().to_string(), "T=F");
    }

    #[test]
    fn a_min_needs_alphas() {
        let v = pq();
        let ct = ConsequenceTable::classical(&v).unwrap();
        assert!(check_logic(LogicCondition::AMin, &ct, None).is_err());
        assert!("bogus".parse::<LogicCondition>().is_err());
        for c in LogicCondition::ALL {
            assert_eq!(c.id().parse::<LogicCondition>().unwrap(), c);
        }
    }

    #[test]
    fn round_trips() {
        let v = pq();
        let ct = ConsequenceTable::classical(&v).unwrap();
        let f = mu_from_logic(&ct);
        assert!(f.entries().all(|(x, fx)| x == fx));
        assert_eq!(logic_from_mu(&f, &v).unwrap(), ct);

        let s = p_layers(&v);
        let ct = closure_table(&s, &v).unwrap();
        let f = mu_from_logic(&ct);
        assert_eq!(f, s.induced_choice(f.domain()).unwrap());
        assert!(check_mu(MuCondition::Pr, &f, None).unwrap().holds);
        assert_eq!(logic_from_mu(&f, &v).unwrap(), ct);
    }

    #[test]
    fn too_many_variables() {
        let v = Vocabulary::new(&["p", "q", "r", "s"]).unwrap();
        assert!(ConsequenceTable::classical(&v).is_err());
    }
}
