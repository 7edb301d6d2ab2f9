//! Model sets as bit vectors over the valuation space.

use super::{Formula, Theory, Vocabulary};
use crate::points::PointSet;

/// A set of valuations. Valuation `v` is the bitmask with bit `i` set iff
/// variable `i` is true; membership is stored bit-parallel, 64 valuations per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelSet {
    vars: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl ModelSet {
    fn word_count(vars: usize) -> usize {
        (1usize << vars).div_ceil(64)
    }

    fn tail_mask(vars: usize) -> u64 {
        let n = 1usize << vars;
        if n >= 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    pub fn empty(vars: usize) -> Self {
        ModelSet {
            vars,
            words: vec![0; Self::word_count(vars)],
        }
    }

    pub fn full(vars: usize) -> Self {
        let mut words = vec![u64::MAX; Self::word_count(vars)];
        *words.last_mut().unwrap() = Self::tail_mask(vars);
        ModelSet { vars, words }
    }

    pub fn from_valuations<I: IntoIterator<Item = u32>>(vars: usize, vals: I) -> Self {
        let mut m = Self::empty(vars);
        for v in vals {
            m.insert(v);
        }
        m
    }

    /// Valuations where variable `i` is true.
    pub fn variable(vars: usize, i: usize) -> Self {
        let mut m = Self::empty(vars);
        if i < 6 {
            const PATTERNS: [u64; 6] = [
                0xAAAA_AAAA_AAAA_AAAA,
                0xCCCC_CCCC_CCCC_CCCC,
                0xF0F0_F0F0_F0F0_F0F0,
                0xFF00_FF00_FF00_FF00,
                0xFFFF_0000_FFFF_0000,
                0xFFFF_FFFF_0000_0000,
            ];
            for w in m.words.iter_mut() {
                *w = PATTERNS[i];
            }
        } else {
            for (k, w) in m.words.iter_mut().enumerate() {
                if k >> (i - 6) & 1 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        *m.words.last_mut().unwrap() &= Self::tail_mask(vars);
        m
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn contains(&self, v: u32) -> bool {
        let v = v as usize;
        v < 1 << self.vars && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn insert(&mut self, v: u32) {
        let v = v as usize;
        assert!(v < 1 << self.vars, "valuation out of range");
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.vars)
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ModelSet) -> ModelSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn union(&self, other: &ModelSet) -> ModelSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn complement(&self) -> ModelSet {
        let mut m = ModelSet {
            vars: self.vars,
            words: self.words.iter().map(|w| !w).collect(),
        };
        *m.words.last_mut().unwrap() &= Self::tail_mask(self.vars);
        m
    }

    fn zip(&self, other: &ModelSet, op: impl Fn(u64, u64) -> u64) -> ModelSet {
        assert_eq!(self.vars, other.vars, "model sets over different vocabularies");
        ModelSet {
            vars: self.vars,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    /// Valuations in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            PointSet::from_bits(w).iter().map(move |b| (k * 64 + b) as u32)
        })
    }

    /// The same set as points, valuation `v` becoming point `v`. Needs `|v| <= 6`.
    pub fn to_points(&self) -> Option<PointSet> {
        (self.vars <= 6).then(|| PointSet::from_bits(self.words[0]))
    }

    pub fn from_points(vars: usize, s: PointSet) -> Option<ModelSet> {
        if vars > 6 || !s.is_subset(PointSet::full(1 << vars)) {
            return None;
        }
        Some(ModelSet {
            vars,
            words: vec![s.bits()],
        })
    }

    /// Model set of a single formula, computed bit-parallel.
    pub fn of_formula(vars: usize, f: &Formula) -> ModelSet {
        match f {
            Formula::Var(i) => Self::variable(vars, *i),
            Formula::True => Self::full(vars),
            Formula::False => Self::empty(vars),
            Formula::Not(a) => Self::of_formula(vars, a).complement(),
            Formula::And(a, b) => Self::of_formula(vars, a).intersection(&Self::of_formula(vars, b)),
            Formula::Or(a, b) => Self::of_formula(vars, a).union(&Self::of_formula(vars, b)),
            Formula::Imp(a, b) => Self::of_formula(vars, a)
                .complement()
                .union(&Self::of_formula(vars, b)),
            Formula::Iff(a, b) => {
                let x = Self::of_formula(vars, a);
                let y = Self::of_formula(vars, b);
                x.zip(&y, |p, q| !(p ^ q)).masked()
            }
        }
    }

    fn masked(mut self) -> ModelSet {
        *self.words.last_mut().unwrap() &= Self::tail_mask(self.vars);
        self
    }
}

/// Models of a theory; the empty theory has every valuation.
pub fn models_of(t: &Theory, v: &Vocabulary) -> ModelSet {
    t.formulas.iter().fold(ModelSet::full(v.len()), |acc, f| {
        acc.intersection(&ModelSet::of_formula(v.len(), f))
    })
}

/// Canonical DNF: one minterm per valuation, in valuation order, each minterm
/// listing the literals in variable order. The empty set gives `F`.
pub fn defining_formula(x: &ModelSet, v: &Vocabulary) -> Formula {
    let n = v.len();
    let minterm = |val: u32| -> Formula {
        (0..n)
            .map(|i| {
                if val >> i & 1 == 1 {
                    Formula::var(i)
                } else {
                    Formula::not(Formula::var(i))
                }
            })
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    };
    x.iter().map(minterm).reduce(Formula::or).unwrap_or(Formula::False)
}

/// A finite axiomatization of `x`: `{T}` for the full space, `{F}` for the
/// empty set, the canonical DNF otherwise.
pub fn theory_of(x: &ModelSet, v: &Vocabulary) -> Theory {
    if x.is_full() {
        Theory::new(vec![Formula::True])
    } else if x.is_empty() {
        Theory::new(vec![Formula::False])
    } else {
        Theory::new(vec![defining_formula(x, v)])
    }
}

pub fn classically_entails(t: &Theory, f: &Formula, v: &Vocabulary) -> bool {
    models_of(t, v).is_subset(&ModelSet::of_formula(v.len(), f))
}

/// Name of a valuation as a conjunction of literals, e.g. `p&~q`.
pub fn valuation_name(v: &Vocabulary, val: u32) -> String {
    if v.is_empty() {
        return "T".into();
    }
    v.names()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            if val >> i & 1 == 1 {
                n.clone()
            } else {
                format!("~{n}")
            }
        })
        .collect::<Vec<_>>()
        .join("&")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn v2() -> Vocabulary {
        Vocabulary::new(&["p", "q"]).unwrap()
    }

    #[test]
    fn empty_theory_is_full_space() {
        let v = Vocabulary::new(&["p"]).unwrap();
        let m = models_of(&Theory::default(), &v);
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn disjunction_and_negation() {
        let v = v2();
        let t = Theory::parse(&["p | q", "~p"], &v).unwrap();
        assert_eq!(models_of(&t, &v).iter().collect::<Vec<_>>(), vec![0b10]);
    }

    #[test]
    fn contradiction_has_no_models() {
        let v = v2();
        let t = Theory::parse(&["p", "~p"], &v).unwrap();
        assert!(models_of(&t, &v).is_empty());
    }

    #[test]
    fn theory_of_extremes() {
        let v = v2();
        assert_eq!(theory_of(&ModelSet::full(2), &v).formulas, vec![Formula::True]);
        assert_eq!(theory_of(&ModelSet::empty(2), &v).formulas, vec![Formula::False]);
    }

    #[test]
    fn defining_formula_shapes() {
        let v = v2();
        assert_eq!(defining_formula(&ModelSet::empty(2), &v), Formula::False);
        let pq = ModelSet::from_valuations(2, [0b11]);
        assert_eq!(
            defining_formula(&pq, &v),
            Formula::and(Formula::var(0), Formula::var(1))
        );
        let v1 = Vocabulary::new(&["p"]).unwrap();
        let f = defining_formula(&ModelSet::full(1), &v1);
        assert_eq!(f, Formula::or(Formula::not(Formula::var(0)), Formula::var(0)));
        assert_eq!(f.display(&v1).to_string(), "~p | p");
    }

    #[test]
    fn p_and_not_q_round_trip() {
        let v = v2();
        let x = ModelSet::from_valuations(2, [0b01]);
        let t = theory_of(&x, &v);
        assert_eq!(models_of(&t, &v), x);
        assert_eq!(t.formulas[0].display(&v).to_string(), "p & ~q");
    }

    #[test]
    fn entailment_examples() {
        let v = v2();
        let p = parse_formula("p", &v).unwrap();
        let porq = parse_formula("p | q", &v).unwrap();
        assert!(classically_entails(&Theory::new(vec![p.clone()]), &porq, &v));
        let v1 = Vocabulary::new(&["p"]).unwrap();
        assert!(!classically_entails(&Theory::default(), &Formula::var(0), &v1));
        let t = Theory::parse(&["p -> q", "p"], &v).unwrap();
        assert!(classically_entails(&t, &Formula::var(1), &v));
    }

    #[test]
    fn wide_vocabulary_patterns() {
        let names: Vec<String> = (0..8).map(|i| format!("x{i}")).collect();
        let v = Vocabulary::new(&names).unwrap();
        for i in 0..8 {
            let m = ModelSet::of_formula(8, &Formula::var(i));
            assert_eq!(m.len(), 128);
            assert!(m.iter().all(|val| val >> i & 1 == 1));
        }
        let t = Theory::parse(&["x7 & ~x6"], &v).unwrap();
        assert_eq!(models_of(&t, &v).len(), 64);
    }

    #[test]
    fn point_conversion() {
        let x = ModelSet::from_valuations(2, [0, 3]);
        let p = x.to_points().unwrap();
        assert_eq!(p.bits(), 0b1001);
        assert_eq!(ModelSet::from_points(2, p).unwrap(), x);
        assert!(ModelSet::from_points(2, PointSet::from_bits(1 << 5)).is_none());
    }

    #[test]
    fn valuation_names() {
        let v = v2();
        assert_eq!(valuation_name(&v, 0b01), "p&~q");
        assert_eq!(valuation_name(&v, 0b10), "~p&q");
    }
}
