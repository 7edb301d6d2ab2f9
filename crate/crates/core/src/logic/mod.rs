//! Propositional language over a small explicit vocabulary.

mod models;
mod parse;

pub use models::{
    classically_entails, defining_formula, models_of, theory_of, valuation_name, ModelSet,
};
pub use parse::{parse_formula, ParseError};

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of variables.
pub const MAX_VARS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    names: Vec<String>,
}

impl Vocabulary {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.len() > MAX_VARS {
            return Err(Error::Vocabulary(format!(
                "{} variables, at most {MAX_VARS} allowed",
                names.len()
            )));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::Vocabulary(format!("`{n}` is not an identifier")));
            }
            if n == "T" || n == "F" {
                return Err(Error::Vocabulary(format!("`{n}` is reserved for a constant")));
            }
            if out.iter().any(|m| m == n) {
                return Err(Error::Vocabulary(format!("`{n}` declared twice")));
            }
            out.push(n.to_string());
        }
        Ok(Vocabulary { names: out })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of valuations, `2^|v|`.
    pub fn valuation_count(&self) -> usize {
        1 << self.names.len()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Formula syntax tree. Variables are indices into a [`Vocabulary`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    True,
    False,
}

impl Formula {
    pub fn var(i: usize) -> Self {
        Formula::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Truth value under a valuation given as a bitmask (bit `i` = variable `i`).
    pub fn eval(&self, valuation: u32) -> bool {
        match self {
            Formula::Var(i) => valuation >> i & 1 == 1,
            Formula::Not(a) => !a.eval(valuation),
            Formula::And(a, b) => a.eval(valuation) && b.eval(valuation),
            Formula::Or(a, b) => a.eval(valuation) || b.eval(valuation),
            Formula::Imp(a, b) => !a.eval(valuation) || b.eval(valuation),
            Formula::Iff(a, b) => a.eval(valuation) == b.eval(valuation),
            Formula::True => true,
            Formula::False => false,
        }
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Formula::Var(i) => Some(*i),
            Formula::Not(a) => a.max_var(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.max_var().max(b.max_var())
            }
            Formula::True | Formula::False => None,
        }
    }

    /// Printable form using the vocabulary's names.
    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> impl fmt::Display + 'a {
        parse::Printer {
            formula: self,
            vocab,
        }
    }
}

/// A finite set of formulas, read conjunctively.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub formulas: Vec<Formula>,
}

impl Theory {
    pub fn new(formulas: Vec<Formula>) -> Self {
        Theory { formulas }
    }

    pub fn parse<S: AsRef<str>>(texts: &[S], vocab: &Vocabulary) -> Result<Self> {
        let formulas = texts
            .iter()
            .map(|t| parse_formula(t.as_ref(), vocab))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Theory { formulas })
    }
}
