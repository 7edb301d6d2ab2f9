//! Pass/fail reports with structured witnesses.

use std::fmt;

use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};

use crate::points::PointSet;

/// One component of a witness tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Set(PointSet),
    Point(usize),
    /// Index of a copy in a structure.
    Copy(usize),
    /// 1-based layer index.
    Layer(usize),
    World(usize),
    /// Free-form detail such as an error message; `shown` carries it.
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPart {
    pub role: &'static str,
    pub value: Value,
    /// Human-readable rendering, fixed when the witness is made.
    pub shown: String,
}

/// The violating tuple of a failed check, in quantifier order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub parts: Vec<WitnessPart>,
}

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn with(mut self, role: &'static str, value: Value, shown: impl Into<String>) -> Self {
        self.parts.push(WitnessPart {
            role,
            value,
            shown: shown.into(),
        });
        self
    }

    /// A single-part witness holding only text.
    pub fn text(role: &'static str, shown: impl Into<String>) -> Self {
        Witness::new().with(role, Value::Text, shown)
    }

    pub fn value(&self, role: &str) -> Option<&Value> {
        self.parts.iter().find(|p| p.role == role).map(|p| &p.value)
    }

    pub fn set(&self, role: &str) -> Option<PointSet> {
        match self.value(role)? {
            Value::Set(s) => Some(*s),
            _ => None,
        }
    }

    pub fn point(&self, role: &str) -> Option<usize> {
        match self.value(role)? {
            Value::Point(p) => Some(*p),
            _ => None,
        }
    }

    pub fn copy(&self, role: &str) -> Option<usize> {
        match self.value(role)? {
            Value::Copy(c) => Some(*c),
            _ => None,
        }
    }

    pub fn world(&self, role: &str) -> Option<usize> {
        match self.value(role)? {
            Value::World(w) => Some(*w),
            _ => None,
        }
    }

    pub fn layer(&self, role: &str) -> Option<usize> {
        match self.value(role)? {
            Value::Layer(l) => Some(*l),
            _ => None,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}={}", p.role, p.shown)?;
        }
        Ok(())
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.parts.len()))?;
        for p in &self.parts {
            m.serialize_entry(p.role, &p.shown)?;
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: String,
    pub holds: bool,
    /// Present exactly when `holds` is false.
    pub witness: Option<Witness>,
}

impl ConditionReport {
    pub fn pass(condition: impl Into<String>) -> Self {
        ConditionReport {
            condition: condition.into(),
            holds: true,
            witness: None,
        }
    }

    pub fn fail(condition: impl Into<String>, witness: Witness) -> Self {
        ConditionReport {
            condition: condition.into(),
            holds: false,
            witness: Some(witness),
        }
    }

    pub fn from_witness(condition: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Self::fail(condition, w),
            None => Self::pass(condition),
        }
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<18} {}", self.condition, if self.holds { "holds" } else { "fails" })?;
        if let Some(w) = &self.witness {
            write!(f, "  {w}")?;
        }
        Ok(())
    }
}

impl Serialize for ConditionReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ConditionReport", 3)?;
        st.serialize_field("condition", &self.condition)?;
        st.serialize_field("holds", &self.holds)?;
        st.serialize_field("witness", &self.witness)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_json() {
        let w = Witness::new()
            .with("X", Value::Set(PointSet::from_bits(7)), "{a,b,c}")
            .with("Y", Value::Set(PointSet::from_bits(3)), "{a,b}");
        let r = ConditionReport::fail("mu-cum", w);
        assert!(r.to_string().contains("X={a,b,c} Y={a,b}"));
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(
            j,
            r#"{"condition":"mu-cum","holds":false,"witness":{"X":"{a,b,c}","Y":"{a,b}"}}"#
        );
        let ok = ConditionReport::pass("mu-pr");
        assert_eq!(
            serde_json::to_string(&ok).unwrap(),
            r#"{"condition":"mu-pr","holds":true,"witness":null}"#
        );
    }

    #[test]
    fn typed_lookup() {
        let w = Witness::new().with("x", Value::Point(2), "c");
        assert_eq!(w.point("x"), Some(2));
        assert_eq!(w.set("x"), None);
        assert_eq!(w.point("y"), None);
    }
}
