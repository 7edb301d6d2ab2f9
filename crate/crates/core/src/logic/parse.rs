//! Recursive-descent parser and minimal-parenthesis printer.
//!
//! Binding strength, tightest first: `~`, `&`, `|`, `->`, `<->`.
//! `&`, `|` and `<->` associate to the left, `->` to the right.

use std::fmt;

use thiserror::Error;

use super::{is_identifier, Formula, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownVariable { offset, .. } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Not => "`~`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Imp => "`->`".into(),
        Tok::Iff => "`<->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Imp
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 3;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            _ => {
                let shown = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{shown}`"),
                });
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vocab: &'a Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {wanted}, found {}", describe(self.peek())),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(f)
            }
            Tok::Ident(name) => {
                let (_, offset) = self.bump();
                match name.as_str() {
                    "T" => Ok(Formula::True),
                    "F" => Ok(Formula::False),
                    _ => match self.vocab.index_of(&name) {
                        Some(i) => Ok(Formula::Var(i)),
                        None => Err(ParseError::UnknownVariable { name, offset }),
                    },
                }
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parse `text` against `vocab`.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vocab,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(f)
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Imp(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(_) => 5,
        Formula::Var(_) | Formula::True | Formula::False => 6,
    }
}

pub(super) struct Printer<'a> {
    pub formula: &'a Formula,
    pub vocab: &'a Vocabulary,
}

impl Printer<'_> {
    fn write(&self, f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let binary = |out: &mut fmt::Formatter<'_>, a: &Formula, b: &Formula, op: &str, right_assoc: bool| {
            let p = prec(f);
            let (lp, rp) = if right_assoc {
                (prec(a) <= p, prec(b) < p)
            } else {
                (prec(a) < p, prec(b) <= p)
            };
            self.wrapped(a, lp, out)?;
            write!(out, " {op} ")?;
            self.wrapped(b, rp, out)
        };
        match f {
            Formula::Var(i) => match self.vocab.names().get(*i) {
                Some(n) if is_identifier(n) => write!(out, "{n}"),
                _ => write!(out, "?{i}"),
            },
            Formula::True => write!(out, "T"),
            Formula::False => write!(out, "F"),
            Formula::Not(a) => {
                write!(out, "~")?;
                self.wrapped(a, prec(a) < 5, out)
            }
            Formula::And(a, b) => binary(out, a, b, "&", false),
            Formula::Or(a, b) => binary(out, a, b, "|", false),
            Formula::Imp(a, b) => binary(out, a, b, "->", true),
            Formula::Iff(a, b) => binary(out, a, b, "<->", false),
        }
    }

    fn wrapped(&self, f: &Formula, paren: bool, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if paren {
            write!(out, "(")?;
            self.write(f, out)?;
            write!(out, ")")
        } else {
            self.write(f, out)
        }
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.formula, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> Vocabulary {
        Vocabulary::new(&["p", "q", "r"]).unwrap()
    }

    #[test]
    fn negation_binds_tighter_than_and() {
        let f = parse_formula("~p & q", &v()).unwrap();
        assert_eq!(f, Formula::and(Formula::not(Formula::var(0)), Formula::var(1)));
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("p -> q -> r", &v()).unwrap();
        let hand = Formula::imp(Formula::var(0), Formula::imp(Formula::var(1), Formula::var(2)));
        assert_eq!(f, hand);
    }

    #[test]
    fn and_or_iff_are_left_associative() {
        let f = parse_formula("p & q & r", &v()).unwrap();
        assert_eq!(
            f,
            Formula::and(Formula::and(Formula::var(0), Formula::var(1)), Formula::var(2))
        );
        let g = parse_formula("p <-> q <-> r", &v()).unwrap();
        assert_eq!(
            g,
            Formula::iff(Formula::iff(Formula::var(0), Formula::var(1)), Formula::var(2))
        );
    }

    #[test]
    fn precedence_chain() {
        let f = parse_formula("p | q & r -> p <-> q", &v()).unwrap();
        let want = Formula::iff(
            Formula::imp(
                Formula::or(Formula::var(0), Formula::and(Formula::var(1), Formula::var(2))),
                Formula::var(0),
            ),
            Formula::var(1),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn truncated_input_reports_offset() {
        let e = parse_formula("p &", &v()).unwrap_err();
        assert_eq!(e.offset(), 3);
        assert!(matches!(e, ParseError::Syntax { .. }));
    }

    #[test]
    fn unknown_variable() {
        let e = parse_formula("p & s", &v()).unwrap_err();
        assert_eq!(
            e,
            ParseError::UnknownVariable {
                name: "s".into(),
                offset: 4
            }
        );
    }

    #[test]
    fn other_errors() {
        assert!(parse_formula("", &v()).is_err());
        assert!(parse_formula("(p", &v()).is_err());
        assert!(parse_formula("p q", &v()).is_err());
        assert!(parse_formula("p # q", &v()).is_err());
        assert!(parse_formula("p - q", &v()).is_err());
    }

    #[test]
    fn constants() {
        assert_eq!(parse_formula("T", &v()).unwrap(), Formula::True);
        assert_eq!(
            parse_formula("~F | p", &v()).unwrap(),
            Formula::or(Formula::not(Formula::False), Formula::var(0))
        );
    }

    #[test]
    fn printer_minimal_parens() {
        let vo = v();
        let cases = [
            ("p -> q -> r", "p -> q -> r"),
            ("(p -> q) -> r", "(p -> q) -> r"),
            ("p & (q | r)", "p & (q | r)"),
            ("~(p & q)", "~(p & q)"),
            ("~~p", "~~p"),
            ("p & (q & r)", "p & (q & r)"),
            ("(p <-> q) <-> r", "p <-> q <-> r"),
        ];
        for (src, want) in cases {
            let f = parse_formula(src, &vo).unwrap();
            assert_eq!(f.display(&vo).to_string(), want, "{src}");
        }
    }
}
