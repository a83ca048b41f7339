//! Finitary signatures, well-founded terms, and regular (rational) trees.
//!
//! A [`Signature`] fixes the operation symbols and their arities. Well-founded
//! [`Term`]s are the elements of the initial algebra of the polynomial functor
//! of a signature; a [`RegularTree`] is a finite pointed coalgebra presenting
//! a possibly infinite tree with parameter leaves.

mod flat;
mod regular;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::text::{content_lines, is_ident, ParseError};

pub use flat::{epsilon_powerset, flat_merge_holds, OpenTerm};
pub use regular::{agree_to_depth, regular_equal, unfold_regular, Arg, Definition, Node, Operand, PartialTerm, RegularTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate definition of state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("trees are over different signatures")]
    SignatureMismatch,
    #[error("not a flat term: {0}")]
    NotFlat(String),
}

/// A finite set of operation symbols with finite arities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_symbols<I, S>(symbols: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut sig = Signature::new();
        for (name, arity) in symbols {
            sig.add(name, arity)?;
        }
        Ok(sig)
    }

    pub fn add(&mut self, name: impl Into<String>, arity: usize) -> Result<(), SignatureError> {
        let name = name.into();
        if self.symbols.contains_key(&name) {
            return Err(SignatureError::DuplicateSymbol(name));
        }
        self.symbols.insert(name, arity);
        Ok(())
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.symbols.get(symbol).copied()
    }

    /// Returns the arity of `symbol` after checking that `found` arguments fit it.
    pub fn check(&self, symbol: &str, found: usize) -> Result<(), SignatureError> {
        match self.arity(symbol) {
            None => Err(SignatureError::UnknownSymbol(symbol.to_string())),
            Some(expected) if expected != found => Err(SignatureError::ArityMismatch {
                symbol: symbol.to_string(),
                expected,
                found,
            }),
            Some(_) => Ok(()),
        }
    }

    /// Symbols in name order.
    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.symbols.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Parses the `name/arity` per line format.
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut sig = Signature::new();
        for (line, content) in content_lines(input) {
            let (name, arity) = content
                .rsplit_once('/')
                .ok_or_else(|| ParseError::new(line, format!("expected `name/arity`, found `{content}`")))?;
            let name = name.trim();
            if !is_ident(name) {
                return Err(ParseError::new(line, format!("invalid symbol name `{name}`")));
            }
            let arity: usize = arity
                .trim()
                .parse()
                .map_err(|_| ParseError::new(line, format!("invalid arity `{}`", arity.trim())))?;
            sig.add(name, arity).map_err(|e| ParseError::new(line, e.to_string()))?;
        }
        Ok(sig)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, arity) in self.symbols() {
            writeln!(f, "{name}/{arity}")?;
        }
        Ok(())
    }
}

/// A well-founded tree over a signature: every node's child count equals the arity of its label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    label: String,
    children: Vec<Term>,
}

impl Term {
    pub fn new(sig: &Signature, label: impl Into<String>, children: Vec<Term>) -> Result<Self, SignatureError> {
        let label = label.into();
        sig.check(&label, children.len())?;
        Ok(Term { label, children })
    }

    /// Builds a term without consulting a signature. Callers guarantee arity discipline.
    pub(crate) fn from_parts(label: String, children: Vec<Term>) -> Self {
        Term { label, children }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn children(&self) -> &[Term] {
        &self.children
    }

    /// Length of the longest root-to-leaf path; a constant has height 0.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Term::size).sum::<usize>()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.children.is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signature_lines() {
        let sig = Signature::parse("b/2\n# comment\nc/0\n\ns / 1\n").unwrap();
        assert_eq!(sig.arity("b"), Some(2));
        assert_eq!(sig.arity("c"), Some(0));
        assert_eq!(sig.arity("s"), Some(1));
        assert_eq!(sig.len(), 3);
        assert_eq!(Signature::parse(&sig.to_string()).unwrap(), sig);
    }

    #[test]
    fn signature_errors_name_the_line() {
        let err = Signature::parse("b/2\nb/1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("duplicate"));
        assert_eq!(Signature::parse("c/x").unwrap_err().line, 1);
        assert_eq!(Signature::parse("c\n").unwrap_err().line, 1);
        assert!(Signature::parse("c/-1").is_err());
    }

    #[test]
    fn terms_respect_arity() {
        let sig = Signature::from_symbols([("c", 0), ("s", 1)]).unwrap();
        let c = Term::new(&sig, "c", vec![]).unwrap();
        let sc = Term::new(&sig, "s", vec![c.clone()]).unwrap();
        assert_eq!(sc.to_string(), "s(c)");
        assert_eq!(sc.height(), 1);
        assert_eq!(sc.size(), 2);
        assert_eq!(
            Term::new(&sig, "s", vec![]),
            Err(SignatureError::ArityMismatch {
                symbol: "s".into(),
                expected: 1,
                found: 0
            })
        );
        assert!(matches!(Term::new(&sig, "q", vec![]), Err(SignatureError::UnknownSymbol(_))));
    }
}
