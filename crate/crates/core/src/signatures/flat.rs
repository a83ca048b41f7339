//! The powerset functor as a quotient of the polynomial functor with one
//! n-ary symbol per natural number n: a tuple is identified with its image.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::SignatureError;
use crate::text::{is_ident, split_application};

/// The natural transformation from n-tuples to finite sets: the image of the tuple.
pub fn epsilon_powerset<T: Ord + Clone>(args: &[T]) -> BTreeSet<T> {
    args.iter().cloned().collect()
}

/// A term with variables, used for basic equations between flat terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OpenTerm {
    Var(String),
    App(String, Vec<OpenTerm>),
}

impl OpenTerm {
    /// Variables of a flat term `σ(x₁,…,xₙ)`, or an error if the term is not flat.
    pub fn flat_variables(&self) -> Result<Vec<&str>, SignatureError> {
        match self {
            OpenTerm::Var(v) => Err(SignatureError::NotFlat(format!("bare variable `{v}`"))),
            OpenTerm::App(_, args) => args
                .iter()
                .map(|a| match a {
                    OpenTerm::Var(v) => Ok(v.as_str()),
                    nested => Err(SignatureError::NotFlat(format!("nested application `{nested}` in `{self}`"))),
                })
                .collect(),
        }
    }
}

impl fmt::Display for OpenTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenTerm::Var(v) => write!(f, "{v}"),
            OpenTerm::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for OpenTerm {
    type Err = String;

    /// `f(x,y)` is an application, a bare identifier is a variable, `c()` is a constant.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if !s.contains('(') {
            return if is_ident(s) {
                Ok(OpenTerm::Var(s.to_string()))
            } else {
                Err(format!("invalid variable `{s}`"))
            };
        }
        let (head, args) = split_application(s)?;
        if !is_ident(head) {
            return Err(format!("invalid symbol `{head}`"));
        }
        let args = args.into_iter().map(str::parse).collect::<Result<_, _>>()?;
        Ok(OpenTerm::App(head.to_string(), args))
    }
}

/// Whether the basic equation `lhs = rhs` between flat terms holds in every
/// powerset algebra, i.e. whether both sides have the same set of variables.
pub fn flat_merge_holds(lhs: &OpenTerm, rhs: &OpenTerm) -> Result<bool, SignatureError> {
    let l = lhs.flat_variables()?;
    let r = rhs.flat_variables()?;
    Ok(epsilon_powerset(&l) == epsilon_powerset(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> OpenTerm {
        s.parse().unwrap()
    }

    #[test]
    fn image_of_tuples() {
        assert_eq!(epsilon_powerset(&["a", "b", "a"]), BTreeSet::from(["a", "b"]));
        assert!(epsilon_powerset::<u8>(&[]).is_empty());
        assert_eq!(epsilon_powerset(&['x', 'x', 'x']), BTreeSet::from(['x']));
    }

    #[test]
    fn basic_equations() {
        assert!(flat_merge_holds(&t("σ₂(x,y)"), &t("σ₃(y,x,x)")).unwrap());
        assert!(flat_merge_holds(&t("σ₂(x,x)"), &t("σ₁(x)")).unwrap());
        assert!(!flat_merge_holds(&t("σ₁(x)"), &t("σ₁(y)")).unwrap());
        assert!(flat_merge_holds(&t("σ₀()"), &t("σ₀()")).unwrap());
    }

    #[test]
    fn non_flat_terms_are_rejected() {
        assert!(matches!(flat_merge_holds(&t("f(g(x))"), &t("f(x)")), Err(SignatureError::NotFlat(_))));
        assert!(matches!(flat_merge_holds(&t("f(x)"), &t("x")), Err(SignatureError::NotFlat(_))));
    }

    proptest! {
        #[test]
        fn image_ignores_order_and_duplicates(mut xs in prop::collection::vec(0u8..6, 0..10), dup in 0usize..10, seed in any::<u64>()) {
            let base = epsilon_powerset(&xs);
            if !xs.is_empty() {
                let v = xs[dup % xs.len()];
                xs.push(v);
            }
            // deterministic shuffle
            let n = xs.len();
            for i in 0..n {
                let j = (seed.rotate_left(i as u32) as usize) % n;
                xs.swap(i, j);
            }
            prop_assert_eq!(epsilon_powerset(&xs), base);
        }

        #[test]
        fn merge_criterion_matches_images(l in prop::collection::vec(0u8..4, 0..6), r in prop::collection::vec(0u8..4, 0..6)) {
            let mk = |vs: &[u8]| OpenTerm::App(format!("s{}", vs.len()), vs.iter().map(|v| OpenTerm::Var(format!("x{v}"))).collect());
            let expected = epsilon_powerset(&l) == epsilon_powerset(&r);
            prop_assert_eq!(flat_merge_holds(&mk(&l), &mk(&r)).unwrap(), expected);
        }
    }
}
