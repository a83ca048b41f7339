//! Finitely branching transition systems, read as coalgebras of the finite
//! powerset functor, together with their unfoldings into unordered trees.

mod etree;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::text::{content_lines, is_ident, ParseError};

pub use etree::{canonical_code, extensional_quotient, is_extensional, tree_iso, ETree, TreeCodes};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransitionError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("map covers {found} state(s), source has {expected}")]
    PartialMap { expected: usize, found: usize },
    #[error("map sends state {state} to {target}, outside the target system")]
    IllTypedMap { state: usize, target: usize },
}

/// A finite set of states with a finite successor set for every state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionSystem {
    names: Vec<String>,
    succ: Vec<Vec<usize>>,
    root: Option<usize>,
}

impl TransitionSystem {
    /// Builds a system from successor lists; successor lists are sorted and deduplicated.
    pub fn new(names: Vec<String>, succ: Vec<Vec<usize>>) -> Result<Self, TransitionError> {
        assert_eq!(names.len(), succ.len(), "one successor list per state");
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(TransitionError::DuplicateState(n.clone()));
            }
        }
        let count = names.len();
        let succ = succ
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                match s.iter().find(|&&t| t >= count) {
                    Some(&bad) => Err(TransitionError::StateOutOfRange(bad)),
                    None => Ok(s),
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(TransitionSystem { names, succ, root: None })
    }

    /// Anonymous states named by their index.
    pub fn from_successors(succ: Vec<Vec<usize>>) -> Result<Self, TransitionError> {
        let names = (0..succ.len()).map(|i| format!("s{i}")).collect();
        Self::new(names, succ)
    }

    /// Builds a system from `(state, successors)` pairs by name.
    pub fn from_lists<S: AsRef<str>>(lists: &[(S, &[S])]) -> Result<Self, TransitionError> {
        let names: Vec<String> = lists.iter().map(|(n, _)| n.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let succ = lists
            .iter()
            .map(|(_, targets)| {
                targets
                    .iter()
                    .map(|t| index.get(t.as_ref()).copied().ok_or_else(|| TransitionError::UnknownState(t.as_ref().to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        Self::new(names, succ)
    }

    pub fn with_root(mut self, root: usize) -> Self {
        assert!(root < self.len(), "root out of range");
        self.root = Some(root);
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// The declared root, or the first state.
    pub fn root_or_first(&self) -> Option<usize> {
        self.root.or((!self.is_empty()).then_some(0))
    }

    pub fn succ(&self, state: usize) -> &[usize] {
        &self.succ[state]
    }

    pub fn name(&self, state: usize) -> &str {
        &self.names[state]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state(&self, name: &str) -> Result<usize, TransitionError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TransitionError::UnknownState(name.to_string()))
    }

    pub fn check_state(&self, state: usize) -> Result<(), TransitionError> {
        if state < self.len() {
            Ok(())
        } else {
            Err(TransitionError::StateOutOfRange(state))
        }
    }

    pub fn states(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// States reachable from `from` (including it), in ascending order.
    pub fn reachable(&self, from: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(q) = stack.pop() {
            for &r in &self.succ[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        (0..self.len()).filter(|&q| seen[q]).collect()
    }

    /// Disjoint union; states of `other` are shifted by `self.len()`. Names are tagged
    /// `0:name` and `1:name`.
    pub fn disjoint_union(&self, other: &TransitionSystem) -> (TransitionSystem, usize) {
        let offset = self.len();
        let names = self
            .names
            .iter()
            .map(|n| format!("0:{n}"))
            .chain(other.names.iter().map(|n| format!("1:{n}")))
            .collect();
        let succ = self
            .succ
            .iter()
            .cloned()
            .chain(other.succ.iter().map(|s| s.iter().map(|&t| t + offset).collect()))
            .collect();
        (TransitionSystem { names, succ, root: self.root }, offset)
    }

    /// Parses `state: succ1 succ2 ...` lines with an optional `root state` line.
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut names = Vec::new();
        let mut raw: Vec<(usize, Vec<String>)> = Vec::new();
        let mut index = HashMap::new();
        let mut root = None;
        for (line, content) in content_lines(input) {
            if let Some(rest) = content.strip_prefix("root ") {
                if root.is_some() {
                    return Err(ParseError::new(line, "duplicate `root` line"));
                }
                root = Some((line, rest.trim().to_string()));
                continue;
            }
            let (state, targets) = content
                .split_once(':')
                .ok_or_else(|| ParseError::new(line, format!("expected `state: successors`, found `{content}`")))?;
            let state = state.trim();
            if !is_ident(state) {
                return Err(ParseError::new(line, format!("invalid state name `{state}`")));
            }
            if index.insert(state.to_string(), names.len()).is_some() {
                return Err(ParseError::new(line, format!("duplicate state `{state}`")));
            }
            names.push(state.to_string());
            raw.push((line, targets.split_whitespace().map(str::to_string).collect()));
        }
        let mut succ = Vec::with_capacity(raw.len());
        for (line, targets) in raw {
            let ids = targets
                .iter()
                .map(|t| index.get(t).copied().ok_or_else(|| ParseError::new(line, format!("unknown state `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            succ.push(ids);
        }
        let mut ts = TransitionSystem::new(names, succ).expect("names checked above");
        if let Some((line, r)) = root {
            let id = *index.get(&r).ok_or_else(|| ParseError::new(line, format!("unknown root state `{r}`")))?;
            ts.root = Some(id);
        }
        Ok(ts)
    }
}

impl fmt::Display for TransitionSystem {
    /// Same format as [`TransitionSystem::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, name) in self.names.iter().enumerate() {
            write!(f, "{name}:")?;
            for &r in &self.succ[q] {
                write!(f, " {}", self.names[r])?;
            }
            writeln!(f)?;
        }
        if let Some(r) = self.root {
            writeln!(f, "root {}", self.names[r])?;
        }
        Ok(())
    }
}

/// Behaviour tree of `q` cut at depth `n`. Shared successors produce shared subtrees,
/// so the result is a DAG of `|states| * (n + 1)` allocations at most.
pub fn unfold(ts: &TransitionSystem, q: usize, n: usize) -> Result<ETree, TransitionError> {
    ts.check_state(q)?;
    let mut memo: HashMap<(usize, usize), ETree> = HashMap::new();
    Ok(unfold_memo(ts, q, n, &mut memo))
}

fn unfold_memo(ts: &TransitionSystem, q: usize, n: usize, memo: &mut HashMap<(usize, usize), ETree>) -> ETree {
    if n == 0 {
        return ETree::leaf();
    }
    if let Some(t) = memo.get(&(q, n)) {
        return t.clone();
    }
    let kids = ts.succ(q).iter().map(|&r| unfold_memo(ts, r, n - 1, memo)).collect();
    let t = ETree::node(kids);
    memo.insert((q, n), t.clone());
    t
}

/// Checks the coalgebra-homomorphism square: direct image of successors under `f`
/// equals the successors of the image.
pub fn is_homomorphism(src: &TransitionSystem, dst: &TransitionSystem, f: &[usize]) -> Result<bool, TransitionError> {
    if f.len() != src.len() {
        return Err(TransitionError::PartialMap {
            expected: src.len(),
            found: f.len(),
        });
    }
    if let Some((state, &target)) = f.iter().enumerate().find(|(_, &t)| t >= dst.len()) {
        return Err(TransitionError::IllTypedMap { state, target });
    }
    Ok(src.states().all(|a| {
        let image: BTreeSet<usize> = src.succ(a).iter().map(|&r| f[r]).collect();
        image.iter().copied().eq(dst.succ(f[a]).iter().copied())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn omega_prime() -> TransitionSystem {
        TransitionSystem::parse("c: w c\nw: w\nroot c\n").unwrap()
    }

    #[test]
    fn self_loop_unfolds_to_a_path() {
        let ts = TransitionSystem::parse("q: q").unwrap();
        assert!(tree_iso(&unfold(&ts, 0, 3).unwrap(), &ETree::path(3)));
        assert!(tree_iso(&unfold(&ts, 0, 0).unwrap(), &ETree::leaf()));
    }

    #[test]
    fn staircase_unfolding() {
        let ts = omega_prime();
        let t = unfold(&ts, 0, 2).unwrap();
        let expected = ETree::node(vec![ETree::path(1), ETree::node(vec![ETree::leaf(), ETree::leaf()])]);
        assert!(tree_iso(&t, &expected));
        let e = extensional_quotient(&t);
        assert!(tree_iso(&e, &ETree::path(2)));
        assert_eq!(canonical_code(&e), canonical_code(&extensional_quotient(&expected)));
    }

    #[test]
    fn deadlocks_unfold_to_leaves() {
        let ts = TransitionSystem::parse("d:\n").unwrap();
        for n in 0..5 {
            assert!(unfold(&ts, 0, n).unwrap().is_leaf());
        }
        assert_eq!(unfold(&ts, 3, 1).unwrap_err(), TransitionError::StateOutOfRange(3));
    }

    #[test]
    fn homomorphisms() {
        let src = omega_prime();
        let omega = TransitionSystem::parse("q: q").unwrap();
        assert!(is_homomorphism(&src, &omega, &[0, 0]).unwrap());
        assert!(is_homomorphism(&src, &src, &[0, 1]).unwrap());
        let dead = TransitionSystem::parse("q: q\nd:").unwrap();
        assert!(!is_homomorphism(&dead, &omega, &[0, 0]).unwrap());
        assert_eq!(
            is_homomorphism(&src, &omega, &[0]),
            Err(TransitionError::PartialMap { expected: 2, found: 1 })
        );
        assert_eq!(
            is_homomorphism(&src, &omega, &[0, 1]),
            Err(TransitionError::IllTypedMap { state: 1, target: 1 })
        );
    }

    #[test]
    fn parsing() {
        let ts = omega_prime();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts.root(), Some(0));
        assert_eq!(ts.succ(0), &[0, 1]);
        assert_eq!(TransitionSystem::parse(&ts.to_string()).unwrap(), ts);
        let e = TransitionSystem::parse("a: b\nb: zz\n").unwrap_err();
        assert_eq!((e.line, e.message.as_str()), (2, "unknown state `zz`"));
        assert_eq!(TransitionSystem::parse("a b\n").unwrap_err().line, 1);
        assert_eq!(TransitionSystem::parse("a:\na:\n").unwrap_err().line, 2);
        assert_eq!(TransitionSystem::parse("a:\nroot x\n").unwrap_err().line, 2);
    }

    #[test]
    fn disjoint_union_shifts_states() {
        let a = TransitionSystem::parse("q: q").unwrap();
        let (u, off) = a.disjoint_union(&omega_prime());
        assert_eq!(off, 1);
        assert_eq!(u.len(), 3);
        assert_eq!(u.succ(1), &[1, 2]);
        assert_eq!(u.name(2), "1:w");
    }

    fn arb_system(max: usize) -> impl Strategy<Value = TransitionSystem> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(0..n, 0..=n), n)
                .prop_map(|succ| TransitionSystem::from_successors(succ).unwrap())
        })
    }

    proptest! {
        #[test]
        fn truncated_unfoldings_agree(ts in arb_system(5), n in 0usize..7, m in 0usize..7, q in 0usize..5) {
            let q = q % ts.len();
            let (m, n) = (m.min(n), n.max(m));
            let deep = unfold(&ts, q, n).unwrap().cut(m);
            let shallow = unfold(&ts, q, m).unwrap();
            prop_assert!(tree_iso(&extensional_quotient(&deep), &extensional_quotient(&shallow)));
        }
    }
}
