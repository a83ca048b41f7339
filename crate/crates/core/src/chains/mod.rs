//! Initial and terminal chains of finitary functors at finite stages.
//!
//! The initial chain of the powerset functor is the cumulative hierarchy of
//! hereditarily finite sets; its terminal chain starts at a one-element set and
//! projects each stage onto the previous one. For a polynomial functor the initial
//! chain enumerates well-founded terms by height.

mod hf;

use std::collections::HashMap;

use thiserror::Error;

use crate::signatures::{Signature, Term};
use crate::transition::{is_extensional, ETree};

pub use hf::HFSet;

pub const MAX_INITIAL_POWERSET_STAGE: usize = 5;
pub const MAX_TERMINAL_POWERSET_STAGE: usize = 4;
pub const MAX_STAGE_ELEMENTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("stage {requested} exceeds the supported maximum {max}")]
    StageTooLarge { requested: usize, max: usize },
    #[error("stage {stage} would hold {size} elements (limit {MAX_STAGE_ELEMENTS})")]
    GuardExceeded { stage: usize, size: String },
    #[error("tree is not extensional")]
    NotExtensional,
}

/// One stage of a chain.
///
/// `link` is the connecting map. In an initial chain it is the inclusion of the
/// previous stage into this one (`link[k]` is the position here of element `k`
/// of the previous stage). In a terminal chain it is the projection of this
/// stage onto the previous one (`link[k]` is the position there of the image of
/// element `k` here). Stage 0 has an empty link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStage<T> {
    pub index: usize,
    pub carrier: Vec<T>,
    pub link: Vec<usize>,
}

impl<T> ChainStage<T> {
    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }
}

pub fn stage_sizes<T>(stages: &[ChainStage<T>]) -> Vec<usize> {
    stages.iter().map(ChainStage::len).collect()
}

/// `W_0 = ∅`, `W_{i+1}` = all subsets of `W_i`, for stages `0..=n`.
pub fn initial_chain_powerset(n: usize) -> Result<Vec<ChainStage<HFSet>>, ChainError> {
    if n > MAX_INITIAL_POWERSET_STAGE {
        return Err(ChainError::StageTooLarge {
            requested: n,
            max: MAX_INITIAL_POWERSET_STAGE,
        });
    }
    let mut stages: Vec<ChainStage<HFSet>> = vec![ChainStage {
        index: 0,
        carrier: Vec::new(),
        link: Vec::new(),
    }];
    for i in 1..=n {
        let prev = &stages[i - 1].carrier;
        let m = prev.len();
        let mut carrier: Vec<HFSet> = (0u64..1 << m)
            .map(|mask| {
                // prev is sorted, so picking in index order keeps elements sorted
                HFSet::from_sorted_unique((0..m).filter(|k| mask >> k & 1 == 1).map(|k| prev[k].clone()).collect())
            })
            .collect();
        carrier.sort();
        let link = prev
            .iter()
            .map(|x| carrier.binary_search(x).expect("cumulative hierarchy is increasing"))
            .collect();
        stages.push(ChainStage { index: i, carrier, link });
    }
    Ok(stages)
}

/// `V_0 = 1`, `V_{i+1}` = all subsets of `V_i`, for stages `0..=n`.
///
/// An element of `V_{i+1}` is stored as the bitmask of the positions of its members
/// in `V_i`, and stage `i + 1` lists all masks in increasing order, so an element's
/// position equals its mask. `V_0` holds the single code `0`.
pub fn terminal_chain_powerset(n: usize) -> Result<Vec<ChainStage<u64>>, ChainError> {
    if n > MAX_TERMINAL_POWERSET_STAGE {
        return Err(ChainError::StageTooLarge {
            requested: n,
            max: MAX_TERMINAL_POWERSET_STAGE,
        });
    }
    let mut stages = vec![ChainStage {
        index: 0,
        carrier: vec![0u64],
        link: Vec::new(),
    }];
    for i in 1..=n {
        let prev_len = stages[i - 1].len();
        let carrier: Vec<u64> = (0u64..1 << prev_len).collect();
        let link = if i == 1 {
            vec![0; carrier.len()]
        } else {
            let down = &stages[i - 1].link;
            carrier
                .iter()
                .map(|&mask| {
                    (0..prev_len)
                        .filter(|k| mask >> k & 1 == 1)
                        .fold(0usize, |image, k| image | 1 << down[k])
                })
                .collect()
        };
        stages.push(ChainStage { index: i, carrier, link });
    }
    Ok(stages)
}

/// Terms over `sig` of height `< i` at stage `i`, for stages `0..=n`.
pub fn initial_chain_polynomial(sig: &Signature, n: usize) -> Result<Vec<ChainStage<Term>>, ChainError> {
    // sizes first, so the guard trips before anything is enumerated
    let mut size: u128 = 0;
    for stage in 1..=n {
        let mut next: u128 = 0;
        for (_, arity) in sig.symbols() {
            let term = u32::try_from(arity).ok().and_then(|a| size.checked_pow(a));
            next = term.and_then(|t| next.checked_add(t)).unwrap_or(u128::MAX);
        }
        if next > u128::from(MAX_STAGE_ELEMENTS) {
            let size = if next == u128::MAX { "more than 2^128".to_string() } else { next.to_string() };
            return Err(ChainError::GuardExceeded { stage, size });
        }
        size = next;
    }

    let mut stages: Vec<ChainStage<Term>> = vec![ChainStage {
        index: 0,
        carrier: Vec::new(),
        link: Vec::new(),
    }];
    for i in 1..=n {
        let prev = &stages[i - 1].carrier;
        let mut carrier = Vec::new();
        for (symbol, arity) in sig.symbols() {
            for tuple in tuples(prev.len(), arity) {
                let children = tuple.iter().map(|&k| prev[k].clone()).collect();
                carrier.push(Term::from_parts(symbol.to_string(), children));
            }
        }
        let position: HashMap<&Term, usize> = carrier.iter().enumerate().map(|(k, t)| (t, k)).collect();
        let link = prev.iter().map(|t| position[t]).collect();
        stages.push(ChainStage { index: i, carrier, link });
    }
    Ok(stages)
}

/// All `arity`-tuples over `0..base` in lexicographic order.
fn tuples(base: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base).map(move |k| {
                    let mut t = t.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    out
}

/// The set a well-founded extensional tree denotes: a node is the set of what its children denote.
pub fn tree_to_hf(t: &ETree) -> Result<HFSet, ChainError> {
    if !is_extensional(t) {
        return Err(ChainError::NotExtensional);
    }
    Ok(tree_to_hf_unchecked(t))
}

fn tree_to_hf_unchecked(t: &ETree) -> HFSet {
    HFSet::from_elements(t.children().iter().map(tree_to_hf_unchecked))
}

/// Inverse of [`tree_to_hf`]: the membership tree of `x`.
pub fn hf_to_tree(x: &HFSet) -> ETree {
    ETree::node(x.elements().iter().map(hf_to_tree).collect())
}

/// The node whose children are the given trees, with isomorphic duplicates merged.
pub fn tupling(children: &[ETree]) -> ETree {
    crate::transition::extensional_quotient(&ETree::node(children.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::tree_iso;

    #[test]
    fn powerset_initial_chain_sizes() {
        let stages = initial_chain_powerset(3).unwrap();
        assert_eq!(stage_sizes(&stages), vec![0, 1, 2, 4]);
        assert_eq!(stage_sizes(&initial_chain_powerset(0).unwrap()), vec![0]);
        assert_eq!(
            initial_chain_powerset(6).unwrap_err(),
            ChainError::StageTooLarge { requested: 6, max: 5 }
        );
        let codes: Vec<&str> = stages[3].carrier.iter().map(HFSet::code).collect();
        assert_eq!(codes, vec!["{}", "{{}}", "{{{}}}", "{{},{{}}}"]);
    }

    #[test]
    fn stage_elements_have_bounded_rank() {
        let stages = initial_chain_powerset(4).unwrap();
        for stage in &stages {
            assert!(stage.carrier.iter().all(|x| x.rank() < stage.index));
        }
        // inclusions are identities on elements
        for w in stages.windows(2) {
            for (k, x) in w[0].carrier.iter().enumerate() {
                assert_eq!(&w[1].carrier[w[1].link[k]], x);
            }
        }
    }

    #[test]
    fn powerset_terminal_chain() {
        let stages = terminal_chain_powerset(3).unwrap();
        assert_eq!(stage_sizes(&stages), vec![1, 2, 4, 16]);
        assert_eq!(stages[1].link, vec![0, 0]);
        // V_2 -> V_1: {} -> {}, {a} -> {•}, {b} -> {•}, {a,b} -> {•}
        assert_eq!(stages[2].link, vec![0, 1, 1, 1]);
        for w in stages.windows(2) {
            let mut hit = vec![false; w[0].len()];
            for &k in &w[1].link {
                hit[k] = true;
            }
            assert!(hit.into_iter().all(|h| h), "connecting maps are surjective");
        }
        assert_eq!(stage_sizes(&terminal_chain_powerset(0).unwrap()), vec![1]);
        assert!(terminal_chain_powerset(5).is_err());
    }

    #[test]
    fn polynomial_chains() {
        let nat = Signature::from_symbols([("c", 0), ("s", 1)]).unwrap();
        assert_eq!(stage_sizes(&initial_chain_polynomial(&nat, 4).unwrap()), vec![0, 1, 2, 3, 4]);
        assert_eq!(stage_sizes(&initial_chain_polynomial(&nat, 3).unwrap()), vec![0, 1, 2, 3]);
        let stages = initial_chain_polynomial(&nat, 3).unwrap();
        let rendered: Vec<String> = stages[3].carrier.iter().map(Term::to_string).collect();
        assert_eq!(rendered, vec!["c", "s(c)", "s(s(c))"]);
        assert!(stages[3].carrier.iter().all(|t| t.height() < 3));

        let unit = Signature::from_symbols([("c", 0)]).unwrap();
        assert_eq!(stage_sizes(&initial_chain_polynomial(&unit, 5).unwrap()), vec![0, 1, 1, 1, 1, 1]);
        let binary = Signature::from_symbols([("b", 2)]).unwrap();
        assert_eq!(stage_sizes(&initial_chain_polynomial(&binary, 6).unwrap()), vec![0; 7]);

        let trees = Signature::from_symbols([("c", 0), ("b", 2)]).unwrap();
        let sizes = stage_sizes(&initial_chain_polynomial(&trees, 5).unwrap());
        for w in sizes.windows(2) {
            assert_eq!(w[1], 1 + w[0] * w[0]);
        }
        assert!(matches!(
            initial_chain_polynomial(&trees, 7),
            Err(ChainError::GuardExceeded { stage: 7, .. })
        ));
    }

    #[test]
    fn trees_and_sets() {
        assert_eq!(tree_to_hf(&ETree::leaf()).unwrap(), HFSet::empty());
        assert_eq!(tree_to_hf(&ETree::path(1)).unwrap().code(), "{{}}");
        let dup = ETree::node(vec![ETree::leaf(), ETree::leaf()]);
        assert_eq!(tree_to_hf(&dup), Err(ChainError::NotExtensional));
        let x: HFSet = "{{},{{}},{{{}}}}".parse().unwrap();
        assert_eq!(tree_to_hf(&hf_to_tree(&x)).unwrap(), x);
        let s = vec![ETree::path(2), ETree::leaf(), ETree::path(2)];
        let t = tupling(&s);
        assert!(tree_iso(&t, &ETree::node(vec![ETree::path(2), ETree::leaf()])));
    }
}
