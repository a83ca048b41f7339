//! Barr equivalence: two states are equivalent when their behaviour trees, cut at
//! every finite level, have isomorphic extensional quotients.
//!
//! On finitely branching systems this coincides with bisimilarity. For a finite
//! system the comparison only needs levels up to the product of the two reachable
//! state counts, which makes [`barr_equiv`] a complete decision at that bound.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::bisim::{bisimilarity, Relation};
use crate::exec::Execution;
use crate::random::{all_systems_up_to, instance_rng, random_system};
use crate::transition::{unfold, TransitionError, TransitionSystem, TreeCodes};

pub const MAX_HARNESS_STATES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BarrError {
    #[error(transparent)]
    Transition(#[from] TransitionError),
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("max_states {0} outside 1..={MAX_HARNESS_STATES}")]
    TooManyStates(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrVerdict {
    /// No level `n <= bound` separates the two states.
    EquivalentUpTo { bound: usize },
    /// `level` is the least cut depth at which the extensional quotients differ.
    Distinguished { level: usize },
}

impl BarrVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, BarrVerdict::EquivalentUpTo { .. })
    }
}

impl fmt::Display for BarrVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarrVerdict::EquivalentUpTo { bound } => write!(f, "equivalent up to level {bound}"),
            BarrVerdict::Distinguished { level } => write!(f, "distinguished at level {level}"),
        }
    }
}

/// `|reach(a)| * |reach(b)|`, the level beyond which no new distinction can appear.
pub fn complete_bound(ts: &TransitionSystem, a: usize, b: usize) -> Result<usize, TransitionError> {
    ts.check_state(a)?;
    ts.check_state(b)?;
    Ok((ts.reachable(a).len() * ts.reachable(b).len()).max(1))
}

pub fn barr_equiv(ts: &TransitionSystem, a: usize, b: usize, bound: usize) -> Result<BarrVerdict, BarrError> {
    ts.check_state(a)?;
    ts.check_state(b)?;
    if bound == 0 {
        return Err(BarrError::ZeroBound);
    }
    let mut codes = TreeCodes::new();
    for level in 1..=bound {
        let ca = codes.quotient_code_of(&unfold(ts, a, level)?);
        let cb = codes.quotient_code_of(&unfold(ts, b, level)?);
        if ca != cb {
            return Ok(BarrVerdict::Distinguished { level });
        }
    }
    Ok(BarrVerdict::EquivalentUpTo { bound })
}

/// Pairs whose level-`n` cuts have isomorphic extensional quotients.
pub fn cut_relation(ts: &TransitionSystem, n: usize) -> Relation {
    let mut codes = TreeCodes::new();
    let per_state: Vec<u32> = ts
        .states()
        .map(|q| codes.quotient_code_of(&unfold(ts, q, n).expect("state in range")))
        .collect();
    Relation::from_pairs(
        ts.len(),
        ts.states()
            .flat_map(|a| ts.states().map(move |b| (a, b)))
            .filter(|&(a, b)| per_state[a] == per_state[b]),
    )
    .expect("states in range")
}

/// Outcome of comparing the two deciders on one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceReport {
    pub id: usize,
    pub states: usize,
    pub pairs: usize,
    /// State pairs on which Barr equivalence and bisimilarity disagree.
    pub disagreements: Vec<(usize, usize)>,
}

impl InstanceReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessReport {
    pub instances: Vec<InstanceReport>,
}

impl HarnessReport {
    pub fn total(&self) -> usize {
        self.instances.len()
    }

    pub fn agreements(&self) -> usize {
        self.instances.iter().filter(|i| i.agrees()).count()
    }

    pub fn disagreements(&self) -> usize {
        self.total() - self.agreements()
    }

    pub fn summary(&self) -> String {
        format!("{}/{} systems, {} disagreements", self.agreements(), self.total(), self.disagreements())
    }

    /// One `id verdict` line per instance, then the summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in &self.instances {
            if i.agrees() {
                let _ = writeln!(out, "{} agree", i.id);
            } else {
                let pairs: Vec<String> = i.disagreements.iter().map(|(a, b)| format!("({a},{b})")).collect();
                let _ = writeln!(out, "{} disagree {}", i.id, pairs.join(" "));
            }
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}

/// Compares Barr equivalence at the complete bound with bisimilarity on every state pair.
pub fn compare_on(id: usize, ts: &TransitionSystem) -> InstanceReport {
    let bisim = bisimilarity(ts);
    let mut disagreements = Vec::new();
    for a in ts.states() {
        for b in ts.states() {
            let bound = complete_bound(ts, a, b).expect("states in range");
            let barr = barr_equiv(ts, a, b, bound).expect("valid query").is_equivalent();
            if barr != bisim.same_block(a, b) {
                disagreements.push((a, b));
            }
        }
    }
    InstanceReport {
        id,
        states: ts.len(),
        pairs: ts.len() * ts.len(),
        disagreements,
    }
}

/// `count` seeded random systems with `1..=max_states` states and edge probability 1/2.
pub fn barr_vs_bisim_harness(seed: u64, count: usize, max_states: usize, exec: Execution) -> Result<HarnessReport, BarrError> {
    if max_states == 0 || max_states > MAX_HARNESS_STATES {
        return Err(BarrError::TooManyStates(max_states));
    }
    let instances = exec.map_range(0..count, |i| {
        let ts = random_system(&mut instance_rng(seed, i), max_states);
        compare_on(i, &ts)
    });
    Ok(HarnessReport { instances })
}

/// Every system with `1..=max_states` states.
pub fn barr_vs_bisim_exhaustive(max_states: usize, exec: Execution) -> Result<HarnessReport, BarrError> {
    if max_states == 0 || max_states > 3 {
        return Err(BarrError::TooManyStates(max_states));
    }
    let systems: Vec<TransitionSystem> = all_systems_up_to(max_states).collect();
    let instances = exec.map_range(0..systems.len(), |i| compare_on(i, &systems[i]));
    Ok(HarnessReport { instances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::phi_power;
    use crate::random::all_systems;

    #[test]
    fn omega_and_staircase() {
        let (ts, off) = TransitionSystem::parse("q: q")
            .unwrap()
            .disjoint_union(&TransitionSystem::parse("c: w c\nw: w").unwrap());
        assert_eq!(barr_equiv(&ts, 0, off, 10).unwrap(), BarrVerdict::EquivalentUpTo { bound: 10 });
    }

    #[test]
    fn loop_versus_deadlock() {
        let ts = TransitionSystem::parse("q: q\nd:").unwrap();
        assert_eq!(barr_equiv(&ts, 0, 1, 5).unwrap(), BarrVerdict::Distinguished { level: 1 });
        assert_eq!(barr_equiv(&ts, 0, 1, 0), Err(BarrError::ZeroBound));
        assert!(matches!(barr_equiv(&ts, 0, 9, 3), Err(BarrError::Transition(_))));
    }

    #[test]
    fn paths_of_different_length() {
        let ts = TransitionSystem::parse("a0: a1\na1: a2\na2:\nb0: b1\nb1: b2\nb2: b3\nb3:").unwrap();
        assert_eq!(barr_equiv(&ts, 0, 3, 5).unwrap(), BarrVerdict::Distinguished { level: 3 });
    }

    #[test]
    fn larger_bounds_keep_the_witness() {
        let ts = TransitionSystem::parse("a0: a1\na1: a2\na2:\nb0: b1\nb1: b2\nb2: b3\nb3:").unwrap();
        for bound in 3..10 {
            assert_eq!(barr_equiv(&ts, 0, 3, bound).unwrap(), BarrVerdict::Distinguished { level: 3 });
        }
        assert!(barr_equiv(&ts, 0, 3, 2).unwrap().is_equivalent());
    }

    #[test]
    fn single_tiny_instance() {
        let report = barr_vs_bisim_harness(7, 1, 1, Execution::Sequential).unwrap();
        assert_eq!(report.summary(), "1/1 systems, 0 disagreements");
        assert!(barr_vs_bisim_harness(1, 1, 11, Execution::Sequential).is_err());
    }

    #[test]
    fn report_format() {
        let report = HarnessReport {
            instances: vec![
                InstanceReport { id: 0, states: 1, pairs: 1, disagreements: vec![] },
                InstanceReport { id: 1, states: 2, pairs: 4, disagreements: vec![(0, 1)] },
            ],
        };
        assert_eq!(report.to_text(), "0 agree\n1 disagree (0,1)\n1/2 systems, 1 disagreements\n");
    }

    #[test]
    fn cuts_match_phi_powers_on_two_state_systems() {
        for ts in all_systems(2) {
            for n in 0..=4 {
                assert_eq!(cut_relation(&ts, n), phi_power(&ts, &Relation::total(2), n));
            }
        }
    }
}
