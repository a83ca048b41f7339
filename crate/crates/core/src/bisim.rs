//! Relational refinement, bisimilarity and minimisation of finite systems.
//!
//! `Φ(R)` relates `a` and `b` when every successor of `a` is `R`-related to some
//! successor of `b` and every successor of `b` is `R`-related from some successor
//! of `a`. Bisimulations are the post-fixed points of `Φ`; bisimilarity is its
//! greatest fixed point, computed here by splitter-based partition refinement and,
//! independently, by iterating `Φ` from the total relation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::chains::HFSet;
use crate::text::{content_lines, ParseError};
use crate::transition::{TransitionError, TransitionSystem};

/// A binary relation on the states `0..n` of one system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { n, bits: vec![false; n * n] }
    }

    pub fn total(n: usize) -> Self {
        Relation { n, bits: vec![true; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for a in 0..n {
            r.insert(a, a);
        }
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self, TransitionError> {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(TransitionError::StateOutOfRange(x));
                }
            }
            r.insert(a, b);
        }
        Ok(r)
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = true;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(move |(i, _)| (i / n, i % n))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        assert_eq!(self.n, other.n, "relations over different carriers");
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "relations over different carriers");
        Relation {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| a && b).collect(),
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "relations over different carriers");
        Relation {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| a || b).collect(),
        }
    }

    pub fn is_equivalence(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| self.contains(a, a))
            && self.pairs().all(|(a, b)| self.contains(b, a))
            && self.pairs().all(|(a, b)| (0..n).all(|c| !self.contains(b, c) || self.contains(a, c)))
    }

    /// Reads `a b` lines naming states of `ts`.
    pub fn parse(ts: &TransitionSystem, input: &str) -> Result<Self, ParseError> {
        let mut r = Self::empty(ts.len());
        for (line, content) in content_lines(input) {
            let parts: Vec<&str> = content.split_whitespace().collect();
            let [a, b] = parts.as_slice() else {
                return Err(ParseError::new(line, format!("expected `a b`, found `{content}`")));
            };
            let a = ts.state(a).map_err(|e| ParseError::new(line, e.to_string()))?;
            let b = ts.state(b).map_err(|e| ParseError::new(line, e.to_string()))?;
            r.insert(a, b);
        }
        Ok(r)
    }

    pub fn to_text(&self, ts: &TransitionSystem) -> String {
        let mut out = String::new();
        for (a, b) in self.pairs() {
            let _ = writeln!(out, "{} {}", ts.name(a), ts.name(b));
        }
        out
    }
}

/// A partition of `0..n` into nonempty blocks, numbered by their smallest state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Renumbers an arbitrary block labelling so that block ids follow smallest members.
    pub fn from_labels<L: Eq + std::hash::Hash + Clone>(labels: &[L]) -> Self {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let block_of = labels
            .iter()
            .enumerate()
            .map(|(q, l)| {
                let id = *ids.entry(l.clone()).or_insert_with(|| {
                    blocks.push(Vec::new());
                    blocks.len() - 1
                });
                blocks[id].push(q);
                id
            })
            .collect();
        Partition { block_of, blocks }
    }

    /// Classes of an equivalence relation.
    pub fn from_equivalence(r: &Relation) -> Self {
        debug_assert!(r.is_equivalence());
        let labels: Vec<usize> = (0..r.n).map(|a| (0..r.n).find(|&b| r.contains(a, b)).unwrap_or(a)).collect();
        Self::from_labels(&labels)
    }

    pub fn block(&self, q: usize) -> usize {
        self.block_of[q]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn to_relation(&self) -> Relation {
        let n = self.block_of.len();
        let mut r = Relation::empty(n);
        for block in &self.blocks {
            for &a in block {
                for &b in block {
                    r.insert(a, b);
                }
            }
        }
        r
    }

    /// `bK: s1 s2 ...` per block.
    pub fn to_text(&self, ts: &TransitionSystem) -> String {
        let mut out = String::new();
        for (k, block) in self.blocks.iter().enumerate() {
            let _ = write!(out, "b{k}:");
            for &q in block {
                let _ = write!(out, " {}", ts.name(q));
            }
            out.push('\n');
        }
        out
    }

    /// Reads `label: s1 s2 ...` lines; every state of `ts` must appear exactly once.
    pub fn parse(ts: &TransitionSystem, input: &str) -> Result<Self, ParseError> {
        let mut labels: Vec<Option<usize>> = vec![None; ts.len()];
        let mut last_line = 0;
        for (k, (line, content)) in content_lines(input).enumerate() {
            last_line = line;
            let (_, members) = content
                .split_once(':')
                .ok_or_else(|| ParseError::new(line, format!("expected `block: states`, found `{content}`")))?;
            let members: Vec<&str> = members.split_whitespace().collect();
            if members.is_empty() {
                return Err(ParseError::new(line, "empty block"));
            }
            for m in members {
                let q = ts.state(m).map_err(|e| ParseError::new(line, e.to_string()))?;
                if labels[q].replace(k).is_some() {
                    return Err(ParseError::new(line, format!("state `{m}` listed twice")));
                }
            }
        }
        if let Some(q) = labels.iter().position(Option::is_none) {
            return Err(ParseError::new(last_line.max(1), format!("state `{}` is in no block", ts.name(q))));
        }
        let labels: Vec<usize> = labels.into_iter().map(Option::unwrap).collect();
        Ok(Self::from_labels(&labels))
    }
}

fn simulates_into(ts: &TransitionSystem, r: &Relation, a: usize, b: usize) -> bool {
    ts.succ(a).iter().all(|&x| ts.succ(b).iter().any(|&y| r.contains(x, y)))
        && ts.succ(b).iter().all(|&y| ts.succ(a).iter().any(|&x| r.contains(x, y)))
}

/// One application of the refinement operator.
pub fn phi_step(ts: &TransitionSystem, r: &Relation) -> Relation {
    assert_eq!(r.n, ts.len(), "relation carrier does not match the system");
    let n = ts.len();
    let mut out = Relation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if simulates_into(ts, r, a, b) {
                out.insert(a, b);
            }
        }
    }
    out
}

/// `Φ^k(r)`, stopping early once a fixed point is reached.
pub fn phi_power(ts: &TransitionSystem, r: &Relation, k: usize) -> Relation {
    let mut cur = r.clone();
    for _ in 0..k {
        let next = phi_step(ts, &cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Whether `(a, b) ∈ Φ^k(total)`.
pub fn stratified_equiv(ts: &TransitionSystem, a: usize, b: usize, k: usize) -> Result<bool, TransitionError> {
    ts.check_state(a)?;
    ts.check_state(b)?;
    Ok(phi_power(ts, &Relation::total(ts.len()), k).contains(a, b))
}

/// `R ⊆ Φ(R)`. The identity is not adjoined.
pub fn check_witness(ts: &TransitionSystem, r: &Relation) -> bool {
    r.pairs().all(|(a, b)| simulates_into(ts, r, a, b))
}

/// Greatest fixed point of `Φ` by iteration from the total relation.
///
/// Every strict step splits at least one class, so the iteration is stable after
/// at most `|states|` steps; failing to stabilise within that budget is a bug.
pub fn naive_bisimilarity(ts: &TransitionSystem) -> Partition {
    let n = ts.len();
    let mut cur = Relation::total(n);
    for _ in 0..=n {
        let next = phi_step(ts, &cur);
        if next == cur {
            return Partition::from_equivalence(&cur);
        }
        cur = next;
    }
    unreachable!("Φ-iteration failed to stabilise within {n} steps")
}

/// Coarsest stable partition by splitter-queue refinement.
///
/// A block `C` is stable for a splitter `B` when either every state of `C` or none
/// has a successor in `B`. Blocks are re-queued whenever they change, so on exit
/// every final block has been used as a splitter after its last change.
pub fn bisimilarity(ts: &TransitionSystem) -> Partition {
    let n = ts.len();
    if n == 0 {
        return Partition::from_labels::<usize>(&[]);
    }
    let mut pred = vec![Vec::new(); n];
    for a in ts.states() {
        for &b in ts.succ(a) {
            pred[b].push(a);
        }
    }
    let mut block_of = vec![0usize; n];
    let mut blocks: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut queued = vec![true];
    let mut queue = VecDeque::from([0usize]);
    let mut marked = vec![false; n];
    while let Some(splitter) = queue.pop_front() {
        queued[splitter] = false;
        marked.fill(false);
        for &b in &blocks[splitter] {
            for &a in &pred[b] {
                marked[a] = true;
            }
        }
        let touched: BTreeSet<usize> = (0..n).filter(|&a| marked[a]).map(|a| block_of[a]).collect();
        for c in touched {
            let (inside, outside): (Vec<usize>, Vec<usize>) = blocks[c].iter().partition(|&&q| marked[q]);
            if outside.is_empty() {
                continue;
            }
            let fresh = blocks.len();
            for &q in &outside {
                block_of[q] = fresh;
            }
            blocks[c] = inside;
            blocks.push(outside);
            queued.push(false);
            for id in [c, fresh] {
                if !queued[id] {
                    queued[id] = true;
                    queue.push_back(id);
                }
            }
        }
    }
    Partition::from_labels(&block_of)
}

/// Whether state `a` of `left` and state `b` of `right` are bisimilar, decided on the disjoint union.
pub fn bisimilar_across(left: &TransitionSystem, a: usize, right: &TransitionSystem, b: usize) -> Result<bool, TransitionError> {
    left.check_state(a)?;
    right.check_state(b)?;
    let (union, offset) = left.disjoint_union(right);
    Ok(bisimilarity(&union).same_block(a, b + offset))
}

/// A quotient by bisimilarity, restricted to what the root reaches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimized {
    pub system: TransitionSystem,
    pub root: usize,
    /// Result state of every source state whose block is reachable from the root's block.
    pub block_map: Vec<Option<usize>>,
}

impl Minimized {
    /// The source states mapped by `block_map` (a subsystem closed under successors),
    /// together with the quotient map out of it.
    pub fn source_subsystem(&self, ts: &TransitionSystem) -> (TransitionSystem, Vec<usize>) {
        let keep: Vec<usize> = ts.states().filter(|&q| self.block_map[q].is_some()).collect();
        let mut index = vec![usize::MAX; ts.len()];
        for (i, &q) in keep.iter().enumerate() {
            index[q] = i;
        }
        let names = keep.iter().map(|&q| ts.name(q).to_string()).collect();
        let succ = keep.iter().map(|&q| ts.succ(q).iter().map(|&r| index[r]).collect()).collect();
        let sub = TransitionSystem::new(names, succ).expect("closed under successors");
        let map = keep.iter().map(|&q| self.block_map[q].expect("kept")).collect();
        (sub, map)
    }
}

pub fn minimize(ts: &TransitionSystem, root: usize) -> Result<Minimized, TransitionError> {
    ts.check_state(root)?;
    let p = bisimilarity(ts);
    let block_succ = |b: usize| -> Vec<usize> {
        let rep = p.blocks()[b][0];
        let set: BTreeSet<usize> = ts.succ(rep).iter().map(|&r| p.block(r)).collect();
        set.into_iter().collect()
    };
    let mut seen = vec![false; p.block_count()];
    let mut stack = vec![p.block(root)];
    seen[p.block(root)] = true;
    while let Some(b) = stack.pop() {
        for c in block_succ(b) {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    let kept: Vec<usize> = (0..p.block_count()).filter(|&b| seen[b]).collect();
    let mut new_id = vec![None; p.block_count()];
    for (i, &b) in kept.iter().enumerate() {
        new_id[b] = Some(i);
    }
    let names = kept.iter().map(|&b| ts.name(p.blocks()[b][0]).to_string()).collect();
    let succ = kept
        .iter()
        .map(|&b| block_succ(b).into_iter().map(|c| new_id[c].expect("reachable")).collect())
        .collect();
    let new_root = new_id[p.block(root)].expect("root block kept");
    let system = TransitionSystem::new(names, succ)
        .expect("block names are distinct state names")
        .with_root(new_root);
    let block_map = ts.states().map(|q| new_id[p.block(q)]).collect();
    Ok(Minimized {
        system,
        root: new_root,
        block_map,
    })
}

/// Behaviour of `q` in the `n`-th approximant of the terminal chain: the empty
/// set at level 0, and the set of successor behaviours one level down otherwise.
pub fn behavior_index(ts: &TransitionSystem, q: usize, n: usize) -> Result<HFSet, TransitionError> {
    ts.check_state(q)?;
    Ok(behavior_codes(ts, n).swap_remove(q))
}

/// [`behavior_index`] for every state at once.
pub fn behavior_codes(ts: &TransitionSystem, n: usize) -> Vec<HFSet> {
    let mut codes = vec![HFSet::empty(); ts.len()];
    for _ in 0..n {
        codes = ts
            .states()
            .map(|q| HFSet::from_elements(ts.succ(q).iter().map(|&r| codes[r].clone())))
            .collect();
    }
    codes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{all_systems_up_to, random_relation, random_system, rng};
    use crate::transition::is_homomorphism;
    use proptest::prelude::*;

    fn sys(src: &str) -> TransitionSystem {
        TransitionSystem::parse(src).unwrap()
    }

    #[test]
    fn phi_on_loop_and_deadlock() {
        let ts = sys("q: q\nd:\n");
        let r = phi_step(&ts, &Relation::total(2));
        assert_eq!(r, Relation::from_pairs(2, [(0, 0), (1, 1)]).unwrap());
    }

    #[test]
    fn phi_of_empty_relates_only_deadlocks() {
        let ts = sys("a: b\nb: a\nd:\ne:\n");
        let r = phi_step(&ts, &Relation::empty(4));
        assert_eq!(r, Relation::from_pairs(4, [(2, 2), (2, 3), (3, 2), (3, 3)]).unwrap());
    }

    #[test]
    fn phi_preserves_identity() {
        let ts = sys("a: b c\nb: a\nc:\n");
        let id = Relation::identity(3);
        assert!(id.is_subset(&phi_step(&ts, &id)));
    }

    #[test]
    fn stratified_examples() {
        let ts = sys("q: q\nd:\n");
        assert!(stratified_equiv(&ts, 0, 1, 0).unwrap());
        assert!(!stratified_equiv(&ts, 0, 1, 1).unwrap());
        let staircase = sys("c: w c\nw: w\n");
        for k in 0..=10 {
            assert!(stratified_equiv(&staircase, 0, 1, k).unwrap());
        }
        assert!(stratified_equiv(&ts, 0, 7, 0).is_err());
    }

    #[test]
    fn bisimilarity_examples() {
        let p = bisimilarity(&sys("c: w c\nw: w\n"));
        assert_eq!(p.blocks(), &[vec![0, 1]]);
        let p = bisimilarity(&sys("q: q\nd:\n"));
        assert_eq!(p.blocks(), &[vec![0], vec![1]]);
        // two identical two-cycles plus a self loop: everything is bisimilar
        let ts = sys("a: b\nb: a\nc: d\nd: c\n");
        assert_eq!(bisimilarity(&ts), naive_bisimilarity(&ts));
        assert_eq!(bisimilarity(&ts).block_count(), 1);
        // a -> b -> deadlock, c -> d -> deadlock: matched pairs
        let ts = sys("a: b\nb: x\nx:\nc: d\nd: y\ny:\n");
        let p = bisimilarity(&ts);
        assert_eq!(p, naive_bisimilarity(&ts));
        assert_eq!(p.blocks(), &[vec![0, 3], vec![1, 4], vec![2, 5]]);
    }

    #[test]
    fn minimize_examples() {
        let ts = sys("c: w c\nw: w\nroot c\n");
        let m = minimize(&ts, 0).unwrap();
        assert_eq!(m.system.len(), 1);
        assert_eq!(m.system.succ(0), &[0]);
        assert_eq!(m.root, 0);

        let minimal = sys("a: b\nb:\n");
        let m = minimize(&minimal, 0).unwrap();
        assert_eq!(m.system.len(), 2);
        assert!(is_homomorphism(&minimal, &m.system, &[0, 1]).unwrap());

        // three copies of a 2-state chain
        let ts = sys("a1: b1\nb1:\na2: b2\nb2:\na3: b3\nb3:\n");
        let m = minimize(&ts, 0).unwrap();
        assert_eq!(m.system.len(), 2);
        let (sub, map) = m.source_subsystem(&ts);
        assert_eq!(sub.len(), 6);
        assert!(is_homomorphism(&sub, &m.system, &map).unwrap());
    }

    #[test]
    fn minimize_drops_unreachable_blocks() {
        let ts = sys("a: a\nd:\n");
        let m = minimize(&ts, 0).unwrap();
        assert_eq!(m.system.len(), 1);
        assert_eq!(m.block_map, vec![Some(0), None]);
    }

    #[test]
    fn witnesses() {
        let ts = sys("c: w c\nw: w\n");
        // without the identity the singleton relation cannot match c's child c
        assert!(!check_witness(&ts, &Relation::from_pairs(2, [(0, 1)]).unwrap()));
        let r = Relation::from_pairs(2, [(0, 1)]).unwrap().union(&bisimilarity(&ts).to_relation());
        assert!(check_witness(&ts, &r));
        assert!(check_witness(&ts, &bisimilarity(&ts).to_relation()));
        let ts = sys("l: l\nd:\n");
        assert!(!check_witness(&ts, &Relation::from_pairs(2, [(0, 1)]).unwrap()));
        assert!(check_witness(&ts, &Relation::empty(2)));
    }

    #[test]
    fn behaviour_codes() {
        let ts = sys("q: q\nd:\n");
        assert_eq!(behavior_index(&ts, 0, 0).unwrap(), behavior_index(&ts, 1, 0).unwrap());
        assert_eq!(behavior_index(&ts, 0, 1).unwrap().code(), "{{}}");
        assert_eq!(behavior_index(&ts, 1, 1).unwrap().code(), "{}");
        let stair = sys("c: w c\nw: w\n");
        assert_eq!(behavior_index(&stair, 0, 5).unwrap(), behavior_index(&stair, 1, 5).unwrap());
    }

    #[test]
    fn text_formats() {
        let ts = sys("c: w c\nw: w\n");
        let r = Relation::parse(&ts, "c w\nw w\n").unwrap();
        assert_eq!(r, Relation::from_pairs(2, [(0, 1), (1, 1)]).unwrap());
        assert_eq!(Relation::parse(&ts, &r.to_text(&ts)).unwrap(), r);
        assert_eq!(Relation::parse(&ts, "c\n").unwrap_err().line, 1);
        assert_eq!(Relation::parse(&ts, "c w\nc z\n").unwrap_err().line, 2);
        let p = bisimilarity(&ts);
        assert_eq!(p.to_text(&ts), "b0: c w\n");
        assert_eq!(Partition::parse(&ts, &p.to_text(&ts)).unwrap(), p);
        assert!(Partition::parse(&ts, "x: c\n").is_err());
        assert!(Partition::parse(&ts, "x: c w\ny: w\n").is_err());
    }

    #[test]
    fn refinement_matches_naive_on_all_small_systems() {
        for ts in all_systems_up_to(3) {
            assert_eq!(bisimilarity(&ts), naive_bisimilarity(&ts), "{ts}");
        }
    }

    proptest! {
        #[test]
        fn phi_is_monotone(seed in any::<u64>()) {
            let mut r = rng(seed);
            let ts = random_system(&mut r, 8);
            let small = random_relation(&mut r, ts.len(), 0.4);
            let big = small.union(&random_relation(&mut r, ts.len(), 0.4));
            prop_assert!(phi_step(&ts, &small).is_subset(&phi_step(&ts, &big)));
        }

        #[test]
        fn phi_preserves_equivalences(seed in any::<u64>(), classes in 1usize..4) {
            let mut r = rng(seed);
            let ts = random_system(&mut r, 8);
            let labels: Vec<usize> = (0..ts.len()).map(|q| (q * 7 + seed as usize) % classes).collect();
            let eq = Partition::from_labels(&labels).to_relation();
            prop_assert!(phi_step(&ts, &eq).is_equivalence());
        }

        #[test]
        fn refinement_matches_naive(seed in any::<u64>()) {
            let ts = random_system(&mut rng(seed), 10);
            prop_assert_eq!(bisimilarity(&ts), naive_bisimilarity(&ts));
        }

        #[test]
        fn codes_match_stratification(seed in any::<u64>(), n in 0usize..6) {
            let ts = random_system(&mut rng(seed), 6);
            let codes = behavior_codes(&ts, n);
            let strat = phi_power(&ts, &Relation::total(ts.len()), n);
            for a in ts.states() {
                for b in ts.states() {
                    prop_assert_eq!(codes[a] == codes[b], strat.contains(a, b));
                }
            }
        }

        #[test]
        fn phi_commutes_with_finite_descending_meets(seed in any::<u64>(), len in 1usize..6) {
            let mut r = rng(seed);
            let ts = random_system(&mut r, 7);
            let mut chain = vec![random_relation(&mut r, ts.len(), 0.8)];
            for _ in 1..len {
                let next = chain.last().unwrap().intersection(&random_relation(&mut r, ts.len(), 0.8));
                chain.push(next);
            }
            let meet = chain.iter().skip(1).fold(chain[0].clone(), |acc, x| acc.intersection(x));
            let images: Vec<Relation> = chain.iter().map(|x| phi_step(&ts, x)).collect();
            let meet_of_images = images.iter().skip(1).fold(images[0].clone(), |acc, x| acc.intersection(x));
            prop_assert_eq!(&phi_step(&ts, &meet), &meet_of_images);
            prop_assert_eq!(&meet_of_images, images.last().unwrap());
        }

        #[test]
        fn minimisation_invariants(seed in any::<u64>()) {
            let ts = random_system(&mut rng(seed), 8);
            let m = minimize(&ts, 0).unwrap();
            // no two result states bisimilar
            prop_assert_eq!(bisimilarity(&m.system).block_count(), m.system.len());
            // idempotent up to isomorphism (same size; quotient of a minimal system is itself)
            let again = minimize(&m.system, m.root).unwrap();
            prop_assert_eq!(again.system.len(), m.system.len());
            let (sub, map) = m.source_subsystem(&ts);
            prop_assert!(is_homomorphism(&sub, &m.system, &map).unwrap());
            // each state is bisimilar to its image in the disjoint union
            let (u, off) = ts.disjoint_union(&m.system);
            let p = bisimilarity(&u);
            for q in ts.states() {
                if let Some(img) = m.block_map[q] {
                    prop_assert!(p.same_block(q, img + off));
                }
            }
        }
    }
}
