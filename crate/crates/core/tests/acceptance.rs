//! Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
//!
//! Criteria 3 and 7 are also checked against oracles kept here: a hand
//! transcription of the displayed cut trees, and a brute-force enumeration of
//! all rooted trees with at most 11 nodes.

use std::collections::BTreeSet;

use coalgebra::chains::{hf_to_tree, initial_chain_powerset};
use coalgebra::gallery::{cut_schematic, Generator, OrdinalIdx, SchematicTree};
use coalgebra::selftest::{run_criterion, CriterionResult, SelftestConfig, CRITERIA};
use coalgebra::transition::{canonical_code, tree_iso, ETree};

/// All rooted unordered trees with exactly `n` nodes, as canonical codes.
fn trees_with(n: usize, memo: &mut Vec<Option<Vec<String>>>) -> Vec<String> {
    if let Some(Some(v)) = memo.get(n) {
        return v.clone();
    }
    let mut out = BTreeSet::new();
    let mut forests = Vec::new();
    forests_with(n - 1, None, memo, &mut Vec::new(), &mut forests);
    for mut f in forests {
        f.sort();
        out.insert(format!("({})", f.concat()));
    }
    let v: Vec<String> = out.into_iter().collect();
    if memo.len() <= n {
        memo.resize(n + 1, None);
    }
    memo[n] = Some(v.clone());
    v
}

/// Multisets of trees with `n` nodes in total, generated in non-increasing (size, code) order.
fn forests_with(
    n: usize,
    bound: Option<(usize, String)>,
    memo: &mut Vec<Option<Vec<String>>>,
    acc: &mut Vec<String>,
    out: &mut Vec<Vec<String>>,
) {
    if n == 0 {
        out.push(acc.clone());
        return;
    }
    for size in (1..=n).rev() {
        for code in trees_with(size, memo) {
            let key = (size, code.clone());
            if bound.as_ref().is_some_and(|b| key > *b) {
                continue;
            }
            acc.push(code);
            forests_with(n - size, Some(key), memo, acc, out);
            acc.pop();
        }
    }
}

fn children_of(code: &str) -> Vec<&str> {
    let inner = &code[1..code.len() - 1];
    let mut out = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (i, c) in inner.char_indices() {
        match c {
            '(' => {
                if depth == 0 {
                    start = i;
                }
                depth += 1;
            }
            _ => {
                depth -= 1;
                if depth == 0 {
                    out.push(&inner[start..=i]);
                }
            }
        }
    }
    out
}

fn extensional_with_height(code: &str, max_height: usize) -> bool {
    let kids = children_of(code);
    if kids.is_empty() {
        return true;
    }
    if max_height == 0 {
        return false;
    }
    let distinct: BTreeSet<&str> = kids.iter().copied().collect();
    distinct.len() == kids.len() && kids.iter().all(|k| extensional_with_height(k, max_height - 1))
}

fn hf_bijection_oracle() -> Result<String, String> {
    let mut memo = Vec::new();
    let brute: BTreeSet<String> = (1..=11)
        .flat_map(|n| trees_with(n, &mut memo))
        .filter(|c| extensional_with_height(c, 3))
        .collect();
    let stages = initial_chain_powerset(4).map_err(|e| e.to_string())?;
    let mapped: BTreeSet<String> = stages[4].carrier.iter().map(|x| canonical_code(&hf_to_tree(x))).collect();
    if brute.len() == 16 && brute == mapped {
        Ok(format!("brute force finds the same {} trees", brute.len()))
    } else {
        Err(format!("brute force {} trees, chain {} trees", brute.len(), mapped.len()))
    }
}

/// Hand transcription of the displayed cuts as nested parentheses, one pair per node.
fn displayed(n: usize, tree: &str) -> Option<&'static str> {
    let fin = |i: usize| tree == format!("t_{i}") || tree == format!("s_{i}");
    let limit = tree == "t_ω" || tree == "s_ω";
    let aux = tree == "u_ω" || tree.starts_with("v^");
    let index: Option<usize> = tree.get(2..).and_then(|s| s.parse().ok());
    match n {
        1 => Some("(())"),
        2 if fin(0) => Some("(()(()))"),
        2 => Some("((()))"),
        3 if fin(0) => Some("(()(())((())))"),
        3 if fin(1) => Some("((()(())))"),
        3 if aux => Some("((()(()))((())))"),
        3 => Some("(((())))"),
        4 if fin(0) => Some("(()(())((()))(((()))))"),
        4 if fin(1) => Some("((()(())((()))))"),
        4 if fin(2) => Some("(((()(()))))"),
        4 if limit => Some("(((()(()))((()))))"),
        4 if index.is_some_and(|i| i >= 3) => Some("((((()))))"),
        _ => None,
    }
}

fn tree_of(code: &str) -> ETree {
    ETree::node(children_of(code).into_iter().map(tree_of).collect())
}

fn cut_table_oracle(cfg: &SelftestConfig) -> Result<String, String> {
    let mut trees: Vec<Generator> = Vec::new();
    for i in (0..=8).map(OrdinalIdx::Fin).chain([OrdinalIdx::Omega]) {
        trees.push(Generator::T(i));
        trees.push(Generator::S(i));
    }
    trees.push(Generator::U);
    trees.extend((0..=8).map(Generator::V));
    let mut checked = 0;
    for n in 1..=4 {
        for g in &trees {
            let name = g.to_string();
            let Some(expected) = displayed(n, &name) else {
                continue;
            };
            let got = cut_schematic(&SchematicTree::Gen(*g), n, cfg.family_bound).map_err(|e| e.to_string())?;
            if !tree_iso(&got, &tree_of(expected)) {
                return Err(format!("{name}|{n} = {got}, displayed {expected}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} cuts match the transcription"))
}

fn with_oracle(mut r: CriterionResult, oracle: Result<String, String>) -> CriterionResult {
    match oracle {
        Ok(d) => r.detail = format!("{}; {d}", r.detail),
        Err(d) => {
            r.pass = false;
            r.detail = format!("{}; oracle: {d}", r.detail);
        }
    }
    r
}

#[test]
fn acceptance_criteria() {
    let cfg = SelftestConfig::default();
    let mut results = Vec::new();
    for &(n, _, _) in CRITERIA.iter() {
        let r = run_criterion(n, &cfg);
        let r = match n {
            3 => with_oracle(r, cut_table_oracle(&cfg)),
            7 => with_oracle(r, hf_bijection_oracle()),
            _ => r,
        };
        println!("{r}");
        results.push(r);
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.to_string()).collect();
    assert!(failed.is_empty(), "failing criteria:\n{}", failed.join("\n"));
}

#[test]
fn negative_control_trips_the_chain_criterion() {
    let cfg = SelftestConfig { corrupt_chain_table: true, ..SelftestConfig::default() };
    assert!(!run_criterion(7, &cfg).pass);
}

#[test]
fn claims_do_not_depend_on_the_seed() {
    for seed in [42, 43] {
        let cfg = SelftestConfig { seed, ..SelftestConfig::default() };
        for n in [5, 6, 8] {
            let r = run_criterion(n, &cfg);
            assert!(r.pass, "seed {seed}: {r}");
        }
    }
}

#[test]
fn brute_force_enumerator_counts() {
    let mut memo = Vec::new();
    let counts: Vec<usize> = (1..=8).map(|n| trees_with(n, &mut memo).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115]);
}
