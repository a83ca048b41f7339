//! The acceptance criteria as runnable checks with timings.

use std::fmt;
use std::time::{Duration, Instant};

use crate::barr::{barr_vs_bisim_exhaustive, barr_vs_bisim_harness, cut_relation};
use crate::bisim::{bisimilar_across, bisimilarity, minimize, naive_bisimilarity, phi_power, phi_step, Partition, Relation};
use crate::chains::{hf_to_tree, initial_chain_powerset, stage_sizes, terminal_chain_powerset, tree_to_hf};
use crate::citm::{
    eta, random_guarded_system, random_regular_tree, sample_signature, solve, tree_substitute, verify_solution, CitmError,
    EquationSystem,
};
use crate::exec::Execution;
use crate::gallery::{cut_schematic, cut_table, Gallery, Generator, OrdinalIdx, SchematicTree, Side, Verdict, Witness};
use crate::random::{all_systems_up_to, instance_rng, random_relation, random_system};
use crate::signatures::regular_equal;
use crate::transition::{is_extensional, tree_iso, TransitionSystem, TreeCodes};

use rand::Rng;

pub const OMEGA: &str = "q: q\nroot q\n";
pub const OMEGA_PRIME: &str = "c: w c\nw: w\nroot c\n";

pub const INITIAL_CHAIN_SIZES: [usize; 6] = [0, 1, 2, 4, 16, 65536];
pub const TERMINAL_CHAIN_SIZES: [usize; 5] = [1, 2, 4, 16, 65536];

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub seed: u64,
    pub depth: usize,
    pub family_bound: usize,
    pub count: usize,
    pub max_states: usize,
    pub exec: Execution,
    /// Negative control: compare the chains against a wrong size table.
    pub corrupt_chain_table: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 1,
            depth: 16,
            family_bound: 8,
            count: 200,
            max_states: 6,
            exec: Execution::default(),
            corrupt_chain_table: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub number: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}. {} [{:.2}s / {}s] {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.number,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

pub const CRITERIA: [(usize, &str, u64); 9] = [
    (1, "Ω/Ω′ bisimilarity and minimisation", 1),
    (2, "stratified separation at level 0", 5),
    (3, "cut tables", 10),
    (4, "theorem instances i=0..3", 60),
    (5, "Barr equivalence = bisimilarity", 30),
    (6, "oracle equivalence and Φ laws", 30),
    (7, "powerset chains and HF bijection", 30),
    (8, "tree monad laws and guardedness", 30),
    (9, "stratification bridge", 30),
];

/// Runs criterion `number` (1..=9).
pub fn run_criterion(number: usize, cfg: &SelftestConfig) -> CriterionResult {
    let &(_, name, limit) = CRITERIA.iter().find(|c| c.0 == number).expect("criterion number in 1..=9");
    let start = Instant::now();
    let outcome = match number {
        1 => omega_bisimilarity(),
        2 => level_zero_separation(cfg),
        3 => cut_tables(cfg),
        4 => theorem_instances(cfg),
        5 => barr_agreement(cfg),
        6 => oracle_equivalence(cfg),
        7 => chains(cfg),
        8 => monad_laws(cfg),
        _ => bridge(cfg),
    };
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit);
    let (mut pass, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if pass && elapsed >= limit {
        pass = false;
        detail = format!("{detail}; over the time limit");
    }
    CriterionResult { number, name, pass, detail, elapsed, limit }
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub results: Vec<CriterionResult>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out: String = self.results.iter().map(|r| format!("{r}\n")).collect();
        let passed = self.results.iter().filter(|r| r.pass).count();
        out.push_str(&format!("criteria={} pass={}\n", self.results.len(), passed));
        out
    }
}

pub fn run_all(cfg: &SelftestConfig) -> SelftestReport {
    SelftestReport {
        results: (1..=CRITERIA.len()).map(|n| run_criterion(n, cfg)).collect(),
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn omega_bisimilarity() -> Outcome {
    let omega = TransitionSystem::parse(OMEGA).map_err(|e| e.to_string())?;
    let prime = TransitionSystem::parse(OMEGA_PRIME).map_err(|e| e.to_string())?;
    let same = bisimilar_across(&omega, 0, &prime, 0).map_err(|e| e.to_string())?;
    ensure(same, || "Ω and Ω′ not bisimilar".into())?;
    let m = minimize(&prime, 0).map_err(|e| e.to_string())?;
    ensure(m.system.len() == 1 && m.system.succ(0) == [0], || {
        format!("minimised Ω′ is not the one-state loop:\n{}", m.system)
    })?;
    Ok("bisimilar; Ω′ minimises to one self-loop".into())
}

fn gen(g: Generator) -> SchematicTree {
    SchematicTree::Gen(g)
}

fn level_zero_separation(cfg: &SelftestConfig) -> Outcome {
    let mut g = Gallery::new(cfg.depth, cfg.family_bound);
    let t0 = gen(Generator::T(OrdinalIdx::Fin(0)));
    let s0 = gen(Generator::S(OrdinalIdx::Fin(0)));
    let zero = g.check(&t0, &s0, 0).map_err(|e| e.to_string())?;
    ensure(zero.is_equivalent(), || format!("t_0 ≈_0 s_0 gave {zero}"))?;
    let one = g.check(&t0, &s0, 1).map_err(|e| e.to_string())?;
    let expected = Verdict::Distinguished(Witness::UnmatchedChild {
        side: Side::Left,
        child: gen(Generator::OmegaPath),
        level: 0,
    });
    ensure(one == expected, || format!("t_0 ≈_1 s_0 gave {one}"))?;
    Ok(format!("≈_0 equivalent, ≈_1 {one} (D={}, K={})", cfg.depth, cfg.family_bound))
}

fn cut_tables(cfg: &SelftestConfig) -> Outcome {
    let rows = cut_table();
    let mut checked = 0;
    for row in &rows {
        for tree in &row.trees {
            let got = cut_schematic(&gen(*tree), row.n, cfg.family_bound).map_err(|e| e.to_string())?;
            ensure(tree_iso(&got, &row.expected), || {
                format!("{}: {tree} cuts to {got}, displayed {}", row.label, row.expected)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{} rows, {checked} cuts match", rows.len()))
}

fn theorem_instances(cfg: &SelftestConfig) -> Outcome {
    let mut g = Gallery::new(cfg.depth, cfg.family_bound);
    for i in 0..=3 {
        let t = gen(Generator::T(OrdinalIdx::Fin(i)));
        let s = gen(Generator::S(OrdinalIdx::Fin(i)));
        let same = g.check(&t, &s, i).map_err(|e| e.to_string())?;
        ensure(same.is_equivalent(), || format!("t_{i} ≈_{i} s_{i} gave {same}"))?;
        let next = g.check(&t, &s, i + 1).map_err(|e| e.to_string())?;
        ensure(!next.is_equivalent(), || format!("t_{i} ≈_{} s_{i} gave {next}", i + 1))?;
    }
    Ok("t_i ≈_i s_i and t_i ≉_{i+1} s_i for i = 0..3".into())
}

fn barr_agreement(cfg: &SelftestConfig) -> Outcome {
    let ex = barr_vs_bisim_exhaustive(3, cfg.exec).map_err(|e| e.to_string())?;
    ensure(ex.disagreements() == 0, || format!("exhaustive: {}", ex.summary()))?;
    let rnd = barr_vs_bisim_harness(cfg.seed, cfg.count, cfg.max_states, cfg.exec).map_err(|e| e.to_string())?;
    ensure(rnd.disagreements() == 0, || format!("random: {}", rnd.summary()))?;
    Ok(format!("exhaustive ≤3: {}; random ≤{}: {}", ex.summary(), cfg.max_states, rnd.summary()))
}

fn suites(cfg: &SelftestConfig) -> Vec<TransitionSystem> {
    let mut systems: Vec<TransitionSystem> = all_systems_up_to(3).collect();
    systems.extend((0..cfg.count).map(|i| random_system(&mut instance_rng(cfg.seed, i), cfg.max_states)));
    systems
}

const PHI_SAMPLES: usize = 1000;

fn oracle_equivalence(cfg: &SelftestConfig) -> Outcome {
    let systems = suites(cfg);
    let mismatches: Vec<usize> = cfg
        .exec
        .map_range(0..systems.len(), |i| (naive_bisimilarity(&systems[i]) != bisimilarity(&systems[i])).then_some(i))
        .into_iter()
        .flatten()
        .collect();
    ensure(mismatches.is_empty(), || format!("partitions differ on systems {mismatches:?}"))?;
    let seed = cfg.seed ^ 0x9e37_79b9_7f4a_7c15;
    let failures: Vec<usize> = cfg
        .exec
        .map_range(0..PHI_SAMPLES, |i| {
            let mut r = instance_rng(seed, i);
            let ts = random_system(&mut r, cfg.max_states);
            let n = ts.len();
            let small = random_relation(&mut r, n, 0.4);
            let large = small.union(&random_relation(&mut r, n, 0.4));
            let monotone = phi_step(&ts, &small).is_subset(&phi_step(&ts, &large));
            let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
            let eq = Partition::from_labels(&labels).to_relation();
            let preserved = phi_step(&ts, &eq).is_equivalence();
            (!(monotone && preserved)).then_some(i)
        })
        .into_iter()
        .flatten()
        .collect();
    ensure(failures.is_empty(), || format!("Φ laws fail on samples {failures:?}"))?;
    Ok(format!(
        "{} systems agree; Φ monotone and equivalence-preserving on {PHI_SAMPLES} samples",
        systems.len()
    ))
}

fn chains(cfg: &SelftestConfig) -> Outcome {
    let mut initial_expected = INITIAL_CHAIN_SIZES.to_vec();
    let mut terminal_expected = TERMINAL_CHAIN_SIZES.to_vec();
    if cfg.corrupt_chain_table {
        *initial_expected.last_mut().expect("nonempty") -= 1;
        *terminal_expected.last_mut().expect("nonempty") += 1;
    }
    let initial = initial_chain_powerset(5).map_err(|e| e.to_string())?;
    let sizes = stage_sizes(&initial);
    ensure(sizes == initial_expected, || format!("initial chain sizes {sizes:?}, table {initial_expected:?}"))?;
    let terminal = terminal_chain_powerset(4).map_err(|e| e.to_string())?;
    let tsizes = stage_sizes(&terminal);
    ensure(tsizes == terminal_expected, || format!("terminal chain sizes {tsizes:?}, table {terminal_expected:?}"))?;

    let w4 = &initial[4].carrier;
    let trees: Vec<_> = w4.iter().map(hf_to_tree).collect();
    let mut codes = TreeCodes::new();
    let mut seen = std::collections::HashSet::new();
    for (x, t) in w4.iter().zip(&trees) {
        ensure(is_extensional(t) && t.height() <= 3, || format!("{x} maps to a non-extensional or tall tree"))?;
        ensure(seen.insert(codes.code_of(t)), || format!("{x} maps to a repeated tree"))?;
        let back = tree_to_hf(t).map_err(|e| e.to_string())?;
        ensure(&back == x, || format!("{x} round-trips to {back}"))?;
        ensure(tree_iso(&hf_to_tree(&back), t), || format!("tree of {x} does not round-trip"))?;
    }
    Ok(format!("sizes {sizes:?} and {tsizes:?}; {} trees round-trip", trees.len()))
}

const MONAD_SAMPLES: usize = 500;

fn monad_laws(cfg: &SelftestConfig) -> Outcome {
    let sig = sample_signature();
    let seed = cfg.seed ^ 0x5851_f42d_4c95_7f2d;
    let failures: Vec<String> = cfg
        .exec
        .map_range(0..MONAD_SAMPLES, |i| {
            let mut r = instance_rng(seed, i);
            let sys = random_guarded_system(&mut r, &sig, 8, 4);
            if !verify_solution(&sys, &solve(&sys), 32) {
                return Some(format!("system {i} fails its own solution"));
            }
            let loop_var = sys.variables()[r.gen_range(0..sys.len())].clone();
            let unguarded = format!("{}zz = {loop_var}\n", sys.to_text());
            if !matches!(EquationSystem::parse(sig.clone(), &unguarded), Err(CitmError::Unguarded { .. })) {
                return Some(format!("system {i} accepted an unguarded equation"));
            }
            let ys = ["y0".to_string(), "y1".to_string()];
            let zs = ["z0".to_string(), "z1".to_string()];
            let t = random_regular_tree(&mut r, &sig, 6, &ys);
            let units = ys.iter().map(|y| (y.clone(), eta(sig.clone(), y.clone()))).collect();
            let right_unit = tree_substitute(&t, &units).ok()?;
            let left_unit = tree_substitute(&eta(sig.clone(), "y0"), &[("y0".to_string(), t.clone())].into()).ok()?;
            let s1 = ys.iter().map(|y| (y.clone(), random_regular_tree(&mut r, &sig, 4, &zs))).collect();
            let s2: std::collections::BTreeMap<_, _> =
                zs.iter().map(|z| (z.clone(), random_regular_tree(&mut r, &sig, 4, &ys))).collect();
            let lhs = tree_substitute(&tree_substitute(&t, &s1).ok()?, &s2).ok()?;
            let composed = s1
                .iter()
                .map(|(y, u)| tree_substitute(u, &s2).map(|v| (y.clone(), v)))
                .collect::<Result<_, _>>()
                .ok()?;
            let rhs = tree_substitute(&t, &composed).ok()?;
            let laws = regular_equal(&right_unit, &t).ok()? && regular_equal(&left_unit, &t).ok()? && regular_equal(&lhs, &rhs).ok()?;
            (!laws).then(|| format!("monad laws fail on instance {i}"))
        })
        .into_iter()
        .flatten()
        .collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    let direct = EquationSystem::parse(sig, "x = x");
    ensure(matches!(direct, Err(CitmError::Unguarded { .. })), || "`x = x` accepted".into())?;
    Ok(format!("{MONAD_SAMPLES} systems solved to depth 32; laws hold on {MONAD_SAMPLES} instances; unguarded rejected"))
}

fn bridge(cfg: &SelftestConfig) -> Outcome {
    let systems: Vec<TransitionSystem> = all_systems_up_to(3).collect();
    let bad: Vec<String> = cfg
        .exec
        .map_range(0..systems.len(), |i| {
            let ts = &systems[i];
            let total = Relation::total(ts.len());
            (0..=6)
                .find(|&n| cut_relation(ts, n) != phi_power(ts, &total, n))
                .map(|n| format!("system {i} at n={n}"))
        })
        .into_iter()
        .flatten()
        .collect();
    ensure(bad.is_empty(), || format!("cut and Φ^n relations differ: {}", bad.join(", ")))?;
    Ok(format!("{} systems, n ≤ 6, all state pairs", systems.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        let cfg = SelftestConfig::default();
        for n in [1, 2, 3, 7] {
            let r = run_criterion(n, &cfg);
            assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn corrupted_chain_table_fails() {
        let cfg = SelftestConfig { corrupt_chain_table: true, ..SelftestConfig::default() };
        let r = run_criterion(7, &cfg);
        assert!(!r.pass);
        assert!(r.to_string().starts_with("FAIL 7."));
    }
}
