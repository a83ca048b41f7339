//! `coalg`: command-line front end.
//!
//! Exit status is 0 on success or equivalence, 1 on a definite distinction or a
//! failed claim, and 2 on input errors.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use coalgebra::barr::{barr_equiv, barr_vs_bisim_exhaustive, barr_vs_bisim_harness, complete_bound, HarnessReport};
use coalgebra::bisim::{bisimilarity, check_witness, minimize, stratified_equiv, Relation};
use coalgebra::chains::{initial_chain_polynomial, initial_chain_powerset, stage_sizes, terminal_chain_powerset};
use coalgebra::citm::{solve, verify_solution, EquationSystem};
use coalgebra::exec::Execution;
use coalgebra::gallery::{cut_schematic, reproduce_counterexamples, stratified_check, Generator, SchematicTree};
use coalgebra::selftest::{run_all, SelftestConfig};
use coalgebra::signatures::{unfold_regular, Signature};
use coalgebra::transition::{extensional_quotient, unfold, TransitionSystem};

#[derive(Parser)]
#[command(name = "coalg", version, about = "Executable coalgebra at finite scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    bounds: Bounds,
}

#[derive(Args, Clone)]
struct Bounds {
    /// Cut depth D used to decide level-0 equivalence, and unfolding depth for `solve`.
    #[arg(long, global = true, default_value_t = 16)]
    depth: usize,
    /// Family bound K: families are instantiated at indices 0..=K.
    #[arg(long = "family-bound", global = true, default_value_t = 8)]
    family_bound: usize,
    /// Number of random instances.
    #[arg(long, global = true, default_value_t = 200)]
    count: usize,
    /// Largest random system size.
    #[arg(long = "max-states", global = true, default_value_t = 6)]
    max_states: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

impl Bounds {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bisimilarity classes of one system, or whether the roots of two systems are bisimilar.
    Bisim {
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        /// Print a bisimulation, or the cuts that tell the roots apart.
        #[arg(long)]
        witness: bool,
    },
    /// Quotient by bisimilarity, restricted to what the root reaches.
    Minimize {
        file: PathBuf,
        /// Root state (defaults to the file's `root` line, else the first state).
        #[arg(long)]
        root: Option<String>,
    },
    /// Barr equivalence of two roots, or the Barr-versus-bisimilarity harness.
    Barr {
        files: Vec<PathBuf>,
        /// Compare on seeded random systems.
        #[arg(long, conflicts_with_all = ["files", "exhaustive"])]
        harness: bool,
        /// Compare on every system with at most 3 states.
        #[arg(long, conflicts_with = "files")]
        exhaustive: bool,
        /// Largest cut level to compare (defaults to the complete bound).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Level-k stratified equivalence of system roots or of gallery trees.
    Stratified {
        /// Two system files, or with --gallery two tree names such as t0 s0.
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
        #[arg(long, short = 'k')]
        level: usize,
        /// Treat the inputs as gallery tree names.
        #[arg(long)]
        gallery: bool,
    },
    /// Solve a guarded equation system.
    Solve {
        file: PathBuf,
        /// Signature file (`name/arity` per line); inferred from the equations if absent.
        #[arg(long)]
        sig: Option<PathBuf>,
    },
    /// Stages of an initial or terminal chain.
    Chain {
        #[arg(value_enum)]
        kind: ChainKind,
        /// Last stage to build.
        #[arg(long, default_value_t = 4)]
        stages: usize,
        /// Signature file, for the polynomial chain.
        #[arg(long, required_if_eq("kind", "polynomial"))]
        sig: Option<PathBuf>,
        /// Also list the elements of stages with at most this many elements.
        #[arg(long, default_value_t = 16)]
        list_up_to: usize,
    },
    /// Reproduce the counterexample gallery, or print one schematic cut.
    Gallery {
        #[arg(long = "i-max", default_value_t = 4)]
        i_max: usize,
        /// Print the cut of this gallery tree instead of the report.
        #[arg(long, requires = "level")]
        cut: Option<String>,
        /// Cut depth for --cut.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Negative control: compare the chains against a wrong size table.
        #[arg(long, hide = true)]
        corrupt_chain_table: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainKind {
    Initial,
    Terminal,
    Polynomial,
}

enum Failure {
    Input(String),
}

type Outcome = Result<bool, Failure>;

fn input<E: Display>(context: impl Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(input(path.display()))
}

fn load_system(path: &Path) -> Result<TransitionSystem, Failure> {
    TransitionSystem::parse(&read(path)?).map_err(input(path.display()))
}

fn root_of(ts: &TransitionSystem, path: &Path) -> Result<usize, Failure> {
    ts.root_or_first()
        .ok_or_else(|| Failure::Input(format!("{}: empty system", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bisim { ref files, witness } => bisim(files, witness),
        Command::Minimize { ref file, ref root } => minimize_cmd(file, root.as_deref()),
        Command::Barr { ref files, harness, exhaustive, bound } => barr(&cli.bounds, files, harness, exhaustive, bound),
        Command::Stratified { ref inputs, level, gallery } => stratified(&cli.bounds, inputs, level, gallery),
        Command::Solve { ref file, ref sig } => solve_cmd(&cli.bounds, file, sig.as_deref()),
        Command::Chain { kind, stages, ref sig, list_up_to } => chain(kind, stages, sig.as_deref(), list_up_to),
        Command::Gallery { i_max, ref cut, level } => gallery(&cli.bounds, i_max, cut.as_deref(), level),
        Command::Selftest { corrupt_chain_table } => selftest(&cli.bounds, corrupt_chain_table),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn bisim(files: &[PathBuf], witness: bool) -> Outcome {
    let left = load_system(&files[0])?;
    if files.len() == 1 {
        let p = bisimilarity(&left);
        print!("{}", p.to_text(&left));
        if witness {
            println!("# bisimulation");
            print!("{}", p.to_relation().to_text(&left));
        }
        return Ok(true);
    }
    let right = load_system(&files[1])?;
    let (a, b) = (root_of(&left, &files[0])?, root_of(&right, &files[1])?);
    let (union, offset) = left.disjoint_union(&right);
    let p = bisimilarity(&union);
    let same = p.same_block(a, b + offset);
    println!("{}", if same { "bisimilar" } else { "not bisimilar" });
    if witness {
        if same {
            let cross = Relation::from_pairs(
                union.len(),
                (0..left.len()).flat_map(|x| (0..right.len()).map(move |y| (x, y + offset))).filter(|&(x, y)| p.same_block(x, y)),
            )
            .expect("states in range");
            debug_assert!(check_witness(&union, &cross));
            println!("# bisimulation");
            for (x, y) in cross.pairs() {
                println!("{} {}", left.name(x), right.name(y - offset));
            }
        } else {
            let level = (0..)
                .find(|&k| !stratified_equiv(&union, a, b + offset, k).expect("states in range"))
                .expect("non-bisimilar states separate at a finite level");
            println!("# roots first differ at cut level {level}");
            for (name, ts, q) in [(&files[0], &left, a), (&files[1], &right, b)] {
                println!("# {}", name.display());
                print!("{}", extensional_quotient(&unfold(ts, q, level).expect("state in range")).render());
            }
        }
    }
    Ok(same)
}

fn minimize_cmd(file: &Path, root: Option<&str>) -> Outcome {
    let ts = load_system(file)?;
    let root = match root {
        Some(name) => ts.state(name).map_err(input(file.display()))?,
        None => root_of(&ts, file)?,
    };
    let m = minimize(&ts, root).map_err(input(file.display()))?;
    print!("{}", m.system);
    Ok(true)
}

fn print_harness(report: &HarnessReport) -> Outcome {
    print!("{}", report.to_text());
    Ok(report.disagreements() == 0)
}

fn barr(bounds: &Bounds, files: &[PathBuf], harness: bool, exhaustive: bool, bound: Option<usize>) -> Outcome {
    if harness {
        let report = barr_vs_bisim_harness(bounds.seed, bounds.count, bounds.max_states, bounds.exec())
            .map_err(input("harness"))?;
        return print_harness(&report);
    }
    if exhaustive {
        let report = barr_vs_bisim_exhaustive(bounds.max_states.min(3), bounds.exec()).map_err(input("harness"))?;
        return print_harness(&report);
    }
    let [f, g] = files else {
        return Err(Failure::Input("barr needs two system files, --harness or --exhaustive".into()));
    };
    let (left, right) = (load_system(f)?, load_system(g)?);
    let (a, b) = (root_of(&left, f)?, root_of(&right, g)?);
    let (union, offset) = left.disjoint_union(&right);
    let bound = match bound {
        Some(n) => n,
        None => complete_bound(&union, a, b + offset).expect("states in range"),
    };
    let verdict = barr_equiv(&union, a, b + offset, bound).map_err(input("barr"))?;
    println!("{verdict}");
    Ok(verdict.is_equivalent())
}

fn stratified(bounds: &Bounds, inputs: &[String], level: usize, gallery: bool) -> Outcome {
    if gallery {
        let trees: Vec<SchematicTree> = inputs
            .iter()
            .map(|s| s.parse::<Generator>().map(SchematicTree::Gen).map_err(input("gallery")))
            .collect::<Result<_, _>>()?;
        let [t, s] = trees.as_slice() else {
            return Err(Failure::Input("--gallery needs two tree names".into()));
        };
        let verdict = stratified_check(t, s, level, bounds.depth, bounds.family_bound).map_err(input("gallery"))?;
        println!("{t} ≈_{level} {s}: {verdict}");
        println!("bounds: depth D={}, family bound K={}", bounds.depth, bounds.family_bound);
        return Ok(verdict.is_equivalent());
    }
    let paths: Vec<PathBuf> = inputs.iter().map(PathBuf::from).collect();
    let same = match paths.as_slice() {
        [f] => {
            let ts = load_system(f)?;
            let p = coalgebra::bisim::phi_power(&ts, &Relation::total(ts.len()), level);
            print!("{}", coalgebra::bisim::Partition::from_equivalence(&p).to_text(&ts));
            true
        }
        [f, g] => {
            let (left, right) = (load_system(f)?, load_system(g)?);
            let (a, b) = (root_of(&left, f)?, root_of(&right, g)?);
            let (union, offset) = left.disjoint_union(&right);
            let same = stratified_equiv(&union, a, b + offset, level).expect("states in range");
            println!("{}", if same { "equivalent" } else { "distinguished" });
            same
        }
        _ => unreachable!("clap limits the inputs to two"),
    };
    Ok(same)
}

fn solve_cmd(bounds: &Bounds, file: &Path, sig: Option<&Path>) -> Outcome {
    let text = read(file)?;
    let sys = match sig {
        Some(p) => {
            let sig = Signature::parse(&read(p)?).map_err(input(p.display()))?;
            EquationSystem::parse(Arc::new(sig), &text)
        }
        None => EquationSystem::parse_inferring_signature(&text),
    }
    .map_err(input(file.display()))?;
    let sol = solve(&sys);
    println!("# flat system");
    print!("{}", sys.to_text());
    println!("# unfoldings to depth {}", bounds.depth.min(6));
    for (x, t) in sol.iter() {
        println!("{x} = {}", unfold_regular(t, bounds.depth.min(6)));
    }
    let ok = verify_solution(&sys, &sol, bounds.depth);
    println!("verified to depth {}: {}", bounds.depth, if ok { "yes" } else { "no" });
    Ok(ok)
}

fn print_sizes(sizes: &[usize]) {
    for (i, n) in sizes.iter().enumerate() {
        println!("stage {i}: {n}");
    }
}

fn chain(kind: ChainKind, n: usize, sig: Option<&Path>, list_up_to: usize) -> Outcome {
    match kind {
        ChainKind::Initial => {
            let stages = initial_chain_powerset(n).map_err(input("chain"))?;
            print_sizes(&stage_sizes(&stages));
            for s in stages.iter().filter(|s| s.len() <= list_up_to) {
                let elems: Vec<String> = s.carrier.iter().map(ToString::to_string).collect();
                println!("W_{} = {{{}}}", s.index, elems.join(", "));
            }
        }
        ChainKind::Terminal => {
            let stages = terminal_chain_powerset(n).map_err(input("chain"))?;
            print_sizes(&stage_sizes(&stages));
            for s in stages.iter().skip(1).filter(|s| s.len() <= list_up_to) {
                let proj: Vec<String> = s.link.iter().map(ToString::to_string).collect();
                println!("projection V_{} -> V_{}: {}", s.index, s.index - 1, proj.join(" "));
            }
        }
        ChainKind::Polynomial => {
            let path = sig.expect("clap requires --sig");
            let sig = Signature::parse(&read(path)?).map_err(input(path.display()))?;
            let stages = initial_chain_polynomial(&sig, n).map_err(input("chain"))?;
            print_sizes(&stage_sizes(&stages));
            for s in stages.iter().filter(|s| s.len() <= list_up_to) {
                let elems: Vec<String> = s.carrier.iter().map(ToString::to_string).collect();
                println!("stage {} terms: {}", s.index, elems.join(", "));
            }
        }
    }
    Ok(true)
}

fn gallery(bounds: &Bounds, i_max: usize, cut: Option<&str>, level: Option<usize>) -> Outcome {
    if let (Some(name), Some(n)) = (cut, level) {
        let g: Generator = name.parse().map_err(input("gallery"))?;
        let t = cut_schematic(&SchematicTree::Gen(g), n, bounds.family_bound).map_err(input("gallery"))?;
        println!("{g}|{n} = {t}");
        print!("{}", t.render());
        return Ok(true);
    }
    let report = reproduce_counterexamples(i_max, bounds.depth, bounds.family_bound).map_err(input("gallery"))?;
    print!("{}", report.to_text());
    Ok(report.all_pass())
}

fn selftest(bounds: &Bounds, corrupt_chain_table: bool) -> Outcome {
    let cfg = SelftestConfig {
        seed: bounds.seed,
        depth: bounds.depth,
        family_bound: bounds.family_bound,
        count: bounds.count,
        max_states: bounds.max_states,
        exec: bounds.exec(),
        corrupt_chain_table,
    };
    let report = run_all(&cfg);
    print!("{}", report.to_text());
    Ok(report.all_pass())
}
