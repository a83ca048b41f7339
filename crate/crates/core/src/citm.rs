//! Guarded corecursive equation systems over a signature and their unique solutions
//! in rational trees.
//!
//! Systems are kept in flat normal form: every right-hand side is either one
//! operation symbol applied to variables and parameters, or a bare parameter.
//! A right-hand side that is a bare variable is unguarded and rejected. Deep
//! right-hand sides are flattened by the parser through auxiliary variables.
//!
//! Rational trees with parameter leaves carry the monad structure used to state the
//! solution law: [`eta`] is the unit and [`tree_substitute`] grafts trees at
//! parameter leaves (the multiplication).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::signatures::{agree_to_depth, regular_equal, Arg as TreeArg, Node, RegularTree, Signature, SignatureError};
use crate::text::{content_lines, is_ident, split_application, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CitmError {
    #[error("{}", unguarded_message(.var, .target, *.line))]
    Unguarded { var: String, target: String, line: Option<usize> },
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("{}", located("unknown variable", .name, *.line))]
    UnknownVariable { name: String, line: Option<usize> },
    #[error("{}", located("duplicate equation for", .name, *.line))]
    DuplicateVariable { name: String, line: Option<usize> },
    #[error("no substitution given for parameter `{0}`")]
    MissingSubstitution(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn unguarded_message(var: &str, target: &str, line: Option<usize>) -> String {
    match line {
        Some(l) => format!("unguarded equation at line {l}: {var} = {target}"),
        None => format!("unguarded equation: {var} = {target}"),
    }
}

fn located(what: &str, name: &str, line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: {what} `{name}`"),
        None => format!("{what} `{name}`"),
    }
}

/// Argument of a right-hand side, by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Arg {
    Var(String),
    Param(String),
}

/// Flat right-hand side, by name. `Var` is accepted syntactically and rejected as unguarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rhs {
    App { symbol: String, args: Vec<Arg> },
    Param(String),
    Var(String),
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Param(y) => write!(f, "${y}"),
            Rhs::Var(x) => write!(f, "{x}"),
            Rhs::App { symbol, args } => {
                write!(f, "{symbol}")?;
                if !args.is_empty() {
                    let parts: Vec<String> = args
                        .iter()
                        .map(|a| match a {
                            Arg::Var(x) => x.clone(),
                            Arg::Param(y) => format!("${y}"),
                        })
                        .collect();
                    write!(f, "({})", parts.join(","))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Resolved {
    App { symbol: String, args: Vec<TreeArg> },
    Param(String),
}

/// A well-formed guarded flat equation system.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    signature: Arc<Signature>,
    vars: Vec<String>,
    params: BTreeSet<String>,
    rhs: Vec<Resolved>,
}

impl EquationSystem {
    pub fn new<I, S>(signature: Arc<Signature>, equations: I) -> Result<Self, CitmError>
    where
        I: IntoIterator<Item = (S, Rhs)>,
        S: Into<String>,
    {
        Self::with_lines(signature, equations.into_iter().map(|(v, r)| (v.into(), r, None)))
    }

    fn with_lines<I>(signature: Arc<Signature>, equations: I) -> Result<Self, CitmError>
    where
        I: IntoIterator<Item = (String, Rhs, Option<usize>)>,
    {
        let equations: Vec<(String, Rhs, Option<usize>)> = equations.into_iter().collect();
        let mut index = HashMap::new();
        for (i, (v, _, line)) in equations.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(CitmError::DuplicateVariable { name: v.clone(), line: *line });
            }
        }
        // guardedness first: it is the property the solution theory depends on
        if let Some((v, Rhs::Var(target), line)) = equations.iter().find(|(_, r, _)| matches!(r, Rhs::Var(_))) {
            return Err(CitmError::Unguarded {
                var: v.clone(),
                target: target.clone(),
                line: *line,
            });
        }
        let mut params = BTreeSet::new();
        let mut rhs = Vec::with_capacity(equations.len());
        for (_, r, line) in &equations {
            let resolved = match r {
                Rhs::Var(_) => unreachable!("rejected above"),
                Rhs::Param(y) => {
                    params.insert(y.clone());
                    Resolved::Param(y.clone())
                }
                Rhs::App { symbol, args } => {
                    signature.check(symbol, args.len())?;
                    let args = args
                        .iter()
                        .map(|a| match a {
                            Arg::Param(y) => {
                                params.insert(y.clone());
                                Ok(TreeArg::Param(y.clone()))
                            }
                            Arg::Var(x) => index
                                .get(x)
                                .map(|&i| TreeArg::State(i))
                                .ok_or_else(|| CitmError::UnknownVariable { name: x.clone(), line: *line }),
                        })
                        .collect::<Result<_, _>>()?;
                    Resolved::App { symbol: symbol.clone(), args }
                }
            };
            rhs.push(resolved);
        }
        let vars = equations.into_iter().map(|(v, _, _)| v).collect();
        Ok(EquationSystem { signature, vars, params, rhs })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn parameters(&self) -> &BTreeSet<String> {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Right-hand side of variable `i`, by name.
    pub fn rhs(&self, i: usize) -> Rhs {
        match &self.rhs[i] {
            Resolved::Param(y) => Rhs::Param(y.clone()),
            Resolved::App { symbol, args } => Rhs::App {
                symbol: symbol.clone(),
                args: args
                    .iter()
                    .map(|a| match a {
                        TreeArg::State(j) => Arg::Var(self.vars[*j].clone()),
                        TreeArg::Param(y) => Arg::Param(y.clone()),
                    })
                    .collect(),
            },
        }
    }

    /// Parses `x = name(arg,...)` / `x = $y` lines over a known signature.
    ///
    /// Arguments may be nested applications; they are flattened into auxiliary
    /// variables named `x.1`, `x.2`, ... . A bare identifier argument is a variable if
    /// some line defines it, and otherwise a constant of the signature.
    pub fn parse(signature: Arc<Signature>, input: &str) -> Result<Self, CitmError> {
        let lines = lex(input)?;
        Self::from_lines(signature, &lines)
    }

    /// Like [`EquationSystem::parse`], inferring the signature from usage. Bare
    /// identifiers that are not variables become constants.
    pub fn parse_inferring_signature(input: &str) -> Result<Self, CitmError> {
        let lines = lex(input)?;
        let defined: HashSet<&str> = lines.iter().map(|(_, v, _)| v.as_str()).collect();
        let mut arities: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for (line, _, rhs) in &lines {
            collect_symbols(rhs, &defined, *line, &mut arities)?;
        }
        let sig = Signature::from_symbols(arities.into_iter().map(|(s, (a, _))| (s, a)))?;
        Self::from_lines(Arc::new(sig), &lines)
    }

    fn from_lines(signature: Arc<Signature>, lines: &[(usize, String, Expr)]) -> Result<Self, CitmError> {
        let mut taken: HashSet<String> = lines.iter().map(|(_, v, _)| v.clone()).collect();
        let mut out: Vec<(String, Rhs, Option<usize>)> = Vec::new();
        for (line, var, expr) in lines {
            let mut counter = 0;
            let mut aux = Vec::new();
            let rhs = flatten_top(&signature, var, expr, &taken, *line, &mut counter, &mut aux)?;
            out.push((var.clone(), rhs, Some(*line)));
            for (name, rhs) in aux {
                taken.insert(name.clone());
                out.push((name, rhs, Some(*line)));
            }
        }
        Self::with_lines(signature, out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.vars.iter().enumerate() {
            out.push_str(&format!("{v} = {}\n", self.rhs(i)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Expr {
    Param(String),
    Ident(String),
    App(String, Vec<Expr>),
}

fn lex(input: &str) -> Result<Vec<(usize, String, Expr)>, CitmError> {
    let mut out = Vec::new();
    for (line, content) in content_lines(input) {
        let (lhs, rhs) = content
            .split_once('=')
            .ok_or_else(|| ParseError::new(line, format!("expected `x = rhs`, found `{content}`")))?;
        let var = lhs.trim();
        if !is_ident(var) {
            return Err(ParseError::new(line, format!("invalid variable name `{var}`")).into());
        }
        let expr = parse_expr(rhs).map_err(|m| ParseError::new(line, m))?;
        out.push((line, var.to_string(), expr));
    }
    Ok(out)
}

fn parse_expr(s: &str) -> Result<Expr, String> {
    let s = s.trim();
    if let Some(y) = s.strip_prefix('$') {
        return if is_ident(y) { Ok(Expr::Param(y.to_string())) } else { Err(format!("invalid parameter `{s}`")) };
    }
    let has_parens = s.contains('(');
    let (head, args) = split_application(s)?;
    if !is_ident(head) {
        return Err(format!("invalid symbol `{head}`"));
    }
    if !has_parens {
        return Ok(Expr::Ident(head.to_string()));
    }
    let args = args.into_iter().map(parse_expr).collect::<Result<_, _>>()?;
    Ok(Expr::App(head.to_string(), args))
}

fn collect_symbols(
    e: &Expr,
    defined: &HashSet<&str>,
    line: usize,
    out: &mut BTreeMap<String, (usize, usize)>,
) -> Result<(), CitmError> {
    let mut note = |name: &str, arity: usize| -> Result<(), CitmError> {
        match out.get(name) {
            Some(&(a, first)) if a != arity => Err(ParseError::new(
                line,
                format!("symbol `{name}` used with arity {arity} here and {a} at line {first}"),
            )
            .into()),
            Some(_) => Ok(()),
            None => {
                out.insert(name.to_string(), (arity, line));
                Ok(())
            }
        }
    };
    match e {
        Expr::Param(_) => Ok(()),
        Expr::Ident(x) if defined.contains(x.as_str()) => Ok(()),
        Expr::Ident(c) => note(c, 0),
        Expr::App(f, args) => {
            note(f, args.len())?;
            for a in args {
                collect_symbols(a, defined, line, out)?;
            }
            Ok(())
        }
    }
}

fn flatten_top(
    sig: &Signature,
    var: &str,
    e: &Expr,
    taken: &HashSet<String>,
    line: usize,
    counter: &mut usize,
    aux: &mut Vec<(String, Rhs)>,
) -> Result<Rhs, CitmError> {
    match e {
        Expr::Param(y) => Ok(Rhs::Param(y.clone())),
        Expr::Ident(x) if taken.contains(x) => Ok(Rhs::Var(x.clone())),
        Expr::Ident(c) => match sig.arity(c) {
            Some(0) => Ok(Rhs::App { symbol: c.clone(), args: vec![] }),
            Some(expected) => Err(ParseError::new(
                line,
                SignatureError::ArityMismatch { symbol: c.clone(), expected, found: 0 }.to_string(),
            )
            .into()),
            None => Err(CitmError::UnknownVariable { name: c.clone(), line: Some(line) }),
        },
        Expr::App(f, args) => {
            sig.check(f, args.len()).map_err(|err| ParseError::new(line, err.to_string()))?;
            let args = args
                .iter()
                .map(|a| flatten_arg(sig, var, a, taken, line, counter, aux))
                .collect::<Result<_, _>>()?;
            Ok(Rhs::App { symbol: f.clone(), args })
        }
    }
}

fn flatten_arg(
    sig: &Signature,
    var: &str,
    e: &Expr,
    taken: &HashSet<String>,
    line: usize,
    counter: &mut usize,
    aux: &mut Vec<(String, Rhs)>,
) -> Result<Arg, CitmError> {
    match e {
        Expr::Param(y) => Ok(Arg::Param(y.clone())),
        Expr::Ident(x) if taken.contains(x) => Ok(Arg::Var(x.clone())),
        _ => {
            let name = loop {
                *counter += 1;
                let candidate = format!("{var}.{counter}");
                if !taken.contains(&candidate) {
                    break candidate;
                }
            };
            // reserve the slot before recursing so nested auxiliaries keep source order
            let slot = aux.len();
            aux.push((name.clone(), Rhs::Param(String::new())));
            let rhs = flatten_top(sig, var, e, taken, line, counter, aux)?;
            aux[slot].1 = rhs;
            Ok(Arg::Var(name))
        }
    }
}

/// The unique solution: one rational tree per variable.
#[derive(Debug, Clone)]
pub struct Solution {
    vars: Vec<String>,
    trees: Vec<RegularTree>,
}

impl Solution {
    pub fn new(vars: Vec<String>, trees: Vec<RegularTree>) -> Self {
        assert_eq!(vars.len(), trees.len());
        Solution { vars, trees }
    }

    pub fn get(&self, var: &str) -> Option<&RegularTree> {
        self.vars.iter().position(|v| v == var).map(|i| &self.trees[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &RegularTree)> {
        self.vars.iter().map(String::as_str).zip(&self.trees)
    }

    pub fn trees(&self) -> &[RegularTree] {
        &self.trees
    }

    pub fn trees_mut(&mut self) -> &mut [RegularTree] {
        &mut self.trees
    }
}

/// The solution tree of every variable: the system's own table read as a
/// coalgebra, rooted at that variable.
pub fn solve(sys: &EquationSystem) -> Solution {
    let nodes: Vec<Node> = sys
        .rhs
        .iter()
        .map(|r| match r {
            Resolved::Param(y) => Node::Param(y.clone()),
            Resolved::App { symbol, args } => Node::Op {
                symbol: symbol.clone(),
                args: args.clone(),
            },
        })
        .collect();
    let trees = (0..sys.vars.len())
        .map(|x| RegularTree::from_raw(sys.signature.clone(), sys.vars.clone(), nodes.clone(), x))
        .collect();
    Solution::new(sys.vars.clone(), trees)
}

/// Unit of the tree monad: the leaf `y`.
pub fn eta(signature: Arc<Signature>, y: impl Into<String>) -> RegularTree {
    RegularTree::leaf(signature, y)
}

fn uniquify(names: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .into_iter()
        .map(|mut n| {
            while !seen.insert(n.clone()) {
                n.push('\'');
            }
            n
        })
        .collect()
}

/// Replaces every `y`-leaf of `t` by the tree `subst[y]`, simultaneously.
pub fn tree_substitute(t: &RegularTree, subst: &BTreeMap<String, RegularTree>) -> Result<RegularTree, CitmError> {
    let used = t.params();
    let mut offsets: BTreeMap<&str, usize> = BTreeMap::new();
    let mut names: Vec<String> = t.names().to_vec();
    let mut nodes: Vec<Option<Node>> = vec![None; t.state_count()];
    for y in &used {
        let s = subst.get(y).ok_or_else(|| CitmError::MissingSubstitution(y.clone()))?;
        if s.signature() != t.signature() && **s.signature() != **t.signature() {
            return Err(SignatureError::SignatureMismatch.into());
        }
        let offset = names.len();
        offsets.insert(y.as_str(), offset);
        names.extend(s.names().iter().map(|n| format!("{y}.{n}")));
        nodes.extend(s.nodes().iter().map(|node| Some(shift(node, offset))));
    }
    let root_of = |y: &str| offsets[y] + subst[y].root();
    for (i, node) in t.nodes().iter().enumerate() {
        nodes[i] = Some(match node {
            Node::Param(y) => nodes[root_of(y)].clone().expect("copied above"),
            Node::Op { symbol, args } => Node::Op {
                symbol: symbol.clone(),
                args: args
                    .iter()
                    .map(|a| match a {
                        TreeArg::State(s) => TreeArg::State(*s),
                        TreeArg::Param(y) => TreeArg::State(root_of(y)),
                    })
                    .collect(),
            },
        });
    }
    let nodes = nodes.into_iter().map(|n| n.expect("filled")).collect();
    Ok(RegularTree::from_raw(t.signature().clone(), uniquify(names), nodes, t.root()))
}

fn shift(node: &Node, offset: usize) -> Node {
    match node {
        Node::Param(y) => Node::Param(y.clone()),
        Node::Op { symbol, args } => Node::Op {
            symbol: symbol.clone(),
            args: args
                .iter()
                .map(|a| match a {
                    TreeArg::State(s) => TreeArg::State(s + offset),
                    TreeArg::Param(y) => TreeArg::Param(y.clone()),
                })
                .collect(),
        },
    }
}

/// Parameter names standing for variables while a right-hand side is read as a tree.
/// `:` never occurs in a parsed parameter name.
fn var_slot(v: &str) -> String {
    format!(":{v}")
}

/// One unfolding of the equation for `x` with `cand` plugged in: the right-hand
/// side read as a flat tree over variables and parameters, followed by grafting
/// candidates at variables and unit leaves at parameters.
pub fn one_step(sys: &EquationSystem, cand: &Solution, x: usize) -> Option<RegularTree> {
    let sig = sys.signature.clone();
    match &sys.rhs[x] {
        Resolved::Param(y) => Some(eta(sig, y.clone())),
        Resolved::App { symbol, args } => {
            let names = vec!["rhs".to_string()];
            let nodes = vec![Node::Op {
                symbol: symbol.clone(),
                args: args
                    .iter()
                    .map(|a| match a {
                        TreeArg::State(v) => TreeArg::Param(var_slot(&sys.vars[*v])),
                        TreeArg::Param(y) => TreeArg::Param(y.clone()),
                    })
                    .collect(),
            }];
            let flat = RegularTree::from_raw(sig.clone(), names, nodes, 0);
            let mut subst = BTreeMap::new();
            for a in args {
                match a {
                    TreeArg::State(v) => {
                        subst.insert(var_slot(&sys.vars[*v]), cand.get(&sys.vars[*v])?.clone());
                    }
                    TreeArg::Param(y) => {
                        subst.insert(y.clone(), eta(sig.clone(), y.clone()));
                    }
                }
            }
            Some(tree_substitute(&flat, &subst).expect("every parameter substituted"))
        }
    }
}

/// Whether `cand` satisfies every equation of `sys` up to depth `d`.
pub fn verify_solution(sys: &EquationSystem, cand: &Solution, d: usize) -> bool {
    (0..sys.len()).all(|x| {
        let (Some(mine), Some(expected)) = (cand.get(&sys.vars[x]), one_step(sys, cand, x)) else {
            return false;
        };
        agree_to_depth(mine, &expected, d)
    })
}

/// Least depth `d <= max_depth` at which `cand` fails [`verify_solution`].
pub fn first_violation(sys: &EquationSystem, cand: &Solution, max_depth: usize) -> Option<usize> {
    (0..=max_depth).find(|&d| !verify_solution(sys, cand, d))
}

/// Whether two solutions agree on every variable, as denoted trees.
pub fn same_solution(a: &Solution, b: &Solution) -> bool {
    a.vars == b.vars
        && a
            .trees
            .iter()
            .zip(&b.trees)
            .all(|(s, t)| regular_equal(s, t).unwrap_or(false))
}

/// Signature used by the random generators: two constants, two unary, one binary, one ternary symbol.
pub fn sample_signature() -> Arc<Signature> {
    Arc::new(Signature::from_symbols([("c", 0), ("d", 0), ("s", 1), ("t", 1), ("b", 2), ("f", 3)]).expect("distinct"))
}

/// A random guarded system with `1..=max_vars` variables and up to `max_params` parameters.
pub fn random_guarded_system<R: Rng>(rng: &mut R, sig: &Arc<Signature>, max_vars: usize, max_params: usize) -> EquationSystem {
    let nv = rng.gen_range(1..=max_vars.max(1));
    let np = rng.gen_range(0..=max_params);
    let vars: Vec<String> = (0..nv).map(|i| format!("x{i}")).collect();
    let params: Vec<String> = (0..np).map(|i| format!("y{i}")).collect();
    let symbols: Vec<(String, usize)> = sig.symbols().map(|(s, a)| (s.to_string(), a)).collect();
    let eqs: Vec<(String, Rhs)> = vars
        .iter()
        .map(|v| {
            let rhs = if !params.is_empty() && rng.gen_bool(0.15) {
                Rhs::Param(params.choose(rng).expect("nonempty").clone())
            } else {
                let (symbol, arity) = symbols.choose(rng).expect("nonempty signature").clone();
                let args = (0..arity)
                    .map(|_| {
                        if !params.is_empty() && rng.gen_bool(0.25) {
                            Arg::Param(params.choose(rng).expect("nonempty").clone())
                        } else {
                            Arg::Var(vars.choose(rng).expect("nonempty").clone())
                        }
                    })
                    .collect();
                Rhs::App { symbol, args }
            };
            (v.clone(), rhs)
        })
        .collect();
    EquationSystem::new(sig.clone(), eqs).expect("generated systems are guarded and well-typed")
}

/// A random rational tree with `1..=max_states` states over the given parameters.
pub fn random_regular_tree<R: Rng>(rng: &mut R, sig: &Arc<Signature>, max_states: usize, params: &[String]) -> RegularTree {
    let sys = random_guarded_system_with(rng, sig, max_states, params);
    let root = rng.gen_range(0..sys.len());
    solve(&sys).trees[root].clone()
}

fn random_guarded_system_with<R: Rng>(rng: &mut R, sig: &Arc<Signature>, max_vars: usize, params: &[String]) -> EquationSystem {
    let nv = rng.gen_range(1..=max_vars.max(1));
    let vars: Vec<String> = (0..nv).map(|i| format!("q{i}")).collect();
    let symbols: Vec<(String, usize)> = sig.symbols().map(|(s, a)| (s.to_string(), a)).collect();
    let eqs: Vec<(String, Rhs)> = vars
        .iter()
        .map(|v| {
            let rhs = if !params.is_empty() && rng.gen_bool(0.15) {
                Rhs::Param(params.choose(rng).expect("nonempty").clone())
            } else {
                let (symbol, arity) = symbols.choose(rng).expect("nonempty signature").clone();
                let args = (0..arity)
                    .map(|_| {
                        if !params.is_empty() && rng.gen_bool(0.3) {
                            Arg::Param(params.choose(rng).expect("nonempty").clone())
                        } else {
                            Arg::Var(vars.choose(rng).expect("nonempty").clone())
                        }
                    })
                    .collect();
                Rhs::App { symbol, args }
            };
            (v.clone(), rhs)
        })
        .collect();
    EquationSystem::new(sig.clone(), eqs).expect("generated systems are guarded and well-typed")
}

/// Changes the symbol of one equation of the system's canonical solution to a different
/// symbol of the same arity, if the signature has one.
pub fn perturb_solution<R: Rng>(rng: &mut R, sys: &EquationSystem, sol: &Solution) -> Option<Solution> {
    let candidates: Vec<(usize, String)> = sys
        .rhs
        .iter()
        .enumerate()
        .filter_map(|(i, r)| match r {
            Resolved::App { symbol, args } => {
                let alternatives: Vec<&str> = sys
                    .signature
                    .symbols()
                    .filter(|&(s, a)| a == args.len() && s != symbol)
                    .map(|(s, _)| s)
                    .collect();
                alternatives.choose(rng).map(|s| (i, s.to_string()))
            }
            Resolved::Param(_) => None,
        })
        .collect();
    let (victim, replacement) = candidates.choose(rng)?.clone();
    let template = &sol.trees[0];
    let mut nodes = template.nodes().to_vec();
    if let Node::Op { symbol, .. } = &mut nodes[victim] {
        *symbol = replacement;
    }
    let trees = (0..sys.len())
        .map(|x| RegularTree::from_raw(sys.signature.clone(), template.names().to_vec(), nodes.clone(), x))
        .collect();
    Some(Solution::new(sol.vars.clone(), trees))
}
