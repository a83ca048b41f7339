use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::{Signature, SignatureError};
use crate::text::{content_lines, is_ident, split_application, ParseError};

/// Argument of a state definition, by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    State(String),
    Param(String),
}

/// Right-hand side of a state definition, by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definition {
    Op { symbol: String, args: Vec<Operand> },
    Param(String),
}

/// Resolved argument: an index into the state table or a parameter leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Arg {
    State(usize),
    Param(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Op { symbol: String, args: Vec<Arg> },
    Param(String),
}

/// A finite pointed coalgebra of the polynomial functor `H(X) = Σ-applications over X + Y`,
/// denoting a rational tree with parameter leaves.
///
/// State names are presentation detail: two presentations denote the same tree iff
/// [`regular_equal`] says so.
#[derive(Debug, Clone)]
pub struct RegularTree {
    signature: Arc<Signature>,
    names: Vec<String>,
    nodes: Vec<Node>,
    root: usize,
}

/// A depth-bounded observation of a tree. `Hole` marks a truncated subtree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PartialTerm {
    Hole,
    Param(String),
    Node { label: String, children: Vec<PartialTerm> },
}

impl fmt::Display for PartialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartialTerm::Hole => write!(f, "⊥"),
            PartialTerm::Param(y) => write!(f, "{y}"),
            PartialTerm::Node { label, children } => {
                write!(f, "{label}")?;
                if !children.is_empty() {
                    write!(f, "(")?;
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{c}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// What an argument denotes once parameter-defined states are looked through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum View<'a> {
    Param(&'a str),
    Op(usize),
}

impl RegularTree {
    pub fn new<I, S>(signature: Arc<Signature>, definitions: I, root: &str) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = (S, Definition)>,
        S: Into<String>,
    {
        let defs: Vec<(String, Definition)> = definitions.into_iter().map(|(n, d)| (n.into(), d)).collect();
        let mut index = HashMap::with_capacity(defs.len());
        for (i, (name, _)) in defs.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(SignatureError::DuplicateState(name.clone()));
            }
        }
        let resolve = |name: &str| index.get(name).copied().ok_or_else(|| SignatureError::UnknownState(name.to_string()));
        let mut names = Vec::with_capacity(defs.len());
        let mut nodes = Vec::with_capacity(defs.len());
        for (name, def) in &defs {
            let node = match def {
                Definition::Param(y) => Node::Param(y.clone()),
                Definition::Op { symbol, args } => {
                    signature.check(symbol, args.len())?;
                    let args = args
                        .iter()
                        .map(|a| match a {
                            Operand::State(s) => resolve(s).map(Arg::State),
                            Operand::Param(y) => Ok(Arg::Param(y.clone())),
                        })
                        .collect::<Result<_, _>>()?;
                    Node::Op { symbol: symbol.clone(), args }
                }
            };
            names.push(name.clone());
            nodes.push(node);
        }
        let root = resolve(root)?;
        Ok(RegularTree { signature, names, nodes, root })
    }

    /// Assembles a tree from an already resolved table. Callers guarantee arity and index validity.
    pub(crate) fn from_raw(signature: Arc<Signature>, names: Vec<String>, nodes: Vec<Node>, root: usize) -> Self {
        debug_assert_eq!(names.len(), nodes.len());
        debug_assert!(root < nodes.len());
        RegularTree { signature, names, nodes, root }
    }

    /// The single-leaf tree carrying parameter `y`.
    pub fn leaf(signature: Arc<Signature>, y: impl Into<String>) -> Self {
        let y = y.into();
        RegularTree {
            signature,
            names: vec![y.clone()],
            nodes: vec![Node::Param(y)],
            root: 0,
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn state_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.names[state]
    }

    pub fn node(&self, state: usize) -> &Node {
        &self.nodes[state]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Same table, different root.
    pub fn with_root(&self, root: usize) -> Self {
        assert!(root < self.nodes.len(), "root index out of range");
        RegularTree { root, ..self.clone() }
    }

    /// Parameters occurring anywhere in the table.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for node in &self.nodes {
            match node {
                Node::Param(y) => {
                    out.insert(y.clone());
                }
                Node::Op { args, .. } => {
                    for a in args {
                        if let Arg::Param(y) = a {
                            out.insert(y.clone());
                        }
                    }
                }
            }
        }
        out
    }

    fn view_state(&self, state: usize) -> View<'_> {
        match &self.nodes[state] {
            Node::Param(y) => View::Param(y),
            Node::Op { .. } => View::Op(state),
        }
    }

    fn view_arg<'a>(&'a self, arg: &'a Arg) -> View<'a> {
        match arg {
            Arg::Param(y) => View::Param(y),
            Arg::State(s) => self.view_state(*s),
        }
    }

    fn unfold_view(&self, view: View<'_>, depth: usize) -> PartialTerm {
        if depth == 0 {
            return PartialTerm::Hole;
        }
        match view {
            View::Param(y) => PartialTerm::Param(y.to_string()),
            View::Op(state) => {
                let Node::Op { symbol, args } = &self.nodes[state] else {
                    unreachable!("op view on a parameter state")
                };
                PartialTerm::Node {
                    label: symbol.clone(),
                    children: args.iter().map(|a| self.unfold_view(self.view_arg(a), depth - 1)).collect(),
                }
            }
        }
    }

    /// Parses `state = name(arg,...)` / `state = $y` lines followed by `root state`.
    pub fn parse(signature: Arc<Signature>, input: &str) -> Result<Self, ParseError> {
        let mut defs: Vec<(String, Definition)> = Vec::new();
        let mut lines_of: HashMap<String, usize> = HashMap::new();
        let mut root: Option<(usize, String)> = None;
        for (line, content) in content_lines(input) {
            if let Some(rest) = content.strip_prefix("root ") {
                let name = rest.trim();
                if root.is_some() {
                    return Err(ParseError::new(line, "duplicate `root` line"));
                }
                root = Some((line, name.to_string()));
                continue;
            }
            if root.is_some() {
                return Err(ParseError::new(line, "definitions must precede the `root` line"));
            }
            let (lhs, rhs) = content
                .split_once('=')
                .ok_or_else(|| ParseError::new(line, format!("expected `state = rhs`, found `{content}`")))?;
            let name = lhs.trim();
            if !is_ident(name) {
                return Err(ParseError::new(line, format!("invalid state name `{name}`")));
            }
            if lines_of.insert(name.to_string(), line).is_some() {
                return Err(ParseError::new(line, format!("duplicate definition of state `{name}`")));
            }
            let def = parse_definition(&signature, rhs).map_err(|m| ParseError::new(line, m))?;
            defs.push((name.to_string(), def));
        }
        let (root_line, root) = root.ok_or_else(|| ParseError::new(input.lines().count().max(1), "missing `root` line"))?;
        RegularTree::new(signature, defs.iter().cloned(), &root).map_err(|e| {
            let line = match &e {
                SignatureError::UnknownState(s) => defs
                    .iter()
                    .find(|(_, d)| matches!(d, Definition::Op { args, .. } if args.contains(&Operand::State(s.clone()))))
                    .and_then(|(n, _)| lines_of.get(n).copied())
                    .unwrap_or(root_line),
                _ => root_line,
            };
            ParseError::new(line, e.to_string())
        })
    }

    /// Renders the presentation in the same format [`RegularTree::parse`] reads.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, node) in self.names.iter().zip(&self.nodes) {
            out.push_str(name);
            out.push_str(" = ");
            match node {
                Node::Param(y) => {
                    out.push('$');
                    out.push_str(y);
                }
                Node::Op { symbol, args } => {
                    out.push_str(symbol);
                    if !args.is_empty() {
                        let rendered: Vec<String> = args
                            .iter()
                            .map(|a| match a {
                                Arg::State(s) => self.names[*s].clone(),
                                Arg::Param(y) => format!("${y}"),
                            })
                            .collect();
                        out.push('(');
                        out.push_str(&rendered.join(","));
                        out.push(')');
                    }
                }
            }
            out.push('\n');
        }
        out.push_str("root ");
        out.push_str(&self.names[self.root]);
        out.push('\n');
        out
    }
}

fn parse_definition(sig: &Signature, rhs: &str) -> Result<Definition, String> {
    let rhs = rhs.trim();
    if let Some(y) = rhs.strip_prefix('$') {
        if !is_ident(y) {
            return Err(format!("invalid parameter `{rhs}`"));
        }
        return Ok(Definition::Param(y.to_string()));
    }
    let (symbol, args) = split_application(rhs)?;
    if !is_ident(symbol) {
        return Err(format!("invalid symbol `{symbol}`"));
    }
    sig.check(symbol, args.len()).map_err(|e| e.to_string())?;
    let args = args
        .into_iter()
        .map(|a| match a.strip_prefix('$') {
            Some(y) if is_ident(y) => Ok(Operand::Param(y.to_string())),
            None if is_ident(a) => Ok(Operand::State(a.to_string())),
            _ => Err(format!("invalid argument `{a}`")),
        })
        .collect::<Result<_, _>>()?;
    Ok(Definition::Op { symbol: symbol.to_string(), args })
}

/// Unfolds `t` to depth `d`: nodes at depth `d` become holes, parameter leaves above are kept.
pub fn unfold_regular(t: &RegularTree, d: usize) -> PartialTerm {
    t.unfold_view(t.view_state(t.root), d)
}

/// Decides equality of the denoted (possibly infinite) trees by exploring pairs of
/// states reachable from the two roots in lockstep.
pub fn regular_equal(t: &RegularTree, s: &RegularTree) -> Result<bool, SignatureError> {
    if t.signature != s.signature && *t.signature != *s.signature {
        return Err(SignatureError::SignatureMismatch);
    }
    let start = (t.view_state(t.root), s.view_state(s.root));
    let mut seen: HashSet<(View<'_>, View<'_>)> = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        match pair {
            (View::Param(a), View::Param(b)) => {
                if a != b {
                    return Ok(false);
                }
            }
            (View::Op(p), View::Op(q)) => {
                let (Node::Op { symbol: sa, args: aa }, Node::Op { symbol: sb, args: ab }) = (&t.nodes[p], &s.nodes[q]) else {
                    unreachable!()
                };
                if sa != sb {
                    return Ok(false);
                }
                for (x, y) in aa.iter().zip(ab) {
                    let next = (t.view_arg(x), s.view_arg(y));
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Whether `unfold_regular(t, d) == unfold_regular(s, d)`, without building the unfoldings.
///
/// Works level by level on sets of state pairs, so the cost is bounded by
/// `d * |t| * |s|` rather than by the size of the unfolded terms.
pub fn agree_to_depth(t: &RegularTree, s: &RegularTree, d: usize) -> bool {
    let mut frontier: HashSet<(View<'_>, View<'_>)> = HashSet::from([(t.view_state(t.root), s.view_state(s.root))]);
    for _ in 0..d {
        let mut next = HashSet::new();
        for pair in frontier {
            match pair {
                (View::Param(a), View::Param(b)) if a == b => {}
                (View::Op(p), View::Op(q)) => {
                    let (Node::Op { symbol: sa, args: aa }, Node::Op { symbol: sb, args: ab }) = (&t.nodes[p], &s.nodes[q]) else {
                        unreachable!()
                    };
                    if sa != sb {
                        return false;
                    }
                    next.extend(aa.iter().zip(ab).map(|(x, y)| (t.view_arg(x), s.view_arg(y))));
                }
                _ => return false,
            }
        }
        frontier = next;
    }
    true
}

impl PartialTerm {
    pub fn node(label: impl Into<String>, children: Vec<PartialTerm>) -> Self {
        PartialTerm::Node { label: label.into(), children }
    }

    pub fn param(y: impl Into<String>) -> Self {
        PartialTerm::Param(y.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PartialTerm::Hole;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::from_symbols([("sigma", 1), ("tau", 1), ("b", 2), ("c", 0)]).unwrap())
    }

    fn parse(src: &str) -> RegularTree {
        RegularTree::parse(sig(), src).unwrap()
    }

    #[test]
    fn unfold_self_loop() {
        let t = parse("q = sigma(q)\nroot q\n");
        let s = |x| PartialTerm::node("sigma", vec![x]);
        assert_eq!(unfold_regular(&t, 3), s(s(s(Hole))));
        assert_eq!(unfold_regular(&t, 3).to_string(), "sigma(sigma(sigma(⊥)))");
        assert_eq!(unfold_regular(&t, 0), Hole);
    }

    #[test]
    fn unfold_keeps_parameters() {
        let t = parse("p = b(p, $y)\nroot p\n");
        let expected = PartialTerm::node("b", vec![PartialTerm::node("b", vec![Hole, Hole]), PartialTerm::param("y")]);
        assert_eq!(unfold_regular(&t, 2), expected);
        // a parameter sitting exactly at the cut depth is cut
        assert_eq!(unfold_regular(&t, 1), PartialTerm::node("b", vec![Hole, Hole]));
    }

    #[test]
    fn equality_of_presentations() {
        let t = parse("q = sigma(q)\nroot q\n");
        let s = parse("a = sigma(b)\nb = sigma(a)\nroot a\n");
        let u = parse("q = tau(q)\nroot q\n");
        assert!(regular_equal(&t, &s).unwrap());
        for d in 0..=10 {
            assert_eq!(unfold_regular(&t, d), unfold_regular(&s, d));
        }
        assert!(!regular_equal(&t, &u).unwrap());
        assert!(regular_equal(&t, &t).unwrap());
    }

    #[test]
    fn parameter_states_and_parameter_args_agree() {
        let t = parse("p = b(c0, $y)\nc0 = c\nroot p\n");
        let s = parse("p = b(k, y)\nk = c\ny = $y\nroot p\n");
        assert!(regular_equal(&t, &s).unwrap());
        let u = parse("p = b(k, y)\nk = c\ny = $z\nroot p\n");
        assert!(!regular_equal(&t, &u).unwrap());
    }

    #[test]
    fn mismatched_signatures_are_rejected() {
        let t = parse("q = c\nroot q\n");
        let other = Arc::new(Signature::from_symbols([("c", 0)]).unwrap());
        let s = RegularTree::parse(other, "q = c\nroot q\n").unwrap();
        assert_eq!(regular_equal(&t, &s), Err(SignatureError::SignatureMismatch));
    }

    #[test]
    fn parse_errors_point_at_lines() {
        let e = RegularTree::parse(sig(), "q = sigma(q, q)\nroot q\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = RegularTree::parse(sig(), "q = sigma(r)\nroot q\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("unknown state"));
        let e = RegularTree::parse(sig(), "q = sigma(q)\nq = c\nroot q\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = RegularTree::parse(sig(), "q = sigma(q)\n").unwrap_err();
        assert!(e.message.contains("root"));
        let e = RegularTree::parse(sig(), "q = nope(q)\nroot q").unwrap_err();
        assert!(e.message.contains("unknown symbol"));
    }

    #[test]
    fn text_round_trip() {
        let t = parse("p = b(p, $y)\nz = $y\nk = c\nroot p\n");
        let again = parse(&t.to_text());
        assert_eq!(again.to_text(), t.to_text());
        assert!(regular_equal(&t, &again).unwrap());
    }
}
