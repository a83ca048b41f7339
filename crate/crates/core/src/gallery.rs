//! Schematic infinitely branching trees separating the stratified equivalences.
//!
//! The trees `t_i`, `s_i`, `u_ω`, `v^i_ω` have children indexed by all naturals.
//! They are kept symbolic: a [`SchematicTree`] is a generator application or a root
//! over child items, where an item is one subtree or a whole family
//! `{template(k) : k < ω}`. Cuts and equivalence checks instantiate families
//! at finitely many indices, and every report states the bounds used.
//!
//! The gallery (Ω is the infinite path, Ω′ the staircase):
//!
//! ```text
//! t_0 = root{Ω, path(k) : k<ω}        s_0 = root{path(k) : k<ω}
//! t_{i+1} = root{t_i}                 s_{i+1} = root{s_i}
//! u_ω = root{t_k : k<ω}               v^i_ω = root{t_k : k≠i, s_i}
//! t_ω = root{v^k_ω : k<ω}             s_ω = root{u_ω, v^k_ω : k<ω}
//! ```
//!
//! `≈_0` holds when all cuts agree; for `i > 0`, `t ≈_i s` holds when for every
//! `j < i` each child of either tree has a `≈_j` partner among the children of
//! the other.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::transition::{ETree, TreeCodes};

/// Largest cut depth [`cut_schematic`] accepts.
pub const MAX_CUT_DEPTH: usize = 8;
/// Smallest family bound [`cut_schematic`] accepts.
pub const MIN_CUT_FAMILY_BOUND: usize = 4;
/// Smallest depth and family bounds [`stratified_check`] accepts.
pub const MIN_CHECK_BOUND: usize = 8;
/// Largest theorem index [`reproduce_counterexamples`] accepts.
pub const MAX_REPORT_INDEX: usize = 4;
/// Largest family index exercised by the cut table.
pub const TABLE_INDICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("{generator} does not take index {index}")]
    IllTypedIndex { generator: &'static str, index: String },
    #[error("cuts of {family} at depth {depth} not stabilized within indices 0..={window}")]
    NotStabilized { family: String, depth: usize, window: usize },
    #[error("{what} {value} out of range ({bound})")]
    Bound { what: &'static str, value: usize, bound: String },
    #[error("unknown gallery tree `{0}`")]
    UnknownTree(String),
}

fn bound_error(what: &'static str, value: usize, bound: String) -> GalleryError {
    GalleryError::Bound { what, value, bound }
}

/// Indices up to ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrdinalIdx {
    Fin(usize),
    Omega,
}

impl fmt::Display for OrdinalIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdinalIdx::Fin(n) => write!(f, "{n}"),
            OrdinalIdx::Omega => write!(f, "ω"),
        }
    }
}

impl FromStr for OrdinalIdx {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "w" | "ω" | "omega" => Ok(OrdinalIdx::Omega),
            _ => s.parse().map(OrdinalIdx::Fin).map_err(|_| format!("invalid index `{s}`")),
        }
    }
}

/// The closed grammar of gallery trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Path with `n` edges.
    Path(usize),
    /// Ω, the single infinite branch.
    OmegaPath,
    /// Ω′, the unfolding of `c → {w, c}`, `w → w`.
    Staircase,
    T(OrdinalIdx),
    S(OrdinalIdx),
    /// u_ω.
    U,
    /// v^i_ω.
    V(usize),
}

/// Generator names accepted by [`build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorName {
    Path,
    OmegaPath,
    Staircase,
    T,
    S,
    U,
    V,
}

/// One-hole templates that families range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Template {
    Path,
    T,
    V,
}

impl Template {
    pub fn instance(self, k: usize) -> Generator {
        match self {
            Template::Path => Generator::Path(k),
            Template::T => Generator::T(OrdinalIdx::Fin(k)),
            Template::V => Generator::V(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChildItem {
    Single(SchematicTree),
    /// `{template(k) : k < ω, k ≠ except}`.
    Family { template: Template, except: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SchematicTree {
    Gen(Generator),
    Root(Vec<ChildItem>),
}

impl From<Generator> for SchematicTree {
    fn from(g: Generator) -> Self {
        SchematicTree::Gen(g)
    }
}

fn single(g: Generator) -> ChildItem {
    ChildItem::Single(SchematicTree::Gen(g))
}

fn family(template: Template) -> ChildItem {
    ChildItem::Family { template, except: None }
}

impl Generator {
    /// The child items of the generator's root.
    pub fn items(self) -> Vec<ChildItem> {
        use OrdinalIdx::{Fin, Omega};
        match self {
            Generator::Path(0) => vec![],
            Generator::Path(n) => vec![single(Generator::Path(n - 1))],
            Generator::OmegaPath => vec![single(Generator::OmegaPath)],
            Generator::Staircase => vec![single(Generator::OmegaPath), single(Generator::Staircase)],
            Generator::T(Fin(0)) => vec![single(Generator::OmegaPath), family(Template::Path)],
            Generator::S(Fin(0)) => vec![family(Template::Path)],
            Generator::T(Fin(i)) => vec![single(Generator::T(Fin(i - 1)))],
            Generator::S(Fin(i)) => vec![single(Generator::S(Fin(i - 1)))],
            Generator::U => vec![family(Template::T)],
            Generator::V(i) => vec![
                ChildItem::Family { template: Template::T, except: Some(i) },
                single(Generator::S(Fin(i))),
            ],
            Generator::T(Omega) => vec![family(Template::V)],
            Generator::S(Omega) => vec![single(Generator::U), family(Template::V)],
        }
    }
}

impl SchematicTree {
    pub fn items(&self) -> Vec<ChildItem> {
        match self {
            SchematicTree::Gen(g) => g.items(),
            SchematicTree::Root(items) => items.clone(),
        }
    }

    /// Children with every family instantiated at the indices `0..=window`.
    pub fn children(&self, window: usize) -> Vec<SchematicTree> {
        let mut out = Vec::new();
        for item in self.items() {
            match item {
                ChildItem::Single(t) => out.push(t),
                ChildItem::Family { template, except } => out.extend(
                    (0..=window)
                        .filter(|&k| Some(k) != except)
                        .map(|k| SchematicTree::Gen(template.instance(k))),
                ),
            }
        }
        out
    }
}

/// The root-level expansion of a generator, e.g. `build(T, Fin(1))` is a root over `t_0`.
pub fn build(name: GeneratorName, idx: Option<OrdinalIdx>) -> Result<SchematicTree, GalleryError> {
    generator(name, idx).map(|g| SchematicTree::Root(g.items()))
}

/// The generator application named by `name` and `idx`, type-checked.
pub fn generator(name: GeneratorName, idx: Option<OrdinalIdx>) -> Result<Generator, GalleryError> {
    let ill = |generator: &'static str| GalleryError::IllTypedIndex {
        generator,
        index: idx.map_or("none".to_string(), |i| i.to_string()),
    };
    Ok(match (name, idx) {
        (GeneratorName::Path, Some(OrdinalIdx::Fin(n))) => Generator::Path(n),
        (GeneratorName::Path, _) => return Err(ill("path")),
        (GeneratorName::OmegaPath, None) => Generator::OmegaPath,
        (GeneratorName::OmegaPath, _) => return Err(ill("Ω")),
        (GeneratorName::Staircase, None) => Generator::Staircase,
        (GeneratorName::Staircase, _) => return Err(ill("Ω′")),
        (GeneratorName::T, Some(i)) => Generator::T(i),
        (GeneratorName::T, None) => return Err(ill("t")),
        (GeneratorName::S, Some(i)) => Generator::S(i),
        (GeneratorName::S, None) => return Err(ill("s")),
        (GeneratorName::U, None) => Generator::U,
        (GeneratorName::U, _) => return Err(ill("u")),
        (GeneratorName::V, Some(OrdinalIdx::Fin(i))) => Generator::V(i),
        (GeneratorName::V, _) => return Err(ill("v")),
    })
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Path(n) => write!(f, "path({n})"),
            Generator::OmegaPath => write!(f, "Ω"),
            Generator::Staircase => write!(f, "Ω′"),
            Generator::T(i) => write!(f, "t_{i}"),
            Generator::S(i) => write!(f, "s_{i}"),
            Generator::U => write!(f, "u_ω"),
            Generator::V(i) => write!(f, "v^{i}_ω"),
        }
    }
}

/// Accepts `path3`, `omega`, `staircase`, `t0`, `t_2`, `t_w`, `s_omega`, `u`, `v1`, and
/// the display forms.
impl FromStr for Generator {
    type Err = GalleryError;

    fn from_str(s: &str) -> Result<Self, GalleryError> {
        let unknown = || GalleryError::UnknownTree(s.to_string());
        let lower = s.trim().to_lowercase();
        match lower.as_str() {
            "omega" | "ω" | "omegapath" => return Ok(Generator::OmegaPath),
            "omega'" | "ω′" | "ω'" | "staircase" | "omegaprime" => return Ok(Generator::Staircase),
            "u" | "u_ω" | "u_w" | "u_omega" => return Ok(Generator::U),
            _ => {}
        }
        let parse_idx = |rest: &str| -> Option<OrdinalIdx> {
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            rest.parse().ok()
        };
        let (name, idx) = if let Some(rest) = lower.strip_prefix("path") {
            (GeneratorName::Path, parse_idx(rest).ok_or_else(unknown)?)
        } else if let Some(rest) = lower.strip_prefix('t') {
            (GeneratorName::T, parse_idx(rest).ok_or_else(unknown)?)
        } else if let Some(rest) = lower.strip_prefix('s') {
            (GeneratorName::S, parse_idx(rest).ok_or_else(unknown)?)
        } else if let Some(rest) = lower.strip_prefix("v^") {
            let rest = rest.strip_suffix("_ω").or_else(|| rest.strip_suffix("_w")).unwrap_or(rest);
            (GeneratorName::V, rest.parse().map_err(|_| unknown())?)
        } else if let Some(rest) = lower.strip_prefix('v') {
            (GeneratorName::V, parse_idx(rest).ok_or_else(unknown)?)
        } else {
            return Err(unknown());
        };
        generator(name, Some(idx))
    }
}

impl fmt::Display for ChildItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChildItem::Single(t) => write!(f, "{t}"),
            ChildItem::Family { template, except } => {
                let k = match template {
                    Template::Path => "path(k)".to_string(),
                    Template::T => "t_k".to_string(),
                    Template::V => "v^k_ω".to_string(),
                };
                match except {
                    None => write!(f, "{k} : k<ω"),
                    Some(i) => write!(f, "{k} : k≠{i}"),
                }
            }
        }
    }
}

impl fmt::Display for SchematicTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchematicTree::Gen(g) => write!(f, "{g}"),
            SchematicTree::Root(items) => {
                let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
                write!(f, "root{{{}}}", parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The extensional cuts differ at this depth.
    Cut { level: usize },
    /// A child of one tree has no `≈_level` partner among the children of the other.
    UnmatchedChild { side: Side, child: SchematicTree, level: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Distinguished(Witness),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent => write!(f, "equivalent"),
            Verdict::Distinguished(Witness::Cut { level }) => write!(f, "distinguished (cuts differ at level {level})"),
            Verdict::Distinguished(Witness::UnmatchedChild { side, child, level }) => {
                let side = match side {
                    Side::Left => "left",
                    Side::Right => "right",
                };
                write!(f, "distinguished (child {child} of the {side} tree has no ≈_{level} partner)")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Window {
    /// Families are instantiated at `0..=max(K, depth + 1)`.
    Adaptive,
    /// Families are instantiated at exactly `0..=K`.
    Exact,
}

/// Memoizing engine for cuts and stratified checks under fixed bounds.
#[derive(Debug, Clone)]
pub struct Gallery {
    depth: usize,
    family_bound: usize,
    codes: TreeCodes,
    cuts: HashMap<(SchematicTree, usize), u32>,
    verdicts: HashMap<(SchematicTree, SchematicTree, usize), Verdict>,
}

impl Gallery {
    /// `depth` is the cut depth D deciding `≈_0`; `family_bound` is K.
    pub fn new(depth: usize, family_bound: usize) -> Self {
        Gallery {
            depth,
            family_bound,
            codes: TreeCodes::new(),
            cuts: HashMap::new(),
            verdicts: HashMap::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn family_bound(&self) -> usize {
        self.family_bound
    }

    /// Code of the extensional quotient of `t|_n`, families instantiated adaptively.
    pub fn cut_code(&mut self, t: &SchematicTree, n: usize) -> Result<u32, GalleryError> {
        self.cut_code_with(t, n, Window::Adaptive)
    }

    pub fn cut(&mut self, t: &SchematicTree, n: usize) -> Result<ETree, GalleryError> {
        let code = self.cut_code(t, n)?;
        Ok(self.codes.build(code))
    }

    fn cut_code_with(&mut self, t: &SchematicTree, n: usize, window: Window) -> Result<u32, GalleryError> {
        if n == 0 {
            return Ok(self.codes.leaf());
        }
        if window == Window::Adaptive {
            if let Some(&c) = self.cuts.get(&(t.clone(), n)) {
                return Ok(c);
            }
        }
        let mut kids = Vec::new();
        for item in t.items() {
            match item {
                ChildItem::Single(c) => kids.push(self.cut_code_with(&c, n - 1, window)?),
                ChildItem::Family { template, except } => {
                    let w = match window {
                        Window::Adaptive => self.family_bound.max(n + 1),
                        Window::Exact => self.family_bound,
                    };
                    let indices: Vec<usize> = (0..=w).filter(|&k| Some(k) != except).collect();
                    let mut codes = Vec::with_capacity(indices.len());
                    for &k in &indices {
                        codes.push(self.cut_code_with(&SchematicTree::Gen(template.instance(k)), n - 1, window)?);
                    }
                    let stable = codes.len() >= 2 && codes[codes.len() - 1] == codes[codes.len() - 2];
                    if !stable {
                        return Err(GalleryError::NotStabilized {
                            family: format!("{{{}}}", ChildItem::Family { template, except }),
                            depth: n - 1,
                            window: w,
                        });
                    }
                    kids.extend(codes);
                }
            }
        }
        let code = self.codes.intern_set(kids);
        if window == Window::Adaptive {
            self.cuts.insert((t.clone(), n), code);
        }
        Ok(code)
    }

    /// Decides `t ≈_i s` within the engine's bounds.
    pub fn check(&mut self, t: &SchematicTree, s: &SchematicTree, i: usize) -> Result<Verdict, GalleryError> {
        let key = (t.clone(), s.clone(), i);
        if let Some(v) = self.verdicts.get(&key) {
            return Ok(v.clone());
        }
        let verdict = if i == 0 {
            let mut verdict = Verdict::Equivalent;
            for n in 1..=self.depth {
                if self.cut_code(t, n)? != self.cut_code(s, n)? {
                    verdict = Verdict::Distinguished(Witness::Cut { level: n });
                    break;
                }
            }
            verdict
        } else {
            let left = t.children(self.family_bound);
            let right = s.children(self.family_bound);
            let mut verdict = Verdict::Equivalent;
            'levels: for j in 0..i {
                for (side, from, to) in [(Side::Left, &left, &right), (Side::Right, &right, &left)] {
                    for c in from {
                        let mut matched = false;
                        for d in to {
                            let found = match side {
                                Side::Left => self.check(c, d, j)?,
                                Side::Right => self.check(d, c, j)?,
                            };
                            if found.is_equivalent() {
                                matched = true;
                                break;
                            }
                        }
                        if !matched {
                            verdict = Verdict::Distinguished(Witness::UnmatchedChild { side, child: c.clone(), level: j });
                            break 'levels;
                        }
                    }
                }
            }
            verdict
        };
        self.verdicts.insert(key, verdict.clone());
        Ok(verdict)
    }
}

/// Extensional quotient of `t|_n`. Each family is instantiated at `0..=max(K, n + 1)`
/// and its last two instance cuts must agree.
pub fn cut_schematic(t: &SchematicTree, n: usize, k: usize) -> Result<ETree, GalleryError> {
    check_cut_bounds(n, k)?;
    Gallery::new(n, k).cut(t, n)
}

/// Like [`cut_schematic`] but instantiating families at exactly `0..=K`, so a
/// too-small `K` is reported instead of widened.
pub fn cut_schematic_strict(t: &SchematicTree, n: usize, k: usize) -> Result<ETree, GalleryError> {
    check_cut_bounds(n, k)?;
    let mut g = Gallery::new(n, k);
    let code = g.cut_code_with(t, n, Window::Exact)?;
    Ok(g.codes.build(code))
}

fn check_cut_bounds(n: usize, k: usize) -> Result<(), GalleryError> {
    if n > MAX_CUT_DEPTH {
        return Err(bound_error("cut depth", n, format!("at most {MAX_CUT_DEPTH}")));
    }
    if k < MIN_CUT_FAMILY_BOUND {
        return Err(bound_error("family bound", k, format!("at least {MIN_CUT_FAMILY_BOUND}")));
    }
    Ok(())
}

/// Checks `t ≈_i s` with `≈_0` decided by cuts up to depth `d` and families
/// instantiated at indices `0..=k` on both sides.
pub fn stratified_check(t: &SchematicTree, s: &SchematicTree, i: usize, d: usize, k: usize) -> Result<Verdict, GalleryError> {
    check_stratified_bounds(d, k)?;
    Gallery::new(d, k).check(t, s, i)
}

fn check_stratified_bounds(d: usize, k: usize) -> Result<(), GalleryError> {
    if d < MIN_CHECK_BOUND {
        return Err(bound_error("depth bound", d, format!("at least {MIN_CHECK_BOUND}")));
    }
    if k < MIN_CHECK_BOUND {
        return Err(bound_error("family bound", k, format!("at least {MIN_CHECK_BOUND}")));
    }
    Ok(())
}

/// One displayed cut: a set of trees that must all cut to `expected` at depth `n`.
#[derive(Debug, Clone)]
pub struct CutRow {
    pub label: &'static str,
    pub n: usize,
    pub trees: Vec<Generator>,
    pub expected: ETree,
}

fn fins(range: std::ops::RangeInclusive<usize>) -> impl Iterator<Item = OrdinalIdx> {
    range.map(OrdinalIdx::Fin)
}

fn t_and_s(indices: impl IntoIterator<Item = OrdinalIdx>) -> Vec<Generator> {
    indices.into_iter().flat_map(|i| [Generator::T(i), Generator::S(i)]).collect()
}

/// The displayed cut table, instantiated at family indices `0..=TABLE_INDICES`.
pub fn cut_table() -> Vec<CutRow> {
    use OrdinalIdx::{Fin, Omega};
    let top = TABLE_INDICES;
    let leaf = ETree::leaf;
    let p = ETree::path;
    let node = ETree::node;
    let mut every: Vec<Generator> = t_and_s(fins(0..=top).chain([Omega]));
    every.push(Generator::U);
    every.extend((0..=top).map(Generator::V));
    let u_and_v = || {
        let mut v = vec![Generator::U];
        v.extend((0..=top).map(Generator::V));
        v
    };
    let limit3 = node(vec![node(vec![leaf(), p(1)]), p(2)]);
    vec![
        CutRow { label: "every gallery tree at n=1", n: 1, trees: every, expected: p(1) },
        CutRow { label: "t_0|2 = s_0|2", n: 2, trees: t_and_s([Fin(0)]), expected: node(vec![leaf(), p(1)]) },
        CutRow { label: "t_i|2 = s_i|2, i>=1", n: 2, trees: t_and_s(fins(1..=top).chain([Omega])), expected: p(2) },
        CutRow { label: "u|2 = v^i|2", n: 2, trees: u_and_v(), expected: p(2) },
        CutRow { label: "t_0|3 = s_0|3", n: 3, trees: t_and_s([Fin(0)]), expected: node(vec![leaf(), p(1), p(2)]) },
        CutRow {
            label: "t_1|3 = s_1|3",
            n: 3,
            trees: t_and_s([Fin(1)]),
            expected: node(vec![node(vec![leaf(), p(1)])]),
        },
        CutRow { label: "t_i|3 = s_i|3, i>=2", n: 3, trees: t_and_s(fins(2..=top).chain([Omega])), expected: p(3) },
        CutRow { label: "u|3 = v^i|3", n: 3, trees: u_and_v(), expected: limit3.clone() },
        CutRow {
            label: "t_0|4 = s_0|4",
            n: 4,
            trees: t_and_s([Fin(0)]),
            expected: node(vec![leaf(), p(1), p(2), p(3)]),
        },
        CutRow {
            label: "t_1|4 = s_1|4",
            n: 4,
            trees: t_and_s([Fin(1)]),
            expected: node(vec![node(vec![leaf(), p(1), p(2)])]),
        },
        CutRow {
            label: "t_2|4 = s_2|4",
            n: 4,
            trees: t_and_s([Fin(2)]),
            expected: node(vec![node(vec![node(vec![leaf(), p(1)])])]),
        },
        CutRow { label: "t_i|4 = s_i|4, isolated i>=3", n: 4, trees: t_and_s(fins(3..=top)), expected: p(4) },
        CutRow { label: "t_ω|4 = s_ω|4", n: 4, trees: t_and_s([Omega]), expected: node(vec![limit3]) },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub title: String,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct GalleryReport {
    pub depth: usize,
    pub family_bound: usize,
    pub claims: Vec<Claim>,
    /// Finite instances of the cross-index separations; reported, not gated.
    pub informational: Vec<String>,
}

impl GalleryReport {
    pub fn passed(&self) -> usize {
        self.claims.iter().filter(|c| c.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.claims.len()
    }

    pub fn summary(&self) -> String {
        format!("claims={} pass={}", self.claims.len(), self.passed())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "bounds: depth D={}, family bound K={} (equivalent verdicts hold within these bounds)\n",
            self.depth, self.family_bound
        );
        for c in &self.claims {
            out.push_str(&format!("\n[{}] {}\n  {}\n", if c.pass { "PASS" } else { "FLAG" }, c.title, c.detail));
        }
        if !self.informational.is_empty() {
            out.push_str("\ninformational:\n");
            for line in &self.informational {
                out.push_str(&format!("  {line}\n"));
            }
        }
        out.push('\n');
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}

/// For each `i <= i_max`: `t_i ≈_i s_i` and `t_i ≉_{i+1} s_i`, then the cut table.
pub fn reproduce_counterexamples(i_max: usize, d: usize, k: usize) -> Result<GalleryReport, GalleryError> {
    if i_max > MAX_REPORT_INDEX {
        return Err(bound_error("theorem index", i_max, format!("at most {MAX_REPORT_INDEX}")));
    }
    check_stratified_bounds(d, k)?;
    let mut g = Gallery::new(d, k);
    let mut claims = Vec::new();
    for i in 0..=i_max {
        let t = SchematicTree::Gen(Generator::T(OrdinalIdx::Fin(i)));
        let s = SchematicTree::Gen(Generator::S(OrdinalIdx::Fin(i)));
        let same = g.check(&t, &s, i)?;
        claims.push(Claim {
            title: format!("t_{i} ≈_{i} s_{i}"),
            detail: same.to_string(),
            pass: same.is_equivalent(),
        });
        let next = g.check(&t, &s, i + 1)?;
        claims.push(Claim {
            title: format!("t_{i} ≉_{} s_{i}", i + 1),
            detail: next.to_string(),
            pass: !next.is_equivalent(),
        });
    }
    for row in cut_table() {
        let mut codes = TreeCodes::new();
        let expected = codes.code_of(&row.expected);
        let mut mismatches = Vec::new();
        for tree in &row.trees {
            let got = cut_schematic(&SchematicTree::Gen(*tree), row.n, k)?;
            if codes.code_of(&got) != expected {
                mismatches.push(format!("{tree} gives {got}"));
            }
        }
        claims.push(Claim {
            title: format!("cut table {}", row.label),
            detail: if mismatches.is_empty() {
                format!("match: {} trees cut to {}", row.trees.len(), row.expected)
            } else {
                format!("mismatch: {}; displayed {}", mismatches.join(", "), row.expected)
            },
            pass: mismatches.is_empty(),
        });
    }
    let mut informational = Vec::new();
    let top = (i_max + 1).min(MAX_REPORT_INDEX);
    for kk in 1..=top {
        let tk = SchematicTree::Gen(Generator::T(OrdinalIdx::Fin(kk)));
        for i in 0..kk {
            for (name, other) in [("t", Generator::T(OrdinalIdx::Fin(i))), ("s", Generator::S(OrdinalIdx::Fin(i)))] {
                let v = g.check(&SchematicTree::Gen(other), &tk, i + 2)?;
                informational.push(format!(
                    "{name}_{i} ≉_{} t_{kk}: {v}{}",
                    i + 2,
                    if v.is_equivalent() { " (not separated within bounds)" } else { "" }
                ));
            }
        }
    }
    Ok(GalleryReport { depth: d, family_bound: k, claims, informational })
}
