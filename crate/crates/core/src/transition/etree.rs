//! Unordered finite trees, canonical codes, and extensional quotients.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// An unordered finite tree. Children form a multiset; subtrees may be shared.
#[derive(Clone)]
pub struct ETree {
    children: Arc<[ETree]>,
}

impl ETree {
    pub fn leaf() -> Self {
        ETree { children: Arc::from(Vec::new()) }
    }

    pub fn node(children: Vec<ETree>) -> Self {
        ETree { children: Arc::from(children) }
    }

    /// A path with `n` edges (`n + 1` nodes).
    pub fn path(n: usize) -> Self {
        (0..n).fold(ETree::leaf(), |t, _| ETree::node(vec![t]))
    }

    pub fn children(&self) -> &[ETree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Node count, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ETree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    fn ptr(&self) -> *const () {
        Arc::as_ptr(&self.children) as *const ()
    }

    /// The tree truncated so that nodes at depth `n` have no children.
    pub fn cut(&self, n: usize) -> ETree {
        if n == 0 {
            ETree::leaf()
        } else {
            ETree::node(self.children.iter().map(|c| c.cut(n - 1)).collect())
        }
    }

    /// Indented plain-text rendering, children in canonical order.
    pub fn render(&self) -> String {
        fn go(t: &ETree, prefix: &str, out: &mut String) {
            let mut kids: Vec<&ETree> = t.children.iter().collect();
            kids.sort_by_cached_key(|c| canonical_code(c));
            for (i, c) in kids.iter().enumerate() {
                let last = i + 1 == kids.len();
                out.push_str(prefix);
                out.push_str(if last { "└─•\n" } else { "├─•\n" });
                let next = format!("{prefix}{}", if last { "  " } else { "│ " });
                go(c, &next, out);
            }
        }
        let mut out = String::from("•\n");
        go(self, "", &mut out);
        out
    }
}

impl fmt::Debug for ETree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ETree{}", canonical_code(self))
    }
}

/// Parenthesised canonical code: `()` for a leaf; otherwise the child codes
/// sorted lexicographically and wrapped in one pair of parentheses.
impl fmt::Display for ETree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical_code(self))
    }
}

/// Canonical code of the unordered tree `t`; equal codes iff isomorphic trees.
pub fn canonical_code(t: &ETree) -> String {
    let mut codes: Vec<String> = t.children.iter().map(canonical_code).collect();
    codes.sort();
    let mut out = String::with_capacity(2 + codes.iter().map(String::len).sum::<usize>());
    out.push('(');
    for c in codes {
        out.push_str(&c);
    }
    out.push(')');
    out
}

/// Hash-consing table of unordered trees. A code is a small integer standing
/// for the sorted sequence of its children's codes, so two trees interned in the
/// same table are isomorphic iff they receive the same code.
#[derive(Debug, Default, Clone)]
pub struct TreeCodes {
    table: HashMap<Arc<[u32]>, u32>,
    entries: Vec<Arc<[u32]>>,
}

impl TreeCodes {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns a node whose children have the given codes (any order, duplicates kept).
    pub fn intern_multiset(&mut self, mut children: Vec<u32>) -> u32 {
        children.sort_unstable();
        self.intern_sorted(children)
    }

    /// Interns the node whose child set is the given codes (duplicates collapsed).
    pub fn intern_set(&mut self, mut children: Vec<u32>) -> u32 {
        children.sort_unstable();
        children.dedup();
        self.intern_sorted(children)
    }

    fn intern_sorted(&mut self, children: Vec<u32>) -> u32 {
        if let Some(&code) = self.table.get(children.as_slice()) {
            return code;
        }
        let code = u32::try_from(self.entries.len()).expect("tree code table overflow");
        let key: Arc<[u32]> = Arc::from(children);
        self.entries.push(key.clone());
        self.table.insert(key, code);
        code
    }

    pub fn leaf(&mut self) -> u32 {
        self.intern_sorted(Vec::new())
    }

    pub fn children(&self, code: u32) -> &[u32] {
        &self.entries[code as usize]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiset code of `t` (structure kept, order forgotten).
    pub fn code_of(&mut self, t: &ETree) -> u32 {
        let mut memo = HashMap::new();
        self.code_of_memo(t, &mut memo, false)
    }

    /// Code of the extensional quotient of `t`.
    pub fn quotient_code_of(&mut self, t: &ETree) -> u32 {
        let mut memo = HashMap::new();
        self.code_of_memo(t, &mut memo, true)
    }

    fn code_of_memo(&mut self, t: &ETree, memo: &mut HashMap<*const (), u32>, quotient: bool) -> u32 {
        if let Some(&c) = memo.get(&t.ptr()) {
            return c;
        }
        let kids = t.children.iter().map(|c| self.code_of_memo(c, memo, quotient)).collect();
        let code = if quotient { self.intern_set(kids) } else { self.intern_multiset(kids) };
        memo.insert(t.ptr(), code);
        code
    }

    /// Materialises the tree behind `code`, sharing equal subtrees.
    pub fn build(&self, code: u32) -> ETree {
        fn go(codes: &TreeCodes, code: u32, memo: &mut HashMap<u32, ETree>) -> ETree {
            if let Some(t) = memo.get(&code) {
                return t.clone();
            }
            let kids = codes.children(code).iter().map(|&c| go(codes, c, memo)).collect();
            let t = ETree::node(kids);
            memo.insert(code, t.clone());
            t
        }
        go(self, code, &mut HashMap::new())
    }
}

/// Isomorphism of unordered trees.
pub fn tree_iso(t: &ETree, s: &ETree) -> bool {
    let mut codes = TreeCodes::new();
    codes.code_of(t) == codes.code_of(s)
}

/// Bottom-up canonicalisation that merges siblings rooting isomorphic subtrees.
pub fn extensional_quotient(t: &ETree) -> ETree {
    let mut codes = TreeCodes::new();
    let code = codes.quotient_code_of(t);
    codes.build(code)
}

/// Whether distinct siblings root non-isomorphic subtrees, at every node.
pub fn is_extensional(t: &ETree) -> bool {
    fn go(t: &ETree, codes: &mut TreeCodes, memo: &mut HashMap<*const (), Option<u32>>) -> Option<u32> {
        if let Some(&c) = memo.get(&t.ptr()) {
            return c;
        }
        let mut kids = Vec::with_capacity(t.children.len());
        let mut ok = true;
        for c in t.children.iter() {
            match go(c, codes, memo) {
                Some(code) => kids.push(code),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        let result = ok
            .then(|| {
                kids.sort_unstable();
                let n = kids.len();
                kids.dedup();
                (kids.len() == n).then(|| codes.intern_sorted(kids))
            })
            .flatten();
        memo.insert(t.ptr(), result);
        result
    }
    go(t, &mut TreeCodes::new(), &mut HashMap::new()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn arb_tree() -> impl Strategy<Value = ETree> {
        let leaf = Just(ETree::leaf());
        leaf.prop_recursive(5, 48, 3, |inner| prop::collection::vec(inner, 0..4).prop_map(ETree::node))
    }

    #[test]
    fn isomorphism_examples() {
        assert!(tree_iso(&ETree::path(3), &ETree::path(3)));
        assert!(!tree_iso(&ETree::path(2), &ETree::path(3)));
        let a = ETree::path(2);
        let b = ETree::node(vec![ETree::leaf(), ETree::leaf()]);
        assert!(tree_iso(&ETree::node(vec![a.clone(), b.clone()]), &ETree::node(vec![b, a])));
    }

    #[test]
    fn quotient_merges_isomorphic_siblings() {
        let t = ETree::node(vec![ETree::leaf(), ETree::leaf()]);
        let e = extensional_quotient(&t);
        assert!(tree_iso(&e, &ETree::path(1)));
        assert!(!is_extensional(&t));
        assert!(is_extensional(&e));
        let already = ETree::node(vec![ETree::leaf(), ETree::path(1)]);
        assert!(tree_iso(&extensional_quotient(&already), &already));
    }

    #[test]
    fn canonical_codes() {
        assert_eq!(canonical_code(&ETree::leaf()), "()");
        assert_eq!(canonical_code(&ETree::path(2)), "((()))");
        let t = ETree::node(vec![ETree::path(1), ETree::leaf()]);
        assert_eq!(t.to_string(), "((())())");
        assert_eq!(ETree::path(1).render(), "•\n└─•\n");
    }

    #[test]
    fn build_round_trips_codes() {
        let t = ETree::node(vec![ETree::path(2), ETree::node(vec![ETree::leaf(), ETree::path(1)])]);
        let mut codes = TreeCodes::new();
        let c = codes.code_of(&t);
        assert!(tree_iso(&codes.build(c), &t));
    }

    proptest! {
        #[test]
        fn quotient_is_idempotent_and_extensional(t in arb_tree()) {
            let e = extensional_quotient(&t);
            prop_assert!(is_extensional(&e));
            prop_assert!(tree_iso(&extensional_quotient(&e), &e));
        }

        #[test]
        fn quotient_commutes_with_cuts(t in arb_tree(), n in 0usize..=8) {
            let e = extensional_quotient(&t);
            prop_assert!(tree_iso(
                &extensional_quotient(&t.cut(n)),
                &extensional_quotient(&e.cut(n)),
            ));
        }

        #[test]
        fn codes_agree_with_string_codes(t in arb_tree(), s in arb_tree()) {
            prop_assert_eq!(tree_iso(&t, &s), canonical_code(&t) == canonical_code(&s));
        }
    }
}
