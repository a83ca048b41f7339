use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

/// A hereditarily finite set in canonical form.
///
/// Elements are kept sorted by canonical code (shorter codes first, then
/// lexicographic), so equality is code equality.
#[derive(Clone)]
pub struct HFSet(Arc<Inner>);

struct Inner {
    code: String,
    elements: Vec<HFSet>,
    rank: usize,
}

fn code_order(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl HFSet {
    pub fn empty() -> Self {
        HFSet(Arc::new(Inner {
            code: "{}".to_string(),
            elements: Vec::new(),
            rank: 0,
        }))
    }

    pub fn from_elements<I: IntoIterator<Item = HFSet>>(elements: I) -> Self {
        let mut elements: Vec<HFSet> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        Self::from_sorted_unique(elements)
    }

    /// `elements` must already be strictly increasing in canonical order.
    pub(crate) fn from_sorted_unique(elements: Vec<HFSet>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let mut code = String::with_capacity(2 + elements.iter().map(|e| e.0.code.len() + 1).sum::<usize>());
        code.push('{');
        for (i, e) in elements.iter().enumerate() {
            if i > 0 {
                code.push(',');
            }
            code.push_str(&e.0.code);
        }
        code.push('}');
        let rank = elements.iter().map(|e| e.rank() + 1).max().unwrap_or(0);
        HFSet(Arc::new(Inner { code, elements, rank }))
    }

    /// `{x}`.
    pub fn singleton(x: HFSet) -> Self {
        Self::from_sorted_unique(vec![x])
    }

    pub fn elements(&self) -> &[HFSet] {
        &self.0.elements
    }

    pub fn card(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.elements.binary_search(x).is_ok()
    }

    /// Brace-notation canonical code, e.g. `{{},{{}}}`.
    pub fn code(&self) -> &str {
        &self.0.code
    }

    /// Least `i` with the set in `W_{i+1}`: 0 for the empty set, one more than the
    /// largest element rank otherwise.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// The von Neumann natural `n`.
    pub fn von_neumann(n: usize) -> Self {
        let mut acc: Vec<HFSet> = Vec::new();
        for _ in 0..n {
            let next = HFSet::from_elements(acc.iter().cloned());
            acc.push(next);
        }
        HFSet::from_elements(acc)
    }
}

impl PartialEq for HFSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.code == other.0.code
    }
}

impl Eq for HFSet {}

impl Ord for HFSet {
    fn cmp(&self, other: &Self) -> Ordering {
        code_order(&self.0.code, &other.0.code)
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for HFSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.code.hash(state);
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.code)
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HFSet{}", self.0.code)
    }
}

impl FromStr for HFSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn parse(chars: &[char], pos: &mut usize) -> Result<HFSet, String> {
            let skip = |pos: &mut usize| {
                while *pos < chars.len() && chars[*pos].is_whitespace() {
                    *pos += 1;
                }
            };
            skip(pos);
            if chars.get(*pos) != Some(&'{') {
                return Err(format!("expected `{{` at offset {}", *pos));
            }
            *pos += 1;
            let mut elems = Vec::new();
            skip(pos);
            if chars.get(*pos) == Some(&'}') {
                *pos += 1;
                return Ok(HFSet::empty());
            }
            loop {
                elems.push(parse(chars, pos)?);
                skip(pos);
                match chars.get(*pos) {
                    Some(',') => *pos += 1,
                    Some('}') => {
                        *pos += 1;
                        return Ok(HFSet::from_elements(elems));
                    }
                    _ => return Err(format!("expected `,` or `}}` at offset {}", *pos)),
                }
            }
        }
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        let set = parse(&chars, &mut pos)?;
        if chars[pos..].iter().any(|c| !c.is_whitespace()) {
            return Err(format!("trailing input at offset {pos}"));
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_codes() {
        let e = HFSet::empty();
        let one = HFSet::singleton(e.clone());
        let two = HFSet::from_elements([one.clone(), e.clone(), e.clone()]);
        assert_eq!(e.to_string(), "{}");
        assert_eq!(one.to_string(), "{{}}");
        assert_eq!(two.to_string(), "{{},{{}}}");
        assert_eq!(two, HFSet::von_neumann(2));
        assert_eq!(two.rank(), 2);
        assert!(two.contains(&one));
        assert!(!one.contains(&one));
    }

    #[test]
    fn parses_brace_notation() {
        let x: HFSet = "{ {{}}, {} , {}}".parse().unwrap();
        assert_eq!(x.code(), "{{},{{}}}");
        assert!("{".parse::<HFSet>().is_err());
        assert!("{}}".parse::<HFSet>().is_err());
        assert!("{{} {}}".parse::<HFSet>().is_err());
    }
}
