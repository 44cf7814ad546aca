//! Families of orderly tuples of located words.
//!
//! Families are stored as prefix tries keyed by word. Closures are computed
//! relative to a finite pool of variable words, and Cantor-Bendixson
//! derivatives replace "contains an infinite increasing sequence" by "contains
//! an increasing chain as long as the pool allows, capped at `τ`".

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ordinals::Ordinal;
use crate::schreier::{self, CanonicalDecomposition};
use crate::words::{self, LocatedWord, OrderlyTuple, Profile, TupleMode, WordError};

pub const DEFAULT_TAU: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("word {0} is not in the pool")]
    PoolMissing(String),
    #[error("family is not hereditary relative to the pool")]
    NotHereditary,
    #[error("threshold must be at least 1")]
    ZeroThreshold,
    #[error("ground set of size {n} cannot certify index of A_{m} with threshold {tau}")]
    GroundTooSmall { n: u64, m: u64, tau: usize },
    #[error("projected positions {0:?} are not strictly increasing")]
    ProjectionNotIncreasing(Vec<u64>),
    #[error("word {0} has no position on the requested side")]
    MissingSide(String),
    #[error("derivative stopped shrinking")]
    Stalled,
    #[error("line {line}: {source}")]
    Line { line: usize, source: WordError },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Node {
    terminal: bool,
    children: BTreeMap<LocatedWord, Node>,
}

impl Node {
    fn collect(&self, prefix: &mut Vec<LocatedWord>, out: &mut Vec<Vec<LocatedWord>>) {
        if self.terminal {
            out.push(prefix.clone());
        }
        for (w, child) in &self.children {
            prefix.push(w.clone());
            child.collect(prefix, out);
            prefix.pop();
        }
    }

    fn count(&self) -> usize {
        self.terminal as usize + self.children.values().map(Node::count).sum::<usize>()
    }
}

/// A finite family of `<_R1`-increasing tuples; the empty tuple may be a member.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordFamily {
    root: Node,
}

impl WordFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tuples<I>(tuples: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = Vec<LocatedWord>>,
    {
        let mut f = Self::new();
        for t in tuples {
            f.insert(t)?;
        }
        Ok(f)
    }

    /// Inserts a tuple after validating it. Returns whether it was new.
    pub fn insert(&mut self, tuple: Vec<LocatedWord>) -> Result<bool, FamilyError> {
        let tuple = OrderlyTuple::new(tuple, TupleMode::Surround)?.into_words();
        Ok(self.insert_unchecked(tuple))
    }

    fn insert_unchecked(&mut self, tuple: Vec<LocatedWord>) -> bool {
        let mut node = &mut self.root;
        for w in tuple {
            node = node.children.entry(w).or_default();
        }
        !std::mem::replace(&mut node.terminal, true)
    }

    fn node(&self, tuple: &[LocatedWord]) -> Option<&Node> {
        let mut node = &self.root;
        for w in tuple {
            node = node.children.get(w)?;
        }
        Some(node)
    }

    pub fn contains(&self, tuple: &[LocatedWord]) -> bool {
        self.node(tuple).is_some_and(|n| n.terminal)
    }

    /// Members in canonical (trie pre-order) order.
    pub fn tuples(&self) -> Vec<Vec<LocatedWord>> {
        let mut out = Vec::new();
        self.root.collect(&mut Vec::new(), &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.root.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn words(&self) -> BTreeSet<LocatedWord> {
        self.tuples().into_iter().flatten().collect()
    }

    pub fn is_subset(&self, other: &WordFamily) -> bool {
        self.tuples().iter().all(|t| other.contains(t))
    }

    /// Closed under initial segments.
    pub fn is_tree(&self) -> bool {
        self.tuples()
            .iter()
            .all(|t| (0..t.len()).all(|k| self.contains(&t[..k])))
    }

    /// `F*`: adds every initial segment of every member.
    pub fn tree_closure(&self) -> WordFamily {
        let mut out = WordFamily::new();
        for t in self.tuples() {
            for k in 0..=t.len() {
                out.insert_unchecked(t[..k].to_vec());
            }
        }
        out
    }

    /// Parses one tuple per line. `#` starts a comment; a line that is empty
    /// before any comment denotes the empty tuple, a comment-only line is skipped.
    pub fn parse(text: &str, profile: &Profile) -> Result<Self, FamilyError> {
        let mut f = WordFamily::new();
        for (i, raw) in text.lines().enumerate() {
            let (body, had_comment) = match raw.split_once('#') {
                Some((b, _)) => (b, true),
                None => (raw, false),
            };
            let body = body.trim();
            if body.is_empty() && had_comment {
                continue;
            }
            let t = OrderlyTuple::parse(body, profile, TupleMode::Surround)
                .map_err(|source| FamilyError::Line { line: i + 1, source })?;
            f.insert_unchecked(t.into_words());
        }
        Ok(f)
    }
}

impl fmt::Display for WordFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.tuples() {
            words::write_tuple(f, &t)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

/// Membership in the `ξ`-th tuple family: the smallest positive positions
/// (or the magnitudes of the largest negative positions) form a member of `A_ξ`.
pub fn l_xi_member(bw: &[LocatedWord], xi: &Ordinal, side: Side) -> Result<bool, FamilyError> {
    let proj = project(bw, side)?;
    if proj.windows(2).any(|p| p[0] >= p[1]) {
        return Err(FamilyError::ProjectionNotIncreasing(proj));
    }
    Ok(schreier::is_member(&proj, xi))
}

fn project(bw: &[LocatedWord], side: Side) -> Result<Vec<u64>, FamilyError> {
    bw.iter()
        .map(|w| {
            let p = match side {
                Side::Positive => w.min_pos_positive(),
                Side::Negative => w.max_pos_negative(),
            };
            p.map(|p| p.unsigned_abs())
                .ok_or_else(|| FamilyError::MissingSide(w.to_string()))
        })
        .collect()
}

/// Word-level canonical representation: blocks of the tuple whose positive
/// projections are `A_ξ` blocks, then an optional remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleDecomposition {
    pub blocks: Vec<Vec<LocatedWord>>,
    pub remainder: Option<Vec<LocatedWord>>,
}

pub fn canonical_decompose_tuple(
    bw: &[LocatedWord],
    xi: &Ordinal,
) -> Result<TupleDecomposition, FamilyError> {
    let proj = project(bw, Side::Positive)?;
    if proj.windows(2).any(|p| p[0] >= p[1]) {
        return Err(FamilyError::ProjectionNotIncreasing(proj));
    }
    let CanonicalDecomposition { blocks, remainder } = schreier::canonical_decompose(&proj, xi);
    let mut rest = bw;
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let (head, tail) = rest.split_at(b.len());
        out.push(head.to_vec());
        rest = tail;
    }
    debug_assert_eq!(remainder.as_ref().map_or(0, |r| r.len()), rest.len());
    Ok(TupleDecomposition {
        blocks: out,
        remainder: (!rest.is_empty()).then(|| rest.to_vec()),
    })
}

/// `F(t)`: tails of members that start with `t`.
pub fn family_at(f: &WordFamily, t: &LocatedWord) -> WordFamily {
    f.root
        .children
        .get(t)
        .map(|n| WordFamily { root: n.clone() })
        .unwrap_or_default()
}

/// `F − t`: members whose first word lies above `t`, together with `∅`.
pub fn family_minus(f: &WordFamily, t: &LocatedWord) -> WordFamily {
    let mut root = f.root.clone();
    root.terminal = true;
    root.children.retain(|w, _| words::rel_r1(t, w));
    WordFamily { root }
}

/// A finite set of words with their `<_R1` comparabilities.
#[derive(Debug, Clone)]
pub struct Pool {
    words: Vec<LocatedWord>,
    index: BTreeMap<LocatedWord, usize>,
    space: ChainSpace,
}

impl Pool {
    pub fn new(words: impl IntoIterator<Item = LocatedWord>) -> Self {
        let words: Vec<LocatedWord> = words
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let above = words
            .iter()
            .map(|a| words.iter().map(|b| words::rel_r1(a, b)).collect())
            .collect();
        Pool {
            words,
            index,
            space: ChainSpace { above },
        }
    }

    pub fn words(&self) -> &[LocatedWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    fn index_of(&self, w: &LocatedWord) -> Result<usize, FamilyError> {
        self.index
            .get(w)
            .copied()
            .ok_or_else(|| FamilyError::PoolMissing(w.to_string()))
    }

    fn to_indices(&self, t: &[LocatedWord]) -> Result<Vec<usize>, FamilyError> {
        t.iter().map(|w| self.index_of(w)).collect()
    }

    fn to_words(&self, t: &[usize]) -> Vec<LocatedWord> {
        t.iter().map(|&i| self.words[i].clone()).collect()
    }

    /// All increasing chains (including `∅`) of pool words extracted from `bu`.
    fn extraction_chains(&self, bu: &[LocatedWord]) -> Result<Vec<Vec<usize>>, FamilyError> {
        self.to_indices(bu)?;
        let ev = words::extracted_sets(bu, 1)?.variables;
        let cand: Vec<usize> = (0..self.words.len())
            .filter(|&i| ev.contains(&self.words[i]))
            .collect();
        Ok(self.space.chains(&cand))
    }
}

/// `F_*` relative to `pool`: all increasing tuples of pool words extracted
/// from some member of `F`.
pub fn hereditary_closure(f: &WordFamily, pool: &Pool) -> Result<WordFamily, FamilyError> {
    let mut out = f.clone();
    for bu in f.tuples() {
        for c in pool.extraction_chains(&bu)? {
            out.insert_unchecked(pool.to_words(&c));
        }
    }
    Ok(out)
}

/// `F_h`: members of `F ∪ {∅}` all of whose pool-relative extractions lie in `F ∪ {∅}`.
pub fn largest_hereditary(f: &WordFamily, pool: &Pool) -> Result<WordFamily, FamilyError> {
    let mut out = WordFamily::new();
    out.insert_unchecked(Vec::new());
    for bw in f.tuples() {
        let mut ok = true;
        for c in pool.extraction_chains(&bw)? {
            if !c.is_empty() && !f.contains(&pool.to_words(&c)) {
                ok = false;
                break;
            }
        }
        if ok {
            out.insert_unchecked(bw);
        }
    }
    Ok(out)
}

pub fn is_hereditary(f: &WordFamily, pool: &Pool) -> Result<bool, FamilyError> {
    Ok(hereditary_closure(f, pool)? == *f)
}

/// One strong Cantor-Bendixson derivative of a hereditary family.
///
/// Under the finite threshold a kept tuple can lose one of its extractions,
/// so the raw derivative is cut down to its largest hereditary part. A
/// derivative without `∅` is empty.
pub fn cb_derivative(f: &WordFamily, pool: &Pool, tau: usize) -> Result<WordFamily, FamilyError> {
    let fam = checked_indices(f, pool, tau)?;
    derive_hereditary(&fam, pool, tau)
}

fn derive_hereditary(fam: &BTreeSet<Vec<usize>>, pool: &Pool, tau: usize) -> Result<WordFamily, FamilyError> {
    let d = pool.space.derivative(fam, tau);
    if !d.contains(&Vec::new()) {
        return Ok(WordFamily::new());
    }
    let mut raw = WordFamily::new();
    for t in d {
        raw.insert_unchecked(pool.to_words(&t));
    }
    largest_hereditary(&raw, pool)
}

/// Number of derivatives needed to reach the empty family.
pub fn cb_index(f: &WordFamily, pool: &Pool, tau: usize) -> Result<u64, FamilyError> {
    let mut fam = checked_indices(f, pool, tau)?;
    let mut count = 0;
    while !fam.is_empty() {
        let next = derive_hereditary(&fam, pool, tau)?
            .tuples()
            .iter()
            .map(|t| pool.to_indices(t))
            .collect::<Result<BTreeSet<_>, _>>()?;
        if next == fam {
            return Err(FamilyError::Stalled);
        }
        fam = next;
        count += 1;
    }
    Ok(count)
}

fn checked_indices(
    f: &WordFamily,
    pool: &Pool,
    tau: usize,
) -> Result<BTreeSet<Vec<usize>>, FamilyError> {
    if tau == 0 {
        return Err(FamilyError::ZeroThreshold);
    }
    let fam = f
        .tuples()
        .iter()
        .map(|t| pool.to_indices(t))
        .collect::<Result<BTreeSet<_>, _>>()?;
    if !is_hereditary(f, pool)? {
        return Err(FamilyError::NotHereditary);
    }
    Ok(fam)
}

/// Index of the family of subsets of `{1..N}` with at most `m` elements, the
/// hereditary closure of `A_m`.
pub fn set_family_cb_index(m: u64, n: u64, tau: usize) -> Result<u64, FamilyError> {
    if tau == 0 {
        return Err(FamilyError::ZeroThreshold);
    }
    if n < m + tau as u64 {
        return Err(FamilyError::GroundTooSmall { n, m, tau });
    }
    let size = n as usize;
    let space = ChainSpace {
        above: (0..size).map(|i| (0..size).map(|j| i < j).collect()).collect(),
    };
    let fam: BTreeSet<Vec<usize>> = space
        .chains(&(0..size).collect::<Vec<_>>())
        .into_iter()
        .filter(|c| c.len() as u64 <= m)
        .collect();
    space.index(fam, tau)
}

/// A finite strict partial order: `above[i][j]` means `j` lies above `i`.
#[derive(Debug, Clone)]
pub(crate) struct ChainSpace {
    above: Vec<Vec<bool>>,
}

impl ChainSpace {
    /// Length of the longest increasing chain inside `set`.
    fn longest_chain(&self, set: &[usize]) -> usize {
        let mut memo: BTreeMap<usize, usize> = BTreeMap::new();
        fn go(s: &ChainSpace, set: &[usize], i: usize, memo: &mut BTreeMap<usize, usize>) -> usize {
            if let Some(&v) = memo.get(&i) {
                return v;
            }
            let v = 1 + set
                .iter()
                .filter(|&&j| s.above[i][j])
                .map(|&j| go(s, set, j, memo))
                .max()
                .unwrap_or(0);
            memo.insert(i, v);
            v
        }
        set.iter().map(|&i| go(self, set, i, &mut memo)).max().unwrap_or(0)
    }

    /// All increasing chains within `cand`, including the empty chain.
    fn chains(&self, cand: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut stack: Vec<Vec<usize>> = cand.iter().map(|&i| vec![i]).collect();
        while let Some(c) = stack.pop() {
            let last = *c.last().expect("nonempty");
            for &j in cand {
                if self.above[last][j] {
                    let mut next = c.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
            out.push(c);
        }
        out.sort();
        out
    }

    fn above_of(&self, bw: &[usize]) -> Vec<usize> {
        let n = self.above.len();
        match bw.last() {
            None => (0..n).collect(),
            Some(&l) => (0..n).filter(|&j| self.above[l][j]).collect(),
        }
    }

    /// Keeps `bw` iff the words above it that do not extend it inside the
    /// family form no chain of length `min(τ, h)`, where `h` is the longest
    /// chain available above `bw` at all.
    fn derivative(&self, fam: &BTreeSet<Vec<usize>>, tau: usize) -> BTreeSet<Vec<usize>> {
        let empty = Vec::new();
        fam.iter()
            .chain(std::iter::once(&empty))
            .filter(|bw| {
                let cand = self.above_of(bw);
                let h = self.longest_chain(&cand);
                let bad: Vec<usize> = cand
                    .into_iter()
                    .filter(|&j| {
                        let mut ext = bw.to_vec();
                        ext.push(j);
                        !fam.contains(&ext)
                    })
                    .collect();
                self.longest_chain(&bad) < tau.min(h)
            })
            .cloned()
            .collect()
    }

    fn index(&self, mut fam: BTreeSet<Vec<usize>>, tau: usize) -> Result<u64, FamilyError> {
        let mut count = 0;
        while !fam.is_empty() {
            let next = self.derivative(&fam, tau);
            if next == fam {
                return Err(FamilyError::Stalled);
            }
            fam = next;
            count += 1;
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::tests::w;

    fn shells(n: i64) -> Vec<LocatedWord> {
        (1..=n).map(|i| w(&format!("-{i}:v,{i}:v"))).collect()
    }

    fn fam(ts: &[Vec<LocatedWord>]) -> WordFamily {
        WordFamily::from_tuples(ts.iter().cloned()).unwrap()
    }

    #[test]
    fn l_xi_examples() {
        let a = w("-1:v,1:v");
        let b = w("-3:v,-2:v,3:v");
        assert!(l_xi_member(&[a.clone(), b.clone()], &Ordinal::nat(2), Side::Positive).unwrap());
        assert!(!l_xi_member(std::slice::from_ref(&a), &Ordinal::nat(2), Side::Positive).unwrap());
        let t: Vec<LocatedWord> = (0..3)
            .map(|k| w(&format!("-{}:v,{}:v", 3 + k, 3 + k)))
            .collect();
        assert!(l_xi_member(&t, &Ordinal::omega(), Side::Positive).unwrap());
        assert!(l_xi_member(&t, &Ordinal::omega(), Side::Negative).unwrap());
        // Two words whose smallest positive positions coincide.
        let c = w("-4:v,1:v,4:v");
        assert!(l_xi_member(&[w("-1:v,2:v"), c], &Ordinal::nat(2), Side::Positive).is_err());
    }

    #[test]
    fn tree_closure_example() {
        let s = shells(2);
        let f = fam(std::slice::from_ref(&s));
        let t = f.tree_closure();
        assert_eq!(t.tuples(), vec![vec![], vec![s[0].clone()], s.clone()]);
        assert!(t.is_tree() && !f.is_tree());
        assert_eq!(t.tree_closure(), t);
    }

    #[test]
    fn family_at_and_minus() {
        let s = shells(3);
        let f = fam(&[vec![s[0].clone()], vec![s[0].clone(), s[1].clone()]]);
        assert_eq!(family_at(&f, &s[0]).tuples(), vec![vec![], vec![s[1].clone()]]);
        assert!(family_at(&WordFamily::new(), &s[0]).is_empty());
        let g = fam(&[vec![s[0].clone()], vec![s[2].clone()]]);
        assert_eq!(family_minus(&g, &s[1]).tuples(), vec![vec![], vec![s[2].clone()]]);
    }

    #[test]
    fn parse_family_file() {
        let text = "# header\n-1:v,1:v\n\n-1:v,1:v;-2:v,2:v  # pair\n";
        let f = WordFamily::parse(text, &Profile::Abs).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.contains(&[]));
        assert_eq!(WordFamily::parse(&f.to_string(), &Profile::Abs).unwrap(), f);
        assert!(WordFamily::parse("-2:v,2:v;-1:v,1:v\n", &Profile::Abs).is_err());
    }

    #[test]
    fn closures_on_nested_pool() {
        let s = shells(3);
        let pool = Pool::new(s.clone());
        let f = fam(std::slice::from_ref(&s));
        let h = hereditary_closure(&f, &pool).unwrap();
        assert_eq!(h.len(), 8);
        assert_eq!(hereditary_closure(&h, &pool).unwrap(), h);
        assert!(is_hereditary(&h, &pool).unwrap());
        let lh = largest_hereditary(&f, &pool).unwrap();
        assert_eq!(lh.tuples(), vec![vec![]]);
        let outside = fam(&[vec![w("-9:v,9:v")]]);
        assert!(matches!(
            hereditary_closure(&outside, &pool),
            Err(FamilyError::PoolMissing(_))
        ));
    }

    #[test]
    fn derivative_examples() {
        let s = shells(6);
        let pool = Pool::new(s.clone());
        let only_empty = fam(&[vec![]]);
        assert!(cb_derivative(&only_empty, &pool, 4).unwrap().is_empty());
        assert_eq!(cb_index(&only_empty, &pool, 4).unwrap(), 1);
        let singles = hereditary_closure(
            &fam(&s.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>()),
            &pool,
        )
        .unwrap();
        assert_eq!(cb_derivative(&singles, &pool, 4).unwrap(), only_empty);
        assert_eq!(cb_index(&singles, &pool, 4).unwrap(), 2);
        let not_hered = fam(&[vec![s[0].clone()]]);
        assert_eq!(
            cb_derivative(&not_hered, &pool, 4),
            Err(FamilyError::NotHereditary)
        );
    }

    #[test]
    fn set_level_examples() {
        assert_eq!(set_family_cb_index(1, 10, 3).unwrap(), 2);
        assert_eq!(set_family_cb_index(2, 12, 3).unwrap(), 3);
        assert_eq!(set_family_cb_index(0, 5, 3).unwrap(), 1);
        assert!(set_family_cb_index(3, 5, 3).is_err());
    }

    #[test]
    fn word_decomposition_matches_set_decomposition() {
        let s = shells(6);
        let d = canonical_decompose_tuple(&s[1..], &Ordinal::omega()).unwrap();
        // Projections 2,3,4,5,6: [2,3] then remainder 4,5,6 (needs four elements).
        assert_eq!(d.blocks, vec![s[1..3].to_vec()]);
        assert_eq!(d.remainder, Some(s[3..].to_vec()));
    }

    /// Every family on a 3-word pool, closed up, then differentiated.
    fn check_heredity_on_pool(pool_words: Vec<LocatedWord>) {
        let pool = Pool::new(pool_words);
        let all = pool.space.chains(&(0..pool.len()).collect::<Vec<_>>());
        let nonempty: Vec<&Vec<usize>> = all.iter().filter(|c| !c.is_empty()).collect();
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1 << nonempty.len()) {
            let mut f = WordFamily::new();
            f.insert_unchecked(Vec::new());
            for (b, c) in nonempty.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    f.insert_unchecked(pool.to_words(c));
                }
            }
            let h = hereditary_closure(&f, &pool).unwrap();
            if !seen.insert(h.to_string()) {
                continue;
            }
            for tau in 1..=3 {
                let mut g = h.clone();
                while !g.is_empty() {
                    g = cb_derivative(&g, &pool, tau).unwrap();
                    assert!(is_hereditary(&g, &pool).unwrap(), "tau={tau} family:\n{h}");
                }
            }
        }
    }

    #[test]
    fn derivative_preserves_heredity_nested_pool() {
        check_heredity_on_pool(shells(3));
    }

    #[test]
    fn derivative_preserves_heredity_branching_pool() {
        // Two incomparable words above a common one.
        check_heredity_on_pool(vec![w("-1:v,1:v"), w("-3:v,2:v"), w("-2:v,3:v")]);
        check_heredity_on_pool(vec![w("-1:v,1:v"), w("-3:v,2:v"), w("-4:v,-2:v,3:v,4:v")]);
    }

    #[test]
    fn largest_hereditary_is_largest() {
        let pool = Pool::new(shells(3));
        let all = pool.space.chains(&[0, 1, 2]);
        for mask in 0u32..(1 << all.len()) {
            let f = WordFamily::from_tuples(
                all.iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, c)| pool.to_words(c)),
            )
            .unwrap();
            let lh = largest_hereditary(&f, &pool).unwrap();
            assert!(is_hereditary(&lh, &pool).unwrap());
            let mut f0 = f.clone();
            f0.insert_unchecked(Vec::new());
            assert!(lh.is_subset(&f0));
            // Every hereditary subfamily of F ∪ {∅} sits inside F_h.
            for sub in 0u32..(1 << all.len()) {
                if sub & !mask != 0 {
                    continue;
                }
                let mut g = WordFamily::from_tuples(
                    all.iter()
                        .enumerate()
                        .filter(|(b, _)| sub >> b & 1 == 1)
                        .map(|(_, c)| pool.to_words(c)),
                )
                .unwrap();
                g.insert_unchecked(Vec::new());
                if g.is_subset(&f0) && is_hereditary(&g, &pool).unwrap() {
                    assert!(g.is_subset(&lh));
                }
            }
        }
    }
}
