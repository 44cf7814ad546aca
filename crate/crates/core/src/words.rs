//! Located words: finite maps from nonzero integer positions to letters.
//!
//! A letter is either the variable `v` or a symbol index whose sign matches
//! the side of its position and whose magnitude is bounded by the domination
//! profile `k_n` at that position.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Upper bound on the number of products `extracted_sets` will materialize.
pub const MAX_EXTRACTED: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("a located word needs at least one position")]
    Empty,
    #[error("position 0 is not allowed")]
    ZeroPosition,
    #[error("position {0} occurs twice")]
    DuplicatePosition(i64),
    #[error("letter {letter} at position {pos} is outside 1..={bound} in magnitude")]
    OutOfRange { pos: i64, letter: i64, bound: u64 },
    #[error("letter {letter} at position {pos} has the wrong sign for its side")]
    SignMismatch { pos: i64, letter: i64 },
    #[error("domains overlap at position {0}")]
    Overlap(i64),
    #[error("words use different domination profiles")]
    ProfileMismatch,
    #[error("substitution ({p},{q}) must be (0,0) or have both entries positive")]
    MixedSubstitution { p: u64, q: u64 },
    #[error("word has negative positions but an N-supported word was required")]
    NegativePosition,
    #[error("word has no positive positions")]
    NoPositivePart,
    #[error("word {0} contains no variable")]
    NotVariable(String),
    #[error("word {index} of the tuple is not in the two-sided class")]
    NotTwoSided { index: usize },
    #[error("words {index} and {next} are not in increasing order")]
    NotOrderly { index: usize, next: usize },
    #[error("profile is not monotone on each side")]
    NotSidedMonotone,
    #[error("negative side of the profile is not strictly increasing at -{0}")]
    NotStrictNegative(u64),
    #[error("position {pos} exceeds the number of available words {len}")]
    PositionBeyondSequence { pos: i64, len: usize },
    #[error("pair index {0} is out of range")]
    PairIndex(u64),
    #[error("extracted set would contain about {0} words, over the limit")]
    TooLarge(u128),
    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
}

fn parse_err(what: &'static str, detail: impl Into<String>) -> WordError {
    WordError::Parse {
        what,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Var,
    Sym(i64),
}

impl Letter {
    /// Signed symbol index, with the variable read as 0.
    pub fn index(self) -> i64 {
        match self {
            Letter::Var => 0,
            Letter::Sym(j) => j,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Var => write!(f, "v"),
            Letter::Sym(j) => write!(f, "{j}"),
        }
    }
}

impl FromStr for Letter {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "v" | "υ" => Ok(Letter::Var),
            t => t
                .parse::<i64>()
                .map(Letter::Sym)
                .map_err(|e| parse_err("letter", format!("{t:?}: {e}"))),
        }
    }
}

/// Explicit bounds: `pos[i]` is `k_{i+1}` and `neg[i]` is `k_{-(i+1)}`.
/// Beyond the table the outermost value is repeated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProfileTable {
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl ProfileTable {
    pub fn new(pos: Vec<u64>, neg: Vec<u64>) -> Result<Self, WordError> {
        if pos.is_empty() || neg.is_empty() || pos.iter().chain(&neg).any(|&k| k == 0) {
            return Err(parse_err(
                "profile table",
                "both sides need at least one entry and all bounds must be positive",
            ));
        }
        Ok(ProfileTable { pos, neg })
    }
}

/// The two-sided domination sequence `k_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Profile {
    /// `k_n = |n|`.
    Abs,
    /// `k_n = |n| + c`.
    AbsPlus(u64),
    /// `k_n = c`.
    Const(u64),
    Table(Arc<ProfileTable>),
}

impl Profile {
    pub fn bound(&self, n: i64) -> u64 {
        let a = n.unsigned_abs();
        match self {
            Profile::Abs => a,
            Profile::AbsPlus(c) => a + c,
            Profile::Const(c) => *c,
            Profile::Table(t) => {
                let side = if n > 0 { &t.pos } else { &t.neg };
                side[(a as usize).min(side.len()) - 1]
            }
        }
    }

    pub fn is_sided_monotone(&self) -> bool {
        match self {
            Profile::Table(t) => {
                t.pos.windows(2).all(|w| w[0] <= w[1]) && t.neg.windows(2).all(|w| w[0] <= w[1])
            }
            _ => true,
        }
    }

    pub fn table(pos: Vec<u64>, neg: Vec<u64>) -> Result<Self, WordError> {
        Ok(Profile::Table(Arc::new(ProfileTable::new(pos, neg)?)))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Abs => write!(f, "abs"),
            Profile::AbsPlus(c) => write!(f, "abs+{c}"),
            Profile::Const(c) => write!(f, "const:{c}"),
            Profile::Table(t) => {
                write!(f, "table:")?;
                let neg = t.neg.iter().enumerate().rev().map(|(i, k)| (-(i as i64) - 1, k));
                let pos = t.pos.iter().enumerate().map(|(i, k)| (i as i64 + 1, k));
                for (i, (n, k)) in neg.chain(pos).enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{n}={k}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Profile {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "abs" {
            return Ok(Profile::Abs);
        }
        if let Some(c) = s.strip_prefix("abs+") {
            return c
                .parse()
                .map(Profile::AbsPlus)
                .map_err(|e| parse_err("profile", format!("{s:?}: {e}")));
        }
        if let Some(c) = s.strip_prefix("const:") {
            let c: u64 = c
                .parse()
                .map_err(|e| parse_err("profile", format!("{s:?}: {e}")))?;
            if c == 0 {
                return Err(parse_err("profile", "constant bound must be positive"));
            }
            return Ok(Profile::Const(c));
        }
        if let Some(body) = s.strip_prefix("table:") {
            let mut entries = Vec::new();
            for item in body.split(',') {
                let (n, k) = item
                    .split_once('=')
                    .ok_or_else(|| parse_err("profile", format!("{item:?} is not n=k")))?;
                let n: i64 = n.trim().parse().map_err(|e| parse_err("profile", format!("{n:?}: {e}")))?;
                let k: u64 = k.trim().parse().map_err(|e| parse_err("profile", format!("{k:?}: {e}")))?;
                entries.push((n, k));
            }
            let side = |positive: bool| -> Result<Vec<u64>, WordError> {
                let mut v: Vec<(u64, u64)> = entries
                    .iter()
                    .filter(|(n, _)| *n != 0 && (*n > 0) == positive)
                    .map(|&(n, k)| (n.unsigned_abs(), k))
                    .collect();
                v.sort_unstable();
                if v.iter().enumerate().any(|(i, (n, _))| *n != i as u64 + 1) {
                    return Err(parse_err("profile", "table positions must be contiguous from 1"));
                }
                Ok(v.into_iter().map(|(_, k)| k).collect())
            };
            if entries.iter().any(|(n, _)| *n == 0) {
                return Err(parse_err("profile", "table position 0"));
            }
            return Profile::table(side(true)?, side(false)?);
        }
        Err(parse_err("profile", format!("unknown profile {s:?}")))
    }
}

/// A located word together with the profile it is validated against.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocatedWord {
    entries: Vec<(i64, Letter)>,
    profile: Profile,
}

impl LocatedWord {
    pub fn new(
        entries: impl IntoIterator<Item = (i64, Letter)>,
        profile: Profile,
    ) -> Result<Self, WordError> {
        let mut entries: Vec<(i64, Letter)> = entries.into_iter().collect();
        if entries.is_empty() {
            return Err(WordError::Empty);
        }
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(WordError::DuplicatePosition(w[0].0));
            }
        }
        for &(pos, letter) in &entries {
            if pos == 0 {
                return Err(WordError::ZeroPosition);
            }
            if let Letter::Sym(j) = letter {
                if j == 0 || (j > 0) != (pos > 0) {
                    return Err(WordError::SignMismatch { pos, letter: j });
                }
                let bound = profile.bound(pos);
                if j.unsigned_abs() > bound {
                    return Err(WordError::OutOfRange { pos, letter: j, bound });
                }
            }
        }
        Ok(LocatedWord { entries, profile })
    }

    pub fn parse(s: &str, profile: &Profile) -> Result<Self, WordError> {
        let mut entries = Vec::new();
        for item in s.trim().split(',') {
            let (p, l) = item
                .split_once(':')
                .ok_or_else(|| parse_err("word", format!("{item:?} is not pos:letter")))?;
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|e| parse_err("word", format!("{p:?}: {e}")))?;
            entries.push((p, l.parse()?));
        }
        LocatedWord::new(entries, profile.clone())
    }

    pub fn entries(&self) -> &[(i64, Letter)] {
        &self.entries
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// `|dom(w)|`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn domain(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn min_pos(&self) -> i64 {
        self.entries[0].0
    }

    pub fn max_pos(&self) -> i64 {
        self.entries[self.entries.len() - 1].0
    }

    pub fn letter_at(&self, pos: i64) -> Option<Letter> {
        self.entries
            .binary_search_by_key(&pos, |e| e.0)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Smallest positive position.
    pub fn min_pos_positive(&self) -> Option<i64> {
        self.domain().find(|&p| p > 0)
    }

    /// Largest negative position.
    pub fn max_pos_negative(&self) -> Option<i64> {
        self.domain().filter(|&p| p < 0).last()
    }

    pub fn is_variable(&self) -> bool {
        self.entries.iter().any(|e| e.1 == Letter::Var)
    }

    pub fn is_constant(&self) -> bool {
        !self.is_variable()
    }

    pub fn is_n_supported(&self) -> bool {
        self.min_pos() > 0
    }

    /// Membership in the two-sided class: a variable word needs the variable
    /// on both sides, a constant word needs positions on both sides.
    pub fn is_two_sided(&self) -> bool {
        if self.is_variable() {
            let var = |neg: bool| self.entries.iter().any(|&(p, l)| l == Letter::Var && (p < 0) == neg);
            var(true) && var(false)
        } else {
            self.min_pos() < 0 && self.max_pos() > 0
        }
    }

    fn same_profile(&self, other: &Self) -> Result<(), WordError> {
        if self.profile == other.profile {
            Ok(())
        } else {
            Err(WordError::ProfileMismatch)
        }
    }

    fn with_entries(&self, entries: Vec<(i64, Letter)>) -> Self {
        LocatedWord {
            entries,
            profile: self.profile.clone(),
        }
    }
}

impl fmt::Display for LocatedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, l)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}:{l}")?;
        }
        Ok(())
    }
}

/// `w ⋆ u`: the union of two words with disjoint domains.
pub fn concat(w: &LocatedWord, u: &LocatedWord) -> Result<LocatedWord, WordError> {
    w.same_profile(u)?;
    let mut entries = Vec::with_capacity(w.len() + u.len());
    let (mut i, mut j) = (0, 0);
    while i < w.entries.len() || j < u.entries.len() {
        match (w.entries.get(i), u.entries.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => return Err(WordError::Overlap(a.0)),
            (Some(a), Some(b)) if a.0 < b.0 => {
                entries.push(*a);
                i += 1;
            }
            (Some(_), Some(b)) | (None, Some(b)) => {
                entries.push(*b);
                j += 1;
            }
            (Some(a), None) => {
                entries.push(*a);
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(w.with_entries(entries))
}

/// Star product of a nonempty list of words.
pub fn concat_all<'a>(
    words: impl IntoIterator<Item = &'a LocatedWord>,
) -> Result<Option<LocatedWord>, WordError> {
    let mut acc: Option<LocatedWord> = None;
    for w in words {
        acc = Some(match acc {
            None => w.clone(),
            Some(a) => concat(&a, w)?,
        });
    }
    Ok(acc)
}

/// `w <_R1 u`: the domain of `u` surrounds the domain of `w` on both sides.
pub fn rel_r1(w: &LocatedWord, u: &LocatedWord) -> bool {
    let (lo, hi) = (w.min_pos(), w.max_pos());
    u.domain().all(|p| p < lo || p > hi) && u.min_pos() < lo && u.max_pos() > hi
}

/// `w <_R2 u` for N-supported words: `max dom(w) < min dom(u)`.
pub fn rel_r2(w: &LocatedWord, u: &LocatedWord) -> Result<bool, WordError> {
    if !w.is_n_supported() || !u.is_n_supported() {
        return Err(WordError::NegativePosition);
    }
    Ok(w.max_pos() < u.min_pos())
}

/// The max-merge operation: the variable absorbs, symbols keep the larger magnitude.
pub fn merge(w: &LocatedWord, u: &LocatedWord) -> Result<LocatedWord, WordError> {
    w.same_profile(u)?;
    let mut entries: Vec<(i64, Letter)> = w.entries.clone();
    for &(p, b) in &u.entries {
        match entries.binary_search_by_key(&p, |e| e.0) {
            Ok(i) => {
                let a = entries[i].1;
                entries[i].1 = match (a, b) {
                    (Letter::Sym(x), Letter::Sym(y)) => {
                        Letter::Sym(if x.abs() >= y.abs() { x } else { y })
                    }
                    _ => Letter::Var,
                };
            }
            Err(i) => entries.insert(i, (p, b)),
        }
    }
    Ok(w.with_entries(entries))
}

/// `T_(p,q)`: positive-side variables become `min(p, k_n)`, negative-side
/// variables become `-min(q, k_n)`. `(0,0)` is the identity.
pub fn substitute(w: &LocatedWord, p: u64, q: u64) -> Result<LocatedWord, WordError> {
    if (p == 0) != (q == 0) {
        return Err(WordError::MixedSubstitution { p, q });
    }
    if p == 0 {
        return Ok(w.clone());
    }
    let entries = w
        .entries
        .iter()
        .map(|&(n, l)| match l {
            Letter::Var if n > 0 => (n, Letter::Sym(p.min(w.profile.bound(n)) as i64)),
            Letter::Var => (n, Letter::Sym(-(q.min(w.profile.bound(n)) as i64))),
            sym => (n, sym),
        })
        .collect();
    Ok(w.with_entries(entries))
}

/// One-sided `T_p` on N-supported words.
pub fn substitute_n(w: &LocatedWord, p: u64) -> Result<LocatedWord, WordError> {
    if !w.is_n_supported() {
        return Err(WordError::NegativePosition);
    }
    if p == 0 {
        return Ok(w.clone());
    }
    substitute(w, p, p)
}

/// The suffix of `w` from its smallest positive position onward.
pub fn project_positive(w: &LocatedWord) -> Result<LocatedWord, WordError> {
    let entries: Vec<_> = w.entries.iter().copied().filter(|e| e.0 > 0).collect();
    if entries.is_empty() {
        return Err(WordError::NoPositivePart);
    }
    Ok(w.with_entries(entries))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleMode {
    /// Two-sided words ordered by `<_R1`.
    Surround,
    /// N-supported words ordered by `<_R2`.
    Block,
}

/// A finite increasing sequence of words; the empty tuple is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderlyTuple {
    words: Vec<LocatedWord>,
}

impl OrderlyTuple {
    pub fn new(words: Vec<LocatedWord>, mode: TupleMode) -> Result<Self, WordError> {
        for (i, w) in words.iter().enumerate() {
            match mode {
                TupleMode::Surround if !w.is_two_sided() => {
                    return Err(WordError::NotTwoSided { index: i + 1 })
                }
                TupleMode::Block if !w.is_n_supported() => return Err(WordError::NegativePosition),
                _ => {}
            }
        }
        for i in 1..words.len() {
            let ok = match mode {
                TupleMode::Surround => rel_r1(&words[i - 1], &words[i]),
                TupleMode::Block => rel_r2(&words[i - 1], &words[i])?,
            };
            if !ok {
                return Err(WordError::NotOrderly { index: i, next: i + 1 });
            }
        }
        Ok(OrderlyTuple { words })
    }

    pub fn empty() -> Self {
        OrderlyTuple { words: Vec::new() }
    }

    /// Parses words separated by `;`. The empty string is the empty tuple.
    pub fn parse(s: &str, profile: &Profile, mode: TupleMode) -> Result<Self, WordError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let words = s
            .split(';')
            .map(|w| LocatedWord::parse(w, profile))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(words, mode)
    }

    pub fn words(&self) -> &[LocatedWord] {
        &self.words
    }

    pub fn into_words(self) -> Vec<LocatedWord> {
        self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl fmt::Display for OrderlyTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.words)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, words: &[LocatedWord]) -> fmt::Result {
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            write!(f, ";")?;
        }
        write!(f, "{w}")?;
    }
    Ok(())
}

/// Canonical `;`-joined serialization of a word list.
pub fn tuple_key(words: &[LocatedWord]) -> String {
    struct T<'a>(&'a [LocatedWord]);
    impl fmt::Display for T<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_tuple(f, self.0)
        }
    }
    T(words).to_string()
}

/// Constant and variable extracted words of a tuple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtractedSets {
    pub constants: BTreeSet<LocatedWord>,
    pub variables: BTreeSet<LocatedWord>,
}

/// All star products `T_(p1,q1)(w_n1) ⋆ … ⋆ T_(pλ,qλ)(w_nλ)` over nonempty
/// index sets. The grid at tuple index `i` is `[1..k_j] × [1..k_-j]` with
/// `j = first_index + i - 1`, plus `(0,0)`. Products containing a `(0,0)`
/// factor are the variable words.
pub fn extracted_sets(words: &[LocatedWord], first_index: u64) -> Result<ExtractedSets, WordError> {
    let Some(first) = words.first() else {
        return Ok(ExtractedSets::default());
    };
    let profile = first.profile();
    if !profile.is_sided_monotone() {
        return Err(WordError::NotSidedMonotone);
    }
    let grids: Vec<Vec<(u64, u64)>> = (0..words.len() as u64)
        .map(|i| {
            let j = (first_index + i) as i64;
            let (kp, kn) = (profile.bound(j), profile.bound(-j));
            (1..=kp).flat_map(|p| (1..=kn).map(move |q| (p, q))).collect()
        })
        .collect();
    let mut estimate: u128 = 1;
    for (w, g) in words.iter().zip(&grids) {
        w.same_profile(first)?;
        if !w.is_variable() {
            return Err(WordError::NotVariable(w.to_string()));
        }
        estimate = estimate.saturating_mul(g.len() as u128 + 2);
    }
    if estimate > MAX_EXTRACTED {
        return Err(WordError::TooLarge(estimate));
    }
    // Substituted forms of each word: (0,0) first, then the grid.
    let forms: Vec<Vec<LocatedWord>> = words
        .iter()
        .zip(&grids)
        .map(|(w, g)| {
            std::iter::once(Ok(w.clone()))
                .chain(g.iter().map(|&(p, q)| substitute(w, p, q)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut out = ExtractedSets::default();
    extend_products(&forms, 0, None, false, &mut out)?;
    Ok(out)
}

fn extend_products(
    forms: &[Vec<LocatedWord>],
    i: usize,
    acc: Option<&LocatedWord>,
    has_var: bool,
    out: &mut ExtractedSets,
) -> Result<(), WordError> {
    if i == forms.len() {
        if let Some(a) = acc {
            if has_var {
                out.variables.insert(a.clone());
            } else {
                out.constants.insert(a.clone());
            }
        }
        return Ok(());
    }
    extend_products(forms, i + 1, acc, has_var, out)?;
    for (k, f) in forms[i].iter().enumerate() {
        let next = match acc {
            None => f.clone(),
            Some(a) => concat(a, f)?,
        };
        extend_products(forms, i + 1, Some(&next), has_var || k == 0, out)?;
    }
    Ok(())
}

/// `u ≺ w`: `u` is `<_R1`-increasing and every member of `u` is an extracted
/// variable word of `w`.
pub fn is_extraction(u: &[LocatedWord], w: &[LocatedWord], first_index: u64) -> Result<bool, WordError> {
    if u.windows(2).any(|p| !rel_r1(&p[0], &p[1])) {
        return Ok(false);
    }
    let ev = extracted_sets(w, first_index)?;
    Ok(u.iter().all(|x| ev.variables.contains(x)))
}

/// A type-ω enumeration `β_1, β_2, …` of `N × N`.
///
/// Pairs are grouped in shells `m = max(i(q), p)` where `i(q)` is the least
/// `n` with `q ≤ k_-n`; within a shell they are ordered by `(i(q), p, q)`.
/// When the negative side of the profile is strictly increasing the pair
/// `(k_n, k_-n)` appears at strictly increasing positions.
#[derive(Debug, Clone)]
pub struct PairOrder {
    profile: Profile,
}

impl PairOrder {
    pub fn new(profile: Profile) -> Self {
        PairOrder { profile }
    }

    fn kneg(&self, n: u64) -> u64 {
        if n == 0 {
            0
        } else {
            self.profile.bound(-(n as i64))
        }
    }

    fn check_strict(&self, m: u64) -> Result<(), WordError> {
        if m >= 1 && self.kneg(m) <= self.kneg(m - 1) {
            return Err(WordError::NotStrictNegative(m));
        }
        Ok(())
    }

    /// `i(q)`.
    pub fn i_of(&self, q: u64) -> Result<u64, WordError> {
        let mut n = 1;
        while q > self.kneg(n) {
            self.check_strict(n + 1)?;
            n += 1;
        }
        Ok(n)
    }

    /// The pairs of shell `m`, in order.
    pub fn shell(&self, m: u64) -> Result<Vec<(u64, u64)>, WordError> {
        for n in 1..=m {
            self.check_strict(n)?;
        }
        let mut out = Vec::new();
        for i in 1..m {
            out.extend((self.kneg(i - 1) + 1..=self.kneg(i)).map(|q| (m, q)));
        }
        for p in 1..=m {
            out.extend((self.kneg(m - 1) + 1..=self.kneg(m)).map(|q| (p, q)));
        }
        Ok(out)
    }

    /// The first `count` pairs.
    pub fn first(&self, count: usize) -> Result<Vec<(u64, u64)>, WordError> {
        let mut out = Vec::with_capacity(count);
        let mut m = 1;
        while out.len() < count {
            out.extend(self.shell(m)?);
            m += 1;
        }
        out.truncate(count);
        Ok(out)
    }

    /// 1-based position of `(p, q)`.
    pub fn position(&self, p: u64, q: u64) -> Result<u64, WordError> {
        if p == 0 || q == 0 {
            return Err(WordError::PairIndex(0));
        }
        let m = self.i_of(q)?.max(p);
        let before = (m - 1) * self.kneg(m - 1);
        let rank = self
            .shell(m)?
            .iter()
            .position(|&b| b == (p, q))
            .expect("pair lies in its shell");
        Ok(before + rank as u64 + 1)
    }

    /// `β_μ` for 1-based `μ`.
    pub fn pair_at(&self, mu: u64) -> Result<(u64, u64), WordError> {
        if mu == 0 {
            return Err(WordError::PairIndex(0));
        }
        let mut before = 0;
        let mut m = 1;
        loop {
            let shell = self.shell(m)?;
            if mu <= before + shell.len() as u64 {
                return Ok(shell[(mu - before - 1) as usize]);
            }
            before += shell.len() as u64;
            m += 1;
        }
    }

    /// `l_n`: the position of `(k_n, k_-n)`.
    pub fn l(&self, n: u64) -> Result<u64, WordError> {
        let n = n as i64;
        self.position(self.profile.bound(n), self.profile.bound(-n))
    }

    /// The profile `n ↦ l_n` used for the alphabet of `t` in [`h_map`].
    pub fn alphabet_profile(&self, len: u64) -> Result<Profile, WordError> {
        let ls = (1..=len.max(1)).map(|n| self.l(n)).collect::<Result<Vec<_>, _>>()?;
        Profile::table(ls.clone(), ls)
    }
}

/// The first `count` pairs of the enumeration of `N × N` for `profile`.
pub fn pair_enumeration(profile: &Profile, count: usize) -> Result<Vec<(u64, u64)>, WordError> {
    PairOrder::new(profile.clone()).first(count)
}

/// `h(t)`: the symbol `μ` at position `n` selects `β_μ` as the substitution for
/// `w_n`, the variable selects `(0,0)`; the results are star-multiplied.
pub fn h_map(t: &LocatedWord, w: &[LocatedWord]) -> Result<LocatedWord, WordError> {
    if !t.is_n_supported() {
        return Err(WordError::NegativePosition);
    }
    let profile = w.first().map(|x| x.profile().clone()).unwrap_or(Profile::Abs);
    let order = PairOrder::new(profile);
    let mut parts = Vec::with_capacity(t.len());
    for &(n, letter) in t.entries() {
        let word = w
            .get(n as usize - 1)
            .ok_or(WordError::PositionBeyondSequence { pos: n, len: w.len() })?;
        let part = match letter {
            Letter::Var => word.clone(),
            Letter::Sym(mu) => {
                let l = order.l(n as u64)?;
                if mu as u64 > l {
                    return Err(WordError::OutOfRange { pos: n, letter: mu, bound: l });
                }
                let (p, q) = order.pair_at(mu as u64)?;
                substitute(word, p, q)?
            }
        };
        parts.push(part);
    }
    Ok(concat_all(&parts)?.expect("t is nonempty"))
}
