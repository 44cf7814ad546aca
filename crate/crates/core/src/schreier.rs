//! Schreier families `A_ξ` of finite sets of positive integers.
//!
//! Membership follows the recursive definition case by case. Families with
//! limit index are parsed into consecutive blocks; because every `A_ξ` is
//! thin, at most one prefix of a set can be a block, so the parse is greedy.
//! For `ξ = ω^λ` with `λ` a limit the family depends on the fixed fundamental
//! sequence of `λ` chosen in [`crate::ordinals`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ordinals::{Ordinal, OrdinalClass, OrdinalError};

pub const DEFAULT_CAP: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchreierError {
    #[error("ground set size {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: u64, cap: u64 },
    #[error("set elements must be strictly increasing positive integers")]
    NotIncreasing,
    #[error("cannot parse set: {0}")]
    Parse(String),
    #[error("restriction check needs 1 <= n < N")]
    BadRange,
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A strictly increasing finite set of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiniteSet(Vec<u64>);

impl FiniteSet {
    pub fn new(elements: Vec<u64>) -> Result<Self, SchreierError> {
        if elements.first() == Some(&0) || elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SchreierError::NotIncreasing);
        }
        Ok(FiniteSet(elements))
    }

    pub fn empty() -> Self {
        FiniteSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "{{}}");
        }
        write_elems(f, &self.0)
    }
}

fn write_elems(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl FromStr for FiniteSet {
    type Err = SchreierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "{}" {
            return Ok(FiniteSet::empty());
        }
        let s = s.trim_start_matches('{').trim_end_matches('}');
        let elems = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|e| SchreierError::Parse(format!("{x:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        FiniteSet::new(elems)
    }
}

/// Consecutive `A_ξ` blocks followed by an optional proper initial segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    pub blocks: Vec<FiniteSet>,
    pub remainder: Option<FiniteSet>,
}

impl CanonicalDecomposition {
    /// Concatenation of all blocks and the remainder.
    pub fn flatten(&self) -> Vec<u64> {
        self.blocks
            .iter()
            .chain(self.remainder.iter())
            .flat_map(|b| b.as_slice().iter().copied())
            .collect()
    }
}

impl fmt::Display for CanonicalDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "[")?;
            write_elems(f, b.as_slice())?;
            write!(f, "]")?;
        }
        if let Some(r) = &self.remainder {
            write!(f, "|")?;
            write_elems(f, r.as_slice())?;
        }
        Ok(())
    }
}

/// Is the strictly increasing sequence `s` a member of `A_ξ`?
pub fn is_member(s: &[u64], xi: &Ordinal) -> bool {
    match xi.classify() {
        OrdinalClass::Zero => s.is_empty(),
        _ if s.is_empty() => false,
        OrdinalClass::Successor => {
            let zeta = xi.predecessor().expect("successor");
            is_member(&s[1..], &zeta)
        }
        OrdinalClass::Limit => {
            if let Some(a) = xi.as_omega_power() {
                let n = s[0];
                match a.predecessor() {
                    Some(_) if n > s.len() as u64 => false,
                    Some(b) => {
                        let block = Ordinal::omega_pow(b);
                        let blocks = vec![&block; n as usize];
                        parse_blocks(s, &blocks)
                    }
                    None => {
                        let an = a.fundamental_sequence(n).expect("limit exponent");
                        is_member(s, &Ordinal::omega_pow(an))
                    }
                }
            } else {
                let count = xi
                    .terms()
                    .iter()
                    .fold(0u64, |acc, t| acc.saturating_add(t.coefficient));
                if count > s.len() as u64 {
                    return false;
                }
                // Lowest exponent first: blocks for the last term come first.
                let powers: Vec<(Ordinal, u64)> = xi
                    .terms()
                    .iter()
                    .rev()
                    .map(|t| (Ordinal::omega_pow(t.exponent.clone()), t.coefficient))
                    .collect();
                let blocks: Vec<&Ordinal> = powers
                    .iter()
                    .flat_map(|(o, c)| std::iter::repeat_n(o, *c as usize))
                    .collect();
                parse_blocks(s, &blocks)
            }
        }
    }
}

/// Can `s` be split into consecutive nonempty pieces, piece `i` in `A_{blocks[i]}`?
fn parse_blocks(s: &[u64], blocks: &[&Ordinal]) -> bool {
    let Some((first, rest)) = blocks.split_first() else {
        return s.is_empty();
    };
    if s.len() < blocks.len() {
        return false;
    }
    let mut candidates = (1..=s.len() - rest.len()).filter(|&k| is_member(&s[..k], first));
    let Some(k) = candidates.next() else {
        return false;
    };
    if parse_blocks(&s[k..], rest) {
        return true;
    }
    // Thinness means no second candidate exists; if it ever did, fall back
    // to trying it rather than answering wrongly.
    let others: Vec<usize> = candidates.collect();
    debug_assert!(others.is_empty(), "A_{first} is not thin on {s:?}");
    others.into_iter().any(|k| parse_blocks(&s[k..], rest))
}

fn check_cap(n: u64, cap: u64) -> Result<(), SchreierError> {
    if n > cap {
        Err(SchreierError::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// All members of `A_ξ` inside `{1..N}`, in lexicographic order.
pub fn enumerate(xi: &Ordinal, n: u64, cap: u64) -> Result<Vec<FiniteSet>, SchreierError> {
    check_cap(n, cap)?;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    enumerate_from(xi, 1, n, &mut cur, &mut out);
    Ok(out)
}

// Depth-first in lexicographic order of sequences.
fn enumerate_from(xi: &Ordinal, lo: u64, n: u64, cur: &mut Vec<u64>, out: &mut Vec<FiniteSet>) {
    if is_member(cur, xi) {
        out.push(FiniteSet(cur.clone()));
    }
    for x in lo..=n {
        cur.push(x);
        enumerate_from(xi, x + 1, n, cur, out);
        cur.pop();
    }
}

/// Splits `seq` into its unique run of `A_ξ` blocks and a remainder.
pub fn canonical_decompose(seq: &[u64], xi: &Ordinal) -> CanonicalDecomposition {
    let mut blocks = Vec::new();
    let mut rest = seq;
    while let Some(k) = (1..=rest.len()).find(|&k| is_member(&rest[..k], xi)) {
        blocks.push(FiniteSet(rest[..k].to_vec()));
        rest = &rest[k..];
    }
    CanonicalDecomposition {
        blocks,
        remainder: (!rest.is_empty()).then(|| FiniteSet(rest.to_vec())),
    }
}

/// Whether `s` is a proper initial segment of a member of `A_ξ`, certified by
/// extending with consecutive integers. `None` when no member is reached
/// within `max_len` elements.
pub fn is_proper_initial_segment(s: &[u64], xi: &Ordinal, max_len: usize) -> Option<bool> {
    if (1..=s.len()).any(|k| is_member(&s[..k], xi)) {
        return Some(false);
    }
    let mut ext = s.to_vec();
    let mut next = s.last().map_or(1, |x| x + 1);
    while ext.len() < max_len {
        ext.push(next);
        next += 1;
        if is_member(&ext, xi) {
            return Some(true);
        }
    }
    None
}

/// Exhaustively compares `A_ξ(n)` with `A_{ξ_n}` over subsets of `{n+1..N}`.
pub fn restriction_check(xi: &Ordinal, n: u64, big_n: u64, cap: u64) -> Result<bool, SchreierError> {
    if n == 0 || n >= big_n {
        return Err(SchreierError::BadRange);
    }
    check_cap(big_n, cap)?;
    let xi_n = xi.predecessor_sequence(n)?;
    let width = big_n - n;
    for mask in 0u64..(1 << width) {
        let mut with_n = vec![n];
        with_n.extend((0..width).filter(|b| mask >> b & 1 == 1).map(|b| n + 1 + b));
        if is_member(&with_n, xi) != is_member(&with_n[1..], &xi_n) {
            return Ok(false);
        }
    }
    Ok(true)
}
