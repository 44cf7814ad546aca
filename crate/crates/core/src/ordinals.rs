//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An ordinal is a descending list of terms `ω^e · c`. Exponents are themselves
//! ordinals, so the representation is a finite tree.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("fundamental sequence undefined for non-limit ordinal {0}")]
    NotLimit(Ordinal),
    #[error("predecessor sequence undefined for zero")]
    Zero,
    #[error("sequence index must be at least 1")]
    ZeroIndex,
    #[error("terms must have strictly decreasing exponents")]
    NotDescending,
    #[error("coefficients must be positive")]
    ZeroCoefficient,
    #[error("cannot parse ordinal: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdinalClass {
    Zero,
    Successor,
    Limit,
}

/// One Cantor-normal-form term `ω^exponent · coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exponent: Self::zero(),
                    coefficient: n,
                }],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::nat(1))
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Self::term(e, 1)
    }

    /// `ω^e · c`, or zero when `c == 0`.
    pub fn term(e: Ordinal, c: u64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: e,
                coefficient: c,
            }],
        }
    }

    /// Builds an ordinal from explicit terms, validating normal form.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, OrdinalError> {
        for t in &terms {
            if t.coefficient == 0 {
                return Err(OrdinalError::ZeroCoefficient);
            }
        }
        for w in terms.windows(2) {
            if w[0].exponent <= w[1].exponent {
                return Err(OrdinalError::NotDescending);
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn classify(&self) -> OrdinalClass {
        match self.terms.last() {
            None => OrdinalClass::Zero,
            Some(t) if t.exponent.is_zero() => OrdinalClass::Successor,
            Some(_) => OrdinalClass::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == OrdinalClass::Limit
    }

    pub fn is_successor(&self) -> bool {
        self.classify() == OrdinalClass::Successor
    }

    /// If `self` is exactly `ω^e`, returns `e`.
    pub fn as_omega_power(&self) -> Option<&Ordinal> {
        match self.terms.as_slice() {
            [t] if t.coefficient == 1 => Some(&t.exponent),
            _ => None,
        }
    }

    /// `ζ` for `self = ζ + 1`.
    pub fn predecessor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut out = self.clone();
        let last = out.terms.last_mut().expect("successor is nonempty");
        last.coefficient -= 1;
        if last.coefficient == 0 {
            out.terms.pop();
        }
        Some(out)
    }

    pub fn successor(&self) -> Ordinal {
        self.plus(&Ordinal::nat(1))
    }

    /// Ordinal sum `self + other`. Terms of `self` below the leading exponent
    /// of `other` are absorbed.
    pub(crate) fn plus(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exponent == lead.exponent {
                last.coefficient += lead.coefficient;
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// Splits `self = γ + ω^e` into `(γ, e)`.
    fn split_last(&self) -> Option<(Ordinal, &Ordinal)> {
        let last = self.terms.last()?;
        let mut head = self.clone();
        let l = head.terms.last_mut().expect("nonempty");
        l.coefficient -= 1;
        if l.coefficient == 0 {
            head.terms.pop();
        }
        Some((head, &last.exponent))
    }

    /// The fixed fundamental sequence `λ[n]` of a limit ordinal. Each member
    /// is a successor ordinal.
    pub fn fundamental_sequence(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        if n == 0 {
            return Err(OrdinalError::ZeroIndex);
        }
        let raw = self.raw_fundamental(n);
        Ok(if raw.is_successor() { raw } else { raw.successor() })
    }

    // Wainer assignment before the successor adjustment.
    fn raw_fundamental(&self, n: u64) -> Ordinal {
        let (head, e) = self.split_last().expect("limit is nonempty");
        let tail = match e.predecessor() {
            Some(b) => Ordinal::term(b, n),
            None => {
                let en = e
                    .fundamental_sequence(n)
                    .expect("exponent of a limit term is a limit here");
                Ordinal::omega_pow(en)
            }
        };
        head.plus(&tail)
    }

    /// The sequence `ξ_n` with `A_ξ(n) = A_{ξ_n}` restricted to sets above `n`.
    ///
    /// Successors map to their predecessor. A limit `γ + ω^a` maps to
    /// `γ + (ω^a)_n`, where `(ω^{b+1})_n = ω^b·(n−1) + (ω^b)_n`,
    /// `(ω^λ)_n = (ω^{λ[n]})_n` and `(ω^0)_n = 0`.
    pub fn predecessor_sequence(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if n == 0 {
            return Err(OrdinalError::ZeroIndex);
        }
        match self.classify() {
            OrdinalClass::Zero => Err(OrdinalError::Zero),
            OrdinalClass::Successor => Ok(self.predecessor().expect("successor")),
            OrdinalClass::Limit => {
                let (head, a) = self.split_last().expect("limit");
                Ok(head.plus(&Self::power_restriction(a, n)))
            }
        }
    }

    fn power_restriction(a: &Ordinal, n: u64) -> Ordinal {
        if a.is_zero() {
            return Ordinal::zero();
        }
        match a.predecessor() {
            Some(b) => {
                let rest = Self::power_restriction(&b, n);
                Ordinal::term(b, n - 1).plus(&rest)
            }
            None => {
                let an = a.fundamental_sequence(n).expect("limit exponent");
                Self::power_restriction(&an, n)
            }
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            write!(f, "w")?;
            if t.exponent != Ordinal::nat(1) {
                if t.exponent.terms.len() > 1 {
                    write!(f, "^({})", t.exponent)?;
                } else {
                    write!(f, "^")?;
                    t.exponent.fmt_atom(f)?;
                }
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl Ordinal {
    // A single-term exponent printed so that the parser reads it back as an
    // atom: `w^w*2` would be ambiguous, so coefficients force parentheses.
    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.terms[0];
        if t.exponent.is_zero() || t.coefficient == 1 {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == 'ω' { 'w' } else { c })
            .collect();
        let mut p = Parser {
            src: cleaned.as_bytes(),
            pos: 0,
        };
        let o = p.ordinal()?;
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(o)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> OrdinalError {
        OrdinalError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        let terms: Vec<Term> = terms.into_iter().flatten().collect();
        if terms.is_empty() {
            return Ok(Ordinal::zero());
        }
        Ordinal::from_terms(terms)
    }

    // `None` for a literal `0`.
    fn term(&mut self) -> Result<Option<Term>, OrdinalError> {
        if self.eat(b'w') {
            let exponent = if self.eat(b'^') {
                self.atom()?
            } else {
                Ordinal::nat(1)
            };
            let coefficient = if self.eat(b'*') { self.nat()? } else { 1 };
            if coefficient == 0 {
                return Err(OrdinalError::ZeroCoefficient);
            }
            Ok(Some(Term {
                exponent,
                coefficient,
            }))
        } else {
            let n = self.nat()?;
            Ok((n > 0).then(|| Term {
                exponent: Ordinal::zero(),
                coefficient: n,
            }))
        }
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalError> {
        if self.eat(b'(') {
            let o = self.ordinal()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            Ok(o)
        } else if self.eat(b'w') {
            if self.eat(b'^') {
                Ok(Ordinal::omega_pow(self.atom()?))
            } else {
                Ok(Ordinal::omega())
            }
        } else {
            Ok(Ordinal::nat(self.nat()?))
        }
    }
}
