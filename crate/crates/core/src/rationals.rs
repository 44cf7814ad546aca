//! Exact bijection between nonzero rationals and constant located words with
//! profile `k_n = |n|`.
//!
//! The word with digit `q_t` at position `t` evaluates to
//! `Σ_{t<0} q_t (−1)^{−t} / (−t+1)!  +  Σ_{t>0} q_t (−1)^{t+1} t!`,
//! with digits bounded by `0 ≤ q_t ≤ |t|`. Every nonzero rational has exactly
//! one such expansion.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::ordinals::Ordinal;
use crate::schreier;
use crate::words::{self, Letter, LocatedWord, Profile, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("zero has no encoding")]
    Zero,
    #[error("the codec requires profile abs, got {0}")]
    WrongProfile(String),
    #[error("{0} is outside the two-sided class; its encoding lacks a negative or positive part")]
    NotTwoSided(String),
    #[error("tuple is not increasing at entry {0}")]
    NotIncreasing(usize),
    #[error("pattern index {index} needs at least {needed} words, got {len}")]
    TooFewWords { index: u64, needed: u64, len: usize },
    #[error("pattern arguments ({i},{j}) must be both zero or both in 1..={n}")]
    PatternBounds { i: u64, j: u64, n: u64 },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("digit position overflows")]
    Overflow,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A rational number in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl std::ops::Add for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul for &ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RationalError::Parse(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(ExactRational::new(n, d))
            }
            None => Ok(ExactRational::integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn sign(even: bool) -> i32 {
    if even {
        1
    } else {
        -1
    }
}

/// The value contributed by digit `d` at position `t`.
pub fn place_value(t: i64, d: u64) -> ExactRational {
    let a = t.unsigned_abs();
    if t > 0 {
        let s = sign(a % 2 == 1);
        ExactRational::integer(factorial(a) * d * s)
    } else {
        let s = sign(a.is_multiple_of(2));
        ExactRational::new(BigInt::from(d) * s, factorial(a + 1))
    }
}

/// `g(w)`. Variables count as digit 0.
pub fn evaluate(w: &LocatedWord) -> Result<ExactRational, RationalError> {
    if *w.profile() != Profile::Abs {
        return Err(RationalError::WrongProfile(w.profile().to_string()));
    }
    let mut acc = BigRational::zero();
    for &(t, l) in w.entries() {
        let d = l.index().unsigned_abs();
        if d > 0 {
            acc += place_value(t, d).0;
        }
    }
    Ok(ExactRational(acc))
}

/// Digits `q_1, q_2, …` of an integer in the alternating factorial base, with
/// trailing zeros removed.
pub fn integer_alt_factorial(i: &BigInt) -> Vec<u64> {
    let mut digits = Vec::new();
    let mut y = i.clone();
    let mut r: u64 = 1;
    while !y.is_zero() {
        // y = Σ_{t≥r} q_t (−1)^{t+1} t!/r!, so q_r ≡ (−1)^{r+1} y (mod r+1).
        let s = sign(r % 2 == 1);
        let radix = BigInt::from(r + 1);
        let q = (&y * s).mod_floor(&radix);
        y = (y - &q * s) / &radix;
        digits.push(q.to_u64().expect("digit below radix"));
        r += 1;
    }
    digits
}

/// Fractional digits `q_{-1}, …, q_{-S}` and the integer part `I` of `q`.
///
/// Writes `q = N / (S+1)!` for the least `S` with `denom | (S+1)!` and peels
/// digits from `s = S` downward; what remains is the integer part.
pub fn split_fraction(q: &ExactRational) -> (Vec<u64>, BigInt) {
    let d = q.denom();
    let mut s_max: u64 = 0;
    let mut fact = BigInt::one();
    while !(&fact % d).is_zero() {
        s_max += 1;
        fact *= s_max + 1;
    }
    let mut n = q.numer() * (&fact / d);
    let mut digits = vec![0u64; s_max as usize];
    for s in (1..=s_max).rev() {
        let sg = sign(s % 2 == 0);
        let radix = BigInt::from(s + 1);
        let digit = (&n * sg).mod_floor(&radix);
        n = (n - &digit * sg) / &radix;
        digits[s as usize - 1] = digit.to_u64().expect("digit below radix");
    }
    (digits, n)
}

/// The unique constant word `w` with `g(w) = q`.
pub fn encode(q: &ExactRational) -> Result<LocatedWord, RationalError> {
    if q.is_zero() {
        return Err(RationalError::Zero);
    }
    let (frac, int) = split_fraction(q);
    let mut entries = Vec::new();
    for (s, &d) in frac.iter().enumerate().rev() {
        if d > 0 {
            let pos = -(s as i64) - 1;
            entries.push((pos, Letter::Sym(-(d as i64))));
        }
    }
    for (r, &d) in integer_alt_factorial(&int).iter().enumerate() {
        if d > 0 {
            let pos = i64::try_from(r + 1).map_err(|_| RationalError::Overflow)?;
            entries.push((pos, Letter::Sym(d as i64)));
        }
    }
    Ok(LocatedWord::new(entries, Profile::Abs)?)
}

/// Inverse of [`encode`]; identical to [`evaluate`] on constant words.
pub fn decode(w: &LocatedWord) -> Result<ExactRational, RationalError> {
    evaluate(w)
}

fn two_sided_encoding(q: &ExactRational) -> Result<LocatedWord, RationalError> {
    let w = encode(q)?;
    if !w.is_two_sided() {
        return Err(RationalError::NotTwoSided(q.to_string()));
    }
    Ok(w)
}

/// `q1 ≺ q2`: the encoding of `q2` surrounds the encoding of `q1`.
pub fn rational_precedes(q1: &ExactRational, q2: &ExactRational) -> Result<bool, RationalError> {
    let (a, b) = (two_sided_encoding(q1)?, two_sided_encoding(q2)?);
    Ok(words::rel_r1(&a, &b))
}

/// Whether a `≺`-increasing tuple of rationals lies in the `ξ`-th family:
/// the smallest positive positions of the encodings form a member of `A_ξ`.
pub fn q_xi_member(tuple: &[ExactRational], xi: &Ordinal) -> Result<bool, RationalError> {
    let encs = tuple
        .iter()
        .map(two_sided_encoding)
        .collect::<Result<Vec<_>, _>>()?;
    for (k, p) in encs.windows(2).enumerate() {
        if !words::rel_r1(&p[0], &p[1]) {
            return Err(RationalError::NotIncreasing(k + 1));
        }
    }
    let mins: Vec<u64> = encs
        .iter()
        .map(|w| w.min_pos_positive().expect("two-sided") as u64)
        .collect();
    Ok(schreier::is_member(&mins, xi))
}

/// `q_n(i,j)` together with its affine form `constant + i·coeff_i + j·coeff_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPattern {
    pub value: ExactRational,
    pub constant: ExactRational,
    pub coeff_i: ExactRational,
    pub coeff_j: ExactRational,
}

/// `g(w_{3n−2} ⋆ T_(j,i)(w_{3n−1}) ⋆ T_(1,1)(w_{3n}))`.
///
/// Positive-side variables of the middle word take `j`, negative-side ones
/// take `i`. With `k_n = |n|` the clamp is inactive whenever `i, j ≤ n`.
pub fn rational_pattern(
    w: &[LocatedWord],
    n: u64,
    i: u64,
    j: u64,
) -> Result<RationalPattern, RationalError> {
    let needed = 3 * n;
    if n == 0 || (w.len() as u64) < needed {
        return Err(RationalError::TooFewWords { index: n, needed, len: w.len() });
    }
    if (i == 0) != (j == 0) || i > n || j > n {
        return Err(RationalError::PatternBounds { i, j, n });
    }
    let base = (3 * n - 3) as usize;
    let (a, b, c) = (&w[base], &w[base + 1], &w[base + 2]);
    let mid = words::substitute(b, j, i)?;
    let last = words::substitute(c, 1, 1)?;
    let word = words::concat(&words::concat(a, &mid)?, &last)?;
    let value = evaluate(&word)?;

    let constant = &(&evaluate(a)? + &evaluate(b)?) + &evaluate(&last)?;
    let mut coeff_i = ExactRational::zero();
    let mut coeff_j = ExactRational::zero();
    for &(t, l) in b.entries() {
        if l == Letter::Var {
            let unit = place_value(t, 1);
            if t < 0 {
                coeff_i = &coeff_i + &unit;
            } else {
                coeff_j = &coeff_j + &unit;
            }
        }
    }
    Ok(RationalPattern { value, constant, coeff_i, coeff_j })
}

impl RationalPattern {
    /// `constant + i·coeff_i + j·coeff_j`.
    pub fn affine(&self, i: u64, j: u64) -> ExactRational {
        let i = ExactRational::integer(i);
        let j = ExactRational::integer(j);
        &(&self.constant + &(&i * &self.coeff_i)) + &(&j * &self.coeff_j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::tests::w;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&w("1:1")).unwrap(), r("1"));
        assert_eq!(evaluate(&w("-1:-1")).unwrap(), r("-1/2"));
        assert_eq!(evaluate(&w("-2:-2")).unwrap(), r("1/3"));
        assert_eq!(evaluate(&w("-2:v,1:v")).unwrap(), r("0"));
        let p = Profile::AbsPlus(1);
        let x = LocatedWord::parse("1:1", &p).unwrap();
        assert!(matches!(evaluate(&x), Err(RationalError::WrongProfile(_))));
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&r("1")).unwrap(), w("1:1"));
        assert_eq!(encode(&r("2")).unwrap(), w("2:2,3:1"));
        assert_eq!(encode(&r("-1/2")).unwrap(), w("-1:-1"));
        assert_eq!(encode(&r("1/3")).unwrap(), w("-2:-2"));
        assert_eq!(encode(&r("0")), Err(RationalError::Zero));
    }

    #[test]
    fn integer_digit_examples() {
        assert_eq!(integer_alt_factorial(&BigInt::from(0)), Vec::<u64>::new());
        assert_eq!(integer_alt_factorial(&BigInt::from(1)), vec![1]);
        assert_eq!(integer_alt_factorial(&BigInt::from(2)), vec![0, 2, 1]);
        for i in -500i64..=500 {
            let digits = integer_alt_factorial(&BigInt::from(i));
            let mut total = BigInt::zero();
            for (k, &d) in digits.iter().enumerate() {
                let r = k as u64 + 1;
                assert!(d <= r);
                total += factorial(r) * d * sign(r % 2 == 1);
            }
            assert_eq!(total, BigInt::from(i));
        }
    }

    #[test]
    fn precedes_examples() {
        // dom {−1,1} and dom {−3,3}.
        let q1 = evaluate(&w("-1:-1,1:1")).unwrap();
        let q2 = evaluate(&w("-3:-1,3:1")).unwrap();
        assert!(rational_precedes(&q1, &q2).unwrap());
        assert!(!rational_precedes(&q2, &q1).unwrap());
        assert!(matches!(
            rational_precedes(&q1, &r("1")),
            Err(RationalError::NotTwoSided(_))
        ));
    }

    #[test]
    fn q_xi_examples() {
        let a = evaluate(&w("-1:-1,1:1")).unwrap();
        let b = evaluate(&w("-3:-1,3:1")).unwrap();
        assert!(q_xi_member(&[a.clone(), b.clone()], &Ordinal::nat(2)).unwrap());
        assert!(q_xi_member(std::slice::from_ref(&a), &Ordinal::nat(1)).unwrap());
        let t = [
            evaluate(&w("-1:-1,2:1")).unwrap(),
            evaluate(&w("-3:-1,5:1")).unwrap(),
            evaluate(&w("-4:-1,9:1")).unwrap(),
        ];
        assert!(!q_xi_member(&t, &Ordinal::omega()).unwrap());
        assert!(matches!(
            q_xi_member(&[b, a], &Ordinal::nat(2)),
            Err(RationalError::NotIncreasing(1))
        ));
    }

    fn pattern_words() -> Vec<LocatedWord> {
        vec![
            w("-1:v,1:v"),
            w("-3:v,-2:-1,2:v,3:1"),
            w("-4:v,4:v"),
            w("-6:v,-5:v,5:2,6:v"),
            w("-8:-3,-7:v,7:v,8:v"),
            w("-9:v,9:v"),
        ]
    }

    #[test]
    fn pattern_is_affine() {
        let ws = pattern_words();
        for n in 1..=2 {
            for (i, j) in [(0, 0)].into_iter().chain((1..=n).flat_map(|i| (1..=n).map(move |j| (i, j)))) {
                let p = rational_pattern(&ws, n, i, j).unwrap();
                assert_eq!(p.value, p.affine(i, j), "n={n} i={i} j={j}");
            }
        }
        assert!(rational_pattern(&ws, 3, 1, 1).is_err());
        assert!(rational_pattern(&ws, 1, 1, 0).is_err());
        assert!(rational_pattern(&ws, 1, 2, 1).is_err());
    }

    #[test]
    fn pattern_ignores_absent_side() {
        // Middle word with variables only on the positive side.
        let ws = vec![w("-1:v,1:v"), w("-2:-1,2:v"), w("-3:v,3:v")];
        let p = rational_pattern(&ws, 1, 1, 1).unwrap();
        assert_eq!(p.coeff_i, ExactRational::zero());
    }

    #[test]
    fn consecutive_patterns_are_ordered() {
        let ws = pattern_words();
        let a = rational_pattern(&ws, 1, 1, 1).unwrap().value;
        let b = rational_pattern(&ws, 2, 2, 1).unwrap().value;
        assert!(rational_precedes(&a, &b).unwrap());
    }
}
