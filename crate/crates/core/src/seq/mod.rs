//! Complex-sequence algebra over Gaussian integers.
//!
//! All sequence arithmetic (aperiodic autocorrelation, Golay-pair
//! verification, the recursive pair constructor) is exact: elements are
//! Gaussian integers, so there is no tolerance tuning anywhere in this
//! layer. Floating point enters only at waveform synthesis.
//!
//! The text form of a sequence uses one character per element:
//! `+` = 1, `-` = -1, `i` = sqrt(-1), `j` = -sqrt(-1), `0` = 0.
//! For example `"+i+0++-"` is the length-7 pair member used on a single
//! 4 MHz channel.

mod catalog;
mod certify;
mod construct;
mod qpsk;
mod table;

pub use catalog::enumerate_quaternary_gcps;
pub use certify::{certify_all_patterns, certify_pattern, composite_sequence, PatternReport};
pub use construct::{golay_construct, TheoremParams};
pub use qpsk::{qpsk_phase_search, starred_candidate_set, QpskCandidate, QpskSearchResult, QPSK_ORDER};
pub use table::{is_starred, table1_select, ChannelSequenceSet, Table1, STARRED_PATTERNS};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;

/// A Gaussian integer, the exact element type for all sequence algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
pub const NEG_ONE: GaussInt = GaussInt { re: -1, im: 0 };
pub const I: GaussInt = GaussInt { re: 0, im: 1 };
pub const NEG_I: GaussInt = GaussInt { re: 0, im: -1 };

impl GaussInt {
    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// True for the four Gaussian units `{1, -1, i, -i}`.
    pub fn is_unit(self) -> bool {
        self.norm_sqr() == 1
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    /// The alphabet character, if this element is in `{+, -, i, j, 0}`.
    pub fn to_symbol(self) -> Option<char> {
        match (self.re, self.im) {
            (0, 0) => Some('0'),
            (1, 0) => Some('+'),
            (-1, 0) => Some('-'),
            (0, 1) => Some('i'),
            (0, -1) => Some('j'),
            _ => None,
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '0' => Some(ZERO),
            '+' => Some(ONE),
            '-' => Some(NEG_ONE),
            'i' => Some(I),
            'j' => Some(NEG_I),
            _ => None,
        }
    }
}

impl std::ops::Add for GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl std::ops::Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl std::ops::Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl std::ops::Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_symbol() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "({}{:+}i)", self.re, self.im),
        }
    }
}

/// A finite complex sequence with exact Gaussian-integer elements.
///
/// Sequences produced by parsing stay on the quaternary-plus-zero alphabet;
/// the recursive constructor may in general produce sums outside it, which
/// is fine for the algebra but rejected at waveform mapping (see
/// [`ComplexSeq::is_waveform_alphabet`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexSeq {
    elements: Vec<GaussInt>,
}

impl ComplexSeq {
    pub fn new(elements: Vec<GaussInt>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSequence("sequence must be non-empty".into()));
        }
        Ok(Self { elements })
    }

    /// Parse from the `{+, -, i, j, 0}` text form.
    pub fn parse(text: &str) -> Result<Self> {
        let elements = text
            .chars()
            .map(|c| {
                GaussInt::from_symbol(c)
                    .ok_or_else(|| Error::InvalidSequence(format!("invalid symbol '{c}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[GaussInt] {
        &self.elements
    }

    pub fn get(&self, idx: usize) -> GaussInt {
        self.elements[idx]
    }

    /// Sum of squared magnitudes (the lag-0 autocorrelation).
    pub fn energy(&self) -> i64 {
        self.elements.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Reverse element order and conjugate each element.
    pub fn reverse_conjugate(&self) -> Self {
        Self {
            elements: self.elements.iter().rev().map(|e| e.conj()).collect(),
        }
    }

    /// Element-wise scaling by a Gaussian integer.
    pub fn scaled(&self, theta: GaussInt) -> Self {
        Self {
            elements: self.elements.iter().map(|&e| theta * e).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(NEG_ONE)
    }

    /// True when every element has modulus exactly 0 or 1, i.e. the sequence
    /// can be mapped onto subcarriers without amplitude spread.
    pub fn is_waveform_alphabet(&self) -> bool {
        self.elements
            .iter()
            .all(|e| e.is_zero() || e.is_unit())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.elements.iter().map(|e| e.to_complex()).collect()
    }
}

impl fmt::Display for ComplexSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.elements {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Aperiodic autocorrelation coefficient at `lag`.
///
/// `apac(s, k) = sum_n s[n+k] * conj(s[n])` over the overlapping range;
/// negative lags are the conjugates of the positive ones.
pub fn apac(seq: &ComplexSeq, lag: i64) -> Result<GaussInt> {
    let len = seq.len();
    if lag.unsigned_abs() as usize >= len {
        return Err(Error::LagOutOfRange { lag, len });
    }
    if lag < 0 {
        return Ok(apac(seq, -lag)?.conj());
    }
    let k = lag as usize;
    let mut acc = ZERO;
    for n in 0..len - k {
        acc = acc + seq.get(n + k) * seq.get(n).conj();
    }
    Ok(acc)
}

/// True when `(a, b)` is a Golay complementary pair: for every nonzero lag
/// the two autocorrelations cancel exactly.
pub fn is_gcp(a: &ComplexSeq, b: &ComplexSeq) -> Result<bool> {
    Ok(first_gcp_violation(a, b)?.is_none())
}

/// The first lag at which the pair condition fails, if any.
pub fn first_gcp_violation(a: &ComplexSeq, b: &ComplexSeq) -> Result<Option<usize>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    for k in 1..a.len() {
        let sum = apac(a, k as i64)? + apac(b, k as i64)?;
        if !sum.is_zero() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// A verified Golay complementary pair. Construction runs the full
/// autocorrelation check; a value of this type cannot exist unverified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GolayPair {
    a: ComplexSeq,
    b: ComplexSeq,
}

impl GolayPair {
    pub fn new(a: ComplexSeq, b: ComplexSeq) -> Result<Self> {
        match first_gcp_violation(&a, &b)? {
            None => Ok(Self { a, b }),
            Some(lag) => Err(Error::NotAGcp { lag }),
        }
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Self::new(ComplexSeq::parse(a)?, ComplexSeq::parse(b)?)
    }

    pub fn a(&self) -> &ComplexSeq {
        &self.a
    }

    pub fn b(&self) -> &ComplexSeq {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The base pair used throughout: `a = (+, i, +)`, `b = (+, +, -)`.
    pub fn base_pair() -> Self {
        Self::parse("+i+", "++-").expect("base pair is complementary")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> ComplexSeq {
        ComplexSeq::parse(s).unwrap()
    }

    #[test]
    fn apac_lag_zero_is_energy() {
        assert_eq!(apac(&seq("+i+"), 0).unwrap(), GaussInt::new(3, 0));
    }

    #[test]
    fn apac_direct_summation() {
        assert_eq!(apac(&seq("+i+"), 2).unwrap(), ONE);
        assert_eq!(apac(&seq("++-"), 2).unwrap(), NEG_ONE);
    }

    #[test]
    fn apac_negative_lag_is_conjugate() {
        let s = seq("+ij0-");
        for k in 0..s.len() as i64 {
            assert_eq!(apac(&s, -k).unwrap(), apac(&s, k).unwrap().conj());
        }
    }

    #[test]
    fn apac_out_of_range() {
        assert!(matches!(
            apac(&seq("+i+"), 3),
            Err(Error::LagOutOfRange { lag: 3, len: 3 })
        ));
        assert!(apac(&seq("+i+"), -3).is_err());
    }

    #[test]
    fn gcp_base_pair_holds() {
        assert!(is_gcp(&seq("+i+"), &seq("++-")).unwrap());
    }

    #[test]
    fn gcp_rejects_equal_pair() {
        assert!(!is_gcp(&seq("++"), &seq("++")).unwrap());
    }

    #[test]
    fn gcp_length_one_trivial() {
        assert!(is_gcp(&seq("+"), &seq("-")).unwrap());
    }

    #[test]
    fn gcp_length_mismatch_is_error() {
        assert!(matches!(
            is_gcp(&seq("+i+"), &seq("++")),
            Err(Error::LengthMismatch { a: 3, b: 2 })
        ));
    }

    #[test]
    fn golay_pair_verifies_on_construction() {
        assert!(GolayPair::parse("+i+", "++-").is_ok());
        let err = GolayPair::parse("++", "++").unwrap_err();
        assert!(matches!(err, Error::NotAGcp { lag: 1 }));
    }

    #[test]
    fn parse_display_round_trip() {
        for text in ["+i+0++-", "+", "j0i", "+i+0--+"] {
            assert_eq!(seq(text).to_string(), text);
        }
        assert!(ComplexSeq::parse("+x+").is_err());
        assert!(ComplexSeq::parse("").is_err());
    }

    #[test]
    fn reverse_conjugate_examples() {
        assert_eq!(seq("+i+").reverse_conjugate(), seq("+j+"));
        assert_eq!(seq("++-").reverse_conjugate(), seq("-++"));
    }

    #[test]
    fn waveform_alphabet_check() {
        assert!(seq("+i+0++-").is_waveform_alphabet());
        let spread = ComplexSeq::new(vec![GaussInt::new(1, 1)]).unwrap();
        assert!(!spread.is_waveform_alphabet());
    }
}
