//! Bitstrings, the OneMinMax and LOTZ objectives, and Pareto dominance.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{invalid_input, Error, Result};

const WORD: usize = 64;

/// A fixed-length vector of binary genes, packed 64 per word.
///
/// Gene `i` lives in bit `i % 64` of word `i / 64`; bits past `len` are
/// always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    words: SmallVec<[u64; 2]>,
    len: usize,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "bitstring length must be at least 1");
        Self { words: SmallVec::from_elem(0, len.div_ceil(WORD)), len }
    }

    pub fn ones(len: usize) -> Self {
        let mut x = Self::zeros(len);
        for w in x.words.iter_mut() {
            *w = u64::MAX;
        }
        x.clear_padding();
        x
    }

    /// `1^i 0^(len-i)`, the LOTZ Pareto-optimal point with `i` leading ones.
    pub fn front_point(len: usize, ones: usize) -> Self {
        assert!(ones <= len);
        let mut x = Self::zeros(len);
        for i in 0..ones {
            x.set(i, true);
        }
        x
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut x = Self::zeros(len);
        for w in x.words.iter_mut() {
            *w = rng.next_u64();
        }
        x.clear_padding();
        x
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.is_empty() {
            return Err(invalid_input("bitstring must have at least one gene"));
        }
        let mut x = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            x.set(i, b);
        }
        Ok(x)
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; a bitstring holds at least one gene.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "gene index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "gene index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "gene index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of consecutive ones starting at gene 0.
    pub fn leading_ones(&self) -> usize {
        let mut total = 0;
        for &w in &self.words {
            let run = w.trailing_ones() as usize;
            total += run;
            if run < WORD {
                break;
            }
        }
        total.min(self.len)
    }

    /// Number of consecutive zeros ending at gene `len - 1`.
    pub fn trailing_zeros(&self) -> usize {
        let pad = self.words.len() * WORD - self.len;
        let mut total = 0;
        for (k, &w) in self.words.iter().enumerate().rev() {
            let run = w.leading_zeros() as usize;
            let run = if k + 1 == self.words.len() { run - pad } else { run };
            total += run;
            let width = if k + 1 == self.words.len() { WORD - pad } else { WORD };
            if run < width {
                break;
            }
        }
        total
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "hamming distance needs equal lengths");
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Parses a string of `0`/`1` characters, gene 0 first.
impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bitstring"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::Parse("empty bitstring".into()));
        }
        Self::from_bits(&bits)
    }
}

/// A pair of objective values, both maximised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub f1: u32,
    pub f2: u32,
}

impl ObjectiveVector {
    pub const fn new(f1: u32, f2: u32) -> Self {
        Self { f1, f2 }
    }

    pub fn compare(self, other: Self) -> DominanceRelation {
        compare(self, other)
    }

    /// `self ≥ other` componentwise.
    pub fn weakly_dominates(self, other: Self) -> bool {
        self.f1 >= other.f1 && self.f2 >= other.f2
    }

    pub fn dominates(self, other: Self) -> bool {
        self.weakly_dominates(other) && self != other
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.f1, self.f2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DominanceRelation {
    Dominates,
    DominatedBy,
    Incomparable,
    Equal,
}

impl DominanceRelation {
    pub fn reversed(self) -> Self {
        match self {
            Self::Dominates => Self::DominatedBy,
            Self::DominatedBy => Self::Dominates,
            other => other,
        }
    }

    /// Weak dominance of the left operand over the right.
    pub fn is_weak_dominance(self) -> bool {
        matches!(self, Self::Dominates | Self::Equal)
    }
}

/// Pareto relation of `a` to `b` under maximisation.
pub fn compare(a: ObjectiveVector, b: ObjectiveVector) -> DominanceRelation {
    match (a.f1.cmp(&b.f1), a.f2.cmp(&b.f2)) {
        (Ordering::Equal, Ordering::Equal) => DominanceRelation::Equal,
        (Ordering::Less, Ordering::Greater) | (Ordering::Greater, Ordering::Less) => DominanceRelation::Incomparable,
        (Ordering::Less, _) | (_, Ordering::Less) => DominanceRelation::DominatedBy,
        _ => DominanceRelation::Dominates,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    OneMinMax,
    Lotz,
}

impl ProblemKind {
    pub fn token(self) -> &'static str {
        match self {
            Self::OneMinMax => "oneminmax",
            Self::Lotz => "lotz",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oneminmax" | "omm" => Ok(Self::OneMinMax),
            "lotz" => Ok(Self::Lotz),
            other => Err(Error::Parse(format!("unknown problem {other:?}"))),
        }
    }
}

/// A benchmark instance: the objective pair and the problem size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Problem {
    pub kind: ProblemKind,
    pub n: usize,
}

impl Problem {
    pub fn new(kind: ProblemKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid_input("problem size must be at least 1"));
        }
        if n > u32::MAX as usize / 2 {
            return Err(invalid_input("problem size too large"));
        }
        Ok(Self { kind, n })
    }

    pub fn one_min_max(n: usize) -> Self {
        Self::new(ProblemKind::OneMinMax, n).expect("valid problem size")
    }

    pub fn lotz(n: usize) -> Self {
        Self::new(ProblemKind::Lotz, n).expect("valid problem size")
    }

    pub fn evaluate(&self, x: &BitString) -> Result<ObjectiveVector> {
        if x.len() != self.n {
            return Err(invalid_input(format!("bitstring has length {} but the problem size is {}", x.len(), self.n)));
        }
        let (f1, f2) = match self.kind {
            ProblemKind::OneMinMax => {
                let ones = x.count_ones();
                (ones, self.n - ones)
            }
            ProblemKind::Lotz => (x.leading_ones(), x.trailing_zeros()),
        };
        Ok(ObjectiveVector::new(f1 as u32, f2 as u32))
    }

    /// The Pareto-front vector with `i` in the first objective, `(i, n - i)`.
    /// Both benchmarks share this front.
    pub fn front_vector(&self, i: usize) -> ObjectiveVector {
        assert!(i <= self.n);
        ObjectiveVector::new(i as u32, (self.n - i) as u32)
    }

    pub fn front_size(&self) -> usize {
        self.n + 1
    }

    pub fn is_front_vector(&self, v: ObjectiveVector) -> bool {
        v.f1 as usize + v.f2 as usize == self.n
    }

    pub fn is_pareto_optimal(&self, x: &BitString) -> Result<bool> {
        Ok(self.is_front_vector(self.evaluate(x)?))
    }
}

/// L(x) = leading ones + trailing zeros.
pub fn l_attribute(x: &BitString) -> usize {
    x.leading_ones() + x.trailing_zeros()
}

/// Whether the Pareto-optimal `x` has a Pareto-optimal Hamming neighbour
/// whose objective vector is missing from `front_values`.
///
/// For both benchmarks the Pareto-optimal neighbours of a front point with
/// `f1 = i` are exactly the front vectors at `i - 1` and `i + 1` (when they
/// exist): on OneMinMax every flip moves the ones count by one, and on LOTZ
/// only the flips at the `1|0` boundary stay on the front.
pub fn is_good(problem: &Problem, x: &BitString, front_values: &[ObjectiveVector]) -> Result<bool> {
    let v = problem.evaluate(x)?;
    if !problem.is_front_vector(v) {
        return Err(invalid_input(format!("{x} is not Pareto optimal")));
    }
    let i = v.f1 as usize;
    let below = (i > 0).then(|| problem.front_vector(i - 1));
    let above = (i < problem.n).then(|| problem.front_vector(i + 1));
    Ok([below, above].into_iter().flatten().any(|y| !front_values.contains(&y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn ov(f1: u32, f2: u32) -> ObjectiveVector {
        ObjectiveVector::new(f1, f2)
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(Problem::one_min_max(8).evaluate(&bs("00101011")).unwrap(), ov(4, 4));
        assert_eq!(Problem::lotz(8).evaluate(&bs("11110000")).unwrap(), ov(4, 4));
        assert_eq!(Problem::lotz(8).evaluate(&bs("11111111")).unwrap(), ov(8, 0));
        assert_eq!(Problem::lotz(4).evaluate(&bs("1101")).unwrap(), ov(2, 0));
    }

    #[test]
    fn evaluate_rejects_length_mismatch() {
        let err = Problem::lotz(5).evaluate(&bs("1101")).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn lotz_across_word_boundaries() {
        for n in [63, 64, 65, 127, 128, 129, 200] {
            let p = Problem::lotz(n);
            for i in 0..=n {
                let x = BitString::front_point(n, i);
                assert_eq!(p.evaluate(&x).unwrap(), ov(i as u32, (n - i) as u32), "n={n} i={i}");
            }
            assert_eq!(p.evaluate(&BitString::zeros(n)).unwrap(), ov(0, n as u32));
            assert_eq!(p.evaluate(&BitString::ones(n)).unwrap(), ov(n as u32, 0));
        }
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(ov(3, 1), ov(2, 1)), DominanceRelation::Dominates);
        assert_eq!(compare(ov(2, 1), ov(3, 1)), DominanceRelation::DominatedBy);
        assert_eq!(compare(ov(3, 1), ov(2, 2)), DominanceRelation::Incomparable);
        assert_eq!(compare(ov(2, 2), ov(2, 2)), DominanceRelation::Equal);
    }

    #[test]
    fn l_attribute_examples() {
        assert_eq!(l_attribute(&bs("11110000")), 8);
        assert_eq!(l_attribute(&bs("1101")), 2);
        assert_eq!(l_attribute(&bs("0110")), 1);
        assert_eq!(l_attribute(&bs("0")), 1);
        assert_eq!(l_attribute(&bs("1")), 1);
    }

    #[test]
    fn is_good_examples() {
        let omm = Problem::one_min_max(4);
        assert!(is_good(&omm, &bs("0011"), &[ov(2, 2), ov(3, 1)]).unwrap());
        assert!(!is_good(&omm, &bs("0011"), &[ov(1, 3), ov(2, 2), ov(3, 1)]).unwrap());
        let lotz = Problem::lotz(4);
        assert!(!is_good(&lotz, &bs("1111"), &[ov(4, 0), ov(3, 1)]).unwrap());
    }

    #[test]
    fn is_good_rejects_off_front_point() {
        let err = is_good(&Problem::lotz(4), &bs("0110"), &[]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(bs("0010").to_string(), "0010");
        assert!("".parse::<BitString>().is_err());
        assert!("01x".parse::<BitString>().is_err());
    }

    #[test]
    fn flip_and_hamming() {
        let mut x = BitString::zeros(70);
        x.flip(69);
        x.flip(3);
        assert_eq!(x.count_ones(), 2);
        assert_eq!(x.hamming_distance(&BitString::zeros(70)), 2);
        x.flip(69);
        assert!(!x.get(69));
    }
}
