//! Words, index subsets, the alternating-parity subset relations, the mod-4
//! Dirichlet character and Fibonacci numbers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest word an [`IndexSubset`] can index into.
pub const MAX_WORD_LEN: usize = 64;

/// A finite sequence of integers `(w_1, ..., w_n)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<i64>);

impl Word {
    pub fn new(letters: Vec<i64>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based access.
    pub fn letter(&self, index: usize) -> i64 {
        self.0[index - 1]
    }
}

impl From<Vec<i64>> for Word {
    fn from(v: Vec<i64>) -> Self {
        Word(v)
    }
}

/// A set of 1-based positions into a word, stored as a bitmask (bit `i - 1`
/// for position `i`).
///
/// Ordering is lexicographic on the increasing index sequence, so the empty
/// subset sorts first and `{1, 2}` sorts before `{2}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexSubset(u64);

impl IndexSubset {
    pub const EMPTY: IndexSubset = IndexSubset(0);

    /// Builds a subset from strictly increasing 1-based indices, each at most `n`.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        if n > MAX_WORD_LEN {
            return Err(Error::WordTooLong(n));
        }
        let mut bits = 0u64;
        let mut prev = 0;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            if i <= prev {
                return Err(Error::UnorderedIndices);
            }
            bits |= 1 << (i - 1);
            prev = i;
        }
        Ok(IndexSubset(bits))
    }

    pub fn from_bits(bits: u64) -> Self {
        IndexSubset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Number of selected positions, `|s|`.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        (1..=MAX_WORD_LEN).contains(&index) && self.0 & (1 << (index - 1)) != 0
    }

    /// Largest selected position, 0 when empty.
    pub fn max_index(self) -> usize {
        (u64::BITS - self.0.leading_zeros()) as usize
    }

    pub fn is_valid_for(self, n: usize) -> bool {
        self.max_index() <= n
    }

    pub fn with(self, index: usize) -> Self {
        debug_assert!((1..=MAX_WORD_LEN).contains(&index));
        IndexSubset(self.0 | (1 << (index - 1)))
    }

    /// Selected positions in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i + 1)
        })
    }

    /// Product of the word letters at the selected positions (`m_s`; 1 when empty).
    pub fn monomial(self, w: &Word) -> BigInt {
        self.indices()
            .fold(BigInt::one(), |acc, i| acc * BigInt::from(w.letter(i)))
    }
}

impl Ord for IndexSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // Both sequences agree below the lowest differing position `t`. The one
        // holding `t` is smaller unless the other one stops there.
        let t = diff.trailing_zeros();
        let above = |x: u64| t < 63 && (x >> (t + 1)) != 0;
        let (self_has, lacking) = if self.0 & (1 << t) != 0 {
            (true, other.0)
        } else {
            (false, self.0)
        };
        let holder_smaller = above(lacking);
        match (self_has, holder_smaller) {
            (true, true) | (false, false) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

impl PartialOrd for IndexSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for IndexSubset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.indices())
    }
}

impl<'de> Deserialize<'de> for IndexSubset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        IndexSubset::from_indices(&indices, MAX_WORD_LEN).map_err(serde::de::Error::custom)
    }
}

/// `F_n` with `F_{-1} = 1`, `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::InvalidFibonacciIndex(n));
    }
    // (F_{i-1}, F_i) starting from i = 0.
    let (mut prev, mut cur) = (BigInt::one(), BigInt::zero());
    for _ in 0..n.max(0) {
        let next = &prev + &cur;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(if n == -1 { prev } else { cur })
}

/// The non-principal character mod 4, extended to negative arguments by periodicity.
pub fn chi(n: i64) -> i32 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// How the singleton exclusion of relations 2 and 4 treats the empty subset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingletonRule {
    /// `|s| != 1`: the empty subset is admitted.
    #[default]
    NotOne,
    /// `|s| > 1`: the empty subset is excluded.
    GreaterThanOne,
}

/// The four alternating-parity subset relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `j_i = i (mod 2)`: first index odd, parities alternate.
    OddStart,
    /// [`Relation::OddStart`] without singletons.
    OddStartNoSingleton,
    /// `j_i = i - 1 (mod 2)`: first index even, parities alternate.
    EvenStart,
    /// [`Relation::EvenStart`] without singletons.
    EvenStartNoSingleton,
}

impl Relation {
    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Relation::OddStart),
            2 => Ok(Relation::OddStartNoSingleton),
            3 => Ok(Relation::EvenStart),
            4 => Ok(Relation::EvenStartNoSingleton),
            _ => Err(Error::InvalidRelation(id)),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Relation::OddStart => 1,
            Relation::OddStartNoSingleton => 2,
            Relation::EvenStart => 3,
            Relation::EvenStartNoSingleton => 4,
        }
    }

    /// Parity (0 or 1) required of the first selected index.
    fn first_parity(self) -> usize {
        match self {
            Relation::OddStart | Relation::OddStartNoSingleton => 1,
            Relation::EvenStart | Relation::EvenStartNoSingleton => 0,
        }
    }

    fn excludes_singletons(self) -> bool {
        matches!(self, Relation::OddStartNoSingleton | Relation::EvenStartNoSingleton)
    }

    /// Tests `s` against this relation; validity of `s` for the word length
    /// is the caller's concern.
    pub fn admits(self, s: IndexSubset, rule: SingletonRule) -> bool {
        let size = s.len();
        if self.excludes_singletons() {
            let excluded = match rule {
                SingletonRule::NotOne => size == 1,
                SingletonRule::GreaterThanOne => size <= 1,
            };
            if excluded {
                return false;
            }
        }
        let parity = self.first_parity();
        s.indices()
            .enumerate()
            .all(|(pos, j)| j % 2 == (parity + pos) % 2)
    }
}

/// Relation test by numeric id, with the default singleton rule.
pub fn subword_rel(s: IndexSubset, n: usize, relation: u8) -> Result<bool> {
    let relation = Relation::from_id(relation)?;
    Ok(s.is_valid_for(n) && relation.admits(s, SingletonRule::default()))
}

/// All subsets of `1..=n` admitted by `relation`, in lexicographic order.
pub fn enumerate_admissible(n: usize, relation: Relation, rule: SingletonRule) -> Result<Vec<IndexSubset>> {
    if n > MAX_WORD_LEN {
        return Err(Error::WordTooLong(n));
    }
    let mut out = Vec::new();
    // Depth-first preorder over increasing extensions is lexicographic order.
    fn walk(n: usize, next: usize, current: IndexSubset, out: &mut Vec<IndexSubset>) {
        out.push(current);
        let mut j = next;
        while j <= n {
            walk(n, j + 1, current.with(j), out);
            j += 2;
        }
    }
    let start = if relation.first_parity() == 1 { 1 } else { 2 };
    walk(n, start, IndexSubset::EMPTY, &mut out);
    out.retain(|s| relation.admits(*s, rule));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset(ix: &[usize], n: usize) -> IndexSubset {
        IndexSubset::from_indices(ix, n).unwrap()
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(-1).unwrap(), BigInt::from(1));
        assert_eq!(fibonacci(0).unwrap(), BigInt::from(0));
        assert_eq!(fibonacci(1).unwrap(), BigInt::from(1));
        assert_eq!(fibonacci(2).unwrap(), BigInt::from(1));
        assert_eq!(fibonacci(10).unwrap(), BigInt::from(55));
        assert_eq!(fibonacci(-2), Err(Error::InvalidFibonacciIndex(-2)));
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi(1), 1);
        assert_eq!(chi(3), -1);
        assert_eq!(chi(0), 0);
        assert_eq!(chi(2), 0);
        assert_eq!(chi(-1), -1);
        assert_eq!(chi(-3), 1);
    }

    /// Kronecker-symbol form: chi(n) = (n|2) for n = 0,1,2,3,4,6 (mod 8), -(n|2) otherwise.
    #[test]
    fn chi_matches_kronecker_form() {
        fn kronecker_2(n: i64) -> i32 {
            match n.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            }
        }
        for n in -50i64..50 {
            let r = n.rem_euclid(8);
            let expected = if [0, 1, 2, 3, 4, 6].contains(&r) {
                kronecker_2(n)
            } else {
                -kronecker_2(n)
            };
            assert_eq!(chi(n), expected, "n = {n}");
        }
    }

    #[test]
    fn relation_examples() {
        assert!(subword_rel(IndexSubset::EMPTY, 3, 1).unwrap());
        assert!(subword_rel(subset(&[1, 2, 3], 3), 3, 1).unwrap());
        assert!(!subword_rel(subset(&[2], 3), 3, 1).unwrap());
        assert!(subword_rel(subset(&[2], 3), 3, 3).unwrap());
        assert!(!subword_rel(subset(&[1], 2), 2, 2).unwrap());
        assert!(subword_rel(IndexSubset::EMPTY, 2, 2).unwrap());
        assert!(subword_rel(subset(&[1, 4], 4), 4, 2).unwrap());
        assert!(!subword_rel(subset(&[1, 3], 4), 4, 1).unwrap());
        assert_eq!(subword_rel(IndexSubset::EMPTY, 2, 5), Err(Error::InvalidRelation(5)));
    }

    #[test]
    fn printed_singleton_rule_excludes_empty() {
        assert!(!Relation::OddStartNoSingleton.admits(IndexSubset::EMPTY, SingletonRule::GreaterThanOne));
        assert!(Relation::EvenStartNoSingleton.admits(IndexSubset::EMPTY, SingletonRule::NotOne));
    }

    #[test]
    fn enumeration_examples() {
        let rule = SingletonRule::NotOne;
        assert_eq!(
            enumerate_admissible(1, Relation::OddStart, rule).unwrap(),
            vec![IndexSubset::EMPTY, subset(&[1], 1)]
        );
        assert_eq!(
            enumerate_admissible(2, Relation::EvenStart, rule).unwrap(),
            vec![IndexSubset::EMPTY, subset(&[2], 2)]
        );
        for id in 1..=4 {
            assert_eq!(
                enumerate_admissible(0, Relation::from_id(id).unwrap(), rule).unwrap(),
                vec![IndexSubset::EMPTY]
            );
        }
    }

    #[test]
    fn subset_order_is_lexicographic() {
        let n = 4;
        let mut all: Vec<IndexSubset> = (0..16u64).map(IndexSubset::from_bits).collect();
        all.sort();
        let mut by_seq: Vec<Vec<usize>> = (0..16u64)
            .map(|b| IndexSubset::from_bits(b).indices().collect())
            .collect();
        by_seq.sort();
        let sorted: Vec<Vec<usize>> = all.iter().map(|s| s.indices().collect()).collect();
        assert_eq!(sorted, by_seq);
        assert!(subset(&[1, 2], n) < subset(&[2], n));
        assert!(IndexSubset::EMPTY < subset(&[4], n));
    }

    #[test]
    fn subset_construction_errors() {
        assert_eq!(
            IndexSubset::from_indices(&[0], 3),
            Err(Error::IndexOutOfRange { index: 0, len: 3 })
        );
        assert_eq!(
            IndexSubset::from_indices(&[4], 3),
            Err(Error::IndexOutOfRange { index: 4, len: 3 })
        );
        assert_eq!(IndexSubset::from_indices(&[2, 2], 3), Err(Error::UnorderedIndices));
        assert_eq!(subset(&[1, 3, 64], 64).to_string(), "{1,3,64}");
        assert_eq!(IndexSubset::EMPTY.to_string(), "{}");
        assert_eq!(subset(&[2, 3], 3).monomial(&Word::new(vec![5, -2, 7])), BigInt::from(-14));
    }
}
