//! Permutations, their descent, peak and inversion statistics, and the
//! exhaustive enumeration oracles every formula is checked against.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;

/// A permutation of `1..=n` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(word));
            }
            seen[v] = true;
        }
        Ok(Self { word })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            word: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// The word read right to left.
    pub fn reversed(&self) -> Self {
        Self {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn descent_set(&self) -> PositionSet {
        PositionSet::from_sorted_unchecked(
            (1..self.len())
                .filter(|&i| self.word[i - 1] > self.word[i])
                .collect(),
        )
    }

    pub fn peak_set(&self) -> PositionSet {
        PositionSet::from_sorted_unchecked(
            (2..self.len())
                .filter(|&i| self.word[i - 2] < self.word[i - 1] && self.word[i - 1] > self.word[i])
                .collect(),
        )
    }

    pub fn inversion_count(&self) -> usize {
        let w = &self.word;
        (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&b| b < w[i]).count())
            .sum()
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `3412` for n <= 9 or a comma-separated word such as `3,4,1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let word: Option<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().ok()).collect()
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect()
        };
        match word {
            Some(w) => Self::new(w),
            None => Err(Error::InvalidPermutation(Vec::new())),
        }
    }
}

/// A strictly increasing finite set of positive integers: descent sets,
/// peak sets and the auxiliary sets of the peak formula.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionSet(Vec<usize>);

impl PositionSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(elements: Vec<usize>) -> Result<Self> {
        let ok =
            elements.first().is_none_or(|&f| f > 0) && elements.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(Self(elements))
        } else {
            Err(Error::InvalidPositionSet(elements))
        }
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self(elements)
    }

    /// Set whose elements are the one bits of `mask` (bit `i` means `i`).
    pub fn from_mask(mask: u64) -> Self {
        Self((1..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    /// Inverse of [`PositionSet::from_mask`]; `None` if an element is >= 64.
    pub fn to_mask(&self) -> Option<u64> {
        self.0
            .iter()
            .try_fold(0u64, |m, &i| (i < 64).then(|| m | 1 << i))
    }

    /// Every subset of `{1..=k}`, in lexicographic order of element lists.
    pub fn all_subsets(k: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (0u64..1 << k).map(|m| Self::from_mask(m << 1)).collect();
        out.sort();
        out
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn with(&self, x: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&x) {
            v.insert(pos, x);
        }
        Self(v)
    }

    pub fn without(&self, x: usize) -> Self {
        Self(self.0.iter().copied().filter(|&y| y != x).collect())
    }
}

impl fmt::Display for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for PositionSet {
    type Err = Error;

    /// Comma-separated positive integers; the empty string is the empty set.
    /// Input must already be strictly increasing.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let elements = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::PositionSetParse(s.to_string()))?;
        Self::new(elements)
    }
}

impl serde::Serialize for PositionSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Upper bound on `n` for full enumeration of `S_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCap(usize);

impl EnumerationCap {
    pub const DEFAULT: usize = 10;
    /// Largest cap accepted at all; bitmask bookkeeping and sanity both end here.
    pub const HARD_LIMIT: usize = 16;

    pub fn new(cap: usize) -> Result<Self> {
        if cap > Self::HARD_LIMIT {
            Err(Error::CapTooLarge(cap))
        } else {
            Ok(Self(cap))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n > self.0 {
            Err(Error::EnumerationCap { n, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumerationCap {
    fn default() -> Self {
        Self(Self::DEFAULT)
    }
}

/// Visits every permutation of `1..=n` in lexicographic order with its
/// inversion count, descent mask and peak mask (bit `i` = position `i`).
///
/// Depth-first extension of prefixes yields the same order as repeated
/// lexicographic successor steps while keeping all statistics incremental.
pub fn for_each_permutation(
    n: usize,
    first: Option<usize>,
    mut f: impl FnMut(&[usize], usize, u64, u64),
) {
    let mut word = Vec::with_capacity(n);
    let starts: Vec<usize> = match first {
        Some(v) => vec![v],
        None => (1..=n).collect(),
    };
    if n == 0 {
        f(&word, 0, 0, 0);
        return;
    }
    for v in starts {
        word.push(v);
        let inv = v - 1;
        sweep(n, &mut word, 1u64 << v, inv, 0, 0, &mut f);
        word.pop();
    }
}

fn sweep(
    n: usize,
    word: &mut Vec<usize>,
    used: u64,
    inv: usize,
    des: u64,
    peaks: u64,
    f: &mut impl FnMut(&[usize], usize, u64, u64),
) {
    let len = word.len();
    if len == n {
        f(word, inv, des, peaks);
        return;
    }
    let last = word[len - 1];
    for v in 1..=n {
        if used >> v & 1 == 1 {
            continue;
        }
        // unplaced values below v become inversions with v
        let smaller_unused = (1..v).filter(|&u| used >> u & 1 == 0).count();
        let (d, p) = if last > v {
            let rising_into_last = len >= 2 && word[len - 2] < last;
            let p = if rising_into_last {
                peaks | 1 << len
            } else {
                peaks
            };
            (des | 1 << len, p)
        } else {
            (des, peaks)
        };
        word.push(v);
        sweep(n, word, used | 1 << v, inv + smaller_unused, d, p, f);
        word.pop();
    }
}

/// Visits every `w` in `S_n` with `Des(w) = S` (depth-first, pruning on the
/// required ascent/descent pattern), passing the word and its length.
pub fn for_each_with_descent_set(set: &PositionSet, n: usize, mut f: impl FnMut(&[usize], usize)) {
    if set.largest().is_some_and(|m| m >= n) {
        return;
    }
    let mut word = Vec::with_capacity(n);
    class_sweep(set, n, &mut word, 0, 0, &mut f);
}

fn class_sweep(
    set: &PositionSet,
    n: usize,
    word: &mut Vec<usize>,
    used: u64,
    inv: usize,
    f: &mut impl FnMut(&[usize], usize),
) {
    let len = word.len();
    if len == n {
        f(word, inv);
        return;
    }
    for v in 1..=n {
        if used >> v & 1 == 1 {
            continue;
        }
        if len > 0 {
            let descent = word[len - 1] > v;
            if descent != set.contains(len) {
                continue;
            }
        }
        let smaller_unused = (1..v).filter(|&u| used >> u & 1 == 0).count();
        word.push(v);
        class_sweep(set, n, word, used | 1 << v, inv + smaller_unused, f);
        word.pop();
    }
}

type Buckets = HashMap<u64, Vec<u64>>;

fn bump(buckets: &mut Buckets, key: u64, inv: usize, width: usize) {
    buckets.entry(key).or_insert_with(|| vec![0; width])[inv] += 1;
}

fn to_poly(counts: &[u64]) -> IntPolynomial {
    IntPolynomial::from_coeffs(counts.iter().map(|&c| BigInt::from(c)).collect())
}

/// One sweep of `S_n`, bucketed by descent set and by peak set.
///
/// Work is split by first letter across threads and merged in letter order.
#[derive(Clone, Debug)]
pub struct BruteForceOracle {
    n: usize,
    descent: BTreeMap<PositionSet, IntPolynomial>,
    peak: BTreeMap<PositionSet, IntPolynomial>,
}

impl BruteForceOracle {
    pub fn build(n: usize, cap: EnumerationCap) -> Result<Self> {
        cap.check(n)?;
        let width = n * n.saturating_sub(1) / 2 + 1;
        let partials: Vec<(Buckets, Buckets)> = (1..=n.max(1))
            .into_par_iter()
            .map(|first| {
                let mut des_b = Buckets::new();
                let mut peak_b = Buckets::new();
                let first = (n > 0).then_some(first);
                for_each_permutation(n, first, |_, inv, des, peaks| {
                    bump(&mut des_b, des, inv, width);
                    bump(&mut peak_b, peaks, inv, width);
                });
                (des_b, peak_b)
            })
            .collect();
        let mut des_all = Buckets::new();
        let mut peak_all = Buckets::new();
        for (d, p) in partials {
            merge(&mut des_all, d, width);
            merge(&mut peak_all, p, width);
        }
        let finish = |b: Buckets| {
            b.into_iter()
                .map(|(mask, counts)| (PositionSet::from_mask(mask), to_poly(&counts)))
                .collect()
        };
        Ok(Self {
            n,
            descent: finish(des_all),
            peak: finish(peak_all),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `D_S(n,q)`.
    pub fn descent_gf(&self, set: &PositionSet) -> IntPolynomial {
        self.descent.get(set).cloned().unwrap_or_default()
    }

    /// `P_S(n,q)`.
    pub fn peak_gf(&self, set: &PositionSet) -> IntPolynomial {
        self.peak.get(set).cloned().unwrap_or_default()
    }

    /// `Q_S(n,q)`: permutations whose peak set contains `S`.
    pub fn superset_peak_gf(&self, set: &PositionSet) -> IntPolynomial {
        self.peak
            .iter()
            .filter(|(peaks, _)| set.is_subset_of(peaks))
            .map(|(_, p)| p.clone())
            .sum()
    }

    /// Descent sets that actually occur, with their polynomials.
    pub fn descent_classes(&self) -> impl Iterator<Item = (&PositionSet, &IntPolynomial)> {
        self.descent.iter()
    }

    /// Peak sets that actually occur, with their polynomials.
    pub fn peak_classes(&self) -> impl Iterator<Item = (&PositionSet, &IntPolynomial)> {
        self.peak.iter()
    }
}

fn merge(into: &mut Buckets, from: Buckets, width: usize) {
    for (k, v) in from {
        let slot = into.entry(k).or_insert_with(|| vec![0; width]);
        for (a, b) in slot.iter_mut().zip(v) {
            *a += b;
        }
    }
}

pub fn brute_descent_gf(set: &PositionSet, n: usize, cap: EnumerationCap) -> Result<IntPolynomial> {
    Ok(BruteForceOracle::build(n, cap)?.descent_gf(set))
}

pub fn brute_peak_gf(set: &PositionSet, n: usize, cap: EnumerationCap) -> Result<IntPolynomial> {
    Ok(BruteForceOracle::build(n, cap)?.peak_gf(set))
}

pub fn brute_superset_peak_gf(
    set: &PositionSet,
    n: usize,
    cap: EnumerationCap,
) -> Result<IntPolynomial> {
    Ok(BruteForceOracle::build(n, cap)?.superset_peak_gf(set))
}

/// `b_k(S,n;q)` for `k = 1..=n` by enumerating `A(S;n)` and bucketing on the
/// last letter. Index 0 of the result is the zero polynomial.
pub fn brute_last_letter_buckets(
    set: &PositionSet,
    n: usize,
    cap: EnumerationCap,
) -> Result<Vec<IntPolynomial>> {
    cap.check(n)?;
    let width = n * n.saturating_sub(1) / 2 + 1;
    let mut counts = vec![vec![0u64; width]; n + 1];
    for_each_with_descent_set(set, n, |w, inv| counts[w[n - 1]][inv] += 1);
    Ok(counts.iter().map(|c| to_poly(c)).collect())
}

/// Sum of `q^inv(w)` over `w` in `S_n` with `Des(w)` contained in `allowed`.
pub fn brute_descent_subset_gf(
    allowed: &PositionSet,
    n: usize,
    cap: EnumerationCap,
) -> Result<IntPolynomial> {
    let oracle = BruteForceOracle::build(n, cap)?;
    Ok(oracle
        .descent_classes()
        .filter(|(d, _)| d.is_subset_of(allowed))
        .map(|(_, p)| p.clone())
        .sum())
}

/// `E_m(q)` by testing the up-down pattern on every permutation.
pub fn brute_alternating_gf(m: usize, cap: EnumerationCap) -> Result<IntPolynomial> {
    cap.check(m)?;
    let width = m * m.saturating_sub(1) / 2 + 1;
    let mut counts = vec![0u64; width];
    for_each_permutation(m, None, |w, inv, _, _| {
        let alternating = w
            .windows(2)
            .enumerate()
            .all(|(i, pair)| (pair[0] < pair[1]) == (i % 2 == 0));
        if alternating {
            counts[inv] += 1;
        }
    });
    Ok(to_poly(&counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(v: &[usize]) -> PositionSet {
        PositionSet::new(v.to_vec()).unwrap()
    }

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![2, 1, 3]).is_ok());
        assert!(Permutation::new(vec![2, 2, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 4]).is_err());
        assert!(Permutation::new(vec![]).is_ok());
        assert_eq!(perm("3,4,1,2"), perm("3412"));
    }

    #[test]
    fn descents() {
        assert_eq!(Permutation::identity(4).descent_set(), PositionSet::empty());
        assert_eq!(perm("4321").descent_set(), set(&[1, 2, 3]));
        assert_eq!(perm("3412").descent_set(), set(&[2]));
    }

    #[test]
    fn peaks() {
        assert_eq!(Permutation::identity(5).peak_set(), PositionSet::empty());
        assert_eq!(perm("132").peak_set(), set(&[2]));
        assert_eq!(perm("4321").peak_set(), PositionSet::empty());
        assert_eq!(perm("1324").peak_set(), set(&[2]));
        assert_eq!(perm("13254").peak_set(), set(&[2, 4]));
    }

    #[test]
    fn inversions() {
        assert_eq!(Permutation::identity(4).inversion_count(), 0);
        assert_eq!(perm("4321").inversion_count(), 6);
        assert_eq!(perm("3412").inversion_count(), 4);
    }

    #[test]
    fn position_sets() {
        assert!(PositionSet::new(vec![2, 2]).is_err());
        assert!(PositionSet::new(vec![3, 1]).is_err());
        assert!(PositionSet::new(vec![0, 1]).is_err());
        assert_eq!("".parse::<PositionSet>().unwrap(), PositionSet::empty());
        assert_eq!("2, 4".parse::<PositionSet>().unwrap(), set(&[2, 4]));
        assert!(matches!(
            "4,2".parse::<PositionSet>(),
            Err(Error::InvalidPositionSet(_))
        ));
        assert!(matches!(
            "a".parse::<PositionSet>(),
            Err(Error::PositionSetParse(_))
        ));
        assert!(matches!(
            "1,,2".parse::<PositionSet>(),
            Err(Error::PositionSetParse(_))
        ));
        assert_eq!(set(&[4, 6]).to_string(), "{4,6}");
        assert_eq!(
            PositionSet::from_mask(set(&[1, 5]).to_mask().unwrap()),
            set(&[1, 5])
        );
        let subsets = PositionSet::all_subsets(3);
        assert_eq!(subsets.len(), 8);
        assert_eq!(subsets[0], PositionSet::empty());
        assert_eq!(subsets[1], set(&[1]));
        assert_eq!(subsets[2], set(&[1, 2]));
    }

    #[test]
    fn sweep_matches_direct_statistics() {
        let mut seen = 0;
        let mut last: Option<Vec<usize>> = None;
        for_each_permutation(5, None, |w, inv, des, peaks| {
            let pm = Permutation::new(w.to_vec()).unwrap();
            assert_eq!(inv, pm.inversion_count());
            assert_eq!(PositionSet::from_mask(des), pm.descent_set());
            assert_eq!(PositionSet::from_mask(peaks), pm.peak_set());
            if let Some(prev) = &last {
                assert!(prev.as_slice() < w, "lexicographic order");
            }
            last = Some(w.to_vec());
            seen += 1;
        });
        assert_eq!(seen, 120);
    }

    #[test]
    fn descent_class_sweep_matches_filter() {
        let s = set(&[2, 4]);
        let mut via_class = Vec::new();
        for_each_with_descent_set(&s, 6, |w, inv| via_class.push((w.to_vec(), inv)));
        let mut via_filter = Vec::new();
        for_each_permutation(6, None, |w, inv, des, _| {
            if PositionSet::from_mask(des) == s {
                via_filter.push((w.to_vec(), inv));
            }
        });
        assert_eq!(via_class, via_filter);
    }

    #[test]
    fn brute_descent_examples() {
        let cap = EnumerationCap::default();
        for n in 1..=6 {
            assert_eq!(
                brute_descent_gf(&PositionSet::empty(), n, cap).unwrap(),
                p(&[1])
            );
        }
        assert_eq!(brute_descent_gf(&set(&[1]), 3, cap).unwrap(), p(&[0, 1, 1]));
        assert_eq!(
            brute_descent_gf(&set(&[2]), 4, cap).unwrap(),
            p(&[0, 1, 2, 1, 1])
        );
        assert_eq!(
            brute_descent_gf(&set(&[5]), 4, cap).unwrap(),
            IntPolynomial::zero()
        );
    }

    #[test]
    fn brute_peak_examples() {
        let cap = EnumerationCap::default();
        assert_eq!(
            brute_peak_gf(&PositionSet::empty(), 3, cap).unwrap(),
            &p(&[1, 1]) * &p(&[1, 0, 1])
        );
        assert_eq!(brute_peak_gf(&set(&[2]), 3, cap).unwrap(), p(&[0, 1, 1]));
        assert_eq!(
            brute_peak_gf(&set(&[1]), 4, cap).unwrap(),
            IntPolynomial::zero()
        );
    }

    #[test]
    fn brute_superset_examples() {
        let cap = EnumerationCap::default();
        for n in 1..=6 {
            assert_eq!(
                brute_superset_peak_gf(&PositionSet::empty(), n, cap).unwrap(),
                crate::qcore::q_factorial(n)
            );
        }
        assert_eq!(
            brute_superset_peak_gf(&set(&[2]), 3, cap).unwrap(),
            p(&[0, 1, 1])
        );
        assert_eq!(
            brute_superset_peak_gf(&set(&[2]), 4, cap).unwrap(),
            &p(&[1, 1, 1, 1]) * &p(&[0, 1, 1])
        );
    }

    #[test]
    fn cap_is_enforced() {
        let cap = EnumerationCap::new(5).unwrap();
        assert_eq!(
            brute_descent_gf(&PositionSet::empty(), 6, cap),
            Err(Error::EnumerationCap { n: 6, cap: 5 })
        );
        assert!(EnumerationCap::new(EnumerationCap::HARD_LIMIT + 1).is_err());
        let msg = Error::EnumerationCap { n: 11, cap: 10 }.to_string();
        assert!(msg.contains("cap of 10"));
    }

    #[test]
    fn last_letter_buckets() {
        let cap = EnumerationCap::default();
        // A({2},3) = {132, 231}
        let b = brute_last_letter_buckets(&set(&[2]), 3, cap).unwrap();
        assert_eq!(
            b,
            vec![
                IntPolynomial::zero(),
                p(&[0, 0, 1]),
                p(&[0, 1]),
                IntPolynomial::zero()
            ]
        );
    }

    #[test]
    fn reverse_complements_length() {
        for_each_permutation(6, None, |w, inv, _, _| {
            let pm = Permutation::new(w.to_vec()).unwrap();
            assert_eq!(inv + pm.reversed().inversion_count(), 15);
        });
    }
}
