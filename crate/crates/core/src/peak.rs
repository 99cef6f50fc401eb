//! The q-peak polynomial `P_S(n,q)`, computed three ways:
//!
//! * a signed sum over `S`-compatible sets of products of q-binomials and
//!   `(-q;q)_k` factors ([`peak_gf_compatible`]);
//! * the recurrence that peels off the largest peak ([`peak_gf_recurrence`]);
//! * inclusion-exclusion over admissible supersets, where each superset term
//!   `Q_S(n,q)` factors through a block decomposition of `{1..n}`
//!   ([`peak_gf_pie`]).
//!
//! Every path returns the zero polynomial for a set that is not
//! `n`-admissible, since no permutation has that peak set.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::permtools::PositionSet;
use crate::polynomial::IntPolynomial;
use crate::qcore::{
    alternating_length_gf, neg_q_pochhammer, q_binomial, q_factorial, q_multinomial,
};

/// `S` is the peak set of some permutation of size `n`: every element is at
/// least 2, consecutive elements differ by at least 2, and `max(S) <= n-1`.
pub fn is_admissible(set: &PositionSet, n: usize) -> bool {
    let e = set.elements();
    match (e.first(), e.last()) {
        (None, _) => true,
        (Some(&first), Some(&last)) => {
            first >= 2 && last < n && e.windows(2).all(|w| w[1] >= w[0] + 2)
        }
        _ => unreachable!(),
    }
}

/// A set `T` compatible with a peak set `S`: disjoint from `S`, below
/// `max(S)`, with at most one element strictly between consecutive elements
/// of `S ∪ {0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleSet {
    pub elements: PositionSet,
    pub parent: PositionSet,
}

impl CompatibleSet {
    pub fn new(elements: PositionSet, parent: PositionSet) -> Option<Self> {
        let ok = match parent.largest() {
            None => elements.is_empty(),
            Some(top) => {
                let mut prev = 0;
                let mut fine = elements.iter().all(|t| !parent.contains(t) && t < top);
                for s in parent.iter() {
                    fine &= elements.iter().filter(|&t| prev < t && t < s).count() <= 1;
                    prev = s;
                }
                fine
            }
        };
        ok.then_some(Self { elements, parent })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// All `S`-compatible sets, in lexicographic order of element lists.
pub fn compatible_sets(set: &PositionSet) -> Vec<CompatibleSet> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    let mut prev = 0;
    for s in set.iter() {
        let mut grown = Vec::with_capacity(out.len() * (s - prev));
        for t in &out {
            grown.push(t.clone());
            for x in prev + 1..s {
                let mut u = t.clone();
                u.push(x);
                grown.push(u);
            }
        }
        out = grown;
        prev = s;
    }
    out.sort();
    out.into_iter()
        .map(|t| CompatibleSet {
            elements: PositionSet::from_sorted_unchecked(t),
            parent: set.clone(),
        })
        .collect()
}

/// The weight `ε(S,T) ∈ {-1, 0, 1}`.
///
/// Each `s ∈ S` is handled independently, by the gap between `s` and the
/// previous element `p` of `S ∪ {0}`:
///
/// * `T` has an element `t` in `(p, s)`: factor `(-1)^(s-t-1)`;
/// * otherwise: the weight vanishes if `s - p` is odd, else factor `-1`.
///
/// This is the alternating sum over all ways of unrolling the peak
/// recurrence that produce `T`: reaching `t` takes `s-t-1` decrements of
/// the top peak, and removing `s` without recording anything sums
/// `x + x^2 + ... + x^(s-p-1)` at `x = -1`.
pub fn epsilon(t: &CompatibleSet) -> i32 {
    let mut sign = 1;
    let mut prev = 0;
    for s in t.parent.iter() {
        match t.elements.iter().find(|&x| prev < x && x < s) {
            Some(x) => {
                if (s - x - 1) % 2 == 1 {
                    sign = -sign;
                }
            }
            None => {
                if (s - prev) % 2 == 1 {
                    return 0;
                }
                sign = -sign;
            }
        }
        prev = s;
    }
    sign
}

/// One summand of the compatible-set formula, kept in factored form:
/// `sign * prod_i [t_i choose t_{i-1}]_q (-q;q)_{t_i - t_{i-1} - 1}` with
/// `t_0 = 0` and a final `t = n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleTerm {
    pub t: CompatibleSet,
    pub sign: i32,
    /// `(t_i, t_{i-1})` pairs of the q-binomial factors.
    pub binomials: Vec<(usize, usize)>,
    /// Orders `t_i - t_{i-1} - 1` of the `(-q;q)` factors.
    pub pochhammers: Vec<usize>,
}

impl CompatibleTerm {
    /// Number of `(1 + q^j)` factors across all Pochhammer products.
    pub fn pochhammer_factor_count(&self) -> usize {
        self.pochhammers.iter().sum()
    }

    pub fn unsigned_product(&self) -> IntPolynomial {
        let mut out = IntPolynomial::one();
        for &(top, bottom) in &self.binomials {
            if bottom != 0 && bottom != top {
                out = &out * &q_binomial(top, bottom as i64);
            }
        }
        for &k in &self.pochhammers {
            if k > 0 {
                out = &out * &neg_q_pochhammer(k);
            }
        }
        out
    }

    pub fn value(&self) -> IntPolynomial {
        match self.sign {
            0 => IntPolynomial::zero(),
            1 => self.unsigned_product(),
            _ => -self.unsigned_product(),
        }
    }
}

/// Every summand of the compatible-set formula for an admissible `(S, n)`,
/// including those with weight zero. Empty for non-admissible input.
pub fn compatible_terms(set: &PositionSet, n: usize) -> Vec<CompatibleTerm> {
    if !is_admissible(set, n) || n == 0 {
        return Vec::new();
    }
    compatible_sets(set)
        .into_iter()
        .map(|t| {
            let sign = epsilon(&t);
            let mut bounds: Vec<usize> = t.elements.iter().collect();
            bounds.push(n);
            let mut binomials = Vec::with_capacity(bounds.len());
            let mut pochhammers = Vec::with_capacity(bounds.len());
            let mut prev = 0;
            for &b in &bounds {
                binomials.push((b, prev));
                pochhammers.push(b - prev - 1);
                prev = b;
            }
            CompatibleTerm {
                t,
                sign,
                binomials,
                pochhammers,
            }
        })
        .collect()
}

/// `P_S(n,q)` as the signed sum over `S`-compatible sets.
pub fn peak_gf_compatible(set: &PositionSet, n: usize) -> IntPolynomial {
    compatible_terms(set, n)
        .into_iter()
        .filter(|term| term.sign != 0)
        .map(|term| term.value())
        .sum()
}

/// Memo for the peak recurrence, keyed on `(S, n)`.
#[derive(Debug, Default)]
pub struct PeakRecurrence {
    memo: HashMap<(PositionSet, usize), IntPolynomial>,
}

impl PeakRecurrence {
    pub fn new() -> Self {
        Self::default()
    }

    /// `P_S(n,q) = [n choose k]_q P_{S1}(k,q) (-q;q)_{n-k-1} - P_{S1}(n,q) - P_{S2}(n,q)`
    /// where `S1 = S \ {max S}`, `k = max S - 1`, `S2 = S1 ∪ {k}`, bottoming
    /// out at `P_∅(n,q) = (-q;q)_{n-1}`.
    pub fn get(&mut self, set: &PositionSet, n: usize) -> IntPolynomial {
        if n == 0 || !is_admissible(set, n) {
            return IntPolynomial::zero();
        }
        let Some(top) = set.largest() else {
            return neg_q_pochhammer(n - 1);
        };
        if let Some(hit) = self.memo.get(&(set.clone(), n)) {
            return hit.clone();
        }
        let k = top - 1;
        let s1 = set.without(top);
        let s2 = s1.with(k);
        let split = &(&q_binomial(n, k as i64) * &self.get(&s1, k)) * &neg_q_pochhammer(n - k - 1);
        let value = &(&split - &self.get(&s1, n)) - &self.get(&s2, n);
        self.memo.insert((set.clone(), n), value.clone());
        value
    }
}

pub fn peak_gf_recurrence(set: &PositionSet, n: usize) -> IntPolynomial {
    PeakRecurrence::new().get(set, n)
}

/// A half-open run of consecutive integers `start..start+len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub start: usize,
    pub len: usize,
}

impl Interval {
    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn to_vec(self) -> Vec<usize> {
        (self.start..self.end()).collect()
    }
}

/// `{1..n} = U_0 ⊔ B_1 ⊔ U_1 ⊔ ... ⊔ B_k ⊔ U_k` in left-to-right order,
/// where each block `B_j` runs from one before to one after a maximal chain
/// of peaks spaced exactly two apart, and the gaps `U_i` may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub n: usize,
    pub blocks: Vec<Interval>,
    pub gaps: Vec<Interval>,
}

impl BlockDecomposition {
    /// Interleaved part sizes `u_0, r_1, u_1, ..., r_k, u_k`.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = vec![self.gaps[0].len];
        for (b, g) in self.blocks.iter().zip(&self.gaps[1..]) {
            out.push(b.len);
            out.push(g.len);
        }
        out
    }
}

pub fn block_decomposition(set: &PositionSet, n: usize) -> Result<BlockDecomposition> {
    if !is_admissible(set, n) {
        return Err(Error::NotAdmissible {
            set: set.to_string(),
            n,
        });
    }
    let mut chains: Vec<(usize, usize)> = Vec::new();
    for s in set.iter() {
        match chains.last_mut() {
            Some((_, last)) if s == *last + 2 => *last = s,
            _ => chains.push((s, s)),
        }
    }
    let mut blocks = Vec::with_capacity(chains.len());
    let mut gaps = Vec::with_capacity(chains.len() + 1);
    let mut cursor = 1;
    for (first, last) in chains {
        let start = first - 1;
        gaps.push(Interval {
            start: cursor,
            len: start - cursor,
        });
        let block = Interval {
            start,
            len: last - first + 3,
        };
        cursor = block.end();
        blocks.push(block);
    }
    gaps.push(Interval {
        start: cursor,
        len: n + 1 - cursor,
    });
    Ok(BlockDecomposition { n, blocks, gaps })
}

/// `Q_S(n,q)`, the length generating function of permutations whose peak
/// set contains `S`: a q-multinomial over the block decomposition times
/// `E_r(q)` per block and `[u]!_q` per gap.
pub fn q_superset_gf(set: &PositionSet, n: usize) -> IntPolynomial {
    let Ok(dec) = block_decomposition(set, n) else {
        return IntPolynomial::zero();
    };
    let mut out = q_multinomial(n, &dec.parts()).expect("parts partition n");
    for b in &dec.blocks {
        out = &out * &alternating_length_gf(b.len);
    }
    for g in &dec.gaps {
        if g.len > 1 {
            out = &out * &q_factorial(g.len);
        }
    }
    out
}

/// Every `n`-admissible `S' ⊇ S`, including `S`, in lexicographic order.
pub fn admissible_supersets(set: &PositionSet, n: usize) -> Vec<PositionSet> {
    if !is_admissible(set, n) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_supersets(set, n, 2, &mut current, &mut out);
    out.sort();
    out
}

fn extend_supersets(
    set: &PositionSet,
    n: usize,
    pos: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<PositionSet>,
) {
    if pos >= n {
        out.push(PositionSet::from_sorted_unchecked(current.clone()));
        return;
    }
    let fits = current.last().is_none_or(|&l| pos >= l + 2) && !set.contains(pos + 1);
    if set.contains(pos) {
        current.push(pos);
        extend_supersets(set, n, pos + 1, current, out);
        current.pop();
        return;
    }
    extend_supersets(set, n, pos + 1, current, out);
    if fits {
        current.push(pos);
        extend_supersets(set, n, pos + 1, current, out);
        current.pop();
    }
}

/// `P_S(n,q) = sum_{S' ⊇ S admissible} (-1)^(|S'|-|S|) Q_{S'}(n,q)`.
pub fn peak_gf_pie(set: &PositionSet, n: usize) -> IntPolynomial {
    let mut out = IntPolynomial::zero();
    for sup in admissible_supersets(set, n) {
        let q = q_superset_gf(&sup, n);
        if (sup.len() - set.len()).is_multiple_of(2) {
            out += &q;
        } else {
            out -= &q;
        }
    }
    out
}

/// Whether `P_S(n,q)`, via the compatible-set formula, is palindromic in
/// degree `n(n-1)/2`.
pub fn check_palindromic_peak(set: &PositionSet, n: usize) -> bool {
    peak_gf_compatible(set, n).is_palindromic(n * n.saturating_sub(1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permtools::{BruteForceOracle, EnumerationCap};

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn set(v: &[usize]) -> PositionSet {
        PositionSet::new(v.to_vec()).unwrap()
    }

    fn compat(s: &[usize], t: &[usize]) -> CompatibleSet {
        CompatibleSet::new(set(t), set(s)).expect("compatible")
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(&PositionSet::empty(), 1));
        assert!(is_admissible(&set(&[4, 6]), 7));
        assert!(!is_admissible(&set(&[4, 6]), 6));
        assert!(!is_admissible(&set(&[4, 5]), 9));
        assert!(!is_admissible(&set(&[1]), 4));
        assert!(is_admissible(&set(&[2]), 3));
    }

    #[test]
    fn compatible_set_enumeration() {
        let got: Vec<Vec<usize>> = compatible_sets(&set(&[4, 6]))
            .into_iter()
            .map(|t| t.elements.elements().to_vec())
            .collect();
        // {5} satisfies all three conditions, so it is listed too
        let expected: Vec<Vec<usize>> = vec![
            vec![],
            vec![1],
            vec![1, 5],
            vec![2],
            vec![2, 5],
            vec![3],
            vec![3, 5],
            vec![5],
        ];
        assert_eq!(got, expected);
        let two: Vec<_> = compatible_sets(&set(&[2]))
            .into_iter()
            .map(|t| t.elements)
            .collect();
        assert_eq!(two, vec![PositionSet::empty(), set(&[1])]);
        let none = compatible_sets(&PositionSet::empty());
        assert_eq!(none.len(), 1);
        assert!(none[0].is_empty());
        for t in compatible_sets(&set(&[3, 7, 10])) {
            assert!(CompatibleSet::new(t.elements.clone(), t.parent.clone()).is_some());
            assert!(t.len() <= 3);
        }
        assert!(CompatibleSet::new(set(&[5, 6]), set(&[4, 7])).is_none());
        assert!(CompatibleSet::new(set(&[4]), set(&[4, 7])).is_none());
        assert!(CompatibleSet::new(set(&[8]), set(&[4, 7])).is_none());
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon(&compat(&[4, 6], &[1, 5])), 1);
        assert_eq!(epsilon(&compat(&[4, 6], &[3, 5])), 1);
        assert_eq!(epsilon(&compat(&[4, 6], &[1])), -1);
        assert_eq!(epsilon(&compat(&[4, 6], &[3])), -1);
        // 4 - 2 - 1 = 1 decrement to reach t = 2
        assert_eq!(epsilon(&compat(&[4, 6], &[2, 5])), -1);
        assert_eq!(epsilon(&compat(&[4, 6], &[2])), 1);
        assert_eq!(epsilon(&compat(&[4, 6], &[5])), -1);
        assert_eq!(epsilon(&compat(&[4, 6], &[])), 1);
        assert_eq!(epsilon(&compat(&[2], &[])), -1);
        assert_eq!(epsilon(&compat(&[2], &[1])), 1);
        // odd gap from 0 with nothing recorded below 3
        assert_eq!(epsilon(&compat(&[3], &[])), 0);
        assert_eq!(epsilon(&compat(&[3], &[2])), 1);
        assert_eq!(epsilon(&compat(&[3], &[1])), -1);
    }

    #[test]
    fn peak_at_three_by_hand() {
        // [4,2] (-q;q)_1 (-q;q)_1 - [4,1] (-q;q)_2; value 8 at q = 1
        let expected = &(&(&q_binomial(4, 2) * &p(&[1, 1])) * &p(&[1, 1]))
            - &(&q_binomial(4, 1) * &neg_q_pochhammer(2));
        assert_eq!(peak_gf_compatible(&set(&[3]), 4), expected);
        assert_eq!(expected.at_one(), num_bigint::BigInt::from(8));
    }

    #[test]
    fn compatible_examples() {
        for n in 1..=7 {
            assert_eq!(
                peak_gf_compatible(&PositionSet::empty(), n),
                neg_q_pochhammer(n - 1)
            );
        }
        let expected = &(&q_integer3() * &p(&[1, 1])) - &neg_q_pochhammer(2);
        assert_eq!(expected, p(&[0, 1, 1]));
        assert_eq!(peak_gf_compatible(&set(&[2]), 3), expected);
        assert_eq!(peak_gf_compatible(&set(&[1]), 4), IntPolynomial::zero());
    }

    fn q_integer3() -> IntPolynomial {
        p(&[1, 1, 1])
    }

    #[test]
    fn term_structure() {
        for n in 7..=10 {
            for term in compatible_terms(&set(&[4, 6]), n) {
                assert_eq!(term.pochhammer_factor_count(), n - term.t.len() - 1);
                // every summand is itself palindromic of full degree n(n-1)/2
                let d = n * (n - 1) / 2;
                let prod = term.unsigned_product();
                assert_eq!(prod.degree(), Some(d));
                assert!(prod.is_palindromic(d));
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        let poch3 = &(&p(&[1, 1]) * &p(&[1, 0, 1])) * &p(&[1, 0, 0, 1]);
        assert_eq!(peak_gf_recurrence(&PositionSet::empty(), 4), poch3);
        assert_eq!(peak_gf_recurrence(&set(&[2]), 3), p(&[0, 1, 1]));
        for n in 7..=9 {
            assert_eq!(
                peak_gf_recurrence(&set(&[4, 6]), n),
                peak_gf_compatible(&set(&[4, 6]), n)
            );
        }
        assert_eq!(peak_gf_recurrence(&set(&[3, 4]), 8), IntPolynomial::zero());
    }

    #[test]
    fn block_decompositions() {
        let d = block_decomposition(&set(&[3, 5, 8]), 12).unwrap();
        let blocks: Vec<_> = d.blocks.iter().map(|b| b.to_vec()).collect();
        let gaps: Vec<_> = d.gaps.iter().map(|g| g.to_vec()).collect();
        assert_eq!(blocks, vec![vec![2, 3, 4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(gaps, vec![vec![1], vec![], vec![10, 11, 12]]);
        assert_eq!(d.parts(), vec![1, 5, 0, 3, 3]);

        let d = block_decomposition(&set(&[2]), 5).unwrap();
        assert_eq!(d.gaps[0].len, 0);
        assert_eq!(d.blocks[0].to_vec(), vec![1, 2, 3]);
        assert_eq!(d.gaps[1].to_vec(), vec![4, 5]);

        let d = block_decomposition(&PositionSet::empty(), 4).unwrap();
        assert!(d.blocks.is_empty());
        assert_eq!(d.gaps[0].to_vec(), vec![1, 2, 3, 4]);

        assert!(matches!(
            block_decomposition(&set(&[4, 5]), 9),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn block_decomposition_partitions() {
        for n in 1..=12usize {
            for s in PositionSet::all_subsets(n.saturating_sub(1)) {
                let Ok(d) = block_decomposition(&s, n) else {
                    continue;
                };
                assert_eq!(d.parts().iter().sum::<usize>(), n);
                assert!(d.blocks.iter().all(|b| b.len % 2 == 1 && b.len >= 3));
                let mut flat = Vec::new();
                for (i, g) in d.gaps.iter().enumerate() {
                    flat.extend(g.to_vec());
                    if let Some(b) = d.blocks.get(i) {
                        flat.extend(b.to_vec());
                    }
                }
                assert_eq!(flat, (1..=n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn superset_gf_examples() {
        for n in 1..=6 {
            assert_eq!(q_superset_gf(&PositionSet::empty(), n), q_factorial(n));
        }
        assert_eq!(q_superset_gf(&set(&[2]), 3), p(&[0, 1, 1]));
        assert_eq!(
            q_superset_gf(&set(&[2]), 4),
            &p(&[1, 1, 1, 1]) * &p(&[0, 1, 1])
        );
    }

    #[test]
    fn supersets() {
        assert_eq!(admissible_supersets(&set(&[2]), 3), vec![set(&[2])]);
        assert_eq!(
            admissible_supersets(&set(&[2]), 5),
            vec![set(&[2]), set(&[2, 4])]
        );
        assert_eq!(
            admissible_supersets(&PositionSet::empty(), 4),
            vec![PositionSet::empty(), set(&[2]), set(&[3])]
        );
        assert!(admissible_supersets(&set(&[1]), 5).is_empty());
        // every admissible set of size n is a superset of the empty set
        for n in 1..=9usize {
            let all: Vec<_> = PositionSet::all_subsets(n.saturating_sub(1))
                .into_iter()
                .filter(|s| is_admissible(s, n))
                .collect();
            assert_eq!(admissible_supersets(&PositionSet::empty(), n), all);
        }
    }

    #[test]
    fn pie_examples() {
        assert_eq!(
            peak_gf_pie(&PositionSet::empty(), 3),
            &p(&[1, 1]) * &p(&[1, 0, 1])
        );
        assert_eq!(peak_gf_pie(&set(&[2]), 3), p(&[0, 1, 1]));
        assert_eq!(peak_gf_pie(&set(&[1]), 3), IntPolynomial::zero());
    }

    #[test]
    fn four_way_small() {
        let cap = EnumerationCap::default();
        for n in 1..=6 {
            let oracle = BruteForceOracle::build(n, cap).unwrap();
            for s in PositionSet::all_subsets(n.saturating_sub(1)) {
                let brute = oracle.peak_gf(&s);
                assert_eq!(peak_gf_compatible(&s, n), brute, "compatible S={s} n={n}");
                assert_eq!(peak_gf_recurrence(&s, n), brute, "recurrence S={s} n={n}");
                assert_eq!(peak_gf_pie(&s, n), brute, "pie S={s} n={n}");
                assert_eq!(
                    q_superset_gf(&s, n),
                    oracle.superset_peak_gf(&s),
                    "Q S={s} n={n}"
                );
            }
        }
    }

    #[test]
    fn palindromic_examples() {
        for n in 1..=8 {
            assert!(check_palindromic_peak(&PositionSet::empty(), n));
        }
        assert!(check_palindromic_peak(&set(&[4, 6]), 8));
    }
}
