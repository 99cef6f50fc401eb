//! Strong q-log-concavity of polynomial sequences, convolution of
//! sequences, and the exhaustive scan of a-basis coefficient sequences.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::descent::a_coefficients_from_b;
use crate::error::{Error, Result};
use crate::permtools::PositionSet;
use crate::polynomial::IntPolynomial;

/// A sequence of polynomials with nonnegative coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientSequence(Vec<IntPolynomial>);

impl CoefficientSequence {
    pub fn new(entries: Vec<IntPolynomial>) -> Result<Self> {
        if let Some(i) = entries
            .iter()
            .position(|p| !p.has_nonnegative_coefficients())
        {
            return Err(Error::NegativeEntry(i));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[IntPolynomial] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry `i`, or zero outside the stored range.
    pub fn get(&self, i: usize) -> IntPolynomial {
        self.0.get(i).cloned().unwrap_or_default()
    }
}

/// The first failing pair `(i, j)` and its difference
/// `a_i a_j - a_{i-1} a_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogConcavityWitness {
    pub i: usize,
    pub j: usize,
    pub difference: IntPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogConcavityReport {
    pub holds: bool,
    pub witness: Option<LogConcavityWitness>,
    pub internal_zero_witness: Option<usize>,
}

/// Index of the first zero entry lying strictly between two nonzero ones.
fn first_internal_zero(s: &CoefficientSequence) -> Option<usize> {
    let e = s.entries();
    let first = e.iter().position(|p| !p.is_zero())?;
    let last = e.iter().rposition(|p| !p.is_zero())?;
    (first..last).find(|&i| e[i].is_zero())
}

pub fn has_internal_zeroes(s: &CoefficientSequence) -> bool {
    first_internal_zero(s).is_some()
}

/// Checks that `s` has no internal zeroes and that
/// `a_i a_j - a_{i-1} a_{j+1}` has nonnegative coefficients for every
/// `1 <= i <= j <= len-2`. Failures are reported at the lexicographically
/// first `(i, j)`.
pub fn is_strongly_q_log_concave(s: &CoefficientSequence) -> LogConcavityReport {
    if let Some(z) = first_internal_zero(s) {
        return LogConcavityReport {
            holds: false,
            witness: None,
            internal_zero_witness: Some(z),
        };
    }
    let e = s.entries();
    let len = e.len();
    for i in 1..len.saturating_sub(1) {
        for j in i..len - 1 {
            let difference = &(&e[i] * &e[j]) - &(&e[i - 1] * &e[j + 1]);
            if !difference.has_nonnegative_coefficients() {
                return LogConcavityReport {
                    holds: false,
                    witness: Some(LogConcavityWitness { i, j, difference }),
                    internal_zero_witness: None,
                };
            }
        }
    }
    LogConcavityReport {
        holds: true,
        witness: None,
        internal_zero_witness: None,
    }
}

/// `c_i = sum_j s_j t_{i-j}`: coefficients of the product of the two
/// generating functions in an auxiliary variable.
pub fn convolve(s: &CoefficientSequence, t: &CoefficientSequence) -> CoefficientSequence {
    if s.is_empty() || t.is_empty() {
        return CoefficientSequence::default();
    }
    let mut out = vec![IntPolynomial::zero(); s.len() + t.len() - 1];
    for (i, a) in s.entries().iter().enumerate() {
        for (j, b) in t.entries().iter().enumerate() {
            out[i + j] += &(a * b);
        }
    }
    CoefficientSequence(out)
}

/// Outcome of checking one descent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEntry {
    pub set: PositionSet,
    pub report: LogConcavityReport,
}

/// Largest `max_m` the scanner accepts.
pub const SCAN_BOUND: usize = 16;

/// Checks `(a_k(S;q))_{k>=1}` for strong q-log-concavity for every nonempty
/// `S ⊆ {1..max_m}`. Results come back in lexicographic order of `S`
/// regardless of scheduling; `progress` is called once per finished set
/// with the running count.
pub fn scan_conjecture(
    max_m: usize,
    progress: impl Fn(usize, usize) + Sync,
) -> Result<Vec<ScanEntry>> {
    if max_m > SCAN_BOUND {
        return Err(Error::ScanBound {
            max_m,
            bound: SCAN_BOUND,
        });
    }
    let sets: Vec<PositionSet> = PositionSet::all_subsets(max_m)
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    let total = sets.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let entries = sets
        .into_par_iter()
        .map(|set| {
            let a = a_coefficients_from_b(&set).expect("nonempty set");
            let seq = CoefficientSequence::new(a.nonzero_indexed().to_vec())
                .expect("a-coefficients are length generating functions");
            let report = is_strongly_q_log_concave(&seq);
            let finished = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            progress(finished, total);
            ScanEntry { set, report }
        })
        .collect();
    Ok(entries)
}

/// One failing descent set in a scan report. `i` and `j` index `a_k`
/// directly (the sequence starts at `a_1`); for an internal zero both equal
/// the zero entry's index and the difference is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub set: PositionSet,
    pub kind: &'static str,
    pub i: usize,
    pub j: usize,
    pub difference: IntPolynomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub max_m: usize,
    pub sets_checked: usize,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_seconds: f64,
}

impl ScanReport {
    pub fn run(max_m: usize, progress: impl Fn(usize, usize) + Sync) -> Result<Self> {
        let started = Instant::now();
        let entries = scan_conjecture(max_m, progress)?;
        let counterexamples = entries
            .iter()
            .filter(|e| !e.report.holds)
            .map(
                |e| match (&e.report.witness, e.report.internal_zero_witness) {
                    (Some(w), _) => Counterexample {
                        set: e.set.clone(),
                        kind: "negative_difference",
                        i: w.i + 1,
                        j: w.j + 1,
                        difference: w.difference.clone(),
                    },
                    (None, Some(z)) => Counterexample {
                        set: e.set.clone(),
                        kind: "internal_zero",
                        i: z + 1,
                        j: z + 1,
                        difference: IntPolynomial::zero(),
                    },
                    (None, None) => unreachable!("failed report without witness"),
                },
            )
            .collect();
        Ok(Self {
            max_m,
            sets_checked: entries.len(),
            counterexamples,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::q_binomial;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn seq(v: Vec<IntPolynomial>) -> CoefficientSequence {
        CoefficientSequence::new(v).unwrap()
    }

    #[test]
    fn rejects_negative_entries() {
        assert_eq!(
            CoefficientSequence::new(vec![p(&[1]), p(&[1, -1])]),
            Err(Error::NegativeEntry(1))
        );
    }

    #[test]
    fn internal_zeroes() {
        assert!(has_internal_zeroes(&seq(vec![p(&[1]), p(&[]), p(&[1])])));
        assert!(!has_internal_zeroes(&seq(vec![
            p(&[]),
            p(&[1]),
            p(&[1]),
            p(&[])
        ])));
        assert!(!has_internal_zeroes(&seq(vec![])));
        let r = is_strongly_q_log_concave(&seq(vec![p(&[1]), p(&[]), p(&[1])]));
        assert!(!r.holds);
        assert_eq!(r.internal_zero_witness, Some(1));
        assert_eq!(r.witness, None);
    }

    #[test]
    fn example_one_fails_off_diagonal() {
        let s = seq(vec![p(&[0, 2]), p(&[1, 1, 1]), p(&[1, 1, 1]), p(&[0, 2])]);
        let r = is_strongly_q_log_concave(&s);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.i, w.j), (1, 2));
        assert_eq!(w.difference, p(&[1, 2, -1, 2, 1]));
    }

    #[test]
    fn diagonal_only_sequence_fails_full_check() {
        // a_i^2 - a_{i-1} a_{i+1} >= 0 on the diagonal, but (1,2) gives q - q^2 + q^3
        let s = seq(vec![
            p(&[0, 0, 1]),
            p(&[0, 1, 1]),
            p(&[1, 2, 1]),
            p(&[4, 2, 1]),
        ]);
        let e = s.entries();
        for i in 1..3 {
            let d = &(&e[i] * &e[i]) - &(&e[i - 1] * &e[i + 1]);
            assert!(d.has_nonnegative_coefficients());
        }
        let r = is_strongly_q_log_concave(&s);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.i, w.j), (1, 2));
        assert_eq!(w.difference, p(&[0, 1, -1, 1]));
    }

    #[test]
    fn convolution_fixture() {
        let a = seq(vec![
            p(&[0, 0, 1]),
            p(&[0, 1, 1]),
            p(&[1, 2, 1]),
            p(&[4, 2, 1]),
        ]);
        let ones = seq(vec![p(&[1]), p(&[1])]);
        let c = convolve(&a, &ones);
        assert_eq!(c.get(1), p(&[0, 1, 2]));
        assert_eq!(c.get(2), p(&[1, 3, 2]));
        assert_eq!(c.get(3), p(&[5, 4, 2]));
        let d = &(&c.get(2) * &c.get(2)) - &(&c.get(1) * &c.get(3));
        assert_eq!(d, p(&[1, 1, -1, 2]));
        let r = is_strongly_q_log_concave(&c);
        let w = r.witness.unwrap();
        assert_eq!((w.i, w.j), (2, 2));
        assert_eq!(w.difference, p(&[1, 1, -1, 2]));
    }

    #[test]
    fn convolution_identity() {
        let a = seq(vec![p(&[0, 0, 1]), p(&[0, 1, 1]), p(&[1, 2, 1])]);
        assert_eq!(convolve(&a, &seq(vec![p(&[1])])), a);
    }

    #[test]
    fn gaussian_rows_are_strongly_log_concave() {
        for m in 0..=6usize {
            let row = seq((0..=m as i64).map(|k| q_binomial(m, k)).collect());
            assert!(is_strongly_q_log_concave(&row).holds, "m = {m}");
        }
    }

    #[test]
    fn zero_padding_is_invisible() {
        let s = seq(vec![p(&[0, 2]), p(&[1, 1, 1]), p(&[1, 1, 1]), p(&[0, 2])]);
        let mut padded = vec![IntPolynomial::zero(), IntPolynomial::zero()];
        padded.extend(s.entries().iter().cloned());
        padded.push(IntPolynomial::zero());
        let r = is_strongly_q_log_concave(&seq(padded));
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().difference, p(&[1, 2, -1, 2, 1]));
    }

    #[test]
    fn small_scans() {
        let one = scan_conjecture(1, |_, _| {}).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].report.holds);
        let three = scan_conjecture(3, |_, _| {}).unwrap();
        assert_eq!(three.len(), 7);
        assert!(three.iter().all(|e| e.report.holds));
        assert!(three.windows(2).all(|w| w[0].set < w[1].set));
        assert!(scan_conjecture(SCAN_BOUND + 1, |_, _| {}).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = ScanReport::run(2, |_, _| {}).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["max_m"], 2);
        assert_eq!(v["sets_checked"], 3);
        assert!(v["counterexamples"].as_array().unwrap().is_empty());
        assert!(v["elapsed_seconds"].is_f64());
    }
}
