//! The q-descent polynomial `D_S(n,q)` in two q-binomial bases.
//!
//! With `m = max(S)`:
//!
//! * a-basis: `D_S(n,q) = sum_k a_k(S;q) [n-m choose k]_q`
//! * b-basis: `D_S(n,q) = sum_k b_k(S;q) [n-k choose m-k+1]_q`
//!
//! where `b_k(S;q)` is the length generating function of `A(S;m+1)`
//! restricted to permutations ending in `k`. Both coefficient sequences
//! depend only on `S`, so `D_S(n,q)` costs a handful of polynomial products
//! for any `n`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permtools::{for_each_with_descent_set, PositionSet};
use crate::polynomial::IntPolynomial;
use crate::qcore::q_binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    A,
    B,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::A => "a",
            Basis::B => "b",
        })
    }
}

/// `a_k(S;q)` or `b_k(S;q)` for `k = 0..=max(S)`; entry 0 is always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentCoefficients {
    pub set: PositionSet,
    pub basis: Basis,
    pub coeffs: Vec<IntPolynomial>,
}

impl DescentCoefficients {
    pub fn m(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Entries `k >= 1`.
    pub fn nonzero_indexed(&self) -> &[IntPolynomial] {
        &self.coeffs[1..]
    }
}

/// `b_k(S,n;q)`, the length generating function of `w` in `A(S;n)` with
/// `w(n) = k`, for `k = 1..=n`. Index 0 of the result is zero.
///
/// Built up from `n = 1` by removing the last letter:
///
/// * `n-1` not in `S`: `b_k(S,n) = q^(n-k) * sum_{i<k} b_i(S,n-1)`
/// * `n-1` in `S`: `b_k(S,n) = q^(n-k) * sum_{i>=k} b_i(S\{n-1},n-1)`
///
/// The sums are kept as running prefix/suffix sums.
pub fn b_table(set: &PositionSet, n: usize) -> Result<Vec<IntPolynomial>> {
    if let Some(max) = set.largest() {
        if max >= n {
            return Err(Error::SetExceedsSize { max, n });
        }
    }
    if n == 0 {
        return Ok(vec![IntPolynomial::zero()]);
    }
    let mut row = vec![IntPolynomial::zero(), IntPolynomial::one()];
    for len in 2..=n {
        let mut next = vec![IntPolynomial::zero(); len + 1];
        if set.contains(len - 1) {
            let mut suffix = IntPolynomial::zero();
            for k in (1..len).rev() {
                suffix += &row[k];
                next[k] = suffix.shift(len - k);
            }
        } else {
            let mut prefix = IntPolynomial::zero();
            for k in 2..=len {
                prefix += &row[k - 1];
                next[k] = prefix.shift(len - k);
            }
        }
        row = next;
    }
    Ok(row)
}

/// `(b_0, b_1, ..., b_m)` with `b_0 = 0`.
pub fn b_coefficients(set: &PositionSet) -> Result<DescentCoefficients> {
    let m = set.largest().ok_or(Error::EmptySet)?;
    let mut coeffs = b_table(set, m + 1)?;
    coeffs.truncate(m + 1);
    Ok(DescentCoefficients {
        set: set.clone(),
        basis: Basis::B,
        coeffs,
    })
}

/// `a_k(S;q)` by enumerating `A(S;m+k)` and keeping permutations whose first
/// `m` letters include every value in `m+1..=m+k`. Refuses once `m+k`
/// exceeds `cap`.
pub fn a_coefficients_direct(set: &PositionSet, cap: usize) -> Result<DescentCoefficients> {
    let m = set.largest().ok_or(Error::EmptySet)?;
    if 2 * m > cap {
        return Err(Error::DirectEnumerationCap { n: 2 * m, cap });
    }
    let mut coeffs = vec![IntPolynomial::zero()];
    for k in 1..=m {
        let n = m + k;
        let mut counts = vec![0u64; n * (n - 1) / 2 + 1];
        for_each_with_descent_set(set, n, |w, inv| {
            let prefix = &w[..m];
            if (m + 1..=n).all(|v| prefix.contains(&v)) {
                counts[inv] += 1;
            }
        });
        coeffs.push(IntPolynomial::from_coeffs(
            counts.into_iter().map(num_bigint::BigInt::from).collect(),
        ));
    }
    Ok(DescentCoefficients {
        set: set.clone(),
        basis: Basis::A,
        coeffs,
    })
}

/// Change of basis `a_k = q^(k(k-1)) * sum_{i=1}^{m-k+1} [m-i choose k-1]_q b_i`
/// applied to an arbitrary sequence `b` (indexed with `b[0] = 0`).
pub fn a_from_b_sequence(b: &[IntPolynomial]) -> Vec<IntPolynomial> {
    let m = b.len().saturating_sub(1);
    let mut out = vec![IntPolynomial::zero()];
    for k in 1..=m {
        let mut acc = IntPolynomial::zero();
        for (i, b_i) in b.iter().enumerate().take(m - k + 2).skip(1) {
            acc += &(&q_binomial(m - i, k as i64 - 1) * b_i);
        }
        out.push(acc.shift(k * (k - 1)));
    }
    out
}

pub fn a_coefficients_from_b(set: &PositionSet) -> Result<DescentCoefficients> {
    let b = b_coefficients(set)?;
    Ok(DescentCoefficients {
        set: set.clone(),
        basis: Basis::A,
        coeffs: a_from_b_sequence(&b.coeffs),
    })
}

/// `D_S(n,q)` through the a-basis. Zero when `max(S) >= n`.
pub fn descent_gf_a(set: &PositionSet, n: usize) -> IntPolynomial {
    let Some(m) = set.largest() else {
        return IntPolynomial::one();
    };
    if m >= n {
        return IntPolynomial::zero();
    }
    let a = a_coefficients_from_b(set).expect("nonempty set");
    descent_gf_from_a(&a, n)
}

/// Evaluates the a-basis expansion for given coefficients.
pub fn descent_gf_from_a(a: &DescentCoefficients, n: usize) -> IntPolynomial {
    let m = a.m();
    if m >= n {
        return IntPolynomial::zero();
    }
    a.coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a_k)| a_k * &q_binomial(n - m, k as i64))
        .sum()
}

/// `D_S(n,q)` through the b-basis. Zero when `max(S) >= n`.
pub fn descent_gf_b(set: &PositionSet, n: usize) -> IntPolynomial {
    let Some(m) = set.largest() else {
        return IntPolynomial::one();
    };
    if m >= n {
        return IntPolynomial::zero();
    }
    let b = b_coefficients(set).expect("nonempty set");
    descent_gf_from_b(&b, n)
}

pub fn descent_gf_from_b(b: &DescentCoefficients, n: usize) -> IntPolynomial {
    let m = b.m();
    if m >= n {
        return IntPolynomial::zero();
    }
    b.coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, b_k)| b_k * &q_binomial(n - k, (m - k + 1) as i64))
        .sum()
}
