//! q-integers, q-factorials, Gaussian binomials and multinomials, the
//! product `(-q;q)_k`, and the length generating function of alternating
//! permutations.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_integer(n: usize) -> IntPolynomial {
    IntPolynomial::from_i64s(&vec![1; n])
}

/// `[n]!_q = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: usize) -> IntPolynomial {
    let mut out = IntPolynomial::one();
    for i in 2..=n {
        // multiply by 1 + q + ... + q^(i-1) as a running window sum
        let coeffs = out.coeffs();
        let len = coeffs.len() + i - 1;
        let mut next = Vec::with_capacity(len);
        let mut window = num_bigint::BigInt::default();
        for d in 0..len {
            if d < coeffs.len() {
                window += &coeffs[d];
            }
            if d >= i {
                window -= &coeffs[d - i];
            }
            next.push(window.clone());
        }
        out = IntPolynomial::from_coeffs(next);
    }
    out
}

/// Memoized Gaussian binomial coefficients, filled by the q-Pascal rule
/// `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
///
/// Row `n` stores columns `0..=min(n, width)`; requests for `k > n/2` are
/// answered through the symmetry `[n,k] = [n,n-k]`.
#[derive(Debug, Default, Clone)]
pub struct QBinomialTable {
    rows: Vec<Vec<IntPolynomial>>,
    width: usize,
}

impl QBinomialTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `[n choose k]_q`, zero when `k < 0` or `k > n`.
    pub fn get(&mut self, n: usize, k: i64) -> IntPolynomial {
        if k < 0 || k as usize > n {
            return IntPolynomial::zero();
        }
        let k = (k as usize).min(n - k as usize);
        self.ensure(n, k);
        self.rows[n][k].clone()
    }

    fn ensure(&mut self, n: usize, k: usize) {
        if k > self.width {
            self.width = k;
            for i in 0..self.rows.len() {
                self.extend_row(i);
            }
        }
        while self.rows.len() <= n {
            self.rows.push(Vec::new());
            self.extend_row(self.rows.len() - 1);
        }
    }

    fn extend_row(&mut self, i: usize) {
        let target = i.min(self.width);
        while self.rows[i].len() <= target {
            let j = self.rows[i].len();
            let entry = if j == 0 || j == i {
                IntPolynomial::one()
            } else {
                let prev = &self.rows[i - 1];
                let mut e = prev[j - 1].clone();
                e.add_shifted(&prev[j], j);
                e
            };
            self.rows[i].push(entry);
        }
    }
}

thread_local! {
    static TABLE: RefCell<QBinomialTable> = RefCell::new(QBinomialTable::new());
}

/// `[n choose k]_q` from the calling thread's memo table.
pub fn q_binomial(n: usize, k: i64) -> IntPolynomial {
    TABLE.with(|t| t.borrow_mut().get(n, k))
}

/// `[n; parts]_q`, the product of q-binomials over the running remainder.
pub fn q_multinomial(n: usize, parts: &[usize]) -> Result<IntPolynomial> {
    let sum: usize = parts.iter().sum();
    if sum != n {
        return Err(Error::PartsSum { sum, n });
    }
    let mut remaining = n;
    let mut out = IntPolynomial::one();
    for &part in parts {
        if part != 0 && part != remaining {
            out = &out * &q_binomial(remaining, part as i64);
        }
        remaining -= part;
    }
    Ok(out)
}

/// `(-q;q)_k = (1+q)(1+q^2)...(1+q^k)`.
pub fn neg_q_pochhammer(k: usize) -> IntPolynomial {
    let mut out = IntPolynomial::one();
    for i in 1..=k {
        let shifted = out.shift(i);
        out += &shifted;
    }
    out
}

/// `E_m(q)`: the sum of `q^inv(w)` over up-down permutations
/// `w(1) < w(2) > w(3) < ...` of size `m`.
///
/// Built left to right. The state after placing `j` letters is the number
/// `r` of still-unplaced values smaller than the last placed letter; placing
/// the `r'`-th smallest (0-based) remaining value adds `r'` inversions and
/// is an ascent exactly when `r' >= r`.
pub fn alternating_length_gf(m: usize) -> IntPolynomial {
    if m <= 1 {
        return IntPolynomial::one();
    }
    // j = 1: the first letter may be any of the m values
    let mut states: Vec<IntPolynomial> = (0..m).map(|r| IntPolynomial::monomial(1, r)).collect();
    for j in 1..m {
        let remaining = m - j;
        let ascent = j % 2 == 1;
        let mut next = Vec::with_capacity(remaining);
        if ascent {
            // sum over r <= r'
            let mut prefix = IntPolynomial::zero();
            for r_new in 0..remaining {
                prefix += &states[r_new];
                next.push(prefix.shift(r_new));
            }
        } else {
            // sum over r > r'
            let mut suffix = IntPolynomial::zero();
            let mut tail = vec![IntPolynomial::zero(); remaining];
            for r_new in (0..remaining).rev() {
                suffix += &states[r_new + 1];
                tail[r_new] = suffix.shift(r_new);
            }
            next = tail;
        }
        states = next;
    }
    states.into_iter().sum()
}
