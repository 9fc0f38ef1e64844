//! Number-theoretic sequences consumed by the exact formulas: binomial
//! coefficients, Bernoulli numbers, harmonic numbers, and the Faulhaber
//! power-sum coefficients a(j, r).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::{Error, Result};

/// Binomial coefficient C(n, k); 0 when `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Memoized Bernoulli numbers B_0..B_N under the convention B_1 = +1/2
/// (the sign fixed by B_k = -k zeta(1-k)).
///
/// With B_1 = +1/2 the defining recurrence reads
/// `sum_{k=0}^{m} C(m+1, k) B_k = m + 1` for m >= 1, which is solved for
/// B_m at construction time. Odd indices >= 3 are zero.
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    /// Build the table eagerly up to index `max` inclusive.
    pub fn new(max: usize) -> Self {
        let mut values = Vec::with_capacity(max + 1);
        values.push(Rational::one());
        for m in 1..=max {
            // B_m = [ (m+1) - sum_{k<m} C(m+1,k) B_k ] / (m+1)
            let mut acc = Rational::from_int(m as i64 + 1);
            for (k, b) in values.iter().enumerate() {
                if !b.is_zero() {
                    acc -= Rational::from_bigint(binom(m as u64 + 1, k as i64)) * b;
                }
            }
            values.push(acc / Rational::from_int(m as i64 + 1));
        }
        BernoulliTable { values }
    }

    /// Largest index stored.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// B_j; panics if `j` exceeds the construction bound.
    pub fn value(&self, j: usize) -> &Rational {
        &self.values[j]
    }
}

/// B_j from a prebuilt table.
pub fn bernoulli(j: usize, table: &BernoulliTable) -> Rational {
    table.value(j).clone()
}

/// Harmonic numbers of order one and two, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicPair {
    /// H_n = sum_{i<=n} 1/i
    pub h1: Rational,
    /// H_n^(2) = sum_{i<=n} 1/i^2
    pub h2: Rational,
}

/// Exact H_n and H_n^(2); both zero for n = 0.
pub fn harmonic(n: u64) -> HarmonicPair {
    let mut h1 = Rational::zero();
    let mut h2 = Rational::zero();
    for i in 1..=n as i64 {
        h1 += Rational::new(1, i);
        h2 += Rational::new(1, i * i);
    }
    HarmonicPair { h1, h2 }
}

/// Coefficient a(j, r) of n^(j-r) in the power sum S_{n,j} = sum_{l<=n} l^(j-1):
/// 1/j for r = 0, 1/2 for r = 1, (B_r / r) C(j-1, r-1) for r >= 2.
pub fn a_coeff(j: u64, r: u64, bern: &BernoulliTable) -> Result<Rational> {
    if j == 0 || r > j - 1 {
        return Err(Error::InvalidCoeffIndex { j, r });
    }
    Ok(match r {
        0 => Rational::new(1, j as i64),
        1 => Rational::new(1, 2),
        _ => {
            bern.value(r as usize) * Rational::new(1, r as i64)
                * Rational::from_bigint(binom(j - 1, r as i64 - 1))
        }
    })
}

/// S_{n,j} = sum_{l=1}^{n} l^(j-1), evaluated through the a(j, r) expansion
/// sum_r a(j, r) n^(j-r).
pub fn power_sum(n: u64, j: u64, bern: &BernoulliTable) -> Rational {
    assert!(j >= 1, "power_sum needs j >= 1");
    let base = BigInt::from(n);
    let mut acc = Rational::zero();
    for r in 0..j {
        let c = a_coeff(j, r, bern).expect("r < j by construction");
        if !c.is_zero() {
            acc += c * Rational::from_bigint(base.pow((j - r) as u32));
        }
    }
    acc
}
