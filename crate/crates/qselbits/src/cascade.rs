//! Exact mu(m, n) for arbitrary rank via finite summation.
//!
//! The expectation is split over the three positions a compared rank pair
//! (i, j) can take relative to the target rank m, and each part is reduced
//! to a finite coefficient cascade:
//!
//! 1. `C1(i, j)`: comparison probability times the order-statistic
//!    multinomial weight, gated by the case indicator;
//! 2. `C2(f, h)`: coefficient of s^f t^h after expanding the joint density
//!    polynomial;
//! 3. `C3(f, h) = C2(f, h) / ((f+1)(h+1))`: termwise integration of
//!    s^f t^h over each dyadic rectangle;
//! 4. `C4(f, h, j)`: re-expansion of the rectangle endpoint differences in
//!    powers of the rectangle index l;
//! 5. `C5 = C3 * C4`, `C6(f,h,j,r) = a(j,r) * C5` via the power-sum
//!    coefficients; summing the geometric-in-depth factor then leaves
//! 6. `C7(a)`: everything regrouped by the exponent a = f+h+2+r-j, so that
//!    mu_case = sum_a C7(a) (1 - 2^-a)^-2.
//!
//! All arithmetic is exact rational end to end.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact_mu::{MuKind, MuValue};
use crate::rational::Rational;
use crate::sequences::{a_coeff, BernoulliTable};
use crate::{Error, Result};

/// Position of a compared rank pair (i, j) relative to the target rank m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RankCase {
    /// m <= i < j: comparison probability 2/(j-m+1).
    Above,
    /// i < m < j: probability 2/(j-i+1).
    Straddle,
    /// i < j <= m: probability 2/(m-i+1).
    Below,
}

const CASES: [RankCase; 3] = [RankCase::Above, RankCase::Straddle, RankCase::Below];

/// Knobs for the cascade evaluation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CascadeOptions {
    /// Test hook: replace the integration divisor (f+1)(h+1) by the wrong
    /// (n+1)(f+1). Used by the validation suite to prove its cross-checks
    /// can fail; never set in normal operation.
    pub corrupt_divisor: bool,
}

/// Pascal triangle rows 0..=n, shared across cells.
struct BinomTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomTable {
    fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = vec![BigInt::from(1u32); i + 1];
            for k in 1..i {
                row[k] = &rows[i - 1][k - 1] + &rows[i - 1][k];
            }
            rows.push(row);
        }
        BinomTable { rows }
    }

    fn get(&self, n: usize, k: i64) -> BigInt {
        if k < 0 || k as usize > n {
            BigInt::zero()
        } else {
            self.rows[n][k as usize].clone()
        }
    }
}

/// Shared immutable tables for evaluating cells up to a given n.
///
/// The `c4` re-expansion coefficients and the power-sum coefficients depend
/// only on their integer indices, not on (m, n) or the case, so they are
/// computed once and shared read-only across cells (and across threads when
/// a table is filled in parallel).
pub(crate) struct CascadeTables {
    n_max: usize,
    binom: BinomTable,
    /// a[j][r] for 1 <= j <= n_max-1, 0 <= r <= j-1.
    a: Vec<Vec<Rational>>,
    /// c4[f][h][j-1] for f+h <= n_max-2, 1 <= j <= f+h+1.
    c4: Vec<Vec<Vec<Rational>>>,
    /// (1 - 2^-a)^-2 for a in 1..=n_max-1 (index a).
    inv_sq: Vec<Rational>,
}

impl CascadeTables {
    pub(crate) fn new(n_max: usize) -> Self {
        assert!(n_max >= 2);
        let binom = BinomTable::new(n_max + 1);
        let bern = BernoulliTable::new(n_max.saturating_sub(2));

        let mut a = vec![Vec::new()];
        for j in 1..=(n_max - 1) as u64 {
            let row: Vec<Rational> = (0..j)
                .map(|r| a_coeff(j, r, &bern).expect("r < j"))
                .collect();
            a.push(row);
        }

        let mut c4 = Vec::with_capacity(n_max - 1);
        for f in 0..=n_max - 2 {
            let mut per_f = Vec::with_capacity(n_max - 1 - f);
            for h in 0..=n_max - 2 - f {
                let per_h: Vec<Rational> = (1..=f + h + 1)
                    .map(|j| c4_coeff(f, h, j, &binom))
                    .collect();
                per_f.push(per_h);
            }
            c4.push(per_f);
        }

        let mut inv_sq = vec![Rational::zero(); n_max];
        for (idx, slot) in inv_sq.iter_mut().enumerate().skip(1) {
            let g = Rational::one() - Rational::pow2(-(idx as i64));
            *slot = (&g * &g).recip();
        }

        CascadeTables { n_max, binom, a, c4, inv_sq }
    }
}

fn sign_of(parity: i64) -> bool {
    parity.rem_euclid(2) == 0
}

/// C4(f, h, j): coefficient of l^(j-1) in
/// [l^(h+1) - (l-1/2)^(h+1)] [(l-1/2)^(f+1) - (l-1)^(f+1)].
fn c4_coeff(f: usize, h: usize, j: usize, binom: &BinomTable) -> Rational {
    let (f_i, h_i, j_i) = (f as i64, h as i64, j as i64);
    let mut acc = Rational::zero();
    let lo = 0.max(j_i - 1 - h_i);
    let hi = (j_i - 1).min(f_i);
    for jp in lo..=hi {
        let term = Rational::from_bigint(binom.get(f + 1, jp))
            * Rational::from_bigint(binom.get(h + 1, j_i - 1 - jp))
            * (Rational::one() - Rational::pow2(-(f_i + 1 - jp)))
            * Rational::pow2(-jp);
        acc += term;
    }
    let lead = Rational::pow2(-(h_i - j_i + 2));
    if sign_of(f_i + h_i - j_i + 1) {
        lead * acc
    } else {
        -lead * acc
    }
}

/// Multinomial weight n! / ((i-1)! 1! (j-i-1)! 1! (n-j)!).
fn multinomial(n: usize, i: usize, j: usize, binom: &BinomTable) -> BigInt {
    binom.get(n, i as i64 - 1)
        * BigInt::from((n - i + 1) as u64)
        * binom.get(n - i, (j - i) as i64 - 1)
        * BigInt::from((n - j + 1) as u64)
}

/// C2(f, h) for one case: the coefficient of s^f t^h, with the comparison
/// probability factor folded in. Partial sums are accumulated per integer
/// denominator so the inner double loop stays in big-integer arithmetic.
fn c2_coeff(
    m: usize,
    n: usize,
    case: RankCase,
    f: usize,
    h: usize,
    tables: &CascadeTables,
) -> Rational {
    let mut by_den: Vec<BigInt> = vec![BigInt::zero(); n + 2];
    let (i_lo, i_hi, j_lo, j_hi) = match case {
        RankCase::Above => (m, f + 1, f + 2, (f + h + 2).min(n)),
        RankCase::Straddle => (1, (f + 1).min(m.saturating_sub(1)), (f + 2).max(m + 1), (f + h + 2).min(n)),
        RankCase::Below => (1, f + 1, f + 2, (f + h + 2).min(m)),
    };
    if i_lo > i_hi || j_lo > j_hi {
        return Rational::zero();
    }
    for i in i_lo..=i_hi {
        for j in j_lo.max(i + 1)..=j_hi {
            let den = match case {
                RankCase::Above => j - m + 1,
                RankCase::Straddle => j - i + 1,
                RankCase::Below => m - i + 1,
            };
            let b1 = tables.binom.get(j - i - 1, f as i64 - i as i64 + 1);
            if b1.is_zero() {
                continue;
            }
            let b2 = tables.binom.get(n - j, h as i64 + f as i64 + 2 - j as i64);
            if b2.is_zero() {
                continue;
            }
            let term = multinomial(n, i, j, &tables.binom) * b1 * b2;
            if sign_of(h as i64 - i as i64 - j as i64 + 1) {
                by_den[den] += term;
            } else {
                by_den[den] -= term;
            }
        }
    }
    let mut acc = Rational::zero();
    for (den, num) in by_den.into_iter().enumerate() {
        if !num.is_zero() {
            acc += Rational::from_ratio(num * 2, BigInt::from(den as u64));
        }
    }
    acc
}

/// One case's contribution to mu(m, n).
fn mu_case(
    m: usize,
    n: usize,
    case: RankCase,
    tables: &CascadeTables,
    opts: &CascadeOptions,
) -> Rational {
    debug_assert!(n >= 2 && n <= tables.n_max);
    // C7(a) accumulated in place, indexed by a = f+h+2+r-j in 1..=n-1.
    let mut c7 = vec![Rational::zero(); n];
    for f in 0..=n - 2 {
        for h in 0..=n - 2 - f {
            let c2 = c2_coeff(m, n, case, f, h, tables);
            if c2.is_zero() {
                continue;
            }
            let divisor = if opts.corrupt_divisor {
                ((n + 1) * (f + 1)) as i64
            } else {
                ((f + 1) * (h + 1)) as i64
            };
            let c3 = c2 / Rational::from_int(divisor);
            for j in 1..=f + h + 1 {
                let c4 = &tables.c4[f][h][j - 1];
                if c4.is_zero() {
                    continue;
                }
                let c5 = &c3 * c4;
                for (r, ajr) in tables.a[j].iter().enumerate() {
                    if ajr.is_zero() {
                        continue;
                    }
                    let a_idx = f + h + 2 + r - j;
                    c7[a_idx] += ajr * &c5;
                }
            }
        }
    }
    let mut total = Rational::zero();
    for a_idx in 1..n {
        if !c7[a_idx].is_zero() {
            total += &c7[a_idx] * &tables.inv_sq[a_idx];
        }
    }
    total
}

pub(crate) fn mu_cell(
    m: usize,
    n: usize,
    tables: &CascadeTables,
    opts: &CascadeOptions,
) -> Rational {
    if n == 1 {
        return Rational::zero();
    }
    CASES
        .iter()
        .map(|&case| mu_case(m, n, case, tables, opts))
        .sum()
}

/// Exact mu(m, n) for an arbitrary target rank, by finite summation only.
pub fn mu_general_exact(m: usize, n: usize) -> Result<MuValue> {
    mu_general_with(m, n, &CascadeOptions::default())
}

/// [`mu_general_exact`] with explicit [`CascadeOptions`].
pub fn mu_general_with(m: usize, n: usize, opts: &CascadeOptions) -> Result<MuValue> {
    if m < 1 || m > n {
        return Err(Error::InvalidRank { m, n });
    }
    let value = if n == 1 {
        Rational::zero()
    } else {
        let tables = CascadeTables::new(n);
        mu_cell(m, n, &tables, opts)
    };
    Ok(MuValue { m: Some(m), n, kind: MuKind::General, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_mu::{mu1_exact, mu_avg_exact};

    fn mu(m: usize, n: usize) -> Rational {
        mu_general_exact(m, n).unwrap().value
    }

    #[test]
    fn rank_bounds_rejected() {
        assert!(mu_general_exact(0, 5).is_err());
        assert!(mu_general_exact(6, 5).is_err());
        assert!(mu_general_exact(1, 1).is_ok());
    }

    #[test]
    fn smallest_rank_anchors() {
        assert_eq!(mu(1, 1), Rational::zero());
        assert_eq!(mu(1, 2), Rational::from_int(2));
        assert_eq!(mu(2, 2), Rational::from_int(2));
        assert_eq!(mu(1, 3), Rational::new(43, 9));
    }

    #[test]
    fn middle_rank_anchors() {
        // From the averaging identity: mu(2,3) = 3 mu_avg(3) - 2 mu(1,3).
        assert_eq!(mu(2, 3), Rational::new(50, 9));
        assert_eq!(mu(2, 4), Rational::new(200, 21));
    }

    #[test]
    fn matches_smallest_rank_formula() {
        for n in 2..=8 {
            assert_eq!(mu(1, n), mu1_exact(n).value, "n={n}");
        }
    }

    #[test]
    fn averaging_identity_small() {
        for n in 2..=7 {
            let sum: Rational = (1..=n).map(|m| mu(m, n)).sum();
            let avg = sum / Rational::from_int(n as i64);
            assert_eq!(avg, mu_avg_exact(n).value, "n={n}");
        }
    }

    #[test]
    fn symmetric_in_rank() {
        for n in 2..=7 {
            for m in 1..=n {
                assert_eq!(mu(m, n), mu(n + 1 - m, n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn corrupt_divisor_breaks_equality() {
        let opts = CascadeOptions { corrupt_divisor: true };
        let bad = mu_general_with(1, 4, &opts).unwrap().value;
        assert_ne!(bad, mu1_exact(4).value);
    }
}
