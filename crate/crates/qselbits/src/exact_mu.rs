//! Exact rational evaluation of the expected bit-comparison cost mu(m, n):
//! the smallest-rank formula, the rank-averaged five-sum formula, and the
//! residue closed forms used to cross-check two of those sums.

use crate::rational::Rational;
use crate::sequences::{binom, harmonic, BernoulliTable};

/// Which expectation a [`MuValue`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuKind {
    /// mu(1, n): cost of finding the smallest key.
    Smallest,
    /// mu over a uniformly random target rank.
    Average,
    /// mu(m, n) for an explicit rank, via the finite-summation cascade.
    General,
}

/// An expected bit-comparison count, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuValue {
    /// Target rank; `None` for the rank-averaged case.
    pub m: Option<usize>,
    /// Number of keys.
    pub n: usize,
    pub kind: MuKind,
    pub value: Rational,
}

/// Weight 1 / (j (1 - 2^-j)) shared by the Bernoulli sums.
fn bern_weight(j: u64) -> Rational {
    (Rational::one() - Rational::pow2(-(j as i64))).recip() * Rational::new(1, j as i64)
}

/// The Bernoulli tail sum t(n) with
/// mu(1, n) = 2n(H_n - 1) + 2 t(n):
/// t(n) = sum_{j=2}^{n-1} B_j / (j (1 - 2^-j)) * [ (n - C(n,j))/(j-1) - 1 ].
///
/// t(2) = 0 (empty sum).
pub fn t_direct(n: usize) -> Rational {
    assert!(n >= 2, "t_direct needs n >= 2");
    let bern = BernoulliTable::new(n.saturating_sub(1));
    let mut acc = Rational::zero();
    for j in 2..n as u64 {
        let bj = bern.value(j as usize);
        if bj.is_zero() {
            continue;
        }
        let num = Rational::from_int(n as i64) - Rational::from_bigint(binom(n as u64, j as i64));
        let bracket = num * Rational::new(1, j as i64 - 1) - Rational::one();
        acc += bj * bern_weight(j) * bracket;
    }
    acc
}

/// Exact mu(1, n), the expected number of bit comparisons to find the
/// smallest of n keys. Zero for n = 1.
pub fn mu1_exact(n: usize) -> MuValue {
    let value = if n == 1 {
        Rational::zero()
    } else {
        let h = harmonic(n as u64).h1;
        Rational::from_int(2 * n as i64) * (h - Rational::one())
            + Rational::from_int(2) * t_direct(n)
    };
    MuValue { m: Some(1), n, kind: MuKind::Smallest, value }
}

/// The five sums entering the rank-averaged formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTerms {
    pub f1: Rational,
    pub f2: Rational,
    pub f3: Rational,
    pub f4: Rational,
    pub f5: Rational,
}

/// Exact values of the five component sums F1(n)..F5(n); F2(n) = t(n).
pub fn f_terms(n: usize) -> FTerms {
    assert!(n >= 2, "f_terms needs n >= 2");
    let nn = n as u64;
    let bern = BernoulliTable::new(n.saturating_sub(1));

    let mut f1 = Rational::zero();
    let mut f5 = Rational::zero();
    for j in 3..=nn {
        let signed = Rational::from_bigint(binom(nn, j as i64))
            * if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        f1 += &signed * Rational::new(1, (j as i64 - 1) * (j as i64 - 2));
        let denom = Rational::from_int((j * (j - 1) * (j - 2)) as i64)
            * (Rational::one() - Rational::pow2(-(j as i64 - 1)));
        f5 += signed / denom;
    }

    let f2 = t_direct(n);

    let mut f3 = Rational::zero();
    for j in 2..nn {
        let signed = Rational::from_bigint(binom(nn - 1, j as i64))
            * if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        f3 += signed * Rational::new(1, j as i64 - 1);
    }

    let mut f4 = Rational::zero();
    for j in 3..nn {
        let bj = bern.value(j as usize);
        if bj.is_zero() {
            continue;
        }
        let num = Rational::from_int(n as i64 - 1)
            - Rational::from_bigint(binom(nn - 1, j as i64 - 1));
        let bracket = num * Rational::new(1, j as i64 - 2) - Rational::one();
        f4 += bj * bern_weight(j) * Rational::new(1, j as i64 - 1) * bracket;
    }

    FTerms { f1, f2, f3, f4, f5 }
}

/// Exact rank-averaged expectation:
/// mu_avg(n) = 2(n-1) - (8/n)F1 + (4/n)F2 + (4/9)F3 - 4 F4 + (8/n)F5.
/// Zero for n = 1.
pub fn mu_avg_exact(n: usize) -> MuValue {
    let value = if n == 1 {
        Rational::zero()
    } else {
        let f = f_terms(n);
        let n_r = Rational::from_int(n as i64);
        Rational::from_int(2 * (n as i64 - 1))
            - Rational::from_int(8) / &n_r * f.f1
            + Rational::from_int(4) / &n_r * f.f2
            + Rational::new(4, 9) * f.f3
            - Rational::from_int(4) * f.f4
            + Rational::from_int(8) / &n_r * f.f5
    };
    MuValue { m: None, n, kind: MuKind::Average, value }
}

/// Residue closed form of F1(n):
/// -n(n-1)H_{n-2}/2 + 5n(n-1)/4 - n H_{n-1} - 1/2.
pub fn f1_closed(n: usize) -> Rational {
    let n_i = n as i64;
    let h_nm2 = harmonic(n as u64 - 2).h1;
    let h_nm1 = harmonic(n as u64 - 1).h1;
    -Rational::new(n_i * (n_i - 1), 2) * h_nm2 + Rational::new(5 * n_i * (n_i - 1), 4)
        - Rational::from_int(n_i) * h_nm1
        - Rational::new(1, 2)
}

/// Residue closed form of F3(n): n H_{n-2} - n - H_{n-2} + 2.
pub fn f3_closed(n: usize) -> Rational {
    let h_nm2 = harmonic(n as u64 - 2).h1;
    Rational::from_int(n as i64 - 1) * h_nm2 - Rational::from_int(n as i64 - 2)
}
