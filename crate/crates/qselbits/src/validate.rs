//! Cross-validation suite: runs the exact-equality, oracle-agreement, and
//! Monte Carlo confidence checks that tie the three computation routes
//! together. Backs the `validate` CLI subcommand.

use serde::Serialize;

use crate::asymptotics::{
    fluct_amplitude, log_spaced_grid, mu1_asymptotic, mu1_stable, mu_avg_asymptotic,
    mu_avg_stable, slope_avg, slope_c, t_closed, t_fluct_series, v_closed,
};
use crate::cascade::{mu_general_with, CascadeOptions};
use crate::exact_mu::{f1_closed, f3_closed, f_terms, mu1_exact, mu_avg_exact, t_direct};
use crate::rational::Rational;
use crate::simulate::{expected_key_comparisons, monte_carlo, pair_frequency_check, quickselect, BitKey};

/// How much work to spend.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Bounded-size versions of every check; finishes well under a minute.
    Quick,
    /// Full ranges (cascade equalities to n = 12, symmetry to n = 15, ...).
    Full,
}

/// One check's outcome.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of a validation run.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub level: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable lines, one per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<44} {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!(
            "{}: {} of {} checks passed\n",
            if self.passed() { "OK" } else { "FAILED" },
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        ));
        out
    }
}

struct Suite {
    checks: Vec<CheckResult>,
}

impl Suite {
    fn add(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckResult { name: name.to_string(), passed, detail });
    }
}

/// Run the suite. `opts` is passed through to every cascade evaluation so
/// the corrupt-divisor hook can demonstrate a failing run.
pub fn run(level: Level, opts: &CascadeOptions) -> ValidationReport {
    let full = level == Level::Full;
    let mut suite = Suite { checks: Vec::new() };
    let mu = |m: usize, n: usize| mu_general_with(m, n, opts).expect("valid rank").value;

    // exact anchors
    {
        let ok = mu1_exact(2).value == Rational::from_int(2)
            && mu1_exact(3).value == Rational::new(43, 9)
            && t_direct(2).is_zero()
            && t_direct(3) == Rational::new(-1, 9);
        suite.add("exact anchors (mu1, t)", ok, "mu1(3)=43/9, t(3)=-1/9".into());
    }

    // closed forms of the first and third component sums
    {
        let hi = if full { 200 } else { 60 };
        let bad = (2..=hi).find(|&n| {
            let f = f_terms(n);
            f.f1 != f1_closed(n) || f.f3 != f3_closed(n)
        });
        suite.add(
            "F1/F3 residue closed forms",
            bad.is_none(),
            match bad {
                None => format!("exact for 2 <= n <= {hi}"),
                Some(n) => format!("first mismatch at n = {n}"),
            },
        );
    }

    // general-rank cascade vs the independent smallest-rank formula
    {
        let hi = if full { 12 } else { 8 };
        let bad = (2..=hi).find(|&n| mu(1, n) != mu1_exact(n).value);
        suite.add(
            "cascade equals smallest-rank formula",
            bad.is_none(),
            match bad {
                None => format!("exact equality for 2 <= n <= {hi}"),
                Some(n) => format!("first mismatch at n = {n}"),
            },
        );
    }

    // averaging identity
    {
        let hi = if full { 12 } else { 8 };
        let bad = (2..=hi).find(|&n| {
            let sum: Rational = (1..=n).map(|m| mu(m, n)).sum();
            sum != Rational::from_int(n as i64) * mu_avg_exact(n).value
        });
        suite.add(
            "cascade averaging identity",
            bad.is_none(),
            match bad {
                None => format!("exact for 2 <= n <= {hi}"),
                Some(n) => format!("first mismatch at n = {n}"),
            },
        );
    }

    // rank symmetry
    {
        let hi = if full { 15 } else { 10 };
        let mut bad = None;
        'outer: for n in 2..=hi {
            for m in 1..=n / 2 {
                if mu(m, n) != mu(n + 1 - m, n) {
                    bad = Some((m, n));
                    break 'outer;
                }
            }
        }
        suite.add(
            "cascade rank symmetry",
            bad.is_none(),
            match bad {
                None => format!("mu(m,n) = mu(n+1-m,n) for n <= {hi}"),
                Some((m, n)) => format!("first mismatch at (m,n) = ({m},{n})"),
            },
        );
    }

    // slope constants
    {
        let c = slope_c();
        let ok = (c - 5.27938).abs() < 5e-5;
        suite.add("slope constant (smallest)", ok, format!("c = {c:.9}"));
        let s = slope_avg();
        let ok = (s - 8.20731).abs() < 5e-5;
        suite.add("slope constant (average)", ok, format!("{s:.9}"));
    }

    // stable forms vs exact rational oracles
    {
        let hi = if full { 60 } else { 30 };
        let mut worst = 0f64;
        let mut bad = None;
        for n in 2..=hi {
            let exact = t_direct(n).to_f64();
            let rel = (t_closed(n as u64) - exact).abs() / exact.abs().max(0.1);
            worst = worst.max(rel);
            if rel > 1e-9 {
                bad = Some(n);
            }
        }
        suite.add(
            "stable t matches exact t",
            bad.is_none(),
            format!("worst relative deviation {worst:.2e} for n <= {hi}"),
        );

        let bad = [2u64, 5, 20].iter().copied().find(|&n| {
            let oracle = (t_direct(n as usize + 2) - Rational::from_int(2) * t_direct(n as usize + 1)
                + t_direct(n as usize))
            .to_f64();
            (v_closed(n) - oracle).abs() > 1e-10
        });
        suite.add(
            "second-difference closed form",
            bad.is_none(),
            match bad {
                None => "matches exact second differences".into(),
                Some(n) => format!("mismatch at n = {n}"),
            },
        );
    }

    // fluctuation amplitude
    {
        let grid = log_spaced_grid(2, 10_000, if full { 120 } else { 40 });
        let amp = fluct_amplitude(t_fluct_series, &grid);
        suite.add(
            "fluctuation amplitude bound",
            amp < 0.00110,
            format!("max |t-fluctuation| = {amp:.6} < 0.00110"),
        );
    }

    // asymptotic remainders stay bounded
    {
        let top = if full { 14 } else { 12 };
        let mut ok = true;
        let mut last = (0.0f64, 0.0f64);
        for p in 10..=top {
            let n = 1u64 << p;
            let d1 = mu1_stable(n) - mu1_asymptotic(n).value;
            let d2 = mu_avg_stable(n) - mu_avg_asymptotic(n).value;
            if d1.abs() >= 10.0 || d2.abs() >= 20.0 {
                ok = false;
            }
            if p > 10 && (d1.abs() > last.0 + 0.05 || d2.abs() > last.1 + 0.05) {
                ok = false;
            }
            last = (d1.abs(), d2.abs());
        }
        suite.add(
            "asymptotic remainders bounded",
            ok,
            format!("|remainders| at n = 2^{top}: {:.3}, {:.3}", last.0, last.1),
        );
    }

    // deterministic worked example
    {
        let bits = |s: &str| -> BitKey {
            BitKey::from_bits(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
        };
        let mut keys = vec![bits("01001100"), bits("00110101"), bits("00101010")];
        let mut pick = |_: usize| 2usize;
        let cost = quickselect(&mut keys, 1, &mut pick, None).expect("runs");
        let ok = cost.bit_cost == 6 && cost.key_cost == 2;
        suite.add(
            "three-key worked example",
            ok,
            format!("{} bit / {} key comparisons", cost.bit_cost, cost.key_cost),
        );
    }

    // Monte Carlo agreement
    {
        let trials = if full { 100_000 } else { 20_000 };
        let mut ok = true;
        let mut detail = String::new();
        for (m, n) in [(1usize, 2usize), (1, 8), (4, 8)] {
            let stats = monte_carlo(m, n, trials, 0).expect("valid arguments");
            let exact_bits = mu(m, n).to_f64();
            let dev_bits = (stats.bit_mean() - exact_bits).abs();
            if dev_bits > 4.0 * stats.bit_stderr() {
                ok = false;
            }
            let exact_keys = expected_key_comparisons(m, n);
            let dev_keys = (stats.key_mean() - exact_keys).abs();
            // two keys always cost exactly one comparison
            if stats.key_stderr() > 0.0 && dev_keys > 4.0 * stats.key_stderr() {
                ok = false;
            } else if stats.key_stderr() == 0.0 && dev_keys > 1e-12 {
                ok = false;
            }
            detail.push_str(&format!("({m},{n}) "));
        }
        suite.add(
            "Monte Carlo vs exact expectations",
            ok,
            format!("{trials} trials at {detail}within 4 standard errors"),
        );
    }

    // pair-comparison frequencies
    {
        let trials = if full { 100_000 } else { 20_000 };
        let rows = pair_frequency_check(2, 5, trials, 0).expect("valid arguments");
        let ok = rows.iter().all(|r| {
            if r.stderr == 0.0 {
                (r.empirical - r.theoretical).abs() < 1e-12
            } else {
                (r.empirical - r.theoretical).abs() < 5.0 * r.stderr
            }
        });
        suite.add(
            "pair-comparison frequencies",
            ok,
            format!("all rank pairs at (m,n) = (2,5), {trials} trials, 5 standard errors"),
        );
    }

    ValidationReport {
        level: match level {
            Level::Quick => "quick".into(),
            Level::Full => "full".into(),
        },
        checks: suite.checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run(Level::Quick, &CascadeOptions::default());
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn corrupt_divisor_fails_the_suite() {
        let report = run(Level::Quick, &CascadeOptions { corrupt_divisor: true });
        assert!(!report.passed());
    }

    #[test]
    fn report_serializes() {
        let report = run(Level::Quick, &CascadeOptions::default());
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["level"], "quick");
        assert!(v["checks"].as_array().unwrap().len() >= 10);
    }
}
