//! Python bindings for the Quickselect bit-comparison analysis library.
//!
//! Exposes the exact rational evaluators (as `"p/q"` strings plus decimal
//! renderings), the asymptotic constants and expansions, and the Monte
//! Carlo simulator.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qselbits::asymptotics;
use qselbits::cascade::{mu_general_exact, CascadeOptions};
use qselbits::exact_mu::{mu1_exact, mu_avg_exact};
use qselbits::simulate as sim;
use qselbits::table::mu_table_with;
use qselbits::validate::{self, Level};

fn value_err(e: qselbits::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Exact mu(1, n) as a rational string.
#[pyfunction]
fn mu_smallest(n: usize) -> PyResult<String> {
    if n < 1 {
        return Err(PyValueError::new_err("need n >= 1"));
    }
    Ok(mu1_exact(n).value.to_string())
}

/// Exact rank-averaged expectation as a rational string.
#[pyfunction]
fn mu_average(n: usize) -> PyResult<String> {
    if n < 1 {
        return Err(PyValueError::new_err("need n >= 1"));
    }
    Ok(mu_avg_exact(n).value.to_string())
}

/// Exact mu(m, n) as a rational string (general-rank cascade).
#[pyfunction]
fn mu_rank(m: usize, n: usize) -> PyResult<String> {
    Ok(mu_general_exact(m, n).map_err(value_err)?.value.to_string())
}

/// Exact mu(m, n) rendered as a fixed-point decimal string.
#[pyfunction]
#[pyo3(signature = (m, n, digits = 12))]
fn mu_decimal(m: usize, n: usize, digits: usize) -> PyResult<String> {
    Ok(mu_general_exact(m, n)
        .map_err(value_err)?
        .value
        .to_decimal(digits))
}

/// mu(m, n) as a float (rounded from the exact rational).
#[pyfunction]
fn mu_f64(m: usize, n: usize) -> PyResult<f64> {
    Ok(mu_general_exact(m, n).map_err(value_err)?.value.to_f64())
}

/// Full (n, m) grid up to max_n as (n, m, rational, decimal) tuples.
#[pyfunction]
#[pyo3(signature = (max_n, digits = 12))]
fn mu_table(max_n: usize, digits: usize) -> PyResult<Vec<(usize, usize, String, String)>> {
    if max_n < 1 {
        return Err(PyValueError::new_err("need max_n >= 1"));
    }
    let table = mu_table_with(max_n, digits, &CascadeOptions::default());
    Ok(table
        .rows
        .iter()
        .map(|r| (r.n, r.m, r.value.to_string(), r.value.to_decimal(digits)))
        .collect())
}

/// Asymptotic slope of mu(1, n) (~5.27938); k_max = 0 gives the elementary
/// part, None the converged value.
#[pyfunction]
#[pyo3(signature = (k_max = None))]
fn slope_c(k_max: Option<usize>) -> f64 {
    match k_max {
        Some(k) => asymptotics::slope_c_truncated(k),
        None => asymptotics::slope_c(),
    }
}

/// Asymptotic slope of the rank-averaged cost (~8.20731).
#[pyfunction]
#[pyo3(signature = (k_max = None))]
fn slope_avg(k_max: Option<usize>) -> f64 {
    match k_max {
        Some(k) => asymptotics::slope_avg_truncated(k),
        None => asymptotics::slope_avg(),
    }
}

/// Numerically stable mu(1, n) for large n.
#[pyfunction]
fn mu_smallest_stable(n: u64) -> f64 {
    asymptotics::mu1_stable(n)
}

/// Large-n expansion of mu(1, n) (O(1) term dropped).
#[pyfunction]
fn mu_smallest_asymptotic(n: u64) -> f64 {
    asymptotics::mu1_asymptotic(n).value
}

/// Numerically stable rank-averaged expectation for large n.
#[pyfunction]
fn mu_average_stable(n: u64) -> f64 {
    asymptotics::mu_avg_stable(n)
}

/// Large-n expansion of the rank-averaged cost (O(1) term dropped).
#[pyfunction]
fn mu_average_asymptotic(n: u64) -> f64 {
    asymptotics::mu_avg_asymptotic(n).value
}

/// Monte Carlo summary statistics.
#[pyclass]
struct SimStats {
    #[pyo3(get)]
    m: usize,
    #[pyo3(get)]
    n: usize,
    #[pyo3(get)]
    trials: u64,
    #[pyo3(get)]
    seed: u64,
    #[pyo3(get)]
    bit_mean: f64,
    #[pyo3(get)]
    bit_stderr: f64,
    #[pyo3(get)]
    key_mean: f64,
    #[pyo3(get)]
    key_stderr: f64,
}

#[pymethods]
impl SimStats {
    fn to_json(&self) -> String {
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "bit_mean": self.bit_mean,
            "bit_stderr": self.bit_stderr,
            "key_mean": self.key_mean,
            "key_stderr": self.key_stderr,
        })
        .to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "SimStats(m={}, n={}, trials={}, seed={}, bit_mean={:.6}, key_mean={:.6})",
            self.m, self.n, self.trials, self.seed, self.bit_mean, self.key_mean
        )
    }
}

/// Simulate Quickselect on random bit-stream keys; reproducible per seed.
#[pyfunction]
#[pyo3(signature = (m, n, trials = 100_000, seed = 0))]
fn simulate(m: usize, n: usize, trials: u64, seed: u64) -> PyResult<SimStats> {
    let stats = sim::monte_carlo(m, n, trials, seed).map_err(value_err)?;
    let r = stats.report();
    Ok(SimStats {
        m: r.m,
        n: r.n,
        trials: r.trials,
        seed: r.seed,
        bit_mean: r.bit_mean,
        bit_stderr: r.bit_stderr,
        key_mean: r.key_mean,
        key_stderr: r.key_stderr,
    })
}

/// Empirical vs theoretical comparison probability for every rank pair,
/// as (i, j, empirical, theoretical, stderr) tuples.
#[pyfunction]
#[pyo3(signature = (m, n, trials = 100_000, seed = 0))]
fn pair_frequencies(
    m: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> PyResult<Vec<(usize, usize, f64, f64, f64)>> {
    let rows = sim::pair_frequency_check(m, n, trials, seed).map_err(value_err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.i, r.j, r.empirical, r.theoretical, r.stderr))
        .collect())
}

/// Expected number of key comparisons (not bits) for rank m of n.
#[pyfunction]
fn expected_key_comparisons(m: usize, n: usize) -> f64 {
    sim::expected_key_comparisons(m, n)
}

/// Run the cross-validation suite; returns (passed, report_text).
#[pyfunction]
#[pyo3(signature = (level = "quick"))]
fn run_validation(level: &str) -> PyResult<(bool, String)> {
    let level = match level {
        "quick" => Level::Quick,
        "full" => Level::Full,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown level {other:?}; use \"quick\" or \"full\""
            )))
        }
    };
    let report = validate::run(level, &CascadeOptions::default());
    Ok((report.passed(), report.to_text()))
}

#[pymodule]
fn qselbits_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(mu_smallest, m)?)?;
    m.add_function(wrap_pyfunction!(mu_average, m)?)?;
    m.add_function(wrap_pyfunction!(mu_rank, m)?)?;
    m.add_function(wrap_pyfunction!(mu_decimal, m)?)?;
    m.add_function(wrap_pyfunction!(mu_f64, m)?)?;
    m.add_function(wrap_pyfunction!(mu_table, m)?)?;
    m.add_function(wrap_pyfunction!(slope_c, m)?)?;
    m.add_function(wrap_pyfunction!(slope_avg, m)?)?;
    m.add_function(wrap_pyfunction!(mu_smallest_stable, m)?)?;
    m.add_function(wrap_pyfunction!(mu_smallest_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(mu_average_stable, m)?)?;
    m.add_function(wrap_pyfunction!(mu_average_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(pair_frequencies, m)?)?;
    m.add_function(wrap_pyfunction!(expected_key_comparisons, m)?)?;
    m.add_function(wrap_pyfunction!(run_validation, m)?)?;
    m.add_class::<SimStats>()?;
    Ok(())
}
