//! Python bindings: the scans, the sort, and the cost formulas, with
//! `ScanError` surfacing as `ValueError`.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tcu_scan::monoid::{AffineCompose, F64Add, I64Add};
use tcu_scan::{Affine, ClassicAlgo, ScanError, TcuConfig};

fn to_py(e: ScanError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn config(s: usize, ell: u64) -> PyResult<TcuConfig> {
    TcuConfig::new(s, ell).map_err(to_py)
}

/// Exact operation counts of one simulated run.
#[pyclass(frozen, get_all, module = "tcu_scan_py")]
#[derive(Clone)]
struct CostLedger {
    invocations: u64,
    chunk_mults: u64,
    scalar_combines: u64,
    rounds: u64,
    sim_time: u64,
}

#[pymethods]
impl CostLedger {
    fn __repr__(&self) -> String {
        format!(
            "CostLedger(invocations={}, chunk_mults={}, scalar_combines={}, rounds={}, sim_time={})",
            self.invocations, self.chunk_mults, self.scalar_combines, self.rounds, self.sim_time
        )
    }
}

impl From<tcu_scan::CostLedger> for CostLedger {
    fn from(l: tcu_scan::CostLedger) -> Self {
        CostLedger {
            invocations: l.invocations,
            chunk_mults: l.chunk_mults,
            scalar_combines: l.scalar_combines,
            rounds: l.rounds,
            sim_time: l.sim_time,
        }
    }
}

/// Fixed-shape scan; the input length must be a power of s.
#[pyfunction]
#[pyo3(signature = (values, s, ell = 0))]
fn matmul_scan(values: Vec<i64>, s: usize, ell: u64) -> PyResult<(Vec<i64>, CostLedger)> {
    let r = tcu_scan::matmul_scan(&values, &config(s, ell)?, &I64Add).map_err(to_py)?;
    Ok((r.output, r.ledger.into()))
}

/// Recursive driver; output and costs match `matmul_scan` exactly.
#[pyfunction]
#[pyo3(signature = (values, s, ell = 0))]
fn recursive_scan(values: Vec<i64>, s: usize, ell: u64) -> PyResult<(Vec<i64>, CostLedger)> {
    let r = tcu_scan::recursive_scan(&values, &config(s, ell)?, &I64Add).map_err(to_py)?;
    Ok((r.output, r.ledger.into()))
}

/// Scan of any positive length.
#[pyfunction]
#[pyo3(signature = (values, s, ell = 0))]
fn general_scan(values: Vec<i64>, s: usize, ell: u64) -> PyResult<(Vec<i64>, CostLedger)> {
    let r = tcu_scan::general_scan(&values, &config(s, ell)?, &I64Add).map_err(to_py)?;
    Ok((r.output, r.ledger.into()))
}

/// Float scan of any positive length.
#[pyfunction]
#[pyo3(signature = (values, s, ell = 0))]
fn general_scan_f64(values: Vec<f64>, s: usize, ell: u64) -> PyResult<(Vec<f64>, CostLedger)> {
    let r = tcu_scan::general_scan(&values, &config(s, ell)?, &F64Add).map_err(to_py)?;
    Ok((r.output, r.ledger.into()))
}

/// Running composition of affine maps given as (scale, offset) pairs:
/// a non-commutative operation, so operand order is observable.
#[pyfunction]
#[pyo3(signature = (pairs, s, ell = 0))]
fn affine_scan(
    pairs: Vec<(f64, f64)>,
    s: usize,
    ell: u64,
) -> PyResult<(Vec<(f64, f64)>, CostLedger)> {
    let maps: Vec<Affine> = pairs
        .into_iter()
        .map(|(scale, offset)| Affine { scale, offset })
        .collect();
    let r = tcu_scan::general_scan(&maps, &config(s, ell)?, &AffineCompose).map_err(to_py)?;
    let out = r.output.into_iter().map(|m| (m.scale, m.offset)).collect();
    Ok((out, r.ledger.into()))
}

/// Reference answer: plain left-to-right fold, no simulated unit.
#[pyfunction]
fn sequential_scan(values: Vec<i64>) -> PyResult<Vec<i64>> {
    tcu_scan::sequential_scan(&values, &I64Add).map_err(to_py)
}

/// Stable radix sort of 32-bit keys, one split pass per bit; every
/// prefix sum inside runs on the simulated unit.
#[pyfunction]
#[pyo3(signature = (keys, s, bits = 32, ell = 0))]
fn radix_sort(keys: Vec<u32>, s: usize, bits: u32, ell: u64) -> PyResult<(Vec<u32>, CostLedger)> {
    let r = tcu_scan::radix_sort(&keys, &config(s, ell)?, bits).map_err(to_py)?;
    Ok((r.keys, r.ledger.into()))
}

/// Analytic figures for the fixed-shape scan of n = s^k elements.
#[pyfunction]
fn fixed_scan_bounds(n: u64, s: u64) -> PyResult<HashMap<String, u64>> {
    let b = tcu_scan::fixed_scan_bounds(n, s).map_err(to_py)?;
    Ok(HashMap::from([
        ("depth".to_string(), b.depth),
        ("matmul_bound".to_string(), b.matmul_bound),
        ("work_bound".to_string(), b.work_bound),
    ]))
}

/// Simulated-time budget for the fixed-shape scan.
#[pyfunction]
fn fixed_scan_time_bound(n: u64, s: u64, ell: u64) -> PyResult<u64> {
    tcu_scan::fixed_scan_time_bound(n, s, ell).map_err(to_py)
}

/// Analytic figures for the any-length scan.
#[pyfunction]
#[pyo3(signature = (n, s, ell = 0))]
fn general_scan_bounds(n: u64, s: u64, ell: u64) -> PyResult<HashMap<String, u64>> {
    let b = tcu_scan::general_scan_bounds(n, s, ell).map_err(to_py)?;
    Ok(HashMap::from([
        ("depth".to_string(), b.depth),
        ("matmul_bound".to_string(), b.matmul_bound),
        ("time_bound".to_string(), b.time_bound),
    ]))
}

/// Depth/work figures for the classic scan constructions by name:
/// "sklansky", "hillis-steele", "blelloch", "brent-kung", or
/// "tcu-prior" (which needs the tile dimension s).
#[pyfunction]
#[pyo3(signature = (name, n, s = None))]
fn classic_costs(name: &str, n: u64, s: Option<u64>) -> PyResult<HashMap<String, u64>> {
    let algo = match name {
        "sklansky" => ClassicAlgo::Sklansky,
        "hillis-steele" => ClassicAlgo::HillisSteele,
        "blelloch" => ClassicAlgo::Blelloch,
        "brent-kung" => ClassicAlgo::BrentKung,
        "tcu-prior" => ClassicAlgo::TcuPrior {
            s: s.ok_or_else(|| PyValueError::new_err("tcu-prior needs the tile dimension s"))?,
        },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown algorithm {other:?}; choose sklansky, hillis-steele, blelloch, \
                 brent-kung, or tcu-prior"
            )))
        }
    };
    let c = tcu_scan::classic_costs(algo, n).map_err(to_py)?;
    Ok(HashMap::from([
        ("depth".to_string(), c.depth),
        ("work".to_string(), c.work),
    ]))
}

/// Runtime estimate of the work-optimal multi-processor schedule.
#[pyfunction]
fn brent_runtime(n: u64, s: u64, ell: u64, p: u64) -> PyResult<f64> {
    tcu_scan::brent_runtime(n, s, ell, p).map_err(to_py)
}

#[pymodule]
fn tcu_scan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CostLedger>()?;
    m.add_function(wrap_pyfunction!(matmul_scan, m)?)?;
    m.add_function(wrap_pyfunction!(recursive_scan, m)?)?;
    m.add_function(wrap_pyfunction!(general_scan, m)?)?;
    m.add_function(wrap_pyfunction!(general_scan_f64, m)?)?;
    m.add_function(wrap_pyfunction!(affine_scan, m)?)?;
    m.add_function(wrap_pyfunction!(sequential_scan, m)?)?;
    m.add_function(wrap_pyfunction!(radix_sort, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_scan_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_scan_time_bound, m)?)?;
    m.add_function(wrap_pyfunction!(general_scan_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(classic_costs, m)?)?;
    m.add_function(wrap_pyfunction!(brent_runtime, m)?)?;
    Ok(())
}
