//! Prefix sums computed as batched products with two fixed 0/1 matrices
//! on a simulated tensor-core unit, with exact cost accounting.
//!
//! The simulated unit multiplies an s x s tile by an s x m operand in
//! time `s * m + ell`; every algorithm in this crate reaches the data
//! only through that primitive plus strided gathers and scatters, and a
//! [`tcu::CostLedger`] records invocations, tile products, scalar
//! combines, rounds, and simulated time as it runs. Closed-form bounds
//! for all of those counters live in [`cost`] and are asserted against
//! the measured ledgers by the test suites.
//!
//! What's here:
//!
//! * [`monoid`] — the associative operators (checked i64 addition, f64
//!   addition, affine-map composition) and the sequential scans used as
//!   oracles.
//! * [`tcu`] — the unit itself: configuration, the lower-triangular and
//!   broadcast structural matrices, the batched multiply, and the ledger.
//! * [`scan`] — the fixed-shape scan for power-of-s lengths (2k - 1
//!   rounds for n = s^k).
//! * [`general`] — the any-length driver: base-s segment decomposition,
//!   carry-vector scan, and per-segment broadcasts.
//! * [`recursive`] — the divide-and-conquer formulation; same outputs,
//!   same ledger.
//! * [`cost`] — analytic bounds, classic scan-network cost rows, and the
//!   CSV/JSON cost report.
//! * [`sort`] — stable LSB radix sort whose prefix sums all run on the
//!   simulated unit.

pub mod cost;
pub mod error;
pub mod general;
pub mod monoid;
pub mod recursive;
pub mod scan;
pub mod sort;
pub mod tcu;

pub use cost::{
    brent_runtime, classic_costs, fixed_scan_bounds, fixed_scan_time_bound, general_scan_bounds,
    ClassicAlgo, ClassicCost, CostReport, FixedScanBounds, GeneralScanBounds,
};
pub use error::ScanError;
pub use general::{base_s_decompose, broadcast_add_segment, general_scan, SegmentPlan};
pub use monoid::{exclusive_scan, sequential_scan, Affine, AffineCompose, F64Add, I64Add, Monoid};
pub use recursive::{check_precondition, recursive_scan};
pub use scan::{matmul_scan, power_exponent, ScanResult};
pub use sort::{radix_sort, radix_sort_by_key, split_by_flags, SortResult};
pub use tcu::{
    batch_matmul, gather_strided, scatter_strided, CostLedger, MatrixKind, StructuralMatrix,
    TcuConfig,
};
