//! Recursive formulation of the power-of-s scan.
//!
//! One batched lower-triangular multiply turns every aligned block of s
//! elements into its local prefix sums, leaving each block's total at its
//! last position. The recursion then scans the subvector of block totals
//! (every s-th element, starting at s - 1) the same way, and one batched
//! broadcast multiply over the suffix starting at s - 1 folds each
//! scanned total into the s - 1 locally-scanned elements that follow it.
//!
//! The rounds, invocations, tile products, and simulated time all match
//! the iterative two-sweep driver exactly: the call tree touches the same
//! strided vectors in a different order.

use crate::error::ScanError;
use crate::monoid::Monoid;
use crate::scan::{power_exponent, ScanResult};
use crate::tcu::{
    batch_matmul, gather_strided, scatter_strided, CostLedger, StructuralMatrix, TcuConfig,
};

/// Inclusive scan of `x`, length an exact power of `config.s()`, by
/// recursion on the block totals. Produces the same output and the same
/// ledger as the iterative driver.
pub fn recursive_scan<M: Monoid>(
    x: &[M::Elem],
    config: &TcuConfig,
    op: &M,
) -> Result<ScanResult<M::Elem>, ScanError> {
    if x.is_empty() {
        return Err(ScanError::EmptyInput);
    }
    let k = power_exponent(x.len(), config.s()).ok_or(ScanError::NotPowerOfS {
        n: x.len(),
        s: config.s(),
    })?;
    let mut ledger = CostLedger::default();
    if x.len() == 1 {
        // Nothing to combine; mirrors the iterative driver's zero-round case.
        return Ok(ScanResult {
            output: x.to_vec(),
            ledger,
            k,
        });
    }

    let lower = StructuralMatrix::lower_triangular(config);
    let z = batch_matmul(x, &lower, config, op, &mut ledger)?;
    ledger.rounds += 1;
    let output = recurse(z, config, op, &mut ledger)?;
    Ok(ScanResult { output, ledger, k })
}

/// The recursive step. Precondition: every aligned block of s consecutive
/// elements of `z` already holds the local prefix sums of some underlying
/// values (which the initial multiply in `recursive_scan` establishes).
/// Postcondition: returns the full inclusive scan of those underlying
/// values.
fn recurse<M: Monoid>(
    mut z: Vec<M::Elem>,
    config: &TcuConfig,
    op: &M,
    ledger: &mut CostLedger,
) -> Result<Vec<M::Elem>, ScanError> {
    let s = config.s();
    if z.len() <= s {
        return Ok(z);
    }
    let lower = StructuralMatrix::lower_triangular(config);
    let broadcast = StructuralMatrix::broadcast_first_column(config);

    // Block totals live at positions s-1, 2s-1, ...; scan them recursively.
    let totals = gather_strided(&z, s - 1, s);
    let totals = batch_matmul(&totals, &lower, config, op, ledger)?;
    ledger.rounds += 1;
    let totals = recurse(totals, config, op, ledger)?;
    scatter_strided(&mut z, &totals, s - 1, s)?;

    // Every scanned total now precedes the s - 1 local values of the next
    // block; one broadcast multiply folds it into them.
    let tail = gather_strided(&z, s - 1, 1);
    let tail = batch_matmul(&tail, &broadcast, config, op, ledger)?;
    ledger.rounds += 1;
    scatter_strided(&mut z, &tail, s - 1, 1)?;
    Ok(z)
}

/// Test utility for the recursion's precondition over the integer
/// operator and the nonnegative input domain the tests draw from: every
/// aligned chunk of s elements must be an inclusive scan of some
/// nonnegative values, i.e. its first differences (the recovered
/// originals) must all be >= 0, which is exactly "nondecreasing within
/// each chunk". General monoids lack the inverses needed to recover
/// originals, so this stays integer-only.
pub fn check_precondition(z: &[i64], s: usize) -> bool {
    debug_assert!(s >= 2);
    z.chunks(s)
        .all(|chunk| chunk.windows(2).all(|pair| pair[0] <= pair[1]))
}
