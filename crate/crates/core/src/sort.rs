//! Least-significant-bit radix sort whose prefix sums all run on the
//! simulated tensor unit.
//!
//! Each of the `bits` passes splits the sequence stably by one key bit:
//! items whose bit is 0 keep their relative order at the front, items
//! whose bit is 1 keep theirs behind them. The destination index of every
//! item comes from two exclusive prefix sums — one over the negated
//! flags (placing the zeros) and one over the flags offset by the total
//! zero count (placing the ones) — and both are computed by the
//! general-length tensor scan over 64-bit integers, so the sort's entire
//! combine work lands on the cost ledger.

use crate::error::ScanError;
use crate::general::general_scan;
use crate::monoid::{shift_to_exclusive, I64Add};
use crate::tcu::{CostLedger, TcuConfig};

impl CostLedger {
    /// Folds another ledger's counters into this one; used when one
    /// operation (a sort pass, a multi-scan pipeline) aggregates the cost
    /// of several scans.
    pub fn absorb(&mut self, other: &CostLedger) {
        self.invocations += other.invocations;
        self.chunk_mults += other.chunk_mults;
        self.scalar_combines += other.scalar_combines;
        self.rounds += other.rounds;
        self.sim_time += other.sim_time;
    }
}

/// Sorted keys together with the aggregated cost of every scan the sort
/// issued and the number of split passes executed.
#[derive(Clone, Debug)]
pub struct SortResult {
    pub keys: Vec<u32>,
    pub ledger: CostLedger,
    pub passes: u32,
}

/// Stable split: items with flag 0 first (order preserved), then items
/// with a nonzero flag (order preserved). Both destination scans go
/// through the tensor unit and accumulate into `ledger`.
pub fn split_by_flags<T: Clone>(
    items: &[T],
    flags: &[u8],
    config: &TcuConfig,
    ledger: &mut CostLedger,
) -> Result<Vec<T>, ScanError> {
    if items.len() != flags.len() {
        return Err(ScanError::FlagLengthMismatch {
            keys: items.len(),
            flags: flags.len(),
        });
    }
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let op = I64Add;
    let zero_flags: Vec<i64> = flags.iter().map(|&f| i64::from(f == 0)).collect();
    let one_flags: Vec<i64> = flags.iter().map(|&f| i64::from(f != 0)).collect();

    let zero_scan = general_scan(&zero_flags, config, &op)?;
    ledger.absorb(&zero_scan.ledger);
    let zero_count = *zero_scan.output.last().expect("non-empty scan");
    let zero_dest = shift_to_exclusive(zero_scan.output, &op);

    let one_scan = general_scan(&one_flags, config, &op)?;
    ledger.absorb(&one_scan.ledger);
    let one_dest = shift_to_exclusive(one_scan.output, &op);

    let mut out = items.to_vec();
    for (i, item) in items.iter().enumerate() {
        let dest = if flags[i] == 0 {
            zero_dest[i]
        } else {
            zero_count + one_dest[i]
        };
        out[dest as usize] = item.clone();
    }
    Ok(out)
}

/// Radix sort of arbitrary items by a 32-bit key, one bit per pass from
/// least significant up. `bits` must cover every key that occurs; keys
/// are compared on their low `bits` bits only.
pub fn radix_sort_by_key<T: Clone, F: Fn(&T) -> u32>(
    items: &[T],
    key: F,
    config: &TcuConfig,
    bits: u32,
) -> Result<(Vec<T>, CostLedger), ScanError> {
    if bits == 0 || bits > 32 {
        return Err(ScanError::InvalidBits { bits });
    }
    let mut ledger = CostLedger::default();
    let mut data = items.to_vec();
    for bit in 0..bits {
        let flags: Vec<u8> = data
            .iter()
            .map(|item| ((key(item) >> bit) & 1) as u8)
            .collect();
        data = split_by_flags(&data, &flags, config, &mut ledger)?;
    }
    Ok((data, ledger))
}

/// Radix sort of 32-bit keys; exactly `bits` stable split passes, each
/// issuing two tensor-unit scans.
pub fn radix_sort(keys: &[u32], config: &TcuConfig, bits: u32) -> Result<SortResult, ScanError> {
    let (sorted, ledger) = radix_sort_by_key(keys, |k| *k, config, bits)?;
    Ok(SortResult {
        keys: sorted,
        ledger,
        passes: bits,
    })
}
