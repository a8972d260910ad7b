//! Inclusive prefix scan for arbitrary input lengths.
//!
//! A length n with base-s digits mu_1 .. mu_j (most significant first)
//! splits the input into consecutive segments: mu_i copies of length
//! s^(k_i) for each nonzero digit. The driver then
//!
//! 1. scans every segment in place with the fixed-shape algorithm,
//! 2. gathers the final element (the segment total) of every segment
//!    except the last into a carry vector w,
//! 3. scans w itself, zero-padded with the identity to the next power of
//!    s, so w[i] becomes the prefix of everything before segment i + 1,
//! 4. broadcast-adds w[i] into every element of segment i + 1 with one
//!    batched multiply per segment.
//!
//! A single-segment plan (n a power of s) skips steps 2-4 entirely, so
//! power-of-s inputs cost exactly the same as the fixed-shape scan. At
//! the other extreme, 1 < n < s would decompose into n singleton
//! segments; those inputs instead fit in the first column of a single
//! tile, so one lower-triangular multiply scans them outright and the
//! tile-product budget stays within the analytic bound.

use crate::error::ScanError;
use crate::monoid::Monoid;
use crate::scan::{floor_log, scan_power_in_place, ScanResult};
use crate::tcu::{batch_matmul, CostLedger, StructuralMatrix, TcuConfig};

/// How an input length decomposes into power-of-s segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentPlan {
    /// Nonzero base-s digits of n as (mu, k) pairs, k strictly decreasing,
    /// 1 <= mu <= s - 1; n is the sum of mu * s^k over the terms.
    pub terms: Vec<(usize, u32)>,
    /// Flattened segment lengths in input order: mu copies of s^k per term.
    pub segments: Vec<usize>,
}

impl SegmentPlan {
    /// Elements covered by the plan (always the original n).
    pub fn total_len(&self) -> usize {
        self.segments.iter().sum()
    }

    /// Length of the carry vector step 2 would gather: one total per
    /// segment except the last.
    pub fn carry_len(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }
}

/// Writes n >= 1 as a sum of mu_i * s^(k_i) with digits mu_i in
/// [1, s - 1] and strictly decreasing exponents, largest first.
pub fn base_s_decompose(n: usize, s: usize) -> Result<SegmentPlan, ScanError> {
    if s < 2 {
        return Err(ScanError::InvalidDimension { s });
    }
    if n == 0 {
        return Err(ScanError::EmptyInput);
    }
    let mut power = s.pow(floor_log(n, s));
    let mut k = floor_log(n, s);
    let mut rest = n;
    let mut terms = Vec::new();
    let mut segments = Vec::new();
    loop {
        let digit = rest / power;
        if digit > 0 {
            terms.push((digit, k));
            segments.extend(std::iter::repeat_n(power, digit));
            rest -= digit * power;
        }
        if k == 0 {
            break;
        }
        power /= s;
        k -= 1;
    }
    debug_assert_eq!(rest, 0);
    Ok(SegmentPlan { terms, segments })
}

/// Smallest q with s^q >= m, for m >= 1.
fn ceil_log(m: usize, s: usize) -> u32 {
    debug_assert!(m >= 1 && s >= 2);
    let mut value = 1usize;
    let mut q = 0u32;
    while value < m {
        value *= s;
        q += 1;
    }
    q
}

/// Carry length step 2 gathers for an input of length n, matching what
/// `general_scan` actually executes: zero when the input is a single
/// segment or small enough to scan as one tile.
pub fn plan_carry_len(n: usize, s: usize) -> Result<usize, ScanError> {
    if s < 2 {
        return Err(ScanError::InvalidDimension { s });
    }
    if n == 0 {
        return Err(ScanError::EmptyInput);
    }
    if n <= s {
        return Ok(0);
    }
    Ok(base_s_decompose(n, s)?.carry_len())
}

/// Combines `carry` into every element of `segment` (carry on the left)
/// using a single batched multiply: the segment is laid out as an
/// (s - 1) x ceil(len / (s - 1)) column-major matrix, `carry` is
/// prepended as a constant row on top of every column, the stacked s-row
/// matrix goes through the broadcast-first-column tile, and the carry row
/// is dropped again. Costs one invocation and
/// `s * ceil(len / (s - 1)) + ell` simulated time.
pub fn broadcast_add_segment<M: Monoid>(
    segment: &[M::Elem],
    carry: &M::Elem,
    config: &TcuConfig,
    op: &M,
    ledger: &mut CostLedger,
) -> Result<Vec<M::Elem>, ScanError> {
    if segment.is_empty() {
        return Ok(Vec::new());
    }
    let s = config.s();
    let rows = s - 1;
    let cols = segment.len().div_ceil(rows);

    let mut stacked = Vec::with_capacity(s * cols);
    for c in 0..cols {
        stacked.push(carry.clone());
        for r in 0..rows {
            match segment.get(c * rows + r) {
                Some(v) => stacked.push(v.clone()),
                None => stacked.push(op.identity()),
            }
        }
    }

    let broadcast = StructuralMatrix::broadcast_first_column(config);
    let product = batch_matmul(&stacked, &broadcast, config, op, ledger)?;
    ledger.rounds += 1;

    let mut out = Vec::with_capacity(segment.len());
    for c in 0..cols {
        for value in &product[c * s + 1..(c + 1) * s] {
            if out.len() == segment.len() {
                break;
            }
            out.push(value.clone());
        }
    }
    Ok(out)
}

/// Inclusive scan of `x` for any length n >= 1 on the simulated unit.
pub fn general_scan<M: Monoid>(
    x: &[M::Elem],
    config: &TcuConfig,
    op: &M,
) -> Result<ScanResult<M::Elem>, ScanError> {
    let n = x.len();
    if n == 0 {
        return Err(ScanError::EmptyInput);
    }
    let s = config.s();
    let k1 = floor_log(n, s);
    let mut data = x.to_vec();
    let mut ledger = CostLedger::default();

    if n == 1 {
        return Ok(ScanResult {
            output: data,
            ledger,
            k: 0,
        });
    }

    if n < s {
        // The whole input occupies the first column of one tile, so one
        // lower-triangular multiply is already the complete scan.
        let lower = StructuralMatrix::lower_triangular(config);
        let output = batch_matmul(&data, &lower, config, op, &mut ledger)?;
        ledger.rounds += 1;
        return Ok(ScanResult {
            output,
            ledger,
            k: k1,
        });
    }

    let plan = base_s_decompose(n, s)?;

    // Step 1: fixed-shape scan of every segment in place.
    let mut bounds: Vec<(usize, usize)> = Vec::with_capacity(plan.segments.len());
    let mut offset = 0usize;
    for &(mu, k) in &plan.terms {
        let len = s.pow(k);
        for _ in 0..mu {
            scan_power_in_place(&mut data[offset..offset + len], k, config, op, &mut ledger)?;
            bounds.push((offset, len));
            offset += len;
        }
    }
    debug_assert_eq!(offset, n);

    if bounds.len() > 1 {
        // Step 2: segment totals (their scanned last elements), except the
        // last segment whose total nothing depends on.
        let carry_len = bounds.len() - 1;
        let mut w: Vec<M::Elem> = bounds[..carry_len]
            .iter()
            .map(|&(off, len)| data[off + len - 1].clone())
            .collect();

        // Step 3: scan the carry vector itself, padded with the identity
        // to the smallest power of s that holds it.
        let q = ceil_log(carry_len, s);
        w.resize(s.pow(q), op.identity());
        scan_power_in_place(&mut w, q, config, op, &mut ledger)?;
        w.truncate(carry_len);

        // Step 4: one broadcast per remaining segment.
        for (i, &(off, len)) in bounds.iter().enumerate().skip(1) {
            let added =
                broadcast_add_segment(&data[off..off + len], &w[i - 1], config, op, &mut ledger)?;
            data[off..off + len].clone_from_slice(&added);
        }
    }

    Ok(ScanResult {
        output: data,
        ledger,
        k: k1,
    })
}
