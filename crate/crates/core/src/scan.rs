//! Inclusive prefix scan for inputs whose length is an exact power of the
//! tile dimension, driven entirely by batched structural multiplies.
//!
//! For n = s^k the scan runs 2k - 1 rounds. An up-sweep of k rounds
//! (t = 0 .. k-1) gathers every s^t-th element starting at s^t - 1,
//! multiplies by the lower-triangular tile so each gathered group of s
//! accumulates its local prefix sums, and scatters the results back: after
//! round t, position j holds the fold of a power-of-s aligned block ending
//! at j. A down-sweep of k - 1 rounds (t = k-1 .. 1) gathers with start
//! s^t - 1 and the finer stride s^(t-1), multiplies by the
//! broadcast-first-column tile so each group adds the carried prefix at
//! its head into the remaining entries, and scatters back. With s = 2 the
//! round structure is exactly the classic work-efficient binary
//! up-sweep/down-sweep network; larger s trades rounds for wider tiles.

use crate::error::ScanError;
use crate::monoid::Monoid;
use crate::tcu::{
    batch_matmul, gather_strided, scatter_strided, CostLedger, StructuralMatrix, TcuConfig,
};

/// Scan output together with what it cost on the simulated unit.
#[derive(Clone, Debug)]
pub struct ScanResult<T> {
    /// The inclusive prefix scan of the input.
    pub output: Vec<T>,
    /// Everything the simulated unit was charged while producing it.
    pub ledger: CostLedger,
    /// Largest exponent with s^k <= n; for power-of-s inputs, n = s^k.
    pub k: u32,
}

/// Exponent k with `s.pow(k) == n`, if one exists. `s` must be >= 2.
pub fn power_exponent(n: usize, s: usize) -> Option<u32> {
    debug_assert!(s >= 2);
    let mut value = 1usize;
    let mut k = 0u32;
    while value < n {
        value = value.checked_mul(s)?;
        k += 1;
    }
    (value == n).then_some(k)
}

/// Largest k with `s.pow(k) <= n`. Requires n >= 1 and s >= 2; computed in
/// integer arithmetic so exact powers never land on the wrong side.
pub fn floor_log(n: usize, s: usize) -> u32 {
    debug_assert!(n >= 1 && s >= 2);
    let mut value = s;
    let mut k = 0u32;
    while value <= n {
        k += 1;
        value = match value.checked_mul(s) {
            Some(next) => next,
            None => break,
        };
    }
    k
}

/// Inclusive scan of `x` on the simulated unit. The input length must be
/// an exact power of `config.s()`; anything else is rejected with a hint
/// to use the general-length driver. A single element (k = 0) is returned
/// unchanged with zero rounds.
pub fn matmul_scan<M: Monoid>(
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
    let mut data = x.to_vec();
    let mut ledger = CostLedger::default();
    scan_power_in_place(&mut data, k, config, op, &mut ledger)?;
    Ok(ScanResult {
        output: data,
        ledger,
        k,
    })
}

/// The two sweeps, operating in place on a slice of length s^k and
/// accumulating into a caller-owned ledger. Shared by the public scan,
/// the general-length driver, and the carry-vector scan.
pub(crate) fn scan_power_in_place<M: Monoid>(
    data: &mut [M::Elem],
    k: u32,
    config: &TcuConfig,
    op: &M,
    ledger: &mut CostLedger,
) -> Result<(), ScanError> {
    debug_assert_eq!(power_exponent(data.len(), config.s()), Some(k));
    let lower = StructuralMatrix::lower_triangular(config);
    up_sweep(data, k, &lower, config, op, ledger)?;
    down_sweep(data, k, config, op, ledger)
}

fn up_sweep<M: Monoid>(
    data: &mut [M::Elem],
    k: u32,
    lower: &StructuralMatrix,
    config: &TcuConfig,
    op: &M,
    ledger: &mut CostLedger,
) -> Result<(), ScanError> {
    let s = config.s();
    let mut stride = 1usize; // s^t
    for _ in 0..k {
        let y = gather_strided(data, stride - 1, stride);
        let z = batch_matmul(&y, lower, config, op, ledger)?;
        scatter_strided(data, &z, stride - 1, stride)?;
        ledger.rounds += 1;
        stride *= s;
    }
    Ok(())
}

fn down_sweep<M: Monoid>(
    data: &mut [M::Elem],
    k: u32,
    config: &TcuConfig,
    op: &M,
    ledger: &mut CostLedger,
) -> Result<(), ScanError> {
    if k < 2 {
        return Ok(());
    }
    let s = config.s();
    let broadcast = StructuralMatrix::broadcast_first_column(config);
    let mut stride = s.pow(k - 2); // s^(t-1), starting at t = k-1
    loop {
        let start = stride * s - 1; // s^t - 1
        let y = gather_strided(data, start, stride);
        let z = batch_matmul(&y, &broadcast, config, op, ledger)?;
        scatter_strided(data, &z, start, stride)?;
        ledger.rounds += 1;
        if stride == 1 {
            return Ok(()); // t = 1 was the last round
        }
        stride /= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{sequential_scan, Affine, AffineCompose, I64Add};
    use crate::tcu::strided_len;
    use proptest::prelude::*;

    fn config(s: usize) -> TcuConfig {
        TcuConfig::new(s, 0).unwrap()
    }

    #[test]
    fn ramp_sixteen_with_s_four() {
        let x: Vec<i64> = (1..=16).collect();
        let result = matmul_scan(&x, &config(4), &I64Add).unwrap();
        let want: Vec<i64> = vec![
            1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 66, 78, 91, 105, 120, 136,
        ];
        assert_eq!(result.output, want);
        assert_eq!(result.k, 2);
        assert_eq!(result.ledger.rounds, 3);
        assert_eq!(result.ledger.invocations, 3);
    }

    #[test]
    fn up_sweep_leaves_block_totals_in_place() {
        // After the up-sweep of [1, 2, 3, 4] with s = 2, odd positions hold
        // block totals and the down-sweep still owes position 2 its carry.
        let cfg = config(2);
        let mut data = vec![1i64, 2, 3, 4];
        let lower = StructuralMatrix::lower_triangular(&cfg);
        let mut ledger = CostLedger::default();
        up_sweep(&mut data, 2, &lower, &cfg, &I64Add, &mut ledger).unwrap();
        assert_eq!(data, vec![1, 3, 3, 10]);

        down_sweep(&mut data, 2, &cfg, &I64Add, &mut ledger).unwrap();
        assert_eq!(data, vec![1, 3, 6, 10]);
    }

    #[test]
    fn singleton_runs_zero_rounds() {
        let result = matmul_scan(&[7i64], &config(4), &I64Add).unwrap();
        assert_eq!(result.output, vec![7]);
        assert_eq!(result.k, 0);
        assert_eq!(result.ledger, CostLedger::default());
    }

    #[test]
    fn non_power_length_is_rejected_with_general_hint() {
        let x: Vec<i64> = (1..=6).collect();
        let err = matmul_scan(&x, &config(2), &I64Add).unwrap_err();
        assert_eq!(err, ScanError::NotPowerOfS { n: 6, s: 2 });
        assert!(err.to_string().contains("general"));
        assert_eq!(
            matmul_scan(&[] as &[i64], &config(2), &I64Add).unwrap_err(),
            ScanError::EmptyInput
        );
    }

    #[test]
    fn tile_products_for_sixteen_elements_at_s_two() {
        // Hand count: up-sweep rounds process 16, 8, 4, 2 elements giving
        // 4 + 2 + 1 + 1 tiles; the down-sweep processes 3, 7, 15 giving
        // 1 + 2 + 4. Fifteen tile products across 7 rounds.
        let x: Vec<i64> = (1..=16).collect();
        let result = matmul_scan(&x, &config(2), &I64Add).unwrap();
        assert_eq!(result.ledger.chunk_mults, 15);
        assert_eq!(result.ledger.rounds, 7);
        assert_eq!(result.output, sequential_scan(&x, &I64Add).unwrap());
    }

    #[test]
    fn round_lengths_follow_the_stride_formulas() {
        // Up-sweep round t gathers strided_len(n, s^t - 1, s^t) elements;
        // down-sweep round t gathers strided_len(n, s^t - 1, s^(t-1)).
        // With ell = 0 the simulated time must equal the sum of
        // s * ceil(len / s) over exactly those rounds.
        let n = 16usize;
        let s = 2usize;
        let k = 4u32;
        let mut expect_time = 0u64;
        let mut lens = Vec::new();
        for t in 0..k {
            let stride = s.pow(t);
            lens.push(strided_len(n, stride - 1, stride));
        }
        assert_eq!(lens, vec![16, 8, 4, 2]);
        for t in (1..k).rev() {
            let stride = s.pow(t);
            lens.push(strided_len(n, stride - 1, stride / s));
        }
        assert_eq!(lens[4..], [3, 7, 15]);
        for len in &lens {
            expect_time += (s * len.div_ceil(s)) as u64;
        }
        assert_eq!(expect_time, 58);

        let x: Vec<i64> = (1..=16).collect();
        let result = matmul_scan(&x, &config(2), &I64Add).unwrap();
        assert_eq!(result.ledger.sim_time, 58);
        assert_eq!(result.ledger.invocations, lens.len() as u64);

        // Each invocation pays the latency once: same input at ell = 5.
        let cfg = TcuConfig::new(2, 5).unwrap();
        let result = matmul_scan(&x, &cfg, &I64Add).unwrap();
        assert_eq!(result.ledger.sim_time, 58 + 7 * 5);
    }

    #[test]
    fn identity_input_costs_the_same_as_any_other() {
        let zeros = vec![0i64; 16];
        let ramp: Vec<i64> = (1..=16).collect();
        let a = matmul_scan(&zeros, &config(2), &I64Add).unwrap();
        let b = matmul_scan(&ramp, &config(2), &I64Add).unwrap();
        assert!(a.output.iter().all(|&v| v == 0));
        assert_eq!(a.ledger, b.ledger);
    }

    #[test]
    fn affine_scan_matches_sequential_oracle() {
        let x: Vec<Affine> = (0..16)
            .map(|i| Affine::new(1.0 + 0.01 * (i as f64 - 8.0), 0.125 * i as f64))
            .collect();
        let got = matmul_scan(&x, &config(2), &AffineCompose).unwrap().output;
        let want = sequential_scan(&x, &AffineCompose).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g.scale - w.scale).abs() <= 1e-12 * w.scale.abs().max(1.0));
            assert!((g.offset - w.offset).abs() <= 1e-12 * w.offset.abs().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn matches_sequential_oracle_on_random_integers(
            k in 0u32..6,
            s in prop_oneof![Just(2usize), Just(3)],
            seed_base in -(1i64 << 30)..(1i64 << 30),
        ) {
            let n = s.pow(k);
            let x: Vec<i64> = (0..n).map(|i| seed_base.wrapping_add(i as i64 * 37) % (1 << 20)).collect();
            let result = matmul_scan(&x, &config(s), &I64Add).unwrap();
            prop_assert_eq!(&result.output, &sequential_scan(&x, &I64Add).unwrap());
            let expect_rounds = if k == 0 { 0 } else { 2 * k as u64 - 1 };
            prop_assert_eq!(result.ledger.rounds, expect_rounds);
            prop_assert_eq!(result.ledger.invocations, expect_rounds);
        }
    }
}
