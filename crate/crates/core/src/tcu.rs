//! The simulated tensor unit: configuration, the two structural 0/1
//! matrices, strided data movement, the batched multiply, and the cost
//! ledger that records exactly what the hardware model would charge.
//!
//! The unit multiplies an s x s tile by an s x m operand (m >= s) in
//! simulated time `s * m + ell`, where `ell` is a fixed per-invocation
//! latency. A batched multiply against a vector of length m is charged as
//! one invocation of a single stacked product with `ceil(m / s)` columns,
//! while the work counters track the `ceil(m / s^2)` individual s x s
//! tile products and the scalar combines a dense multiply would perform.

use serde::Serialize;

use crate::error::ScanError;
use crate::monoid::Monoid;

/// Shape parameters of the simulated unit: tile dimension `s >= 2` and
/// per-invocation latency `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TcuConfig {
    s: usize,
    ell: u64,
}

impl TcuConfig {
    pub fn new(s: usize, ell: u64) -> Result<Self, ScanError> {
        if s < 2 {
            return Err(ScanError::InvalidDimension { s });
        }
        Ok(TcuConfig { s, ell })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }
}

/// Which of the two fixed 0/1 tile matrices an operation multiplies by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// Lower-triangular all-ones: entry (r, c) = 1 iff c <= r. One tile
    /// product computes the local prefix sums of each column.
    LowerTriangularOnes,
    /// Identity plus an all-ones first column: entry (r, c) = 1 iff c == 0
    /// or c == r. One tile product adds each column's first entry (a
    /// carried prefix) into the rest of the column.
    BroadcastFirstColumn,
}

/// A structural matrix kept symbolically: only its kind and dimension are
/// stored, never a dense buffer of numbers. Products against it reduce to
/// folds of selected rows, so element types stay monoid-generic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralMatrix {
    kind: MatrixKind,
    size: usize,
}

impl StructuralMatrix {
    pub fn new(kind: MatrixKind, s: usize) -> Result<Self, ScanError> {
        if s < 2 {
            return Err(ScanError::InvalidDimension { s });
        }
        Ok(StructuralMatrix { kind, size: s })
    }

    /// The lower-triangular all-ones tile for an already-validated config.
    pub fn lower_triangular(config: &TcuConfig) -> Self {
        StructuralMatrix {
            kind: MatrixKind::LowerTriangularOnes,
            size: config.s(),
        }
    }

    /// The broadcast-first-column tile for an already-validated config.
    pub fn broadcast_first_column(config: &TcuConfig) -> Self {
        StructuralMatrix {
            kind: MatrixKind::BroadcastFirstColumn,
            size: config.s(),
        }
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Whether entry (r, c) of the matrix is 1.
    pub fn entry(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.size && c < self.size);
        match self.kind {
            MatrixKind::LowerTriangularOnes => c <= r,
            MatrixKind::BroadcastFirstColumn => c == 0 || c == r,
        }
    }

    /// Dense 0/1 expansion, for tests and debugging only.
    pub fn dense(&self) -> Vec<Vec<u8>> {
        (0..self.size)
            .map(|r| (0..self.size).map(|c| u8::from(self.entry(r, c))).collect())
            .collect()
    }

    /// Scalar combines one dense s x s tile product performs: summing the
    /// selected entries of row r costs (ones(r) - 1) combines per column.
    /// Lower-triangular rows have r + 1 ones, so a tile costs
    /// `s * s(s-1)/2`; broadcast rows have 2 ones except row 0, so a tile
    /// costs `s * (s-1)`.
    pub fn combines_per_tile(&self) -> u64 {
        let s = self.size as u64;
        match self.kind {
            MatrixKind::LowerTriangularOnes => s * s * (s - 1) / 2,
            MatrixKind::BroadcastFirstColumn => s * (s - 1),
        }
    }
}

/// Running totals of everything the simulated unit has been asked to do.
///
/// * `invocations` — batched multiplies issued (one per `batch_matmul`).
/// * `chunk_mults` — individual s x s tile products, `ceil(m / s^2)` per
///   invocation, padded tiles included.
/// * `scalar_combines` — binary combines a dense scalar-by-scalar multiply
///   would perform; padded tiles are charged at full per-tile cost.
/// * `rounds` — gather / multiply / scatter triples executed by a scan.
/// * `sim_time` — modelled time: `s * ceil(m / s) + ell` per invocation,
///   i.e. one stacked s x s by s x ceil(m / s) product plus latency.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CostLedger {
    pub invocations: u64,
    pub chunk_mults: u64,
    pub scalar_combines: u64,
    pub rounds: u64,
    pub sim_time: u64,
}

/// Copies out `x[start], x[start + step], ...` until the end of `x`.
/// `start` past the end yields an empty vector; `step` must be >= 1.
pub fn gather_strided<T: Clone>(x: &[T], start: usize, step: usize) -> Vec<T> {
    assert!(step >= 1, "gather step must be at least 1");
    match x.get(start..) {
        Some(tail) => tail.iter().step_by(step).cloned().collect(),
        None => Vec::new(),
    }
}

/// Number of slots `gather_strided` selects; shared with scatter validation.
pub fn strided_len(len: usize, start: usize, step: usize) -> usize {
    assert!(step >= 1, "stride step must be at least 1");
    if start >= len {
        0
    } else {
        (len - 1 - start) / step + 1
    }
}

/// Writes `z` back into the slots `x[start], x[start + step], ...`;
/// the inverse of `gather_strided`. Rejects `z` of the wrong length.
pub fn scatter_strided<T: Clone>(
    x: &mut [T],
    z: &[T],
    start: usize,
    step: usize,
) -> Result<(), ScanError> {
    let expected = strided_len(x.len(), start, step);
    if z.len() != expected {
        return Err(ScanError::ScatterLengthMismatch {
            expected,
            got: z.len(),
        });
    }
    for (slot, value) in x[start..].iter_mut().step_by(step).zip(z) {
        *slot = value.clone();
    }
    Ok(())
}

/// One batched multiply on the simulated unit: `y` is padded with the
/// monoid identity to a whole number of s^2 tiles, each tile is read as an
/// s x s matrix in column-major order (`M[r][c] = tile[c * s + r]`), the
/// structural matrix is applied on the left, and the results are written
/// back column-major and truncated to the original length.
///
/// Row r of the product folds the selected column entries in increasing
/// row order, so non-commutative operators see their operands exactly in
/// sequence order. An empty `y` is returned as-is without touching the
/// ledger; otherwise the call costs one invocation, `ceil(m / s^2)` tile
/// products, their full dense combine count, and `s * ceil(m / s) + ell`
/// simulated time.
pub fn batch_matmul<M: Monoid>(
    y: &[M::Elem],
    matrix: &StructuralMatrix,
    config: &TcuConfig,
    op: &M,
    ledger: &mut CostLedger,
) -> Result<Vec<M::Elem>, ScanError> {
    let m = y.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let s = config.s();
    debug_assert_eq!(
        matrix.size(),
        s,
        "matrix tile must match the unit dimension"
    );

    let tile_len = s * s;
    let tiles = m.div_ceil(tile_len);
    let padded_len = tiles * tile_len;

    let mut padded: Vec<M::Elem> = Vec::with_capacity(padded_len);
    padded.extend_from_slice(y);
    padded.resize(padded_len, op.identity());

    let mut out: Vec<M::Elem> = Vec::with_capacity(padded_len);
    for tile in padded.chunks_exact(tile_len) {
        for column in tile.chunks_exact(s) {
            match matrix.kind() {
                MatrixKind::LowerTriangularOnes => {
                    // Row r folds column[0..=r]; the running fold reuses
                    // row r-1's value, which is the same left-to-right
                    // association a dense multiply performs.
                    let mut acc = column[0].clone();
                    out.push(acc.clone());
                    for value in &column[1..] {
                        acc = op.combine(&acc, value)?;
                        out.push(acc.clone());
                    }
                }
                MatrixKind::BroadcastFirstColumn => {
                    let head = &column[0];
                    out.push(head.clone());
                    for value in &column[1..] {
                        out.push(op.combine(head, value)?);
                    }
                }
            }
        }
    }
    out.truncate(m);

    ledger.invocations += 1;
    ledger.chunk_mults += tiles as u64;
    ledger.scalar_combines += tiles as u64 * matrix.combines_per_tile();
    ledger.sim_time += (s * m.div_ceil(s)) as u64 + config.ell();

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{Affine, AffineCompose, I64Add, Monoid};
    use proptest::prelude::*;

    /// Brute-force reference: expands the structural matrix to dense 0/1,
    /// pads, and computes every output entry as an independent fold over
    /// the rows selected by the dense matrix, in increasing row order.
    fn dense_batch_oracle<M: Monoid>(
        y: &[M::Elem],
        matrix: &StructuralMatrix,
        op: &M,
    ) -> Vec<M::Elem> {
        let s = matrix.size();
        let dense = matrix.dense();
        let tile_len = s * s;
        let padded_len = y.len().div_ceil(tile_len).max(1) * tile_len;
        let mut padded = y.to_vec();
        padded.resize(padded_len, op.identity());

        let mut out = Vec::with_capacity(padded_len);
        for tile in padded.chunks_exact(tile_len) {
            for c in 0..s {
                for row in &dense {
                    let mut acc: Option<M::Elem> = None;
                    for j in 0..s {
                        if row[j] == 1 {
                            let v = &tile[c * s + j];
                            acc = Some(match acc {
                                None => v.clone(),
                                Some(prev) => op.combine(&prev, v).unwrap(),
                            });
                        }
                    }
                    out.push(acc.expect("structural rows always select at least one entry"));
                }
            }
        }
        out.truncate(y.len());
        out
    }

    fn config(s: usize) -> TcuConfig {
        TcuConfig::new(s, 0).unwrap()
    }

    #[test]
    fn broadcast_matrix_dense_expansion() {
        let b3 = StructuralMatrix::new(MatrixKind::BroadcastFirstColumn, 3).unwrap();
        assert_eq!(
            b3.dense(),
            vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]
        );
    }

    #[test]
    fn lower_triangular_dense_expansion_and_row_counts() {
        let l4 = StructuralMatrix::new(MatrixKind::LowerTriangularOnes, 4).unwrap();
        let dense = l4.dense();
        assert_eq!(dense[0], vec![1, 0, 0, 0]);
        assert_eq!(dense[3], vec![1, 1, 1, 1]);
        for (r, row) in dense.iter().enumerate() {
            let ones: usize = row.iter().map(|&v| v as usize).sum();
            assert_eq!(ones, r + 1);
        }
        let b4 = StructuralMatrix::new(MatrixKind::BroadcastFirstColumn, 4).unwrap();
        for (r, row) in b4.dense().iter().enumerate() {
            let ones: usize = row.iter().map(|&v| v as usize).sum();
            assert_eq!(ones, if r == 0 { 1 } else { 2 });
        }
    }

    #[test]
    fn dimension_below_two_is_rejected() {
        assert_eq!(
            StructuralMatrix::new(MatrixKind::LowerTriangularOnes, 1).unwrap_err(),
            ScanError::InvalidDimension { s: 1 }
        );
        assert_eq!(
            TcuConfig::new(0, 0).unwrap_err(),
            ScanError::InvalidDimension { s: 0 }
        );
    }

    #[test]
    fn combines_per_tile_formulas() {
        let l4 = StructuralMatrix::new(MatrixKind::LowerTriangularOnes, 4).unwrap();
        assert_eq!(l4.combines_per_tile(), 24); // 4 * 4*3/2
        let b4 = StructuralMatrix::new(MatrixKind::BroadcastFirstColumn, 4).unwrap();
        assert_eq!(b4.combines_per_tile(), 12); // 4 * 3
        let l2 = StructuralMatrix::new(MatrixKind::LowerTriangularOnes, 2).unwrap();
        assert_eq!(l2.combines_per_tile(), 2);
    }

    #[test]
    fn batch_matmul_lower_triangular_full_tiles() {
        let cfg = config(2);
        let l2 = StructuralMatrix::lower_triangular(&cfg);
        let y: Vec<i64> = (1..=16).collect();
        let mut ledger = CostLedger::default();
        let got = batch_matmul(&y, &l2, &cfg, &I64Add, &mut ledger).unwrap();
        assert_eq!(
            got,
            vec![1, 3, 3, 7, 5, 11, 7, 15, 9, 19, 11, 23, 13, 27, 15, 31]
        );
        assert_eq!(ledger.chunk_mults, 4);
        assert_eq!(ledger.invocations, 1);
    }

    #[test]
    fn batch_matmul_pads_partial_tile_with_identity() {
        let cfg = config(2);
        let l2 = StructuralMatrix::lower_triangular(&cfg);
        let mut ledger = CostLedger::default();
        let got = batch_matmul(&[1i64, 2, 3, 4, 5], &l2, &cfg, &I64Add, &mut ledger).unwrap();
        assert_eq!(got, vec![1, 3, 3, 7, 5]);
        assert_eq!(ledger.chunk_mults, 2);
    }

    #[test]
    fn batch_matmul_broadcast_adds_first_entry_into_column() {
        let cfg = config(4);
        let b4 = StructuralMatrix::broadcast_first_column(&cfg);
        let mut ledger = CostLedger::default();
        let got = batch_matmul(&[10i64, 1, 2, 3], &b4, &cfg, &I64Add, &mut ledger).unwrap();
        assert_eq!(got, vec![10, 11, 12, 13]);
        assert_eq!(ledger.chunk_mults, 1);
        assert_eq!(ledger.scalar_combines, 12);
    }

    #[test]
    fn batch_matmul_empty_input_is_free() {
        let cfg = config(4);
        let l4 = StructuralMatrix::lower_triangular(&cfg);
        let mut ledger = CostLedger::default();
        let got = batch_matmul(&[] as &[i64], &l4, &cfg, &I64Add, &mut ledger).unwrap();
        assert!(got.is_empty());
        assert_eq!(ledger, CostLedger::default());
    }

    #[test]
    fn ledger_charges_one_invocation_per_call() {
        let cfg = TcuConfig::new(4, 7).unwrap();
        let l4 = StructuralMatrix::lower_triangular(&cfg);
        let y: Vec<i64> = (0..21).collect();
        let mut ledger = CostLedger::default();
        batch_matmul(&y, &l4, &cfg, &I64Add, &mut ledger).unwrap();
        assert_eq!(ledger.invocations, 1);
        assert_eq!(ledger.chunk_mults, 2); // ceil(21 / 16)
        assert_eq!(ledger.scalar_combines, 2 * 24);
        // s * ceil(m / s) + ell = 4 * 6 + 7
        assert_eq!(ledger.sim_time, 31);
        assert_eq!(ledger.rounds, 0); // rounds belong to the scan drivers

        batch_matmul(&y, &l4, &cfg, &I64Add, &mut ledger).unwrap();
        assert_eq!(ledger.invocations, 2);
        assert_eq!(ledger.sim_time, 62);
    }

    #[test]
    fn gather_strided_examples() {
        let x = [10i64, 20, 30, 40, 50];
        assert_eq!(gather_strided(&x, 1, 2), vec![20, 40]);
        assert_eq!(gather_strided(&x, 0, 1), x.to_vec());
        assert_eq!(gather_strided(&x, 7, 3), Vec::<i64>::new());
        assert_eq!(strided_len(5, 1, 2), 2);
        assert_eq!(strided_len(5, 7, 3), 0);
    }

    #[test]
    fn scatter_strided_round_trips_gather() {
        let mut x = [10i64, 20, 30, 40, 50];
        let picked = gather_strided(&x, 1, 2);
        scatter_strided(&mut x, &[21, 41], 1, 2).unwrap();
        assert_eq!(x, [10, 21, 30, 41, 50]);
        scatter_strided(&mut x, &picked, 1, 2).unwrap();
        assert_eq!(x, [10, 20, 30, 40, 50]);
    }

    #[test]
    fn scatter_strided_rejects_wrong_length() {
        let mut x = [1i64, 2, 3, 4, 5];
        let err = scatter_strided(&mut x, &[9, 9, 9], 1, 2).unwrap_err();
        assert_eq!(
            err,
            ScanError::ScatterLengthMismatch {
                expected: 2,
                got: 3
            }
        );
    }

    #[test]
    fn affine_broadcast_keeps_carry_on_the_left() {
        // Column [g, f] under the broadcast matrix must become [g, g o f]:
        // the carried prefix is the left operand of every combine.
        let cfg = config(2);
        let b2 = StructuralMatrix::broadcast_first_column(&cfg);
        let g = Affine::new(2.0, 1.0);
        let f = Affine::new(3.0, 0.0);
        let mut ledger = CostLedger::default();
        let got = batch_matmul(&[g, f], &b2, &cfg, &AffineCompose, &mut ledger).unwrap();
        assert_eq!(got[0], g);
        assert_eq!(got[1], AffineCompose.combine(&g, &f).unwrap());
        assert_ne!(got[1], AffineCompose.combine(&f, &g).unwrap());
    }

    proptest! {
        #[test]
        fn matches_dense_oracle_on_integers(
            y in proptest::collection::vec(-(1i64 << 40)..(1i64 << 40), 0..256),
            s in prop_oneof![Just(2usize), Just(3), Just(4), Just(8)],
            kind in prop_oneof![
                Just(MatrixKind::LowerTriangularOnes),
                Just(MatrixKind::BroadcastFirstColumn)
            ],
        ) {
            let cfg = config(s);
            let matrix = StructuralMatrix::new(kind, s).unwrap();
            let mut ledger = CostLedger::default();
            let got = batch_matmul(&y, &matrix, &cfg, &I64Add, &mut ledger).unwrap();
            let want = dense_batch_oracle(&y, &matrix, &I64Add);
            prop_assert_eq!(got, want);
        }

        #[test]
        fn matches_dense_oracle_on_affine_maps(
            y in proptest::collection::vec(
                (0.5f64..1.5, -1.0f64..1.0).prop_map(|(s, o)| Affine::new(s, o)),
                0..128,
            ),
            s in prop_oneof![Just(2usize), Just(3), Just(4)],
            kind in prop_oneof![
                Just(MatrixKind::LowerTriangularOnes),
                Just(MatrixKind::BroadcastFirstColumn)
            ],
        ) {
            // The running fold and the dense fold apply combines in the
            // identical order, so even floating-point results must agree
            // bit for bit.
            let cfg = config(s);
            let matrix = StructuralMatrix::new(kind, s).unwrap();
            let mut ledger = CostLedger::default();
            let got = batch_matmul(&y, &matrix, &cfg, &AffineCompose, &mut ledger).unwrap();
            let want = dense_batch_oracle(&y, &matrix, &AffineCompose);
            prop_assert_eq!(got, want);
        }

        #[test]
        fn trailing_identity_padding_never_changes_kept_outputs(
            y in proptest::collection::vec(-(1i64 << 40)..(1i64 << 40), 1..64),
            extra in 0usize..32,
            s in prop_oneof![Just(2usize), Just(3), Just(4)],
        ) {
            let cfg = config(s);
            let l = StructuralMatrix::lower_triangular(&cfg);
            let mut ledger = CostLedger::default();
            let plain = batch_matmul(&y, &l, &cfg, &I64Add, &mut ledger).unwrap();
            let mut padded = y.clone();
            padded.resize(y.len() + extra, I64Add.identity());
            let widened = batch_matmul(&padded, &l, &cfg, &I64Add, &mut ledger).unwrap();
            prop_assert_eq!(&widened[..y.len()], &plain[..]);
        }
    }
}
