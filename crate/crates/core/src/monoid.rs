//! Associative operators and the plain sequential scans used as oracles.
//!
//! Every scan in this crate is defined over a monoid: an associative binary
//! operation with an identity element. Associativity is what lets the
//! tensor-unit algorithms regroup work into matrix products;
//! commutativity is deliberately *not* assumed, and the affine operator
//! below exists precisely because it is non-commutative and therefore
//! catches any implementation that swaps operand order.
//!
//! The set of element types is closed: 64-bit integers (checked), 64-bit
//! floats, and affine maps over floats. Each operator is a unit struct so
//! the scan drivers can stay generic without trait objects.

use crate::error::ScanError;

/// An associative binary operation with identity over some element type.
///
/// `combine` is fallible because the integer instance uses checked
/// arithmetic: overflow is reported as an error instead of wrapping.
pub trait Monoid {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    /// The identity element: `combine(identity(), a) == a == combine(a, identity())`.
    fn identity(&self) -> Self::Elem;

    /// Applies the operation. Must be associative over the element domain.
    fn combine(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ScanError>;

    /// Short identifier used in reports and command-line flags.
    fn name(&self) -> &'static str;
}

/// Checked 64-bit integer addition; overflow is an error.
#[derive(Clone, Copy, Debug, Default)]
pub struct I64Add;

impl Monoid for I64Add {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    #[inline]
    fn combine(&self, a: &i64, b: &i64) -> Result<i64, ScanError> {
        a.checked_add(*b)
            .ok_or(ScanError::Overflow { a: *a, b: *b })
    }

    fn name(&self) -> &'static str {
        "add-i64"
    }
}

/// 64-bit floating-point addition. Associative only up to rounding; the
/// scan equivalence tests compare against the sequential oracle with a
/// documented relative tolerance rather than exact equality.
#[derive(Clone, Copy, Debug, Default)]
pub struct F64Add;

impl Monoid for F64Add {
    type Elem = f64;

    fn identity(&self) -> f64 {
        0.0
    }

    #[inline]
    fn combine(&self, a: &f64, b: &f64) -> Result<f64, ScanError> {
        Ok(a + b)
    }

    fn name(&self) -> &'static str {
        "add-f64"
    }
}

/// An affine map `x -> scale * x + offset` over f64.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub scale: f64,
    pub offset: f64,
}

impl Affine {
    pub fn new(scale: f64, offset: f64) -> Self {
        Affine { scale, offset }
    }
}

/// Composition of affine maps, newest on the right: the scan of a sequence
/// of maps yields at position i the composition `x[0] o x[1] o ... o x[i]`
/// applied left-to-right, i.e.
/// `combine(a, b) = (a.scale * b.scale, a.scale * b.offset + a.offset)`.
///
/// Composition is associative but not commutative, which makes this the
/// operator of choice for catching operand-order bugs in the matrix path.
#[derive(Clone, Copy, Debug, Default)]
pub struct AffineCompose;

impl Monoid for AffineCompose {
    type Elem = Affine;

    fn identity(&self) -> Affine {
        Affine::new(1.0, 0.0)
    }

    #[inline]
    fn combine(&self, a: &Affine, b: &Affine) -> Result<Affine, ScanError> {
        Ok(Affine::new(
            a.scale * b.scale,
            a.scale * b.offset + a.offset,
        ))
    }

    fn name(&self) -> &'static str {
        "affine"
    }
}

/// Inclusive prefix scan by a plain left-to-right fold.
///
/// `output[i] = x[0] . x[1] . ... . x[i]`. This is the reference
/// implementation every tensor-unit algorithm is tested against; it never
/// touches the simulated hardware.
pub fn sequential_scan<M: Monoid>(x: &[M::Elem], op: &M) -> Result<Vec<M::Elem>, ScanError> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc: Option<M::Elem> = None;
    for v in x {
        let next = match &acc {
            None => v.clone(),
            Some(prev) => op.combine(prev, v)?,
        };
        out.push(next.clone());
        acc = Some(next);
    }
    Ok(out)
}

/// Exclusive prefix scan: `output[0]` is the identity and
/// `output[i] = x[0] . ... . x[i-1]`, i.e. the inclusive scan shifted
/// right by one with the last total dropped.
pub fn exclusive_scan<M: Monoid>(x: &[M::Elem], op: &M) -> Result<Vec<M::Elem>, ScanError> {
    let inclusive = sequential_scan(x, op)?;
    Ok(shift_to_exclusive(inclusive, op))
}

/// Turns an inclusive scan into the matching exclusive scan by shifting
/// right one slot and seeding with the identity. Shared by the sequential
/// oracle above and the tensor-unit sort pipeline.
pub fn shift_to_exclusive<M: Monoid>(mut inclusive: Vec<M::Elem>, op: &M) -> Vec<M::Elem> {
    if inclusive.is_empty() {
        return inclusive;
    }
    inclusive.pop();
    inclusive.insert(0, op.identity());
    inclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sequential_scan_ramp_is_triangular_numbers() {
        let x: Vec<i64> = (1..=16).collect();
        let got = sequential_scan(&x, &I64Add).unwrap();
        let want: Vec<i64> = vec![
            1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 66, 78, 91, 105, 120, 136,
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn sequential_scan_empty_is_empty() {
        let got = sequential_scan(&[], &I64Add).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn sequential_scan_affine_composes_left_to_right() {
        // (2,1) then (3,0): second entry is (2*3, 2*0 + 1) = (6, 1).
        let x = vec![Affine::new(2.0, 1.0), Affine::new(3.0, 0.0)];
        let got = sequential_scan(&x, &AffineCompose).unwrap();
        assert_eq!(got, vec![Affine::new(2.0, 1.0), Affine::new(6.0, 1.0)]);
    }

    #[test]
    fn exclusive_scan_shifts_inclusive() {
        let got = exclusive_scan(&[1i64, 2, 3, 4], &I64Add).unwrap();
        assert_eq!(got, vec![0, 1, 3, 6]);

        let got = exclusive_scan(&[5i64], &I64Add).unwrap();
        assert_eq!(got, vec![0]);

        let got = exclusive_scan(&[1i64, 1, 1, 1], &I64Add).unwrap();
        assert_eq!(got, vec![0, 1, 2, 3]);
    }

    #[test]
    fn integer_overflow_is_an_error() {
        let err = sequential_scan(&[i64::MAX, 1], &I64Add).unwrap_err();
        assert_eq!(err, ScanError::Overflow { a: i64::MAX, b: 1 });
    }

    #[test]
    fn affine_scan_differs_from_reversed_fold() {
        // Non-commutativity guard: folding the same elements in reverse
        // order must give a different answer, otherwise the operator could
        // not catch operand-order bugs elsewhere.
        let x = vec![Affine::new(2.0, 1.0), Affine::new(3.0, 0.0)];
        let forward = sequential_scan(&x, &AffineCompose).unwrap();
        let rev: Vec<Affine> = x.iter().rev().cloned().collect();
        let backward = sequential_scan(&rev, &AffineCompose).unwrap();
        assert_ne!(forward.last(), backward.last());
    }

    // Randomized law checks. 10_000 sampled triples per operator; integers
    // and exact float identities are asserted exactly, float associativity
    // up to a few ulps of the operand magnitudes.

    #[test]
    fn i64_monoid_laws_hold_on_sampled_triples() {
        let op = I64Add;
        let mut runner = proptest::test_runner::TestRunner::new(proptest::test_runner::Config {
            cases: 10_000,
            ..Default::default()
        });
        let small = -(1i64 << 40)..(1i64 << 40);
        runner
            .run(&(small.clone(), small.clone(), small), |(a, b, c)| {
                let ab_c = op.combine(&op.combine(&a, &b).unwrap(), &c).unwrap();
                let a_bc = op.combine(&a, &op.combine(&b, &c).unwrap()).unwrap();
                prop_assert_eq!(ab_c, a_bc);
                prop_assert_eq!(op.combine(&op.identity(), &a).unwrap(), a);
                prop_assert_eq!(op.combine(&a, &op.identity()).unwrap(), a);
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn f64_monoid_laws_hold_on_sampled_triples() {
        let op = F64Add;
        let mut runner = proptest::test_runner::TestRunner::new(proptest::test_runner::Config {
            cases: 10_000,
            ..Default::default()
        });
        runner
            .run(&(0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0), |(a, b, c)| {
                let ab_c = op.combine(&op.combine(&a, &b).unwrap(), &c).unwrap();
                let a_bc = op.combine(&a, &op.combine(&b, &c).unwrap()).unwrap();
                let slack = 4.0 * f64::EPSILON * (a.abs() + b.abs() + c.abs());
                prop_assert!((ab_c - a_bc).abs() <= slack);
                // Adding zero to a finite non-negative float is exact.
                prop_assert_eq!(op.combine(&op.identity(), &a).unwrap(), a);
                prop_assert_eq!(op.combine(&a, &op.identity()).unwrap(), a);
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn affine_monoid_laws_hold_on_sampled_triples() {
        let op = AffineCompose;
        let mut runner = proptest::test_runner::TestRunner::new(proptest::test_runner::Config {
            cases: 10_000,
            ..Default::default()
        });
        let map = (0.5f64..1.5, -1.0f64..1.0).prop_map(|(s, o)| Affine::new(s, o));
        runner
            .run(&(map.clone(), map.clone(), map), |(a, b, c)| {
                let ab_c = op.combine(&op.combine(&a, &b).unwrap(), &c).unwrap();
                let a_bc = op.combine(&a, &op.combine(&b, &c).unwrap()).unwrap();
                let tol = 8.0 * f64::EPSILON;
                prop_assert!((ab_c.scale - a_bc.scale).abs() <= tol * ab_c.scale.abs().max(1.0));
                prop_assert!((ab_c.offset - a_bc.offset).abs() <= tol * ab_c.offset.abs().max(4.0));
                // Identity composes exactly: 1.0 * x + 0.0 round-trips.
                prop_assert_eq!(op.combine(&op.identity(), &a).unwrap(), a);
                prop_assert_eq!(op.combine(&a, &op.identity()).unwrap(), a);
                Ok(())
            })
            .unwrap();
    }
}
