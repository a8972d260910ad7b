//! Deterministic input generation. The same `--seed` always produces the
//! same values; `ramp` needs no seed at all, which keeps the worked
//! examples in the documentation reproducible by eye.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcu_scan::Affine;

use crate::{CliError, Dist};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unsupported(dist: Dist, op: &str) -> CliError {
    CliError::Usage(format!("--dist {dist} does not apply to --op {op}"))
}

pub fn gen_i64(n: usize, seed: u64, dist: Dist) -> Result<Vec<i64>, CliError> {
    match dist {
        Dist::Ramp => Ok((1..=n as i64).collect()),
        Dist::UniformInt => {
            let mut r = rng(seed);
            Ok((0..n).map(|_| r.gen_range(0..1i64 << 32)).collect())
        }
        Dist::UniformFloat => Err(unsupported(dist, "add-i64")),
    }
}

pub fn gen_f64(n: usize, seed: u64, dist: Dist) -> Result<Vec<f64>, CliError> {
    match dist {
        Dist::Ramp => Ok((1..=n).map(|i| i as f64).collect()),
        Dist::UniformInt => {
            let mut r = rng(seed);
            Ok((0..n).map(|_| r.gen_range(0..1i64 << 32) as f64).collect())
        }
        Dist::UniformFloat => {
            let mut r = rng(seed);
            Ok((0..n).map(|_| r.gen::<f64>()).collect())
        }
    }
}

pub fn gen_affine(n: usize, seed: u64, dist: Dist) -> Result<Vec<Affine>, CliError> {
    match dist {
        // Identity scale, offset i: composition reduces to offset sums,
        // so the ramp stays checkable by hand.
        Dist::Ramp => Ok((1..=n)
            .map(|i| Affine {
                scale: 1.0,
                offset: i as f64,
            })
            .collect()),
        Dist::UniformInt => Err(unsupported(dist, "affine")),
        Dist::UniformFloat => {
            let mut r = rng(seed);
            Ok((0..n)
                .map(|_| Affine {
                    scale: r.gen_range(0.5..1.5),
                    offset: r.gen_range(-1.0..1.0),
                })
                .collect())
        }
    }
}

/// Generated keys always fit in `bits`: uniform draws are masked down,
/// ramps that would not fit are rejected.
pub fn gen_keys(n: usize, seed: u64, dist: Dist, bits: u32) -> Result<Vec<u32>, CliError> {
    let mask = (1u64 << bits) - 1;
    match dist {
        // Reversed so the generated case is not already sorted.
        Dist::Ramp => {
            if n as u64 > mask + 1 {
                return Err(CliError::Usage(format!(
                    "cannot generate {n} distinct keys under --bits {bits}"
                )));
            }
            Ok((0..n as u32).rev().collect())
        }
        Dist::UniformInt => {
            let mut r = rng(seed);
            Ok((0..n)
                .map(|_| (r.gen::<u32>() as u64 & mask) as u32)
                .collect())
        }
        Dist::UniformFloat => Err(unsupported(dist, "sort keys")),
    }
}
