//! Self-check suite behind `tcu-scan verify`: a fast, deterministic
//! subset of the library's property tests, runnable on an installed
//! binary without the source tree. Prints one `ok` line per check;
//! returns the first failure as an error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcu_scan::cost::{fixed_scan_bounds, fixed_scan_time_bound, GENERAL_TILE_SLACK};
use tcu_scan::monoid::{sequential_scan, AffineCompose, F64Add, I64Add};
use tcu_scan::scan::floor_log;
use tcu_scan::{
    general_scan, matmul_scan, radix_sort, radix_sort_by_key, recursive_scan, Affine, TcuConfig,
};

pub struct VerifyOpts {
    pub quick: bool,
    pub s: Option<usize>,
    pub max_k: Option<u32>,
    pub seed: u64,
}

impl VerifyOpts {
    fn tile_dims(&self) -> Vec<usize> {
        self.s.map_or_else(|| vec![2, 3, 4, 8, 16], |s| vec![s])
    }
}

pub fn run(opts: &VerifyOpts) -> Result<(), String> {
    power_grid_agreement(opts)?;
    general_length_agreement(opts)?;
    float_drift(opts)?;
    affine_agreement(opts)?;
    sort_agreement(opts)?;
    latency_model(opts)?;
    println!("all checks passed");
    Ok(())
}

fn rng_for(opts: &VerifyOpts, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt)
}

fn random_ints(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    (0..n)
        .map(|_| rng.gen_range(-(1i64 << 40)..(1i64 << 40)))
        .collect()
}

fn fail(check: &str, detail: String) -> String {
    format!("{check}: {detail}")
}

/// Fixed-shape scans against the sequential fold, both drivers, with
/// every ledger figure inside its analytic bound.
fn power_grid_agreement(opts: &VerifyOpts) -> Result<(), String> {
    const CHECK: &str = "power-grid-agreement";
    let max_n = if opts.quick { 256 } else { 4096 };
    let reps = if opts.quick { 2 } else { 5 };
    let op = I64Add;
    let mut rng = rng_for(opts, 0x01);
    let mut cases = 0u64;
    for s in opts.tile_dims() {
        let config = TcuConfig::new(s, 3).map_err(|e| fail(CHECK, e.to_string()))?;
        let mut k = 0u32;
        while s.pow(k) <= max_n && opts.max_k.is_none_or(|cap| k <= cap) {
            let n = s.pow(k);
            for _ in 0..reps {
                let x = random_ints(&mut rng, n);
                let want = sequential_scan(&x, &op).map_err(|e| fail(CHECK, e.to_string()))?;
                let it = matmul_scan(&x, &config, &op).map_err(|e| fail(CHECK, e.to_string()))?;
                let rec =
                    recursive_scan(&x, &config, &op).map_err(|e| fail(CHECK, e.to_string()))?;
                if it.output != want {
                    return Err(fail(CHECK, format!("matmul_scan diverged at n={n} s={s}")));
                }
                if rec.output != it.output || rec.ledger != it.ledger {
                    return Err(fail(CHECK, format!("drivers disagree at n={n} s={s}")));
                }
                let expected_rounds = if k == 0 { 0 } else { 2 * k as u64 - 1 };
                if it.ledger.rounds != expected_rounds {
                    return Err(fail(
                        CHECK,
                        format!(
                            "rounds {} != {expected_rounds} at n={n} s={s}",
                            it.ledger.rounds
                        ),
                    ));
                }
                if k >= 1 {
                    let bounds = fixed_scan_bounds(n as u64, s as u64)
                        .map_err(|e| fail(CHECK, e.to_string()))?;
                    let time_bound = fixed_scan_time_bound(n as u64, s as u64, 3)
                        .map_err(|e| fail(CHECK, e.to_string()))?;
                    if it.ledger.chunk_mults > bounds.matmul_bound
                        || it.ledger.scalar_combines > bounds.work_bound
                        || it.ledger.sim_time > time_bound
                    {
                        return Err(fail(
                            CHECK,
                            format!("ledger exceeds a bound at n={n} s={s}: {:?}", it.ledger),
                        ));
                    }
                }
                cases += 1;
            }
            k += 1;
        }
    }
    println!("ok {CHECK} ({cases} cases)");
    Ok(())
}

/// Arbitrary-length integer scans against the fold, plus the tile budget.
fn general_length_agreement(opts: &VerifyOpts) -> Result<(), String> {
    const CHECK: &str = "general-length-agreement";
    let (cases, max_n) = if opts.quick {
        (50, 2000)
    } else {
        (200, 20_000)
    };
    let op = I64Add;
    let dims = opts.tile_dims();
    let mut rng = rng_for(opts, 0x02);
    for case in 0..cases {
        let n = rng.gen_range(1..=max_n);
        let s = dims[case % dims.len()];
        let config = TcuConfig::new(s, 0).map_err(|e| fail(CHECK, e.to_string()))?;
        let x = random_ints(&mut rng, n);
        let want = sequential_scan(&x, &op).map_err(|e| fail(CHECK, e.to_string()))?;
        let got = general_scan(&x, &config, &op).map_err(|e| fail(CHECK, e.to_string()))?;
        if got.output != want {
            return Err(fail(CHECK, format!("diverged at n={n} s={s}")));
        }
        let log = floor_log(n, s) as u64;
        let budget = (4 * n as u64).div_ceil((s * (s - 1)) as u64)
            + GENERAL_TILE_SLACK * s as u64 * log * log;
        if got.ledger.chunk_mults > budget {
            return Err(fail(
                CHECK,
                format!(
                    "chunk_mults {} > budget {budget} at n={n} s={s}",
                    got.ledger.chunk_mults
                ),
            ));
        }
    }
    println!("ok {CHECK} ({cases} cases)");
    Ok(())
}

/// Float scans stay within relative 1e-10 of the fold.
fn float_drift(opts: &VerifyOpts) -> Result<(), String> {
    const CHECK: &str = "float-drift";
    let cases = if opts.quick { 10 } else { 50 };
    let op = F64Add;
    let dims = opts.tile_dims();
    let mut rng = rng_for(opts, 0x03);
    for case in 0..cases {
        let n = rng.gen_range(1..=20_000);
        let s = dims[case % dims.len()];
        let config = TcuConfig::new(s, 0).map_err(|e| fail(CHECK, e.to_string()))?;
        let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let want = sequential_scan(&x, &op).map_err(|e| fail(CHECK, e.to_string()))?;
        let got = general_scan(&x, &config, &op).map_err(|e| fail(CHECK, e.to_string()))?;
        for (i, (g, w)) in got.output.iter().zip(&want).enumerate() {
            if (g - w).abs() > 1e-10 * g.abs().max(w.abs()).max(1.0) {
                return Err(fail(
                    CHECK,
                    format!("drift at n={n} s={s} index {i}: {g} vs {w}"),
                ));
            }
        }
    }
    println!("ok {CHECK} ({cases} cases)");
    Ok(())
}

/// A non-commutative operator catches operand-order mistakes that
/// addition cannot see.
fn affine_agreement(opts: &VerifyOpts) -> Result<(), String> {
    const CHECK: &str = "affine-agreement";
    let cases = if opts.quick { 10 } else { 30 };
    let op = AffineCompose;
    let dims = opts.tile_dims();
    let mut rng = rng_for(opts, 0x04);
    for case in 0..cases {
        let n = rng.gen_range(1..=512);
        let s = dims[case % dims.len()];
        let config = TcuConfig::new(s, 0).map_err(|e| fail(CHECK, e.to_string()))?;
        let x: Vec<Affine> = (0..n)
            .map(|_| Affine {
                scale: rng.gen_range(0.5..1.5),
                offset: rng.gen_range(-1.0..1.0),
            })
            .collect();
        let want = sequential_scan(&x, &op).map_err(|e| fail(CHECK, e.to_string()))?;
        let got = general_scan(&x, &config, &op).map_err(|e| fail(CHECK, e.to_string()))?;
        for (i, (g, w)) in got.output.iter().zip(&want).enumerate() {
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
            if !close(g.scale, w.scale) || !close(g.offset, w.offset) {
                return Err(fail(
                    CHECK,
                    format!("composition drift at n={n} s={s} index {i}"),
                ));
            }
        }
    }
    println!("ok {CHECK} ({cases} cases)");
    Ok(())
}

/// Radix sort against the standard sort, including stability.
fn sort_agreement(opts: &VerifyOpts) -> Result<(), String> {
    const CHECK: &str = "sort-agreement";
    let n = if opts.quick { 500 } else { 2000 };
    let s = opts.s.unwrap_or(4);
    let config = TcuConfig::new(s, 0).map_err(|e| fail(CHECK, e.to_string()))?;
    let mut rng = rng_for(opts, 0x05);

    let keys: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1 << 16)).collect();
    let mut want = keys.clone();
    want.sort_unstable();
    let got = radix_sort(&keys, &config, 16).map_err(|e| fail(CHECK, e.to_string()))?;
    if got.keys != want {
        return Err(fail(
            CHECK,
            format!("sorted output diverged at n={n} s={s}"),
        ));
    }

    let pairs: Vec<(u32, u32)> = (0..300u32).map(|i| (rng.gen_range(0..1 << 6), i)).collect();
    let mut stable = pairs.clone();
    stable.sort_by_key(|p| p.0);
    let (sorted, _) =
        radix_sort_by_key(&pairs, |p| p.0, &config, 6).map_err(|e| fail(CHECK, e.to_string()))?;
    if sorted != stable {
        return Err(fail(
            CHECK,
            "duplicate keys lost their input order".to_string(),
        ));
    }
    println!("ok {CHECK} ({n} keys + stability)");
    Ok(())
}

/// Simulated time moves with latency exactly as the invocation count says.
fn latency_model(opts: &VerifyOpts) -> Result<(), String> {
    const CHECK: &str = "latency-model";
    let op = I64Add;
    let s = opts.tile_dims()[0];
    let k = opts.max_k.unwrap_or(3).clamp(1, 3);
    let n = s.pow(k);
    let x = random_ints(&mut rng_for(opts, 0x06), n);
    for ell in [0u64, 7] {
        let base = matmul_scan(
            &x,
            &TcuConfig::new(s, ell).map_err(|e| fail(CHECK, e.to_string()))?,
            &op,
        )
        .map_err(|e| fail(CHECK, e.to_string()))?;
        let doubled = matmul_scan(
            &x,
            &TcuConfig::new(s, 2 * ell).map_err(|e| fail(CHECK, e.to_string()))?,
            &op,
        )
        .map_err(|e| fail(CHECK, e.to_string()))?;
        let delta = doubled.ledger.sim_time - base.ledger.sim_time;
        let expected = (2 * k as u64 - 1) * ell;
        if delta != expected {
            return Err(fail(
                CHECK,
                format!("latency delta {delta} != {expected} at n={n} s={s} ell={ell}"),
            ));
        }
    }
    println!("ok {CHECK} (n={n} s={s})");
    Ok(())
}
