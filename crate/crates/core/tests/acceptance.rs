//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.
//!
//! Reference values are either fixed constants (the double Eulerian table,
//! the symbolic inversion matrix) or computed here by independent
//! oracles: exhaustive enumeration, numeric LU determinants, bisection.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use permaspin::energy::Enumerator;
use permaspin::lowtemp::{
    comparison_row, ln_domain_wall_contribution, ln_uniform_contribution, lowtemp_z,
};
use permaspin::meanfield::{
    ln_mean_z_direct, ln_mean_z_factorized, mean_hamiltonian_completed, mean_hamiltonian_counts,
    CountVector, MeanFieldParams,
};
use permaspin::montecarlo::{config_histogram, total_variation};
use permaspin::transfer::{
    build_transfer, charpoly_factored_full, charpoly_factored_full_cd, charpoly_factored_inv, cubic_factor,
    discriminants, eig_closed_four, eig_closed_five, eig_numeric, free_energy_ring, lambda_star,
    ring_z, transfer_matrix, zero_field_f, zero_field_z_product, CubicFactor, MatrixMode, TransferParams,
};
use permaspin::{
    avoiders, brute_force_z, cddes_closed_form, enumerate, stat_gf, Graph, ModelParams,
    PermaspinSet, Permutation, StatisticKind,
};

// Pinned tolerances.
const TOL_ORACLE: f64 = 1e-10;
const TOL_CLASSICAL: f64 = 1e-12;
const TOL_SPECTRA: f64 = 1e-9;
const TOL_FIELD: f64 = 1e-12;
const TOL_DELTA2: f64 = 1e-9;
const TOL_LAMBDA_STAR: f64 = 1e-8;
const TOL_CHARPOLY: f64 = 1e-7;
const TOL_MEANFIELD: f64 = 1e-9;
const TOL_LOWTEMP_CLASS: f64 = 1e-10;
const TOL_LOWTEMP_RATIO: f64 = 0.01;
const TOL_TV: f64 = 0.02;

type Outcome = Result<String, String>;

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn s3() -> PermaspinSet {
    enumerate(3).unwrap()
}

fn s3_avoiding(patterns: &[&str]) -> PermaspinSet {
    let pats: Vec<Permutation> = patterns.iter().map(|p| perm(p)).collect();
    avoiders(3, &pats).unwrap()
}

fn within_time(elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed <= limit {
        Ok(String::new())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

/// Reference double Eulerian polynomials, coefficients by degree.
fn table_one(n: usize) -> Vec<i64> {
    match n {
        1 => vec![1],
        2 => vec![1, 0, 1],
        3 => vec![1, 0, 4, 0, 1],
        4 => vec![1, 0, 10, 2, 10, 0, 1],
        5 => vec![1, 0, 20, 12, 54, 12, 20, 0, 1],
        6 => vec![1, 0, 35, 42, 212, 140, 212, 42, 35, 0, 1],
        _ => unreachable!(),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 1..=6 {
        let want: Vec<BigInt> = table_one(n).into_iter().map(BigInt::from).collect();
        let by_enum = stat_gf(StatisticKind::Destat, n).map_err(|e| e.to_string())?;
        let closed = cddes_closed_form(n).map_err(|e| e.to_string())?;
        if by_enum.coefficients() != want.as_slice() {
            return Err(format!("enumeration n={n}: {by_enum}"));
        }
        if closed.coefficients() != want.as_slice() {
            return Err(format!("closed form n={n}: {closed}"));
        }
    }
    within_time(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("n=1..6 exact, {:?}", start.elapsed()))
}

fn param_grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &beta in &[0.3, 1.0, 2.0] {
        for &(j, h) in &[(1.0, 0.0), (1.0, 0.7), (-0.5, 0.4), (2.0, -1.0)] {
            out.push((beta, j, h));
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let sets = [s3(), s3_avoiding(&["123"]), s3_avoiding(&["123", "321"])];
    let mut worst = 0.0f64;
    let mut checked = 0;
    for set in &sets {
        for n in 3..=5 {
            let g = Graph::ring(n).unwrap();
            for (beta, j, h) in param_grid() {
                let p = ModelParams::destat(beta, j, h).unwrap();
                let trace = ring_z(&transfer_matrix(set, &p).unwrap(), n, &p).unwrap();
                let brute = brute_force_z(&g, set, &p).unwrap();
                let rel = (trace.ln_z - brute.ln_z).exp_m1().abs();
                worst = worst.max(rel);
                checked += 1;
                if rel > TOL_ORACLE {
                    return Err(format!(
                        "{} n={n} beta={beta} J={j} H={h}: relative {rel:e}",
                        set.label()
                    ));
                }
            }
        }
    }
    within_time(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{checked} cases, worst relative {worst:.2e}, {:?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let set = enumerate(2).unwrap();
    let mut worst = 0.0f64;
    for &(beta, j) in &[(0.2, 1.0), (1.0, 1.0), (1.5, -0.7), (3.0, 0.4)] {
        let p = ModelParams::destat(beta, j, 0.0).unwrap();
        let bj = beta * j;
        for n in 3..=12 {
            let want = (2.0 * bj.cosh()).powi(n as i32) + (2.0 * bj.sinh()).powi(n as i32);
            let got = ring_z(&transfer_matrix(&set, &p).unwrap(), n, &p).unwrap().z;
            let rel = ((got - want) / want).abs();
            worst = worst.max(rel);
            if rel > TOL_CLASSICAL {
                return Err(format!("Z beta={beta} J={j} n={n}: {got} vs {want}"));
            }
        }
        let f_want = -(2.0 * bj.cosh()).ln() / beta;
        let f_ring = free_energy_ring(&set, &p).unwrap();
        let f_gf = zero_field_f(2, &p).unwrap();
        for f in [f_ring, f_gf] {
            let err = (f - f_want).abs();
            worst = worst.max(err);
            if err > TOL_CLASSICAL {
                return Err(format!("f beta={beta} J={j}: {f} vs {f_want}"));
            }
        }
    }
    Ok(format!("worst deviation {worst:.2e}"))
}

/// Sorted-multiset distance scaled by the spectral radius.
fn multiset_distance(mut x: Vec<f64>, mut y: Vec<f64>) -> f64 {
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    assert_eq!(x.len(), y.len());
    let scale = x.iter().chain(&y).fold(1.0f64, |m, v| m.max(v.abs()));
    x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
}

fn criterion_4() -> Outcome {
    let four = s3_avoiding(&["123", "321"]);
    let five = s3_avoiding(&["123"]);
    let mut worst = 0.0f64;
    for i in 1..=20 {
        for j in 1..=20 {
            let tp = TransferParams::new(0.1 * i as f64, 0.1 * j as f64).unwrap();
            for (set, closed) in [(&four, eig_closed_four(&tp)), (&five, eig_closed_five(&tp))] {
                let a = build_transfer(set, StatisticKind::Destat, MatrixMode::Numeric(tp)).unwrap();
                let numeric = eig_numeric(&a).unwrap();
                let dist = multiset_distance(closed.eigenvalues.clone(), numeric.eigenvalues.clone());
                worst = worst.max(dist);
                if dist > TOL_SPECTRA {
                    return Err(format!("{} a={} b={}: distance {dist:e}", set.label(), tp.a, tp.b));
                }
            }
            let a = build_transfer(&five, StatisticKind::Destat, MatrixMode::Numeric(tp)).unwrap();
            let top = eig_numeric(&a).unwrap().max();
            let l2 = permaspin::transfer::ClosedFive::new(&tp).l2;
            if (l2 - top).abs() > TOL_SPECTRA * top {
                return Err(format!("a={} b={}: lambda2={l2} but max={top}", tp.a, tp.b));
            }
        }
    }
    Ok(format!("400 grid points, worst scaled distance {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let set = s3_avoiding(&["123", "321"]);
    let mut worst_spread = 0.0f64;
    let mut worst_formula = 0.0f64;
    for &(beta, j) in &[(0.5f64, 1.0f64), (1.0, 1.0), (3.0, 0.5), (2.0, -0.8)] {
        let want = -j - 2.0 / beta * (1.0 + (-beta * j).exp()).ln();
        let fs: Vec<f64> = (0..=40)
            .map(|i| {
                let h = -2.0 + 0.1 * i as f64;
                free_energy_ring(&set, &ModelParams::destat(beta, j, h).unwrap()).unwrap()
            })
            .collect();
        let lo = fs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = fs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        worst_spread = worst_spread.max(hi - lo);
        let dev = fs.iter().map(|f| (f - want).abs()).fold(0.0, f64::max);
        worst_formula = worst_formula.max(dev);
        if hi - lo >= TOL_FIELD || dev > TOL_FIELD {
            return Err(format!(
                "beta={beta} J={j}: spread {:.2e}, deviation {dev:.2e}",
                hi - lo
            ));
        }
    }
    Ok(format!(
        "spread over H {worst_spread:.2e}, deviation from closed form {worst_formula:.2e}"
    ))
}

/// Largest root of a monic cubic by bisection to the right of its largest
/// critical point.
fn bisect_largest_root(cf: &CubicFactor) -> f64 {
    let t = |x: f64| ((x + cf.bp) * x + cf.cp) * x + cf.dp;
    let bound = 1.0 + cf.bp.abs().max(cf.cp.abs()).max(cf.dp.abs());
    // t'(x) = 3x² + 2Bx + C
    let disc = cf.bp * cf.bp - 3.0 * cf.cp;
    let mut lo = if disc >= 0.0 {
        (-cf.bp + disc.sqrt()) / 3.0
    } else {
        -bound
    };
    let mut hi = bound;
    if t(lo) > 0.0 {
        lo = -bound;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if t(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_6() -> Outcome {
    let steps = 40;
    let pts: Vec<f64> = (0..steps)
        .map(|i| 0.05 + (2.0 - 0.05) * i as f64 / (steps - 1) as f64)
        .collect();
    let mut max_d2 = f64::NEG_INFINITY;
    let mut min_d0 = f64::INFINITY;
    let mut worst_rel = 0.0f64;
    let mut min_gap = f64::INFINITY;
    let mut failures = Vec::new();
    for &c in &pts {
        for &d in &pts {
            let (cf, l4, l5) = cubic_factor(c, d);
            let dt = discriminants(&cf);
            max_d2 = max_d2.max(dt.d2);
            min_d0 = min_d0.min(dt.d0);
            let ls = lambda_star(c, d).value;
            let oracle = bisect_largest_root(&cf);
            let rel = ((ls - oracle) / oracle).abs();
            worst_rel = worst_rel.max(rel);
            min_gap = min_gap.min(ls - l4.max(l5));
            if dt.d0 < 0.0 || dt.d2 > TOL_DELTA2 || rel > TOL_LAMBDA_STAR || ls < l4.max(l5) {
                failures.push(format!(
                    "c={c:.4} d={d:.4}: d0={:.3e} d2={:.3e} rel={rel:.2e} gap={:.3e}",
                    dt.d0,
                    dt.d2,
                    ls - l4.max(l5)
                ));
            }
        }
    }
    let summary = format!(
        "min d0 {min_d0:.3e}, max d2 {max_d2:.3e}, worst lambda* relative {worst_rel:.2e}, \
         min lambda* - max(l4,l5) {min_gap:.3e}"
    );
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!(
            "{} of 1600 points fail; {summary}; first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

/// Reference inversion-statistic matrix, `(a exponent, b exponent)`.
const PRINTED_INV: [[(u32, u32); 6]; 6] = [
    [(0, 0), (1, 1), (1, 1), (2, 2), (2, 2), (3, 3)],
    [(1, 1), (2, 0), (2, 2), (3, 3), (3, 1), (4, 2)],
    [(1, 1), (2, 2), (2, 0), (3, 1), (3, 3), (4, 2)],
    [(2, 2), (3, 3), (3, 1), (4, 0), (4, 2), (5, 1)],
    [(2, 2), (3, 1), (3, 3), (4, 2), (4, 0), (5, 1)],
    [(3, 3), (4, 2), (4, 2), (5, 1), (5, 1), (6, 0)],
];

fn criterion_7() -> Outcome {
    let full = s3();
    let sym = build_transfer(&full, StatisticKind::Inv, MatrixMode::Symbolic).unwrap();
    for (r, row) in PRINTED_INV.iter().enumerate() {
        for (c, &want) in row.iter().enumerate() {
            if sym.monomial(r, c) != Some(want) {
                return Err(format!("inv matrix entry ({r},{c}): {:?} vs {want:?}", sym.monomial(r, c)));
            }
        }
    }
    type Printed = fn(f64, f64, f64) -> f64;
    let cases: [(&str, StatisticKind, Printed); 3] = [
        ("destat (a,b)", StatisticKind::Destat, charpoly_factored_full),
        ("destat (c,d)", StatisticKind::Destat, |a, b, l| {
            charpoly_factored_full_cd(a.powi(4), b * b, l)
        }),
        ("inv", StatisticKind::Inv, charpoly_factored_inv),
    ];
    let mut worst = 0.0f64;
    for i in 1..=10 {
        for j in 1..=10 {
            let tp = TransferParams::new(0.2 * i as f64, 0.2 * j as f64).unwrap();
            for (name, stat, factored) in cases {
                let m = build_transfer(&full, stat, MatrixMode::Numeric(tp)).unwrap();
                let a = m.numeric().unwrap().clone();
                let mu = eig_numeric(&m).unwrap().eigenvalues;
                let radius = mu.iter().fold(0.0f64, |x, v| x.max(v.abs())) + 1.0;
                for s in 0..10 {
                    let lambda = -radius + 2.0 * radius * (s as f64 + 0.5) / 10.0;
                    let det = (&a - DMatrix::identity(6, 6) * lambda).determinant();
                    let p = factored(tp.a, tp.b, lambda);
                    // |det(A − λI)| ≤ Π(|μᵢ| + |λ|)
                    let scale: f64 = mu.iter().map(|m| m.abs() + lambda.abs()).product();
                    let rel = (p - det).abs() / scale;
                    worst = worst.max(rel);
                    if rel > TOL_CHARPOLY {
                        return Err(format!(
                            "{name} a={} b={} lambda={lambda}: factored {p} vs det {det}",
                            tp.a, tp.b
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("inv matrix matches; 3000 evaluations, worst scaled error {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for q in [2, 4] {
            for &(beta, j, h) in &[(1.0, 1.0, 0.0), (1.0, 1.0, 0.5), (0.5, 2.0, -1.0)] {
                let mp = MeanFieldParams::new(n, q, j, h, beta).unwrap();
                let fact = ln_mean_z_factorized(&mp).unwrap();
                let direct = ln_mean_z_direct(&mp).unwrap();
                let rel = (fact - direct).exp_m1().abs();
                worst = worst.max(rel);
                if rel > TOL_MEANFIELD {
                    return Err(format!("factorised vs direct n={n} q={q}: {rel:e}"));
                }
                if n <= 4 {
                    // every pair of sites bonded with strength qJ/(n−1)
                    let g = Graph::complete(n).unwrap();
                    let p = ModelParams::destat(beta, mp.pair_coupling(), h).unwrap();
                    let configs = brute_force_z(&g, &s3(), &p).unwrap().ln_z;
                    let rel = (fact - configs).exp_m1().abs();
                    worst = worst.max(rel);
                    if rel > TOL_MEANFIELD {
                        return Err(format!("factorised vs configurations n={n} q={q}: {rel:e}"));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut worst_sq = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=50usize);
        let mut counts = [0u32; 6];
        for _ in 0..n {
            counts[rng.gen_range(0..6)] += 1;
        }
        let cv = CountVector::new(counts);
        let mp = MeanFieldParams::new(
            n,
            rng.gen_range(1..=4),
            rng.gen_range(0.1..3.0),
            rng.gen_range(-2.0..2.0),
            1.0,
        )
        .unwrap();
        let a = mean_hamiltonian_counts(&cv, &mp).unwrap();
        let b = mean_hamiltonian_completed(&cv, &mp).unwrap();
        let rel = (a - b).abs() / a.abs().max(b.abs()).max(1.0);
        worst_sq = worst_sq.max(rel);
        if rel > TOL_MEANFIELD {
            return Err(format!("completed square {counts:?}: {a} vs {b}"));
        }
    }
    Ok(format!(
        "partition sums worst relative {worst:.2e}; completed square worst {worst_sq:.2e}"
    ))
}

fn criterion_9() -> Outcome {
    let set = s3();
    let mut worst = 0.0f64;
    for n in 3..=5 {
        let g = Graph::ring(n).unwrap();
        for &(beta, j, h) in &[(0.5, 1.0, 0.0), (1.0, 1.0, 0.6), (2.0, 0.7, -0.3), (0.8, -1.0, 1.2)] {
            let p = ModelParams::destat(beta, j, h).unwrap();
            let en = Enumerator::new(&g, &set, &p, 1 << 20).unwrap();
            let uniform = en.ln_partial_sum(|s| s.iter().all(|&x| x == s[0])).unwrap();
            let walls = en
                .ln_partial_sum(|s| (0..n).filter(|&i| s[i] != s[(i + 1) % n]).count() == 2)
                .unwrap();
            let u = ln_uniform_contribution(n, &p).unwrap();
            let w = ln_domain_wall_contribution(n, &p).unwrap();
            for (name, got, want) in [("uniform", u, uniform), ("two-wall", w, walls)] {
                let rel = (got - want).exp_m1().abs();
                worst = worst.max(rel);
                if rel > TOL_LOWTEMP_CLASS {
                    return Err(format!("{name} n={n} beta={beta} J={j} H={h}: {rel:e}"));
                }
            }
        }
    }
    let r = lowtemp_z(5, &ModelParams::destat(10.0, 1.0, 0.0).unwrap()).unwrap();
    let err = r.relative_log_error();
    if err > TOL_LOWTEMP_RATIO {
        return Err(format!("betaJ=10 relative log error {err:e}"));
    }
    Ok(format!("class sums worst relative {worst:.2e}; betaJ=10 log error {err:.2e}"))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let g = Graph::ring(3).unwrap();
    let set = s3();
    let p = ModelParams::destat(1.0, 1.0, 0.0).unwrap();
    let exact = permaspin::boltzmann_probabilities(&g, &set, &p).unwrap();
    let burn_in = 1_000;
    let counts = config_histogram(&g, &set, &p, 100_000 + burn_in, burn_in, 20_240_601, 1 << 20).unwrap();
    let tv = total_variation(&counts, &exact);
    within_time(start.elapsed(), Duration::from_secs(60))?;
    if tv > TOL_TV {
        return Err(format!("TV distance {tv:.4}"));
    }
    Ok(format!("TV distance {tv:.4} over {} bins, {:?}", exact.len(), start.elapsed()))
}

/// Recorded, not asserted: the zero-field product formula over the ring trace
/// for two-state spins. The ratio approaches `e^{βJ}/cosh βJ`, not 1; only the
/// per-site free energies agree.
fn record_product_ratio() -> String {
    let set = enumerate(2).expect("S2");
    let p = ModelParams::destat(1.0, 1.0, 0.0).expect("params");
    let a = transfer_matrix(&set, &p).expect("matrix");
    let ratios: Vec<String> = (3..=8)
        .map(|n| {
            let product = zero_field_z_product(2, n, &p).expect("product").ln_z;
            let ring = ring_z(&a, n, &p).expect("ring").ln_z;
            format!("n={n} {:.6}", (product - ring).exp())
        })
        .collect();
    format!("product/ring at betaJ=1: {}", ratios.join(", "))
}

/// Recorded, not asserted: which low-temperature prediction sits closer to
/// the exact ring free energy.
fn record_lowtemp_comparison() -> String {
    let mut cells = Vec::new();
    for beta in [2.0, 5.0, 10.0] {
        for h in [-1.0, 0.0, 1.0] {
            let p = ModelParams::destat(beta, 1.0, h).expect("params");
            let r = comparison_row(5, &p).expect("row");
            let (eu, el) = ((r.f_uniform - r.f_exact).abs(), (r.f_lambda4 - r.f_exact).abs());
            let closer = if eu <= el { "uniform" } else { "lambda4" };
            cells.push(format!("beta={beta} H={h}: {closer} ({eu:.1e} vs {el:.1e})"));
        }
    }
    cells.join("; ")
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("double Eulerian table", criterion_1),
        ("trace equals enumeration", criterion_2),
        ("classical two-state reduction", criterion_3),
        ("closed-form restricted spectra", criterion_4),
        ("field independence of the four-spin ring", criterion_5),
        ("cubic factor and largest root", criterion_6),
        ("characteristic polynomials", criterion_7),
        ("mean-field partition sums", criterion_8),
        ("low-temperature class sums", criterion_9),
        ("Metropolis against exact distribution", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("record       {}", record_product_ratio());
    println!("record       {}", record_lowtemp_comparison());
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
