//! Oracle cross-checks runnable from the command line. `--quick` keeps every
//! enumeration at `n <= 4`.

use permaspin::energy::Enumerator;
use permaspin::lowtemp::{ln_domain_wall_contribution, ln_uniform_contribution};
use permaspin::meanfield::{ln_mean_z_direct, ln_mean_z_factorized, MeanFieldParams};
use permaspin::montecarlo::{config_histogram, total_variation, Metropolis};
use permaspin::transfer::{
    build_transfer, charpoly_factored_full, charpoly_factored_inv, cubic_factor, discriminants,
    eig_closed_five, eig_closed_four, eig_numeric, free_energy_ring, lambda_star, max_real_root,
    ring_z, transfer_matrix, MatrixMode, TransferParams,
};
use permaspin::{
    avoiders, boltzmann_probabilities, brute_force_z, cddes_closed_form, enumerate, stat_gf, Graph,
    ModelParams, PermaspinSet, StatisticKind,
};

type Check = Result<String, String>;

fn err(e: permaspin::Error) -> String {
    e.to_string()
}

fn restricted(patterns: &[&str]) -> Result<PermaspinSet, String> {
    let pats = patterns
        .iter()
        .map(|p| p.parse())
        .collect::<permaspin::Result<Vec<_>>>()
        .map_err(err)?;
    avoiders(3, &pats).map_err(err)
}

fn double_eulerian(max_n: usize) -> Check {
    for n in 1..=max_n {
        let e = stat_gf(StatisticKind::Destat, n).map_err(err)?;
        let c = cddes_closed_form(n).map_err(err)?;
        if e != c {
            return Err(format!("n={n}: {e} vs {c}"));
        }
    }
    Ok(format!("n=1..{max_n}"))
}

fn trace_vs_enumeration(max_n: usize) -> Check {
    let sets = [
        enumerate(3).map_err(err)?,
        restricted(&["123"])?,
        restricted(&["123", "321"])?,
    ];
    let mut worst = 0.0f64;
    for set in &sets {
        for n in 3..=max_n {
            let g = Graph::ring(n).map_err(err)?;
            for &(beta, j, h) in &[(0.4, 1.0, 0.0), (1.0, 1.0, 0.7), (2.0, -0.5, -0.3)] {
                let p = ModelParams::destat(beta, j, h).map_err(err)?;
                let t = ring_z(&transfer_matrix(set, &p).map_err(err)?, n, &p).map_err(err)?;
                let b = brute_force_z(&g, set, &p).map_err(err)?;
                let rel = (t.ln_z - b.ln_z).exp_m1().abs();
                worst = worst.max(rel);
                if rel > 1e-10 {
                    return Err(format!("{} n={n}: {rel:e}", set.label()));
                }
            }
        }
    }
    Ok(format!("worst relative {worst:.2e}"))
}

fn classical() -> Check {
    let set = enumerate(2).map_err(err)?;
    for &(beta, j) in &[(0.5f64, 1.0f64), (2.0, -0.3)] {
        let p = ModelParams::destat(beta, j, 0.0).map_err(err)?;
        let want = -(2.0 * (beta * j).cosh()).ln() / beta;
        let f = free_energy_ring(&set, &p).map_err(err)?;
        if (f - want).abs() > 1e-12 {
            return Err(format!("beta={beta} J={j}: {f} vs {want}"));
        }
    }
    Ok("f = -ln(2 cosh betaJ)/beta".into())
}

fn closed_forms(steps: usize) -> Check {
    let four = restricted(&["123", "321"])?;
    let five = restricted(&["123"])?;
    let mut worst = 0.0f64;
    for i in 1..=steps {
        for j in 1..=steps {
            let tp = TransferParams::new(2.0 * i as f64 / steps as f64, 2.0 * j as f64 / steps as f64)
                .map_err(err)?;
            for (set, closed) in [(&four, eig_closed_four(&tp)), (&five, eig_closed_five(&tp))] {
                let a = build_transfer(set, StatisticKind::Destat, MatrixMode::Numeric(tp)).map_err(err)?;
                let numeric = eig_numeric(&a).map_err(err)?;
                let scale = numeric.max().abs().max(1.0);
                let d = closed
                    .eigenvalues
                    .iter()
                    .zip(&numeric.eigenvalues)
                    .map(|(x, y)| (x - y).abs() / scale)
                    .fold(0.0, f64::max);
                worst = worst.max(d);
                if d > 1e-9 {
                    return Err(format!("{} a={} b={}: {d:e}", set.label(), tp.a, tp.b));
                }
            }
        }
    }
    Ok(format!("{steps}x{steps} grid, worst {worst:.2e}"))
}

fn field_independence() -> Check {
    let set = restricted(&["123", "321"])?;
    let (beta, j) = (1.3f64, 0.9f64);
    let want = -j - 2.0 / beta * (1.0 + (-beta * j).exp()).ln();
    for i in 0..=8 {
        let h = -2.0 + 0.5 * i as f64;
        let f = free_energy_ring(&set, &ModelParams::destat(beta, j, h).map_err(err)?).map_err(err)?;
        if (f - want).abs() > 1e-12 {
            return Err(format!("H={h}: {f} vs {want}"));
        }
    }
    Ok("f independent of H".into())
}

fn cubic(steps: usize) -> Check {
    let mut worst = 0.0f64;
    for i in 0..steps {
        for j in 0..steps {
            let c = 0.05 + 1.95 * i as f64 / (steps - 1) as f64;
            let d = 0.05 + 1.95 * j as f64 / (steps - 1) as f64;
            let (cf, l4, l5) = cubic_factor(c, d);
            let dt = discriminants(&cf);
            let ls = lambda_star(c, d).value;
            let newton = max_real_root(&cf);
            let rel = ((ls - newton) / newton).abs();
            worst = worst.max(rel);
            if dt.d0 < 0.0 || dt.d2 > 1e-9 || rel > 1e-8 || ls < l4.max(l5) {
                return Err(format!("c={c} d={d}: d0={} d2={} rel={rel:e}", dt.d0, dt.d2));
            }
        }
    }
    Ok(format!("{steps}x{steps} grid, worst {worst:.2e}"))
}

fn charpolys() -> Check {
    let full = enumerate(3).map_err(err)?;
    let mut worst = 0.0f64;
    for &(a, b) in &[(0.4, 1.3), (1.0, 0.6), (1.7, 1.9)] {
        let tp = TransferParams::new(a, b).map_err(err)?;
        for (stat, f) in [
            (StatisticKind::Destat, charpoly_factored_full as fn(f64, f64, f64) -> f64),
            (StatisticKind::Inv, charpoly_factored_inv),
        ] {
            let m = build_transfer(&full, stat, MatrixMode::Numeric(tp)).map_err(err)?;
            let mu = eig_numeric(&m).map_err(err)?.eigenvalues;
            for &lambda in &[-1.5, 0.3, 2.2] {
                let mut shifted = m.numeric().map_err(err)?.clone();
                for i in 0..6 {
                    shifted[(i, i)] -= lambda;
                }
                let det = shifted.determinant();
                let scale: f64 = mu.iter().map(|x| x.abs() + f64::abs(lambda)).product();
                let rel = (f(a, b, lambda) - det).abs() / scale;
                worst = worst.max(rel);
                if rel > 1e-7 {
                    return Err(format!("{stat} a={a} b={b} lambda={lambda}: {rel:e}"));
                }
            }
        }
    }
    Ok(format!("worst {worst:.2e}"))
}

fn mean_field(max_n: usize) -> Check {
    let s3 = enumerate(3).map_err(err)?;
    for n in 2..=max_n {
        for &(q, beta, j, h) in &[(2, 1.0, 1.0, 0.0), (4, 0.5, 2.0, -1.0)] {
            let mp = MeanFieldParams::new(n, q, j, h, beta).map_err(err)?;
            let f = ln_mean_z_factorized(&mp).map_err(err)?;
            let d = ln_mean_z_direct(&mp).map_err(err)?;
            let p = ModelParams::destat(beta, mp.pair_coupling(), h).map_err(err)?;
            let c = brute_force_z(&Graph::complete(n).map_err(err)?, &s3, &p).map_err(err)?.ln_z;
            for (name, other) in [("direct", d), ("configurations", c)] {
                let rel = (f - other).exp_m1().abs();
                if rel > 1e-9 {
                    return Err(format!("n={n} q={q} {name}: {rel:e}"));
                }
            }
        }
    }
    Ok(format!("n=2..{max_n}"))
}

fn low_temperature(max_n: usize) -> Check {
    let set = enumerate(3).map_err(err)?;
    for n in 3..=max_n {
        let g = Graph::ring(n).map_err(err)?;
        let p = ModelParams::destat(1.1, 0.8, 0.4).map_err(err)?;
        let en = Enumerator::new(&g, &set, &p, 1 << 20).map_err(err)?;
        let uniform = en.ln_partial_sum(|s| s.iter().all(|&x| x == s[0])).ok_or("empty")?;
        let walls = en
            .ln_partial_sum(|s| (0..n).filter(|&i| s[i] != s[(i + 1) % n]).count() == 2)
            .ok_or("empty")?;
        let u = ln_uniform_contribution(n, &p).map_err(err)?;
        let w = ln_domain_wall_contribution(n, &p).map_err(err)?;
        if (u - uniform).abs() > 1e-10 || (w - walls).abs() > 1e-10 {
            return Err(format!("n={n}: uniform {u} vs {uniform}, walls {w} vs {walls}"));
        }
    }
    Ok(format!("n=3..{max_n}"))
}

fn monte_carlo(sweeps: u64, tolerance: f64) -> Check {
    let g = Graph::ring(3).map_err(err)?;
    let set = enumerate(3).map_err(err)?;
    let p = ModelParams::destat(1.0, 1.0, 0.0).map_err(err)?;
    let sampler = Metropolis::new(&g, &set, &p).map_err(err)?;
    let mut state = sampler.init(7);
    for _ in 0..1000 {
        sampler.sweep(&mut state);
        if (state.energy() - sampler.energy(state.spins())).abs() > 1e-9 {
            return Err("cached energy drifted".into());
        }
    }
    let exact = boltzmann_probabilities(&g, &set, &p).map_err(err)?;
    let counts = config_histogram(&g, &set, &p, sweeps + 1000, 1000, 20_240_601, 1 << 20).map_err(err)?;
    let tv = total_variation(&counts, &exact);
    if tv > tolerance {
        return Err(format!("TV distance {tv:.4} > {tolerance}"));
    }
    Ok(format!("TV distance {tv:.4} after {sweeps} sweeps"))
}

/// Runs every check, printing one line each; returns the number of failures.
pub fn run(quick: bool) -> usize {
    let max_n = if quick { 4 } else { 5 };
    let checks: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("double Eulerian polynomials", Box::new(move || double_eulerian(if quick { 6 } else { 8 }))),
        ("trace equals enumeration", Box::new(move || trace_vs_enumeration(max_n))),
        ("two-state reduction", Box::new(classical)),
        ("closed-form spectra", Box::new(move || closed_forms(if quick { 5 } else { 20 }))),
        ("field independence", Box::new(field_independence)),
        ("cubic factor", Box::new(move || cubic(if quick { 10 } else { 40 }))),
        ("characteristic polynomials", Box::new(charpolys)),
        ("mean-field sums", Box::new(move || mean_field(max_n))),
        ("low-temperature classes", Box::new(move || low_temperature(max_n))),
        (
            "Metropolis sampler",
            Box::new(move || {
                if quick {
                    monte_carlo(30_000, 0.06)
                } else {
                    monte_carlo(100_000, 0.02)
                }
            }),
        ),
    ];
    let mut failed = 0;
    for (name, check) in &checks {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    failed
}
