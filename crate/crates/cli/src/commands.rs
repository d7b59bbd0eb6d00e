use std::error::Error;

use rayon::prelude::*;
use serde_json::{json, Value};

use permaspin::lowtemp::comparison_row;
use permaspin::meanfield::{mean_field_report, MeanFieldParams};
use permaspin::montecarlo::{sample_observables, time_series};
use permaspin::transfer::{
    build_transfer, cubic_factor, eig_closed_five, eig_closed_four, eig_numeric, lambda_star,
    ring_z, surface_grid, transfer_matrix, transfer_params, MatrixMode, SpectrumResult,
    SpectrumMethod,
};
use permaspin::{avoiders, cddes_closed_form, stat_gf, ModelParams, PermaspinSet, StatisticKind};

use crate::args::{Format, GraphSpec, ModelArgs, SetArgs};
use crate::output::{json_text, Cell, Table};

pub type CmdResult = Result<String, Box<dyn Error>>;

fn params(beta: f64, m: &ModelArgs, stat: StatisticKind) -> permaspin::Result<ModelParams> {
    ModelParams::new(beta, m.j, m.h, stat)
}

/// Runs `f` for every beta in parallel, keeping sweep order.
fn per_beta<T: Send>(
    betas: &[f64],
    f: impl Fn(f64) -> Result<T, permaspin::Error> + Sync,
) -> Result<Vec<T>, permaspin::Error> {
    betas.par_iter().map(|&b| f(b)).collect()
}

pub fn gf(k: usize, stat: StatisticKind, all: bool, format: Format) -> CmdResult {
    let mut table = Table::new(&["n", "stat", "polynomial", "coefficients"]);
    let first = if all { 1 } else { k };
    for n in first..=k {
        let poly = stat_gf(stat, n)?;
        if stat == StatisticKind::Destat && cddes_closed_form(n)? != poly {
            return Err(format!("closed form disagrees with enumeration at n={n}").into());
        }
        let coeffs: Vec<String> = poly.coefficients().iter().map(|c| c.to_string()).collect();
        table.push(vec![
            n.into(),
            stat.name().into(),
            poly.to_string().into(),
            coeffs.join(" ").into(),
        ]);
    }
    Ok(table.render(format))
}

pub fn exact(set_args: &SetArgs, n: usize, m: &ModelArgs, format: Format) -> CmdResult {
    let set = set_args.spin_set()?;
    let label = set.label();
    let rows = per_beta(&m.beta.values, |beta| {
        let p = params(beta, m, set_args.stat)?;
        let a = transfer_matrix(&set, &p)?;
        let z = ring_z(&a, n, &p)?;
        let top = eig_numeric(&a)?.max();
        let f = -(p.j + p.h) - top.ln() / beta;
        Ok(vec![
            Cell::from(beta),
            m.j.into(),
            m.h.into(),
            n.into(),
            label.as_str().into(),
            z.ln_z.into(),
            z.free_energy_density.into(),
            f.into(),
            top.into(),
        ])
    })?;
    let mut table = Table::new(&["beta", "J", "H", "n", "set", "ln_z", "f_n", "f", "lambda_max"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table.render(format))
}

/// Closed-form spectrum when one is known for this set and statistic.
fn closed_spectrum(set: &PermaspinSet, p: &ModelParams) -> permaspin::Result<Option<SpectrumResult>> {
    if p.stat != StatisticKind::Destat || set.k() != 3 {
        return Ok(None);
    }
    let tp = transfer_params(p, 3)?;
    let four = avoiders(3, &["123".parse()?, "321".parse()?])?;
    let five = avoiders(3, &["123".parse()?])?;
    Ok(if set.members() == four.members() {
        Some(eig_closed_four(&tp))
    } else if set.members() == five.members() {
        Some(eig_closed_five(&tp))
    } else if set.len() == 6 {
        let (c, d) = (tp.c(), tp.d());
        let (cf, l4, l5) = cubic_factor(c, d);
        let mut roots = cf.real_roots().to_vec();
        roots[0] = lambda_star(c, d).value;
        roots.extend([l4, l5, l5]);
        Some(SpectrumResult::new(roots, SpectrumMethod::CubicPlusLinear))
    } else {
        None
    })
}

fn max_difference(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub fn spectrum(set_args: &SetArgs, m: &ModelArgs, format: Format) -> CmdResult {
    let set = set_args.spin_set()?;
    let results = per_beta(&m.beta.values, |beta| {
        let p = params(beta, m, set_args.stat)?;
        let a = transfer_matrix(&set, &p)?;
        Ok((p, eig_numeric(&a)?, closed_spectrum(&set, &p)?))
    })?;
    match format {
        Format::Json => {
            let records: Vec<Value> = results
                .iter()
                .map(|(p, numeric, closed)| {
                    let mut v = json!({
                        "params": {
                            "beta": p.beta, "J": p.j, "H": p.h, "stat": p.stat.name(),
                            "k": set.k(), "set": set.label(),
                        },
                        "eigenvalues": numeric.eigenvalues,
                        "method": numeric.method.name(),
                    });
                    if let Some(c) = closed {
                        v["closed_form"] = json!({
                            "eigenvalues": c.eigenvalues,
                            "method": c.method.name(),
                            "max_abs_difference": max_difference(&c.eigenvalues, &numeric.eigenvalues),
                        });
                    }
                    v
                })
                .collect();
            Ok(json_text(&match records.len() {
                1 => records.into_iter().next().expect("one record"),
                _ => Value::Array(records),
            }))
        }
        Format::Csv => {
            let mut table = Table::new(&["beta", "J", "H", "set", "method", "index", "eigenvalue"]);
            for (p, numeric, closed) in &results {
                for s in std::iter::once(numeric).chain(closed) {
                    for (i, l) in s.eigenvalues.iter().enumerate() {
                        table.push(vec![
                            p.beta.into(),
                            p.j.into(),
                            p.h.into(),
                            set.label().into(),
                            s.method.name().into(),
                            i.into(),
                            (*l).into(),
                        ]);
                    }
                }
            }
            Ok(table.render(format))
        }
    }
}

pub fn surfaces(grid: usize, c_range: (f64, f64), d_range: (f64, f64), format: Format) -> CmdResult {
    let rows = surface_grid(c_range, d_range, grid)?;
    let mut table = Table::new(&[
        "c", "d", "lambda_star", "lambda4", "lambda5", "delta0", "delta1", "delta2", "fallback",
    ]);
    for r in rows {
        table.push(vec![
            r.c.into(),
            r.d.into(),
            r.lambda_star.into(),
            r.lambda4.into(),
            r.lambda5.into(),
            r.delta0.into(),
            r.delta1.into(),
            r.delta2.into(),
            r.fallback.into(),
        ]);
    }
    Ok(table.render(format))
}

pub fn meanfield(n: usize, q: u32, m: &ModelArgs, format: Format) -> CmdResult {
    let rows = per_beta(&m.beta.values, |beta| {
        let mp = MeanFieldParams::new(n, q, m.j, m.h, beta)?;
        let r = mean_field_report(&mp)?;
        Ok(vec![
            Cell::from(n),
            q.into(),
            beta.into(),
            m.j.into(),
            m.h.into(),
            r.ln_z_factorized.exp().into(),
            r.ln_z_direct.map(f64::exp).into(),
            r.ln_dominant_estimate.exp().into(),
            r.free_energy_density.into(),
            r.ln_z_factorized.into(),
        ])
    })?;
    let mut table = Table::new(&[
        "n",
        "q",
        "beta",
        "J",
        "H",
        "z_factorized",
        "z_direct",
        "dominant_estimate",
        "f",
        "ln_z_factorized",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table.render(format))
}

pub fn lowtemp(n: usize, m: &ModelArgs, format: Format) -> CmdResult {
    let rows = per_beta(&m.beta.values, |beta| {
        let r = comparison_row(n, &params(beta, m, StatisticKind::Destat)?)?;
        Ok(vec![
            Cell::from(r.n),
            r.beta.into(),
            r.j.into(),
            r.h.into(),
            r.z_uniform.into(),
            r.z_wall.into(),
            r.z_exact.into(),
            r.f_uniform.into(),
            r.f_lambda4.into(),
            r.f_exact.into(),
        ])
    })?;
    let mut table = Table::new(&[
        "n", "beta", "J", "H", "z_uniform", "z_wall", "z_exact", "f_uniform", "f_lambda4", "f_exact",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table.render(format))
}

pub struct McArgs<'a> {
    pub set: &'a SetArgs,
    pub model: &'a ModelArgs,
    pub graph: &'a GraphSpec,
    pub n: Option<usize>,
    pub seed: u64,
    pub sweeps: u64,
    pub burn_in: u64,
    pub series: bool,
}

pub fn mc(a: &McArgs, format: Format) -> CmdResult {
    let set = a.set.spin_set()?;
    let g = a.graph.build(a.n)?;
    if a.series {
        let beta = a.model.beta.values[0];
        let p = params(beta, a.model, a.set.stat)?;
        let samples = time_series(&g, &set, &p, a.sweeps, a.burn_in, a.seed)?;
        let mut table = Table::new(&["sweep", "energy", "order_parameter"]);
        for s in samples {
            table.push(vec![s.sweep.into(), s.energy.into(), s.order_parameter.into()]);
        }
        return Ok(table.render(format));
    }
    let reports = per_beta(&a.model.beta.values, |beta| {
        let p = params(beta, a.model, a.set.stat)?;
        sample_observables(&g, &set, &p, a.sweeps, a.burn_in, a.seed)
    })?;
    let mut table = Table::new(&[
        "beta",
        "J",
        "H",
        "n",
        "graph",
        "set",
        "seed",
        "sweeps",
        "burn_in",
        "energy_per_site",
        "energy_stderr",
        "order_parameter",
        "order_stderr",
        "acceptance",
    ]);
    for (beta, r) in a.model.beta.values.iter().zip(reports) {
        table.push(vec![
            (*beta).into(),
            a.model.j.into(),
            a.model.h.into(),
            g.vertex_count().into(),
            a.graph.label().into(),
            set.label().into(),
            r.seed.into(),
            r.sweeps.into(),
            r.burn_in.into(),
            r.energy_per_site.mean.into(),
            r.energy_per_site.stderr.into(),
            r.order_parameter.mean.into(),
            r.order_parameter.stderr.into(),
            r.acceptance_rate.into(),
        ]);
    }
    Ok(table.render(format))
}

/// Symbolic transfer matrix as `a^i b^j` strings, used by `spectrum --symbolic`.
pub fn symbolic(set_args: &SetArgs, format: Format) -> CmdResult {
    let set = set_args.spin_set()?;
    let a = build_transfer(&set, set_args.stat, MatrixMode::Symbolic)?;
    let mut table = Table::new(&["row", "col", "a_exponent", "b_exponent"]);
    for (i, r) in set.iter().enumerate() {
        for (j, c) in set.iter().enumerate() {
            let (ea, eb) = a.monomial(i, j).expect("symbolic mode");
            table.push(vec![r.to_string().into(), c.to_string().into(), ea.into(), eb.into()]);
        }
    }
    Ok(table.render(format))
}
