//! Low-temperature approximations for the `k = 3` destat ring: the two
//! configuration classes that dominate `Z` at large `β` (all spins equal,
//! and exactly two domain walls), plus the two competing free-energy
//! predictions.
//!
//! Everything is evaluated in log space; the `z_*` fields are `exp` of the
//! logs and overflow to infinity for large `nβ`.

use serde::Serialize;

use crate::energy::ModelParams;
use crate::error::{Error, Result};
use crate::perm::{enumerate, StatisticKind};
use crate::transfer::{free_energy_ring, ring_z, transfer_matrix, transfer_params};

/// `ln Σ exp(xᵢ)`.
fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn check_destat(p: &ModelParams) -> Result<()> {
    p.validate()?;
    if p.stat != StatisticKind::Destat {
        return Err(Error::InvalidParameter(format!(
            "low-temperature sums are for destat, got {}",
            p.stat
        )));
    }
    Ok(())
}

/// `ln[e^{nβJ}(e^{−nβH} + 4 + e^{nβH})]`.
pub fn ln_uniform_contribution(n: usize, p: &ModelParams) -> Result<f64> {
    check_destat(p)?;
    let bh = n as f64 * p.beta * p.h;
    let four = 4f64.ln();
    Ok(n as f64 * p.beta * p.j + log_sum_exp(&[-bh, four, bh]))
}

/// Sum over the six configurations with every spin equal.
pub fn uniform_contribution(n: usize, p: &ModelParams) -> Result<f64> {
    Ok(ln_uniform_contribution(n, p)?.exp())
}

/// Log of the bracketed two-wall sum, term by term.
fn wall_bracket_terms(n: usize, p: &ModelParams) -> Vec<f64> {
    let (bj, bh) = (p.beta * p.j, p.beta * p.h);
    let m = (n - 1) as f64;
    let mut terms = vec![(8.0 * m).ln(), (4.0 * m).ln() - 2.0 * bj];
    for k in 1..n {
        let k = k as f64;
        terms.push(8f64.ln() + k * bh);
        terms.push(8f64.ln() - k * bh);
        terms.push(2f64.ln() - 2.0 * bj + (n as f64 - 2.0 * k) * bh);
    }
    terms
}

/// `ln[(n e^{βJ(n−2)}/2)·bracket]` for the configurations with two domain walls.
pub fn ln_domain_wall_contribution(n: usize, p: &ModelParams) -> Result<f64> {
    check_destat(p)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("domain walls need n >= 2, got {n}")));
    }
    let prefactor = (n as f64 / 2.0).ln() + p.beta * p.j * (n as f64 - 2.0);
    Ok(prefactor + log_sum_exp(&wall_bracket_terms(n, p)))
}

/// Sum over ring configurations made of two arcs of constant spin.
///
/// Each such configuration appears twice in the sum over (arc start, arc
/// length, spin pair), which the `n/2` prefactor compensates.
pub fn domain_wall_contribution(n: usize, p: &ModelParams) -> Result<f64> {
    Ok(ln_domain_wall_contribution(n, p)?.exp())
}

/// The `π = 123` summand of the two-wall bracket at arc length `k`:
/// `4e^{(n−k)βH} + e^{−2βJ + (n−2k)βH}`.
pub fn wall_term_identity(n: usize, k: usize, p: &ModelParams) -> f64 {
    let (bj, bh) = (p.beta * p.j, p.beta * p.h);
    let (n, k) = (n as f64, k as f64);
    4.0 * ((n - k) * bh).exp() + (-2.0 * bj + (n - 2.0 * k) * bh).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldCase {
    Zero,
    Positive,
    Negative,
}

impl FieldCase {
    pub fn of(h: f64) -> Self {
        if h > 0.0 {
            FieldCase::Positive
        } else if h < 0.0 {
            FieldCase::Negative
        } else {
            FieldCase::Zero
        }
    }
}

/// Class sums, their dominant-term combination and the exact ring value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowTempReport {
    pub n: usize,
    pub z_uniform: f64,
    pub z_domain_wall: f64,
    pub z_approx: f64,
    pub z_exact: f64,
    pub ln_z_uniform: f64,
    pub ln_z_domain_wall: f64,
    pub ln_z_approx: f64,
    pub ln_z_exact: f64,
    /// `ln z_exact / ln z_approx`.
    pub ln_ratio: f64,
    pub field_case: FieldCase,
}

impl LowTempReport {
    /// `|ln z_approx − ln z_exact| / |ln z_exact|`.
    pub fn relative_log_error(&self) -> f64 {
        (self.ln_z_approx - self.ln_z_exact).abs() / self.ln_z_exact.abs()
    }
}

/// `ln` of the dominant terms for the given field sign.
///
/// At `H = 0` both classes are kept in full. For `H ≠ 0` only the terms the
/// approximation keeps survive: `e^{nβJ}(4 + e^{n|βH|})` from the uniform
/// class and `(n e^{βJ(n−2)}/2)((8 + 4e^{−2βJ})(n−1) + 8e^{(n−1)|βH|}
/// + 2e^{−2βJ}e^{(n−2)|βH|})` from the two-wall class.
pub fn ln_z_approx(n: usize, p: &ModelParams) -> Result<f64> {
    check_destat(p)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    let case = FieldCase::of(p.h);
    if case == FieldCase::Zero {
        return Ok(log_sum_exp(&[
            ln_uniform_contribution(n, p)?,
            ln_domain_wall_contribution(n, p)?,
        ]));
    }
    let (bj, bh) = (p.beta * p.j, (p.beta * p.h).abs());
    let nf = n as f64;
    let case1 = nf * bj + log_sum_exp(&[4f64.ln(), nf * bh]);
    let bracket = log_sum_exp(&[
        (8.0 * (nf - 1.0)).ln(),
        (4.0 * (nf - 1.0)).ln() - 2.0 * bj,
        8f64.ln() + (nf - 1.0) * bh,
        2f64.ln() - 2.0 * bj + (nf - 2.0) * bh,
    ]);
    let case2 = (nf / 2.0).ln() + bj * (nf - 2.0) + bracket;
    Ok(log_sum_exp(&[case1, case2]))
}

/// Class sums and approximation compared with the exact ring `Z` (`n ≥ 3`).
pub fn lowtemp_z(n: usize, p: &ModelParams) -> Result<LowTempReport> {
    check_destat(p)?;
    let ln_u = ln_uniform_contribution(n, p)?;
    let ln_w = ln_domain_wall_contribution(n, p)?;
    let ln_a = ln_z_approx(n, p)?;
    let set = enumerate(3)?;
    let exact = ring_z(&transfer_matrix(&set, p)?, n, p)?;
    Ok(LowTempReport {
        n,
        z_uniform: ln_u.exp(),
        z_domain_wall: ln_w.exp(),
        z_approx: ln_a.exp(),
        z_exact: exact.z,
        ln_z_uniform: ln_u,
        ln_z_domain_wall: ln_w,
        ln_z_approx: ln_a,
        ln_z_exact: exact.ln_z,
        ln_ratio: exact.ln_z / ln_a,
        field_case: FieldCase::of(p.h),
    })
}

/// The two low-temperature free-energy predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeEnergyVariants {
    /// `−(J + |H|)`, from the dominant uniform configuration.
    pub f_uniform: f64,
    /// `−(J+H) − (1/β) ln λ₄` with `λ₄ = c(1−d)²`.
    pub f_lambda4: f64,
    /// The same prediction with `b = e^{−βJ}` in place of `e^{−2βJ/s_max}`
    /// and the field sign reversed: `−(J−H) − (2/β) ln(1 − e^{−2βJ})`.
    pub f_lambda4_alt: f64,
}

/// Meant for large `β` (roughly `βJ ≥ 5`); evaluated for any valid `β`.
pub fn lowtemp_f_variants(p: &ModelParams) -> Result<FreeEnergyVariants> {
    check_destat(p)?;
    let tp = transfer_params(p, 3)?;
    let (c, d) = (tp.c(), tp.d());
    let lambda4 = c * (1.0 - d) * (1.0 - d);
    if lambda4 <= 0.0 {
        return Err(Error::NonPositiveEigenvalue(lambda4));
    }
    Ok(FreeEnergyVariants {
        f_uniform: -(p.j + p.h.abs()),
        f_lambda4: -(p.j + p.h) - lambda4.ln() / p.beta,
        f_lambda4_alt: -(p.j - p.h) - 2.0 / p.beta * (1.0 - (-2.0 * p.beta * p.j).exp()).ln(),
    })
}

/// One row of the approximation-versus-exact comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub beta: f64,
    pub j: f64,
    pub h: f64,
    pub z_uniform: f64,
    pub z_wall: f64,
    pub z_exact: f64,
    pub f_uniform: f64,
    pub f_lambda4: f64,
    pub f_exact: f64,
}

pub fn comparison_row(n: usize, p: &ModelParams) -> Result<ComparisonRow> {
    let r = lowtemp_z(n, p)?;
    let fv = lowtemp_f_variants(p)?;
    let f_exact = free_energy_ring(&enumerate(3)?, p)?;
    Ok(ComparisonRow {
        n,
        beta: p.beta,
        j: p.j,
        h: p.h,
        z_uniform: r.z_uniform,
        z_wall: r.z_domain_wall,
        z_exact: r.z_exact,
        f_uniform: fv.f_uniform,
        f_lambda4: fv.f_lambda4,
        f_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom2(n: usize) -> f64 {
        (n * (n - 1) / 2) as f64
    }

    #[test]
    fn uniform_examples() {
        let p = ModelParams::destat(1.0, 1.0, 1.0).unwrap();
        let e = 1f64.exp();
        let want = e.powi(3) * (e.powi(-3) + 4.0 + e.powi(3));
        assert!((uniform_contribution(3, &p).unwrap() - want).abs() < 1e-12 * want);
        let p = ModelParams::destat(0.7, 1.3, 0.0).unwrap();
        let want = 6.0 * (5.0 * 0.7 * 1.3f64).exp();
        assert!((uniform_contribution(5, &p).unwrap() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn zero_field_specialisations() {
        for n in 2..=9 {
            for &(beta, j) in &[(0.3, 1.0), (1.0, 2.0), (2.5, 0.4)] {
                let p = ModelParams::destat(beta, j, 0.0).unwrap();
                let bj = beta * j;
                let wall = 6.0 * binom2(n) * (bj * (n as f64 - 2.0)).exp() * (4.0 + (-2.0 * bj).exp());
                let got = domain_wall_contribution(n, &p).unwrap();
                assert!((got - wall).abs() <= 1e-12 * wall, "n={n}");
                let combined = (n as f64 * bj).exp()
                    * (6.0 + 24.0 * binom2(n) * (-2.0 * bj).exp() + 6.0 * binom2(n) * (-4.0 * bj).exp());
                let approx = ln_z_approx(n, &p).unwrap().exp();
                assert!((approx - combined).abs() <= 1e-12 * combined, "n={n}");
            }
        }
    }

    #[test]
    fn two_sites_reduce_to_single_arc_length() {
        let p = ModelParams::destat(0.8, 1.1, 0.6).unwrap();
        let (bj, bh): (f64, f64) = (0.8 * 1.1, 0.8 * 0.6);
        let bracket = 8.0 + 4.0 * (-2.0 * bj).exp() + 8.0 * (bh.exp() + (-bh).exp()) + 2.0 * (-2.0 * bj).exp();
        let got = domain_wall_contribution(2, &p).unwrap();
        assert!((got - bracket).abs() < 1e-12 * bracket);
    }

    #[test]
    fn positive_field_approximation() {
        let p = ModelParams::destat(1.0, 1.0, 0.5).unwrap();
        let n = 6;
        let nf = n as f64;
        let e = |x: f64| x.exp();
        let case1 = e(nf) * (4.0 + e(nf * 0.5));
        let case2 = nf * e(nf - 2.0) / 2.0
            * ((8.0 + 4.0 * e(-2.0)) * (nf - 1.0) + 8.0 * e((nf - 1.0) * 0.5) + 2.0 * e(-2.0) * e((nf - 2.0) * 0.5));
        let got = ln_z_approx(n, &p).unwrap().exp();
        assert!((got - (case1 + case2)).abs() < 1e-12 * got);
        let neg = ModelParams::destat(1.0, 1.0, -0.5).unwrap();
        assert!((ln_z_approx(n, &neg).unwrap() - got.ln()).abs() < 1e-12);
    }

    #[test]
    fn large_beta_ratio() {
        let p = ModelParams::destat(5.0, 1.0, 0.0).unwrap();
        let r = lowtemp_z(5, &p).unwrap();
        assert!((0.99..=1.01).contains(&r.ln_ratio), "{}", r.ln_ratio);
        assert_eq!(r.field_case, FieldCase::Zero);
        assert!(r.z_uniform > 0.0 && r.z_domain_wall > 0.0 && r.z_approx <= r.z_exact);
    }

    #[test]
    fn free_energy_variants() {
        let p = ModelParams::destat(10.0, 1.0, 0.0).unwrap();
        let fv = lowtemp_f_variants(&p).unwrap();
        assert_eq!(fv.f_uniform, -1.0);
        let want = -1.0 - 0.2 * (1.0 - (-10f64).exp()).ln();
        assert!((fv.f_lambda4 - want).abs() < 1e-12);
        assert!(fv.f_lambda4 > -1.0);
        let p = ModelParams::destat(10.0, 1.0, -0.7).unwrap();
        assert!((lowtemp_f_variants(&p).unwrap().f_uniform + 1.7).abs() < 1e-15);
    }

    #[test]
    fn rejects_other_statistics() {
        let p = ModelParams::new(1.0, 1.0, 0.0, StatisticKind::Inv).unwrap();
        assert!(uniform_contribution(3, &p).is_err());
    }
}
