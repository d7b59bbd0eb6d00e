//! Mean-field `k = 3` destat model: every pair of sites interacts with
//! strength `qJ/(n−1)`, so the energy depends only on how many sites hold
//! each of the six spins.
//!
//! Species are ordered `123, 132, 213, 231, 312, 321`. The energy pairs them
//! as `123/321`, `132/231` and `213/312`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bound on the number of count vectors `C(n+5, 5)` visited by
/// [`mean_z_direct`].
pub const DIRECT_CAP: u64 = 10_000_000;

pub const SPECIES: [&str; 6] = ["123", "132", "213", "231", "312", "321"];

/// Index pairs whose count differences enter the energy; the first carries
/// the field.
pub const PAIRS: [(usize, usize); 3] = [(0, 5), (1, 3), (2, 4)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldParams {
    pub n: usize,
    pub q: u32,
    pub j: f64,
    pub h: f64,
    pub beta: f64,
}

impl MeanFieldParams {
    pub fn new(n: usize, q: u32, j: f64, h: f64, beta: f64) -> Result<Self> {
        let mp = MeanFieldParams { n, q, j, h, beta };
        mp.validate()?;
        Ok(mp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("mean field needs n >= 2, got {}", self.n)));
        }
        if self.q == 0 {
            return Err(Error::InvalidParameter("q must be at least 1".into()));
        }
        if !(self.j > 0.0 && self.j.is_finite()) {
            return Err(Error::InvalidParameter(format!("mean field needs J > 0, got {}", self.j)));
        }
        if !self.h.is_finite() {
            return Err(Error::InvalidParameter("H must be finite".into()));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        Ok(())
    }

    /// Pair coupling `qJ/(n−1)`.
    pub fn pair_coupling(&self) -> f64 {
        self.q as f64 * self.j / (self.n - 1) as f64
    }

    /// Shift `ℓ = H(n−1)/(qJ)` from completing the square.
    pub fn ell(&self) -> f64 {
        self.h * (self.n - 1) as f64 / (self.q as f64 * self.j)
    }

    /// `ln x` with `x = e^{βqJ/(2(n−1))}`.
    pub fn ln_x(&self) -> f64 {
        0.5 * self.beta * self.pair_coupling()
    }
}

/// Number of sites holding each spin, in [`SPECIES`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CountVector {
    pub counts: [u32; 6],
}

impl CountVector {
    pub fn new(counts: [u32; 6]) -> Self {
        CountVector { counts }
    }

    /// Counts of a configuration given as species indices.
    pub fn from_species(spins: &[usize]) -> Self {
        let mut counts = [0; 6];
        for &s in spins {
            counts[s] += 1;
        }
        CountVector { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    fn differences(&self) -> [f64; 3] {
        PAIRS.map(|(i, j)| self.counts[i] as f64 - self.counts[j] as f64)
    }
}

fn check_counts(cv: &CountVector, mp: &MeanFieldParams) -> Result<()> {
    if cv.total() != mp.n {
        return Err(Error::LengthMismatch {
            left: cv.total(),
            right: mp.n,
        });
    }
    Ok(())
}

/// `−qJ/(2(n−1))(Σ(n_σ − n_σ')² − n) − H(n₁₂₃ − n₃₂₁)`.
pub fn mean_hamiltonian_counts(cv: &CountVector, mp: &MeanFieldParams) -> Result<f64> {
    check_counts(cv, mp)?;
    let dv = cv.differences();
    let squares: f64 = dv.iter().map(|x| x * x).sum();
    Ok(-0.5 * mp.pair_coupling() * (squares - mp.n as f64) - mp.h * dv[0])
}

/// The same energy after completing the square in `n₁₂₃ − n₃₂₁`:
/// `nqJ/(2(n−1)) + H²(n−1)/(2qJ) − qJ/(2(n−1))((D₁+ℓ)² + D₂² + D₃²)`.
pub fn mean_hamiltonian_completed(cv: &CountVector, mp: &MeanFieldParams) -> Result<f64> {
    check_counts(cv, mp)?;
    let dv = cv.differences();
    let ell = mp.ell();
    let jp = mp.pair_coupling();
    let squares = (dv[0] + ell).powi(2) + dv[1] * dv[1] + dv[2] * dv[2];
    Ok(0.5 * jp * mp.n as f64 + mp.h * ell / 2.0 - 0.5 * jp * squares)
}

fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().expect("64 bits").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn factorials(n: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::one()];
    for i in 1..=n {
        let next = &f[i - 1] * BigUint::from(i);
        f.push(next);
    }
    f
}

/// `ln G_m(ℓ; x)` given `ln x`.
pub fn ln_g(m: usize, ell: f64, ln_x: f64) -> f64 {
    let binoms = (0..=m).map(|i| ln_biguint(&num_integer::binomial(BigUint::from(m), BigUint::from(i))));
    log_sum_exp(binoms.enumerate().map(|(i, lb)| {
        let e = 2.0 * i as f64 - m as f64 + ell;
        lb + e * e * ln_x
    }))
}

/// `G_m(ℓ; x) = Σ_{i=0}^{m} C(m,i) x^{(2i−m+ℓ)²}`.
pub fn g(m: usize, ell: f64, x: f64) -> f64 {
    ln_g(m, ell, x.ln()).exp()
}

/// `ln Z` from the factorised sum over `a + b + c = n`, where `a`, `b`, `c`
/// count the sites in each of the three species pairs.
pub fn ln_mean_z_factorized(mp: &MeanFieldParams) -> Result<f64> {
    mp.validate()?;
    let n = mp.n;
    let ln_x = mp.ln_x();
    let fact = factorials(n);
    let g_shift: Vec<f64> = (0..=n).map(|m| ln_g(m, mp.ell(), ln_x)).collect();
    let g_zero: Vec<f64> = (0..=n).map(|m| ln_g(m, 0.0, ln_x)).collect();
    let per_a: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|a| {
            log_sum_exp((0..=n - a).map(|b| {
                let c = n - a - b;
                let multinomial = &fact[n] / (&fact[a] * &fact[b] * &fact[c]);
                ln_biguint(&multinomial) + g_shift[a] + g_zero[b] + g_zero[c]
            }))
        })
        .collect();
    let prefactor = -0.5 * mp.beta * (mp.pair_coupling() * n as f64 + mp.h * mp.ell());
    Ok(prefactor + log_sum_exp(per_a))
}

pub fn mean_z_factorized(mp: &MeanFieldParams) -> Result<f64> {
    Ok(ln_mean_z_factorized(mp)?.exp())
}

/// `C(n+5, 5)`, the number of count vectors.
pub fn count_vector_total(n: usize) -> u64 {
    let n = n as u64;
    (1..=5).fold(1u64, |acc, i| acc * (n + i) / i)
}

/// Calls `f` on every count vector summing to `n` with first component `first`,
/// in lexicographic order.
fn for_each_tail(n: u32, first: u32, mut f: impl FnMut(CountVector)) {
    let r1 = n - first;
    for c1 in 0..=r1 {
        for c2 in 0..=r1 - c1 {
            for c3 in 0..=r1 - c1 - c2 {
                for c4 in 0..=r1 - c1 - c2 - c3 {
                    let c5 = r1 - c1 - c2 - c3 - c4;
                    f(CountVector::new([first, c1, c2, c3, c4, c5]));
                }
            }
        }
    }
}

/// `ln Z` summed directly over count vectors with multinomial weights.
pub fn ln_mean_z_direct(mp: &MeanFieldParams) -> Result<f64> {
    mp.validate()?;
    let total = count_vector_total(mp.n);
    if total > DIRECT_CAP {
        return Err(Error::CapExceeded {
            requested: total as f64,
            cap: DIRECT_CAP,
        });
    }
    let n = mp.n;
    let fact = factorials(n);
    let per_first: Vec<f64> = (0..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut terms = Vec::new();
            for_each_tail(n as u32, first, |cv| {
                let denom = cv
                    .counts
                    .iter()
                    .fold(BigUint::one(), |acc, &c| acc * &fact[c as usize]);
                let energy = mean_hamiltonian_counts(&cv, mp).expect("counts sum to n");
                terms.push(ln_biguint(&(&fact[n] / denom)) - mp.beta * energy);
            });
            log_sum_exp(terms)
        })
        .collect();
    Ok(log_sum_exp(per_first))
}

pub fn mean_z_direct(mp: &MeanFieldParams) -> Result<f64> {
    Ok(ln_mean_z_direct(mp)?.exp())
}

/// `ln[6ⁿ e^{−βnqJ/(2(n−1))}]`.
pub fn ln_dominant_term_estimate(mp: &MeanFieldParams) -> Result<f64> {
    mp.validate()?;
    let n = mp.n as f64;
    Ok(n * 6f64.ln() - 0.5 * mp.beta * n * mp.pair_coupling())
}

pub fn dominant_term_estimate(mp: &MeanFieldParams) -> Result<f64> {
    Ok(ln_dominant_term_estimate(mp)?.exp())
}

/// `(a, b, c)` as equal as possible, larger parts first.
pub fn central_split(n: usize) -> (usize, usize, usize) {
    let base = n / 3;
    let r = n % 3;
    (base + usize::from(r > 0), base + usize::from(r > 1), base)
}

/// `ln` of the single factorised summand at [`central_split`], including
/// the prefactor.
pub fn ln_central_term(mp: &MeanFieldParams) -> Result<f64> {
    mp.validate()?;
    let (a, b, c) = central_split(mp.n);
    let fact = factorials(mp.n);
    let multinomial = &fact[mp.n] / (&fact[a] * &fact[b] * &fact[c]);
    let ln_x = mp.ln_x();
    let prefactor = -0.5 * mp.beta * (mp.pair_coupling() * mp.n as f64 + mp.h * mp.ell());
    Ok(prefactor
        + ln_biguint(&multinomial)
        + ln_g(a, mp.ell(), ln_x)
        + ln_g(b, 0.0, ln_x)
        + ln_g(c, 0.0, ln_x))
}

/// Factorised and (when within the cap) direct partition functions, the
/// dominant-term estimate and `f = −ln Z/(βn)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldReport {
    pub params: MeanFieldParams,
    pub ln_z_factorized: f64,
    pub ln_z_direct: Option<f64>,
    pub ln_dominant_estimate: f64,
    pub free_energy_density: f64,
}

pub fn mean_field_report(mp: &MeanFieldParams) -> Result<MeanFieldReport> {
    let ln_z = ln_mean_z_factorized(mp)?;
    let ln_z_direct = if count_vector_total(mp.n) <= DIRECT_CAP {
        Some(ln_mean_z_direct(mp)?)
    } else {
        None
    };
    Ok(MeanFieldReport {
        params: *mp,
        ln_z_factorized: ln_z,
        ln_z_direct,
        ln_dominant_estimate: ln_dominant_term_estimate(mp)?,
        free_energy_density: -ln_z / (mp.beta * mp.n as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(n: usize, q: u32, j: f64, h: f64, beta: f64) -> MeanFieldParams {
        MeanFieldParams::new(n, q, j, h, beta).unwrap()
    }

    #[test]
    fn g_examples() {
        let x = 1.7f64;
        assert!((g(0, 0.3, x) - x.powf(0.09)).abs() < 1e-12);
        assert!((g(1, 0.0, x) - 2.0 * x).abs() < 1e-12);
        assert!((g(2, 0.0, x) - (2.0 + 2.0 * x.powi(4))).abs() < 1e-12);
        for m in 0..12 {
            assert!((g(m, 0.0, 1.0) - 2f64.powi(m as i32)).abs() < 1e-9);
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let p = mp(12, 2, 1.0, 0.8, 1.0);
        let even = CountVector::new([2; 6]);
        let want = 2.0 * 12.0 / (2.0 * 11.0);
        assert!((mean_hamiltonian_counts(&even, &p).unwrap() - want).abs() < 1e-12);
        let all = CountVector::new([12, 0, 0, 0, 0, 0]);
        let want = -(2.0 * 12.0) / 2.0 - 0.8 * 12.0;
        assert!((mean_hamiltonian_counts(&all, &p).unwrap() - want).abs() < 1e-12);
        assert!(mean_hamiltonian_counts(&CountVector::new([1; 6]), &p).is_err());
    }

    #[test]
    fn completed_square_matches() {
        let p = mp(9, 4, 1.3, -0.4, 0.7);
        let cv = CountVector::new([3, 0, 1, 2, 0, 3]);
        let a = mean_hamiltonian_counts(&cv, &p).unwrap();
        let b = mean_hamiltonian_completed(&cv, &p).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn factorized_matches_direct_small() {
        for n in 2..=6 {
            let p = mp(n, 2, 1.0, 0.5, 1.0);
            let f = ln_mean_z_factorized(&p).unwrap();
            let d = ln_mean_z_direct(&p).unwrap();
            assert!((f - d).abs() < 1e-10, "n={n}: {f} vs {d}");
        }
    }

    #[test]
    fn high_temperature_limit() {
        let p = mp(5, 2, 1.0, 0.0, 1e-12);
        assert!((mean_z_factorized(&p).unwrap() / 6f64.powi(5) - 1.0).abs() < 1e-9);
        assert!((dominant_term_estimate(&p).unwrap() / 6f64.powi(5) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dominant_estimate_example() {
        let p = mp(6, 2, 1.0, 0.0, 1.0);
        let want = 6f64.powi(6) * (-1.2f64).exp();
        assert!((dominant_term_estimate(&p).unwrap() - want).abs() < 1e-9 * want);
    }

    #[test]
    fn count_vector_helpers() {
        assert_eq!(count_vector_total(2), 21);
        assert_eq!(central_split(7), (3, 2, 2));
        assert_eq!(central_split(9), (3, 3, 3));
        assert_eq!(CountVector::from_species(&[0, 5, 5, 2]).counts, [1, 0, 1, 0, 0, 2]);
    }

    #[test]
    fn validation() {
        assert!(MeanFieldParams::new(1, 2, 1.0, 0.0, 1.0).is_err());
        assert!(MeanFieldParams::new(3, 2, 0.0, 0.0, 1.0).is_err());
        assert!(MeanFieldParams::new(3, 0, 1.0, 0.0, 1.0).is_err());
        assert!(MeanFieldParams::new(3, 2, 1.0, 0.0, 0.0).is_err());
    }
}
