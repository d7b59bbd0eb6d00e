//! Transfer matrices for the 1D ring.
//!
//! For a spin set `P` the ring partition function is
//! `Z_n = e^{β(J+H)n} Tr(Aⁿ)` with
//! `A[π,σ] = a^{stat(π)+stat(σ)} b^{stat(π⁻¹σ)}`, `a = e^{−βH/s_max}` and
//! `b = e^{−2βJ/s_max}`.

mod charpoly;
mod closed;
mod cubic;
mod surface;

pub use charpoly::{
    charpoly_factored_four, charpoly_factored_five, charpoly_factored_full, charpoly_factored_full_cd,
    charpoly_factored_inv,
};
pub use closed::{eig_closed_four, eig_closed_five, ClosedFour, ClosedFive};
pub use cubic::{
    cubic_factor, discriminants, lambda_star, max_real_root, CubicFactor, DiscriminantTriple,
    LambdaStar, RootSelection,
};
pub use surface::{grid_points, surface_grid, SurfaceRow};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::energy::{Method, ModelParams, PartitionReport};
use crate::error::{Error, Result};
use crate::gf::stat_gf;
use crate::perm::{PermaspinSet, StatisticKind};

/// The `(a, b)` pair of the transfer matrix; `c = a⁴`, `d = b²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferParams {
    pub a: f64,
    pub b: f64,
}

impl TransferParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "a and b must be positive, got a={a}, b={b}"
            )));
        }
        Ok(TransferParams { a, b })
    }

    pub fn c(&self) -> f64 {
        self.a.powi(4)
    }

    pub fn d(&self) -> f64 {
        self.b * self.b
    }
}

/// `a = e^{H'/2}`, `b = e^{J'}` with `H' = −2βH/s_max`, `J' = −2βJ/s_max`.
pub fn transfer_params(p: &ModelParams, k: usize) -> Result<TransferParams> {
    p.validate()?;
    let s_max = p.stat.s_max(k) as f64;
    if s_max == 0.0 {
        return TransferParams::new(1.0, 1.0);
    }
    TransferParams::new((-p.beta * p.h / s_max).exp(), (-2.0 * p.beta * p.j / s_max).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixMode {
    Numeric(TransferParams),
    Symbolic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Numeric(DMatrix<f64>),
    /// `(i, j)` meaning `a^i b^j`, row-major.
    Symbolic(Vec<(u32, u32)>),
}

/// `|P| × |P|` transfer matrix, rows and columns in `P`'s lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    set: PermaspinSet,
    stat: StatisticKind,
    entries: Entries,
}

impl TransferMatrix {
    pub fn set(&self) -> &PermaspinSet {
        &self.set
    }

    pub fn stat(&self) -> StatisticKind {
        self.stat
    }

    pub fn size(&self) -> usize {
        self.set.len()
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn numeric(&self) -> Result<&DMatrix<f64>> {
        match &self.entries {
            Entries::Numeric(m) => Ok(m),
            Entries::Symbolic(_) => Err(Error::SymbolicMatrix),
        }
    }

    /// Exponent pair of entry `(row, col)` in symbolic mode.
    pub fn monomial(&self, row: usize, col: usize) -> Option<(u32, u32)> {
        match &self.entries {
            Entries::Symbolic(e) => Some(e[row * self.size() + col]),
            Entries::Numeric(_) => None,
        }
    }

    pub fn trace(&self) -> Result<f64> {
        Ok(self.numeric()?.trace())
    }
}

pub fn build_transfer(
    set: &PermaspinSet,
    stat: StatisticKind,
    mode: MatrixMode,
) -> Result<TransferMatrix> {
    if !stat.is_inverse_symmetric() {
        return Err(Error::NonSymmetricStatistic(stat.name()));
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = set.members();
    let size = m.len();
    let own: Vec<u32> = m.iter().map(|p| stat.eval(p) as u32).collect();
    let mut monomials = Vec::with_capacity(size * size);
    for (i, pi) in m.iter().enumerate() {
        for (j, sigma) in m.iter().enumerate() {
            let rel = pi.relative(sigma)?;
            monomials.push((own[i] + own[j], stat.eval(&rel) as u32));
        }
    }
    let entries = match mode {
        MatrixMode::Symbolic => Entries::Symbolic(monomials),
        MatrixMode::Numeric(tp) => Entries::Numeric(DMatrix::from_row_iterator(
            size,
            size,
            monomials
                .iter()
                .map(|&(i, j)| tp.a.powi(i as i32) * tp.b.powi(j as i32)),
        )),
    };
    Ok(TransferMatrix {
        set: set.clone(),
        stat,
        entries,
    })
}

/// Transfer matrix for model parameters, in numeric mode.
pub fn transfer_matrix(set: &PermaspinSet, p: &ModelParams) -> Result<TransferMatrix> {
    let tp = transfer_params(p, set.k())?;
    build_transfer(set, p.stat, MatrixMode::Numeric(tp))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    Numeric,
    ClosedFormFour,
    ClosedFormFive,
    CubicPlusLinear,
}

impl SpectrumMethod {
    pub fn name(self) -> &'static str {
        match self {
            SpectrumMethod::Numeric => "numeric",
            SpectrumMethod::ClosedFormFour => "closed-form-four-spin",
            SpectrumMethod::ClosedFormFive => "closed-form-five-spin",
            SpectrumMethod::CubicPlusLinear => "cubic-plus-linear",
        }
    }
}

/// Eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub method: SpectrumMethod,
    /// Largest `‖Av − λv‖ / ‖A‖` over the eigenpairs; numeric solves only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl SpectrumResult {
    pub fn new(mut eigenvalues: Vec<f64>, method: SpectrumMethod) -> Self {
        eigenvalues.sort_by(|x, y| y.total_cmp(x));
        SpectrumResult {
            eigenvalues,
            method,
            residual: None,
        }
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

const SYMMETRY_TOL: f64 = 1e-12;

/// Full spectrum of a symmetric numeric matrix.
pub fn eig_numeric(a: &TransferMatrix) -> Result<SpectrumResult> {
    eig_symmetric(a.numeric()?)
}

pub fn eig_symmetric(m: &DMatrix<f64>) -> Result<SpectrumResult> {
    if !m.is_square() {
        return Err(Error::AsymmetricMatrix(f64::INFINITY));
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let asym = (m - m.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::AsymmetricMatrix(asym));
    }
    let eig = SymmetricEigen::new(m.clone());
    let norm = m.norm().max(f64::MIN_POSITIVE);
    let residual = (0..m.nrows())
        .map(|i| {
            let v = eig.eigenvectors.column(i);
            (m * v - v * eig.eigenvalues[i]).norm() / norm
        })
        .fold(0.0, f64::max);
    let mut out = SpectrumResult::new(eig.eigenvalues.iter().copied().collect(), SpectrumMethod::Numeric);
    out.residual = Some(residual);
    Ok(out)
}

/// `e^{β(J+H)n} Tr(Aⁿ)`, the trace taken from the numeric spectrum.
///
/// `a` must have been built from the same parameters as `p`.
pub fn ring_z(a: &TransferMatrix, n: usize, p: &ModelParams) -> Result<PartitionReport> {
    p.validate()?;
    if n < 3 {
        return Err(Error::InvalidParameter(format!("ring needs n >= 3, got {n}")));
    }
    let spec = eig_numeric(a)?;
    let top = spec.max();
    if top <= 0.0 {
        return Err(Error::NonPositiveEigenvalue(top));
    }
    let tail: f64 = spec.eigenvalues.iter().map(|l| (l / top).powi(n as i32)).sum();
    let ln_trace = n as f64 * top.ln() + tail.ln();
    let ln_z = p.beta * (p.j + p.h) * n as f64 + ln_trace;
    Ok(PartitionReport::from_ln_z(ln_z, n, p.beta, Method::Trace))
}

/// Zero-field generating function value `Stat_k(e^{−2βJ/s_max})`.
fn zero_field_rowsum_ln(k: usize, p: &ModelParams) -> Result<f64> {
    p.validate()?;
    if p.h != 0.0 {
        return Err(Error::NonZeroField(p.h));
    }
    let s_max = p.stat.s_max(k) as f64;
    let x = if s_max == 0.0 {
        1.0
    } else {
        (-2.0 * p.beta * p.j / s_max).exp()
    };
    let gf = stat_gf(p.stat, k)?;
    Ok(p.beta * p.j + gf.eval(x).ln())
}

/// The zero-field closed form `k! e^{βJ}(e^{βJ} Stat_k(e^{−2βJ/s_max}))^{n−1}`,
/// evaluated exactly as written.
///
/// This does not equal `ring_z` at finite `n`; only the free-energy limits agree.
pub fn zero_field_z_product(k: usize, n: usize, p: &ModelParams) -> Result<PartitionReport> {
    let ln_row = zero_field_rowsum_ln(k, p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let ln_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
    let ln_z = ln_fact + p.beta * p.j + (n - 1) as f64 * ln_row;
    Ok(PartitionReport::from_ln_z(ln_z, n, p.beta, Method::ClosedForm))
}

/// `f = −(1/β) ln(e^{βJ} Stat_k(e^{−2βJ/s_max}))`.
pub fn zero_field_f(k: usize, p: &ModelParams) -> Result<f64> {
    Ok(-zero_field_rowsum_ln(k, p)? / p.beta)
}

/// Thermodynamic free energy of the ring, `−(J+H) − (1/β) ln λ_max(A)`.
pub fn free_energy_ring(set: &PermaspinSet, p: &ModelParams) -> Result<f64> {
    let a = transfer_matrix(set, p)?;
    let top = eig_numeric(&a)?.max();
    if top <= 0.0 {
        return Err(Error::NonPositiveEigenvalue(top));
    }
    Ok(-(p.j + p.h) - top.ln() / p.beta)
}
