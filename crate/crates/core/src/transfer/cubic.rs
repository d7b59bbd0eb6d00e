//! The cubic factor of the full `S₃` characteristic polynomial and the
//! selection of its largest root through the complex cube-root construction.

use num_complex::Complex64;
use serde::Serialize;

/// `t(λ) = λ³ + bp·λ² + cp·λ + dp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicFactor {
    pub bp: f64,
    pub cp: f64,
    pub dp: f64,
}

impl CubicFactor {
    pub fn eval(&self, x: f64) -> f64 {
        ((x + self.bp) * x + self.cp) * x + self.dp
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * x + 2.0 * self.bp) * x + self.cp
    }

    /// Magnitude used for residual checks: `Σ |coeff|·|x|^power`.
    pub fn scale_at(&self, x: f64) -> f64 {
        let ax = x.abs();
        ax.powi(3) + self.bp.abs() * ax * ax + self.cp.abs() * ax + self.dp.abs()
    }

    /// All three roots `−(B' + 2 Re E_i)/3`, descending.
    ///
    /// Requires `Δ₂ ≤ 0` (three real roots); a small positive `Δ₂` from
    /// rounding is clamped to zero.
    pub fn real_roots(&self) -> [f64; 3] {
        let dt = discriminants(self);
        let e1 = principal_cube_root(&dt);
        let mut r = [e1, e1 * omega(), e1 * omega() * omega()].map(|e| -(self.bp + 2.0 * e.re) / 3.0);
        r.sort_by(|x, y| y.total_cmp(x));
        r
    }
}

/// `(t, λ₄, λ₅)` with `λ₄ = c(1−d)²` and `λ₅ = c(1−d²)`.
pub fn cubic_factor(c: f64, d: f64) -> (CubicFactor, f64, f64) {
    let bp = -(c * d * d + c * c + 2.0 * c * d + c + 1.0);
    let cp = -c
        * (c * d.powi(3) + 3.0 * c * c * d + c * d * d + c * c + c * d + c + 3.0 * d + 1.0)
        * (d - 1.0);
    let dp = (d * d + 4.0 * d + 1.0) * c.powi(3) * (d + 1.0) * (d - 1.0).powi(3);
    let l4 = c * (1.0 - d) * (1.0 - d);
    let l5 = c * (1.0 - d * d);
    (CubicFactor { bp, cp, dp }, l4, l5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminantTriple {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
}

impl DiscriminantTriple {
    /// Size of the terms that cancel in `d2`.
    pub fn d2_scale(&self) -> f64 {
        self.d1 * self.d1 + 4.0 * self.d0.abs().powi(3)
    }
}

/// `Δ₀ = B'² − 3C'`, `Δ₁ = 2B'³ − 9B'C' + 27D'`, `Δ₂ = Δ₁² − 4Δ₀³`.
pub fn discriminants(cf: &CubicFactor) -> DiscriminantTriple {
    let (b, c, d) = (cf.bp, cf.cp, cf.dp);
    let d0 = b * b - 3.0 * c;
    let d1 = 2.0 * b * b * b - 9.0 * b * c + 27.0 * d;
    let d2 = d1 * d1 - 4.0 * d0 * d0 * d0;
    DiscriminantTriple { d0, d1, d2 }
}

/// Relative size of a positive `Δ₂` still treated as rounding noise.
pub const D2_CLAMP_TOL: f64 = 1e-10;

fn omega() -> Complex64 {
    Complex64::new(-0.5, 0.5 * 3f64.sqrt())
}

/// `E = ∛((Δ₁ + i√(−Δ₂))/2)` with argument in `[0, π/3]`.
fn principal_cube_root(dt: &DiscriminantTriple) -> Complex64 {
    let im = (-dt.d2).max(0.0).sqrt();
    let w = Complex64::new(dt.d1, im) * 0.5;
    Complex64::from_polar(w.norm().cbrt(), w.arg() / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootSelection {
    /// Rotated cube root `E₂ = E·(−1 + i√3)/2`.
    CubeRoot,
    /// `Δ₂` was clearly positive; solved by [`max_real_root`] instead.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaStar {
    pub value: f64,
    pub selection: RootSelection,
}

impl LambdaStar {
    pub fn is_fallback(&self) -> bool {
        self.selection == RootSelection::Fallback
    }
}

/// Largest root `λ*` of the cubic factor at `(c, d)`.
pub fn lambda_star(c: f64, d: f64) -> LambdaStar {
    let (cf, _, _) = cubic_factor(c, d);
    lambda_star_of(&cf)
}

pub fn lambda_star_of(cf: &CubicFactor) -> LambdaStar {
    let dt = discriminants(cf);
    if dt.d2 > D2_CLAMP_TOL * dt.d2_scale() {
        return LambdaStar {
            value: max_real_root(cf),
            selection: RootSelection::Fallback,
        };
    }
    let e2 = principal_cube_root(&dt) * omega();
    LambdaStar {
        value: -(cf.bp + 2.0 * e2.re) / 3.0,
        selection: RootSelection::CubeRoot,
    }
}

/// Largest real root by Newton iteration from above the Cauchy bound.
///
/// For a monic cubic Newton's method started right of every root decreases
/// monotonically to the largest one.
pub fn max_real_root(cf: &CubicFactor) -> f64 {
    let mut x = 1.0 + cf.bp.abs().max(cf.cp.abs()).max(cf.dp.abs());
    for _ in 0..500 {
        let fx = cf.eval(x);
        let dfx = cf.derivative(x);
        if dfx <= 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if !(next < x) {
            break;
        }
        x = next;
    }
    x
}
