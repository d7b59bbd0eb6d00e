//! Factored characteristic polynomials `det(A − λI)` of the `k = 3`
//! transfer matrices, written out term by term so they can be checked
//! against a numeric determinant.

/// `S₃(123,321)`, destat.
pub fn charpoly_factored_four(a: f64, b: f64, lambda: f64) -> f64 {
    let a4 = a.powi(4);
    let (b2, b4) = (b * b, b.powi(4));
    (a4 * b4 + 2.0 * a4 * b2 + a4 - lambda)
        * (a4 * b4 - 2.0 * a4 * b2 + a4 - lambda)
        * (a4 * b4 - a4 + lambda).powi(2)
}

/// `S₃(123)`, destat.
pub fn charpoly_factored_five(a: f64, b: f64, lambda: f64) -> f64 {
    let (a4, a12) = (a.powi(4), a.powi(12));
    let (b2, b4) = (b * b, b.powi(4));
    let quadratic = -a12 * (3.0 * b2 + 1.0) * (b2 - 1.0)
        - a4 * (a4 + (b2 + 1.0).powi(2)) * lambda
        + lambda * lambda;
    quadratic * (a4 * (1.0 - b2).powi(2) - lambda) * (a4 * b4 - a4 + lambda).powi(2)
}

/// Full `S₃`, destat, in terms of `a` and `b`.
pub fn charpoly_factored_full(a: f64, b: f64, lambda: f64) -> f64 {
    let (a4, a8, a12) = (a.powi(4), a.powi(8), a.powi(12));
    let b2 = b * b;
    let bp = |e: i32| b.powi(e);
    let cubic = a12 * (bp(12) + 2.0 * bp(10) - 7.0 * bp(8) + 7.0 * bp(4) - 2.0 * b2 - 1.0)
        + a4 * lambda
            * (1.0 - 3.0 * a8 * bp(4) - a4 * bp(8) + 2.0 * a8 * b2 + a8 + a4 - 3.0 * bp(4)
                + 2.0 * b2)
        + lambda * lambda * (-a4 - a8 - a4 * bp(4) - 2.0 * a4 * b2 - 1.0)
        + lambda.powi(3);
    -cubic * (a4 * bp(4) - 2.0 * a4 * b2 + a4 - lambda) * (a4 * bp(4) - a4 + lambda).powi(2)
}

/// Full `S₃`, destat, in terms of `c = a⁴` and `d = b²`.
///
/// The linear factor `(cd² − c + λ)` enters squared, as in the `(a, b)` form.
pub fn charpoly_factored_full_cd(c: f64, d: f64, lambda: f64) -> f64 {
    let cubic = (d * d + 4.0 * d + 1.0) * c.powi(3) * (d + 1.0) * (d - 1.0).powi(3)
        - lambda
            * c
            * (c * d.powi(3) + 3.0 * c * c * d + c * d * d + c * c + c * d + c + 3.0 * d + 1.0)
            * (d - 1.0)
        - lambda * lambda * (c * d * d + c * c + 2.0 * c * d + c + 1.0)
        + lambda.powi(3);
    -cubic * (c * d * d - 2.0 * c * d + c - lambda) * (c * d * d - c + lambda).powi(2)
}

/// Full `S₃` with the inversion statistic.
pub fn charpoly_factored_inv(a: f64, b: f64, lambda: f64) -> f64 {
    let ap = |e: i32| a.powi(e);
    let bp = |e: i32| b.powi(e);
    let a2 = a * a;
    let b2 = b * b;
    let quartic = (b2 + b + 1.0) * (b2 - b + 1.0) * ap(12) * (b + 1.0).powi(4) * (b - 1.0).powi(4)
        - lambda
            * (ap(4) * b2 - a2 * bp(4) + ap(4) + b2 + 1.0)
            * (a2 + 1.0)
            * ap(6)
            * (b + 1.0).powi(2)
            * (b - 1.0).powi(2)
        - lambda
            * lambda
            * (ap(8) + 2.0 * ap(6) * b2 + 2.0 * ap(4) * bp(4) + ap(6) + 3.0 * ap(4) * b2
                + 2.0 * ap(4)
                + 2.0 * a2 * b2
                + a2
                + 1.0)
            * a2
            * (b2 - 1.0)
        + lambda.powi(3) * (-(ap(4) + a2 * b2 + 1.0) * (a2 + 1.0))
        + lambda.powi(4);
    let quadratic = ap(6) * (1.0 + b).powi(3) * (1.0 - b).powi(3)
        + lambda * (a2 + 1.0) * a2 * (b + 1.0) * (b - 1.0)
        + lambda * lambda;
    quartic * quadratic
}
