//! Generating functions of permutation statistics.
//!
//! The double Eulerian polynomial `CDdes_n(u) = Σ u^{destat(π)}` is computed
//! two ways: by enumerating `S_n`, and from the closed form
//! `(1-u)^{2n+2} Σ_{i,j≥1} C(ij+n-1, n) u^{i+j-2}`, truncated at degree `2(n-1)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm::{enumerate, StatisticKind, MAX_ENUMERATE_K};

/// Dense univariate polynomial with arbitrary-precision integer coefficients.
/// Index is the exponent; no trailing zeros are stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, exponent: usize) -> BigInt {
        self.coefficients
            .get(exponent)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.coefficients.iter().sum()
    }

    /// `coeff[m] == coeff[deg - m]` for all `m`.
    pub fn is_palindromic(&self) -> bool {
        let c = &self.coefficients;
        c.iter().eq(c.iter().rev())
    }

    /// Horner evaluation in `f64`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Product truncated to exponents `<= max_degree`.
    pub fn mul_truncated(&self, other: &IntPolynomial, max_degree: usize) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let len = (self.coefficients.len() + other.coefficients.len() - 1).min(max_degree + 1);
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coefficients.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    /// Renders like `1+4x^2+x^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if !first || c.is_negative() {
                f.write_str(sign)?;
            }
            let mag = c.abs();
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if e == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{e}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// `Stat_k(x) = Σ_{π∈S_k} x^{stat(π)}` by enumeration.
pub fn stat_gf(kind: StatisticKind, k: usize) -> Result<IntPolynomial> {
    let set = enumerate(k)?;
    let mut counts = vec![0u64; kind.s_max(k) + 1];
    for pi in set.iter() {
        counts[kind.eval(pi)] += 1;
    }
    Ok(IntPolynomial::new(counts.into_iter().map(BigInt::from).collect()))
}

/// The double Eulerian polynomial from its closed-form series.
pub fn cddes_closed_form(n: usize) -> Result<IntPolynomial> {
    if !(1..=MAX_ENUMERATE_K).contains(&n) {
        return Err(Error::KOutOfRange {
            k: n,
            max: MAX_ENUMERATE_K,
        });
    }
    let max_degree = 2 * (n - 1);

    // Σ_{i,j≥1} C(ij+n-1, n) u^{i+j-2}, coefficients up to max_degree.
    let series: Vec<BigInt> = (0..=max_degree)
        .map(|m| {
            let total = m + 2;
            (1..total)
                .map(|i| {
                    let j = total - i;
                    binomial(BigInt::from(i * j + n - 1), BigInt::from(n))
                })
                .sum()
        })
        .collect();

    // (1-u)^{2n+2}
    let power = 2 * n + 2;
    let factor: Vec<BigInt> = (0..=power)
        .map(|r| {
            let c = binomial(BigInt::from(power), BigInt::from(r));
            if r % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();

    Ok(IntPolynomial::new(series).mul_truncated(&IntPolynomial::new(factor), max_degree))
}
