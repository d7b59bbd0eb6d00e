use rayon::prelude::*;
use serde::Serialize;

use super::cubic::{cubic_factor, discriminants, lambda_star_of};
use crate::error::{Error, Result};

/// One `(c, d)` sample of the cubic-factor surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub c: f64,
    pub d: f64,
    pub lambda_star: f64,
    pub lambda4: f64,
    pub lambda5: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub fallback: bool,
}

impl SurfaceRow {
    pub fn at(c: f64, d: f64) -> Self {
        let (cf, lambda4, lambda5) = cubic_factor(c, d);
        let dt = discriminants(&cf);
        let ls = lambda_star_of(&cf);
        SurfaceRow {
            c,
            d,
            lambda_star: ls.value,
            lambda4,
            lambda5,
            delta0: dt.d0,
            delta1: dt.d1,
            delta2: dt.d2,
            fallback: ls.is_fallback(),
        }
    }
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn grid_points(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// Rows ordered with `c` outer and `d` inner.
pub fn surface_grid(
    c_range: (f64, f64),
    d_range: (f64, f64),
    steps: usize,
) -> Result<Vec<SurfaceRow>> {
    for (lo, hi) in [c_range, d_range] {
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "surface ranges must be positive with lo <= hi, got {lo}..{hi}"
            )));
        }
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let cs = grid_points(c_range.0, c_range.1, steps);
    let ds = grid_points(d_range.0, d_range.1, steps);
    Ok((0..steps * steps)
        .into_par_iter()
        .map(|idx| SurfaceRow::at(cs[idx / steps], ds[idx % steps]))
        .collect())
}
