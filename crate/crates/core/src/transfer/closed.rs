//! Closed-form spectra for the two restricted spin sets `S₃(123,321)` and
//! `S₃(123)` under the destat statistic.

use super::{SpectrumMethod, SpectrumResult, TransferParams};

/// Eigenvalues of the `S₃(123,321)` matrix; `l1` has multiplicity two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFour {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl ClosedFour {
    pub fn new(tp: &TransferParams) -> Self {
        let c = tp.c();
        let d = tp.d();
        ClosedFour {
            l1: c * (1.0 - d) * (1.0 + d),
            l2: c * (d - 1.0) * (d - 1.0),
            l3: c * (d + 1.0) * (d + 1.0),
        }
    }

    /// Always the Perron root since `a, b > 0`.
    pub fn max(&self) -> f64 {
        self.l3
    }

    pub fn spectrum(&self) -> SpectrumResult {
        SpectrumResult::new(
            vec![self.l1, self.l1, self.l2, self.l3],
            SpectrumMethod::ClosedFormFour,
        )
    }
}

pub fn eig_closed_four(tp: &TransferParams) -> SpectrumResult {
    ClosedFour::new(tp).spectrum()
}

/// Eigenvalues of the `S₃(123)` matrix; `l3` has multiplicity two and `l2`
/// is the largest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFive {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
}

impl ClosedFive {
    pub fn new(tp: &TransferParams) -> Self {
        let c = tp.c();
        let d = tp.d();
        let s = c + (1.0 + d) * (1.0 + d);
        let disc = s * s + 4.0 * c * (1.0 + 3.0 * d) * (d - 1.0);
        // disc = (c - (1+d)^2)^2 + 16cd^2 > 0, so the root is real
        let root = disc.max(0.0).sqrt();
        ClosedFive {
            l1: 0.5 * c * (s - root),
            l2: 0.5 * c * (s + root),
            l3: c * (1.0 - d * d),
            l4: c * (1.0 - d) * (1.0 - d),
        }
    }

    pub fn max(&self) -> f64 {
        self.l2
    }

    pub fn spectrum(&self) -> SpectrumResult {
        SpectrumResult::new(
            vec![self.l1, self.l2, self.l3, self.l3, self.l4],
            SpectrumMethod::ClosedFormFive,
        )
    }
}

pub fn eig_closed_five(tp: &TransferParams) -> SpectrumResult {
    ClosedFive::new(tp).spectrum()
}
