//! Univariate smoothing kernel and the bandwidth grid searched per subset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    #[default]
    Epanechnikov,
}

impl Kernel {
    #[inline]
    pub fn evaluate(self, u: f64) -> f64 {
        match self {
            Kernel::Epanechnikov => (0.75 * (1.0 - u * u)).max(0.0),
        }
    }

    /// Half-width of the support; the kernel vanishes for `|u| >= support()`.
    pub fn support(self) -> f64 {
        match self {
            Kernel::Epanechnikov => 1.0,
        }
    }
}

pub const DEFAULT_MULTIPLIERS: [f64; 6] = [0.3, 0.5, 0.8, 1.2, 1.8, 2.7];

/// Candidate bandwidths `multiplier * n^(-1/(d+4))` for a subset of size `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BandwidthGrid {
    multipliers: Vec<f64>,
}

impl BandwidthGrid {
    pub fn new(multipliers: Vec<f64>) -> Result<Self> {
        if multipliers.is_empty() {
            return Err(Error::InvalidGrid("no multipliers".into()));
        }
        if multipliers.iter().any(|m| !m.is_finite() || *m <= 0.0) {
            return Err(Error::InvalidGrid(
                "multipliers must be positive and finite".into(),
            ));
        }
        if multipliers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(
                "multipliers must be strictly increasing".into(),
            ));
        }
        Ok(Self { multipliers })
    }

    pub fn multipliers(&self) -> &[f64] {
        &self.multipliers
    }

    pub fn len(&self) -> usize {
        self.multipliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multipliers.is_empty()
    }

    pub fn base_bandwidth(n: usize, d: usize) -> f64 {
        (n as f64).powf(-1.0 / (d as f64 + 4.0))
    }

    /// Increasing list of bandwidths for sample size `n` and dimension `d`.
    pub fn bandwidths(&self, n: usize, d: usize) -> Vec<f64> {
        let h0 = Self::base_bandwidth(n, d);
        self.multipliers.iter().map(|m| m * h0).collect()
    }
}

impl Default for BandwidthGrid {
    fn default() -> Self {
        Self {
            multipliers: DEFAULT_MULTIPLIERS.to_vec(),
        }
    }
}

impl TryFrom<Vec<f64>> for BandwidthGrid {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BandwidthGrid> for Vec<f64> {
    fn from(g: BandwidthGrid) -> Self {
        g.multipliers
    }
}
