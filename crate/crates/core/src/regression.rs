//! Multivariate local linear regression with a product kernel and a common
//! bandwidth, evaluated leave-one-out at every sample point.
//!
//! At a query point `x` with kernel weights `w_i = prod_k K((X_ik - x_k) / h)`
//! the fit is `Ybar + (x - Xbar)' (Sigma + eps I)^-1 T`, where `Xbar`, `Ybar`
//! are weighted means, `Sigma` the weighted covariance of the covariates and
//! `T` their weighted covariance with the response. `eps = 1e-8 tr(Sigma) / d`,
//! and the ridge solve is followed by two steps of iterative refinement
//! against the unregularized `Sigma`.
//!
//! A query point whose neighborhood holds fewer than `d + 2` positively
//! weighted rows has its bandwidth multiplied by 1.5, at most ten times. If it
//! is still degenerate the prediction is the mean of the other responses.

use nalgebra::{DMatrix, DVector};

use crate::cv::{cv_score_from_predictions, WeightFn};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernel::{BandwidthGrid, Kernel};
use crate::subset::Subset;

pub const RIDGE_FACTOR: f64 = 1e-8;
pub const INFLATION_FACTOR: f64 = 1.5;
pub const MAX_INFLATIONS: u32 = 10;
pub const REFINEMENT_STEPS: usize = 2;

/// Row-major copy of the covariates in one subset.
#[derive(Debug, Clone)]
pub struct SubsetDesign<'a> {
    points: Vec<f64>,
    dim: usize,
    y: &'a [f64],
}

impl<'a> SubsetDesign<'a> {
    pub fn new(dataset: &'a Dataset, subset: &Subset) -> Result<Self> {
        subset.check_range(dataset.p())?;
        let n = dataset.n();
        let dim = subset.len();
        let x = dataset.x();
        let mut points = Vec::with_capacity(n * dim);
        for i in 0..n {
            points.extend(subset.indices().iter().map(|&j| x[(i, j)]));
        }
        Ok(Self {
            points,
            dim,
            y: dataset.y(),
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }
}

/// Leave-one-out predictions plus how often the neighborhood rule kicked in.
#[derive(Debug, Clone, PartialEq)]
pub struct LooFit {
    pub predictions: Vec<f64>,
    /// Bandwidth inflations used at each query point (0 = none).
    pub inflations: Vec<u32>,
    /// Query points that fell back to the leave-one-out mean.
    pub fallbacks: usize,
}

/// Leave-one-out local linear predictions at every row for `subset`.
pub fn loo_predict(dataset: &Dataset, subset: &Subset, bandwidth: f64) -> Result<Vec<f64>> {
    Ok(loo_fit(dataset, subset, bandwidth)?.predictions)
}

pub fn loo_fit(dataset: &Dataset, subset: &Subset, bandwidth: f64) -> Result<LooFit> {
    check_bandwidth(bandwidth)?;
    let design = SubsetDesign::new(dataset, subset)?;
    Ok(design.loo_fit(bandwidth, Kernel::Epanechnikov))
}

/// Picks the grid bandwidth minimizing the unit-weight CV score.
pub fn select_bandwidth(
    dataset: &Dataset,
    subset: &Subset,
    grid: &BandwidthGrid,
) -> Result<(f64, f64)> {
    select_bandwidth_weighted(dataset, subset, grid, &WeightFn::Unit)
}

/// Picks the grid bandwidth minimizing the CV score under `weight`. Ties go
/// to the smaller bandwidth.
pub fn select_bandwidth_weighted(
    dataset: &Dataset,
    subset: &Subset,
    grid: &BandwidthGrid,
    weight: &WeightFn,
) -> Result<(f64, f64)> {
    let design = SubsetDesign::new(dataset, subset)?;
    let weights = weight.evaluate_rows(dataset, subset)?;
    let mut best: Option<(f64, f64)> = None;
    for h in grid.bandwidths(dataset.n(), subset.len()) {
        let fit = design.loo_fit(h, Kernel::Epanechnikov);
        let score = cv_score_from_predictions(dataset.y(), &fit.predictions, &weights);
        if best.is_none_or(|(_, s)| score < s) {
            best = Some((h, score));
        }
    }
    Ok(best.expect("grid is nonempty"))
}

pub(crate) fn check_bandwidth(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveBandwidth(h))
    }
}

impl SubsetDesign<'_> {
    pub fn loo_fit(&self, bandwidth: f64, kernel: Kernel) -> LooFit {
        let n = self.n();
        let mut scratch = Scratch::new(n, self.dim);
        let mut predictions = Vec::with_capacity(n);
        let mut inflations = Vec::with_capacity(n);
        let mut fallbacks = 0;
        let total: f64 = self.y.iter().sum();
        for i in 0..n {
            match self.predict_at(i, bandwidth, kernel, &mut scratch) {
                Some((pred, k)) => {
                    predictions.push(pred);
                    inflations.push(k);
                }
                None => {
                    predictions.push((total - self.y[i]) / (n - 1) as f64);
                    inflations.push(MAX_INFLATIONS);
                    fallbacks += 1;
                }
            }
        }
        LooFit {
            predictions,
            inflations,
            fallbacks,
        }
    }

    /// Local linear fit at row `i` without row `i`. `None` if every inflated
    /// bandwidth leaves the neighborhood degenerate.
    fn predict_at(
        &self,
        i: usize,
        bandwidth: f64,
        kernel: Kernel,
        scratch: &mut Scratch,
    ) -> Option<(f64, u32)> {
        let d = self.dim;
        let query = self.point(i);
        let support = kernel.support();
        let mut h = bandwidth;
        for inflation in 0..=MAX_INFLATIONS {
            if inflation > 0 {
                h *= INFLATION_FACTOR;
            }
            let reach = support * h;
            scratch.rows.clear();
            scratch.weights.clear();
            'rows: for r in 0..self.n() {
                if r == i {
                    continue;
                }
                let pt = self.point(r);
                let mut w = 1.0;
                for k in 0..d {
                    let diff = pt[k] - query[k];
                    if diff.abs() >= reach {
                        continue 'rows;
                    }
                    w *= kernel.evaluate(diff / h);
                }
                if w > 0.0 {
                    scratch.rows.push(r);
                    scratch.weights.push(w);
                }
            }
            if scratch.rows.len() >= d + 2 {
                return Some((self.local_linear(query, scratch), inflation));
            }
        }
        None
    }

    fn local_linear(&self, query: &[f64], scratch: &mut Scratch) -> f64 {
        let d = self.dim;
        let wsum: f64 = scratch.weights.iter().sum();
        let xbar = &mut scratch.xbar;
        xbar.fill(0.0);
        let mut ybar = 0.0;
        for (&r, &w) in scratch.rows.iter().zip(&scratch.weights) {
            for (m, v) in xbar.iter_mut().zip(self.point(r)) {
                *m += w * v;
            }
            ybar += w * self.y[r];
        }
        xbar.iter_mut().for_each(|m| *m /= wsum);
        ybar /= wsum;

        let cov = &mut scratch.cov;
        let cross = &mut scratch.cross;
        cov.fill(0.0);
        cross.fill(0.0);
        let centered = &mut scratch.centered;
        for (&r, &w) in scratch.rows.iter().zip(&scratch.weights) {
            for ((c, v), m) in centered.iter_mut().zip(self.point(r)).zip(xbar.iter()) {
                *c = v - m;
            }
            let dy = self.y[r] - ybar;
            for a in 0..d {
                let wa = w * centered[a];
                cross[a] += wa * dy;
                for b in 0..=a {
                    cov[(a, b)] += wa * centered[b];
                }
            }
        }
        for a in 0..d {
            cross[a] /= wsum;
            for b in 0..=a {
                let v = cov[(a, b)] / wsum;
                cov[(a, b)] = v;
                cov[(b, a)] = v;
            }
        }
        let trace = cov.trace();
        if trace <= 0.0 {
            // All neighbors share the query's coordinates: no slope is identifiable.
            return ybar;
        }
        let ridge = RIDGE_FACTOR * trace / d as f64;
        for a in 0..d {
            cov[(a, a)] += ridge;
        }
        let Some(chol) = cov.clone().cholesky() else {
            return ybar;
        };
        // Iterated Tikhonov: refinement against the unregularized covariance
        // removes the ridge bias wherever the local design is well determined.
        let mut slope = chol.solve(cross);
        for _ in 0..REFINEMENT_STEPS {
            let mut residual = &*cross - &*cov * &slope + &slope * ridge;
            chol.solve_mut(&mut residual);
            slope += residual;
        }
        ybar + query
            .iter()
            .zip(xbar.iter())
            .zip(slope.iter())
            .map(|((q, m), s)| (q - m) * s)
            .sum::<f64>()
    }
}

struct Scratch {
    rows: Vec<usize>,
    weights: Vec<f64>,
    xbar: Vec<f64>,
    centered: Vec<f64>,
    cov: DMatrix<f64>,
    cross: DVector<f64>,
}

impl Scratch {
    fn new(n: usize, d: usize) -> Self {
        Self {
            rows: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
            xbar: vec![0.0; d],
            centered: vec![0.0; d],
            cov: DMatrix::zeros(d, d),
            cross: DVector::zeros(d),
        }
    }
}
