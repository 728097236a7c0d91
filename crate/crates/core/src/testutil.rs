//! Fixtures and an independent local linear oracle, shared by unit and
//! integration tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use novas_core::{Dataset, Subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n x p` Uniform[-1, 1] covariates, standardized, with `y = f(row)`
/// evaluated on the standardized row.
pub fn uniform_dataset(n: usize, p: usize, seed: u64, f: impl Fn(&[f64]) -> f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let raw = Dataset::from_rows(&rows, vec![0.0; n]).unwrap();
    let std = raw.standardize().unwrap();
    let y = (0..n)
        .map(|i| {
            let row: Vec<f64> = std.x().row(i).iter().copied().collect();
            f(&row)
        })
        .collect();
    std.with_response(y).unwrap()
}

fn epanechnikov(u: f64) -> f64 {
    if u.abs() < 1.0 {
        0.75 * (1.0 - u * u)
    } else {
        0.0
    }
}

/// Leave-one-out local linear predictions by explicit weighted least squares
/// on the design `[1, X_j - x]` at every query point, solved by SVD without
/// any ridge term. Applies the same neighborhood-inflation contract as the
/// library (x1.5 up to ten times, then the leave-one-out mean).
pub fn naive_loo_predict(ds: &Dataset, subset: &Subset, h: f64) -> Vec<f64> {
    let n = ds.n();
    let cols = subset.indices();
    let d = cols.len();
    let x = ds.x();
    let y = ds.y();
    (0..n)
        .map(|i| {
            let mut bw = h;
            for attempt in 0..=10 {
                if attempt > 0 {
                    bw *= 1.5;
                }
                let mut rows = Vec::new();
                for j in (0..n).filter(|&j| j != i) {
                    let w: f64 = cols
                        .iter()
                        .map(|&c| epanechnikov((x[(j, c)] - x[(i, c)]) / bw))
                        .product();
                    if w > 0.0 {
                        rows.push((j, w));
                    }
                }
                if rows.len() < d + 2 {
                    continue;
                }
                let m = rows.len();
                let z = DMatrix::from_fn(m, d + 1, |r, k| {
                    let (j, w) = rows[r];
                    let v = if k == 0 {
                        1.0
                    } else {
                        x[(j, cols[k - 1])] - x[(i, cols[k - 1])]
                    };
                    w.sqrt() * v
                });
                let rhs = DVector::from_fn(m, |r, _| rows[r].1.sqrt() * y[rows[r].0]);
                let beta = z.svd(true, true).solve(&rhs, 1e-14).unwrap();
                return beta[0];
            }
            (y.iter().sum::<f64>() - y[i]) / (n - 1) as f64
        })
        .collect()
}
