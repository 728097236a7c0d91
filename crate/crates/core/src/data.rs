//! Covariate matrix plus response, with the column standardization applied to it.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// An `n x p` covariate matrix and a length-`n` response.
///
/// Covariate indices are 0-based throughout the crate; user-facing output
/// renders them 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: Vec<f64>,
    standardized: bool,
    column_means: Vec<f64>,
    column_sds: Vec<f64>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: Vec<f64>) -> Result<Self> {
        let (n, p) = x.shape();
        if n < 2 {
            return Err(Error::InvalidDataset(format!(
                "need at least 2 rows, got {n}"
            )));
        }
        if p < 1 {
            return Err(Error::InvalidDataset("need at least one covariate".into()));
        }
        if y.len() != n {
            return Err(Error::InvalidDataset(format!(
                "response has length {} but covariates have {n} rows",
                y.len()
            )));
        }
        if let Some((idx, _)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            let (row, col) = (idx % n, idx / n);
            return Err(Error::InvalidDataset(format!(
                "non-finite covariate at row {row}, column {col}"
            )));
        }
        if let Some(row) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite response at row {row}"
            )));
        }
        Ok(Self {
            x,
            y,
            standardized: false,
            column_means: vec![0.0; p],
            column_sds: vec![1.0; p],
        })
    }

    /// Builds a dataset from row-major covariate rows.
    pub fn from_rows(rows: &[Vec<f64>], y: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::InvalidDataset(format!(
                "row {bad} has {} values, expected {p}",
                rows[bad].len()
            )));
        }
        Self::new(DMatrix::from_fn(n, p, |i, j| rows[i][j]), y)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    pub fn column_means(&self) -> &[f64] {
        &self.column_means
    }

    pub fn column_sds(&self) -> &[f64] {
        &self.column_sds
    }

    /// Centers every covariate column and scales it to unit sample standard
    /// deviation. The response is left untouched.
    pub fn standardize(&self) -> Result<Self> {
        let n = self.n();
        let mut x = self.x.clone();
        let mut means = Vec::with_capacity(self.p());
        let mut sds = Vec::with_capacity(self.p());
        for (j, mut col) in x.column_iter_mut().enumerate() {
            let mean = col.iter().sum::<f64>() / n as f64;
            let ss: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
            let sd = (ss / (n - 1) as f64).sqrt();
            // Relative test so that columns of tiny magnitude still count.
            let scale = col.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if sd == 0.0 || sd <= 1e-14 * scale {
                return Err(Error::ConstantColumn(j));
            }
            col.iter_mut().for_each(|v| *v = (*v - mean) / sd);
            means.push(mean);
            sds.push(sd);
        }
        Ok(Self {
            x,
            y: self.y.clone(),
            standardized: true,
            column_means: means,
            column_sds: sds,
        })
    }

    /// Returns a copy with covariate columns reordered so that new column `k`
    /// is old column `order[k]`.
    pub fn permute_columns(&self, order: &[usize]) -> Result<Self> {
        let p = self.p();
        let mut seen = vec![false; p];
        if order.len() != p
            || order
                .iter()
                .any(|&j| j >= p || std::mem::replace(&mut seen[j], true))
        {
            return Err(Error::InvalidDataset(
                "column order is not a permutation".into(),
            ));
        }
        Ok(Self {
            x: self.x.select_columns(order),
            y: self.y.clone(),
            standardized: self.standardized,
            column_means: order.iter().map(|&j| self.column_means[j]).collect(),
            column_sds: order.iter().map(|&j| self.column_sds[j]).collect(),
        })
    }

    /// Returns a copy with rows reordered so that new row `k` is old row `order[k]`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if order.len() != n
            || order
                .iter()
                .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidDataset(
                "row order is not a permutation".into(),
            ));
        }
        Ok(Self {
            x: self.x.select_rows(order),
            y: order.iter().map(|&i| self.y[i]).collect(),
            standardized: self.standardized,
            column_means: self.column_means.clone(),
            column_sds: self.column_sds.clone(),
        })
    }

    /// Replaces the response, keeping covariates and standardization state.
    pub fn with_response(&self, y: Vec<f64>) -> Result<Self> {
        let mut out = Self::new(self.x.clone(), y)?;
        out.standardized = self.standardized;
        out.column_means = self.column_means.clone();
        out.column_sds = self.column_sds.clone();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(col: &[f64]) -> (f64, f64) {
        let n = col.len() as f64;
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var.sqrt())
    }

    #[test]
    fn symmetric_column_is_already_centered() {
        let d = Dataset::from_rows(&[vec![-1.0], vec![0.0], vec![1.0]], vec![0.0; 3]).unwrap();
        let s = d.standardize().unwrap();
        let col: Vec<f64> = s.x().column(0).iter().copied().collect();
        let (m, sd) = moments(&col);
        assert!(m.abs() < 1e-12);
        assert!((sd - 1.0).abs() < 1e-12);
        assert_eq!(s.column_means(), &[0.0]);
        assert!((s.column_sds()[0] - 1.0).abs() < 1e-12);
        assert!(s.is_standardized());
    }

    #[test]
    fn constant_column_rejected() {
        let d = Dataset::from_rows(
            &[vec![1.0, 2.0], vec![3.0, 2.0], vec![5.0, 2.0]],
            vec![0.0; 3],
        )
        .unwrap();
        assert_eq!(d.standardize().unwrap_err(), Error::ConstantColumn(1));
    }

    #[test]
    fn response_not_standardized() {
        let y = vec![10.0, 20.0, 35.0];
        let d = Dataset::from_rows(&[vec![1.0], vec![2.0], vec![4.0]], y.clone()).unwrap();
        assert_eq!(d.standardize().unwrap().y(), y.as_slice());
    }

    #[test]
    fn standardize_is_idempotent() {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let t = i as f64;
                vec![3.0 + 0.5 * t, (t * 1.3).sin() * 40.0, t * t - 7.0]
            })
            .collect();
        let d = Dataset::from_rows(&rows, vec![0.0; 20]).unwrap();
        let once = d.standardize().unwrap();
        let twice = once.standardize().unwrap();
        for (a, b) in once.x().iter().zip(twice.x().iter()) {
            assert!((a - b).abs() < 1e-9);
        }
        for j in 0..3 {
            let col: Vec<f64> = twice.x().column(j).iter().copied().collect();
            let (m, sd) = moments(&col);
            assert!(m.abs() < 1e-9 && (sd - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn shape_errors() {
        assert!(Dataset::from_rows(&[vec![1.0]], vec![1.0]).is_err());
        assert!(Dataset::from_rows(&[vec![1.0], vec![2.0]], vec![1.0]).is_err());
        assert!(Dataset::from_rows(&[vec![1.0], vec![f64::NAN]], vec![1.0, 2.0]).is_err());
        assert!(Dataset::from_rows(&[vec![1.0, 2.0], vec![2.0]], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn permutations_validate() {
        let d = Dataset::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]], vec![1.0, 2.0]).unwrap();
        assert!(d.permute_columns(&[0, 0]).is_err());
        let swapped = d.permute_columns(&[1, 0]).unwrap();
        assert_eq!(swapped.x()[(0, 0)], 2.0);
        let flipped = d.permute_rows(&[1, 0]).unwrap();
        assert_eq!(flipped.y(), &[2.0, 1.0]);
        assert_eq!(flipped.x()[(0, 1)], 4.0);
    }
}
