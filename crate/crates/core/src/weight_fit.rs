//! Least-squares fitting of the weight vector from averaged strength
//! estimates.
//!
//! Each surveyed graph `G_j` with mean estimate `E_j` contributes the linear
//! equation `E_j = sum_i i * w_i * nc_i(G_j)`. Stacking them gives `A w = E`
//! with `A[j][i-1] = i * nc_i(G_j)`, which is solved in the (optionally
//! ridge-regularized) least-squares sense through an SVD. Without
//! regularization, rank-deficient systems get the minimum-norm solution.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::graph::{ccsd, Graph};
use crate::metrics::WeightVector;
use crate::{Error, Result};

/// The bundled 30-entry weight vector fitted from the original survey.
pub const DEFAULT_WEIGHTS: [f64; 30] = [
    0.2221, 0.6607, 0.8747, 1.2271, 0.5538, 0.9078, 0.9445, 0.9517, 0.9737, 0.7178, //
    0.6668, 0.7028, 0.8193, 0.7625, 0.9872, 0.7648, 1.0714, 0.6910, 0.9432, 0.8923, //
    0.9193, 0.9847, 0.8122, 0.9321, 0.9485, 0.9868, 0.8559, 0.8390, 0.9867, 0.9093,
];

pub fn default_weights() -> WeightVector {
    WeightVector::new(DEFAULT_WEIGHTS.to_vec()).expect("bundled weights are finite")
}

/// One surveyed graph and the raw per-participant estimates it received.
#[derive(Clone, Debug)]
pub struct SurveyRecord {
    pub graph_id: String,
    pub graph: Graph,
    pub estimates: Vec<f64>,
}

impl SurveyRecord {
    pub fn mean_estimate(&self) -> f64 {
        self.estimates.iter().sum::<f64>() / self.estimates.len() as f64
    }

    fn validate(&self) -> Result<()> {
        if self.estimates.is_empty() {
            return Err(Error::NoEstimates {
                graph_id: self.graph_id.clone(),
            });
        }
        if self.graph.n() == 0 {
            return Err(Error::EmptyGraph);
        }
        let n = self.graph.n();
        for &value in &self.estimates {
            if !(value.is_finite() && value >= 1.0 && value <= n as f64) {
                return Err(Error::EstimateOutOfRange {
                    graph_id: self.graph_id.clone(),
                    value,
                    n,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SurveyDataset {
    pub records: Vec<SurveyRecord>,
}

/// Dense `rows x cols` system `A w = E`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    target: Vec<f64>,
}

impl DesignMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>, target: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: entries.len(),
                right: rows * cols,
            });
        }
        if target.len() != rows {
            return Err(Error::LengthMismatch {
                left: target.len(),
                right: rows,
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
            target,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.entries[j * self.cols..(j + 1) * self.cols]
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    /// `||A w - E||_2`.
    pub fn residual_norm(&self, w: &[f64]) -> f64 {
        let mut sum = 0.0;
        for j in 0..self.rows {
            let r = dot(self.row(j), w) - self.target[j];
            sum += r * r;
        }
        libm::sqrt(sum)
    }

    /// `||A w - E||^2 + lambda ||w||^2`.
    pub fn objective(&self, w: &[f64], lambda: f64) -> f64 {
        let r = self.residual_norm(w);
        r * r + lambda * dot(w, w)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn build_system(ds: &SurveyDataset) -> Result<DesignMatrix> {
    if ds.records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut distributions = Vec::with_capacity(ds.records.len());
    for rec in &ds.records {
        rec.validate()?;
        distributions.push(ccsd(&rec.graph)?);
    }
    let cols = distributions.iter().map(|c| c.largest()).max().unwrap_or(1);
    let rows = distributions.len();
    let mut entries = alloc::vec![0.0; rows * cols];
    for (j, c) in distributions.iter().enumerate() {
        for (size, count) in c.nonzero() {
            entries[j * cols + size - 1] = (size * count) as f64;
        }
    }
    let target = ds.records.iter().map(SurveyRecord::mean_estimate).collect();
    DesignMatrix::new(rows, cols, entries, target)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub weights: WeightVector,
    pub residual_norm: f64,
    /// Numerical rank of the design matrix.
    pub rank: usize,
    pub regularization: f64,
}

/// Minimizes `||A w - E||^2 + lambda ||w||^2`.
///
/// With `lambda = 0`, singular values below `max(m, N) * eps * s_max` are
/// treated as zero, which yields the minimum-norm least-squares solution.
pub fn fit_weights(dm: &DesignMatrix, lambda: f64) -> Result<FitResult> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidLambda(lambda));
    }
    if dm.entries.iter().chain(&dm.target).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSystem);
    }
    if dm.rows == 0 || dm.cols == 0 {
        return Err(Error::EmptyDataset);
    }

    let a = DMatrix::from_row_slice(dm.rows, dm.cols, &dm.entries);
    let e = DVector::from_column_slice(&dm.target);
    let svd = a.svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let s = &svd.singular_values;

    let s_max = s.iter().copied().fold(0.0, f64::max);
    let tol = dm.rows.max(dm.cols) as f64 * f64::EPSILON * s_max;
    let rank = s.iter().filter(|&&x| x > tol).count();

    let mut w = DVector::<f64>::zeros(dm.cols);
    for k in 0..s.len() {
        let sk = s[k];
        let gain = if lambda == 0.0 {
            if sk > tol {
                1.0 / sk
            } else {
                0.0
            }
        } else {
            sk / (sk * sk + lambda)
        };
        if gain == 0.0 {
            continue;
        }
        let coeff = u.column(k).dot(&e) * gain;
        w += v_t.row(k).transpose() * coeff;
    }

    let weights: Vec<f64> = w.iter().copied().collect();
    let residual_norm = dm.residual_norm(&weights);
    Ok(FitResult {
        weights: WeightVector::new(weights)?,
        residual_norm,
        rank,
        regularization: lambda,
    })
}
