use nalgebra::DMatrix;

use crate::error::{EelError, Result};

/// Relative singular-value cutoff used to decide the rank of the centered data.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// An `n x d` matrix of observations with its mean and rank cached.
///
/// Rows are observations. Construction rejects non-finite entries and
/// `n <= d`; a rank-deficient (flat) sample is accepted here and reported
/// as [`EelError::DegenerateSample`] by the operations that need a
/// full-dimensional hull.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    data: Vec<f64>,
    n: usize,
    d: usize,
    mean: Vec<f64>,
    rank: usize,
}

impl Sample {
    /// Builds a sample from row-major data with `d` columns.
    pub fn from_flat(data: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(EelError::InvalidSample("dimension must be at least 1".into()));
        }
        if !data.len().is_multiple_of(d) {
            return Err(EelError::InvalidSample(format!(
                "{} values cannot be split into rows of length {d}",
                data.len()
            )));
        }
        let n = data.len() / d;
        if n <= d {
            return Err(EelError::InvalidSample(format!("need more observations than dimensions (n = {n}, d = {d})")));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(EelError::InvalidSample(format!("non-finite value in row {}, column {}", pos / d, pos % d)));
        }

        let mut mean = vec![0.0; d];
        for row in data.chunks_exact(d) {
            for (m, x) in mean.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }

        let rank = centered_rank(&data, &mean, n, d);
        Ok(Self { data, n, d, mean, rank })
    }

    /// Builds a sample from a list of rows of equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(EelError::InvalidSample(format!("row {i} has {} columns, expected {d}", row.len())));
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, d)
    }

    /// Builds a one-dimensional sample.
    pub fn univariate(values: &[f64]) -> Result<Self> {
        Self::from_flat(values.to_vec(), 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Sample mean, the center of every mapping in this crate.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Numerical rank of the centered data matrix.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_degenerate(&self) -> bool {
        self.rank < self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.d)
    }

    /// Row-major view of the observations.
    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Values of column `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[j])
    }

    pub(crate) fn require_full_rank(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(EelError::DegenerateSample { rank: self.rank, dim: self.d })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_point(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.d {
            return Err(EelError::DimensionMismatch { expected: self.d, found: theta.len() });
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(EelError::DomainError("parameter value must be finite".into()));
        }
        Ok(())
    }
}

fn centered_rank(data: &[f64], mean: &[f64], n: usize, d: usize) -> usize {
    let centered = DMatrix::from_fn(n, d, |i, j| data[i * d + j] - mean[j]);
    let sv = centered.singular_values();
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * largest).count()
}
