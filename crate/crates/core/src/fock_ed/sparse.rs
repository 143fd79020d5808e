use std::collections::BTreeMap;

use nalgebra::DMatrix;

/// Real sparse matrix in compressed-row form. Intended for symmetric
/// operators; [`SymmetricSparse::asymmetry`] measures how far it is from it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparse {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymmetricSparse {
    /// Builds from per-row accumulators; duplicate entries were already summed.
    pub(crate) fn from_rows(rows: Vec<BTreeMap<usize, f64>>) -> Self {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                if v != 0.0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_rows(
            diag.iter()
                .enumerate()
                .map(|(i, &v)| BTreeMap::from([(i, v)]))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(c, v)| v * x[c]).sum();
        }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Infinity norm, an upper bound on the spectral norm.
    pub fn norm_estimate(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `max |A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_and_symmetry() {
        let m = SymmetricSparse::from_rows(vec![
            BTreeMap::from([(0, 2.0), (1, -1.0)]),
            BTreeMap::from([(0, -1.0), (1, 3.0)]),
        ]);
        let mut y = [0.0; 2];
        m.matvec(&[1.0, 1.0], &mut y);
        assert_eq!(y, [1.0, 2.0]);
        assert_eq!(m.asymmetry(), 0.0);
        assert_eq!(m.norm_estimate(), 4.0);
        assert_eq!(m.to_dense()[(1, 0)], -1.0);
    }
}
