//! Minimal CSR sparse matrix: the output type of thresholded sparsification
//! and the little arithmetic the drivers need on it.

use nalgebra::DMatrix;

/// Compressed sparse row matrix over `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Build from (row, col, value) triplets; duplicates are summed and
    /// explicit zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> SparseMatrix {
        let mut items: Vec<(usize, usize, f64)> = triplets
            .into_iter()
            .filter(|&(_, _, v)| v != 0.0)
            .collect();
        items.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(items.len());
        let mut values: Vec<f64> = Vec::with_capacity(items.len());
        for (i, j, v) in items {
            assert!(i < nrows && j < ncols, "triplet out of bounds");
            if col_idx.len() > row_ptr[i + 1] - row_ptr[0]
                && row_ptr[i + 1] == col_idx.len()
                && *col_idx.last().unwrap() == j
                && row_ptr[i] < col_idx.len()
            {
                // unreachable; kept simple below instead
            }
            if row_ptr[i + 1] == col_idx.len()
                && col_idx.last() == Some(&j)
                && row_ptr[i] < col_idx.len()
            {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
            }
            for r in (i + 1)..=nrows {
                row_ptr[r] = col_idx.len();
            }
        }
        SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> SparseMatrix {
        SparseMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(move |t| (i, self.col_idx[t], self.values[t]))
        })
    }

    /// Largest distance from the diagonal among stored nonzeros.
    pub fn bandwidth(&self) -> usize {
        self.triplets()
            .filter(|&(_, _, v)| v != 0.0)
            .map(|(i, j, _)| i.abs_diff(j))
            .max()
            .unwrap_or(0)
    }

    /// Exact 1-norm (maximum absolute column sum).
    pub fn one_norm(&self) -> f64 {
        let mut sums = vec![0.0_f64; self.ncols];
        for (_, j, v) in self.triplets() {
            sums[j] += v.abs();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Sparse-sparse product.
    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch");
        let mut triplets = Vec::new();
        let mut acc: Vec<f64> = vec![0.0; other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..self.nrows {
            for t in self.row_ptr[i]..self.row_ptr[i + 1] {
                let k = self.col_idx[t];
                let a = self.values[t];
                for s in other.row_ptr[k]..other.row_ptr[k + 1] {
                    let j = other.col_idx[s];
                    if acc[j] == 0.0 {
                        touched.push(j);
                    }
                    acc[j] += a * other.values[s];
                }
            }
            for &j in &touched {
                if acc[j] != 0.0 {
                    triplets.push((i, j, acc[j]));
                }
                acc[j] = 0.0;
            }
            touched.clear();
        }
        SparseMatrix::from_triplets(self.nrows, other.ncols, triplets)
    }

    /// `self - other`.
    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let triplets = self
            .triplets()
            .chain(other.triplets().map(|(i, j, v)| (i, j, -v)));
        SparseMatrix::from_triplets(self.nrows, self.ncols, triplets)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            out[(i, j)] += v;
        }
        out
    }
}
