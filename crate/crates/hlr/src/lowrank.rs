//! Low-rank factor pairs `U * V^H`, the storage unit of every off-diagonal
//! block.

use nalgebra::{DMatrix, DVector};

use crate::dense::{hstack, vstack};
use crate::scalar::HlrScalar;

/// A matrix represented as `U * V^H` with `U: m x k`, `V: n x k`.
/// Rank zero (`k = 0`) encodes the exact zero matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankFactor<T: HlrScalar> {
    u: DMatrix<T>,
    v: DMatrix<T>,
}

impl<T: HlrScalar> LowRankFactor<T> {
    pub fn new(u: DMatrix<T>, v: DMatrix<T>) -> Self {
        assert_eq!(
            u.ncols(),
            v.ncols(),
            "low-rank factors must share the column count"
        );
        LowRankFactor { u, v }
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        LowRankFactor {
            u: DMatrix::zeros(nrows, 0),
            v: DMatrix::zeros(ncols, 0),
        }
    }

    pub fn nrows(&self) -> usize {
        self.u.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.v.nrows()
    }

    pub fn rank(&self) -> usize {
        self.u.ncols()
    }

    pub fn u(&self) -> &DMatrix<T> {
        &self.u
    }

    pub fn v(&self) -> &DMatrix<T> {
        &self.v
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        if self.rank() == 0 {
            DMatrix::zeros(self.nrows(), self.ncols())
        } else {
            &self.u * self.v.adjoint()
        }
    }

    /// `(U V^H) x`
    pub fn apply(&self, x: &DVector<T>) -> DVector<T> {
        if self.rank() == 0 {
            return DVector::zeros(self.nrows());
        }
        &self.u * (self.v.adjoint() * x)
    }

    /// `(U V^H) X` for a block of columns.
    pub fn apply_mat(&self, x: &DMatrix<T>) -> DMatrix<T> {
        if self.rank() == 0 {
            return DMatrix::zeros(self.nrows(), x.ncols());
        }
        &self.u * (self.v.adjoint() * x)
    }

    /// `(U V^H)^* x = V (U^H x)`
    pub fn apply_adjoint(&self, x: &DVector<T>) -> DVector<T> {
        if self.rank() == 0 {
            return DVector::zeros(self.ncols());
        }
        &self.v * (self.u.adjoint() * x)
    }

    pub fn apply_adjoint_mat(&self, x: &DMatrix<T>) -> DMatrix<T> {
        if self.rank() == 0 {
            return DMatrix::zeros(self.ncols(), x.ncols());
        }
        &self.v * (self.u.adjoint() * x)
    }

    /// The adjoint factorization `V U^H`.
    pub fn adjoint(&self) -> Self {
        LowRankFactor {
            u: self.v.clone(),
            v: self.u.clone(),
        }
    }

    pub fn scale(&self, alpha: T) -> Self {
        LowRankFactor {
            u: &self.u * alpha,
            v: self.v.clone(),
        }
    }

    /// Structural sum: concatenated factors, rank adds up.
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.nrows(), other.nrows());
        assert_eq!(self.ncols(), other.ncols());
        LowRankFactor {
            u: hstack(&[&self.u, &other.u]),
            v: hstack(&[&self.v, &other.v]),
        }
    }

    /// Product of two factorizations: `(U1 V1^H)(U2 V2^H)`, rank is the
    /// smaller of the two.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols(), other.nrows());
        if self.rank() == 0 || other.rank() == 0 {
            return LowRankFactor::zero(self.nrows(), other.ncols());
        }
        let core = self.v.adjoint() * &other.u;
        if self.rank() <= other.rank() {
            LowRankFactor {
                u: self.u.clone(),
                v: &other.v * core.adjoint(),
            }
        } else {
            LowRankFactor {
                u: &self.u * core,
                v: other.v.clone(),
            }
        }
    }

    /// Restriction to a row range (all columns kept).
    pub fn restrict_rows(&self, rows: std::ops::Range<usize>) -> Self {
        LowRankFactor {
            u: self.u.rows(rows.start, rows.end - rows.start).into_owned(),
            v: self.v.clone(),
        }
    }

    /// Restriction to a column range (all rows kept).
    pub fn restrict_cols(&self, cols: std::ops::Range<usize>) -> Self {
        LowRankFactor {
            u: self.u.clone(),
            v: self.v.rows(cols.start, cols.end - cols.start).into_owned(),
        }
    }

    pub fn restrict(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        self.restrict_rows(rows).restrict_cols(cols)
    }

    /// Stack two factors vertically: `[A; B]` with rank the sum.
    pub fn vcat(top: &Self, bottom: &Self) -> Self {
        assert_eq!(top.ncols(), bottom.ncols());
        let zeros_top = DMatrix::zeros(top.nrows(), bottom.rank());
        let zeros_bot = DMatrix::zeros(bottom.nrows(), top.rank());
        LowRankFactor {
            u: vstack(&[
                &hstack(&[&top.u, &zeros_top]),
                &hstack(&[&zeros_bot, &bottom.u]),
            ]),
            v: hstack(&[&top.v, &bottom.v]),
        }
    }

    /// Frobenius norm of the represented matrix, computed from the factors.
    pub fn frobenius_norm(&self) -> f64 {
        if self.rank() == 0 {
            return 0.0;
        }
        // ||U V^H||_F^2 = trace((U^H U)(V^H V))
        let g1 = self.u.adjoint() * &self.u;
        let g2 = self.v.adjoint() * &self.v;
        let prod = g1 * g2;
        let mut tr = 0.0;
        for i in 0..prod.nrows() {
            tr += prod[(i, i)].real();
        }
        tr.max(0.0).sqrt()
    }

    /// Stored scalar count.
    pub fn memory(&self) -> usize {
        self.u.len() + self.v.len()
    }
}
