//! Matrix-free operator abstraction used by the sampling-based constructors.

use nalgebra::{DMatrix, DVector};

use crate::scalar::HlrScalar;

/// A linear operator accessed through products with blocks of vectors.
pub trait Operator<T: HlrScalar> {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    /// `A * x` for a block of column vectors.
    fn apply(&self, x: &DMatrix<T>) -> DMatrix<T>;

    /// `A^* * x` for a block of column vectors.
    fn apply_adjoint(&self, x: &DMatrix<T>) -> DMatrix<T>;

    fn apply_vec(&self, x: &DVector<T>) -> DVector<T> {
        let y = self.apply(&DMatrix::from_column_slice(x.len(), 1, x.as_slice()));
        DVector::from_column_slice(y.as_slice())
    }

    fn apply_adjoint_vec(&self, x: &DVector<T>) -> DVector<T> {
        let y = self.apply_adjoint(&DMatrix::from_column_slice(x.len(), 1, x.as_slice()));
        DVector::from_column_slice(y.as_slice())
    }
}

/// Operator built from a pair of closures acting column by column.
pub struct FnOperator<T, F, G>
where
    F: Fn(&DVector<T>) -> DVector<T>,
    G: Fn(&DVector<T>) -> DVector<T>,
{
    nrows: usize,
    ncols: usize,
    forward: F,
    adjoint: G,
    _marker: std::marker::PhantomData<T>,
}

impl<T, F, G> FnOperator<T, F, G>
where
    T: HlrScalar,
    F: Fn(&DVector<T>) -> DVector<T>,
    G: Fn(&DVector<T>) -> DVector<T>,
{
    pub fn new(nrows: usize, ncols: usize, forward: F, adjoint: G) -> Self {
        FnOperator {
            nrows,
            ncols,
            forward,
            adjoint,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<T, F, G> Operator<T> for FnOperator<T, F, G>
where
    T: HlrScalar,
    F: Fn(&DVector<T>) -> DVector<T>,
    G: Fn(&DVector<T>) -> DVector<T>,
{
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply(&self, x: &DMatrix<T>) -> DMatrix<T> {
        assert_eq!(x.nrows(), self.ncols, "operator/input dimension mismatch");
        let mut y = DMatrix::zeros(self.nrows, x.ncols());
        for j in 0..x.ncols() {
            let col = DVector::from_column_slice(x.column(j).as_slice());
            y.set_column(j, &(self.forward)(&col));
        }
        y
    }

    fn apply_adjoint(&self, x: &DMatrix<T>) -> DMatrix<T> {
        assert_eq!(x.nrows(), self.nrows, "operator/input dimension mismatch");
        let mut y = DMatrix::zeros(self.ncols, x.ncols());
        for j in 0..x.ncols() {
            let col = DVector::from_column_slice(x.column(j).as_slice());
            y.set_column(j, &(self.adjoint)(&col));
        }
        y
    }
}

/// Dense matrix viewed as an operator; mainly used in tests and as the
/// densification oracle for the sampling constructors.
pub struct DenseOperator<'a, T: HlrScalar> {
    pub matrix: &'a DMatrix<T>,
}

impl<T: HlrScalar> Operator<T> for DenseOperator<'_, T> {
    fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    fn apply(&self, x: &DMatrix<T>) -> DMatrix<T> {
        self.matrix * x
    }

    fn apply_adjoint(&self, x: &DMatrix<T>) -> DMatrix<T> {
        self.matrix.adjoint() * x
    }
}
