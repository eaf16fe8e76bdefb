//! Adaptive randomized range finder.

use nalgebra::DMatrix;
use rand::Rng;

use crate::compressors::{estimate_norm2, truncated_svd};
use crate::dense::{gaussian_matrix, hstack, pivoted_qr};
use crate::lowrank::LowRankFactor;
use crate::operator::Operator;
use crate::scalar::HlrScalar;
use crate::Result;

/// Number of Gaussian probe vectors per block; the trailing block doubles
/// as the a-posteriori error certificate.
const BLOCK: usize = 10;

/// Adaptive randomized low-rank approximation of an operator. Blocks of ten
/// Gaussian samples extend an orthonormal range basis until the residual
/// norms of a fresh block certify that the remainder is below `tol` times a
/// spectral-norm estimate; the certificate holds with the failure
/// probability of the ten-probe test.
pub fn randomized_range<T: HlrScalar, R: Rng + ?Sized>(
    op: &dyn Operator<T>,
    tol: f64,
    rng: &mut R,
) -> Result<LowRankFactor<T>> {
    let (m, n) = (op.nrows(), op.ncols());
    if m == 0 || n == 0 {
        return Ok(LowRankFactor::zero(m, n));
    }
    let norm_est = estimate_norm2(op);
    if norm_est == 0.0 {
        return Ok(LowRankFactor::zero(m, n));
    }
    let tol_abs = tol * norm_est;
    // max ||(I - QQ^H) A w_i|| <= eps / (10 sqrt(2/pi)) for 10 probes
    // certifies ||(I - QQ^H) A|| <= eps with probability 1 - 10^-10.
    let probe_bound = tol_abs / (10.0 * (2.0 / std::f64::consts::PI).sqrt());
    let kcap = m.min(n);

    let mut q = DMatrix::<T>::zeros(m, 0);
    loop {
        let omega = gaussian_matrix::<T, _>(n, BLOCK, rng);
        let mut y = op.apply(&omega);
        if q.ncols() > 0 {
            y -= &q * (q.adjoint() * &y);
        }
        let worst = (0..y.ncols())
            .map(|j| y.column(j).norm())
            .fold(0.0, f64::max);
        if worst <= probe_bound || q.ncols() >= kcap {
            break;
        }
        // Orthonormalize the block against Q and itself, dropping directions
        // already captured.
        if q.ncols() > 0 {
            y -= &q * (q.adjoint() * &y);
        }
        let piv = pivoted_qr(&y, 0.0, 1e-12 * norm_est.max(worst), usize::MAX);
        if piv.rank == 0 {
            break;
        }
        let fresh = piv.q.columns(0, piv.rank.min(kcap - q.ncols())).into_owned();
        q = hstack(&[&q, &fresh]);
    }

    if q.ncols() == 0 {
        return Ok(LowRankFactor::zero(m, n));
    }
    // A ~ Q (Q^H A); SVD of the small factor gives the final truncation.
    let c = op.apply_adjoint(&q).adjoint(); // k x n
    let small = truncated_svd(&c, tol_abs);
    if small.rank() == 0 {
        return Ok(LowRankFactor::zero(m, n));
    }
    Ok(LowRankFactor::new(&q * small.u(), small.v().clone()))
}
