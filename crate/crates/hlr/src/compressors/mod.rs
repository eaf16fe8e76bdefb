//! Low-rank compression kernels shared by all constructors: truncated SVD,
//! pivoted QR, two-sided Lanczos, cross approximation, adaptive randomized
//! sampling, factor recompression, and spectral-norm estimation.

mod aca;
mod lanczos;
mod randomized;

pub use aca::aca_partial_pivot;
pub use lanczos::lanczos_compress;
pub use randomized::randomized_range;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dense::{full_qr, gaussian_matrix, pivoted_qr};
use crate::lowrank::LowRankFactor;
use crate::operator::Operator;
use crate::options::{Compression, Options};
use crate::scalar::HlrScalar;

/// Truncated SVD keeping exactly the singular triplets with `sigma > tol_abs`.
/// The error of the result equals the first discarded singular value.
pub fn truncated_svd<T: HlrScalar>(m: &DMatrix<T>, tol_abs: f64) -> LowRankFactor<T> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return LowRankFactor::zero(rows, cols);
    }
    let svd = m.clone().svd(true, true);
    let sigma = &svd.singular_values;
    let k = sigma.iter().take_while(|&&s| s > tol_abs).count();
    if k == 0 {
        return LowRankFactor::zero(rows, cols);
    }
    let u_thin = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let mut u = DMatrix::<T>::zeros(rows, k);
    for j in 0..k {
        u.set_column(j, &(u_thin.column(j) * T::from_f64(sigma[j])));
    }
    let v = vt.rows(0, k).adjoint();
    LowRankFactor::new(u, v)
}

/// Householder QR with column pivoting, stopped once an upper bound on the
/// spectral norm of the remainder falls below `tol_rel` times the maximum
/// pivot element.
pub fn pivoted_qr_compress<T: HlrScalar>(m: &DMatrix<T>, tol_rel: f64) -> LowRankFactor<T> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return LowRankFactor::zero(rows, cols);
    }
    let piv = pivoted_qr(m, tol_rel, 0.0, usize::MAX);
    if piv.rank == 0 {
        return LowRankFactor::zero(rows, cols);
    }
    // M P = Q R  =>  M = Q (R P^T); V^H = R P^T.
    let mut v = DMatrix::<T>::zeros(cols, piv.rank);
    for (t, &j) in piv.perm.iter().enumerate() {
        for i in 0..piv.rank {
            v[(j, i)] = piv.r[(i, t)].conjugate();
        }
    }
    LowRankFactor::new(piv.q, v)
}

/// Compress a dense block at a tolerance relative to its own spectral norm,
/// dispatching on the configured method.
pub fn compress_dense<T: HlrScalar>(m: &DMatrix<T>, opts: &Options) -> LowRankFactor<T> {
    match opts.compression {
        Compression::Svd => {
            let (rows, cols) = m.shape();
            if rows == 0 || cols == 0 {
                return LowRankFactor::zero(rows, cols);
            }
            let sigma1 = m.clone().singular_values()[0];
            truncated_svd(m, opts.threshold * sigma1)
        }
        Compression::Qr => pivoted_qr_compress(m, opts.threshold),
    }
}

/// QR-based recompression of an existing factorization at an absolute
/// tolerance. Never increases the rank.
pub fn recompress_lowrank<T: HlrScalar>(
    f: &LowRankFactor<T>,
    tol_abs: f64,
) -> LowRankFactor<T> {
    let (m, n) = (f.nrows(), f.ncols());
    if f.rank() == 0 {
        return LowRankFactor::zero(m, n);
    }
    let k = f.rank();
    let (qu, ru) = thin_qr(f.u());
    let (qv, rv) = thin_qr(f.v());
    let core = &ru * rv.adjoint();
    let small = truncated_svd(&core, tol_abs);
    if small.rank() >= k {
        // No compression possible; keep the input to preserve idempotence.
        return f.clone();
    }
    LowRankFactor::new(&qu * small.u(), &qv * small.v())
}

/// Thin QR via the full Householder kernel.
fn thin_qr<T: HlrScalar>(a: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let (m, n) = a.shape();
    let k = m.min(n);
    let (q, r) = full_qr(a);
    (
        q.view((0, 0), (m, k)).into_owned(),
        r.view((0, 0), (k, n)).into_owned(),
    )
}

/// Power-method estimate of the spectral norm of an operator, run on
/// `A A^*` with a fixed iteration budget and a deterministic start vector.
/// The estimate never exceeds the true norm.
pub fn estimate_norm2<T: HlrScalar>(op: &dyn Operator<T>) -> f64 {
    estimate_norm2_seeded(op, 0x5eed)
}

pub fn estimate_norm2_seeded<T: HlrScalar>(op: &dyn Operator<T>, seed: u64) -> f64 {
    let (m, n) = (op.nrows(), op.ncols());
    if m == 0 || n == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = gaussian_matrix::<T, _>(n, 1, &mut rng);
    let nx = x.norm();
    if nx == 0.0 {
        return 0.0;
    }
    x /= T::from_f64(nx);
    let mut estimate = 0.0;
    for _ in 0..20 {
        let y = op.apply(&x);
        let ny = y.norm();
        if ny == 0.0 {
            return 0.0;
        }
        estimate = ny;
        x = op.apply_adjoint(&(y / T::from_f64(ny)));
        let nx = x.norm();
        if nx == 0.0 {
            return estimate;
        }
        x /= T::from_f64(nx);
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::spectral_norm;
    use crate::operator::DenseOperator;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_with_rank(m: usize, n: usize, rank: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = gaussian_matrix::<f64, _>(m, rank, &mut rng);
        let v = gaussian_matrix::<f64, _>(n, rank, &mut rng);
        u * v.transpose()
    }

    #[test]
    fn truncated_svd_zero_matrix() {
        let m = DMatrix::<f64>::zeros(7, 4);
        let f = truncated_svd(&m, 1e-12);
        assert_eq!(f.rank(), 0);
    }

    #[test]
    fn truncated_svd_exact_rank() {
        let m = random_with_rank(30, 22, 3, 1);
        let f = truncated_svd(&m, 1e-12 * spectral_norm(&m));
        assert_eq!(f.rank(), 3);
        assert!(spectral_norm(&(f.to_dense() - &m)) < 1e-12 * spectral_norm(&m));
    }

    #[test]
    fn truncated_svd_error_is_next_singular_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = gaussian_matrix::<f64, _>(50, 40, &mut rng);
        let sigma = m.clone().singular_values();
        let f = truncated_svd(&m, sigma[4] * 1.01);
        assert_eq!(f.rank(), 4);
        let err = spectral_norm(&(f.to_dense() - &m));
        assert!((err - sigma[4]).abs() < 1e-10 * sigma[0]);
    }

    #[test]
    fn pivoted_qr_identity_is_full_rank() {
        let m = DMatrix::<f64>::identity(4, 4);
        let f = pivoted_qr_compress(&m, 1e-12);
        assert_eq!(f.rank(), 4);
        assert!(spectral_norm(&(f.to_dense() - &m)) < 1e-12);
    }

    #[test]
    fn pivoted_qr_rank_one() {
        let m = random_with_rank(25, 13, 1, 3);
        let f = pivoted_qr_compress(&m, 0.5);
        assert_eq!(f.rank(), 1);
        assert!(spectral_norm(&(f.to_dense() - &m)) < 1e-12 * spectral_norm(&m));
    }

    #[test]
    fn pivoted_qr_rank_matches_svd_count_on_hilbert() {
        let n = 64;
        let h = DMatrix::<f64>::from_fn(n, n, |i, j| 1.0 / (i + j + 1) as f64);
        let sigma = h.clone().singular_values();
        let expected = sigma.iter().filter(|&&s| s > 1e-10 * sigma[0]).count();
        let f = pivoted_qr_compress(&h, 1e-10);
        assert!(
            (f.rank() as i64 - expected as i64).abs() <= 2,
            "rank {} vs svd count {}",
            f.rank(),
            expected
        );
        assert!(spectral_norm(&(f.to_dense() - &h)) < 1e-8 * sigma[0]);
    }

    #[test]
    fn recompress_duplicated_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = gaussian_matrix::<f64, _>(12, 1, &mut rng);
        let v = gaussian_matrix::<f64, _>(9, 1, &mut rng);
        let f = LowRankFactor::new(
            crate::dense::hstack(&[&u, &u]),
            crate::dense::hstack(&[&v, &v]),
        );
        let dense = f.to_dense();
        let g = recompress_lowrank(&f, 1e-12 * spectral_norm(&dense));
        assert_eq!(g.rank(), 1);
        assert!(spectral_norm(&(g.to_dense() - dense)) < 1e-10);
    }

    #[test]
    fn recompress_keeps_significant_rank_and_is_idempotent() {
        let m = random_with_rank(20, 20, 3, 5);
        // Represent the same rank-3 matrix as a rank-6 sum of two halves.
        let f3 = truncated_svd(&m, 1e-13 * spectral_norm(&m));
        let half = f3.scale(0.5);
        let f6 = half.sum(&half);
        assert_eq!(f6.rank(), 6);
        let tol = 1e-10 * spectral_norm(&m);
        let g = recompress_lowrank(&f6, tol);
        assert_eq!(g.rank(), 3);
        assert!(spectral_norm(&(g.to_dense() - &m)) < tol * 10.0);
        let g2 = recompress_lowrank(&g, tol);
        assert_eq!(g2.rank(), g.rank());
    }

    #[test]
    fn recompress_leaves_orthonormal_factor_unchanged() {
        let m = random_with_rank(15, 15, 4, 6);
        let f = truncated_svd(&m, 1e-13 * spectral_norm(&m));
        let g = recompress_lowrank(&f, 1e-14 * spectral_norm(&m));
        assert_eq!(g.rank(), f.rank());
    }

    #[test]
    fn estimate_norm2_diagonal() {
        let m = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]));
        let op = DenseOperator { matrix: &m };
        let est = estimate_norm2(&op);
        assert!((est - 3.0).abs() < 0.03);
    }

    #[test]
    fn estimate_norm2_zero() {
        let m = DMatrix::<f64>::zeros(5, 5);
        let op = DenseOperator { matrix: &m };
        assert_eq!(estimate_norm2(&op), 0.0);
    }

    #[test]
    fn estimate_norm2_random_within_5_percent() {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let m = gaussian_matrix::<f64, _>(100, 100, &mut rng);
            let truth = spectral_norm(&m);
            let op = DenseOperator { matrix: &m };
            let est = estimate_norm2_seeded(&op, seed);
            assert!(est <= truth * (1.0 + 1e-10), "overestimate at seed {seed}");
            assert!(est >= 0.95 * truth, "poor estimate at seed {seed}: {est} vs {truth}");
        }
    }
}
