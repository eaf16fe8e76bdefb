//! Small dense kernels shared across the crate: Householder factorizations
//! with full orthogonal factors, early-terminated pivoted QR, interpolative
//! row selection, and block stacking helpers.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::scalar::HlrScalar;

/// Householder QR with a full square `Q`: `A = Q * R`, `Q` is `m x m`
/// unitary and `R` is `m x n` upper trapezoidal.
pub fn full_qr<T: HlrScalar>(a: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = DMatrix::<T>::identity(m, m);
    for j in 0..n.min(m) {
        let len = m - j;
        if len <= 1 {
            break;
        }
        let mut v = DVector::<T>::zeros(len);
        for i in 0..len {
            v[i] = r[(j + i, j)];
        }
        let normx = v.norm();
        if normx == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0 == T::zero() {
            T::one()
        } else {
            x0 / T::from_f64(x0.modulus())
        };
        let alpha = -phase * T::from_f64(normx);
        v[0] -= alpha;
        let vnorm2 = v.norm_squared();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = T::from_f64(2.0 / vnorm2);
        // R[j.., j..] -= beta * v * (v^H R[j.., j..])
        for c in j..n {
            let mut dot = T::zero();
            for i in 0..len {
                dot += v[i].conjugate() * r[(j + i, c)];
            }
            let s = beta * dot;
            for i in 0..len {
                r[(j + i, c)] -= v[i] * s;
            }
        }
        // Q[:, j..] -= beta * (Q[:, j..] v) * v^H
        for row in 0..m {
            let mut dot = T::zero();
            for i in 0..len {
                dot += q[(row, j + i)] * v[i];
            }
            let s = beta * dot;
            for i in 0..len {
                q[(row, j + i)] -= s * v[i].conjugate();
            }
        }
        // Zero out the column explicitly to keep R clean.
        r[(j, j)] = alpha;
        for i in 1..len {
            r[(j + i, j)] = T::zero();
        }
    }
    (q, r)
}

/// Unitary `Q` (m x m) with `Q^H * U = [0; W]` where `W` is `k x k`,
/// `k = min(m, ncols)`. Returns `(Q, W)`.
pub fn ql_zero_top<T: HlrScalar>(u: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let (m, k) = u.shape();
    if k >= m {
        return (DMatrix::identity(m, m), u.clone());
    }
    let (qf, r) = full_qr(u);
    // Reverse the rows of Q^H U = [R; 0] so the zeros move to the top.
    let mut q = DMatrix::<T>::zeros(m, m);
    for i in 0..m {
        q.set_column(i, &qf.column(m - 1 - i).into_owned());
    }
    let mut w = DMatrix::<T>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            w[(i, j)] = r[(k - 1 - i, j)];
        }
    }
    (q, w)
}

/// Unitary `Z` (n x n) with `M * Z = [L, 0]` where `L` is `m x m` lower
/// triangular (requires `m <= n`). Returns `(L, Z)`.
pub fn lq_zero_right<T: HlrScalar>(m: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let rows = m.nrows();
    let (q, r) = full_qr(&m.adjoint());
    let l = r.view((0, 0), (rows, rows)).adjoint();
    (l, q)
}

/// Result of an early-terminated Householder QR with column pivoting.
pub struct PivotedQr<T: HlrScalar> {
    /// Orthonormal columns, `m x k`.
    pub q: DMatrix<T>,
    /// Rows of the triangular factor in permuted column order, `k x n`.
    pub r: DMatrix<T>,
    /// Column permutation: pivot order, `perm[t]` is the original column
    /// chosen at step `t` (only the first `k` entries were triangularized;
    /// the rest list the remaining columns).
    pub perm: Vec<usize>,
    pub rank: usize,
    /// Largest initial column norm (the first pivot).
    pub first_pivot: f64,
}

/// Businger-Golub column-pivoted QR, stopped once the Frobenius norm of the
/// trailing block (an upper bound on its spectral norm) drops to
/// `max(tol_abs, tol_rel * first_pivot)`, or at `max_rank` steps.
pub fn pivoted_qr<T: HlrScalar>(
    a: &DMatrix<T>,
    tol_rel: f64,
    tol_abs: f64,
    max_rank: usize,
) -> PivotedQr<T> {
    let (m, n) = a.shape();
    let kmax = max_rank.min(m).min(n);
    let mut work = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut colnorm2: Vec<f64> = (0..n).map(|j| work.column(j).norm_squared()).collect();
    let first_pivot = colnorm2.iter().cloned().fold(0.0, f64::max).sqrt();
    let threshold = tol_abs.max(tol_rel * first_pivot);
    let mut rank = 0;

    while rank < kmax {
        // Remaining Frobenius norm bounds the spectral norm of the block.
        let rem: f64 = colnorm2[rank..].iter().sum::<f64>().max(0.0);
        if rem.sqrt() <= threshold {
            break;
        }
        let (piv, _) = colnorm2[rank..]
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let piv = rank + piv;
        work.swap_columns(rank, piv);
        perm.swap(rank, piv);
        colnorm2.swap(rank, piv);

        // Householder reflector for column `rank`.
        let len = m - rank;
        let mut v = DVector::<T>::zeros(len);
        for i in 0..len {
            v[i] = work[(rank + i, rank)];
        }
        let normx = v.norm();
        if normx == 0.0 {
            break;
        }
        let x0 = v[0];
        let phase = if x0 == T::zero() {
            T::one()
        } else {
            x0 / T::from_f64(x0.modulus())
        };
        let alpha = -phase * T::from_f64(normx);
        v[0] -= alpha;
        let vnorm2 = v.norm_squared();
        if vnorm2 > 0.0 {
            let beta = T::from_f64(2.0 / vnorm2);
            for c in rank..n {
                let mut dot = T::zero();
                for i in 0..len {
                    dot += v[i].conjugate() * work[(rank + i, c)];
                }
                let s = beta * dot;
                for i in 0..len {
                    work[(rank + i, c)] -= v[i] * s;
                }
            }
        }
        work[(rank, rank)] = alpha;
        for i in 1..len {
            work[(rank + i, rank)] = T::zero();
        }
        rank += 1;
        // Exact norm refresh of the trailing block; same cost order as the
        // reflector application and immune to cancellation drift.
        for j in rank..n {
            colnorm2[j] = work.view((rank, j), (m - rank, 1)).norm_squared();
        }
    }

    // Re-factorize the selected columns to recover Q explicitly; cheap
    // relative to the pivoted sweep and keeps the code above allocation-free.
    let mut selected = DMatrix::<T>::zeros(m, rank);
    for t in 0..rank {
        selected.set_column(t, &a.column(perm[t]).into_owned());
    }
    let (qf, rf) = full_qr(&selected);
    let q = qf.view((0, 0), (m, rank)).into_owned();
    let mut r = DMatrix::<T>::zeros(rank, n);
    // R = Q^H * A (permuted): first k columns coincide with rf.
    for t in 0..rank {
        for i in 0..rank.min(t + 1) {
            r[(i, t)] = rf[(i, t)];
        }
    }
    for t in rank..n {
        let col = a.column(perm[t]);
        for i in 0..rank {
            let mut dot = T::zero();
            for row in 0..m {
                dot += q[(row, i)].conjugate() * col[row];
            }
            r[(i, t)] = dot;
        }
    }
    PivotedQr {
        q,
        r,
        perm,
        rank,
        first_pivot,
    }
}

/// Interpolative row selection: `S ~ X * S[rows, :]` with `X[rows, :] = I`.
/// Truncation keeps the trailing Frobenius mass below `tol_abs`; the rank is
/// capped at `max_rank`.
pub fn interpolative_rows<T: HlrScalar>(
    s: &DMatrix<T>,
    tol_abs: f64,
    max_rank: usize,
) -> (Vec<usize>, DMatrix<T>) {
    let m = s.nrows();
    let piv = pivoted_qr(&s.adjoint(), 0.0, tol_abs, max_rank);
    let k = piv.rank;
    let rows: Vec<usize> = piv.perm[..k].to_vec();
    if k == 0 {
        return (rows, DMatrix::zeros(m, 0));
    }
    // S^H(:, perm) = Q [R11 R12]  =>  S(perm_rest, :) = (R11^{-1} R12)^H S(rows, :)
    let r11 = piv.r.view((0, 0), (k, k)).into_owned();
    let r12 = piv.r.view((0, k), (k, s.nrows() - k)).into_owned();
    let z = r11
        .solve_upper_triangular(&r12)
        .expect("interpolative basis: triangular factor is singular");
    let mut x = DMatrix::<T>::zeros(m, k);
    for (t, &row) in rows.iter().enumerate() {
        x[(row, t)] = T::one();
    }
    for (t, &row) in piv.perm[k..].iter().enumerate() {
        for c in 0..k {
            x[(row, c)] = z[(c, t)].conjugate();
        }
    }
    (rows, x)
}

/// Row-wise Kronecker product (transpose Khatri-Rao): row `i` of the result
/// is `kron(a.row(i), b.row(i))`.
pub fn transpose_khatri_rao<T: HlrScalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    assert_eq!(a.nrows(), b.nrows(), "row counts must agree");
    let (n, q, m) = (a.nrows(), a.ncols(), b.ncols());
    let mut out = DMatrix::<T>::zeros(n, q * m);
    for i in 0..n {
        for ja in 0..q {
            for jb in 0..m {
                out[(i, ja * m + jb)] = a[(i, ja)] * b[(i, jb)];
            }
        }
    }
    out
}

pub fn hstack<T: HlrScalar>(blocks: &[&DMatrix<T>]) -> DMatrix<T> {
    let rows = blocks.iter().map(|b| b.nrows()).max().unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::<T>::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        debug_assert!(b.ncols() == 0 || b.nrows() == rows);
        if b.ncols() > 0 && b.nrows() > 0 {
            out.view_mut((0, at), (b.nrows(), b.ncols())).copy_from(*b);
        }
        at += b.ncols();
    }
    out
}

pub fn vstack<T: HlrScalar>(blocks: &[&DMatrix<T>]) -> DMatrix<T> {
    let cols = blocks.iter().map(|b| b.ncols()).max().unwrap_or(0);
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::<T>::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        debug_assert!(b.nrows() == 0 || b.ncols() == cols);
        if b.nrows() > 0 && b.ncols() > 0 {
            out.view_mut((at, 0), (b.nrows(), b.ncols())).copy_from(*b);
        }
        at += b.nrows();
    }
    out
}

/// Block diagonal stack of two matrices.
pub fn block_diag<T: HlrScalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let mut out = DMatrix::<T>::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    if a.nrows() > 0 && a.ncols() > 0 {
        out.view_mut((0, 0), a.shape()).copy_from(a);
    }
    if b.nrows() > 0 && b.ncols() > 0 {
        out.view_mut(a.shape(), b.shape()).copy_from(b);
    }
    out
}

pub fn gaussian_matrix<T: HlrScalar, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> DMatrix<T> {
    DMatrix::from_fn(rows, cols, |_, _| T::standard_normal(rng))
}

/// Exact spectral norm of a dense matrix via SVD; test/oracle use only.
pub fn spectral_norm<T: HlrScalar>(a: &DMatrix<T>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone().singular_values()[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_qr_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = gaussian_matrix::<f64, _>(9, 5, &mut rng);
        let (q, r) = full_qr(&a);
        assert!((&q * &r - &a).norm() < 1e-12);
        assert!((q.adjoint() * &q - DMatrix::<f64>::identity(9, 9)).norm() < 1e-12);
        for j in 0..5 {
            for i in (j + 1)..9 {
                assert!(r[(i, j)].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn full_qr_complex_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = gaussian_matrix::<Complex<f64>, _>(6, 6, &mut rng);
        let (q, r) = full_qr(&a);
        assert!((&q * &r - &a).norm() < 1e-12);
        assert!((q.adjoint() * &q - DMatrix::<Complex<f64>>::identity(6, 6)).norm() < 1e-12);
    }

    #[test]
    fn ql_zeroes_top_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = gaussian_matrix::<f64, _>(10, 3, &mut rng);
        let (q, w) = ql_zero_top(&u);
        let qhu = q.adjoint() * &u;
        assert!(qhu.view((0, 0), (7, 3)).norm() < 1e-12);
        assert!((qhu.view((7, 0), (3, 3)) - &w).norm() < 1e-12);
    }

    #[test]
    fn lq_zeroes_right_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let m = gaussian_matrix::<f64, _>(4, 9, &mut rng);
        let (l, z) = lq_zero_right(&m);
        let mz = &m * &z;
        assert!(mz.view((0, 4), (4, 5)).norm() < 1e-12);
        for j in 0..4 {
            for i in 0..j {
                assert!(l[(i, j)].abs() < 1e-12);
            }
        }
        assert!((mz.view((0, 0), (4, 4)) - &l).norm() < 1e-12);
    }

    #[test]
    fn pivoted_qr_exact_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = gaussian_matrix::<f64, _>(20, 3, &mut rng);
        let v = gaussian_matrix::<f64, _>(15, 3, &mut rng);
        let a = &u * v.transpose();
        let piv = pivoted_qr(&a, 1e-12, 0.0, usize::MAX);
        assert_eq!(piv.rank, 3);
        // Reconstruction through the permutation.
        let mut approx = DMatrix::<f64>::zeros(20, 15);
        let qr = &piv.q * &piv.r;
        for (t, &j) in piv.perm.iter().enumerate() {
            approx.set_column(j, &qr.column(t).into_owned());
        }
        assert!((approx - a).norm() < 1e-10);
    }

    #[test]
    fn interpolative_rows_reproduces_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let u = gaussian_matrix::<f64, _>(30, 4, &mut rng);
        let v = gaussian_matrix::<f64, _>(12, 4, &mut rng);
        let s = &u * v.transpose();
        let (rows, x) = interpolative_rows(&s, 1e-10, usize::MAX);
        assert_eq!(rows.len(), 4);
        let mut sk = DMatrix::<f64>::zeros(rows.len(), 12);
        for (t, &r) in rows.iter().enumerate() {
            sk.set_row(t, &s.row(r).into_owned());
        }
        assert!((&x * sk - &s).norm() < 1e-9 * s.norm());
        for (t, &r) in rows.iter().enumerate() {
            for c in 0..rows.len() {
                let expect = if c == t { 1.0 } else { 0.0 };
                assert!((x[(r, c)] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn khatri_rao_matches_entrywise_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let u1 = gaussian_matrix::<f64, _>(8, 2, &mut rng);
        let v1 = gaussian_matrix::<f64, _>(6, 2, &mut rng);
        let u2 = gaussian_matrix::<f64, _>(8, 3, &mut rng);
        let v2 = gaussian_matrix::<f64, _>(6, 3, &mut rng);
        let a = &u1 * v1.transpose();
        let b = &u2 * v2.transpose();
        let had = a.component_mul(&b);
        let uu = transpose_khatri_rao(&u1, &u2);
        let vv = transpose_khatri_rao(&v1, &v2);
        assert!((uu * vv.transpose() - had).norm() < 1e-12);
    }
}
