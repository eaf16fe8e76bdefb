//! Two-sided Lanczos (Golub-Kahan) bidiagonalization for matrix-free
//! low-rank approximation.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compressors::truncated_svd;
use crate::dense::gaussian_matrix;
use crate::lowrank::LowRankFactor;
use crate::operator::Operator;
use crate::scalar::HlrScalar;
use crate::{Error, Result};

/// Bidiagonalize the operator with full reorthogonalization, stopping once
/// the norm of the rank-one increment stays below `tol` times the running
/// norm estimate for three consecutive steps. The final factor is truncated
/// by an SVD of the small bidiagonal core at the same relative tolerance.
pub fn lanczos_compress<T: HlrScalar>(
    op: &dyn Operator<T>,
    tol: f64,
) -> Result<LowRankFactor<T>> {
    let (m, n) = (op.nrows(), op.ncols());
    if m == 0 || n == 0 {
        return Ok(LowRankFactor::zero(m, n));
    }
    let kmax = m.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a9c);

    let mut vs: Vec<DVector<T>> = Vec::new();
    let mut us: Vec<DVector<T>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut v = DVector::from_column_slice(gaussian_matrix::<T, _>(n, 1, &mut rng).as_slice());
    v /= T::from_f64(v.norm());

    let mut u = op.apply_vec(&v);
    let mut alpha = u.norm();
    if alpha == 0.0 {
        // The start vector may be unlucky for structured operators; one
        // retry before declaring the operator zero on this subspace.
        v = DVector::from_column_slice(gaussian_matrix::<T, _>(n, 1, &mut rng).as_slice());
        v /= T::from_f64(v.norm());
        u = op.apply_vec(&v);
        alpha = u.norm();
        if alpha == 0.0 {
            return Ok(LowRankFactor::zero(m, n));
        }
    }
    u /= T::from_f64(alpha);
    vs.push(v);
    us.push(u);
    alphas.push(alpha);

    let mut small_steps = 0usize;
    let mut converged = false;
    let mut running_norm = alpha;
    let breakdown = 1e-14;

    loop {
        let k = us.len();
        // beta_k v_{k+1} = A^H u_k - alpha_k v_k (reorthogonalized twice)
        let mut w = op.apply_adjoint_vec(&us[k - 1]);
        for _ in 0..2 {
            for v_old in &vs {
                let coeff = v_old.dotc(&w);
                w -= v_old * coeff;
            }
        }
        let beta = w.norm();
        if beta <= breakdown * running_norm {
            converged = true;
            break;
        }
        if vs.len() == kmax {
            break;
        }
        let v_next = w / T::from_f64(beta);
        vs.push(v_next);
        betas.push(beta);

        // alpha_{k+1} u_{k+1} = A v_{k+1} - beta_k u_k (reorthogonalized)
        let mut z = op.apply_vec(vs.last().unwrap());
        for _ in 0..2 {
            for u_old in &us {
                let coeff = u_old.dotc(&z);
                z -= u_old * coeff;
            }
        }
        let alpha_next = z.norm();
        if alpha_next <= breakdown * running_norm {
            converged = true;
            break;
        }
        us.push(z / T::from_f64(alpha_next));
        alphas.push(alpha_next);

        running_norm = bidiagonal_norm(&alphas, &betas);
        let increment = (alpha_next * alpha_next + beta * beta).sqrt();
        if increment <= tol * running_norm {
            small_steps += 1;
            if small_steps >= 3 {
                converged = true;
                break;
            }
        } else {
            small_steps = 0;
        }
        if us.len() == kmax {
            break;
        }
    }

    if !converged {
        // Full Krylov space built without meeting the criterion. With full
        // reorthogonalization the factorization is exact at this point, so
        // only report failure when the trailing coupling is significant.
        let tail = alphas
            .last()
            .copied()
            .unwrap_or(0.0)
            .hypot(betas.last().copied().unwrap_or(0.0));
        if tail > tol.max(1e-12) * running_norm && kmax > 8 {
            return Err(Error::NotConverged(format!(
                "lanczos reached full rank {kmax} without meeting the criterion"
            )));
        }
    }

    // Assemble U, V and the (ku x kv) bidiagonal core, then truncate. When
    // the alpha-recurrence broke down there is one more v than u; the last
    // beta coupling is kept in the rectangular core.
    let ku = us.len();
    let kv = vs.len();
    let mut core = DMatrix::<T>::zeros(ku, kv);
    for i in 0..ku {
        core[(i, i)] = T::from_f64(alphas[i]);
        if i + 1 < kv {
            core[(i, i + 1)] = T::from_f64(betas[i]);
        }
    }
    let truncated = truncated_svd(&core, tol * running_norm.max(1e-300));
    if truncated.rank() == 0 {
        return Ok(LowRankFactor::zero(m, n));
    }
    let mut umat = DMatrix::<T>::zeros(m, ku);
    for (j, col) in us.iter().enumerate() {
        umat.set_column(j, col);
    }
    let mut vmat = DMatrix::<T>::zeros(n, kv);
    for (j, col) in vs.iter().enumerate() {
        vmat.set_column(j, col);
    }
    Ok(LowRankFactor::new(
        &umat * truncated.u(),
        &vmat * truncated.v(),
    ))
}

fn bidiagonal_norm(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    if k == 0 {
        return 0.0;
    }
    let mut b = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        b[(i, i)] = alphas[i];
        if i + 1 < k {
            b[(i, i + 1)] = betas[i];
        }
    }
    b.singular_values()[0]
}
