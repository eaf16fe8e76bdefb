//! Adaptive cross approximation with partial pivoting.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::hstack;
use crate::lowrank::LowRankFactor;
use crate::scalar::HlrScalar;

/// Cross approximation of an `m x n` matrix given only an entry evaluator,
/// using `O(k (m + n))` evaluations. Stops once the new cross term drops
/// below `tol` times a running Frobenius estimate of the approximation.
///
/// A zero pivot row triggers a restart at the row of the largest residual
/// among ten random samples; if no nonzero residual is found the current
/// factor is returned.
pub fn aca_partial_pivot<T, E>(entry: E, m: usize, n: usize, tol: f64) -> LowRankFactor<T>
where
    T: HlrScalar,
    E: Fn(usize, usize) -> T,
{
    if m == 0 || n == 0 {
        return LowRankFactor::zero(m, n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xacaa);
    let kmax = m.min(n);
    let mut us: Vec<DVector<T>> = Vec::new();
    let mut vs: Vec<DVector<T>> = Vec::new();
    let mut used_rows = vec![false; m];
    let mut frob2 = 0.0_f64;
    let mut row = 0usize;
    let mut restarts_left = 3usize;

    'outer: while us.len() < kmax {
        used_rows[row] = true;
        // Residual of the pivot row: A(row, :) - sum_l u_l[row] * v_l^H.
        let mut res_row = DVector::<T>::from_fn(n, |j, _| entry(row, j));
        for (u, v) in us.iter().zip(vs.iter()) {
            let c = u[row];
            for j in 0..n {
                res_row[j] -= c * v[j].conjugate();
            }
        }
        let (jmax, pmax) = argmax_modulus(&res_row);
        let scale = frob2.sqrt().max(1e-300);
        if pmax <= f64::EPSILON * scale || pmax == 0.0 {
            // Degenerate pivot row: probe random residual entries and move
            // to the row of the largest one.
            let mut best = (0usize, 0.0_f64);
            for _ in 0..10 {
                let i = rng.random_range(0..m);
                let j = rng.random_range(0..n);
                let mut val = entry(i, j);
                for (u, v) in us.iter().zip(vs.iter()) {
                    val -= u[i] * v[j].conjugate();
                }
                let mag = val.modulus();
                if mag > best.1 && !used_rows[i] {
                    best = (i, mag);
                }
            }
            if best.1 <= f64::EPSILON * scale || restarts_left == 0 {
                break 'outer;
            }
            restarts_left -= 1;
            row = best.0;
            continue 'outer;
        }

        let pivot = res_row[jmax];
        // Residual of the pivot column.
        let mut res_col = DVector::<T>::from_fn(m, |i, _| entry(i, jmax));
        for (u, v) in us.iter().zip(vs.iter()) {
            let c = v[jmax].conjugate();
            for i in 0..m {
                res_col[i] -= u[i] * c;
            }
        }

        let u_new = res_col / pivot;
        let v_new = DVector::<T>::from_fn(n, |j, _| res_row[j].conjugate());
        let nu = u_new.norm();
        let nv = v_new.norm();

        // Incremental Frobenius estimate of the updated approximation.
        let mut cross = 0.0_f64;
        for (u, v) in us.iter().zip(vs.iter()) {
            let uu = u.dotc(&u_new);
            let vv = v_new.dotc(v);
            cross += (uu * vv).real();
        }
        frob2 = (frob2 + nu * nu * nv * nv + 2.0 * cross).max(0.0);

        us.push(u_new);
        vs.push(v_new);

        if nu * nv <= tol * frob2.sqrt() {
            break;
        }

        // Next pivot row: largest entry of the column residual among
        // unused rows.
        let mut best = (usize::MAX, -1.0);
        let last_u = us.last().unwrap();
        for i in 0..m {
            if used_rows[i] {
                continue;
            }
            let mag = last_u[i].modulus();
            if mag > best.1 {
                best = (i, mag);
            }
        }
        if best.0 == usize::MAX {
            break;
        }
        row = best.0;
    }

    if us.is_empty() {
        return LowRankFactor::zero(m, n);
    }
    let ucols: Vec<_> = us
        .iter()
        .map(|c| nalgebra::DMatrix::from_column_slice(m, 1, c.as_slice()))
        .collect();
    let vcols: Vec<_> = vs
        .iter()
        .map(|c| nalgebra::DMatrix::from_column_slice(n, 1, c.as_slice()))
        .collect();
    LowRankFactor::new(
        hstack(&ucols.iter().collect::<Vec<_>>()),
        hstack(&vcols.iter().collect::<Vec<_>>()),
    )
}

fn argmax_modulus<T: HlrScalar>(v: &DVector<T>) -> (usize, f64) {
    let mut best = (0usize, -1.0_f64);
    for (i, x) in v.iter().enumerate() {
        let mag = x.modulus();
        if mag > best.1 {
            best = (i, mag);
        }
    }
    (best.0, best.1)
}
