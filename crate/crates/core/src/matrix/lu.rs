//! LU factorization with partial pivoting.

use super::RealMatrix;
use crate::{Error, Result};

struct Lu {
    lu: RealMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

fn factor(m: &RealMatrix) -> Result<Lu> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = m.max_abs();
    let mut singular = scale == 0.0 && n > 0;
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs())).unwrap_or(k);
        if lu[(pivot, k)].abs() <= f64::EPSILON * scale * 1e-2 {
            singular = true;
            continue;
        }
        if pivot != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            perm.swap(k, pivot);
            sign = -sign;
        }
        let d = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / d;
            lu[(i, k)] = f;
            if f != 0.0 {
                for j in (k + 1)..n {
                    lu[(i, j)] -= f * lu[(k, j)];
                }
            }
        }
    }
    Ok(Lu { lu, perm, sign, singular })
}

/// Determinant.
pub fn det(m: &RealMatrix) -> Result<f64> {
    let f = factor(m)?;
    if f.singular {
        return Ok(0.0);
    }
    Ok(f.sign * f.lu.diagonal().iter().product::<f64>())
}

/// Solves `a · x = b` for a matrix right-hand side.
pub fn solve(a: &RealMatrix, b: &RealMatrix) -> Result<RealMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!("solve: {} rows vs {} rows", a.rows(), b.rows())));
    }
    let f = factor(a)?;
    if f.singular {
        return Err(Error::Singular { sigma_min: super::min_singular_value(a) });
    }
    let n = a.rows();
    let mut x = RealMatrix::from_fn(n, b.cols(), |i, j| b[(f.perm[i], j)]);
    for c in 0..b.cols() {
        for i in 0..n {
            let mut acc = x[(i, c)];
            for k in 0..i {
                acc -= f.lu[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[(i, c)];
            for k in (i + 1)..n {
                acc -= f.lu[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = acc / f.lu[(i, i)];
        }
    }
    Ok(x)
}

/// Inverse of a square matrix.
pub fn inverse(m: &RealMatrix) -> Result<RealMatrix> {
    solve(m, &RealMatrix::identity(m.rows()))
}
