//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

use super::{ComplexMatrix, RealMatrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// `m = u · diag(s) · vᵗ` with `u` (rows × rows) and `v` (cols × cols)
/// orthogonal and `s` (length `min(rows, cols)`) non-negative, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: RealMatrix,
    pub s: Vec<f64>,
    pub v: RealMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> RealMatrix {
        let (r, c) = (self.u.rows(), self.v.rows());
        let mut sigma = RealMatrix::zeros(r, c);
        for (i, &s) in self.s.iter().enumerate() {
            sigma[(i, i)] = s;
        }
        self.u.matmul(&sigma).matmul(&self.v.transpose())
    }
}

/// Rotates the rows of `a` (the columns of the input) until mutually
/// orthogonal, accumulating the rotations into `v` when given.
fn hestenes(a: &mut RealMatrix, mut v: Option<&mut RealMatrix>) -> Result<()> {
    let (cols, rows) = (a.rows(), a.cols());
    if cols <= 1 {
        return Ok(());
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..rows {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * x - s * y;
                    a[(q, k)] = s * x + c * y;
                }
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..cols {
                        let (x, y) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * x - s * y;
                        v[(k, q)] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

fn row_norms(a: &RealMatrix) -> Vec<f64> {
    (0..a.rows()).map(|j| (0..a.cols()).map(|k| a[(j, k)].powi(2)).sum::<f64>().sqrt()).collect()
}

/// Singular values in descending order, without the singular vectors.
pub fn singular_values(m: &RealMatrix) -> Result<Vec<f64>> {
    let mut a = if m.rows() < m.cols() { m.clone() } else { m.transpose() };
    hestenes(&mut a, None)?;
    let mut s = row_norms(&a);
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(s)
}

/// Full SVD of a real matrix.
pub fn svd_real(m: &RealMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let t = svd_real(&m.transpose())?;
        return Ok(Svd { u: t.v, s: t.s, v: t.u });
    }
    let (rows, cols) = (m.rows(), m.cols());
    // columns of `m` become the rows of `a`
    let mut a = m.transpose();
    let mut v = RealMatrix::identity(cols);
    hestenes(&mut a, Some(&mut v))?;

    let norms = row_norms(&a);
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let s_max = s.first().copied().unwrap_or(0.0);
    let negligible = s_max * f64::EPSILON * rows as f64;

    let mut v_sorted = RealMatrix::zeros(cols, cols);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(rows);
    for (col, &j) in order.iter().enumerate() {
        v_sorted.set_column(col, &v.column(j));
        if norms[j] > negligible && norms[j] > 0.0 {
            u_cols.push((0..rows).map(|k| a[(j, k)] / norms[j]).collect());
        }
    }
    complete_basis(&mut u_cols, rows);
    let mut u = RealMatrix::zeros(rows, rows);
    for (j, c) in u_cols.iter().enumerate() {
        u.set_column(j, c);
    }
    Ok(Svd { u, s, v: v_sorted })
}

/// Extends orthonormal vectors to a basis of ℝⁿ by Gram–Schmidt against
/// the standard basis.
fn complete_basis(basis: &mut Vec<Vec<f64>>, n: usize) {
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut x = vec![0.0; n];
        x[e] = 1.0;
        for _ in 0..2 {
            for b in basis.iter() {
                let dot: f64 = b.iter().zip(&x).map(|(p, q)| p * q).sum();
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= dot * bi);
            }
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(x.into_iter().map(|v| v / norm).collect());
        }
    }
}

/// Smallest singular value of a square real matrix.
pub fn min_singular_value(m: &RealMatrix) -> f64 {
    match singular_values(m) {
        Ok(s) => s.last().copied().unwrap_or(0.0),
        Err(_) => 0.0,
    }
}

/// Smallest singular value of a square complex matrix, computed from its
/// real embedding.
pub fn min_singular_value_complex(m: &ComplexMatrix) -> f64 {
    min_singular_value(&m.real_embedding())
}
