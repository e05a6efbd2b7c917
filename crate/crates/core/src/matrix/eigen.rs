//! Symmetric eigendecomposition by cyclic Jacobi rotations.

use super::RealMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Relative threshold below which eigenvalues of an SPD input are clamped.
pub const SPD_CLAMP: f64 = 1e-13;

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: RealMatrix,
}

impl SymEig {
    /// `V · diag(λ) · Vᵗ`.
    pub fn reconstruct(&self) -> RealMatrix {
        let n = self.values.len();
        let scaled = RealMatrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * self.values[j]);
        scaled.matmul(&self.vectors.transpose())
    }

    /// Applies `f` to the spectrum: `V · diag(f(λ)) · Vᵗ`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> RealMatrix {
        let mapped = SymEig { values: self.values.iter().map(|&v| f(v)).collect(), vectors: self.vectors.clone() };
        mapped.reconstruct().symmetrized()
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// The input must satisfy `‖m − mᵗ‖_F ≤ tol·‖m‖_F`; its symmetric part is
/// diagonalized. Eigenvalues come out in descending order (ties keep the
/// order of the Jacobi diagonal) and every eigenvector has its first
/// non-negligible component positive, so identical inputs give identical
/// outputs.
pub fn sym_eig(m: &RealMatrix, tol: f64) -> Result<SymEig> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("sym_eig needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let residual = m.symmetry_residual();
    if residual > tol {
        return Err(Error::NotSymmetric { residual });
    }
    let n = m.rows();
    let mut a = m.symmetrized();
    let mut v = RealMatrix::identity(n);

    let mut converged = n <= 1;
    for sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)]).collect();
    let mut vectors = RealMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut vec = v.column(k);
        if let Some(first) = vec.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                vec.iter_mut().for_each(|x| *x = -*x);
            }
        }
        vectors.set_column(col, &vec);
    }
    Ok(SymEig { values, vectors })
}

/// Applies the Jacobi rotation zeroing `a[p][q]` to `a` (both sides) and
/// accumulates it into `v`.
fn rotate(a: &mut RealMatrix, v: &mut RealMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    let app = a[(p, p)];
    let aqq = a[(q, q)];
    let apq = a[(p, q)];
    for k in 0..n {
        if k != p && k != q {
            let akp = a[(k, p)];
            let akq = a[(k, q)];
            a[(k, p)] = c * akp - s * akq;
            a[(p, k)] = a[(k, p)];
            a[(k, q)] = s * akp + c * akq;
            a[(q, k)] = a[(k, q)];
        }
    }
    a[(p, p)] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
    a[(q, q)] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Symmetric positive definite square root.
///
/// Eigenvalues in `[−1e−13·λ_max, 1e−13·λ_max]` are clamped up to
/// `1e−13·λ_max`; anything more negative is rejected.
pub fn spd_sqrt(m: &RealMatrix) -> Result<RealMatrix> {
    let eig = sym_eig(m, 1e-10)?;
    let lambda_max = eig.values.first().copied().unwrap_or(0.0);
    let lambda_min = eig.values.last().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 {
        return Err(Error::NotSpd { min_eigenvalue: lambda_min });
    }
    let floor = SPD_CLAMP * lambda_max;
    if lambda_min < -floor {
        return Err(Error::NotSpd { min_eigenvalue: lambda_min });
    }
    Ok(eig.map_spectrum(|l| l.max(floor).sqrt()))
}
