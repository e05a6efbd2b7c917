//! Factorizations of symplectic and unitary matrices: pre-Iwasawa, free
//! symplectic, joint real SVD of a unitary, τ-rotation, and the block
//! factorizations `U = W·diag(Δ₁, Δ₂)` and `U = W·diag(Δ, Δ̄)`.

mod iwasawa;
mod unitary;

pub use iwasawa::{free_factorize, pre_iwasawa, FreeFactors, PreIwasawaFactors};
pub use unitary::{
    block_factorize_unitary, conjugate_pair_factorize, joint_svd, tau_rotate, BlockFactors, ConjugatePairFactors,
    JointSvd, TauChoice, CLUSTER_GAP,
};

use crate::matrix::ComplexMatrix;

/// Default relative threshold for block-diagonality and conjugate-pair tests.
pub const BLOCK_TOL: f64 = 1e-8;

/// `‖[M₁₂; M₂₁]‖_F / ‖M‖_F` for the `d × d` block split of a `2d × 2d` matrix.
pub fn off_block_norm(m: &ComplexMatrix) -> f64 {
    let total = m.frobenius_norm();
    if total == 0.0 {
        return 0.0;
    }
    let [_, b, c, _] = m.quarters();
    (b.frobenius_norm().powi(2) + c.frobenius_norm().powi(2)).sqrt() / total
}

/// `‖M₂₂ − conj(M₁₁)‖_F / ‖M‖_F`.
pub fn conj_mismatch(m: &ComplexMatrix) -> f64 {
    let total = m.frobenius_norm();
    if total == 0.0 {
        return 0.0;
    }
    let [a, _, _, d] = m.quarters();
    (&d - &a.conj()).frobenius_norm() / total
}
