use serde::{Deserialize, Serialize};

use crate::matrix::{inverse, min_singular_value, spd_sqrt, ComplexMatrix, RealMatrix};
use crate::symplectic::{gen_dl, gen_ru, gen_vq, standard_j, SymplecticMatrix};
use crate::{Error, Result};

/// `𝓐 = 𝒱_Q 𝒟_L ℛ_U` with `Q` symmetric, `L` symmetric positive definite
/// and `U` unitary. Unique under these constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreIwasawaFactors {
    pub q: RealMatrix,
    pub l: RealMatrix,
    pub u: ComplexMatrix,
}

impl PreIwasawaFactors {
    pub fn reconstruct(&self) -> Result<RealMatrix> {
        let product = &(&gen_vq(&self.q)? * &gen_dl(&self.l)?) * &gen_ru(&self.u)?;
        Ok(product.into_matrix())
    }
}

/// `𝓐 = 𝒱_{DB⁻¹} 𝒟_B 𝒥 𝒱_{B⁻¹A}` for `𝓐` with invertible upper-right block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeFactors {
    pub q_out: RealMatrix,
    pub b: RealMatrix,
    pub p: RealMatrix,
}

impl FreeFactors {
    pub fn reconstruct(&self) -> Result<RealMatrix> {
        let n = self.b.rows();
        let product = &(&(&gen_vq(&self.q_out)? * &gen_dl(&self.b)?) * &standard_j(n)) * &gen_vq(&self.p)?;
        Ok(product.into_matrix())
    }
}

/// Pre-Iwasawa factors from the blocks of `𝓐 = [[A, B], [C, D]]`:
/// `S = AAᵗ + BBᵗ`, `L = S^{1/2}`, `U = L⁻¹(A + iB)`,
/// `Q = (CAᵗ + DBᵗ)S⁻¹` (symmetrized).
pub fn pre_iwasawa(a: &SymplecticMatrix) -> Result<PreIwasawaFactors> {
    let residual = a.residual();
    if residual >= 1e-9 * a.matrix().rows() as f64 {
        return Err(Error::NotSymplectic { residual });
    }
    let [ab, bb, cb, db] = a.blocks();
    let s = (&ab.matmul(&ab.transpose()) + &bb.matmul(&bb.transpose())).symmetrized();
    let l = spd_sqrt(&s).map_err(|e| Error::NumericalBreakdown(format!("AAᵗ + BBᵗ: {e}")))?;
    let l_inv = inverse(&l).map_err(|e| Error::NumericalBreakdown(format!("L: {e}")))?;
    let s_inv = inverse(&s).map_err(|e| Error::NumericalBreakdown(format!("AAᵗ + BBᵗ: {e}")))?;
    let u = ComplexMatrix::from_parts(&l_inv.matmul(&ab), &l_inv.matmul(&bb));
    let q = (&cb.matmul(&ab.transpose()) + &db.matmul(&bb.transpose())).matmul(&s_inv).symmetrized();
    Ok(PreIwasawaFactors { q, l, u })
}

/// Free factorization; `NotFree` when `σ_min(B) ≤ 1e−10·‖B‖_F`.
pub fn free_factorize(a: &SymplecticMatrix) -> Result<FreeFactors> {
    let [ab, bb, _, db] = a.blocks();
    let sigma_min = min_singular_value(&bb);
    if sigma_min <= 1e-10 * bb.frobenius_norm() || sigma_min == 0.0 {
        return Err(Error::NotFree { sigma_min });
    }
    let b_inv = inverse(&bb).map_err(|_| Error::NotFree { sigma_min })?;
    let q_raw = db.matmul(&b_inv);
    let p_raw = b_inv.matmul(&ab);
    for (name, m) in [("DB⁻¹", &q_raw), ("B⁻¹A", &p_raw)] {
        let asym = (m - &m.transpose()).frobenius_norm();
        if asym > 1e-9 * m.frobenius_norm().max(1.0) {
            return Err(Error::NumericalBreakdown(format!("{name} is not symmetric (residual {asym:.3e})")));
        }
    }
    Ok(FreeFactors { q_out: q_raw.symmetrized(), b: bb, p: p_raw.symmetrized() })
}
