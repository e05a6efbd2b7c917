//! Benedicks-type uncertainty verdicts for `W_𝓐`, read off from the
//! block structure of `UᵗU`, where `U` is the unitary pre-Iwasawa factor.
//!
//! Sesquilinear: the principle holds iff `UᵗU` is not block-diagonal.
//! Quadratic: it holds iff `UᵗU ≠ diag(𝚫, 𝚫̄)` for every unitary `𝚫`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::decomp::{
    block_factorize_unitary, conj_mismatch, conjugate_pair_factorize, off_block_norm, pre_iwasawa, BLOCK_TOL,
};
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::symplectic::{gen_dl, gen_ru, gen_vq, random_orthogonal, SymplecticMatrix};
use crate::{Error, Result};

/// Margins within this factor of the tolerance are flagged as borderline.
pub const BORDERLINE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Sesquilinear,
    Quadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub holds: bool,
    pub off_block_norm: f64,
    /// Present for quadratic verdicts only.
    pub conj_mismatch: Option<f64>,
    pub tolerance: f64,
    pub borderline: bool,
    pub deciding_product: ComplexMatrix,
}

/// Both verdicts for one matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub sesquilinear: Verdict,
    pub quadratic: Verdict,
}

/// `UᵗU` for the unitary pre-Iwasawa factor `U` of `a`.
pub fn deciding_product(a: &SymplecticMatrix) -> Result<ComplexMatrix> {
    let u = pre_iwasawa(a)?.u;
    Ok(u.transpose().matmul(&u))
}

fn check_split(a: &SymplecticMatrix) -> Result<()> {
    if !a.half_dim().is_multiple_of(2) {
        return Err(Error::HalfDimOdd { half_dim: a.half_dim() });
    }
    Ok(())
}

fn near(margin: f64, tol: f64) -> bool {
    margin >= tol / BORDERLINE_FACTOR && margin <= tol * BORDERLINE_FACTOR
}

fn verdict_from_product(m: ComplexMatrix, kind: VerdictKind, tol: f64) -> Verdict {
    let off = off_block_norm(&m);
    let (holds, mismatch, margin) = match kind {
        VerdictKind::Sesquilinear => (off > tol, None, off),
        VerdictKind::Quadratic => {
            let mis = conj_mismatch(&m);
            (off > tol || mis > tol, Some(mis), off.max(mis))
        }
    };
    Verdict {
        kind,
        holds,
        off_block_norm: off,
        conj_mismatch: mismatch,
        tolerance: tol,
        borderline: near(margin, tol),
        deciding_product: m,
    }
}

/// Sesquilinear verdict: holds iff the relative off-block norm of `UᵗU`
/// exceeds `tol`.
pub fn decide_sesquilinear(a: &SymplecticMatrix, tol: f64) -> Result<Verdict> {
    check_split(a)?;
    Ok(verdict_from_product(deciding_product(a)?, VerdictKind::Sesquilinear, tol))
}

/// Quadratic verdict: fails iff `UᵗU` is block-diagonal and its lower block
/// is the conjugate of its upper block, both within `tol`.
pub fn decide_quadratic(a: &SymplecticMatrix, tol: f64) -> Result<Verdict> {
    check_split(a)?;
    Ok(verdict_from_product(deciding_product(a)?, VerdictKind::Quadratic, tol))
}

/// Both verdicts from one pre-Iwasawa decomposition.
pub fn decide(a: &SymplecticMatrix, tol: f64) -> Result<Decision> {
    check_split(a)?;
    let m = deciding_product(a)?;
    Ok(Decision {
        sesquilinear: verdict_from_product(m.clone(), VerdictKind::Sesquilinear, tol),
        quadratic: verdict_from_product(m, VerdictKind::Quadratic, tol),
    })
}

/// Data for compactly supported counterexamples:
/// `𝓐 = 𝒱_q 𝒟_l 𝒟_w ℛ_{diag(Δ₁, Δ₂)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecipe {
    pub mode: VerdictKind,
    pub q: RealMatrix,
    pub l: RealMatrix,
    pub w: RealMatrix,
    pub delta1: ComplexMatrix,
    pub delta2: ComplexMatrix,
}

impl WitnessRecipe {
    pub fn d(&self) -> usize {
        self.delta1.rows()
    }

    pub fn reconstruct(&self) -> Result<RealMatrix> {
        let r = gen_ru(&ComplexMatrix::block_diag(&self.delta1, &self.delta2))?;
        let product = &(&(&gen_vq(&self.q)? * &gen_dl(&self.l)?) * &gen_dl(&self.w)?) * &r;
        Ok(product.into_matrix())
    }
}

/// Witness data for a matrix whose verdict in `mode` fails; `VerdictHolds`
/// otherwise.
pub fn witness_recipe(a: &SymplecticMatrix, mode: VerdictKind, tol: f64) -> Result<WitnessRecipe> {
    check_split(a)?;
    let factors = pre_iwasawa(a)?;
    let m = factors.u.transpose().matmul(&factors.u);
    if verdict_from_product(m, mode, tol).holds {
        return Err(Error::VerdictHolds);
    }
    let (w, delta1, delta2) = match mode {
        VerdictKind::Sesquilinear => {
            let f = block_factorize_unitary(&factors.u, tol)?;
            (f.w, f.delta1, f.delta2)
        }
        VerdictKind::Quadratic => {
            let f = conjugate_pair_factorize(&factors.u, tol)?;
            (f.w, f.delta1, f.delta2)
        }
    };
    Ok(WitnessRecipe { mode, q: factors.q, l: factors.l, w, delta1, delta2 })
}

/// Checks that the sesquilinear verdict is unchanged under `𝓐 ↦ 𝒱_Q𝒟_L𝓐`
/// for 8 random `(Q, L)`, and that the off-block norm is unchanged under
/// `𝓐 ↦ 𝓐ℛ_{τI}` for 8 random `τ ∈ 𝕋`.
pub fn verdict_invariance_check(a: &SymplecticMatrix, seed: u64) -> Result<bool> {
    const DRAWS: usize = 8;
    const TOL: f64 = 1e-8;
    let base = decide_sesquilinear(a, BLOCK_TOL)?;
    let n = a.half_dim();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..DRAWS {
        let q = RealMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal)).symmetrized();
        let s: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..=2.0)).collect();
        let o1 = random_orthogonal(n, &mut rng);
        let o2 = random_orthogonal(n, &mut rng);
        let l = o1.matmul(&RealMatrix::diag(&s)).matmul(&o2);
        let moved = &(&gen_vq(&q)? * &gen_dl(&l)?) * a;
        let v = decide_sesquilinear(&moved, BLOCK_TOL)?;
        if v.holds != base.holds || (v.off_block_norm - base.off_block_norm).abs() > TOL {
            return Ok(false);
        }
    }
    for _ in 0..DRAWS {
        let tau = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let rotated = a * &gen_ru(&ComplexMatrix::identity(n).scale(tau))?;
        let v = decide_sesquilinear(&rotated, BLOCK_TOL)?;
        if (v.off_block_norm - base.off_block_norm).abs() > TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
