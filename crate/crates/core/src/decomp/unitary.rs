use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{conj_mismatch, off_block_norm};
use crate::matrix::{inverse, min_singular_value, sym_eig, ComplexMatrix, RealMatrix};
use crate::{Error, Result};

/// Absolute gap below which eigenvalues of `Re(UᵗU)` are treated as one
/// cluster.
pub const CLUSTER_GAP: f64 = 1e-8;

const TAU_GRID: usize = 256;
const GOLDEN_TOL: f64 = 1e-12;

/// `U = W·diag(σ)·Vᵗ` with `W`, `V` real orthogonal and `|σ_k| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSvd {
    pub w: RealMatrix,
    pub sigma: Vec<Complex64>,
    pub v: RealMatrix,
}

impl JointSvd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.w.to_complex().matmul(&ComplexMatrix::diag(&self.sigma)).matmul(&self.v.transpose().to_complex())
    }
}

/// A rotation `τ` making `Im(τU)` invertible, the exceptional values to
/// avoid and the achieved margin `σ_min(Im(τU))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauChoice {
    pub tau: Complex64,
    pub exceptional: Vec<Complex64>,
    pub margin: f64,
}

/// `U = W·diag(Δ₁, Δ₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockFactors {
    pub w: RealMatrix,
    pub delta1: ComplexMatrix,
    pub delta2: ComplexMatrix,
    pub tau: Complex64,
}

impl BlockFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.w.to_complex().matmul(&ComplexMatrix::block_diag(&self.delta1, &self.delta2))
    }
}

/// `U = W·diag(Δ, Δ̄)`; `delta2` is stored as `conj(delta1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugatePairFactors {
    pub w: RealMatrix,
    pub delta1: ComplexMatrix,
    pub delta2: ComplexMatrix,
}

impl ConjugatePairFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.w.to_complex().matmul(&ComplexMatrix::block_diag(&self.delta1, &self.delta2))
    }
}

fn check_unitary(u: &ComplexMatrix, tol: f64) -> Result<()> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", u.rows(), u.cols())));
    }
    let residual = u.unitarity_residual();
    if residual >= tol {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Principal square root of a unit complex number, argument in `(−π/2, π/2]`.
fn principal_sqrt_unit(z: Complex64) -> Complex64 {
    let mut theta = z.im.atan2(z.re);
    if theta <= -PI {
        theta += 2.0 * PI;
    }
    Complex64::from_polar(1.0, theta / 2.0)
}

/// Joint real SVD of a unitary matrix.
///
/// `M = UᵗU` is unitary and complex symmetric, so `Re M` and `Im M` are
/// commuting real symmetric matrices. They are diagonalized together by
/// `sym_eig(Re M)` followed by `sym_eig` of `Im M` restricted to each
/// eigenvalue cluster; `σ` is the principal square root of the resulting
/// diagonal and `W = U·V·diag(σ)⁻¹`, which must come out real.
pub fn joint_svd(u: &ComplexMatrix) -> Result<JointSvd> {
    check_unitary(u, 1e-9)?;
    let n = u.rows();
    let m = u.transpose().matmul(u);
    let re_eig = sym_eig(&m.re().symmetrized(), 1e-8)?;
    let im = m.im().symmetrized();
    let mut v = re_eig.vectors.clone();

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && re_eig.values[end - 1] - re_eig.values[end] <= CLUSTER_GAP {
            end += 1;
        }
        if end - start > 1 {
            let basis = v.block(0, start, n, end - start);
            let restricted = basis.transpose().matmul(&im).matmul(&basis).symmetrized();
            let inner = sym_eig(&restricted, 1e-8)?;
            v.set_block(0, start, &basis.matmul(&inner.vectors));
        }
        start = end;
    }

    let vc = v.to_complex();
    let diag = vc.transpose().matmul(&m).matmul(&vc);
    let sigma: Vec<Complex64> = diag.diagonal().into_iter().map(|z| principal_sqrt_unit(z / z.norm())).collect();
    let inv_sigma: Vec<Complex64> = sigma.iter().map(|s| s.conj()).collect();
    let w_complex = u.matmul(&vc).matmul(&ComplexMatrix::diag(&inv_sigma));
    let imag = w_complex.max_abs_im();
    if imag >= 1e-8 {
        return Err(Error::RealityCheckFailed { imag });
    }
    let out = JointSvd { w: w_complex.re(), sigma, v };
    let err = (&out.reconstruct() - u).frobenius_norm();
    if err >= 1e-9 * (n as f64).sqrt().max(1.0) {
        return Err(Error::NumericalBreakdown(format!("joint SVD reconstruction residual {err:.3e}")));
    }
    Ok(out)
}

fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

fn tau_margin(u: &ComplexMatrix, theta: f64) -> f64 {
    min_singular_value(&u.scale(unit(theta)).im())
}

/// Chooses `τ ∈ 𝕋` maximizing `σ_min(Im(τU))`: a 256-point angular grid,
/// then golden-section search between the neighbours of the best grid
/// point.
pub fn tau_rotate(u: &ComplexMatrix) -> Result<TauChoice> {
    let svd = joint_svd(u)?;
    let mut exceptional: Vec<Complex64> = Vec::new();
    for s in &svd.sigma {
        for cand in [s.conj(), -s.conj()] {
            let duplicate = exceptional.iter().any(|e| (e.conj() * cand).arg().abs() < 1e-10);
            if !duplicate {
                exceptional.push(cand);
            }
        }
    }

    let step = 2.0 * PI / TAU_GRID as f64;
    let (mut best_k, mut best) = (0, f64::NEG_INFINITY);
    for k in 0..TAU_GRID {
        let value = tau_margin(u, k as f64 * step);
        if value > best {
            best = value;
            best_k = k;
        }
    }
    let center = best_k as f64 * step;
    let (mut lo, mut hi) = (center - step, center + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = tau_margin(u, x1);
    let mut f2 = tau_margin(u, x2);
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = tau_margin(u, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = tau_margin(u, x1);
        }
    }
    let refined = 0.5 * (lo + hi);
    let refined_margin = tau_margin(u, refined);
    let (theta, margin) = if refined_margin >= best { (refined, refined_margin) } else { (center, best) };
    Ok(TauChoice { tau: unit(theta), exceptional, margin })
}

/// Factorizes a unitary `U` with block-diagonal `UᵗU` as `W·diag(Δ₁, Δ₂)`.
///
/// With `τ` from [`tau_rotate`], `A = Re(τU)`, `B = Im(τU)` and
/// `P = B⁻¹A` (block-diagonal), `τU = W'·U'` where
/// `U' = (I + P²)^{−1/2}(P + iI)` and `W' = B(I + P²)^{1/2}` is orthogonal.
/// Each diagonal block of `U'` is split by [`joint_svd`]; `τ` is undone on
/// the `Δ` factors.
pub fn block_factorize_unitary(u: &ComplexMatrix, tol: f64) -> Result<BlockFactors> {
    check_unitary(u, 1e-9)?;
    let side = u.rows();
    if !side.is_multiple_of(2) {
        return Err(Error::HalfDimOdd { half_dim: side });
    }
    let m = u.transpose().matmul(u);
    let off_block = off_block_norm(&m);
    if off_block >= tol {
        return Err(Error::NotBlockDiagonal { off_block });
    }

    let tau = tau_rotate(u)?.tau;
    let rotated = u.scale(tau);
    let (a, b) = (rotated.re(), rotated.im());
    let p = inverse(&b)?.matmul(&a);
    let p_norm = p.frobenius_norm().max(1.0);
    let [p11, p12, p21, p22] = p.quarters();
    let p_off = (p12.frobenius_norm().powi(2) + p21.frobenius_norm().powi(2)).sqrt() / p_norm;
    if p_off > 1e-6 {
        return Err(Error::NotBlockDiagonal { off_block: p_off });
    }

    // U' and (I + P²)^{1/2} block by block, from the eigenbasis of each P_jj
    let mut u_prime = Vec::with_capacity(2);
    let mut sqrt_blocks = Vec::with_capacity(2);
    for pjj in [p11.symmetrized(), p22.symmetrized()] {
        let eig = sym_eig(&pjj, 1e-6)?;
        let e = eig.vectors.to_complex();
        let phases: Vec<Complex64> = eig.values.iter().map(|&x| Complex64::new(x, 1.0) / (1.0 + x * x).sqrt()).collect();
        u_prime.push(e.matmul(&ComplexMatrix::diag(&phases)).matmul(&e.transpose()));
        sqrt_blocks.push(eig.map_spectrum(|x| (1.0 + x * x).sqrt()));
    }
    let w_prime = b.matmul(&RealMatrix::block_diag(&sqrt_blocks[0], &sqrt_blocks[1]));

    let mut w_blocks = Vec::with_capacity(2);
    let mut deltas = Vec::with_capacity(2);
    for uj in &u_prime {
        let svd = joint_svd(uj)?;
        let sv = ComplexMatrix::diag(&svd.sigma).matmul(&svd.v.transpose().to_complex()).scale(tau.conj());
        w_blocks.push(svd.w);
        deltas.push(sv);
    }
    let w = w_prime.matmul(&RealMatrix::block_diag(&w_blocks[0], &w_blocks[1]));
    let delta2 = deltas.pop().expect("two blocks");
    let delta1 = deltas.pop().expect("two blocks");
    let out = BlockFactors { w, delta1, delta2, tau };
    let err = (&out.reconstruct() - u).frobenius_norm();
    if err >= 1e-8 * (side as f64).sqrt() {
        return Err(Error::NumericalBreakdown(format!("block factorization residual {err:.3e}")));
    }
    Ok(out)
}

/// Factorizes a unitary `U` with `UᵗU = diag(𝚫, 𝚫̄)` as `W·diag(Δ, Δ̄)`.
///
/// Starts from [`block_factorize_unitary`]; `W₀ = Δ₁Δ₂ᵗ` is real
/// orthogonal and `Δ₂ = W₀ᵗ·conj(Δ₁)`, so `W = W'·diag(I, W₀ᵗ)` and
/// `Δ = Δ₁`.
pub fn conjugate_pair_factorize(u: &ComplexMatrix, tol: f64) -> Result<ConjugatePairFactors> {
    check_unitary(u, 1e-9)?;
    if !u.rows().is_multiple_of(2) {
        return Err(Error::HalfDimOdd { half_dim: u.rows() });
    }
    let m = u.transpose().matmul(u);
    let (off_block, mismatch) = (off_block_norm(&m), conj_mismatch(&m));
    if off_block >= tol || mismatch >= tol {
        return Err(Error::NotConjugatePair { off_block, mismatch });
    }
    let block = block_factorize_unitary(u, tol)?;
    let w0 = block.delta1.matmul(&block.delta2.transpose());
    let imag = w0.max_abs_im();
    if imag >= 1e-8 {
        return Err(Error::RealityCheckFailed { imag });
    }
    let d = u.rows() / 2;
    let fold = RealMatrix::block_diag(&RealMatrix::identity(d), &w0.re().transpose());
    let out = ConjugatePairFactors { w: block.w.matmul(&fold), delta2: block.delta1.conj(), delta1: block.delta1 };
    let err = (&out.reconstruct() - u).frobenius_norm();
    if err >= 1e-8 * (u.rows() as f64).sqrt() {
        return Err(Error::NumericalBreakdown(format!("conjugate-pair factorization residual {err:.3e}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::pre_iwasawa;
    use crate::symplectic::{catalog, random_orthogonal, random_unitary, CatalogName, CatalogParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn i() -> Complex64 {
        Complex64::i()
    }

    fn assert_joint_invariants(u: &ComplexMatrix, svd: &JointSvd) {
        assert!(svd.w.orthogonality_residual() < 1e-12);
        assert!(svd.v.orthogonality_residual() < 1e-12);
        assert!(svd.sigma.iter().all(|s| (s.norm() - 1.0).abs() < 1e-12));
        assert!((&svd.reconstruct() - u).frobenius_norm() < 1e-10);
    }

    #[test]
    fn joint_svd_of_i() {
        let u = ComplexMatrix::identity(2).scale(i());
        let svd = joint_svd(&u).unwrap();
        assert!(svd.sigma.iter().all(|s| (s - i()).norm() < 1e-15));
        assert_eq!(svd.w, RealMatrix::identity(2));
        assert_eq!(svd.v, RealMatrix::identity(2));
    }

    #[test]
    fn joint_svd_of_orthogonal() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let o = random_orthogonal(4, &mut rng);
        let svd = joint_svd(&o.to_complex()).unwrap();
        assert!(svd.sigma.iter().all(|s| (s - 1.0).norm() < 1e-12));
        assert_joint_invariants(&o.to_complex(), &svd);
    }

    #[test]
    fn joint_svd_of_stft_and_random() {
        let a = catalog(CatalogName::Stft, 1, &CatalogParams::default()).unwrap();
        let u = pre_iwasawa(&a).unwrap().u;
        assert_joint_invariants(&u, &joint_svd(&u).unwrap());
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for n in [1, 2, 3, 8] {
            let u = random_unitary(n, &mut rng);
            assert_joint_invariants(&u, &joint_svd(&u).unwrap());
        }
    }

    #[test]
    fn joint_svd_rejects_non_unitary() {
        let m = RealMatrix::diag(&[1.0, 2.0]).to_complex();
        assert!(matches!(joint_svd(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn tau_examples() {
        let t = tau_rotate(&ComplexMatrix::identity(2).scale(i())).unwrap();
        assert!((t.tau.re.abs() - 1.0).abs() < 1e-12, "{:?}", t.tau);
        assert!(t.exceptional.iter().all(|e| (e - i()).norm() < 1e-12 || (e + i()).norm() < 1e-12));
        assert!((t.margin - 1.0).abs() < 1e-12);

        let t = tau_rotate(&ComplexMatrix::identity(2)).unwrap();
        assert!((t.tau.im.abs() - 1.0).abs() < 1e-12, "{:?}", t.tau);
        assert!(t.exceptional.len() == 2);
    }

    #[test]
    fn tau_margin_positive_for_random() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for n in [2, 4, 8] {
            let u = random_unitary(n, &mut rng);
            let t = tau_rotate(&u).unwrap();
            assert!(t.margin > 0.0);
            assert!(t.exceptional.len() <= 2 * n);
        }
    }

    #[test]
    fn block_factorize_examples() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let d1 = random_unitary(2, &mut rng);
        let d2 = random_unitary(2, &mut rng);
        let u = ComplexMatrix::block_diag(&d1, &d2);
        let f = block_factorize_unitary(&u, 1e-8).unwrap();
        assert!((&f.reconstruct() - &u).frobenius_norm() < 1e-8);
        assert!(f.w.orthogonality_residual() < 1e-10);

        let a = catalog(CatalogName::TauWigner, 1, &CatalogParams::with_tau(0.0)).unwrap();
        let u0 = pre_iwasawa(&a).unwrap().u;
        let f = block_factorize_unitary(&u0, 1e-8).unwrap();
        assert!((&f.reconstruct() - &u0).frobenius_norm() < 1e-8);

        let stft = catalog(CatalogName::Stft, 1, &CatalogParams::default()).unwrap();
        let us = pre_iwasawa(&stft).unwrap().u;
        assert!(matches!(block_factorize_unitary(&us, 1e-8), Err(Error::NotBlockDiagonal { .. })));
    }

    #[test]
    fn conjugate_pair_examples() {
        let theta = 0.7;
        let u = ComplexMatrix::diag(&[Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta)]);
        let f = conjugate_pair_factorize(&u, 1e-8).unwrap();
        assert!((&f.reconstruct() - &u).frobenius_norm() < 1e-8);
        assert!((f.delta1[(0, 0)].norm() - 1.0).abs() < 1e-12);

        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for _ in 0..5 {
            let w = random_orthogonal(4, &mut rng);
            let delta = random_unitary(2, &mut rng);
            let u = w.to_complex().matmul(&ComplexMatrix::block_diag(&delta, &delta.conj()));
            let f = conjugate_pair_factorize(&u, 1e-8).unwrap();
            assert!((&f.reconstruct() - &u).frobenius_norm() < 1e-8);
            assert_eq!(f.delta2, f.delta1.conj());
        }

        let a = catalog(CatalogName::TauWigner, 1, &CatalogParams::with_tau(0.0)).unwrap();
        let u0 = pre_iwasawa(&a).unwrap().u;
        assert!(matches!(conjugate_pair_factorize(&u0, 1e-8), Err(Error::NotConjugatePair { .. })));
    }
}
