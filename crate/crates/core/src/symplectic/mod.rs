//! Symplectic matrices, the generators `𝒱_Q`, `𝒟_L`, `ℛ_U`, group
//! operations and the catalog of standard time-frequency representations.

mod catalog;
mod random;

pub use catalog::{catalog, CatalogName, CatalogParams};
pub use random::{random_orthogonal, random_symplectic, random_unitary};

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::matrix::{inverse, min_singular_value, ComplexMatrix, RealMatrix};
use crate::{Error, Result};

/// Default relative tolerance for symplectic validation; multiplied by the
/// matrix side.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// A real `2n × 2n` matrix with `𝓐ᵗ𝒥𝓐 = 𝒥`.
#[derive(Clone, PartialEq)]
pub struct SymplecticMatrix {
    half_dim: usize,
    entries: RealMatrix,
}

/// Wire form `{"half_dim": n, "entries": [[row], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub half_dim: usize,
    pub entries: Vec<Vec<f64>>,
}

impl SymplecticMatrix {
    /// Validates `m` with tolerance `tol·side`.
    pub fn new(m: RealMatrix, tol: f64) -> Result<Self> {
        let (ok, residual) = is_symplectic(&m, tol)?;
        if !ok || !m.is_finite() {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(Self { half_dim: m.rows() / 2, entries: m })
    }

    /// Wraps a matrix that is symplectic by construction.
    pub(crate) fn trusted(m: RealMatrix) -> Self {
        debug_assert!(m.is_square() && m.rows().is_multiple_of(2));
        Self { half_dim: m.rows() / 2, entries: m }
    }

    pub fn from_json(json: &MatrixJson, tol: f64) -> Result<Self> {
        let m = RealMatrix::from_rows(&json.entries)
            .ok_or_else(|| Error::DimensionMismatch("ragged rows in matrix JSON".into()))?;
        if m.rows() != 2 * json.half_dim || m.cols() != 2 * json.half_dim {
            return Err(Error::DimensionMismatch(format!(
                "half_dim {} needs a {}x{} matrix, got {}x{}",
                json.half_dim,
                2 * json.half_dim,
                2 * json.half_dim,
                m.rows(),
                m.cols()
            )));
        }
        Self::new(m, tol)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { half_dim: self.half_dim, entries: self.entries.to_rows() }
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.entries
    }

    /// The `n × n` blocks `[A, B, C, D]` of `[[A, B], [C, D]]`.
    pub fn blocks(&self) -> [RealMatrix; 4] {
        self.entries.quarters()
    }

    /// `‖𝓐ᵗ𝒥𝓐 − 𝒥‖_F`.
    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.entries)
    }

    /// Closed-form inverse `−𝒥𝓐ᵗ𝒥`.
    pub fn inverse(&self) -> SymplecticMatrix {
        symplectic_inverse(self)
    }
}

impl Mul for &SymplecticMatrix {
    type Output = SymplecticMatrix;
    fn mul(self, rhs: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.half_dim, rhs.half_dim, "symplectic product of different sizes");
        SymplecticMatrix::trusted(self.entries.matmul(&rhs.entries))
    }
}

impl std::fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Symplectic(n={}) {:?}", self.half_dim, self.entries)
    }
}

impl Serialize for SymplecticMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymplecticMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = MatrixJson::deserialize(d)?;
        SymplecticMatrix::from_json(&json, SYMPLECTIC_TOL).map_err(serde::de::Error::custom)
    }
}

/// `𝒥 = [[0, I], [−I, 0]]` of side `2n`.
pub fn standard_j(n: usize) -> SymplecticMatrix {
    let z = RealMatrix::zeros(n, n);
    let i = RealMatrix::identity(n);
    SymplecticMatrix::trusted(RealMatrix::from_blocks(&z, &i, &(-&i), &z))
}

fn symplectic_residual(m: &RealMatrix) -> f64 {
    let j = standard_j(m.rows() / 2).into_matrix();
    (&m.transpose().matmul(&j).matmul(m) - &j).frobenius_norm()
}

/// Returns `(residual ≤ tol·side, residual)` with residual `‖mᵗ𝒥m − 𝒥‖_F`.
pub fn is_symplectic(m: &RealMatrix, tol: f64) -> Result<(bool, f64)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    if !m.rows().is_multiple_of(2) {
        return Err(Error::OddDimension { side: m.rows() });
    }
    let residual = symplectic_residual(m);
    Ok((residual <= tol * m.rows() as f64, residual))
}

/// `𝒱_Q = [[I, 0], [Q, I]]`.
pub fn gen_vq(q: &RealMatrix) -> Result<SymplecticMatrix> {
    let residual = q.symmetry_residual();
    if !q.is_square() || residual > 1e-10 {
        return Err(Error::NotSymmetric { residual });
    }
    let n = q.rows();
    let i = RealMatrix::identity(n);
    Ok(SymplecticMatrix::trusted(RealMatrix::from_blocks(&i, &RealMatrix::zeros(n, n), &q.symmetrized(), &i)))
}

/// `𝒟_L = [[L, 0], [0, L⁻ᵗ]]`.
pub fn gen_dl(l: &RealMatrix) -> Result<SymplecticMatrix> {
    if !l.is_square() {
        return Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", l.rows(), l.cols())));
    }
    let sigma_min = min_singular_value(l);
    if sigma_min <= 1e-12 {
        return Err(Error::Singular { sigma_min });
    }
    let n = l.rows();
    let z = RealMatrix::zeros(n, n);
    let l_inv_t = inverse(l)?.transpose();
    Ok(SymplecticMatrix::trusted(RealMatrix::from_blocks(l, &z, &z, &l_inv_t)))
}

/// `ℛ_{A+iB} = [[A, B], [−B, A]]`.
pub fn gen_ru(u: &ComplexMatrix) -> Result<SymplecticMatrix> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", u.rows(), u.cols())));
    }
    let residual = u.unitarity_residual();
    if residual >= 1e-10 {
        return Err(Error::NotUnitary { residual });
    }
    let (a, b) = (u.re(), u.im());
    Ok(SymplecticMatrix::trusted(RealMatrix::from_blocks(&a, &b, &(-&b), &a)))
}

/// Embeds `(𝓐₁, 𝓐₂) ∈ Sp(2n) × Sp(2n)` into `Sp(4n)` by interleaving blocks:
/// `[[diag(A₁,A₂), diag(B₁,B₂)], [diag(C₁,C₂), diag(D₁,D₂)]]`.
///
/// This is a group homomorphism sending `(𝒱_{Q₁}, 𝒱_{Q₂})` to
/// `𝒱_{diag(Q₁,Q₂)}` and likewise for `𝒟` and `ℛ`.
pub fn embed_pair(a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    if a1.half_dim != a2.half_dim {
        return Err(Error::DimensionMismatch(format!("embed_pair: half dims {} and {}", a1.half_dim, a2.half_dim)));
    }
    let [a, b, c, d] = a1.blocks();
    let [e, f, g, h] = a2.blocks();
    Ok(SymplecticMatrix::trusted(RealMatrix::from_blocks(
        &RealMatrix::block_diag(&a, &e),
        &RealMatrix::block_diag(&b, &f),
        &RealMatrix::block_diag(&c, &g),
        &RealMatrix::block_diag(&d, &h),
    )))
}

/// `𝓐⁻¹ = −𝒥𝓐ᵗ𝒥`.
pub fn symplectic_inverse(a: &SymplecticMatrix) -> SymplecticMatrix {
    let j = standard_j(a.half_dim).into_matrix();
    SymplecticMatrix::trusted(-&j.matmul(&a.entries.transpose()).matmul(&j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn j_examples() {
        assert_eq!(standard_j(1).matrix().to_rows(), vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let j = standard_j(2);
        assert_eq!(j.matrix().matmul(j.matrix()), RealMatrix::identity(4).scale(-1.0));
        assert!(is_symplectic(standard_j(3).matrix(), SYMPLECTIC_TOL).unwrap().0);
    }

    #[test]
    fn is_symplectic_examples() {
        assert_eq!(is_symplectic(&RealMatrix::identity(4), SYMPLECTIC_TOL).unwrap(), (true, 0.0));
        let (ok, residual) = is_symplectic(&RealMatrix::diag(&[2.0, 1.0, 1.0, 1.0]), SYMPLECTIC_TOL).unwrap();
        assert!(!ok);
        // mᵗ𝒥m − 𝒥 has ±1 in the (0,2) and (2,0) slots
        assert!((residual - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(is_symplectic(&RealMatrix::identity(3), 1e-10), Err(Error::OddDimension { side: 3 })));
    }

    #[test]
    fn generator_examples() {
        assert_eq!(gen_vq(&RealMatrix::zeros(2, 2)).unwrap().into_matrix(), RealMatrix::identity(4));
        let i_times = ComplexMatrix::identity(2).scale(Complex64::i());
        assert_eq!(gen_ru(&i_times).unwrap(), standard_j(2));
        let c = 0.6_f64;
        let s = 0.8_f64;
        let w = RealMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let diff = &gen_ru(&w.to_complex()).unwrap().into_matrix() - &gen_dl(&w).unwrap().into_matrix();
        assert!(diff.frobenius_norm() < 1e-15);
    }

    #[test]
    fn generator_errors() {
        let asym = RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(gen_vq(&asym), Err(Error::NotSymmetric { .. })));
        assert!(matches!(gen_dl(&RealMatrix::diag(&[1.0, 0.0])), Err(Error::Singular { .. })));
        assert!(matches!(gen_ru(&RealMatrix::diag(&[1.0, 2.0]).to_complex()), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn inverse_examples() {
        let j = standard_j(2);
        assert_eq!(symplectic_inverse(&j).into_matrix(), j.matrix().transpose());
        let q = RealMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -3.0]);
        assert_eq!(symplectic_inverse(&gen_vq(&q).unwrap()), gen_vq(&q.scale(-1.0)).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let a = catalog(CatalogName::Stft, 1, &CatalogParams::default()).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.starts_with("{\"half_dim\":2,\"entries\":[["));
        let back: SymplecticMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        let bad = r#"{"half_dim":1,"entries":[[2.0,0.0],[0.0,1.0]]}"#;
        assert!(serde_json::from_str::<SymplecticMatrix>(bad).is_err());
    }
}
