//! Seeded sampling of symplectic matrices through their pre-Iwasawa factors.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{gen_dl, gen_ru, gen_vq, SymplecticMatrix};
use crate::matrix::{ComplexMatrix, RealMatrix};

/// Orthonormalizes the columns of a Gaussian matrix (modified Gram–Schmidt,
/// run twice). The positive diagonal of the implied `R` makes the result
/// Haar distributed.
fn gram_schmidt_complex(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.cols();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..m.rows()).map(|i| m[(i, j)]).collect()).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let dot: Complex64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let basis = cols[k].clone();
                cols[j].iter_mut().zip(&basis).for_each(|(x, b)| *x -= dot * b);
            }
        }
        let norm = cols[j].iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|x| *x /= norm);
    }
    ComplexMatrix::from_fn(m.rows(), n, |i, j| cols[j][i])
}

/// Haar-distributed real orthogonal matrix.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> RealMatrix {
    let g = RealMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    gram_schmidt_complex(&g.to_complex()).re()
}

/// Haar-distributed unitary matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    gram_schmidt_complex(&g)
}

/// `𝒱_Q 𝒟_L ℛ_U` with `Q` the symmetric part of a standard normal matrix,
/// `L = O₁ diag(s) O₂` with singular values `s` uniform in `[0.5, 2]` and
/// `U` Haar unitary. Deterministic per `(n, seed)`.
pub fn random_symplectic(n: usize, seed: u64) -> SymplecticMatrix {
    assert!(n >= 1, "random_symplectic needs n >= 1");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = RealMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let q = g.symmetrized();
    let o1 = random_orthogonal(n, &mut rng);
    let o2 = random_orthogonal(n, &mut rng);
    let s: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..=2.0)).collect();
    let l = o1.matmul(&RealMatrix::diag(&s)).matmul(&o2);
    let u = random_unitary(n, &mut rng);
    let vq = gen_vq(&q).expect("symmetrized matrix is symmetric");
    let dl = gen_dl(&l).expect("singular values are at least 0.5");
    let ru = gen_ru(&u).expect("Gram-Schmidt output is unitary");
    &(&vq * &dl) * &ru
}
