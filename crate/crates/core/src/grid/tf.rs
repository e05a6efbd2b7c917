use num_complex::Complex64;
use rustfft::FftPlanner;

use super::fourier::{CenteredDft, Direction};
use super::{apply_metaplectic, GridFunction};
use crate::symplectic::SymplecticMatrix;
use crate::{Error, Result};

fn check_pair(f: &GridFunction, g: &GridFunction) -> Result<()> {
    if f.spec != g.spec {
        return Err(Error::GridMismatch(format!("f lives on {:?}, g on {:?}", f.spec, g.spec)));
    }
    if !matches!(f.dims(), 1 | 2) {
        return Err(Error::GridMismatch(format!("time-frequency inputs must be 1- or 2-dimensional, got {}", f.dims())));
    }
    Ok(())
}

/// `W_𝓐(f, g) = μ(𝓐)(f ⊗ ḡ)` on the `2d`-dimensional grid (modulus
/// meaningful).
pub fn wigner(a: &SymplecticMatrix, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    check_pair(f, g)?;
    let tensor = GridFunction::tensor(f, &g.conj())?;
    apply_metaplectic(a, &tensor)
}

/// Short-time Fourier transform `V_g f(x, ω) = ∫ f(t) conj(g(t − x)) e^{−2πi t·ω} dt`
/// by direct summation, output axes `(x, ω)`.
pub fn stft(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    partial_stft(f, g, f.dims())
}

/// Partial STFT in the first `k` variables:
/// `V^k_g f(x₁, x₂, ω₁, ω₂) = ∫_{ℝᵏ} f(t, x₂) conj(g(t − x₁, −ω₂)) e^{−2πi t·ω₁} dt`,
/// output axes `(x₁, x₂, ω₁, ω₂)`. Windows are zero outside the grid.
pub fn partial_stft(f: &GridFunction, g: &GridFunction, k: usize) -> Result<GridFunction> {
    check_pair(f, g)?;
    let d = f.dims();
    if k == 0 || k > d {
        return Err(Error::BadK { k, d });
    }
    f.spec.ensure_critical()?;
    let n = f.spec.n;
    let half = (n / 2) as i64;
    let out_spec = f.spec.with_dims(2 * d)?;
    let mut out = GridFunction::zeros(out_spec);
    let mut planner = FftPlanner::new();
    let dft = CenteredDft::new(&mut planner, n, f.spec.h, Direction::Forward);
    // conj(g) at a shifted index, zero off the grid
    let shifted = |j: usize, shift: usize| -> Option<usize> {
        let t = j as i64 - shift as i64 + half;
        (t >= 0 && t < n as i64).then_some(t as usize)
    };
    let mut line = vec![Complex64::new(0.0, 0.0); n];

    match (d, k) {
        (1, 1) => {
            for j in 0..n {
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = shifted(t, j).map_or(Complex64::new(0.0, 0.0), |s| f.samples[t] * g.samples[s].conj());
                }
                dft.apply(&mut line);
                out.samples[j * n..(j + 1) * n].copy_from_slice(&line);
            }
        }
        (2, 2) => {
            let mut plane = GridFunction::zeros(f.spec);
            for j1 in 0..n {
                for j2 in 0..n {
                    for t1 in 0..n {
                        for t2 in 0..n {
                            let v = match (shifted(t1, j1), shifted(t2, j2)) {
                                (Some(s1), Some(s2)) => f.samples[t1 * n + t2] * g.samples[s1 * n + s2].conj(),
                                _ => Complex64::new(0.0, 0.0),
                            };
                            plane.samples[t1 * n + t2] = v;
                        }
                    }
                    plane.map_lines(0, |l| dft.apply(l));
                    plane.map_lines(1, |l| dft.apply(l));
                    let base = (j1 * n + j2) * n * n;
                    out.samples[base..base + n * n].copy_from_slice(&plane.samples);
                }
            }
        }
        (2, 1) => {
            for j2 in 0..n {
                for l2 in 0..n {
                    // −ω₂ on the grid; the most negative frequency has no mirror
                    let neg = n - l2;
                    for j1 in 0..n {
                        for (t, slot) in line.iter_mut().enumerate() {
                            *slot = match (shifted(t, j1), neg < n) {
                                (Some(s), true) => f.samples[t * n + j2] * g.samples[s * n + neg].conj(),
                                _ => Complex64::new(0.0, 0.0),
                            };
                        }
                        dft.apply(&mut line);
                        for (k1, v) in line.iter().enumerate() {
                            out.samples[((j1 * n + j2) * n + k1) * n + l2] = *v;
                        }
                    }
                }
            }
        }
        _ => unreachable!("d and k validated above"),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample, GridSpec, Shape};
    use crate::symplectic::{catalog, CatalogName, CatalogParams};
    use std::f64::consts::PI;

    fn gauss_stft_modulus(spec: GridSpec) -> GridFunction {
        GridFunction::from_fn(spec, |z| Complex64::new((-PI * (z[0] * z[0] + z[1] * z[1]) / 2.0).exp(), 0.0))
    }

    #[test]
    fn stft_of_gaussians() {
        let spec = GridSpec::critical(1, 256).unwrap();
        let g = sample(Shape::Gauss, spec);
        let v = stft(&g, &g).unwrap();
        assert!(v.modulus_error(&gauss_stft_modulus(v.spec)) < 1e-6);
    }

    #[test]
    fn stft_matches_wigner_pipeline() {
        let spec = GridSpec::critical(1, 128).unwrap();
        let g = sample(Shape::Gauss, spec);
        let a = catalog(CatalogName::Stft, 1, &CatalogParams::default()).unwrap();
        let w = wigner(&a, &g, &g).unwrap();
        let v = stft(&g, &g).unwrap();
        assert!(w.modulus_error(&v) < 1e-2);
    }

    #[test]
    fn bad_k_and_grid_mismatch() {
        let spec = GridSpec::critical(1, 16).unwrap();
        let g = sample(Shape::Gauss, spec);
        assert_eq!(partial_stft(&g, &g, 2), Err(Error::BadK { k: 2, d: 1 }));
        assert_eq!(partial_stft(&g, &g, 0), Err(Error::BadK { k: 0, d: 1 }));
        let other = sample(Shape::Gauss, GridSpec::critical(1, 32).unwrap());
        assert!(matches!(stft(&g, &other), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn identity_wigner_is_tensor() {
        let spec = GridSpec::critical(1, 32).unwrap();
        let f = sample(Shape::Hermite { k: 1 }, spec);
        let g = sample(Shape::Gauss, spec).scale(Complex64::new(0.0, 1.0));
        let id = SymplecticMatrix::new(crate::matrix::RealMatrix::identity(4), 1e-10).unwrap();
        let w = wigner(&id, &f, &g).unwrap();
        assert_eq!(w, GridFunction::tensor(&f, &g.conj()).unwrap());
    }
}
