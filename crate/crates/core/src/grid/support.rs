use serde::{Deserialize, Serialize};

use super::{apply_dilation, apply_metaplectic, wigner, GridFunction};
use crate::decision::WitnessRecipe;
use crate::symplectic::{gen_ru, SymplecticMatrix};
use crate::{Error, Result};

/// Relative L² tolerance between the realized `|W|` and its closed form.
pub const WITNESS_TOL: f64 = 5e-2;

/// Finite-grid proxy for the measure of the support of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub eps: f64,
    /// Cells with `|F| > threshold`, times the cell volume.
    pub area: f64,
    /// Share of `‖F‖²` carried by those cells.
    pub mass_fraction: f64,
    /// `eps · max|F|`.
    pub threshold: f64,
}

pub fn support_report(f: &GridFunction, eps: f64) -> SupportReport {
    let threshold = eps * f.max_abs();
    let (mut count, mut inside, mut total) = (0usize, 0.0, 0.0);
    for z in &f.samples {
        let m2 = z.norm_sqr();
        total += m2;
        if z.norm() > threshold {
            count += 1;
            inside += m2;
        }
    }
    if total == 0.0 {
        return SupportReport { eps, area: 0.0, mass_fraction: 0.0, threshold };
    }
    SupportReport { eps, area: count as f64 * f.spec.cell_volume(), mass_fraction: inside / total, threshold }
}

/// A witness pair and its distribution.
#[derive(Debug, Clone)]
pub struct Witness {
    pub f: GridFunction,
    pub g: GridFunction,
    /// `W_𝓐(f, g)` as realized on the grid.
    pub w: GridFunction,
    /// `|det L'|^{−1/2} |(f₀ ⊗ ḡ₀)(L'^{−1}·)|` with `L' = L·W`.
    pub expected: GridFunction,
    /// Relative L² distance between `|w|` and `expected`.
    pub mismatch: f64,
}

/// Builds `f, g` from compactly supported seeds so that `|W_𝓐(f, g)|` is a
/// dilation of `|f₀ ⊗ g₀|`, hence compactly supported.
///
/// With `𝓐 = 𝒱_Q𝒟_L𝒟_Wℛ_{diag(Δ₁,Δ₂)}`, `f = μ(ℛ_{Δ₁})⁻¹f₀` and
/// `ḡ = μ(ℛ_{Δ₂})⁻¹ḡ₀`. Fails with `NumericalBreakdown` when the realized
/// modulus drifts more than [`WITNESS_TOL`] from the closed form.
pub fn witness_build(recipe: &WitnessRecipe, f0: &GridFunction, g0: &GridFunction) -> Result<Witness> {
    if f0.spec != g0.spec {
        return Err(Error::GridMismatch(format!("f0 lives on {:?}, g0 on {:?}", f0.spec, g0.spec)));
    }
    let d = recipe.d();
    if f0.dims() != d {
        return Err(Error::DimensionMismatch(format!("recipe needs {d}-dimensional seeds, got {}", f0.dims())));
    }
    let a = SymplecticMatrix::new(recipe.reconstruct()?, 1e-8)?;
    let f = apply_metaplectic(&gen_ru(&recipe.delta1.adjoint())?, f0)?;
    let g = apply_metaplectic(&gen_ru(&recipe.delta2.adjoint())?, &g0.conj())?.conj();
    let w = wigner(&a, &f, &g)?;

    let lw = recipe.l.matmul(&recipe.w);
    let expected = apply_dilation(&GridFunction::tensor(f0, &g0.conj())?, &lw)?.abs();
    let mismatch = w.modulus_error(&expected);
    if mismatch.is_nan() || mismatch > WITNESS_TOL {
        return Err(Error::NumericalBreakdown(format!(
            "witness modulus differs from the closed form by {mismatch:.3e} (tolerance {WITNESS_TOL:.0e})"
        )));
    }
    Ok(Witness { f, g, w, expected, mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{witness_recipe, VerdictKind};
    use crate::grid::{sample, GridSpec, Shape};
    use crate::matrix::RealMatrix;
    use crate::symplectic::{catalog, gen_vq, standard_j, CatalogName, CatalogParams};

    #[test]
    fn rect_square_area() {
        let spec = GridSpec::critical(2, 256).unwrap();
        let f = sample(Shape::Rect { a: 1.0 }, spec);
        let r = support_report(&f, 0.5);
        let ring = 4.0 * 2.0 * 2.0 * spec.h + 4.0 * spec.h * spec.h;
        assert!((r.area - 4.0).abs() <= ring, "{r:?}");
        assert_eq!(r.mass_fraction, 1.0);
    }

    #[test]
    fn gauss_area_grows_with_log_eps() {
        let spec = GridSpec::critical(1, 1024).unwrap();
        let f = sample(Shape::Gauss, spec);
        // |x| < sqrt(ln(1/eps)/π) on the level set
        for eps in [1e-2, 1e-4, 1e-6] {
            let r = support_report(&f, eps);
            let exact = 2.0 * ((1.0 / eps).ln() / std::f64::consts::PI).sqrt();
            assert!((r.area - exact).abs() <= 2.0 * spec.h, "{eps}: {r:?}");
        }
    }

    #[test]
    fn zero_function() {
        let spec = GridSpec::critical(1, 16).unwrap();
        let r = support_report(&GridFunction::zeros(spec), 1e-3);
        assert_eq!((r.area, r.mass_fraction), (0.0, 0.0));
    }

    #[test]
    fn chirp_witness_is_tensor() {
        let spec = GridSpec::critical(1, 64).unwrap();
        let q = RealMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, -2.0]);
        let a = gen_vq(&q).unwrap();
        let recipe = witness_recipe(&a, VerdictKind::Sesquilinear, 1e-8).unwrap();
        let f0 = sample(Shape::Rect { a: 1.0 }, spec);
        let g0 = sample(Shape::TruncatedGauss { a: 1.5 }, spec);
        let wit = witness_build(&recipe, &f0, &g0).unwrap();
        assert!(wit.f.relative_l2_error(&f0) < 1e-12);
        assert!(wit.g.relative_l2_error(&g0) < 1e-12);
        assert!(wit.mismatch < 1e-12);
    }

    #[test]
    fn fourier_witness_area() {
        let spec = GridSpec::critical(1, 128).unwrap();
        let a = standard_j(2);
        let recipe = witness_recipe(&a, VerdictKind::Sesquilinear, 1e-8).unwrap();
        let rect = sample(Shape::Rect { a: 1.0 }, spec);
        let wit = witness_build(&recipe, &rect, &rect).unwrap();
        let r = support_report(&wit.w, 1e-3);
        let cell = spec.h * spec.h;
        let ring = 4.0 * 2.0 * 2.0 * spec.h + 4.0 * cell;
        assert!((r.area - 4.0).abs() <= ring, "{r:?}");
    }

    #[test]
    fn rihaczek_witness() {
        let spec = GridSpec::critical(1, 128).unwrap();
        let a = catalog(CatalogName::TauWigner, 1, &CatalogParams::with_tau(0.0)).unwrap();
        let recipe = witness_recipe(&a, VerdictKind::Sesquilinear, 1e-8).unwrap();
        let rect = sample(Shape::Rect { a: 1.0 }, spec);
        let wit = witness_build(&recipe, &rect, &rect).unwrap();
        assert!(wit.mismatch < WITNESS_TOL);
        assert!(wit.f.is_finite() && wit.g.l2_norm() > 0.0);
    }

    #[test]
    fn holds_has_no_recipe() {
        let a = catalog(CatalogName::Stft, 1, &CatalogParams::default()).unwrap();
        assert_eq!(witness_recipe(&a, VerdictKind::Sesquilinear, 1e-8).unwrap_err(), Error::VerdictHolds);
    }
}
