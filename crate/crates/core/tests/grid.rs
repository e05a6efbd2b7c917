use std::f64::consts::PI;

use metaplectic_core::decision::{witness_recipe, VerdictKind};
use metaplectic_core::grid::{
    apply_dilation, apply_frac_ft, sample, stft, support_report, wigner, witness_build, GridFunction, GridSpec, Shape,
};
use metaplectic_core::matrix::RealMatrix;
use metaplectic_core::symplectic::{catalog, CatalogName, CatalogParams};
use num_complex::Complex64;

fn area_of(shape: Shape, alpha: f64, n: usize) -> f64 {
    let f = sample(shape, GridSpec::critical(1, n).unwrap());
    support_report(&apply_frac_ft(&f, &[Complex64::from_polar(1.0, alpha)]).unwrap(), 1e-3).area
}

#[test]
fn rihaczek_witness_area_is_product_of_supports() {
    let spec = GridSpec::critical(1, 1024).unwrap();
    let a = catalog(CatalogName::TauWigner, 1, &CatalogParams::with_tau(0.0)).unwrap();
    let recipe = witness_recipe(&a, VerdictKind::Sesquilinear, 1e-8).unwrap();
    let rect = sample(Shape::Rect { a: 1.0 }, spec);
    let wit = witness_build(&recipe, &rect, &rect).unwrap();
    let area = support_report(&wit.w, 1e-3).area;
    assert!((area - 4.0).abs() < 0.05 * 4.0, "{area}");
}

#[test]
fn stft_of_gaussians_lives_in_a_disc() {
    let spec = GridSpec::critical(1, 256).unwrap();
    let g = sample(Shape::Gauss, spec);
    let a = catalog(CatalogName::Stft, 1, &CatalogParams::default()).unwrap();
    let w = wigner(&a, &g, &g).unwrap();
    let report = support_report(&w, 1e-3);
    assert!(report.mass_fraction > 0.999);
    let outside = w
        .samples
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > report.threshold)
        .map(|(flat, _)| w.spec.point(flat))
        .filter(|p| p[0].hypot(p[1]) > 3.0)
        .count();
    assert_eq!(outside, 0);
    // |V| = e^{−πr²/2} > 1e−3 inside r² = 2 ln(1000)/π
    let disc = PI * 2.0 * 1000f64.ln() / PI;
    assert!((report.area - disc).abs() < 0.05 * disc, "{}", report.area);
}

#[test]
fn fractional_ft_is_nearly_unitary() {
    let spec = GridSpec::critical(1, 256).unwrap();
    let f = GridFunction::from_fn(spec, |x| {
        Complex64::from_polar((-PI * (x[0] - 0.4).powi(2)).exp(), 0.8 * x[0] * x[0])
    });
    for k in 0..16 {
        let alpha = -PI + (k as f64 + 0.37) * PI / 8.0;
        let g = apply_frac_ft(&f, &[Complex64::from_polar(1.0, alpha)]).unwrap();
        assert!((g.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-3, "{alpha}");
    }
}

#[test]
fn dilation_norm_error_shrinks_under_refinement() {
    let l = RealMatrix::from_row_slice(2, 2, &[1.3, 0.4, -0.2, 0.9]);
    let mut previous = f64::INFINITY;
    for n in [32, 64, 128] {
        let spec = GridSpec::critical(2, n).unwrap();
        let f = sample(Shape::Gauss, spec);
        let err = (apply_dilation(&f, &l).unwrap().l2_norm() / f.l2_norm() - 1.0).abs();
        assert!(err < 1e-2, "N={n}: {err}");
        assert!(err < previous, "N={n}: {err} >= {previous}");
        previous = err;
    }
}

#[test]
fn rotated_rect_support_keeps_growing() {
    // |μ(ℛ_I) rect| is compact; |μ(ℛ_{e^{iπ/4}}) rect| is not
    let sizes = [256, 512, 1024];
    let identity: Vec<f64> = sizes.iter().map(|&n| area_of(Shape::Rect { a: 1.0 }, 0.0, n)).collect();
    let rotated: Vec<f64> = sizes.iter().map(|&n| area_of(Shape::Rect { a: 1.0 }, PI / 4.0, n)).collect();
    assert!(identity.windows(2).all(|p| (p[1] - p[0]).abs() < 0.1 * p[0]), "{identity:?}");
    assert!(rotated.windows(2).all(|p| p[1] > 1.1 * p[0]), "{rotated:?}");
}

#[test]
fn two_dimensional_stft_pipeline() {
    let spec = GridSpec::critical(2, 32).unwrap();
    let f = sample(Shape::Gauss, spec);
    let a = catalog(CatalogName::Stft, 2, &CatalogParams::default()).unwrap();
    let w = wigner(&a, &f, &f).unwrap();
    let v = stft(&f, &f).unwrap();
    assert!(w.modulus_error(&v) < 1e-2, "{}", w.modulus_error(&v));
}
