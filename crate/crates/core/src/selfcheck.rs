//! Reduced-size property suites behind `metaplectic selfcheck`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::decision::decide;
use crate::decomp::{joint_svd, off_block_norm, pre_iwasawa};
use crate::grid::{apply_dft, apply_frac_ft, sample, stft, wigner, Direction, GridFunction, GridSpec, Shape};
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::symplectic::{catalog, gen_ru, random_symplectic, random_unitary, CatalogName, CatalogParams};
use crate::{Error, Result};

/// Deliberate defects for negative-control runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// The Fourier transform used by the grid checks runs with the wrong
    /// exponent sign.
    FftSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Fault::None),
            "fft-sign" => Ok(Fault::FftSign),
            other => Err(Error::BadParam(format!("unknown fault `{other}` (expected fft-sign)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, value: Result<f64>, tol: f64) -> Check {
    let name = name.to_string();
    match value {
        Ok(v) => Check { name, passed: v < tol, detail: format!("{v:.3e} (tol {tol:.0e})") },
        Err(e) => Check { name, passed: false, detail: e.to_string() },
    }
}

fn modulus_gap(got: &GridFunction, expected: impl Fn(&[f64]) -> f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (flat, z) in got.samples.iter().enumerate() {
        let e = expected(&got.spec.point(flat));
        num += (z.norm() - e).powi(2);
        den += e * e;
    }
    (num / den).sqrt()
}

fn stft_factors() -> Result<f64> {
    let f = pre_iwasawa(&catalog(CatalogName::Stft, 1, &CatalogParams::default())?)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let q = RealMatrix::from_row_slice(2, 2, &[0.0, -0.5, -0.5, 0.0]);
    let l = RealMatrix::identity(2).scale(2f64.sqrt());
    let u = ComplexMatrix::from_parts(
        &RealMatrix::from_row_slice(2, 2, &[s, -s, 0.0, 0.0]),
        &RealMatrix::from_row_slice(2, 2, &[0.0, 0.0, s, s]),
    );
    Ok((&f.q - &q).max_abs().max((&f.l - &l).max_abs()).max((&f.u - &u).frobenius_norm()))
}

fn verdict_table() -> Result<f64> {
    let p = CatalogParams::default();
    let cases = [
        (catalog(CatalogName::Stft, 1, &p)?, true, true),
        (catalog(CatalogName::Ambiguity, 1, &p)?, true, true),
        (catalog(CatalogName::TauWigner, 1, &CatalogParams::with_tau(0.5))?, true, true),
        (catalog(CatalogName::TauWigner, 1, &CatalogParams::with_tau(0.0))?, false, true),
        (catalog(CatalogName::Fourier, 1, &p)?, false, false),
        (catalog(CatalogName::Chirp, 1, &p)?, false, false),
        (catalog(CatalogName::Dilation, 1, &p)?, false, false),
    ];
    let mut wrong = 0;
    for (a, sesq, quad) in cases {
        let v = decide(&a, 1e-8)?;
        if v.sesquilinear.holds != sesq || v.quadratic.holds != quad {
            wrong += 1;
        }
    }
    Ok(wrong as f64)
}

fn pre_iwasawa_suite(seed: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..90 {
        let a = random_symplectic([1, 2, 4][i % 3], seed.wrapping_mul(1000).wrapping_add(i as u64));
        let r = pre_iwasawa(&a)?.reconstruct()?;
        worst = worst.max((&r - a.matrix()).frobenius_norm() / a.matrix().frobenius_norm());
    }
    Ok(worst)
}

fn joint_svd_suite(seed: u64) -> Result<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let u = random_unitary(2 + i % 7, &mut rng);
        worst = worst.max((&joint_svd(&u)?.reconstruct() - &u).frobenius_norm());
    }
    Ok(worst)
}

fn tau_invariance(seed: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let a = random_symplectic(2, seed.wrapping_add(i));
        let base = off_block_norm(&crate::decision::deciding_product(&a)?);
        for k in 0..4 {
            let tau = Complex64::from_polar(1.0, 0.7 + 1.3 * k as f64);
            let r = gen_ru(&ComplexMatrix::identity(2).scale(tau))?;
            let moved = off_block_norm(&crate::decision::deciding_product(&(&a * &r))?);
            worst = worst.max((moved - base).abs());
        }
    }
    Ok(worst)
}

fn fourier(f: &GridFunction, fault: Fault) -> Result<GridFunction> {
    let direction = match fault {
        Fault::None => Direction::Forward,
        Fault::FftSign => Direction::Inverse,
    };
    apply_dft(f, &[0], direction)
}

fn modulated_gauss(spec: GridSpec) -> GridFunction {
    GridFunction::from_fn(spec, |x| Complex64::from_polar((-PI * (x[0] - 1.0).powi(2)).exp(), PI * x[0]))
}

fn fourier_sign(fault: Fault) -> Result<f64> {
    let spec = GridSpec::critical(1, 128)?;
    let ff = fourier(&modulated_gauss(spec), fault)?;
    Ok(modulus_gap(&ff, |w| (-PI * (w[0] - 0.5).powi(2)).exp()))
}

fn frac_ft_at_i(fault: Fault) -> Result<f64> {
    let spec = GridSpec::critical(1, 128)?;
    let f = modulated_gauss(spec);
    let via_frac = apply_frac_ft(&f, &[Complex64::new(0.0, 1.0)])?;
    Ok(via_frac.relative_l2_error(&fourier(&f, fault)?))
}

fn stft_gaussian() -> Result<f64> {
    let spec = GridSpec::critical(1, 128)?;
    let g = sample(Shape::Gauss, spec);
    let w = wigner(&catalog(CatalogName::Stft, 1, &CatalogParams::default())?, &g, &g)?;
    let v = stft(&g, &g)?;
    let closed = |z: &[f64]| (-PI * (z[0] * z[0] + z[1] * z[1]) / 2.0).exp();
    Ok(modulus_gap(&w, closed).max(modulus_gap(&v, closed)))
}

fn rihaczek() -> Result<f64> {
    let spec = GridSpec::critical(1, 128)?;
    let f = GridFunction::from_fn(spec, |x| Complex64::new((-PI * (x[0] - 0.5).powi(2)).exp(), 0.0));
    let g = GridFunction::from_fn(spec, |x| Complex64::from_polar((-PI * x[0] * x[0]).exp(), 2.0 * PI * 0.7 * x[0]));
    let w = wigner(&catalog(CatalogName::TauWigner, 1, &CatalogParams::with_tau(0.0))?, &f, &g)?;
    Ok(modulus_gap(&w, |z| (-PI * (z[0] - 0.5).powi(2)).exp() * (-PI * (z[1] - 0.7).powi(2)).exp()))
}

/// Runs every suite; `seed` drives the random draws.
pub fn run_selfcheck(seed: u64, fault: Fault) -> Vec<Check> {
    vec![
        check("catalog.stft_factors", stft_factors(), 1e-12),
        check("decision.verdict_table", verdict_table(), 0.5),
        check("decomp.pre_iwasawa_reconstruction", pre_iwasawa_suite(seed), 1e-9),
        check("decomp.joint_svd_reconstruction", joint_svd_suite(seed), 1e-10),
        check("decision.tau_invariance", tau_invariance(seed), 1e-12),
        check("grid.fourier_sign", fourier_sign(fault), 1e-6),
        check("grid.frac_ft_at_i", frac_ft_at_i(fault), 1e-10),
        check("grid.stft_gaussian", stft_gaussian(), 1e-3),
        check("grid.rihaczek_modulus", rihaczek(), 1e-3),
    ]
}
