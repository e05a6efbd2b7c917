use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::GridFunction;
use crate::{Error, Result};

/// Sign of the exponent: `Forward` is `e^{−2πi x·ω}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Centered DFT `F_k = h Σ_n f_n e^{∓2πi (n − N/2)(k − N/2)/N}`, which is
/// exactly unitary when `N·h² = 1`.
pub(crate) struct CenteredDft {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    post: Complex64,
}

impl CenteredDft {
    pub(crate) fn new(planner: &mut FftPlanner<f64>, n: usize, h: f64, direction: Direction) -> Self {
        let fft = match direction {
            Direction::Forward => planner.plan_fft_forward(n),
            Direction::Inverse => planner.plan_fft_inverse(n),
        };
        // e^{∓iπN/2} from expanding (n − N/2)(k − N/2); real for even N
        let post = Complex64::new(if (n / 2).is_multiple_of(2) { h } else { -h }, 0.0);
        Self { n, fft, post }
    }

    pub(crate) fn apply(&self, line: &mut [Complex64]) {
        debug_assert_eq!(line.len(), self.n);
        for (j, v) in line.iter_mut().enumerate() {
            if j % 2 == 1 {
                *v = -*v;
            }
        }
        self.fft.process(line);
        for (k, v) in line.iter_mut().enumerate() {
            *v *= if k % 2 == 1 { -self.post } else { self.post };
        }
    }
}

/// Centered DFT along `axes`, scaled by `h` per axis so it approximates the
/// continuous transform. Requires a critically sampled grid.
pub fn apply_dft(f: &GridFunction, axes: &[usize], direction: Direction) -> Result<GridFunction> {
    f.spec.ensure_critical()?;
    check_axes(f, axes)?;
    let mut planner = FftPlanner::new();
    let dft = CenteredDft::new(&mut planner, f.spec.n, f.spec.h, direction);
    let mut out = f.clone();
    for &axis in axes {
        out.map_lines(axis, |line| dft.apply(line));
    }
    Ok(out)
}

/// Forward Fourier transform (`e^{−2πi x·ω}`) along `axes`.
pub fn apply_fourier(f: &GridFunction, axes: &[usize]) -> Result<GridFunction> {
    apply_dft(f, axes, Direction::Forward)
}

fn check_axes(f: &GridFunction, axes: &[usize]) -> Result<()> {
    if let Some(&bad) = axes.iter().find(|&&a| a >= f.dims()) {
        return Err(Error::DimensionMismatch(format!("axis {bad} on a {}-dimensional grid", f.dims())));
    }
    Ok(())
}

/// `j ↦ (N − j) mod N`, the grid version of `f(−x)`; it is what two
/// centered DFTs produce.
pub(crate) fn parity_line(line: &mut [Complex64]) {
    let n = line.len();
    let copy = line.to_vec();
    for (j, v) in line.iter_mut().enumerate() {
        *v = copy[(n - j) % n];
    }
}

const SNAP: f64 = 1e-14;

enum AxisPlan {
    Identity,
    Parity,
    Dft(Direction),
    Chirp { pre_fourier: bool, cot: f64, csc: f64 },
}

fn plan_axis(sigma: Complex64) -> AxisPlan {
    let sigma = sigma / sigma.norm();
    let i = Complex64::i();
    if (sigma - 1.0).norm() < SNAP {
        return AxisPlan::Identity;
    }
    if (sigma + 1.0).norm() < SNAP {
        return AxisPlan::Parity;
    }
    if (sigma - i).norm() < SNAP {
        return AxisPlan::Dft(Direction::Forward);
    }
    if (sigma + i).norm() < SNAP {
        return AxisPlan::Dft(Direction::Inverse);
    }
    // ℱ_σ = ℱ_{−iσ} ℱ_i up to phase; rotate so that |cot α| ≤ 1, which keeps
    // the input chirp below the grid's Nyquist frequency
    let (pre_fourier, s) = if sigma.re.abs() > sigma.im.abs() { (true, -i * sigma) } else { (false, sigma) };
    AxisPlan::Chirp { pre_fourier, cot: s.re / s.im, csc: 1.0 / s.im }
}

/// Chirp–Fourier–chirp realization of the fractional Fourier transform with
/// angle `α` (`cot α`, `csc α` given):
/// `out(ω) = |csc α|^{1/2} e^{iπ cot α ω²} ∫ f(t) e^{iπ cot α t²} e^{−2πi csc α ωt} dt`.
/// The sum at the scaled frequencies `csc α·ω_k` is evaluated exactly by a
/// Bluestein chirp-z transform of length `2N`.
struct ChirpZ {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    kernel_hat: Vec<Complex64>,
}

impl ChirpZ {
    fn new(planner: &mut FftPlanner<f64>, n: usize, h: f64, cot: f64, csc: f64) -> Self {
        let len = 2 * n;
        let fwd = planner.plan_fft_forward(len);
        let inv = planner.plan_fft_inverse(len);
        let beta = csc / n as f64;
        let half = (n / 2) as f64;
        let chirp = |m: f64| Complex64::from_polar(1.0, PI * beta * m * m);
        let pre = (0..n)
            .map(|j| {
                let t = (j as f64 - half) * h;
                Complex64::from_polar(1.0, PI * cot * t * t) * chirp(j as f64 - half).conj()
            })
            .collect();
        let norm = csc.abs().sqrt() * h / len as f64;
        let post = (0..n)
            .map(|k| {
                let w = (k as f64 - half) * h;
                Complex64::from_polar(norm, PI * cot * w * w) * chirp(k as f64 - half).conj()
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); len];
        for m in 0..n {
            kernel[m] = chirp(m as f64);
            if m > 0 {
                kernel[len - m] = chirp(m as f64);
            }
        }
        fwd.process(&mut kernel);
        Self { n, fwd, inv, pre, post, kernel_hat: kernel }
    }

    fn apply(&self, line: &mut [Complex64], buf: &mut Vec<Complex64>) {
        buf.clear();
        buf.extend(line.iter().zip(&self.pre).map(|(a, b)| a * b));
        buf.resize(2 * self.n, Complex64::new(0.0, 0.0));
        self.fwd.process(buf);
        buf.iter_mut().zip(&self.kernel_hat).for_each(|(a, b)| *a *= b);
        self.inv.process(buf);
        for (k, v) in line.iter_mut().enumerate() {
            *v = buf[k] * self.post[k];
        }
    }
}

/// Fractional Fourier transform `ℱ_Σ` with `Σ = diag(sigma)`, axis by axis.
/// `σ = 1` is the identity, `σ = −1` parity, `σ = ±i` the (inverse) Fourier
/// transform; other angles use [`ChirpZ`], preceded by a Fourier transform
/// when `|cot α| > 1`.
pub fn apply_frac_ft(f: &GridFunction, sigma: &[Complex64]) -> Result<GridFunction> {
    if sigma.len() != f.dims() {
        return Err(Error::DimensionMismatch(format!("{} angles for a {}-dimensional grid", sigma.len(), f.dims())));
    }
    let mut out = f.clone();
    let mut planner = FftPlanner::new();
    let (n, h) = (f.spec.n, f.spec.h);
    let mut buf = Vec::with_capacity(2 * n);
    for (axis, &s) in sigma.iter().enumerate() {
        match plan_axis(s) {
            AxisPlan::Identity => {}
            AxisPlan::Parity => out.map_lines(axis, parity_line),
            AxisPlan::Dft(direction) => {
                f.spec.ensure_critical()?;
                let dft = CenteredDft::new(&mut planner, n, h, direction);
                out.map_lines(axis, |line| dft.apply(line));
            }
            AxisPlan::Chirp { pre_fourier, cot, csc } => {
                f.spec.ensure_critical()?;
                let dft = CenteredDft::new(&mut planner, n, h, Direction::Forward);
                let cz = ChirpZ::new(&mut planner, n, h, cot, csc);
                out.map_lines(axis, |line| {
                    if pre_fourier {
                        dft.apply(line);
                    }
                    cz.apply(line, &mut buf);
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample, GridSpec, Shape};

    fn naive_dft(f: &[Complex64], h: f64, sign: f64) -> Vec<Complex64> {
        let n = f.len();
        let half = (n / 2) as f64;
        (0..n)
            .map(|k| {
                f.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let phase = sign * 2.0 * PI * (j as f64 - half) * (k as f64 - half) / n as f64;
                        v * Complex64::from_polar(h, phase)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_sum() {
        for n in [2, 4, 8, 64] {
            let spec = GridSpec::critical(1, n).unwrap();
            let f = GridFunction::from_fn(spec, |x| Complex64::new(x[0].sin() + 0.3, x[0] * x[0]));
            for (dir, sign) in [(Direction::Forward, -1.0), (Direction::Inverse, 1.0)] {
                let fast = apply_dft(&f, &[0], dir).unwrap();
                let slow = naive_dft(&f.samples, spec.h, sign);
                let err: f64 = fast.samples.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(err < 1e-12, "n={n} err={err}");
            }
        }
    }

    #[test]
    fn gauss_is_self_dual() {
        let spec = GridSpec::critical(1, 256).unwrap();
        let g = sample(Shape::Gauss, spec);
        assert!(apply_fourier(&g, &[0]).unwrap().relative_l2_error(&g) < 1e-6);
    }

    #[test]
    fn double_transform_is_parity() {
        let spec = GridSpec::critical(2, 32).unwrap();
        let f = GridFunction::from_fn(spec, |x| Complex64::new((-x[0] * x[0]).exp() * (1.0 + x[1]), x[0]));
        let twice = apply_fourier(&apply_fourier(&f, &[0]).unwrap(), &[0]).unwrap();
        let mut expected = f.clone();
        expected.map_lines(0, parity_line);
        assert!(twice.relative_l2_error(&expected) < 1e-10);
    }

    #[test]
    fn rect_transform_at_zero() {
        let spec = GridSpec::critical(1, 1024).unwrap();
        let a = 1.0;
        let r = sample(Shape::Rect { a }, spec);
        let hat = apply_fourier(&r, &[0]).unwrap();
        assert!((hat.samples[512].re - 2.0 * a).abs() < 1e-3 * 2.0 * a + spec.h);
    }

    #[test]
    fn parseval_and_critical_sampling() {
        let spec = GridSpec::critical(2, 64).unwrap();
        let f = GridFunction::from_fn(spec, |x| Complex64::new(x[0].cos() * (-x[1] * x[1]).exp(), x[1]));
        let hat = apply_fourier(&f, &[0, 1]).unwrap();
        assert!((hat.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-12);
        let off = GridSpec::new(1, 64, 0.2).unwrap();
        assert!(matches!(
            apply_fourier(&sample(Shape::Gauss, off), &[0]),
            Err(Error::NotCriticallySampled { .. })
        ));
    }

    #[test]
    fn frac_special_angles() {
        let spec = GridSpec::critical(1, 128).unwrap();
        let f = sample(Shape::Hermite { k: 3 }, spec).scale(Complex64::new(0.5, 0.2));
        let i = Complex64::i();
        let via_frac = apply_frac_ft(&f, &[i]).unwrap();
        assert!(via_frac.relative_l2_error(&apply_fourier(&f, &[0]).unwrap()) < 1e-10);
        assert_eq!(apply_frac_ft(&f, &[Complex64::new(1.0, 0.0)]).unwrap(), f);
    }

    #[test]
    fn frac_gauss_modulus_invariant() {
        let spec = GridSpec::critical(1, 256).unwrap();
        let g = sample(Shape::Gauss, spec);
        for k in 0..24 {
            let sigma = Complex64::from_polar(1.0, k as f64 * PI / 12.0 + 0.1);
            let out = apply_frac_ft(&g, &[sigma]).unwrap();
            assert!(out.modulus_error(&g) < 1e-3, "k={k}: {}", out.modulus_error(&g));
        }
    }

    #[test]
    fn frac_chirp_matches_quadrature() {
        // direct evaluation of the chirp-Fourier-chirp integral at a few points
        let spec = GridSpec::critical(1, 128).unwrap();
        let f = sample(Shape::Hermite { k: 2 }, spec);
        let alpha: f64 = 1.1;
        let out = apply_frac_ft(&f, &[Complex64::from_polar(1.0, alpha)]).unwrap();
        let (cot, csc) = (alpha.cos() / alpha.sin(), 1.0 / alpha.sin());
        for k in [40, 64, 70, 90] {
            let w = spec.coord(k);
            let direct: Complex64 = (0..spec.n)
                .map(|j| {
                    let t = spec.coord(j);
                    f.samples[j] * Complex64::from_polar(spec.h, PI * cot * t * t - 2.0 * PI * csc * w * t)
                })
                .sum::<Complex64>()
                * Complex64::from_polar(csc.abs().sqrt(), PI * cot * w * w);
            assert!((direct - out.samples[k]).norm() < 1e-12, "k={k}");
        }
    }
}
