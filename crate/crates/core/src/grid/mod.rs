//! Finite-grid realization of metaplectic operators and `𝓐`-Wigner
//! distributions.
//!
//! Functions on `ℝᵐ` (`m ∈ {1, 2, 4}`) are sampled on the centered grid
//! `x_j = (j − N/2)·h`, `j = 0..N`, per axis, stored row-major with axis 0
//! slowest. On a critically sampled grid (`N·h² = 1`) the centered DFT maps
//! the grid onto itself, so whole pipelines stay on one grid. Only moduli
//! are meaningful: metaplectic operators are defined up to a global phase.

mod fourier;
mod io;
mod ops;
mod shapes;
mod support;
mod tf;

pub use fourier::{apply_dft, apply_fourier, apply_frac_ft, Direction};
pub use io::{read_binary, write_binary, write_csv, BinarySidecar};
pub use ops::{apply_chirp, apply_dilation, apply_dilation_with, apply_metaplectic, Interpolation};
pub use shapes::{sample, Shape};
pub use support::{support_report, witness_build, SupportReport, Witness, WITNESS_TOL};
pub use tf::{partial_stft, stft, wigner};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Centered uniform grid on `ℝᵐ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dims: usize,
    pub n: usize,
    pub h: f64,
}

impl GridSpec {
    pub fn new(dims: usize, n: usize, h: f64) -> Result<Self> {
        if !matches!(dims, 1 | 2 | 4) {
            return Err(Error::BadParam(format!("grid dimension must be 1, 2 or 4, got {dims}")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::BadParam(format!("points per axis must be a power of two >= 2, got {n}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::BadParam(format!("spacing must be positive, got {h}")));
        }
        Ok(Self { dims, n, h })
    }

    /// The critically sampled grid `h = N^{−1/2}`.
    pub fn critical(dims: usize, n: usize) -> Result<Self> {
        Self::new(dims, n, 1.0 / (n as f64).sqrt())
    }

    pub fn with_dims(&self, dims: usize) -> Result<Self> {
        Self::new(dims, self.n, self.h)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dims as i32)
    }

    /// `N·h²`; equals 1 on a critically sampled grid.
    pub fn sampling_product(&self) -> f64 {
        self.n as f64 * self.h * self.h
    }

    pub fn is_critical(&self) -> bool {
        (self.sampling_product() - 1.0).abs() < 1e-12
    }

    pub fn coord(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.h
    }

    /// Axis coordinates of all grid points.
    pub fn axis(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }

    /// Multi-index of a flat index.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.n;
            flat /= self.n;
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// Coordinates of a flat index.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0; self.dims];
        self.unravel(flat, &mut idx);
        idx.iter().map(|&j| self.coord(j)).collect()
    }

    /// Grid index of coordinate `x` if it lies on the grid.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let t = x / self.h + (self.n / 2) as f64;
        let r = t.round();
        if (t - r).abs() < 1e-9 && r >= 0.0 && r < self.n as f64 {
            Some(r as usize)
        } else {
            None
        }
    }

    pub fn ensure_critical(&self) -> Result<()> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(Error::NotCriticallySampled { product: self.sampling_product() })
        }
    }
}

/// Complex samples on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, samples: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    pub fn new(spec: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != spec.len() {
            return Err(Error::GridMismatch(format!("{} samples for a grid of {}", samples.len(), spec.len())));
        }
        Ok(Self { spec, samples })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut idx = vec![0; spec.dims];
        let mut x = vec![0.0; spec.dims];
        let samples = (0..spec.len())
            .map(|flat| {
                spec.unravel(flat, &mut idx);
                for (xi, &j) in x.iter_mut().zip(&idx) {
                    *xi = spec.coord(j);
                }
                f(&x)
            })
            .collect();
        Self { spec, samples }
    }

    pub fn dims(&self) -> usize {
        self.spec.dims
    }

    /// `(Σ |s|² hᵐ)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(Complex64::norm_sqr).sum::<f64>() * self.spec.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn abs(&self) -> GridFunction {
        GridFunction { spec: self.spec, samples: self.samples.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect() }
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction { spec: self.spec, samples: self.samples.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: Complex64) -> GridFunction {
        GridFunction { spec: self.spec, samples: self.samples.iter().map(|z| z * s).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `f ⊗ g` on the grid of dimension `f.dims + g.dims`.
    pub fn tensor(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
        if f.spec.n != g.spec.n || f.spec.h != g.spec.h {
            return Err(Error::GridMismatch("tensor factors live on different grids".into()));
        }
        let spec = f.spec.with_dims(f.dims() + g.dims())?;
        let mut samples = Vec::with_capacity(spec.len());
        for a in &f.samples {
            samples.extend(g.samples.iter().map(|b| a * b));
        }
        Ok(GridFunction { spec, samples })
    }

    /// `‖a − b‖ / ‖b‖` over the samples.
    pub fn relative_l2_error(&self, reference: &GridFunction) -> f64 {
        let num: f64 = self.samples.iter().zip(&reference.samples).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = reference.samples.iter().map(Complex64::norm_sqr).sum();
        if den == 0.0 {
            return num.sqrt();
        }
        (num / den).sqrt()
    }

    /// `‖|a| − |b|‖ / ‖b‖`.
    pub fn modulus_error(&self, reference: &GridFunction) -> f64 {
        let num: f64 = self.samples.iter().zip(&reference.samples).map(|(a, b)| (a.norm() - b.norm()).powi(2)).sum();
        let den: f64 = reference.samples.iter().map(Complex64::norm_sqr).sum();
        if den == 0.0 {
            return num.sqrt();
        }
        (num / den).sqrt()
    }

    /// Applies `f` to every line along `axis`.
    pub(crate) fn map_lines(&mut self, axis: usize, mut f: impl FnMut(&mut [Complex64])) {
        let n = self.spec.n;
        let stride = n.pow((self.spec.dims - 1 - axis) as u32);
        let block = stride * n;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for outer in (0..self.samples.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = self.samples[base + k * stride];
                }
                f(&mut line);
                for (k, v) in line.iter().enumerate() {
                    self.samples[base + k * stride] = *v;
                }
            }
        }
    }
}
