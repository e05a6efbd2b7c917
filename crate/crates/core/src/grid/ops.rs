use std::f64::consts::PI;

use num_complex::Complex64;

use super::{apply_frac_ft, GridFunction};
use crate::decomp::{joint_svd, pre_iwasawa};
use crate::matrix::{det, inverse, RealMatrix};
use crate::symplectic::SymplecticMatrix;
use crate::{Error, Result};

/// Resampling kernel used by dilations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Multilinear, `2ᵐ` taps.
    Linear,
    /// Keys cubic convolution (`a = −1/2`), `4ᵐ` taps.
    #[default]
    Cubic,
}

/// `F(x) ↦ e^{iπ x·Qx} F(x)`.
pub fn apply_chirp(f: &GridFunction, q: &RealMatrix) -> Result<GridFunction> {
    let m = f.dims();
    if q.rows() != m || q.cols() != m {
        return Err(Error::DimensionMismatch(format!("chirp matrix is {}x{}, grid has {m} axes", q.rows(), q.cols())));
    }
    let residual = q.symmetry_residual();
    if residual > 1e-10 {
        return Err(Error::NotSymmetric { residual });
    }
    let q = q.symmetrized();
    let mut out = f.clone();
    let mut x = vec![0.0; m];
    let mut idx = vec![0; m];
    for (flat, v) in out.samples.iter_mut().enumerate() {
        f.spec.unravel(flat, &mut idx);
        for (xi, &j) in x.iter_mut().zip(&idx) {
            *xi = f.spec.coord(j);
        }
        let quad: f64 = (0..m).map(|i| x[i] * (0..m).map(|j| q[(i, j)] * x[j]).sum::<f64>()).sum();
        *v *= Complex64::from_polar(1.0, PI * quad);
    }
    Ok(out)
}

/// `F(x) ↦ |det L|^{−1/2} F(L⁻¹x)` with the default interpolation.
pub fn apply_dilation(f: &GridFunction, l: &RealMatrix) -> Result<GridFunction> {
    apply_dilation_with(f, l, Interpolation::default())
}

/// Signed permutation `(axis, sign)` per output axis if `m` is one.
fn signed_permutation(m: &RealMatrix) -> Option<Vec<(usize, i64)>> {
    let mut map = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut found = None;
        for j in 0..m.cols() {
            let v = m[(i, j)];
            if v == 0.0 {
                continue;
            }
            if found.is_some() || (v.abs() - 1.0).abs() > 1e-14 {
                return None;
            }
            found = Some((j, v.signum() as i64));
        }
        map.push(found?);
    }
    Some(map)
}

/// Per-axis taps: `(index, weight)` pairs for a fractional grid position.
fn taps(t: f64, n: usize, kind: Interpolation, out: &mut Vec<(usize, f64)>) {
    out.clear();
    let base = t.floor();
    let u = t - base;
    let base = base as i64;
    let push = |out: &mut Vec<(usize, f64)>, k: i64, w: f64| {
        if w != 0.0 && k >= 0 && (k as usize) < n {
            out.push((k as usize, w));
        }
    };
    match kind {
        Interpolation::Linear => {
            push(out, base, 1.0 - u);
            push(out, base + 1, u);
        }
        Interpolation::Cubic => {
            if u == 0.0 {
                push(out, base, 1.0);
                return;
            }
            let keys = |s: f64| {
                let s = s.abs();
                let a = -0.5;
                if s <= 1.0 {
                    (a + 2.0) * s * s * s - (a + 3.0) * s * s + 1.0
                } else if s < 2.0 {
                    a * s * s * s - 5.0 * a * s * s + 8.0 * a * s - 4.0 * a
                } else {
                    0.0
                }
            };
            push(out, base - 1, keys(1.0 + u));
            push(out, base, keys(u));
            push(out, base + 1, keys(1.0 - u));
            push(out, base + 2, keys(2.0 - u));
        }
    }
}

/// Dilation with an explicit interpolation kernel; values outside the grid
/// are zero. Signed permutation matrices are applied by exact reindexing.
pub fn apply_dilation_with(f: &GridFunction, l: &RealMatrix, kind: Interpolation) -> Result<GridFunction> {
    let m = f.dims();
    if l.rows() != m || l.cols() != m {
        return Err(Error::DimensionMismatch(format!("dilation matrix is {}x{}, grid has {m} axes", l.rows(), l.cols())));
    }
    let d = det(l)?;
    if d == 0.0 {
        return Err(Error::Singular { sigma_min: crate::matrix::min_singular_value(l) });
    }
    let l_inv = inverse(l)?;
    let scale = d.abs().powf(-0.5);
    let spec = f.spec;
    let n = spec.n as i64;
    let half = (spec.n / 2) as i64;
    let mut out = GridFunction::zeros(spec);
    let mut idx = vec![0usize; m];

    if let Some(perm) = signed_permutation(&l_inv) {
        // Reflections use the periodic parity j -> (N - j) mod N, so the
        // unmatched node -N/2·h is its own mirror, as it is for the DFT.
        let mut src = vec![0usize; m];
        for (flat, v) in out.samples.iter_mut().enumerate() {
            spec.unravel(flat, &mut idx);
            for (i, &(j, s)) in perm.iter().enumerate() {
                src[i] = (half + s * (idx[j] as i64 - half)).rem_euclid(n) as usize;
            }
            *v = f.samples[spec.ravel(&src)] * scale;
        }
        return Ok(out);
    }

    let mut x = vec![0.0; m];
    let mut axis_taps: Vec<Vec<(usize, f64)>> = vec![Vec::with_capacity(4); m];
    let mut counter = vec![0usize; m];
    for (flat, v) in out.samples.iter_mut().enumerate() {
        spec.unravel(flat, &mut idx);
        for (xi, &j) in x.iter_mut().zip(&idx) {
            *xi = spec.coord(j);
        }
        let mut empty = false;
        for (i, slot) in axis_taps.iter_mut().enumerate() {
            let y: f64 = (0..m).map(|j| l_inv[(i, j)] * x[j]).sum();
            taps(y / spec.h + half as f64, spec.n, kind, slot);
            empty |= slot.is_empty();
        }
        if empty {
            continue;
        }
        // odometer over the tensor product of per-axis taps
        counter.iter_mut().for_each(|c| *c = 0);
        let mut acc = Complex64::new(0.0, 0.0);
        loop {
            let mut w = 1.0;
            let mut flat_src = 0;
            for i in 0..m {
                let (k, wi) = axis_taps[i][counter[i]];
                w *= wi;
                flat_src = flat_src * spec.n + k;
            }
            acc += f.samples[flat_src] * w;
            let mut axis = m;
            let done = loop {
                if axis == 0 {
                    break true;
                }
                axis -= 1;
                counter[axis] += 1;
                if counter[axis] < axis_taps[axis].len() {
                    break false;
                }
                counter[axis] = 0;
            };
            if done {
                break;
            }
        }
        *v = acc * scale;
    }
    Ok(out)
}

fn is_identity(m: &RealMatrix) -> bool {
    (m - &RealMatrix::identity(m.rows())).max_abs() < 1e-14
}

/// `|μ(𝓐)F|` up to a global phase, realized as
/// `chirp(Q) ∘ dilation(L·W) ∘ ℱ_Σ ∘ dilation(Vᵗ)` from the pre-Iwasawa
/// factors `𝓐 = 𝒱_Q𝒟_Lℛ_U` and the joint SVD `U = WΣVᵗ`. Identity steps are
/// skipped.
pub fn apply_metaplectic(a: &SymplecticMatrix, f: &GridFunction) -> Result<GridFunction> {
    apply_metaplectic_with(a, f, Interpolation::default())
}

pub(crate) fn apply_metaplectic_with(a: &SymplecticMatrix, f: &GridFunction, kind: Interpolation) -> Result<GridFunction> {
    if a.half_dim() != f.dims() {
        return Err(Error::DimensionMismatch(format!(
            "matrix acts on {} variables, grid has {}",
            a.half_dim(),
            f.dims()
        )));
    }
    let factors = pre_iwasawa(a)?;
    let svd = joint_svd(&factors.u)?;
    let mut g = f.clone();
    let vt = svd.v.transpose();
    if !is_identity(&vt) {
        g = apply_dilation_with(&g, &vt, kind)?;
    }
    if svd.sigma.iter().any(|s| (s - 1.0).norm() >= 1e-14) {
        g = apply_frac_ft(&g, &svd.sigma)?;
    }
    let lw = factors.l.matmul(&svd.w);
    if !is_identity(&lw) {
        g = apply_dilation_with(&g, &lw, kind)?;
    }
    if factors.q.max_abs() > 0.0 {
        g = apply_chirp(&g, &factors.q)?;
    }
    Ok(g)
}
