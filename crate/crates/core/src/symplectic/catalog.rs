//! Symplectic matrices of standard time-frequency representations, written
//! in `d × d` block form for any `d`.

use std::fmt;
use std::str::FromStr;

use super::{gen_dl, gen_vq, standard_j, SymplecticMatrix};
use crate::matrix::RealMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogName {
    /// Short-time Fourier transform `V_g f`.
    Stft,
    /// Ambiguity function.
    Ambiguity,
    /// τ-Wigner distribution (Rihaczek at τ = 0, Wigner at τ = ½).
    TauWigner,
    /// `𝒥`: the Fourier transform of `f ⊗ ḡ`.
    Fourier,
    /// `𝒱_Q`: multiplication by a chirp.
    Chirp,
    /// `𝒟_L`: a linear change of variables.
    Dilation,
}

impl CatalogName {
    pub const ALL: [CatalogName; 6] = [
        CatalogName::Stft,
        CatalogName::Ambiguity,
        CatalogName::TauWigner,
        CatalogName::Fourier,
        CatalogName::Chirp,
        CatalogName::Dilation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogName::Stft => "stft",
            CatalogName::Ambiguity => "ambiguity",
            CatalogName::TauWigner => "tau_wigner",
            CatalogName::Fourier => "fourier",
            CatalogName::Chirp => "chirp",
            CatalogName::Dilation => "dilation",
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CatalogName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Optional parameters. `tau` is required for `tau_wigner`; `q` and `l`
/// default to `I` and `2I` (both `2d × 2d`) for `chirp` and `dilation`.
#[derive(Debug, Clone, Default)]
pub struct CatalogParams {
    pub tau: Option<f64>,
    pub q: Option<RealMatrix>,
    pub l: Option<RealMatrix>,
}

impl CatalogParams {
    pub fn with_tau(tau: f64) -> Self {
        Self { tau: Some(tau), ..Self::default() }
    }
}

/// Assembles a `4d × 4d` matrix from a 4×4 pattern of scalar multiples of
/// `I_d`.
fn scalar_blocks(d: usize, pattern: [[f64; 4]; 4]) -> RealMatrix {
    RealMatrix::from_fn(4 * d, 4 * d, |i, j| if i % d == j % d { pattern[i / d][j / d] } else { 0.0 })
}

/// Returns the named matrix in `Sp(4d, ℝ)`.
pub fn catalog(name: CatalogName, d: usize, params: &CatalogParams) -> Result<SymplecticMatrix> {
    if d == 0 {
        return Err(Error::BadParam("d must be at least 1".into()));
    }
    let n = 2 * d;
    let check_side = |m: &RealMatrix, what: &str| {
        if m.rows() != n || m.cols() != n {
            Err(Error::BadParam(format!("{what} must be {n}x{n}, got {}x{}", m.rows(), m.cols())))
        } else {
            Ok(())
        }
    };
    let m = match name {
        CatalogName::Stft => scalar_blocks(
            d,
            [[1.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 0.0, -1.0], [-1.0, 0.0, 0.0, 0.0]],
        ),
        CatalogName::Ambiguity => scalar_blocks(
            d,
            [[1.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 0.5, -0.5], [-0.5, -0.5, 0.0, 0.0]],
        ),
        CatalogName::TauWigner => {
            let tau = params.tau.ok_or_else(|| Error::BadParam("tau_wigner needs a tau parameter".into()))?;
            if !tau.is_finite() {
                return Err(Error::BadParam(format!("tau must be finite, got {tau}")));
            }
            let s = 1.0 - tau;
            scalar_blocks(d, [[s, tau, 0.0, 0.0], [0.0, 0.0, tau, -s], [0.0, 0.0, 1.0, 1.0], [-1.0, 1.0, 0.0, 0.0]])
        }
        CatalogName::Fourier => return Ok(standard_j(n)),
        CatalogName::Chirp => {
            let q = params.q.clone().unwrap_or_else(|| RealMatrix::identity(n));
            check_side(&q, "chirp matrix Q")?;
            return gen_vq(&q).map_err(|e| Error::BadParam(e.to_string()));
        }
        CatalogName::Dilation => {
            let l = params.l.clone().unwrap_or_else(|| RealMatrix::identity(n).scale(2.0));
            check_side(&l, "dilation matrix L")?;
            return gen_dl(&l).map_err(|e| Error::BadParam(e.to_string()));
        }
    };
    Ok(SymplecticMatrix::trusted(m))
}
