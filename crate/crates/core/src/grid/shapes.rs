use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{GridFunction, GridSpec};
use crate::{Error, Result};

/// Test signals, sampled as tensor products over the grid axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `2^{1/4} e^{−πx²}`, unit `L²` norm.
    Gauss,
    /// Indicator of `[−a, a]`.
    Rect { a: f64 },
    /// Hermite function of order `k` (eigenfunctions of the Fourier
    /// transform, `k = 0` is `Gauss`).
    Hermite { k: usize },
    /// `√(2a)·sinc(2ax)`, whose Fourier transform is `(2a)^{−1/2}` on `[−a, a]`.
    Sinc { a: f64 },
    /// `Gauss` cut off outside `[−a, a]`.
    TruncatedGauss { a: f64 },
}

impl Shape {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Shape::Gauss => 2f64.powf(0.25) * (-PI * x * x).exp(),
            Shape::Rect { a } => {
                if x.abs() <= a {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Hermite { k } => hermite_function(k, x),
            Shape::Sinc { a } => {
                let y = 2.0 * a * x;
                let s = if y == 0.0 { 1.0 } else { (PI * y).sin() / (PI * y) };
                (2.0 * a).sqrt() * s
            }
            Shape::TruncatedGauss { a } => {
                if x.abs() <= a {
                    Shape::Gauss.eval(x)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Hermite functions normalized in `L²(ℝ)` for the `e^{−πx²}` scaling,
/// by the three-term recurrence in `y = √(2π)·x`.
fn hermite_function(k: usize, x: f64) -> f64 {
    let y = (2.0 * PI).sqrt() * x;
    let scale = (2.0 * PI).powf(0.25);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-y * y / 2.0).exp();
    for j in 0..k {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * y * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    scale * cur
}

impl FromStr for Shape {
    type Err = Error;
    /// `gauss`, `rect[:a]`, `hermite_k`, `sinc[:a]`, `tgauss[:a]`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let width = |default: f64| -> Result<f64> {
            let a = match arg {
                Some(text) => text.parse::<f64>().map_err(|_| Error::BadParam(format!("bad width in `{s}`")))?,
                None => default,
            };
            if a > 0.0 && a.is_finite() {
                Ok(a)
            } else {
                Err(Error::BadParam(format!("width must be positive in `{s}`")))
            }
        };
        match name {
            "gauss" if arg.is_none() => Ok(Shape::Gauss),
            "rect" => Ok(Shape::Rect { a: width(1.0)? }),
            "sinc" => Ok(Shape::Sinc { a: width(1.0)? }),
            "tgauss" => Ok(Shape::TruncatedGauss { a: width(1.0)? }),
            _ => {
                if let Some(order) = name.strip_prefix("hermite_") {
                    if arg.is_none() {
                        if let Ok(k) = order.parse::<usize>() {
                            return Ok(Shape::Hermite { k });
                        }
                    }
                }
                Err(Error::BadParam(format!("unknown shape `{s}`")))
            }
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Gauss => write!(f, "gauss"),
            Shape::Rect { a } => write!(f, "rect:{a}"),
            Shape::Hermite { k } => write!(f, "hermite_{k}"),
            Shape::Sinc { a } => write!(f, "sinc:{a}"),
            Shape::TruncatedGauss { a } => write!(f, "tgauss:{a}"),
        }
    }
}

/// Samples `shape` as a tensor product over all grid axes.
pub fn sample(shape: Shape, spec: GridSpec) -> GridFunction {
    let axis: Vec<f64> = spec.axis().iter().map(|&x| shape.eval(x)).collect();
    let mut idx = vec![0; spec.dims];
    let samples = (0..spec.len())
        .map(|flat| {
            spec.unravel(flat, &mut idx);
            Complex64::new(idx.iter().map(|&j| axis[j]).product(), 0.0)
        })
        .collect();
    GridFunction { spec, samples }
}
