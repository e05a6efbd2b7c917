use std::io::{self, Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridFunction, GridSpec};
use crate::{Error, Result};

/// JSON sidecar of a binary grid dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySidecar {
    pub dims: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: f64,
    pub order: String,
}

/// CSV with header `x1,...,xm,re,im,abs`, one row per cell (`m ≤ 2`).
pub fn write_csv<W: Write>(f: &GridFunction, mut out: W) -> Result<()> {
    let m = f.dims();
    if m > 2 {
        return Err(Error::DimensionMismatch(format!("CSV output supports up to 2 axes, got {m}")));
    }
    let io_err = |e: io::Error| Error::BadParam(format!("write failed: {e}"));
    let header: Vec<String> = (1..=m).map(|i| format!("x{i}")).chain(["re", "im", "abs"].map(String::from)).collect();
    writeln!(out, "{}", header.join(",")).map_err(io_err)?;
    for (flat, z) in f.samples.iter().enumerate() {
        let coords: Vec<String> = f.spec.point(flat).iter().map(|x| x.to_string()).collect();
        writeln!(out, "{},{},{},{}", coords.join(","), z.re, z.im, z.norm()).map_err(io_err)?;
    }
    Ok(())
}

/// Flat little-endian `f64` pairs `(re, im)` in row-major order, plus the
/// sidecar describing them.
pub fn write_binary<W: Write>(f: &GridFunction, mut out: W) -> Result<BinarySidecar> {
    let io_err = |e: io::Error| Error::BadParam(format!("write failed: {e}"));
    for z in &f.samples {
        out.write_all(&z.re.to_le_bytes()).map_err(io_err)?;
        out.write_all(&z.im.to_le_bytes()).map_err(io_err)?;
    }
    Ok(BinarySidecar {
        dims: f.dims(),
        n: f.spec.n,
        h: f.spec.h,
        order: "row-major".into(),
    })
}

pub fn read_binary<R: Read>(sidecar: &BinarySidecar, mut input: R) -> Result<GridFunction> {
    let spec = GridSpec::new(sidecar.dims, sidecar.n, sidecar.h)?;
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(|e| Error::BadParam(format!("read failed: {e}")))?;
    if bytes.len() != spec.len() * 16 {
        return Err(Error::GridMismatch(format!("{} bytes for {} samples", bytes.len(), spec.len())));
    }
    let samples = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    GridFunction::new(spec, samples)
}
