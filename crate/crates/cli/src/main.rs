//! `metaplectic`: decide Benedicks-type uncertainty principles for
//! metaplectic Wigner distributions, factor symplectic matrices and
//! realize `W_𝓐(f, g)` on grids.
//!
//! JSON goes to stdout, diagnostics to stderr, grids to `--out`.
//!
//! Exit codes: 0 ok, 1 selfcheck failure, 2 not symplectic, 3 parse or
//! usage error, 4 matrix not free, 5 uncertainty principle holds (no
//! witness), 6 grid error, 7 numerical failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metaplectic_core::decision::{decide, witness_recipe, VerdictKind};
use metaplectic_core::decomp::{free_factorize, joint_svd, pre_iwasawa};
use metaplectic_core::grid::{
    support_report, wigner, witness_build, write_binary, write_csv, GridFunction, GridSpec, Shape,
};
use metaplectic_core::selfcheck::{run_selfcheck, Fault};
use metaplectic_core::symplectic::{catalog, CatalogName, CatalogParams, MatrixJson, SymplecticMatrix, SYMPLECTIC_TOL};
use metaplectic_core::Error;
use serde_json::{json, Value};

const MAX_GRID_4D: usize = 32;

#[derive(Parser)]
#[command(name = "metaplectic", version, about = "Benedicks-type uncertainty decisions for metaplectic Wigner distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sesquilinear and quadratic verdicts for a matrix in Sp(4d).
    Decide {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Block-diagonality tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Factor a symplectic matrix.
    Decompose {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_enum, default_value_t = Mode::PreIwasawa)]
        mode: Mode,
    },
    /// Print a catalog matrix, or list the catalog names.
    Catalog {
        #[command(flatten)]
        matrix: MatrixArgs,
    },
    /// Sample W_A(f, g) on a critically sampled grid.
    Wigner {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Window f: gauss, rect[:a], hermite_k, sinc[:a], tgauss[:a].
        #[arg(long, default_value = "gauss")]
        f: String,
        /// Window g, same shapes as --f.
        #[arg(long, default_value = "gauss")]
        g: String,
    },
    /// Build a compactly supported counterexample when the principle fails.
    Witness {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Use the quadratic verdict (f = g) instead of the sesquilinear one.
        #[arg(long)]
        quadratic: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Compactly supported seed f0.
        #[arg(long, default_value = "rect")]
        f: String,
        /// Compactly supported seed g0.
        #[arg(long, default_value = "rect")]
        g: String,
    },
    /// Run the reduced property suites.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Negative control: run with a deliberate defect (fft-sign).
        #[arg(long)]
        inject_fault: Option<String>,
    },
}

#[derive(Args)]
struct MatrixArgs {
    /// stft, ambiguity, tau_wigner, fourier, chirp or dilation.
    #[arg(long, conflicts_with = "input")]
    catalog: Option<String>,
    /// JSON file {"half_dim": n, "entries": [[...]]}.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Parameter of tau_wigner.
    #[arg(long)]
    tau: Option<f64>,
    /// Dimension d of the catalog member (matrix side 4d).
    #[arg(long, default_value_t = 1)]
    d: usize,
}

#[derive(Args)]
struct GridArgs {
    /// Samples per axis (power of two).
    #[arg(long = "grid", default_value_t = 256)]
    n: usize,
    /// Support threshold relative to max |W|.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Output grid: CSV for d = 1, binary plus `.json` sidecar for d = 2.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    PreIwasawa,
    Free,
    JointSvd,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(3, message)
    }
}

/// Exit code of a library error; `grid` marks commands whose remaining
/// failures count as grid errors.
fn exit_code(e: &Error, grid: bool) -> u8 {
    match e {
        Error::NotSymplectic { .. } => 2,
        Error::UnknownName(_) | Error::BadParam(_) | Error::HalfDimOdd { .. } | Error::OddDimension { .. } => 3,
        Error::NotFree { .. } => 4,
        Error::VerdictHolds => 5,
        _ if grid => 6,
        Error::NotCriticallySampled { .. } | Error::GridMismatch(_) | Error::BadK { .. } => 6,
        _ => 7,
    }
}

fn lib(grid: bool) -> impl Fn(Error) -> Failure {
    move |e| Failure::new(exit_code(&e, grid), e.to_string())
}

fn load_matrix(args: &MatrixArgs) -> Result<SymplecticMatrix, Failure> {
    match (&args.catalog, &args.input) {
        (Some(name), None) => {
            let name: CatalogName = name.parse().map_err(lib(false))?;
            let params = CatalogParams { tau: args.tau, ..CatalogParams::default() };
            catalog(name, args.d, &params).map_err(lib(false))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let json: MatrixJson = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("{}: not a matrix JSON: {e}", path.display())))?;
            SymplecticMatrix::from_json(&json, SYMPLECTIC_TOL).map_err(|e| match e {
                Error::DimensionMismatch(m) => Failure::usage(m),
                other => lib(false)(other),
            })
        }
        _ => Err(Failure::usage("give exactly one of --catalog or --input")),
    }
}

fn emit(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values always serialize"));
}

fn relative(residual: f64, scale: f64) -> f64 {
    residual / scale.max(f64::MIN_POSITIVE)
}

fn run_decide(matrix: &MatrixArgs, tol: f64) -> Result<(), Failure> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::usage("--tol must be positive"));
    }
    let a = load_matrix(matrix)?;
    let decision = decide(&a, tol).map_err(lib(false))?;
    emit(&serde_json::to_value(decision).expect("verdicts serialize"));
    Ok(())
}

fn run_decompose(matrix: &MatrixArgs, mode: Mode) -> Result<(), Failure> {
    let a = load_matrix(matrix)?;
    let scale = a.matrix().frobenius_norm();
    let out = match mode {
        Mode::PreIwasawa => {
            let f = pre_iwasawa(&a).map_err(lib(false))?;
            let r = f.reconstruct().map_err(lib(false))?;
            json!({
                "mode": "pre-iwasawa",
                "q": f.q,
                "l": f.l,
                "u": f.u,
                "residual": relative((&r - a.matrix()).frobenius_norm(), scale),
            })
        }
        Mode::Free => {
            let f = free_factorize(&a).map_err(|e| {
                if matches!(e, Error::NotFree { .. }) {
                    eprintln!("hint: the upper-right block is singular; `--mode joint-svd` goes through the tau-rotation path");
                }
                lib(false)(e)
            })?;
            let r = f.reconstruct().map_err(lib(false))?;
            json!({
                "mode": "free",
                "q": f.q_out,
                "b": f.b,
                "p": f.p,
                "residual": relative((&r - a.matrix()).frobenius_norm(), scale),
            })
        }
        Mode::JointSvd => {
            let u = pre_iwasawa(&a).map_err(lib(false))?.u;
            let j = joint_svd(&u).map_err(lib(false))?;
            json!({
                "mode": "joint-svd",
                "u": u,
                "w": j.w,
                "sigma": j.sigma.iter().map(|s| json!({"re": s.re, "im": s.im})).collect::<Vec<_>>(),
                "v": j.v,
                "residual": (&j.reconstruct() - &u).frobenius_norm(),
            })
        }
    };
    emit(&out);
    Ok(())
}

fn run_catalog(matrix: &MatrixArgs) -> Result<(), Failure> {
    if matrix.catalog.is_none() && matrix.input.is_none() {
        emit(&json!(CatalogName::ALL.iter().map(|n| n.as_str()).collect::<Vec<_>>()));
        return Ok(());
    }
    let a = load_matrix(matrix)?;
    emit(&serde_json::to_value(a.to_json()).expect("matrices serialize"));
    Ok(())
}

fn grid_spec(a: &SymplecticMatrix, grid: &GridArgs) -> Result<GridSpec, Failure> {
    if !(grid.eps > 0.0 && grid.eps < 1.0) {
        return Err(Failure::usage("--eps must lie in (0, 1)"));
    }
    let d = a.half_dim() / 2;
    if !a.half_dim().is_multiple_of(2) || !(1..=2).contains(&d) {
        return Err(Failure::new(6, format!("grids need a 4x4 or 8x8 matrix, got {0}x{0}", 2 * a.half_dim())));
    }
    if d == 2 && grid.n > MAX_GRID_4D {
        return Err(Failure::new(6, format!("d = 2 runs on a 4-axis grid; use --grid {MAX_GRID_4D} or less")));
    }
    GridSpec::critical(d, grid.n).map_err(|e| Failure::usage(e.to_string()))
}

fn shape(spec: &str) -> Result<Shape, Failure> {
    spec.parse().map_err(|e: Error| Failure::usage(e.to_string()))
}

fn write_grid(w: &GridFunction, path: &Path) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::new(6, format!("cannot write {}: {e}", path.display()));
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    if w.dims() <= 2 {
        write_csv(w, &mut out).map_err(lib(true))?;
    } else {
        let sidecar = write_binary(w, &mut out).map_err(lib(true))?;
        let mut side_path = path.as_os_str().to_owned();
        side_path.push(".json");
        let text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        std::fs::write(&side_path, text).map_err(io)?;
    }
    out.flush().map_err(io)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run_wigner(matrix: &MatrixArgs, grid: &GridArgs, f: &str, g: &str) -> Result<(), Failure> {
    let a = load_matrix(matrix)?;
    let spec = grid_spec(&a, grid)?;
    let (f, g) = (metaplectic_core::grid::sample(shape(f)?, spec), metaplectic_core::grid::sample(shape(g)?, spec));
    let w = wigner(&a, &f, &g).map_err(lib(true))?;
    if let Some(path) = &grid.out {
        write_grid(&w, path)?;
    }
    emit(&serde_json::to_value(support_report(&w, grid.eps)).expect("reports serialize"));
    Ok(())
}

fn run_witness(matrix: &MatrixArgs, grid: &GridArgs, quadratic: bool, tol: f64, f: &str, g: &str) -> Result<(), Failure> {
    let a = load_matrix(matrix)?;
    let mode = if quadratic { VerdictKind::Quadratic } else { VerdictKind::Sesquilinear };
    let recipe = witness_recipe(&a, mode, tol).map_err(lib(true))?;
    let spec = grid_spec(&a, grid)?;
    let (f0, g0) = (metaplectic_core::grid::sample(shape(f)?, spec), metaplectic_core::grid::sample(shape(g)?, spec));
    let witness = witness_build(&recipe, &f0, &g0).map_err(lib(true))?;
    if let Some(path) = &grid.out {
        write_grid(&witness.w, path)?;
    }
    emit(&json!({
        "recipe": recipe,
        "mismatch": witness.mismatch,
        "support": support_report(&witness.w, grid.eps),
    }));
    Ok(())
}

fn run_selfcheck_cmd(seed: u64, fault: Option<&str>) -> Result<(), Failure> {
    let fault: Fault = fault.unwrap_or("none").parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
    let checks = run_selfcheck(seed, fault);
    for c in &checks {
        eprintln!("{:<38} {}  {}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
    let passed = checks.iter().all(|c| c.passed);
    emit(&json!({ "passed": passed, "checks": checks }));
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure::new(1, format!("failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Decide { matrix, tol } => run_decide(matrix, *tol),
        Command::Decompose { matrix, mode } => run_decompose(matrix, *mode),
        Command::Catalog { matrix } => run_catalog(matrix),
        Command::Wigner { matrix, grid, f, g } => run_wigner(matrix, grid, f, g),
        Command::Witness { matrix, grid, quadratic, tol, f, g } => run_witness(matrix, grid, *quadratic, *tol, f, g),
        Command::Selfcheck { seed, inject_fault } => run_selfcheck_cmd(*seed, inject_fault.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
