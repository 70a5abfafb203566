//! Command-line front end: norm queries, region checks, contour export and the verifier.

mod contour;
mod verify;

pub use contour::{format_sci, run_contour, write_contour, ContourJob, GridAxis, MAX_CONTOUR_POINTS};
pub use verify::{run_verify, Check, Suite, VerifyReport};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, RMatrix};
use crate::mehler::{mehler_symbol, region_report};
use crate::norms::davies::davies_norm_perturbed;
use crate::norms::{
    embedding_norm, embedding_norm_ab, general_gaussian_norm_report, supersymmetric_norm,
    HolomorphicWeight,
};
use crate::symbols::{QuadraticForm, QuadraticFormJson};

#[derive(Debug, Parser)]
#[command(name = "quadnorm", version, about = "Exact norms of semigroups generated by elliptic quadratic operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of exp(-t Q_theta) for the rotated harmonic oscillator
    Davies {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Complex time as `re,im` (or just `re`)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        t: Complex64,
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb_a: f64,
    },
    /// Norm of the embedding between two weighted spaces of entire functions
    Embedding(EmbeddingArgs),
    /// Norm of exp(-t q^w) for an elliptic quadratic form read from JSON
    Norm {
        #[arg(long)]
        hessian: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        json: bool,
    },
    /// Where t sits relative to the boundedness region of exp(-t Q_theta)
    Region {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        t: Complex64,
        #[arg(long)]
        json: bool,
    },
    /// Write log-norms of exp(-t Q_theta) over a grid of complex times as CSV
    Contour {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Re t grid as `start:step:stop`
        #[arg(long, default_value = "0:0.01:1.5", value_parser = parse_axis)]
        re: GridAxis,
        /// Im t grid as `start:step:stop`
        #[arg(long, default_value = "-1:0.01:2", allow_hyphen_values = true, value_parser = parse_axis)]
        im: GridAxis,
        #[arg(long)]
        out: PathBuf,
    },
    /// Norm of exp(-tQ) for the supersymmetric form built from a matrix read from JSON
    Susy {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        t: Complex64,
        #[arg(long)]
        json: bool,
    },
    /// Check closed forms against the numerical oracles
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb_a: f64,
    },
}

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    #[arg(long, requires = "b", conflicts_with_all = ["phi1", "phi2"])]
    pub a: Option<f64>,
    #[arg(long, requires = "a")]
    pub b: Option<f64>,
    /// First weight as `alpha,beta_re,beta_im`
    #[arg(long, requires = "phi2", allow_hyphen_values = true, value_parser = parse_weight)]
    pub phi1: Option<HolomorphicWeight>,
    #[arg(long, requires = "phi1", allow_hyphen_values = true, value_parser = parse_weight)]
    pub phi2: Option<HolomorphicWeight>,
    #[arg(long)]
    pub json: bool,
}

/// Complex matrix on disk: row-major real part and optional imaginary part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let re = RMatrix::from_rows(&j.re)?;
        let im = if j.im.is_empty() { RMatrix::zeros(re.rows(), re.cols()) } else { RMatrix::from_rows(&j.im)? };
        CMatrix::from_parts(&re, &im)
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: `{s}`"))?;
    if !v.is_finite() {
        return Err(format!("not finite: `{s}`"));
    }
    Ok(v)
}

/// `re,im` or `re`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        None => Ok(Complex64::new(parse_f64(s)?, 0.0)),
    }
}

/// `start:step:stop`.
pub fn parse_axis(s: &str) -> std::result::Result<GridAxis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, step, stop] = parts[..] else {
        return Err(format!("expected start:step:stop, got `{s}`"));
    };
    GridAxis::new(parse_f64(start)?, parse_f64(step)?, parse_f64(stop)?).map_err(|e| e.to_string())
}

fn parse_weight(s: &str) -> std::result::Result<HolomorphicWeight, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [alpha, re, im] = parts[..] else {
        return Err(format!("expected alpha,beta_re,beta_im, got `{s}`"));
    };
    HolomorphicWeight::new(parse_f64(alpha)?, Complex64::new(parse_f64(re)?, parse_f64(im)?)).map_err(|e| e.to_string())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn print_json(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).map_err(|e| Error::Internal(e.to_string()))?)?;
    Ok(())
}

fn fmt_c(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Exit status for an error: 2 for bad input, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::NotSymmetric { .. } | Error::NotElliptic | Error::NotPlurisubharmonic { .. } | Error::GridGuard { .. } => 2,
        _ => 1,
    }
}

/// Run a parsed command, writing results to `out`. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Davies { theta, t, json, perturb_a } => match davies_norm_perturbed(theta, t, perturb_a) {
            Ok(r) => {
                if json {
                    print_json(out, &r)?;
                } else {
                    writeln!(out, "norm           {:.15e}", r.norm)?;
                    writeln!(out, "A              {:.15e}", r.a)?;
                    writeln!(out, "phi            {}", r.phi.map_or("undefined".to_string(), |p| format!("{p:.15e}")))?;
                    writeln!(out, "delta          {:.15e}", r.delta)?;
                    writeln!(out, "classification {}", r.classification.as_str())?;
                    writeln!(out, "compact        {}", r.compact)?;
                    if let Some(q) = r.sv_ratio {
                        writeln!(out, "sv_ratio       {q:.15e}")?;
                    }
                }
                Ok(0)
            }
            Err(Error::Unbounded { a, b, deficit }) => {
                if json {
                    print_json(out, &json!({ "theta": theta, "t": t, "bounded": false, "compact": false, "a": a, "b": b, "deficit": deficit }))?;
                } else {
                    writeln!(out, "unbounded: a = {a:e}, b = {b:e}, 1 + b - a = {deficit:e}")?;
                }
                Ok(1)
            }
            Err(e) => Err(e),
        },
        Command::Embedding(args) => {
            let r = match (args.a, args.b, args.phi1, args.phi2) {
                (Some(a), Some(b), _, _) => {
                    if !(a > 0.0 && b >= 0.0) {
                        return Err(Error::InvalidInput(format!("need a > 0 and b >= 0, got a = {a}, b = {b}")));
                    }
                    embedding_norm_ab(a, b)
                }
                (_, _, Some(p1), Some(p2)) => embedding_norm(&p1, &p2)?,
                _ => return Err(Error::InvalidInput("give --a and --b, or --phi1 and --phi2".into())),
            };
            if args.json {
                print_json(out, &r)?;
            } else {
                writeln!(out, "a          {:.15e}", r.a)?;
                writeln!(out, "b          {:.15e}", r.b)?;
                writeln!(out, "bounded    {}", r.bounded)?;
                if let (Some(n), Some(g)) = (r.norm, r.gamma_star) {
                    writeln!(out, "norm       {n:.15e}")?;
                    writeln!(out, "gamma_star {g:.15e}")?;
                }
            }
            Ok(0)
        }
        Command::Norm { hessian, t, json } => {
            let q = QuadraticForm::try_from(read_json::<QuadraticFormJson>(&hessian)?)?;
            let rep = general_gaussian_norm_report(&mehler_symbol(&q, t)?)?;
            if json {
                print_json(out, &json!({ "n": q.n(), "t": t, "norm": rep.norm, "det_d": rep.det_d, "symplectic_eigenvalues": rep.symplectic_eigenvalues }))?;
            } else {
                writeln!(out, "norm {:.15e}", rep.norm)?;
            }
            Ok(0)
        }
        Command::Region { theta, t, json } => {
            let r = region_report(theta, t)?;
            if json {
                print_json(out, &r)?;
            } else {
                writeln!(out, "theta   {theta}")?;
                writeln!(out, "t       {}", fmt_c(t))?;
                writeln!(out, "bounded {}", r.bounded)?;
                writeln!(out, "compact {}", r.compact)?;
                writeln!(out, "a       {:.15e}", r.a)?;
                writeln!(out, "b       {:.15e}", r.b)?;
                writeln!(out, "margin  {:.15e}", r.margin)?;
            }
            Ok(0)
        }
        Command::Contour { theta, re, im, out: path } => {
            let job = ContourJob::new(theta, re, im)?;
            let summary = run_contour(&job, &path)?;
            writeln!(out, "wrote {} points ({} bounded) to {}", summary.points, summary.bounded, path.display())?;
            Ok(0)
        }
        Command::Susy { matrix, t, json } => {
            let m = CMatrix::try_from(read_json::<MatrixJson>(&matrix)?)?;
            match supersymmetric_norm(&m, t) {
                Ok(norm) => {
                    if json {
                        print_json(out, &json!({ "t": t, "norm": norm, "bounded": true }))?;
                    } else {
                        writeln!(out, "norm {norm:.15e}")?;
                    }
                    Ok(0)
                }
                Err(Error::UnboundedSemigroup { spectral_norm }) => {
                    if json {
                        print_json(out, &json!({ "t": t, "bounded": false, "spectral_norm": spectral_norm }))?;
                    } else {
                        writeln!(out, "unbounded: |exp(-tM)| = {spectral_norm:e} > 1")?;
                    }
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::Verify { suite, perturb_a } => {
            let report = run_verify(suite, perturb_a);
            report.write(out)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
