//! The `hdefect` command line.
//!
//! Exit status: 0 on success, 1 on a domain error (non-Hadamard input,
//! ambiguous rank, failed check), 2 on a usage error. Machine output goes to
//! the output stream as JSON (CSV for scans); messages go to the error
//! stream.

mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::defect::{
    deformation_scan, dephased_defect, tangent_basis, undephased_defect, write_scan_csv,
    RankConfig, ScanGrid,
};
use crate::error::{Error, Result};
use crate::exact::conjecture_check;
use crate::group::{delta_closed, fourier_defect, FiniteAbelianGroup};
use crate::hadamard::io::{matrix_to_json, read_matrix};
use crate::hadamard::{apply_equivalence, verify_hadamard, Equivalence, DEFAULT_HADAMARD_TOL};
use crate::stats::ds_defect_estimate;

pub use spec::{MatrixSpec, ParamSpec};

#[derive(Parser, Debug)]
#[command(
    name = "hdefect",
    version,
    about = "Defects of complex Hadamard matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct RankArgs {
    /// Relative singular-value tolerance for the rank decision.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Minimum gap ratio sigma_r / sigma_{r+1} for a certified rank.
    #[arg(long, default_value_t = 1e6)]
    gap: f64,
}

impl RankArgs {
    fn config(self) -> RankConfig {
        RankConfig {
            rel_tol: self.tol,
            gap_threshold: self.gap,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a matrix and write it as JSON.
    Gen {
        spec: String,
        /// Apply a random equivalence drawn from this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check unimodularity and row orthogonality.
    Verify {
        spec: String,
        /// Tolerance for floating matrices; exact matrices are checked exactly.
        #[arg(long, default_value_t = DEFAULT_HADAMARD_TOL)]
        tol: f64,
    },
    /// Undephased defect with its rank certificate.
    Defect {
        spec: String,
        #[command(flatten)]
        rank: RankArgs,
        /// Also compute the dephased defect by both paths.
        #[arg(long)]
        dephased: bool,
        /// Write an orthonormal basis of the tangent space here.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Closed-form defect of the Fourier matrix of a group.
    Formula {
        #[arg(long)]
        group: String,
    },
    /// Defects of deformed tensor products over a turn grid.
    Scan {
        #[arg(long)]
        h: String,
        #[arg(long)]
        k: String,
        /// `m` or `m:k1,k2,..` per free entry of L, separated by `;`.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Append the recombination point L_aj = w^{aj}.
        #[arg(long)]
        special: bool,
        #[command(flatten)]
        rank: RankArgs,
    },
    /// Compare the exact rational nullity with the numeric defect.
    Conjecture {
        spec: String,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        rank: RankArgs,
    },
    /// Fixed-point moment estimate of the Fourier defect.
    Ds {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        l: Option<u64>,
        /// Use l = exponent of the group.
        #[arg(long)]
        exact: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

/// A spec string, or the path of an existing matrix file.
fn load(text: &str) -> Result<crate::hadamard::HadamardMatrix> {
    let path = Path::new(text);
    if !text.contains(':') && text != "tao" && path.is_file() {
        return Ok(read_matrix(path)?.with_provenance(format!("file:{text}")));
    }
    text.parse::<MatrixSpec>()?.build()
}

fn emit(out: &mut dyn Write, value: &Value) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn write_json(path: &Path, value: &Value) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn group_arg(text: &str) -> Result<FiniteAbelianGroup> {
    text.parse()
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Gen {
            spec,
            seed,
            out: path,
        } => {
            let mut h = load(&spec)?;
            if let Some(seed) = seed {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let eq = Equivalence::random(h.n(), &mut rng);
                h = apply_equivalence(&h, &eq)?;
            }
            let text = matrix_to_json(&h)?;
            match path {
                Some(p) => std::fs::write(p, text + "\n")?,
                None => writeln!(out, "{text}")?,
            }
            Ok(())
        }
        Command::Verify { spec, tol } => {
            let h = load(&spec)?;
            let report = verify_hadamard(&h, tol);
            emit(out, &serde_json::to_value(&report).map_err(Error::from)?)?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Domain(format!(
                    "{} is not Hadamard",
                    h.provenance()
                )))
            }
        }
        Command::Defect {
            spec,
            rank,
            dephased,
            basis,
        } => {
            let cfg = rank.config();
            let h = load(&spec)?;
            let report = undephased_defect(&h, &cfg)?;
            let mut value = json!({
                "matrix": h.provenance(),
                "n": h.n(),
                "defect": report.undephased,
                "certification": {
                    "rank": report.rank,
                    "unknowns": h.n() * h.n(),
                    "gap_ratio": if report.gap_ratio.is_finite() { json!(report.gap_ratio) } else { json!("inf") },
                    "rel_tol": report.rel_tol,
                    "gap_threshold": report.gap_threshold,
                    "certified": report.certified,
                },
            });
            if dephased {
                value["dephased_defect"] = json!(dephased_defect(&h, &cfg)?);
            }
            if let Some(path) = basis {
                let n = h.n();
                let elements: Vec<Vec<f64>> = tangent_basis(&h, &cfg)?
                    .iter()
                    .map(|a| (0..n * n).map(|k| a[(k / n, k % n)]).collect())
                    .collect();
                write_json(&path, &json!({ "n": n, "basis": elements }))?;
            }
            emit(out, &value)
        }
        Command::Formula { group } => {
            let g = group_arg(&group)?;
            let value = json!({
                "group": g.to_string(),
                "order": g.order(),
                "delta": delta_closed(&g).to_string(),
                "defect": fourier_defect(&g)?.to_string().parse::<Value>().map_err(Error::from)?,
            });
            emit(out, &value)
        }
        Command::Scan {
            h,
            k,
            grid,
            out: path,
            jobs,
            special,
            rank,
        } => {
            let (h, k) = (load(&h)?, load(&k)?);
            let mut grid: ScanGrid = grid.parse()?;
            grid.include_recombination = special;
            let rows = deformation_scan(&h, &k, &grid, &rank.config(), jobs)?;
            for row in &rows {
                if let Err(e) = &row.outcome {
                    writeln!(err, "cell {}: {e}", row.cell.cell_id)?;
                }
            }
            match path {
                Some(p) => write_scan_csv(&rows, std::fs::File::create(p)?)?,
                None => write_scan_csv(&rows, &mut *out)?,
            }
            Ok(())
        }
        Command::Conjecture { spec, report, rank } => {
            let h = load(&spec)?;
            let result = conjecture_check(&h, &rank.config())?;
            let value = serde_json::to_value(&result).map_err(Error::from)?;
            if let Some(path) = report {
                write_json(&path, &value)?;
            }
            emit(out, &value)
        }
        Command::Ds { group, k, l, exact } => {
            let g = group_arg(&group)?;
            let exponent = g.exponent();
            let l = match (exact, l) {
                (true, _) | (false, None) => exponent,
                (false, Some(l)) => l,
            };
            let estimate = ds_defect_estimate(&g, k, l)?;
            let value = json!({
                "group": g.to_string(),
                "k": k,
                "l": l,
                "estimate": estimate.to_string(),
                "exact_flag": l % exponent == 0,
                "reference": fourier_defect(&g)?.to_string(),
            });
            emit(out, &value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["hdefect"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn json_of(text: &str) -> Value {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn formula_klein() {
        let (code, out, _) = call(&["formula", "--group", "2x2"]);
        assert_eq!(code, 0);
        assert_eq!(json_of(&out)["defect"], json!(10));
    }

    #[test]
    fn defect_z6() {
        let (code, out, _) = call(&["defect", "fourier:6"]);
        assert_eq!(code, 0);
        let v = json_of(&out);
        assert_eq!(v["defect"], json!(15));
        assert_eq!(v["certification"]["certified"], json!(true));
    }

    #[test]
    fn verify_tao() {
        let (code, out, _) = call(&["verify", "tao"]);
        assert_eq!(code, 0);
        assert_eq!(json_of(&out)["passed"], json!(true));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["defect", "fourrier:2"]).0, 2);
        assert_eq!(call(&["defect", "--bogus", "fourier:2"]).0, 2);
        let (code, _, err) = call(&["defect", "circulant:0,0"]);
        assert_eq!(code, 1);
        assert!(err.contains("not Hadamard"));
        assert_eq!(call(&["verify", "circulant:0,0"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
