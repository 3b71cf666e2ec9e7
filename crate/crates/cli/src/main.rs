//! `cqms` — generate channels, dilate them, evolve Lindblad semigroups
//! and run the verification suites, with JSON/CSV artifacts.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 usage, 3 domain
//! error (NotCP, NotUnital, …), 4 verification failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cqms_core::channels::{random_unital_cp, validate_channel, QuantumChannel};
use cqms_core::numerics::{pauli_x, pauli_y, pauli_z, ComplexMatrix};
use cqms_core::qms::{evolve, LindbladGenerator};
use cqms_core::stinespring::dilate;
use cqms_core::verify::{poincare_invariance_csv, run_suite, Suite};
use cqms_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "cqms", version, about = "Covariant quantum Markov semigroup toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random unital CP channel as JSON.
    GenChannel {
        /// System dimension d.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Number of Kraus operators.
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        /// RNG seed (falls back to $CQMS_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Output path for the channel JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Dilate a channel file into an explicit Stinespring isometry.
    Dilate {
        /// Channel JSON produced by gen-channel (or hand-written).
        #[arg(long = "in")]
        input: PathBuf,
        /// Optional output path for the dilation JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve a Lindblad generator and write an observable trace CSV.
    Qms {
        /// Generator JSON {"dim","lambda","jumps"} or a channel JSON
        /// whose Kraus operators are taken as jumps.
        #[arg(long = "in")]
        input: PathBuf,
        /// Overall rate λ; overrides the file value.
        #[arg(long)]
        lambda: Option<f64>,
        /// Comma-separated strictly ascending times, e.g. 0,0.5,1.
        #[arg(long)]
        times: String,
        /// Comma-separated observables: sx, sy, sz, id (d = 2) or
        /// matrix units e<i>_<j> for any dimension.
        #[arg(long)]
        observables: Option<String>,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded verification suite and emit a JSON report.
    Verify {
        /// channels | stinespring | si | covariance | qms | poincare | all
        suite: String,
        /// RNG seed (falls back to $CQMS_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Report JSON path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the measure-invariance study CSV (poincare/all).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum CliError {
    Io(String),
    Usage(String),
    Domain(String),
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Usage(m) | CliError::Domain(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("CQMS_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_string(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenChannel { dim, kraus, seed, out } => cmd_gen_channel(dim, kraus, seed, &out),
        Command::Dilate { input, out } => cmd_dilate(&input, out.as_deref()),
        Command::Qms { input, lambda, times, observables, out } => {
            cmd_qms(&input, lambda, &times, observables.as_deref(), out.as_deref())
        }
        Command::Verify { suite, seed, out, csv } => {
            cmd_verify(&suite, seed, out.as_deref(), csv.as_deref())
        }
    }
}

fn cmd_gen_channel(
    dim: usize,
    kraus: usize,
    seed: Option<u64>,
    out: &Path,
) -> Result<(), CliError> {
    let seed = resolve_seed(seed);
    let channel = random_unital_cp(dim, kraus, seed)?;
    let report = validate_channel(&channel)?;
    if !(report.cp && report.unital) {
        return Err(CliError::Domain(format!(
            "generated channel failed validation (cp {}, unital {})",
            report.cp, report.unital
        )));
    }
    let mut body = serde_json::to_string_pretty(&channel)
        .map_err(|e| CliError::Io(e.to_string()))?;
    body.push('\n');
    write_string(out, &body)?;
    println!(
        "wrote channel: dim={dim} kraus={kraus} seed={seed} unitality_residual={:.2e}",
        report.adjoint_trace_residual
    );
    Ok(())
}

fn cmd_dilate(input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let text = read_to_string(input)?;
    let channel: QuantumChannel =
        serde_json::from_str(&text).map_err(|e| CliError::Io(format!("parse error: {e}")))?;
    let dil = dilate(&channel)?;
    println!("ancilla_dim: {}, residual: {:.2e}", dil.ancilla_dim, dil.residual);
    if let Some(path) = out {
        let mut body =
            serde_json::to_string_pretty(&dil).map_err(|e| CliError::Io(e.to_string()))?;
        body.push('\n');
        write_string(path, &body)?;
    }
    if dil.residual < 1e-8 {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "dilation residual {:.2e} exceeds 1e-8",
            dil.residual
        )))
    }
}

/// Input for `cqms qms`: either a generator file or a channel file.
fn load_generator(text: &str, lambda_flag: Option<f64>) -> Result<LindbladGenerator, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Io(format!("parse error: {e}")))?;
    if value.get("jumps").is_some() {
        let gen: LindbladGenerator =
            serde_json::from_value(value).map_err(|e| CliError::Io(format!("parse error: {e}")))?;
        match lambda_flag {
            Some(l) => Ok(LindbladGenerator::new(gen.jumps().to_vec(), l)?),
            None => Ok(gen),
        }
    } else {
        let channel: QuantumChannel =
            serde_json::from_value(value).map_err(|e| CliError::Io(format!("parse error: {e}")))?;
        Ok(LindbladGenerator::new(
            channel.kraus().to_vec(),
            lambda_flag.unwrap_or(1.0),
        )?)
    }
}

fn parse_times(spec: &str) -> Result<Vec<f64>, CliError> {
    let times: Vec<f64> = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad time value '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    if times.is_empty() {
        return Err(CliError::Usage("empty time list".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(CliError::Usage("times must be finite and nonnegative".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("times must be strictly ascending".into()));
    }
    Ok(times)
}

fn parse_observables(spec: Option<&str>, dim: usize) -> Result<Vec<(String, ComplexMatrix)>, CliError> {
    let default = if dim == 2 { "sz" } else { "e0_0" };
    let mut out = Vec::new();
    for name in spec.unwrap_or(default).split(',').map(str::trim) {
        let obs = match name {
            "sx" | "sy" | "sz" if dim != 2 => {
                return Err(CliError::Usage(format!("observable {name} needs dim 2")))
            }
            "sx" => pauli_x(),
            "sy" => pauli_y(),
            "sz" => pauli_z(),
            "id" => ComplexMatrix::identity(dim),
            other => {
                let body = other
                    .strip_prefix('e')
                    .and_then(|r| r.split_once('_'))
                    .and_then(|(i, j)| Some((i.parse::<usize>().ok()?, j.parse::<usize>().ok()?)));
                match body {
                    Some((i, j)) if i < dim && j < dim => ComplexMatrix::matrix_unit(dim, i, j),
                    _ => {
                        return Err(CliError::Usage(format!(
                            "unknown observable '{other}' (sx|sy|sz|id|e<i>_<j>)"
                        )))
                    }
                }
            }
        };
        out.push((name.to_string(), obs));
    }
    Ok(out)
}

fn cmd_qms(
    input: &Path,
    lambda: Option<f64>,
    times: &str,
    observables: Option<&str>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let text = read_to_string(input)?;
    let gen = load_generator(&text, lambda)?;
    let times = parse_times(times)?;
    let observables = parse_observables(observables, gen.dim())?;

    // ρ₀ = |0⟩⟨0| on the system dimension.
    let rho0 = ComplexMatrix::matrix_unit(gen.dim(), 0, 0);
    let mut csv = String::from("t");
    for (name, _) in &observables {
        let _ = write!(csv, ",{name}_re,{name}_im");
    }
    csv.push_str(",semigroup_residual\n");
    for &t in &times {
        let full = evolve(&gen, t)?;
        let halves = evolve(&gen, t / 2.0)?;
        let self_check = full.dist_fro(&halves.compose(&halves));
        let _ = write!(csv, "{t:.12e}");
        for (_, x) in &observables {
            let evolved = full.apply(x)?;
            let val = rho0.matmul(&evolved).trace();
            let _ = write!(csv, ",{:.12e},{:.12e}", val.re, val.im);
        }
        let _ = writeln!(csv, ",{self_check:.3e}");
    }
    match out {
        Some(path) => write_string(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_verify(
    suite: &str,
    seed: Option<u64>,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> Result<(), CliError> {
    let suite: Suite = suite.parse().map_err(|e: CoreError| CliError::Usage(e.to_string()))?;
    let seed = resolve_seed(seed);
    let report = run_suite(suite, seed);
    let mut body =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    body.push('\n');
    match out {
        Some(path) => write_string(path, &body)?,
        None => print!("{body}"),
    }
    if let Some(csv_path) = csv {
        if matches!(suite, Suite::Poincare | Suite::All) {
            write_string(csv_path, &poincare_invariance_csv(seed))?;
        } else {
            return Err(CliError::Usage(
                "--csv applies to the poincare (or all) suite".into(),
            ));
        }
    }
    eprintln!(
        "suite={} seed={} cases={} failures={}",
        report.suite, report.seed, report.cases, report.failures
    );
    if report.failures > 0 {
        return Err(CliError::Verification(format!(
            "{} case(s) failed",
            report.failures
        )));
    }
    Ok(())
}
