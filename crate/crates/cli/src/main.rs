// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! `msqpt`: reconstruct, project, score and count process tomography runs.

mod config;
mod heatmap;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use msqpt::cco::{fidelity, project_physical, ProjectionConfig};
use msqpt::sim::{Mode, NoiseSpec};
use msqpt::states::{parse_fixture_states, validate_fixtures, FixtureReport, THREE_QUBIT_FIXTURE, TWO_QUBIT_FIXTURE};
use msqpt::tomo::{analytic_chi, complexity, ChiMatrix, Estimator, EstimatorConfig, Method};
use num_complex::Complex64;

use config::{resolve_gate, ElementPair, GateChoice};
use heatmap::Part;

/// Exit status for unreadable or malformed input.
const EXIT_INPUT: u8 = 2;
/// Exit status when the projection stopped at its iteration cap.
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "msqpt", version, about = "Selective quantum process tomography toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct the full process matrix of a gate.
    Chi(RunArgs),
    /// Estimate a single chi element and its survival probability.
    Element(RunArgs),
    /// Project a chi matrix onto the physical set.
    Cco(CcoArgs),
    /// Print preparation, readout and ancilla counts.
    Complexity {
        #[arg(value_parser = parse_method)]
        method: Method,
        qubits: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Validate purification fixture files.
    Fixtures {
        /// Fixture file to check instead of the bundled ones.
        #[arg(long)]
        file: Option<PathBuf>,
        /// System qubits of `--file`.
        #[arg(long, default_value_t = 3)]
        qubits: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Shots,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pgm,
}

#[derive(Args)]
struct RunArgs {
    /// swap, cnot, toffoli, identity or file:<unitary.json>
    #[arg(long, default_value = "swap")]
    gate: GateChoice,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = 4096)]
    shots: u64,
    /// none, or kind:strength[:pergate|terminal]
    #[arg(long, default_value = "none")]
    noise: NoiseSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Element `m,n` (0-based Pauli indices).
    #[arg(long)]
    element: Option<ElementPair>,
    /// Output path for the chi JSON (chi) or result JSON (element).
    #[arg(long)]
    out: Option<PathBuf>,
    /// json writes only the chi file; csv and pgm add Re/Im heatmaps beside it.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Take D Tr[E_k L(rho_i)] as Tr[E_k L(E_i)] without the rho_0 readout.
    #[arg(long)]
    assume_unital: bool,
}

#[derive(Args)]
struct CcoArgs {
    /// Input chi JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Convergence log CSV.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Gate whose analytic chi is used for the before/after fidelity report.
    #[arg(long)]
    reference: Option<GateChoice>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: msqpt::Error| e.to_string())
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Self { code: 1, error }
    }
}

fn input_error(error: anyhow::Error) -> Failure {
    Failure { code: EXIT_INPUT, error }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = apply_thread_cap() {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    let result = match cli.command {
        Command::Chi(args) => cmd_chi(&args).map_err(Failure::from),
        Command::Element(args) => cmd_element(&args).map_err(Failure::from),
        Command::Cco(args) => cmd_cco(&args),
        Command::Complexity { method, qubits, format } => cmd_complexity(method, qubits, format).map_err(Failure::from),
        Command::Fixtures { file, qubits } => cmd_fixtures(file.as_deref(), qubits),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn apply_thread_cap() -> Result<()> {
    match std::env::var("MSQPT_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("MSQPT_THREADS=`{v}`"))?;
            Ok(msqpt::exec::configure_threads(n)?)
        }
        Err(_) => Ok(()),
    }
}

fn estimator_config(args: &RunArgs) -> Result<EstimatorConfig> {
    let mode = match args.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Shots if args.shots == 0 => bail!("--shots must be at least 1"),
        ModeArg::Shots => Mode::Shots(args.shots),
    };
    Ok(EstimatorConfig { mode, noise: args.noise, seed: args.seed, unital_assumption: args.assume_unital, ..Default::default() })
}

fn sibling(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "chi".into());
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_chi(args: &RunArgs) -> Result<()> {
    let gate = resolve_gate(&args.gate, args.qubits)?;
    let est = Estimator::new(gate.channel()?, estimator_config(args)?)?;
    let chi = est.full_chi()?;
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("chi.json"));
    chi.write_json(&out).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {} ({}x{})", out.display(), chi.size(), chi.size());
    for part in [Part::Re, Part::Im] {
        let (text, ext) = match args.format {
            Format::Json => continue,
            Format::Csv => (heatmap::csv(chi.entries(), part), "csv"),
            Format::Pgm => (heatmap::pgm(chi.entries(), part), "pgm"),
        };
        let path = sibling(&out, part.suffix(), ext);
        write(&path, &text)?;
        eprintln!("wrote {}", path.display());
    }
    let f = fidelity(&chi, &analytic_chi(&gate.unitary)?)?;
    println!("fidelity vs analytic: {:.9}", f.value);
    Ok(())
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn cmd_element(args: &RunArgs) -> Result<()> {
    let Some(pair) = args.element else { bail!("element needs --element m,n") };
    let gate = resolve_gate(&args.gate, args.qubits)?;
    let est = Estimator::new(gate.channel()?, estimator_config(args)?)?;
    let d2 = 1usize << (2 * gate.qubits);
    if pair.m >= d2 || pair.n >= d2 {
        bail!("element ({},{}) out of range for {} qubits (max {})", pair.m, pair.n, gate.qubits, d2 - 1);
    }
    let s = est.survival(pair.m, pair.n)?;
    let chi = msqpt::tomo::chi_from_survival(s.value, pair.m == pair.n, 1 << gate.qubits);
    println!("F_{},{} = {}", pair.m, pair.n, fmt_complex(s.value));
    println!("chi_{},{} = {}", pair.m, pair.n, fmt_complex(chi));
    println!("settings = {}", s.settings);
    println!("circuits = {}", s.circuits);
    if let Some(out) = &args.out {
        let doc = serde_json::json!({
            "m": pair.m,
            "n": pair.n,
            "survival": [s.value.re, s.value.im],
            "chi": [chi.re, chi.im],
            "settings": s.settings,
            "circuits": s.circuits,
        });
        write(out, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }
    Ok(())
}

fn cmd_cco(args: &CcoArgs) -> Result<(), Failure> {
    let input = ChiMatrix::read_json(&args.input, true)
        .with_context(|| format!("reading {}", args.input.display()))
        .map_err(input_error)?;
    let cfg = ProjectionConfig { tol: args.tol, max_iters: args.max_iters, ..Default::default() };
    let result = project_physical(&input, &cfg).map_err(anyhow::Error::from)?;
    result.chi.write_json(&args.out).with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(log) = &args.log {
        write(log, &result.log_csv())?;
    }
    println!("iterations: {}", result.iterations);
    println!("min eigenvalue: {:.3e}", result.chi.min_eigenvalue().map_err(anyhow::Error::from)?);
    println!("tp residual: {:.3e}", result.chi.tp_residual());
    if let Some(reference) = &args.reference {
        let gate = resolve_gate(reference, Some(input.qubits()))?;
        let theory = analytic_chi(&gate.unitary).map_err(anyhow::Error::from)?;
        let before = fidelity(&input, &theory).map(|f| format!("{:.6}", f.value)).unwrap_or_else(|_| "undefined".into());
        let after = fidelity(&result.chi, &theory).map_err(anyhow::Error::from)?.value;
        println!("fidelity before: {before}");
        println!("fidelity after: {after:.6}");
    }
    if !result.converged {
        return Err(Failure {
            code: EXIT_NOT_CONVERGED,
            error: anyhow::anyhow!("projection did not converge in {} iterations; wrote best iterate", result.iterations),
        });
    }
    Ok(())
}

fn cmd_complexity(method: Method, qubits: usize, format: Format) -> Result<()> {
    let r = complexity(method, qubits)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string(&r)?),
        _ => {
            println!("method,n,preparations,readouts,ancillas");
            println!("{},{},{},{},{}", r.method, r.n, r.preparations, r.readouts, r.ancillas);
        }
    }
    Ok(())
}

fn print_report(name: &str, report: &FixtureReport) {
    println!("{name}: {}/{} reduce to an input state", report.passed(), report.total());
    for c in &report.checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        let matched = c.matched.map_or("none".to_string(), |j| j.to_string());
        println!("  {status} {} (line {}) -> rho_{matched}", c.label, c.line);
    }
    for a in &report.anomalies {
        println!("  warning: {}", serde_json::to_string(a).unwrap_or_default());
    }
}

fn cmd_fixtures(file: Option<&Path>, qubits: usize) -> Result<(), Failure> {
    let sources: Vec<(String, String, usize)> = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(input_error)?;
            vec![(path.display().to_string(), text, qubits)]
        }
        None => vec![
            ("two-qubit".into(), TWO_QUBIT_FIXTURE.into(), 2),
            ("three-qubit".into(), THREE_QUBIT_FIXTURE.into(), 3),
        ],
    };
    for (name, text, n) in sources {
        let states = parse_fixture_states(&text).with_context(|| name.clone()).map_err(input_error)?;
        let report = validate_fixtures(&states, n).with_context(|| name.clone()).map_err(input_error)?;
        print_report(&name, &report);
    }
    Ok(())
}
