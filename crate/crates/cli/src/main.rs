//! `ecsc`: energies, table reproduction, oracle comparisons, wavefunction
//! samples and δ sweeps for the exponential-cosine-screened Coulomb potential.
//!
//! Exit codes: 0 success, 1 tolerance failure, 2 usage error, 3 unsupported state.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ecsc::oracle::solve_eigenvalue;
use ecsc::perturbation::total_energy;
use ecsc::report::{
    self, build_table, format_sig, DeltaRange, RadialGrid, TableId, TableOptions, DEFAULT_FLAG_THRESHOLD,
};
use ecsc::{CorrectionOrder, Error, OracleConfig, PhysicalParams, QuantumNumbers, UnitPreset};

const EXIT_TOLERANCE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ecsc",
    version,
    about = "Bound states of the exponential-cosine-screened Coulomb potential"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Unit convention: atomic (ħ=m=A=1), table5 (ħ=m=1, A=√2), hbar2m1 (ħ=2m=1), custom
    #[arg(long, global = true, default_value = "atomic", value_parser = parse_units)]
    units: UnitPreset,

    /// Override ħ (required with --units custom)
    #[arg(long, global = true)]
    hbar: Option<f64>,

    /// Override the mass m (required with --units custom)
    #[arg(long, global = true)]
    mass: Option<f64>,

    /// Coupling constant A (required with --units custom)
    #[arg(long = "A", global = true)]
    strength: Option<f64>,

    /// Cosine factor g; the perturbative results need g = 1
    #[arg(long, global = true, default_value_t = 1.0)]
    g: f64,

    /// Perturbative order: 0, 1 or 2
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
    order: u8,

    /// Write CSV output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Run the Numerov eigensolver alongside the perturbative result
    #[arg(long, global = true, overrides_with = "no_oracle")]
    oracle: bool,

    /// Skip the Numerov eigensolver
    #[arg(long, global = true, overrides_with = "oracle")]
    no_oracle: bool,

    /// Radial grid points for the eigensolver
    #[arg(long, global = true, env = "ECSC_ORACLE_POINTS", hide = true)]
    oracle_points: Option<usize>,
}

impl GlobalArgs {
    /// Explicit --oracle/--no-oracle, else the per-command default.
    fn oracle_enabled(&self, default: bool) -> bool {
        if self.oracle {
            true
        } else if self.no_oracle {
            false
        } else {
            default
        }
    }

    fn order(&self) -> CorrectionOrder {
        // range-checked by clap
        CorrectionOrder::try_from(self.order).unwrap_or_default()
    }

    fn params(&self, delta: f64) -> Result<PhysicalParams, CliError> {
        let (hbar, mass, a) = self.units.constants();
        if self.units == UnitPreset::Custom && (self.hbar.is_none() || self.mass.is_none() || self.strength.is_none()) {
            return Err(CliError::usage("--units custom needs --hbar, --mass and --A"));
        }
        Ok(PhysicalParams::new(
            self.strength.unwrap_or(a),
            delta,
            self.g,
            self.hbar.unwrap_or(hbar),
            self.mass.unwrap_or(mass),
        )?)
    }

    fn oracle_config(&self, params: &PhysicalParams, qn: QuantumNumbers) -> OracleConfig {
        let config = OracleConfig::for_state(params, qn);
        match self.oracle_points {
            Some(p) => config.with_points(p),
            None => config,
        }
    }
}

#[derive(Debug, Args)]
struct StateArgs {
    /// Spectroscopic label such as 1s or 3d
    #[arg(long, conflicts_with_all = ["n", "l"])]
    state: Option<String>,

    /// Radial quantum number (number of nodes)
    #[arg(long, requires = "l")]
    n: Option<u32>,

    /// Orbital angular momentum
    #[arg(long, requires = "n")]
    l: Option<u32>,
}

impl StateArgs {
    fn resolve(&self) -> Result<QuantumNumbers, CliError> {
        match (&self.state, self.n, self.l) {
            (Some(label), _, _) => Ok(label.parse()?),
            (None, Some(n), Some(l)) => Ok(QuantumNumbers::new(n, l)),
            _ => Err(CliError::usage("give --state <label> or both --n and --l")),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Perturbative energy of one state
    Energy {
        #[command(flatten)]
        state: StateArgs,
        /// Screening parameter δ
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Also print a CSV record
        #[arg(long)]
        csv: bool,
    },
    /// Reproduce a published table (1-6) as CSV
    Table {
        /// Table number, 1 to 6
        id: String,
    },
    /// Perturbative vs eigensolver energies over a list of δ
    Compare {
        #[command(flatten)]
        state: StateArgs,
        /// Comma-separated δ values
        #[arg(long)]
        deltas: String,
        /// |difference| above which a row is flagged
        #[arg(long, default_value_t = DEFAULT_FLAG_THRESHOLD)]
        threshold: f64,
    },
    /// Sample the n = 0 wavefunction χ, u and ψ = χ·u
    Wavefunction {
        /// Orbital angular momentum
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Screening parameter δ (> 0)
        #[arg(long)]
        delta: f64,
        /// Radial grid start:stop:count
        #[arg(long, default_value = "0:10:101")]
        grid: String,
    },
    /// Energy breakdown over an inclusive δ range
    Scan {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 0.1)]
        to: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Unsupported(String),
    Numerical(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Numerical(_) => EXIT_TOLERANCE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::OutOfRange { .. } | Error::Unsupported(_) | Error::NoBoundState { .. } => CliError::Unsupported(msg),
            Error::QuadratureFailure { .. } | Error::IntegrationFailure(_) => CliError::Numerical(msg),
            _ => CliError::Usage(msg),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn parse_units(s: &str) -> Result<UnitPreset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::usage(format!("cannot create {}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

/// Outcome of a successful command: 0, or 1 for a tolerance failure.
type Outcome = Result<u8, CliError>;

fn cmd_energy(global: &GlobalArgs, state: &StateArgs, delta: f64, csv: bool) -> Outcome {
    let qn = state.resolve()?;
    let params = global.params(delta)?;
    let order = global.order();
    let b = total_energy(&params, qn, order)?;
    let oracle = if global.oracle_enabled(false) {
        Some(solve_eigenvalue(&params, qn, &global.oracle_config(&params, qn))?.energy)
    } else {
        None
    };

    let mut out = open_output(&global.out)?;
    writeln!(out, "state    {qn} (n={}, l={})", qn.n, qn.l)?;
    writeln!(
        out,
        "params   A={} delta={} g={} hbar={} mass={} order={order}",
        params.strength_a, params.screening_delta, params.cosine_g, params.hbar, params.mass
    )?;
    let mut lines = vec![
        ("e0", b.e0),
        ("shift", b.shift),
        ("e1", b.e1),
        ("e2", b.e2),
        ("total", b.total),
        ("binding", b.binding()),
    ];
    if let Some(e) = oracle {
        lines.push(("oracle", e));
        lines.push(("pert-oracle", b.total - e));
    }
    for (name, value) in &lines {
        writeln!(out, "{name:<8} {:>18}", format_sig(*value))?;
    }
    if csv {
        writeln!(
            out,
            "state,n,l,A,delta,g,hbar,mass,order,e0,shift,e1,e2,total,binding,e_oracle"
        )?;
        let fields = [
            qn.to_string(),
            qn.n.to_string(),
            qn.l.to_string(),
            format_sig(params.strength_a),
            format_sig(params.screening_delta),
            format_sig(params.cosine_g),
            format_sig(params.hbar),
            format_sig(params.mass),
            order.to_string(),
            format_sig(b.e0),
            format_sig(b.shift),
            format_sig(b.e1),
            format_sig(b.e2),
            format_sig(b.total),
            format_sig(b.binding()),
            oracle.map(format_sig).unwrap_or_default(),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()?;
    Ok(0)
}

fn cmd_table(global: &GlobalArgs, id: &str) -> Outcome {
    let table_id: TableId = id.parse()?;
    let options = TableOptions {
        order: global.order(),
        oracle: global.oracle_enabled(true),
        oracle_points: global.oracle_points,
    };
    let report = build_table(table_id, &options)?;
    let mut out = open_output(&global.out)?;
    report::write_table_csv(&report.rows, &mut out)?;
    out.flush()?;
    warn_all(&report.warnings);
    for row in report.failures() {
        eprintln!(
            "outside tolerance: table {} row {} {} delta={}: e_pert={} e_reference={} |dev|={:.3e}",
            row.table_id,
            row.row,
            row.state_label,
            format_sig(row.params.screening_delta),
            format_sig(row.e_pert),
            row.e_reference.map(format_sig).unwrap_or_default(),
            row.abs_dev_pert_ref.unwrap_or(f64::NAN)
        );
    }
    eprintln!("{}", report.summary());
    Ok(if report.passed() { 0 } else { EXIT_TOLERANCE })
}

fn cmd_compare(global: &GlobalArgs, state: &StateArgs, deltas: &str, threshold: f64) -> Outcome {
    let qn = state.resolve()?;
    let deltas = report::parse_delta_list(deltas)?;
    if !(threshold >= 0.0) {
        return Err(CliError::usage("--threshold must be non-negative"));
    }
    let base = global.params(0.0)?;
    let (rows, warnings) = report::compare(&base, qn, &deltas, global.order(), global.oracle_points, threshold)?;
    let mut out = open_output(&global.out)?;
    report::write_compare_csv(&rows, &mut out)?;
    out.flush()?;
    warn_all(&warnings);
    for row in rows.iter().filter(|r| r.flagged) {
        eprintln!(
            "deviation: {qn} delta={}: e_pert - e_oracle = {:.3e} exceeds {threshold:e}",
            format_sig(row.delta),
            row.difference.unwrap_or(f64::NAN)
        );
    }
    Ok(0)
}

fn cmd_wavefunction(global: &GlobalArgs, l: u32, delta: f64, grid: &str) -> Outcome {
    let grid: RadialGrid = grid.parse()?;
    let params = global.params(delta)?;
    let table = report::sample_wavefunction(&params, l, &grid)?;
    let mut out = open_output(&global.out)?;
    report::write_wavefunction_csv(&table, &mut out)?;
    out.flush()?;
    if table.clipped > 0 {
        eprintln!(
            "warning: {} grid points beyond r_valid = {} were dropped",
            table.clipped,
            format_sig(table.r_valid)
        );
    }
    Ok(0)
}

fn cmd_scan(global: &GlobalArgs, state: &StateArgs, from: f64, to: f64, step: f64) -> Outcome {
    let qn = state.resolve()?;
    let range = DeltaRange::new(from, to, step)?;
    let base = global.params(0.0)?;
    let oracle = global.oracle_enabled(false).then_some(global.oracle_points);
    let (rows, warnings) = report::scan(&base, qn, &range, global.order(), oracle)?;
    let mut out = open_output(&global.out)?;
    report::write_scan_csv(&rows, &mut out)?;
    out.flush()?;
    warn_all(&warnings);
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Energy { state, delta, csv } => cmd_energy(g, state, *delta, *csv),
        Command::Table { id } => cmd_table(g, id),
        Command::Compare {
            state,
            deltas,
            threshold,
        } => cmd_compare(g, state, deltas, *threshold),
        Command::Wavefunction { l, delta, grid } => cmd_wavefunction(g, *l, *delta, grid),
        Command::Scan { state, from, to, step } => cmd_scan(g, state, *from, *to, *step),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) | CliError::Unsupported(m) | CliError::Numerical(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
