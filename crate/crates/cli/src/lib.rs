//! The `mvq` command-line tool.
//!
//! [`run`] takes the argument list and output streams explicitly and returns
//! the process exit code, so the binary is a thin wrapper and tests can drive
//! every command in-process.
//!
//! Exit codes: 0 success, 1 verification/audit failure or inequivalence,
//! 2 usage or parse error, 3 I/O error.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use mvq_core::circuits::{self, CircuitId, Verification};
use mvq_core::minimizer::{minimize_exact, parse_pla, recognize_xor, XorStyle};
use mvq_core::netlist::enumerate_inputs;
use mvq_core::{minimizer, sim, Level, Netlist, SignalType};

pub use config::Config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_USAGE,
            error: error.into(),
        }
    }

    pub fn io(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_IO,
            error: error.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::io(e)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mvq",
    version,
    about = "Quaternary arithmetic circuits: tables, verification, metrics, minimization, simulation"
)]
struct Cli {
    /// key=value configuration file (cost_table, voltage_map, output_dir)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a circuit's truth table
    Table {
        circuit: String,
        /// Show the native binary encoding instead of quaternary levels
        #[arg(long)]
        bits: bool,
    },
    /// Exhaustively check circuits against the arithmetic reference
    Verify {
        /// Circuit name or `all`
        circuit: String,
        /// Check this netlist JSON file instead of the built-in netlist
        #[arg(long, value_name = "FILE")]
        netlist: Option<PathBuf>,
    },
    /// Gate count, depth and transistor estimate
    Metrics { circuit: String },
    /// Exact two-level minimization of a single-output PLA file
    Minimize {
        pla: PathBuf,
        /// Also print an XOR-factored form
        #[arg(long)]
        xor: bool,
    },
    /// Check every published output equation against its table
    Audit,
    /// Sweep all inputs and write the trace
    Sim {
        circuit: String,
        /// CSV output file (`-` for standard output)
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// VCD output file (`-` for standard output)
        #[arg(long, value_name = "PATH")]
        vcd: Option<PathBuf>,
        /// Write voltages instead of levels in the CSV
        #[arg(long)]
        volts: bool,
    },
    /// Exhaustive equivalence of two circuits at the quaternary level
    Compare { a: String, b: String },
    /// Write a circuit's netlist as JSON
    Export {
        circuit: String,
        /// Output file (`-` for standard output)
        #[arg(long, value_name = "PATH", default_value = "-")]
        out: PathBuf,
        /// Export the converter-wrapped quaternary view
        #[arg(long)]
        quaternary: bool,
    },
}

/// Runs one command line (`args[0]` is the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut warnings = Vec::new();
    let result = Config::load(cli.config.as_deref(), &mut warnings)
        .and_then(|cfg| dispatch(cli.command, &cfg, out, &mut warnings));
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            f.code
        }
    }
}

fn dispatch(
    command: Command,
    cfg: &Config,
    out: &mut dyn Write,
    warnings: &mut Vec<String>,
) -> Result<i32, Failure> {
    match command {
        Command::Table { circuit, bits } => cmd_table(circuit_id(&circuit)?, bits, out),
        Command::Verify { circuit, netlist } => cmd_verify(&circuit, netlist.as_deref(), out),
        Command::Metrics { circuit } => {
            let costs = cfg.costs(warnings)?;
            cmd_metrics(circuit_id(&circuit)?, &costs, out)
        }
        Command::Minimize { pla, xor } => cmd_minimize(&pla, xor, out),
        Command::Audit => cmd_audit(out),
        Command::Sim {
            circuit,
            csv,
            vcd,
            volts,
        } => {
            let id = circuit_id(&circuit)?;
            let vmap = if volts {
                Some(cfg.voltages(warnings)?)
            } else {
                None
            };
            cmd_sim(id, csv, vcd, vmap, cfg, out)
        }
        Command::Compare { a, b } => cmd_compare(circuit_id(&a)?, circuit_id(&b)?, out),
        Command::Export {
            circuit,
            out: path,
            quaternary,
        } => {
            let id = circuit_id(&circuit)?;
            let n = if quaternary {
                id.quaternary_view()
            } else {
                id.build()
            };
            write_target(&path, &n.to_json(), cfg, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn circuit_id(name: &str) -> Result<CircuitId, Failure> {
    name.parse::<CircuitId>().map_err(|e| {
        let known: Vec<&str> = CircuitId::ALL.iter().map(|c| c.name()).collect();
        Failure::usage(anyhow!("{e} (known circuits: {})", known.join(", ")))
    })
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::io)
}

/// Writes `text` to `path`, or to `out` when the path is `-`.
fn write_target(path: &Path, text: &str, cfg: &Config, out: &mut dyn Write) -> Result<(), Failure> {
    if path == Path::new("-") {
        out.write_all(text.as_bytes())?;
        return Ok(());
    }
    let target = cfg.output_path(path);
    if let Some(dir) = target.parent().filter(|d| !d.as_os_str().is_empty()) {
        if cfg.output_dir.is_some() {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating {}", dir.display()))
                .map_err(Failure::io)?;
        }
    }
    fs::write(&target, text)
        .with_context(|| format!("writing {}", target.display()))
        .map_err(Failure::io)
}

fn cmd_table(id: CircuitId, bits: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = if bits {
        bit_table(&id.build())?
    } else {
        quaternary_table(id)?
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

fn operator_label(id: CircuitId) -> &'static str {
    match id {
        CircuitId::Mod4Add => "X + Y (mod 4)",
        CircuitId::Mod4Sub => "X - Y (mod 4)",
        CircuitId::Mod4Mul => "X * Y (mod 4)",
        CircuitId::Mod4Neg => "-X (mod 4)",
        CircuitId::Mod4Dbl => "2X (mod 4)",
        CircuitId::Gf4Add => "X + Y in GF(4)",
        CircuitId::Gf4MulSop | CircuitId::Gf4MulMux => "X * Y in GF(4)",
        CircuitId::Q2b => "quaternary to binary",
        CircuitId::B2q => "binary to quaternary",
    }
}

/// Two-operand circuits print as a 4x4 grid, everything else as rows.
fn quaternary_table(id: CircuitId) -> Result<String, Failure> {
    let n = id.quaternary_view();
    let table = n.truth_table().map_err(Failure::usage)?;
    let mut s = format!("{id}: {}\n", operator_label(id));
    let quat_in = table
        .inputs
        .iter()
        .all(|(_, t)| *t == SignalType::Quaternary);
    if quat_in && table.inputs.len() == 2 && table.outputs.len() == 1 {
        let _ = writeln!(s, "X\\Y | 0 1 2 3");
        let _ = writeln!(s, "----+--------");
        for x in 0..4 {
            let cells: Vec<String> = (0..4)
                .map(|y| table.rows[x * 4 + y].outputs[0].to_string())
                .collect();
            let _ = writeln!(s, "  {x} | {}", cells.join(" "));
        }
    } else {
        s.push_str(&table.to_string());
    }
    Ok(s)
}

/// The native table with each quaternary level shown as its bit pair.
fn bit_table(n: &Netlist) -> Result<String, Failure> {
    let table = n.truth_table().map_err(Failure::usage)?;
    let cell = |ty: SignalType, level: Level, width: usize| match ty {
        SignalType::Binary => format!("{level:>width$}"),
        SignalType::Quaternary => format!("{:>width$}", format!("{}{}", level >> 1, level & 1)),
    };
    let width = |name: &str, ty: SignalType| match ty {
        SignalType::Binary => name.len(),
        SignalType::Quaternary => name.len().max(2),
    };
    let header = |ports: &[(String, SignalType)]| {
        ports
            .iter()
            .map(|(n, t)| format!("{n:>w$}", w = width(n, *t)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let row = |ports: &[(String, SignalType)], levels: &[Level]| {
        ports
            .iter()
            .zip(levels)
            .map(|((n, t), &l)| cell(*t, l, width(n, *t)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = format!("{} | {}\n", header(&table.inputs), header(&table.outputs));
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{} | {}",
            row(&table.inputs, &r.inputs),
            row(&table.outputs, &r.outputs)
        );
    }
    Ok(s)
}

fn report_verification(v: &Verification, out: &mut dyn Write) -> std::io::Result<()> {
    match &v.mismatch {
        None => writeln!(out, "PASS {} ({} vectors)", v.circuit, v.vectors),
        Some(m) => writeln!(out, "FAIL {}: {m}", v.circuit),
    }
}

fn cmd_verify(target: &str, netlist: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let results: Vec<Verification> = match (target, netlist) {
        ("all", Some(_)) => {
            return Err(Failure::usage(anyhow!(
                "--netlist needs a single circuit name, not `all`"
            )))
        }
        ("all", None) => CircuitId::ALL
            .iter()
            .map(|&id| circuits::verify(id))
            .collect::<Result<_, _>>()
            .map_err(Failure::usage)?,
        (name, None) => vec![circuits::verify(circuit_id(name)?).map_err(Failure::usage)?],
        (name, Some(path)) => {
            let id = circuit_id(name)?;
            let text = read_input(path)?;
            let n = Netlist::from_json(&text)
                .with_context(|| format!("loading {}", path.display()))
                .map_err(Failure::usage)?;
            vec![circuits::verify_netlist(id, &n).map_err(Failure::usage)?]
        }
    };
    for v in &results {
        report_verification(v, out)?;
    }
    let passed = results.iter().filter(|v| v.passed()).count();
    writeln!(out, "{passed}/{} PASS", results.len())?;
    Ok(if passed == results.len() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn cmd_metrics(
    id: CircuitId,
    costs: &mvq_core::CostTable,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let m = id.metrics(costs).map_err(Failure::usage)?;
    writeln!(out, "circuit: {id}")?;
    writeln!(out, "gates={}", m.gate_count)?;
    writeln!(out, "depth={}", m.depth)?;
    writeln!(out, "transistors={}", m.transistor_estimate)?;
    let hist: Vec<String> = m
        .gate_histogram
        .iter()
        .map(|(k, v)| format!("{}={v}", k.to_lowercase()))
        .collect();
    writeln!(out, "histogram: {}", hist.join(" "))?;
    match &m.paper_reference {
        Some(r) => {
            writeln!(out, "paper_ref_transistors={}", r.transistors)?;
            writeln!(out, "note: {}", r.note)?;
        }
        None => writeln!(out, "paper_ref_transistors=none")?,
    }
    Ok(EXIT_OK)
}

fn cmd_minimize(path: &Path, xor: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = read_input(path)?;
    let spec = parse_pla(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::usage)?;
    let names = spec.names().to_vec();
    let sop = minimize_exact(&spec);
    writeln!(out, "sop: {}", sop.render(&names))?;
    writeln!(
        out,
        "cost: {} terms, {} literals",
        sop.term_count(),
        sop.literal_count()
    )?;
    if xor {
        let report = recognize_xor(&sop);
        writeln!(out, "xor: {}", report.render(&names, XorStyle::Ascii))?;
        writeln!(out, "xor gates: {}", report.gate_count)?;
    }
    Ok(EXIT_OK)
}

fn cmd_audit(out: &mut dyn Write) -> Result<i32, Failure> {
    let report = minimizer::audit_paper_functions();
    writeln!(out, "{report}")?;
    Ok(if report.all_equivalent() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn cmd_sim(
    id: CircuitId,
    csv: Option<PathBuf>,
    vcd: Option<PathBuf>,
    vmap: Option<mvq_core::VoltageMap>,
    cfg: &Config,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let n = id.build();
    let stimulus = sim::sweep_all(&n).map_err(Failure::usage)?;
    let trace = sim::run(&n, &stimulus).map_err(Failure::usage)?;
    // With no output requested, the CSV goes to standard output.
    let csv = csv.or_else(|| vcd.is_none().then(|| PathBuf::from("-")));
    if let Some(path) = csv {
        let text = match &vmap {
            Some(v) => sim::voltage_view(&trace, v),
            None => sim::export_csv(&trace),
        };
        write_target(&path, &text, cfg, out)?;
    }
    if let Some(path) = vcd {
        write_target(&path, &sim::export_vcd(&trace), cfg, out)?;
    }
    Ok(EXIT_OK)
}

fn port_types(n: &Netlist) -> (Vec<SignalType>, Vec<SignalType>) {
    (n.input_types(), n.output_types())
}

fn cmd_compare(a: CircuitId, b: CircuitId, out: &mut dyn Write) -> Result<i32, Failure> {
    let (na, nb) = (a.quaternary_view(), b.quaternary_view());
    if port_types(&na) != port_types(&nb) {
        return Err(Failure::usage(anyhow!(
            "port shapes differ: {a} and {b} cannot be compared"
        )));
    }
    let types = na.input_types();
    for vector in enumerate_inputs(&types) {
        let ra = na.eval_vector(&vector).map_err(Failure::usage)?;
        let rb = nb.eval_vector(&vector).map_err(Failure::usage)?;
        if ra != rb {
            let named = |n: &Netlist, levels: &[Level]| {
                n.outputs()
                    .iter()
                    .zip(levels)
                    .map(|(p, l)| format!("{}={l}", p.name))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let inputs: Vec<String> = na
                .inputs()
                .iter()
                .zip(&vector)
                .map(|(p, l)| format!("{}={l}", p.name))
                .collect();
            writeln!(
                out,
                "DIFFER at {}: {a} {}, {b} {}",
                inputs.join(" "),
                named(&na, &ra),
                named(&nb, &rb)
            )?;
            return Ok(EXIT_FAIL);
        }
    }
    writeln!(out, "EQUAL ({} vectors)", na.input_space())?;
    Ok(EXIT_OK)
}
