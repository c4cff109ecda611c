//! Command-line front end: batch verification, construction, fault
//! campaigns and report generation over `.rnl` circuit files.
//!
//! Exit codes: 0 success, 1 property failure (a failed `check` or a
//! negative `equiv` verdict), 2 usage error, 3 I/O or parse error.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use revlogic::builders::{self, LibraryFunction};
use revlogic::circuit::Circuit;
use revlogic::fault::{self, FaultModel, Observer, VectorSet};
use revlogic::gate::{builtin_gate, BUILTINS};
use revlogic::metrics::{self, TableKind};
use revlogic::rnl;
use revlogic::sim::{self, TruthSpec};
use revlogic::{bits, parity_audit};

#[derive(Parser)]
#[command(
    name = "revlogic",
    version,
    about = "Parity-preserving reversible logic toolkit",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect the builtin gate catalog
    Gates {
        #[command(subcommand)]
        cmd: GatesCmd,
    },
    /// Validate a circuit: structure, reversibility, parity preservation
    Check { file: PathBuf },
    /// Exhaustive truth table of a circuit, with parity columns
    Truth {
        file: PathBuf,
        /// Emit tab-separated values instead of an aligned table
        #[arg(long)]
        tsv: bool,
    },
    /// Evaluate a circuit on one input vector and dump the trace
    Sim {
        file: PathBuf,
        /// Primary input bits, first input leftmost (e.g. 011)
        #[arg(long = "in", value_name = "BITS")]
        input: String,
    },
    /// Check a circuit against a truth specification file
    Equiv {
        file: PathBuf,
        /// Spec file: `inputs <n>` then `output <name> <2^n bits>` lines
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run a fault-injection campaign over the site x vector grid
    Faults {
        file: PathBuf,
        /// Comma-separated fault models: bitflip, sa0, sa1
        #[arg(long, default_value = "bitflip,sa0,sa1")]
        model: String,
        /// `all` or `sample:K` (sampling requires --seed)
        #[arg(long, default_value = "all")]
        vectors: String,
        /// Seed for sampled campaigns
        #[arg(long)]
        seed: Option<u64>,
        /// Parity observer scope: `all` lines or `primary` outputs only
        #[arg(long, default_value = "all")]
        observer: String,
        /// Emit the per-run CSV report instead of the summary
        #[arg(long)]
        csv: bool,
    },
    /// Emit a reference circuit as .rnl text
    Build {
        #[command(subcommand)]
        what: BuildCmd,
    },
    /// Gate count, garbage, constants, delay and total cost of a circuit
    Metrics {
        file: PathBuf,
        /// Print costs as `8a+6b+2d` instead of `8α+6β+2δ`
        #[arg(long)]
        ascii: bool,
    },
    /// Comparison tables against the published designs
    Compare {
        #[command(subcommand)]
        what: CompareCmd,
    },
}

#[derive(Subcommand)]
enum GatesCmd {
    /// List all builtin gates
    List {
        #[arg(long)]
        ascii: bool,
    },
    /// Truth table of one builtin gate
    Show {
        name: String,
        #[arg(long)]
        tsv: bool,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Fault-tolerant full adder (two IG gates)
    Fa {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// N-bit ripple-carry adder
    Rca {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        bits: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parity-preserving Toffoli circuit (FRG + F2G)
    Tg {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Boolean function from the IG library
    Fn {
        /// One of NOT, COPY, AND, NAND, XOR, OR
        #[arg(long)]
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CompareCmd {
    Fa {
        #[arg(long)]
        ascii: bool,
        #[arg(long)]
        csv: bool,
    },
    Rca {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        bits: u32,
        #[arg(long)]
        ascii: bool,
        #[arg(long)]
        csv: bool,
    },
    Tg {
        #[arg(long)]
        ascii: bool,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

fn data_err(msg: impl Into<String>) -> CliError {
    CliError::Data(msg.into())
}

fn usage_err(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| data_err(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = read_file(path)?;
    let parsed = rnl::parse(&text).map_err(|e| data_err(format!("{}:{e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.circuit)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| data_err(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // die quietly when a pipe consumer closes early (e.g. `truth | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// Returns Ok(false) for a clean run that found a property failure.
fn run(cmd: Cmd) -> Result<bool, CliError> {
    match cmd {
        Cmd::Gates { cmd } => run_gates(cmd),
        Cmd::Check { file } => run_check(&file),
        Cmd::Truth { file, tsv } => run_truth(&file, tsv),
        Cmd::Sim { file, input } => run_sim(&file, &input),
        Cmd::Equiv { file, spec } => run_equiv(&file, &spec),
        Cmd::Faults {
            file,
            model,
            vectors,
            seed,
            observer,
            csv,
        } => run_faults(&file, &model, &vectors, seed, &observer, csv),
        Cmd::Build { what } => run_build(what),
        Cmd::Metrics { file, ascii } => run_metrics(&file, ascii),
        Cmd::Compare { what } => run_compare(what),
    }
}

fn run_gates(cmd: GatesCmd) -> Result<bool, CliError> {
    match cmd {
        GatesCmd::List { ascii } => {
            println!("gate  arity  parity  cost");
            for b in BUILTINS {
                let g = b.spec();
                println!(
                    "{:<5} {:>5}  {:<7} {}",
                    g.name(),
                    g.arity(),
                    if g.is_parity_preserving() {
                        "yes"
                    } else {
                        "no"
                    },
                    g.cost().display(ascii)
                );
            }
            Ok(true)
        }
        GatesCmd::Show { name, tsv } => {
            let g = builtin_gate(&name).map_err(|e| usage_err(e.to_string()))?;
            if tsv {
                print!("{}", g.truth_table_tsv());
            } else {
                println!(
                    "{}: {}x{} gate, parity-preserving: {}, cost {}",
                    g.name(),
                    g.arity(),
                    g.arity(),
                    if g.is_parity_preserving() {
                        "yes"
                    } else {
                        "no"
                    },
                    g.cost()
                );
                let in_names = g.input_port_names().join(" ");
                let out_names = g.output_port_names().join(" ");
                println!("{in_names} | {out_names}");
                for (x, y) in g.truth_table() {
                    println!("{} | {}", spaced_bits(&x), spaced_bits(&y));
                }
            }
            Ok(true)
        }
    }
}

fn spaced_bits(v: &[bool]) -> String {
    v.iter()
        .map(|&b| if b { "1" } else { "0" })
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_check(file: &Path) -> Result<bool, CliError> {
    let circuit = load_circuit(file)?;
    let mut all_ok = true;

    let report = circuit.validate();
    if report.is_ok() {
        println!("validate: PASS");
    } else {
        all_ok = false;
        println!("validate: FAIL");
        for v in &report.violations {
            println!("  {v}");
        }
    }

    match circuit.as_bijection() {
        Ok(bij) if bij.is_reversible() => {
            println!("reversible: PASS (bijection on {} lines)", bij.arity());
        }
        Ok(_) => {
            all_ok = false;
            println!("reversible: FAIL");
        }
        Err(e) => {
            all_ok = false;
            println!("reversible: FAIL ({e})");
        }
    }

    match parity_audit(&circuit) {
        Ok(audit) if audit.circuit_parity_preserving => {
            println!("parity-preserving: PASS");
        }
        Ok(audit) => {
            all_ok = false;
            let first = audit
                .offending_vectors
                .first()
                .map(|v| bits::format_bits(v))
                .unwrap_or_default();
            println!(
                "parity-preserving: FAIL ({} offending vectors, first {})",
                audit.offending_vectors.len(),
                first
            );
        }
        Err(e) => {
            all_ok = false;
            println!("parity-preserving: FAIL ({e})");
        }
    }

    Ok(all_ok)
}

fn run_truth(file: &Path, tsv: bool) -> Result<bool, CliError> {
    let circuit = load_circuit(file)?;
    let table = sim::exhaustive_table_tsv(&circuit).map_err(|e| data_err(e.to_string()))?;
    if tsv {
        print!("{table}");
    } else {
        // align the TSV columns for reading
        let rows: Vec<Vec<&str>> = table.lines().map(|l| l.split('\t').collect()).collect();
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, cell)| format!("{cell:>width$}", width = widths[i]))
                .collect();
            println!("{}", line.join("  "));
        }
    }
    Ok(true)
}

fn run_sim(file: &Path, input: &str) -> Result<bool, CliError> {
    let circuit = load_circuit(file)?;
    let inputs = bits::parse_bitstring_exact(input, circuit.primary_inputs().len())
        .map_err(|e| usage_err(format!("--in: {e}")))?;
    let trace = sim::evaluate(&circuit, &inputs).map_err(|e| data_err(e.to_string()))?;
    let named = |ids: &[revlogic::circuit::WireId], vals: &[bool]| -> String {
        ids.iter()
            .zip(vals)
            .map(|(&w, &v)| format!("{}={}", circuit.wire_name(w), v as u8))
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("inputs: {}", named(circuit.primary_inputs(), &trace.inputs));
    println!(
        "outputs: {}",
        named(circuit.primary_outputs(), &trace.outputs)
    );
    println!(
        "garbage: {}",
        named(circuit.garbage_outputs(), &trace.garbage)
    );
    println!("in_parity: {}", trace.input_parity(&circuit) as u8);
    println!("out_parity: {}", trace.output_parity() as u8);
    println!("wires:");
    let order = circuit
        .wires_in_topo_order()
        .map_err(|e| data_err(e.to_string()))?;
    for w in order {
        println!(
            "  {}={}",
            circuit.wire_name(w),
            trace.wire_values[w.index()] as u8
        );
    }
    Ok(true)
}

fn run_equiv(file: &Path, spec_path: &Path) -> Result<bool, CliError> {
    let circuit = load_circuit(file)?;
    let spec_text = read_file(spec_path)?;
    let spec = TruthSpec::parse(&spec_text)
        .map_err(|e| data_err(format!("{}:{e}", spec_path.display())))?;
    let binding: HashMap<String, String> = spec
        .outputs()
        .iter()
        .map(|(n, _)| (n.clone(), n.clone()))
        .collect();
    let outcome =
        sim::check_equivalence(&circuit, &spec, &binding).map_err(|e| data_err(e.to_string()))?;
    if outcome.equivalent {
        println!("equivalent: yes");
        Ok(true)
    } else {
        println!("equivalent: no");
        if let Some(cex) = outcome.counterexample {
            println!("counterexample: {}", bits::format_bits(&cex));
        }
        Ok(false)
    }
}

fn parse_models(spec: &str) -> Result<Vec<FaultModel>, CliError> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            FaultModel::from_name(s)
                .ok_or_else(|| usage_err(format!("--model: unknown fault model {s:?}")))
        })
        .collect()
}

fn run_faults(
    file: &Path,
    model: &str,
    vectors: &str,
    seed: Option<u64>,
    observer: &str,
    csv: bool,
) -> Result<bool, CliError> {
    let circuit = load_circuit(file)?;
    let models = parse_models(model)?;
    let observer = match observer {
        "all" => Observer::AllLines,
        "primary" => Observer::PrimaryOnly,
        other => {
            return Err(usage_err(format!(
                "--observer: expected all|primary, got {other:?}"
            )))
        }
    };
    let vectors = match vectors {
        "all" => VectorSet::All,
        sample if sample.starts_with("sample:") => {
            let count: usize = sample["sample:".len()..]
                .parse()
                .map_err(|_| usage_err("--vectors: expected all or sample:K".to_string()))?;
            let seed =
                seed.ok_or_else(|| usage_err("--vectors sample:K requires --seed".to_string()))?;
            VectorSet::Sample { count, seed }
        }
        other => {
            return Err(usage_err(format!(
                "--vectors: expected all or sample:K, got {other:?}"
            )))
        }
    };
    let campaign = fault::campaign(&circuit, &models, vectors, observer)
        .map_err(|e| data_err(e.to_string()))?;
    if csv {
        print!("{}", campaign.to_csv(&circuit));
        return Ok(true);
    }
    let s = &campaign.summary;
    let mut headline = format!(
        "circuit {}: {} wires, {} vectors, observer {}",
        circuit.name(),
        circuit.wire_count(),
        s.vector_count,
        s.observer.name()
    );
    if let Some(seed) = s.seed {
        headline.push_str(&format!(", seed {seed}"));
    }
    println!("{headline}");
    if s.bitflip_total > 0 {
        println!(
            "bitflip: detection {:.1}% ({}/{})",
            100.0 * s.bitflip_detection_rate().unwrap(),
            s.bitflip_detected,
            s.bitflip_total
        );
    }
    if s.stuckat_total > 0 {
        match s.stuckat_detection_rate() {
            Some(rate) => println!(
                "stuck-at: activated {}/{}, detected among activated {:.1}% ({}/{})",
                s.stuckat_activated,
                s.stuckat_total,
                100.0 * rate,
                s.stuckat_activated_detected,
                s.stuckat_activated
            ),
            None => println!("stuck-at: activated 0/{}", s.stuckat_total),
        }
    }
    println!(
        "undetected activated faults: {}",
        s.undetected_activated.len()
    );
    let n = circuit.primary_inputs().len();
    for (site, vector) in s.undetected_activated.iter().take(10) {
        println!(
            "  wire {} {} vector {}",
            circuit.wire_name(site.wire),
            site.model,
            bits::format_pattern(*vector, n)
        );
    }
    if s.undetected_activated.len() > 10 {
        println!("  ... {} more", s.undetected_activated.len() - 10);
    }
    Ok(true)
}

fn run_build(what: BuildCmd) -> Result<bool, CliError> {
    let (circuit, output) = match what {
        BuildCmd::Fa { output } => (builders::full_adder(), output),
        BuildCmd::Rca { bits, output } => (
            builders::ripple_carry_adder(bits as usize).map_err(|e| usage_err(e.to_string()))?,
            output,
        ),
        BuildCmd::Tg { output } => (builders::parity_preserving_toffoli(), output),
        BuildCmd::Fn { name, output } => {
            let f = LibraryFunction::from_name(&name).ok_or_else(|| {
                usage_err(format!(
                    "--name: unknown function {name:?} (expected NOT, COPY, AND, NAND, XOR or OR)"
                ))
            })?;
            (builders::function_circuit(f), output)
        }
    };
    let text = rnl::serialize(&circuit).map_err(|e| data_err(e.to_string()))?;
    emit(output.as_deref(), &text)?;
    Ok(true)
}

fn run_metrics(file: &Path, ascii: bool) -> Result<bool, CliError> {
    let circuit = load_circuit(file)?;
    let m = metrics::measure(&circuit).map_err(|e| data_err(e.to_string()))?;
    println!(
        "gates={} garbage={} constants={} delay={} T={}",
        m.gate_count,
        m.garbage_outputs,
        m.constant_inputs,
        m.unit_delay,
        m.total_cost.display(ascii)
    );
    Ok(true)
}

fn run_compare(what: CompareCmd) -> Result<bool, CliError> {
    let (kind, ascii, csv) = match what {
        CompareCmd::Fa { ascii, csv } => (TableKind::FullAdder, ascii, csv),
        CompareCmd::Rca { bits, ascii, csv } => (TableKind::RippleCarry(bits as usize), ascii, csv),
        CompareCmd::Tg { ascii, csv } => (TableKind::Toffoli, ascii, csv),
    };
    let rows = metrics::comparison_table(kind).map_err(|e| data_err(e.to_string()))?;
    if csv {
        print!("{}", metrics::table_csv(&rows, ascii));
    } else {
        print!("{}", metrics::render_table(&rows, ascii));
        if kind == TableKind::FullAdder {
            let spec = builders::full_adder_spec();
            println!(
                "fault-tolerant realization bounds: garbage >= {}, constants >= {} (met by the proposed circuit)",
                metrics::garbage_lower_bound(&spec),
                metrics::constant_input_lower_bound(&spec)
            );
        }
    }
    Ok(true)
}
