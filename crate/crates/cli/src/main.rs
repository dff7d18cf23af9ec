use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qsim_core::bv::{solve_classical, solve_quantum, BvOracle, BvResult};
use qsim_core::circuit::rewrite::{bv_simplify, RewriteRule, Rewriter, TraceEntry};
use qsim_core::circuit::{
    builtin_identity, compare_unitaries, parse, render_ascii, serialize, simulate, simulate_with_oracle, Circuit,
    CircuitOp, GateName, BUILTIN_IDENTITIES, EQUIVALENCE_TOLERANCE,
};
use qsim_core::gates::{self, Gate};
use qsim_core::measurement::MeasurementRecord;
use qsim_core::state::{bitstring, parse_bitstring};
use qsim_core::{GateMatrix, RandomSource, StateVector};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "qsim", version, about = "State-vector simulator, circuit rewriter and Bernstein-Vazirani demo")]
struct Cli {
    /// Seed for every random draw; echoed in the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Quantum,
    Classical,
    Rewrite,
}

#[derive(Subcommand)]
enum Command {
    /// Recover a hidden bitstring `a` from its oracle.
    Bv {
        #[arg(long)]
        n: usize,
        /// Hidden string, most significant bit first.
        #[arg(long)]
        a: String,
        #[arg(long, value_enum, default_value = "quantum")]
        mode: Mode,
    },
    /// Run a circuit file and print the final state and measurement records.
    Simulate {
        file: PathBuf,
        /// Initial basis state as a bitstring of the circuit width (default all zeros).
        #[arg(long)]
        init: Option<String>,
        /// Hidden string for oracle markers that do not carry one.
        #[arg(long)]
        a: Option<String>,
    },
    /// Apply one rewrite rule, or the full BV simplification when no rule is given.
    Rewrite {
        file: PathBuf,
        #[arg(long, requires = "at")]
        rule: Option<String>,
        #[arg(long)]
        at: Option<usize>,
        /// Qubit for rules that need one (hh_insert).
        #[arg(long)]
        qubit: Option<usize>,
        /// Write the rewritten circuit here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check two circuits for equivalence up to global phase.
    Verify {
        /// A built-in identity name, or two circuit files.
        #[arg(required = true, num_args = 1..=2)]
        targets: Vec<String>,
        #[arg(long, default_value_t = EQUIVALENCE_TOLERANCE)]
        tol: f64,
    },
    /// Print the matrices of the built-in gates.
    DumpGates,
}

enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Bv { n, a, mode } => cmd_bv(cli, *n, a, *mode),
        Command::Simulate { file, init, a } => cmd_simulate(cli, file, init.as_deref(), a.as_deref()),
        Command::Rewrite {
            file,
            rule,
            at,
            qubit,
            output,
        } => cmd_rewrite(cli, file, rule.as_deref(), *at, *qubit, output.as_deref()),
        Command::Verify { targets, tol } => cmd_verify(cli, targets, *tol),
        Command::DumpGates => cmd_dump_gates(cli),
    }
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_bits(n: usize, a: &str) -> Result<u64> {
    if a.len() != n {
        bail!("bitstring {a:?} has {} bits, expected {n}", a.len());
    }
    Ok(parse_bitstring(a)?)
}

fn cmd_bv(cli: &Cli, n: usize, a: &str, mode: Mode) -> Result<Status> {
    let hidden = parse_bits(n, a)?;
    let mut oracle = BvOracle::new(n, hidden)?;
    let result: BvResult = match mode {
        Mode::Quantum => solve_quantum(&mut oracle, &mut RandomSource::new(cli.seed))?,
        Mode::Classical => solve_classical(&mut oracle)?,
        Mode::Rewrite => return bv_rewrite(cli, n, hidden),
    };
    let found = bitstring(result.a_found, n);
    if cli.json {
        println!(
            "{}",
            json!({
                "a_found": found,
                "queries": result.queries_used,
                "amplitude": result.final_amplitude,
                "seed": cli.seed,
            })
        );
    } else {
        print!("a_found={found} queries={}", result.queries_used);
        if let Some(amp) = result.final_amplitude {
            print!(" amplitude={amp:.15}");
        }
        println!(" seed={}", cli.seed);
    }
    Ok(Status::Ok)
}

fn bv_rewrite(cli: &Cli, n: usize, a: u64) -> Result<Status> {
    let original = qsim_core::bv::bv_circuit(n, Some(a))?;
    let (simplified, trace) = bv_simplify(&original)?;
    let cert = compare_unitaries(&original.unitary_part(), &simplified.unitary_part(), EQUIVALENCE_TOLERANCE)?;
    let conjugations = trace.iter().filter(|e| e.rule == RewriteRule::ConjugateCnot).count();
    if cli.json {
        println!(
            "{}",
            json!({
                "trace": trace_values(&trace),
                "circuit": circuit_value(&simplified)?,
                "conjugate_cnot": conjugations,
                "equivalent": cert.equivalent(),
                "max_deviation": cert.max_deviation,
                "seed": cli.seed,
            })
        );
    } else {
        println!("seed={}", cli.seed);
        println!("before:\n{}", render_ascii(&original));
        println!("trace:");
        for e in &trace {
            println!("{}", e.to_json_line());
        }
        println!("\nafter:\n{}", render_ascii(&simplified));
        println!("conjugate_cnot applications: {conjugations}");
        println!("equivalent={} max_deviation={:e}", cert.equivalent(), cert.max_deviation);
    }
    Ok(if cert.equivalent() { Status::Ok } else { Status::Failed })
}

fn trace_values(trace: &[TraceEntry]) -> Vec<Value> {
    trace
        .iter()
        .map(|e| serde_json::from_str(&e.to_json_line()).expect("trace line is JSON"))
        .collect()
}

fn circuit_value(c: &Circuit) -> Result<Value> {
    Ok(serde_json::from_str(&serialize(c))?)
}

fn record_value(r: &MeasurementRecord) -> Value {
    json!({ "outcome": r.outcome_bits(), "probability": r.probability })
}

fn cmd_simulate(cli: &Cli, file: &Path, init: Option<&str>, a: Option<&str>) -> Result<Status> {
    let circuit = read_circuit(file)?;
    let width = circuit.width();
    let start = match init {
        Some(bits) => parse_bits(width, bits).context("--init")?,
        None => 0,
    };
    let initial = StateVector::basis_state(start, width)?;
    let mut rng = RandomSource::new(cli.seed);
    let (state, records) = match a {
        Some(bits) => {
            let n = circuit
                .ops()
                .iter()
                .find_map(|op| match op {
                    CircuitOp::Oracle(m) if m.hidden.is_none() => Some(m.input_width()),
                    _ => None,
                })
                .unwrap_or(bits.len());
            let mut oracle = BvOracle::new(n, parse_bits(n, bits).context("--a")?)?;
            simulate_with_oracle(&circuit, &initial, &mut rng, &mut oracle)?
        }
        None => simulate(&circuit, &initial, &mut rng)?,
    };
    if cli.json {
        let amps: Vec<[f64; 2]> = state.amplitudes().iter().map(|z| [z.re, z.im]).collect();
        println!(
            "{}",
            json!({
                "seed": cli.seed,
                "width": width,
                "amplitudes": amps,
                "records": records.iter().map(record_value).collect::<Vec<_>>(),
            })
        );
    } else {
        println!("seed={}", cli.seed);
        for r in &records {
            println!("{r}");
        }
        print!("{}", state.dump());
    }
    Ok(Status::Ok)
}

fn cmd_rewrite(
    cli: &Cli,
    file: &Path,
    rule: Option<&str>,
    at: Option<usize>,
    qubit: Option<usize>,
    output: Option<&Path>,
) -> Result<Status> {
    let circuit = read_circuit(file)?;
    let (result, trace) = match rule {
        Some(name) => {
            let rule = RewriteRule::from_name(name, qubit).with_context(|| {
                let names: Vec<&str> = RewriteRule::ALL.iter().map(|r| r.name()).collect();
                format!("unknown rule {name:?}; known rules: {}", names.join(", "))
            })?;
            let mut rw = Rewriter::new(circuit);
            rw.apply(rule, at.expect("clap enforces --at"))?;
            rw.finish()
        }
        None => bv_simplify(&circuit)?,
    };
    if let Some(path) = output {
        fs::write(path, serialize(&result)).with_context(|| format!("writing {}", path.display()))?;
    }
    if cli.json {
        let mut out = json!({ "trace": trace_values(&trace), "seed": cli.seed });
        if output.is_none() {
            out["circuit"] = circuit_value(&result)?;
        }
        println!("{out}");
    } else {
        for e in &trace {
            println!("{}", e.to_json_line());
        }
        if output.is_none() {
            print!("{}", serialize(&result));
        }
    }
    Ok(Status::Ok)
}

fn cmd_verify(cli: &Cli, targets: &[String], tol: f64) -> Result<Status> {
    let (name, lhs, rhs) = match targets {
        [name] => {
            let (l, r) = builtin_identity(name).with_context(|| {
                format!("unknown identity {name:?}; built-ins: {}", BUILTIN_IDENTITIES.join(", "))
            })?;
            (name.clone(), l, r)
        }
        [f1, f2] => (format!("{f1} vs {f2}"), read_circuit(Path::new(f1))?, read_circuit(Path::new(f2))?),
        _ => unreachable!("clap enforces one or two targets"),
    };
    let cert = compare_unitaries(&lhs, &rhs, tol)?;
    let verdict = if cert.equivalent() { "pass" } else { "fail" };
    if cli.json {
        println!(
            "{}",
            json!({
                "identity": name,
                "equivalent": cert.equivalent(),
                "max_deviation": cert.max_deviation,
                "tolerance": tol,
            })
        );
    } else {
        println!("{name}: {verdict} max_deviation={:e} tolerance={tol:e}", cert.max_deviation);
    }
    Ok(if cert.equivalent() { Status::Ok } else { Status::Failed })
}

fn named_gates() -> Result<Vec<(GateName, GateMatrix)>> {
    Ok(vec![
        (GateName::X, gates::pauli_x()),
        (GateName::Z, gates::pauli_z()),
        (GateName::Y, gates::y_real()),
        (GateName::YH, gates::y_hermitian()),
        (GateName::H, gates::hadamard()),
        (GateName::I, GateMatrix::identity(2)),
        (GateName::Cnot, gates::matrix_of(&gates::cnot(0, 1)?, 2)?),
        (GateName::Cz, gates::matrix_of(&gates::cz(0, 1)?, 2)?),
        (GateName::Swap, gates::matrix_of(&Gate::swap(0, 1)?, 2)?),
    ])
}

fn cmd_dump_gates(cli: &Cli) -> Result<Status> {
    let all = named_gates()?;
    if cli.json {
        let map: serde_json::Map<String, Value> = all
            .iter()
            .map(|(name, m)| {
                let rows: Vec<Vec<[f64; 2]>> = m.rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
                (name.as_str().to_string(), json!(rows))
            })
            .collect();
        println!("{}", Value::Object(map));
        return Ok(Status::Ok);
    }
    for (name, m) in &all {
        let note = match name {
            GateName::Cnot => " (control q0, target q1)",
            GateName::Cz | GateName::Swap => " (q0, q1)",
            _ => "",
        };
        println!("{}{note}:", name.as_str());
        for row in m.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:>6.3}{:+.3}i", z.re, z.im)).collect();
            println!("  [{}]", cells.join("  "));
        }
    }
    Ok(Status::Ok)
}
