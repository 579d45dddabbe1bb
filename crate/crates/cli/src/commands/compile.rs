use std::path::PathBuf;

use macqc_core::compiler::search::MAX_SEARCH_DEPTH;
use macqc_core::compiler::{
    approximate_fixed_set, logical_unitary, lower_circuit, lower_cnot, Circuit, FixedGate, NativeProgram,
    SearchOutcome,
};
use macqc_core::sim::{program_logical_unitary, MAX_LOGICAL_QUBITS};
use serde::Serialize;

use super::gate_model;
use crate::error::CliError;
use crate::output::{num, verdict, Context};

/// Equivalence bound for exact lowering.
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Circuit file: one `GATE q [q]` per line, `#` comments.
    file: PathBuf,
    /// Lower CISWAP and ISWAP against the gate extracted from the scenario.
    #[arg(long)]
    calibrated: bool,
    /// Approximate single-qubit gates with the fixed-angle gate set.
    #[arg(long)]
    fixed_set: bool,
    #[arg(long, default_value_t = 1e-3, requires = "fixed_set")]
    epsilon: f64,
    #[arg(long, default_value_t = 12, requires = "fixed_set")]
    max_depth: usize,
}

#[derive(Debug, Serialize)]
struct WordReport {
    line: usize,
    gate: String,
    target: usize,
    word: Vec<String>,
    distance: f64,
    nodes_explored: usize,
}

#[derive(Debug, Serialize)]
struct NotFound {
    line: usize,
    gate: String,
    epsilon: f64,
    max_depth: usize,
    best_distance: f64,
    nodes_explored: usize,
    truncated: bool,
}

#[derive(Serialize)]
struct Report<'a> {
    scenario: &'a str,
    config_hash: &'a str,
    source: String,
    program: Option<&'a NativeProgram>,
    words: &'a [WordReport],
    not_found: Option<&'a NotFound>,
    equivalence_error: Option<f64>,
    tolerance: f64,
    passed: bool,
}

enum Lowered {
    Program(NativeProgram, Vec<WordReport>),
    Missing(NotFound, Vec<WordReport>),
}

fn lower_fixed(circuit: &Circuit, args: &Args, model: &macqc_core::compiler::GateModel) -> Result<Lowered, CliError> {
    let mut program = NativeProgram::new(circuit.qubit_count);
    let mut words = Vec::new();
    for g in &circuit.gates {
        if g.gate.arity() == 2 {
            program.extend(lower_cnot(g.targets[0], g.targets[1], circuit.qubit_count, model));
            continue;
        }
        match approximate_fixed_set(&g.gate.matrix(), args.epsilon, args.max_depth, g.targets[0], model)? {
            SearchOutcome::Found(m) => {
                words.push(WordReport {
                    line: g.line,
                    gate: g.gate.to_string(),
                    target: g.targets[0],
                    word: m.word.iter().map(FixedGate::to_string).collect(),
                    distance: m.distance,
                    nodes_explored: m.nodes_explored,
                });
                program.extend(m.program);
            }
            SearchOutcome::NotFound { epsilon, max_depth, best_distance, nodes_explored, truncated } => {
                let nf = NotFound {
                    line: g.line,
                    gate: g.gate.to_string(),
                    epsilon,
                    max_depth,
                    best_distance,
                    nodes_explored,
                    truncated,
                };
                return Ok(Lowered::Missing(nf, words));
            }
        }
    }
    program.qubit_count = circuit.qubit_count;
    Ok(Lowered::Program(program, words))
}

pub fn run(ctx: &Context, args: &Args) -> Result<bool, CliError> {
    if args.fixed_set && args.max_depth > MAX_SEARCH_DEPTH {
        return Err(CliError::Usage(format!("--max-depth is capped at {MAX_SEARCH_DEPTH}")));
    }
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::io(format!("cannot read {}", args.file.display()), e))?;
    let circuit = Circuit::parse(&text)?;
    if circuit.qubit_count > MAX_LOGICAL_QUBITS {
        return Err(CliError::Usage(format!(
            "circuit uses {} qubits; verification supports at most {MAX_LOGICAL_QUBITS}",
            circuit.qubit_count
        )));
    }
    let model = gate_model(&ctx.config, args.calibrated)?;
    let single_qubit_gates = circuit.gates.iter().filter(|g| g.gate.arity() == 1).count();
    // Each ε-close 2×2 factor moves the operator norm by at most 2ε.
    let tolerance = if args.fixed_set { EXACT_TOL + 2.0 * args.epsilon * single_qubit_gates as f64 } else { EXACT_TOL };

    let lowered = if args.fixed_set {
        lower_fixed(&circuit, args, &model)?
    } else {
        Lowered::Program(lower_circuit(&circuit, &model)?, Vec::new())
    };
    let source = args.file.display().to_string();

    let (program, words) = match lowered {
        Lowered::Missing(nf, words) => {
            if ctx.json {
                ctx.print_json(&Report {
                    scenario: &ctx.config.name,
                    config_hash: &ctx.hash,
                    source,
                    program: None,
                    words: &words,
                    not_found: Some(&nf),
                    equivalence_error: None,
                    tolerance,
                    passed: false,
                })?;
            } else {
                println!(
                    "NOT FOUND: {} on line {}: no fixed-set word within epsilon {} up to depth {} \
                     (best distance {}, {} nodes{})",
                    nf.gate,
                    nf.line,
                    num(nf.epsilon),
                    nf.max_depth,
                    num(nf.best_distance),
                    nf.nodes_explored,
                    if nf.truncated { ", node limit reached" } else { "" }
                );
            }
            return Ok(false);
        }
        Lowered::Program(p, w) => (p, w),
    };

    let achieved = program_logical_unitary(&program, &model)?;
    let error = achieved.max_diff(&logical_unitary(&circuit));
    let passed = error <= tolerance;

    if ctx.out.is_some() {
        ctx.artifact("program.json", &program.to_json()?)?;
        ctx.artifact("program.txt", &program.disassemble())?;
    }
    if ctx.json {
        ctx.print_json(&Report {
            scenario: &ctx.config.name,
            config_hash: &ctx.hash,
            source,
            program: Some(&program),
            words: &words,
            not_found: None,
            equivalence_error: Some(error),
            tolerance,
            passed,
        })?;
    } else {
        if ctx.out.is_none() {
            print!("{}", program.disassemble());
        }
        println!("# config_hash={}", ctx.hash);
        for w in &words {
            println!(
                "# line {}: {} {} -> [{}] distance {}",
                w.line,
                w.gate,
                w.target,
                w.word.join(", "),
                num(w.distance)
            );
        }
        println!("# ops={} equivalence_error={} tolerance={}", program.len(), num(error), num(tolerance));
        println!("{}", verdict(passed));
    }
    Ok(passed)
}
